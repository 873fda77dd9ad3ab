//! Bodies, pole-cap curvature and the conditions that certify a unique
//! diameter near the poles.
//!
//! Coordinates follow the usual convention: the diameter lies on the first
//! axis between the poles `(-a, 0, ..., 0)` and `(a, 0, ..., 0)`, and the
//! remaining `d - 1` coordinates are the tangential ones.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Max abs asymmetry tolerated in a user supplied Hessian.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// `lambda_min >= -PSD_TOL` counts as positive semi-definite.
pub const PSD_TOL: f64 = 1e-8;
/// Bisection on eta stops once the bracket is this narrow.
pub const ETA_BISECTION_WIDTH: f64 = 1e-6;
/// Slack used by the membership predicates of the sampled bodies.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

/// The support `E` of the sampling distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Ellipsoid {
        half_axes: Vec<f64>,
    },
    PSuperellipsoid {
        p: f64,
        half_axes: Vec<f64>,
    },
    /// Raw curvature data at the two poles. Global validity of the cap
    /// description is the caller's responsibility.
    PoleCaps {
        a: f64,
        h_left: Vec<Vec<f64>>,
        h_right: Vec<Vec<f64>>,
    },
}

impl BodySpec {
    pub fn ellipsoid(half_axes: &[f64]) -> Self {
        BodySpec::Ellipsoid {
            half_axes: half_axes.to_vec(),
        }
    }

    pub fn superellipsoid(p: f64, half_axes: &[f64]) -> Self {
        BodySpec::PSuperellipsoid {
            p,
            half_axes: half_axes.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Ellipsoid { half_axes } | BodySpec::PSuperellipsoid { half_axes, .. } => {
                half_axes.len()
            }
            BodySpec::PoleCaps { h_left, .. } => h_left.len() + 1,
        }
    }

    pub fn half_axes(&self) -> Option<&[f64]> {
        match self {
            BodySpec::Ellipsoid { half_axes } | BodySpec::PSuperellipsoid { half_axes, .. } => {
                Some(half_axes)
            }
            BodySpec::PoleCaps { .. } => None,
        }
    }

    /// Half of the diameter, `a` (equal to `a1` for the axis-aligned bodies).
    pub fn half_diameter(&self) -> f64 {
        match self {
            BodySpec::Ellipsoid { half_axes } | BodySpec::PSuperellipsoid { half_axes, .. } => {
                half_axes[0]
            }
            BodySpec::PoleCaps { a, .. } => *a,
        }
    }

    /// Structural checks. `require_unique` additionally demands `a1 > a2`.
    pub fn validate(&self, require_unique: bool) -> Result<()> {
        match self {
            BodySpec::Ellipsoid { half_axes } => validate_axes(half_axes, require_unique),
            BodySpec::PSuperellipsoid { p, half_axes } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::invalid("p", format!("must be a finite real >= 1, got {p}")));
                }
                validate_axes(half_axes, require_unique)
            }
            BodySpec::PoleCaps { a, h_left, h_right } => {
                if !(a.is_finite() && *a > 0.0) {
                    return Err(Error::invalid("a", format!("must be positive, got {a}")));
                }
                let hl = matrix_from_rows(h_left)?;
                let hr = matrix_from_rows(h_right)?;
                if hl.nrows() != hr.nrows() {
                    return Err(Error::DimensionMismatch(format!(
                        "left Hessian is {0}x{0}, right Hessian is {1}x{1}",
                        hl.nrows(),
                        hr.nrows()
                    )));
                }
                if hl.nrows() == 0 {
                    return Err(Error::DimensionMismatch("dimension d must be >= 2".into()));
                }
                check_symmetric(&hl)?;
                check_symmetric(&hr)
            }
        }
    }

    /// Membership predicate for the sampled bodies (with a `1e-12` slack).
    /// Pole-cap bodies have no global shape and always answer `false`.
    pub fn contains(&self, z: &[f64]) -> bool {
        match self {
            BodySpec::Ellipsoid { half_axes } => {
                let q: f64 = z.iter().zip(half_axes).map(|(x, a)| (x / a) * (x / a)).sum();
                q <= 1.0 + MEMBERSHIP_SLACK
            }
            BodySpec::PSuperellipsoid { p, half_axes } => {
                let q: f64 = z.iter().zip(half_axes).map(|(x, a)| (x.abs() / a).powf(*p)).sum();
                q <= 1.0 + MEMBERSHIP_SLACK
            }
            BodySpec::PoleCaps { .. } => false,
        }
    }

    /// Hessians at the (left, right) poles.
    pub fn hessians(&self) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        match self {
            BodySpec::Ellipsoid { half_axes } => {
                let h = ellipsoid_hessian(half_axes)?;
                Ok((h.clone(), h))
            }
            BodySpec::PSuperellipsoid { p, half_axes } => {
                if *p != 2.0 {
                    return Err(Error::invalid(
                        "p",
                        "the pole caps of a p-superellipsoid with p != 2 have no osculating \
                         quadratic paraboloid; use the p-norm limit set instead",
                    ));
                }
                let h = ellipsoid_hessian(half_axes)?;
                Ok((h.clone(), h))
            }
            BodySpec::PoleCaps { h_left, h_right, .. } => {
                self.validate(false)?;
                Ok((matrix_from_rows(h_left)?, matrix_from_rows(h_right)?))
            }
        }
    }

    /// Eigendecomposed curvature at both poles. Lemma-1 violations are
    /// flagged on the returned geometries rather than raised.
    pub fn pole_caps(&self) -> Result<(PoleCapGeometry, PoleCapGeometry)> {
        let (hl, hr) = self.hessians()?;
        let a = self.half_diameter();
        Ok((
            PoleCapGeometry::from_hessian(a, &hl)?,
            PoleCapGeometry::from_hessian(a, &hr)?,
        ))
    }
}

fn validate_axes(half_axes: &[f64], require_unique: bool) -> Result<()> {
    if half_axes.len() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "dimension d must be >= 2, got {}",
            half_axes.len()
        )));
    }
    if half_axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::invalid("half_axes", "all half-axes must be positive and finite"));
    }
    if half_axes.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::invalid("half_axes", "half-axes must be sorted in descending order"));
    }
    if require_unique && half_axes[0] <= half_axes[1] {
        return Err(Error::NonUniqueAxis {
            a1: half_axes[0],
            a2: half_axes[1],
        });
    }
    Ok(())
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("Hessian must be square".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let asymmetry = (m - m.transpose()).amax();
    if asymmetry > SYMMETRY_TOL || !asymmetry.is_finite() {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

/// Hessian of the boundary graph at either pole of an ellipsoid:
/// `diag(a1/a2^2, ..., a1/ad^2)`.
pub fn ellipsoid_hessian(half_axes: &[f64]) -> Result<DMatrix<f64>> {
    validate_axes(half_axes, true)?;
    let a1 = half_axes[0];
    let diag: Vec<f64> = half_axes[1..].iter().map(|aj| a1 / (aj * aj)).collect();
    Ok(DMatrix::from_diagonal(&DVector::from_vec(diag)))
}

/// Principal curvatures and directions at one pole.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleCapGeometry {
    a: f64,
    kappa: Vec<f64>,
    basis: DMatrix<f64>,
}

impl PoleCapGeometry {
    /// Eigendecomposes `h`. Only a non-positive eigenvalue is an error here;
    /// whether the smallest curvature exceeds `1/(2a)` is reported by
    /// [`PoleCapGeometry::lemma1_ok`].
    pub fn from_hessian(a: f64, h: &DMatrix<f64>) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid("a", format!("must be positive, got {a}")));
        }
        if h.nrows() == 0 || h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch("Hessian must be a non-empty square matrix".into()));
        }
        check_symmetric(h)?;
        let sym = (h + h.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let m = h.nrows();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let kappa: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        if kappa[0] <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: kappa[0],
            });
        }
        let mut basis = DMatrix::zeros(m, m);
        for (col, &i) in order.iter().enumerate() {
            let mut v = eig.eigenvectors.column(i).into_owned();
            // sign convention: first non-negligible component positive
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v = -v;
                }
            }
            basis.set_column(col, &v);
        }
        Ok(PoleCapGeometry { a, kappa, basis })
    }

    pub fn from_diagonal(a: f64, kappa: &[f64]) -> Result<Self> {
        let h = DMatrix::from_diagonal(&DVector::from_column_slice(kappa));
        Self::from_hessian(a, &h)
    }

    pub fn half_diameter(&self) -> f64 {
        self.a
    }

    /// Principal curvatures, ascending.
    pub fn curvatures(&self) -> &[f64] {
        &self.kappa
    }

    pub fn min_curvature(&self) -> f64 {
        self.kappa[0]
    }

    /// Orthogonal matrix `U` whose columns are the principal directions.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn diagonal(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(&self.kappa))
    }

    /// Tangential dimension `d - 1`.
    pub fn tangent_dim(&self) -> usize {
        self.kappa.len()
    }

    pub fn dim(&self) -> usize {
        self.kappa.len() + 1
    }

    /// `U D U^T`.
    pub fn hessian(&self) -> DMatrix<f64> {
        &self.basis * self.diagonal() * self.basis.transpose()
    }

    pub fn lemma1_ok(&self) -> bool {
        self.kappa[0] > 1.0 / (2.0 * self.a)
    }

    /// `z^T H z` for a tangential vector, evaluated through the eigenbasis.
    pub fn quadratic_form(&self, tangential: &[f64]) -> f64 {
        let m = self.kappa.len();
        let mut acc = 0.0;
        for j in 0..m {
            let proj: f64 = (0..m).map(|i| self.basis[(i, j)] * tangential[i]).sum();
            acc += self.kappa[j] * proj * proj;
        }
        acc
    }

    /// Maps principal coordinates `y` (w.r.t. the eigenbasis) to the
    /// standard tangential frame, `U y`.
    pub fn from_principal(&self, principal: &[f64], out: &mut [f64]) {
        let m = self.kappa.len();
        for (i, o) in out.iter_mut().enumerate().take(m) {
            *o = (0..m).map(|j| self.basis[(i, j)] * principal[j]).sum();
        }
    }

    pub fn determinant(&self) -> f64 {
        self.kappa.iter().product()
    }
}

/// Eigendecomposition that rejects caps violating the curvature bound
/// `kappa_2 > 1/(2a)`.
pub fn eigendecompose_polecap(a: f64, h: &DMatrix<f64>) -> Result<PoleCapGeometry> {
    let geom = PoleCapGeometry::from_hessian(a, h)?;
    if !geom.lemma1_ok() {
        return Err(Error::Lemma1Violated {
            kappa: geom.min_curvature(),
            bound: 1.0 / (2.0 * a),
        });
    }
    Ok(geom)
}

/// The block matrix
/// `[[2 a eta D_l - I, U_l^T U_r], [U_r^T U_l, 2 a eta D_r - I]]`.
pub fn build_a(eta: f64, left: &PoleCapGeometry, right: &PoleCapGeometry) -> Result<DMatrix<f64>> {
    if left.a != right.a {
        return Err(Error::DimensionMismatch(format!(
            "poles disagree on the half-diameter ({} vs {})",
            left.a, right.a
        )));
    }
    let m = left.tangent_dim();
    if right.tangent_dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "pole caps have tangent dimensions {} and {}",
            m,
            right.tangent_dim()
        )));
    }
    let a = left.a;
    let cross = left.basis.transpose() * &right.basis;
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        out[(j, j)] = 2.0 * a * eta * left.kappa[j] - 1.0;
        out[(m + j, m + j)] = 2.0 * a * eta * right.kappa[j] - 1.0;
    }
    for i in 0..m {
        for j in 0..m {
            out[(i, m + j)] = cross[(i, j)];
            out[(m + j, i)] = cross[(i, j)];
        }
    }
    Ok(out)
}

/// Smallest eigenvalue of a symmetric matrix together with its eigenvector.
pub fn min_eigenpair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(idx).into_owned())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub lemma1_left: bool,
    pub lemma1_right: bool,
    pub sufficient_ok: bool,
    pub lambda_min_a1: f64,
    pub eta_star: Option<f64>,
    pub verdict: Verdict,
    /// For `FAIL`: a vector with `z^T A(1) z < 0`.
    pub witness: Option<Vec<f64>>,
}

/// Decides whether `A(eta)` is PSD for some `eta < 1`.
///
/// `A(1)` not PSD means no unique diameter is possible (FAIL, with an
/// eigenvector witness). Otherwise the smallest `eta` with `A(eta) >= 0` is
/// bracketed by bisection, relying on `lambda_min(A(eta))` being
/// nondecreasing. If no `eta < 1 - tol` works the case is reported as
/// INDETERMINATE.
pub fn check_condition3(
    left: &PoleCapGeometry,
    right: &PoleCapGeometry,
    tol: f64,
) -> Result<ConditionReport> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    let a1 = build_a(1.0, left, right)?;
    let (lambda_min_a1, vec) = min_eigenpair(&a1);
    let mut report = ConditionReport {
        lemma1_left: left.lemma1_ok(),
        lemma1_right: right.lemma1_ok(),
        sufficient_ok: check_sufficient(left, right),
        lambda_min_a1,
        eta_star: None,
        verdict: Verdict::Fail,
        witness: None,
    };
    if lambda_min_a1 < -tol {
        report.witness = Some(vec.iter().copied().collect());
        return Ok(report);
    }

    // A(0) = [[-I, C], [C^T, -I]] is never PSD, so 0 is a valid lower end.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > ETA_BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let (lam, _) = min_eigenpair(&build_a(mid, left, right)?);
        if lam >= -tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    report.eta_star = Some(hi);
    report.verdict = if hi < 1.0 - tol {
        Verdict::Pass
    } else {
        Verdict::Indeterminate
    };
    Ok(report)
}

/// `1/kappa_2^l + 1/kappa_2^r < 2a`, which implies the pole condition.
pub fn check_sufficient(left: &PoleCapGeometry, right: &PoleCapGeometry) -> bool {
    1.0 / left.min_curvature() + 1.0 / right.min_curvature() < 2.0 * left.a
}

/// Membership in the osculating paraboloid `{ z : z~^T H z~ / 2 <= z_1 }`.
pub fn in_limit_set(z: &[f64], geom: &PoleCapGeometry) -> bool {
    0.5 * geom.quadratic_form(&z[1..]) <= z[0]
}

/// Membership in `{ z : sum_{k>=2} (|z_k|/a_k)^p <= p z_1 / a_1 }`.
pub fn in_limit_set_p(z: &[f64], p: f64, half_axes: &[f64]) -> bool {
    let lhs: f64 = z[1..]
        .iter()
        .zip(&half_axes[1..])
        .map(|(x, a)| (x.abs() / a).powf(p))
        .sum();
    lhs <= p * z[0] / half_axes[0]
}

/// Upper bound on `|x - y|` for two points of an ellipsoid with `e` unit
/// major half-axes, in terms of their projections onto the major subspace.
pub fn g_bound(x_proj: &[f64], y_proj: &[f64], a_next: f64) -> f64 {
    let nx = norm2(x_proj);
    let ny = norm2(y_proj);
    ((nx + ny).powi(2) + 2.0 * a_next * a_next * (2.0 - nx * nx - ny * ny)).sqrt()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: f64, k: &[f64]) -> PoleCapGeometry {
        PoleCapGeometry::from_diagonal(a, k).unwrap()
    }

    #[test]
    fn ellipsoid_hessian_values() {
        let h = ellipsoid_hessian(&[1.0, 0.5]).unwrap();
        assert_eq!(h[(0, 0)], 4.0);
        let h = ellipsoid_hessian(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(h, DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0])));
        assert!(matches!(
            ellipsoid_hessian(&[1.0, 1.0]),
            Err(Error::NonUniqueAxis { .. })
        ));
    }

    #[test]
    fn eigendecompose_examples() {
        let g = eigendecompose_polecap(1.0, &DMatrix::from_element(1, 1, 4.0)).unwrap();
        assert_eq!(g.curvatures(), &[4.0]);
        assert_eq!(g.basis()[(0, 0)], 1.0);

        let g = eigendecompose_polecap(1.0, &DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]))
            .unwrap();
        assert_eq!(g.curvatures(), &[2.0, 3.0]);
        assert!((g.basis() - DMatrix::identity(2, 2)).amax() < 1e-12);

        // characteristic polynomial (2-l)^2 - 1 = 0 -> l in {1, 3}
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let g = eigendecompose_polecap(1.0, &h).unwrap();
        assert!((g.curvatures()[0] - 1.0).abs() < 1e-12);
        assert!((g.curvatures()[1] - 3.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(2, 2, &[s, s, -s, s]);
        assert!((g.basis() - expected).amax() < 1e-12);
        assert!((g.hessian() - h).amax() < 1e-9);
        let u = g.basis();
        assert!((u * u.transpose() - DMatrix::identity(2, 2)).amax() < 1e-9);
    }

    #[test]
    fn eigendecompose_errors() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            eigendecompose_polecap(1.0, &h),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let h = DMatrix::from_element(1, 1, 0.5);
        assert!(matches!(
            eigendecompose_polecap(1.0, &h),
            Err(Error::Lemma1Violated { .. })
        ));
        let h = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0 + 1e-6, 2.0]);
        assert!(matches!(
            eigendecompose_polecap(1.0, &h),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn build_a_examples() {
        let g = diag(1.0, &[4.0]);
        let a = build_a(0.25, &g, &g).unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        let a = build_a(1.0, &g, &g).unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[7.0, 1.0, 1.0, 7.0]));
        let other = diag(2.0, &[4.0]);
        assert!(build_a(1.0, &g, &other).is_err());
    }

    #[test]
    fn condition3_ellipse_passes() {
        let (l, r) = BodySpec::ellipsoid(&[1.0, 0.5]).pole_caps().unwrap();
        let rep = check_condition3(&l, &r, PSD_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.sufficient_ok);
        assert!((rep.eta_star.unwrap() - 0.25).abs() < 1e-4);
    }

    #[test]
    fn condition3_lemma1_boundary_fails() {
        let g = diag(1.0, &[0.5]);
        let rep = check_condition3(&g, &g, PSD_TOL).unwrap();
        assert!(!rep.lemma1_left && !rep.lemma1_right);
        assert_eq!(rep.verdict, Verdict::Fail);
        let z = DVector::from_vec(rep.witness.unwrap());
        let a1 = build_a(1.0, &g, &g).unwrap();
        assert!((z.transpose() * a1 * &z)[(0, 0)] < 0.0);
    }

    #[test]
    fn condition3_indeterminate_case() {
        let g = diag(1.0, &[1.0]);
        let rep = check_condition3(&g, &g, PSD_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::Indeterminate);
        assert!(rep.lambda_min_a1.abs() < 1e-12);
        assert!(!rep.sufficient_ok);
    }

    #[test]
    fn sufficient_criterion() {
        let (l, r) = BodySpec::ellipsoid(&[1.0, 0.5]).pole_caps().unwrap();
        assert!(check_sufficient(&l, &r));
        assert!(!check_sufficient(&diag(1.0, &[1.0]), &diag(1.0, &[1.0])));
        assert!(check_sufficient(&diag(1.0, &[10.0]), &diag(1.0, &[10.0])));
    }

    #[test]
    fn limit_set_membership() {
        let g = diag(1.0, &[4.0]);
        assert!(in_limit_set(&[0.0, 0.0], &g));
        assert!(in_limit_set(&[2.0, 1.0], &g));
        assert!(!in_limit_set(&[1.9, 1.0], &g));
        assert!(in_limit_set_p(&[2.0, 1.0], 2.0, &[1.0, 0.5]));
        assert!(in_limit_set_p(&[0.0, 0.0], 3.0, &[1.0, 0.5]));
    }

    #[test]
    fn g_bound_examples() {
        assert_eq!(g_bound(&[-1.0, 0.0], &[1.0, 0.0], 0.5), 2.0);
        assert_eq!(g_bound(&[0.0, 0.0], &[0.0, 0.0], 0.5), 1.0);
    }

    #[test]
    fn validate_rejects_bad_bodies() {
        assert!(BodySpec::ellipsoid(&[1.0]).validate(false).is_err());
        assert!(BodySpec::ellipsoid(&[0.5, 1.0]).validate(false).is_err());
        assert!(BodySpec::ellipsoid(&[1.0, 1.0, 0.5]).validate(false).is_ok());
        assert!(BodySpec::superellipsoid(0.5, &[1.0, 0.5]).validate(true).is_err());
        let caps = BodySpec::PoleCaps {
            a: 1.0,
            h_left: vec![vec![1.0, 0.2], vec![0.3, 1.0]],
            h_right: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        assert!(matches!(caps.validate(false), Err(Error::NotSymmetric { .. })));
    }
}
