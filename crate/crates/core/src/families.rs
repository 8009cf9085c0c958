//! Parametric state families with known partial-transpose structure, and the
//! extremal states that pin the endpoints of the PT eigenvalue range.

use crate::linalg::cubic::CubicCoeffs;
use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, PtSpectrum, PureState};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("local dimension {n} too small (minimum {min})")]
    BadDimension { n: usize, min: usize },
    #[error("weights shape {got_rows}x{got_cols} does not match required {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("epsilon {epsilon} outside [0, {limit}]")]
    BadEpsilon { epsilon: f64, limit: f64 },
    #[error("non-finite parameter")]
    NonFiniteParameter,
}

/// n (x) n family built from |01> - a|10>, |02> - a|20>, and the uniform
/// diagonal sum_i |ii>. Kept unnormalized: trace n + 2 + 2a^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoAParams {
    pub n: usize,
    pub a: f64,
}

/// The three-vector 3 (x) 3 family: |00> + a1|11> + a2|22>,
/// |01> + b1|12> + b2|20>, |02> + c1|10> + c2|21>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeQutritParams {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ThreeQutritParams {
    pub fn real(a1: f64, a2: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self {
            a1: c(a1),
            a2: c(a2),
            b1: c(b1),
            b2: c(b2),
            c1: c(c1),
            c2: c(c2),
        }
    }

    fn rows(&self) -> Vec<Vec<Complex64>> {
        vec![
            vec![self.a1, self.a2],
            vec![self.b1, self.b2],
            vec![self.c1, self.c2],
        ]
    }
}

/// n (x) n generalization of the three-vector family: vector k is
/// |0,k> + sum_{i=1}^{n-1} weights[k][i-1] |i, (i+k) mod n>, so each vector
/// runs down a cyclic diagonal with leading coefficient fixed to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicFamilyParams {
    pub n: usize,
    pub weights: Vec<Vec<Complex64>>,
}

/// Parameters of the extremal witnesses: symmetric local dimension m and
/// mixing weight epsilon. Each builder validates its own epsilon range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalParams {
    pub m: usize,
    pub epsilon: f64,
}

pub fn build_rho_a(p: &RhoAParams) -> Result<DensityMatrix, FamilyError> {
    if p.n < 3 {
        return Err(FamilyError::BadDimension { n: p.n, min: 3 });
    }
    if !p.a.is_finite() {
        return Err(FamilyError::NonFiniteParameter);
    }
    let n = p.n;
    let dims = BipartiteDims::new(n, n).expect("n >= 3");
    let d = n * n;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut v1 = vec![zero; d];
    v1[dims.joint(0, 1)] = one;
    v1[dims.joint(1, 0)] = Complex64::new(-p.a, 0.0);
    let mut v2 = vec![zero; d];
    v2[dims.joint(0, 2)] = one;
    v2[dims.joint(2, 0)] = Complex64::new(-p.a, 0.0);
    let mut v3 = vec![zero; d];
    for i in 0..n {
        v3[dims.joint(i, i)] = one;
    }

    let mut mat = ComplexMatrix::zeros(d);
    for v in [&v1, &v2, &v3] {
        mat.add_scaled_outer(v, 1.0);
    }
    Ok(DensityMatrix::new_unchecked(mat, dims))
}

/// The PT spectrum of the unnormalized family matrix, from the closed forms:
/// -1 with multiplicity n(n-1)/2 - 2, +1 with multiplicity n(n+1)/2 - 4,
/// 1 +- sqrt(2) a once each, and (1 + a^2 +- sqrt(5 - 2a^2 + a^4))/2 twice
/// each.
pub fn rho_a_spectrum_closed_form(p: &RhoAParams) -> Result<PtSpectrum, FamilyError> {
    if p.n < 3 {
        return Err(FamilyError::BadDimension { n: p.n, min: 3 });
    }
    if !p.a.is_finite() {
        return Err(FamilyError::NonFiniteParameter);
    }
    let (n, a) = (p.n, p.a);
    let mut vals = Vec::with_capacity(n * n);
    vals.resize(n * (n - 1) / 2 - 2, -1.0);
    vals.resize(vals.len() + (n * (n + 1) / 2 - 4), 1.0);
    vals.push(1.0 + std::f64::consts::SQRT_2 * a);
    vals.push(1.0 - std::f64::consts::SQRT_2 * a);
    let s = (5.0 - 2.0 * a * a + a.powi(4)).sqrt();
    for sign in [1.0, -1.0] {
        let v = 0.5 * (1.0 + a * a + sign * s);
        vals.push(v);
        vals.push(v);
    }
    debug_assert_eq!(vals.len(), n * n);
    Ok(PtSpectrum::from_values(vals, n * n))
}

pub fn build_cyclic_family(p: &CyclicFamilyParams) -> Result<DensityMatrix, FamilyError> {
    if p.n < 2 {
        return Err(FamilyError::BadDimension { n: p.n, min: 2 });
    }
    let n = p.n;
    if p.weights.len() != n {
        return Err(FamilyError::ShapeMismatch {
            rows: n,
            cols: n - 1,
            got_rows: p.weights.len(),
            got_cols: p.weights.first().map_or(0, Vec::len),
        });
    }
    for row in &p.weights {
        if row.len() != n - 1 {
            return Err(FamilyError::ShapeMismatch {
                rows: n,
                cols: n - 1,
                got_rows: n,
                got_cols: row.len(),
            });
        }
        for w in row {
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(FamilyError::NonFiniteParameter);
            }
        }
    }

    let dims = BipartiteDims::new(n, n).expect("n >= 2");
    let d = n * n;
    let zero = Complex64::new(0.0, 0.0);
    let mut mat = ComplexMatrix::zeros(d);
    let mut v = vec![zero; d];
    for k in 0..n {
        v.fill(zero);
        v[dims.joint(0, k)] = Complex64::new(1.0, 0.0);
        for i in 1..n {
            v[dims.joint(i, (i + k) % n)] = p.weights[k][i - 1];
        }
        mat.add_scaled_outer(&v, 1.0);
    }
    Ok(DensityMatrix::new_unchecked(mat, dims))
}

pub fn build_three_qutrit(p: &ThreeQutritParams) -> Result<DensityMatrix, FamilyError> {
    build_cyclic_family(&CyclicFamilyParams {
        n: 3,
        weights: p.rows(),
    })
}

/// Coefficients of the cubic characteristic factor
/// x^3 - (1 + a1^2 + b2^2) x^2 + q x + r of the family's PT. Defined for real
/// parameters; real parts are used.
pub fn cubic_factor_coeffs(p: &ThreeQutritParams) -> CubicCoeffs {
    let (a1, a2) = (p.a1.re, p.a2.re);
    let (b1, b2) = (p.b1.re, p.b2.re);
    let (c1, c2) = (p.c1.re, p.c2.re);
    let sq = |x: f64| x * x;
    CubicCoeffs {
        p_sq: 1.0 + sq(a1) + sq(b2),
        q: sq(a1) - sq(a2) - sq(b1) + sq(b2) + sq(a1) * sq(b2) - sq(c1) * sq(c2),
        r: sq(a1) * sq(a2) + sq(b1) * sq(b2) + sq(c1) * sq(c2) - sq(a1) * sq(b2)
            - 2.0 * a2 * b1 * c1 * c2,
    }
}

/// Pure state whose PT eigenvalue -sqrt((1/2)(1/2 - epsilon)) sits at the
/// bottom of the allowed range as epsilon -> 0:
/// sqrt(1/2)|00> + sqrt(1/2 - eps)|11> + sqrt(eps/(m-1)) sum_{k=2}^{m} |kk>.
///
/// For epsilon = 0 the state lives on m (x) m; otherwise the trailing kets
/// need local dimension m+1. Epsilon is capped at (m-1)/(2m) so that the
/// |11> coefficient stays second-largest and the quoted eigenvalue is the
/// minimum.
pub fn build_min_witness(p: &ExtremalParams) -> Result<PureState, FamilyError> {
    if p.m < 2 {
        return Err(FamilyError::BadDimension { n: p.m, min: 2 });
    }
    let limit = (p.m - 1) as f64 / (2.0 * p.m as f64);
    if !p.epsilon.is_finite() || p.epsilon < 0.0 || p.epsilon > limit {
        return Err(FamilyError::BadEpsilon {
            epsilon: p.epsilon,
            limit,
        });
    }
    let eps = p.epsilon;
    let local = if eps == 0.0 { p.m } else { p.m + 1 };
    let dims = BipartiteDims::new(local, local).expect("m >= 2");
    let mut amps = vec![Complex64::new(0.0, 0.0); local * local];
    amps[dims.joint(0, 0)] = Complex64::new(0.5_f64.sqrt(), 0.0);
    amps[dims.joint(1, 1)] = Complex64::new((0.5 - eps).sqrt(), 0.0);
    if eps > 0.0 {
        let w = (eps / (p.m - 1) as f64).sqrt();
        for k in 2..=p.m {
            amps[dims.joint(k, k)] = Complex64::new(w, 0.0);
        }
    }
    Ok(PureState::new(amps, dims).expect("nonzero by construction"))
}

/// Separable diagonal state whose PT eigenvalue 1 - epsilon sits at the top
/// of the allowed range as epsilon -> 0:
/// (1 - eps)|00><00| + (eps/m) sum_{k=1}^{m} |kk><kk| on (m+1) (x) (m+1).
pub fn build_max_witness(p: &ExtremalParams) -> Result<DensityMatrix, FamilyError> {
    if p.m < 2 {
        return Err(FamilyError::BadDimension { n: p.m, min: 2 });
    }
    if !p.epsilon.is_finite() || p.epsilon < 0.0 || p.epsilon > 1.0 {
        return Err(FamilyError::BadEpsilon {
            epsilon: p.epsilon,
            limit: 1.0,
        });
    }
    let eps = p.epsilon;
    let local = p.m + 1;
    let dims = BipartiteDims::new(local, local).expect("m >= 2");
    let mut mat = ComplexMatrix::zeros(local * local);
    mat[(dims.joint(0, 0), dims.joint(0, 0))] = Complex64::new(1.0 - eps, 0.0);
    for k in 1..=p.m {
        let idx = dims.joint(k, k);
        mat[(idx, idx)] = Complex64::new(eps / p.m as f64, 0.0);
    }
    Ok(DensityMatrix::new_unchecked(mat, dims))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cubic::{cubic_real_roots, two_negative_roots_rule};
    use crate::states::Subsystem;
    use approx::assert_abs_diff_eq;

    fn paper_point() -> ThreeQutritParams {
        ThreeQutritParams::real(0.25, 1.0, 1.0 / 3.0, 1.0 / 3.0, 0.5, 1.0)
    }

    #[test]
    fn rho_a_trace_formula() {
        for (n, a, want) in [(3, 0.0, 5.0), (3, 0.8, 6.28), (4, 1.0, 8.0), (5, 0.3, 7.18)] {
            let rho = build_rho_a(&RhoAParams { n, a }).unwrap();
            assert_abs_diff_eq!(rho.trace(), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn rho_a_zero_parameter_matrix() {
        // a = 0: |01><01| + |02><02| + (sum_i |ii>)(sum_j <jj|)
        let rho = build_rho_a(&RhoAParams { n: 3, a: 0.0 }).unwrap();
        let mat = rho.mat();
        assert_abs_diff_eq!(mat[(1, 1)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mat[(2, 2)].re, 1.0, epsilon = 1e-15);
        for i in [0usize, 4, 8] {
            for j in [0usize, 4, 8] {
                assert_abs_diff_eq!(mat[(i, j)].re, 1.0, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(rho.trace(), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn rho_a_rejects_small_n() {
        assert!(matches!(
            build_rho_a(&RhoAParams { n: 2, a: 0.5 }),
            Err(FamilyError::BadDimension { .. })
        ));
    }

    #[test]
    fn rho_a_closed_form_matches_numeric() {
        let p = RhoAParams { n: 3, a: 0.8 };
        let closed = rho_a_spectrum_closed_form(&p).unwrap();
        let numeric = build_rho_a(&p).unwrap().pt_spectrum(Subsystem::A).unwrap();
        for (c, n) in closed.eigenvalues.iter().zip(&numeric.eigenvalues) {
            assert_abs_diff_eq!(c, n, epsilon = 1e-9);
        }
        // frozen reference, ascending
        let expect = [
            -1.0,
            -0.1960708636704429,
            -0.1960708636704429,
            -0.13137084989847625,
            1.0,
            1.0,
            1.836070863670443,
            1.836070863670443,
            2.1313708498984765,
        ];
        for (got, want) in closed.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-12);
        }
        assert_eq!(closed.neg_count, 4);
        assert_eq!(numeric.neg_count, 4);
    }

    #[test]
    fn rho_a_count_regimes() {
        // below 1/sqrt(2): n(n-1)/2; inside (1/sqrt(2), 1): one more; at 1
        // the quadratic branch closes a pair and 1 - sqrt(2) stays negative
        for (n, a, want) in [
            (3, 0.0, 3),
            (3, 0.5, 3),
            (3, 0.9, 4),
            (4, 0.8, 7),
            (4, 1.0, 5),
            (5, 0.99, 11),
        ] {
            let spec = rho_a_spectrum_closed_form(&RhoAParams { n, a }).unwrap();
            assert_eq!(spec.neg_count, want, "n={n} a={a}");
        }
    }

    #[test]
    fn three_qutrit_zero_point_is_ppt() {
        let rho = build_three_qutrit(&ThreeQutritParams::real(0.0, 0.0, 0.0, 0.0, 0.0, 0.0))
            .unwrap();
        // sum_i |0i><0i|
        for i in 0..9 {
            let want = if i < 3 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(rho.mat()[(i, i)].re, want, epsilon = 1e-15);
        }
        let spec = rho.pt_spectrum(Subsystem::A).unwrap();
        assert_eq!(spec.neg_count, 0);
    }

    #[test]
    fn three_qutrit_paper_point_spectrum() {
        let rho = build_three_qutrit(&paper_point()).unwrap();
        assert_abs_diff_eq!(rho.trace(), 797.0 / 144.0, epsilon = 1e-12);
        let spec = rho.pt_spectrum(Subsystem::A).unwrap();
        assert_eq!(spec.neg_count, 4);
        let expect = [
            -0.63823193906520075,
            -0.12180341021760733,
            -0.037717226288346906,
            -0.013248351472911882,
            0.25112581013505859,
            0.69706591555099767,
            1.5358486057775548,
            1.8250914016497793,
            2.0365914161529238,
        ];
        for (got, want) in spec.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-9);
        }
    }

    #[test]
    fn cubic_factor_at_paper_point() {
        let coeffs = cubic_factor_coeffs(&paper_point());
        assert_abs_diff_eq!(coeffs.p_sq, 169.0 / 144.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coeffs.q, -85.0 / 72.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coeffs.r, -5.0 / 324.0, epsilon = 1e-15);
        assert!(two_negative_roots_rule(&coeffs).unwrap());

        let roots = cubic_real_roots(&coeffs).unwrap();
        let spec = build_three_qutrit(&paper_point())
            .unwrap()
            .pt_spectrum(Subsystem::A)
            .unwrap();
        for root in roots {
            let nearest = spec
                .eigenvalues
                .iter()
                .map(|v| (v - root).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-8, "root {root} not in spectrum");
        }
    }

    #[test]
    fn cubic_factor_zero_point() {
        let coeffs = cubic_factor_coeffs(&ThreeQutritParams::real(0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(coeffs.p_sq, 1.0);
        assert_eq!(coeffs.q, 0.0);
        assert_eq!(coeffs.r, 0.0);
        let roots = cubic_real_roots(&coeffs).unwrap();
        assert_abs_diff_eq!(roots[0], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(roots[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(roots[2], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn cyclic_n3_reproduces_three_qutrit() {
        let p = paper_point();
        let direct = build_three_qutrit(&p).unwrap();
        let cyclic = build_cyclic_family(&CyclicFamilyParams {
            n: 3,
            weights: p.rows(),
        })
        .unwrap();
        assert_eq!(direct.mat(), cyclic.mat());
    }

    #[test]
    fn cyclic_shape_checks() {
        let bad = CyclicFamilyParams {
            n: 3,
            weights: vec![vec![Complex64::new(1.0, 0.0); 2]; 2],
        };
        assert!(matches!(
            build_cyclic_family(&bad),
            Err(FamilyError::ShapeMismatch { .. })
        ));
        let ragged = CyclicFamilyParams {
            n: 3,
            weights: vec![
                vec![Complex64::new(1.0, 0.0); 2],
                vec![Complex64::new(1.0, 0.0); 3],
                vec![Complex64::new(1.0, 0.0); 2],
            ],
        };
        assert!(matches!(
            build_cyclic_family(&ragged),
            Err(FamilyError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn cyclic_n4_respects_count_bound() {
        let p = CyclicFamilyParams {
            n: 4,
            weights: vec![vec![Complex64::new(1.0, 0.0); 3]; 4],
        };
        let spec = build_cyclic_family(&p)
            .unwrap()
            .pt_spectrum(Subsystem::A)
            .unwrap();
        assert!(spec.neg_count <= 9);
    }

    #[test]
    fn min_witness_values() {
        for (m, eps) in [(2, 0.0), (3, 1e-3), (3, 0.3), (4, 0.2)] {
            let psi = build_min_witness(&ExtremalParams { m, epsilon: eps }).unwrap();
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
            let spec = psi.density().pt_spectrum(Subsystem::A).unwrap();
            let want = -(0.5 * (0.5 - eps)).sqrt();
            assert_abs_diff_eq!(spec.eigenvalues[0], want, epsilon = 1e-10);
        }
        // epsilon = 0 stays on m x m
        let psi = build_min_witness(&ExtremalParams { m: 2, epsilon: 0.0 }).unwrap();
        assert_eq!(psi.dims().total(), 4);
        let psi = build_min_witness(&ExtremalParams { m: 2, epsilon: 0.2 }).unwrap();
        assert_eq!(psi.dims().total(), 9);
    }

    #[test]
    fn min_witness_epsilon_range() {
        // beyond (m-1)/(2m) the |11> coefficient is no longer second-largest
        assert!(matches!(
            build_min_witness(&ExtremalParams { m: 2, epsilon: 0.3 }),
            Err(FamilyError::BadEpsilon { .. })
        ));
        assert!(build_min_witness(&ExtremalParams { m: 2, epsilon: 0.25 }).is_ok());
        assert!(matches!(
            build_min_witness(&ExtremalParams { m: 3, epsilon: -0.1 }),
            Err(FamilyError::BadEpsilon { .. })
        ));
    }

    #[test]
    fn max_witness_values() {
        for (m, eps, want) in [(2, 0.0, 1.0), (3, 0.1, 0.9), (3, 1.0, 1.0 / 3.0)] {
            let rho = build_max_witness(&ExtremalParams { m, epsilon: eps }).unwrap();
            assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-14);
            let spec = rho.pt_spectrum(Subsystem::A).unwrap();
            assert_eq!(spec.neg_count, 0);
            let max = spec.eigenvalues.last().unwrap();
            assert_abs_diff_eq!(max, &want, epsilon = 1e-12);
        }
        assert!(matches!(
            build_max_witness(&ExtremalParams { m: 3, epsilon: 1.5 }),
            Err(FamilyError::BadEpsilon { .. })
        ));
    }
}
