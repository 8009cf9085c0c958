//! Property suites for the algebraic contracts: partial transpose as an exact
//! involution, spectrum agreement between the two sides, the pure-state
//! coefficient law, bound compliance for random mixtures and the cubic sign
//! rule.

use num_complex::Complex64;
use proptest::prelude::*;
use ptspec::{
    cubic_real_roots, ginibre_mixed, haar_unitary, hermitian_eigensystem, partial_transpose,
    pure_pt_spectrum_closed_form, pure_with_schmidt_rank, schmidt, two_negative_roots_rule,
    verify_neg_count_bound, BipartiteDims, ComplexMatrix, CubicCoeffs, DensityMatrix, SeedSpec,
    Subsystem,
};

fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    out
}

fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = a[(j, i)].conj();
        }
    }
    out
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(p * q);
    for i in 0..p {
        for j in 0..p {
            for k in 0..q {
                for l in 0..q {
                    out[(i * q + k, j * q + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn assert_close_lists(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "eigenvalue {g} vs {w} (tol {tol})");
    }
}

fn dims_rank_seed() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(m, n)| (Just(m), Just(n), 1usize..=(m * n), any::<u64>()))
}

proptest! {
    #[test]
    fn pt_is_an_exact_involution((m, n, rank, seed) in dims_rank_seed()) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let rho = ginibre_mixed(dims, rank, SeedSpec::new(seed)).unwrap();
        for part in [Subsystem::A, Subsystem::B] {
            let once = partial_transpose(rho.mat(), dims, part).unwrap();
            let twice = partial_transpose(&once, dims, part).unwrap();
            prop_assert_eq!(twice.data(), rho.mat().data());
            // entries are moved, never recomputed, so the trace is bit-exact
            prop_assert_eq!(once.trace(), rho.mat().trace());
        }
    }

    #[test]
    fn both_sides_transpose_to_the_same_spectrum((m, n, rank, seed) in dims_rank_seed()) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let rho = ginibre_mixed(dims, rank, SeedSpec::new(seed)).unwrap();
        let sa = rho.pt_spectrum(Subsystem::A).unwrap();
        let sb = rho.pt_spectrum(Subsystem::B).unwrap();
        prop_assert_eq!(sa.neg_count, sb.neg_count);
        assert_close_lists(&sa.eigenvalues, &sb.eigenvalues, 1e-10);
    }

    #[test]
    fn eigenvalue_sums_match_traces(
        dim in 1usize..=8,
        raw in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 64),
        ) {
        let data: Vec<Complex64> = raw
            .iter()
            .take(dim * dim)
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        let h = ComplexMatrix::new(dim, data).unwrap().symmetrized();
        let es = hermitian_eigensystem(&h, true).unwrap();
        let sum: f64 = es.values.iter().sum();
        let scale = h.max_abs().max(1.0);
        prop_assert!((sum - h.trace().re).abs() <= 1e-10 * dim as f64 * scale);
        // with vectors requested, each pair must satisfy H v = lambda v
        for (lambda, v) in es.values.iter().zip(&es.vectors) {
            let hv = h.mul_vec(v);
            let err: f64 = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - lambda * b).norm())
                .sum();
            prop_assert!(err <= 1e-8 * dim as f64 * scale);
        }
    }

    #[test]
    fn local_rotations_leave_the_pt_spectrum_alone(
        (m, n) in (1usize..=3, 1usize..=3),
        seed in any::<u64>(),
        ) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let rho = ginibre_mixed(dims, dims.total(), SeedSpec::new(seed)).unwrap();
        let u = haar_unitary(m, SeedSpec::new(seed ^ 0x5bd1e995));
        let v = haar_unitary(n, SeedSpec::new(seed ^ 0x9e3779b9));
        let w = kron(&u, &v);
        let rotated = matmul(&w, &matmul(rho.mat(), &dagger(&w))).symmetrized();
        let rotated = DensityMatrix::new(rotated, dims).unwrap();
        let before = rho.pt_spectrum(Subsystem::A).unwrap();
        let after = rotated.pt_spectrum(Subsystem::A).unwrap();
        assert_close_lists(&after.eigenvalues, &before.eigenvalues, 1e-9);
    }

    #[test]
    fn pure_spectra_follow_the_coefficient_law(
        (m, n) in (1usize..=5, 1usize..=5),
        rank_pick in 0usize..5,
        seed in any::<u64>(),
        ) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let d = 1 + rank_pick % m.min(n);
        let psi = pure_with_schmidt_rank(dims, d, SeedSpec::new(seed)).unwrap();
        let sv = schmidt(&psi).unwrap();
        prop_assert_eq!(sv.rank(), d);
        let closed = pure_pt_spectrum_closed_form(&sv, dims).unwrap();
        let numeric = psi.density().pt_spectrum(Subsystem::A).unwrap();
        assert_close_lists(
            &sorted(numeric.eigenvalues.clone()),
            &sorted(closed.eigenvalues.clone()),
            1e-9,
        );
        prop_assert_eq!(numeric.neg_count, d * (d - 1) / 2);
        prop_assert_eq!(closed.neg_count, d * (d - 1) / 2);
    }

    #[test]
    fn schmidt_reconstructs_the_amplitudes(
        (m, n) in (1usize..=5, 1usize..=5),
        seed in any::<u64>(),
        ) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let psi = pure_with_schmidt_rank(dims, m.min(n), SeedSpec::new(seed)).unwrap();
        let sv = schmidt(&psi).unwrap();
        let rebuilt = sv.reconstruct(dims);
        for (a, b) in rebuilt.iter().zip(psi.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-9);
        }
    }

    #[test]
    fn random_mixtures_respect_both_bounds((m, n, rank, seed) in dims_rank_seed()) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let rho = ginibre_mixed(dims, rank, SeedSpec::new(seed)).unwrap();
        let report = verify_neg_count_bound(&rho).unwrap();
        prop_assert!(report.within_bounds);
        prop_assert!(report.neg_count <= dims.neg_count_bound());
        prop_assert!(report.min_eig >= -0.5 - report.tolerance);
        prop_assert!(report.max_eig <= 1.0 + report.tolerance);
    }

    #[test]
    fn negativity_is_half_the_excess_abs_sum((m, n, rank, seed) in dims_rank_seed()) {
        let dims = BipartiteDims::new(m, n).unwrap();
        let rho = ginibre_mixed(dims, rank, SeedSpec::new(seed)).unwrap();
        let spec = rho.pt_spectrum(Subsystem::A).unwrap();
        let abs_sum: f64 = spec.eigenvalues.iter().map(|v| v.abs()).sum();
        // trace-1 states: N = (sum |lambda| - 1) / 2
        prop_assert!((spec.negativity - (abs_sum - 1.0) / 2.0).abs() <= 1e-10);
    }

    #[test]
    fn the_cubic_sign_rule_counts_negative_roots(
        roots in proptest::collection::vec(-3.0f64..3.0, 3),
        ) {
        let (x0, x1, x2) = (roots[0], roots[1], roots[2]);
        prop_assume!(x0.abs() >= 1e-3 && x1.abs() >= 1e-3 && x2.abs() >= 1e-3);
        prop_assume!(x0 + x1 + x2 >= 0.0);
        let c = CubicCoeffs::from_roots(x0, x1, x2);
        let neg = [x0, x1, x2].iter().filter(|x| **x < 0.0).count();
        prop_assert_eq!(two_negative_roots_rule(&c).unwrap(), neg == 2);
        let sep = (x0 - x1).abs().min((x0 - x2).abs()).min((x1 - x2).abs());
        if sep >= 0.05 {
            let got = cubic_real_roots(&c).unwrap();
            assert_close_lists(&sorted(got.to_vec()), &sorted(vec![x0, x1, x2]), 1e-5);
        }
    }
}
