//! Randomized invariants of the small dense complex kernels.

use bandframe::matrix::{
    bilinear_dot, cofactor_inverse, cross_product, minor_sum, mp_inverse_pair, mp_inverse_tall, singular_profile,
    ComplexMatrix,
};
use bandframe::C64;
use proptest::collection::vec;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        ComplexMatrix::new(rows, cols, v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap()
    })
}

fn square() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..=8).prop_flat_map(|n| matrix(n, n))
}

fn tall() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..=8).prop_flat_map(|n| matrix(n, n - 1))
}

fn any_shape() -> impl Strategy<Value = ComplexMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| matrix(r, c))
}

fn condition(a: &ComplexMatrix) -> f64 {
    let s = singular_profile(a).singular_values;
    s[0] / s[s.len() - 1]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cauchy_binet(a in any_shape()) {
        // The Gram determinant of the thin side equals the sum of squared maximal minors.
        let gram = if a.rows() >= a.cols() { a.adjoint().matmul(&a) } else { a.matmul(&a.adjoint()) }.unwrap();
        let det = gram.determinant().unwrap();
        let sum = minor_sum(&a);
        prop_assert!((det.re - sum).abs() <= 1e-10 * sum.max(1e-3), "{} vs {}", det, sum);
        prop_assert!(det.im.abs() <= 1e-10 * sum.max(1e-3));
        let prod: f64 = singular_profile(&a).singular_values.iter().map(|s| s * s).product();
        prop_assert!((prod - sum).abs() <= 1e-9 * sum.max(1e-3));
    }

    #[test]
    fn cross_product_is_orthogonal_to_its_factors(a in tall()) {
        let rows: Vec<Vec<C64>> = (0..a.cols()).map(|c| a.col(c)).collect();
        let w = cross_product(&rows).unwrap();
        let scale = rows.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max).powi(a.cols() as i32);
        for v in &rows {
            prop_assert!(bilinear_dot(&w, v).norm() <= 1e-12 * scale * a.rows() as f64);
        }
        // Conjugating the factors makes the product Hermitian-orthogonal.
        let conj: Vec<Vec<C64>> = rows.iter().map(|v| v.iter().map(|z| z.conj()).collect()).collect();
        let wc = cross_product(&conj).unwrap();
        for v in &rows {
            let herm: C64 = wc.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
            prop_assert!(herm.norm() <= 1e-12 * scale * a.rows() as f64);
        }
    }

    #[test]
    fn cofactor_inverse_agrees_with_lu(m in square()) {
        prop_assume!(condition(&m) <= 1e4);
        let inv = cofactor_inverse(&m).unwrap();
        let lu = m.lu_inverse().unwrap();
        prop_assert!(inv.max_abs_diff(&lu) <= 1e-11 * lu.max_abs());
        let eye = inv.matmul(&m).unwrap();
        prop_assert!(eye.max_abs_diff(&ComplexMatrix::identity(m.rows())) <= 1e-9);
    }

    #[test]
    fn pseudoinverse_constructions_agree(a in tall()) {
        prop_assume!(condition(&a) <= 100.0);
        let pair = mp_inverse_pair(&a).unwrap();
        prop_assert!(pair.relative_discrepancy <= 1e-10, "{}", pair.relative_discrepancy);
        let p = mp_inverse_tall(&a).unwrap();
        let m = a.cols();
        prop_assert!(p.matmul(&a).unwrap().max_abs_diff(&ComplexMatrix::identity(m)) <= 1e-10);
        let proj = a.matmul(&p).unwrap();
        prop_assert!(proj.max_abs_diff(&proj.adjoint()) <= 1e-10);
        prop_assert!(proj.matmul(&proj).unwrap().max_abs_diff(&proj) <= 1e-10);
    }

    #[test]
    fn frame_sandwich(a in any_shape(), v in vec((-1.0f64..1.0, -1.0f64..1.0), 6)) {
        // sigma_min^2 |v|^2 <= |A v|^2 <= sigma_max^2 |v|^2 on the row space of A*.
        let s = singular_profile(&a).singular_values;
        let x = ComplexMatrix::new(a.cols(), 1, v.iter().take(a.cols()).map(|&(r, i)| C64::new(r, i)).collect()).unwrap();
        let ax = a.matmul(&x).unwrap().frobenius_norm().powi(2);
        let xx = x.frobenius_norm().powi(2);
        prop_assert!(ax <= s[0] * s[0] * xx * (1.0 + 1e-12) + 1e-15);
        if a.rows() >= a.cols() {
            let smin = s[a.cols() - 1];
            prop_assert!(ax >= smin * smin * xx * (1.0 - 1e-12) - 1e-15);
        }
    }
}
