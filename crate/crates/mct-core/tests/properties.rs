use std::collections::BTreeMap;

use approx::relative_eq;
use mct_core::constructions::power_weighted_lp_norm;
use mct_core::fourier::FourierEvaluable;
use mct_core::functionals::{campanato_rhs, d_functional, d_functional_weighted};
use mct_core::grid::StepFunction;
use mct_core::norms::{lorentz_norm, morrey_norm, truncated_norm, MorreyOptions, NormParams, Weight};
use num_complex::Complex;
use proptest::prelude::*;

fn step_fn(dim: usize) -> impl Strategy<Value = StepFunction<f64>> {
    let cell = (-24i64..24, -24i64..24, -4.0f64..4.0, -4.0f64..4.0);
    (-3i32..=2, prop::collection::vec(cell, 1..16)).prop_filter_map("nonzero", move |(level, cells)| {
        let mut map = BTreeMap::new();
        for (a, b, re, im) in cells {
            if re.abs() + im.abs() > 1e-3 {
                map.insert([a, if dim == 2 { b } else { 0 }], Complex::new(re, im));
            }
        }
        if map.is_empty() {
            return None;
        }
        StepFunction::new(dim, level, map).ok()
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    relative_eq!(a, b, max_relative = tol, epsilon = 1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn morrey_is_homogeneous_and_dilation_covariant(f in step_fn(1), c in 0.1f64..10.0, j in -3i32..=3) {
        for q in [2.0, f64::INFINITY] {
            let prm = NormParams::new(1, 2.0, q, 0.25).unwrap();
            let opts = MorreyOptions::default();
            let base = morrey_norm(&f, &prm, &opts).unwrap().value;
            let scaled = morrey_norm(&f.scale(Complex::new(0.0, c)), &prm, &opts).unwrap().value;
            prop_assert!(close(scaled, c * base, 1e-12));
            let dil = morrey_norm(&f.dilate(j), &prm, &opts).unwrap().value;
            prop_assert!(close(dil, 2f64.powf(j as f64 * (0.25 - 0.5)) * base, 1e-12));
        }
    }

    #[test]
    fn morrey_in_the_plane_is_dilation_covariant(f in step_fn(2), j in -2i32..=2) {
        let prm = NormParams::new(2, 2.0, f64::INFINITY, 0.5).unwrap();
        let opts = MorreyOptions::default();
        let base = morrey_norm(&f, &prm, &opts).unwrap().value;
        let dil = morrey_norm(&f.dilate(j), &prm, &opts).unwrap().value;
        prop_assert!(close(dil, 2f64.powf(j as f64 * (0.5 - 1.0)) * base, 1e-12));
    }

    #[test]
    fn diagonal_lorentz_is_lebesgue(f in step_fn(1), p in 0.5f64..6.0) {
        prop_assert!(close(lorentz_norm(&f, p, p).unwrap(), f.lp_norm(p), 1e-11));
    }

    #[test]
    fn transform_at_zero_is_the_integral(f in step_fn(2)) {
        let mut s = Complex::new(0.0, 0.0);
        for (_, c) in f.cells() {
            s += *c * f.cell_measure();
        }
        prop_assert!((f.ft(&[0.0, 0.0]) - s).norm() <= 1e-12 * (1.0 + s.norm()));
    }

    #[test]
    fn d_functional_dilation(f in step_fn(1), j in 1i32..=2) {
        let (p, lambda) = (2.0, 0.25);
        let base = d_functional(&f, p, f64::INFINITY, lambda, None).unwrap().value;
        let dil = d_functional(&f.dilate(j), p, f64::INFINITY, lambda, None).unwrap().value;
        prop_assert!(close(dil / base, 2f64.powf(-(j as f64) * (1.0 - 1.0 / p + lambda)), 1e-9));
    }

    #[test]
    fn weighted_d_with_power_weight_is_unweighted(f in step_fn(1), lambda in 0.05f64..0.45, q in prop::sample::select(vec![1.0, 2.0, f64::INFINITY])) {
        let d = d_functional(&f, 2.0, q, lambda, None).unwrap().value;
        let w = d_functional_weighted(&f, 2.0, q, &Weight::power(-lambda), None).unwrap().value;
        prop_assert!(close(d, w, 1e-12));
    }

    #[test]
    fn campanato_rhs_with_power_weight_is_truncated(f in step_fn(1), a in 0.05f64..0.95, q in prop::sample::select(vec![1.0, 3.0, f64::INFINITY])) {
        let r = campanato_rhs(&f, &Weight::power(-a), q).unwrap().value;
        let t = truncated_norm(&f, a, q, 1.0).unwrap().value;
        prop_assert!(close(r, t, 1e-12));
    }

    #[test]
    fn power_weighted_lp_scales(f in step_fn(1), gamma in 0.0f64..2.0, j in -2i32..=2) {
        let base = power_weighted_lp_norm(&f, gamma, 2.0);
        let dil = power_weighted_lp_norm(&f.dilate(j), gamma, 2.0);
        prop_assert!(close(dil, 2f64.powf(-(j as f64) * (0.5 + gamma)) * base, 1e-12));
    }
}
