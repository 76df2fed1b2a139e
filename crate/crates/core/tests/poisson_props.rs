mod common;

use common::*;
use proptest::prelude::*;
use sft_core::algebra::{integer, Polynomial};
use sft_core::hierarchy::kdv;
use sft_core::poisson::{bracket, bracket_coefficient, SeriesSpec};

fn koszul(f: &Polynomial, g: &Polynomial) -> i64 {
    if f.parity() == Some(1) && g.parity() == Some(1) {
        -1
    } else {
        1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bracket_is_graded_antisymmetric(model in any_model(), a in raw_terms(4, 3), b in raw_terms(4, 3)) {
        let f = parity_homogeneous(&polynomial(&model, &a));
        let g = parity_homogeneous(&polynomial(&model, &b));
        let fg = bracket(&f, &g);
        let gf = bracket(&g, &f);
        prop_assert_eq!(fg, gf.scale(&integer(-koszul(&f, &g))));
    }

    #[test]
    fn bracket_satisfies_graded_jacobi(
        model in any_model(), a in raw_terms(3, 3), b in raw_terms(3, 3), c in raw_terms(3, 3)
    ) {
        let f = parity_homogeneous(&polynomial(&model, &a));
        let g = parity_homogeneous(&polynomial(&model, &b));
        let h = parity_homogeneous(&polynomial(&model, &c));
        let t1 = bracket(&f, &bracket(&g, &h)).scale(&integer(koszul(&f, &h)));
        let t2 = bracket(&g, &bracket(&h, &f)).scale(&integer(koszul(&g, &f)));
        let t3 = bracket(&h, &bracket(&f, &g)).scale(&integer(koszul(&h, &g)));
        prop_assert!((&(&t1 + &t2) + &t3).is_zero());
    }

    #[test]
    fn bracket_obeys_leibniz(
        model in any_model(), a in raw_terms(3, 3), b in raw_terms(3, 2), c in raw_terms(3, 2)
    ) {
        let f = parity_homogeneous(&polynomial(&model, &a));
        let g = parity_homogeneous(&polynomial(&model, &b));
        let h = polynomial(&model, &c);
        let lhs = bracket(&f, &(&g * &h));
        let rhs = &(&bracket(&f, &g) * &h) + &(&g * &bracket(&f, &h)).scale(&integer(koszul(&f, &g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_shifts_degree(model in any_model(), a in raw_terms(4, 3), b in raw_terms(4, 3)) {
        let f = degree_homogeneous(&polynomial(&model, &a));
        let g = degree_homogeneous(&polynomial(&model, &b));
        let (Some(df), Some(dg)) = (f.terms().next().map(|t| t.0.degree()), g.terms().next().map(|t| t.0.degree())) else {
            return Ok(());
        };
        let expected = df + dg - model.hbar_grading();
        for (m, _) in bracket(&f, &g).terms() {
            prop_assert_eq!(m.degree(), expected);
        }
    }

    #[test]
    fn bracket_conserves_winding(model in any_model(), a in raw_terms(4, 3), b in raw_terms(4, 3)) {
        let f = winding_zero(&model, &a);
        let g = winding_zero(&model, &b);
        prop_assert!(bracket(&f, &g).is_winding_zero());
    }

    #[test]
    fn zeroth_hamiltonian_is_central_on_winding_zero(a in raw_terms(5, 4)) {
        let circle = sft_core::OrbitModel::circle();
        let f = winding_zero(&circle, &a);
        prop_assert!(bracket(&kdv(0, CUTOFF), &f).is_zero());
    }

    #[test]
    fn coefficient_oracle_matches_full_bracket(model in any_model(), a in raw_terms(4, 3), b in raw_terms(4, 3)) {
        let f = winding_zero(&model, &a);
        let g = winding_zero(&model, &b);
        let full = bracket(&f, &g);
        let (sf, sg) = (SeriesSpec::explicit(f).unwrap(), SeriesSpec::explicit(g).unwrap());
        for (m, c) in full.terms() {
            prop_assert_eq!(&bracket_coefficient(m, &sf, &sg, &model).unwrap(), c);
        }
    }

    #[test]
    fn even_series_self_bracket_vanishes(model in any_model(), a in raw_terms(4, 3)) {
        let f = winding_zero(&model, &a);
        let f = f.filter(|m, _| m.parity() == 0);
        let spec = SeriesSpec::explicit(f.clone()).unwrap();
        let targets = sft_core::hierarchy::window_targets(&model, &[2, 3, 4], CUTOFF).unwrap();
        for t in &targets {
            prop_assert_eq!(bracket_coefficient(t, &spec, &spec, &model).unwrap(), integer(0));
        }
    }
}

#[test]
fn kdv_coefficients_agree_with_truncated_bracket() {
    // terms of {kdv(1), kdv(2)} with all indices <= 2 only involve contracted
    // iterates <= 4, so a cutoff of 6 makes the truncated bracket exact there
    let c = sft_core::OrbitModel::circle();
    let full = bracket(&kdv(1, 6), &kdv(2, 6));
    let targets = sft_core::hierarchy::window_targets(&c, &[3], 2).unwrap();
    for t in &targets {
        let exact = bracket_coefficient(t, &SeriesSpec::kdv(1), &SeriesSpec::kdv(2), &c).unwrap();
        assert_eq!(exact, full.coefficient(t), "{t}");
        assert_eq!(exact, integer(0));
    }
}

#[test]
fn constant_brackets_to_zero() {
    let g = kdv(1, 3);
    assert!(bracket(&Polynomial::constant(integer(7)), &g).is_zero());
    assert!(bracket(&g, &g).is_zero());
}
