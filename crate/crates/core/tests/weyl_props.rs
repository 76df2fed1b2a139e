mod common;

use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;
use sft_core::algebra::{integer, normalize, rational, Side};
use sft_core::poisson::bracket;
use sft_core::weyl::{
    apply_action, cobordism_differential, commutator, master_residual, star, DElement, DKey, WeylElement,
    WeylKey,
};
use sft_core::{Monomial, OrbitModel};

const EXACT: i32 = 64;

fn mono(m: &OrbitModel, ks: &[i32]) -> Monomial {
    let vars: Vec<_> = ks.iter().map(|&k| m.variable(k).unwrap()).collect();
    normalize(&vars).unwrap().unwrap().0
}

fn odd_master_solutions() -> &'static [WeylElement] {
    static SOLUTIONS: OnceLock<Vec<WeylElement>> = OnceLock::new();
    SOLUTIONS.get_or_init(|| search_odd_master(&OrbitModel::table(2, vec![2, 4]).unwrap()))
}

/// Every odd `hbar^-1` combination of the eight odd normal-ordered words in
/// `q_1, q_2, p_1, p_2` with coefficients in {-1, 0, 1} that solves
/// `[H, H] = 0` and mixes positions with momenta.
fn search_odd_master(t: &OrbitModel) -> Vec<WeylElement> {
    let words: [(&[i32], &[i32]); 8] = [
        (&[1], &[]),
        (&[2], &[]),
        (&[], &[-1]),
        (&[], &[-2]),
        (&[1, 2], &[-1]),
        (&[1, 2], &[-2]),
        (&[1], &[-2, -1]),
        (&[2], &[-2, -1]),
    ];
    let mut out = Vec::new();
    for code in 0..3usize.pow(8) {
        let mut h = WeylElement::zero();
        let (mut c, mut has_q, mut has_p) = (code, false, false);
        for (q, p) in words {
            let e = (c % 3) as i64 - 1;
            c /= 3;
            if e != 0 {
                has_q |= !q.is_empty();
                has_p |= !p.is_empty();
                h.add_term(WeylKey { hbar: -1, q: mono(t, q), p: mono(t, p) }, integer(e));
            }
        }
        if has_q && has_p && commutator(&h, &h, 2).is_zero() {
            out.push(h);
        }
    }
    out
}

fn identity_potential(m: &OrbitModel, cutoff: i32) -> DElement {
    let mut f = DElement::zero();
    for n in m.good_indices(cutoff as u32).unwrap().into_iter().filter(|&k| k > 0) {
        f.add_term(DKey { hbar: -1, minus: mono(m, &[n]), plus: mono(m, &[-n]) }, rational(1, n as i64));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classical_part_of_star_is_the_product(model in any_model(), a in raw_terms(3, 3), b in raw_terms(3, 3)) {
        let (f, g) = (polynomial(&model, &a), polynomial(&model, &b));
        let prod = star(&WeylElement::from_polynomial(&f, 0), &WeylElement::from_polynomial(&g, 0), 0);
        prop_assert_eq!(prod.hbar_part(0), &f * &g);
    }

    #[test]
    fn first_order_commutator_is_the_bracket(model in any_model(), a in raw_terms(3, 3), b in raw_terms(3, 3)) {
        let f = parity_homogeneous(&polynomial(&model, &a));
        let g = parity_homogeneous(&polynomial(&model, &b));
        let c = commutator(&WeylElement::from_polynomial(&f, 0), &WeylElement::from_polynomial(&g, 0), 1);
        prop_assert!(c.hbar_part(0).is_zero());
        prop_assert_eq!(c.hbar_part(1), bracket(&f, &g));
    }

    #[test]
    fn star_is_associative(
        model in any_model(), a in raw_terms(3, 3), b in raw_terms(3, 3), c in raw_terms(3, 3)
    ) {
        let f = weyl(&model, &a, &[0, -1, 1]);
        let g = weyl(&model, &b, &[1, 0]);
        let h = weyl(&model, &c, &[-1, 0]);
        prop_assert_eq!(star(&star(&f, &g, EXACT), &h, EXACT), star(&f, &star(&g, &h, EXACT), EXACT));
    }

    #[test]
    fn star_preserves_degree(model in any_model(), a in raw_terms(3, 3), b in raw_terms(3, 3)) {
        let hg = model.hbar_grading();
        let f = weyl(&model, &a, &[0, -1]);
        let g = weyl(&model, &b, &[1]);
        let Some((kf, _)) = f.terms().next() else { return Ok(()) };
        let Some((kg, _)) = g.terms().next() else { return Ok(()) };
        let (df, dg) = (kf.degree(hg), kg.degree(hg));
        let f = { let mut w = WeylElement::zero(); for (k, c) in f.terms().filter(|(k, _)| k.degree(hg) == df) { w.add_term(k.clone(), c.clone()); } w };
        let g = { let mut w = WeylElement::zero(); for (k, c) in g.terms().filter(|(k, _)| k.degree(hg) == dg) { w.add_term(k.clone(), c.clone()); } w };
        for (k, _) in star(&f, &g, EXACT).terms() {
            prop_assert_eq!(k.degree(hg), df + dg);
        }
    }

    #[test]
    fn actions_are_representations(
        model in any_model(), a in raw_terms(2, 3), b in raw_terms(2, 3), c in raw_terms(3, 3)
    ) {
        let f = weyl(&model, &a, &[0, 1]);
        let g = weyl(&model, &b, &[0]);
        let x = boundary(&model, &c);
        let fg = star(&f, &g, EXACT);
        let left = apply_action(&f, Side::Left, &apply_action(&g, Side::Left, &x, EXACT).unwrap(), EXACT).unwrap();
        prop_assert_eq!(left, apply_action(&fg, Side::Left, &x, EXACT).unwrap());
        let right = apply_action(&g, Side::Right, &apply_action(&f, Side::Right, &x, EXACT).unwrap(), EXACT).unwrap();
        prop_assert_eq!(right, apply_action(&fg, Side::Right, &x, EXACT).unwrap());
    }

    #[test]
    fn twisted_differential_squares_to_zero(pick in 0usize..40, c in raw_terms(3, 3), fr in raw_terms(3, 2)) {
        let t = OrbitModel::table(2, vec![2, 4]).unwrap();
        let sols = odd_master_solutions();
        let h = &sols[pick % sols.len()];
        let g = boundary(&t, &c);
        let potential = boundary(&t, &fr).terms()
            .filter(|(k, _)| k.parity() == 0)
            .fold(DElement::zero(), |acc, (k, v)| &acc + &DElement::single(k.clone(), v.clone()));
        let dg = cobordism_differential(&g, &potential, h, h, EXACT).unwrap();
        prop_assert!(cobordism_differential(&dg, &potential, h, h, EXACT).unwrap().is_zero());
    }
}

#[test]
fn odd_master_search_finds_mixed_solutions() {
    let sols = odd_master_solutions();
    assert_eq!(sols.len(), 40);
    for h in sols {
        assert!(commutator(h, h, EXACT).is_zero());
    }
}

#[test]
fn identity_cobordism_satisfies_master_equation() {
    for model in model_families() {
        let f = identity_potential(&model, 3);
        let mut h = WeylElement::zero();
        for (q, p) in [(vec![1], vec![-1]), (vec![1, 1], vec![-2]), (vec![2], vec![-1, -1]), (vec![], vec![-3])] {
            let (Ok(qv), Ok(pv)) = (
                q.iter().map(|&k| model.variable(k)).collect::<Result<Vec<_>, _>>(),
                p.iter().map(|&k| model.variable(k)).collect::<Result<Vec<_>, _>>(),
            ) else {
                continue;
            };
            let (Some((qm, _)), Some((pm, _))) = (normalize(&qv).unwrap(), normalize(&pv).unwrap()) else {
                continue;
            };
            h.add_term(WeylKey { hbar: -1, q: qm, p: pm }, integer(1));
        }
        assert!(master_residual(&f, &h, &h, EXACT).unwrap().is_zero(), "{model:?}");
    }
}

#[test]
fn differential_rejects_odd_potential() {
    let t = OrbitModel::table(2, vec![2, 4]).unwrap();
    let odd = DElement::single(DKey { hbar: 0, minus: mono(&t, &[1]), plus: Monomial::one() }, integer(1));
    assert!(cobordism_differential(&DElement::one(), &odd, &WeylElement::zero(), &WeylElement::zero(), 2).is_err());
}

#[test]
fn canonical_pairs_commute_to_kappa_hbar() {
    let c = OrbitModel::circle();
    for n in 1..=10 {
        let p = WeylElement::single(WeylKey { hbar: 0, q: Monomial::one(), p: mono(&c, &[-n]) }, integer(1));
        let q = WeylElement::single(WeylKey { hbar: 0, q: mono(&c, &[n]), p: Monomial::one() }, integer(1));
        let expected = WeylElement::single(WeylKey { hbar: 1, q: Monomial::one(), p: Monomial::one() }, integer(n as i64));
        assert_eq!(commutator(&p, &q, 4), expected);
    }
}
