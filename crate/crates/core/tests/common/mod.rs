#![allow(dead_code)]

use proptest::prelude::*;
use sft_core::algebra::{rational, Polynomial};
use sft_core::weyl::{DElement, DKey, WeylElement};
use sft_core::{Monomial, OrbitModel};

/// One model per grading family: even circle, odd hyperbolic, hyperbolic
/// with bad even iterates, odd table, elliptic.
pub fn model_families() -> Vec<OrbitModel> {
    vec![
        OrbitModel::circle(),
        OrbitModel::hyperbolic(2, 2).unwrap(),
        OrbitModel::hyperbolic(3, 1).unwrap(),
        OrbitModel::table(2, vec![2, 4, 6]).unwrap(),
        OrbitModel::elliptic(2, rational(2, 5)).unwrap(),
    ]
}

pub fn any_model() -> impl Strategy<Value = OrbitModel> {
    (0..model_families().len()).prop_map(|i| model_families().swap_remove(i))
}

pub const CUTOFF: u32 = 3;

/// Raw term data: positions into the model's alphabet plus a coefficient.
pub type RawTerms = Vec<(Vec<usize>, i64, i64)>;

pub fn raw_terms(max_terms: usize, max_len: usize) -> impl Strategy<Value = RawTerms> {
    prop::collection::vec(
        (prop::collection::vec(0usize..64, 0..=max_len), -4i64..=4, 1i64..=3),
        0..=max_terms,
    )
}

fn build_monomial(model: &OrbitModel, picks: &[usize]) -> Option<(Monomial, i32)> {
    let alphabet = (1..=CUTOFF).rev().find_map(|c| model.good_indices(c).ok()).unwrap();
    let vars: Vec<_> = picks.iter().map(|&i| model.variable(alphabet[i % alphabet.len()]).unwrap()).collect();
    sft_core::algebra::normalize(&vars).unwrap()
}

pub fn polynomial(model: &OrbitModel, raw: &RawTerms) -> Polynomial {
    let mut p = Polynomial::zero();
    for (picks, n, d) in raw {
        if let Some((m, s)) = build_monomial(model, picks) {
            p.add_term(m, rational(n * s as i64, *d));
        }
    }
    p
}

/// Keeps only terms sharing the parity of the first surviving term.
pub fn parity_homogeneous(p: &Polynomial) -> Polynomial {
    let Some(par) = p.terms().next().map(|(m, _)| m.parity()) else { return p.clone() };
    p.filter(|m, _| m.parity() == par)
}

/// Keeps only terms sharing the degree of the first surviving term.
pub fn degree_homogeneous(p: &Polynomial) -> Polynomial {
    let Some(deg) = p.terms().next().map(|(m, _)| m.degree()) else { return p.clone() };
    p.filter(|m, _| m.degree() == deg)
}

/// Keeps only winding-zero terms after closing each monomial with the
/// variable that cancels its winding, when that variable is available.
pub fn winding_zero(model: &OrbitModel, raw: &RawTerms) -> Polynomial {
    let mut p = Polynomial::zero();
    for (picks, n, d) in raw {
        let Some((m, s)) = build_monomial(model, picks) else { continue };
        let w = m.winding();
        let closed = if w == 0 {
            Some((m, s))
        } else {
            match model.variable(-w as i32) {
                Ok(v) if w.unsigned_abs() <= CUTOFF as u64 => {
                    let (single, _) = Monomial::from_factors(&[v]).unwrap().unwrap();
                    m.mul(&single).unwrap().map(|(m2, s2)| (m2, s * s2))
                }
                _ => None,
            }
        };
        if let Some((m, s)) = closed {
            p.add_term(m, rational(n * s as i64, *d));
        }
    }
    p
}

pub fn weyl(model: &OrbitModel, raw: &RawTerms, hbar: &[i32]) -> WeylElement {
    let mut w = WeylElement::zero();
    for (i, term) in raw.iter().enumerate() {
        let p = polynomial(model, &vec![term.clone()]);
        w = &w + &WeylElement::from_polynomial(&p, hbar[i % hbar.len().max(1)]);
    }
    w
}

/// Boundary-module element whose `q^-` and `p^+` variables both come from
/// `model`.
pub fn boundary(model: &OrbitModel, raw: &RawTerms) -> DElement {
    let mut x = DElement::zero();
    for (picks, n, d) in raw {
        let Some((m, _)) = build_monomial(model, picks) else { continue };
        let (plus, minus) = m.split_momenta();
        // reorder as minus * plus; the sign is irrelevant for random data
        x.add_term(DKey { hbar: 0, minus, plus }, rational(*n, *d));
    }
    x
}
