//! The graded Poisson bracket and exact per-monomial bracket coefficients of
//! infinite winding-zero series.
//!
//! Convention: for parity-homogeneous `f`, `g`
//!
//! `{f,g} = sum_n n [ (f d<-/dp_n)(d->/dq_n g) - (-1)^{|f||g|} (g d<-/dp_n)(d->/dq_n f) ]`
//!
//! with right derivatives in momenta and left derivatives in positions. This
//! is exactly the `hbar^1` coefficient of the Weyl commutator.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{integer, AlgebraError, Monomial, OrbitVariable, Polynomial, Rational, Side};
use crate::hierarchy::{self, DegreeFilter};
use crate::hurwitz::{self, BranchingProfile, BranchingContext, HurwitzError};
use crate::orbits::{ModelError, OrbitModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("target monomial has winding {0}, expected 0")]
    NonZeroWinding(i64),
    #[error("explicit series contains a monomial of winding {0}")]
    SeriesWinding(i64),
    #[error("degree filter `max` must be resolved against a cutoff first")]
    UnresolvedFilter,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
}

fn signed(c: Rational, s: i64) -> Rational {
    if s < 0 {
        -c
    } else {
        c
    }
}

/// Poisson bracket; errors if `f` and `g` disagree on a grading.
pub fn try_bracket(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, AlgebraError> {
    let mut contracted: Vec<u32> = f
        .variables()
        .union(&g.variables())
        .map(|v| v.kappa())
        .collect();
    contracted.sort_unstable();
    contracted.dedup();

    let (f0, f1) = f.parity_parts();
    let (g0, g1) = g.parity_parts();
    let mut out = Polynomial::zero();
    for (fa, pa) in [(&f0, 0u8), (&f1, 1)] {
        for (gb, pb) in [(&g0, 0u8), (&g1, 1)] {
            if fa.is_zero() || gb.is_zero() {
                continue;
            }
            let exchange = if pa * pb == 1 { -1 } else { 1 };
            for &n in &contracted {
                let n = n as i32;
                let kappa = integer(n as i64);
                let first = fa.partial(-n, Side::Right).try_mul(&gb.partial(n, Side::Left))?;
                let second = gb.partial(-n, Side::Right).try_mul(&fa.partial(n, Side::Left))?;
                out = &out + &first.scale(&kappa);
                out = &out - &second.scale(&signed(kappa, exchange));
            }
        }
    }
    Ok(out)
}

/// Poisson bracket; panics if the arguments disagree on gradings.
pub fn bracket(f: &Polynomial, g: &Polynomial) -> Polynomial {
    try_bracket(f, g).expect("polynomials over inconsistent gradings")
}

/// A conceptually infinite series whose coefficients can be queried one
/// monomial at a time.
#[derive(Clone, Debug)]
pub enum SeriesSpec {
    /// The circle hierarchy at level `j`.
    Kdv { j: u32 },
    /// The degree-filtered hierarchy of `model` at level `j`.
    Filtered { model: OrbitModel, j: u32, filter: DegreeFilter },
    /// A branching Hamiltonian, with its Hurwitz counts memoised.
    Branching { mu: BranchingProfile, ctx: BranchingContext },
    Explicit(Polynomial),
}

impl SeriesSpec {
    pub fn kdv(j: u32) -> Self {
        SeriesSpec::Kdv { j }
    }

    /// Filtered series; a `Max` filter is resolved over `window`.
    pub fn filtered(model: OrbitModel, j: u32, filter: DegreeFilter, window: u32) -> Result<Self, PoissonError> {
        let filter = hierarchy::resolve_filter(&model, j, window, filter)?;
        Ok(SeriesSpec::Filtered { model, j, filter })
    }

    pub fn branching(mu: BranchingProfile) -> Self {
        SeriesSpec::Branching { mu, ctx: BranchingContext::default() }
    }

    pub fn explicit(p: Polynomial) -> Result<Self, PoissonError> {
        if let Some((m, _)) = p.terms().find(|(m, _)| m.winding() != 0) {
            return Err(PoissonError::SeriesWinding(m.winding()));
        }
        Ok(SeriesSpec::Explicit(p))
    }

    /// Monomial lengths that can carry a nonzero coefficient.
    pub fn lengths(&self) -> Vec<usize> {
        match self {
            SeriesSpec::Kdv { j } | SeriesSpec::Filtered { j, .. } => vec![*j as usize + 2],
            SeriesSpec::Branching { mu, .. } => {
                vec![mu.parts().iter().map(|&k| k as usize + 1).sum()]
            }
            SeriesSpec::Explicit(p) => {
                let mut v: Vec<usize> = p.terms().map(|(m, _)| m.len()).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    /// Exact coefficient of `mono` in the untruncated series.
    pub fn coefficient(&self, mono: &Monomial) -> Result<Rational, PoissonError> {
        if mono.winding() != 0 {
            return Ok(Rational::zero());
        }
        match self {
            SeriesSpec::Kdv { j } => {
                if mono.len() != *j as usize + 2 {
                    return Ok(Rational::zero());
                }
                Ok(hierarchy::symmetry_weight(&mono.indices()))
            }
            SeriesSpec::Filtered { model, j, filter } => {
                if mono.len() != *j as usize + 2 {
                    return Ok(Rational::zero());
                }
                let indices = mono.indices();
                let eps = model.epsilon(&indices)?;
                if eps == 0 {
                    return Ok(Rational::zero());
                }
                let degree = indices.iter().map(|&k| model.grading(k)).sum::<Result<i64, _>>()?;
                let keep = match filter {
                    DegreeFilter::None => true,
                    DegreeFilter::Target => degree == hierarchy::target_degree(model, *j),
                    DegreeFilter::Exact(d) => degree == *d,
                    DegreeFilter::Max => return Err(PoissonError::UnresolvedFilter),
                };
                if !keep {
                    return Ok(Rational::zero());
                }
                Ok(signed(hierarchy::symmetry_weight(&indices), eps as i64))
            }
            SeriesSpec::Branching { mu, ctx } => Ok(hurwitz::branching_coefficient(mu, mono, ctx)?),
            SeriesSpec::Explicit(p) => Ok(p.coefficient(mono)),
        }
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSpec::Kdv { j } => write!(f, "kdv:{j}"),
            SeriesSpec::Filtered { j, filter, .. } => write!(f, "filtered:{j} ({filter})"),
            SeriesSpec::Branching { mu, .. } => write!(f, "mu:{mu}"),
            SeriesSpec::Explicit(p) => write!(f, "explicit ({} terms)", p.len()),
        }
    }
}

/// All sub-multisets of `target`, as (chosen, complement) pairs.
fn splits(target: &Monomial) -> Vec<(Vec<OrbitVariable>, Vec<OrbitVariable>)> {
    let mut groups: BTreeMap<i32, (OrbitVariable, usize)> = BTreeMap::new();
    for v in target.factors() {
        groups.entry(v.index()).or_insert((*v, 0)).1 += 1;
    }
    let groups: Vec<(OrbitVariable, usize)> = groups.into_values().collect();
    let mut out = vec![(Vec::new(), Vec::new())];
    for (v, mult) in groups {
        let mut next = Vec::with_capacity(out.len() * (mult + 1));
        for (a, b) in &out {
            for take in 0..=mult {
                let mut a2: Vec<OrbitVariable> = a.clone();
                let mut b2: Vec<OrbitVariable> = b.clone();
                a2.extend(std::iter::repeat_n(v, take));
                b2.extend(std::iter::repeat_n(v, mult - take));
                next.push((a2, b2));
            }
        }
        out = next;
    }
    out
}

/// `m` with one extra factor `v`; `None` if the product vanishes.
fn with_factor(m: &Monomial, v: OrbitVariable) -> Result<Option<Monomial>, AlgebraError> {
    let single = Monomial::from_sorted(vec![v]);
    Ok(m.mul(&single)?.map(|(out, _)| out))
}

/// Exact coefficient of `target` in `{f, g}` for infinite series `f`, `g`.
///
/// Every way of writing `target` as a product of an `f`-side part and a
/// `g`-side part fixes the contracted iterate by winding conservation, so
/// the sum is finite.
pub fn bracket_coefficient(
    target: &Monomial,
    f: &SeriesSpec,
    g: &SeriesSpec,
    model: &OrbitModel,
) -> Result<Rational, PoissonError> {
    if target.winding() != 0 {
        return Err(PoissonError::NonZeroWinding(target.winding()));
    }
    let mut total = Rational::zero();
    for (a_vars, b_vars) in splits(target) {
        let a_part = Monomial::from_sorted(a_vars);
        let b_part = Monomial::from_sorted(b_vars);
        let w = a_part.winding();
        if w == 0 {
            continue;
        }
        let n = w.unsigned_abs() as i32;
        // an iterate past the end of a finite table is not an orbit of the model
        let (p, q) = match (model.raw_variable(-n), model.raw_variable(n)) {
            (Ok(p), Ok(q)) => (p, q),
            (Err(ModelError::OutOfTable { .. }), _) | (_, Err(ModelError::OutOfTable { .. })) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        };
        if !p.is_good() {
            continue;
        }
        let kappa = integer(n as i64);
        if w > 0 {
            // (f d<-/dp_n)(d->/dq_n g): f owns a_part * p_n, g owns q_n * b_part
            let Some((_, s)) = a_part.mul(&b_part)? else { continue };
            let (Some(fa), Some(gb)) = (with_factor(&a_part, p)?, with_factor(&b_part, q)?) else {
                continue;
            };
            let cf = f.coefficient(&fa)?;
            if cf.is_zero() {
                continue;
            }
            let cg = g.coefficient(&gb)?;
            if cg.is_zero() {
                continue;
            }
            let (_, r1) = fa.derivative(-n, Side::Right).expect("p_n present");
            let (_, r2) = gb.derivative(n, Side::Left).expect("q_n present");
            total += signed(cf * cg * &kappa * integer(r1 * r2), s as i64);
        } else {
            // -(-1)^{|f||g|} (g d<-/dp_n)(d->/dq_n f): g owns b_part * p_n
            let Some((_, s)) = b_part.mul(&a_part)? else { continue };
            let (Some(fa), Some(gb)) = (with_factor(&a_part, q)?, with_factor(&b_part, p)?) else {
                continue;
            };
            let cf = f.coefficient(&fa)?;
            if cf.is_zero() {
                continue;
            }
            let cg = g.coefficient(&gb)?;
            if cg.is_zero() {
                continue;
            }
            let (_, r1) = gb.derivative(-n, Side::Right).expect("p_n present");
            let (_, r2) = fa.derivative(n, Side::Left).expect("q_n present");
            let exchange = if fa.parity() * gb.parity() == 1 { 1 } else { -1 };
            total += signed(cf * cg * &kappa * integer(r1 * r2), s as i64 * exchange);
        }
    }
    Ok(total)
}

/// Convenience: `{f, g}` restricted to the monomials listed in `targets`.
pub fn bracket_coefficients(
    targets: &[Monomial],
    f: &SeriesSpec,
    g: &SeriesSpec,
    model: &OrbitModel,
) -> Result<Vec<Rational>, PoissonError> {
    targets.iter().map(|t| bracket_coefficient(t, f, g, model)).collect()
}
