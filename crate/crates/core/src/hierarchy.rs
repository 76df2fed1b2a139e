//! Descendant Hamiltonians: the dispersionless KdV sequence of the circle,
//! its degree-filtered restriction to a single orbit, and commutativity
//! sweeps over a window of output monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Monomial, OrbitVariable, Polynomial, Rational};
use crate::orbits::{ModelError, OrbitModel, SignAssignment};
use crate::poisson::{bracket_coefficient, PoissonError, SeriesSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("cutoff must be at least 1")]
    ZeroCutoff,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("sign search over {free} free signs exceeds the limit of 2^{limit_log2} assignments")]
    SearchTooLarge { free: usize, limit_log2: u32 },
}

/// Which monomials of the circle hierarchy survive in the filtered one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeFilter {
    /// Keep degree exactly `2(m + j - 3)`.
    #[default]
    Target,
    /// Keep everything (ε still applies).
    None,
    /// Keep the largest degree present in the window.
    Max,
    /// Keep one explicit degree.
    Exact(i64),
}

impl fmt::Display for DegreeFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeFilter::Target => write!(f, "target"),
            DegreeFilter::None => write!(f, "none"),
            DegreeFilter::Max => write!(f, "max"),
            DegreeFilter::Exact(d) => write!(f, "degree={d}"),
        }
    }
}

impl FromStr for DegreeFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "target" => Ok(DegreeFilter::Target),
            "none" => Ok(DegreeFilter::None),
            "max" => Ok(DegreeFilter::Max),
            other => other
                .strip_prefix("degree=")
                .and_then(|d| d.parse().ok())
                .map(DegreeFilter::Exact)
                .ok_or_else(|| format!("unknown degree filter {other:?}")),
        }
    }
}

/// `2(m + j - 3)`.
pub fn target_degree(model: &OrbitModel, j: u32) -> i64 {
    2 * (model.m + j as i64 - 3)
}

/// Grading of the formal time `t_j` attached to a form of degree
/// `theta_degree`: `2(1 - j) - theta_degree`.
pub fn t_grading(j: u32, theta_degree: u32) -> i64 {
    2 * (1 - j as i64) - theta_degree as i64
}

/// `1 / prod(mult!)` over the multiplicities of a sorted index list: the
/// number of orderings divided by `len!`.
pub fn symmetry_weight(sorted: &[i32]) -> Rational {
    let mut denom = BigInt::one();
    let mut run = 0u64;
    for (i, k) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *k { run + 1 } else { 1 };
        denom *= BigInt::from(run);
    }
    Rational::new(BigInt::one(), denom)
}

/// Sorted multisets of `len` entries from `alphabet` (ascending, nonzero)
/// whose sum is zero.
pub fn winding_zero_multisets(alphabet: &[i32], len: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    if alphabet.is_empty() {
        if len == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let hi = *alphabet.last().unwrap() as i64;
    let mut current = Vec::with_capacity(len);
    fn rec(
        alphabet: &[i32],
        start: usize,
        left: usize,
        sum: i64,
        hi: i64,
        current: &mut Vec<i32>,
        out: &mut Vec<Vec<i32>>,
    ) {
        if left == 0 {
            if sum == 0 {
                out.push(current.clone());
            }
            return;
        }
        for i in start..alphabet.len() {
            let k = alphabet[i] as i64;
            let s = sum + k;
            let rest = left as i64 - 1;
            // remaining entries are >= k and <= hi
            if s + rest * k > 0 {
                break;
            }
            if s + rest * hi < 0 {
                continue;
            }
            current.push(alphabet[i]);
            rec(alphabet, i, left - 1, s, hi, current, out);
            current.pop();
        }
    }
    rec(alphabet, 0, len, 0, hi, &mut current, &mut out);
    out
}

fn monomial_of(vars: &[OrbitVariable]) -> Option<Monomial> {
    // entries are sorted; a repeated odd variable kills the product
    if vars.windows(2).any(|w| w[0].index() == w[1].index() && w[0].is_odd()) {
        return None;
    }
    Some(crate::algebra::normalize(vars).ok()??.0)
}

/// Truncation of the circle hierarchy at level `j`: every winding-zero
/// multiset of `j + 2` indices in `[-cutoff, cutoff] \ {0}`, weighted by
/// `1 / prod(mult!)`.
pub fn kdv(j: u32, cutoff: u32) -> Polynomial {
    let model = OrbitModel::circle();
    let alphabet = model.good_indices(cutoff).expect("circle is total");
    let mut p = Polynomial::zero();
    for ks in winding_zero_multisets(&alphabet, j as usize + 2) {
        let vars: Vec<_> = ks.iter().map(|&k| model.variable(k).unwrap()).collect();
        let m = monomial_of(&vars).expect("circle variables are even");
        p.add_term(m, symmetry_weight(&ks));
    }
    p
}

/// Replaces `Max` by the largest degree realised in the window; other
/// filters are returned unchanged.
pub fn resolve_filter(
    model: &OrbitModel,
    j: u32,
    cutoff: u32,
    filter: DegreeFilter,
) -> Result<DegreeFilter, ModelError> {
    if filter != DegreeFilter::Max {
        return Ok(filter);
    }
    model.check_cutoff(cutoff)?;
    let alphabet = model.good_indices(cutoff)?;
    let mut best: Option<i64> = None;
    for ks in winding_zero_multisets(&alphabet, j as usize + 2) {
        let vars: Vec<_> = ks.iter().map(|&k| model.variable(k)).collect::<Result<_, _>>()?;
        if monomial_of(&vars).is_none() {
            continue;
        }
        let d: i64 = vars.iter().map(|v| v.grading() as i64).sum();
        best = Some(best.map_or(d, |b| b.max(d)));
    }
    // an empty window keeps nothing; any degree works
    Ok(DegreeFilter::Exact(best.unwrap_or(i64::MIN)))
}

/// The filtered hierarchy at level `j`: the circle monomials built from good
/// variables, restricted by `filter` and multiplied by ε.
pub fn filtered(
    model: &OrbitModel,
    j: u32,
    cutoff: u32,
    filter: DegreeFilter,
) -> Result<Polynomial, HierarchyError> {
    if cutoff == 0 {
        return Err(HierarchyError::ZeroCutoff);
    }
    model.check_cutoff(cutoff)?;
    let filter = resolve_filter(model, j, cutoff, filter)?;
    let target = target_degree(model, j);
    let alphabet = model.good_indices(cutoff)?;
    let mut p = Polynomial::zero();
    for ks in winding_zero_multisets(&alphabet, j as usize + 2) {
        let vars: Vec<_> = ks.iter().map(|&k| model.variable(k)).collect::<Result<_, _>>()?;
        let Some(m) = monomial_of(&vars) else { continue };
        let keep = match filter {
            DegreeFilter::None => true,
            DegreeFilter::Target => m.degree() == target,
            DegreeFilter::Exact(d) => m.degree() == d,
            DegreeFilter::Max => unreachable!("resolved above"),
        };
        if !keep {
            continue;
        }
        let eps = model.epsilon(&ks)?;
        if eps == 0 {
            continue;
        }
        let w = symmetry_weight(&ks);
        p.add_term(m, if eps < 0 { -w } else { w });
    }
    Ok(p)
}

/// The hierarchy attached to a zero-form string: identically zero.
pub fn zero_form(_j: u32, _cutoff: u32) -> Polynomial {
    Polynomial::zero()
}

/// Parameters of one generated Hamiltonian.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchySpec {
    pub model: OrbitModel,
    pub j: u32,
    pub cutoff: u32,
    #[serde(default)]
    pub filter: DegreeFilter,
}

impl HierarchySpec {
    pub fn generate(&self) -> Result<Polynomial, HierarchyError> {
        filtered(&self.model, self.j, self.cutoff, self.filter)
    }

    /// Degree the filter targets, next to the degree the circle monomials
    /// actually carry (`-2(j + 2)` for `m = 1`); they differ for `j > 0`.
    pub fn degree_report(&self) -> (i64, i64) {
        let circle = (self.j as i64 + 2) * (self.model.m - 3);
        (target_degree(&self.model, self.j), circle)
    }
}

/// Result of a commutativity sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommuteReport {
    pub window: u32,
    pub targets_checked: usize,
    /// Nonzero coefficients of `{f, g}`, in canonical monomial order.
    pub residuals: Vec<(Monomial, Rational)>,
}

impl CommuteReport {
    pub fn passes(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Winding-zero monomials of the given lengths over the good variables of
/// `model` with `|index| <= window`, in canonical order.
pub fn window_targets(model: &OrbitModel, lengths: &[usize], window: u32) -> Result<Vec<Monomial>, ModelError> {
    model.check_cutoff(window)?;
    let alphabet = model.good_indices(window)?;
    let mut out = Vec::new();
    for &len in lengths {
        for ks in winding_zero_multisets(&alphabet, len) {
            let vars: Vec<_> = ks.iter().map(|&k| model.variable(k)).collect::<Result<_, _>>()?;
            if let Some(m) = monomial_of(&vars) {
                out.push(m);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Computes every coefficient of `{f, g}` on the window exactly. Work is
/// spread over the current rayon pool; the report order does not depend on
/// the number of workers.
pub fn verify_commute(
    f: &SeriesSpec,
    g: &SeriesSpec,
    model: &OrbitModel,
    window: u32,
) -> Result<CommuteReport, HierarchyError> {
    if window == 0 {
        return Err(HierarchyError::ZeroCutoff);
    }
    let mut lengths: Vec<usize> = Vec::new();
    for a in f.lengths() {
        for b in g.lengths() {
            if a + b >= 2 {
                lengths.push(a + b - 2);
            }
        }
    }
    lengths.sort_unstable();
    lengths.dedup();
    let targets = window_targets(model, &lengths, window)?;
    let coefficients: Vec<Result<Rational, PoissonError>> =
        targets.par_iter().map(|t| bracket_coefficient(t, f, g, model)).collect();
    let mut residuals = Vec::new();
    for (t, c) in targets.iter().zip(coefficients) {
        let c = c?;
        if !c.is_zero() {
            residuals.push((t.clone(), c));
        }
    }
    Ok(CommuteReport { window, targets_checked: targets.len(), residuals })
}

/// Base-2 log of the largest number of assignments `sign_search` will try.
pub const SIGN_SEARCH_LIMIT_LOG2: u32 = 16;

/// Outcome of a sign search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSearchReport {
    /// Signed indices whose sign was varied.
    pub free_indices: Vec<i32>,
    pub tried: usize,
    /// Assignments for which the two filtered Hamiltonians commute on the
    /// window, in enumeration order.
    pub passing: Vec<BTreeMap<i32, i8>>,
}

/// Tries every multiplicative sign assignment on the good signed indices
/// with `|index| <= bound` and keeps those making levels `j` and `k` of the
/// filtered hierarchy commute on the window.
pub fn sign_search(
    model: &OrbitModel,
    j: u32,
    k: u32,
    window: u32,
    bound: u32,
    filter: DegreeFilter,
) -> Result<SignSearchReport, HierarchyError> {
    model.check_cutoff(bound.max(window))?;
    let free = model.good_indices(bound)?;
    if free.len() > SIGN_SEARCH_LIMIT_LOG2 as usize {
        return Err(HierarchyError::SearchTooLarge { free: free.len(), limit_log2: SIGN_SEARCH_LIMIT_LOG2 });
    }
    let total = 1usize << free.len();
    let mut passing = Vec::new();
    for mask in 0..total {
        let per_index: BTreeMap<i32, i8> = free
            .iter()
            .enumerate()
            .map(|(bit, &idx)| (idx, if mask >> bit & 1 == 1 { -1 } else { 1 }))
            .collect();
        let signed_model = model.with_signs(SignAssignment::Multiplicative { per_index: per_index.clone() })?;
        let f = SeriesSpec::filtered(signed_model.clone(), j, filter, window)?;
        let g = SeriesSpec::filtered(signed_model.clone(), k, filter, window)?;
        if verify_commute(&f, &g, &signed_model, window)?.passes() {
            passing.push(per_index);
        }
    }
    Ok(SignSearchReport { free_indices: free, tried: total, passing })
}
