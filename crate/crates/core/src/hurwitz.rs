//! Branched covers of the cylinder counted through permutation
//! factorizations, the branching Hamiltonians they generate for the circle,
//! and the linear solve expressing the circle hierarchy through them.
//!
//! A cover of degree `d` with end monodromies of cycle types `lambda+`,
//! `lambda-` and one interior branch point of profile `nu` is a triple
//! `(sigma+, tau, sigma-)` in `S_d` with `sigma+ tau sigma- = id`. Covers are
//! weighted by `1/d!`, so `count = #triples / d!`. With `sigma+` fixed to a
//! representative of its class this becomes `#tau / z(lambda+)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{integer, normalize, Monomial, Polynomial, Rational};
use crate::hierarchy::kdv;
use crate::orbits::OrbitModel;

/// Largest degree `count` enumerates unless told otherwise.
pub const DEFAULT_MAX_DEGREE: u32 = 7;
/// Largest degree used when assembling branching Hamiltonians.
pub const BRANCHING_MAX_DEGREE: u32 = 10;
/// Largest conjugacy class that will be enumerated.
pub const MAX_CLASS_SIZE: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    #[error("{what} {parts:?} is not a partition of {d}")]
    NotPartition { what: &'static str, parts: Vec<u32>, d: u32 },
    #[error("profile must have at least one part, all positive")]
    BadProfile,
    #[error("cannot parse profile {0:?}")]
    Parse(String),
    #[error("degree {d} exceeds the enumeration bound {max}")]
    DegreeBound { d: u32, max: u32 },
    #[error("conjugacy class of size {size} exceeds the bound {max}")]
    ClassTooLarge { size: u64, max: u64 },
    #[error("Riemann-Hurwitz gives 2 - 2g = {chi}, which has no genus g >= 0")]
    Genus { chi: i64 },
    #[error("linear system is inconsistent: {rows} equations cannot be met")]
    Inconsistent { rows: usize },
    #[error("linear system is under-determined: null space of dimension {nullity}")]
    Underdetermined { nullity: usize },
}

/// Nonincreasing tuple of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct BranchingProfile {
    parts: Vec<u32>,
}

impl BranchingProfile {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, HurwitzError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(HurwitzError::BadProfile);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn single(k: u32) -> Self {
        Self::new(vec![k]).expect("positive part")
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl TryFrom<Vec<u32>> for BranchingProfile {
    type Error = HurwitzError;
    fn try_from(parts: Vec<u32>) -> Result<Self, HurwitzError> {
        Self::new(parts)
    }
}

impl From<BranchingProfile> for Vec<u32> {
    fn from(p: BranchingProfile) -> Vec<u32> {
        p.parts
    }
}

impl FromStr for BranchingProfile {
    type Err = HurwitzError;
    fn from_str(s: &str) -> Result<Self, HurwitzError> {
        let parts = parse_parts(s)?;
        Self::new(parts)
    }
}

impl fmt::Display for BranchingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Parses `"2,1,1"` (spaces and surrounding parentheses allowed).
pub fn parse_parts(s: &str) -> Result<Vec<u32>, HurwitzError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    t.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| HurwitzError::Parse(s.to_string())))
        .collect()
}

/// Degree, end partitions and interior profile of a cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorizationSpec {
    pub d: u32,
    pub lambda_plus: Vec<u32>,
    pub lambda_minus: Vec<u32>,
    pub nu: Vec<u32>,
    pub connected: bool,
}

fn sorted_partition(what: &'static str, parts: Vec<u32>, d: u32) -> Result<Vec<u32>, HurwitzError> {
    let mut p = parts;
    p.sort_unstable_by(|a, b| b.cmp(a));
    if p.is_empty() || p.contains(&0) || p.iter().sum::<u32>() != d {
        return Err(HurwitzError::NotPartition { what, parts: p, d });
    }
    Ok(p)
}

impl FactorizationSpec {
    pub fn new(
        d: u32,
        lambda_plus: Vec<u32>,
        lambda_minus: Vec<u32>,
        nu: Vec<u32>,
        connected: bool,
    ) -> Result<Self, HurwitzError> {
        Ok(Self {
            d,
            lambda_plus: sorted_partition("lambda+", lambda_plus, d)?,
            lambda_minus: sorted_partition("lambda-", lambda_minus, d)?,
            nu: sorted_partition("nu", nu, d)?,
            connected,
        })
    }

    fn validate(&self) -> Result<(), HurwitzError> {
        Self::new(self.d, self.lambda_plus.clone(), self.lambda_minus.clone(), self.nu.clone(), self.connected)
            .map(|_| ())
    }
}

/// Centralizer order `prod i^{m_i} m_i!` of a permutation of cycle type
/// `lambda`.
pub fn centralizer_order(lambda: &[u32]) -> BigInt {
    let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
    for &p in lambda {
        *mult.entry(p).or_default() += 1;
    }
    let mut z = BigInt::one();
    for (part, m) in mult {
        for i in 1..=m {
            z *= BigInt::from(part) * BigInt::from(i);
        }
    }
    z
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Size `d! / z(lambda)` of the conjugacy class.
pub fn class_size(lambda: &[u32]) -> BigInt {
    factorial(lambda.iter().sum()) / centralizer_order(lambda)
}

/// Permutations are stored as images: `perm[i]` is the image of `i`.
pub type Permutation = Vec<u8>;

/// The permutation with consecutive cycles of the given lengths.
pub fn canonical_permutation(lambda: &[u32]) -> Permutation {
    let d: u32 = lambda.iter().sum();
    let mut perm = vec![0u8; d as usize];
    let mut start = 0usize;
    for &len in lambda {
        let len = len as usize;
        for i in 0..len {
            perm[start + i] = (start + (i + 1) % len) as u8;
        }
        start += len;
    }
    perm
}

/// Cycle type, as a nonincreasing partition.
pub fn cycle_type(perm: &[u8]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// `(a b)(i) = a(b(i))`.
pub fn compose(a: &[u8], b: &[u8]) -> Permutation {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Every permutation of cycle type `nu`, each exactly once. The cycle through
/// the smallest unused point is chosen first, starting at that point.
pub fn conjugacy_class(nu: &[u32]) -> Vec<Permutation> {
    let d: u32 = nu.iter().sum();
    let mut remaining: BTreeMap<u32, u32> = BTreeMap::new();
    for &p in nu {
        *remaining.entry(p).or_default() += 1;
    }
    let mut out = Vec::new();
    let mut perm = vec![u8::MAX; d as usize];
    let mut used = vec![false; d as usize];
    class_rec(&mut remaining, &mut perm, &mut used, &mut out);
    out
}

fn class_rec(
    remaining: &mut BTreeMap<u32, u32>,
    perm: &mut Vec<u8>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let Some(first) = used.iter().position(|u| !u) else {
        out.push(perm.clone());
        return;
    };
    let lengths: Vec<u32> = remaining.iter().filter(|(_, &c)| c > 0).map(|(&l, _)| l).collect();
    for len in lengths {
        *remaining.get_mut(&len).unwrap() -= 1;
        used[first] = true;
        let mut cycle = vec![first];
        arrange(len as usize - 1, &mut cycle, remaining, perm, used, out);
        used[first] = false;
        *remaining.get_mut(&len).unwrap() += 1;
    }
}

fn arrange(
    left: usize,
    cycle: &mut Vec<usize>,
    remaining: &mut BTreeMap<u32, u32>,
    perm: &mut Vec<u8>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    if left == 0 {
        for w in 0..cycle.len() {
            perm[cycle[w]] = cycle[(w + 1) % cycle.len()] as u8;
        }
        class_rec(remaining, perm, used, out);
        return;
    }
    for x in 0..used.len() {
        if used[x] {
            continue;
        }
        used[x] = true;
        cycle.push(x);
        arrange(left - 1, cycle, remaining, perm, used, out);
        cycle.pop();
        used[x] = false;
    }
}

/// Whether the group generated by `a` and `b` acts transitively.
pub fn transitive(a: &[u8], b: &[u8]) -> bool {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut components = n;
    for perm in [a, b] {
        for (i, &j) in perm.iter().enumerate() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j as usize));
            if ri != rj {
                parent[ri] = rj;
                components -= 1;
            }
        }
    }
    components <= 1
}

/// Cycle type of `sigma+ tau` mapped to the number of `tau` producing it.
type HitTable = BTreeMap<Vec<u32>, u64>;
type HitMemo = HashMap<(Vec<u32>, Vec<u32>), Arc<HitTable>>;

/// For fixed `sigma+` of type `lambda+`, the number of `tau` of type `nu`
/// with `sigma+ tau` of each cycle type.
fn hit_table(lambda_plus: &[u32], nu: &[u32], connected: bool) -> HitTable {
    let sigma = canonical_permutation(lambda_plus);
    conjugacy_class(nu)
        .par_iter()
        .fold(BTreeMap::new, |mut acc: HitTable, tau| {
            if !connected || transitive(&sigma, tau) {
                *acc.entry(cycle_type(&compose(&sigma, tau))).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        })
}

fn check_bounds(d: u32, nu: &[u32], max_degree: u32) -> Result<(), HurwitzError> {
    if d > max_degree {
        return Err(HurwitzError::DegreeBound { d, max: max_degree });
    }
    let size = class_size(nu);
    if size > BigInt::from(MAX_CLASS_SIZE) {
        return Err(HurwitzError::ClassTooLarge { size: u64::try_from(size).unwrap_or(u64::MAX), max: MAX_CLASS_SIZE });
    }
    Ok(())
}

/// Weighted number of covers `#{(sigma+, tau, sigma-)} / d!`, enumerating up
/// to degree `max_degree`.
pub fn count_bounded(spec: &FactorizationSpec, max_degree: u32) -> Result<Rational, HurwitzError> {
    spec.validate()?;
    check_bounds(spec.d, &spec.nu, max_degree)?;
    let table = hit_table(&spec.lambda_plus, &spec.nu, spec.connected);
    let hits = table.get(&spec.lambda_minus).copied().unwrap_or(0);
    Ok(Rational::new(BigInt::from(hits), centralizer_order(&spec.lambda_plus)))
}

/// [`count_bounded`] with the default degree bound.
pub fn count(spec: &FactorizationSpec) -> Result<Rational, HurwitzError> {
    count_bounded(spec, DEFAULT_MAX_DEGREE)
}

/// Genus from Riemann-Hurwitz, `2 - 2g = l(lambda+) + l(lambda-) + l(nu) - d`.
pub fn genus(spec: &FactorizationSpec) -> Result<u32, HurwitzError> {
    spec.validate()?;
    let chi = (spec.lambda_plus.len() + spec.lambda_minus.len() + spec.nu.len()) as i64 - spec.d as i64;
    if chi > 2 || (2 - chi) % 2 != 0 {
        return Err(HurwitzError::Genus { chi });
    }
    Ok(((2 - chi) / 2) as u32)
}

/// Settings and memoised hit tables shared by branching computations.
/// Clones share the memo.
#[derive(Clone, Debug)]
pub struct BranchingContext {
    pub max_degree: u32,
    /// Global factor per profile, 1 when absent.
    pub calibration: BTreeMap<BranchingProfile, Rational>,
    memo: Arc<Mutex<HitMemo>>,
}

impl Default for BranchingContext {
    fn default() -> Self {
        Self { max_degree: BRANCHING_MAX_DEGREE, calibration: BTreeMap::new(), memo: Arc::default() }
    }
}

impl BranchingContext {
    fn hits(&self, lambda_plus: &[u32], nu: &[u32]) -> Result<Arc<HitTable>, HurwitzError> {
        let key = (lambda_plus.to_vec(), nu.to_vec());
        if let Some(t) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(t.clone());
        }
        check_bounds(nu.iter().sum(), nu, self.max_degree)?;
        let table = Arc::new(hit_table(lambda_plus, nu, true));
        self.memo.lock().expect("memo lock").insert(key, table.clone());
        Ok(table)
    }

    /// Connected genus-0 count with one branch point of order `k - 1`.
    fn connected_count(&self, k: u32, lambda_plus: &[u32], lambda_minus: &[u32]) -> Result<Rational, HurwitzError> {
        let d: u32 = lambda_plus.iter().sum();
        let mut nu = vec![k];
        nu.extend(std::iter::repeat_n(1, (d - k) as usize));
        let hits = self.hits(lambda_plus, &nu)?.get(lambda_minus).copied().unwrap_or(0);
        Ok(Rational::new(BigInt::from(hits), centralizer_order(lambda_plus)))
    }

    fn factor(&self, mu: &BranchingProfile) -> Rational {
        self.calibration.get(mu).cloned().unwrap_or_else(Rational::one)
    }
}

/// Marked points on the special fibre: the parts of `nu = (k, 1^{d-k})`
/// equal to `k`.
fn marked_choices(k: u32, d: u32) -> u32 {
    if k == 1 {
        d
    } else {
        1
    }
}

/// Coefficient of `p^{lambda+} q^{lambda-}` (given as sorted signed indices)
/// in the single-part branching Hamiltonian `h_(k)`.
fn single_coefficient(k: u32, indices: &[i32], ctx: &BranchingContext) -> Result<Rational, HurwitzError> {
    if indices.len() != k as usize + 1 {
        return Ok(Rational::zero());
    }
    let mut lambda_plus: Vec<u32> = indices.iter().filter(|&&i| i < 0).map(|i| i.unsigned_abs()).collect();
    let mut lambda_minus: Vec<u32> = indices.iter().filter(|&&i| i > 0).map(|&i| i as u32).collect();
    let d: u32 = lambda_plus.iter().sum();
    if lambda_plus.is_empty() || lambda_minus.is_empty() || d != lambda_minus.iter().sum::<u32>() || d < k {
        return Ok(Rational::zero());
    }
    lambda_plus.sort_unstable_by(|a, b| b.cmp(a));
    lambda_minus.sort_unstable_by(|a, b| b.cmp(a));
    Ok(ctx.connected_count(k, &lambda_plus, &lambda_minus)? * integer(marked_choices(k, d) as i64))
}

/// Coefficient of `mono` in the untruncated branching Hamiltonian of `mu`
/// (circle variables only). Multi-part profiles are products of their
/// single-part factors.
pub fn branching_coefficient(
    mu: &BranchingProfile,
    mono: &Monomial,
    ctx: &BranchingContext,
) -> Result<Rational, HurwitzError> {
    let indices = mono.indices();
    let total: usize = mu.parts().iter().map(|&k| k as usize + 1).sum();
    if indices.len() != total || indices.iter().map(|&i| i as i64).sum::<i64>() != 0 {
        return Ok(Rational::zero());
    }
    let raw = product_coefficient(mu.parts(), &indices, ctx)?;
    Ok(raw * ctx.factor(mu))
}

fn product_coefficient(parts: &[u32], indices: &[i32], ctx: &BranchingContext) -> Result<Rational, HurwitzError> {
    let (&k, rest) = parts.split_first().expect("nonempty profile");
    if rest.is_empty() {
        return single_coefficient(k, indices, ctx);
    }
    // distinct sub-multisets of size k + 1 for the first factor
    let mut total = Rational::zero();
    for (chosen, left) in sub_multisets(indices, k as usize + 1) {
        if chosen.iter().map(|&i| i as i64).sum::<i64>() != 0 {
            continue;
        }
        let a = single_coefficient(k, &chosen, ctx)?;
        if a.is_zero() {
            continue;
        }
        total += a * product_coefficient(rest, &left, ctx)?;
    }
    Ok(total)
}

/// Distinct sub-multisets of a sorted list with their complements.
fn sub_multisets(sorted: &[i32], size: usize) -> Vec<(Vec<i32>, Vec<i32>)> {
    let mut groups: Vec<(i32, usize)> = Vec::new();
    for &x in sorted {
        match groups.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = Vec::new();
    fn rec(
        groups: &[(i32, usize)],
        need: usize,
        chosen: &mut Vec<i32>,
        left: &mut Vec<i32>,
        out: &mut Vec<(Vec<i32>, Vec<i32>)>,
    ) {
        let Some((&(v, c), rest)) = groups.split_first() else {
            if need == 0 {
                out.push((chosen.clone(), left.clone()));
            }
            return;
        };
        for take in 0..=c.min(need) {
            chosen.extend(std::iter::repeat_n(v, take));
            left.extend(std::iter::repeat_n(v, c - take));
            rec(rest, need - take, chosen, left, out);
            chosen.truncate(chosen.len() - take);
            left.truncate(left.len() - (c - take));
        }
    }
    rec(&groups, size, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` into exactly `len` parts, each at most `max_part`,
/// nonincreasing.
pub fn partitions_with_length(n: u32, len: u32, max_part: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, len: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if n < len || n > len * max_part {
            return;
        }
        for p in (1..=max_part.min(n)).rev() {
            cur.push(p);
            rec(n - p, len - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, len, max_part, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `n`, nonincreasing, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    (1..=n).flat_map(|len| partitions_with_length(n, len, n)).collect()
}

/// `h_(k)` truncated to `|index| <= cutoff`.
fn single_hamiltonian(k: u32, cutoff: u32, ctx: &BranchingContext) -> Result<Polynomial, HurwitzError> {
    let model = OrbitModel::circle();
    let mut out = Polynomial::zero();
    for lp in 1..=k {
        let lm = k + 1 - lp;
        let top = cutoff * lp.min(lm);
        for d in k..=top {
            for plus in partitions_with_length(d, lp, cutoff) {
                for minus in partitions_with_length(d, lm, cutoff) {
                    let c = ctx.connected_count(k, &plus, &minus)? * integer(marked_choices(k, d) as i64);
                    if c.is_zero() {
                        continue;
                    }
                    let vars: Vec<_> = plus
                        .iter()
                        .map(|&n| -(n as i32))
                        .chain(minus.iter().map(|&n| n as i32))
                        .map(|i| model.variable(i).expect("circle variable"))
                        .collect();
                    let (m, _) = normalize(&vars).expect("good").expect("even");
                    out.add_term(m, c);
                }
            }
        }
    }
    Ok(out)
}

/// Branching Hamiltonian of `mu` on the circle, truncated at `cutoff`. A
/// cutoff too small to realise the profile gives the zero polynomial.
pub fn branching_hamiltonian(
    mu: &BranchingProfile,
    cutoff: u32,
    ctx: &BranchingContext,
) -> Result<Polynomial, HurwitzError> {
    let mut out = Polynomial::one();
    for &k in mu.parts() {
        out = &out * &single_hamiltonian(k, cutoff, ctx)?;
    }
    Ok(out.scale(&ctx.factor(mu)))
}

/// Profiles `mu` with `|mu| <= j` and `|mu| + l(mu) = j + 2`: the genus-0
/// corrections allowed at level `j`.
pub fn correction_candidates(j: u32) -> Vec<BranchingProfile> {
    let mut out = Vec::new();
    for size in 1..=j {
        for p in partitions(size) {
            if size + p.len() as u32 == j + 2 {
                out.push(BranchingProfile::new(p).expect("partition"));
            }
        }
    }
    out
}

/// Exact decomposition of the level-`j` circle Hamiltonian into branching
/// Hamiltonians on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoSolution {
    pub j: u32,
    pub cutoff: u32,
    /// Coefficient of `h_(j+1)`.
    #[serde(with = "crate::json::rational_string")]
    pub leading: Rational,
    /// Coefficients of the corrections, in the order they were requested.
    pub rho: Vec<RhoEntry>,
    /// Number of monomials matched.
    pub equations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoEntry {
    pub mu: BranchingProfile,
    #[serde(with = "crate::json::rational_string")]
    pub value: Rational,
}

/// Solves `h_j = c h_(j+1) + sum rho_mu h_mu` by matching every monomial with
/// `|index| <= cutoff`. `profiles` defaults to [`correction_candidates`].
pub fn solve_rho(
    j: u32,
    cutoff: u32,
    profiles: Option<&[BranchingProfile]>,
    ctx: &BranchingContext,
) -> Result<RhoSolution, HurwitzError> {
    let lead = BranchingProfile::single(j + 1);
    let candidates: Vec<BranchingProfile> = match profiles {
        Some(p) => p.iter().filter(|m| **m != lead).cloned().collect(),
        None => correction_candidates(j),
    };
    let mut columns = vec![branching_hamiltonian(&lead, cutoff, ctx)?];
    for mu in &candidates {
        columns.push(branching_hamiltonian(mu, cutoff, ctx)?);
    }
    let rhs = kdv(j, cutoff);

    let mut rows: Vec<Monomial> = rhs.terms().map(|(m, _)| m.clone()).collect();
    for c in &columns {
        rows.extend(c.terms().map(|(m, _)| m.clone()));
    }
    rows.sort();
    rows.dedup();

    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .map(|m| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c.coefficient(m)).collect();
            row.push(rhs.coefficient(m));
            row
        })
        .collect();
    let x = solve_exact(matrix, columns.len())?;
    Ok(RhoSolution {
        j,
        cutoff,
        leading: x[0].clone(),
        rho: candidates.into_iter().zip(x.into_iter().skip(1)).map(|(mu, value)| RhoEntry { mu, value }).collect(),
        equations: rows.len(),
    })
}

/// Gauss-Jordan elimination on an augmented matrix with `unknowns` columns
/// plus the right-hand side. Requires a unique solution.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, unknowns: usize) -> Result<Vec<Rational>, HurwitzError> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(pivot_row, r);
        let inv = Rational::one() / a[pivot_row][col].clone();
        for v in a[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..a.len() {
            if r == pivot_row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot = a[pivot_row][col..=unknowns].to_vec();
            for (x, p) in a[r][col..=unknowns].iter_mut().zip(&pivot) {
                *x -= &factor * p;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    let bad = a[pivot_row..].iter().filter(|row| !row[unknowns].is_zero()).count();
    if bad > 0 {
        return Err(HurwitzError::Inconsistent { rows: bad });
    }
    if pivots.len() < unknowns {
        return Err(HurwitzError::Underdetermined { nullity: unknowns - pivots.len() });
    }
    Ok((0..unknowns).map(|i| a[i][unknowns].clone()).collect())
}
