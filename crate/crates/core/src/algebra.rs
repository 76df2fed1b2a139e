//! Graded supercommutative polynomials over exact rationals.
//!
//! Variables are the orbit generators `q_k` with `k` a nonzero integer; a
//! negative index denotes a momentum variable (`q_{-n} = p_n`). Monomials are
//! kept sorted by ascending signed index and every reordering of odd factors
//! contributes a Koszul sign.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact coefficient type used throughout the engine.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("orbit variable index must be nonzero")]
    ZeroIndex,
    #[error("variable with index {0} belongs to a bad orbit")]
    BadVariable(i32),
    #[error("index {index} used with conflicting gradings {first} and {second}")]
    GradingMismatch { index: i32, first: i32, second: i32 },
}

/// Which end of a monomial a graded derivative acts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One formal generator `q_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitVariable {
    index: i32,
    grading: i32,
    good: bool,
}

impl OrbitVariable {
    /// A good variable. Multiplicity is `|index|`.
    pub fn new(index: i32, grading: i32) -> Result<Self, AlgebraError> {
        Self::with_flag(index, grading, true)
    }

    /// A variable carrying an explicit good/bad flag. Bad variables can be
    /// constructed (so that models can describe them) but never enter a
    /// [`Monomial`].
    pub fn with_flag(index: i32, grading: i32, good: bool) -> Result<Self, AlgebraError> {
        if index == 0 {
            return Err(AlgebraError::ZeroIndex);
        }
        Ok(Self { index, grading, good })
    }

    pub fn index(&self) -> i32 {
        self.index
    }

    pub fn grading(&self) -> i32 {
        self.grading
    }

    pub fn is_good(&self) -> bool {
        self.good
    }

    pub fn parity(&self) -> u8 {
        self.grading.rem_euclid(2) as u8
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == 1
    }

    /// Covering multiplicity of the underlying orbit iterate.
    pub fn kappa(&self) -> u32 {
        self.index.unsigned_abs()
    }

    /// True for `p_n = q_{-n}`.
    pub fn is_momentum(&self) -> bool {
        self.index < 0
    }
}

impl fmt::Display for OrbitVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index < 0 {
            write!(f, "p_{}", -self.index)
        } else {
            write!(f, "q_{}", self.index)
        }
    }
}

/// A sorted product of good orbit variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<OrbitVariable>,
}

/// Sorts `factors` into canonical order and returns the Koszul sign of the
/// sorting permutation. `Ok(None)` means the product vanishes because an odd
/// variable is repeated.
pub fn normalize(factors: &[OrbitVariable]) -> Result<Option<(Monomial, i32)>, AlgebraError> {
    if let Some(bad) = factors.iter().find(|v| !v.good) {
        return Err(AlgebraError::BadVariable(bad.index));
    }
    let mut v = factors.to_vec();
    let mut sign = 1;
    // insertion sort; equal indices are never swapped
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1].index > v[j].index {
            if v[j - 1].is_odd() && v[j].is_odd() {
                sign = -sign;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0].index == w[1].index {
            if w[0].grading != w[1].grading {
                return Err(AlgebraError::GradingMismatch {
                    index: w[0].index,
                    first: w[0].grading,
                    second: w[1].grading,
                });
            }
            if w[0].is_odd() {
                return Ok(None);
            }
        }
    }
    Ok(Some((Monomial { factors: v }, sign)))
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a monomial from factors, failing if the product carries a
    /// nontrivial sign or vanishes. Intended for literal construction.
    pub fn from_factors(factors: &[OrbitVariable]) -> Result<Option<(Self, i32)>, AlgebraError> {
        normalize(factors)
    }

    pub fn factors(&self) -> &[OrbitVariable] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Signed sum of the factor indices.
    pub fn winding(&self) -> i64 {
        self.factors.iter().map(|v| v.index as i64).sum()
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|v| v.grading as i64).sum()
    }

    pub fn parity(&self) -> u8 {
        (self.factors.iter().filter(|v| v.is_odd()).count() % 2) as u8
    }

    pub fn indices(&self) -> Vec<i32> {
        self.factors.iter().map(|v| v.index).collect()
    }

    pub fn multiplicity(&self, index: i32) -> usize {
        self.factors.iter().filter(|v| v.index == index).count()
    }

    pub fn variable(&self, index: i32) -> Option<OrbitVariable> {
        self.factors.iter().copied().find(|v| v.index == index)
    }

    /// Supercommutative product with Koszul sign; `None` if it vanishes.
    pub fn mul(&self, other: &Monomial) -> Result<Option<(Monomial, i32)>, AlgebraError> {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut odd_left_in_a = a.iter().filter(|v| v.is_odd()).count();
        let mut sign = 1;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].index <= b[j].index {
                if a[i].index == b[j].index {
                    if a[i].grading != b[j].grading {
                        return Err(AlgebraError::GradingMismatch {
                            index: a[i].index,
                            first: a[i].grading,
                            second: b[j].grading,
                        });
                    }
                    if a[i].is_odd() {
                        return Ok(None);
                    }
                }
                if a[i].is_odd() {
                    odd_left_in_a -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if b[j].is_odd() && odd_left_in_a % 2 == 1 {
                    sign = -sign;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Some((Monomial { factors: out }, sign)))
    }

    /// Removes one copy of the variable with `index`, returning the remaining
    /// monomial and the signed integer factor of the graded derivative taken
    /// from `side`.
    pub fn derivative(&self, index: i32, side: Side) -> Option<(Monomial, i64)> {
        let positions: Vec<usize> = self
            .factors
            .iter()
            .enumerate()
            .filter(|(_, v)| v.index == index)
            .map(|(i, _)| i)
            .collect();
        let &first = positions.first()?;
        let var = self.factors[first];
        let mut rest = self.factors.clone();
        rest.remove(first);
        let coef = if var.is_odd() {
            let passed = match side {
                Side::Left => self.factors[..first].iter().filter(|v| v.is_odd()).count(),
                Side::Right => self.factors[first + 1..].iter().filter(|v| v.is_odd()).count(),
            };
            if passed % 2 == 1 {
                -1
            } else {
                1
            }
        } else {
            positions.len() as i64
        };
        Some((Monomial { factors: rest }, coef))
    }

    /// Splits into the momentum part (negative indices) and position part.
    pub fn split_momenta(&self) -> (Monomial, Monomial) {
        let cut = self.factors.iter().position(|v| v.index > 0).unwrap_or(self.factors.len());
        (
            Monomial { factors: self.factors[..cut].to_vec() },
            Monomial { factors: self.factors[cut..].to_vec() },
        )
    }

    /// Wraps an already sorted factor list. Caller guarantees the invariants.
    pub(crate) fn from_sorted(factors: Vec<OrbitVariable>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].index <= w[1].index));
        Monomial { factors }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors
            .len()
            .cmp(&other.factors.len())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let v = self.factors[i];
            let run = self.factors[i..].iter().take_while(|w| w.index == v.index).count();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{v}^{run}")?;
            } else {
                write!(f, "{v}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Degree of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degree {
    /// The zero polynomial, compatible with every degree.
    Zero,
    Homogeneous(i64),
    /// Sorted list of distinct monomial degrees.
    Inhomogeneous(Vec<i64>),
}

impl Degree {
    pub fn is_compatible_with(&self, target: i64) -> bool {
        match self {
            Degree::Zero => true,
            Degree::Homogeneous(d) => *d == target,
            Degree::Inhomogeneous(_) => false,
        }
    }
}

/// Finite linear combination of monomials with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, Rational::one());
        p
    }

    pub fn variable(v: OrbitVariable) -> Result<Self, AlgebraError> {
        Self::product(&[v], Rational::one())
    }

    /// `coef` times the ordered product of `factors`.
    pub fn product(factors: &[OrbitVariable], coef: Rational) -> Result<Self, AlgebraError> {
        let mut p = Self::zero();
        if let Some((m, s)) = normalize(factors)? {
            p.add_term(m, coef * integer(s as i64));
        }
        Ok(p)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m`, dropping the entry if the coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter<F: FnMut(&Monomial, &Rational) -> bool>(&self, mut keep: F) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Supercommutative product.
    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((m, s)) = a.mul(b)? {
                    let c = ca * cb;
                    out.add_term(m, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Graded partial derivative with respect to the variable of `index`.
    pub fn partial(&self, index: i32, side: Side) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((rest, k)) = m.derivative(index, side) {
                out.add_term(rest, c * integer(k));
            }
        }
        out
    }

    pub fn degree(&self) -> Degree {
        let degrees: BTreeSet<i64> = self.terms.keys().map(Monomial::degree).collect();
        match degrees.len() {
            0 => Degree::Zero,
            1 => Degree::Homogeneous(*degrees.iter().next().unwrap()),
            _ => Degree::Inhomogeneous(degrees.into_iter().collect()),
        }
    }

    /// `(even part, odd part)`.
    pub fn parity_parts(&self) -> (Polynomial, Polynomial) {
        (self.filter(|m, _| m.parity() == 0), self.filter(|m, _| m.parity() == 1))
    }

    /// Common parity of all terms, or `None` for mixed parity. The zero
    /// polynomial reports even.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    pub fn variables(&self) -> BTreeSet<OrbitVariable> {
        self.terms.keys().flat_map(|m| m.factors().iter().copied()).collect()
    }

    pub fn max_abs_index(&self) -> u32 {
        self.variables().iter().map(|v| v.kappa()).max().unwrap_or(0)
    }

    pub fn is_winding_zero(&self) -> bool {
        self.terms.keys().all(|m| m.winding() == 0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} {m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

/// Panics if the operands use one index with two different gradings; use
/// [`Polynomial::try_mul`] when mixing inputs from unknown sources.
impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials over inconsistent gradings")
    }
}
