//! The hbar-deformed Weyl algebra in normal order, its star product and
//! commutator, and the differential-operator actions on the boundary module
//! of a cobordism.
//!
//! A Weyl monomial is stored as `hbar^e * Q * P` with every position variable
//! in `Q` to the left of every momentum in `P`. The only non-supercommuting
//! pairs are `p_n, q_n` of the same iterate, with
//! `p_n * q_n - (-1)^{|p_n||q_n|} q_n * p_n = n hbar`.
//!
//! The boundary module holds polynomials in the `q^-` variables of the
//! negative end and the `p^+` variables of the positive end. Elements of the
//! negative-end algebra act from the left via `p^-_n -> n hbar d/dq^-_n`,
//! elements of the positive-end algebra from the right via
//! `q^+_n -> n hbar d/dp^+_n`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{integer, AlgebraError, Degree, Monomial, Polynomial, Rational, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("operator and module disagree on the grading of index {index}")]
    AlphabetMismatch { index: i32 },
    #[error("potential must be even to exponentiate; term {0} is odd")]
    OddPotential(String),
    #[error("operator term uses a position variable with negative index {0}")]
    NotNormalOrdered(i32),
}

/// Normal-ordered Weyl monomial `hbar^hbar * q * p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylKey {
    pub hbar: i32,
    pub q: Monomial,
    pub p: Monomial,
}

impl WeylKey {
    pub fn parity(&self) -> u8 {
        (self.q.parity() + self.p.parity()) % 2
    }

    pub fn degree(&self, hbar_grading: i64) -> i64 {
        self.hbar as i64 * hbar_grading + self.q.degree() + self.p.degree()
    }
}

impl fmt::Display for WeylKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.hbar {
            0 => {}
            1 => parts.push("hbar".to_string()),
            e => parts.push(format!("hbar^{e}")),
        }
        if !self.q.is_empty() {
            parts.push(self.q.to_string());
        }
        if !self.p.is_empty() {
            parts.push(self.p.to_string());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// Finite element of `hbar^{-1} W`, possibly with lower hbar powers after
/// products.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeylElement {
    terms: BTreeMap<WeylKey, Rational>,
}

impl WeylElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::single(WeylKey { hbar: 0, q: Monomial::one(), p: Monomial::one() }, Rational::one())
    }

    pub fn single(key: WeylKey, c: Rational) -> Self {
        let mut w = Self::zero();
        w.add_term(key, c);
        w
    }

    /// Embeds an hbar-free polynomial, multiplied by `hbar^hbar`, using the
    /// normal-ordered symbol (momenta moved to the right with Koszul sign).
    pub fn from_polynomial(f: &Polynomial, hbar: i32) -> Self {
        let mut w = Self::zero();
        for (m, c) in f.terms() {
            let (p, q) = m.split_momenta();
            let c = if p.parity() * q.parity() == 1 { -c.clone() } else { c.clone() };
            w.add_term(WeylKey { hbar, q, p }, c);
        }
        w
    }

    /// Coefficient of `hbar^e`, as a supercommutative polynomial.
    pub fn hbar_part(&self, e: i32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in self.terms.iter().filter(|(k, _)| k.hbar == e) {
            let (m, s) = k
                .p
                .mul(&k.q)
                .expect("consistent gradings within one element")
                .expect("momenta and positions never collide");
            let c = if k.q.parity() * k.p.parity() == 1 { -c.clone() } else { c.clone() };
            out.add_term(m, if s < 0 { -c } else { c });
        }
        out
    }

    pub fn add_term(&mut self, key: WeylKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &Rational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Drops every term with hbar exponent above `order`.
    pub fn truncate(&self, order: i32) -> Self {
        WeylElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.hbar <= order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn min_hbar(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.hbar).min()
    }

    pub fn parity_parts(&self) -> (WeylElement, WeylElement) {
        let pick = |par: u8| WeylElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.parity() == par)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        };
        (pick(0), pick(1))
    }

    pub fn degree(&self, hbar_grading: i64) -> Degree {
        let degrees: std::collections::BTreeSet<i64> =
            self.terms.keys().map(|k| k.degree(hbar_grading)).collect();
        match degrees.len() {
            0 => Degree::Zero,
            1 => Degree::Homogeneous(*degrees.iter().next().unwrap()),
            _ => Degree::Inhomogeneous(degrees.into_iter().collect()),
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c}) {k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Rational::one())
    }
}

fn signed(c: Rational, s: i32) -> Rational {
    if s < 0 {
        -c
    } else {
        c
    }
}

/// Normal ordering of `P * Q` for a momentum monomial `P` and a position
/// monomial `Q`. Peels the rightmost momentum `p` off `P` and uses
/// `p * Q = (-1)^{|p||Q|} Q p + kappa hbar dQ/dq` (left derivative).
fn momenta_times_positions(p: &Monomial, q: &Monomial) -> Result<WeylElement, AlgebraError> {
    if p.is_empty() || q.is_empty() {
        return Ok(WeylElement::single(
            WeylKey { hbar: 0, q: q.clone(), p: p.clone() },
            Rational::one(),
        ));
    }
    let factors = p.factors();
    let last = factors[factors.len() - 1];
    let rest = Monomial::from_sorted(factors[..factors.len() - 1].to_vec());
    let last_mono = Monomial::from_sorted(vec![last]);
    let pass_sign = if last.is_odd() && q.parity() == 1 { -1 } else { 1 };

    let mut out = WeylElement::zero();
    for (k, c) in momenta_times_positions(&rest, q)?.terms {
        if let Some((np, s)) = k.p.mul(&last_mono)? {
            out.add_term(WeylKey { hbar: k.hbar, q: k.q, p: np }, signed(c, s * pass_sign));
        }
    }
    if let Some((dq, coef)) = q.derivative(-last.index(), Side::Left) {
        let weight = integer(last.kappa() as i64 * coef);
        for (k, c) in momenta_times_positions(&rest, &dq)?.terms {
            out.add_term(WeylKey { hbar: k.hbar + 1, q: k.q, p: k.p }, c * &weight);
        }
    }
    Ok(out)
}

/// Star product, keeping hbar exponents `<= hbar_order`.
pub fn try_star(
    f: &WeylElement,
    g: &WeylElement,
    hbar_order: i32,
) -> Result<WeylElement, AlgebraError> {
    let mut cache: HashMap<(&Monomial, &Monomial), WeylElement> = HashMap::new();
    let mut out = WeylElement::zero();
    for (a, ca) in &f.terms {
        for (b, cb) in &g.terms {
            let key = (&a.p, &b.q);
            let inner = match cache.entry(key) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(momenta_times_positions(&a.p, &b.q)?),
            };
            let coef = ca * cb;
            for (k, c) in &inner.terms {
                let hbar = a.hbar + b.hbar + k.hbar;
                if hbar > hbar_order {
                    continue;
                }
                let Some((q, s1)) = a.q.mul(&k.q)? else { continue };
                let Some((p, s2)) = k.p.mul(&b.p)? else { continue };
                out.add_term(WeylKey { hbar, q, p }, signed(c * &coef, s1 * s2));
            }
        }
    }
    Ok(out)
}

/// Star product; panics if the operands disagree on gradings.
pub fn star(f: &WeylElement, g: &WeylElement, hbar_order: i32) -> WeylElement {
    try_star(f, g, hbar_order).expect("Weyl elements over inconsistent gradings")
}

/// Graded commutator `f * g - (-1)^{|f||g|} g * f`, extended bilinearly over
/// parity components.
pub fn try_commutator(
    f: &WeylElement,
    g: &WeylElement,
    hbar_order: i32,
) -> Result<WeylElement, AlgebraError> {
    let fg = try_star(f, g, hbar_order)?;
    let gf = try_star(g, f, hbar_order)?;
    let (_, f_odd) = f.parity_parts();
    let (_, g_odd) = g.parity_parts();
    let odd = try_star(&g_odd, &f_odd, hbar_order)?;
    Ok(&(&fg - &gf) + &odd.scale(&integer(2)))
}

pub fn commutator(f: &WeylElement, g: &WeylElement, hbar_order: i32) -> WeylElement {
    try_commutator(f, g, hbar_order).expect("Weyl elements over inconsistent gradings")
}

/// Outcome of a master-equation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterReport {
    pub hbar_order: i32,
    /// `[H, H]` truncated to `hbar_order`.
    pub residual: WeylElement,
}

impl MasterReport {
    pub fn passes(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Computes `[H, H]` up to `hbar_order`.
pub fn check_master(h: &WeylElement, hbar_order: i32) -> Result<MasterReport, WeylError> {
    Ok(MasterReport { hbar_order, residual: try_commutator(h, h, hbar_order)? })
}

/// Boundary-module monomial `hbar^hbar * minus * plus`, with `minus` made of
/// `q^-` variables (positive indices) and `plus` of `p^+` variables
/// (negative indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DKey {
    pub hbar: i32,
    pub minus: Monomial,
    pub plus: Monomial,
}

impl DKey {
    pub fn parity(&self) -> u8 {
        (self.minus.parity() + self.plus.parity()) % 2
    }

    pub fn word_length(&self) -> usize {
        self.minus.len() + self.plus.len()
    }
}

impl fmt::Display for DKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.hbar != 0 {
            parts.push(format!("hbar^{}", self.hbar));
        }
        for v in self.minus.factors() {
            parts.push(format!("q-_{}", v.index()));
        }
        for v in self.plus.factors() {
            parts.push(format!("p+_{}", -v.index()));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Element of the boundary module: supercommutative polynomial in `q^-`
/// and `p^+`, with a Laurent factor in hbar.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DElement {
    terms: BTreeMap<DKey, Rational>,
}

impl DElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::single(DKey { hbar: 0, minus: Monomial::one(), plus: Monomial::one() }, Rational::one())
    }

    pub fn single(key: DKey, c: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(key, c);
        x
    }

    pub fn add_term(&mut self, key: DKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DKey, &Rational)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn truncate(&self, order: i32) -> Self {
        DElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.hbar <= order)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn parity_parts(&self) -> (DElement, DElement) {
        let pick = |par: u8| DElement {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.parity() == par)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        };
        (pick(0), pick(1))
    }

    /// Supercommutative product in the boundary module.
    pub fn try_mul(&self, other: &DElement) -> Result<DElement, AlgebraError> {
        let mut out = DElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let Some((minus, s1)) = a.minus.mul(&b.minus)? else { continue };
                let Some((plus, s2)) = a.plus.mul(&b.plus)? else { continue };
                let cross = if a.plus.parity() * b.minus.parity() == 1 { -1 } else { 1 };
                out.add_term(
                    DKey { hbar: a.hbar + b.hbar, minus, plus },
                    signed(ca * cb, s1 * s2 * cross),
                );
            }
        }
        Ok(out)
    }

    fn shift_hbar(&self, by: i32) -> DElement {
        DElement {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (DKey { hbar: k.hbar + by, ..k.clone() }, c.clone()))
                .collect(),
        }
    }

    /// Left derivative in `q^-_index`.
    fn minus_derivative(&self, index: i32) -> DElement {
        let mut out = DElement::zero();
        for (k, c) in &self.terms {
            if let Some((minus, coef)) = k.minus.derivative(index, Side::Left) {
                out.add_term(DKey { hbar: k.hbar, minus, plus: k.plus.clone() }, c * integer(coef));
            }
        }
        out
    }

    /// Right derivative in `p^+` with (negative) `index`.
    fn plus_derivative(&self, index: i32) -> DElement {
        let mut out = DElement::zero();
        for (k, c) in &self.terms {
            if let Some((plus, coef)) = k.plus.derivative(index, Side::Right) {
                out.add_term(DKey { hbar: k.hbar, minus: k.minus.clone(), plus }, c * integer(coef));
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.parity() == 0)
    }
}

impl fmt::Display for DElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("({c}) {k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &DElement {
    type Output = DElement;
    fn add(self, rhs: &DElement) -> DElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DElement {
    type Output = DElement;
    fn sub(self, rhs: &DElement) -> DElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }
}

fn mismatch(e: AlgebraError) -> WeylError {
    match e {
        AlgebraError::GradingMismatch { index, .. } => WeylError::AlphabetMismatch { index },
        other => WeylError::Algebra(other),
    }
}

/// `p^-_n` acting as `n hbar (d/dq^-_n + dF/dq^-_n)`; with `F = 0` this is the
/// plain replacement, otherwise it is the conjugation `e^{-F} p e^{F}`.
fn left_momentum(x: &DElement, index: i32, potential: Option<&DElement>) -> Result<DElement, WeylError> {
    let n = -index;
    let mut y = x.minus_derivative(n);
    if let Some(f) = potential {
        let df = f.minus_derivative(n);
        if !df.is_zero() {
            y = &y + &df.try_mul(x).map_err(mismatch)?;
        }
    }
    Ok(y.shift_hbar(1).scale(&integer(n as i64)))
}

/// `q^+_n` acting from the right as `n hbar (d/dp^+_n + dF/dp^+_n)`.
fn right_position(x: &DElement, index: i32, potential: Option<&DElement>) -> Result<DElement, WeylError> {
    let mut y = x.plus_derivative(-index);
    if let Some(f) = potential {
        let df = f.plus_derivative(-index);
        if !df.is_zero() {
            y = &y + &x.try_mul(&df).map_err(mismatch)?;
        }
    }
    Ok(y.shift_hbar(1).scale(&integer(index as i64)))
}

fn act(
    h: &WeylElement,
    side: Side,
    x: &DElement,
    potential: Option<&DElement>,
) -> Result<DElement, WeylError> {
    let mut out = DElement::zero();
    for (k, c) in h.terms() {
        if let Some(v) = k.q.factors().iter().find(|v| v.index() < 0) {
            return Err(WeylError::NotNormalOrdered(v.index()));
        }
        let mut y = x.clone();
        match side {
            Side::Left => {
                // H = Q * P: momenta act first, rightmost factor innermost
                for v in k.p.factors().iter().rev() {
                    y = left_momentum(&y, v.index(), potential)?;
                }
                let q = DElement::single(
                    DKey { hbar: k.hbar, minus: k.q.clone(), plus: Monomial::one() },
                    c.clone(),
                );
                y = q.try_mul(&y).map_err(mismatch)?;
            }
            Side::Right => {
                // x <- (Q * P) = (x <- Q) <- P, leftmost factor innermost
                for v in k.q.factors() {
                    y = right_position(&y, v.index(), potential)?;
                }
                let p = DElement::single(
                    DKey { hbar: k.hbar, minus: Monomial::one(), plus: k.p.clone() },
                    c.clone(),
                );
                y = y.try_mul(&p).map_err(mismatch)?;
            }
        }
        out = &out + &y;
    }
    Ok(out)
}

/// Action of `h` on `x` from `side`, truncated at `hbar_order`. Left actions
/// take `h` over the negative-end alphabet, right actions over the positive
/// end.
pub fn apply_action(
    h: &WeylElement,
    side: Side,
    x: &DElement,
    hbar_order: i32,
) -> Result<DElement, WeylError> {
    Ok(act(h, side, x, None)?.truncate(hbar_order))
}

fn check_even(f: &DElement) -> Result<(), WeylError> {
    match f.terms().find(|(k, _)| k.parity() == 1) {
        Some((k, _)) => Err(WeylError::OddPotential(k.to_string())),
        None => Ok(()),
    }
}

/// `D^F g = e^{-F} H^-(g e^F) - (-1)^{|g|} (g e^F) H^+ e^{-F}`, truncated at
/// `hbar_order`.
///
/// The exponentials are handled exactly through conjugation: each momentum
/// of `H^-` becomes `n hbar (d/dq^- + dF/dq^-)` and each position of `H^+`
/// becomes `n hbar (d/dp^+ + dF/dp^+)`, so no series truncation is needed.
pub fn cobordism_differential(
    g: &DElement,
    potential: &DElement,
    h_minus: &WeylElement,
    h_plus: &WeylElement,
    hbar_order: i32,
) -> Result<DElement, WeylError> {
    check_even(potential)?;
    let f = (!potential.is_zero()).then_some(potential);
    let left = act(h_minus, Side::Left, g, f)?;
    let (g_even, g_odd) = g.parity_parts();
    let right_even = act(h_plus, Side::Right, &g_even, f)?;
    let right_odd = act(h_plus, Side::Right, &g_odd, f)?;
    let out = &(&left - &right_even) + &right_odd;
    Ok(out.truncate(hbar_order))
}

/// `e^{-F}(e^F H^+ - H^- e^F)`; the master equation holds iff this vanishes.
pub fn master_residual(
    potential: &DElement,
    h_minus: &WeylElement,
    h_plus: &WeylElement,
    hbar_order: i32,
) -> Result<DElement, WeylError> {
    check_even(potential)?;
    let f = (!potential.is_zero()).then_some(potential);
    let one = DElement::one();
    let right = act(h_plus, Side::Right, &one, f)?;
    let left = act(h_minus, Side::Left, &one, f)?;
    Ok((&right - &left).truncate(hbar_order))
}
