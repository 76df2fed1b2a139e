//! Orbit models: Conley-Zehnder index rules, gradings, bad iterates and
//! the sign assignment attached to ordered index vectors.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{OrbitVariable, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("m must be a positive integer, got {0}")]
    InvalidM(i64),
    #[error("iterate number must be positive")]
    ZeroIterate,
    #[error("iterate {n} lies beyond the Conley-Zehnder table of length {len}")]
    OutOfTable { n: u32, len: usize },
    #[error("the Conley-Zehnder table is empty")]
    EmptyTable,
    #[error("orbit iterate {0} is bad")]
    BadOrbit(u32),
    #[error("index 0 does not name an orbit variable")]
    ZeroIndex,
    #[error("sign values must be +1 or -1, got {0}")]
    InvalidSign(i8),
    #[error("duplicate sign table entry for {0:?}")]
    DuplicateEntry(Vec<i32>),
    #[error("rotation number must be nonnegative")]
    NegativeRotation,
    #[error("Conley-Zehnder index {0} does not fit the grading range")]
    GradingOverflow(i64),
    #[error("malformed model: {0}")]
    Malformed(String),
}

/// Rule producing `CZ(gamma^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CzRule {
    /// `CZ = 0` for every iterate.
    Circle,
    /// `CZ(gamma^n) = n c`.
    Hyperbolic { c: i64 },
    /// `CZ(gamma^n) = 2 floor(n theta) + 1`. An illustrative model for an
    /// elliptic orbit with rotation number `theta`.
    Elliptic {
        #[serde(with = "crate::json::rational_string")]
        theta: Rational,
    },
    /// Explicit values `CZ(gamma^1), ..., CZ(gamma^N)`.
    Table { values: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignEntry {
    pub n: Vec<i32>,
    pub sign: i8,
}

/// Choice of `epsilon(n)` on good index vectors. `epsilon` is invariant
/// under permutations of the vector; bad vectors always get 0.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SignAssignment {
    /// `+1` on every good vector.
    #[default]
    Default,
    /// Product of per-index signs; indices not listed count as `+1`.
    Multiplicative { per_index: BTreeMap<i32, i8> },
    /// Explicit values keyed by the multiset of indices; unlisted vectors
    /// get `+1`.
    Table { entries: Vec<SignEntry> },
}

/// The data turning the abstract algebra into the algebra of one orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitModel {
    pub m: i64,
    pub cz: CzRule,
    #[serde(default)]
    pub signs: SignAssignment,
}

impl OrbitModel {
    pub fn new(m: i64, cz: CzRule, signs: SignAssignment) -> Result<Self, ModelError> {
        let model = OrbitModel { m, cz, signs };
        model.validate()?;
        Ok(model)
    }

    /// The circle with `m = 1`, so that `|p_n| = |q_n| = -2`.
    pub fn circle() -> Self {
        OrbitModel { m: 1, cz: CzRule::Circle, signs: SignAssignment::Default }
    }

    pub fn hyperbolic(m: i64, c: i64) -> Result<Self, ModelError> {
        Self::new(m, CzRule::Hyperbolic { c }, SignAssignment::Default)
    }

    pub fn elliptic(m: i64, theta: Rational) -> Result<Self, ModelError> {
        Self::new(m, CzRule::Elliptic { theta }, SignAssignment::Default)
    }

    pub fn table(m: i64, values: Vec<i64>) -> Result<Self, ModelError> {
        Self::new(m, CzRule::Table { values }, SignAssignment::Default)
    }

    pub fn with_signs(&self, signs: SignAssignment) -> Result<Self, ModelError> {
        Self::new(self.m, self.cz.clone(), signs)
    }

    pub fn from_json_str(s: &str) -> Result<Self, ModelError> {
        let model: OrbitModel =
            serde_json::from_str(s).map_err(|e| ModelError::Malformed(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("model serialization")
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.m < 1 {
            return Err(ModelError::InvalidM(self.m));
        }
        match &self.cz {
            CzRule::Table { values } if values.is_empty() => return Err(ModelError::EmptyTable),
            CzRule::Elliptic { theta } if theta.is_negative() => {
                return Err(ModelError::NegativeRotation)
            }
            _ => {}
        }
        match &self.signs {
            SignAssignment::Default => {}
            SignAssignment::Multiplicative { per_index } => {
                for (&k, &s) in per_index {
                    if k == 0 {
                        return Err(ModelError::ZeroIndex);
                    }
                    check_sign(s)?;
                }
            }
            SignAssignment::Table { entries } => {
                let mut seen = std::collections::BTreeSet::new();
                for e in entries {
                    check_sign(e.sign)?;
                    if e.n.contains(&0) {
                        return Err(ModelError::ZeroIndex);
                    }
                    let mut key = e.n.clone();
                    key.sort_unstable();
                    if !seen.insert(key.clone()) {
                        return Err(ModelError::DuplicateEntry(key));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest iterate the rule is defined for, if bounded.
    pub fn max_iterate(&self) -> Option<u32> {
        match &self.cz {
            CzRule::Table { values } => Some(values.len() as u32),
            _ => None,
        }
    }

    /// `CZ(gamma^n)`.
    pub fn cz(&self, n: u32) -> Result<i64, ModelError> {
        if n == 0 {
            return Err(ModelError::ZeroIterate);
        }
        Ok(match &self.cz {
            CzRule::Circle => 0,
            CzRule::Hyperbolic { c } => n as i64 * c,
            CzRule::Elliptic { theta } => {
                let x = theta * Rational::from_integer((n as i64).into());
                let fl = x.floor().to_integer();
                2 * fl.to_i64().ok_or(ModelError::GradingOverflow(i64::MAX))? + 1
            }
            CzRule::Table { values } => *values
                .get(n as usize - 1)
                .ok_or(ModelError::OutOfTable { n, len: values.len() })?,
        })
    }

    /// `gamma^n` is bad iff `CZ(gamma^n)` and `CZ(gamma)` differ in parity.
    pub fn is_bad(&self, n: u32) -> Result<bool, ModelError> {
        Ok(self.cz(n)?.is_odd() != self.cz(1)?.is_odd())
    }

    /// Grading of the formal variable `q_k` (`k < 0` meaning `p_{|k|}`),
    /// regardless of whether the orbit is good.
    pub fn grading(&self, k: i32) -> Result<i64, ModelError> {
        if k == 0 {
            return Err(ModelError::ZeroIndex);
        }
        let cz = self.cz(k.unsigned_abs())?;
        Ok(if k > 0 { self.m - 3 + cz } else { self.m - 3 - cz })
    }

    /// The variable `q_k`, flagged bad when the iterate is bad.
    pub fn raw_variable(&self, k: i32) -> Result<OrbitVariable, ModelError> {
        let g = self.grading(k)?;
        let g32 = i32::try_from(g).map_err(|_| ModelError::GradingOverflow(g))?;
        let good = !self.is_bad(k.unsigned_abs())?;
        OrbitVariable::with_flag(k, g32, good).map_err(|_| ModelError::ZeroIndex)
    }

    /// The good variable `q_k`; errors on bad iterates.
    pub fn variable(&self, k: i32) -> Result<OrbitVariable, ModelError> {
        let v = self.raw_variable(k)?;
        if !v.is_good() {
            return Err(ModelError::BadOrbit(k.unsigned_abs()));
        }
        Ok(v)
    }

    /// Signed indices in `[-cutoff, cutoff] \ {0}` whose iterates are good,
    /// in ascending order.
    pub fn good_indices(&self, cutoff: u32) -> Result<Vec<i32>, ModelError> {
        let mut out = Vec::new();
        for n in (1..=cutoff).rev() {
            if !self.is_bad(n)? {
                out.push(-(n as i32));
            }
        }
        for n in 1..=cutoff {
            if !self.is_bad(n)? {
                out.push(n as i32);
            }
        }
        Ok(out)
    }

    /// Checks the rule is total on `1..=cutoff`.
    pub fn check_cutoff(&self, cutoff: u32) -> Result<(), ModelError> {
        match self.max_iterate() {
            Some(len) if cutoff > len => {
                Err(ModelError::OutOfTable { n: cutoff, len: len as usize })
            }
            _ => Ok(()),
        }
    }

    /// Grading of `hbar`, `2(m - 3)`.
    pub fn hbar_grading(&self) -> i64 {
        2 * (self.m - 3)
    }

    /// `epsilon(n)`: zero iff some entry names a bad iterate.
    pub fn epsilon(&self, n: &[i32]) -> Result<i8, ModelError> {
        for &k in n {
            if k == 0 {
                return Err(ModelError::ZeroIndex);
            }
            if self.is_bad(k.unsigned_abs())? {
                return Ok(0);
            }
        }
        Ok(match &self.signs {
            SignAssignment::Default => 1,
            SignAssignment::Multiplicative { per_index } => {
                n.iter().map(|k| per_index.get(k).copied().unwrap_or(1)).product()
            }
            SignAssignment::Table { entries } => {
                let mut key = n.to_vec();
                key.sort_unstable();
                entries
                    .iter()
                    .find(|e| {
                        let mut k = e.n.clone();
                        k.sort_unstable();
                        k == key
                    })
                    .map(|e| e.sign)
                    .unwrap_or(1)
            }
        })
    }
}

fn check_sign(s: i8) -> Result<(), ModelError> {
    if s == 1 || s == -1 {
        Ok(())
    } else {
        Err(ModelError::InvalidSign(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;
    use proptest::prelude::*;

    #[test]
    fn cz_examples() {
        assert_eq!(OrbitModel::hyperbolic(2, 3).unwrap().cz(2).unwrap(), 6);
        assert_eq!(OrbitModel::circle().cz(5).unwrap(), 0);
        assert_eq!(OrbitModel::elliptic(2, rational(2, 5)).unwrap().cz(3).unwrap(), 3);
        let t = OrbitModel::table(2, vec![2, 4]).unwrap();
        assert_eq!(t.cz(3), Err(ModelError::OutOfTable { n: 3, len: 2 }));
        assert_eq!(t.cz(0), Err(ModelError::ZeroIterate));
    }

    #[test]
    fn bad_orbit_examples() {
        let h1 = OrbitModel::hyperbolic(2, 1).unwrap();
        assert!(h1.is_bad(2).unwrap());
        assert!(!h1.is_bad(3).unwrap());
        let h2 = OrbitModel::hyperbolic(2, 2).unwrap();
        assert!((1..20).all(|n| !h2.is_bad(n).unwrap()));
        assert!((1..20).all(|n| !OrbitModel::circle().is_bad(n).unwrap()));
    }

    #[test]
    fn variable_examples() {
        let c = OrbitModel::circle();
        for n in 1..6 {
            assert_eq!(c.variable(n).unwrap().grading(), -2);
            assert_eq!(c.variable(-n).unwrap().grading(), -2);
        }
        let t = OrbitModel::table(2, vec![2]).unwrap();
        let v = t.variable(1).unwrap();
        assert_eq!(v.grading(), 1);
        assert!(v.is_odd());
        let h1 = OrbitModel::hyperbolic(2, 1).unwrap();
        assert_eq!(h1.variable(-2), Err(ModelError::BadOrbit(2)));
        assert!(!h1.raw_variable(2).unwrap().is_good());
    }

    #[test]
    fn epsilon_examples() {
        let h1 = OrbitModel::hyperbolic(2, 1).unwrap();
        assert_eq!(h1.epsilon(&[-2, 1, 1]).unwrap(), 0);
        assert_eq!(h1.epsilon(&[-3, 1, 1, 1]).unwrap(), 1);
        let signs = SignAssignment::Multiplicative { per_index: [(1, -1)].into_iter().collect() };
        let m = h1.with_signs(signs).unwrap();
        assert_eq!(m.epsilon(&[-3, 1, 1, 1]).unwrap(), -1);
        assert_eq!(m.epsilon(&[1, -3, 1, 1]).unwrap(), -1);
    }

    #[test]
    fn sign_table_round_trips_through_json() {
        let model = OrbitModel::new(
            2,
            CzRule::Table { values: vec![2, 4, 6] },
            SignAssignment::Table {
                entries: vec![
                    SignEntry { n: vec![1, -1], sign: -1 },
                    SignEntry { n: vec![-3, 1, 2], sign: 1 },
                ],
            },
        )
        .unwrap();
        let text = model.to_json_string();
        let back = OrbitModel::from_json_str(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.to_json_string(), text);
        assert_eq!(back.epsilon(&[-1, 1]).unwrap(), -1);
    }

    #[test]
    fn documented_json_form_parses() {
        let m = OrbitModel::from_json_str(
            r#"{"m":2,"cz":{"kind":"hyperbolic","c":1},"signs":{"kind":"default"}}"#,
        )
        .unwrap();
        assert_eq!(m, OrbitModel::hyperbolic(2, 1).unwrap());
        let e = OrbitModel::from_json_str(r#"{"m":3,"cz":{"kind":"elliptic","theta":"2/5"}}"#)
            .unwrap();
        assert_eq!(e.cz(3).unwrap(), 3);
        assert!(OrbitModel::from_json_str(r#"{"m":0,"cz":{"kind":"circle"}}"#).is_err());
        assert!(OrbitModel::from_json_str(r#"{"m":1,"cz":{"kind":"nope"}}"#).is_err());
    }

    proptest! {
        #[test]
        fn hyperbolic_bad_iff_c_odd_and_n_even(c in -7i64..8, n in 1u32..40) {
            let m = OrbitModel::hyperbolic(2, c).unwrap();
            let direct = (m.cz(n).unwrap() - m.cz(1).unwrap()).rem_euclid(2) == 1;
            prop_assert_eq!(m.is_bad(n).unwrap(), direct);
            prop_assert_eq!(m.is_bad(n).unwrap(), c % 2 != 0 && n % 2 == 0);
        }

        #[test]
        fn conjugate_gradings_sum_to_hbar_degree(
            mm in 1i64..6,
            values in proptest::collection::vec(-6i64..7, 1..8),
        ) {
            let model = OrbitModel::table(mm, values.clone()).unwrap();
            for k in 1..=values.len() as i32 {
                let (q, p) = (model.raw_variable(k).unwrap(), model.raw_variable(-k).unwrap());
                prop_assert_eq!((q.grading() + p.grading()) as i64, model.hbar_grading());
                prop_assert_eq!(q.kappa(), k as u32);
                prop_assert_eq!(p.kappa(), k as u32);
            }
        }

        #[test]
        fn hyperbolic_grading_closed_form(mm in 1i64..6, c in -5i64..6, k in -20i32..21) {
            prop_assume!(k != 0);
            let model = OrbitModel::hyperbolic(mm, c).unwrap();
            prop_assert_eq!(model.grading(k).unwrap(), mm - 3 + k as i64 * c);
        }
    }
}
