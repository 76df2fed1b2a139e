//! Reading inputs and rendering results.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sft_core::json::{
    delement_from_json, format_rational, polynomial_from_json, weyl_from_json, PolynomialJson, PolynomialTerm,
};
use sft_core::{DElement, Monomial, OrbitModel, Polynomial, Rational, WeylElement};

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn malformed(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn read_model(path: Option<&Path>) -> Result<OrbitModel, CliError> {
    match path {
        None => Ok(OrbitModel::circle()),
        Some(p) => OrbitModel::from_json_str(&read(p)?).map_err(|e| malformed(p, e)),
    }
}

pub fn read_polynomial(path: &Path, model: &OrbitModel) -> Result<Polynomial, CliError> {
    polynomial_from_json(&read(path)?, model).map_err(|e| malformed(path, e))
}

pub fn read_weyl(path: &Path, model: &OrbitModel) -> Result<WeylElement, CliError> {
    weyl_from_json(&read(path)?, model).map_err(|e| malformed(path, e))
}

pub fn read_boundary(path: &Path, minus: &OrbitModel, plus: &OrbitModel) -> Result<DElement, CliError> {
    delement_from_json(&read(path)?, minus, plus).map_err(|e| malformed(path, e))
}

pub fn term(m: &Monomial, c: &Rational) -> PolynomialTerm {
    PolynomialTerm { mono: m.indices(), num: c.numer().to_string(), den: c.denom().to_string() }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("results serialize");
    s.push('\n');
    s
}

/// Two-column table with the coefficient column right-aligned.
pub fn table<'a>(rows: impl IntoIterator<Item = (String, String)> + 'a) -> String {
    let rows: Vec<(String, String)> = rows.into_iter().collect();
    if rows.is_empty() {
        return "0\n".to_string();
    }
    let width = rows.iter().map(|(c, _)| c.len()).max().unwrap_or(0);
    rows.iter().map(|(c, m)| format!("{c:>width$}  {m}\n")).collect()
}

pub fn polynomial_table(p: &Polynomial) -> String {
    table(p.terms().map(|(m, c)| (format_rational(c), m.to_string())))
}

pub fn polynomial_json(p: &Polynomial) -> String {
    to_json(&PolynomialJson::from_polynomial(p))
}
