//! The table of exact right-hand sides, parsed from `data/identities.txt`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exactnum::{ClosedFormConstant, ClosedValue, ExpPolyForm};
use crate::qmodels::Family;

const DATA: &str = include_str!("../../data/identities.txt");

pub type Registry = BTreeMap<(Family, u32), ClosedValue>;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses records `family nu = value`; blank lines and `#` comments are skipped.
pub fn parse_registry(text: &str) -> Result<Registry> {
    let mut out = Registry::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| parse_err(line_no, "expected `=`"))?;
        let mut key = key.split_whitespace();
        let family: Family = key
            .next()
            .ok_or_else(|| parse_err(line_no, "missing family"))?
            .parse()
            .map_err(|e: Error| parse_err(line_no, e.to_string()))?;
        let nu: u32 = key
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(line_no, "missing or bad nu"))?;
        if key.next().is_some() {
            return Err(parse_err(line_no, "unexpected token before `=`"));
        }
        let value = value.trim();
        let parsed = if value.contains("exp(") {
            value.parse::<ExpPolyForm>().map(ClosedValue::ExpPoly)
        } else {
            value.parse::<ClosedFormConstant>().map(ClosedValue::Constant)
        }
        .map_err(|e| parse_err(line_no, e.to_string()))?;
        if out.insert((family, nu), parsed).is_some() {
            return Err(parse_err(line_no, format!("duplicate record for {family} nu={nu}")));
        }
    }
    Ok(out)
}

/// The built-in registry.
pub fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| parse_registry(DATA).expect("bundled identity data parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_complete() {
        let r = registry();
        assert_eq!(r.len(), 11 + 10 + 10 + 10);
        for nu in 0..=10 {
            assert!(matches!(r[&(Family::F1, nu)], ClosedValue::Constant(_)));
        }
        for nu in 0..=9 {
            assert!(matches!(r[&(Family::F2, nu)], ClosedValue::ExpPoly(_)));
        }
        for nu in 1..=10 {
            assert!(r.contains_key(&(Family::F3, nu)) && r.contains_key(&(Family::F4, nu)));
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            parse_registry("# c\nf1 1 = 2/3 * pi^1\nf9 2 = 1").unwrap_err(),
            Error::Parse { line: 3, message: "invalid parameter: unknown family `f9`".into() }
        );
        assert!(matches!(parse_registry("f1 1 = 1\nf1 1 = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_registry("f1 x = 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_registry("f1 1 2/3"), Err(Error::Parse { line: 1, .. })));
    }
}
