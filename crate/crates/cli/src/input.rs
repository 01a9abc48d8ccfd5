use std::path::Path;

use distsep::edm::AlphaVector;
use distsep::exact::{from_f64, parse_rational, QMatrix, Rational};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::args::AlphaArgs;
use crate::CliError;

fn malformed(path: &Path, msg: impl ToString) -> CliError {
    CliError::Input {
        path: path.display().to_string(),
        msg: msg.to_string(),
    }
}

pub fn read_value(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| malformed(path, e))?;
    serde_json::from_str(&text).map_err(|e| malformed(path, e))
}

pub fn read_as<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_value(read_value(path)?).map_err(|e| malformed(path, e))
}

/// A JSON rational: `"p/q"`, an integer, or a float (taken exactly).
fn rational(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Some(Rational::from_integer(i.into())),
            None => n.as_f64().and_then(from_f64),
        },
        _ => None,
    }
}

fn rational_list(v: &Value) -> Option<Vec<Rational>> {
    v.as_array()?.iter().map(rational).collect()
}

/// `{"alpha": [...]}`, an `edm gen` report, or its `result` object.
pub fn alpha_from_value(path: &Path, v: &Value) -> Result<AlphaVector, CliError> {
    let found = v
        .get("alpha")
        .or_else(|| v.pointer("/result/alpha"))
        .ok_or_else(|| malformed(path, "no \"alpha\" field"))?;
    let list = found.get("values").unwrap_or(found);
    let vals = rational_list(list).ok_or_else(|| malformed(path, "alpha must be a list of rationals"))?;
    AlphaVector::new(vals).map_err(|e| malformed(path, e))
}

pub fn matrix_from_value(path: &Path, v: &Value) -> Result<QMatrix, CliError> {
    let rows = v
        .as_array()
        .and_then(|rows| rows.iter().map(rational_list).collect::<Option<Vec<_>>>())
        .ok_or_else(|| malformed(path, "expected an array of rows of rationals"))?;
    QMatrix::from_rows(rows).map_err(|e| malformed(path, e))
}

/// Resolves the alpha flags: an explicit list, or `n` random entries.
pub fn alpha_from_args(a: &AlphaArgs, seed: u64) -> Result<AlphaVector, CliError> {
    let usage = |e: distsep::Error| CliError::Usage(e.to_string());
    let alpha = match (&a.alpha, a.random.or(a.n)) {
        (Some(list), _) => AlphaVector::parse(list).map_err(usage)?,
        (None, Some(n)) => AlphaVector::random(n, seed, a.denom_bound).map_err(usage)?,
        (None, None) => return Err(CliError::Usage("give --alpha, --random N or --n N".into())),
    };
    for n in [a.n, a.random].into_iter().flatten() {
        if n != alpha.len() {
            return Err(CliError::Usage(format!(
                "n = {n} but alpha has {} entries",
                alpha.len()
            )));
        }
    }
    Ok(alpha)
}

pub fn parse_cell(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--cell expects one-based \"i,j\", got {s:?}"));
    let (i, j) = s.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let list: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--n-list expects sizes like 4,8,16, got {s:?}")))?;
    if list.is_empty() || list.iter().any(|&n| n < 3) {
        return Err(CliError::Usage("every size in --n-list must be at least 3".into()));
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use distsep::exact::rat;
    use serde_json::json;

    #[test]
    fn cells_are_one_based() {
        assert_eq!(parse_cell("1,3").unwrap(), (0, 2));
        assert_eq!(parse_cell(" 2 , 2").unwrap(), (1, 1));
        for bad in ["0,1", "1", "a,b", "1,2,3"] {
            assert!(parse_cell(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_rationals() {
        let p = Path::new("x");
        let a = alpha_from_value(p, &json!({"alpha": ["1/2", 3, -1.5]})).unwrap();
        assert_eq!(a.values(), &[rat(-3, 2), rat(1, 2), rat(3, 1)]);
        let a = alpha_from_value(p, &json!({"result": {"alpha": ["0", "1", "2"]}})).unwrap();
        assert_eq!(a.len(), 3);
        assert!(matches!(alpha_from_value(p, &json!({"alpha": [1, 1, 2]})), Err(CliError::Input { .. })));
        assert!(matches!(alpha_from_value(p, &json!({"beta": []})), Err(CliError::Input { .. })));
        let m = matrix_from_value(p, &json!([[1, "1/3"], [0, 2]])).unwrap();
        assert_eq!(m.get(0, 1), &rat(1, 3));
        assert!(matrix_from_value(p, &json!([[1], [0, 2]])).is_err());
    }

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("4,8, 16").unwrap(), vec![4, 8, 16]);
        assert!(parse_n_list("").is_err());
        assert!(parse_n_list("2,4").is_err());
    }
}
