// SPDX-License-Identifier: Apache-2.0

//! Text forms of values, axes, weights and output lists.

use std::f64::consts::PI;

use super::{Axis, Output, WeightSpec};
use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

fn bad(what: &str, s: &str) -> Error {
    Error::InvalidSpec(format!("cannot parse {what} `{s}`"))
}

/// Parses a real number, allowing multiples of `pi` such as `pi/4`, `-3pi/2`
/// or `0.5*pi`.
pub fn parse_value(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = t.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return lower.parse::<f64>().map_err(|_| bad("number", s));
    };
    let head = lower[..pos].trim_end_matches('*');
    let tail = &lower[pos + 2..];
    let coeff = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad("number", s))?,
    };
    let denom = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(|| bad("number", s))?,
    };
    Ok(coeff * PI / denom)
}

/// Parses `name=value`.
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').ok_or_else(|| bad("assignment", s))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(bad("assignment", s));
    }
    Ok((k.to_string(), parse_value(v)?))
}

/// Parses `name=start:stop:count` with an optional `:log` suffix.
pub fn parse_axis(s: &str) -> Result<Axis> {
    let (name, range) = s.split_once('=').ok_or_else(|| bad("axis", s))?;
    let parts: Vec<&str> = range.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3].trim() == "log" => true,
        _ => return Err(bad("axis", s)),
    };
    let count = parts[2].trim().parse::<usize>().map_err(|_| bad("axis count", s))?;
    Axis::new(name.trim(), parse_value(parts[0])?, parse_value(parts[1])?, count, log)
}

/// Parses `identity`, `qfim`, `omega`, `diag:v1,v2,…` or `full:a,b;c,d`.
pub fn parse_weight(s: &str) -> Result<WeightSpec> {
    let t = s.trim();
    match t {
        "identity" => return Ok(WeightSpec::Identity),
        "qfim" => return Ok(WeightSpec::ProportionalToQfim),
        "omega" => return Ok(WeightSpec::Omega),
        _ => {}
    }
    if let Some(list) = t.strip_prefix("diag:") {
        let vals = list.split(',').map(parse_value).collect::<Result<Vec<_>>>()?;
        return Ok(WeightSpec::Diag(vals));
    }
    if let Some(rows) = t.strip_prefix("full:") {
        let rows = rows
            .split(';')
            .map(|r| r.split(',').map(parse_value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(bad("weight", s));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        return Ok(WeightSpec::Full(RealMatrix::from_row_slice(n, n, &flat)));
    }
    Err(bad("weight", s))
}

/// Parses a comma-separated output list; `gaps` expands to the three gaps.
pub fn parse_outputs(s: &str) -> Result<Vec<Output>> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        if name == "gaps" {
            out.extend([Output::GapH, Output::GapT, Output::GapR]);
        } else if name == "all" {
            out.extend(Output::ALL);
        } else {
            out.push(name.parse()?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(parse_value("0.25").unwrap(), 0.25);
        assert_eq!(parse_value("pi").unwrap(), PI);
        assert_eq!(parse_value("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_value("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_value("2*pi").unwrap(), 2.0 * PI);
        assert!(parse_value("pi/0").is_err());
        assert!(parse_value("x").is_err());
    }

    #[test]
    fn axes_and_weights() {
        let a = parse_axis("xi=0:2pi:64").unwrap();
        assert_eq!((a.name.as_str(), a.count, a.log), ("xi", 64, false));
        assert_eq!(a.stop, 2.0 * PI);
        assert!(parse_axis("omega=0.01:100:9:log").unwrap().log);
        assert!(parse_axis("x=0:1").is_err());
        assert!(parse_axis("x=0:1:1").is_err());
        assert_eq!(parse_weight("diag:1,2").unwrap(), WeightSpec::Diag(vec![1.0, 2.0]));
        assert!(matches!(parse_weight("full:2,0.5;0.5,1").unwrap(), WeightSpec::Full(_)));
        assert!(parse_weight("full:1,2;3").is_err());
        assert!(parse_weight("bogus").is_err());
    }

    #[test]
    fn outputs() {
        assert_eq!(
            parse_outputs("T,gaps").unwrap(),
            vec![Output::T, Output::GapH, Output::GapT, Output::GapR]
        );
        assert!(parse_outputs("c_x").is_err());
        assert!(parse_outputs("").unwrap().is_empty());
    }
}
