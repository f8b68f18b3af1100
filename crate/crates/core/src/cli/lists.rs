//! Comma-separated list flags: `1..8`, `100,1e4,1e6`, `none,1..15`, `all`.

use std::fmt;

use crate::accumulators::AlgorithmId;

/// A non-negative integer written plainly or in float notation (`1e6`).
pub fn parse_count(s: &str) -> Result<usize, String> {
    let s = s.trim();
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= 9007199254740992.0 => {
            Ok(x as usize)
        }
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

pub fn parse_positive(s: &str) -> Result<usize, String> {
    match parse_count(s)? {
        0 => Err("must be positive".to_string()),
        n => Ok(n),
    }
}

fn parse_i32(s: &str) -> Result<i32, String> {
    s.trim().parse().map_err(|_| format!("'{s}' is not an integer"))
}

/// Inclusive range `a..b` or a single integer.
fn int_range(s: &str) -> Result<Vec<i32>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse_i32(a)?, parse_i32(b)?);
            if a > b {
                return Err(format!("empty range '{s}'"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![parse_i32(s)?]),
    }
}

fn items(s: &str) -> Result<Vec<&str>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("empty item in list '{s}'"));
    }
    Ok(parts)
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts(pub Vec<usize>);

impl Counts {
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in items(s)? {
            match item.split_once("..") {
                Some(_) => {
                    for v in int_range(item)? {
                        out.push(parse_positive(&v.to_string())?);
                    }
                }
                None => out.push(parse_positive(item)?),
            }
        }
        Ok(Counts(out))
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

/// Shift exponents; `none` is the unshifted data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shifts(pub Vec<Option<i32>>);

impl Shifts {
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in items(s)? {
            if item.eq_ignore_ascii_case("none") {
                out.push(None);
            } else {
                out.extend(int_range(item)?.into_iter().map(Some));
            }
        }
        Ok(Shifts(out))
    }

    /// The exponents, rejecting `none`.
    pub fn exponents(&self) -> Result<Vec<i32>, String> {
        self.0
            .iter()
            .map(|e| e.ok_or_else(|| "'none' is not allowed here".to_string()))
            .collect()
    }
}

impl fmt::Display for Shifts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self
            .0
            .iter()
            .map(|e| e.map_or("none".to_string(), |e| e.to_string()))
            .collect();
        f.write_str(&labels.join(","))
    }
}

/// Algorithm identifiers, or `all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algorithms {
    pub ids: Vec<AlgorithmId>,
    /// Given as `all` rather than by name.
    pub all: bool,
}

impl Algorithms {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s.trim().is_empty() {
            return Err("empty algorithm list".to_string());
        }
        if s.trim() == "all" {
            return Ok(Algorithms {
                ids: AlgorithmId::ALL.to_vec(),
                all: true,
            });
        }
        let mut ids = Vec::new();
        for item in items(s)? {
            let id: AlgorithmId = item.parse().map_err(|e: crate::Error| e.to_string())?;
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        Ok(Algorithms { ids, all: false })
    }
}

impl fmt::Display for Algorithms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.all {
            f.write_str("all")
        } else {
            f.write_str(&join(&self.ids))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("42"), Ok(42));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-1").is_err());
        assert!(parse_positive("0").is_err());
        let c = Counts::parse("1e2, 1e4,1000000").unwrap();
        assert_eq!(c.0, [100, 10_000, 1_000_000]);
        assert_eq!(c.to_string(), "100,10000,1000000");
        assert_eq!(Counts::parse("1..3").unwrap().0, [1, 2, 3]);
        assert!(Counts::parse("2,,3").is_err());
    }

    #[test]
    fn shifts() {
        let s = Shifts::parse("none,1..3,12").unwrap();
        assert_eq!(s.0, [None, Some(1), Some(2), Some(3), Some(12)]);
        assert_eq!(s.to_string(), "none,1,2,3,12");
        assert!(s.exponents().is_err());
        assert_eq!(Shifts::parse("-2..0").unwrap().exponents().unwrap(), [-2, -1, 0]);
        assert!(Shifts::parse("3..1").is_err());
    }

    #[test]
    fn algorithms() {
        let a = Algorithms::parse("all").unwrap();
        assert_eq!(a.ids.len(), 7);
        assert_eq!(a.to_string(), "all");
        let b = Algorithms::parse("textbook,updating,textbook").unwrap();
        assert_eq!(b.ids, [AlgorithmId::Textbook, AlgorithmId::UpdatingWwh]);
        assert_eq!(b.to_string(), "textbook,updating-wwh");
        assert!(Algorithms::parse("").is_err());
        assert!(Algorithms::parse("bogus").is_err());
    }
}
