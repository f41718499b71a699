//! Parameter lists on the command line.
//!
//! Floats: `1`, `0.1,1,10`, or `lo:hi:count` (evenly spaced, both ends
//! included). Integers: `3`, `3,5,8`, or `lo:hi` (inclusive).

use ehcheck_core::sweep::linspace;

#[derive(Debug, Clone, PartialEq)]
pub struct Floats(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Ints(pub Vec<u32>);

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("not finite: {s:?}"));
    }
    Ok(v)
}

pub fn parse_floats(s: &str) -> Result<Floats, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
        [lo, hi, count] => {
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| format!("bad step count in {s:?}"))?;
            linspace(number(lo)?, number(hi)?, count)
        }
        _ => return Err(format!("expected a value, a list or lo:hi:count, got {s:?}")),
    };
    if values.is_empty() {
        return Err(format!("range {s:?} is empty"));
    }
    Ok(Floats(values))
}

pub fn parse_ints(s: &str) -> Result<Ints, String> {
    let int = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not a non-negative integer: {t:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single.split(',').map(int).collect::<Result<Vec<_>, _>>()?,
        [lo, hi] => (int(lo)?..=int(hi)?).collect(),
        _ => return Err(format!("expected a value, a list or lo:hi, got {s:?}")),
    };
    if values.is_empty() {
        return Err(format!("range {s:?} is empty"));
    }
    Ok(Ints(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats() {
        assert_eq!(parse_floats("1").unwrap().0, vec![1.0]);
        assert_eq!(parse_floats("-1, 2.5").unwrap().0, vec![-1.0, 2.5]);
        assert_eq!(parse_floats("0:1:3").unwrap().0, vec![0.0, 0.5, 1.0]);
        assert!(parse_floats("0:1:0").is_err());
        assert!(parse_floats("0:1").is_err());
        assert!(parse_floats("nan").is_err());
        assert!(parse_floats("x").is_err());
    }

    #[test]
    fn ints() {
        assert_eq!(parse_ints("3:6").unwrap().0, vec![3, 4, 5, 6]);
        assert_eq!(parse_ints("3,8").unwrap().0, vec![3, 8]);
        assert!(parse_ints("8:3").is_err());
        assert!(parse_ints("-1").is_err());
    }
}
