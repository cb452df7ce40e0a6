//! Parsers for grid, cut and bound arguments.

use witent::{Bound, Cut};

use crate::error::{CliError, CliResult};

/// `start:stop:count` (inclusive, evenly spaced) or a comma-separated list.
pub fn grid(s: &str) -> CliResult<Vec<f64>> {
    let bad = |what: &str| CliError::BadInput(format!("grid {s:?}: {what}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad("bad stop"))?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("bad count"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad("endpoints must be finite"));
        }
        return match count {
            0 => Err(bad("count must be positive")),
            1 => Ok(vec![start]),
            _ => Ok((0..count)
                .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
                .collect()),
        };
    }
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad("bad number")))
        .collect::<CliResult<Vec<f64>>>()?;
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(vals)
}

/// Comma-separated list of bounds, each a number or `inf`.
pub fn bounds(s: &str) -> CliResult<Vec<Bound>> {
    s.split(',').map(|t| Ok(Bound::parse(t)?)).collect()
}

/// Comma-separated party indices, e.g. `0` or `0,2`.
pub fn cut(s: &str) -> CliResult<Cut> {
    let parties = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::BadInput(format!("cut {s:?}: bad party index {t:?}")))
        })
        .collect::<CliResult<Vec<usize>>>()?;
    Ok(Cut::new(parties)?)
}

/// Comma-separated local dimensions.
pub fn dims(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::BadInput(format!("dims {s:?}: bad dimension {t:?}")))
        })
        .collect()
}

pub fn bound_value(b: Bound) -> f64 {
    b.finite().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid("2:2:1").unwrap(), vec![2.0]);
        assert_eq!(grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(grid("0:1").is_err());
        assert!(grid("0:1:0").is_err());
        assert!(grid("a").is_err());
    }

    #[test]
    fn cuts_and_bounds() {
        assert_eq!(cut("0,2").unwrap().parties(), &[0, 2]);
        assert!(cut("x").is_err());
        assert_eq!(bounds("1,inf").unwrap(), vec![Bound::Finite(1.0), Bound::Infinite]);
        assert!(bounds("-1").is_err());
    }
}
