//! Inclusive uniform grids, written `lo:hi:count` on the command line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::param("grid", format!("range must be finite, got {lo}:{hi}")));
        }
        if count == 0 {
            return Err(Error::param("grid", "count must be >= 1"));
        }
        if count > 1 && lo == hi {
            return Err(Error::param("grid", "lo == hi with count > 1"));
        }
        Ok(Self { lo, hi, count })
    }

    /// One-point grid.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x, 1)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn step(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    /// The i-th node. The last node is `hi` exactly.
    pub fn at(&self, i: usize) -> f64 {
        if self.count < 2 {
            return self.lo;
        }
        if i + 1 == self.count {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * (i as f64 / (self.count - 1) as f64)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.at(i)).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::param("grid", format!("cannot parse `{p}` in `{s}`")))
        };
        match parts.as_slice() {
            [x] => Self::point(num(x)?),
            [lo, hi, n] => {
                let count = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::param("grid", format!("bad count `{n}` in `{s}`")))?;
                Self::new(num(lo)?, num(hi)?, count)
            }
            _ => Err(Error::param("grid", format!("expected `lo:hi:count` or a single value, got `{s}`"))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inclusive_range() {
        let g: Grid = "-4:4:401".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 401);
        assert_eq!(v[0], -4.0);
        assert_eq!(v[200], 0.0);
        assert_eq!(v[400], 4.0);
    }

    #[test]
    fn single_value() {
        let g: Grid = "1.0".parse().unwrap();
        assert_eq!(g.values(), vec![1.0]);
    }

    #[test]
    fn rejects_garbage() {
        assert!("1:2".parse::<Grid>().is_err());
        assert!("a:2:3".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:inf:3".parse::<Grid>().is_err());
    }
}
