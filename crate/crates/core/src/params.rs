use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exponents and knobs shared by the extraction pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentParams {
    /// Recursion exponent; the sparsification step maps `y` to `y^a`.
    pub a: u32,
    /// Blockade exponent.
    pub b: u32,
    /// Driver size exponent.
    pub t: u32,
    /// Driver start level.
    pub c: Rational,
    /// Dispatch exponent.
    pub d: u32,
    /// Restricted-extraction exponent, conventionally `2ab`.
    pub big_c: u32,
    /// Cap on the regularity part count as `eps^{-k_cap}`.
    pub k_cap: u32,
    /// Relax inner tolerances along a ladder when the literal one is unreachable at this `n`.
    pub desk_scale: bool,
    pub seed: u64,
}

impl Default for ExponentParams {
    fn default() -> Self {
        ExponentParams {
            a: 2,
            b: 2,
            t: 1,
            c: Rational::ratio(1, 4),
            d: 4,
            big_c: 8,
            k_cap: 4,
            desk_scale: true,
            seed: 0,
        }
    }
}

impl ExponentParams {
    pub fn validate(&self) -> Result<()> {
        if self.a < 2 || self.b < 2 {
            return Err(Error::input("exponents a and b must be at least 2"));
        }
        if self.t < 1 {
            return Err(Error::input("exponent t must be at least 1"));
        }
        if !self.c.in_open_half() {
            return Err(Error::input(format!("c = {} outside (0, 1/2)", self.c)));
        }
        let need = 2 * (self.a * self.t).max(2);
        if self.d < need {
            return Err(Error::input(format!(
                "d = {} below 2·max(a·t, 2) = {need}",
                self.d
            )));
        }
        if self.big_c == 0 {
            return Err(Error::input("C must be positive"));
        }
        if self.k_cap < 2 {
            return Err(Error::input("K cap must be at least 2"));
        }
        Ok(())
    }

    /// Parses `key=value` pairs separated by commas, starting from the defaults.
    ///
    /// Keys: `a b t c d C K desk seed`. When `a` or `t` is given without `d`,
    /// `d` follows as `2·max(a·t, 2)`; likewise `C` follows as `2ab`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = ExponentParams::default();
        let (mut saw_d, mut saw_c) = (false, false);
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::input(format!("expected key=value, got {item:?}")))?;
            let value = value.trim();
            let int = || {
                value
                    .parse::<u32>()
                    .map_err(|_| Error::input(format!("bad integer for {key}: {value:?}")))
            };
            match key.trim() {
                "a" => p.a = int()?,
                "b" => p.b = int()?,
                "t" => p.t = int()?,
                "c" => p.c = value.parse()?,
                "d" => {
                    p.d = int()?;
                    saw_d = true;
                }
                "C" => {
                    p.big_c = int()?;
                    saw_c = true;
                }
                "K" => p.k_cap = int()?,
                "desk" => {
                    p.desk_scale = value
                        .parse()
                        .map_err(|_| Error::input(format!("bad boolean for desk: {value:?}")))?
                }
                "seed" => {
                    p.seed = value
                        .parse()
                        .map_err(|_| Error::input(format!("bad seed: {value:?}")))?
                }
                other => return Err(Error::input(format!("unknown parameter {other:?}"))),
            }
        }
        if !saw_d {
            p.d = 2 * (p.a * p.t).max(2);
        }
        if !saw_c {
            p.big_c = 2 * p.a * p.b;
        }
        p.validate()?;
        Ok(p)
    }
}

impl FromStr for ExponentParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExponentParams::parse(s)
    }
}

impl fmt::Display for ExponentParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={},b={},t={},c={},d={},C={},K={},desk={},seed={}",
            self.a,
            self.b,
            self.t,
            self.c,
            self.d,
            self.big_c,
            self.k_cap,
            self.desk_scale,
            self.seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = ExponentParams::default();
        p.validate().unwrap();
        assert_eq!((p.d, p.big_c), (4, 8));
    }

    #[test]
    fn parse_round_trip() {
        let p: ExponentParams = "a=3,b=2,t=1,c=1/8".parse().unwrap();
        assert_eq!((p.a, p.d, p.big_c), (3, 6, 12));
        let q: ExponentParams = p.to_string().parse().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExponentParams::parse("a=1").is_err());
        assert!(ExponentParams::parse("c=1/2").is_err());
        assert!(ExponentParams::parse("d=3").is_err());
        assert!(ExponentParams::parse("z=3").is_err());
        assert!(ExponentParams::parse("a").is_err());
    }
}
