use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An ordinal below ω^ω in Cantor normal form: a sum of terms ω^e·c with
/// strictly decreasing exponents and positive coefficients. The empty sum
/// is 0. The derived ordering on the term list is the ordinal order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrdCNF(Vec<(u32, u32)>);

impl OrdCNF {
    pub fn zero() -> Self {
        OrdCNF(Vec::new())
    }

    pub fn finite(n: u32) -> Self {
        if n == 0 {
            OrdCNF::zero()
        } else {
            OrdCNF(vec![(0, n)])
        }
    }

    pub fn omega() -> Self {
        OrdCNF(vec![(1, 1)])
    }

    /// Builds from `(exponent, coefficient)` terms, which must come with
    /// strictly decreasing exponents and nonzero coefficients.
    pub fn from_terms(terms: Vec<(u32, u32)>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::invalid("exponents must be strictly decreasing"));
            }
        }
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::invalid("coefficients must be positive"));
        }
        Ok(OrdCNF(terms))
    }

    pub fn terms(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u32> {
        match self.0.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn succ(&self) -> OrdCNF {
        let mut terms = self.0.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += 1,
            _ => terms.push((0, 1)),
        }
        OrdCNF(terms)
    }

    /// The predecessor, when one exists (zero and limits have none).
    pub fn pred(&self) -> Option<OrdCNF> {
        match self.0.last() {
            Some(&(0, c)) => {
                let mut terms = self.0.clone();
                if c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().expect("nonempty").1 -= 1;
                }
                Some(OrdCNF(terms))
            }
            _ => None,
        }
    }

    /// True for nonzero ordinals whose least exponent is at least 1.
    pub fn is_limit(&self) -> bool {
        matches!(self.0.last(), Some(&(e, _)) if e >= 1)
    }

    /// The canonical strictly increasing sequence converging to this limit:
    /// with the last term split off as γ + ω^k, entry `n` is γ + ω^(k-1)·(n+1).
    pub fn fundamental(&self, n: u32) -> Result<OrdCNF> {
        if !self.is_limit() {
            return Err(Error::invalid("fundamental sequence needs a limit ordinal"));
        }
        let mut terms = self.0.clone();
        let (k, c) = terms.pop().expect("limit is nonzero");
        if c > 1 {
            terms.push((k, c - 1));
        }
        terms.push((k - 1, n + 1));
        OrdCNF::from_terms(terms)
    }
}

/// The larger of the two ordinals.
pub fn ord_max(a: &OrdCNF, b: &OrdCNF) -> OrdCNF {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

impl fmt::Display for OrdCNF {
    /// Terms joined by `+`: `w^k*c` with `^1` and `*1` omitted, e.g.
    /// `w^2+w*3+4`. Zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => {
                    f.write_str("w")?;
                    if c > 1 {
                        write!(f, "*{c}")?;
                    }
                }
                _ => {
                    write!(f, "w^{e}")?;
                    if c > 1 {
                        write!(f, "*{c}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for OrdCNF {
    type Err = Error;

    fn from_str(s: &str) -> Result<OrdCNF> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse { line: 1, col: 1, msg: "empty ordinal".into() });
        }
        let mut terms: Vec<(u32, u32)> = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let term = parse_term(part)?;
            if let Some(&(last_e, _)) = terms.last() {
                if term.0 >= last_e {
                    return Err(Error::Parse {
                        line: 1,
                        col: 1,
                        msg: format!("exponents must strictly decrease near '{part}'"),
                    });
                }
            }
            if term == (0, 0) && (terms.is_empty() && s == "0") {
                return Ok(OrdCNF::zero());
            }
            if term.1 == 0 {
                return Err(Error::Parse {
                    line: 1,
                    col: 1,
                    msg: format!("zero coefficient in '{part}'"),
                });
            }
            terms.push(term);
        }
        Ok(OrdCNF(terms))
    }
}

fn parse_term(part: &str) -> Result<(u32, u32)> {
    let bad = |msg: String| Error::Parse { line: 1, col: 1, msg };
    if let Some(rest) = part.strip_prefix('w') {
        let (exp_str, coeff_str) = match rest.split_once('*') {
            Some((e, c)) => (e, Some(c)),
            None => (rest, None),
        };
        let e = if exp_str.is_empty() {
            1
        } else {
            let digits = exp_str
                .strip_prefix('^')
                .ok_or_else(|| bad(format!("expected '^' in '{part}'")))?;
            digits
                .trim()
                .parse::<u32>()
                .map_err(|_| bad(format!("bad exponent in '{part}'")))?
        };
        if e == 0 {
            return Err(bad(format!("'w^0' is not allowed, write the number in '{part}'")));
        }
        let c = match coeff_str {
            Some(c) => c
                .trim()
                .parse::<u32>()
                .map_err(|_| bad(format!("bad coefficient in '{part}'")))?,
            None => 1,
        };
        Ok((e, c))
    } else {
        let c = part
            .parse::<u32>()
            .map_err(|_| bad(format!("bad number '{part}'")))?;
        Ok((0, c))
    }
}
