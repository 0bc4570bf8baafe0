//! Ring expressions: `Z/n`, `GF(p,k)`, `Fp[p;c0,…,ck]`, `triv(…)`, `sqz(p,m)`,
//! `table:path`, joined into products with ` x `.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingSpec {
    /// `Z/n`
    Zn(u64),
    /// `GF(p,k)`; `GF(q)` is accepted for a prime power `q`.
    Gf {
        p: u64,
        k: u32,
    },
    /// `F_p[x]/(f)` with `f` monic, coefficients constant first.
    PolyQuot {
        p: u64,
        coeffs: Vec<u64>,
    },
    Product(Vec<RingSpec>),
    /// The trivial extension `R ⋉ R̂`.
    Triv(Box<RingSpec>),
    /// `F_p ⊕ V` with `dim V = m` and `V² = 0`.
    SqZ {
        p: u64,
        m: u32,
    },
    Table(PathBuf),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zn(n) => write!(f, "Z/{n}"),
            RingSpec::Gf { p, k } => write!(f, "GF({p},{k})"),
            RingSpec::PolyQuot { p, coeffs } => {
                let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "Fp[{p};{}]", cs.join(","))
            }
            RingSpec::Product(parts) => {
                let ps: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", ps.join(" x "))
            }
            RingSpec::Triv(inner) => write!(f, "triv({inner})"),
            RingSpec::SqZ { p, m } => write!(f, "sqz({p},{m})"),
            RingSpec::Table(path) => write!(f, "table:{}", path.display()),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{tok}'")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: usize = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        let v = self.rest()[..digits]
            .parse::<u64>()
            .map_err(|_| self.err("number out of range"))?;
        self.pos += digits;
        Ok(v)
    }

    fn spec(&mut self) -> Result<RingSpec> {
        let mut parts = vec![self.atom()?];
        while self.rest().starts_with(" x ") {
            self.pos += 3;
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            RingSpec::Product(parts)
        })
    }

    fn atom(&mut self) -> Result<RingSpec> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("Z/") {
            let n = self.number()?;
            if n < 2 {
                self.pos = start;
                return Err(self.err("Z/n needs n >= 2"));
            }
            Ok(RingSpec::Zn(n))
        } else if self.eat("GF(") {
            let a = self.number()?;
            if self.eat(",") {
                let k = self.number()?;
                self.expect(")")?;
                if k == 0 || k > 32 {
                    return Err(self.err("GF degree must be in 1..=32"));
                }
                Ok(RingSpec::Gf { p: a, k: k as u32 })
            } else {
                self.expect(")")?;
                let (p, k) = prime_power(a).ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: format!("{a} is not a prime power"),
                })?;
                Ok(RingSpec::Gf { p, k })
            }
        } else if self.eat("Fp[") {
            let p = self.number()?;
            self.expect(";")?;
            let mut coeffs = vec![self.number()?];
            while self.eat(",") {
                coeffs.push(self.number()?);
            }
            self.expect("]")?;
            if coeffs.len() < 2 {
                return Err(self.err("polynomial must have degree >= 1"));
            }
            Ok(RingSpec::PolyQuot { p, coeffs })
        } else if self.eat("triv(") {
            let inner = self.spec()?;
            self.skip_ws();
            self.expect(")")?;
            Ok(RingSpec::Triv(Box::new(inner)))
        } else if self.eat("sqz(") {
            let p = self.number()?;
            self.expect(",")?;
            let m = self.number()?;
            self.expect(")")?;
            if m == 0 {
                return Err(self.err("sqz needs m >= 1"));
            }
            Ok(RingSpec::SqZ { p, m: m as u32 })
        } else if self.eat("table:") {
            let rest = self.rest();
            let end = rest
                .find(" x ")
                .or_else(|| rest.find(')'))
                .unwrap_or(rest.len());
            let path = rest[..end].trim_end();
            if path.is_empty() {
                return Err(self.err("missing table path"));
            }
            self.pos += end;
            Ok(RingSpec::Table(PathBuf::from(path)))
        } else {
            Err(self.err("expected a ring atom (Z/, GF(, Fp[, triv(, sqz(, table:)"))
        }
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> RingSpec {
        s.parse().unwrap()
    }

    #[test]
    fn atoms() {
        assert_eq!(parse("Z/12"), RingSpec::Zn(12));
        assert_eq!(parse("GF(3,2)"), RingSpec::Gf { p: 3, k: 2 });
        assert_eq!(parse("GF(9)"), RingSpec::Gf { p: 3, k: 2 });
        assert_eq!(
            parse("Fp[3;0,0,1]"),
            RingSpec::PolyQuot {
                p: 3,
                coeffs: vec![0, 0, 1]
            }
        );
        assert_eq!(parse("sqz(2,2)"), RingSpec::SqZ { p: 2, m: 2 });
        assert_eq!(
            parse("triv(Z/4)"),
            RingSpec::Triv(Box::new(RingSpec::Zn(4)))
        );
    }

    #[test]
    fn products_and_nesting() {
        assert_eq!(
            parse("Z/4 x GF(3)"),
            RingSpec::Product(vec![RingSpec::Zn(4), RingSpec::Gf { p: 3, k: 1 }])
        );
        assert_eq!(
            parse("triv(Z/2 x Z/3) x sqz(3,1)"),
            RingSpec::Product(vec![
                RingSpec::Triv(Box::new(RingSpec::Product(vec![
                    RingSpec::Zn(2),
                    RingSpec::Zn(3)
                ]))),
                RingSpec::SqZ { p: 3, m: 1 },
            ])
        );
    }

    #[test]
    fn errors_carry_positions() {
        match "Z/4 x Q".parse::<RingSpec>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            "GF(6)".parse::<RingSpec>(),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!("Z/1".parse::<RingSpec>().is_err());
        assert!("Z/4 trailing".parse::<RingSpec>().is_err());
        assert!("triv(Z/4".parse::<RingSpec>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "Z/25",
            "GF(2,2)",
            "Fp[5;0,0,1]",
            "triv(Z/4)",
            "sqz(3,2)",
            "Z/4 x GF(3,1)",
            "table:rings/a.json",
        ] {
            let spec = parse(s);
            assert_eq!(spec.to_string(), s);
            assert_eq!(parse(&spec.to_string()), spec);
        }
    }
}
