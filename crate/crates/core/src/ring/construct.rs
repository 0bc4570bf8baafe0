//! Builders for every [`RingSpec`] form.

use std::sync::Arc;

use super::poly::{is_prime, least_irreducible};
use super::{Elem, FiniteRing, Ring, RingSpec, Shape};
use crate::error::{Error, Result};

/// Rings up to this size get an exhaustive axiom check; larger ones are sampled.
const EXHAUSTIVE_AXIOMS: usize = 64;
const AXIOM_SAMPLES: usize = 20_000;

/// Parses a ring expression and builds it under the default size cap.
pub fn parse_ring(expr: &str) -> Result<Ring> {
    make_ring(&expr.parse()?, super::DEFAULT_SIZE_CAP)
}

/// Builds and validates the ring described by `spec`, refusing rings larger than `cap`.
pub fn make_ring(spec: &RingSpec, cap: usize) -> Result<Ring> {
    let size = spec_size(spec)?;
    if let Some(size) = size {
        if size > cap {
            return Err(Error::SizeCap { size, cap });
        }
    }
    let ring = build(spec, cap)?;
    if ring.size() > cap {
        return Err(Error::SizeCap {
            size: ring.size(),
            cap,
        });
    }
    Ok(ring)
}

/// Predicted size, or `None` for table rings (known only after loading).
fn spec_size(spec: &RingSpec) -> Result<Option<usize>> {
    let overflow = || Error::SizeCap {
        size: usize::MAX,
        cap: usize::MAX,
    };
    Ok(match spec {
        RingSpec::Zn(n) => Some(usize::try_from(*n).map_err(|_| overflow())?),
        RingSpec::Gf { p, k } => Some(checked_pow(*p, *k as usize).ok_or_else(overflow)?),
        RingSpec::PolyQuot { p, coeffs } => {
            Some(checked_pow(*p, coeffs.len() - 1).ok_or_else(overflow)?)
        }
        RingSpec::SqZ { p, m } => Some(checked_pow(*p, *m as usize + 1).ok_or_else(overflow)?),
        RingSpec::Product(parts) => {
            let mut total = 1usize;
            for part in parts {
                match spec_size(part)? {
                    Some(s) => total = total.checked_mul(s).ok_or_else(overflow)?,
                    None => return Ok(None),
                }
            }
            Some(total)
        }
        RingSpec::Triv(inner) => match spec_size(inner)? {
            Some(s) => Some(s.checked_mul(s).ok_or_else(overflow)?),
            None => None,
        },
        RingSpec::Table(_) => None,
    })
}

fn checked_pow(base: u64, exp: usize) -> Option<usize> {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc.checked_mul(usize::try_from(base).ok()?)?;
    }
    Some(acc)
}

fn build(spec: &RingSpec, cap: usize) -> Result<Ring> {
    let ring = match spec {
        RingSpec::Zn(n) => zn(*n)?,
        RingSpec::Gf { p, k } => {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
            let f = least_irreducible(*p, *k as usize);
            poly_quotient(spec.to_string(), *p, &f)?
        }
        RingSpec::PolyQuot { p, coeffs } => {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
            let f: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
            if f[f.len() - 1] != 1 {
                return Err(Error::InvalidSpec(format!(
                    "{spec}: polynomial must be monic"
                )));
            }
            poly_quotient(spec.to_string(), *p, &f)?
        }
        RingSpec::SqZ { p, m } => {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
            sqz(*p, *m as usize)?
        }
        RingSpec::Product(parts) => {
            let factors = parts
                .iter()
                .map(|s| build(s, cap))
                .collect::<Result<Vec<_>>>()?;
            product(factors)?
        }
        RingSpec::Triv(inner) => {
            let base = build(inner, cap)?;
            let size = base.size().saturating_mul(base.size());
            if size > cap {
                return Err(Error::SizeCap { size, cap });
            }
            trivial_extension(base)?
        }
        RingSpec::Table(path) => {
            let ring = super::table::load_table(path, cap)?;
            return Ok(Arc::new(ring));
        }
    };
    let samples = (ring.size() > EXHAUSTIVE_AXIOMS).then_some(AXIOM_SAMPLES);
    ring.check_axioms(samples)?;
    Ok(Arc::new(ring))
}

fn zn(n: u64) -> Result<FiniteRing> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("Z/{n}")));
    }
    let size = n as usize;
    let mut add = vec![0u32; size * size];
    let mut mul = vec![0u32; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = ((a + b) % size) as u32;
            mul[a * size + b] = ((a as u64 * b as u64) % n) as u32;
        }
    }
    FiniteRing::from_tables(format!("Z/{n}"), Shape::Zn(n), size, 1, add, mul)
}

/// Digit-wise addition of base-`p` numerals below `size`.
fn digitwise_add(p: usize, size: usize) -> Vec<u32> {
    let mut add = vec![0u32; size * size];
    for a in 0..size {
        for b in 0..size {
            add[a * size + b] = if a == 0 {
                b as u32
            } else {
                let low = (a % p + b % p) % p;
                let high = add[(a / p) * size + b / p] as usize;
                (low + p * high) as u32
            };
        }
    }
    add
}

/// `F_p[x]/(f)` for a monic `f` of degree at least one.
fn poly_quotient(descriptor: String, p: u64, f: &[u64]) -> Result<FiniteRing> {
    let deg = f.len() - 1;
    let pu = p as usize;
    let size = pu.pow(deg as u32);
    let add = digitwise_add(pu, size);

    // x·y, by shifting digits and subtracting the top coefficient times f
    let xmul: Vec<usize> = (0..size)
        .map(|y| {
            let mut digits = vec![0u64; deg + 1];
            let mut t = y;
            for d in digits.iter_mut().skip(1) {
                *d = (t % pu) as u64;
                t /= pu;
            }
            let top = digits[deg];
            let mut idx = 0usize;
            for j in (0..deg).rev() {
                let c = (digits[j] + p * p - top * f[j] % p) % p;
                idx = idx * pu + c as usize;
            }
            idx
        })
        .collect();

    // a = a_0 + x·a', so a·b = a_0·b + x·(a'·b)
    let mut mul = vec![0u32; size * size];
    let mut scalar = vec![0usize; pu];
    for b in 0..size {
        for c in 1..pu {
            scalar[c] = add[scalar[c - 1] * size + b] as usize;
        }
        for a in 1..size {
            let rest = mul[(a / pu) * size + b] as usize;
            let shifted = xmul[rest];
            mul[a * size + b] = add[scalar[a % pu] * size + shifted];
        }
    }
    FiniteRing::from_tables(descriptor, Shape::Poly { p, deg }, size, 1, add, mul)
}

/// `F_p ⊕ V` with `dim V = m`, `V² = 0`; index `a + p·v`.
fn sqz(p: u64, m: usize) -> Result<FiniteRing> {
    let pu = p as usize;
    let size = pu.pow(m as u32 + 1);
    let add = digitwise_add(pu, size);
    let digits = |x: usize| -> Vec<usize> {
        let mut t = x;
        (0..=m)
            .map(|_| {
                let d = t % pu;
                t /= pu;
                d
            })
            .collect()
    };
    let all: Vec<Vec<usize>> = (0..size).map(digits).collect();
    let mut mul = vec![0u32; size * size];
    for x in 0..size {
        for y in 0..size {
            let (dx, dy) = (&all[x], &all[y]);
            let (a, b) = (dx[0], dy[0]);
            let mut idx = 0usize;
            for j in (1..=m).rev() {
                idx = idx * pu + (a * dy[j] + b * dx[j]) % pu;
            }
            mul[x * size + y] = (idx * pu + a * b % pu) as u32;
        }
    }
    FiniteRing::from_tables(format!("sqz({p},{m})"), Shape::SqZ, size, 1, add, mul)
}

fn product(factors: Vec<Ring>) -> Result<FiniteRing> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let size: usize = sizes.iter().product();
    let split = |mut x: usize| -> Vec<Elem> {
        let mut out = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            out[i] = x % sizes[i];
            x /= sizes[i];
        }
        out
    };
    let parts: Vec<Vec<Elem>> = (0..size).map(split).collect();
    let join = |xs: &mut dyn Iterator<Item = Elem>| -> usize {
        xs.zip(&sizes).fold(0, |acc, (x, s)| acc * s + x)
    };
    let mut add = vec![0u32; size * size];
    let mut mul = vec![0u32; size * size];
    for x in 0..size {
        for y in 0..size {
            let (px, py) = (&parts[x], &parts[y]);
            add[x * size + y] =
                join(&mut factors.iter().enumerate().map(|(i, f)| f.add(px[i], py[i]))) as u32;
            mul[x * size + y] =
                join(&mut factors.iter().enumerate().map(|(i, f)| f.mul(px[i], py[i]))) as u32;
        }
    }
    let one = join(&mut factors.iter().map(|f| f.one()));
    let descriptor = factors
        .iter()
        .map(|f| f.descriptor().to_string())
        .collect::<Vec<_>>()
        .join(" x ");
    FiniteRing::from_tables(descriptor, Shape::Product(factors), size, one, add, mul)
}

/// Mixed-radix index of an exponent vector, first coordinate least significant.
pub(crate) fn exponents_to_index(exps: &[u64], orders: &[u64]) -> usize {
    exps.iter()
        .zip(orders)
        .rev()
        .fold(0usize, |acc, (e, d)| acc * (*d as usize) + (*e as usize))
}

pub(crate) fn index_to_exponents(mut idx: usize, orders: &[u64]) -> Vec<u64> {
    orders
        .iter()
        .map(|&d| {
            let e = (idx % d as usize) as u64;
            idx /= d as usize;
            e
        })
        .collect()
}

/// `R ⋉ R̂` with `(r,λ)(r',λ') = (rr', r.λ' + r'.λ)`.
fn trivial_extension(base: Ring) -> Result<FiniteRing> {
    let n = base.size();
    let dec = base.additive_decomposition().clone();
    let orders = dec.orders.clone();
    let big_n = dec.exponent;
    let duals: Vec<Vec<u64>> = (0..n).map(|i| index_to_exponents(i, &orders)).collect();
    // λ(x) as an exponent mod N
    let eval = |lam: &[u64], x: Elem| -> u64 {
        let coords = dec.coordinates(x).expect("every element has coordinates");
        lam.iter()
            .zip(coords)
            .zip(&orders)
            .map(|((e, c), d)| e * c % d * (big_n / d))
            .sum::<u64>()
            % big_n
    };
    // scale[r][λ] = index of r.λ, i.e. x ↦ λ(rx)
    let mut scale = vec![0usize; n * n];
    for r in 0..n {
        for (li, lam) in duals.iter().enumerate() {
            let exps: Vec<u64> = dec
                .generators
                .iter()
                .zip(&orders)
                .map(|(&g, &d)| eval(lam, base.mul(r, g)) * d / big_n)
                .collect();
            scale[r * n + li] = exponents_to_index(&exps, &orders);
        }
    }
    let dual_add = |l1: usize, l2: usize| -> usize {
        let exps: Vec<u64> = duals[l1]
            .iter()
            .zip(&duals[l2])
            .zip(&orders)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        exponents_to_index(&exps, &orders)
    };
    let mut dadd = vec![0usize; n * n];
    for l1 in 0..n {
        for l2 in 0..n {
            dadd[l1 * n + l2] = dual_add(l1, l2);
        }
    }
    let size = n * n;
    let mut add = vec![0u32; size * size];
    let mut mul = vec![0u32; size * size];
    for x in 0..size {
        let (r, l) = (x / n, x % n);
        for y in 0..size {
            let (s, m) = (y / n, y % n);
            add[x * size + y] = (base.add(r, s) * n + dadd[l * n + m]) as u32;
            let lam = dadd[scale[r * n + m] * n + scale[s * n + l]];
            mul[x * size + y] = (base.mul(r, s) * n + lam) as u32;
        }
    }
    let one = base.one() * n;
    let descriptor = format!("triv({})", base.descriptor());
    FiniteRing::from_tables(descriptor, Shape::Triv(base), size, one, add, mul)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> Ring {
        parse_ring(s).unwrap()
    }

    #[test]
    fn sizes_and_characteristics() {
        for (s, size, ch) in [
            ("Z/4", 4, 4),
            ("GF(4)", 4, 2),
            ("GF(9)", 9, 3),
            ("Fp[3;0,0,1]", 9, 3),
            ("Z/4 x GF(3)", 12, 12),
            ("triv(Z/2)", 4, 2),
            ("triv(Z/4)", 16, 4),
            ("sqz(2,2)", 8, 2),
            ("sqz(3,2)", 27, 3),
        ] {
            let r = ring(s);
            assert_eq!(r.size(), size, "{s}");
            assert_eq!(r.characteristic(), ch, "{s}");
            assert_eq!(r.descriptor(), s.parse::<RingSpec>().unwrap().to_string());
        }
    }

    #[test]
    fn gf4_multiplication() {
        // x·x = x + 1 with index a_0 + 2a_1
        let r = ring("GF(2,2)");
        assert_eq!(r.mul(2, 2), 3);
        assert_eq!(r.mul(3, 3), 2);
        assert_eq!(r.mul(2, 3), 1);
    }

    #[test]
    fn poly_tables_agree_with_direct_multiplication() {
        let f = [1u64, 2, 0, 1];
        let r = poly_quotient("t".into(), 3, &f).unwrap();
        let digits = |x: usize| vec![(x % 3) as u64, (x / 3 % 3) as u64, (x / 9) as u64];
        for a in 0..27 {
            for b in 0..27 {
                let direct = super::super::poly::mul_mod(&digits(a), &digits(b), &f, 3);
                let idx = direct[0] as usize + 3 * direct[1] as usize + 9 * direct[2] as usize;
                assert_eq!(r.mul(a, b), idx);
            }
        }
    }

    #[test]
    fn sqz_products_vanish_on_v() {
        let r = ring("sqz(3,2)");
        for v in (0..27).filter(|v| v % 3 == 0) {
            for w in (0..27).filter(|w| w % 3 == 0) {
                assert_eq!(r.mul(v, w), 0);
            }
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(parse_ring("GF(4,1)").unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            parse_ring("Fp[3;1,0,2]"),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            make_ring(&"Z/100".parse().unwrap(), 64),
            Err(Error::SizeCap { size: 100, cap: 64 })
        ));
        assert!(matches!(
            make_ring(&"triv(Z/9)".parse().unwrap(), 64),
            Err(Error::SizeCap { size: 81, cap: 64 })
        ));
    }

    #[test]
    fn product_index_puts_first_factor_high() {
        let r = ring("Z/4 x GF(3)");
        // (1,0) is 3, (0,1) is 1
        assert_eq!(r.one(), 4);
        assert_eq!(r.mul(3, 3), 3);
        assert_eq!(r.mul(3, 1), 0);
    }

    #[test]
    fn larger_rings_pass_sampled_axioms() {
        let r = ring("GF(2,7)");
        assert_eq!(r.size(), 128);
        let r = ring("triv(Z/8)");
        assert_eq!(r.size(), 64);
    }
}
