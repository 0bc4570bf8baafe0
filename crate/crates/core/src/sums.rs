//! Kloosterman, twisted Kloosterman, Gauss and Jacobi sums.
//!
//! Every sum is a direct summation over units. Summands are roots of unity, so a
//! sum is accumulated as a histogram of exponents and reduced once at the end.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::characters::{primitive_additive_character, AdditiveCharacter, MultiplicativeCharacter};
use crate::cyclotomic::{CycInt, Cyclotomic};
use crate::error::{Error, Result};
use crate::ring::{make_ring, Elem, FiniteRing, Ring, RingSpec, DEFAULT_SIZE_CAP};
use crate::Cyc;

/// A sum value with a description of what was summed.
#[derive(Debug, Clone)]
pub struct SumValue<T: CycInt = BigInt> {
    pub value: Cyclotomic<T>,
    pub ring: String,
    pub kind: &'static str,
    pub params: BTreeMap<String, Value>,
}

impl<T: CycInt> SumValue<T> {
    pub fn approx(&self) -> Complex64 {
        self.value.to_complex()
    }

    pub fn to_json(&self) -> Value {
        let z = self.approx();
        json!({
            "kind": self.kind,
            "ring": self.ring,
            "params": self.params,
            "value": self.value.to_json(),
            "approx": [z.re, z.im],
        })
    }
}

/// Exponent histogram for `Σ ζ_order^k`.
struct Histogram {
    order: u64,
    counts: Vec<i64>,
}

impl Histogram {
    fn new(order: u64) -> Self {
        Histogram {
            order,
            counts: vec![0; order as usize],
        }
    }

    #[inline]
    fn push(&mut self, k: u64) {
        self.counts[(k % self.order) as usize] += 1;
    }

    fn finish<T: CycInt>(self) -> Cyclotomic<T> {
        Cyclotomic::from_exponent_counts(self.order as usize, &self.counts)
    }
}

fn reject_zero_ring(ring: &FiniteRing) -> Result<()> {
    if ring.is_zero_ring() {
        Err(Error::ZeroRing)
    } else {
        Ok(())
    }
}

fn same(a: &Ring, b: &Ring) -> Result<()> {
    if crate::ring::same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

fn check_elem(ring: &FiniteRing, a: Elem) -> Result<()> {
    if a < ring.size() {
        Ok(())
    } else {
        Err(Error::BadElement(a))
    }
}

fn canonical(ring: &Ring) -> Result<AdditiveCharacter> {
    primitive_additive_character(ring)
        .ok_or_else(|| Error::NotFrobenius(ring.descriptor().to_string()))
}

/// `K(φ,ψ) = Σ_{u∈R^×} φ(u)ψ(u⁻¹)`. With `perturb`, the first summand is multiplied by `ζ_N`.
pub(crate) fn kloosterman_raw<T: CycInt>(
    phi: &AdditiveCharacter,
    psi: &AdditiveCharacter,
    perturb: bool,
) -> Result<Cyclotomic<T>> {
    same(phi.ring(), psi.ring())?;
    let r = phi.ring();
    reject_zero_ring(r)?;
    let mut h = Histogram::new(phi.order());
    for (i, &u) in r.units().iter().enumerate() {
        let k = phi.value_exp(u) + psi.value_exp(r.inv(u));
        h.push(k + u64::from(perturb && i == 0));
    }
    Ok(h.finish())
}

/// `K(φ,ψ)` as a bare cyclotomic value.
pub fn kloosterman_value<T: CycInt>(
    phi: &AdditiveCharacter,
    psi: &AdditiveCharacter,
) -> Result<Cyclotomic<T>> {
    kloosterman_raw(phi, psi, false)
}

pub fn kloosterman(phi: &AdditiveCharacter, psi: &AdditiveCharacter) -> Result<SumValue> {
    Ok(SumValue {
        value: kloosterman_value(phi, psi)?,
        ring: phi.ring().descriptor().to_string(),
        kind: "kloosterman",
        params: BTreeMap::from([
            ("phi".to_string(), json!(phi.exponents())),
            ("psi".to_string(), json!(psi.exponents())),
        ]),
    })
}

/// `K(a) = K(ψ, a.ψ)` with the canonical primitive `ψ`.
pub fn kloosterman_param(ring: &Ring, a: Elem) -> Result<SumValue> {
    check_elem(ring, a)?;
    let psi = canonical(ring)?;
    Ok(SumValue {
        value: kloosterman_value(&psi, &psi.scale(a)?)?,
        ring: ring.descriptor().to_string(),
        kind: "kloosterman_param",
        params: BTreeMap::from([("a".to_string(), json!(a))]),
    })
}

/// `K_τ(a) = Σ_{u∈R^×} τ(u)ψ(u + au⁻¹)`, valued in `μ_L` with `L = lcm(N, M)`.
pub(crate) fn twisted_raw<T: CycInt>(
    psi: &AdditiveCharacter,
    tau: &MultiplicativeCharacter,
    a: Elem,
    perturb: bool,
) -> Result<Cyclotomic<T>> {
    same(psi.ring(), tau.ring())?;
    let r = psi.ring();
    reject_zero_ring(r)?;
    check_elem(r, a)?;
    let (n, m) = (psi.order(), tau.order());
    let l = n.lcm(&m);
    let (sn, sm) = (l / n, l / m);
    let mut h = Histogram::new(l);
    for (i, &u) in r.units().iter().enumerate() {
        let t = tau.value_exp(u).expect("unit");
        let x = r.add(u, r.mul(a, r.inv(u)));
        h.push(t * sm + psi.value_exp(x) * sn + u64::from(perturb && i == 0));
    }
    Ok(h.finish())
}

/// `K_τ(a)` with an explicit primitive `ψ`.
pub fn twisted_value<T: CycInt>(
    psi: &AdditiveCharacter,
    tau: &MultiplicativeCharacter,
    a: Elem,
) -> Result<Cyclotomic<T>> {
    if !psi.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    twisted_raw(psi, tau, a, false)
}

fn twisted_sum(
    psi: &AdditiveCharacter,
    tau: &MultiplicativeCharacter,
    a: Elem,
) -> Result<SumValue> {
    Ok(SumValue {
        value: twisted_value(psi, tau, a)?,
        ring: psi.ring().descriptor().to_string(),
        kind: "twisted_kloosterman",
        params: BTreeMap::from([
            ("a".to_string(), json!(a)),
            ("psi".to_string(), json!(psi.exponents())),
            ("tau".to_string(), json!(tau.exponents())),
        ]),
    })
}

/// `K_τ(a)` with the canonical primitive character.
pub fn twisted_kloosterman(
    ring: &Ring,
    tau: &MultiplicativeCharacter,
    a: Elem,
) -> Result<SumValue> {
    same(ring, tau.ring())?;
    twisted_sum(&canonical(ring)?, tau, a)
}

/// `K_τ(a; ψ)` for a caller-chosen primitive `ψ`.
pub fn twisted_kloosterman_with(
    psi: &AdditiveCharacter,
    tau: &MultiplicativeCharacter,
    a: Elem,
) -> Result<SumValue> {
    twisted_sum(psi, tau, a)
}

/// `G(ψ,χ) = Σ_{u∈R^×} ψ(u)χ(u)`.
pub fn gauss_value<T: CycInt>(
    psi: &AdditiveCharacter,
    chi: &MultiplicativeCharacter,
) -> Result<Cyclotomic<T>> {
    same(psi.ring(), chi.ring())?;
    let r = psi.ring();
    reject_zero_ring(r)?;
    let (n, m) = (psi.order(), chi.order());
    let l = n.lcm(&m);
    let mut h = Histogram::new(l);
    for &u in r.units() {
        h.push(psi.value_exp(u) * (l / n) + chi.value_exp(u).expect("unit") * (l / m));
    }
    Ok(h.finish())
}

pub fn gauss(psi: &AdditiveCharacter, chi: &MultiplicativeCharacter) -> Result<SumValue> {
    Ok(SumValue {
        value: gauss_value(psi, chi)?,
        ring: psi.ring().descriptor().to_string(),
        kind: "gauss",
        params: BTreeMap::from([
            ("chi".to_string(), json!(chi.exponents())),
            ("psi".to_string(), json!(psi.exponents())),
        ]),
    })
}

/// `J_a(χ,η) = Σ_{u+v=a, u,v∈R^×} χ(u)η(v)`.
pub fn jacobi_value<T: CycInt>(
    a: Elem,
    chi: &MultiplicativeCharacter,
    eta: &MultiplicativeCharacter,
) -> Result<Cyclotomic<T>> {
    same(chi.ring(), eta.ring())?;
    let r = chi.ring();
    reject_zero_ring(r)?;
    check_elem(r, a)?;
    let mut h = Histogram::new(chi.order());
    for &u in r.units() {
        if let Some(ev) = eta.value_exp(r.sub(a, u)) {
            h.push(chi.value_exp(u).expect("unit") + ev);
        }
    }
    Ok(h.finish())
}

pub fn jacobi_generalized(
    a: Elem,
    chi: &MultiplicativeCharacter,
    eta: &MultiplicativeCharacter,
) -> Result<SumValue> {
    Ok(SumValue {
        value: jacobi_value(a, chi, eta)?,
        ring: chi.ring().descriptor().to_string(),
        kind: "jacobi",
        params: BTreeMap::from([
            ("a".to_string(), json!(a)),
            ("chi".to_string(), json!(chi.exponents())),
            ("eta".to_string(), json!(eta.exponents())),
        ]),
    })
}

/// `J(χ,η) = J_1(χ,η)`.
pub fn jacobi(chi: &MultiplicativeCharacter, eta: &MultiplicativeCharacter) -> Result<SumValue> {
    jacobi_generalized(chi.ring().one(), chi, eta)
}

/// `S(m,n;q) = Σ_{u∈(Z/q)^×} e_q(mu + nu⁻¹)`.
pub fn classical_kloosterman(m: i64, n: i64, q: u64) -> Result<SumValue> {
    if q < 2 {
        return Err(Error::Precondition(format!(
            "modulus {q} must be at least 2"
        )));
    }
    let ring = make_ring(&RingSpec::Zn(q), DEFAULT_SIZE_CAP)?;
    let psi = canonical(&ring)?;
    let elem = |k: i64| k.rem_euclid(q as i64) as Elem;
    let value: Cyc = kloosterman_value(&psi.scale(elem(m))?, &psi.scale(elem(n))?)?;
    Ok(SumValue {
        value,
        ring: ring.descriptor().to_string(),
        kind: "classical_kloosterman",
        params: BTreeMap::from([
            ("m".to_string(), json!(m)),
            ("n".to_string(), json!(n)),
            ("q".to_string(), json!(q)),
        ]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{multiplicative_characters, quadratic_character};
    use crate::ring::parse_ring;

    fn int(v: &Cyc) -> i64 {
        i64::try_from(v.as_integer().expect("rational integer")).unwrap()
    }

    #[test]
    fn z4_kloosterman() {
        let r = parse_ring("Z/4").unwrap();
        let psi = primitive_additive_character(&r).unwrap();
        assert_eq!(int(&kloosterman(&psi, &psi).unwrap().value), -2);
        assert_eq!(
            int(&kloosterman(&psi, &psi.scale(2).unwrap()).unwrap().value),
            0
        );
        assert_eq!(int(&kloosterman_param(&r, 3).unwrap().value), 2);
        let one = AdditiveCharacter::trivial(&r);
        assert_eq!(int(&kloosterman(&one, &one).unwrap().value), 2);
    }

    #[test]
    fn ramanujan_values() {
        let r = parse_ring("Z/9").unwrap();
        assert_eq!(int(&kloosterman_param(&r, 3).unwrap().value), 0);
        assert_eq!(int(&kloosterman_param(&r, 0).unwrap().value), 0);
        let f = parse_ring("GF(5)").unwrap();
        assert_eq!(int(&kloosterman_param(&f, 0).unwrap().value), -1);
    }

    #[test]
    fn classical() {
        let s = classical_kloosterman(1, 1, 5).unwrap();
        assert!((s.approx().re - 0.381966).abs() < 1e-6);
        for q in 2..20 {
            let phi = (1..q).filter(|k: &u64| k.gcd(&q) == 1).count() as i64;
            assert_eq!(int(&classical_kloosterman(0, 0, q).unwrap().value), phi);
            assert_eq!(
                classical_kloosterman(2, 5, q).unwrap().value,
                classical_kloosterman(5, 2, q).unwrap().value
            );
        }
        assert!(matches!(
            classical_kloosterman(1, 1, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn salie_vanishing_on_z9() {
        let r = parse_ring("Z/9").unwrap();
        let sigma = quadratic_character(&r).unwrap();
        assert!(twisted_kloosterman(&r, &sigma, 3).unwrap().value.is_zero());
        assert!(twisted_kloosterman(&r, &sigma, 5).unwrap().value.is_zero());
        assert!(!twisted_kloosterman(&r, &sigma, 4).unwrap().value.is_zero());
        let psi = primitive_additive_character(&r).unwrap();
        for tau in multiplicative_characters(&r) {
            assert_eq!(
                twisted_kloosterman(&r, &tau, 0).unwrap().value,
                gauss(&psi, &tau).unwrap().value
            );
        }
    }

    #[test]
    fn gauss_and_jacobi() {
        let f3 = parse_ring("GF(3)").unwrap();
        let psi = primitive_additive_character(&f3).unwrap();
        let sigma = quadratic_character(&f3).unwrap();
        let g = gauss(&psi, &sigma).unwrap().value;
        assert_eq!(int(&(&g * &g)), -3);

        let f5 = parse_ring("GF(5)").unwrap();
        let sigma = quadratic_character(&f5).unwrap();
        assert_eq!(int(&jacobi(&sigma, &sigma).unwrap().value), -1);
        let one = MultiplicativeCharacter::trivial(&f5);
        assert_eq!(int(&jacobi(&one, &one).unwrap().value), 3);

        let r = parse_ring("Z/9").unwrap();
        let psi = primitive_additive_character(&r).unwrap();
        let triv = MultiplicativeCharacter::trivial(&r);
        assert!(gauss(&psi, &triv).unwrap().value.is_zero());
        let chars = multiplicative_characters(&r);
        let prim: Vec<_> = chars.iter().filter(|c| c.is_primitive().unwrap()).collect();
        for chi in &prim {
            let g = gauss(&psi, chi).unwrap().value;
            assert_eq!(int(&(&g * &g.conj())), 9);
            for eta in &prim {
                let prod = chi.product(eta).unwrap();
                if prod.is_primitive().unwrap() {
                    let lhs = &g * &gauss(&psi, eta).unwrap().value;
                    let rhs = &jacobi(chi, eta).unwrap().value * &gauss(&psi, &prod).unwrap().value;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn mismatch_and_zero_ring() {
        let a = parse_ring("Z/5").unwrap();
        let b = parse_ring("Z/5").unwrap();
        let pa = primitive_additive_character(&a).unwrap();
        let pb = primitive_additive_character(&b).unwrap();
        assert_eq!(kloosterman(&pa, &pb).unwrap_err(), Error::RingMismatch);
        let z = a.quotient_ring(&a.whole_ideal()).unwrap().ring;
        let t = AdditiveCharacter::trivial(&z);
        assert_eq!(kloosterman(&t, &t).unwrap_err(), Error::ZeroRing);
        let s = parse_ring("sqz(2,2)").unwrap();
        let tau = MultiplicativeCharacter::trivial(&s);
        assert!(matches!(
            twisted_kloosterman(&s, &tau, 0),
            Err(Error::NotFrobenius(_))
        ));
    }

    #[test]
    fn json_shape() {
        let v = kloosterman_param(&parse_ring("GF(5)").unwrap(), 0)
            .unwrap()
            .to_json();
        assert_eq!(v["kind"], "kloosterman_param");
        assert_eq!(v["ring"], "GF(5,1)");
        assert_eq!(v["value"]["coeffs"][0], -1);
        assert!((v["approx"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    }
}
