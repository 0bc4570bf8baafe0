use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::json;

use crate::characters::{
    primitive_additive_character, push_additive, AdditiveCharacter, MultiplicativeCharacter,
};
use crate::error::{Error, Result};
use crate::ring::{Elem, Quotient, Ring};
use crate::sums::{kloosterman_raw, kloosterman_value, twisted_value, SumValue};
use crate::Cyc;

use super::context::{chi_value, int};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `a ∈ R`
    Full,
    /// `a ∈ R^×`
    Unitary,
}

fn canonical(ring: &Ring) -> Result<AdditiveCharacter> {
    primitive_additive_character(ring)
        .ok_or_else(|| Error::NotFrobenius(ring.descriptor().to_string()))
}

/// `Σ K_τ(a)^k`, or `Σ |K_τ(a)|^k` when `absolute` (then `k` must be even).
pub fn moment(
    ring: &Ring,
    tau: &MultiplicativeCharacter,
    k: u32,
    domain: Domain,
    absolute: bool,
) -> Result<SumValue> {
    if k == 0 {
        return Err(Error::Precondition("moment order must be positive".into()));
    }
    if absolute && k % 2 == 1 {
        return Err(Error::OddAbsoluteMoment(k));
    }
    if !Arc::ptr_eq(ring, tau.ring()) {
        return Err(Error::RingMismatch);
    }
    let psi = canonical(ring)?;
    let domain_elems: Vec<Elem> = match domain {
        Domain::Full => ring.elements().collect(),
        Domain::Unitary => ring.units().to_vec(),
    };
    let mut total = int(0);
    for a in domain_elems {
        let v: Cyc = twisted_value(&psi, tau, a)?;
        let term = if absolute {
            v.norm_sqr().pow(k / 2)
        } else {
            v.pow(k)
        };
        total += &term;
    }
    Ok(SumValue {
        value: total,
        ring: ring.descriptor().to_string(),
        kind: "moment",
        params: BTreeMap::from([
            ("absolute".to_string(), json!(absolute)),
            (
                "domain".to_string(),
                json!(if domain == Domain::Full {
                    "full"
                } else {
                    "unitary"
                }),
            ),
            ("k".to_string(), json!(k)),
            ("tau".to_string(), json!(tau.exponents())),
        ]),
    })
}

/// `Σ_{a∈R^×} χ(a) K_τ(a)^k`, or with `|K_τ(a)|^k` when `absolute`; `k ∈ {1, 2}`.
pub fn weighted_moment(
    ring: &Ring,
    tau: &MultiplicativeCharacter,
    chi: &MultiplicativeCharacter,
    k: u32,
    absolute: bool,
) -> Result<SumValue> {
    if !ring.is_local() {
        return Err(Error::NotLocal(ring.descriptor().to_string()));
    }
    if !(1..=2).contains(&k) {
        return Err(Error::Precondition(format!(
            "weighted moments are defined for k = 1, 2, not {k}"
        )));
    }
    if absolute && k == 1 {
        return Err(Error::OddAbsoluteMoment(k));
    }
    if !Arc::ptr_eq(ring, tau.ring()) || !Arc::ptr_eq(ring, chi.ring()) {
        return Err(Error::RingMismatch);
    }
    let psi = canonical(ring)?;
    let mut total = int(0);
    for &a in ring.units() {
        let v: Cyc = twisted_value(&psi, tau, a)?;
        let term = match (k, absolute) {
            (1, _) => v,
            (_, true) => v.norm_sqr(),
            _ => v.pow(2),
        };
        total += &(&chi_value(chi, a) * &term);
    }
    Ok(SumValue {
        value: total,
        ring: ring.descriptor().to_string(),
        kind: "weighted_moment",
        params: BTreeMap::from([
            ("absolute".to_string(), json!(absolute)),
            ("chi".to_string(), json!(chi.exponents())),
            ("k".to_string(), json!(k)),
            ("tau".to_string(), json!(tau.exponents())),
        ]),
    })
}

/// One summand `|d^⊥| K(d.ψ, (a₀b₀).(d.ψ); R/d^⊥)` of the ideal-indexed side.
#[derive(Debug, Clone)]
pub struct SkTerm {
    /// Smallest generator of `(d)`.
    pub generator: Elem,
    pub annihilator_size: usize,
    pub quotient: String,
    pub value: Cyc,
}

#[derive(Debug, Clone)]
pub struct SkSides {
    pub lhs: Cyc,
    pub rhs: Cyc,
    pub terms: Vec<SkTerm>,
    /// Generator-dependence or coset-ambiguity found while forming the terms.
    pub notes: Vec<String>,
}

impl SkSides {
    pub fn holds(&self) -> bool {
        self.notes.is_empty() && self.lhs == self.rhs
    }
}

struct Generator {
    d: Elem,
    /// `a₀` with `d·a₀ = a`, for each `a ∈ (d)`.
    solution: Vec<Option<Elem>>,
    /// `K(d.ψ, c.(d.ψ))` on the quotient, indexed by `c`.
    table: Vec<Cyc>,
}

struct IdealTerm {
    mask: Vec<bool>,
    annihilator_size: usize,
    quotient: Arc<Quotient>,
    generators: Vec<Generator>,
}

/// Precomputed data for the Selberg–Kuznetsov identity on one ring.
pub(crate) struct SkTables {
    ring: Ring,
    scaled: Vec<AdditiveCharacter>,
    ideals: Vec<IdealTerm>,
    /// Structural defects found while building, reported with every point.
    defects: Vec<String>,
}

impl SkTables {
    pub fn new(ring: &Ring, psi: &AdditiveCharacter) -> Result<Self> {
        let scaled = ring
            .elements()
            .map(|a| psi.scale(a))
            .collect::<Result<Vec<_>>>()?;
        let principal = ring.principal_ideals();
        let mut ideals = Vec::new();
        let mut defects = Vec::new();
        for (ideal, gens) in principal.ideals.iter().zip(&principal.generators) {
            if ideal.is_zero() {
                continue;
            }
            let ann = ring.annihilator(ideal);
            let quotient = Arc::new(ring.quotient_ring(&ann)?);
            let first = gens[0];
            let mut generators = Vec::new();
            for &d in gens {
                if !ring.units().iter().any(|&u| ring.mul(u, first) == d) {
                    defects.push(format!(
                        "generator {d} of ({first}) is not a unit multiple of {first}"
                    ));
                }
                let mut solution = vec![None; ring.size()];
                let mut count = vec![0usize; ring.size()];
                for r in ring.elements() {
                    let x = ring.mul(d, r);
                    count[x] += 1;
                    if solution[x].is_none() {
                        solution[x] = Some(r);
                    }
                }
                if ideal.elements().iter().any(|&x| count[x] != ann.len()) {
                    defects.push(format!(
                        "solutions of d·x = a for d = {d} are not single cosets of d^⊥"
                    ));
                }
                let pushed = push_additive(&scaled[d], &quotient)?;
                if !pushed.is_primitive() {
                    return Err(Error::Internal(format!("{d}.ψ is not primitive on R/d^⊥")));
                }
                let table = quotient
                    .ring
                    .elements()
                    .map(|c| kloosterman_value(&pushed, &pushed.scale(c)?))
                    .collect::<Result<Vec<Cyc>>>()?;
                generators.push(Generator { d, solution, table });
            }
            let mut mask = vec![false; ring.size()];
            for &x in ideal.elements() {
                mask[x] = true;
            }
            ideals.push(IdealTerm {
                mask,
                annihilator_size: ann.len(),
                quotient,
                generators,
            });
        }
        Ok(SkTables {
            ring: Arc::clone(ring),
            scaled,
            ideals,
            defects,
        })
    }

    pub fn sides(&self, a: Elem, b: Elem, perturb: bool) -> Result<SkSides> {
        let r = &self.ring;
        let lhs: Cyc = kloosterman_raw(&self.scaled[a], &self.scaled[b], perturb)?;
        let mut rhs = int(0);
        let mut terms = Vec::new();
        let mut notes = self.defects.clone();
        for term in &self.ideals {
            if !term.mask[a] || !term.mask[b] {
                continue;
            }
            let scale = BigInt::from(term.annihilator_size);
            let values: Vec<Cyc> = term
                .generators
                .iter()
                .map(|g| {
                    let a0 = g.solution[a].expect("a lies in (d)");
                    let b0 = g.solution[b].expect("b lies in (d)");
                    g.table[term.quotient.project(r.mul(a0, b0))].scale(&scale)
                })
                .collect();
            if values.iter().any(|v| *v != values[0]) {
                notes.push(format!(
                    "term for ({}) depends on the generator",
                    term.generators[0].d
                ));
            }
            rhs += &values[0];
            terms.push(SkTerm {
                generator: term.generators[0].d,
                annihilator_size: term.annihilator_size,
                quotient: term.quotient.ring.descriptor().to_string(),
                value: values[0].clone(),
            });
        }
        if a == 0 && b == 0 {
            // d = 0: R/d^⊥ is the zero ring, whose Kloosterman sum is 1
            let value = int(r.size() as i64);
            rhs += &value;
            terms.push(SkTerm {
                generator: 0,
                annihilator_size: r.size(),
                quotient: "0".into(),
                value,
            });
        }
        Ok(SkSides {
            lhs,
            rhs,
            terms,
            notes,
        })
    }
}

/// Both sides of the Selberg–Kuznetsov identity at `(a, b)` with the canonical primitive character.
pub fn selberg_kuznetsov_sides(ring: &Ring, a: Elem, b: Elem) -> Result<SkSides> {
    for x in [a, b] {
        if x >= ring.size() {
            return Err(Error::BadElement(x));
        }
    }
    let psi = canonical(ring)?;
    SkTables::new(ring, &psi)?.sides(a, b, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{multiplicative_characters, quadratic_character};
    use crate::ring::parse_ring;
    use crate::sums::classical_kloosterman;

    fn as_i64(v: &Cyc) -> i64 {
        i64::try_from(v.as_integer().expect("integer")).unwrap()
    }

    #[test]
    fn moment_examples() {
        let r = parse_ring("Z/9").unwrap();
        for tau in multiplicative_characters(&r) {
            assert_eq!(
                as_i64(&moment(&r, &tau, 2, Domain::Full, true).unwrap().value),
                54
            );
        }
        let triv = MultiplicativeCharacter::trivial(&r);
        assert!(moment(&r, &triv, 1, Domain::Full, false)
            .unwrap()
            .value
            .is_zero());
        assert_eq!(
            moment(&r, &triv, 3, Domain::Full, true).unwrap_err(),
            Error::OddAbsoluteMoment(3)
        );

        let f = parse_ring("GF(5)").unwrap();
        let triv = MultiplicativeCharacter::trivial(&f);
        assert_eq!(
            as_i64(&moment(&f, &triv, 3, Domain::Unitary, false).unwrap().value),
            -14
        );
    }

    #[test]
    fn weighted_examples() {
        let r = parse_ring("Z/25").unwrap();
        let sigma = quadratic_character(&r).unwrap();
        let triv = MultiplicativeCharacter::trivial(&r);
        for tau in [&triv, &sigma] {
            assert_eq!(
                as_i64(&weighted_moment(&r, tau, &sigma, 2, true).unwrap().value),
                500
            );
        }
        assert_eq!(
            weighted_moment(&r, &triv, &triv, 1, false).unwrap().value,
            moment(&r, &triv, 1, Domain::Unitary, false).unwrap().value
        );
        let z12 = parse_ring("Z/12").unwrap();
        let t = MultiplicativeCharacter::trivial(&z12);
        assert!(matches!(
            weighted_moment(&z12, &t, &t, 1, false),
            Err(Error::NotLocal(_))
        ));
    }

    #[test]
    fn sk_on_z12() {
        let r = parse_ring("Z/12").unwrap();
        let s = selberg_kuznetsov_sides(&r, 0, 0).unwrap();
        assert_eq!(as_i64(&s.lhs), 4);
        assert!(s.holds());
        assert!(s.terms.iter().any(|t| t.quotient == "0"));

        let s = selberg_kuznetsov_sides(&r, 2, 2).unwrap();
        assert!(s.holds());
        let classical = &classical_kloosterman(1, 4, 12).unwrap().value
            + &classical_kloosterman(1, 1, 6)
                .unwrap()
                .value
                .scale(&BigInt::from(2));
        assert_eq!(s.lhs, classical);
        assert_eq!(s.lhs, classical_kloosterman(2, 2, 12).unwrap().value);
    }
}
