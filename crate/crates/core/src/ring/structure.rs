//! Units, ideals, local structure, idempotent splitting and quotients.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{Elem, FiniteRing, Ring, Shape};
use crate::error::{Error, Result};

/// A set of ring elements closed under addition and under multiplication by the ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    elements: Vec<Elem>,
    mask: Vec<bool>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.elements).finish()
    }
}

impl Ideal {
    /// Validates `elements` as an ideal of `ring`.
    pub fn new(ring: &FiniteRing, elements: impl IntoIterator<Item = Elem>) -> Result<Ideal> {
        let mut mask = vec![false; ring.size()];
        for x in elements {
            if x >= ring.size() {
                return Err(Error::BadElement(x));
            }
            mask[x] = true;
        }
        let ideal = Ideal::from_mask(mask);
        ring.validate_ideal(&ideal)?;
        Ok(ideal)
    }

    pub(crate) fn from_mask(mask: Vec<bool>) -> Ideal {
        let elements = (0..mask.len()).filter(|&x| mask[x]).collect();
        Ideal { elements, mask }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    /// The zero ideal.
    pub fn is_zero(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.mask.len()
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub(crate) fn ring_size(&self) -> usize {
        self.mask.len()
    }
}

/// Distinct principal ideals, in order of their smallest generator.
#[derive(Debug, Clone)]
pub struct PrincipalIdeals {
    pub ideals: Vec<Ideal>,
    /// `index_of[a]` is the position of `(a)` in `ideals`.
    pub index_of: Vec<usize>,
    /// All generators of each ideal, ascending.
    pub generators: Vec<Vec<Elem>>,
    /// Positions of the inclusion-minimal nonzero ideals.
    pub minimal: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LocalStructure {
    pub is_local: bool,
    pub maximal_ideal: Option<Ideal>,
    pub residue_field_size: Option<usize>,
    /// Inclusion-minimal nonzero ideals; all of them are principal.
    pub min_ideals: Vec<Ideal>,
}

/// A local factor `eR` of a ring, with the maps between it and the ring.
#[derive(Debug, Clone)]
pub struct LocalFactor {
    pub ring: Ring,
    pub idempotent: Elem,
    /// Factor element index to ring element.
    pub embed: Vec<Elem>,
    /// Ring element `x` to the factor index of `e·x`.
    pub project: Vec<Elem>,
}

/// `R/I` with its quotient map.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub ring: Ring,
    pub parent: Ring,
    pub ideal: Ideal,
    /// Ring element to coset index.
    pub projection: Vec<Elem>,
    /// Smallest element of each coset.
    pub representatives: Vec<Elem>,
}

impl Quotient {
    pub fn project(&self, x: Elem) -> Elem {
        self.projection[x]
    }

    pub fn representative(&self, c: Elem) -> Elem {
        self.representatives[c]
    }
}

impl FiniteRing {
    fn unit_data(&self) -> &(Vec<Elem>, Vec<Option<Elem>>) {
        self.cache.units.get_or_init(|| {
            let mut inv = vec![None; self.size()];
            for u in self.elements() {
                if inv[u].is_some() {
                    continue;
                }
                if let Some(v) = self.elements().find(|&v| self.mul(u, v) == self.one()) {
                    inv[u] = Some(v);
                    inv[v] = Some(u);
                }
            }
            let units = self.elements().filter(|&u| inv[u].is_some()).collect();
            (units, inv)
        })
    }

    /// `R^×`, ascending.
    pub fn units(&self) -> &[Elem] {
        &self.unit_data().0
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.unit_data().1.get(x).is_some_and(|v| v.is_some())
    }

    pub fn inverse(&self, u: Elem) -> Result<Elem> {
        match self.unit_data().1.get(u) {
            None => Err(Error::BadElement(u)),
            Some(None) => Err(Error::NotUnit(u)),
            Some(Some(v)) => Ok(*v),
        }
    }

    /// Inverse of an element already known to be a unit.
    #[inline]
    pub(crate) fn inv(&self, u: Elem) -> Elem {
        self.unit_data().1[u].expect("unit")
    }

    pub(crate) fn validate_ideal(&self, ideal: &Ideal) -> Result<()> {
        if ideal.ring_size() != self.size() {
            return Err(Error::NotIdeal(
                "element set belongs to a ring of another size".into(),
            ));
        }
        if !ideal.contains(0) {
            return Err(Error::NotIdeal("does not contain zero".into()));
        }
        for &x in ideal.elements() {
            for &y in ideal.elements() {
                if !ideal.contains(self.add(x, y)) {
                    return Err(Error::NotIdeal(format!("{x} + {y} escapes")));
                }
            }
            for r in self.elements() {
                if !ideal.contains(self.mul(r, x)) {
                    return Err(Error::NotIdeal(format!("{r}·{x} escapes")));
                }
            }
        }
        Ok(())
    }

    pub fn zero_ideal(&self) -> Ideal {
        let mut mask = vec![false; self.size()];
        mask[0] = true;
        Ideal::from_mask(mask)
    }

    pub fn whole_ideal(&self) -> Ideal {
        Ideal::from_mask(vec![true; self.size()])
    }

    /// `(a) = {ra : r ∈ R}`.
    pub fn principal_ideal(&self, a: Elem) -> Ideal {
        let mut mask = vec![false; self.size()];
        for r in self.elements() {
            mask[self.mul(r, a)] = true;
        }
        Ideal::from_mask(mask)
    }

    /// `I^⊥ = {r : rI = 0}`.
    pub fn annihilator(&self, ideal: &Ideal) -> Ideal {
        let mask = self
            .elements()
            .map(|r| ideal.elements().iter().all(|&x| self.mul(r, x) == 0))
            .collect();
        Ideal::from_mask(mask)
    }

    /// `I + J`.
    pub fn ideal_sum(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let mut mask = vec![false; self.size()];
        for &x in i.elements() {
            for &y in j.elements() {
                mask[self.add(x, y)] = true;
            }
        }
        Ideal::from_mask(mask)
    }

    pub fn principal_ideals(&self) -> &PrincipalIdeals {
        self.cache.principal.get_or_init(|| {
            let mut ideals: Vec<Ideal> = Vec::new();
            let mut seen: HashMap<Vec<Elem>, usize> = HashMap::new();
            let mut index_of = vec![0; self.size()];
            let mut generators: Vec<Vec<Elem>> = Vec::new();
            for a in self.elements() {
                let ideal = self.principal_ideal(a);
                let k = *seen.entry(ideal.elements().to_vec()).or_insert_with(|| {
                    ideals.push(ideal);
                    generators.push(Vec::new());
                    ideals.len() - 1
                });
                index_of[a] = k;
                generators[k].push(a);
            }
            let minimal = (0..ideals.len())
                .filter(|&k| {
                    !ideals[k].is_zero()
                        && !ideals.iter().enumerate().any(|(j, other)| {
                            j != k
                                && !other.is_zero()
                                && other.len() < ideals[k].len()
                                && other.is_subset(&ideals[k])
                        })
                })
                .collect();
            PrincipalIdeals {
                ideals,
                index_of,
                generators,
                minimal,
            }
        })
    }

    pub fn minimal_ideals(&self) -> Vec<&Ideal> {
        let p = self.principal_ideals();
        p.minimal.iter().map(|&k| &p.ideals[k]).collect()
    }

    pub fn local_structure(&self) -> &LocalStructure {
        self.cache.local.get_or_init(|| {
            let nonunits: Vec<Elem> = self.elements().filter(|&x| !self.is_unit(x)).collect();
            let mut mask = vec![false; self.size()];
            for &x in &nonunits {
                mask[x] = true;
            }
            let closed = nonunits
                .iter()
                .all(|&x| nonunits.iter().all(|&y| mask[self.add(x, y)]));
            let is_local = closed && !self.is_zero_ring();
            let maximal_ideal = is_local.then(|| Ideal::from_mask(mask));
            let residue_field_size = maximal_ideal.as_ref().map(|m| self.size() / m.len());
            let min_ideals = self.minimal_ideals().into_iter().cloned().collect();
            LocalStructure {
                is_local,
                maximal_ideal,
                residue_field_size,
                min_ideals,
            }
        })
    }

    pub fn is_local(&self) -> bool {
        self.local_structure().is_local
    }

    pub fn maximal_ideal(&self) -> Option<&Ideal> {
        self.local_structure().maximal_ideal.as_ref()
    }

    pub fn is_field(&self) -> bool {
        self.maximal_ideal().is_some_and(|m| m.is_zero())
    }

    /// For a local ring: `2` is a unit, i.e. the residue field has odd characteristic.
    pub fn has_odd_characteristic(&self) -> bool {
        self.is_unit(self.from_int(2))
    }

    /// `{u² : u ∈ R^×}`, ascending.
    pub fn unit_squares(&self) -> Vec<Elem> {
        let mut mask = vec![false; self.size()];
        for &u in self.units() {
            mask[self.mul(u, u)] = true;
        }
        self.elements().filter(|&x| mask[x]).collect()
    }

    pub fn idempotents(&self) -> Vec<Elem> {
        self.elements().filter(|&e| self.mul(e, e) == e).collect()
    }

    /// Nonzero idempotents with no smaller nonzero idempotent below them.
    pub fn primitive_idempotents(&self) -> Vec<Elem> {
        let all = self.idempotents();
        all.iter()
            .copied()
            .filter(|&e| e != 0 && !all.iter().any(|&f| f != 0 && f != e && self.mul(f, e) == f))
            .collect()
    }

    /// Splits the ring as a product of local rings `e_k R`.
    pub fn local_decomposition(self: &Arc<Self>) -> Vec<LocalFactor> {
        let prims = self.primitive_idempotents();
        if prims.len() == 1 {
            let n = self.size();
            return vec![LocalFactor {
                ring: Arc::clone(self),
                idempotent: self.one(),
                embed: (0..n).collect(),
                project: (0..n).collect(),
            }];
        }
        prims.into_iter().map(|e| self.factor_ring(e)).collect()
    }

    fn factor_ring(&self, e: Elem) -> LocalFactor {
        let mut mask = vec![false; self.size()];
        for x in self.elements() {
            mask[self.mul(e, x)] = true;
        }
        let embed: Vec<Elem> = self.elements().filter(|&x| mask[x]).collect();
        let mut index = vec![usize::MAX; self.size()];
        for (i, &x) in embed.iter().enumerate() {
            index[x] = i;
        }
        let m = embed.len();
        let mut add = vec![0u32; m * m];
        let mut mul = vec![0u32; m * m];
        for (i, &x) in embed.iter().enumerate() {
            for (j, &y) in embed.iter().enumerate() {
                add[i * m + j] = index[self.add(x, y)] as u32;
                mul[i * m + j] = index[self.mul(x, y)] as u32;
            }
        }
        let project = self.elements().map(|x| index[self.mul(e, x)]).collect();
        let descriptor = format!("{}[e={}]", self.descriptor(), e);
        let ring = FiniteRing::from_tables(descriptor, Shape::Derived, m, index[e], add, mul)
            .expect("a corner ring inherits the ring axioms");
        LocalFactor {
            ring: Arc::new(ring),
            idempotent: e,
            embed,
            project,
        }
    }

    /// `R/I`. Quotienting by the whole ring yields the flagged zero ring.
    pub fn quotient_ring(self: &Arc<Self>, ideal: &Ideal) -> Result<Quotient> {
        self.validate_ideal(ideal)?;
        let n = self.size();
        let mut projection = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for x in self.elements() {
            if projection[x] != usize::MAX {
                continue;
            }
            let c = representatives.len();
            representatives.push(x);
            for &i in ideal.elements() {
                projection[self.add(x, i)] = c;
            }
        }
        let m = representatives.len();
        let mut add = vec![0u32; m * m];
        let mut mul = vec![0u32; m * m];
        for (i, &x) in representatives.iter().enumerate() {
            for (j, &y) in representatives.iter().enumerate() {
                add[i * m + j] = projection[self.add(x, y)] as u32;
                mul[i * m + j] = projection[self.mul(x, y)] as u32;
            }
        }
        let descriptor = format!("{} / {}", self.descriptor(), self.describe_ideal(ideal));
        let ring = FiniteRing::from_tables(
            descriptor,
            Shape::Derived,
            m,
            projection[self.one()],
            add,
            mul,
        )?;
        Ok(Quotient {
            ring: Arc::new(ring),
            parent: Arc::clone(self),
            ideal: ideal.clone(),
            projection,
            representatives,
        })
    }

    /// `(g)` for the smallest generator when the ideal is principal.
    pub fn describe_ideal(&self, ideal: &Ideal) -> String {
        let p = self.principal_ideals();
        match p.ideals.iter().position(|i| i == ideal) {
            Some(k) => format!("({})", p.generators[k][0]),
            None => format!("{:?}", ideal),
        }
    }
}
