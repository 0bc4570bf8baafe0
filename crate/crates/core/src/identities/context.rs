use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::characters::{
    additive_characters, multiplicative_characters, primitive_additive_character,
    quadratic_character, AdditiveCharacter, MultiplicativeCharacter,
};
use crate::ring::{Elem, Ideal, LocalFactor, Quotient, Ring};
use crate::sums::{gauss_value, twisted_raw};
use crate::Cyc;

use super::{PerturbTarget, SuiteOptions};

pub(crate) fn int(v: i64) -> Cyc {
    Cyc::from_int(1, BigInt::from(v))
}

pub(crate) fn root(order: u64, k: u64) -> Cyc {
    Cyc::root(order as usize, k as i64).expect("positive order")
}

/// `χ(u)` as a cyclotomic value.
pub(crate) fn chi_value(chi: &MultiplicativeCharacter, u: Elem) -> Cyc {
    root(chi.order(), chi.value_exp(u).expect("unit argument"))
}

/// Per-ring data shared by all checks of a run. Expensive tables are built on first use.
pub(crate) struct Ctx {
    pub ring: Ring,
    pub opts: SuiteOptions,
    pub psi: Option<AdditiveCharacter>,
    pub taus: Vec<MultiplicativeCharacter>,
    pub local: bool,
    pub field: bool,
    /// `2` is a unit; meaningful for local rings.
    pub odd: bool,
    pub sigma: Option<usize>,
    pub size: i64,
    pub units: i64,
    ktab: Vec<OnceLock<Vec<Cyc>>>,
    norms: Vec<OnceLock<Vec<Cyc>>>,
    gauss: OnceLock<Vec<Cyc>>,
    primitive: OnceLock<Option<Vec<bool>>>,
    add_chars: OnceLock<Vec<AdditiveCharacter>>,
    add_conductors: OnceLock<Vec<Ideal>>,
    factors: OnceLock<Vec<LocalFactor>>,
    quotients: Mutex<HashMap<Vec<Elem>, Arc<Quotient>>>,
}

impl Ctx {
    pub fn new(ring: &Ring, opts: SuiteOptions) -> Self {
        let zero = ring.is_zero_ring();
        let psi = if zero {
            None
        } else {
            primitive_additive_character(ring)
        };
        let taus = if zero {
            Vec::new()
        } else {
            multiplicative_characters(ring)
        };
        let local = ring.is_local();
        let odd = local && ring.has_odd_characteristic();
        let sigma = if odd {
            quadratic_character(ring).ok().map(|s| s.index())
        } else {
            None
        };
        let n = taus.len();
        Ctx {
            ring: Arc::clone(ring),
            opts,
            psi,
            local,
            field: ring.is_field(),
            odd,
            sigma,
            size: ring.size() as i64,
            units: ring.units().len() as i64,
            taus,
            ktab: (0..n).map(|_| OnceLock::new()).collect(),
            norms: (0..n).map(|_| OnceLock::new()).collect(),
            gauss: OnceLock::new(),
            primitive: OnceLock::new(),
            add_chars: OnceLock::new(),
            add_conductors: OnceLock::new(),
            factors: OnceLock::new(),
            quotients: Mutex::new(HashMap::new()),
        }
    }

    pub fn frobenius(&self) -> bool {
        self.psi.is_some()
    }

    pub fn psi(&self) -> &AdditiveCharacter {
        self.psi.as_ref().expect("checked Frobenius")
    }

    /// `K_τ(a)` for every `a`, with the canonical primitive character.
    pub fn k_table(&self, tau: usize) -> &[Cyc] {
        self.ktab[tau].get_or_init(|| {
            let psi = self.psi();
            let one = self.ring.one();
            let perturb = self.opts.perturb == Some(PerturbTarget::Twisted);
            self.ring
                .elements()
                .map(|a| {
                    twisted_raw(psi, &self.taus[tau], a, perturb && a == one).expect("same ring")
                })
                .collect()
        })
    }

    pub fn k(&self, tau: usize, a: Elem) -> &Cyc {
        &self.k_table(tau)[a]
    }

    /// `|K_τ(a)|²` for every `a`.
    pub fn norm_table(&self, tau: usize) -> &[Cyc] {
        self.norms[tau].get_or_init(|| self.k_table(tau).iter().map(|k| k.norm_sqr()).collect())
    }

    /// `G(χ)` with the canonical primitive character, indexed by `χ`.
    pub fn gauss(&self, chi: usize) -> &Cyc {
        &self.gauss.get_or_init(|| {
            let psi = self.psi();
            self.taus
                .iter()
                .map(|c| gauss_value(psi, c).expect("same ring"))
                .collect()
        })[chi]
    }

    /// Primitivity of each multiplicative character; `None` off local rings.
    pub fn primitive_flags(&self) -> Option<&[bool]> {
        self.primitive
            .get_or_init(|| {
                self.local.then(|| {
                    self.taus
                        .iter()
                        .map(|t| t.is_primitive().expect("local ring"))
                        .collect()
                })
            })
            .as_deref()
    }

    pub fn is_primitive(&self, chi: usize) -> bool {
        self.primitive_flags().expect("local ring")[chi]
    }

    pub fn product(&self, x: usize, y: usize) -> usize {
        self.taus[x]
            .product(&self.taus[y])
            .expect("same ring")
            .index()
    }

    pub fn conj(&self, x: usize) -> usize {
        self.taus[x].conj().index()
    }

    pub fn add_chars(&self) -> &[AdditiveCharacter] {
        self.add_chars
            .get_or_init(|| additive_characters(&self.ring))
    }

    pub fn add_conductor(&self, k: usize) -> &Ideal {
        &self
            .add_conductors
            .get_or_init(|| self.add_chars().iter().map(|c| c.conductor()).collect())[k]
    }

    pub fn factors(&self) -> &[LocalFactor] {
        self.factors.get_or_init(|| self.ring.local_decomposition())
    }

    pub fn quotient(&self, ideal: &Ideal) -> Arc<Quotient> {
        let mut cache = self.quotients.lock().expect("quotient cache");
        Arc::clone(cache.entry(ideal.elements().to_vec()).or_insert_with(|| {
            Arc::new(self.ring.quotient_ring(ideal).expect("ideal of this ring"))
        }))
    }

    pub fn maximal(&self) -> &Ideal {
        self.ring.maximal_ideal().expect("local ring")
    }

    /// Indices of twists, restricted by a binding.
    pub fn sweep(&self, pinned: Option<usize>) -> Vec<usize> {
        match pinned {
            Some(k) => vec![k],
            None => (0..self.taus.len()).collect(),
        }
    }

    pub fn elements(&self, pinned: Option<Elem>) -> Vec<Elem> {
        match pinned {
            Some(a) => vec![a],
            None => self.ring.elements().collect(),
        }
    }
}
