//! Finite commutative rings with dense element indices.
//!
//! Every ring materializes its addition and multiplication tables, so element
//! arithmetic is a table lookup. Structural data (units, principal ideals, group
//! decompositions, the canonical primitive character) is computed on first use and
//! cached; after that a ring is read-only and can be shared across threads.

mod construct;
mod poly;
mod spec;
mod structure;
mod table;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub(crate) use construct::{exponents_to_index, index_to_exponents};
pub use construct::{make_ring, parse_ring};
pub use poly::{format_poly, is_irreducible, is_prime, least_irreducible};
pub use spec::RingSpec;
pub use structure::{Ideal, LocalFactor, LocalStructure, PrincipalIdeals, Quotient};
pub use table::{load_table, ring_to_table_json};

use crate::group::GroupDecomposition;

/// Element index, `0..ring.size()`.
pub type Elem = usize;

/// Shared handle to a ring; characters and quotients keep one.
pub type Ring = Arc<FiniteRing>;

pub const DEFAULT_SIZE_CAP: usize = 4096;

/// How a ring was built. Drives the canonical primitive character.
#[derive(Debug, Clone)]
pub(crate) enum Shape {
    Zn(u64),
    /// `F_p[x]/(f)` with `deg f = deg`; element index = coefficients in base `p`, constant first.
    Poly {
        p: u64,
        deg: usize,
    },
    /// Factors in order; the first factor is the most significant index digit.
    Product(Vec<Ring>),
    /// `R ⋉ R̂`: index `r·|R| + λ`, with `λ` the mixed-radix index of an exponent vector.
    Triv(Ring),
    SqZ,
    Table,
    /// Quotients, local factors and other rings derived from a parent.
    Derived,
}

pub struct FiniteRing {
    size: usize,
    one: Elem,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    descriptor: String,
    pub(crate) shape: Shape,
    zero_ring: bool,
    pub(crate) cache: Caches,
}

#[derive(Default)]
pub(crate) struct Caches {
    pub(crate) units: OnceLock<(Vec<Elem>, Vec<Option<Elem>>)>,
    pub(crate) principal: OnceLock<PrincipalIdeals>,
    pub(crate) local: OnceLock<LocalStructure>,
    pub(crate) additive: OnceLock<GroupDecomposition>,
    pub(crate) unit_group: OnceLock<GroupDecomposition>,
    pub(crate) primitive: OnceLock<Option<Vec<u64>>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("descriptor", &self.descriptor)
            .field("size", &self.size)
            .finish()
    }
}

impl FiniteRing {
    /// Assembles a ring from operation tables (row-major, `size × size`).
    /// No axioms are checked here; see [`FiniteRing::check_axioms`].
    pub(crate) fn from_tables(
        descriptor: String,
        shape: Shape,
        size: usize,
        one: Elem,
        add: Vec<u32>,
        mul: Vec<u32>,
    ) -> crate::Result<Self> {
        use crate::Error;
        if add.len() != size * size || mul.len() != size * size {
            return Err(Error::AxiomViolation(
                "operation tables have the wrong shape".into(),
            ));
        }
        if one >= size {
            return Err(Error::BadElement(one));
        }
        if let Some(&bad) = add.iter().chain(&mul).find(|&&v| v as usize >= size) {
            return Err(Error::AxiomViolation(format!(
                "table entry {bad} out of range"
            )));
        }
        let mut neg = vec![u32::MAX; size];
        for x in 0..size {
            if let Some(y) = (0..size).find(|&y| add[x * size + y] == 0) {
                neg[x] = y as u32;
            } else {
                return Err(Error::AxiomViolation(format!(
                    "element {x} has no additive inverse"
                )));
            }
        }
        Ok(FiniteRing {
            size,
            one,
            add,
            mul,
            neg,
            descriptor,
            shape,
            zero_ring: size == 1,
            cache: Caches::default(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// True only for the degenerate quotient `R/R`.
    pub fn is_zero_ring(&self) -> bool {
        self.zero_ring
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.add[x * self.size + y] as Elem
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.size + y] as Elem
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.neg[x] as Elem
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    /// `k·x` for an integer `k` (negative `k` allowed).
    pub fn times(&self, k: i64, x: Elem) -> Elem {
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.add(acc, x);
        }
        if k < 0 {
            self.neg(acc)
        } else {
            acc
        }
    }

    /// The image of the integer `k` in the ring.
    pub fn from_int(&self, k: i64) -> Elem {
        self.times(k, self.one)
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        let mut acc = self.one;
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Additive order of `1`.
    pub fn characteristic(&self) -> u64 {
        let mut k = 1u64;
        let mut acc = self.one;
        while acc != 0 {
            acc = self.add(acc, self.one);
            k += 1;
        }
        k
    }

    /// Decomposition of `(R, +)` into cyclic prime-power factors.
    pub fn additive_decomposition(&self) -> &GroupDecomposition {
        self.cache.additive.get_or_init(|| {
            let elems: Vec<Elem> = self.elements().collect();
            crate::group::decompose(&elems, 0, self.size, |a, b| self.add(a, b))
                .expect("additive group decomposes")
        })
    }

    /// Decomposition of `R^×` into cyclic prime-power factors.
    pub fn unit_decomposition(&self) -> &GroupDecomposition {
        self.cache.unit_group.get_or_init(|| {
            crate::group::decompose(self.units(), self.one, self.size, |a, b| self.mul(a, b))
                .expect("unit group decomposes")
        })
    }

    /// Exponent `N` of the additive group: every additive character takes values in `μ_N`.
    pub fn additive_exponent(&self) -> u64 {
        self.additive_decomposition().exponent
    }

    /// Exponent of `R^×`.
    pub fn unit_exponent(&self) -> u64 {
        self.unit_decomposition().exponent
    }

    /// Verifies the commutative ring axioms, exhaustively or on `samples` random triples.
    pub fn check_axioms(&self, samples: Option<usize>) -> crate::Result<()> {
        use crate::Error;
        use rand::{Rng, SeedableRng};
        let n = self.size;
        if !self.zero_ring && self.one == 0 {
            return Err(Error::AxiomViolation("one equals zero".into()));
        }
        for x in 0..n {
            if self.add(x, 0) != x {
                return Err(Error::AxiomViolation(format!("0 is not neutral for {x}")));
            }
            if self.mul(x, self.one) != x {
                return Err(Error::AxiomViolation(format!("1 is not neutral for {x}")));
            }
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    return Err(Error::AxiomViolation(format!(
                        "addition not commutative at ({x},{y})"
                    )));
                }
                if self.mul(x, y) != self.mul(y, x) {
                    return Err(Error::AxiomViolation(format!(
                        "multiplication not commutative at ({x},{y})"
                    )));
                }
            }
        }
        let triple = |x: Elem, y: Elem, z: Elem| -> crate::Result<()> {
            if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                return Err(Error::AxiomViolation(format!(
                    "addition not associative at ({x},{y},{z})"
                )));
            }
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                return Err(Error::AxiomViolation(format!(
                    "multiplication not associative at ({x},{y},{z})"
                )));
            }
            if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z)) {
                return Err(Error::AxiomViolation(format!(
                    "distributivity fails at ({x},{y},{z})"
                )));
            }
            Ok(())
        };
        match samples {
            None => {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            triple(x, y, z)?;
                        }
                    }
                }
            }
            Some(count) => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6b6c6f6f73);
                for _ in 0..count {
                    triple(
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Two handles refer to the same ring object.
pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b)
}
