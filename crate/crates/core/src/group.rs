//! Brute-force structure of small finite abelian groups.
//!
//! Groups are given as a list of element labels (ring indices) together with
//! the group operation. The decomposition is into cyclic factors of prime-power
//! order, one prime at a time, by the greedy basis construction: take an element
//! of largest order modulo the span so far, then replace it by a coset member whose
//! order equals that quotient order.

use crate::error::{Error, Result};

/// A decomposition `G ≅ ⊕ Z/d_i` with generators `g_i` and a coordinate table.
#[derive(Debug, Clone)]
pub struct GroupDecomposition {
    /// Generator labels, grouped by prime, largest order first within a prime.
    pub generators: Vec<usize>,
    /// Orders `d_i` of the generators (prime powers).
    pub orders: Vec<u64>,
    /// Exponent of the group, `lcm(d_i)`.
    pub exponent: u64,
    /// `coords[label]` is the coordinate vector of the element, if it belongs to the group.
    coords: Vec<Option<Vec<u64>>>,
    size: usize,
}

impl GroupDecomposition {
    pub fn coordinates(&self, label: usize) -> Option<&[u64]> {
        self.coords.get(label).and_then(|c| c.as_deref())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Decomposes the abelian group on `elements` (labels below `universe`).
pub fn decompose<F>(
    elements: &[usize],
    identity: usize,
    universe: usize,
    op: F,
) -> Result<GroupDecomposition>
where
    F: Fn(usize, usize) -> usize,
{
    let n = elements.len();
    let mut member = vec![false; universe];
    for &e in elements {
        member[e] = true;
    }
    if !member[identity] {
        return Err(Error::Internal("identity not in group".into()));
    }

    let power = |x: usize, k: u64| -> usize {
        let mut acc = identity;
        for _ in 0..k {
            acc = op(acc, x);
        }
        acc
    };
    let order_of = |x: usize| -> u64 {
        let mut k = 1u64;
        let mut acc = x;
        while acc != identity {
            acc = op(acc, x);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = (0..universe)
        .map(|x| if member[x] { order_of(x) } else { 0 })
        .collect();

    let mut sorted = elements.to_vec();
    sorted.sort_unstable();

    let mut generators = Vec::new();
    let mut gen_orders = Vec::new();
    for p in prime_factors(n as u64) {
        let is_p_elem = |x: usize| {
            let mut o = orders[x];
            while o.is_multiple_of(p) {
                o /= p;
            }
            o == 1
        };
        let sylow: Vec<usize> = sorted.iter().copied().filter(|&x| is_p_elem(x)).collect();
        // span of generators chosen so far for this prime
        let mut span = vec![false; universe];
        span[identity] = true;
        let mut span_size = 1usize;
        while span_size < sylow.len() {
            // order of x modulo the span
            let quotient_order = |x: usize| -> u64 {
                let mut k = 1u64;
                let mut acc = x;
                while !span[acc] {
                    acc = op(acc, x);
                    k += 1;
                }
                k
            };
            let mut best = (0u64, usize::MAX);
            for &x in &sylow {
                let q = quotient_order(x);
                if q > best.0 {
                    best = (q, x);
                }
            }
            let (m, x) = best;
            let current: Vec<usize> = (0..universe).filter(|&h| span[h]).collect();
            let lift = current
                .iter()
                .map(|&h| op(x, h))
                .filter(|&y| orders[y] == m)
                .min()
                .ok_or_else(|| Error::Internal("no order-preserving lift in coset".into()))?;
            let mut multiple = identity;
            for _ in 1..m {
                multiple = op(multiple, lift);
                for &h in &current {
                    let z = op(h, multiple);
                    if !span[z] {
                        span[z] = true;
                        span_size += 1;
                    }
                }
            }
            generators.push(lift);
            gen_orders.push(m);
        }
    }

    let exponent = gen_orders
        .iter()
        .fold(1u64, |acc, &d| num_integer::lcm(acc, d));

    // coordinates by walking every tuple in mixed radix
    let mut coords: Vec<Option<Vec<u64>>> = vec![None; universe];
    let mut tuple = vec![0u64; generators.len()];
    let mut seen = 0usize;
    loop {
        let mut x = identity;
        for (g, &c) in generators.iter().zip(&tuple) {
            x = op(x, power(*g, c));
        }
        if coords[x].is_some() {
            return Err(Error::Internal("decomposition is not direct".into()));
        }
        coords[x] = Some(tuple.clone());
        seen += 1;
        let mut i = 0;
        loop {
            if i == tuple.len() {
                break;
            }
            tuple[i] += 1;
            if tuple[i] < gen_orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == tuple.len() {
            break;
        }
    }
    if seen != n {
        return Err(Error::Internal(format!(
            "decomposition covers {seen} of {n} elements"
        )));
    }

    Ok(GroupDecomposition {
        generators,
        orders: gen_orders,
        exponent,
        coords,
        size: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn additive_zn(n: usize) -> GroupDecomposition {
        let elems: Vec<usize> = (0..n).collect();
        decompose(&elems, 0, n, |a, b| (a + b) % n).unwrap()
    }

    #[test]
    fn cyclic_groups_split_into_prime_powers() {
        let d = additive_zn(12);
        let mut orders = d.orders.clone();
        orders.sort();
        assert_eq!(orders, vec![3, 4]);
        assert_eq!(d.exponent, 12);
        assert_eq!(d.size(), 12);
    }

    #[test]
    fn units_mod_8_are_klein() {
        let units = [1usize, 3, 5, 7];
        let d = decompose(&units, 1, 8, |a, b| a * b % 8).unwrap();
        assert_eq!(d.orders, vec![2, 2]);
        assert_eq!(d.exponent, 2);
    }

    #[test]
    fn units_mod_9_are_cyclic_of_order_6() {
        let units: Vec<usize> = (1..9).filter(|k| k % 3 != 0).collect();
        let d = decompose(&units, 1, 9, |a, b| a * b % 9).unwrap();
        assert_eq!(d.exponent, 6);
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn noncyclic_p_group() {
        // Z/4 x Z/2 encoded as a + 4b
        let elems: Vec<usize> = (0..8).collect();
        let op = |x: usize, y: usize| ((x % 4 + y % 4) % 4) + 4 * ((x / 4 + y / 4) % 2);
        let d = decompose(&elems, 0, 8, op).unwrap();
        assert_eq!(d.orders, vec![4, 2]);
        for e in 0..8 {
            let c = d.coordinates(e).unwrap();
            let mut x = 0;
            for (g, &k) in d.generators.iter().zip(c) {
                for _ in 0..k {
                    x = op(x, *g);
                }
            }
            assert_eq!(x, e);
        }
    }

    #[test]
    fn trivial_group() {
        let d = decompose(&[0], 0, 1, |_, _| 0).unwrap();
        assert_eq!(d.rank(), 0);
        assert_eq!(d.exponent, 1);
        assert_eq!(d.coordinates(0), Some(&[][..]));
    }
}
