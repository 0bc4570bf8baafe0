//! Exact arithmetic in `Z[ζ_N]`, the ring of integers of the `N`-th cyclotomic field.
//!
//! A [`Cyclotomic`] value stores a coefficient vector against the powers of
//! `ζ_N = exp(2πi/N)`. The stored vector is always reduced modulo the cyclotomic
//! polynomial `Φ_N`, so every value has a unique representation of degree `< φ(N)`
//! and equality of two values of the same order is coefficient equality.
//!
//! The coefficient type is generic. [`crate::Cyc`] fixes it to `BigInt`, which is
//! what the identity checks use; `i64` is fine for small experiments.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, FromPrimitive, NumAssignRef, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest order that arithmetic will lift operands to.
pub const MAX_ORDER: usize = 1 << 16;

/// Integer types usable as cyclotomic coefficients.
pub trait CycInt:
    Clone
    + Debug
    + Display
    + NumAssignRef
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> CycInt for T where
    T: Clone
        + Debug
        + Display
        + NumAssignRef
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

fn phi_cache() -> &'static RwLock<HashMap<usize, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, constant term first.
///
/// Computed by dividing `x^n - 1` exactly by `Φ_d` for every proper divisor `d | n`.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let divisor = cyclotomic_polynomial(d);
        poly = exact_div(&poly, &divisor);
    }
    let poly = Arc::new(poly);
    phi_cache().write().unwrap().insert(n, poly.clone());
    poly
}

/// Quotient of an exact division by a monic polynomial.
fn exact_div(dividend: &[i64], divisor: &[i64]) -> Vec<i64> {
    let m = divisor.len() - 1;
    debug_assert_eq!(divisor[m], 1);
    let mut rem = dividend.to_vec();
    let qlen = dividend.len() - m;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + m];
        quot[i] = c;
        if c != 0 {
            for (j, d) in divisor.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    quot
}

/// Euler's totient, read off as the degree of `Φ_n`.
pub fn totient(n: usize) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Reduces `coeffs` modulo `Φ_n` in place and resizes it to length `n`.
fn reduce<T: CycInt>(coeffs: &mut Vec<T>, n: usize) {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        if coeffs[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut coeffs[i], T::zero());
        for (j, &pj) in phi[..deg].iter().enumerate() {
            match pj {
                0 => {}
                1 => coeffs[i - deg + j] -= &c,
                -1 => coeffs[i - deg + j] += &c,
                _ => {
                    let t = c.clone() * T::from_i64(pj).expect("coefficient fits");
                    coeffs[i - deg + j] -= t;
                }
            }
        }
    }
    coeffs.resize(n, T::zero());
}

fn reduce_i128(coeffs: &mut [i128], n: usize) {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for i in (deg..coeffs.len()).rev() {
        let c = coeffs[i];
        if c == 0 {
            continue;
        }
        coeffs[i] = 0;
        for (j, &pj) in phi[..deg].iter().enumerate() {
            coeffs[i - deg + j] -= c * pj as i128;
        }
    }
}

/// An element of `Z[ζ_N]` in canonical form.
#[derive(Clone)]
pub struct Cyclotomic<T> {
    order: usize,
    coeffs: Vec<T>,
}

impl<T: CycInt> Cyclotomic<T> {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order 0");
        Cyclotomic {
            order,
            coeffs: vec![T::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_int(order, T::one())
    }

    pub fn from_int(order: usize, value: T) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    /// `ζ_order^k`, for any integer `k`.
    pub fn root(order: usize, k: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut coeffs = vec![T::zero(); order];
        coeffs[k.rem_euclid(order as i64) as usize] = T::one();
        reduce(&mut coeffs, order);
        Ok(Cyclotomic { order, coeffs })
    }

    /// Builds `Σ_k counts[k] ζ_order^k` from a multiset of root-of-unity exponents.
    pub fn from_exponent_counts(order: usize, counts: &[i64]) -> Self {
        assert!(order >= 1 && counts.len() == order);
        let mut wide: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        reduce_i128(&mut wide, order);
        let coeffs = wide
            .into_iter()
            .map(|c| T::from_i128(c).expect("coefficient fits the target type"))
            .collect();
        Cyclotomic { order, coeffs }
    }

    /// Builds a value from an arbitrary (unreduced) coefficient vector.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<T>) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if coeffs.len() > order {
            for i in order..coeffs.len() {
                let c = std::mem::replace(&mut coeffs[i], T::zero());
                coeffs[i % order] += c;
            }
            coeffs.truncate(order);
        }
        reduce(&mut coeffs, order);
        Ok(Cyclotomic { order, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Canonical coefficients, length `order`, zero from index `φ(order)` on.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rewrites the value at order `target`, which must be a multiple of the current order.
    pub fn lift(&self, target: usize) -> Result<Self> {
        if target == 0 {
            return Err(Error::ZeroOrder);
        }
        if !target.is_multiple_of(self.order) {
            return Err(Error::Internal(format!(
                "cannot lift order {} to {}",
                self.order, target
            )));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = target / self.order;
        let mut coeffs = vec![T::zero(); target];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * step] = c.clone();
            }
        }
        reduce(&mut coeffs, target);
        Ok(Cyclotomic {
            order: target,
            coeffs,
        })
    }

    fn aligned<'a>(
        &'a self,
        other: &'a Self,
        cap: usize,
    ) -> Result<(Cow<'a, Self>, Cow<'a, Self>)> {
        if self.order == other.order {
            return Ok((Cow::Borrowed(self), Cow::Borrowed(other)));
        }
        let l = self.order.lcm(&other.order);
        if l > cap {
            return Err(Error::OrderOverflow(l, cap));
        }
        let a = if l == self.order {
            Cow::Borrowed(self)
        } else {
            Cow::Owned(self.lift(l)?)
        };
        let b = if l == other.order {
            Cow::Borrowed(other)
        } else {
            Cow::Owned(other.lift(l)?)
        };
        Ok((a, b))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other, MAX_ORDER)?;
        let mut out = a.into_owned();
        for (x, y) in out.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other, MAX_ORDER)?;
        let mut out = a.into_owned();
        for (x, y) in out.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other, MAX_ORDER)?;
        let n = a.order;
        let deg = totient(n);
        let mut prod = vec![T::zero(); (2 * deg).max(1)];
        for (i, x) in a.coeffs[..deg].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs[..deg].iter().enumerate() {
                if !y.is_zero() {
                    let mut t = x.clone();
                    t *= y;
                    prod[i + j] += &t;
                }
            }
        }
        reduce(&mut prod, n);
        Ok(Cyclotomic {
            order: n,
            coeffs: prod,
        })
    }

    /// Multiplies by `ζ_order^k`.
    pub fn mul_root(&self, k: i64) -> Self {
        let n = self.order;
        let shift = k.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![T::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(i + shift) % n] = c.clone();
            }
        }
        reduce(&mut coeffs, n);
        Cyclotomic { order: n, coeffs }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let mut t = c.clone();
                    t *= factor;
                    t
                })
                .collect(),
        }
    }

    /// Complex conjugation, `ζ^k ↦ ζ^{-k}`.
    pub fn conj(&self) -> Self {
        let n = self.order;
        let mut coeffs = vec![T::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[(n - i) % n] = c.clone();
            }
        }
        reduce(&mut coeffs, n);
        Cyclotomic { order: n, coeffs }
    }

    /// `z · conj(z)`, i.e. `|z|²`.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.conj() == *self
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under the embedding `ζ_N ↦ exp(2πi/N)`.
    pub fn to_complex<F: Float + FromPrimitive>(&self) -> Complex<F> {
        let n = self.order as f64;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += c * theta.cos();
            im += c * theta.sin();
        }
        Complex::new(F::from_f64(re).unwrap(), F::from_f64(im).unwrap())
    }

    /// `{"order": N, "coeffs": [...]}`; coefficients outside the `i64` range are strings.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs[..totient(self.order)]
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => json!(v),
                None => json!(c.to_string()),
            })
            .collect();
        json!({ "order": self.order, "coeffs": coeffs })
    }
}

impl<T: CycInt> PartialEq for Cyclotomic<T> {
    fn eq(&self, other: &Self) -> bool {
        match self.aligned(other, usize::MAX) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl<T: CycInt> Eq for Cyclotomic<T> {}

impl<T: CycInt> Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic<{}>({})", self.order, self)
    }
}

impl<T: CycInt> Display for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "ζ{}^{}", self.order, k)?,
                (_, false) => write!(f, "{mag}·ζ{}^{}", self.order, k)?,
            }
        }
        Ok(())
    }
}

impl<T: CycInt> AddAssign<&Cyclotomic<T>> for Cyclotomic<T> {
    fn add_assign(&mut self, rhs: &Cyclotomic<T>) {
        if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = self.try_add(rhs).expect("cyclotomic order lift overflow");
        }
    }
}

impl<T: CycInt> SubAssign<&Cyclotomic<T>> for Cyclotomic<T> {
    fn sub_assign(&mut self, rhs: &Cyclotomic<T>) {
        *self = self.try_sub(rhs).expect("cyclotomic order lift overflow");
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<T: CycInt> $trait<&Cyclotomic<T>> for &Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
                self.$try(rhs).expect("cyclotomic order lift overflow")
            }
        }
        impl<T: CycInt> $trait<Cyclotomic<T>> for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: CycInt> $trait<&Cyclotomic<T>> for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $method(self, rhs: &Cyclotomic<T>) -> Cyclotomic<T> {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<T: CycInt> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<T: CycInt> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type C = Cyclotomic<BigInt>;

    fn int(n: usize, v: i64) -> C {
        C::from_int(n, BigInt::from(v))
    }

    #[test]
    fn root_examples() {
        assert_eq!(C::root(1, 0).unwrap(), int(1, 1));
        assert_eq!(C::root(4, 2).unwrap(), int(4, -1));
        assert_eq!(C::root(0, 1), Err(Error::ZeroOrder));
        assert_eq!(C::root(6, 3).unwrap(), int(6, -1));
        assert_eq!(C::root(8, 1).unwrap().conj(), C::root(8, 7).unwrap());
    }

    #[test]
    fn nontrivial_fifth_roots_sum_to_minus_one() {
        let mut s = C::zero(5);
        let mut float = Complex::new(0.0f64, 0.0);
        for k in 1..5 {
            s += &C::root(5, k).unwrap();
            let t = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            float += Complex::new(t.cos(), t.sin());
        }
        assert!((float - Complex::new(-1.0, 0.0)).norm() < 1e-9);
        assert_eq!(s.as_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn cyclotomic_polynomials_multiply_to_x_n_minus_one() {
        for n in 1..=64usize {
            let mut prod = vec![1i64];
            for d in (1..=n).filter(|d| n % d == 0) {
                let p = cyclotomic_polynomial(d);
                let mut next = vec![0i64; prod.len() + p.len() - 1];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in p.iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expect = vec![0i64; n + 1];
            expect[0] = -1;
            expect[n] = 1;
            assert_eq!(prod, expect, "n = {n}");
        }
    }

    #[test]
    fn totients() {
        let brute = |n: usize| (1..=n).filter(|k| k.gcd(&n) == 1).count();
        for n in 1..=64 {
            assert_eq!(totient(n), brute(n));
        }
    }

    #[test]
    fn roots_match_complex_embedding() {
        for n in 1..=64usize {
            for k in -(n as i64)..(2 * n as i64) {
                let z = C::root(n, k).unwrap().to_complex::<f64>();
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                assert!(
                    (z - Complex::new(t.cos(), t.sin())).norm() < 1e-9,
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn lifting_preserves_value() {
        let z = C::root(6, 1).unwrap();
        let lifted = z.lift(12).unwrap();
        assert_eq!(lifted, C::root(12, 2).unwrap());
        assert_eq!(z, lifted);
        // ζ_4 + ζ_3 lives at order 12
        let s = &C::root(4, 1).unwrap() + &C::root(3, 1).unwrap();
        assert_eq!(s.order(), 12);
        assert_eq!(s, &C::root(12, 3).unwrap() + &C::root(12, 4).unwrap());
    }

    #[test]
    fn order_overflow_is_reported() {
        let a = C::root(65521, 1).unwrap();
        let b = C::root(2, 1).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::OrderOverflow(..))));
    }

    #[test]
    fn gauss_sum_mod_three_squares_to_minus_three() {
        let g = &C::root(3, 1).unwrap() - &C::root(3, 2).unwrap();
        assert_eq!(g.pow(2), int(3, -3));
        assert_eq!(g.norm_sqr(), int(3, 3));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(int(5, -1).to_string(), "-1");
        let z = &C::root(8, 1).unwrap() - &int(8, 2);
        assert_eq!(z.to_string(), "-2 + ζ8^1");
        assert_eq!(z.to_json(), json!({"order": 8, "coeffs": [-2, 1, 0, 0]}));
    }

    #[test]
    fn i64_coefficients_work() {
        let a = Cyclotomic::<i64>::root(7, 3).unwrap();
        assert_eq!(a.pow(7), Cyclotomic::<i64>::one(7));
    }

    fn arb_cyc(n: usize) -> impl Strategy<Value = C> {
        proptest::collection::vec(-50i64..50, n).prop_map(move |v| {
            C::from_coeffs(n, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    }

    fn arb_triple() -> impl Strategy<Value = (C, C, C)> {
        (1usize..40).prop_flat_map(|n| (arb_cyc(n), arb_cyc(n), arb_cyc(n)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn conj_is_involutive_and_norm_is_real((a, _, _) in arb_triple()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert!(a.norm_sqr().is_self_conjugate());
        }

        #[test]
        fn reduction_is_idempotent((a, _, _) in arb_triple()) {
            let again = C::from_coeffs(a.order(), a.coeffs().to_vec()).unwrap();
            prop_assert_eq!(again.coeffs(), a.coeffs());
        }

        #[test]
        fn arithmetic_matches_embedding((a, b, _) in arb_triple()) {
            let (za, zb) = (a.to_complex::<f64>(), b.to_complex::<f64>());
            let p = (&a * &b).to_complex::<f64>();
            let s = (&a - &b).to_complex::<f64>();
            prop_assert!((p - za * zb).norm() < 1e-6 * (1.0 + (za * zb).norm()));
            prop_assert!((s - (za - zb)).norm() < 1e-6 * (1.0 + za.norm() + zb.norm()));
        }
    }
}
