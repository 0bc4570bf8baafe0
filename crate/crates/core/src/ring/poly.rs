//! Dense polynomials over a prime field, constant term first.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let deg = m.len() - 1;
    debug_assert_eq!(m[deg] % p, 1);
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    if r.len() <= deg {
        r.resize(deg, 0);
        return r;
    }
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for j in 0..=deg {
            let t = c * m[j] % p;
            r[i - deg + j] = (r[i - deg + j] + p - t) % p;
        }
    }
    r.truncate(deg);
    r
}

/// Product of `a` and `b` reduced modulo the monic `m` over `F_p`.
#[cfg(test)]
pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, m, p)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p` digits of `t`
/// (constant term in the least significant digit).
fn monic_from_index(mut t: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut g = vec![0u64; deg + 1];
    g[deg] = 1;
    for c in g.iter_mut().take(deg) {
        *c = t % p;
        t /= p;
    }
    g
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for t in 0..p.pow(d as u32) {
            let g = monic_from_index(t, d, p);
            if rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `k` over `F_p`,
/// comparing the coefficient tuple `(c_{k-1}, …, c_0)`.
pub fn least_irreducible(p: u64, k: usize) -> Vec<u64> {
    // with the constant term as least significant digit, counting upward
    // walks the tuples (c_{k-1}, …, c_0) in lexicographic order
    (0..p.pow(k as u32))
        .map(|t| monic_from_index(t, k, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

pub fn format_poly(f: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i > 0 {
            String::new()
        } else {
            c.to_string()
        };
        terms.push(match i {
            0 => c.to_string(),
            1 => format!("{coeff}x"),
            _ => format!("{coeff}x^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(5, 1), vec![0, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(format_poly(&least_irreducible(2, 3)), "x^3 + x + 1");
    }

    #[test]
    fn reducible_detected() {
        assert!(!is_irreducible(&[0, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[2, 0, 1], 5));
    }

    #[test]
    fn multiplication_in_gf4() {
        let m = [1, 1, 1];
        // x * x = x + 1
        assert_eq!(mul_mod(&[0, 1], &[0, 1], &m, 2), vec![1, 1]);
    }
}
