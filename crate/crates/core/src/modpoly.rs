//! Dense univariate polynomial arithmetic over prime fields `F_p`.
//!
//! Polynomials are coefficient vectors in ascending degree order with entries
//! reduced mod `p`. This module backs the field-extension moduli of
//! [`crate::ffield`], residue-degree computations in [`crate::cyclo`] and the
//! cyclotomic reductions in [`crate::compat`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Modular addition for `a, b < p < 2^63`.
#[inline]
pub fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

/// Modular subtraction.
#[inline]
pub fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Modular multiplication via `u128` widening.
#[inline]
pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular exponentiation.
pub fn powm(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of a unit mod prime `p`.
pub fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powm(a, p - 2, p)
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sorted prime factors (without multiplicity) of `n` by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` in `(Z/m)^x`; `a` must be coprime to `m`.
pub fn mult_order(a: u64, m: u64) -> u64 {
    assert!(m > 0 && num_integer::gcd(a % m, m) == 1);
    if m == 1 {
        return 1;
    }
    // Euler phi of m by factorisation.
    let mut phi = m;
    for q in prime_factors(m) {
        phi = phi / q * (q - 1);
    }
    let mut ord = phi;
    for q in prime_factors(phi) {
        while ord % q == 0 && powm(a % m, ord / q, m) == 1 {
            ord /= q;
        }
    }
    debug_assert_eq!(powm(a % m, ord, m), 1);
    ord
}

/// A polynomial over `F_p`, ascending coefficients, normalised (no trailing zeros).
pub type Poly = Vec<u64>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn is_zero(f: &Poly) -> bool {
    f.is_empty()
}

pub fn constant(c: u64, p: u64) -> Poly {
    trim(vec![c % p])
}

/// The monomial `x`.
pub fn x_poly(p: u64) -> Poly {
    debug_assert!(p > 1);
    vec![0, 1]
}

pub fn add(f: &Poly, g: &Poly, p: u64) -> Poly {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = addm(a, b, p);
    }
    trim(out)
}

pub fn sub(f: &Poly, g: &Poly, p: u64) -> Poly {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = subm(a, b, p);
    }
    trim(out)
}

pub fn mul(f: &Poly, g: &Poly, p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(a, b, p), p);
        }
    }
    trim(out)
}

pub fn scalar_mul(f: &Poly, c: u64, p: u64) -> Poly {
    trim(f.iter().map(|&a| mulm(a, c, p)).collect())
}

/// Quotient and remainder of `f` by nonzero `g`.
pub fn divmod(f: &Poly, g: &Poly, p: u64) -> (Poly, Poly) {
    assert!(!g.is_empty(), "division by zero polynomial");
    let dg = g.len() - 1;
    let lead_inv = invm(g[dg], p);
    let mut rem = f.clone();
    if rem.len() <= dg {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - dg];
    for i in (dg..rem.len()).rev() {
        let c = mulm(rem[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        quot[i - dg] = c;
        for j in 0..=dg {
            rem[i - dg + j] = subm(rem[i - dg + j], mulm(c, g[j], p), p);
        }
    }
    (trim(quot), trim(rem))
}

pub fn rem(f: &Poly, g: &Poly, p: u64) -> Poly {
    divmod(f, g, p).1
}

pub fn monic(f: &Poly, p: u64) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&l) if l == 1 => f.clone(),
        Some(&l) => scalar_mul(f, invm(l, p), p),
    }
}

pub fn gcd(f: &Poly, g: &Poly, p: u64) -> Poly {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(f: &Poly, p: u64) -> Poly {
    if f.len() < 2 {
        return Vec::new();
    }
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(i as u64 % p, c, p))
            .collect(),
    )
}

/// `base^exp mod m` in `F_p[x]`.
pub fn pow_mod(base: &Poly, mut exp: u64, m: &Poly, p: u64) -> Poly {
    let mut acc = constant(1, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// `x^(p^e) mod m` by `e`-fold Frobenius powering.
pub fn frobenius_power_x(e: u32, m: &Poly, p: u64) -> Poly {
    let mut h = rem(&x_poly(p), m, p);
    for _ in 0..e {
        h = pow_mod(&h, p, m, p);
    }
    h
}

pub fn eval(f: &Poly, x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in f.iter().rev() {
        acc = addm(mulm(acc, x, p), c, p);
    }
    acc
}

/// Irreducibility test for monic `f` over `F_p`: a reducible polynomial of
/// degree `k` has an irreducible factor of degree at most `k/2`, and any
/// degree-`d` factor divides `gcd(x^(p^d) - x, f)`. Checking `d = 1..k/2`
/// exits early on the small factor almost all reducible inputs have.
pub fn is_irreducible(f: &Poly, p: u64) -> bool {
    let k = match deg(f) {
        Some(0) | None => return false,
        Some(k) => k,
    };
    if k == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // divisible by x
    }
    let mut h = rem(&x_poly(p), f, p);
    for _d in 1..=k / 2 {
        h = pow_mod(&h, p, f, p);
        let g = gcd(&sub(&h, &x_poly(p), p), f, p);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

pub fn is_squarefree(f: &Poly, p: u64) -> bool {
    let d = gcd(f, &derivative(f, p), p);
    deg(&d) == Some(0)
}

/// For squarefree monic `f` whose irreducible factors all share one degree
/// (the Galois case), return that degree. Returns `None` when the factor
/// degrees are mixed.
pub fn uniform_factor_degree(f: &Poly, p: u64) -> Option<u64> {
    let k = deg(f)? as u64;
    if k == 0 {
        return None;
    }
    let mut h = rem(&x_poly(p), f, p);
    for d in 1..=k {
        h = pow_mod(&h, p, f, p);
        let g = gcd(&sub(&h, &x_poly(p), p), f, p);
        if deg(&g) == Some(0) {
            continue;
        }
        // First degree with factors: in the uniform case the gcd is all of f.
        return if deg(&g) == Some(k as usize) && k % d == 0 {
            Some(d)
        } else {
            None
        };
    }
    None
}

/// Full factorisation of a squarefree monic polynomial into monic irreducible
/// factors, sorted by (degree, ascending coefficient vector). Cantor-Zassenhaus
/// with a fixed-seed generator; `p` must be odd.
pub fn factor_squarefree(f: &Poly, p: u64) -> Vec<Poly> {
    assert!(p % 2 == 1, "equal-degree splitting requires odd p");
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    // Distinct-degree first.
    let mut remainder = monic(f, p);
    let mut h = rem(&x_poly(p), &remainder, p);
    let mut d = 0u64;
    while let Some(rd) = deg(&remainder) {
        if rd == 0 {
            break;
        }
        d += 1;
        if (rd as u64) < 2 * d {
            // What is left is irreducible.
            out.push(remainder.clone());
            break;
        }
        h = pow_mod(&h, p, &remainder, p);
        let g = gcd(&sub(&h, &x_poly(p), p), &remainder, p);
        if deg(&g) == Some(0) {
            continue;
        }
        split_equal_degree(&g, d, p, &mut rng, &mut out);
        remainder = divmod(&remainder, &g, p).0;
        h = rem(&h, &remainder, p);
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

fn split_equal_degree(f: &Poly, d: u64, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let df = deg(f).unwrap() as u64;
    if df == d {
        out.push(monic(f, p));
        return;
    }
    let exp = (powm_u128(p, d) - 1) / 2;
    loop {
        let mut a: Poly = (0..df).map(|_| rng.random_range(0..p)).collect();
        a = trim(a);
        if a.is_empty() {
            continue;
        }
        let b = pow_mod_u128(&a, exp, f, p);
        let g = gcd(&sub(&b, &constant(1, p), p), f, p);
        match deg(&g) {
            Some(0) | None => continue,
            Some(dg) if dg as u64 == df => continue,
            _ => {
                split_equal_degree(&g, d, p, rng, out);
                let (q, r) = divmod(f, &g, p);
                debug_assert!(r.is_empty());
                split_equal_degree(&q, d, p, rng, out);
                return;
            }
        }
    }
}

fn powm_u128(p: u64, d: u64) -> u128 {
    let mut acc = 1u128;
    for _ in 0..d {
        acc *= p as u128;
    }
    acc
}

fn pow_mod_u128(base: &Poly, mut exp: u128, m: &Poly, p: u64) -> Poly {
    let mut acc = constant(1, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn divmod_roundtrip() {
        let p = 7;
        let f = vec![1, 2, 3, 4, 5];
        let g = vec![3, 0, 1];
        let (q, r) = divmod(&f, &g, p);
        let back = add(&mul(&q, &g, p), &r, p);
        assert_eq!(back, trim(f));
    }

    #[test]
    fn irreducibility_examples() {
        // x^2 + 1 over F_3 has no root.
        assert!(is_irreducible(&vec![1, 0, 1], 3));
        // x^2 + 1 = (x-2)(x+2) over F_5.
        assert!(!is_irreducible(&vec![1, 0, 1], 5));
        // x^2 + x + 2: discriminant -7; splits mod 11 (-7 = 4 = 2^2), inert mod 13.
        assert!(!is_irreducible(&vec![2, 1, 1], 11));
        assert!(is_irreducible(&vec![2, 1, 1], 13));
    }

    #[test]
    fn factor_phi12_mod13() {
        // x^4 - x^2 + 1 splits into linears mod 13 with roots 2, 6, 7, 11.
        let f = vec![1, 0, 12, 0, 1];
        let factors = factor_squarefree(&f, 13);
        assert_eq!(factors.len(), 4);
        assert_eq!(factors[0], vec![2, 1]); // x + 2 = x - 11, least by ascending-coeff lex
        for fac in &factors {
            assert_eq!(fac.len(), 2);
            assert_eq!(eval(&f, subm(0, fac[0], 13), 13), 0);
        }
    }

    #[test]
    fn uniform_degree_matches_order() {
        // Residue degree of ell in Q(zeta_12): degree of factors of Phi_12 mod ell
        // equals the order of ell mod 12.
        let phi12 = vec![1u64, 0, subm(0, 1, 5), 0, 1];
        assert_eq!(uniform_factor_degree(&phi12, 5), Some(2));
        let phi12 = vec![1u64, 0, subm(0, 1, 13), 0, 1];
        assert_eq!(uniform_factor_degree(&phi12, 13), Some(1));
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(5, 12), 2);
        assert_eq!(mult_order(13, 12), 1);
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(3, 13), 3);
    }
}
