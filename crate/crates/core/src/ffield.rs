//! Exact arithmetic in finite fields `F_{p^k}`.
//!
//! A field is a prime `p` together with a monic irreducible modulus of degree
//! `k` over `F_p`; elements are dense coefficient vectors reduced mod the
//! modulus. The module also provides the Frobenius action, the subfield
//! lattice, embeddings between compatible fields, degree-1 characters of
//! finite cyclic groups into `L^x`, and a constructive Hilbert-90 witness for
//! cyclic extensions.
//!
//! Two orderings are fixed once and used everywhere:
//! * elements are ordered by their index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`;
//! * modulus search enumerates monic polynomials by the ascending coefficient
//!   tuple `(c_0, ..., c_{k-1})` in lexicographic order and picks the first
//!   irreducible one, so fixtures are reproducible.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modpoly::{self, Poly};

/// Largest field order for which exhaustive tables (enumeration, discrete
/// logs, root searches) are permitted.
const TABLE_CAP: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not a monic irreducible polynomial of the stated degree")]
    NotIrreducible,
    #[error("{d} does not divide the extension degree {k}")]
    NotDivisor { d: usize, k: usize },
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("field of order {0} exceeds the exhaustive-table cap")]
    TooLarge(u128),
    #[error("no irreducible modulus found (degree {0})")]
    NoModulus(usize),
    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
    #[error("fields are not compatible for embedding")]
    NotSubfield,
    #[error("division by zero")]
    DivisionByZero,
}

struct FieldData {
    p: u64,
    k: usize,
    modulus: Poly,
    generator: OnceLock<Vec<u64>>,
    dlog: OnceLock<Vec<u32>>,
}

/// A finite field `F_{p^k}` with an explicit irreducible modulus.
///
/// Cheap to clone; all copies share the same backing data and lazy caches.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.descriptor())
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.0.p, self.0.k)
    }
}

impl FiniteField {
    /// Build `F_{p^k}`. When `modulus` is omitted the lexicographically least
    /// irreducible monic polynomial is chosen.
    pub fn new(p: u64, k: usize, modulus: Option<Poly>) -> Result<FiniteField, FieldError> {
        if !modpoly::is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::NotIrreducible);
        }
        let modulus = match modulus {
            Some(m) => {
                let m = modpoly::trim(m.iter().map(|&c| c % p).collect());
                if m.len() != k + 1 || m[k] != 1 || !modpoly::is_irreducible(&m, p) {
                    return Err(FieldError::NotIrreducible);
                }
                m
            }
            None => least_irreducible(p, k)?,
        };
        Ok(FiniteField(Arc::new(FieldData {
            p,
            k,
            modulus,
            generator: OnceLock::new(),
            dlog: OnceLock::new(),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }

    /// Field order `p^k` as `u128`.
    pub fn order(&self) -> u128 {
        let mut acc = 1u128;
        for _ in 0..self.0.k {
            acc *= self.0.p as u128;
        }
        acc
    }

    fn order_small(&self) -> Result<u64, FieldError> {
        let q = self.order();
        if q > TABLE_CAP as u128 {
            return Err(FieldError::TooLarge(q));
        }
        Ok(q as u64)
    }

    /// Descriptor string `"p:k"` or `"p:k:modulus=c0,...,ck"` for non-default moduli.
    pub fn descriptor(&self) -> String {
        let default = least_irreducible(self.0.p, self.0.k).ok();
        if default.as_ref() == Some(&self.0.modulus) {
            format!("{}:{}", self.0.p, self.0.k)
        } else {
            let coeffs: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
            format!("{}:{}:modulus={}", self.0.p, self.0.k, coeffs.join(","))
        }
    }

    /// Parse a field descriptor.
    pub fn parse(desc: &str) -> Result<FiniteField, FieldError> {
        let parse_err = || FieldError::Parse {
            what: "field descriptor",
            input: desc.to_string(),
        };
        let parts: Vec<&str> = desc.split(':').collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(parse_err());
        }
        let p: u64 = parts[0].parse().map_err(|_| parse_err())?;
        let k: usize = parts[1].parse().map_err(|_| parse_err())?;
        let modulus = if parts.len() == 3 {
            let rest = parts[2].strip_prefix("modulus=").ok_or_else(parse_err)?;
            let coeffs: Result<Vec<u64>, _> = rest.split(',').map(|c| c.trim().parse()).collect();
            Some(coeffs.map_err(|_| parse_err())?)
        } else {
            None
        };
        FiniteField::new(p, k, modulus)
    }

    pub fn zero(&self) -> FFElem {
        FFElem {
            field: self.clone(),
            coeffs: vec![0; self.0.k],
        }
    }

    pub fn one(&self) -> FFElem {
        self.scalar(1)
    }

    /// The constant `c mod p` as a field element.
    pub fn scalar(&self, c: u64) -> FFElem {
        let mut coeffs = vec![0; self.0.k];
        coeffs[0] = c % self.0.p;
        FFElem {
            field: self.clone(),
            coeffs,
        }
    }

    /// A signed constant, for convenience with small literals.
    pub fn scalar_i64(&self, c: i64) -> FFElem {
        let p = self.0.p as i64;
        self.scalar(c.rem_euclid(p) as u64)
    }

    /// The class of `x` modulo the modulus.
    pub fn gen_t(&self) -> FFElem {
        if self.0.k == 1 {
            return self.scalar(self.0.p - self.0.modulus[0] % self.0.p);
        }
        let mut coeffs = vec![0; self.0.k];
        coeffs[1] = 1;
        FFElem {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn elem(&self, coeffs: Vec<u64>) -> FFElem {
        assert!(coeffs.len() <= self.0.k, "coefficient vector too long");
        let mut c: Vec<u64> = coeffs.iter().map(|&a| a % self.0.p).collect();
        c.resize(self.0.k, 0);
        FFElem {
            field: self.clone(),
            coeffs: c,
        }
    }

    pub fn elem_i64(&self, coeffs: &[i64]) -> FFElem {
        let p = self.0.p as i64;
        self.elem(coeffs.iter().map(|&a| a.rem_euclid(p) as u64).collect())
    }

    /// Element with the given index in the canonical ordering.
    pub fn from_index(&self, mut idx: u64) -> FFElem {
        let mut coeffs = vec![0; self.0.k];
        for c in coeffs.iter_mut() {
            *c = idx % self.0.p;
            idx /= self.0.p;
        }
        debug_assert_eq!(idx, 0, "index out of range");
        FFElem {
            field: self.clone(),
            coeffs,
        }
    }

    /// Iterate over all field elements in index order. Errors for oversized fields.
    pub fn elements(&self) -> Result<impl Iterator<Item = FFElem> + '_, FieldError> {
        let q = self.order_small()?;
        Ok((0..q).map(move |i| self.from_index(i)))
    }

    /// Parse an element `"c0,c1,..."`.
    pub fn parse_elem(&self, s: &str) -> Result<FFElem, FieldError> {
        let coeffs: Result<Vec<u64>, _> = s.split(',').map(|c| c.trim().parse()).collect();
        let coeffs = coeffs.map_err(|_| FieldError::Parse {
            what: "field element",
            input: s.to_string(),
        })?;
        if coeffs.len() != self.0.k {
            return Err(FieldError::Parse {
                what: "field element (wrong length)",
                input: s.to_string(),
            });
        }
        Ok(self.elem(coeffs))
    }

    /// The `p^d` elements fixed by `x -> x^(p^d)`, sorted by index.
    pub fn subfield_elements(&self, d: usize) -> Result<Vec<FFElem>, FieldError> {
        if d == 0 || self.0.k % d != 0 {
            return Err(FieldError::NotDivisor { d, k: self.0.k });
        }
        let mut sub_order = 1u128;
        for _ in 0..d {
            sub_order *= self.0.p as u128;
        }
        if sub_order > TABLE_CAP as u128 {
            return Err(FieldError::TooLarge(sub_order));
        }
        if d == self.0.k {
            return Ok(self.elements()?.collect());
        }
        // 0 together with the unique subgroup of order p^d - 1 of L^x.
        let g = self.generator()?;
        let q1 = self.order() - 1;
        let step = (q1 / (sub_order - 1)) as u64;
        let mut out = vec![self.zero()];
        let mut acc = self.one();
        let gs = g.pow(step as u128);
        for _ in 0..(sub_order - 1) {
            out.push(acc.clone());
            acc = &acc * &gs;
        }
        out.sort();
        out.dedup();
        debug_assert_eq!(out.len() as u128, sub_order);
        Ok(out)
    }

    /// Least element (in index order) of multiplicative order `p^k - 1`.
    pub fn generator(&self) -> Result<FFElem, FieldError> {
        let q = self.order_small()?;
        if let Some(g) = self.0.generator.get() {
            return Ok(self.elem(g.clone()));
        }
        let q1 = q - 1;
        let factors = modpoly::prime_factors(q1);
        let mut found = None;
        for idx in 1..q {
            let x = self.from_index(idx);
            if factors
                .iter()
                .all(|&f| !x.pow((q1 / f) as u128).is_one())
            {
                found = Some(x);
                break;
            }
        }
        let g = found.expect("multiplicative group of a finite field is cyclic");
        let _ = self.0.generator.set(g.coeffs.clone());
        Ok(g)
    }

    /// Discrete log of a nonzero element with respect to [`Self::generator`].
    pub fn dlog(&self, x: &FFElem) -> Result<u64, FieldError> {
        assert_eq!(&x.field, self);
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let q = self.order_small()?;
        let table = match self.0.dlog.get() {
            Some(t) => t,
            None => {
                let g = self.generator()?;
                let mut t = vec![0u32; q as usize];
                let mut acc = self.one();
                for j in 0..(q - 1) {
                    t[acc.index() as usize] = j as u32;
                    acc = &acc * &g;
                }
                let _ = self.0.dlog.set(t);
                self.0.dlog.get().unwrap()
            }
        };
        Ok(table[x.index() as usize] as u64)
    }

    /// All homomorphisms `Z/m -> L^x`, each given by the image of the
    /// canonical generator of `Z/m`; sorted by element index.
    /// There are exactly `gcd(m, p^k - 1)` of them.
    pub fn cyclic_characters(&self, m: u64) -> Result<Vec<FFElem>, FieldError> {
        assert!(m >= 1);
        let q = self.order_small()?;
        let q1 = q - 1;
        let t = num_integer::gcd(m, q1);
        let g = self.generator()?;
        let step = g.pow((q1 / t) as u128);
        let mut out = Vec::with_capacity(t as usize);
        let mut acc = self.one();
        for _ in 0..t {
            out.push(acc.clone());
            acc = &acc * &step;
        }
        out.sort();
        Ok(out)
    }

    /// Norm map `L -> F_{p^d}`, the product of the `k/d` Frobenius conjugates.
    pub fn norm_to_subfield(&self, x: &FFElem, d: usize) -> Result<FFElem, FieldError> {
        if d == 0 || self.0.k % d != 0 {
            return Err(FieldError::NotDivisor { d, k: self.0.k });
        }
        let m = self.0.k / d;
        let mut acc = self.one();
        for i in 0..m {
            acc = &acc * &x.frobenius(i * d);
        }
        Ok(acc)
    }
}

fn least_irreducible(p: u64, k: usize) -> Result<Poly, FieldError> {
    if k == 1 {
        // x is the least monic of degree 1.
        return Ok(vec![0, 1]);
    }
    // Enumerate (c_0, ..., c_{k-1}) in lexicographic order, c_0 most significant.
    let total = (p as u128).pow(k as u32);
    if total > (1u128 << 34) {
        return Err(FieldError::TooLarge(total));
    }
    let mut f = vec![0u64; k + 1];
    f[k] = 1;
    // Tuples with c_0 = 0 are divisible by x; start past them.
    let mut u = total / p as u128;
    while u < total {
        // c_0 is the most significant digit of u, so the tuple (c_0, ..., c_{k-1})
        // runs in lexicographic order as u counts up.
        let mut v = u;
        for i in (0..k).rev() {
            f[i] = (v % p as u128) as u64;
            v /= p as u128;
        }
        if modpoly::is_irreducible(&f, p) {
            return Ok(f);
        }
        u += 1;
    }
    Err(FieldError::NoModulus(k))
}

/// An element of a [`FiniteField`], a reduced coefficient vector of length `k`.
#[derive(Clone)]
pub struct FFElem {
    field: FiniteField,
    coeffs: Vec<u64>,
}

impl PartialEq for FFElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for FFElem {}

impl PartialOrd for FFElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FFElem {
    /// Index order: compare coefficient vectors with `c_{k-1}` most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl std::hash::Hash for FFElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElem({})", self)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl FFElem {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime field.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Canonical index `c_0 + c_1 p + ...`; only valid for fields whose order fits `u64`.
    pub fn index(&self) -> u64 {
        let p = self.field.p();
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * p + c;
        }
        acc
    }

    fn assert_same(&self, other: &FFElem) {
        assert!(self.field == other.field, "mixed-field arithmetic");
    }

    pub fn add(&self, other: &FFElem) -> FFElem {
        self.assert_same(other);
        let p = self.field.p();
        FFElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| modpoly::addm(a, b, p))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FFElem) -> FFElem {
        self.assert_same(other);
        let p = self.field.p();
        FFElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| modpoly::subm(a, b, p))
                .collect(),
        }
    }

    pub fn neg(&self) -> FFElem {
        let p = self.field.p();
        FFElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&a| modpoly::subm(0, a, p)).collect(),
        }
    }

    pub fn mul(&self, other: &FFElem) -> FFElem {
        self.assert_same(other);
        let p = self.field.p();
        let prod = modpoly::mul(&self.coeffs, &other.coeffs, p);
        let mut red = modpoly::rem(&prod, self.field.modulus(), p);
        red.resize(self.field.k(), 0);
        FFElem {
            field: self.field.clone(),
            coeffs: red,
        }
    }

    /// Multiplicative inverse; panics on zero (checked variant: [`FFElem::try_inv`]).
    pub fn inv(&self) -> FFElem {
        self.try_inv().expect("inverse of zero")
    }

    pub fn try_inv(&self) -> Result<FFElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn pow(&self, mut exp: u128) -> FFElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents invert first.
    pub fn pow_i(&self, exp: i64) -> FFElem {
        if exp < 0 {
            self.inv().pow((-exp) as u128)
        } else {
            self.pow(exp as u128)
        }
    }

    /// The Frobenius `x -> x^(p^i)`; `frobenius(x, k) = x`.
    pub fn frobenius(&self, i: usize) -> FFElem {
        let i = i % self.field.k();
        let mut acc = self.clone();
        for _ in 0..i {
            acc = acc.pow(self.field.p() as u128);
        }
        acc
    }

    /// True when the element lies in the subfield `F_{p^d}` (for `d | k`).
    pub fn in_subfield(&self, d: usize) -> bool {
        self.field.k() % d == 0 && self.frobenius(d) == *self
    }

    /// Multiplicative order; errors on zero.
    pub fn mult_order(&self) -> Result<u128, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let q1 = self.field.order() - 1;
        // Factor q-1; desk scale keeps this within u64.
        let q1_small: u64 = u64::try_from(q1).map_err(|_| FieldError::TooLarge(q1))?;
        let mut ord = q1_small;
        for f in modpoly::prime_factors(q1_small) {
            while ord % f == 0 && self.pow((ord / f) as u128).is_one() {
                ord /= f;
            }
        }
        Ok(ord as u128)
    }

    /// Degree of the subfield generated by this element: the least `d | k`
    /// with `x^(p^d) = x`.
    pub fn subfield_degree(&self) -> usize {
        let k = self.field.k();
        for d in 1..=k {
            if k % d == 0 && self.frobenius(d) == *self {
                return d;
            }
        }
        k
    }
}

impl Add for &FFElem {
    type Output = FFElem;
    fn add(self, rhs: &FFElem) -> FFElem {
        FFElem::add(self, rhs)
    }
}

impl Sub for &FFElem {
    type Output = FFElem;
    fn sub(self, rhs: &FFElem) -> FFElem {
        FFElem::sub(self, rhs)
    }
}

impl Mul for &FFElem {
    type Output = FFElem;
    fn mul(self, rhs: &FFElem) -> FFElem {
        FFElem::mul(self, rhs)
    }
}

impl Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        FFElem::neg(self)
    }
}

/// A Galois automorphism `x -> x^(p^power)` of a finite field.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisAuto {
    #[serde(skip)]
    field: Option<FiniteField>,
    pub power: usize,
}

impl fmt::Debug for GaloisAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frob^{}", self.power)
    }
}

impl GaloisAuto {
    pub fn new(field: &FiniteField, power: usize) -> GaloisAuto {
        GaloisAuto {
            power: power % field.k(),
            field: Some(field.clone()),
        }
    }

    pub fn identity(field: &FiniteField) -> GaloisAuto {
        GaloisAuto::new(field, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.power == 0
    }

    pub fn apply(&self, x: &FFElem) -> FFElem {
        x.frobenius(self.power)
    }

    pub fn compose(&self, other: &GaloisAuto) -> GaloisAuto {
        let field = self.field.as_ref().or(other.field.as_ref()).cloned();
        let k = field.as_ref().map(|f| f.k()).unwrap_or(usize::MAX);
        GaloisAuto {
            power: (self.power + other.power) % k,
            field,
        }
    }

    pub fn inverse(&self) -> GaloisAuto {
        match &self.field {
            Some(f) => GaloisAuto::new(f, (f.k() - self.power % f.k()) % f.k()),
            None => self.clone(),
        }
    }
}

/// The Galois group `Gal(L / F_{p^d})` as a list of automorphisms, identity first.
pub fn galois_group(field: &FiniteField, d: usize) -> Result<Vec<GaloisAuto>, FieldError> {
    if d == 0 || field.k() % d != 0 {
        return Err(FieldError::NotDivisor { d, k: field.k() });
    }
    Ok((0..field.k() / d)
        .map(|j| GaloisAuto::new(field, j * d))
        .collect())
}

/// The embedding `F_{p^d} -> F_{p^k}` sending the small generator to the least
/// root of the small modulus in the big field. Fixed once per field pair.
pub struct Embedding {
    small: FiniteField,
    big: FiniteField,
    /// Powers root^0 .. root^{d-1}.
    powers: Vec<FFElem>,
    /// Row-reduced system for retraction, columns indexed by small-field coeffs.
    retract_rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Embedding {
    pub fn new(small: &FiniteField, big: &FiniteField) -> Result<Embedding, FieldError> {
        if small.p() != big.p() || big.k() % small.k() != 0 {
            return Err(FieldError::NotSubfield);
        }
        let root = if small.k() == 1 {
            big.scalar(small.p() - small.modulus()[0] % small.p())
        } else {
            let mut found = None;
            for x in big.elements()? {
                if eval_poly_in_big(small.modulus(), &x).is_zero() {
                    found = Some(x);
                    break;
                }
            }
            found.ok_or(FieldError::NotSubfield)?
        };
        let d = small.k();
        let mut powers = Vec::with_capacity(d);
        let mut acc = big.one();
        for _ in 0..d {
            powers.push(acc.clone());
            acc = &acc * &root;
        }
        // Gaussian elimination over F_p on the (big.k x d) matrix of power coords,
        // kept as (pivot row, row of the reduced matrix, transform row over F_p^d).
        let p = big.p();
        let kb = big.k();
        let mut rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
        // We solve coeffs from equations: sum_j c_j powers[j] = target.
        // Build column echelon instead: treat unknown vector c in F_p^d, matrix M (kb x d).
        let mut m: Vec<Vec<u64>> = (0..kb)
            .map(|r| (0..d).map(|j| powers[j].coeffs()[r]).collect())
            .collect();
        let mut transforms: Vec<Vec<u64>> = (0..kb)
            .map(|r| {
                let mut t = vec![0u64; kb];
                t[r] = 1;
                t
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r0 = 0usize;
        for col in 0..d {
            let piv = (r0..kb).find(|&r| m[r][col] != 0);
            let piv = match piv {
                Some(r) => r,
                None => continue,
            };
            m.swap(r0, piv);
            transforms.swap(r0, piv);
            let inv = modpoly::invm(m[r0][col], p);
            for j in 0..d {
                m[r0][j] = modpoly::mulm(m[r0][j], inv, p);
            }
            for j in 0..kb {
                transforms[r0][j] = modpoly::mulm(transforms[r0][j], inv, p);
            }
            for r in 0..kb {
                if r != r0 && m[r][col] != 0 {
                    let f = m[r][col];
                    for j in 0..d {
                        let t = modpoly::mulm(f, m[r0][j], p);
                        m[r][j] = modpoly::subm(m[r][j], t, p);
                    }
                    for j in 0..kb {
                        let t = modpoly::mulm(f, transforms[r0][j], p);
                        transforms[r][j] = modpoly::subm(transforms[r][j], t, p);
                    }
                }
            }
            pivot_cols.push(col);
            r0 += 1;
            if r0 == kb {
                break;
            }
        }
        if pivot_cols.len() != d {
            return Err(FieldError::NotSubfield);
        }
        for (i, &col) in pivot_cols.iter().enumerate() {
            rows.push((col, m[i].clone(), transforms[i].clone()));
        }
        // Remaining rows of m must be zero rows for consistency checks during retraction.
        for i in d..kb {
            rows.push((usize::MAX, m.get(i).cloned().unwrap_or_default(), transforms[i].clone()));
        }
        Ok(Embedding {
            small: small.clone(),
            big: big.clone(),
            powers,
            retract_rows: rows,
        })
    }

    pub fn small(&self) -> &FiniteField {
        &self.small
    }

    pub fn big(&self) -> &FiniteField {
        &self.big
    }

    pub fn embed(&self, x: &FFElem) -> FFElem {
        assert_eq!(x.field(), &self.small);
        let mut acc = self.big.zero();
        for (j, pw) in self.powers.iter().enumerate() {
            let c = self.big.scalar(x.coeffs()[j]);
            acc = &acc + &(&c * pw);
        }
        acc
    }

    /// Inverse of the embedding on its image; `None` when `y` is not in the image.
    pub fn retract(&self, y: &FFElem) -> Option<FFElem> {
        assert_eq!(y.field(), &self.big);
        let p = self.big.p();
        let d = self.small.k();
        let target = y.coeffs();
        let mut c = vec![0u64; d];
        for (col, _mrow, trow) in &self.retract_rows {
            let mut v = 0u64;
            for (j, &t) in trow.iter().enumerate() {
                v = modpoly::addm(v, modpoly::mulm(t, target[j], p), p);
            }
            if *col == usize::MAX {
                if v != 0 {
                    return None;
                }
            } else {
                c[*col] = v;
            }
        }
        let candidate = self.small.elem(c);
        if self.embed(&candidate) == *y {
            Some(candidate)
        } else {
            None
        }
    }
}

fn eval_poly_in_big(f: &Poly, x: &FFElem) -> FFElem {
    let big = x.field();
    let mut acc = big.zero();
    for &c in f.iter().rev() {
        acc = &(&acc * x) + &big.scalar(c);
    }
    acc
}

/// Constructive Hilbert 90 for the cyclic group generated by `x -> x^(p^d)`:
/// given `c` of norm 1 down to `F_{p^d}`, return `a` with `c = a / phi(a)`.
pub fn hilbert90(c: &FFElem, d: usize) -> Result<FFElem, FieldError> {
    let field = c.field().clone();
    if d == 0 || field.k() % d != 0 {
        return Err(FieldError::NotDivisor { d, k: field.k() });
    }
    let m = field.k() / d;
    debug_assert!(field.norm_to_subfield(c, d)?.is_one(), "norm must be 1");
    // a := sum_{i=0}^{m-1} (prod_{j<i} phi^j(c)) phi^i(b) for successive b.
    let mut idx = 1u64;
    loop {
        let b = field.from_index(idx);
        let mut a = field.zero();
        let mut partial = field.one();
        for i in 0..m {
            a = &a + &(&partial * &b.frobenius(i * d));
            partial = &partial * &c.frobenius(i * d);
        }
        if !a.is_zero() {
            debug_assert_eq!(&a.frobenius(d) * c, a);
            return Ok(a);
        }
        idx += 1;
        if idx as u128 >= field.order() {
            return Err(FieldError::DivisionByZero);
        }
    }
}
