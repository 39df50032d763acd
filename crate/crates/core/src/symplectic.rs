//! Matrices over finite fields, `GSp_n` membership via the multiplier,
//! symplectic transvections, reduction of an alternating Gram matrix to the
//! standard form, and canonical projective representatives.
//!
//! The standard symplectic form is fixed once for the whole crate:
//! `J = [[0, I_m], [-I_m, 0]]` with `m = n/2`. Serialized reports carry this
//! convention so downstream consumers never have to guess.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FFElem, FieldError, FiniteField};

/// The serialized name of the fixed symplectic form convention.
pub const J_CONVENTION: &str = "J=[[0,I],[-I,0]]";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SympError {
    #[error("matrix dimension must be even and at least 2")]
    OddDimension,
    #[error("matrix is singular")]
    Singular,
    #[error("no scalar m satisfies A^t J A = m J")]
    NotGSp,
    #[error("transvection direction must be nonzero")]
    ZeroDirection,
    #[error("transvection parameter must be nonzero")]
    ZeroParameter,
    #[error("alternating form is degenerate")]
    Degenerate,
    #[error("matrix is not alternating (antisymmetric with zero diagonal)")]
    NotAlternating,
    #[error("zero matrix has no projective representative")]
    ZeroMatrix,
    #[error("matrices live over different fields or dimensions")]
    MixedAmbient,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A square matrix of even dimension over a finite field, row-major.
#[derive(Clone)]
pub struct Mat {
    field: FiniteField,
    n: usize,
    entries: Vec<FFElem>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.entries == other.entries
    }
}
impl Eq for Mat {}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries)
    }
}

impl std::hash::Hash for Mat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.n, self.n, self.field)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" | "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn new(field: &FiniteField, n: usize, entries: Vec<FFElem>) -> Result<Mat, SympError> {
        if n < 2 || n % 2 != 0 {
            return Err(SympError::OddDimension);
        }
        assert_eq!(entries.len(), n * n);
        for e in &entries {
            if e.field() != field {
                return Err(SympError::MixedAmbient);
            }
        }
        Ok(Mat {
            field: field.clone(),
            n,
            entries,
        })
    }

    pub fn from_rows(field: &FiniteField, rows: Vec<Vec<FFElem>>) -> Result<Mat, SympError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            entries.extend(r);
        }
        Mat::new(field, n, entries)
    }

    /// Matrix from signed integer entries, mapped into the field.
    pub fn from_i64(field: &FiniteField, rows: &[&[i64]]) -> Mat {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            for &c in r.iter() {
                entries.push(field.scalar_i64(c));
            }
        }
        Mat::new(field, n, entries).expect("from_i64 needs even dimension")
    }

    pub fn identity(field: &FiniteField, n: usize) -> Mat {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = field.one();
        }
        Mat::new(field, n, entries).expect("identity needs even dimension")
    }

    pub fn scalar_mat(field: &FiniteField, n: usize, c: &FFElem) -> Mat {
        let mut entries = vec![field.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = c.clone();
        }
        Mat::new(field, n, entries).expect("scalar matrix needs even dimension")
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &FFElem {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FFElem] {
        &self.entries
    }

    pub fn set(&mut self, i: usize, j: usize, v: FFElem) {
        self.entries[i * self.n + j] = v;
    }

    fn same_ambient(&self, other: &Mat) -> Result<(), SympError> {
        if self.field != other.field || self.n != other.n {
            return Err(SympError::MixedAmbient);
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.same_ambient(other).expect("mixed ambient");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Mat {
            field: self.field.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.same_ambient(other).expect("mixed ambient");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Mat {
            field: self.field.clone(),
            n: self.n,
            entries,
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.same_ambient(other).expect("mixed ambient");
        let n = self.n;
        let mut entries = vec![self.field.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * other.at(k, j);
                    entries[i * n + j] = &entries[i * n + j] + &t;
                }
            }
        }
        Mat {
            field: self.field.clone(),
            n,
            entries,
        }
    }

    pub fn scale(&self, c: &FFElem) -> Mat {
        Mat {
            field: self.field.clone(),
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            field: self.field.clone(),
            n: self.n,
            entries: self.entries.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.at(j, i).clone());
            }
        }
        Mat {
            field: self.field.clone(),
            n,
            entries,
        }
    }

    pub fn trace(&self) -> FFElem {
        let mut acc = self.field.zero();
        for i in 0..self.n {
            acc = &acc + self.at(i, i);
        }
        acc
    }

    pub fn mul_vec(&self, v: &[FFElem]) -> Vec<FFElem> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.n {
                    acc = &acc + &(self.at(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut acc = Mat::identity(&self.field, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Determinant by fraction-free Gaussian elimination with row swaps.
    pub fn det(&self) -> FFElem {
        let n = self.n;
        let mut m: Vec<Vec<FFElem>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut det = self.field.one();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero());
            let piv = match piv {
                Some(r) => r,
                None => return self.field.zero(),
            };
            if piv != col {
                m.swap(col, piv);
                det = det.neg();
            }
            det = &det * &m[col][col];
            let inv = m[col][col].inv();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut rt = crate::linalg::RankTracker::new(&self.field);
        for i in 0..self.n {
            rt.add((0..self.n).map(|j| self.at(i, j).clone()).collect());
        }
        rt.rank()
    }

    pub fn inverse(&self) -> Result<Mat, SympError> {
        let n = self.n;
        let mut m: Vec<Vec<FFElem>> = (0..n)
            .map(|i| {
                let mut row: Vec<FFElem> = (0..n).map(|j| self.at(i, j).clone()).collect();
                let mut aug = vec![self.field.zero(); n];
                aug[i] = self.field.one();
                row.extend(aug);
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero());
            let piv = piv.ok_or(SympError::Singular)?;
            m.swap(col, piv);
            let inv = m[col][col].inv();
            for j in 0..2 * n {
                m[col][j] = &m[col][j] * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in 0..2 * n {
                        let t = &f * &m[col][j];
                        m[r][j] = &m[r][j] - &t;
                    }
                }
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &m {
            entries.extend_from_slice(&row[n..]);
        }
        Ok(Mat {
            field: self.field.clone(),
            n,
            entries,
        })
    }

    /// Coefficients of `det(X I - A)`, ascending in `X`, length `n + 1`, monic.
    /// Exact division-free expansion by minors, memoised over column subsets.
    pub fn charpoly(&self) -> Vec<FFElem> {
        let n = self.n;
        let field = &self.field;
        // poly[d] = coefficient of X^d; entries of X I - A are linear polys.
        // memo over (row, column-subset) with rows processed top-down.
        let mut memo: Vec<Option<Vec<FFElem>>> = vec![None; 1 << n];
        // base case: empty subset at row n -> constant 1
        fn go(
            a: &Mat,
            row: usize,
            cols: usize,
            memo: &mut Vec<Option<Vec<FFElem>>>,
        ) -> Vec<FFElem> {
            let field = a.field.clone();
            let n = a.n;
            if row == n {
                return vec![field.one()];
            }
            if let Some(v) = &memo[cols] {
                return v.clone();
            }
            let mut acc: Vec<FFElem> = Vec::new();
            let mut sign_flip = false;
            for j in 0..n {
                if cols & (1 << j) == 0 {
                    continue;
                }
                let sub = go(a, row + 1, cols & !(1 << j), memo);
                // entry (row, j) of X I - A: X*delta - a_{row,j}
                let const_term = a.at(row, j).neg();
                let mut term = vec![field.zero(); sub.len() + 1];
                for (d, c) in sub.iter().enumerate() {
                    term[d] = &term[d] + &(c * &const_term);
                    if row == j {
                        term[d + 1] = &term[d + 1] + c;
                    }
                }
                if sign_flip {
                    for t in term.iter_mut() {
                        *t = t.neg();
                    }
                }
                if acc.is_empty() {
                    acc = term;
                } else {
                    for (d, t) in term.iter().enumerate() {
                        if d < acc.len() {
                            acc[d] = &acc[d] + t;
                        } else {
                            acc.push(t.clone());
                        }
                    }
                }
                sign_flip = !sign_flip;
            }
            memo[cols] = Some(acc.clone());
            acc
        }
        let mut out = go(self, 0, (1usize << n) - 1, &mut memo);
        out.resize(n + 1, field.zero());
        out
    }
}

/// The standard symplectic Gram matrix with blocks `[[0, I], [-I, 0]]`.
pub fn std_form(field: &FiniteField, n: usize) -> Mat {
    let m = n / 2;
    let mut j = Mat::new(field, n, vec![field.zero(); n * n]).expect("even n");
    for i in 0..m {
        j.set(i, m + i, field.one());
        j.set(m + i, i, field.one().neg());
    }
    j
}

/// Checked wrapper for the standard form: antisymmetric, `J^2 = -I`, `det J = 1`.
pub struct StdForm {
    pub n: usize,
    pub j: Mat,
}

impl StdForm {
    pub fn new(field: &FiniteField, n: usize) -> Result<StdForm, SympError> {
        if n < 2 || n % 2 != 0 {
            return Err(SympError::OddDimension);
        }
        let j = std_form(field, n);
        debug_assert_eq!(j.mul(&j), Mat::identity(field, n).neg());
        debug_assert!(j.det().is_one());
        Ok(StdForm { n, j })
    }
}

/// The symplectic pairing `<u, v> = u^t J v`.
pub fn pairing(u: &[FFElem], v: &[FFElem]) -> FFElem {
    let field = u[0].field().clone();
    let n = u.len();
    let m = n / 2;
    let mut acc = field.zero();
    for i in 0..m {
        // u_i v_{m+i} - u_{m+i} v_i
        acc = &acc + &(&u[i] * &v[m + i]);
        acc = &acc - &(&u[m + i] * &v[i]);
    }
    acc
}

/// Multiplier of `A`: the scalar `m` with `A^t J A = m J`.
pub fn multiplier(a: &Mat) -> Result<FFElem, SympError> {
    let n = a.n();
    let field = a.field().clone();
    if a.det().is_zero() {
        return Err(SympError::Singular);
    }
    let j = std_form(&field, n);
    let m_mat = a.transpose().mul(&j).mul(a);
    let m = m_mat.at(0, n / 2).clone();
    let expect = j.scale(&m);
    if m_mat != expect || m.is_zero() {
        return Err(SympError::NotGSp);
    }
    Ok(m)
}

/// A symplectic transvection `u -> u + lambda <u, v> v` with canonicalised
/// direction: the first nonzero coordinate of `v` is 1. The scaling relation
/// is `T_{cv}[lambda] = T_v[c^2 lambda]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transvection {
    pub v: Vec<FFElem>,
    pub lambda: FFElem,
}

impl Transvection {
    /// Canonicalise an arbitrary (direction, parameter) pair.
    pub fn new(v: Vec<FFElem>, lambda: FFElem) -> Result<Transvection, SympError> {
        let lead = v.iter().find(|x| !x.is_zero()).cloned();
        let lead = lead.ok_or(SympError::ZeroDirection)?;
        if lambda.is_zero() {
            return Err(SympError::ZeroParameter);
        }
        let inv = lead.inv();
        let v = v.iter().map(|x| x * &inv).collect();
        let lambda = &(&lead * &lead) * &lambda;
        Ok(Transvection { v, lambda })
    }
}

/// Matrix of `T_v[lambda]` in the standard basis: `I + lambda v (J v)^t`.
pub fn transvection_matrix(t: &Transvection) -> Mat {
    let field = t.v[0].field().clone();
    let n = t.v.len();
    let j = std_form(&field, n);
    let jv = j.mul_vec(&t.v);
    let mut out = Mat::identity(&field, n);
    for i in 0..n {
        for k in 0..n {
            let add = &(&t.lambda * &t.v[i]) * &jv[k];
            let cur = out.at(i, k).clone();
            out.set(i, k, &cur + &add);
        }
    }
    out
}

/// Recognise `A` as a symplectic transvection and return the canonical
/// `(v, lambda)`; `None` when `A` is not of that form.
pub fn detect_transvection(a: &Mat) -> Option<Transvection> {
    let n = a.n();
    let field = a.field().clone();
    let d = a.sub(&Mat::identity(&field, n));
    // First nonzero column is a multiple of the direction.
    let mut v_raw: Option<Vec<FFElem>> = None;
    'cols: for j in 0..n {
        for i in 0..n {
            if !d.at(i, j).is_zero() {
                v_raw = Some((0..n).map(|r| d.at(r, j).clone()).collect());
                break 'cols;
            }
        }
    }
    let v_raw = v_raw?; // identity -> no transvection
    let lead = v_raw.iter().find(|x| !x.is_zero()).unwrap().clone();
    let inv = lead.inv();
    let v: Vec<FFElem> = v_raw.iter().map(|x| x * &inv).collect();
    let j = std_form(&field, n);
    let jv = j.mul_vec(&v);
    // Solve lambda from the row where v has its leading 1.
    let i0 = v.iter().position(|x| x.is_one())?;
    let j1 = jv.iter().position(|x| !x.is_zero())?;
    let lambda = &d.at(i0, j1).clone() * &jv[j1].inv();
    if lambda.is_zero() {
        return None;
    }
    // Verify D = lambda v (Jv)^t exactly; this pins rank 1 and multiplier 1.
    for r in 0..n {
        for c in 0..n {
            let expect = &(&lambda * &v[r]) * &jv[c];
            if d.at(r, c) != &expect {
                return None;
            }
        }
    }
    Some(Transvection { v, lambda })
}

/// Given a nondegenerate alternating Gram matrix `I`, return `N` with
/// `N^t I N = J` (symplectic Gram-Schmidt). Columns of `N` list the
/// hyperbolic basis as `e_1, ..., e_m, f_1, ..., f_m`.
pub fn symplectic_basis(gram: &Mat) -> Result<Mat, SympError> {
    let n = gram.n();
    let field = gram.field().clone();
    for i in 0..n {
        if !gram.at(i, i).is_zero() {
            return Err(SympError::NotAlternating);
        }
        for j in 0..n {
            if gram.at(i, j) != &gram.at(j, i).neg() {
                return Err(SympError::NotAlternating);
            }
        }
    }
    let form = |u: &[FFElem], v: &[FFElem]| -> FFElem {
        let mut acc = field.zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                acc = &acc + &(&(&u[i] * gram.at(i, j)) * &v[j]);
            }
        }
        acc
    };
    let mut remaining: Vec<Vec<FFElem>> = (0..n)
        .map(|i| {
            let mut v = vec![field.zero(); n];
            v[i] = field.one();
            v
        })
        .collect();
    let mut es: Vec<Vec<FFElem>> = Vec::new();
    let mut fs: Vec<Vec<FFElem>> = Vec::new();
    while !remaining.is_empty() {
        // Drop vectors that became zero after projections.
        remaining.retain(|v| v.iter().any(|x| !x.is_zero()));
        if remaining.is_empty() {
            break;
        }
        let mut pair = None;
        'outer: for ei in 0..remaining.len() {
            for fi in 0..remaining.len() {
                if fi != ei && !form(&remaining[ei], &remaining[fi]).is_zero() {
                    pair = Some((ei, fi));
                    break 'outer;
                }
            }
        }
        let (ei, fi) = match pair {
            Some(pair) => pair,
            None => return Err(SympError::Degenerate),
        };
        let e = remaining[ei].clone();
        let pf = remaining[fi].clone();
        let scale = form(&e, &pf).inv();
        let f: Vec<FFElem> = pf.iter().map(|x| x * &scale).collect();
        // Project the remaining vectors into the symplectic complement of <e, f>.
        let mut next = Vec::new();
        for (idx, w) in remaining.iter().enumerate() {
            if idx == ei || idx == fi {
                continue;
            }
            let we = form(w, &e);
            let wf = form(w, &f);
            // w' = w - <w,f> e + <w,e> f
            let w2: Vec<FFElem> = (0..n)
                .map(|i| &(&w[i] - &(&wf * &e[i])) + &(&we * &f[i]))
                .collect();
            next.push(w2);
        }
        es.push(e);
        fs.push(f);
        remaining = next;
    }
    if es.len() != n / 2 {
        return Err(SympError::Degenerate);
    }
    let mut cols = es;
    cols.extend(fs);
    let mut out = Mat::identity(&field, n);
    for (c, col) in cols.iter().enumerate() {
        for r in 0..n {
            out.set(r, c, col[r].clone());
        }
    }
    // Postcondition: N^t I N = J exactly.
    let j = std_form(&field, n);
    if out.transpose().mul(gram).mul(&out) != j {
        return Err(SympError::Degenerate);
    }
    Ok(out)
}

/// The unique scalar multiple of `A` whose first nonzero entry (row-major) is 1.
pub fn proj_canonical(a: &Mat) -> Result<Mat, SympError> {
    let lead = a.entries().iter().find(|x| !x.is_zero());
    let lead = lead.ok_or(SympError::ZeroMatrix)?.clone();
    Ok(a.scale(&lead.inv()))
}

/// Wire format for matrices: `{"field": "p:k", "n": n, "rows": [["c0,c1", ...]]}`.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MatWire {
    pub field: String,
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

impl Mat {
    pub fn to_wire(&self) -> MatWire {
        MatWire {
            field: self.field.descriptor(),
            n: self.n,
            rows: (0..self.n)
                .map(|i| (0..self.n).map(|j| self.at(i, j).to_string()).collect())
                .collect(),
        }
    }

    pub fn from_wire(w: &MatWire) -> Result<Mat, SympError> {
        let field = FiniteField::parse(&w.field)?;
        Mat::from_wire_in(w, &field)
    }

    /// Parse against an already-constructed field (shared across matrices).
    pub fn from_wire_in(w: &MatWire, field: &FiniteField) -> Result<Mat, SympError> {
        let mut entries = Vec::with_capacity(w.n * w.n);
        for row in &w.rows {
            for s in row {
                entries.push(field.parse_elem(s)?);
            }
        }
        Mat::new(field, w.n, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f3() -> FiniteField {
        FiniteField::new(3, 1, None).unwrap()
    }

    fn f5() -> FiniteField {
        FiniteField::new(5, 1, None).unwrap()
    }

    #[test]
    fn multiplier_examples() {
        let f = f3();
        let id = Mat::identity(&f, 2);
        assert!(multiplier(&id).unwrap().is_one());
        let c = f.scalar(2);
        let cid = Mat::scalar_mat(&f, 2, &c);
        assert_eq!(multiplier(&cid).unwrap(), &c * &c);
        // diag(1, 2) over F_3: <e1, e2> scales by 2.
        let d = Mat::from_i64(&f, &[&[1, 0], &[0, 2]]);
        assert_eq!(multiplier(&d).unwrap(), f.scalar(2));
        // Singular matrix.
        let z = Mat::from_i64(&f, &[&[1, 0], &[0, 0]]);
        assert_eq!(multiplier(&z).unwrap_err(), SympError::Singular);
        // A 4x4 invertible non-GSp matrix.
        let f5 = f5();
        let m = Mat::from_i64(
            &f5,
            &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 1]],
        );
        assert_eq!(multiplier(&m).unwrap_err(), SympError::NotGSp);
    }

    #[test]
    fn transvection_matrix_example() {
        // v = e2, lambda = 1 over F_3 gives [[1,0],[1,1]].
        let f = f3();
        let t = Transvection::new(vec![f.zero(), f.one()], f.one()).unwrap();
        let m = transvection_matrix(&t);
        assert_eq!(m, Mat::from_i64(&f, &[&[1, 0], &[1, 1]]));
        assert!(multiplier(&m).unwrap().is_one());
        assert!(m.det().is_one());
    }

    #[test]
    fn transvection_parameter_additive() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v: Vec<FFElem> = (0..4).map(|_| f.scalar(rng.random_range(0..5))).collect();
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            let l1 = f.scalar(rng.random_range(1..5));
            let l2 = f.scalar(rng.random_range(1..5));
            if (&l1 + &l2).is_zero() {
                continue;
            }
            let t1 = Transvection::new(v.clone(), l1.clone()).unwrap();
            let t2 = Transvection::new(v.clone(), l2.clone()).unwrap();
            let t12 = Transvection::new(v.clone(), &l1 + &l2).unwrap();
            assert_eq!(
                transvection_matrix(&t1).mul(&transvection_matrix(&t2)),
                transvection_matrix(&t12)
            );
        }
    }

    #[test]
    fn transvection_rejects_degenerate_input() {
        let f = f3();
        assert_eq!(
            Transvection::new(vec![f.zero(), f.zero()], f.one()).unwrap_err(),
            SympError::ZeroDirection
        );
        assert_eq!(
            Transvection::new(vec![f.one(), f.zero()], f.zero()).unwrap_err(),
            SympError::ZeroParameter
        );
    }

    #[test]
    fn detect_transvection_examples() {
        let f = f3();
        assert!(detect_transvection(&Mat::identity(&f, 2)).is_none());
        let m = Mat::from_i64(&f, &[&[1, 0], &[1, 1]]);
        let t = detect_transvection(&m).unwrap();
        assert_eq!(t.v, vec![f.zero(), f.one()]);
        assert!(t.lambda.is_one());
        // diag(2, 3) in SL_2(F_5): A - id has rank 2.
        let f5 = f5();
        let d = Mat::from_i64(&f5, &[&[2, 0], &[0, 3]]);
        assert!(d.sub(&Mat::identity(&f5, 2)).rank() == 2);
        assert!(detect_transvection(&d).is_none());
    }

    #[test]
    fn detect_roundtrips_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for field in [f3(), f5(), FiniteField::new(3, 2, None).unwrap()] {
            let q = field.order() as u64;
            for n in [2usize, 4] {
                for _ in 0..40 {
                    let v: Vec<FFElem> =
                        (0..n).map(|_| field.from_index(rng.random_range(0..q))).collect();
                    if v.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let lambda = field.from_index(rng.random_range(1..q));
                    if lambda.is_zero() {
                        continue;
                    }
                    let t = Transvection::new(v, lambda).unwrap();
                    let m = transvection_matrix(&t);
                    let back = detect_transvection(&m).unwrap();
                    assert_eq!(back, t);
                }
            }
        }
    }

    #[test]
    fn symplectic_basis_examples() {
        let f5 = f5();
        let j = std_form(&f5, 2);
        let n = symplectic_basis(&j).unwrap();
        assert_eq!(n.transpose().mul(&j).mul(&n), j);

        let gram = Mat::from_i64(&f5, &[&[0, 2], &[-2, 0]]);
        let n = symplectic_basis(&gram).unwrap();
        assert_eq!(n, Mat::from_i64(&f5, &[&[1, 0], &[0, 3]]));

        let zero = Mat::from_i64(&f5, &[&[0, 0], &[0, 0]]);
        assert_eq!(symplectic_basis(&zero).unwrap_err(), SympError::Degenerate);

        let sym = Mat::from_i64(&f5, &[&[0, 1], &[1, 0]]);
        assert_eq!(symplectic_basis(&sym).unwrap_err(), SympError::NotAlternating);
    }

    #[test]
    fn symplectic_basis_exhaustive_n2() {
        // Every nondegenerate alternating 2x2 Gram matrix over F_3, F_5 reduces to J.
        for field in [f3(), f5()] {
            let q = field.order() as u64;
            for c in 1..q {
                let x = field.from_index(c);
                let gram = Mat::from_rows(
                    &field,
                    vec![
                        vec![field.zero(), x.clone()],
                        vec![x.neg(), field.zero()],
                    ],
                )
                .unwrap();
                let n = symplectic_basis(&gram).unwrap();
                assert_eq!(n.transpose().mul(&gram).mul(&n), std_form(&field, 2));
            }
        }
    }

    #[test]
    fn proj_canonical_examples() {
        let f = f3();
        let id = Mat::identity(&f, 2);
        assert_eq!(proj_canonical(&id).unwrap(), id);
        let two_id = Mat::scalar_mat(&f, 2, &f.scalar(2));
        assert_eq!(proj_canonical(&two_id).unwrap(), id);

        let f5 = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = Mat::from_rows(
                &f5,
                (0..2)
                    .map(|_| (0..2).map(|_| f5.scalar(rng.random_range(0..5))).collect())
                    .collect(),
            )
            .unwrap();
            if a.entries().iter().all(|x| x.is_zero()) {
                continue;
            }
            let c = f5.scalar(4);
            assert_eq!(
                proj_canonical(&a).unwrap(),
                proj_canonical(&a.scale(&c)).unwrap()
            );
        }
        let zero = Mat::from_i64(&f, &[&[0, 0], &[0, 0]]);
        assert_eq!(proj_canonical(&zero).unwrap_err(), SympError::ZeroMatrix);
    }

    #[test]
    fn charpoly_matches_det_and_trace() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [2usize, 4] {
            for _ in 0..20 {
                let a = Mat::from_rows(
                    &f,
                    (0..n)
                        .map(|_| (0..n).map(|_| f.scalar(rng.random_range(0..5))).collect())
                        .collect(),
                )
                .unwrap();
                let cp = a.charpoly();
                assert_eq!(cp.len(), n + 1);
                assert!(cp[n].is_one());
                // X^n coefficient chain: trace is -c_{n-1}, det is (-1)^n c_0.
                assert_eq!(cp[n - 1].neg(), a.trace());
                let sign_det = if n % 2 == 0 { cp[0].clone() } else { cp[0].neg() };
                assert_eq!(sign_det, a.det());
                // Cayley-Hamilton.
                let mut acc = Mat::new(&f, n, vec![f.zero(); n * n]).unwrap();
                for (d, c) in cp.iter().enumerate() {
                    acc = acc.add(&a.pow(d as u64).scale(c));
                }
                assert!(acc.entries().iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn conjugation_covariance_of_transvections() {
        // A T_v[l] A^{-1} = T_{Av}[l * m(A)^{-1}] for A in GSp_n; the computed
        // inverse-multiplier form, not the inline expressions in the source texts.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [f3(), f5()] {
            for n in [2usize, 4] {
                let mut count = 0;
                while count < 100 {
                    // Random GSp element: product of random transvections and a
                    // similitude diag(c,..,c,1,..,1).
                    let q = field.order() as u64;
                    let mut a = Mat::identity(&field, n);
                    for _ in 0..4 {
                        let v: Vec<FFElem> =
                            (0..n).map(|_| field.from_index(rng.random_range(0..q))).collect();
                        if v.iter().all(|x| x.is_zero()) {
                            continue;
                        }
                        let l = field.from_index(rng.random_range(1..q));
                        if l.is_zero() {
                            continue;
                        }
                        a = a.mul(&transvection_matrix(&Transvection::new(v, l).unwrap()));
                    }
                    let c = field.from_index(rng.random_range(1..q));
                    if !c.is_zero() {
                        let mut d = Mat::identity(&field, n);
                        for i in 0..n / 2 {
                            d.set(i, i, c.clone());
                        }
                        a = a.mul(&d);
                    }
                    let m = multiplier(&a).unwrap();
                    let v: Vec<FFElem> =
                        (0..n).map(|_| field.from_index(rng.random_range(0..q))).collect();
                    if v.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let l = field.from_index(rng.random_range(1..q));
                    if l.is_zero() {
                        continue;
                    }
                    let t = Transvection::new(v.clone(), l.clone()).unwrap();
                    let lhs = a.mul(&transvection_matrix(&t)).mul(&a.inverse().unwrap());
                    let av = a.mul_vec(&t.v);
                    let expect = transvection_matrix(
                        &Transvection::new(av, &t.lambda * &m.inv()).unwrap(),
                    );
                    assert_eq!(lhs, expect);
                    count += 1;
                }
            }
        }
    }

    #[test]
    fn multiplier_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let field = FiniteField::new(3, 2, None).unwrap();
        let q = field.order() as u64;
        let mut made = 0;
        while made < 60 {
            let mut mk = || {
                let mut a = Mat::identity(&field, 2);
                for _ in 0..3 {
                    let v: Vec<FFElem> =
                        (0..2).map(|_| field.from_index(rng.random_range(0..q))).collect();
                    if v.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let l = field.from_index(rng.random_range(1..q));
                    if l.is_zero() {
                        continue;
                    }
                    a = a.mul(&transvection_matrix(&Transvection::new(v, l).unwrap()));
                }
                let c = field.from_index(rng.random_range(1..q));
                a.mul(&Mat::from_rows(
                    &field,
                    vec![
                        vec![c, field.zero()],
                        vec![field.zero(), field.one()],
                    ],
                )
                .unwrap())
            };
            let a = mk();
            let b = mk();
            if a.det().is_zero() || b.det().is_zero() {
                continue;
            }
            assert_eq!(
                multiplier(&a.mul(&b)).unwrap(),
                &multiplier(&a).unwrap() * &multiplier(&b).unwrap()
            );
            made += 1;
        }
    }

    #[test]
    fn wire_roundtrip() {
        let f = FiniteField::new(3, 2, None).unwrap();
        let t = f.gen_t();
        let m = Mat::from_rows(
            &f,
            vec![vec![f.one(), t.clone()], vec![t.neg(), f.scalar(2)]],
        )
        .unwrap();
        let w = m.to_wire();
        let back = Mat::from_wire(&w).unwrap();
        assert_eq!(m, back);
        let json = serde_json::to_string(&w).unwrap();
        let w2: MatWire = serde_json::from_str(&json).unwrap();
        assert_eq!(Mat::from_wire(&w2).unwrap(), m);
    }
}
