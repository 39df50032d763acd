//! Exact dense linear algebra over a [`FiniteField`], on plain row vectors.
//!
//! [`crate::symplectic::Mat`] carries the even-dimension symplectic types;
//! the solvers here work on free-form rectangular systems (Burnside spans,
//! intertwiner equations, eigenspaces).

use crate::ffield::{FFElem, FiniteField};

/// Incremental row-echelon rank tracker.
pub struct RankTracker {
    field: FiniteField,
    /// (pivot column, normalised row)
    pivots: Vec<(usize, Vec<FFElem>)>,
}

impl RankTracker {
    pub fn new(field: &FiniteField) -> RankTracker {
        RankTracker {
            field: field.clone(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the current echelon; insert if independent.
    /// Returns true when the row was independent.
    pub fn add(&mut self, mut row: Vec<FFElem>) -> bool {
        for (col, pivot_row) in &self.pivots {
            if !row[*col].is_zero() {
                let f = row[*col].clone();
                for (r, p) in row.iter_mut().zip(pivot_row) {
                    *r = &*r - &(&f * p);
                }
            }
        }
        match row.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(col) => {
                let inv = row[col].inv();
                for r in row.iter_mut() {
                    *r = &*r * &inv;
                }
                self.pivots.push((col, row));
                self.pivots.sort_by_key(|(c, _)| *c);
                let _ = &self.field;
                true
            }
        }
    }
}

/// Basis of the right kernel `{x : M x = 0}` of an `m x n` matrix given by rows.
pub fn kernel_basis(field: &FiniteField, rows: &[Vec<FFElem>], n: usize) -> Vec<Vec<FFElem>> {
    // Row-reduce a working copy.
    let mut m: Vec<Vec<FFElem>> = rows.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut r0 = 0usize;
    for col in 0..n {
        let piv = (r0..m.len()).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(r) => r,
            None => continue,
        };
        m.swap(r0, piv);
        let inv = m[r0][col].inv();
        for j in 0..n {
            m[r0][j] = &m[r0][j] * &inv;
        }
        for r in 0..m.len() {
            if r != r0 && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = &f * &m[r0][j];
                    m[r][j] = &m[r][j] - &t;
                }
            }
        }
        pivot_of_col[col] = Some(r0);
        r0 += 1;
        if r0 == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for col in 0..n {
            if let Some(r) = pivot_of_col[col] {
                v[col] = m[r][free].neg();
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FiniteField;

    #[test]
    fn kernel_of_rank_deficient_system() {
        let f = FiniteField::new(5, 1, None).unwrap();
        let e = |c: i64| f.scalar_i64(c);
        // Rows (1,2,3) and (2,4,6): rank 1, kernel dim 2.
        let rows = vec![
            vec![e(1), e(2), e(3)],
            vec![e(2), e(4), e(6)],
        ];
        let ker = kernel_basis(&f, &rows, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &rows {
                let mut acc = f.zero();
                for (a, b) in row.iter().zip(v) {
                    acc = &acc + &(a * b);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn rank_tracker_counts() {
        let f = FiniteField::new(3, 2, None).unwrap();
        let mut rt = RankTracker::new(&f);
        let t = f.gen_t();
        assert!(rt.add(vec![f.one(), t.clone()]));
        assert!(rt.add(vec![t.clone(), f.one()]));
        // t * first row
        assert!(!rt.add(vec![t.clone(), &t * &t]));
        assert_eq!(rt.rank(), 2);
    }
}
