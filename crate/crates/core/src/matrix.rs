//! Dense matrices over an arbitrary [`Field`], with the Gaussian-elimination
//! kernel used by every scheme: rank, null space, linear solves, span tests,
//! Vandermonde construction, and MDS verification.
//!
//! Elimination uses first-nonzero pivoting so reduced forms, kernels, and
//! solutions are deterministic for a given input.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(Matrix { field, rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(field: F, cols: Vec<Vec<F::Elem>>) -> Result<Self> {
        Ok(Self::from_rows(field, cols)?.transpose())
    }

    /// rows × |points| matrix with entry (i, l) = points[l]^i. Every
    /// `rows`-column submatrix is invertible when the points are distinct.
    pub fn vandermonde(field: F, points: &[F::Elem], rows: usize) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::DuplicatePoint);
            }
        }
        let mut m = Self::zero(field, rows, points.len());
        for (l, p) in points.iter().enumerate() {
            let mut pw = m.field.one();
            for i in 0..rows {
                m.set(i, l, pw.clone());
                pw = m.field.mul(&pw, p);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<F::Elem> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// New matrix keeping the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.field.clone(), self.rows, cols.len(), |r, c| self.at(r, cols[c]).clone())
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack: {} vs {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Self::from_fn(self.field.clone(), self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        }))
    }

    /// Matrix-vector product self · x.
    pub fn mul_vec(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "mul_vec: {} cols vs vector of length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for c in 0..self.cols {
                    acc = self.field.add(&acc, &self.field.mul(self.at(r, c), &x[c]));
                }
                acc
            })
            .collect())
    }

    /// Reduced row echelon form restricted to the first `lead_cols` columns
    /// (pivots are never chosen beyond them). Returns the reduced matrix and
    /// the pivot column indices.
    fn rref_leading(&self, lead_cols: usize) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let f = m.field.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for col in 0..lead_cols {
            // First-nonzero pivoting keeps the output deterministic.
            let Some(hit) = (pr..m.rows).find(|&r| !f.is_zero(m.at(r, col))) else {
                continue;
            };
            m.swap_rows(pr, hit);
            let inv = f.inv(m.at(pr, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = f.mul(m.at(pr, c), &inv);
                m.set(pr, c, v);
            }
            for r in 0..m.rows {
                if r != pr && !f.is_zero(m.at(r, col)) {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = f.sub(m.at(r, c), &f.mul(&factor, m.at(pr, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            pr += 1;
            if pr == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        self.rref_leading(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : self · x = 0}, returned as the columns of a
    /// cols × (cols − rank) matrix, ordered by free-column index.
    pub fn null_space(&self) -> Self {
        let (r, pivots) = self.rref();
        let f = self.field.clone();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut ns = Self::zero(f.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            ns.set(fc, k, f.one());
            for (row, &pc) in pivots.iter().enumerate() {
                ns.set(pc, k, f.neg(r.at(row, fc)));
            }
        }
        ns
    }

    /// Basis of {y : yᵀ · self = 0} as columns.
    pub fn left_null_space(&self) -> Self {
        self.transpose().null_space()
    }

    /// Any x with self · x = b (free variables set to zero).
    pub fn solve(&self, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let mut sols = self.solve_many(std::slice::from_ref(&b.to_vec()))?;
        sols.pop().unwrap().ok_or(Error::NoSolution)
    }

    /// Solves self · x = b for every target column in one elimination pass;
    /// `None` marks inconsistent targets.
    pub fn solve_many(&self, targets: &[Vec<F::Elem>]) -> Result<Vec<Option<Vec<F::Elem>>>> {
        for b in targets {
            if b.len() != self.rows {
                return Err(Error::DimensionMismatch(format!(
                    "solve: matrix has {} rows, target has length {}",
                    self.rows,
                    b.len()
                )));
            }
        }
        let f = self.field.clone();
        let aug = Self::from_fn(f.clone(), self.rows, self.cols + targets.len(), |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                targets[c - self.cols][r].clone()
            }
        });
        let (red, pivots) = aug.rref_leading(self.cols);
        let rank = pivots.len();
        let mut out = Vec::with_capacity(targets.len());
        for k in 0..targets.len() {
            let tc = self.cols + k;
            let consistent = (rank..self.rows).all(|r| f.is_zero(red.at(r, tc)));
            if !consistent {
                out.push(None);
                continue;
            }
            let mut x = vec![f.zero(); self.cols];
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = red.at(row, tc).clone();
            }
            out.push(Some(x));
        }
        Ok(out)
    }

    /// True iff v is a linear combination of this matrix's columns.
    pub fn in_span(&self, v: &[F::Elem]) -> bool {
        matches!(self.solve_many(std::slice::from_ref(&v.to_vec())), Ok(s) if s[0].is_some())
    }

    /// Verifies the MDS property: every rows-column submatrix is invertible.
    /// Exhaustive while the column count stays within `exhaustive_col_bound`;
    /// above that, checks `samples` seeded random column subsets.
    pub fn verify_mds(&self, exhaustive_col_bound: usize, samples: usize, seed: u64) -> Result<()> {
        let r = self.rows;
        if self.cols < r {
            return Err(Error::DimensionMismatch(format!(
                "MDS check needs at least {} columns, have {}",
                r, self.cols
            )));
        }
        let check = |cols: &[usize]| -> Result<()> {
            if self.select_columns(cols).rank() != r {
                return Err(Error::MdsViolation { columns: cols.to_vec() });
            }
            Ok(())
        };
        if self.cols <= exhaustive_col_bound {
            let mut subset: Vec<usize> = (0..r).collect();
            loop {
                check(&subset)?;
                // next r-combination of [0, cols) in lexicographic order
                let mut i = r;
                loop {
                    if i == 0 {
                        return Ok(());
                    }
                    i -= 1;
                    if subset[i] != i + self.cols - r {
                        break;
                    }
                }
                subset[i] += 1;
                for j in i + 1..r {
                    subset[j] = subset[j - 1] + 1;
                }
            }
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let mut pool: Vec<usize> = (0..self.cols).collect();
            for i in 0..r {
                let j = rng.random_range(i..pool.len());
                pool.swap(i, j);
            }
            let mut cols: Vec<usize> = pool[..r].to_vec();
            cols.sort_unstable();
            check(&cols)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ratio, Gf, Rationals};

    fn gf(q: u64) -> Gf {
        Gf::new(q).unwrap()
    }

    #[test]
    fn vandermonde_all_column_triples_invertible() {
        let f = gf(7);
        let m = Matrix::vandermonde(f, &[1, 2, 3, 4, 5, 6], 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 6));
        m.verify_mds(20, 0, 0).unwrap();
        // spot-check one submatrix count: C(6,3) = 20 handled exhaustively above
    }

    #[test]
    fn vandermonde_edges() {
        let f = gf(5);
        let m = Matrix::vandermonde(f, &[1], 1).unwrap();
        assert_eq!(*m.at(0, 0), 1);
        assert!(matches!(
            Matrix::vandermonde(f, &[1, 1], 1),
            Err(Error::DuplicatePoint)
        ));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(Matrix::identity(gf(5), 3).rank(), 3);
        assert_eq!(Matrix::zero(gf(5), 2, 4).rank(), 0);
        // stacked [G_1, G_2]: Vandermonde on points 1..4 with 3 rows
        let m = Matrix::vandermonde(gf(101), &[1, 2, 3, 4], 3).unwrap();
        assert_eq!(m.rank(), 3);
        let pts: Vec<_> = (1..=4).map(|v| ratio(v, 1)).collect();
        let mq = Matrix::vandermonde(Rationals, &pts, 3).unwrap();
        assert_eq!(mq.rank(), 3);
    }

    #[test]
    fn null_space_cases() {
        let id = Matrix::identity(gf(5), 3);
        assert_eq!(id.null_space().cols(), 0);

        let m = Matrix::from_rows(gf(2), vec![vec![1, 1]]).unwrap();
        let ns = m.null_space();
        assert_eq!(ns.cols(), 1);
        assert_eq!(ns.col(0), vec![1, 1]);
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let f = gf(11);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.random_range(1..6);
            let cols = rng.random_range(1..6);
            let m = Matrix::from_fn(f, rows, cols, |_, _| f.sample(&mut rng));
            let ns = m.null_space();
            assert_eq!(m.rank() + ns.cols(), cols);
            // every kernel column is annihilated
            for k in 0..ns.cols() {
                let v = ns.col(k);
                assert!(m.mul_vec(&v).unwrap().iter().all(|x| *x == 0));
            }
            assert_eq!(ns.rank(), ns.cols());
        }
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::identity(gf(7), 3);
        assert_eq!(id.solve(&[2, 0, 5]).unwrap(), vec![2, 0, 5]);

        // inconsistent overdetermined system
        let m = Matrix::from_rows(gf(7), vec![vec![1], vec![1]]).unwrap();
        assert!(matches!(m.solve(&[1, 2]), Err(Error::NoSolution)));

        // solve-then-multiply round trip on random consistent systems
        let f = gf(13);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..50 {
            let rows = rng.random_range(1..6);
            let cols = rng.random_range(1..6);
            let m = Matrix::from_fn(f, rows, cols, |_, _| f.sample(&mut rng));
            let x: Vec<u64> = f.sample_vec(&mut rng, cols);
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap();
            assert_eq!(m.mul_vec(&sol).unwrap(), b);
        }
    }

    #[test]
    fn in_span_cases() {
        let id = Matrix::identity(gf(3), 3);
        assert!(id.in_span(&[2, 1, 0]));
        let basis = Matrix::from_cols(gf(3), vec![vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(!basis.in_span(&[1, 0, 0]));
        assert!(basis.in_span(&[0, 2, 1]));
    }

    #[test]
    fn rational_elimination_matches_gf() {
        // same system solved over Q and over GF(101) agrees after reduction
        let mq = Matrix::from_rows(
            Rationals,
            vec![
                vec![ratio(1, 1), ratio(1, 1), ratio(1, 1)],
                vec![ratio(1, 1), ratio(2, 1), ratio(3, 1)],
                vec![ratio(1, 1), ratio(4, 1), ratio(9, 1)],
            ],
        )
        .unwrap();
        let sol_q = mq.solve(&[ratio(1, 1), ratio(4, 1), ratio(16, 1)]).unwrap();
        let f = gf(101);
        let mg = Matrix::from_rows(f, vec![vec![1, 1, 1], vec![1, 2, 3], vec![1, 4, 9]]).unwrap();
        let sol_g = mg.solve(&[1, 4, 16]).unwrap();
        for (rq, rg) in sol_q.iter().zip(&sol_g) {
            assert_eq!(f.elem_rational(rq).unwrap(), *rg);
        }
    }

    #[test]
    fn mds_violation_detected() {
        let f = gf(5);
        // two equal columns cannot be MDS for rows = 2
        let m = Matrix::from_rows(f, vec![vec![1, 1, 2], vec![3, 3, 1]]).unwrap();
        assert!(matches!(
            m.verify_mds(20, 0, 0),
            Err(Error::MdsViolation { .. })
        ));
    }
}
