//! Exact linear algebra over the rationals.
//!
//! Dense matrices carry the small fixed-size objects (8x8 holonomies, 28x28
//! operators on two-forms). Tensor-product actions are kept sparse, and the
//! invariant-subspace computation runs a fraction-free elimination over
//! integer rows so no intermediate rational ever needs a gcd on both sides.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{fmt as rfmt, int, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(rfmt).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMatrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &QMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &QMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s)
    }

    pub fn kron(&self, other: &QMatrix) -> Self {
        let (br, bc) = (other.rows, other.cols);
        Self::from_fn(self.rows * br, self.cols * bc, |r, c| {
            self.get(r / br, c / bc) * other.get(r % br, c % bc)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_orthogonal(&self) -> bool {
        self.is_square() && self.transpose().mul(self).is_identity()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Exactly one nonzero entry, equal to +-1, per row and column.
    pub fn is_signed_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let unit_count = |it: &mut dyn Iterator<Item = &Rational>| {
            let mut k = 0;
            for v in it {
                if v.is_zero() {
                    continue;
                }
                if v.abs() != Rational::one() {
                    return false;
                }
                k += 1;
            }
            k == 1
        };
        (0..self.rows).all(|r| unit_count(&mut self.row(r).iter()))
            && (0..self.cols).all(|c| unit_count(&mut (0..self.rows).map(|r| self.get(r, c))))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Row-by-row integer rescaling (clears denominators per row).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| clear_denominators(self.row(r))).collect()
    }

    pub fn rank(&self) -> usize {
        bareiss(self.integer_rows(), self.cols).0
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        // Clearing row denominators scales det by the product of the factors.
        let mut scale = Rational::one();
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let l = row_lcm(self.row(r));
            scale *= Rational::from_integer(l.clone());
            rows.push(
                self.row(r)
                    .iter()
                    .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                    .collect(),
            );
        }
        let (rank, det_int) = bareiss(rows, self.cols);
        if rank < self.rows {
            return Rational::zero();
        }
        Rational::from_integer(det_int) / scale
    }

    /// Reduced row echelon form over the rationals; returns the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, r * m.cols + k);
                }
            }
            let inv = m.get(r, c).recip();
            for k in 0..m.cols {
                let v = m.get(r, k) * &inv;
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for k in 0..m.cols {
                    let v = m.get(i, k) - &f * m.get(r, k);
                    m.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : self x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }
}

fn row_lcm(row: &[Rational]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scale a rational row to a primitive-free integer row (denominators cleared).
pub fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = Rational::from_integer(row_lcm(row));
    row.iter().map(|v| (v * &l).to_integer()).collect()
}

/// Fraction-free Bareiss elimination. Returns `(rank, last pivot)`; for a
/// full-rank square input the last pivot is the determinant.
fn bareiss(mut m: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt) {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = (&m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    (rank, sign * prev)
}

/// Row-sparse matrix; entries within a row are sorted by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn from_dense(m: &QMatrix) -> Self {
        let data = (0..m.rows())
            .map(|r| {
                m.row(r)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, trips: Vec<(usize, usize, Rational)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in trips {
            assert!(r < rows && c < cols, "triplet out of range");
            *acc[r].entry(c).or_insert_with(Rational::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Rational::one())]).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, a)| a * &v[*c]).sum())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn to_dense(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c, v.clone());
            }
        }
        m
    }

    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let (br, bc) = (other.rows, other.cols);
        let mut data = Vec::with_capacity(self.rows * br);
        for a_row in &self.data {
            for b_row in &other.data {
                let mut row = Vec::with_capacity(a_row.len() * b_row.len());
                for (ac, av) in a_row {
                    for (bcol, bv) in b_row {
                        row.push((ac * bc + bcol, av * bv));
                    }
                }
                data.push(row);
            }
        }
        SparseMatrix {
            rows: self.rows * br,
            cols: self.cols * bc,
            data,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(r, row)| row.len() == 1 && row[0].0 == r && row[0].1.is_one())
    }

    /// Row `r` of `self - I`, as an integer row with denominators cleared.
    fn minus_identity_row(&self, r: usize) -> Vec<(usize, BigInt)> {
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(self.data[r].len() + 1);
        let mut seen_diag = false;
        for (c, v) in &self.data[r] {
            if *c == r {
                seen_diag = true;
                let d = v - Rational::one();
                if !d.is_zero() {
                    entries.push((*c, d));
                }
            } else {
                entries.push((*c, v.clone()));
            }
        }
        if !seen_diag {
            entries.push((r, -Rational::one()));
            entries.sort_by_key(|e| e.0);
        }
        let l = entries
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let l = Rational::from_integer(l);
        entries
            .into_iter()
            .map(|(c, v)| (c, (v * &l).to_integer()))
            .collect()
    }
}

type IntRow = Vec<(usize, BigInt)>;

/// Incremental fraction-free row reduction over sparse integer rows.
///
/// Rows are kept in echelon form keyed by leading column. Each new row is
/// reduced against existing pivots by cross-multiplication and then divided
/// by its content, which keeps entries small for the near-diagonal systems
/// this crate produces.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn insert_rational(&mut self, row: &[Rational]) -> bool {
        let ints = clear_denominators(row);
        let sparse: IntRow = ints
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        self.insert(sparse)
    }

    /// Returns true when the row raised the rank.
    pub fn insert(&mut self, mut row: IntRow) -> bool {
        if self.pivots.len() == self.cols {
            return false;
        }
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => row = eliminate(&row, p, lead),
                None => {
                    make_primitive(&mut row);
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Nullspace basis: one vector per free column, with that column set to 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut piv = self.pivots.clone();
        // Back-substitution from the rightmost pivot leftwards.
        let leads: Vec<usize> = piv.keys().rev().copied().collect();
        for &c in &leads {
            let p = piv[&c].clone();
            let lower: Vec<usize> = piv.range(..c).map(|(k, _)| *k).collect();
            for k in lower {
                let q = &piv[&k];
                if q.iter().any(|(col, _)| *col == c) {
                    let reduced = eliminate(q, &p, c);
                    let mut reduced = reduced;
                    make_primitive(&mut reduced);
                    piv.insert(k, reduced);
                }
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (&lead, row) in &piv {
                if let Some((_, coeff)) = row.iter().find(|(col, _)| *col == free) {
                    let lead_coeff = &row[0].1;
                    v[lead] = -Rational::new(coeff.clone(), lead_coeff.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// `b*row - a*p` scaled to cancel column `col`, where `a = row[col]`, `b = p[col]`.
fn eliminate(row: &IntRow, p: &IntRow, col: usize) -> IntRow {
    let a = &row.iter().find(|(c, _)| *c == col).expect("column present").1;
    let b = &p.iter().find(|(c, _)| *c == col).expect("pivot column present").1;
    let g = a.gcd(b);
    let ra = a / &g;
    let rb = b / &g;
    let mut out = Vec::with_capacity(row.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < p.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = p.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &rb * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&ra * &p[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &rb * &row[i - 1].1 - &ra * &p[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

fn make_primitive(row: &mut IntRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// The common fixed subspace `{v : M v = v for every M}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSpace {
    pub ambient: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl FixedSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn fixed_subspace(mats: &[SparseMatrix], ambient: usize) -> FixedSpace {
    let mut reducer = RowReducer::new(ambient);
    for m in mats {
        assert_eq!((m.rows(), m.cols()), (ambient, ambient), "action of wrong size");
        if m.is_identity() {
            continue;
        }
        for r in 0..m.rows() {
            if reducer.rank() == ambient {
                break;
            }
            reducer.insert(m.minus_identity_row(r));
        }
    }
    FixedSpace {
        ambient,
        basis: reducer.kernel_basis(),
    }
}

/// Dense oracle for [`fixed_subspace`]: nullspace of the stacked `M - I`.
pub fn fixed_subspace_dense(mats: &[QMatrix], ambient: usize) -> FixedSpace {
    let id = QMatrix::identity(ambient);
    let mut stacked = Vec::new();
    for m in mats {
        stacked.extend(m.sub(&id).to_rows());
    }
    let basis = if stacked.is_empty() {
        QMatrix::zeros(0, ambient).nullspace()
    } else {
        QMatrix::from_rows(stacked).nullspace()
    };
    FixedSpace { ambient, basis }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn det_of_integer_matrix() {
        let m = QMatrix::from_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(m.det(), int(0));
        let m = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det(), int(-1));
        let m = QMatrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(1, 5)]]);
        assert_eq!(m.det(), q(1, 10) - q(1, 12));
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = QMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rank_agrees_with_reducer() {
        let m = QMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1], &[3, 0, -3]]);
        assert_eq!(m.rank(), 2);
        let mut r = RowReducer::new(3);
        for i in 0..4 {
            r.insert_rational(m.row(i));
        }
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn fixed_subspace_of_swap() {
        let swap = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let fs = fixed_subspace(&[SparseMatrix::from_dense(&swap)], 2);
        assert_eq!(fs.dim(), 1);
        assert_eq!(fs.basis[0], vec![int(1), int(1)]);
    }

    #[test]
    fn sparse_kron_matches_dense() {
        let a = QMatrix::from_i64(&[&[1, 2], &[0, -1]]);
        let b = QMatrix::from_rows(vec![vec![q(1, 2), int(0), int(3)], vec![int(0), int(1), int(0)]]);
        let sk = SparseMatrix::from_dense(&a).kron(&SparseMatrix::from_dense(&b));
        assert_eq!(sk.to_dense(), a.kron(&b));
    }
}
