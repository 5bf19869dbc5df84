//! Exact rational linear algebra.
//!
//! Everything in this crate that resembles numerics happens here: dense
//! rational matrices with reduced row echelon forms, nullspaces and
//! column-space calculus, a sparse integer echelon form for the large
//! presentation matrices of the graded rings, signature computation of
//! symmetric bilinear forms by congruence, and a Smith-form test for
//! lattice unimodularity. No floating point anywhere.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type Int = BigInt;

/// Shorthand for a rational from an integer numerator.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Shorthand for the rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Renders a rational as "p" or "p/q" with positive denominator.
pub fn rat_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Mat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: Vec<Vec<Rat>>, nrows: usize) -> Self {
        let mut m = Mat::zero(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation of blocks with a common row count.
    pub fn hcat(blocks: &[&Mat]) -> Mat {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        out
    }

    /// In-place reduced row echelon form. Returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Determinant of a square matrix by fraction pivoting.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..n {
                        let v = &m[(i, j)] - &f * &m[(c, j)];
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    /// Basis of the right nullspace, returned as matrix columns.
    pub fn nullspace(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::new();
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, f)].clone();
            }
            cols.push(v);
        }
        Mat::from_cols(cols, self.cols)
    }

    /// Reduced basis of the column space, returned as matrix columns.
    pub fn col_space(&self) -> Mat {
        let mut t = self.transpose();
        let pivots = t.rref();
        let cols: Vec<Vec<Rat>> = (0..pivots.len()).map(|i| (0..self.rows).map(|j| t[(i, j)].clone()).collect()).collect();
        Mat::from_cols(cols, self.rows)
    }

    /// Whether every column of `other` lies in the column space of `self`.
    pub fn contains_cols(&self, other: &Mat) -> bool {
        assert_eq!(self.rows, other.rows);
        let r = self.rank();
        Mat::hcat(&[self, other]).rank() == r
    }

    pub fn same_col_space(&self, other: &Mat) -> bool {
        self.rank() == other.rank() && self.contains_cols(other)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Inertia of a symmetric rational form: positive, negative and zero
/// pivot counts under congruence diagonalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }
}

/// Diagonalizes a symmetric matrix by simultaneous row/column operations
/// and counts pivot signs. When no nonzero diagonal entry is available,
/// a row/column addition turns an off-diagonal entry into one.
pub fn symmetric_inertia(q: &Mat) -> Inertia {
    assert!(q.is_symmetric(), "inertia of a non-symmetric matrix");
    let n = q.rows;
    let mut m = q.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pos = 0;
    let mut neg = 0;
    while !active.is_empty() {
        let pivot = active.iter().position(|&i| !m[(i, i)].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                // Look for a hyperbolic pair among the active indices.
                let mut found = None;
                'outer: for (ai, &i) in active.iter().enumerate() {
                    for &j in active.iter().skip(ai + 1) {
                        if !m[(i, j)].is_zero() {
                            found = Some((ai, j));
                            break 'outer;
                        }
                    }
                }
                let Some((ai, j)) = found else {
                    return Inertia { positive: pos, negative: neg, zero: active.len() };
                };
                let i = active[ai];
                for k in 0..n {
                    let v = &m[(i, k)] + &m[(j, k)];
                    m[(i, k)] = v;
                }
                for k in 0..n {
                    let v = &m[(k, i)] + &m[(k, j)];
                    m[(k, i)] = v;
                }
                ai
            }
        };
        let i = active.remove(pivot);
        let d = m[(i, i)].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for &k in &active {
            if m[(k, i)].is_zero() {
                continue;
            }
            let f = &m[(k, i)] / &d;
            for l in 0..n {
                let v = &m[(k, l)] - &f * &m[(i, l)];
                m[(k, l)] = v;
            }
            for l in 0..n {
                let v = &m[(l, k)] - &f * &m[(l, i)];
                m[(l, k)] = v;
            }
        }
    }
    Inertia { positive: pos, negative: neg, zero: 0 }
}

/// Sparse row over the integers: sorted (column, coefficient) pairs.
pub type SparseIntRow = Vec<(u32, Int)>;

fn row_normalize(row: &mut SparseIntRow) {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return;
    }
    let mut g = Int::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// r := a*r - b*p, merged on sorted columns.
fn row_combine(r: &SparseIntRow, a: &Int, p: &SparseIntRow, b: &Int) -> SparseIntRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        if j == p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if i == r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse integer echelon form. Rows are reduced against the
/// current pivots on insertion; full reduction happens in `into_rref`.
pub struct Echelon {
    ncols: usize,
    pivot_of_col: HashMap<u32, usize>,
    rows: Vec<SparseIntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivot_of_col: HashMap::new(), rows: Vec::new() }
    }

    /// Inserts a row; returns true when it increased the rank.
    pub fn insert(&mut self, mut row: SparseIntRow) -> bool {
        row_normalize(&mut row);
        loop {
            let Some(&(lead, ref a)) = row.first() else {
                return false;
            };
            match self.pivot_of_col.get(&lead) {
                Some(&idx) => {
                    let a = a.clone();
                    let b = self.rows[idx][0].1.clone();
                    row = row_combine(&row, &b, &self.rows[idx], &a);
                    row_normalize(&mut row);
                }
                None => {
                    self.pivot_of_col.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Back-substitutes to a reduced form and returns, per pivot column,
    /// the rational expression of that column over the free columns.
    pub fn into_rref(self) -> RrefMap {
        let ncols = self.ncols;
        let mut pivots: Vec<(u32, usize)> =
            self.pivot_of_col.iter().map(|(&c, &i)| (c, i)).collect();
        pivots.sort_unstable();
        let pivot_cols: Vec<u32> = pivots.iter().map(|&(c, _)| c).collect();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; ncols];
            for &c in &pivot_cols {
                v[c as usize] = true;
            }
            v
        };
        // Rational rows with pivot entry 1, processed from the last pivot
        // upward so each elimination hits an already-clean row.
        let mut clean: HashMap<u32, Vec<(u32, Rat)>> = HashMap::new();
        for &(c, idx) in pivots.iter().rev() {
            let raw = &self.rows[idx];
            let lead = Rat::from_integer(raw[0].1.clone());
            let mut row: Vec<(u32, Rat)> = raw
                .iter()
                .skip(1)
                .map(|(col, v)| (*col, Rat::from_integer(v.clone()) / &lead))
                .collect();
            loop {
                let Some(pos) = row.iter().position(|(col, _)| is_pivot[*col as usize]) else {
                    break;
                };
                let (pcol, coef) = row[pos].clone();
                row.remove(pos);
                let sub = &clean[&pcol];
                let mut merged: HashMap<u32, Rat> = row.into_iter().collect();
                for (col, v) in sub {
                    let e = merged.entry(*col).or_insert_with(Rat::zero);
                    *e -= &coef * v;
                }
                row = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                row.sort_unstable_by_key(|&(col, _)| col);
            }
            clean.insert(c, row);
        }
        let free: Vec<u32> = (0..ncols as u32).filter(|c| !is_pivot[*c as usize]).collect();
        RrefMap { pivot_cols, free, rows: clean }
    }
}

/// Result of a full reduction: pivot columns expressed over free columns.
pub struct RrefMap {
    pub pivot_cols: Vec<u32>,
    pub free: Vec<u32>,
    rows: HashMap<u32, Vec<(u32, Rat)>>,
}

impl RrefMap {
    /// Expression of a pivot column as a combination of free columns:
    /// column c satisfies c + sum(coef * free) = 0 in the row space, so
    /// its normal form is the negated tail.
    pub fn pivot_expansion(&self, col: u32) -> Option<&[(u32, Rat)]> {
        self.rows.get(&col).map(|v| v.as_slice())
    }
}

/// Smith-form test: whether the rows of an integer matrix form part of a
/// basis of the ambient lattice (all invariant factors are units).
pub fn rows_extend_to_lattice_basis(rows: &[Vec<i64>]) -> bool {
    if rows.is_empty() {
        return true;
    }
    let mut m: Vec<Vec<Int>> =
        rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect();
    let nr = m.len();
    let nc = m[0].len();
    if nr > nc {
        return false;
    }
    let mut factors = 0usize;
    let mut top = 0usize;
    while top < nr {
        // Find the entry of minimal nonzero magnitude in the working block.
        let mut best: Option<(usize, usize)> = None;
        for i in top..nr {
            for j in top..nc {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        m.swap(top, bi);
        if bj != top {
            for row in m.iter_mut() {
                row.swap(top, bj);
            }
        }
        let mut dirty = false;
        for i in top + 1..nr {
            if !m[i][top].is_zero() {
                let q = m[i][top].div_floor(&m[top][top]);
                if !q.is_zero() {
                    for j in 0..nc {
                        let v = &m[i][j] - &q * &m[top][j];
                        m[i][j] = v;
                    }
                }
                if !m[i][top].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in top + 1..nc {
            if !m[top][j].is_zero() {
                let q = m[top][j].div_floor(&m[top][top]);
                if !q.is_zero() {
                    for i in top..nr {
                        let v = &m[i][j] - &q * &m[i][top];
                        m[i][j] = v;
                    }
                }
                if !m[top][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        if !m[top][top].abs().is_one() {
            return false;
        }
        factors += 1;
        top += 1;
    }
    factors == nr
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat_i(v)).collect()).collect())
    }

    #[test]
    fn rref_rank_det() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.rank(), 1);
        assert_eq!(a.det(), rat_i(0));
        let b = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(b.det(), rat_i(1));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn nullspace_annihilates() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.cols, 1);
        let prod = a.mul(&ns);
        assert!(prod.is_zero());
    }

    #[test]
    fn col_space_membership() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let v = m(&[&[2], &[3], &[5]]);
        assert!(a.contains_cols(&v));
        let w = m(&[&[0], &[0], &[1]]);
        assert!(!a.contains_cols(&w));
    }

    #[test]
    fn inertia_of_diag_and_hyperbolic() {
        let d = m(&[&[2, 0], &[0, -3]]);
        let i = symmetric_inertia(&d);
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        // Zero diagonal with off-diagonal coupling: signature 0.
        let h = m(&[&[0, 1], &[1, 0]]);
        let i = symmetric_inertia(&h);
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let z = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(symmetric_inertia(&z).zero, 2);
    }

    #[test]
    fn sparse_echelon_matches_dense_rank() {
        let rows: Vec<Vec<(u32, Int)>> = vec![
            vec![(0, Int::from(1)), (2, Int::from(2))],
            vec![(1, Int::from(1)), (2, Int::from(-1))],
            vec![(0, Int::from(1)), (1, Int::from(1)), (2, Int::from(1))],
            vec![(0, Int::from(2)), (2, Int::from(4))],
        ];
        let mut e = Echelon::new(3);
        for r in rows.clone() {
            e.insert(r);
        }
        let dense = Mat::from_fn(4, 3, |i, j| {
            rows[i]
                .iter()
                .find(|(c, _)| *c == j as u32)
                .map(|(_, v)| Rat::from_integer(v.clone()))
                .unwrap_or_else(Rat::zero)
        });
        assert_eq!(e.rank(), dense.rank());
        let rref = e.into_rref();
        assert_eq!(rref.pivot_cols.len() + rref.free.len(), 3);
    }

    #[test]
    fn rref_map_expresses_pivots() {
        // x0 + x1 = 0, so pivot x0 expands to -x1.
        let mut e = Echelon::new(2);
        e.insert(vec![(0, Int::from(1)), (1, Int::from(1))]);
        let r = e.into_rref();
        assert_eq!(r.pivot_cols, vec![0]);
        assert_eq!(r.free, vec![1]);
        assert_eq!(r.pivot_expansion(0).unwrap(), &[(1, rat_i(1))]);
    }

    #[test]
    fn smith_unimodular() {
        assert!(rows_extend_to_lattice_basis(&[vec![1, 0, 0], vec![0, 1, 0]]));
        assert!(rows_extend_to_lattice_basis(&[vec![1, 1, 0], vec![0, 1, 1]]));
        assert!(!rows_extend_to_lattice_basis(&[vec![2, 0], vec![0, 1]]));
        assert!(!rows_extend_to_lattice_basis(&[vec![1, 0], vec![0, 0]]));
        assert!(rows_extend_to_lattice_basis(&[]));
        assert!(rows_extend_to_lattice_basis(&[vec![-1, 1]]));
    }
}
