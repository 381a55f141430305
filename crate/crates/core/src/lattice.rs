//! Exact integer linear algebra: Hermite and Smith normal forms, lattice
//! comparison, kernels and quotients, plus linear algebra over `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::bigint_to_json;

/// A dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for c in 0..n {
                    a.data.swap(k * n + c, swap * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    /// Inverse over the integers, when the determinant is `±1`.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let (h, u) = hnf(self);
        if h != IntMatrix::identity(self.rows) {
            return Err(Error::NotInvertible);
        }
        Ok(u)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| serde_json::Value::Array(self.row(r).iter().map(bigint_to_json).collect()))
                .collect(),
        )
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// A sparse row: `(column, nonzero entry)` sorted by column.
pub type SparseRow = Vec<(usize, BigInt)>;

pub fn to_sparse(v: &[BigInt]) -> SparseRow {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &SparseRow, cols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cols];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

/// `a·x + b·y` on sparse rows.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len().max(y.len()));
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if cx < cy {
            i += 1;
            (cx, a * &x[i - 1].1)
        } else if cy < cx {
            j += 1;
            (cy, b * &y[j - 1].1)
        } else {
            i += 1;
            j += 1;
            (cx, a * &x[i - 1].1 + b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// `x - q·y`, skipping the work when `q = 0`.
fn sub_multiple(x: &SparseRow, q: &BigInt, y: &SparseRow) -> SparseRow {
    if q.is_zero() {
        return x.clone();
    }
    combine(&BigInt::one(), x, &-q, y)
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// A lattice in `Z^cols` kept in fully reduced row Hermite normal form:
/// positive pivots, and every entry above a pivot lies in `[0, pivot)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HnfBasis {
    cols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl HnfBasis {
    pub fn new(cols: usize) -> Self {
        HnfBasis { cols, rows: BTreeMap::new() }
    }

    pub fn from_rows<'a>(cols: usize, rows: impl IntoIterator<Item = &'a [BigInt]>) -> Self {
        let mut b = Self::new(cols);
        for r in rows {
            b.insert(r);
        }
        b
    }

    pub fn from_matrix(m: &IntMatrix) -> Self {
        let mut b = Self::new(m.cols());
        for r in 0..m.rows() {
            b.insert(m.row(r));
        }
        b
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.rows.iter().map(|(c, r)| (*c, &r[0].1))
    }

    pub fn sparse_rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.cols, self.rows.values().map(|r| to_dense(r, self.cols)).collect())
            .expect("rows have the lattice width")
    }

    /// Reduces `row` (which has leading column `lead`) at every pivot column
    /// `> lead`, in ascending order.
    fn reduce_tail(&self, mut row: SparseRow, after: usize) -> SparseRow {
        let cols: Vec<usize> = self.rows.range(after + 1..).map(|(c, _)| *c).collect();
        for c in cols {
            let Some(v) = entry(&row, c) else { continue };
            let prow = &self.rows[&c];
            let q = v.div_floor(&prow[0].1);
            row = sub_multiple(&row, &q, prow);
        }
        row
    }

    /// Inserts a vector; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.cols, "vector width");
        self.insert_sparse(to_sparse(v))
    }

    pub fn insert_sparse(&mut self, mut v: SparseRow) -> bool {
        let mut grew = false;
        loop {
            let Some((c, a)) = v.first().cloned() else { return grew };
            match self.rows.get(&c) {
                None => {
                    if a.is_negative() {
                        v = v.into_iter().map(|(i, x)| (i, -x)).collect();
                    }
                    let v = self.reduce_tail(v, c);
                    self.rows.insert(c, v);
                    self.rereduce_above(c);
                    return true;
                }
                Some(row) => {
                    let p = row[0].1.clone();
                    if (&a % &p).is_zero() {
                        v = sub_multiple(&v, &(&a / &p), row);
                        continue;
                    }
                    let e = a.extended_gcd(&p);
                    let (g, s, t) = (e.gcd, e.x, e.y);
                    let new_row = combine(&s, &v, &t, row);
                    let rest = combine(&-(&p / &g), &v, &(&a / &g), row);
                    let new_row = self.reduce_tail(new_row, c);
                    self.rows.insert(c, new_row);
                    self.rereduce_above(c);
                    v = rest;
                    grew = true;
                }
            }
        }
    }

    /// Restores reducedness of rows with pivots before `c` at columns `>= c`.
    fn rereduce_above(&mut self, c: usize) {
        let above: Vec<usize> = self.rows.range(..c).map(|(k, _)| *k).collect();
        for k in above {
            let row = self.rows.remove(&k).expect("present");
            let touched = row.iter().any(|(col, _)| *col >= c && self.rows.contains_key(col));
            let row = if touched { self.reduce_tail(row, c - 1) } else { row };
            self.rows.insert(k, row);
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.contains_sparse(to_sparse(v))
    }

    pub fn contains_sparse(&self, mut v: SparseRow) -> bool {
        loop {
            let Some((c, a)) = v.first().cloned() else { return true };
            let Some(row) = self.rows.get(&c) else { return false };
            let (q, r) = a.div_rem(&row[0].1);
            if !r.is_zero() {
                return false;
            }
            v = sub_multiple(&v, &q, row);
        }
    }

    /// Canonical reduced representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut row = to_sparse(v);
        for (c, prow) in &self.rows {
            let Some(x) = entry(&row, *c) else { continue };
            let q = x.div_floor(&prow[0].1);
            row = sub_multiple(&row, &q, prow);
        }
        to_dense(&row, self.cols)
    }

    pub fn contains_lattice(&self, other: &HnfBasis) -> bool {
        other.rows.values().all(|r| self.contains_sparse(r.clone()))
    }
}

/// Row Hermite normal form with transform: `U·M = H`, `U` unimodular.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut b = HnfBasis::new(c + r);
    for i in 0..r {
        let mut row = to_sparse(m.row(i));
        row.push((c + i, BigInt::one()));
        b.insert_sparse(row);
    }
    let mut h = IntMatrix::zeros(r, c);
    let mut u = IntMatrix::zeros(r, r);
    for (idx, row) in b.rows.values().enumerate() {
        for (col, x) in row {
            if *col < c {
                h.set(idx, *col, x.clone());
            } else {
                u.set(idx, col - c, x.clone());
            }
        }
    }
    (h, u)
}

/// Basis of the left kernel `{u : u·M = 0}`, in Hermite normal form.
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows(), m.cols());
    let mut b = HnfBasis::new(c + r);
    for i in 0..r {
        let mut row = to_sparse(m.row(i));
        row.push((c + i, BigInt::one()));
        b.insert_sparse(row);
    }
    let rows: Vec<Vec<BigInt>> = b
        .rows
        .range(c..)
        .map(|(_, row)| {
            let mut out = vec![BigInt::zero(); r];
            for (col, x) in row {
                out[col - c] = x.clone();
            }
            out
        })
        .collect();
    IntMatrix::from_rows(r, rows).expect("width r")
}

/// Smith normal form divisors `d_1 | d_2 | …`, `min(rows, cols)` of them,
/// zeros last.
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    snf_of_basis(&HnfBasis::from_matrix(m), m.rows().min(m.cols()))
}

/// Smith divisors of a lattice basis, padded with zeros to `len`.
pub fn snf_of_basis(basis: &HnfBasis, len: usize) -> Vec<BigInt> {
    // In fully reduced form a unit pivot column is a unit vector, so that row
    // splits off as a divisor 1 together with its column.
    let unit_cols: Vec<usize> = basis.pivots().filter(|(_, p)| p.is_one()).map(|(c, _)| c).collect();
    let mut divisors = vec![BigInt::one(); unit_cols.len()];
    let keep: Vec<usize> = (0..basis.cols()).filter(|c| unit_cols.binary_search(c).is_err()).collect();
    let mut a: Vec<Vec<BigInt>> = basis
        .sparse_rows()
        .filter(|r| !r[0].1.is_one())
        .map(|r| {
            let mut out = vec![BigInt::zero(); keep.len()];
            for (c, x) in r {
                if let Ok(j) = keep.binary_search(c) {
                    out[j] = x.clone();
                }
            }
            out
        })
        .collect();
    let rows = a.len();
    let cols = keep.len();
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                    a.swap(t, i);
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
            if !clean {
                continue;
            }
            let pivot = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        divisors.push(a[t][t].abs());
    }
    divisors.sort_by(|x, y| match (x.is_zero(), y.is_zero()) {
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        _ => x.cmp(y),
    });
    while divisors.len() < len {
        divisors.push(BigInt::zero());
    }
    divisors
}

pub fn lattice_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    HnfBasis::from_matrix(a) == HnfBasis::from_matrix(b)
}

/// Whether the row lattice of `b` is contained in that of `a`.
pub fn lattice_contains(a: &IntMatrix, b: &IntMatrix) -> bool {
    let ha = HnfBasis::from_matrix(a);
    (0..b.rows()).all(|r| ha.contains(b.row(r)))
}

/// Abelian-group invariants of `ambient / sub`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientStructure {
    pub free_rank: usize,
    /// Nonzero Smith divisors of the inclusion, including units.
    #[serde(serialize_with = "ser_bigints")]
    pub divisors: Vec<BigInt>,
}

impl QuotientStructure {
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_free(&self) -> bool {
        self.divisors.iter().all(|d| d.is_one())
    }
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde_json::Value::Array(v.iter().map(bigint_to_json).collect()).serialize(s)
}

/// Invariants of `L/S` where `L` is spanned by the rows of `ambient` (assumed
/// independent) and `S` by the rows of `sub`.
pub fn quotient_structure(ambient: &IntMatrix, sub: &IntMatrix) -> Result<QuotientStructure> {
    let (h, u) = hnf(ambient);
    let r = HnfBasis::from_matrix(ambient).rank();
    if r != ambient.rows() {
        return Err(Error::InvalidParameter("ambient rows must be independent".into()));
    }
    let pivots: Vec<usize> = (0..r).map(|i| (0..h.cols()).find(|&c| !h.get(i, c).is_zero()).expect("nonzero row")).collect();
    let mut coords = Vec::with_capacity(sub.rows());
    for s in 0..sub.rows() {
        let mut rest = sub.row(s).to_vec();
        let mut y = vec![BigInt::zero(); r];
        for i in 0..r {
            let (q, rem) = rest[pivots[i]].div_rem(h.get(i, pivots[i]));
            if !rem.is_zero() {
                return Err(Error::NotInLattice);
            }
            if !q.is_zero() {
                for c in 0..h.cols() {
                    let v = h.get(i, c) * &q;
                    rest[c] -= v;
                }
            }
            y[i] = q;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInLattice);
        }
        // sub = y·H = y·U_top·ambient.
        let x: Vec<BigInt> = (0..r).map(|j| (0..r).map(|i| &y[i] * u.get(i, j)).sum()).collect();
        coords.push(x);
    }
    let x = IntMatrix::from_rows(r, coords)?;
    let divisors: Vec<BigInt> = snf(&x).into_iter().filter(|d| !d.is_zero()).collect();
    Ok(QuotientStructure { free_rank: r - divisors.len(), divisors })
}

// ---------------------------------------------------------------------------
// Linear algebra over F_p.

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    e.x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

/// An `F_p`-subspace of `F_p^cols` in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpBasis {
    p: u64,
    cols: usize,
    rows: BTreeMap<usize, Vec<u64>>,
}

impl FpBasis {
    pub fn new(p: u64, cols: usize) -> Self {
        FpBasis { p, cols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn normalize(&self, v: &[BigInt]) -> Vec<u64> {
        let p = BigInt::from(self.p);
        v.iter().map(|x| x.mod_floor(&p).to_u64().expect("reduced")).collect()
    }

    fn reduce_vec(&self, v: &mut [u64]) {
        let p = self.p;
        for (&c, row) in &self.rows {
            let a = v[c];
            if a == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row).skip(c) {
                if *y != 0 {
                    *x = (*x + p - (a * y) % p) % p;
                }
            }
        }
    }

    /// Inserts a vector; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let v = self.normalize(v);
        self.insert_u64(v)
    }

    pub fn insert_u64(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.cols, "vector width");
        let p = self.p;
        self.reduce_vec(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[c], p);
        for x in v.iter_mut() {
            *x = (*x * inv) % p;
        }
        for row in self.rows.values_mut() {
            let a = row[c];
            if a == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&v).skip(c) {
                if *y != 0 {
                    *x = (*x + p - (a * y) % p) % p;
                }
            }
        }
        self.rows.insert(c, v);
        true
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = self.normalize(v);
        self.reduce_vec(&mut v);
        v.iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &FpBasis) -> bool {
        other.rows.values().all(|r| {
            let mut v = r.clone();
            self.reduce_vec(&mut v);
            v.iter().all(|&x| x == 0)
        })
    }

    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows.values().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }
}

/// Rank over `F_p` of the rows of `m`.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let mut b = FpBasis::new(p, m.cols());
    for r in 0..m.rows() {
        b.insert(m.row(r));
    }
    b.rank()
}

/// Basis of the left kernel of `m` over `F_p`.
pub fn kernel_mod_p(m: &IntMatrix, p: u64) -> Vec<Vec<BigInt>> {
    let (r, c) = (m.rows(), m.cols());
    let mut b = FpBasis::new(p, c + r);
    for i in 0..r {
        let mut row: Vec<BigInt> = m.row(i).to_vec();
        row.extend((0..r).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }));
        b.insert(&row);
    }
    b.rows.range(c..).map(|(_, row)| row[c..].iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(hnf(&id).0, id);
        let a = m(&[vec![2, 4], vec![6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a).unwrap(), h);
        assert_eq!(h, m(&[vec![2, 0], vec![0, 4]]));
        assert!(u.determinant().unwrap().abs().is_one());
        let z = IntMatrix::zeros(2, 3);
        assert!(hnf(&z).0.is_zero());
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[vec![2, 0], vec![0, 3]])), big(&[1, 6]));
        assert_eq!(snf(&IntMatrix::identity(3)), big(&[1, 1, 1]));
        assert_eq!(snf(&m(&[vec![0]])), big(&[0]));
        assert_eq!(snf(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), big(&[2, 6, 12]));
    }

    #[test]
    fn lattice_relations() {
        let two = m(&[vec![2, 0], vec![0, 2]]);
        let id = IntMatrix::identity(2);
        assert!(lattice_contains(&id, &two));
        assert!(!lattice_contains(&two, &id));
        assert!(!lattice_equal(&id, &two));
        assert!(lattice_equal(&id, &m(&[vec![1, 1], vec![0, 1], vec![3, 5]])));
    }

    #[test]
    fn quotients() {
        let q = quotient_structure(&IntMatrix::identity(2), &m(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(q, QuotientStructure { free_rank: 0, divisors: big(&[1, 6]) });
        let q = quotient_structure(&IntMatrix::identity(3), &m(&[vec![1, 0, 0]])).unwrap();
        assert_eq!(q.free_rank, 2);
        assert!(q.torsion().is_empty());
        let amb = m(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(quotient_structure(&amb, &m(&[vec![1, 0]])), Err(Error::NotInLattice));
    }

    #[test]
    fn kernels() {
        let a = m(&[vec![1, 2], vec![2, 4], vec![3, 6]]);
        let k = kernel(&a);
        assert_eq!(k.rows(), 2);
        assert!(k.mul(&a).unwrap().is_zero());
        let kp = kernel_mod_p(&m(&[vec![1, 0], vec![0, 3]]), 3);
        assert_eq!(kp, vec![big(&[0, 1])]);
        assert_eq!(rank_mod_p(&m(&[vec![2, 0], vec![0, 3]]), 3), 1);
    }

    #[test]
    fn determinants_and_inverses() {
        let a = m(&[vec![2, 1], vec![7, 4]]);
        assert_eq!(a.determinant().unwrap(), BigInt::one());
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a).unwrap(), IntMatrix::identity(2));
        assert_eq!(m(&[vec![2, 0], vec![0, 1]]).inverse(), Err(Error::NotInvertible));
        assert_eq!(m(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant().unwrap(), BigInt::from(-2));
    }
}
