//! Dense linear algebra over GF(2).
//!
//! Rows are bit-packed into `u64` words. Every basis-returning routine is
//! deterministic: bases come from RREF pivot and free columns in ascending
//! order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseMatrixError {
    #[error("missing \"rows cols\" header")]
    MissingHeader,
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("row {row}: {msg}")]
    BadRow { row: usize, msg: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("invalid bit string {0:?}")]
    BadBits(String),
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// True when every set bit of `self` is set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Entries at `indices`, in that order.
    pub fn restrict(&self, indices: &[usize]) -> BitVec {
        let mut r = BitVec::zeros(indices.len());
        for (k, &i) in indices.iter().enumerate() {
            if self.get(i) {
                r.set(k, true);
            }
        }
        r
    }

    /// Scatter `self` into a vector of length `len` at positions `indices`.
    pub fn embed(&self, len: usize, indices: &[usize]) -> BitVec {
        assert_eq!(self.len, indices.len());
        let mut r = BitVec::zeros(len);
        for i in self.iter_ones() {
            r.set(indices[i], true);
        }
        r
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut r = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            r.set(i, true);
        }
        for i in other.iter_ones() {
            r.set(self.len + i, true);
        }
        r
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let idx: Vec<usize> = (start..end).collect();
        self.restrict(&idx)
    }

    /// Insert a bit at position `pos`, shifting later bits up.
    pub fn insert(&mut self, pos: usize, b: bool) {
        assert!(pos <= self.len);
        let mut bits = self.to_bools();
        bits.insert(pos, b);
        *self = BitVec::from_bools(&bits);
    }

    /// Remove the bit at `pos`, shifting later bits down.
    pub fn remove(&mut self, pos: usize) -> bool {
        let mut bits = self.to_bools();
        let b = bits.remove(pos);
        *self = BitVec::from_bools(&bits);
        b
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = ParseMatrixError;

    /// Parses a string of `0`/`1` characters; spaces and underscores are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | '_' => {}
                _ => return Err(ParseMatrixError::BadBits(s.to_string())),
            }
        }
        Ok(BitVec::from_bools(&bits))
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dense `rows × cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

/// Output of [`F2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: F2Matrix,
    pub pivots: Vec<usize>,
    /// Row additions `(target, source)`, meaning `row[target] += row[source]`,
    /// which replay the input into `matrix` when applied in order.
    pub row_ops: Vec<(usize, usize)>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors, each of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        F2Matrix { rows: rows.len(), cols, data: rows }
    }

    /// Builds a matrix from column vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Rows given as `0`/`1` strings of equal length. Convenient for fixtures.
    ///
    /// Panics on malformed input; use [`FromStr`] for untrusted text.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Self {
        let rows: Vec<BitVec> = rows.iter().map(|s| s.parse().expect("bit string")).collect();
        Self::from_rows(cols, rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i].set(j, b)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.data
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(BitVec::weight).sum()
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.iter_ones() {
                    acc.xor_assign(&other.data[k]);
                }
                acc
            })
            .collect();
        F2Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "matrix-vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.shape(), other.shape(), "cannot add matrices of different shapes");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.xor(b)).collect();
        F2Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.concat(b)).collect();
        F2Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        F2Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &F2Matrix) -> F2Matrix {
        let top = self.hstack(&F2Matrix::zeros(self.rows, other.cols));
        let bottom = F2Matrix::zeros(other.rows, self.cols).hstack(other);
        top.vstack(&bottom)
    }

    /// Kronecker product with row-major (left-factor-major) index order.
    pub fn kron(&self, other: &F2Matrix) -> F2Matrix {
        let mut m = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in self.data[i].iter_ones() {
                for k in 0..other.rows {
                    for l in other.data[k].iter_ones() {
                        m.set(i * other.rows + k, j * other.cols + l, true);
                    }
                }
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> F2Matrix {
        let data = self.data.iter().map(|r| r.restrict(cols)).collect();
        F2Matrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> F2Matrix {
        let data = rows.iter().map(|&i| self.data[i].clone()).collect();
        F2Matrix { rows: rows.len(), cols: self.cols, data }
    }

    /// Indices of rows with at least one nonzero entry.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&i| !self.data[i].is_zero()).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.data.iter().map(BitVec::weight).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in &self.data {
            for j in r.iter_ones() {
                w[j] += 1;
            }
        }
        w
    }

    pub fn max_row_weight(&self) -> usize {
        self.row_weights().into_iter().max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    /// `row[target] += row[source]`.
    pub fn add_row(&mut self, target: usize, source: usize) {
        assert_ne!(target, source);
        let src = self.data[source].clone();
        self.data[target].xor_assign(&src);
    }

    /// `col[target] += col[source]`.
    pub fn add_col(&mut self, target: usize, source: usize) {
        assert_ne!(target, source);
        for r in &mut self.data {
            if r.get(source) {
                r.flip(target);
            }
        }
    }

    /// Reduced row echelon form using row additions only.
    ///
    /// A pivot found below the current row is added into it rather than
    /// swapped, so every recorded operation is a single row addition.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row_ops = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            if p != r {
                m.add_row(r, p);
                row_ops.push((r, p));
            }
            for i in 0..self.rows {
                if i != r && m.get(i, c) {
                    m.add_row(i, r);
                    row_ops.push((i, r));
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots, row_ops }
    }

    pub fn rank(&self) -> usize {
        // Elimination on the shorter side.
        if self.cols < self.rows {
            return self.transpose().rank();
        }
        let mut rows: Vec<BitVec> = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(c)) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for row in rows.iter_mut().skip(rank + 1) {
                    if row.get(c) {
                        row.xor_assign(&pivot);
                    }
                }
                rank += 1;
                if rank == rows.len() {
                    break;
                }
            }
        }
        rank
    }

    /// Columns form a basis of `ker self`, one per free column of the RREF,
    /// ascending.
    pub fn kernel_basis(&self) -> F2Matrix {
        let rref = self.rref();
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &p in &rref.pivots {
                v[p] = true;
            }
            v
        };
        let cols: Vec<BitVec> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::unit(self.cols, f);
                for (i, &p) in rref.pivots.iter().enumerate() {
                    if rref.matrix.get(i, f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect();
        F2Matrix::from_columns(self.cols, &cols)
    }

    /// Pivot columns of `self`, in original order.
    pub fn image_basis(&self) -> F2Matrix {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    /// Some `x` with `self · x = b`, free variables set to zero.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let aug = self.hstack(&F2Matrix::from_columns(self.rows, std::slice::from_ref(b)));
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in rref.pivots.iter().enumerate() {
            if rref.matrix.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// Projection `P: F2^rows → F2^rows / im self` with `P · self = 0`.
    ///
    /// The quotient basis is the standard basis vectors whose indices are
    /// not pivots of the RREF of `selfᵀ` (the column space in echelon form).
    pub fn cokernel_projection(&self) -> (F2Matrix, usize) {
        let (proj, kept) = self.cokernel_with_section();
        let dim = kept.len();
        (proj, dim)
    }

    /// Like [`Self::cokernel_projection`], also returning the kept indices.
    /// The kept standard basis vectors give a section of the projection.
    pub fn cokernel_with_section(&self) -> (F2Matrix, Vec<usize>) {
        let n = self.rows;
        let rref = self.transpose().rref();
        let mut is_pivot = vec![false; n];
        for &p in &rref.pivots {
            is_pivot[p] = true;
        }
        let kept: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &i) in kept.iter().enumerate() {
            pos[i] = k;
        }
        let mut proj = F2Matrix::zeros(kept.len(), n);
        for (k, &i) in kept.iter().enumerate() {
            proj.set(k, i, true);
        }
        for (r, &p) in rref.pivots.iter().enumerate() {
            // e_p ≡ e_p + b_r, which is supported on kept indices only.
            for j in rref.matrix.row(r).iter_ones() {
                if j != p {
                    proj.set(pos[j], p, true);
                }
            }
        }
        (proj, kept)
    }
}

impl fmt::Display for F2Matrix {
    /// The matrix text format: a `rows cols` header, then one line per row of
    /// space-separated bits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in &self.data {
            let line: Vec<&str> = (0..self.cols).map(|j| if r.get(j) { "1" } else { "0" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

impl FromStr for F2Matrix {
    type Err = ParseMatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or(ParseMatrixError::MissingHeader)?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(ParseMatrixError::BadHeader(header.to_string()));
        }
        let parse = |t: &str| t.parse::<usize>().map_err(|_| ParseMatrixError::BadHeader(header.to_string()));
        let (rows, cols) = (parse(dims[0])?, parse(dims[1])?);
        let mut data = Vec::with_capacity(rows);
        for (i, line) in lines.enumerate() {
            if i >= rows {
                return Err(ParseMatrixError::RowCount { expected: rows, found: i + 1 });
            }
            let mut v = BitVec::zeros(cols);
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(ParseMatrixError::BadRow {
                    row: i,
                    msg: format!("expected {cols} entries, found {}", toks.len()),
                });
            }
            for (j, t) in toks.iter().enumerate() {
                match *t {
                    "0" => {}
                    "1" => v.set(j, true),
                    other => {
                        return Err(ParseMatrixError::BadRow { row: i, msg: format!("bad entry {other:?}") })
                    }
                }
            }
            data.push(v);
        }
        if data.len() != rows {
            return Err(ParseMatrixError::RowCount { expected: rows, found: data.len() });
        }
        Ok(F2Matrix { rows, cols, data })
    }
}

impl Serialize for F2Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for F2Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A subspace of `F2^n` held as an echelon basis, for fast membership tests
/// and reduction modulo the subspace.
#[derive(Clone, Debug)]
pub struct Span {
    len: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(len: usize) -> Self {
        Span { len, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Span of the columns of `m`.
    pub fn of_columns(m: &F2Matrix) -> Self {
        Self::of_vectors(m.nrows(), m.columns())
    }

    pub fn of_vectors(len: usize, vs: impl IntoIterator<Item = BitVec>) -> Self {
        let mut s = Span::new(len);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    /// Reduce `v` by the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: BitVec) -> bool {
        assert_eq!(v.len(), self.len);
        let r = self.reduce(&v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for b in &mut self.basis {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        self.basis.push(r);
        self.pivots.push(p);
        true
    }
}
