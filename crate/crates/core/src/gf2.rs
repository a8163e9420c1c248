//! Bit-packed linear algebra over the two-element field.
//!
//! Rows are packed into `u64` words. Elimination follows one fixed rule
//! (pivot = lowest nonzero column, topmost available row), so every basis
//! derived from it is reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const W: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(W)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {what} ({left} vs {right})")]
    DimensionMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
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

    /// Vector with ones exactly at `ones` (repeated indices cancel).
    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / W] >> (i % W)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % W);
        if value {
            self.words[i / W] |= mask;
        } else {
            self.words[i / W] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / W] ^= 1u64 << (i % W);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest index holding a one.
    pub fn first_one(&self) -> Option<usize> {
        self.next_one(0)
    }

    /// Lowest index `>= from` holding a one.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / W;
        let mut word = self.words[wi] & (!0u64 << (from % W));
        loop {
            if word != 0 {
                return Some(wi * W + word.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            word = self.words[wi];
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let tz = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * W + tz)
                }
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Copy `other` into positions `offset..offset + other.len()` by XOR.
    pub fn xor_at(&mut self, offset: usize, other: &BitVec) {
        for i in other.iter_ones() {
            self.flip(offset + i);
        }
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in self.iter_ones() {
            if i >= start && i < start + len {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Change the length, dropping or zero-filling bits at the end.
    pub fn resize(&mut self, len: usize) {
        self.words.resize(words_for(len), 0);
        if len < self.len && len % W != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (len % W)) - 1;
            }
        }
        self.len = len;
    }

    pub fn resized(mut self, len: usize) -> BitVec {
        self.resize(len);
        self
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

/// Dense row-major GF(2) matrix. Bits past `cols` in each row are zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

/// Output of [`BitMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelonResult {
    pub matrix: BitMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Raw row-major payload; `rows * ceil(cols / 64)` words.
    pub fn payload(&self) -> &[u64] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.stride + c / W] >> (c % W)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let idx = r * self.stride + c / W;
        let mask = 1u64 << (c % W);
        if value {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_ones(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                what: "matrix-vector",
                left: self.cols,
                right: x.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                what: "matrix product",
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            let start = r * out.stride;
            for k in row.iter_ones() {
                let src = other.row_words(k);
                for (d, s) in out.bits[start..start + out.stride].iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    pub fn rref(&self) -> RowEchelonResult {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        RowEchelonResult {
            rank: pivots.len(),
            matrix: m,
            pivot_columns: pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let mut red = Reducer::new(self.cols);
        (0..self.rows)
            .filter(|&r| red.insert(self.row(r)).is_some())
            .count()
    }

    /// Canonical kernel basis: one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let e = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivot_columns {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (i, &p) in e.pivot_columns.iter().enumerate() {
                    if e.matrix.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Solution of `self · x = b` with all free variables zero, if one exists.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                what: "right-hand side",
                left: self.rows,
                right: b.len(),
            });
        }
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                aug.set(r, c, true);
            }
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let e = aug.rref();
        if e.pivot_columns.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (i, &p) in e.pivot_columns.iter().enumerate() {
            if e.matrix.get(i, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Incremental echelon form. Each stored row has a distinct pivot (its
/// lowest set bit) and carries a tag recording which inserted vectors it
/// is a combination of.
#[derive(Clone, Debug)]
pub struct Reducer {
    width: usize,
    rows: Vec<BitVec>,
    tags: Vec<BitVec>,
    pivot_row: Vec<u32>,
    inserted: usize,
    tag_len: usize,
}

const NONE: u32 = u32::MAX;

impl Reducer {
    pub fn new(width: usize) -> Self {
        Self::with_capacity(width, 0)
    }

    /// Reserve tag space for `capacity` insertions up front.
    pub fn with_capacity(width: usize, capacity: usize) -> Self {
        Reducer {
            width,
            rows: Vec::new(),
            tags: Vec::new(),
            pivot_row: vec![NONE; width],
            inserted: 0,
            tag_len: capacity,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors passed to `insert` so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.first_one().unwrap())
    }

    /// Stored echelon rows (pivot = lowest set bit).
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Reduce `v` in place and return the combination of inserted vectors
    /// that was subtracted (length = number inserted).
    pub fn reduce_tracked(&self, v: &mut BitVec) -> BitVec {
        let mut tag = BitVec::zeros(self.tag_len);
        let mut from = 0;
        while let Some(p) = v.next_one(from) {
            let r = self.pivot_row[p];
            if r != NONE {
                v.xor_assign(&self.rows[r as usize]);
                tag.xor_assign(&self.tags[r as usize]);
            }
            from = p + 1;
        }
        tag.resize(self.inserted);
        tag
    }

    pub fn reduce(&self, v: &mut BitVec) {
        let mut from = 0;
        while let Some(p) = v.next_one(from) {
            let r = self.pivot_row[p];
            if r != NONE {
                v.xor_assign(&self.rows[r as usize]);
            }
            from = p + 1;
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Insert `v`. Returns `Some(pivot)` if it was independent.
    pub fn insert(&mut self, v: BitVec) -> Option<usize> {
        self.insert_tracked(v).0
    }

    /// Insert without tag bookkeeping; only for reducers that never solve.
    pub fn insert_untracked(&mut self, mut v: BitVec) -> Option<usize> {
        assert_eq!(v.len(), self.width, "reducer width mismatch");
        self.inserted += 1;
        self.reduce(&mut v);
        let p = v.first_one()?;
        self.pivot_row[p] = self.rows.len() as u32;
        self.rows.push(v);
        self.tags.push(BitVec::zeros(0));
        Some(p)
    }

    /// Like `insert`, and when `v` reduces to zero also returns the
    /// dependency: insertion indices (including its own) summing to 0.
    pub fn insert_tracked(&mut self, mut v: BitVec) -> (Option<usize>, Option<BitVec>) {
        assert_eq!(v.len(), self.width, "reducer width mismatch");
        let idx = self.inserted;
        if idx >= self.tag_len {
            self.tag_len = (self.tag_len * 2).max(idx + 1).max(16);
            for t in &mut self.tags {
                t.resize(self.tag_len);
            }
        }
        let mut tag = BitVec::zeros(self.tag_len);
        let mut from = 0;
        while let Some(p) = v.next_one(from) {
            let r = self.pivot_row[p];
            if r != NONE {
                v.xor_assign(&self.rows[r as usize]);
                tag.xor_assign(&self.tags[r as usize]);
            }
            from = p + 1;
        }
        tag.set(idx, true);
        self.inserted += 1;
        match v.first_one() {
            Some(p) => {
                self.pivot_row[p] = self.rows.len() as u32;
                self.rows.push(v);
                self.tags.push(tag);
                (Some(p), None)
            }
            None => {
                tag.resize(self.inserted);
                (None, Some(tag))
            }
        }
    }

    /// Express `target` as a combination of inserted vectors, if possible.
    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        let mut v = target.clone();
        let tag = self.reduce_tracked(&mut v);
        v.is_zero().then_some(tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j] == 1)
    }

    #[test]
    fn rref_examples() {
        let e = BitMatrix::identity(3).rref();
        assert_eq!((e.rank, e.pivot_columns), (3, vec![0, 1, 2]));
        let e = m(&[&[1, 1]]).rref();
        assert_eq!((e.rank, e.pivot_columns), (1, vec![0]));
        let e = BitMatrix::zeros(2, 2).rref();
        assert_eq!((e.rank, e.pivot_columns.len()), (0, 0));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            m(&[&[1, 1]]).kernel_basis(),
            vec![BitVec::from_bools(&[true, true])]
        );
        assert!(BitMatrix::identity(2).kernel_basis().is_empty());
        let k = BitMatrix::zeros(1, 3).kernel_basis();
        assert_eq!(k, (0..3).map(|i| BitVec::unit(3, i)).collect::<Vec<_>>());
    }

    #[test]
    fn solve_examples() {
        let a = m(&[&[1, 0], &[1, 1]]);
        let x = a.solve(&BitVec::from_bools(&[true, false])).unwrap().unwrap();
        assert_eq!(x, BitVec::from_bools(&[true, true]));
        assert_eq!(
            m(&[&[0, 0]]).solve(&BitVec::from_bools(&[true])).unwrap(),
            None
        );
        let b = BitVec::from_bools(&[true, false, true]);
        assert_eq!(BitMatrix::identity(3).solve(&b).unwrap(), Some(b));
    }

    #[test]
    fn multiply_examples() {
        let one_one = m(&[&[1, 1]]);
        let col = m(&[&[1], &[1]]);
        assert_eq!(one_one.multiply(&col).unwrap(), BitMatrix::zeros(1, 1));
        assert!(one_one.multiply(&one_one).is_err());
        let p = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let p2 = p.multiply(&p).unwrap();
        assert_eq!(p2, m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(BitMatrix::identity(3).multiply(&p).unwrap(), p);
    }

    #[test]
    fn reducer_tracks_dependencies() {
        let mut r = Reducer::new(3);
        assert!(r.insert(BitVec::from_bools(&[true, true, false])).is_some());
        assert!(r.insert(BitVec::from_bools(&[false, true, true])).is_some());
        let (piv, dep) = r.insert_tracked(BitVec::from_bools(&[true, false, true]));
        assert!(piv.is_none());
        assert_eq!(dep.unwrap(), BitVec::from_bools(&[true, true, true]));
        let x = r.solve(&BitVec::from_bools(&[true, false, true])).unwrap();
        assert_eq!(x.iter_ones().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn next_one_crosses_words() {
        let v = BitVec::from_ones(200, [3, 70, 199]);
        assert_eq!(v.next_one(4), Some(70));
        assert_eq!(v.next_one(71), Some(199));
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![3, 70, 199]);
    }
}
