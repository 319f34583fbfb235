//! Bit-packed linear algebra over GF(2).
//!
//! Column `c` of a vector lives in bit `c % 64` of word `c / 64`. Column
//! order is chosen by the caller; the only order-dependent notion here is the
//! pivot rule, which picks either the lowest or the highest set column.

use std::fmt;

const W: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(W)
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / W] >> (i % W) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let m = 1u64 << (i % W);
        if b {
            self.words[i / W] |= m;
        } else {
            self.words[i / W] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / W] ^= 1u64 << (i % W);
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &Gf2Vector) -> Gf2Vector {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Gf2Vector { len: self.len, words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product.
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let p: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        p & 1 == 1
    }

    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * W + w.trailing_zeros() as usize)
    }

    pub fn highest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * W + (W - 1 - w.leading_zeros() as usize))
    }

    pub fn lead(&self, rule: PivotRule) -> Option<usize> {
        match rule {
            PivotRule::Leftmost => self.lowest_one(),
            PivotRule::Rightmost => self.highest_one(),
        }
    }

    pub fn ones(&self) -> Ones<'_> {
        Ones { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &Gf2Vector) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }

    /// Columns `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(end - start);
        for i in self.ones().skip_while(|&i| i < start).take_while(|&i| i < end) {
            v.set(i - start, true);
        }
        v
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Iterator over set positions in increasing order.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * W + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// A list of rows of equal length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    ncols: usize,
    rows: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn new(ncols: usize) -> Self {
        Gf2Matrix { ncols, rows: Vec::new() }
    }

    pub fn from_rows(ncols: usize, rows: Vec<Gf2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
        }
        Gf2Matrix { ncols, rows }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Gf2Matrix { ncols, rows: vec![Gf2Vector::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Gf2Matrix { ncols: n, rows: (0..n).map(|i| Gf2Vector::unit(n, i)).collect() }
    }

    pub fn push(&mut self, row: Gf2Vector) {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Gf2Vector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.ncols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `M·v`, treating `v` as a column vector.
    pub fn mul_vec(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        Gf2Vector::from_bits(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// `v·M`, treating `v` as a row vector.
    pub fn vec_mul(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(v.len(), self.rows.len(), "vector length mismatch");
        let mut out = Gf2Vector::zeros(self.ncols);
        for i in v.ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.ncols, other.nrows(), "matrix shape mismatch");
        let rows = self.rows.iter().map(|r| other.vec_mul(r)).collect();
        Gf2Matrix { ncols: other.ncols, rows }
    }

    pub fn add(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.ncols, other.ncols, "matrix shape mismatch");
        assert_eq!(self.nrows(), other.nrows(), "matrix shape mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.xor_assign(b);
                r
            })
            .collect();
        Gf2Matrix { ncols: self.ncols, rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Gf2Vector::is_zero)
    }

    pub fn rank(&self) -> usize {
        echelon(self, PivotRule::Leftmost).rank()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PivotRule {
    /// Pivot at the lowest set column.
    Leftmost,
    /// Pivot at the highest set column.
    Rightmost,
}

/// A subspace stored in reduced row-echelon form.
///
/// Rows are sorted by strictly increasing pivot. Under `Leftmost` each row
/// has no set column below its pivot, under `Rightmost` none above it; in
/// both cases every pivot column is set in exactly one row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonBasis {
    ncols: usize,
    rule: PivotRule,
    rows: Vec<Gf2Vector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn empty(ncols: usize, rule: PivotRule) -> Self {
        EchelonBasis { ncols, rule, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rule(&self) -> PivotRule {
        self.rule
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> Gf2Matrix {
        Gf2Matrix { ncols: self.ncols, rows: self.rows.clone() }
    }

    /// Columns that are not pivots, in increasing order.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces `v` modulo the span; the result has no set pivot column.
    pub fn reduce(&self, v: &Gf2Vector) -> Gf2Vector {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let mut out = v.clone();
        // Reduced rows carry no other pivot column, so one pass over the
        // pivot columns set in `v` suffices.
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    /// Coefficients of `v` in terms of the rows, if `v` lies in the span.
    pub fn express(&self, v: &Gf2Vector) -> Option<Gf2Vector> {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let mut coeffs = Gf2Vector::zeros(self.rows.len());
        let mut out = v.clone();
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v.get(p) {
                out.xor_assign(row);
                coeffs.set(i, true);
            }
        }
        out.is_zero().then_some(coeffs)
    }
}

/// Reduced row-echelon form of the row space of `m`.
pub fn echelon(m: &Gf2Matrix, rule: PivotRule) -> EchelonBasis {
    echelon_rows(m.ncols, m.rows.iter().cloned(), rule)
}

/// Reduced row-echelon form of the span of `rows`.
pub fn echelon_rows(
    ncols: usize,
    rows: impl IntoIterator<Item = Gf2Vector>,
    rule: PivotRule,
) -> EchelonBasis {
    let mut inc = IncrementalEchelon::new(ncols, rule);
    for r in rows {
        inc.insert(r);
    }
    inc.finish()
}

/// Forward elimination one row at a time.
///
/// Rows are kept in (non-reduced) echelon form: distinct leads, each row
/// reduced only against rows present when it was inserted.
#[derive(Clone, Debug)]
pub struct IncrementalEchelon {
    ncols: usize,
    rule: PivotRule,
    rows: Vec<Gf2Vector>,
    by_pivot: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl IncrementalEchelon {
    pub fn new(ncols: usize, rule: PivotRule) -> Self {
        IncrementalEchelon { ncols, rule, rows: Vec::new(), by_pivot: vec![NONE; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.by_pivot[col] != NONE
    }

    /// Reduces `v` until its lead is not a pivot (or it vanishes).
    fn reduce_lead(&self, v: &mut Gf2Vector) -> Option<usize> {
        while let Some(p) = v.lead(self.rule) {
            let r = self.by_pivot[p];
            if r == NONE {
                return Some(p);
            }
            v.xor_assign(&self.rows[r as usize]);
        }
        None
    }

    /// Inserts `v`; returns the new pivot if `v` was independent.
    pub fn insert(&mut self, mut v: Gf2Vector) -> Option<usize> {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let p = self.reduce_lead(&mut v)?;
        self.by_pivot[p] = self.rows.len() as u32;
        self.rows.push(v);
        Some(p)
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        let mut v = v.clone();
        self.reduce_lead(&mut v).is_none()
    }

    /// Back-substitutes into reduced form.
    pub fn finish(self) -> EchelonBasis {
        let IncrementalEchelon { ncols, rule, rows, by_pivot } = self;
        let mut order: Vec<usize> = (0..ncols).filter(|&c| by_pivot[c] != NONE).collect();
        let mut pivot_mask = Gf2Vector::zeros(ncols);
        for &p in &order {
            pivot_mask.set(p, true);
        }
        let mut rows: Vec<Option<Gf2Vector>> = rows.into_iter().map(Some).collect();
        let mut done: Vec<Option<Gf2Vector>> = vec![None; ncols];
        // Rows whose pivots lie on the far side of the lead are finished
        // first; each finished row has no pivot column besides its own, so
        // clearing a pivot bit never reintroduces another one.
        if rule == PivotRule::Leftmost {
            order.reverse();
        }
        for &p in &order {
            let mut row = rows[by_pivot[p] as usize].take().expect("row used once");
            let mut hits = row.and(&pivot_mask);
            hits.set(p, false);
            for q in hits.ones() {
                row.xor_assign(done[q].as_ref().expect("finished earlier"));
            }
            done[p] = Some(row);
        }
        let mut pivots = Vec::new();
        let mut out = Vec::new();
        for (p, r) in done.into_iter().enumerate() {
            if let Some(r) = r {
                pivots.push(p);
                out.push(r);
            }
        }
        EchelonBasis { ncols, rule, rows: out, pivots }
    }
}

/// Basis of `{v : m·v = 0}`.
pub fn nullspace(m: &Gf2Matrix) -> EchelonBasis {
    let e = echelon(m, PivotRule::Leftmost);
    let n = m.ncols;
    let mut vecs = Vec::new();
    for f in e.non_pivots() {
        let mut v = Gf2Vector::unit(n, f);
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if row.get(f) {
                v.set(p, true);
            }
        }
        vecs.push(v);
    }
    echelon_rows(n, vecs, PivotRule::Leftmost)
}

pub fn subspace_sum(a: &EchelonBasis, b: &EchelonBasis) -> EchelonBasis {
    assert_eq!(a.ncols, b.ncols, "subspace dimension mismatch");
    echelon_rows(a.ncols, a.rows.iter().chain(&b.rows).cloned(), a.rule)
}

/// Zassenhaus: echelonize `[a|a]` and `[b|0]`; rows with zero left half
/// span the intersection in their right half.
pub fn subspace_intersection(a: &EchelonBasis, b: &EchelonBasis) -> EchelonBasis {
    assert_eq!(a.ncols, b.ncols, "subspace dimension mismatch");
    let n = a.ncols;
    let zero = Gf2Vector::zeros(n);
    let rows = a.rows.iter().map(|r| r.concat(r)).chain(b.rows.iter().map(|r| r.concat(&zero)));
    let e = echelon_rows(2 * n, rows, PivotRule::Leftmost);
    let inter = e
        .rows
        .iter()
        .zip(&e.pivots)
        .filter(|(_, &p)| p >= n)
        .map(|(r, _)| r.slice(n, 2 * n));
    echelon_rows(n, inter, a.rule)
}

pub fn contains(a: &EchelonBasis, v: &Gf2Vector) -> bool {
    a.reduce(v).is_zero()
}

/// Whether every row of `b` lies in `a`.
pub fn is_subspace(b: &EchelonBasis, a: &EchelonBasis) -> bool {
    b.rows.iter().all(|r| contains(a, r))
}

/// Solves `x·M = target` for a row combination `x` of `m`.
pub fn solve_rows(m: &Gf2Matrix, target: &Gf2Vector) -> Option<Gf2Vector> {
    let nr = m.nrows();
    let aug = m.rows.iter().enumerate().map(|(i, r)| r.concat(&Gf2Vector::unit(nr, i)));
    let e = echelon_rows(m.ncols + nr, aug, PivotRule::Leftmost);
    let mut v = target.concat(&Gf2Vector::zeros(nr));
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        if p >= m.ncols {
            break;
        }
        if v.get(p) {
            v.xor_assign(row);
        }
    }
    v.slice(0, m.ncols).is_zero().then(|| v.slice(m.ncols, m.ncols + nr))
}
