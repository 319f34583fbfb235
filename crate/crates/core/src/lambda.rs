//! The lambda algebra: admissible normal form, the differential, Sq^0,
//! cohomology, and the chain-level transfer ψ_k.
//!
//! A monomial `λ_{j_1} ... λ_{j_s}` is admissible when `j_{i+1} ≤ 2 j_i`.
//! An inadmissible pair rewrites as
//! `λ_a λ_{2a+1+m} = Σ_{j≥0} C(m-j-1, j) λ_{a+m-j} λ_{2a+1+j}`, and
//! `δ(λ_m) = Σ_{j≥1} C(m-j, j) λ_{m-j} λ_{j-1}`, extended as a derivation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::action::coinvariant_dim;
use crate::dual::{dual_sq, first_nonvanishing_square, DividedElement, DividedMonomial};
use crate::error::{Error, Result};
use crate::gf2::{self, EchelonBasis, Gf2Matrix, Gf2Vector, PivotRule};
use crate::poly::binom_mod2_signed;

/// `λ_{j_1} ... λ_{j_s}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaMonomial(pub Vec<u16>);

impl LambdaMonomial {
    pub fn new(indices: Vec<u16>) -> Self {
        LambdaMonomial(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Internal degree `t = Σ j_i`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&j| j as u32).sum()
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.0)
    }
}

impl fmt::Debug for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        Ok(())
    }
}

fn is_admissible(w: &[u16]) -> bool {
    w.windows(2).all(|p| p[1] as u32 <= 2 * p[0] as u32)
}

/// A sum of distinct lambda monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaExpression {
    terms: BTreeSet<LambdaMonomial>,
}

impl LambdaExpression {
    pub fn zero() -> Self {
        LambdaExpression::default()
    }

    pub fn from_monomial(m: LambdaMonomial) -> Self {
        let mut e = LambdaExpression::zero();
        e.terms.insert(m);
        e
    }

    /// A single monomial from its indices.
    pub fn word(indices: &[u16]) -> Self {
        LambdaExpression::from_monomial(LambdaMonomial(indices.to_vec()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = LambdaMonomial>) -> Self {
        let mut e = LambdaExpression::zero();
        for t in terms {
            e.toggle(t);
        }
        e
    }

    pub fn toggle(&mut self, m: LambdaMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &LambdaExpression) -> LambdaExpression {
        let mut e = self.clone();
        for t in &other.terms {
            e.toggle(t.clone());
        }
        e
    }

    /// Concatenation product.
    pub fn mul(&self, other: &LambdaExpression) -> LambdaExpression {
        let mut e = LambdaExpression::zero();
        for a in &self.terms {
            for b in &other.terms {
                e.toggle(LambdaMonomial([a.0.as_slice(), b.0.as_slice()].concat()));
            }
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &LambdaMonomial> {
        self.terms.iter()
    }

    /// `(s, t)` if every term has the same length and degree.
    pub fn bidegree(&self) -> Option<(usize, u32)> {
        let mut it = self.terms.iter().map(|m| (m.len(), m.degree()));
        let b = it.next()?;
        it.all(|c| c == b).then_some(b)
    }
}

impl fmt::Debug for LambdaExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LambdaExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for LambdaExpression {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(LambdaExpression::zero());
        }
        let mut e = LambdaExpression::zero();
        for term in s.split('+') {
            let idx = term
                .trim()
                .split(',')
                .map(|x| x.trim().parse::<u16>().map_err(|_| Error::Parse(format!("bad lambda term {term:?}"))))
                .collect::<Result<Vec<_>>>()?;
            e.toggle(LambdaMonomial(idx));
        }
        Ok(e)
    }
}

impl FromIterator<LambdaMonomial> for LambdaExpression {
    fn from_iter<I: IntoIterator<Item = LambdaMonomial>>(iter: I) -> Self {
        LambdaExpression::from_terms(iter)
    }
}

/// Right side of the relation for the inadmissible pair `λ_a λ_b`
/// (`b > 2a`), as index pairs.
pub fn adem_pair(a: u16, b: u16) -> Vec<(u16, u16)> {
    debug_assert!(b as u32 > 2 * a as u32);
    let m = (b - 2 * a - 1) as i64;
    (0..)
        .take_while(|&j| m - j - 1 >= j)
        .filter(|&j| binom_mod2_signed(m - j - 1, j))
        .map(|j| ((a as i64 + m - j) as u16, (2 * a as i64 + 1 + j) as u16))
        .collect()
}

/// Terms of `δ(λ_m)` as index pairs.
pub fn delta_generator(m: u16) -> Vec<(u16, u16)> {
    let m = m as i64;
    (1..)
        .take_while(|&j| m - j >= j)
        .filter(|&j| binom_mod2_signed(m - j, j))
        .map(|j| ((m - j) as u16, (j - 1) as u16))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Rewrite the leftmost inadmissible adjacent pair first.
    Leftmost,
    /// Rewrite the rightmost inadmissible adjacent pair first.
    Rightmost,
}

const REWRITE_LIMIT: usize = 50_000_000;

/// Admissible form by repeated rewriting of one inadmissible pair per step.
pub fn adem_reduce_with(e: &LambdaExpression, strategy: Strategy) -> Result<LambdaExpression> {
    let mut pending: BTreeSet<Vec<u16>> = BTreeSet::new();
    for t in e.terms() {
        toggle(&mut pending, t.0.clone());
    }
    let mut out = LambdaExpression::zero();
    let mut steps = 0;
    while let Some(w) = pending.pop_first() {
        steps += 1;
        if steps > REWRITE_LIMIT {
            return Err(Error::RewriteLimit(REWRITE_LIMIT));
        }
        let bad = |i: &usize| w[i + 1] as u32 > 2 * w[*i] as u32;
        let pos = match strategy {
            Strategy::Leftmost => (0..w.len().saturating_sub(1)).find(bad),
            Strategy::Rightmost => (0..w.len().saturating_sub(1)).rev().find(bad),
        };
        match pos {
            None => out.toggle(LambdaMonomial(w)),
            Some(i) => {
                for (p, q) in adem_pair(w[i], w[i + 1]) {
                    let mut v = w.clone();
                    v[i] = p;
                    v[i + 1] = q;
                    toggle(&mut pending, v);
                }
            }
        }
    }
    Ok(out)
}

fn toggle<T: Ord>(set: &mut BTreeSet<T>, x: T) {
    if !set.remove(&x) {
        set.insert(x);
    }
}

/// Admissible form, rewriting leftmost pairs first.
pub fn adem_reduce(e: &LambdaExpression) -> LambdaExpression {
    adem_reduce_with(e, Strategy::Leftmost).expect("rewriting terminates")
}

/// Admissible sequences of length `s` and degree `t` in lexicographic order.
pub fn lambda_basis(s: usize, t: u32) -> Vec<LambdaMonomial> {
    fn rec(s: usize, t: u32, max: u32, cur: &mut Vec<u16>, out: &mut Vec<LambdaMonomial>) {
        if s == 0 {
            if t == 0 {
                out.push(LambdaMonomial(cur.clone()));
            }
            return;
        }
        for a in 0..=t.min(max) {
            cur.push(a as u16);
            rec(s - 1, t - a, 2 * a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, t, u32::MAX, &mut Vec::new(), &mut out);
    out
}

/// `δ` by expanding every factor, then reducing.
pub fn differential_expanded(e: &LambdaExpression) -> LambdaExpression {
    let mut raw = LambdaExpression::zero();
    for t in e.terms() {
        for i in 0..t.len() {
            for (p, q) in delta_generator(t.0[i]) {
                let mut v = Vec::with_capacity(t.len() + 1);
                v.extend_from_slice(&t.0[..i]);
                v.push(p);
                v.push(q);
                v.extend_from_slice(&t.0[i + 1..]);
                raw.toggle(LambdaMonomial(v));
            }
        }
    }
    adem_reduce(&raw)
}

/// `δ`, reduced to admissible form.
pub fn differential(e: &LambdaExpression) -> LambdaExpression {
    let mut eng = Lambda::new();
    let mut acc = Vec::new();
    for t in adem_reduce(e).terms() {
        acc.extend(eng.delta(&t.0).iter().cloned());
    }
    to_expression(acc)
}

/// `λ_j ↦ λ_{2j+1}` on every factor.
pub fn lambda_sq0(e: &LambdaExpression) -> LambdaExpression {
    e.terms().map(|t| LambdaMonomial(t.0.iter().map(|&j| 2 * j + 1).collect())).collect()
}

type Word = Vec<u16>;
type Terms = Rc<[Word]>;

/// Cancels equal words in pairs; the result is sorted.
fn cancel_pairs(mut v: Vec<Word>) -> Vec<Word> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut it = v.into_iter().peekable();
    while let Some(w) = it.next() {
        if it.peek() == Some(&w) {
            it.next();
        } else {
            out.push(w);
        }
    }
    out
}

fn to_expression(words: Vec<Word>) -> LambdaExpression {
    LambdaExpression { terms: cancel_pairs(words).into_iter().map(LambdaMonomial).collect() }
}

/// Memoized reduction and differential on admissible words.
///
/// `left(a, w)` is the admissible form of `λ_a w` for admissible `w`; the
/// admissible form of any word is built by left multiplication from the
/// right end, which rewrites rightmost pairs first.
#[derive(Default)]
pub struct Lambda {
    left: HashMap<(u16, Word), Terms>,
    delta: HashMap<Word, Terms>,
}

impl Lambda {
    pub fn new() -> Self {
        Lambda::default()
    }

    /// Drops memoized results.
    pub fn clear(&mut self) {
        self.left.clear();
        self.delta.clear();
    }

    pub fn cache_len(&self) -> usize {
        self.left.len() + self.delta.len()
    }

    pub fn left(&mut self, a: u16, w: &[u16]) -> Terms {
        if w.is_empty() || w[0] as u32 <= 2 * a as u32 {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(a);
            v.extend_from_slice(w);
            return Rc::from(vec![v]);
        }
        let key = (a, w.to_vec());
        if let Some(r) = self.left.get(&key) {
            return r.clone();
        }
        let mut acc = Vec::new();
        for (p, q) in adem_pair(a, w[0]) {
            let inner = self.left(q, &w[1..]);
            for v in inner.iter() {
                acc.extend(self.left(p, v).iter().cloned());
            }
        }
        let r: Terms = Rc::from(cancel_pairs(acc));
        self.left.insert(key, r.clone());
        r
    }

    /// Admissible form of an arbitrary word.
    pub fn normal_form(&mut self, w: &[u16]) -> Vec<Word> {
        let Some((&last, init)) = w.split_last() else { return vec![Vec::new()] };
        let mut cur = vec![vec![last]];
        for &a in init.iter().rev() {
            let mut next = Vec::new();
            for v in &cur {
                next.extend(self.left(a, v).iter().cloned());
            }
            cur = cancel_pairs(next);
        }
        cur
    }

    /// `δ` of an admissible word, by the Leibniz rule on the first factor:
    /// `δ(λ_a w) = δ(λ_a) w + λ_a δ(w)`.
    pub fn delta(&mut self, w: &[u16]) -> Terms {
        if w.is_empty() {
            return Rc::from(Vec::new());
        }
        if let Some(r) = self.delta.get(w) {
            return r.clone();
        }
        let a = w[0];
        let rest = &w[1..];
        let mut acc = Vec::new();
        for (p, q) in delta_generator(a) {
            let inner = self.left(q, rest);
            for v in inner.iter() {
                acc.extend(self.left(p, v).iter().cloned());
            }
        }
        let drest = self.delta(rest);
        for v in drest.iter() {
            acc.extend(self.left(a, v).iter().cloned());
        }
        let r: Terms = Rc::from(cancel_pairs(acc));
        self.delta.insert(w.to_vec(), r.clone());
        r
    }

    /// Reduces an expression to admissible form.
    pub fn reduce(&mut self, e: &LambdaExpression) -> LambdaExpression {
        let mut acc = Vec::new();
        for t in e.terms() {
            acc.extend(self.normal_form(&t.0));
        }
        to_expression(acc)
    }
}

/// Matrix of `δ` from the span of `src`; row `i` is the image of basis
/// element `i` of `src`.
fn delta_rows(eng: &mut Lambda, src: &[LambdaMonomial], dst: &HashMap<Word, usize>, dst_len: usize) -> Gf2Matrix {
    let rows = src
        .iter()
        .map(|x| Gf2Vector::from_ones(dst_len, eng.delta(&x.0).iter().map(|w| dst[w])))
        .collect();
    Gf2Matrix::from_rows(dst_len, rows)
}

fn index_of(basis: &[LambdaMonomial]) -> HashMap<Word, usize> {
    basis.iter().enumerate().map(|(i, m)| (m.0.clone(), i)).collect()
}

/// `H^{s,t}(Λ)` with cycle and boundary subspaces in admissible coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub s: usize,
    pub t: u32,
    pub dim: usize,
    pub basis: Vec<LambdaMonomial>,
    pub cycles: EchelonBasis,
    pub boundaries: EchelonBasis,
    /// Rows are `δ` of the basis of `Λ^{s-1,t+1}`, in the coordinates of `basis`.
    boundary_map: Gf2Matrix,
    prev_basis: Vec<LambdaMonomial>,
}

impl CohomologyReport {
    pub fn coords(&self, z: &LambdaExpression) -> Result<Gf2Vector> {
        let idx = index_of(&self.basis);
        let mut v = Gf2Vector::zeros(self.basis.len());
        for t in adem_reduce(z).terms() {
            let i = idx.get(&t.0).ok_or(Error::DegreeMismatch { expected: self.t, found: t.degree() })?;
            v.flip(*i);
        }
        Ok(v)
    }

    pub fn expression(&self, v: &Gf2Vector) -> LambdaExpression {
        v.ones().map(|i| self.basis[i].clone()).collect()
    }

    /// Whether the cycle `z` bounds; when it does, returns `w` with `δ(w) = z`.
    pub fn is_boundary(&self, z: &LambdaExpression) -> Result<Option<LambdaExpression>> {
        let v = self.coords(z)?;
        if !gf2::contains(&self.cycles, &v) {
            return Err(Error::NotCycle);
        }
        Ok(gf2::solve_rows(&self.boundary_map, &v)
            .map(|c| c.ones().map(|i| self.prev_basis[i].clone()).collect()))
    }

    /// Dimension of the span of the classes of the cycles `zs` in `H^{s,t}`.
    pub fn class_rank(&self, zs: &[LambdaExpression]) -> Result<usize> {
        let mut rows: Vec<Gf2Vector> = self.boundaries.rows().to_vec();
        for z in zs {
            let v = self.coords(z)?;
            if !gf2::contains(&self.cycles, &v) {
                return Err(Error::NotCycle);
            }
            rows.push(v);
        }
        Ok(gf2::echelon_rows(self.basis.len(), rows, PivotRule::Leftmost).rank() - self.boundaries.rank())
    }
}

/// `H^{s,t}(Λ) ≅ Ext^{s,s+t}`, graded by length `s` and stem `t = Σ j_i`.
/// Since `δ` lowers the stem by one, this is
/// `dim ker(δ: Λ^{s,t} → Λ^{s+1,t-1}) - dim im(δ: Λ^{s-1,t+1} → Λ^{s,t})`.
pub fn cohomology(s: usize, t: u32) -> CohomologyReport {
    let mut eng = Lambda::new();
    cohomology_with(&mut eng, s, t)
}

pub fn cohomology_with(eng: &mut Lambda, s: usize, t: u32) -> CohomologyReport {
    let basis = lambda_basis(s, t);
    let next = if t >= 1 { lambda_basis(s + 1, t - 1) } else { Vec::new() };
    let prev_basis = if s >= 1 { lambda_basis(s - 1, t + 1) } else { Vec::new() };
    let idx = index_of(&basis);
    let d_out = delta_rows(eng, &basis, &index_of(&next), next.len());
    let cycles = gf2::nullspace(&d_out.transpose());
    let boundary_map = delta_rows(eng, &prev_basis, &idx, basis.len());
    let boundaries = gf2::echelon(&boundary_map, PivotRule::Leftmost);
    CohomologyReport {
        s,
        t,
        dim: cycles.rank() - boundaries.rank(),
        basis,
        cycles,
        boundaries,
        boundary_map,
        prev_basis,
    }
}

/// Whether `z` is a boundary, with a preimage when it is.
pub fn is_boundary(z: &LambdaExpression) -> Result<Option<LambdaExpression>> {
    let z = adem_reduce(z);
    let Some((s, t)) = z.bidegree() else { return Ok(Some(LambdaExpression::zero())) };
    if !differential(&z).is_zero() {
        return Err(Error::NotCycle);
    }
    cohomology(s, t).is_boundary(&z)
}

/// `ψ_k` on one divided monomial, unreduced to a sum of words, memoized on
/// the divided monomial.
fn psi_words(x: &[u32], memo: &mut HashMap<Vec<u32>, Rc<[Word]>>, eng: &mut Lambda) -> Rc<[Word]> {
    if let Some(r) = memo.get(x) {
        return r.clone();
    }
    let r: Rc<[Word]> = if x.len() == 1 {
        Rc::from(vec![vec![x[0] as u16]])
    } else {
        let (prefix, last) = x.split_at(x.len() - 1);
        let j = last[0];
        let deg: u32 = prefix.iter().sum();
        let pre = DividedElement::from_monomial(DividedMonomial(prefix.to_vec()));
        let mut acc = Vec::new();
        for h in j..=j + deg {
            for y in dual_sq(h - j, &pre).terms() {
                for w in psi_words(&y.0, memo, eng).iter() {
                    let mut v = w.clone();
                    v.push(h as u16);
                    acc.extend(eng.normal_form(&v));
                }
            }
        }
        Rc::from(cancel_pairs(acc))
    };
    memo.insert(x.to_vec(), r.clone());
    r
}

/// The chain-level transfer `ψ_k`:
/// `ψ_1(a^{(j)}) = λ_j` and
/// `ψ_k(y a_k^{(j)}) = Σ_{h ≥ j} ψ_{k-1}(Sq_*^{h-j} y) λ_h`, in admissible form.
pub fn psi(u: &DividedElement) -> LambdaExpression {
    let mut eng = Lambda::new();
    let mut memo = HashMap::new();
    let mut acc = Vec::new();
    for t in u.terms() {
        acc.extend(psi_words(&t.0, &mut memo, &mut eng).iter().cloned());
    }
    to_expression(acc)
}

/// Comparison of coinvariants, Ext, and the image of given generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub k: usize,
    pub n: u32,
    pub coinvariants: usize,
    pub ext: usize,
    pub rank: usize,
}

/// The generators are taken to span the coinvariants, so `rank` is the rank
/// of the transfer.
impl TransferReport {
    pub fn mono(&self) -> bool {
        self.rank == self.coinvariants
    }

    pub fn epi(&self) -> bool {
        self.rank == self.ext
    }

    pub fn verdict(&self) -> &'static str {
        match (self.mono(), self.epi()) {
            (true, true) => "iso",
            (true, false) => "mono",
            (false, true) => "epi",
            (false, false) => "neither",
        }
    }
}

impl fmt::Display for TransferReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coinv={} ext={} rank={} verdict={}", self.coinvariants, self.ext, self.rank, self.verdict())
    }
}

pub fn transfer_verdict(k: usize, n: u32, generators: &[DividedElement]) -> Result<TransferReport> {
    for g in generators {
        if let Some(d) = g.degree() {
            if d != n {
                return Err(Error::DegreeMismatch { expected: n, found: d });
            }
        }
        if let Some(gk) = g.k() {
            if gk != k {
                return Err(Error::ArityMismatch { expected: k, found: gk });
            }
        }
        if let Some(l) = first_nonvanishing_square(g) {
            return Err(Error::NotAnnihilated { l });
        }
    }
    let coinvariants = coinvariant_dim(k, n)?;
    let h = cohomology(k, n);
    let images: Vec<LambdaExpression> = generators.iter().map(psi).collect();
    let rank = h.class_rank(&images)?;
    Ok(TransferReport { k, n, coinvariants, ext: h.dim, rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> LambdaExpression {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let x = e("1,1,1,15 + 3,5,11");
        assert_eq!(x.to_string(), "1,1,1,15 + 3,5,11");
        assert_eq!(e("0"), LambdaExpression::zero());
    }

    #[test]
    fn basis_examples() {
        assert_eq!(lambda_basis(1, 9).len(), 1);
        let b = lambda_basis(2, 3);
        assert_eq!(b, vec![LambdaMonomial(vec![1, 2]), LambdaMonomial(vec![2, 1]), LambdaMonomial(vec![3, 0])]);
    }

    #[test]
    fn generators_of_the_form_two_power_minus_one_are_cycles() {
        for i in 0..8 {
            assert!(delta_generator((1 << i) - 1).is_empty());
        }
        assert!(delta_generator(0).is_empty());
        assert!(!delta_generator(2).is_empty());
    }

    #[test]
    fn sq0_examples() {
        assert_eq!(lambda_sq0(&e("0")), e("0"));
        assert_eq!(lambda_sq0(&LambdaExpression::word(&[0])), e("1"));
        assert_eq!(lambda_sq0(&e("1,1,1,15")), e("3,3,3,31"));
    }

    #[test]
    fn single_pair_matches_relation() {
        for a in 0..6u16 {
            for m in 0..12u16 {
                let b = 2 * a + 1 + m;
                let lhs = adem_reduce(&LambdaExpression::word(&[a, b]));
                let rhs: LambdaExpression =
                    adem_pair(a, b).into_iter().map(|(p, q)| LambdaMonomial(vec![p, q])).collect();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
