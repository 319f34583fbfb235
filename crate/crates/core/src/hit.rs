//! The hit subspace, admissible monomials and the quotient QP_k.
//!
//! Two routes compute the same quotient. [`hit_space`] echelonizes the full
//! span of generator-square images on a [`DegreeContext`]. [`QpBasis`] splits
//! P_k by variable support into copies of the positive part of P_j (each an
//! A-submodule), drops monomials whose weight vector lies below that of the
//! minimal spike (they are all hit), and reduces each positive part once.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf2::{self, EchelonBasis, Gf2Matrix, Gf2Vector, PivotRule};
use crate::poly::{
    compare_monomials, minimal_spike, monomials_of_degree, mu, phi, positive_monomials, sq_monomial,
    weight_vector, Monomial, Polynomial, WeightVector,
};

/// All monomials of a fixed degree in a fixed order, with their positions.
#[derive(Clone, Debug)]
pub struct DegreeContext {
    k: usize,
    n: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeContext {
    pub fn new(k: usize, n: u32) -> Self {
        let monomials = monomials_of_degree(k, n);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeContext { k, n, monomials, index }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn vector_of(&self, f: &Polynomial) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.len());
        for m in f.terms() {
            v.flip(self.index[m]);
        }
        v
    }

    pub fn polynomial_of(&self, v: &Gf2Vector) -> Polynomial {
        v.ones().map(|i| self.monomials[i].clone()).collect()
    }
}

/// Exponents 2^j with 2^j ≤ n.
fn square_degrees(n: u32) -> impl Iterator<Item = u32> {
    (0..32).map(|j| 1u32 << j).take_while(move |&p| p <= n)
}

/// The hit subspace at `ctx`, spanned by `Sq^{2^j}(m)` over monomials `m`
/// of degree `n - 2^j`, in rightmost-pivot reduced echelon form.
pub fn hit_space(ctx: &DegreeContext) -> EchelonBasis {
    let mut rows = Vec::new();
    for p in square_degrees(ctx.n) {
        for m in monomials_of_degree(ctx.k, ctx.n - p) {
            rows.push(ctx.vector_of(&sq_monomial(p, &m)));
        }
    }
    gf2::echelon_rows(ctx.len(), rows, PivotRule::Rightmost)
}

/// Admissible monomials read off a rightmost-pivot hit space.
pub fn admissibles_from_hit(ctx: &DegreeContext, hit: &EchelonBasis) -> Vec<Monomial> {
    hit.non_pivots().into_iter().map(|c| ctx.monomial(c).clone()).collect()
}

/// The reduced positive part of P_j in one degree.
#[derive(Debug)]
struct PositiveBlock {
    /// Monomials whose weight is not below the minimal spike weight.
    columns: Vec<Monomial>,
    col_index: HashMap<Monomial, u32>,
    /// Column index of each admissible.
    admissible: Vec<u32>,
    /// Normal form of every kept column over the admissibles, `nf_words`
    /// words per column.
    normal_forms: Vec<u64>,
    nf_words: usize,
}

impl PositiveBlock {
    fn empty() -> Self {
        PositiveBlock {
            columns: Vec::new(),
            col_index: HashMap::new(),
            admissible: Vec::new(),
            normal_forms: Vec::new(),
            nf_words: 0,
        }
    }

    fn nf(&self, col: u32) -> &[u64] {
        let s = col as usize * self.nf_words;
        &self.normal_forms[s..s + self.nf_words]
    }

    /// Builds the block; when `with_forms` is false only the admissibles
    /// are kept.
    fn build(j: usize, n: u32, with_forms: bool) -> Self {
        if j == 0 || (n as usize) < j || mu(n) as usize > j {
            return PositiveBlock::empty();
        }
        let w_min = weight_vector(&minimal_spike(j, n).expect("mu(n) <= j"));
        let columns: Vec<Monomial> =
            positive_monomials(j, n).into_iter().filter(|m| weight_vector(m) >= w_min).collect();
        let col_index: HashMap<Monomial, u32> =
            columns.iter().cloned().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let ncols = columns.len();

        // Generator rows as sorted column lists. Every term of Sq^i(m), i > 0,
        // has weight strictly below that of m, so generators of weight at
        // most w_min contribute nothing.
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for p in square_degrees(n) {
            if n - p < j as u32 {
                break;
            }
            for m in positive_monomials(j, n - p) {
                if weight_vector(&m) <= w_min {
                    continue;
                }
                let mut r: Vec<u32> = sq_monomial(p, &m).terms().filter_map(|t| col_index.get(t).copied()).collect();
                if !r.is_empty() {
                    r.sort_unstable();
                    rows.push(r);
                }
            }
        }
        rows.sort_by_key(|r| *r.last().expect("non-empty"));

        let pivots = eliminate(ncols, &rows);
        drop(rows);
        let mut admissible = Vec::new();
        let mut local = vec![u32::MAX; ncols];
        for (c, p) in pivots.iter().enumerate() {
            if p.is_none() {
                local[c] = admissible.len() as u32;
                admissible.push(c as u32);
            }
        }
        let (normal_forms, nf_words) = if with_forms {
            let nw = admissible.len().div_ceil(64).max(1);
            let mut nf = vec![0u64; ncols * nw];
            for c in 0..ncols {
                match &pivots[c] {
                    None => {
                        let a = local[c] as usize;
                        nf[c * nw + a / 64] |= 1 << (a % 64);
                    }
                    Some(row) => {
                        // x ≡ (row - x): all other terms are smaller columns.
                        let (done, cur) = nf.split_at_mut(c * nw);
                        let cur = &mut cur[..nw];
                        for y in row.iter().map(|&y| y as usize).filter(|&y| y < c) {
                            for (d, s) in cur.iter_mut().zip(&done[y * nw..(y + 1) * nw]) {
                                *d ^= s;
                            }
                        }
                    }
                }
            }
            (nf, nw)
        } else {
            (Vec::new(), 0)
        };
        PositiveBlock { columns, col_index, admissible, normal_forms, nf_words }
    }
}

/// Forward elimination with rightmost pivots. Rows must be sorted by their
/// highest column. Returns, per column, the pivot row (sorted column list
/// ending at the pivot) if the column is a pivot. Pivot rows of Steenrod
/// generators stay very sparse, so they are stored as column lists.
fn eliminate(ncols: usize, rows: &[Vec<u32>]) -> Vec<Option<Box<[u32]>>> {
    let nw = ncols.div_ceil(64);
    let mut pivots: Vec<Option<Box<[u32]>>> = vec![None; ncols];
    let mut work = vec![0u64; nw];
    for r in rows {
        for &c in r {
            work[c as usize / 64] ^= 1 << (c % 64);
        }
        let mut top = *r.last().expect("non-empty") as usize / 64;
        loop {
            while work[top] == 0 && top > 0 {
                top -= 1;
            }
            if work[top] == 0 {
                break;
            }
            let lead = top * 64 + 63 - work[top].leading_zeros() as usize;
            match &pivots[lead] {
                Some(p) => {
                    for &c in p.iter() {
                        work[c as usize / 64] ^= 1 << (c % 64);
                    }
                }
                None => {
                    let mut cols = Vec::new();
                    for (wi, w) in work[..=top].iter_mut().enumerate() {
                        while *w != 0 {
                            cols.push((wi * 64) as u32 + w.trailing_zeros());
                            *w &= *w - 1;
                        }
                    }
                    pivots[lead] = Some(cols.into_boxed_slice());
                    break;
                }
            }
        }
    }
    pivots
}

type BlockKey = (usize, u32);

fn block_cache() -> &'static Mutex<HashMap<BlockKey, Arc<PositiveBlock>>> {
    static CACHE: OnceLock<Mutex<HashMap<BlockKey, Arc<PositiveBlock>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn positive_block(j: usize, n: u32) -> Arc<PositiveBlock> {
    if let Some(b) = block_cache().lock().expect("cache lock").get(&(j, n)) {
        return b.clone();
    }
    let b = Arc::new(PositiveBlock::build(j, n, true));
    block_cache().lock().expect("cache lock").entry((j, n)).or_insert(b).clone()
}

/// Drops every cached positive part (frees memory after large runs).
pub fn clear_block_cache() {
    block_cache().lock().expect("cache lock").clear();
}

/// Number of admissibles in the positive part of (QP_j)_n, without keeping
/// any reduction data.
pub fn positive_dim(j: usize, n: u32) -> usize {
    PositiveBlock::build(j, n, false).admissible.len()
}

/// `dim (QP_k)_n` from the positive parts alone: `Σ_j C(k, j) dim (QP_j)^{>0}_n`.
pub fn qp_dim_by_support(k: usize, n: u32) -> usize {
    if n == 0 {
        return 1;
    }
    (1..=k).map(|j| binomial(k, j) * positive_dim(j, n)).sum()
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn number_of_monomials(k: usize, n: u32) -> usize {
    binomial(n as usize + k - 1, k - 1)
}

/// A basis of admissible monomials for `(QP_k)_n` together with the data
/// needed to reduce any polynomial of degree `n` modulo the hit subspace.
#[derive(Clone, Debug)]
pub struct QpBasis {
    k: usize,
    n: u32,
    admissibles: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    blocks: Vec<Arc<PositiveBlock>>,
    /// For each support mask, the global index of each block admissible.
    embed: HashMap<u32, Vec<u32>>,
}

impl QpBasis {
    pub fn new(k: usize, n: u32) -> Self {
        let blocks: Vec<Arc<PositiveBlock>> =
            (0..=k).map(|j| if j == 0 { Arc::new(PositiveBlock::empty()) } else { positive_block(j, n) }).collect();
        let mut admissibles = Vec::new();
        let mut pending: Vec<(u32, Vec<Monomial>)> = Vec::new();
        if n == 0 {
            admissibles.push(Monomial::one(k));
        } else {
            for mask in 1u32..(1 << k) {
                let j = mask.count_ones() as usize;
                let b = &blocks[j];
                if b.admissible.is_empty() {
                    continue;
                }
                let vars: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
                let emb: Vec<Monomial> = b
                    .admissible
                    .iter()
                    .map(|&c| {
                        let mut e = vec![0; k];
                        for (v, &a) in vars.iter().zip(&b.columns[c as usize].0) {
                            e[*v] = a;
                        }
                        Monomial(e)
                    })
                    .collect();
                admissibles.extend(emb.iter().cloned());
                pending.push((mask, emb));
            }
        }
        admissibles.sort_by(compare_monomials);
        let index: HashMap<Monomial, usize> =
            admissibles.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let embed = pending
            .into_iter()
            .map(|(mask, emb)| (mask, emb.iter().map(|m| index[m] as u32).collect()))
            .collect();
        QpBasis { k, n, admissibles, index, blocks, embed }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.admissibles.len()
    }

    pub fn admissibles(&self) -> &[Monomial] {
        &self.admissibles
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Rank of the hit subspace in `(P_k)_n`.
    pub fn hit_rank(&self) -> usize {
        number_of_monomials(self.k, self.n) - self.dim()
    }

    /// Coordinates of `[x]` over the admissibles.
    pub fn reduce_monomial(&self, x: &Monomial) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.dim());
        self.reduce_into(x, &mut out);
        out
    }

    fn reduce_into(&self, x: &Monomial, out: &mut Gf2Vector) {
        assert_eq!(x.k(), self.k, "variable count mismatch");
        assert_eq!(x.degree(), self.n, "degree mismatch");
        if self.n == 0 {
            out.flip(0);
            return;
        }
        let mask = x.support();
        let j = mask.count_ones() as usize;
        let b = &self.blocks[j];
        let local = Monomial(x.0.iter().copied().filter(|&a| a > 0).collect());
        let Some(&col) = b.col_index.get(&local) else { return };
        let Some(emb) = self.embed.get(&mask) else { return };
        for (wi, &w) in b.nf(col).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let a = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                out.flip(emb[a] as usize);
            }
        }
    }

    /// Coordinates of `[f]` over the admissibles.
    pub fn reduce(&self, f: &Polynomial) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.dim());
        for m in f.terms() {
            self.reduce_into(m, &mut out);
        }
        out
    }

    pub fn is_hit(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// The sum of admissibles selected by `v`.
    pub fn lift(&self, v: &Gf2Vector) -> Polynomial {
        v.ones().map(|i| self.admissibles[i].clone()).collect()
    }
}

/// A class of `(QP_k)_n` in admissible coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpClass {
    pub coords: Gf2Vector,
}

/// `dim QP_k(ω)` with representatives: admissibles of weight exactly `ω`.
pub fn weight_space_dim(b: &QpBasis, w: &WeightVector) -> Result<(usize, Vec<Monomial>)> {
    if w.degree() != b.n {
        return Err(Error::DegreeMismatch { expected: b.n, found: w.degree() });
    }
    let reps: Vec<Monomial> = b.admissibles.iter().filter(|m| &weight_vector(m) == w).cloned().collect();
    Ok((reps.len(), reps))
}

/// `dim P(ω) - dim((H ∩ P(ω)) + P⁻(ω))` by explicit subspace operations,
/// where `P(ω)` (resp. `P⁻(ω)`) is spanned by monomials of weight at most
/// (resp. below) `ω` and `hit` is the hit space at `ctx`.
pub fn weight_space_dim_direct(
    ctx: &DegreeContext,
    hit: &EchelonBasis,
    w: &WeightVector,
) -> Result<(usize, Vec<Monomial>)> {
    if w.degree() != ctx.n {
        return Err(Error::DegreeMismatch { expected: ctx.n, found: w.degree() });
    }
    let n = ctx.len();
    let weights: Vec<WeightVector> = ctx.monomials.iter().map(weight_vector).collect();
    let coord = |pred: &dyn Fn(&WeightVector) -> bool| {
        gf2::echelon_rows(
            n,
            (0..n).filter(|&i| pred(&weights[i])).map(|i| Gf2Vector::unit(n, i)),
            PivotRule::Rightmost,
        )
    };
    let p_w = coord(&|x| x <= w);
    let p_minus = coord(&|x| x < w);
    let denom = gf2::subspace_sum(&gf2::subspace_intersection(hit, &p_w), &p_minus);
    let mut is_pivot = vec![false; n];
    for &p in denom.pivots() {
        is_pivot[p] = true;
    }
    let reps: Vec<Monomial> =
        (0..n).filter(|&i| &weights[i] == w && !is_pivot[i]).map(|i| ctx.monomials[i].clone()).collect();
    Ok((p_w.rank() - denom.rank(), reps))
}

/// Whether the weight spaces over all weight vectors of degree `n` (entries
/// at most `k`) add up to the whole quotient.
pub fn weight_decomposition_check(b: &QpBasis) -> bool {
    let total: usize = WeightVector::all_of_degree(b.n, b.k as u32)
        .iter()
        .map(|w| weight_space_dim(b, w).expect("degree matches").0)
        .sum();
    total == b.dim()
}

/// `dim (QP_j)^{>0}(ω)`: admissibles with every exponent positive and weight `ω`.
pub fn positive_weight_dim(j: usize, w: &WeightVector) -> usize {
    let b = positive_block(j, w.degree());
    b.admissible.iter().filter(|&&c| &weight_vector(&b.columns[c as usize]) == w).count()
}

/// `Σ_{μ(n) ≤ j ≤ k-1} C(k, j) dim (QP_j)^{>0}(ω)` with the lower dimensions
/// supplied by the caller.
pub fn zero_part_dim_formula(k: usize, w: &WeightVector, lower_dims: &BTreeMap<usize, usize>) -> Result<usize> {
    let lo = mu(w.degree()) as usize;
    let mut total = 0;
    for j in lo..k {
        let d = lower_dims.get(&j).ok_or(Error::MissingDimension { j })?;
        total += binomial(k, j) * d;
    }
    Ok(total)
}

/// Indices of admissibles with some zero exponent, and of the rest.
pub fn split_zero_positive(b: &QpBasis) -> (Vec<usize>, Vec<usize>) {
    (0..b.dim()).partition(|&i| !b.admissibles[i].is_positive())
}

/// Sound hit test: `x` is hit when its weight lies below the minimal spike's.
pub fn spike_filter_hit(k: usize, x: &Monomial) -> Result<bool> {
    let z = minimal_spike(k, x.degree())?;
    Ok(weight_vector(x) < weight_vector(&z))
}

/// Target degree of the Kameko map out of degree `n`.
pub fn kameko_target(k: usize, n: u32) -> Result<u32> {
    if (n as usize) < k || (n as usize - k) % 2 != 0 {
        return Err(Error::Parity { k, n });
    }
    Ok((n - k as u32) / 2)
}

/// Matrix of the Kameko map; column `j` holds the image of admissible `j`
/// of `src` in the admissible coordinates of `dst`.
pub fn kameko(src: &QpBasis, dst: &QpBasis) -> Result<Gf2Matrix> {
    let m = kameko_target(src.k, src.n)?;
    if dst.k != src.k || dst.n != m {
        return Err(Error::DegreeMismatch { expected: m, found: dst.n });
    }
    let cols: Vec<Gf2Vector> = src
        .admissibles
        .iter()
        .map(|x| match phi(x) {
            Some(y) => dst.reduce_monomial(&y),
            None => Gf2Vector::zeros(dst.dim()),
        })
        .collect();
    Ok(Gf2Matrix::from_rows(dst.dim(), cols).transpose())
}

pub fn kameko_kernel(src: &QpBasis, dst: &QpBasis) -> Result<EchelonBasis> {
    Ok(gf2::nullspace(&kameko(src, dst)?))
}
