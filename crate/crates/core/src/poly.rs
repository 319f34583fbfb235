//! Monomials and polynomials of P_k = GF(2)[t_1..t_k] with the Steenrod
//! action, weight vectors, spikes and the Kameko halving map.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `t_1^{a_1} ... t_k^{a_k}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(k: usize) -> Self {
        Monomial(vec![0; k])
    }

    /// `t_i` with `i` counted from 1.
    pub fn var(k: usize, i: usize) -> Self {
        let mut e = vec![0; k];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.k(), other.k(), "variable count mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn square(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| 2 * a).collect())
    }

    /// Whether every exponent is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&a| a > 0)
    }

    /// Bit mask of variables with positive exponent (bit `i` for `t_{i+1}`).
    pub fn support(&self) -> u32 {
        self.0.iter().enumerate().filter(|(_, &a)| a > 0).fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let e = s
            .split(' ')
            .map(|w| w.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {w:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial(e))
    }
}

/// Sum of distinct monomials; adding a monomial twice cancels it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.terms.insert(m);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Polynomial::zero();
        for m in terms {
            p.toggle(m);
        }
        p
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
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

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// The degree of the terms, if non-zero and homogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                p.toggle(a.mul(b));
            }
        }
        p
    }

    /// The largest term under [`compare_monomials`].
    pub fn max_term(&self) -> Option<&Monomial> {
        self.terms.iter().max_by(|a, b| compare_monomials(a, b))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.terms).finish()
    }
}

impl FromIterator<Monomial> for Polynomial {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        Polynomial::from_terms(iter)
    }
}

/// `(ω_1, ω_2, ...)` with trailing zeros removed. The derived order is the
/// left-lexicographic order on zero-padded sequences.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        WeightVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().enumerate().map(|(j, w)| w << j).sum()
    }

    /// All weight vectors of degree `n` with entries at most `k`.
    pub fn all_of_degree(n: u32, k: u32) -> Vec<WeightVector> {
        fn rec(rem: u32, j: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<WeightVector>) {
            if rem == 0 {
                out.push(WeightVector::new(cur.clone()));
                return;
            }
            let unit = 1u32 << j;
            if unit > rem {
                return;
            }
            for w in 0..=k.min(rem / unit) {
                if (rem - w * unit) % (unit << 1) != 0 {
                    continue;
                }
                cur.push(w);
                rec(rem - w * unit, j + 1, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, 0, k, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for WeightVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.is_empty() {
            return Ok(WeightVector::default());
        }
        let e = t
            .split(',')
            .map(|w| w.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad weight vector {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightVector::new(e))
    }
}

/// `ω_j(x)` counts the exponents with binary digit `j - 1` set.
pub fn weight_vector(x: &Monomial) -> WeightVector {
    let top = x.0.iter().map(|&a| 32 - a.leading_zeros()).max().unwrap_or(0);
    WeightVector::new((0..top).map(|j| x.0.iter().filter(|&&a| a >> j & 1 == 1).count() as u32).collect())
}

/// Weight vector first, then the exponent tuple, both left-lexicographic.
///
/// Panics if the degrees differ.
pub fn compare_monomials(x: &Monomial, y: &Monomial) -> Ordering {
    assert_eq!(x.degree(), y.degree(), "comparing monomials of different degree");
    weight_vector(x).cmp(&weight_vector(y)).then_with(|| x.0.cmp(&y.0))
}

/// `C(n, r) mod 2` by Lucas' theorem.
pub fn binom_mod2(n: u32, r: u32) -> bool {
    r & !n == 0
}

/// Like [`binom_mod2`] but zero when the upper entry is negative.
pub fn binom_mod2_signed(n: i64, r: i64) -> bool {
    n >= 0 && r >= 0 && binom_mod2(n as u32, r as u32)
}

/// `Sq^i` of a single monomial via the Cartan formula.
pub fn sq_monomial(i: u32, x: &Monomial) -> Polynomial {
    let mut out = Polynomial::zero();
    let mut cur = x.0.clone();
    fn rec(pos: usize, rem: u32, x: &[u32], cur: &mut Vec<u32>, out: &mut Polynomial) {
        if pos == x.len() {
            if rem == 0 {
                out.toggle(Monomial(cur.clone()));
            }
            return;
        }
        let a = x[pos];
        let rest: u32 = x[pos + 1..].iter().sum();
        // Sq^s(t^a) = C(a, s) t^{a+s}; s must be a binary sub-pattern of a.
        let mut s = a;
        loop {
            if s <= rem && rem - s <= rest {
                cur[pos] = a + s;
                rec(pos + 1, rem - s, x, cur, out);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & a;
        }
        cur[pos] = a;
    }
    rec(0, i, &x.0, &mut cur, &mut out);
    out
}

/// `Sq^i(f)`.
pub fn sq(i: u32, f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for m in f.terms() {
        out.add_assign(&sq_monomial(i, m));
    }
    out
}

/// Milnor primitive `Q_n`, from `Q_0 = Sq^1` and
/// `Q_n = Sq^{2^n} Q_{n-1} + Q_{n-1} Sq^{2^n}`.
pub fn milnor_q(n: u32, f: &Polynomial) -> Polynomial {
    if n == 0 {
        return sq(1, f);
    }
    let p = 1u32 << n;
    let a = sq(p, &milnor_q(n - 1, f));
    let b = milnor_q(n - 1, &sq(p, f));
    a.add(&b)
}

/// An algebra homomorphism `P_k -> P_{k'}` given by the images of the
/// variables, each a sum of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    target_k: usize,
    images: Vec<Polynomial>,
}

impl Substitution {
    /// `images[i]` is the image of `t_{i+1}`; each must be a sum of variables
    /// of `P_{target_k}`.
    pub fn new(target_k: usize, images: Vec<Polynomial>) -> Result<Self> {
        for p in &images {
            for m in p.terms() {
                if m.k() != target_k {
                    return Err(Error::ArityMismatch { expected: target_k, found: m.k() });
                }
                if m.degree() != 1 {
                    return Err(Error::DegreeMismatch { expected: 1, found: m.degree() });
                }
            }
        }
        Ok(Substitution { target_k, images })
    }

    /// From lists of variable indices (1-based): `t_i -> Σ t_j, j in vars[i]`.
    pub fn from_indices(target_k: usize, vars: &[Vec<usize>]) -> Result<Self> {
        let images = vars
            .iter()
            .map(|js| Polynomial::from_terms(js.iter().map(|&j| Monomial::var(target_k, j))))
            .collect();
        Substitution::new(target_k, images)
    }

    pub fn identity(k: usize) -> Self {
        Self::from_indices(k, &(1..=k).map(|i| vec![i]).collect::<Vec<_>>()).expect("valid")
    }

    /// The generator `σ_d` of GL_k: for `d < k` swap `t_d` and `t_{d+1}`;
    /// `σ_k` sends `t_1` to `t_1 + t_2`.
    pub fn sigma(k: usize, d: usize) -> Result<Self> {
        if d == 0 || d > k {
            return Err(Error::GeneratorRange { d, k });
        }
        let mut vars: Vec<Vec<usize>> = (1..=k).map(|i| vec![i]).collect();
        if d < k {
            vars.swap(d - 1, d);
        } else if k >= 2 {
            vars[0] = vec![1, 2];
        }
        Self::from_indices(k, &vars)
    }

    pub fn source_k(&self) -> usize {
        self.images.len()
    }

    pub fn target_k(&self) -> usize {
        self.target_k
    }

    /// `L^a` for a sum of variables `L`, using `L^{2^b} = Σ t^{2^b}`.
    fn power(&self, l: &Polynomial, a: u32) -> Polynomial {
        let mut out = Polynomial::from_monomial(Monomial::one(self.target_k));
        for b in 0..32 {
            if a >> b & 1 == 1 {
                let frob = Polynomial::from_terms(l.terms().map(|m| Monomial(m.0.iter().map(|e| e << b).collect())));
                out = out.mul(&frob);
            }
        }
        out
    }

    pub fn apply_monomial(&self, x: &Monomial) -> Polynomial {
        assert_eq!(x.k(), self.source_k(), "variable count mismatch");
        let mut out = Polynomial::from_monomial(Monomial::one(self.target_k));
        for (l, &a) in self.images.iter().zip(&x.0) {
            if a > 0 {
                out = out.mul(&self.power(l, a));
            }
        }
        out
    }
}

pub fn apply_substitution(s: &Substitution, f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for m in f.terms() {
        out.add_assign(&s.apply_monomial(m));
    }
    out
}

/// `φ(x) = y` when `x = (t_1...t_k) y^2`, and `None` (zero) otherwise.
pub fn phi(x: &Monomial) -> Option<Monomial> {
    x.0.iter().all(|a| a & 1 == 1).then(|| Monomial(x.0.iter().map(|a| (a - 1) / 2).collect()))
}

/// Linear extension of [`phi`].
pub fn phi_poly(f: &Polynomial) -> Polynomial {
    f.terms().filter_map(phi).collect()
}

/// `μ(n) = min{h : α(n + h) ≤ h}` where `α` counts binary ones.
pub fn mu(n: u32) -> u32 {
    (0..).find(|&h| (n + h).count_ones() <= h).expect("h = n + 1 always works")
}

/// Exponents `2^{d_1} - 1 ≥ ... ≥ 2^{d_r} - 1` (`r = μ(n)`, all `d_j > 0`)
/// of the minimal spike of degree `n`, largest first.
pub fn spike_exponents(n: u32) -> Vec<u32> {
    if n == 0 {
        return Vec::new();
    }
    let r = mu(n) as usize;
    // Split n + r into r powers of two, halving the smallest piece while
    // there are too few; this keeps the largest pieces as large as possible.
    let m = n + r as u32;
    let mut pieces: Vec<u32> = (0..32).rev().filter(|b| m >> b & 1 == 1).map(|b| 1 << b).collect();
    while pieces.len() < r {
        let last = pieces.pop().expect("non-empty");
        pieces.push(last / 2);
        pieces.push(last / 2);
    }
    pieces.into_iter().map(|p| p - 1).collect()
}

/// The minimal spike of degree `n` in `k` variables.
pub fn minimal_spike(k: usize, n: u32) -> Result<Monomial> {
    let e = spike_exponents(n);
    if e.len() > k {
        return Err(Error::NoSpike { k, n, mu: mu(n) });
    }
    let mut v = vec![0; k];
    v[..e.len()].copy_from_slice(&e);
    Ok(Monomial(v))
}

/// Whether every exponent has the form `2^d - 1`.
pub fn is_spike(x: &Monomial) -> bool {
    x.0.iter().all(|&a| (a + 1).is_power_of_two())
}

/// All monomials of degree `n` in `k` variables, ascending under
/// [`compare_monomials`].
pub fn monomials_of_degree(k: usize, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    compositions(k, n, 0, &mut out);
    sort_monomials(&mut out);
    out
}

/// Monomials of degree `n` in `k` variables with every exponent positive,
/// ascending.
pub fn positive_monomials(k: usize, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    compositions(k, n, 1, &mut out);
    sort_monomials(&mut out);
    out
}

fn compositions(k: usize, n: u32, min: u32, out: &mut Vec<Monomial>) {
    fn rec(pos: usize, rem: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let k = cur.len();
        if pos + 1 == k {
            if rem >= min {
                cur[pos] = rem;
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let left = (k - pos - 1) as u32 * min;
        if rem < left + min {
            return;
        }
        for a in min..=rem - left {
            cur[pos] = a;
            rec(pos + 1, rem - a, min, cur, out);
        }
    }
    if k == 0 {
        if n == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    rec(0, n, min, &mut vec![0; k], out);
}

/// Sorts by weight vector then exponents (computing each weight once).
pub fn sort_monomials(v: &mut Vec<Monomial>) {
    let mut keyed: Vec<(WeightVector, Monomial)> = v.drain(..).map(|m| (weight_vector(&m), m)).collect();
    keyed.sort();
    v.extend(keyed.into_iter().map(|(_, m)| m));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_vector(&m(&[15, 1, 1, 0, 0, 0])).entries(), &[3, 1, 1, 1]);
        assert_eq!(weight_vector(&m(&[1, 1, 1, 2, 4, 8])).entries(), &[3, 1, 1, 1]);
        assert!(weight_vector(&m(&[0, 0])).entries().is_empty());
    }

    #[test]
    fn order_examples() {
        let a = m(&[15, 1, 1, 0, 0, 0]);
        let b = m(&[1, 1, 1, 2, 4, 8]);
        assert_eq!(compare_monomials(&b, &a), Ordering::Less);
        assert_eq!(compare_monomials(&a, &a), Ordering::Equal);
        assert!(WeightVector::new(vec![3, 1, 3]) < WeightVector::new(vec![3, 3, 2]));
    }

    #[test]
    fn binomials() {
        assert!(binom_mod2(5, 0));
        assert!(!binom_mod2(2, 1));
        for r in 0..=31 {
            assert!(binom_mod2(31, r));
        }
        assert!(!binom_mod2(3, 4));
    }

    #[test]
    fn sq_examples() {
        let f = Polynomial::from_monomial(m(&[1, 1]));
        assert_eq!(sq(1, &f), Polynomial::from_terms([m(&[2, 1]), m(&[1, 2])]));
        assert!(sq(1, &Polynomial::from_monomial(m(&[2]))).is_zero());
    }

    #[test]
    fn milnor_on_a_variable() {
        let t = Polynomial::from_monomial(m(&[1]));
        assert_eq!(milnor_q(0, &t), Polynomial::from_monomial(m(&[2])));
        assert_eq!(milnor_q(1, &t), Polynomial::from_monomial(m(&[4])));
    }

    #[test]
    fn substitution_examples() {
        let f = Polynomial::from_monomial(m(&[1, 3]));
        assert_eq!(apply_substitution(&Substitution::identity(2), &f), f);
        let s = Substitution::sigma(2, 1).unwrap();
        assert_eq!(apply_substitution(&s, &f), Polynomial::from_monomial(m(&[3, 1])));
        let t = Substitution::sigma(2, 2).unwrap();
        // (t1 + t2) t2^3
        assert_eq!(apply_substitution(&t, &f), Polynomial::from_terms([m(&[1, 3]), m(&[0, 4])]));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&m(&[1, 1, 1, 1])), Some(m(&[0, 0, 0, 0])));
        assert_eq!(phi(&m(&[3, 2, 1, 1])), None);
    }

    #[test]
    fn mu_and_spikes() {
        for d in 1..10 {
            assert_eq!(mu((1 << d) - 1), 1);
        }
        assert_eq!(mu(17), 3);
        assert_eq!(minimal_spike(6, 17).unwrap(), m(&[15, 1, 1, 0, 0, 0]));
        assert_eq!(minimal_spike(4, 31).unwrap(), m(&[31, 0, 0, 0]));
        assert_eq!(spike_exponents(78), vec![63, 15]);
        assert_eq!(spike_exponents(40), vec![31, 7, 1, 1]);
        assert!(minimal_spike(2, 17).is_err());
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let v = monomials_of_degree(3, 5);
        assert_eq!(v.len(), 21);
        for w in v.windows(2) {
            assert_eq!(compare_monomials(&w[0], &w[1]), Ordering::Less);
        }
        assert_eq!(positive_monomials(3, 5).len(), 6);
    }

    #[test]
    fn weight_vectors_of_degree() {
        let all = WeightVector::all_of_degree(17, 6);
        assert!(all.contains(&WeightVector::new(vec![3, 1, 1, 1])));
        assert!(all.iter().all(|w| w.degree() == 17 && w.entries().iter().all(|&e| e <= 6)));
    }
}
