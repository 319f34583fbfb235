//! The divided power algebra dual to P_k, dual squares, and the subspace
//! D_k of elements annihilated by all positive Steenrod operations.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{self, EchelonBasis, Gf2Matrix, Gf2Vector, PivotRule};
use crate::hit::DegreeContext;
use crate::poly::{binom_mod2, positive_monomials, sq_monomial, Monomial, Polynomial, Substitution};

/// `a_1^{(i_1)} ... a_k^{(i_k)}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DividedMonomial(pub Vec<u32>);

impl DividedMonomial {
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The monomial with the same exponents (its dual basis partner).
    pub fn partner(&self) -> Monomial {
        Monomial(self.0.clone())
    }
}

impl fmt::Debug for DividedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partner())
    }
}

/// A sum of distinct divided monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DividedElement {
    terms: BTreeSet<DividedMonomial>,
}

impl DividedElement {
    pub fn zero() -> Self {
        DividedElement::default()
    }

    pub fn from_monomial(m: DividedMonomial) -> Self {
        let mut e = DividedElement::zero();
        e.terms.insert(m);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = DividedMonomial>) -> Self {
        let mut e = DividedElement::zero();
        for t in terms {
            e.toggle(t);
        }
        e
    }

    pub fn toggle(&mut self, m: DividedMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &DividedElement) {
        for t in &other.terms {
            self.toggle(t.clone());
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

    pub fn terms(&self) -> impl Iterator<Item = &DividedMonomial> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.iter().map(DividedMonomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn k(&self) -> Option<usize> {
        self.terms.iter().next().map(DividedMonomial::k)
    }
}

impl fmt::Debug for DividedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.terms).finish()
    }
}

impl FromIterator<DividedMonomial> for DividedElement {
    fn from_iter<I: IntoIterator<Item = DividedMonomial>>(iter: I) -> Self {
        DividedElement::from_terms(iter)
    }
}

/// `⟨u, f⟩`: the number of exponent tuples shared by `u` and `f`, mod 2.
pub fn pair(u: &DividedElement, f: &Polynomial) -> Result<bool> {
    if let (Some(a), Some(b)) = (u.degree(), f.degree()) {
        if a != b {
            return Err(Error::DegreeMismatch { expected: a, found: b });
        }
    }
    Ok(u.terms().filter(|t| f.contains(&t.partner())).count() % 2 == 1)
}

/// `Sq_*^ℓ` of a divided monomial by the dual Cartan formula
/// `Σ_{Σℓ_j = ℓ} Π C(i_j - ℓ_j, ℓ_j) a_j^{(i_j - ℓ_j)}`.
pub fn dual_sq_monomial(l: u32, x: &DividedMonomial) -> DividedElement {
    let mut out = DividedElement::zero();
    let mut cur = x.0.clone();
    fn rec(pos: usize, rem: u32, x: &[u32], cur: &mut Vec<u32>, out: &mut DividedElement) {
        if pos == x.len() {
            if rem == 0 {
                out.toggle(DividedMonomial(cur.clone()));
            }
            return;
        }
        let i = x[pos];
        let rest: u32 = x[pos + 1..].iter().map(|&a| a / 2).sum();
        for s in 0..=rem.min(i / 2) {
            if rem - s > rest {
                continue;
            }
            if binom_mod2(i - s, s) {
                cur[pos] = i - s;
                rec(pos + 1, rem - s, x, cur, out);
            }
        }
        cur[pos] = i;
    }
    rec(0, l, &x.0, &mut cur, &mut out);
    out
}

pub fn dual_sq(l: u32, u: &DividedElement) -> DividedElement {
    let mut out = DividedElement::zero();
    for t in u.terms() {
        out.add_assign(&dual_sq_monomial(l, t));
    }
    out
}

/// The first `2^i ≤ deg u` with `Sq_*^{2^i}(u) ≠ 0`, if any.
pub fn first_nonvanishing_square(u: &DividedElement) -> Option<u32> {
    let n = u.terms().map(DividedMonomial::degree).max().unwrap_or(0);
    (0..32).map(|i| 1u32 << i).take_while(|&p| p <= n).find(|&p| !dual_sq(p, u).is_zero())
}

/// Whether `Sq_*^{2^i}(u) = 0` for every `2^i ≤ deg u`.
pub fn annihilated_check(u: &DividedElement) -> bool {
    first_nonvanishing_square(u).is_none()
}

/// `a^{(i)} ↦ a^{(2i+1)}` in every variable.
pub fn dual_kameko(u: &DividedElement) -> DividedElement {
    u.terms().map(|t| DividedMonomial(t.0.iter().map(|i| 2 * i + 1).collect())).collect()
}

/// `D_k` in degree `n`, as a subspace over the divided monomials of a
/// [`DegreeContext`] (column `c` is the divided monomial with the exponents
/// of monomial `c`).
#[derive(Clone, Debug)]
pub struct AnnihilatedBasis {
    pub ctx: DegreeContext,
    pub basis: EchelonBasis,
}

impl AnnihilatedBasis {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn element(&self, v: &Gf2Vector) -> DividedElement {
        v.ones().map(|c| DividedMonomial(self.ctx.monomial(c).0.clone())).collect()
    }

    pub fn elements(&self) -> Vec<DividedElement> {
        self.basis.rows().iter().map(|r| self.element(r)).collect()
    }

    pub fn vector_of(&self, u: &DividedElement) -> Gf2Vector {
        let mut v = Gf2Vector::zeros(self.ctx.len());
        for t in u.terms() {
            v.flip(self.ctx.index_of(&t.partner()).expect("degree matches"));
        }
        v
    }
}

/// Kernel of the stacked `Sq_*^{2^i}` on `columns`; `target` indexes the
/// divided monomials of each lower degree.
fn kernel_of_squares(
    columns: &[Monomial],
    n: u32,
    target: impl Fn(u32) -> Vec<Monomial>,
) -> EchelonBasis {
    let mut rows: Vec<Gf2Vector> = Vec::new();
    for p in (0..32).map(|i| 1u32 << i).take_while(|&p| p <= n) {
        let tgt = target(n - p);
        let idx: std::collections::HashMap<&Monomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut block = vec![Gf2Vector::zeros(columns.len()); tgt.len()];
        for (c, x) in columns.iter().enumerate() {
            for y in dual_sq_monomial(p, &DividedMonomial(x.0.clone())).terms() {
                block[idx[&y.partner()]].flip(c);
            }
        }
        rows.extend(block);
    }
    gf2::nullspace(&Gf2Matrix::from_rows(columns.len(), rows))
}

/// `D_k` in degree `n` by one nullspace over all divided monomials.
pub fn annihilated_basis_direct(k: usize, n: u32) -> AnnihilatedBasis {
    let ctx = DegreeContext::new(k, n);
    let basis = kernel_of_squares(ctx.monomials(), n, |d| DegreeContext::new(k, d).monomials().to_vec());
    AnnihilatedBasis { ctx, basis }
}

/// `D_k` in degree `n`, assembled from the positive parts of each support
/// (dual squares never lower a positive superscript to zero, so every
/// support spans a summand).
pub fn annihilated_basis(k: usize, n: u32) -> AnnihilatedBasis {
    let ctx = DegreeContext::new(k, n);
    if n == 0 {
        let basis = gf2::echelon_rows(1, [Gf2Vector::unit(1, 0)], PivotRule::Leftmost);
        return AnnihilatedBasis { ctx, basis };
    }
    let mut vecs = Vec::new();
    for j in 1..=k.min(n as usize) {
        let cols = positive_monomials(j, n);
        let ker = kernel_of_squares(&cols, n, |d| positive_monomials(j, d));
        if ker.rank() == 0 {
            continue;
        }
        for mask in (1u32..1 << k).filter(|m| m.count_ones() as usize == j) {
            let vars: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let place: Vec<usize> = cols
                .iter()
                .map(|x| {
                    let mut e = vec![0; k];
                    for (v, &a) in vars.iter().zip(&x.0) {
                        e[*v] = a;
                    }
                    ctx.index_of(&Monomial(e)).expect("same degree")
                })
                .collect();
            for r in ker.rows() {
                vecs.push(Gf2Vector::from_ones(ctx.len(), r.ones().map(|c| place[c])));
            }
        }
    }
    let basis = gf2::echelon_rows(ctx.len(), vecs, PivotRule::Leftmost);
    AnnihilatedBasis { ctx, basis }
}

/// Matrix of `Sq^ℓ : (P_k)_{n-ℓ} → (P_k)_n`; column `c` is the image of the
/// `c`-th monomial of degree `n - ℓ`.
pub fn sq_matrix(k: usize, n: u32, l: u32) -> Gf2Matrix {
    let src = DegreeContext::new(k, n - l);
    let dst = DegreeContext::new(k, n);
    let cols: Vec<Gf2Vector> = src.monomials().iter().map(|m| dst.vector_of(&sq_monomial(l, m))).collect();
    Gf2Matrix::from_rows(dst.len(), cols).transpose()
}

/// Matrix of `Sq_*^ℓ : Γ_n → Γ_{n-ℓ}` by the dual Cartan formula, in the
/// same bases as [`sq_matrix`].
pub fn dual_sq_matrix(k: usize, n: u32, l: u32) -> Gf2Matrix {
    let src = DegreeContext::new(k, n);
    let dst = DegreeContext::new(k, n - l);
    let cols: Vec<Gf2Vector> = src
        .monomials()
        .iter()
        .map(|m| {
            let img = dual_sq_monomial(l, &DividedMonomial(m.0.clone()));
            Gf2Vector::from_ones(dst.len(), img.terms().map(|t| dst.index_of(&t.partner()).expect("degree")))
        })
        .collect();
    Gf2Matrix::from_rows(dst.len(), cols).transpose()
}

/// Matrix of the dual of a substitution `s : P_k → P_k` on `Γ_n`, obtained by
/// transposing the matrix of `s` on `(P_k)_n`.
pub fn dual_substitution_matrix(s: &Substitution, n: u32) -> Gf2Matrix {
    let ctx = DegreeContext::new(s.source_k(), n);
    let cols: Vec<Gf2Vector> = ctx.monomials().iter().map(|m| ctx.vector_of(&s.apply_monomial(m))).collect();
    // Column c of the primal matrix is `cols[c]`; the dual is its transpose,
    // whose column c is row c of the primal matrix.
    Gf2Matrix::from_rows(ctx.len(), cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(e: &[u32]) -> DividedMonomial {
        DividedMonomial(e.to_vec())
    }

    #[test]
    fn pairing_examples() {
        let u = DividedElement::from_monomial(d(&[2, 1]));
        assert!(pair(&u, &Polynomial::from_monomial(Monomial(vec![2, 1]))).unwrap());
        assert!(!pair(&u, &Polynomial::from_monomial(Monomial(vec![1, 2]))).unwrap());
    }

    #[test]
    fn single_variable_formula() {
        for l in 0..10 {
            assert_eq!(dual_sq_monomial(l, &d(&[2 * l])), DividedElement::from_monomial(d(&[l])));
        }
        for m in 1..7 {
            for i in 0..m - 1 {
                assert!(dual_sq_monomial(1 << i, &d(&[(1 << m) - 1])).is_zero());
            }
        }
    }

    #[test]
    fn annihilation_examples() {
        assert!(annihilated_check(&DividedElement::from_monomial(d(&[1, 1, 1, 15]))));
        assert!(!annihilated_check(&DividedElement::from_monomial(d(&[2]))));
        assert_eq!(dual_kameko(&DividedElement::from_monomial(d(&[0, 0, 0]))), DividedElement::from_monomial(d(&[1, 1, 1])));
    }
}
