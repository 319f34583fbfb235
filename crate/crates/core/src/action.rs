//! The action of Σ_k and GL_k on (QP_k)_n through the generators σ_d.

use crate::dual::{annihilated_basis, dual_substitution_matrix, AnnihilatedBasis, DividedElement};
use crate::error::{Error, Result};
use crate::gf2::{self, EchelonBasis, Gf2Matrix, Gf2Vector, IncrementalEchelon, PivotRule};
use crate::hit::QpBasis;
use crate::poly::{apply_substitution, Polynomial, Substitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// Σ_k, generated by σ_1 .. σ_{k-1}.
    Sym,
    /// GL_k, generated by σ_1 .. σ_k.
    Gl,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Sym => "sym",
            Group::Gl => "gl",
        }
    }

    /// Generator indices `d` for this group acting on `k` variables.
    pub fn generators(self, k: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            Group::Sym => 1..=k.saturating_sub(1),
            Group::Gl => 1..=k,
        }
    }
}

impl std::str::FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(Group::Sym),
            "gl" => Ok(Group::Gl),
            _ => Err(Error::Parse(format!("unknown group {s:?} (expected sym or gl)"))),
        }
    }
}

/// Matrix of `σ_d` on `(QP_k)_n`: column `j` holds `[σ_d(x_j)]` for the
/// `j`-th admissible `x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    pub d: usize,
    pub matrix: Gf2Matrix,
}

impl ActionMatrix {
    pub fn apply(&self, v: &Gf2Vector) -> Gf2Vector {
        self.matrix.mul_vec(v)
    }
}

pub fn action_matrix(b: &QpBasis, d: usize) -> Result<ActionMatrix> {
    let s = Substitution::sigma(b.k(), d)?;
    let cols: Vec<Gf2Vector> = b
        .admissibles()
        .iter()
        .map(|x| b.reduce(&apply_substitution(&s, &Polynomial::from_monomial(x.clone()))))
        .collect();
    Ok(ActionMatrix { d, matrix: Gf2Matrix::from_rows(b.dim(), cols).transpose() })
}

fn plus_identity(m: &Gf2Matrix) -> Gf2Matrix {
    m.add(&Gf2Matrix::identity(m.nrows()))
}

/// Classes fixed by every generator of `group`: the common nullspace of
/// `A_d + I`.
pub fn invariants(b: &QpBasis, group: Group) -> Result<EchelonBasis> {
    let mut rows = Vec::new();
    for d in group.generators(b.k()) {
        rows.extend(plus_identity(&action_matrix(b, d)?.matrix).into_rows());
    }
    Ok(gf2::nullspace(&Gf2Matrix::from_rows(b.dim(), rows)))
}

/// Invariants inside a subspace that every generator maps into itself.
pub fn invariants_on_subspace(b: &QpBasis, sub: &EchelonBasis, group: Group) -> Result<EchelonBasis> {
    let gens: Vec<ActionMatrix> = group.generators(b.k()).map(|d| action_matrix(b, d)).collect::<Result<_>>()?;
    // w_i concatenates (A_d + I) b_i over all generators; invariant
    // combinations Σ c_i b_i are the relations Σ c_i w_i = 0.
    let mut ws = Vec::new();
    for r in sub.rows() {
        let mut w = Gf2Vector::zeros(0);
        for a in &gens {
            let img = a.apply(r);
            if !gf2::contains(sub, &img) {
                return Err(Error::NotStable { d: a.d });
            }
            let mut diff = img;
            diff.xor_assign(r);
            w = w.concat(&diff);
        }
        ws.push(w);
    }
    let width = ws.first().map_or(0, Gf2Vector::len);
    let rel = gf2::nullspace(&Gf2Matrix::from_rows(width, ws).transpose());
    let vecs = rel.rows().iter().map(|c| {
        let mut v = Gf2Vector::zeros(b.dim());
        for i in c.ones() {
            v.xor_assign(&sub.rows()[i]);
        }
        v
    });
    Ok(gf2::echelon_rows(b.dim(), vecs, PivotRule::Leftmost))
}

/// `dim (Z/2 ⊗_{GL_k} D_k)_n`, computed as `dim [(QP_k)_n]^{GL_k}`.
pub fn coinvariant_dim(k: usize, n: u32) -> Result<usize> {
    Ok(invariants(&QpBasis::new(k, n), Group::Gl)?.rank())
}

/// `D_k` in degree `n` together with the span of all `(σ_d^* - 1) u`,
/// `σ_d^*` being the transposed substitution matrix.
fn moved_span(k: usize, n: u32, group: Group) -> Result<(AnnihilatedBasis, EchelonBasis)> {
    let d = annihilated_basis(k, n);
    let mut moved = Vec::new();
    for g in group.generators(k) {
        let m = dual_substitution_matrix(&Substitution::sigma(k, g)?, n);
        for u in d.basis.rows() {
            let mut w = m.mul_vec(u);
            w.xor_assign(u);
            moved.push(w);
        }
    }
    let span = gf2::echelon_rows(d.ctx.len(), moved, PivotRule::Leftmost);
    Ok((d, span))
}

/// `dim (Z/2 ⊗_G D_k)_n` computed on the divided power side, as `D_k`
/// modulo the span of all `(σ_d^* - 1) u`.
pub fn coinvariant_dim_dual(k: usize, n: u32, group: Group) -> Result<usize> {
    let (d, span) = moved_span(k, n, group)?;
    Ok(d.dim() - span.rank())
}

/// Elements of `D_k` whose classes form a basis of `(Z/2 ⊗_G D_k)_n`.
///
/// The coinvariants are dual to the invariants of `(QP_k)_n`, so a family of
/// annihilated elements is a basis as soon as its pairing matrix against a
/// basis of invariants is invertible; candidates are taken greedily from the
/// reduced basis of `D_k`.
pub fn coinvariant_representatives(k: usize, n: u32, group: Group) -> Result<Vec<DividedElement>> {
    let b = QpBasis::new(k, n);
    let inv = invariants(&b, group)?;
    let d = annihilated_basis(k, n);
    let forms: Vec<Gf2Vector> = inv
        .rows()
        .iter()
        .map(|v| Gf2Vector::from_ones(d.ctx.len(), v.ones().map(|i| d.ctx.index_of(&b.admissibles()[i]).expect("same degree"))))
        .collect();
    let mut acc = IncrementalEchelon::new(forms.len(), PivotRule::Leftmost);
    let mut reps = Vec::new();
    for u in d.basis.rows() {
        if acc.rank() == forms.len() {
            break;
        }
        let p = Gf2Vector::from_ones(forms.len(), (0..forms.len()).filter(|&i| forms[i].dot(u)));
        if acc.insert(p).is_some() {
            reps.push(d.element(u));
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpositions_are_involutions() {
        let b = QpBasis::new(4, 11);
        for d in 1..4 {
            let a = action_matrix(&b, d).unwrap().matrix;
            assert_eq!(a.mul(&a), Gf2Matrix::identity(b.dim()));
        }
        assert!(action_matrix(&b, 5).is_err());
    }

    #[test]
    fn whole_space_subspace_matches() {
        let b = QpBasis::new(3, 6);
        let all = gf2::echelon(&Gf2Matrix::identity(b.dim()), PivotRule::Leftmost);
        assert_eq!(invariants_on_subspace(&b, &all, Group::Gl).unwrap(), invariants(&b, Group::Gl).unwrap());
    }
}
