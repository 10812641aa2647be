//! Double quivers, the canonical skew form on the doubled arrow span, the
//! preprojective relation, and folding of doubled instances.
//!
//! For an arrow `a` with dual `a*` the form is `⟨a, a*⟩ = 1 = -⟨a*, a⟩`. The
//! relation `r = Σ x_k ⊗ x_k^*` (left dual basis) has coordinate matrix equal
//! to the inverse of the Gram matrix, whatever basis is used.

use crate::cyclo::CycloMatrix;
use crate::error::{Error, Result};
use crate::field::PrimeEmbedding;
use crate::matrix::ModMatrix;
use crate::quiver::{Arrow, LinearQuiverAction, Quiver};
use crate::skew::{Folding, SkewQuiver};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleQuiver {
    base: Quiver,
    doubled: Quiver,
    partner: Vec<usize>,
    starred: Vec<bool>,
}

/// `Q̄`: arrows of `Q` keep their indices, the dual of arrow `k` is `n + k`.
pub fn double_quiver(q: &Quiver) -> DoubleQuiver {
    let n = q.arrow_count();
    let mut arrows = q.arrows().to_vec();
    arrows.extend(q.arrows().iter().map(|a| Arrow {
        label: format!("{}*", a.label),
        source: a.target,
        target: a.source,
    }));
    let doubled = Quiver::new(q.vertex_labels().to_vec(), arrows).expect("dual labels are fresh");
    DoubleQuiver {
        base: q.clone(),
        doubled,
        partner: (0..2 * n).map(|k| (k + n) % (2 * n)).collect(),
        starred: (0..2 * n).map(|k| k >= n).collect(),
    }
}

impl DoubleQuiver {
    /// Reads a quiver as a double through declared pairs `(a, a*)`.
    pub fn from_pairing(doubled: &Quiver, pairs: &[(usize, usize)]) -> Result<DoubleQuiver> {
        let m = doubled.arrow_count();
        let mut partner = vec![usize::MAX; m];
        let mut starred = vec![false; m];
        for &(a, b) in pairs {
            if a >= m || b >= m || a == b {
                return Err(Error::InvalidPairing(format!(
                    "pair ({a}, {b}) is out of range or degenerate"
                )));
            }
            if partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::InvalidPairing(format!(
                    "arrow in pair ({a}, {b}) is paired twice"
                )));
            }
            let (x, y) = (&doubled.arrows()[a], &doubled.arrows()[b]);
            if x.source != y.target || x.target != y.source {
                return Err(Error::InvalidPairing(format!(
                    "{} and {} do not have opposite endpoints",
                    x.label, y.label
                )));
            }
            partner[a] = b;
            partner[b] = a;
            starred[b] = true;
        }
        if let Some(k) = partner.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPairing(format!(
                "arrow {} is unpaired",
                doubled.arrows()[k].label
            )));
        }
        let base_arrows = pairs
            .iter()
            .map(|&(a, _)| doubled.arrows()[a].clone())
            .collect();
        let base = Quiver::new(doubled.vertex_labels().to_vec(), base_arrows)?;
        Ok(DoubleQuiver {
            base,
            doubled: doubled.clone(),
            partner,
            starred,
        })
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn doubled(&self) -> &Quiver {
        &self.doubled
    }

    pub fn partner(&self, k: usize) -> usize {
        self.partner[k]
    }

    pub fn is_starred(&self, k: usize) -> bool {
        self.starred[k]
    }

    pub fn symplectic(&self, p: u64) -> SymplecticData {
        let m = self.doubled.arrow_count();
        let mut gram = ModMatrix::zeros(m, m, p);
        for k in 0..m {
            if !self.starred[k] {
                gram.set(k, self.partner[k], 1);
                gram.set(self.partner[k], k, p - 1);
            }
        }
        let relation_tensor = gram
            .inverse()
            .expect("the canonical form is non-degenerate");
        SymplecticData {
            gram,
            relation_tensor,
            targets: self.doubled.arrows().iter().map(|a| a.target).collect(),
            sources: self.doubled.arrows().iter().map(|a| a.source).collect(),
            vertices: self.doubled.vertex_count(),
        }
    }
}

/// The skew form on the arrow span of `Q̄` over `F_p` and the relation `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticData {
    gram: ModMatrix,
    relation_tensor: ModMatrix,
    sources: Vec<usize>,
    targets: Vec<usize>,
    vertices: usize,
}

impl SymplecticData {
    pub fn gram(&self) -> &ModMatrix {
        &self.gram
    }

    /// `R` with `r = Σ_{k,l} R[k][l] x_k ⊗ x_l` in the arrow basis.
    pub fn relation_tensor(&self) -> &ModMatrix {
        &self.relation_tensor
    }

    /// The terms `(x, y, c)` of `r` at each vertex: `c · x ⊗ y` with the path
    /// through that vertex.
    pub fn relation(&self) -> Vec<Vec<(usize, usize, u64)>> {
        let mut out = vec![Vec::new(); self.vertices];
        let r = &self.relation_tensor;
        for x in 0..r.rows() {
            for y in 0..r.cols() {
                let c = r.get(x, y);
                if c != 0 {
                    out[self.sources[x]].push((x, y, c));
                }
            }
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        let p = self.gram.prime();
        let n = self.gram.rows();
        (0..n).all(|a| (0..n).all(|b| (self.gram.get(a, b) + self.gram.get(b, a)) % p == 0))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.gram.rows()
    }

    /// The form only pairs arrows `i → j` with arrows `j → i`.
    pub fn is_block_paired(&self) -> bool {
        let n = self.gram.rows();
        (0..n).all(|a| {
            (0..n).all(|b| {
                self.gram.get(a, b) == 0
                    || (self.sources[a] == self.targets[b] && self.targets[a] == self.sources[b])
            })
        })
    }

    /// `r` recomputed from the basis whose vectors are the columns of
    /// `basis` and its left dual basis, in arrow coordinates.
    pub fn relation_from_basis(&self, basis: &ModMatrix) -> Result<ModMatrix> {
        let g = basis.transpose().mul(&self.gram).mul(basis);
        // ⟨x_k^*, x_j⟩ = δ_kj: the duals' coordinates form the inverse Gram matrix
        let duals = g.inverse()?;
        Ok(basis.mul(&duals).mul(&basis.transpose()))
    }
}

/// Extends an action on `kQ` to `kQ̄`: the dual block of `g` is `T(g^{-1})^T`,
/// the contragredient, so that the form is preserved.
pub fn extend_action_contragredient(
    q: &Quiver,
    action: &LinearQuiverAction,
) -> Result<(DoubleQuiver, LinearQuiverAction)> {
    let dq = double_quiver(q);
    let group = action.group();
    let n = q.arrow_count();
    let level = action.level();
    let mut perms = Vec::with_capacity(group.order());
    let mut mats = Vec::with_capacity(group.order());
    for g in group.elements() {
        perms.push(action.vertex_perm(g).to_vec());
        let t = action.arrow_matrix(g);
        let dual = action.arrow_matrix(group.inv(g)).transpose();
        let mut m = CycloMatrix::zeros(2 * n, 2 * n, level);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, t.get(r, c).clone());
                m.set(n + r, n + c, dual.get(r, c).clone());
            }
        }
        mats.push(m);
    }
    let extended = LinearQuiverAction::new(group, perms, mats)?.validated(dq.doubled())?;
    Ok((dq, extended))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// `T_g^T · gram · T_g = gram` for every generator.
    pub invariant: bool,
    /// First failing `(g, row, col)`.
    pub witness: Option<(usize, usize, usize)>,
    /// Independent check: `r^g = r` computed from the relation tensor.
    pub relation_fixed: bool,
}

pub fn check_relation_invariance(
    dq: &DoubleQuiver,
    action: &LinearQuiverAction,
    field: &PrimeEmbedding,
) -> Result<InvarianceReport> {
    let data = dq.symplectic(field.prime());
    let embedded = action.embed(field)?;
    let gram = data.gram();
    let r = data.relation_tensor();
    let mut witness = None;
    let mut relation_fixed = true;
    for &g in action.group().generators() {
        let t = &embedded[g];
        let moved = t.transpose().mul(gram).mul(t);
        if witness.is_none() {
            if let Some((row, col)) = first_difference(&moved, gram) {
                witness = Some((g, row, col));
            }
        }
        // r^g has coordinates T R T^T
        if t.mul(r).mul(&t.transpose()) != *r {
            relation_fixed = false;
        }
    }
    Ok(InvarianceReport {
        invariant: witness.is_none(),
        witness,
        relation_fixed,
    })
}

fn first_difference(a: &ModMatrix, b: &ModMatrix) -> Option<(usize, usize)> {
    (0..a.rows())
        .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| a.get(r, c) != b.get(r, c))
}

/// The arrows of `Q'`: `(v, w, count)` with `v ≤ w`. Between distinct
/// vertices all folded arrows are oriented from the earlier vertex; loops are
/// halved.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DoubleStructure {
    pub arrows: Vec<(usize, usize, u64)>,
}

impl DoubleStructure {
    /// Multiplicity matrix of `Q'`.
    pub fn matrix(&self, n: usize) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0; n]; n];
        for &(v, w, c) in &self.arrows {
            m[v][w] += c;
        }
        m
    }
}

/// Reads a folded double as `Q̄'`, checking that it is symmetric with even diagonal.
pub fn split_double(fold: &SkewQuiver) -> Result<DoubleStructure> {
    let n = fold.vertex_count();
    let mut arrows = Vec::new();
    for v in 0..n {
        for w in v..n {
            let c = fold.mult[v][w];
            if v == w {
                if c % 2 != 0 {
                    return Err(Error::OddLoop(v));
                }
                if c > 0 {
                    arrows.push((v, v, c / 2));
                }
            } else {
                if c != fold.mult[w][v] {
                    return Err(Error::AsymmetricFold(v, w));
                }
                if c > 0 {
                    arrows.push((v, w, c));
                }
            }
        }
    }
    Ok(DoubleStructure { arrows })
}

/// `(Q̄)_G` together with its splitting; requires the relation to be
/// invariant.
pub fn fold_double(
    dq: &DoubleQuiver,
    action: &LinearQuiverAction,
    field: PrimeEmbedding,
) -> Result<(SkewQuiver, DoubleStructure)> {
    let folding = Folding::new(dq.doubled(), action, field)?;
    fold_double_with(dq, &folding)
}

/// As [`fold_double`] for a prepared folding of `dq.doubled()`.
pub fn fold_double_with(
    dq: &DoubleQuiver,
    folding: &Folding,
) -> Result<(SkewQuiver, DoubleStructure)> {
    let report = check_relation_invariance(dq, folding.action(), &folding.field())?;
    if let Some((element, row, col)) = report.witness {
        return Err(Error::NotInvariant { element, row, col });
    }
    let fold = folding.build()?;
    let structure = split_double(&fold)?;
    Ok((fold, structure))
}

#[derive(Debug, Clone)]
pub struct ExtendedFold {
    pub double_quiver: DoubleQuiver,
    pub action: LinearQuiverAction,
    /// `Q_G` of the original instance.
    pub base: SkewQuiver,
    /// `(Q̄)_G` of the contragredient extension.
    pub double: SkewQuiver,
    pub structure: DoubleStructure,
}

/// Contragredient extension, then fold; checks `(Q̄)_G = double of Q_G` at
/// the level of multiplicities.
pub fn extend_fold(
    q: &Quiver,
    action: &LinearQuiverAction,
    field: PrimeEmbedding,
) -> Result<ExtendedFold> {
    let base = Folding::new(q, action, field)?.build()?;
    let (dq, extended) = extend_action_contragredient(q, action)?;
    let (double, structure) = fold_double(&dq, &extended, field)?;
    let n = base.vertex_count();
    if double.vertex_count() != n {
        return Err(Error::DoubleMismatch(n, double.vertex_count()));
    }
    for v in 0..n {
        for w in 0..n {
            if double.mult[v][w] != base.mult[v][w] + base.mult[w][v] {
                return Err(Error::DoubleMismatch(v, w));
            }
        }
    }
    Ok(ExtendedFold {
        double_quiver: dq,
        action: extended,
        base,
        double,
        structure,
    })
}
