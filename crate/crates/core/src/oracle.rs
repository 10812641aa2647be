//! Brute-force verification of arrow counts.
//!
//! `MG = M ⊗ k[G]` is materialized over `F_p` with basis `a ⊗ g`. The number
//! of arrows `(i, ρ) → (j, σ)` of `Q_G` is the dimension of `ẽ_jσ (MG) ẽ_iρ`
//! for primitive idempotents; with central idempotents `E_ρ`, `E_σ` the
//! dimension of `E_σ e_j (MG) e_i E_ρ` is `deg ρ · deg σ` times that.
//!
//! Products in the skew group algebra:
//! `(a ⊗ g)(1 ⊗ h) = a ⊗ gh` and `(1 ⊗ h)(a ⊗ g) = a^{h^{-1}} ⊗ hg`.

use std::sync::Arc;

use crate::character::CharacterTable;
use crate::error::{Error, Result};
use crate::field::PrimeEmbedding;
use crate::group::{FiniteGroup, Subgroup};
use crate::matrix::ModMatrix;
use crate::preprojective::{DoubleQuiver, SymplecticData};
use crate::quiver::{LinearQuiverAction, Quiver};
use crate::skew::{Folding, SkewVertex};

/// `MG` with its `RG`-bimodule structure, over `F_p`.
#[derive(Debug, Clone)]
pub struct ExplicitBimodule {
    group: Arc<FiniteGroup>,
    sources: Vec<usize>,
    targets: Vec<usize>,
    perms: Vec<Vec<usize>>,
    matrices: Vec<ModMatrix>,
    p: u64,
}

/// An element of `RG` used as a multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingElement {
    /// `e_i ⊗ 1`
    Idempotent(usize),
    /// `1 ⊗ h`
    Group(usize),
}

impl ExplicitBimodule {
    pub fn build(
        quiver: &Quiver,
        action: &LinearQuiverAction,
        field: &PrimeEmbedding,
    ) -> Result<ExplicitBimodule> {
        let matrices = action.embed(field)?;
        let m = Self::from_parts(quiver, action, matrices, field.prime());
        m.check_structure()?;
        Ok(m)
    }

    pub fn from_folding(folding: &Folding) -> Result<ExplicitBimodule> {
        let m = Self::from_parts(
            folding.quiver(),
            folding.action(),
            folding.embedded().to_vec(),
            folding.field().prime(),
        );
        m.check_structure()?;
        Ok(m)
    }

    fn from_parts(
        quiver: &Quiver,
        action: &LinearQuiverAction,
        matrices: Vec<ModMatrix>,
        p: u64,
    ) -> ExplicitBimodule {
        let group = Arc::clone(action.group());
        ExplicitBimodule {
            sources: quiver.arrows().iter().map(|a| a.source).collect(),
            targets: quiver.arrows().iter().map(|a| a.target).collect(),
            perms: group
                .elements()
                .map(|g| action.vertex_perm(g).to_vec())
                .collect(),
            matrices,
            group,
            p,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn arrow_count(&self) -> usize {
        self.sources.len()
    }

    /// `|A| · |G|`
    pub fn dimension(&self) -> usize {
        self.sources.len() * self.group.order()
    }

    /// Position of `a ⊗ g`.
    pub fn index(&self, a: usize, g: usize) -> usize {
        a * self.group.order() + g
    }

    pub fn basis_element(&self, k: usize) -> (usize, usize) {
        (k / self.group.order(), k % self.group.order())
    }

    /// `x (1 ⊗ h)`
    pub fn right_group(&self, x: &[u64], h: usize) -> Vec<u64> {
        let mut out = vec![0; x.len()];
        for (k, &c) in x.iter().enumerate() {
            if c != 0 {
                let (a, g) = self.basis_element(k);
                out[self.index(a, self.group.mul(g, h))] = c;
            }
        }
        out
    }

    /// `(1 ⊗ h) x`
    pub fn left_group(&self, h: usize, x: &[u64]) -> Vec<u64> {
        let t = &self.matrices[self.group.inv(h)];
        let mut out = vec![0; x.len()];
        for (k, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (a, g) = self.basis_element(k);
            let hg = self.group.mul(h, g);
            for b in 0..self.arrow_count() {
                let tb = t.get(b, a);
                if tb != 0 {
                    let slot = &mut out[self.index(b, hg)];
                    *slot = (*slot + crate::field::mul_mod(c, tb, self.p)) % self.p;
                }
            }
        }
        out
    }

    /// `(e_j ⊗ 1) x`: keeps arrows ending at `j`.
    pub fn left_idempotent(&self, j: usize, x: &[u64]) -> Vec<u64> {
        x.iter()
            .enumerate()
            .map(|(k, &c)| {
                if self.targets[self.basis_element(k).0] == j {
                    c
                } else {
                    0
                }
            })
            .collect()
    }

    /// `x (e_i ⊗ 1)`: `(a ⊗ g) e_i = a e_{i^{g^{-1}}} ⊗ g`, nonzero iff
    /// `s(a)^g = i`.
    pub fn right_idempotent(&self, x: &[u64], i: usize) -> Vec<u64> {
        x.iter()
            .enumerate()
            .map(|(k, &c)| {
                let (a, g) = self.basis_element(k);
                if self.perms[g][self.sources[a]] == i {
                    c
                } else {
                    0
                }
            })
            .collect()
    }

    pub fn left_mul(&self, r: RingElement, x: &[u64]) -> Vec<u64> {
        match r {
            RingElement::Idempotent(j) => self.left_idempotent(j, x),
            RingElement::Group(h) => self.left_group(h, x),
        }
    }

    pub fn right_mul(&self, x: &[u64], r: RingElement) -> Vec<u64> {
        match r {
            RingElement::Idempotent(i) => self.right_idempotent(x, i),
            RingElement::Group(h) => self.right_group(x, h),
        }
    }

    pub fn unit(&self, k: usize) -> Vec<u64> {
        let mut v = vec![0; self.dimension()];
        v[k] = 1;
        v
    }

    /// Basis positions spanning `e_j (MG) e_i`.
    pub fn block_basis(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&k| {
                let (a, g) = self.basis_element(k);
                self.targets[a] == j && self.perms[g][self.sources[a]] == i
            })
            .collect()
    }

    /// Checks the bimodule laws and the defining relation
    /// `(1 ⊗ g^{-1})(a ⊗ 1)(1 ⊗ g) = a^g ⊗ 1` on every basis vector.
    pub fn check_structure(&self) -> Result<()> {
        let g = &self.group;
        let gens = g.generators().to_vec();
        let fail = |what: &str| {
            Err(Error::NotARepresentation(format!(
                "skew group algebra: {what}"
            )))
        };
        for k in 0..self.dimension() {
            let x = self.unit(k);
            for &h in &gens {
                for &l in &gens {
                    if self.left_group(h, &self.right_group(&x, l))
                        != self.right_group(&self.left_group(h, &x), l)
                    {
                        return fail("left and right multiplications do not commute");
                    }
                    if self.left_group(h, &self.left_group(l, &x))
                        != self.left_group(g.mul(h, l), &x)
                    {
                        return fail("left multiplication is not an action");
                    }
                }
            }
        }
        for a in 0..self.arrow_count() {
            let x = self.unit(self.index(a, 0));
            for h in g.elements() {
                let conj = self.right_group(&self.left_group(g.inv(h), &x), h);
                let expected: Vec<u64> = (0..self.dimension())
                    .map(|k| {
                        let (b, y) = self.basis_element(k);
                        if y == 0 {
                            self.matrices[h].get(b, a)
                        } else {
                            0
                        }
                    })
                    .collect();
                if conj != expected {
                    return fail("g^{-1} a g differs from a^g");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Central idempotent `E_ρ = (deg ρ / |H|) Σ_h χ_ρ(h^{-1}) h` of `k[H]`, acting
/// on one side of the bimodule, together with the vertex idempotent of the
/// vertex `H` stabilizes.
#[derive(Debug, Clone)]
pub struct IdempotentProjector {
    subgroup: Subgroup,
    vertex: usize,
    irr: usize,
    degree: u64,
    side: Side,
    coeffs: Vec<(usize, u64)>,
    p: u64,
}

pub fn central_projector(
    table: &CharacterTable,
    irr: usize,
    vertex: usize,
    side: Side,
) -> IdempotentProjector {
    let f = table.field();
    let h = table.subgroup();
    let parent = h.parent();
    let chi = table.irreducible(irr);
    let degree = table.degrees()[irr];
    let scale = f.mul(
        degree % f.prime(),
        f.inv(h.order() as u64).expect("p does not divide |H|"),
    );
    let coeffs = h
        .elements()
        .iter()
        .map(|&g| (g, f.mul(scale, chi.at(parent.inv(g)).expect("in H"))))
        .collect();
    IdempotentProjector {
        subgroup: h.clone(),
        vertex,
        irr,
        degree,
        side,
        coeffs,
        p: f.prime(),
    }
}

impl IdempotentProjector {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn irr(&self) -> usize {
        self.irr
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Coefficients of `E_ρ` in the group algebra of the parent group.
    pub fn group_algebra_element(&self) -> Vec<u64> {
        let mut v = vec![0; self.subgroup.parent().order()];
        for &(g, c) in &self.coeffs {
            v[g] = c;
        }
        v
    }

    /// `E_ρ^2 = E_ρ` in `k[H]`.
    pub fn is_idempotent(&self) -> bool {
        let g = self.subgroup.parent();
        let mut sq = vec![0u64; g.order()];
        for &(x, a) in &self.coeffs {
            for &(y, b) in &self.coeffs {
                let xy = g.mul(x, y);
                sq[xy] = (sq[xy] + crate::field::mul_mod(a, b, self.p)) % self.p;
            }
        }
        sq == self.group_algebra_element()
    }

    pub fn apply(&self, m: &ExplicitBimodule, x: &[u64]) -> Vec<u64> {
        let x = match self.side {
            Side::Left => m.left_idempotent(self.vertex, x),
            Side::Right => m.right_idempotent(x, self.vertex),
        };
        let mut out = vec![0; x.len()];
        for &(g, c) in &self.coeffs {
            if c == 0 {
                continue;
            }
            let y = match self.side {
                Side::Left => m.left_group(g, &x),
                Side::Right => m.right_group(&x, g),
            };
            for (o, v) in out.iter_mut().zip(y) {
                *o = (*o + crate::field::mul_mod(c, v, self.p)) % self.p;
            }
        }
        out
    }

    /// Matrix on the span of the given basis positions, which must be stable.
    pub fn matrix_on(&self, m: &ExplicitBimodule, basis: &[usize]) -> Result<ModMatrix> {
        let mut pos = vec![usize::MAX; m.dimension()];
        for (k, &b) in basis.iter().enumerate() {
            pos[b] = k;
        }
        let mut out = ModMatrix::zeros(basis.len(), basis.len(), self.p);
        for (c, &b) in basis.iter().enumerate() {
            let y = self.apply(m, &m.unit(b));
            for (k, &v) in y.iter().enumerate() {
                if v != 0 {
                    if pos[k] == usize::MAX {
                        return Err(Error::NotARepresentation(
                            "projector leaves the block".into(),
                        ));
                    }
                    out.set(pos[k], c, v);
                }
            }
        }
        Ok(out)
    }
}

/// `E_σ e_j (MG) e_i E_ρ` as a matrix on the block `e_j (MG) e_i`, with the
/// block's basis positions.
fn projected_block(
    m: &ExplicitBimodule,
    folding: &Folding,
    v: &SkewVertex,
    w: &SkewVertex,
) -> Result<(Vec<usize>, ModMatrix)> {
    let basis = m.block_basis(v.rep, w.rep);
    let right = central_projector(folding.table(v.orbit), v.irr_index, v.rep, Side::Right)
        .matrix_on(m, &basis)?;
    let left = central_projector(folding.table(w.orbit), w.irr_index, w.rep, Side::Left)
        .matrix_on(m, &basis)?;
    Ok((basis, left.mul(&right)))
}

/// Arrows `v → w` of `Q_G` counted as `rank(P_L P_R) / (deg ρ · deg σ)`.
pub fn oracle_arrow_count(
    m: &ExplicitBimodule,
    folding: &Folding,
    v: &SkewVertex,
    w: &SkewVertex,
) -> Result<u64> {
    let (basis, p) = projected_block(m, folding, v, w)?;
    if basis.is_empty() {
        return Ok(0);
    }
    let rank = p.rank() as u64;
    let divisor = v.degree * w.degree;
    if rank % divisor != 0 {
        return Err(Error::NonIntegerCount { rank, divisor });
    }
    Ok(rank / divisor)
}

/// Oracle counts for every pair of vertices of `Q_G`.
pub fn oracle_mult(folding: &Folding) -> Result<Vec<Vec<u64>>> {
    let m = ExplicitBimodule::from_folding(folding)?;
    let vs = folding.vertices();
    vs.iter()
        .map(|v| {
            vs.iter()
                .map(|w| oracle_arrow_count(&m, folding, v, w))
                .collect()
        })
        .collect()
}

/// `dim e_j (MG) e_i` for orbit representatives `i`, `j`, by counting basis
/// vectors.
pub fn block_dimension(m: &ExplicitBimodule, i: usize, j: usize) -> usize {
    m.block_basis(i, j).len()
}

/// The same dimension from the decomposition over `F_ij`:
/// `Σ |G_j| · dim M_i'j' · |G_i| / |G_i' ∩ G_j'|`.
pub fn bookkeeping_dimension(folding: &Folding, oi: usize, oj: usize) -> Result<usize> {
    let frame = folding.frame();
    let (i, j) = (frame.reps()[oi], frame.reps()[oj]);
    let mut total = 0;
    for &(ip, jp) in folding.pairs().get(oi, oj) {
        let h = frame.stabilizer(ip).intersection(frame.stabilizer(jp))?;
        let dim = folding.quiver().arrows_between(ip, jp).len();
        total += frame.stabilizer(j).order() * dim * frame.stabilizer(i).order() / h.order();
    }
    Ok(total)
}

/// The form on `M̄G`: `⟨x ⊗ g, y ⊗ h⟩ = ⟨x, y^h⟩` when `gh = 1`, else 0.
pub fn extended_form(m: &ExplicitBimodule, data: &SymplecticData) -> ModMatrix {
    let g = &m.group;
    let n = m.dimension();
    let mut out = ModMatrix::zeros(n, n, m.p);
    for h in g.elements() {
        let gt = data.gram().mul(&m.matrices[h]);
        let gg = g.inv(h);
        for x in 0..m.arrow_count() {
            for y in 0..m.arrow_count() {
                let c = gt.get(x, y);
                if c != 0 {
                    out.set(m.index(x, gg), m.index(y, h), c);
                }
            }
        }
    }
    out
}

fn multiplier_matrix(m: &ExplicitBimodule, left: RingElement, right: RingElement) -> ModMatrix {
    let cols: Vec<Vec<u64>> = (0..m.dimension())
        .map(|k| m.right_mul(&m.left_mul(left, &m.unit(k)), right))
        .collect();
    ModMatrix::from_columns(m.dimension(), &cols, m.p)
}

/// `⟨a x b, y⟩ = ⟨x, b y a⟩` for all basis vectors and all `a`, `b` among
/// the given ring elements.
pub fn form_is_compatible(
    m: &ExplicitBimodule,
    form: &ModMatrix,
    elements: &[RingElement],
) -> bool {
    elements.iter().all(|&a| {
        elements.iter().all(|&b| {
            let lhs = multiplier_matrix(m, a, b).transpose().mul(form);
            let rhs = form.mul(&multiplier_matrix(m, b, a));
            lhs == rhs
        })
    })
}

/// Expands `r_G = Σ u ⊗ u^*` over the basis `x ⊗ g` of `M̄G` and its left dual
/// basis for the extended form, in `M̄G ⊗_{RG} M̄G ≅ M̄ ⊗_R M̄ ⊗ k[G]`
/// (normal form `(x ⊗ g) ⊗ (y ⊗ h) ↦ x ⊗ y^{g^{-1}} ⊗ gh`), and compares it
/// with `#G · r` placed at the identity component.
pub fn verify_rg(m: &ExplicitBimodule, dq: &DoubleQuiver, data: &SymplecticData) -> Result<bool> {
    if dq.doubled().arrow_count() != m.arrow_count() {
        return Err(Error::DimensionMismatch(
            "bimodule was not built on the double quiver".into(),
        ));
    }
    let g = &m.group;
    let na = m.arrow_count();
    let ng = g.order();
    let form = extended_form(m, data);
    let duals = form.inverse().map_err(|_| Error::DegenerateForm)?;
    let p = m.p;
    let slot = |x: usize, z: usize, k: usize| (x * na + z) * ng + k;
    let mut expanded = vec![0u64; na * na * ng];
    for u in 0..m.dimension() {
        let (x, gu) = m.basis_element(u);
        let back = &m.matrices[g.inv(gu)];
        for w in 0..m.dimension() {
            let c = duals.get(u, w);
            if c == 0 {
                continue;
            }
            let (y, h) = m.basis_element(w);
            let k = g.mul(gu, h);
            for z in 0..na {
                let t = back.get(z, y);
                // x ⊗_R z vanishes unless the path z then x is composable
                if t != 0 && m.sources[x] == m.targets[z] {
                    let s = &mut expanded[slot(x, z, k)];
                    *s = (*s + crate::field::mul_mod(c, t, p)) % p;
                }
            }
        }
    }
    let r = data.relation_tensor();
    let order = ng as u64 % p;
    for x in 0..na {
        for z in 0..na {
            for k in 0..ng {
                let expected = if k == 0 && m.sources[x] == m.targets[z] {
                    crate::field::mul_mod(order, r.get(x, z), p)
                } else {
                    0
                };
                if expanded[slot(x, z, k)] != expected {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Pairs `(u_k, v_k)` with `⟨u_k, v_l⟩ = δ_kl` and `⟨u, u'⟩ = ⟨v, v'⟩ = 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IsotropicSplit {
    pub u: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
}

fn pair(form: &ModMatrix, a: &[u64], b: &[u64]) -> u64 {
    let p = form.prime();
    let fb = form.mul_vec(b);
    a.iter()
        .zip(fb)
        .fold(0, |acc, (&x, y)| (acc + crate::field::mul_mod(x, y, p)) % p)
}

/// Symplectic Gram–Schmidt on the span of `vectors` (a basis). Each `u` is
/// taken from the front of the remaining list, so vectors listed first end up
/// in the isotropic half.
pub fn maximal_isotropic_split(vectors: &[Vec<u64>], form: &ModMatrix) -> Result<IsotropicSplit> {
    let p = form.prime();
    let mut rest: Vec<Vec<u64>> = vectors.to_vec();
    let mut out = IsotropicSplit::default();
    while !rest.is_empty() {
        let u = rest.remove(0);
        let k = rest
            .iter()
            .position(|w| pair(form, &u, w) != 0)
            .ok_or(Error::DegenerateForm)?;
        let w = rest.remove(k);
        let s = crate::field::inv_mod(pair(form, &u, &w), p);
        let v: Vec<u64> = w.iter().map(|&x| crate::field::mul_mod(x, s, p)).collect();
        for r in rest.iter_mut() {
            // r + ⟨v, r⟩ u - ⟨u, r⟩ v
            let a = pair(form, &v, r);
            let b = pair(form, &u, r);
            for ((x, &uu), &vv) in r.iter_mut().zip(&u).zip(&v) {
                *x = (*x + crate::field::mul_mod(a, uu, p) + p - crate::field::mul_mod(b, vv, p))
                    % p;
            }
        }
        out.u.push(u);
        out.v.push(v);
    }
    Ok(out)
}

/// Basis (in full coordinates) of the column space of a block projection.
fn image_vectors(m: &ExplicitBimodule, basis: &[usize], proj: &ModMatrix) -> Vec<Vec<u64>> {
    let (_, pivots) = proj.rref();
    pivots
        .iter()
        .map(|&c| {
            let mut v = vec![0; m.dimension()];
            for (k, &b) in basis.iter().enumerate() {
                v[b] = proj.get(k, c);
            }
            v
        })
        .collect()
}

/// For a folded double: an isotropic split of each `W(v→w) ⊕ W(w→v)`,
/// `W(v→w) = E_σ e_j (M̄G) e_i E_ρ`, reported as `(v, w, n)` with `n` the
/// number of arrows `v → w` of `Q'` it exhibits (`v ≤ w`).
pub fn isotropic_split_counts(
    folding: &Folding,
    dq: &DoubleQuiver,
) -> Result<Vec<(usize, usize, u64)>> {
    let m = ExplicitBimodule::from_folding(folding)?;
    let data = dq.symplectic(m.p);
    let form = extended_form(&m, &data);
    let vs = folding.vertices();
    let mut out = Vec::new();
    for (a, v) in vs.iter().enumerate() {
        for (b, w) in vs.iter().enumerate().skip(a) {
            let (basis_vw, p_vw) = projected_block(&m, folding, v, w)?;
            let mut vectors = image_vectors(&m, &basis_vw, &p_vw);
            let forward = vectors.len();
            if a != b {
                let (basis_wv, p_wv) = projected_block(&m, folding, w, v)?;
                vectors.extend(image_vectors(&m, &basis_wv, &p_wv));
            }
            let split = maximal_isotropic_split(&vectors, &form)?;
            if a != b && split.u.len() != forward {
                return Err(Error::DegenerateForm);
            }
            let divisor = v.degree * w.degree;
            let n = split.u.len() as u64;
            if n % divisor != 0 {
                return Err(Error::NonIntegerCount { rank: n, divisor });
            }
            if n > 0 {
                out.push((a, b, n / divisor));
            }
        }
    }
    Ok(out)
}

/// Basis of `ẽ (M̄G) ẽ` at the level of central idempotents: the sum of all
/// `W(v→w)`.
pub fn projected_space(folding: &Folding) -> Result<Vec<Vec<u64>>> {
    let m = ExplicitBimodule::from_folding(folding)?;
    let vs = folding.vertices();
    let mut out = Vec::new();
    for v in &vs {
        for w in &vs {
            let (basis, p) = projected_block(&m, folding, v, w)?;
            out.extend(image_vectors(&m, &basis, &p));
        }
    }
    Ok(out)
}
