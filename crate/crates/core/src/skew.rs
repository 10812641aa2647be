//! The quiver `Q_G` of the skew group algebra `(kQ)G`.
//!
//! Vertices are pairs `(i, ρ)` with `i` an orbit representative and `ρ` an
//! irreducible character of `G_i`. The number of arrows `(i, ρ) → (j, σ)` is
//!
//! ```text
//! Σ_{(i', j') ∈ F_ij} ⟨ (ρ·κ_i')|_H , (σ·κ_j')|_H · χ_{M_i'j'} ⟩_H,   H = G_i' ∩ G_j'
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::character::{CharacterTable, ClassFunction};
use crate::error::{Error, Result};
use crate::field::PrimeEmbedding;
use crate::group::ConjugacyClasses;
use crate::matrix::ModMatrix;
use crate::orbit::{OrbitFrame, PairOrbitReps, PermAction};
use crate::quiver::{arrow_block, LinearQuiverAction, Quiver};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewVertex {
    /// Index of the orbit of `i` (orbits are ordered by their least vertex).
    pub orbit: usize,
    /// The representative `i ∈ Ĩ`.
    pub rep: usize,
    /// Position of `ρ` in the character table of `G_i`.
    pub irr_index: usize,
    pub degree: u64,
    pub label: String,
}

/// Part of an arrow count coming from one `(i', j') ∈ F_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub source: usize,
    pub target: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewQuiver {
    pub vertices: Vec<SkewVertex>,
    /// `mult[v][w]` arrows from `v` to `w`.
    pub mult: Vec<Vec<u64>>,
    /// Nonzero contributions for each `(v, w)`.
    pub provenance: Vec<Vec<Vec<Contribution>>>,
}

impl SkewQuiver {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> u64 {
        self.mult.iter().flatten().sum()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.mult.len();
        (0..n).all(|v| (0..n).all(|w| self.mult[v][w] == self.mult[w][v]))
    }
}

/// Everything the construction of `Q_G` depends on: the instance, the prime
/// field, and the choices `Ĩ`, `κ` and `F_ij`.
#[derive(Debug, Clone)]
pub struct Folding {
    quiver: Quiver,
    action: LinearQuiverAction,
    field: PrimeEmbedding,
    embedded: Vec<ModMatrix>,
    perm: PermAction,
    frame: OrbitFrame,
    pairs: PairOrbitReps,
    tables: Vec<CharacterTable>,
}

impl Folding {
    /// Validates the action and fixes the canonical choices.
    pub fn new(
        quiver: &Quiver,
        action: &LinearQuiverAction,
        field: PrimeEmbedding,
    ) -> Result<Folding> {
        let violations = action.validate(quiver);
        if !violations.is_empty() {
            return Err(Error::InvalidAction(violations));
        }
        let perm = action.perm_action()?;
        let frame = OrbitFrame::new(action.group(), &perm);
        let pairs = PairOrbitReps::new(&frame, &perm);
        Self::assemble(quiver, action, field, perm, frame, pairs)
    }

    /// Same instance with other choices; the action is not revalidated.
    pub fn with_choices(&self, frame: OrbitFrame, pairs: PairOrbitReps) -> Result<Folding> {
        Self::assemble(
            &self.quiver,
            &self.action,
            self.field,
            self.perm.clone(),
            frame,
            pairs,
        )
    }

    /// Random transporters and pair representatives, and random orbit
    /// representatives when `change_reps` is set.
    pub fn randomized<R: Rng + ?Sized>(&self, rng: &mut R, change_reps: bool) -> Result<Folding> {
        let group = self.action.group();
        let frame = if change_reps {
            OrbitFrame::randomized(group, &self.perm, rng)
        } else {
            OrbitFrame::randomized_transporters(group, &self.perm, rng)
        };
        let pairs = PairOrbitReps::randomized(&frame, &self.perm, rng);
        self.with_choices(frame, pairs)
    }

    fn assemble(
        quiver: &Quiver,
        action: &LinearQuiverAction,
        field: PrimeEmbedding,
        perm: PermAction,
        frame: OrbitFrame,
        pairs: PairOrbitReps,
    ) -> Result<Folding> {
        let embedded = action.embed(&field)?;
        let tables = frame
            .reps()
            .iter()
            .map(|&r| CharacterTable::compute(frame.stabilizer(r), field))
            .collect::<Result<Vec<_>>>()?;
        Ok(Folding {
            quiver: quiver.clone(),
            action: action.clone(),
            field,
            embedded,
            perm,
            frame,
            pairs,
            tables,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn action(&self) -> &LinearQuiverAction {
        &self.action
    }

    pub fn field(&self) -> PrimeEmbedding {
        self.field
    }

    pub fn embedded(&self) -> &[ModMatrix] {
        &self.embedded
    }

    pub fn perm(&self) -> &PermAction {
        &self.perm
    }

    pub fn frame(&self) -> &OrbitFrame {
        &self.frame
    }

    pub fn pairs(&self) -> &PairOrbitReps {
        &self.pairs
    }

    /// Character table of `G_i` for the representative of orbit `o`.
    pub fn table(&self, orbit: usize) -> &CharacterTable {
        &self.tables[orbit]
    }

    /// `I_G` in canonical order: orbit, then irreducible.
    pub fn vertices(&self) -> Vec<SkewVertex> {
        let mut out = Vec::new();
        for (o, &rep) in self.frame.reps().iter().enumerate() {
            for (k, &d) in self.tables[o].degrees().iter().enumerate() {
                out.push(SkewVertex {
                    orbit: o,
                    rep,
                    irr_index: k,
                    degree: d,
                    label: format!("{}_{}", self.quiver.vertex_labels()[rep], k),
                });
            }
        }
        out
    }

    /// `ρ·κ_x`, the irreducible `k` of the representative's stabilizer moved
    /// to `G_x`.
    pub fn twisted_irreducible(
        &self,
        x: usize,
        k: usize,
        classes: &Arc<ConjugacyClasses>,
    ) -> Result<ClassFunction> {
        let o = self.frame.orbit_index(x);
        self.tables[o]
            .irreducible(k)
            .conjugate_twist(self.frame.kappa(x), classes)
    }

    pub fn build(&self) -> Result<SkewQuiver> {
        let vertices = self.vertices();
        let n = vertices.len();
        let offsets: Vec<usize> = {
            let mut acc = 0;
            self.tables
                .iter()
                .map(|t| {
                    let o = acc;
                    acc += t.len();
                    o
                })
                .collect()
        };
        let mut mult = vec![vec![0u64; n]; n];
        let mut provenance = vec![vec![Vec::new(); n]; n];
        let mut point_classes: HashMap<usize, Arc<ConjugacyClasses>> = HashMap::new();
        let mut classes_of = |x: usize| {
            Arc::clone(
                point_classes
                    .entry(x)
                    .or_insert_with(|| Arc::new(ConjugacyClasses::new(self.frame.stabilizer(x)))),
            )
        };
        let orbit_count = self.frame.reps().len();
        for oi in 0..orbit_count {
            for oj in 0..orbit_count {
                for &(ip, jp) in self.pairs.get(oi, oj) {
                    let block = arrow_block(&self.quiver, &self.action, &self.embedded, ip, jp)?;
                    if block.dimension() == 0 {
                        continue;
                    }
                    let h = Arc::new(ConjugacyClasses::new(&block.subgroup));
                    let chi_m = block.character(&h, self.field)?;
                    let ci = classes_of(ip);
                    let cj = classes_of(jp);
                    let left: Vec<ClassFunction> = (0..self.tables[oi].len())
                        .map(|k| self.twisted_irreducible(ip, k, &ci)?.restrict(&h))
                        .collect::<Result<_>>()?;
                    let right: Vec<ClassFunction> = (0..self.tables[oj].len())
                        .map(|k| {
                            self.twisted_irreducible(jp, k, &cj)?
                                .restrict(&h)?
                                .pointwise_product(&chi_m)
                        })
                        .collect::<Result<_>>()?;
                    for (r, rho) in left.iter().enumerate() {
                        for (s, sigma_m) in right.iter().enumerate() {
                            let count = rho.inner_product(sigma_m)?;
                            // ρ restricts reducibly, so only dim ρ · dim(σ ⊗ M) is safe
                            let cap = self.tables[oi].degrees()[r]
                                * self.tables[oj].degrees()[s]
                                * block.dimension() as u64;
                            if count > cap {
                                return Err(Error::InternalBoundExceeded(
                                    count,
                                    self.field.prime(),
                                ));
                            }
                            if count > 0 {
                                let v = offsets[oi] + r;
                                let w = offsets[oj] + s;
                                mult[v][w] += count;
                                provenance[v][w].push(Contribution {
                                    source: ip,
                                    target: jp,
                                    count,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(SkewQuiver {
            vertices,
            mult,
            provenance,
        })
    }

    /// Sends each vertex of `self` to the vertex of `other` it corresponds to
    /// when both describe the same instance with different choices: the
    /// representative of an orbit in `self` is reached from the one in
    /// `other` by `κ`, and irreducibles are matched through the twist by `κ`.
    pub fn matching_to(&self, other: &Folding) -> Result<Vec<usize>> {
        let mine = self.vertices();
        let theirs = other.vertices();
        let mut out = Vec::with_capacity(mine.len());
        for v in &mine {
            let target_classes = self.tables[v.orbit].classes();
            let kappa = other.frame.kappa(v.rep);
            let other_table = &other.tables[v.orbit];
            let mut found = None;
            for k in 0..other_table.len() {
                let moved = other_table
                    .irreducible(k)
                    .conjugate_twist(kappa, target_classes)?;
                if moved.values() == self.tables[v.orbit].irreducible(v.irr_index).values() {
                    found = theirs
                        .iter()
                        .position(|w| w.orbit == v.orbit && w.irr_index == k);
                    break;
                }
            }
            out.push(found.ok_or(Error::ConjugationMismatch(kappa))?);
        }
        Ok(out)
    }
}

/// `Q_G` with canonical choices.
pub fn build_skew_quiver(
    quiver: &Quiver,
    action: &LinearQuiverAction,
    field: PrimeEmbedding,
) -> Result<SkewQuiver> {
    Folding::new(quiver, action, field)?.build()
}

/// Whether `matching` (vertex of `a` ↦ vertex of `b`) carries the arrow
/// multiplicities of `a` onto those of `b`.
pub fn isomorphic_as_labeled(a: &SkewQuiver, b: &SkewQuiver, matching: &[usize]) -> bool {
    let n = a.vertex_count();
    if b.vertex_count() != n || matching.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &m in matching {
        if m >= n || seen[m] {
            return false;
        }
        seen[m] = true;
    }
    (0..n).all(|v| (0..n).all(|w| a.mult[v][w] == b.mult[matching[v]][matching[w]]))
}

/// Refolds `rounds` times with random `Ĩ`, `κ` and `F` and checks each
/// result against the canonical fold under [`Folding::matching_to`].
pub fn check_choices(folding: &Folding, rounds: usize, seed: u64) -> Result<bool> {
    let base = folding.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let other = folding.randomized(&mut rng, true)?;
        let matching = folding.matching_to(&other)?;
        if !isomorphic_as_labeled(&base, &other.build()?, &matching) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{CycloMatrix, CycloNumber};
    use crate::group::FiniteGroup;

    fn fold(q: &Quiver, a: &LinearQuiverAction) -> SkewQuiver {
        let field = a.default_embedding(q, None).unwrap();
        build_skew_quiver(q, a, field).unwrap()
    }

    #[test]
    fn trivial_group_gives_back_the_quiver() {
        let q = Quiver::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 2)]).unwrap();
        let g = Arc::new(FiniteGroup::trivial());
        let s = fold(&q, &LinearQuiverAction::trivial(&g, &q));
        assert_eq!(s.mult, q.adjacency());
    }

    #[test]
    fn negated_loop_swaps_the_two_characters() {
        // Z/2 acting on a single loop by -1: Q_G is a 2-cycle
        let q = Quiver::from_edges(1, &[(0, 0)]).unwrap();
        let neg = CycloMatrix::from_rows(vec![vec![CycloNumber::from_integer(1, -1)]], 1).unwrap();
        let (a, _) = LinearQuiverAction::generated(&q, &[(vec![0], neg)], 10).unwrap();
        let s = fold(&q, &a);
        assert_eq!(s.mult, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn swapped_arrows_fold_to_one() {
        // two arrows 0 -> 1, 0 -> 2 swapped along with 1, 2
        let q = Quiver::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let swap = CycloMatrix::from_rows(
            vec![
                vec![CycloNumber::zero(1), CycloNumber::one(1)],
                vec![CycloNumber::one(1), CycloNumber::zero(1)],
            ],
            1,
        )
        .unwrap();
        let (a, _) = LinearQuiverAction::generated(&q, &[(vec![0, 2, 1], swap)], 10).unwrap();
        let s = fold(&q, &a);
        // vertices 0_0, 0_1 (Z/2 characters at the fixed vertex) and 1_0
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.mult, vec![vec![0, 0, 1], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(
            s.provenance[0][2],
            vec![Contribution {
                source: 0,
                target: 1,
                count: 1
            }]
        );
    }

    #[test]
    fn labeled_isomorphism() {
        let vertex = |k: usize| SkewVertex {
            orbit: 0,
            rep: 0,
            irr_index: k,
            degree: 1,
            label: format!("0_{k}"),
        };
        let s = SkewQuiver {
            vertices: vec![vertex(0), vertex(1)],
            mult: vec![vec![0, 1], vec![0, 0]],
            provenance: vec![vec![Vec::new(); 2]; 2],
        };
        assert!(isomorphic_as_labeled(&s, &s, &[0, 1]));
        assert!(!isomorphic_as_labeled(&s, &s, &[1, 0]));
        assert!(!isomorphic_as_labeled(&s, &s, &[0, 0]));
    }

    #[test]
    fn random_choices_agree_on_a_small_instance() {
        let q = Quiver::from_edges(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let swap = |n: usize, pairs: &[(usize, usize)]| {
            let mut m = CycloMatrix::zeros(n, n, 1);
            for &(r, c) in pairs {
                m.set(r, c, CycloNumber::one(1));
            }
            m
        };
        let t = swap(4, &[(1, 0), (0, 1), (3, 2), (2, 3)]);
        let (a, _) = LinearQuiverAction::generated(&q, &[(vec![0, 2, 1], t)], 10).unwrap();
        let field = a.default_embedding(&q, None).unwrap();
        let canon = Folding::new(&q, &a, field).unwrap();
        let base = canon.build().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let other = canon.randomized(&mut rng, true).unwrap();
            let m = other.matching_to(&canon).unwrap();
            assert!(isomorphic_as_labeled(&other.build().unwrap(), &base, &m));
        }
    }
}
