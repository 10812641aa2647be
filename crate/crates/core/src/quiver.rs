//! Quivers and linear group actions on their path algebras.
//!
//! An action is given per group element by a permutation of the vertices and
//! a matrix on the arrow span. Column `a` of the matrix of `g` holds the
//! coordinates of `a^g`, so for a right action the matrices compose as
//! `T(gh) = T(h) T(g)`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::{action_character, ClassFunction};
use crate::cyclo::CycloMatrix;
use crate::error::{Error, Result};
use crate::field::{choose_prime_above, PrimeEmbedding};
use crate::group::{
    close_under, compose_perm, is_permutation, ConjugacyClasses, FiniteGroup, Subgroup,
};
use crate::matrix::ModMatrix;
use crate::orbit::PermAction;

/// Validation compares every pair of elements up to this group order.
const EXHAUSTIVE_VALIDATION_LIMIT: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_labels: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_labels: Vec<String>, arrows: Vec<Arrow>) -> Result<Quiver> {
        let n = vertex_labels.len();
        for a in &arrows {
            if a.source >= n || a.target >= n {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} has an endpoint out of range",
                    a.label
                )));
            }
        }
        let mut labels: Vec<&str> = arrows.iter().map(|a| a.label.as_str()).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidQuiver(format!(
                "duplicate arrow label {}",
                w[0]
            )));
        }
        Ok(Quiver {
            vertex_labels,
            arrows,
        })
    }

    /// Vertices labeled `0..n` and arrows `(source, target)` labeled `a0, a1, …`.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Quiver> {
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| Arrow {
                label: format!("a{k}"),
                source: s,
                target: t,
            })
            .collect();
        Quiver::new((0..vertices).map(|v| v.to_string()).collect(), arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    /// Indices of the arrows from `i` to `j`.
    pub fn arrows_between(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&k| self.arrows[k].source == i && self.arrows[k].target == j)
            .collect()
    }

    /// Same vertices, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertex_labels: self.vertex_labels.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    label: a.label.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Arrow-count matrix `m[i][j] = #arrows i → j`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for a in &self.arrows {
            m[a.source][a.target] += 1;
        }
        m
    }
}

/// One reason an action fails to be a linear action on the path algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape {
        element: usize,
        detail: String,
    },
    IdentityNotTrivial,
    VertexHomomorphism {
        g: usize,
        h: usize,
        vertex: usize,
    },
    ArrowHomomorphism {
        g: usize,
        h: usize,
        arrow: usize,
    },
    BlockSupport {
        element: usize,
        arrow: usize,
        image: usize,
    },
    NotInvertible {
        element: usize,
    },
    /// A declared relation between generators fails.
    Relation {
        relation: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { element, detail } => write!(f, "element {element}: {detail}"),
            Violation::IdentityNotTrivial => write!(f, "the identity does not act trivially"),
            Violation::VertexHomomorphism { g, h, vertex } => {
                write!(f, "vertex {vertex}: (v^g)^h != v^(gh) for g={g}, h={h}")
            }
            Violation::ArrowHomomorphism { g, h, arrow } => {
                write!(f, "arrow {arrow}: (a^g)^h != a^(gh) for g={g}, h={h}")
            }
            Violation::BlockSupport {
                element,
                arrow,
                image,
            } => write!(
                f,
                "element {element} sends arrow {arrow} onto arrow {image} with the wrong endpoints"
            ),
            Violation::NotInvertible { element } => {
                write!(f, "matrix of element {element} is not invertible")
            }
            Violation::Relation { relation } => write!(f, "relation {relation} does not hold"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearQuiverAction {
    group: Arc<FiniteGroup>,
    level: u64,
    vertex_perm: Vec<Vec<usize>>,
    arrow_matrix: Vec<CycloMatrix>,
}

impl LinearQuiverAction {
    /// Raw per-element data, not validated.
    pub fn new(
        group: &Arc<FiniteGroup>,
        vertex_perm: Vec<Vec<usize>>,
        arrow_matrix: Vec<CycloMatrix>,
    ) -> Result<LinearQuiverAction> {
        if vertex_perm.len() != group.order() || arrow_matrix.len() != group.order() {
            return Err(Error::DimensionMismatch(
                "action data must cover every group element".into(),
            ));
        }
        let level = arrow_matrix
            .iter()
            .fold(1, |acc, m| num_integer::lcm(acc, m.level()));
        let arrow_matrix = arrow_matrix
            .into_iter()
            .map(|m| m.at_level(level))
            .collect();
        Ok(LinearQuiverAction {
            group: Arc::clone(group),
            level,
            vertex_perm,
            arrow_matrix,
        })
    }

    /// Trivial action of `group` on `quiver`.
    pub fn trivial(group: &Arc<FiniteGroup>, quiver: &Quiver) -> LinearQuiverAction {
        let n = group.order();
        LinearQuiverAction {
            group: Arc::clone(group),
            level: 1,
            vertex_perm: vec![(0..quiver.vertex_count()).collect(); n],
            arrow_matrix: vec![CycloMatrix::identity(quiver.arrow_count(), 1); n],
        }
    }

    /// Extends data given on generating elements by the right-action law.
    /// Consistency with the group's relations is left to [`Self::validate`].
    pub fn from_generators(
        group: &Arc<FiniteGroup>,
        quiver: &Quiver,
        generators: &[(usize, Vec<usize>, CycloMatrix)],
    ) -> Result<LinearQuiverAction> {
        let level = generators
            .iter()
            .fold(1, |acc, g| num_integer::lcm(acc, g.2.level()));
        let gen_elems: Vec<usize> = generators.iter().map(|g| g.0).collect();
        let tree = group.bfs_tree(&gen_elems);
        let n = group.order();
        let mut perm: Vec<Option<Vec<usize>>> = vec![None; n];
        let mut mat: Vec<Option<CycloMatrix>> = vec![None; n];
        perm[0] = Some((0..quiver.vertex_count()).collect());
        mat[0] = Some(CycloMatrix::identity(quiver.arrow_count(), level));
        // BFS order: parents are filled before children
        let mut order: Vec<usize> = (1..n).filter(|&g| tree[g].is_some()).collect();
        if order.len() != n - 1 {
            return Err(Error::Instance(
                "the given generators do not generate the group".into(),
            ));
        }
        order.sort_by_key(|&g| depth(&tree, g));
        for g in order {
            let (parent, gen) = tree[g].expect("reached");
            let k = gen_elems.iter().position(|&x| x == gen).expect("generator");
            let (_, gp, gm) = &generators[k];
            if !is_permutation(gp, quiver.vertex_count()) {
                return Err(Error::InvalidPermutation(format!(
                    "generator {gen} does not permute the vertices"
                )));
            }
            if gm.rows() != quiver.arrow_count() || gm.cols() != quiver.arrow_count() {
                return Err(Error::DimensionMismatch(format!(
                    "generator {gen} has a matrix of the wrong size"
                )));
            }
            let pp = perm[parent].as_ref().expect("parent first");
            perm[g] = Some(compose_perm(pp, gp));
            let pm = mat[parent].as_ref().expect("parent first");
            mat[g] = Some(gm.at_level(level).mul(pm));
        }
        let action = LinearQuiverAction {
            group: Arc::clone(group),
            level,
            vertex_perm: perm.into_iter().map(|p| p.expect("filled")).collect(),
            arrow_matrix: mat.into_iter().map(|m| m.expect("filled")).collect(),
        };
        Ok(action)
    }

    /// The group generated by the given transformations themselves.
    pub fn generated(
        quiver: &Quiver,
        generators: &[(Vec<usize>, CycloMatrix)],
        cap: usize,
    ) -> Result<(LinearQuiverAction, Vec<usize>)> {
        let level = generators
            .iter()
            .fold(1, |acc, g| num_integer::lcm(acc, g.1.level()));
        for (k, (p, m)) in generators.iter().enumerate() {
            if !is_permutation(p, quiver.vertex_count()) {
                return Err(Error::InvalidPermutation(format!(
                    "generator {k} does not permute the vertices"
                )));
            }
            if m.rows() != quiver.arrow_count() || m.cols() != quiver.arrow_count() {
                return Err(Error::DimensionMismatch(format!(
                    "generator {k} has a matrix of the wrong size"
                )));
            }
        }
        let gens: Vec<(Vec<usize>, CycloMatrix)> = generators
            .iter()
            .map(|(p, m)| (p.clone(), m.at_level(level)))
            .collect();
        let identity = (
            (0..quiver.vertex_count()).collect::<Vec<_>>(),
            CycloMatrix::identity(quiver.arrow_count(), level),
        );
        let closure = close_under(
            identity,
            &gens,
            |(p, s), (q, t)| (compose_perm(p, q), t.mul(s)),
            cap,
        )?;
        let group = Arc::new(closure.group);
        let (vertex_perm, arrow_matrix) = closure.elements.into_iter().unzip();
        Ok((
            LinearQuiverAction {
                group,
                level,
                vertex_perm,
                arrow_matrix,
            },
            closure.generator_elements,
        ))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Common cyclotomic level of all matrix entries.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn vertex_perm(&self, g: usize) -> &[usize] {
        &self.vertex_perm[g]
    }

    pub fn arrow_matrix(&self, g: usize) -> &CycloMatrix {
        &self.arrow_matrix[g]
    }

    pub fn perm_action(&self) -> Result<PermAction> {
        let points = self.vertex_perm.first().map_or(0, Vec::len);
        PermAction::new(&self.group, points, self.vertex_perm.clone())
    }

    /// Every reason the data fails to define an action on the path algebra.
    pub fn validate(&self, quiver: &Quiver) -> Vec<Violation> {
        let mut out = Vec::new();
        let g = &self.group;
        let nv = quiver.vertex_count();
        let na = quiver.arrow_count();
        for x in g.elements() {
            if !is_permutation(&self.vertex_perm[x], nv) {
                out.push(Violation::Shape {
                    element: x,
                    detail: "vertex map is not a permutation".into(),
                });
            }
            let m = &self.arrow_matrix[x];
            if m.rows() != na || m.cols() != na {
                out.push(Violation::Shape {
                    element: x,
                    detail: format!(
                        "arrow matrix is {}x{}, expected {na}x{na}",
                        m.rows(),
                        m.cols()
                    ),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        if self.vertex_perm[0].iter().enumerate().any(|(i, &v)| i != v)
            || !self.arrow_matrix[0].is_identity()
        {
            out.push(Violation::IdentityNotTrivial);
        }

        for (gg, hh) in self.validation_pairs() {
            let gh = g.mul(gg, hh);
            let composed = compose_perm(&self.vertex_perm[gg], &self.vertex_perm[hh]);
            if let Some(v) = (0..nv).find(|&v| composed[v] != self.vertex_perm[gh][v]) {
                out.push(Violation::VertexHomomorphism {
                    g: gg,
                    h: hh,
                    vertex: v,
                });
            }
            let prod = self.arrow_matrix[hh].mul(&self.arrow_matrix[gg]);
            if let Some(a) = (0..na)
                .find(|&a| (0..na).any(|b| prod.get(b, a) != self.arrow_matrix[gh].get(b, a)))
            {
                out.push(Violation::ArrowHomomorphism {
                    g: gg,
                    h: hh,
                    arrow: a,
                });
            }
        }

        for x in g.elements() {
            let m = &self.arrow_matrix[x];
            let vp = &self.vertex_perm[x];
            for (a, arrow) in quiver.arrows().iter().enumerate() {
                for (b, image) in quiver.arrows().iter().enumerate() {
                    if !m.get(b, a).is_zero()
                        && (image.source != vp[arrow.source] || image.target != vp[arrow.target])
                    {
                        out.push(Violation::BlockSupport {
                            element: x,
                            arrow: a,
                            image: b,
                        });
                    }
                }
            }
            let inv = &self.arrow_matrix[g.inv(x)];
            if !inv.mul(m).is_identity() {
                out.push(Violation::NotInvertible { element: x });
            }
        }
        out
    }

    fn validation_pairs(&self) -> Vec<(usize, usize)> {
        let g = &self.group;
        let n = g.order();
        if n <= EXHAUSTIVE_VALIDATION_LIMIT {
            return g
                .elements()
                .flat_map(|a| g.elements().map(move |b| (a, b)))
                .collect();
        }
        let mut pairs: Vec<(usize, usize)> = g
            .generators()
            .iter()
            .flat_map(|&s| g.elements().flat_map(move |x| [(s, x), (x, s)]))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0xac7);
        pairs.extend((0..2000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
        pairs
    }

    /// Returns `self` if it validates, the collected violations otherwise.
    pub fn validated(self, quiver: &Quiver) -> Result<LinearQuiverAction> {
        let v = self.validate(quiver);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidAction(v))
        }
    }

    /// Arrow matrices mapped into `F_p`.
    pub fn embed(&self, field: &PrimeEmbedding) -> Result<Vec<ModMatrix>> {
        self.arrow_matrix
            .iter()
            .map(|m| {
                let mut out = ModMatrix::zeros(m.rows(), m.cols(), field.prime());
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        out.set(r, c, field.embed(m.get(r, c))?);
                    }
                }
                Ok(out)
            })
            .collect()
    }

    /// Root-of-unity level needed downstream: the group exponent together
    /// with the level of every matrix entry.
    pub fn required_level(&self) -> u64 {
        num_integer::lcm(self.group.exponent() as u64, self.level)
    }

    /// Default prime: smallest `p ≡ 1 (mod N)` above `2·|A|·|G|²` (and the
    /// group order) in which every matrix entry embeds.
    pub fn default_embedding(&self, quiver: &Quiver, prime: Option<u64>) -> Result<PrimeEmbedding> {
        let order = self.group.order() as u64;
        let bound = (2 * quiver.arrow_count() as u64 * order * order).max(order);
        let level = self.required_level();
        match prime {
            Some(p) => {
                let e = PrimeEmbedding::new(p, level, bound)?;
                self.embed(&e)?;
                Ok(e)
            }
            None => {
                let mut start = bound;
                loop {
                    let e = choose_prime_above(level, bound, start)?;
                    match self.embed(&e) {
                        Ok(_) => return Ok(e),
                        Err(Error::DenominatorNotInvertible(..)) => start = e.prime(),
                        Err(other) => return Err(other),
                    }
                }
            }
        }
    }

    /// Same action on the opposite quiver: the arrow span is unchanged.
    pub fn on_opposite(&self) -> LinearQuiverAction {
        self.clone()
    }
}

fn depth(tree: &[Option<(usize, usize)>], mut g: usize) -> usize {
    let mut d = 0;
    while let Some((p, _)) = tree[g] {
        g = p;
        d += 1;
    }
    d
}

/// The arrows `i → j` with the action of `G_i ∩ G_j` on their span.
#[derive(Debug, Clone)]
pub struct ArrowBlock {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
    pub subgroup: Subgroup,
    matrices: Vec<Option<ModMatrix>>,
}

impl ArrowBlock {
    pub fn dimension(&self) -> usize {
        self.arrows.len()
    }

    /// Matrix of an element of `G_i ∩ G_j` on the block.
    pub fn matrix(&self, h: usize) -> Option<&ModMatrix> {
        self.matrices.get(h).and_then(Option::as_ref)
    }

    /// Character of the block as a right module over `G_i ∩ G_j`, on the
    /// given classes (which must be those of that subgroup).
    pub fn character(
        &self,
        classes: &Arc<ConjugacyClasses>,
        field: PrimeEmbedding,
    ) -> Result<ClassFunction> {
        if classes.subgroup() != &self.subgroup {
            return Err(Error::NotASubgroup(
                "block character needs the classes of G_i ∩ G_j".into(),
            ));
        }
        action_character(classes, field, |h| {
            self.matrix(h).expect("h stabilizes the block").clone()
        })
    }
}

/// Extracts the `(i, j)` arrow block from embedded arrow matrices.
pub fn arrow_block(
    quiver: &Quiver,
    action: &LinearQuiverAction,
    embedded: &[ModMatrix],
    i: usize,
    j: usize,
) -> Result<ArrowBlock> {
    let group = action.group();
    let stab: Vec<usize> = group
        .elements()
        .filter(|&g| action.vertex_perm(g)[i] == i && action.vertex_perm(g)[j] == j)
        .collect();
    let subgroup = Subgroup::from_elements(group, &stab)?;
    let arrows = quiver.arrows_between(i, j);
    let all: Vec<usize> = (0..quiver.arrow_count()).collect();
    let mut matrices = vec![None; group.order()];
    for &h in subgroup.elements() {
        let m = &embedded[h];
        let outside: Vec<usize> = all
            .iter()
            .copied()
            .filter(|b| !arrows.contains(b))
            .collect();
        if !m.select(&outside, &arrows).is_zero() {
            return Err(Error::BlockNotStable(i, j));
        }
        matrices[h] = Some(m.select(&arrows, &arrows));
    }
    Ok(ArrowBlock {
        source: i,
        target: j,
        arrows,
        subgroup,
        matrices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloNumber;
    use crate::field::choose_prime;

    fn loop_quiver() -> Quiver {
        Quiver::from_edges(1, &[(0, 0)]).unwrap()
    }

    #[test]
    fn rejects_bad_quivers() {
        assert!(Quiver::from_edges(1, &[(0, 1)]).is_err());
        let dup = vec![
            Arrow {
                label: "a".into(),
                source: 0,
                target: 0,
            },
            Arrow {
                label: "a".into(),
                source: 0,
                target: 0,
            },
        ];
        assert!(Quiver::new(vec!["0".into()], dup).is_err());
    }

    #[test]
    fn trivial_group_is_valid() {
        let q = Quiver::from_edges(3, &[(0, 1), (1, 2), (2, 0), (0, 0)]).unwrap();
        let g = Arc::new(FiniteGroup::trivial());
        assert!(LinearQuiverAction::trivial(&g, &q).validate(&q).is_empty());
    }

    #[test]
    fn negating_a_loop() {
        let q = loop_quiver();
        let neg = CycloMatrix::from_rows(vec![vec![CycloNumber::from_integer(1, -1)]], 1).unwrap();
        let (action, gens) = LinearQuiverAction::generated(&q, &[(vec![0], neg)], 100).unwrap();
        assert_eq!(action.group().order(), 2);
        assert_eq!(gens, vec![1]);
        assert!(action.validate(&q).is_empty());
        let f = choose_prime(2, 10).unwrap();
        let emb = action.embed(&f).unwrap();
        let block = arrow_block(&q, &action, &emb, 0, 0).unwrap();
        assert_eq!(block.dimension(), 1);
        assert_eq!(block.matrix(1).unwrap().get(0, 0), f.prime() - 1);
    }

    #[test]
    fn inconsistent_generator_data_is_reported() {
        // Z/2 from a table, but the generator acts by a 3rd root of unity
        let g = Arc::new(FiniteGroup::from_cayley_table(&[vec![0, 1], vec![1, 0]]).unwrap());
        let q = loop_quiver();
        let w = CycloMatrix::from_rows(vec![vec![CycloNumber::zeta_pow(3, 1)]], 3).unwrap();
        let action = LinearQuiverAction::from_generators(&g, &q, &[(1, vec![0], w)]).unwrap();
        let v = action.validate(&q);
        assert!(
            v.iter()
                .any(|x| matches!(x, Violation::ArrowHomomorphism { .. })),
            "{v:?}"
        );
    }

    #[test]
    fn block_support_violation() {
        // swap the two vertices but keep the arrow 0 -> 0 fixed
        let q = Quiver::from_edges(2, &[(0, 0)]).unwrap();
        let id = CycloMatrix::identity(1, 1);
        let (action, _) = LinearQuiverAction::generated(&q, &[(vec![1, 0], id)], 10).unwrap();
        let v = action.validate(&q);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::BlockSupport { .. })));
    }

    #[test]
    fn empty_block() {
        let q = Quiver::from_edges(2, &[(0, 1)]).unwrap();
        let g = Arc::new(FiniteGroup::trivial());
        let action = LinearQuiverAction::trivial(&g, &q);
        let f = choose_prime(1, 10).unwrap();
        let emb = action.embed(&f).unwrap();
        let block = arrow_block(&q, &action, &emb, 1, 0).unwrap();
        assert_eq!(block.dimension(), 0);
        let cc = Arc::new(ConjugacyClasses::new(&block.subgroup));
        assert_eq!(block.character(&cc, f).unwrap().values(), &[0]);
    }
}
