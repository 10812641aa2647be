//! Finite subgroups of `SL2` acting on the one-vertex quiver with loops
//! `α`, `α*`, and their McKay graphs.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::character::{CharacterTable, ClassFunction};
use crate::cyclo::CycloMatrix;
use crate::error::{Error, Result};
use crate::field::PrimeEmbedding;
use crate::group::{FiniteGroup, Subgroup, DEFAULT_CLOSURE_CAP};
use crate::preprojective::{fold_double_with, DoubleQuiver};
use crate::quiver::{Arrow, LinearQuiverAction, Quiver};
use crate::skew::Folding;
use crate::zoo::matrix_group;

#[derive(Debug, Clone)]
pub struct Sl2Subgroup {
    generators: Vec<CycloMatrix>,
    group: Arc<FiniteGroup>,
    matrices: Vec<CycloMatrix>,
}

impl Sl2Subgroup {
    pub fn generated(generators: Vec<CycloMatrix>) -> Result<Sl2Subgroup> {
        for (k, m) in generators.iter().enumerate() {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::DimensionMismatch(format!(
                    "generator {k} is not 2x2"
                )));
            }
            if !m.det().is_one() {
                return Err(Error::DeterminantNotOne(k));
            }
        }
        let gens = if generators.is_empty() {
            vec![CycloMatrix::identity(2, 1)]
        } else {
            generators.clone()
        };
        let (group, matrices) = matrix_group(&gens, DEFAULT_CLOSURE_CAP)?;
        Ok(Sl2Subgroup {
            generators,
            group: Arc::new(group),
            matrices,
        })
    }

    pub fn generators(&self) -> &[CycloMatrix] {
        &self.generators
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn matrix(&self, g: usize) -> &CycloMatrix {
        &self.matrices[g]
    }

    /// Trace of the defining representation, on the classes of `table`.
    pub fn natural_character(&self, table: &CharacterTable) -> Result<ClassFunction> {
        let field = *table.field();
        let classes = table.classes();
        let values = classes
            .reps()
            .iter()
            .map(|&g| {
                let m = &self.matrices[g];
                Ok(field.add(field.embed(m.get(0, 0))?, field.embed(m.get(1, 1))?))
            })
            .collect::<Result<Vec<_>>>()?;
        ClassFunction::new(classes, field, values)
    }
}

/// One vertex with loops `α`, `α*`; `g` acts on their span by its matrix.
pub fn sl2_loop_instance(s: &Sl2Subgroup) -> Result<(Quiver, LinearQuiverAction)> {
    let q = Quiver::new(
        vec!["0".into()],
        vec![
            Arrow {
                label: "alpha".into(),
                source: 0,
                target: 0,
            },
            Arrow {
                label: "alpha*".into(),
                source: 0,
                target: 0,
            },
        ],
    )?;
    let n = s.group.order();
    let action =
        LinearQuiverAction::new(&s.group, vec![vec![0]; n], s.matrices.clone())?.validated(&q)?;
    Ok((q, action))
}

pub fn loop_double_quiver(q: &Quiver) -> Result<DoubleQuiver> {
    DoubleQuiver::from_pairing(q, &[(0, 1)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AffineType {
    /// Trivial group: one vertex with a double loop.
    A0,
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::A0 => write!(f, "Ã_0 (double loop)"),
            AffineType::A(n) => write!(f, "Ã_{n}"),
            AffineType::D(n) => write!(f, "D̃_{n}"),
            AffineType::E6 => write!(f, "Ẽ_6"),
            AffineType::E7 => write!(f, "Ẽ_7"),
            AffineType::E8 => write!(f, "Ẽ_8"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayGraph {
    /// Degree of each irreducible, in character-table order.
    pub degrees: Vec<u64>,
    pub mult: Vec<Vec<u64>>,
    pub affine_type: AffineType,
}

impl McKayGraph {
    pub fn is_symmetric(&self) -> bool {
        let n = self.mult.len();
        (0..n).all(|v| (0..n).all(|w| self.mult[v][w] == self.mult[w][v]))
    }
}

/// Default field for `s`, the one the loop instance folds over.
pub fn default_field(s: &Sl2Subgroup) -> Result<PrimeEmbedding> {
    let (q, action) = sl2_loop_instance(s)?;
    action.default_embedding(&q, None)
}

pub fn mckay_graph(s: &Sl2Subgroup) -> Result<McKayGraph> {
    let field = default_field(s)?;
    let table = CharacterTable::compute(&Subgroup::whole(&s.group), field)?;
    mckay_graph_with(s, &table)
}

/// `mult[v][w] = ⟨χ_v, χ_nat·χ_w⟩` over the given character table.
pub fn mckay_graph_with(s: &Sl2Subgroup, table: &CharacterTable) -> Result<McKayGraph> {
    let nat = s.natural_character(table)?;
    let irr = table.irreducibles();
    let mut mult = vec![vec![0; irr.len()]; irr.len()];
    for (v, chi_v) in irr.iter().enumerate() {
        for (w, chi_w) in irr.iter().enumerate() {
            mult[v][w] = chi_v.inner_product(&nat.pointwise_product(chi_w)?)?;
        }
    }
    let degrees = table.degrees().to_vec();
    let affine_type = classify_affine(&mult, &degrees)?;
    Ok(McKayGraph {
        degrees,
        mult,
        affine_type,
    })
}

/// `(2·I − A)·δ = 0`.
pub fn null_root_holds(mult: &[Vec<u64>], degrees: &[u64]) -> bool {
    (0..mult.len()).all(|v| {
        let s: u64 = (0..mult.len()).map(|w| mult[v][w] * degrees[w]).sum();
        s == 2 * degrees[v]
    })
}

/// Affine type of a symmetric adjacency matrix, by degree sequence and arm
/// lengths; `degrees` must be a null root.
pub fn classify_affine(mult: &[Vec<u64>], degrees: &[u64]) -> Result<AffineType> {
    let n = mult.len();
    let fail = |msg: &str| Err(Error::UnrecognizedShape(msg.to_string()));
    if n == 0 {
        return fail("empty graph");
    }
    if (0..n).any(|v| (0..n).any(|w| mult[v][w] != mult[w][v])) {
        return fail("adjacency is not symmetric");
    }
    if !null_root_holds(mult, degrees) {
        return fail("degree vector is not a null root");
    }
    if n == 1 {
        return if mult[0][0] == 2 {
            Ok(AffineType::A0)
        } else {
            fail("single vertex without a double loop")
        };
    }
    if (0..n).any(|v| mult[v][v] != 0) {
        return fail("loop on a vertex");
    }
    if !connected(mult) {
        return fail("disconnected");
    }
    if n == 2 {
        return if mult[0][1] == 2 {
            Ok(AffineType::A(1))
        } else {
            fail("two vertices without a double edge")
        };
    }
    if mult.iter().flatten().any(|&m| m > 1) {
        return fail("multiple edge");
    }
    let valence: Vec<usize> = mult
        .iter()
        .map(|r| r.iter().filter(|&&m| m > 0).count())
        .collect();
    let edges: usize = valence.iter().sum::<usize>() / 2;
    if valence.iter().all(|&d| d == 2) {
        return Ok(AffineType::A(n - 1));
    }
    if edges != n - 1 {
        return fail("not a cycle and not a tree");
    }
    let branch: Vec<usize> = (0..n).filter(|&v| valence[v] >= 3).collect();
    match branch.as_slice() {
        [b] if valence[*b] == 4 && n == 5 => Ok(AffineType::D(4)),
        [b] if valence[*b] == 3 => {
            let mut arms = arm_lengths(mult, &valence, *b);
            arms.sort_unstable();
            match arms.as_slice() {
                [2, 2, 2] => Ok(AffineType::E6),
                [1, 3, 3] => Ok(AffineType::E7),
                [1, 2, 5] => Ok(AffineType::E8),
                _ => fail("unexpected arm lengths"),
            }
        }
        [a, b] if valence[*a] == 3 && valence[*b] == 3 => {
            let short = |x: usize| {
                arm_lengths(mult, &valence, x)
                    .iter()
                    .filter(|&&l| l == 1)
                    .count()
            };
            if short(*a) >= 2 && short(*b) >= 2 {
                Ok(AffineType::D(n - 1))
            } else {
                fail("two branch points without forks")
            }
        }
        _ => fail("unexpected branching"),
    }
}

/// Lengths of the paths from `b` out to leaves, stopping at other branch
/// points (those arms get length 0).
fn arm_lengths(mult: &[Vec<u64>], valence: &[usize], b: usize) -> Vec<usize> {
    let n = mult.len();
    let mut out = Vec::new();
    for start in (0..n).filter(|&w| mult[b][w] > 0) {
        let (mut prev, mut cur, mut len) = (b, start, 1);
        loop {
            if valence[cur] >= 3 {
                len = 0;
                break;
            }
            if valence[cur] == 1 {
                break;
            }
            let next = (0..n)
                .find(|&w| w != prev && mult[cur][w] > 0)
                .expect("valence 2");
            prev = cur;
            cur = next;
            len += 1;
        }
        out.push(len);
    }
    out
}

fn connected(mult: &[Vec<u64>]) -> bool {
    let n = mult.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if mult[v][w] > 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayCrosscheck {
    pub graph: McKayGraph,
    /// Fold of the loop double quiver, indexed by irreducibles.
    pub folded: Vec<Vec<u64>>,
    pub agrees: bool,
}

/// Folds the loop double quiver and compares it with the McKay graph, with
/// the vertex `(0, χ)` identified with `χ`.
pub fn mckay_crosscheck(s: &Sl2Subgroup) -> Result<McKayCrosscheck> {
    let (q, action) = sl2_loop_instance(s)?;
    let field = action.default_embedding(&q, None)?;
    let dq = loop_double_quiver(&q)?;
    let folding = Folding::new(&q, &action, field)?;
    let (fold, _) = fold_double_with(&dq, &folding)?;
    let n = fold.vertex_count();
    let mut folded = vec![vec![0; n]; n];
    for (v, vv) in fold.vertices.iter().enumerate() {
        for (w, ww) in fold.vertices.iter().enumerate() {
            folded[vv.irr_index][ww.irr_index] = fold.mult[v][w];
        }
    }
    let graph = mckay_graph_with(s, folding.table(0))?;
    let agrees = graph.mult == folded;
    Ok(McKayCrosscheck {
        graph,
        folded,
        agrees,
    })
}

/// `true` iff the fold of the loop double quiver equals the McKay graph.
pub fn fold_matches_mckay(s: &Sl2Subgroup) -> bool {
    mckay_crosscheck(s).map(|c| c.agrees).unwrap_or(false)
}
