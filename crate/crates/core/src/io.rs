//! Instance files, result files and DOT export.
//!
//! Both file kinds are JSON. Cyclotomic entries are strings such as
//! `"z^2 - z + 1"` read at the file's declared level.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloMatrix, CycloNumber};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::mckay::{
    loop_double_quiver, mckay_graph_with, null_root_holds, sl2_loop_instance, Sl2Subgroup,
};
use crate::oracle::oracle_mult;
use crate::preprojective::{fold_double_with, DoubleQuiver, DoubleStructure};
use crate::quiver::{Arrow, LinearQuiverAction, Quiver, Violation};
use crate::skew::{Folding, SkewQuiver};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub quiver: QuiverSpec,
    #[serde(default)]
    pub group: GroupSpec,
    /// Root-of-unity level `N` of the cyclotomic entries.
    pub level: u64,
    pub generators: Vec<GeneratorSpec>,
    /// Words in the generator names, `"a^3 = b^2"` or `"b^4"` (meaning `= 1`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_order: Option<usize>,
    /// Arrow pairs `(a, a*)` declaring the quiver as a double quiver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub label: String,
    pub source: String,
    pub target: String,
}

/// How the acting group is given.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// The group generated by the transformations themselves.
    #[default]
    Action,
    /// Multiplication table, `table[g][h] = gh`; generators name elements.
    Cayley { table: Vec<Vec<usize>> },
    /// Permutations of `0..degree` composed left to right; generator `k`
    /// is permutation `element` (default `k`).
    Permutations {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    /// Image of each vertex, in vertex order.
    pub vertex_perm: Vec<String>,
    /// `images[a][b]`: coefficient of `b` in `a^g`. Every arrow must appear.
    pub images: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

impl Options {
    fn is_empty(&self) -> bool {
        self.prime.is_none()
    }
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub quiver: Quiver,
    pub action: LinearQuiverAction,
    pub generator_names: Vec<String>,
    pub generator_elements: Vec<usize>,
    pub double: Option<DoubleQuiver>,
    pub prime: Option<u64>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Instance(msg.into())
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<InstanceFile> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    pub fn build(&self) -> Result<Instance> {
        let vindex: HashMap<&str, usize> = self
            .quiver
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), k))
            .collect();
        let vertex = |label: &str| {
            vindex
                .get(label)
                .copied()
                .ok_or_else(|| bad(format!("unknown vertex {label:?}")))
        };
        let arrows = self
            .quiver
            .arrows
            .iter()
            .map(|a| {
                Ok(Arrow {
                    label: a.label.clone(),
                    source: vertex(&a.source)?,
                    target: vertex(&a.target)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let quiver = Quiver::new(self.quiver.vertices.clone(), arrows)?;
        if self.level == 0 {
            return Err(bad("level must be positive"));
        }

        let mut data = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            data.push(self.generator_data(g, &quiver, &vertex)?);
        }
        let names: Vec<String> = self.generators.iter().map(|g| g.name.clone()).collect();

        let (action, elements) = match &self.group {
            GroupSpec::Action => {
                LinearQuiverAction::generated(&quiver, &data, DEFAULT_CLOSURE_CAP)?
            }
            GroupSpec::Cayley { table } => {
                let group = std::sync::Arc::new(FiniteGroup::from_cayley_table(table)?);
                let e = (0..table.len())
                    .find(|&e| (0..table.len()).all(|g| table[e][g] == g))
                    .unwrap_or(0);
                // the table is relabelled so that the identity is element 0
                let relabel = |x: usize| {
                    if x == e {
                        0
                    } else if x == 0 {
                        e
                    } else {
                        x
                    }
                };
                let mut gens = Vec::new();
                for (spec, (p, m)) in self.generators.iter().zip(&data) {
                    let x = spec
                        .element
                        .ok_or_else(|| bad(format!("generator {} needs an element", spec.name)))?;
                    if x >= table.len() {
                        return Err(bad(format!(
                            "generator {} names element {x} outside the table",
                            spec.name
                        )));
                    }
                    gens.push((relabel(x), p.clone(), m.clone()));
                }
                let elements = gens.iter().map(|g| g.0).collect();
                (
                    LinearQuiverAction::from_generators(&group, &quiver, &gens)?,
                    elements,
                )
            }
            GroupSpec::Permutations { degree, generators } => {
                let (group, perms) = FiniteGroup::from_permutation_generators(
                    *degree,
                    generators,
                    DEFAULT_CLOSURE_CAP,
                )?;
                let group = std::sync::Arc::new(group);
                let mut gens = Vec::new();
                for (k, (spec, (p, m))) in self.generators.iter().zip(&data).enumerate() {
                    let which = spec.element.unwrap_or(k);
                    let perm = generators.get(which).ok_or_else(|| {
                        bad(format!("generator {} has no permutation", spec.name))
                    })?;
                    let x = perms
                        .iter()
                        .position(|q| q == perm)
                        .expect("generator lies in its closure");
                    gens.push((x, p.clone(), m.clone()));
                }
                let elements = gens.iter().map(|g| g.0).collect();
                (
                    LinearQuiverAction::from_generators(&group, &quiver, &gens)?,
                    elements,
                )
            }
        };

        let group = action.group();
        if let Some(expected) = self.expected_order {
            if group.order() != expected {
                return Err(bad(format!(
                    "group has order {}, expected {expected}",
                    group.order()
                )));
            }
        }
        let mut violations = action.validate(&quiver);
        for r in &self.relations {
            if !relation_holds(r, &names, &elements, group)? {
                violations.push(Violation::Relation {
                    relation: r.clone(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidAction(violations));
        }

        let double = match &self.pairing {
            None => None,
            Some(pairs) => {
                let index = |l: &str| {
                    quiver
                        .arrow_index(l)
                        .ok_or_else(|| bad(format!("unknown arrow {l:?} in pairing")))
                };
                let pairs = pairs
                    .iter()
                    .map(|(a, b)| Ok((index(a)?, index(b)?)))
                    .collect::<Result<Vec<_>>>()?;
                Some(DoubleQuiver::from_pairing(&quiver, &pairs)?)
            }
        };
        Ok(Instance {
            quiver,
            action,
            generator_names: names,
            generator_elements: elements,
            double,
            prime: self.options.prime,
        })
    }

    fn generator_data(
        &self,
        g: &GeneratorSpec,
        quiver: &Quiver,
        vertex: &dyn Fn(&str) -> Result<usize>,
    ) -> Result<(Vec<usize>, CycloMatrix)> {
        if g.vertex_perm.len() != quiver.vertex_count() {
            return Err(bad(format!(
                "generator {}: vertex_perm needs one entry per vertex",
                g.name
            )));
        }
        let perm = g
            .vertex_perm
            .iter()
            .map(|v| vertex(v))
            .collect::<Result<Vec<_>>>()?;
        let n = quiver.arrow_count();
        let arrow = |l: &str| {
            quiver
                .arrow_index(l)
                .ok_or_else(|| bad(format!("generator {}: unknown arrow {l:?}", g.name)))
        };
        let mut m = CycloMatrix::zeros(n, n, self.level);
        for (a, images) in &g.images {
            let col = arrow(a)?;
            for (b, coeff) in images {
                m.set(arrow(b)?, col, CycloNumber::parse(coeff, self.level)?);
            }
        }
        if let Some(missing) = quiver
            .arrows()
            .iter()
            .find(|a| !g.images.contains_key(&a.label))
        {
            return Err(bad(format!(
                "generator {}: no image given for arrow {}",
                g.name, missing.label
            )));
        }
        Ok((perm, m))
    }

    /// Describes an action with its full multiplication table.
    pub fn from_action(quiver: &Quiver, action: &LinearQuiverAction) -> InstanceFile {
        let group = action.group();
        let labels = quiver.vertex_labels();
        let generators = group
            .generators()
            .iter()
            .enumerate()
            .map(|(k, &g)| {
                let t = action.arrow_matrix(g);
                let mut images = BTreeMap::new();
                for (col, a) in quiver.arrows().iter().enumerate() {
                    let mut row_map = BTreeMap::new();
                    for (row, b) in quiver.arrows().iter().enumerate() {
                        let x = t.get(row, col);
                        if !x.is_zero() {
                            row_map.insert(b.label.clone(), x.to_string());
                        }
                    }
                    images.insert(a.label.clone(), row_map);
                }
                GeneratorSpec {
                    name: format!("g{k}"),
                    element: Some(g),
                    vertex_perm: action
                        .vertex_perm(g)
                        .iter()
                        .map(|&v| labels[v].clone())
                        .collect(),
                    images,
                }
            })
            .collect();
        InstanceFile {
            quiver: QuiverSpec {
                vertices: labels.to_vec(),
                arrows: quiver
                    .arrows()
                    .iter()
                    .map(|a| ArrowSpec {
                        label: a.label.clone(),
                        source: labels[a.source].clone(),
                        target: labels[a.target].clone(),
                    })
                    .collect(),
            },
            group: GroupSpec::Cayley {
                table: group.table(),
            },
            level: action.level(),
            generators,
            relations: Vec::new(),
            expected_order: Some(group.order()),
            pairing: None,
            options: Options::default(),
        }
    }
}

/// Splits a word into generator names (longest match first) with optional
/// integer exponents `^k`.
fn parse_word(word: &str, names: &[String]) -> Result<Vec<(usize, i64)>> {
    let word: String = word
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*' && *c != '.')
        .collect();
    if word == "1" || word == "e" && !names.iter().any(|n| n == "e") {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(names[k].len()));
    let mut out = Vec::new();
    let mut rest = word.as_str();
    while !rest.is_empty() {
        let k = order
            .iter()
            .copied()
            .find(|&k| !names[k].is_empty() && rest.starts_with(names[k].as_str()))
            .ok_or_else(|| bad(format!("cannot read {rest:?} as a generator")))?;
        rest = &rest[names[k].len()..];
        let mut exp = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let digits = r
                .char_indices()
                .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
                .count();
            exp = r[..digits]
                .parse()
                .map_err(|_| bad(format!("bad exponent in {word:?}")))?;
            rest = &r[digits..];
        }
        out.push((k, exp));
    }
    Ok(out)
}

fn eval_word(word: &[(usize, i64)], elements: &[usize], group: &FiniteGroup) -> usize {
    word.iter().fold(group.identity(), |acc, &(k, e)| {
        let g = if e < 0 {
            group.inv(elements[k])
        } else {
            elements[k]
        };
        group.mul(acc, group.pow(g, e.unsigned_abs() as usize))
    })
}

fn relation_holds(
    relation: &str,
    names: &[String],
    elements: &[usize],
    group: &FiniteGroup,
) -> Result<bool> {
    let mut sides = relation.split('=');
    let lhs = parse_word(sides.next().unwrap_or(""), names)?;
    let rhs = parse_word(sides.next().unwrap_or("1"), names)?;
    if sides.next().is_some() {
        return Err(bad(format!("relation {relation:?} has more than one '='")));
    }
    Ok(eval_word(&lhs, elements, group) == eval_word(&rhs, elements, group))
}

/// Generators of a subgroup of `SL2`, rows of 2×2 matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2File {
    pub level: u64,
    pub generators: Vec<Vec<Vec<String>>>,
}

impl Sl2File {
    pub fn from_json(text: &str) -> Result<Sl2File> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn matrices(&self) -> Result<Vec<CycloMatrix>> {
        self.generators
            .iter()
            .map(|rows| {
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|s| CycloNumber::parse(s, self.level))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                CycloMatrix::from_rows(rows, self.level)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub prime: u64,
    pub level: u64,
    /// Image of `ζ_N` in `F_p`.
    pub omega: u64,
    pub group_order: usize,
    pub vertices: Vec<ResultVertex>,
    /// `mult[v][w]` arrows `v → w`.
    pub mult: Vec<Vec<u64>>,
    pub provenance: Vec<ResultProvenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_structure: Option<Vec<ResultArrow>>,
    /// `Q_G` of the instance before the contragredient extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_fold: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mckay: Option<McKayResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<ChoiceReport>,
    /// Seconds per stage, only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultVertex {
    pub label: String,
    /// The orbit representative.
    pub vertex: String,
    pub degree: u64,
    /// Class representatives of the stabilizer, as group elements.
    pub class_reps: Vec<usize>,
    /// Character values in `F_p` on `class_reps`.
    pub character: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultProvenance {
    pub from: String,
    pub to: String,
    /// `(source, target, count)` per contributing vertex pair of `Q`.
    pub contributions: Vec<(String, String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultArrow {
    pub from: String,
    pub to: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayResult {
    pub affine_type: String,
    pub degrees: Vec<u64>,
    pub mult: Vec<Vec<u64>>,
    pub crosscheck: bool,
    pub null_root: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub agrees: bool,
    pub entries: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub from: String,
    pub to: String,
    pub formula: u64,
    pub oracle: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceReport {
    pub rounds: usize,
    pub seed: u64,
    pub passed: bool,
}

impl ResultFile {
    pub fn from_json(text: &str) -> Result<ResultFile> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes") + "\n"
    }

    pub fn from_fold(folding: &Folding, skew: &SkewQuiver) -> ResultFile {
        let field = folding.field();
        let labels = folding.quiver().vertex_labels();
        let vertices = skew
            .vertices
            .iter()
            .map(|v| {
                let table = folding.table(v.orbit);
                ResultVertex {
                    label: v.label.clone(),
                    vertex: labels[v.rep].clone(),
                    degree: v.degree,
                    class_reps: table.classes().reps().to_vec(),
                    character: table.irreducible(v.irr_index).values().to_vec(),
                }
            })
            .collect();
        let n = skew.vertex_count();
        let mut provenance = Vec::new();
        for v in 0..n {
            for w in 0..n {
                if skew.provenance[v][w].is_empty() {
                    continue;
                }
                provenance.push(ResultProvenance {
                    from: skew.vertices[v].label.clone(),
                    to: skew.vertices[w].label.clone(),
                    contributions: skew.provenance[v][w]
                        .iter()
                        .map(|c| (labels[c.source].clone(), labels[c.target].clone(), c.count))
                        .collect(),
                });
            }
        }
        ResultFile {
            prime: field.prime(),
            level: field.level(),
            omega: field.omega(),
            group_order: folding.action().group().order(),
            vertices,
            mult: skew.mult.clone(),
            provenance,
            double_structure: None,
            base_fold: None,
            mckay: None,
            oracle: None,
            choices: None,
            timings: None,
        }
    }

    pub fn set_double_structure(&mut self, s: &DoubleStructure) {
        let label = |v: usize| self.vertices[v].label.clone();
        self.double_structure = Some(
            s.arrows
                .iter()
                .map(|&(v, w, count)| ResultArrow {
                    from: label(v),
                    to: label(w),
                    count,
                })
                .collect(),
        );
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }
}

/// Compares the formula counts with the explicit construction.
pub fn oracle_report(folding: &Folding, skew: &SkewQuiver) -> Result<OracleReport> {
    let oracle = oracle_mult(folding)?;
    let n = skew.vertex_count();
    let mut mismatches = Vec::new();
    for v in 0..n {
        for w in 0..n {
            if oracle[v][w] != skew.mult[v][w] {
                mismatches.push(Mismatch {
                    from: skew.vertices[v].label.clone(),
                    to: skew.vertices[w].label.clone(),
                    formula: skew.mult[v][w],
                    oracle: oracle[v][w],
                });
            }
        }
    }
    Ok(OracleReport {
        agrees: mismatches.is_empty(),
        entries: n * n,
        mismatches,
    })
}

/// Fold of the loop double quiver of `s` together with its McKay graph.
pub fn mckay_result(s: &Sl2Subgroup, prime: Option<u64>) -> Result<ResultFile> {
    let (q, action) = sl2_loop_instance(s)?;
    let field = action.default_embedding(&q, prime)?;
    let dq = loop_double_quiver(&q)?;
    let folding = Folding::new(&q, &action, field)?;
    let (fold, structure) = fold_double_with(&dq, &folding)?;
    let graph = mckay_graph_with(s, folding.table(0))?;
    let mut result = ResultFile::from_fold(&folding, &fold);
    result.set_double_structure(&structure);
    // one orbit, so vertex k is the k-th irreducible
    let crosscheck = fold.vertices.iter().enumerate().all(|(v, vv)| {
        fold.vertices
            .iter()
            .enumerate()
            .all(|(w, ww)| graph.mult[vv.irr_index][ww.irr_index] == fold.mult[v][w])
    });
    result.mckay = Some(McKayResult {
        affine_type: graph.affine_type.to_string(),
        null_root: null_root_holds(&graph.mult, &graph.degrees),
        degrees: graph.degrees,
        mult: graph.mult,
        crosscheck,
    });
    Ok(result)
}

/// DOT digraph: one node per vertex of `Q_G`, one edge per arrow.
pub fn export_dot(result: &ResultFile) -> String {
    let mut out = String::from("digraph skew_quiver {\n");
    for (k, v) in result.vertices.iter().enumerate() {
        let _ = writeln!(out, "  n{k} [label=\"{} (deg {})\"];", v.label, v.degree);
    }
    for (v, row) in result.mult.iter().enumerate() {
        for (w, &m) in row.iter().enumerate() {
            for _ in 0..m {
                let _ = writeln!(out, "  n{v} -> n{w};");
            }
        }
    }
    out.push_str("}\n");
    out
}
