//! Worked instances: the binary dihedral group of order 12 on a star with
//! a loop, and two oriented chains glued at their end and swapped by `Z/2`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::io::{ArrowSpec, GeneratorSpec, GroupSpec, InstanceFile, Options, QuiverSpec};
use crate::skew::{Folding, SkewQuiver};

pub const BINARY_DIHEDRAL_STAR: &str = include_str!("../instances/binary-dihedral-star.json");

pub fn binary_dihedral_star() -> InstanceFile {
    InstanceFile::from_json(BINARY_DIHEDRAL_STAR).expect("bundled instance parses")
}

/// Chains `1 → … → n−1 → n` and `1' → … → (n−1)' → n` swapped by the
/// generator `s`; needs `n >= 2`.
pub fn glued_chains(n: usize) -> InstanceFile {
    assert!(n >= 2);
    let top: Vec<String> = (1..n).map(|k| k.to_string()).collect();
    let bottom: Vec<String> = (1..n).map(|k| format!("{k}'")).collect();
    let apex = n.to_string();
    let mut vertices = top.clone();
    vertices.extend(bottom.iter().cloned());
    vertices.push(apex.clone());

    let next = |chain: &[String], k: usize| {
        if k + 1 < chain.len() {
            chain[k + 1].clone()
        } else {
            apex.clone()
        }
    };
    let mut arrows = Vec::new();
    for k in 0..n - 1 {
        arrows.push(ArrowSpec {
            label: format!("x{}", k + 1),
            source: top[k].clone(),
            target: next(&top, k),
        });
    }
    for k in 0..n - 1 {
        arrows.push(ArrowSpec {
            label: format!("y{}", k + 1),
            source: bottom[k].clone(),
            target: next(&bottom, k),
        });
    }
    let mut vertex_perm = bottom.clone();
    vertex_perm.extend(top.iter().cloned());
    vertex_perm.push(apex.clone());
    let mut images = BTreeMap::new();
    for k in 1..n {
        let one = |l: String| BTreeMap::from([(l, "1".to_string())]);
        images.insert(format!("x{k}"), one(format!("y{k}")));
        images.insert(format!("y{k}"), one(format!("x{k}")));
    }
    InstanceFile {
        quiver: QuiverSpec { vertices, arrows },
        group: GroupSpec::Action,
        level: 1,
        generators: vec![GeneratorSpec {
            name: "s".into(),
            element: None,
            vertex_perm,
            images,
        }],
        relations: vec!["s^2".into()],
        expected_order: Some(2),
        pairing: None,
        options: Options::default(),
    }
}

/// Names the vertices of the folded star by their characters, given the
/// group elements `a` and `b`: `0_α` for `a ↦ α²`, `b ↦ α`; `0_rho` and
/// `0_sigma` for the degree-2 characters with value `1` and `-1` at `a`;
/// `1_α` for the character of `G_1 = ⟨b⟩` sending `b` to `α`. Here `α` is
/// one of `1`, `-1`, `i`, `-i`.
pub fn star_vertex_names(folding: &Folding, a: usize, b: usize) -> Result<BTreeMap<String, usize>> {
    let f = folding.field();
    let i = f.zeta_pow(f.level() as i64 / 4);
    let minus = |x: u64| f.neg(x);
    let alphas = [("1", 1), ("-1", minus(1)), ("i", i), ("-i", minus(i))];
    let mut out = BTreeMap::new();
    for (k, v) in folding.vertices().iter().enumerate() {
        let chi = folding.table(v.orbit).irreducible(v.irr_index);
        let vertex = folding.quiver().vertex_labels()[v.rep].as_str();
        let at = |g: usize| chi.at(g).expect("element of the stabilizer");
        let name = match (vertex, v.degree) {
            ("0", 2) if at(a) == 1 => "rho".to_string(),
            ("0", 2) if at(a) == minus(1) => "sigma".to_string(),
            ("0", 1) | ("1", 1) => match alphas.iter().find(|(_, x)| *x == at(b)) {
                Some((name, _)) => name.to_string(),
                None => continue,
            },
            _ => continue,
        };
        out.insert(format!("{vertex}_{name}"), k);
    }
    Ok(out)
}

/// Whether `q` is `1 → 2 → … → n−1` followed by two arrows out of `n−1`
/// into the two vertices over `n`, with vertices labelled as [`Folding`]
/// labels them.
pub fn is_fork(q: &SkewQuiver, n: usize) -> bool {
    let idx = |l: String| q.vertex_index(&l);
    let mut expected = Vec::new();
    for k in 1..n - 1 {
        expected.push((format!("{k}_0"), format!("{}_0", k + 1)));
    }
    expected.push((format!("{}_0", n - 1), format!("{n}_0")));
    expected.push((format!("{}_0", n - 1), format!("{n}_1")));
    if q.vertex_count() != n + 1 || q.arrow_count() != n as u64 {
        return false;
    }
    expected
        .into_iter()
        .all(|(s, t)| matches!((idx(s), idx(t)), (Some(v), Some(w)) if q.mult[v][w] == 1))
}
