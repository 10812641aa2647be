//! Values quoted from the literature for the bundled examples.

use std::collections::BTreeMap;

use skewfold_core::gallery::{binary_dihedral_star, glued_chains, star_vertex_names};
use skewfold_core::mckay::{mckay_crosscheck, AffineType};
use skewfold_core::oracle::oracle_mult;
use skewfold_core::zoo::sl2_by_name;
use skewfold_core::{Folding, SkewQuiver, Sl2Subgroup};

fn star() -> (Folding, SkewQuiver, BTreeMap<String, usize>) {
    let inst = binary_dihedral_star().build().unwrap();
    let field = inst.action.default_embedding(&inst.quiver, None).unwrap();
    let f = Folding::new(&inst.quiver, &inst.action, field).unwrap();
    let q = f.build().unwrap();
    let names =
        star_vertex_names(&f, inst.generator_elements[0], inst.generator_elements[1]).unwrap();
    (f, q, names)
}

#[test]
fn star_stabilizers() {
    let inst = binary_dihedral_star().build().unwrap();
    let perm = inst.action.perm_action().unwrap();
    let frame = skewfold_core::orbit::OrbitFrame::new(inst.action.group(), &perm);
    assert_eq!(frame.reps(), &[0, 1]);
    let orders: Vec<usize> = (0..4).map(|x| frame.stabilizer(x).order()).collect();
    assert_eq!(orders, vec![12, 4, 4, 4]);
    let b = inst.generator_elements[1];
    assert_eq!(
        frame.stabilizer(1).elements(),
        inst.action.group().generated(&[b]).as_slice()
    );
}

#[test]
fn star_quoted_multiplicities() {
    let (_, q, names) = star();
    let m = |v: &str, w: &str| q.mult[names[v]][names[w]];
    assert_eq!(m("0_rho", "0_sigma"), 1);
    assert_eq!(m("0_1", "0_sigma"), 0);
    assert_eq!(m("0_i", "0_sigma"), 1);
    assert_eq!(m("1_i", "0_sigma"), 0);
    assert_eq!(m("1_1", "0_sigma"), 1);
    assert_eq!(m("1_1", "0_-1"), 1);
}

#[test]
fn star_full_picture() {
    // every edge of the drawn quiver is a pair of opposite arrows
    let edges = [
        ("1_-1", "0_1"),
        ("1_-1", "0_sigma"),
        ("1_-i", "0_i"),
        ("1_-i", "0_rho"),
        ("0_1", "0_rho"),
        ("0_-1", "0_rho"),
        ("0_rho", "0_sigma"),
        ("0_sigma", "0_i"),
        ("0_sigma", "0_-i"),
        ("1_1", "0_-1"),
        ("1_1", "0_sigma"),
        ("1_i", "0_-i"),
        ("1_i", "0_rho"),
    ];
    let (_, q, names) = star();
    assert_eq!(q.vertex_count(), 10);
    assert_eq!(names.len(), 10);
    let mut expected = vec![vec![0; 10]; 10];
    for (a, b) in edges {
        expected[names[a]][names[b]] = 1;
        expected[names[b]][names[a]] = 1;
    }
    assert_eq!(q.mult, expected);
}

#[test]
fn star_agrees_with_explicit_bimodule() {
    let (f, q, _) = star();
    assert_eq!(oracle_mult(&f).unwrap(), q.mult);
}

#[test]
fn glued_chains_fold_to_forks() {
    for n in 3..=6 {
        let inst = glued_chains(n).build().unwrap();
        let field = inst.action.default_embedding(&inst.quiver, None).unwrap();
        let q = Folding::new(&inst.quiver, &inst.action, field)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(q.vertex_count(), n + 1);
        assert_eq!(q.arrow_count(), n as u64);
        let idx = |l: &str| q.vertex_index(l).unwrap();
        for k in 1..n - 1 {
            assert_eq!(
                q.mult[idx(&format!("{k}_0"))][idx(&format!("{}_0", k + 1))],
                1
            );
        }
        let fork = idx(&format!("{}_0", n - 1));
        assert_eq!(q.mult[fork][idx(&format!("{n}_0"))], 1);
        assert_eq!(q.mult[fork][idx(&format!("{n}_1"))], 1);
    }
}

#[test]
fn cyclic_subgroups_of_sl2_give_cycles() {
    for m in 2..=8usize {
        let s = Sl2Subgroup::generated(sl2_by_name(&format!("cyclic-{m}")).unwrap()).unwrap();
        let c = mckay_crosscheck(&s).unwrap();
        assert!(c.agrees);
        assert_eq!(c.graph.affine_type, AffineType::A(m - 1));
    }
}

#[test]
fn binary_dihedral_twelve_is_affine_d5() {
    let s = Sl2Subgroup::generated(sl2_by_name("binary-dihedral-12").unwrap()).unwrap();
    let c = mckay_crosscheck(&s).unwrap();
    assert!(c.agrees);
    assert_eq!(c.graph.affine_type, AffineType::D(5));
    let mut degrees = c.graph.degrees.clone();
    degrees.sort_unstable();
    assert_eq!(degrees, vec![1, 1, 1, 1, 2, 2]);
}
