use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewfold_core::character::{CharacterTable, ClassFunction};
use skewfold_core::cyclo::CycloNumber;
use skewfold_core::field::choose_prime;
use skewfold_core::group::{ConjugacyClasses, Subgroup};
use skewfold_core::io::{InstanceFile, ResultFile};
use skewfold_core::oracle::{
    block_dimension, bookkeeping_dimension, oracle_arrow_count, oracle_mult, verify_rg,
    ExplicitBimodule,
};
use skewfold_core::preprojective::{
    check_relation_invariance, extend_action_contragredient, fold_double,
};
use skewfold_core::random::{random_instance, two_generated_subgroups, RandomInstance};
use skewfold_core::skew::{check_choices, Folding};
use skewfold_core::zoo::group_zoo;

fn folding(inst: &RandomInstance) -> Folding {
    let field = inst.action.default_embedding(&inst.quiver, None).unwrap();
    Folding::new(&inst.quiver, &inst.action, field).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn orbit_stabilizer_and_pair_orbits(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        let frame = f.frame();
        let order = inst.action.group().order();
        for x in 0..inst.quiver.vertex_count() {
            prop_assert_eq!(frame.orbit(x).len() * frame.stabilizer(x).order(), order);
        }
        let k = frame.orbits().len();
        for oi in 0..k {
            for oj in 0..k {
                let total: usize = f.pairs().orbit_sizes(oi, oj).iter().sum();
                prop_assert_eq!(total, frame.orbits()[oi].len() * frame.orbits()[oj].len());
            }
        }
    }

    #[test]
    fn transporters_conjugate_stabilizers(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        let frame = f.frame();
        let g = inst.action.group();
        for x in 0..inst.quiver.vertex_count() {
            let rep = frame.rep_of(x);
            let kappa = frame.kappa(x);
            prop_assert_eq!(inst.action.vertex_perm(kappa)[rep], x);
            // G_x = κ^{-1} G_rep κ
            let mut moved: Vec<usize> = frame
                .stabilizer(rep)
                .elements()
                .iter()
                .map(|&h| g.mul(g.mul(g.inv(kappa), h), kappa))
                .collect();
            moved.sort_unstable();
            prop_assert_eq!(moved.as_slice(), frame.stabilizer(x).elements());
        }
    }

    #[test]
    fn vertex_count_is_a_sum_of_class_numbers(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        let expected: usize = f
            .frame()
            .reps()
            .iter()
            .map(|&r| ConjugacyClasses::new(f.frame().stabilizer(r)).len())
            .sum();
        prop_assert_eq!(f.build().unwrap().vertex_count(), expected);
    }

    #[test]
    fn formula_matches_explicit_bimodule(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        prop_assert_eq!(oracle_mult(&f).unwrap(), f.build().unwrap().mult);
    }

    #[test]
    fn opposite_quiver_transposes_up_to_duals(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        let q = f.build().unwrap();
        let op = Folding::new(&inst.quiver.opposite(), &inst.action.on_opposite(), f.field()).unwrap().build().unwrap();
        let dual = dual_vertices(&f);
        let n = q.vertex_count();
        let mut self_dual = true;
        for v in 0..n {
            self_dual &= dual[v] == v;
            for w in 0..n {
                prop_assert_eq!(op.mult[v][w], q.mult[dual[w]][dual[v]]);
            }
        }
        if self_dual {
            for v in 0..n {
                for w in 0..n {
                    prop_assert_eq!(op.mult[v][w], q.mult[w][v]);
                }
            }
        }
    }

    #[test]
    fn choices_do_not_matter(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        prop_assert!(check_choices(&folding(&inst), 3, seed).unwrap());
    }

    #[test]
    fn block_dimensions(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        let m = ExplicitBimodule::from_folding(&f).unwrap();
        let vs = f.vertices();
        let reps = f.frame().reps().to_vec();
        for (oi, &i) in reps.iter().enumerate() {
            for (oj, &j) in reps.iter().enumerate() {
                let dim = block_dimension(&m, i, j);
                prop_assert_eq!(bookkeeping_dimension(&f, oi, oj).unwrap(), dim);
                // every isotypic piece is accounted for
                let mut total = 0;
                for v in vs.iter().filter(|v| v.orbit == oi) {
                    for w in vs.iter().filter(|w| w.orbit == oj) {
                        total += v.degree * w.degree * oracle_arrow_count(&m, &f, v, w).unwrap();
                    }
                }
                prop_assert_eq!(total as usize, dim);
            }
        }
    }

    #[test]
    fn contragredient_extension(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let f = folding(&inst);
        let base = f.build().unwrap();
        let (dq, ext) = extend_action_contragredient(&inst.quiver, &inst.action).unwrap();
        let report = check_relation_invariance(&dq, &ext, &f.field()).unwrap();
        prop_assert!(report.invariant && report.relation_fixed);
        let (double, _) = fold_double(&dq, &ext, f.field()).unwrap();
        let n = base.vertex_count();
        for v in 0..n {
            prop_assert_eq!(double.mult[v][v] % 2, 0);
            for w in 0..n {
                prop_assert_eq!(double.mult[v][w], base.mult[v][w] + base.mult[w][v]);
            }
        }
        let df = Folding::new(dq.doubled(), &ext, f.field()).unwrap();
        let m = ExplicitBimodule::from_folding(&df).unwrap();
        prop_assert!(verify_rg(&m, &dq, &dq.symplectic(f.field().prime())).unwrap());
    }

    #[test]
    fn files_round_trip(seed in any::<u64>()) {
        let inst = random_instance(seed).unwrap();
        let file = InstanceFile::from_action(&inst.quiver, &inst.action);
        prop_assert_eq!(InstanceFile::from_json(&file.to_json()).unwrap(), file.clone());
        let built = file.build().unwrap();
        let f = Folding::new(&built.quiver, &built.action, built.action.default_embedding(&built.quiver, None).unwrap()).unwrap();
        let q = f.build().unwrap();
        let result = ResultFile::from_fold(&f, &q);
        let text = result.to_json();
        prop_assert_eq!(ResultFile::from_json(&text).unwrap(), result);
        // a second run from scratch is byte-identical
        let again = file.build().unwrap();
        let f2 = Folding::new(&again.quiver, &again.action, again.action.default_embedding(&again.quiver, None).unwrap()).unwrap();
        prop_assert_eq!(ResultFile::from_fold(&f2, &f2.build().unwrap()).to_json(), text);
    }

    #[test]
    fn embedding_is_a_ring_map(a in prop::collection::vec(-5i64..5, 4), b in prop::collection::vec(-5i64..5, 4)) {
        let level = 12;
        let field = choose_prime(level, 100).unwrap();
        let x = a.iter().enumerate().fold(CycloNumber::zero(level), |acc, (k, &c)| &acc + &(&CycloNumber::zeta_pow(level, k as i64) * &CycloNumber::from_integer(level, c)));
        let y = b.iter().enumerate().fold(CycloNumber::zero(level), |acc, (k, &c)| &acc + &(&CycloNumber::zeta_pow(level, 3 * k as i64) * &CycloNumber::from_integer(level, c)));
        let (ex, ey) = (field.embed(&x).unwrap(), field.embed(&y).unwrap());
        prop_assert_eq!(field.embed(&(&x + &y)).unwrap(), field.add(ex, ey));
        prop_assert_eq!(field.embed(&(&x * &y)).unwrap(), field.mul(ex, ey));
    }
}

/// The vertex carrying `g ↦ χ(g^{-1})` for each vertex `χ`.
fn dual_vertices(f: &Folding) -> Vec<usize> {
    let vs = f.vertices();
    let group = f.action().group();
    vs.iter()
        .map(|v| {
            let table = f.table(v.orbit);
            let chi = table.irreducible(v.irr_index);
            let dual = ClassFunction::from_fn(table.classes(), f.field(), |g| {
                chi.at(group.inv(g)).unwrap()
            });
            let k = table.position(&dual).expect("dual of an irreducible");
            vs.iter()
                .position(|u| u.orbit == v.orbit && u.irr_index == k)
                .unwrap()
        })
        .collect()
}

/// `Ind_K^H ψ (g) = |K|^{-1} Σ_{x ∈ H, x g x^{-1} ∈ K} ψ(x g x^{-1})`.
fn induce(psi: &ClassFunction, target: &Arc<ConjugacyClasses>) -> ClassFunction {
    let field = *psi.field();
    let k = psi.subgroup();
    let group = k.parent();
    let inv_k = field.inv(k.order() as u64).unwrap();
    ClassFunction::from_fn(target, field, |g| {
        let mut acc = 0;
        for &x in target.subgroup().elements() {
            let c = group.mul(group.mul(x, g), group.inv(x));
            if let Some(v) = psi.at(c) {
                acc = field.add(acc, v);
            }
        }
        field.mul(acc, inv_k)
    })
}

#[test]
fn frobenius_reciprocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let zoo = group_zoo();
    for _ in 0..100 {
        let (_, g) = &zoo[rng.gen_range(0..zoo.len())];
        let field = choose_prime(g.exponent() as u64, g.order() as u64).unwrap();
        let subs = two_generated_subgroups(g);
        let k = Subgroup::from_elements(g, &subs[rng.gen_range(0..subs.len())]).unwrap();
        let big = CharacterTable::compute(&Subgroup::whole(g), field).unwrap();
        let small = CharacterTable::compute(&k, field).unwrap();
        let chi = big.irreducible(rng.gen_range(0..big.len()));
        let psi = small.irreducible(rng.gen_range(0..small.len()));
        let lhs = chi
            .restrict(small.classes())
            .unwrap()
            .inner_product(psi)
            .unwrap();
        let rhs = chi.inner_product(&induce(psi, big.classes())).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn character_tables_of_the_zoo() {
    for (name, g) in group_zoo() {
        let field = choose_prime(g.exponent() as u64, g.order() as u64).unwrap();
        let table = CharacterTable::compute(&Subgroup::whole(&g), field).unwrap();
        let squares: u64 = table.degrees().iter().map(|d| d * d).sum();
        assert_eq!(squares, g.order() as u64, "{name}");
        let trivial = ClassFunction::trivial(table.classes(), field);
        for (a, x) in table.irreducibles().iter().enumerate() {
            for (b, y) in table.irreducibles().iter().enumerate() {
                // orthogonality straight from the definition
                let mut acc = 0;
                for h in g.elements() {
                    acc = field.add(acc, field.mul(x.at(h).unwrap(), y.at(g.inv(h)).unwrap()));
                }
                let ip = field.mul(acc, field.inv(g.order() as u64).unwrap());
                assert_eq!(ip, u64::from(a == b), "{name}");
                assert_eq!(
                    x.inner_product(&y.pointwise_product(&trivial).unwrap())
                        .unwrap(),
                    ip
                );
            }
        }
    }
}

#[test]
fn reducible_restriction_on_a_doubled_loop() {
    // dihedral-8 with a loop at a fixed vertex: a degree-2 character of the
    // whole group restricts to twice a linear one on a point stabilizer
    let inst = random_instance(3478543076163218576).unwrap();
    let field = inst.action.default_embedding(&inst.quiver, None).unwrap();
    let (dq, ext) = extend_action_contragredient(&inst.quiver, &inst.action).unwrap();
    let (double, _) = fold_double(&dq, &ext, field).unwrap();
    assert!(double.mult.iter().flatten().any(|&m| m == 2));
}
