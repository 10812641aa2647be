//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewfold_core::character::{CharacterTable, ClassFunction};
use skewfold_core::field::choose_prime;
use skewfold_core::gallery::{binary_dihedral_star, glued_chains, star_vertex_names};
use skewfold_core::group::{ConjugacyClasses, Subgroup};
use skewfold_core::mckay::{classify_affine, AffineType};
use skewfold_core::oracle::{oracle_mult, verify_rg, ExplicitBimodule};
use skewfold_core::preprojective::{
    check_relation_invariance, extend_action_contragredient, fold_double,
};
use skewfold_core::random::{random_instance, two_generated_subgroups};
use skewfold_core::zoo::group_zoo;
use skewfold_core::{Folding, ResultFile};

const STAR_LIMIT: Duration = Duration::from_secs(5);
const CHAIN_LIMIT: Duration = Duration::from_secs(1);
const CYCLIC_LIMIT: Duration = Duration::from_secs(2);
const DIHEDRAL_LIMIT: Duration = Duration::from_secs(5);
const ORACLE_SUITE_LIMIT: Duration = Duration::from_secs(60);

const STAR_VERTICES: usize = 8;
const STAR_ENTRIES: usize = 64;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, summary: String) -> Outcome {
    if problems.is_empty() {
        Outcome {
            ok: true,
            detail: summary,
        }
    } else {
        Outcome {
            ok: false,
            detail: problems.join("; "),
        }
    }
}

fn star_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/instances/binary-dihedral-star.json")
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("skewfold-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

/// Runs the binary, returning stdout, exit code and wall time.
fn run(args: &[&str]) -> (String, i32, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_skewfold"))
        .args(args)
        .output()
        .expect("run skewfold");
    let elapsed = start.elapsed();
    (
        String::from_utf8(out.stdout).expect("utf-8 output"),
        out.status.code().unwrap_or(-1),
        elapsed,
    )
}

fn run_result(args: &[&str], problems: &mut Vec<String>) -> Option<(ResultFile, Duration)> {
    let (out, code, t) = run(args);
    if code != 0 {
        problems.push(format!("`{}` exited {code}", args.join(" ")));
        return None;
    }
    match ResultFile::from_json(&out) {
        Ok(r) => Some((r, t)),
        Err(e) => {
            problems.push(format!("`{}` output unreadable: {e}", args.join(" ")));
            None
        }
    }
}

fn star_reproduction() -> Outcome {
    let mut problems = Vec::new();
    let path = star_path();
    let path = path.to_str().unwrap();
    let Some((fold, t_fold)) = run_result(&["fold", path], &mut problems) else {
        return outcome(problems, String::new());
    };
    let Some((verified, t_verify)) = run_result(&["verify", path], &mut problems) else {
        return outcome(problems, String::new());
    };

    let inst = binary_dihedral_star().build().unwrap();
    let field = inst
        .action
        .default_embedding(&inst.quiver, inst.prime)
        .unwrap();
    let f = Folding::new(&inst.quiver, &inst.action, field).unwrap();
    let names =
        star_vertex_names(&f, inst.generator_elements[0], inst.generator_elements[1]).unwrap();
    let n = fold.vertices.len();
    if f.build().unwrap().mult != fold.mult {
        problems.push("binary output differs from the library fold".into());
    }

    if n != STAR_VERTICES {
        problems.push(format!("{n} vertices, expected exactly {STAR_VERTICES}"));
    }
    for (v, w, want) in [
        ("0_rho", "0_sigma", 1),
        ("0_1", "0_sigma", 0),
        ("0_i", "0_sigma", 1),
        ("1_i", "0_sigma", 0),
        ("1_1", "0_sigma", 1),
        ("1_1", "0_-1", 1),
    ] {
        match (names.get(v), names.get(w)) {
            (Some(&a), Some(&b)) if fold.mult[a][b] == want => {}
            (Some(&a), Some(&b)) => {
                problems.push(format!("{v}->{w} = {}, expected {want}", fold.mult[a][b]))
            }
            _ => problems.push(format!("no vertex named {v} or {w}")),
        }
    }
    let symmetric = (0..n).all(|v| (0..n).all(|w| fold.mult[v][w] == fold.mult[w][v]));
    let even = (0..n).all(|v| fold.mult[v][v] % 2 == 0);
    if !symmetric || !even {
        problems.push("matrix is not symmetric with even diagonal".into());
    }
    let centre: Vec<usize> = fold
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.vertex == "0")
        .map(|(k, _)| k)
        .collect();
    let sub: Vec<Vec<u64>> = centre
        .iter()
        .map(|&v| centre.iter().map(|&w| fold.mult[v][w]).collect())
        .collect();
    let degrees: Vec<u64> = centre.iter().map(|&v| fold.vertices[v].degree).collect();
    if centre.len() != 6 || classify_affine(&sub, &degrees).ok() != Some(AffineType::D(5)) {
        problems.push("vertices over 0 do not form affine D5".into());
    }
    let report = verified.oracle.expect("verify attaches an oracle report");
    if !report.agrees {
        problems.push(format!(
            "oracle disagrees on {} entries",
            report.mismatches.len()
        ));
    }
    if report.entries != STAR_ENTRIES {
        problems.push(format!(
            "oracle compared {} entries, expected {STAR_ENTRIES}",
            report.entries
        ));
    }
    if t_fold + t_verify >= STAR_LIMIT {
        problems.push(format!("took {:?}", t_fold + t_verify));
    }
    outcome(
        problems,
        format!(
            "{n} vertices, oracle agrees on {} entries, {:?}",
            report.entries,
            t_fold + t_verify
        ),
    )
}

fn glued_chain_forks(dir: &Path) -> Outcome {
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for n in 3..=6 {
        let path = dir.join(format!("glued-chains-{n}.json"));
        std::fs::write(&path, glued_chains(n).to_json()).unwrap();
        let Some((r, t)) = run_result(&["fold", path.to_str().unwrap()], &mut problems) else {
            continue;
        };
        slowest = slowest.max(t);
        if t >= CHAIN_LIMIT {
            problems.push(format!("n={n} took {t:?}"));
        }
        let idx = |l: String| r.vertex_index(&l);
        let mut arrows = Vec::new();
        for k in 1..n - 1 {
            arrows.push((format!("{k}_0"), format!("{}_0", k + 1)));
        }
        arrows.push((format!("{}_0", n - 1), format!("{n}_0")));
        arrows.push((format!("{}_0", n - 1), format!("{n}_1")));
        let total: u64 = r.mult.iter().flatten().sum();
        let placed = arrows
            .iter()
            .all(|(s, t)| matches!((idx(s.clone()), idx(t.clone())), (Some(v), Some(w)) if r.mult[v][w] == 1));
        if r.vertices.len() != n + 1 || total != n as u64 || !placed {
            problems.push(format!("n={n}: not the fork"));
        }
    }
    outcome(problems, format!("n=3..6 forks, slowest {slowest:?}"))
}

fn is_double_cycle(mult: &[Vec<u64>]) -> bool {
    let m = mult.len();
    if m == 2 {
        return mult[0][1] == 2 && mult[1][0] == 2 && mult[0][0] == 0 && mult[1][1] == 0;
    }
    // every vertex has two neighbours, joined once each, and one walk visits all
    if mult
        .iter()
        .any(|row| row.iter().sum::<u64>() != 2 || row.iter().any(|&x| x > 1))
    {
        return false;
    }
    let (mut prev, mut cur, mut seen) = (usize::MAX, 0, 1);
    loop {
        let next = (0..m).find(|&w| mult[cur][w] == 1 && w != prev).unwrap();
        if next == 0 {
            return seen == m;
        }
        (prev, cur, seen) = (cur, next, seen + 1);
    }
}

fn cyclic_mckay() -> Outcome {
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for m in 2..=8usize {
        let name = format!("cyclic-{m}");
        let Some((r, t)) = run_result(&["mckay", &name], &mut problems) else {
            continue;
        };
        slowest = slowest.max(t);
        let mk = r.mckay.expect("mckay section");
        let want = AffineType::A(m - 1).to_string();
        if !mk.crosscheck
            || !mk.null_root
            || mk.affine_type != want
            || !is_double_cycle(&mk.mult)
            || r.mult != mk.mult
        {
            problems.push(format!("{name}: got {}", mk.affine_type));
        }
        if t >= CYCLIC_LIMIT {
            problems.push(format!("{name} took {t:?}"));
        }
    }
    outcome(
        problems,
        format!("m=2..8 give the double cycles, slowest {slowest:?}"),
    )
}

fn binary_dihedral_mckay() -> Outcome {
    let mut problems = Vec::new();
    let Some((r, t)) = run_result(&["mckay", "binary-dihedral-12"], &mut problems) else {
        return outcome(problems, String::new());
    };
    let mk = r.mckay.expect("mckay section");
    let mut degrees = mk.degrees.clone();
    degrees.sort_unstable();
    if mk.affine_type != AffineType::D(5).to_string()
        || degrees != [1, 1, 1, 1, 2, 2]
        || !mk.crosscheck
        || !mk.null_root
    {
        problems.push(format!(
            "got {} with degrees {:?}",
            mk.affine_type, mk.degrees
        ));
    }
    if t >= DIHEDRAL_LIMIT {
        problems.push(format!("took {t:?}"));
    }
    outcome(problems, format!("{}, {t:?}", mk.affine_type))
}

fn oracle_suite() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut pairs = 0;
    for seed in 0..50 {
        let inst = random_instance(seed).unwrap();
        let field = inst.action.default_embedding(&inst.quiver, None).unwrap();
        let f = Folding::new(&inst.quiver, &inst.action, field).unwrap();
        let q = f.build().unwrap();
        pairs += q.vertex_count() * q.vertex_count();
        if oracle_mult(&f).unwrap() != q.mult {
            problems.push(format!("seed {seed} ({})", inst.group_name));
        }
    }
    let t = start.elapsed();
    if t >= ORACLE_SUITE_LIMIT {
        problems.push(format!("took {t:?}"));
    }
    outcome(
        problems,
        format!("50 instances, {pairs} vertex pairs, {t:?}"),
    )
}

fn choice_invariance(dir: &Path) -> Outcome {
    let mut problems = Vec::new();
    let mut files = vec![star_path()];
    for seed in 0..10 {
        let (out, code, _) = run(&["generate", "--seed", &seed.to_string()]);
        if code != 0 {
            problems.push(format!("generate --seed {seed} exited {code}"));
            continue;
        }
        let path = dir.join(format!("random-{seed}.json"));
        std::fs::write(&path, out).unwrap();
        files.push(path);
    }
    for path in &files {
        let p = path.to_str().unwrap();
        let Some((r, _)) = run_result(&["--check-choices", "5", "fold", p], &mut problems) else {
            continue;
        };
        if !r.choices.is_some_and(|c| c.passed && c.rounds == 5) {
            problems.push(format!("{p}: choices differ"));
        }
    }
    outcome(
        problems,
        format!("{} instances, 5 rounds each", files.len()),
    )
}

fn preprojective_identities() -> Outcome {
    let mut problems = Vec::new();
    let star = binary_dihedral_star().build().unwrap();
    let field = star
        .action
        .default_embedding(&star.quiver, star.prime)
        .unwrap();
    let f = Folding::new(&star.quiver, &star.action, field).unwrap();
    let dq = star.double.clone().unwrap();
    let m = ExplicitBimodule::from_folding(&f).unwrap();
    if !verify_rg(&m, &dq, &dq.symplectic(field.prime())).unwrap() {
        problems.push("r_G fails on the star".into());
    }

    let mut checked = 0;
    let mut seed = 0;
    while checked < 20 {
        let inst = random_instance(1000 + seed).unwrap();
        seed += 1;
        let field = inst.action.default_embedding(&inst.quiver, None).unwrap();
        let base = Folding::new(&inst.quiver, &inst.action, field)
            .unwrap()
            .build()
            .unwrap();
        let (dq, ext) = extend_action_contragredient(&inst.quiver, &inst.action).unwrap();
        let report = check_relation_invariance(&dq, &ext, &field).unwrap();
        if !(report.invariant && report.relation_fixed) {
            problems.push(format!(
                "seed {}: extension does not fix the relation",
                1000 + seed - 1
            ));
            continue;
        }
        checked += 1;
        let df = Folding::new(dq.doubled(), &ext, field).unwrap();
        let m = ExplicitBimodule::from_folding(&df).unwrap();
        if !verify_rg(&m, &dq, &dq.symplectic(field.prime())).unwrap() {
            problems.push(format!("seed {}: r_G fails", 1000 + seed - 1));
        }
        let (double, _) = fold_double(&dq, &ext, field).unwrap();
        let n = base.vertex_count();
        let sum =
            (0..n).all(|v| (0..n).all(|w| double.mult[v][w] == base.mult[v][w] + base.mult[w][v]));
        if !sum {
            problems.push(format!("seed {}: double is not M + M^T", 1000 + seed - 1));
        }
    }
    outcome(
        problems,
        format!("star and {checked} extended random instances"),
    )
}

/// `Ind_K^H ψ`, straight from the averaging formula.
fn induce(psi: &ClassFunction, target: &Arc<ConjugacyClasses>) -> ClassFunction {
    let field = *psi.field();
    let group = psi.subgroup().parent();
    let inv_k = field.inv(psi.subgroup().order() as u64).unwrap();
    ClassFunction::from_fn(target, field, |g| {
        let mut acc = 0;
        for &x in target.subgroup().elements() {
            if let Some(v) = psi.at(group.mul(group.mul(x, g), group.inv(x))) {
                acc = field.add(acc, v);
            }
        }
        field.mul(acc, inv_k)
    })
}

fn character_tables() -> Outcome {
    let mut problems = Vec::new();
    let zoo = group_zoo();
    for (name, g) in &zoo {
        let field = choose_prime(g.exponent() as u64, g.order() as u64).unwrap();
        let table = CharacterTable::compute(&Subgroup::whole(g), field).unwrap();
        if table.degrees().iter().map(|d| d * d).sum::<u64>() != g.order() as u64 {
            problems.push(format!("{name}: degrees"));
        }
        let inv_order = field.inv(g.order() as u64).unwrap();
        for (a, x) in table.irreducibles().iter().enumerate() {
            for (b, y) in table.irreducibles().iter().enumerate() {
                let mut acc = 0;
                for h in g.elements() {
                    acc = field.add(acc, field.mul(x.at(h).unwrap(), y.at(g.inv(h)).unwrap()));
                }
                if field.mul(acc, inv_order) != u64::from(a == b) {
                    problems.push(format!("{name}: rows {a}, {b} not orthonormal"));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let (name, g) = &zoo[rng.gen_range(0..zoo.len())];
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
        if lhs != rhs {
            problems.push(format!(
                "{name}: reciprocity fails on a subgroup of order {}",
                k.order()
            ));
        }
    }
    outcome(
        problems,
        format!("{} groups, 100 reciprocity checks", zoo.len()),
    )
}

fn main() -> ExitCode {
    let dir = scratch();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 star reproduction", Box::new(star_reproduction)),
        (
            "2 glued chains fold to forks",
            Box::new(|| glued_chain_forks(&dir)),
        ),
        ("3 cyclic subgroups of SL2", Box::new(cyclic_mckay)),
        (
            "4 binary dihedral 12 in SL2",
            Box::new(binary_dihedral_mckay),
        ),
        (
            "5 formula = oracle on random instances",
            Box::new(oracle_suite),
        ),
        ("6 choice invariance", Box::new(|| choice_invariance(&dir))),
        (
            "7 preprojective identities",
            Box::new(preprojective_identities),
        ),
        ("8 character tables", Box::new(character_tables)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let o = check();
        failed += usize::from(!o.ok);
        println!(
            "{} criterion {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let _ = std::fs::remove_dir_all(&dir);
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
