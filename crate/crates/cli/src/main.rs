use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use skewfold_core::gallery::{binary_dihedral_star, glued_chains, is_fork, star_vertex_names};
use skewfold_core::io::{export_dot, mckay_result, oracle_report, ChoiceReport, Sl2File};
use skewfold_core::mckay::classify_affine;
use skewfold_core::oracle::verify_rg;
use skewfold_core::preprojective::{extend_fold, fold_double_with};
use skewfold_core::random::random_instance;
use skewfold_core::skew::check_choices;
use skewfold_core::zoo::sl2_by_name;
use skewfold_core::{Error, ErrorClass, Folding, Instance, InstanceFile, ResultFile, Sl2Subgroup};

#[derive(Parser)]
#[command(name = "skewfold", version, about = "Quivers of skew group algebras")]
struct Cli {
    /// Prime to compute in, overriding the default choice.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Seed for randomized choices and for `generate`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Structured)]
    emit: Emit,
    /// Refold this many times with random choices and compare.
    #[arg(long, global = true, default_value_t = 0)]
    check_choices: usize,
    /// Record per-stage timings in the result.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Structured,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Quiver of the skew group algebra.
    Fold { instance: PathBuf },
    /// Fold a double quiver declared by a pairing, checking the relation first.
    FoldDouble { instance: PathBuf },
    /// Extend the action to the double quiver contragrediently, then fold.
    ExtendFold { instance: PathBuf },
    /// McKay graph of a subgroup of SL2, by zoo name or generator file.
    Mckay { group: String },
    /// Compare the formula with the explicit bimodule on every vertex pair.
    Verify { instance: PathBuf },
    /// Run the bundled worked examples.
    Selftest,
    /// Write a random instance file.
    Generate,
}

struct Failure {
    error: Error,
    dump: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, dump: None }
    }
}

type Outcome = Result<String, Failure>;

struct Timer {
    enabled: bool,
    start: Instant,
    marks: BTreeMap<String, f64>,
}

impl Timer {
    fn new(enabled: bool) -> Timer {
        Timer {
            enabled,
            start: Instant::now(),
            marks: BTreeMap::new(),
        }
    }

    fn mark(&mut self, stage: &str) {
        if self.enabled {
            self.marks
                .insert(stage.to_string(), self.start.elapsed().as_secs_f64());
            self.start = Instant::now();
        }
    }

    fn attach(self, result: &mut ResultFile) {
        if self.enabled {
            result.timings = Some(self.marks);
        }
    }
}

fn load(path: &Path) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Instance(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json(&text)?.build()
}

fn folding(cli: &Cli, inst: &Instance) -> Result<Folding, Error> {
    let field = inst
        .action
        .default_embedding(&inst.quiver, cli.prime.or(inst.prime))?;
    Folding::new(&inst.quiver, &inst.action, field)
}

fn emit(cli: &Cli, result: &ResultFile) -> String {
    match cli.emit {
        Emit::Structured => result.to_json(),
        Emit::Dot => export_dot(result),
    }
}

fn guard(msg: String, result: &ResultFile) -> Failure {
    Failure {
        error: Error::CheckFailed(msg),
        dump: Some(result.to_json()),
    }
}

fn with_choices(cli: &Cli, f: &Folding, result: &mut ResultFile) -> Result<(), Failure> {
    if cli.check_choices == 0 {
        return Ok(());
    }
    let passed = check_choices(f, cli.check_choices, cli.seed)?;
    result.choices = Some(ChoiceReport {
        rounds: cli.check_choices,
        seed: cli.seed,
        passed,
    });
    if !passed {
        return Err(guard(
            "fold depends on the choice of representatives".into(),
            result,
        ));
    }
    Ok(())
}

fn fold(cli: &Cli, path: &Path) -> Outcome {
    let mut timer = Timer::new(cli.timings);
    let inst = load(path)?;
    timer.mark("parse");
    let f = folding(cli, &inst)?;
    let skew = f.build()?;
    timer.mark("fold");
    let mut result = ResultFile::from_fold(&f, &skew);
    with_choices(cli, &f, &mut result)?;
    timer.mark("choices");
    timer.attach(&mut result);
    Ok(emit(cli, &result))
}

fn fold_double(cli: &Cli, path: &Path) -> Outcome {
    let mut timer = Timer::new(cli.timings);
    let inst = load(path)?;
    let dq = inst
        .double
        .clone()
        .ok_or_else(|| Error::Instance("fold-double needs a pairing declaration".into()))?;
    timer.mark("parse");
    let f = folding(cli, &inst)?;
    let (skew, structure) = fold_double_with(&dq, &f)?;
    timer.mark("fold");
    let mut result = ResultFile::from_fold(&f, &skew);
    result.set_double_structure(&structure);
    with_choices(cli, &f, &mut result)?;
    timer.attach(&mut result);
    Ok(emit(cli, &result))
}

fn extend(cli: &Cli, path: &Path) -> Outcome {
    let mut timer = Timer::new(cli.timings);
    let inst = load(path)?;
    timer.mark("parse");
    let field = inst
        .action
        .default_embedding(&inst.quiver, cli.prime.or(inst.prime))?;
    let ext = extend_fold(&inst.quiver, &inst.action, field)?;
    timer.mark("fold");
    let f = Folding::new(ext.double_quiver.doubled(), &ext.action, field)?;
    let mut result = ResultFile::from_fold(&f, &ext.double);
    result.set_double_structure(&ext.structure);
    result.base_fold = Some(ext.base.mult.clone());
    with_choices(cli, &f, &mut result)?;
    timer.attach(&mut result);
    Ok(emit(cli, &result))
}

fn mckay(cli: &Cli, group: &str) -> Outcome {
    let gens = match sl2_by_name(group) {
        Some(g) => g,
        None => {
            let text = std::fs::read_to_string(group).map_err(|e| {
                Error::Instance(format!(
                    "{group} is neither a zoo name nor a readable file: {e}"
                ))
            })?;
            Sl2File::from_json(&text)?.matrices()?
        }
    };
    let s = Sl2Subgroup::generated(gens)?;
    let result = mckay_result(&s, cli.prime)?;
    let m = result.mckay.as_ref().expect("mckay result");
    if !m.crosscheck || !m.null_root {
        return Err(guard(
            "fold of the loop quiver differs from the McKay graph".into(),
            &result,
        ));
    }
    Ok(emit(cli, &result))
}

fn verify(cli: &Cli, path: &Path) -> Outcome {
    let mut timer = Timer::new(cli.timings);
    let inst = load(path)?;
    let f = folding(cli, &inst)?;
    let skew = f.build()?;
    timer.mark("fold");
    let mut result = ResultFile::from_fold(&f, &skew);
    let report = oracle_report(&f, &skew)?;
    timer.mark("oracle");
    let agrees = report.agrees;
    result.oracle = Some(report);
    timer.attach(&mut result);
    if !agrees {
        return Err(guard(
            "formula and explicit bimodule disagree".into(),
            &result,
        ));
    }
    Ok(emit(cli, &result))
}

fn generate(cli: &Cli) -> Outcome {
    let inst = random_instance(cli.seed)?;
    Ok(InstanceFile::from_action(&inst.quiver, &inst.action).to_json())
}

fn selftest(cli: &Cli) -> Outcome {
    let mut lines = Vec::new();
    let mut all = true;
    let mut check = |name: &str, ok: bool| {
        all &= ok;
        lines.push(format!("{} {name}", if ok { "ok  " } else { "FAIL" }));
    };

    let star = binary_dihedral_star().build()?;
    let f = folding(cli, &star)?;
    let skew = f.build()?;
    let names = star_vertex_names(&f, star.generator_elements[0], star.generator_elements[1])?;
    let m = |v: &str, w: &str| skew.mult[names[v]][names[w]];
    check(
        "star: ten vertices",
        skew.vertex_count() == 10 && names.len() == 10,
    );
    for (v, w, n) in [
        ("0_rho", "0_sigma", 1),
        ("0_1", "0_sigma", 0),
        ("0_i", "0_sigma", 1),
        ("1_i", "0_sigma", 0),
        ("1_1", "0_sigma", 1),
        ("1_1", "0_-1", 1),
    ] {
        check(&format!("star: {v} -> {w} = {n}"), m(v, w) == n);
    }
    check("star: symmetric", skew.is_symmetric());
    check(
        "star: even diagonal",
        (0..skew.vertex_count()).all(|v| skew.mult[v][v] % 2 == 0),
    );
    let centre: Vec<usize> = skew
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.rep == 0)
        .map(|(k, _)| k)
        .collect();
    let sub: Vec<Vec<u64>> = centre
        .iter()
        .map(|&v| centre.iter().map(|&w| skew.mult[v][w]).collect())
        .collect();
    let degrees: Vec<u64> = centre.iter().map(|&v| skew.vertices[v].degree).collect();
    check(
        "star: vertices over 0 form affine D5",
        classify_affine(&sub, &degrees).map(|t| t.to_string()) == Ok("D̃_5".to_string()),
    );
    check("star: oracle agrees", oracle_report(&f, &skew)?.agrees);
    let dq = star.double.clone().expect("star declares a pairing");
    let m = skewfold_core::oracle::ExplicitBimodule::from_folding(&f)?;
    check(
        "star: r_G = #G r",
        verify_rg(&m, &dq, &dq.symplectic(f.field().prime()))?,
    );
    check("star: choices", check_choices(&f, 5, cli.seed)?);

    for n in 3..=6 {
        let inst = glued_chains(n).build()?;
        let skew = folding(cli, &inst)?.build()?;
        check(&format!("glued chains n={n}: fork"), is_fork(&skew, n));
    }

    for name in ["cyclic-2", "cyclic-3", "cyclic-5", "binary-dihedral-12"] {
        let s = Sl2Subgroup::generated(sl2_by_name(name).expect("zoo"))?;
        let r = mckay_result(&s, None)?;
        let mk = r.mckay.expect("mckay");
        check(
            &format!("mckay {name}: {}", mk.affine_type),
            mk.crosscheck && mk.null_root,
        );
    }

    let out = lines.join("\n") + "\n";
    if all {
        Ok(out)
    } else {
        eprint!("{out}");
        Err(Failure {
            error: Error::CheckFailed("selftest".into()),
            dump: None,
        })
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Fold { instance } => fold(cli, instance),
        Command::FoldDouble { instance } => fold_double(cli, instance),
        Command::ExtendFold { instance } => extend(cli, instance),
        Command::Mckay { group } => mckay(cli, group),
        Command::Verify { instance } => verify(cli, instance),
        Command::Selftest => selftest(cli),
        Command::Generate => generate(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { error, dump }) => {
            eprintln!("error: {error}");
            if let Error::InvalidAction(violations) = &error {
                for v in violations {
                    eprintln!("  {v}");
                }
            }
            if let Some(dump) = dump {
                eprintln!("state:\n{dump}");
            }
            ExitCode::from(match error.class() {
                ErrorClass::Input => 1,
                ErrorClass::Hypothesis => 2,
                ErrorClass::Guard => 3,
            })
        }
    }
}
