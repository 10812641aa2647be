//! Shared fixtures for the benchmarks.

use skewfold_core::gallery::{binary_dihedral_star, glued_chains};
use skewfold_core::random::random_instance;
use skewfold_core::{Folding, Instance, LinearQuiverAction, Quiver};

pub struct Fixture {
    pub name: String,
    pub quiver: Quiver,
    pub action: LinearQuiverAction,
}

impl Fixture {
    pub fn folding(&self) -> Folding {
        let field = self
            .action
            .default_embedding(&self.quiver, None)
            .expect("embedding");
        Folding::new(&self.quiver, &self.action, field).expect("folding")
    }
}

fn from_instance(name: &str, inst: Instance) -> Fixture {
    Fixture {
        name: name.to_string(),
        quiver: inst.quiver,
        action: inst.action,
    }
}

pub fn star() -> Fixture {
    from_instance(
        "star",
        binary_dihedral_star().build().expect("bundled instance"),
    )
}

pub fn chains(n: usize) -> Fixture {
    from_instance(
        &format!("glued-chains-{n}"),
        glued_chains(n).build().expect("glued chains"),
    )
}

/// The first `count` random instances from seed 0.
pub fn random(count: u64) -> Vec<Fixture> {
    (0..count)
        .map(|seed| {
            let inst = random_instance(seed).expect("random instance");
            Fixture {
                name: format!("seed-{seed}-{}", inst.group_name),
                quiver: inst.quiver,
                action: inst.action,
            }
        })
        .collect()
}
