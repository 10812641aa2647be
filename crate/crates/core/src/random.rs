//! Seeded random instances: a zoo group acting on a small quiver through
//! monomial representations.
//!
//! Vertex orbits are coset spaces `K\G`. An arrow orbit is induced from a
//! linear character `λ` of a subgroup `L` fixing both endpoints of one
//! arrow, so every instance is a valid linear action by construction.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::CharacterTable;
use crate::cyclo::{CycloMatrix, CycloNumber};
use crate::error::{Error, Result};
use crate::field::choose_prime;
use crate::group::{FiniteGroup, Subgroup};
use crate::quiver::{Arrow, LinearQuiverAction, Quiver};
use crate::zoo::group_zoo;

#[derive(Debug, Clone, Copy)]
pub struct RandomParams {
    pub max_vertices: usize,
    pub max_arrows: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_vertices: 5,
            max_arrows: 6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub group_name: String,
    pub quiver: Quiver,
    pub action: LinearQuiverAction,
}

pub fn random_instance(seed: u64) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_instance_with(&mut rng, RandomParams::default())
}

pub fn random_instance_with<R: Rng + ?Sized>(
    rng: &mut R,
    params: RandomParams,
) -> Result<RandomInstance> {
    let zoo = group_zoo();
    let (name, group) = zoo.choose(rng).expect("zoo is not empty").clone();
    random_instance_for(rng, &name, &group, params)
}

/// Subgroups generated by at most two elements, sorted element lists.
pub fn two_generated_subgroups(group: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for x in group.elements() {
        for y in x..group.order() {
            out.insert(group.generated(&[x, y]));
        }
    }
    out.into_iter().collect()
}

/// Right cosets `Kx` of `sub`: the coset index of every element and one
/// representative per coset.
fn right_cosets(group: &FiniteGroup, sub: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for x in group.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &k in sub {
            coset_of[group.mul(k, x)] = reps.len();
        }
        reps.push(x);
    }
    (coset_of, reps)
}

struct VertexOrbit {
    coset_of: Vec<usize>,
    reps: Vec<usize>,
    offset: usize,
}

pub fn random_instance_for<R: Rng + ?Sized>(
    rng: &mut R,
    group_name: &str,
    group: &Arc<FiniteGroup>,
    params: RandomParams,
) -> Result<RandomInstance> {
    let subgroups = two_generated_subgroups(group);
    let order = group.order();
    let level = group.exponent() as u64;
    let field = choose_prime(level, order as u64)?;
    let mut tables: HashMap<Vec<usize>, CharacterTable> = HashMap::new();

    for _ in 0..1000 {
        // vertex orbits
        let mut orbits: Vec<VertexOrbit> = Vec::new();
        let target = rng.gen_range(1..=params.max_vertices);
        let mut points = 0;
        while points < target {
            let room = target - points;
            let fits: Vec<&Vec<usize>> = subgroups
                .iter()
                .filter(|k| order / k.len() <= room)
                .collect();
            let k = fits.choose(rng).expect("the whole group always fits");
            let (coset_of, reps) = right_cosets(group, k);
            let size = reps.len();
            orbits.push(VertexOrbit {
                coset_of,
                reps,
                offset: points,
            });
            points += size;
        }
        let point_image = |p: usize, g: usize| -> usize {
            let o = orbits
                .iter()
                .rev()
                .find(|o| o.offset <= p)
                .expect("point in an orbit");
            o.offset + o.coset_of[group.mul(o.reps[p - o.offset], g)]
        };
        let vertex_perm: Vec<Vec<usize>> = group
            .elements()
            .map(|g| (0..points).map(|p| point_image(p, g)).collect())
            .collect();
        let stabilizer =
            |p: usize| -> Vec<bool> { group.elements().map(|g| vertex_perm[g][p] == p).collect() };

        // arrow orbits: (source, target, coset reps of L, coset index, character exponents on L)
        let mut arrow_orbits: Vec<(usize, usize, Vec<usize>, Vec<usize>, HashMap<usize, i64>)> =
            Vec::new();
        let arrow_target = rng.gen_range(1..=params.max_arrows);
        let mut arrows = 0;
        for _ in 0..20 {
            if arrows >= arrow_target {
                break;
            }
            let s = rng.gen_range(0..points);
            let t = rng.gen_range(0..points);
            let (ss, st) = (stabilizer(s), stabilizer(t));
            let room = arrow_target - arrows;
            let fits: Vec<&Vec<usize>> = subgroups
                .iter()
                .filter(|l| order / l.len() <= room && l.iter().all(|&x| ss[x] && st[x]))
                .collect();
            let Some(l) = fits.choose(rng) else { continue };
            if !tables.contains_key(*l) {
                let sub = Subgroup::from_elements(group, l)?;
                tables.insert((*l).clone(), CharacterTable::compute(&sub, field)?);
            }
            let table = &tables[*l];
            let linear: Vec<usize> = (0..table.len())
                .filter(|&k| table.degrees()[k] == 1)
                .collect();
            let chi = table.irreducible(*linear.choose(rng).expect("trivial character"));
            let mut exps = HashMap::new();
            for &x in l.iter() {
                let v = chi.at(x).expect("element of L");
                let k = field.discrete_log(v).ok_or_else(|| {
                    Error::Instance("linear character value is not a root of unity".into())
                })?;
                exps.insert(x, k as i64);
            }
            let (coset_of, reps) = right_cosets(group, l);
            arrows += reps.len();
            arrow_orbits.push((s, t, reps, coset_of, exps));
        }
        if arrows == 0 {
            continue;
        }

        let vertex_labels: Vec<String> = (0..points).map(|p| format!("v{p}")).collect();
        let mut arrow_list = Vec::new();
        for (s, t, reps, _, _) in &arrow_orbits {
            for &y in reps {
                arrow_list.push(Arrow {
                    label: format!("a{}", arrow_list.len()),
                    source: vertex_perm[y][*s],
                    target: vertex_perm[y][*t],
                });
            }
        }
        let quiver = Quiver::new(vertex_labels, arrow_list)?;
        let mut matrices = Vec::with_capacity(order);
        for g in group.elements() {
            let mut m = CycloMatrix::zeros(arrows, arrows, level);
            let mut offset = 0;
            for (_, _, reps, coset_of, exps) in &arrow_orbits {
                for (k, &y) in reps.iter().enumerate() {
                    // y g = l y_m
                    let yg = group.mul(y, g);
                    let mi = coset_of[yg];
                    let l = group.mul(yg, group.inv(reps[mi]));
                    m.set(
                        offset + mi,
                        offset + k,
                        CycloNumber::zeta_pow(level, exps[&l]),
                    );
                }
                offset += reps.len();
            }
            matrices.push(m);
        }
        let action = LinearQuiverAction::new(group, vertex_perm, matrices)?;
        return Ok(RandomInstance {
            group_name: group_name.to_string(),
            quiver,
            action,
        });
    }
    Err(Error::Instance(format!(
        "could not place an arrow orbit for {group_name}"
    )))
}
