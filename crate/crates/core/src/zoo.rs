//! Small groups used by tests, benchmarks and the instance generator, and
//! finite subgroups of `SL2` given by cyclotomic generators.

use std::sync::Arc;

use crate::cyclo::{CycloMatrix, CycloNumber};
use crate::error::Result;
use crate::group::{close_under, FiniteGroup, DEFAULT_CLOSURE_CAP};

pub fn cyclic(n: usize) -> FiniteGroup {
    let gen: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
    FiniteGroup::from_permutation_generators(n, &[gen], DEFAULT_CLOSURE_CAP)
        .expect("cyclic groups are small")
        .0
}

pub fn klein_four() -> FiniteGroup {
    FiniteGroup::from_permutation_generators(
        4,
        &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
        DEFAULT_CLOSURE_CAP,
    )
    .expect("order 4")
    .0
}

/// Symmetries of an `n`-gon, order `2n`, for `n >= 3`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<usize> = (0..n).map(|k| (k + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|k| (n - k) % n).collect();
    FiniteGroup::from_permutation_generators(n, &[rot, refl], DEFAULT_CLOSURE_CAP)
        .expect("dihedral groups are small")
        .0
}

pub fn symmetric(n: usize) -> FiniteGroup {
    let mut gens = Vec::new();
    if n > 1 {
        gens.push((0..n).map(|k| (k + 1) % n).collect());
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
    }
    FiniteGroup::from_permutation_generators(n, &gens, DEFAULT_CLOSURE_CAP)
        .expect("small symmetric groups")
        .0
}

/// Group of 2×2 matrices under `g·h ↦ M(h) M(g)`, so that the matrices act
/// on the right; returns the matrix of each element.
pub fn matrix_group(gens: &[CycloMatrix], cap: usize) -> Result<(FiniteGroup, Vec<CycloMatrix>)> {
    let level = gens
        .iter()
        .fold(1, |acc, m| num_integer::lcm(acc, m.level()));
    let n = gens.first().map_or(2, CycloMatrix::rows);
    let gens: Vec<CycloMatrix> = gens.iter().map(|m| m.at_level(level)).collect();
    let c = close_under(CycloMatrix::identity(n, level), &gens, |g, h| h.mul(g), cap)?;
    Ok((c.group, c.elements))
}

fn mat(level: u64, rows: [[&str; 2]; 2]) -> CycloMatrix {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| CycloNumber::parse(s, level).expect("literal"))
                .collect()
        })
        .collect();
    CycloMatrix::from_rows(rows, level).expect("2x2")
}

/// `diag(ζ_n, ζ_n^{-1})`.
pub fn sl2_cyclic(n: u64) -> Vec<CycloMatrix> {
    let mut m = CycloMatrix::zeros(2, 2, n);
    m.set(0, 0, CycloNumber::zeta_pow(n, 1));
    m.set(1, 1, CycloNumber::zeta_pow(n, -1));
    vec![m]
}

/// Binary dihedral group of order `4m`: `diag(ζ_2m, ζ_2m^{-1})` and
/// `[[0, -1], [1, 0]]`.
pub fn sl2_binary_dihedral(order: u64) -> Vec<CycloMatrix> {
    assert!(order % 4 == 0 && order >= 8);
    let m = order / 4;
    let mut gens = sl2_cyclic(2 * m);
    gens.push(mat(2 * m, [["0", "-1"], ["1", "0"]]));
    gens
}

/// Binary tetrahedral group of order 24, generated by the quaternions `i`,
/// `j` and an element of order 3.
pub fn sl2_binary_tetrahedral() -> Vec<CycloMatrix> {
    vec![
        mat(4, [["z", "0"], ["0", "-z"]]),
        mat(4, [["0", "1"], ["-1", "0"]]),
        mat(
            4,
            [
                ["-1/2 + 1/2*z", "1/2 + 1/2*z"],
                ["-1/2 + 1/2*z", "-1/2 - 1/2*z"],
            ],
        ),
    ]
}

pub fn quaternion() -> FiniteGroup {
    matrix_group(&sl2_binary_dihedral(8), DEFAULT_CLOSURE_CAP)
        .expect("order 8")
        .0
}

pub fn binary_dihedral(order: u64) -> FiniteGroup {
    matrix_group(&sl2_binary_dihedral(order), DEFAULT_CLOSURE_CAP)
        .expect("small binary dihedral")
        .0
}

/// Groups of order at most 24 used for random instances.
pub fn group_zoo() -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    for n in [2, 3, 4, 5, 6, 8] {
        out.push((format!("cyclic-{n}"), cyclic(n)));
    }
    out.push(("klein-4".into(), klein_four()));
    for n in [4, 5, 6] {
        out.push((format!("dihedral-{}", 2 * n), dihedral(n)));
    }
    out.push(("symmetric-3".into(), symmetric(3)));
    out.push(("symmetric-4".into(), symmetric(4)));
    out.push(("quaternion-8".into(), quaternion()));
    out.push(("binary-dihedral-12".into(), binary_dihedral(12)));
    out.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

/// Named finite subgroups of `SL2` by their generators: cyclic of order at
/// most 8, binary dihedral of orders 8, 12, 16 and binary tetrahedral.
pub fn sl2_zoo() -> Vec<(String, Vec<CycloMatrix>)> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push((format!("cyclic-{n}"), sl2_cyclic(n)));
    }
    for order in [8, 12, 16] {
        out.push((
            format!("binary-dihedral-{order}"),
            sl2_binary_dihedral(order),
        ));
    }
    out.push(("binary-tetrahedral".into(), sl2_binary_tetrahedral()));
    out
}

/// Generators of a zoo entry by name, e.g. `cyclic-5` or `binary-dihedral-12`.
pub fn sl2_by_name(name: &str) -> Option<Vec<CycloMatrix>> {
    sl2_zoo()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let orders: Vec<usize> = group_zoo().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![2, 3, 4, 5, 6, 8, 4, 8, 10, 12, 6, 24, 8, 12]);
        for (name, gens) in sl2_zoo() {
            let (g, _) = matrix_group(&gens, 1000).unwrap();
            let expected = match name.as_str() {
                "binary-tetrahedral" => 24,
                n if n.starts_with("cyclic-") => n[7..].parse().unwrap(),
                n => n.rsplit('-').next().unwrap().parse().unwrap(),
            };
            assert_eq!(g.order(), expected, "{name}");
        }
    }

    #[test]
    fn sl2_generators_have_determinant_one() {
        for (name, gens) in sl2_zoo() {
            for m in gens {
                assert!(m.det().is_one(), "{name}");
            }
        }
    }

    #[test]
    fn binary_tetrahedral_exponent() {
        let (g, _) = matrix_group(&sl2_binary_tetrahedral(), 1000).unwrap();
        assert_eq!(g.exponent(), 12);
    }
}
