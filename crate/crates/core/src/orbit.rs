//! Orbits, stabilizers, transporters and diagonal pair orbits for a right
//! action of a finite group on a finite set.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// A right action on `0..points`, materialized per group element:
/// `images[g][x] = x^g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermAction {
    points: usize,
    images: Vec<Vec<usize>>,
}

impl PermAction {
    /// Checks the homomorphism law `(x^g)^h = x^{gh}`.
    pub fn new(group: &FiniteGroup, points: usize, images: Vec<Vec<usize>>) -> Result<PermAction> {
        if images.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} point maps for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        for (g, img) in images.iter().enumerate() {
            if !crate::group::is_permutation(img, points) {
                return Err(Error::InvalidPermutation(format!(
                    "element {g} does not permute the points"
                )));
            }
        }
        let action = PermAction { points, images };
        if let Some((g, h, x)) = action.homomorphism_witness(group) {
            return Err(Error::NotAnAction { g, h, point: x });
        }
        Ok(action)
    }

    /// Action of a group on the points it was generated from.
    pub fn from_element_perms(group: &FiniteGroup, perms: Vec<Vec<usize>>) -> Result<PermAction> {
        let points = perms.first().map_or(0, Vec::len);
        Self::new(group, points, perms)
    }

    pub fn trivial(group: &FiniteGroup, points: usize) -> PermAction {
        PermAction {
            points,
            images: vec![(0..points).collect(); group.order()],
        }
    }

    fn homomorphism_witness(&self, group: &FiniteGroup) -> Option<(usize, usize, usize)> {
        let n = group.order();
        let exhaustive = n * n * self.points.max(1) <= 10_000_000;
        let lefts: Vec<usize> = if exhaustive {
            group.elements().collect()
        } else {
            group.generators().to_vec()
        };
        for &h in group.elements().collect::<Vec<_>>().iter() {
            for &g in &lefts {
                let gh = group.mul(g, h);
                for x in 0..self.points {
                    if self.images[h][self.images[g][x]] != self.images[gh][x] {
                        return Some((g, h, x));
                    }
                }
            }
        }
        None
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.images[g][x]
    }

    pub fn images(&self, g: usize) -> &[usize] {
        &self.images[g]
    }
}

/// Orbit representatives `Ĩ`, transporters `κ_i` with `rep(i)^{κ_i} = i`,
/// and stabilizers `G_i`.
#[derive(Debug, Clone)]
pub struct OrbitFrame {
    group: Arc<FiniteGroup>,
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    reps: Vec<usize>,
    kappa: Vec<usize>,
    stabilizers: Vec<Subgroup>,
}

impl OrbitFrame {
    /// Canonical frame: minimal point of each orbit as representative,
    /// transporters found by breadth-first search over the generators.
    pub fn new(group: &Arc<FiniteGroup>, action: &PermAction) -> OrbitFrame {
        let (orbit_of, orbits) = orbits_of(group, action);
        let reps: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
        let mut kappa = vec![0; action.points()];
        for &rep in &reps {
            // BFS tree over generator applications, rooted at rep
            let mut seen = vec![false; action.points()];
            seen[rep] = true;
            let mut queue = VecDeque::from([rep]);
            while let Some(x) = queue.pop_front() {
                for &g in group.generators() {
                    let y = action.apply(g, x);
                    if !seen[y] {
                        seen[y] = true;
                        kappa[y] = group.mul(kappa[x], g);
                        queue.push_back(y);
                    }
                }
            }
        }
        let stabilizers = stabilizers(group, action);
        OrbitFrame {
            group: Arc::clone(group),
            orbit_of,
            orbits,
            reps,
            kappa,
            stabilizers,
        }
    }

    /// Frame with uniformly random representatives and transporters.
    pub fn randomized<R: Rng + ?Sized>(
        group: &Arc<FiniteGroup>,
        action: &PermAction,
        rng: &mut R,
    ) -> OrbitFrame {
        let (orbit_of, orbits) = orbits_of(group, action);
        let reps: Vec<usize> = orbits
            .iter()
            .map(|o| *o.choose(rng).expect("orbits are nonempty"))
            .collect();
        Self::with_reps_randomized(group, action, orbit_of, orbits, reps, rng)
    }

    /// Keeps the canonical representatives but draws random transporters.
    pub fn randomized_transporters<R: Rng + ?Sized>(
        group: &Arc<FiniteGroup>,
        action: &PermAction,
        rng: &mut R,
    ) -> OrbitFrame {
        let (orbit_of, orbits) = orbits_of(group, action);
        let reps: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
        Self::with_reps_randomized(group, action, orbit_of, orbits, reps, rng)
    }

    fn with_reps_randomized<R: Rng + ?Sized>(
        group: &Arc<FiniteGroup>,
        action: &PermAction,
        orbit_of: Vec<usize>,
        orbits: Vec<Vec<usize>>,
        reps: Vec<usize>,
        rng: &mut R,
    ) -> OrbitFrame {
        let mut kappa = vec![0; action.points()];
        for (x, slot) in kappa.iter_mut().enumerate() {
            let rep = reps[orbit_of[x]];
            let candidates: Vec<usize> = group
                .elements()
                .filter(|&g| action.apply(g, rep) == x)
                .collect();
            *slot = if x == rep {
                0
            } else {
                *candidates.choose(rng).expect("x lies in the orbit of rep")
            };
        }
        let stabilizers = stabilizers(group, action);
        OrbitFrame {
            group: Arc::clone(group),
            orbit_of,
            orbits,
            reps,
            kappa,
            stabilizers,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.orbit_of.len()
    }

    /// The representatives `Ĩ`, in orbit order.
    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_index(&self, x: usize) -> usize {
        self.orbit_of[x]
    }

    pub fn orbit(&self, x: usize) -> &[usize] {
        &self.orbits[self.orbit_of[x]]
    }

    /// `i_∘`
    pub fn rep_of(&self, x: usize) -> usize {
        self.reps[self.orbit_of[x]]
    }

    /// `κ_x`
    pub fn kappa(&self, x: usize) -> usize {
        self.kappa[x]
    }

    /// `G_x`
    pub fn stabilizer(&self, x: usize) -> &Subgroup {
        &self.stabilizers[x]
    }
}

fn orbits_of(group: &FiniteGroup, action: &PermAction) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut orbit_of = vec![usize::MAX; action.points()];
    let mut orbits = Vec::new();
    for x in 0..action.points() {
        if orbit_of[x] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = group.elements().map(|g| action.apply(g, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &y in &orbit {
            orbit_of[y] = orbits.len();
        }
        orbits.push(orbit);
    }
    (orbit_of, orbits)
}

fn stabilizers(group: &Arc<FiniteGroup>, action: &PermAction) -> Vec<Subgroup> {
    (0..action.points())
        .map(|x| {
            let els: Vec<usize> = group
                .elements()
                .filter(|&g| action.apply(g, x) == x)
                .collect();
            Subgroup::from_elements(group, &els).expect("stabilizers are subgroups")
        })
        .collect()
}

/// `F_ij`: one representative per diagonal orbit on `O_i × O_j`, for every
/// ordered pair of orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrbitReps {
    // reps[oi][oj]
    reps: Vec<Vec<Vec<(usize, usize)>>>,
    // sizes of the corresponding orbits
    sizes: Vec<Vec<Vec<usize>>>,
}

impl PairOrbitReps {
    /// Lexicographically minimal pair of each diagonal orbit.
    pub fn new(frame: &OrbitFrame, action: &PermAction) -> PairOrbitReps {
        Self::build(frame, action, |orbit| orbit[0])
    }

    /// Uniformly random pair of each diagonal orbit.
    pub fn randomized<R: Rng + ?Sized>(
        frame: &OrbitFrame,
        action: &PermAction,
        rng: &mut R,
    ) -> PairOrbitReps {
        Self::build(frame, action, |orbit| *orbit.choose(rng).expect("nonempty"))
    }

    fn build(
        frame: &OrbitFrame,
        action: &PermAction,
        mut pick: impl FnMut(&[(usize, usize)]) -> (usize, usize),
    ) -> PairOrbitReps {
        let group = frame.group();
        let k = frame.orbits().len();
        let mut reps = vec![vec![Vec::new(); k]; k];
        let mut sizes = vec![vec![Vec::new(); k]; k];
        let n = action.points();
        for oi in 0..k {
            for oj in 0..k {
                let mut seen = vec![false; n * n];
                for &x in &frame.orbits()[oi] {
                    for &y in &frame.orbits()[oj] {
                        if seen[x * n + y] {
                            continue;
                        }
                        let mut orbit: Vec<(usize, usize)> = group
                            .elements()
                            .map(|g| (action.apply(g, x), action.apply(g, y)))
                            .collect();
                        orbit.sort_unstable();
                        orbit.dedup();
                        for &(a, b) in &orbit {
                            seen[a * n + b] = true;
                        }
                        reps[oi][oj].push(pick(&orbit));
                        sizes[oi][oj].push(orbit.len());
                    }
                }
            }
        }
        PairOrbitReps { reps, sizes }
    }

    /// `F_ij` for the orbits with indices `oi`, `oj`.
    pub fn get(&self, oi: usize, oj: usize) -> &[(usize, usize)] {
        &self.reps[oi][oj]
    }

    pub fn orbit_sizes(&self, oi: usize, oj: usize) -> &[usize] {
        &self.sizes[oi][oj]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn swap_group() -> (Arc<FiniteGroup>, PermAction) {
        let (g, perms) = FiniteGroup::from_permutation_generators(2, &[vec![1, 0]], 10).unwrap();
        let action = PermAction::from_element_perms(&g, perms).unwrap();
        (Arc::new(g), action)
    }

    #[test]
    fn trivial_group_frame() {
        let g = Arc::new(FiniteGroup::trivial());
        let action = PermAction::trivial(&g, 3);
        let frame = OrbitFrame::new(&g, &action);
        assert_eq!(frame.reps(), &[0, 1, 2]);
        for x in 0..3 {
            assert_eq!(frame.stabilizer(x).order(), 1);
            assert_eq!(frame.kappa(x), 0);
        }
        let pairs = PairOrbitReps::new(&frame, &action);
        assert_eq!(pairs.get(1, 2), &[(1, 2)]);
    }

    #[test]
    fn swapped_pair_has_two_diagonal_orbits() {
        let (g, action) = swap_group();
        let frame = OrbitFrame::new(&g, &action);
        let pairs = PairOrbitReps::new(&frame, &action);
        assert_eq!(pairs.get(0, 0), &[(0, 0), (0, 1)]);
        assert_eq!(pairs.orbit_sizes(0, 0), &[2, 2]);
    }

    #[test]
    fn rejects_non_actions() {
        let (g, _) = swap_group();
        // both elements act as the swap: not a homomorphism
        let err = PermAction::new(&g, 2, vec![vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotAnAction { .. }));
    }

    #[test]
    fn randomized_frames_are_valid() {
        let (g, perms) =
            FiniteGroup::from_permutation_generators(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 100)
                .unwrap();
        let g = Arc::new(g);
        let action = PermAction::from_element_perms(&g, perms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let frame = OrbitFrame::randomized(&g, &action, &mut rng);
            for x in 0..4 {
                assert_eq!(action.apply(frame.kappa(x), frame.rep_of(x)), x);
            }
            assert_eq!(frame.kappa(frame.reps()[0]), 0);
        }
    }
}
