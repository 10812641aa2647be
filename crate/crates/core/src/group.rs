//! Finite groups as materialized Cayley tables.
//!
//! Elements are dense indices `0..order` with the identity at `0`. The
//! product `mul(g, h)` is written `gh`; actions are right actions, so a point
//! `x` moved by `gh` equals `x` moved by `g` and then by `h`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default cap on the number of elements produced by a closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Groups up to this order have associativity checked on every triple.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    // row-major, cayley[g * order + h] = gh
    cayley: Vec<usize>,
    inverse: Vec<usize>,
    element_order: Vec<usize>,
    generators: Vec<usize>,
    generator_labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a square multiplication table and relabels its identity to `0`.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {r} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::MalformedTable(format!(
                    "entry {bad} out of range in row {r}"
                )));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(Error::NoIdentity)?;

        // swap labels 0 and e
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut cayley = vec![0; n * n];
        for g in 0..n {
            for h in 0..n {
                cayley[relabel(g) * n + relabel(h)] = relabel(table[g][h]);
            }
        }
        let mul = |a: usize, b: usize| cayley[a * n + b];

        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| mul(g, h) == 0 && mul(h, g) == 0) {
                Some(h) => inverse[g] = h,
                None => return Err(Error::NoInverse(relabel(g))),
            }
        }

        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                Err(Error::NotAssociative(relabel(a), relabel(b), relabel(c)))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                check(
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                )?;
            }
        }
        Ok(Self::assemble(n, cayley, inverse))
    }

    fn assemble(order: usize, cayley: Vec<usize>, inverse: Vec<usize>) -> FiniteGroup {
        let mut element_order = vec![0; order];
        for (g, slot) in element_order.iter_mut().enumerate() {
            let mut x = g;
            let mut k = 1;
            while x != 0 {
                x = cayley[x * order + g];
                k += 1;
            }
            *slot = k;
        }
        let mut group = FiniteGroup {
            order,
            cayley,
            inverse,
            element_order,
            generators: Vec::new(),
            generator_labels: None,
        };
        group.generators = group.greedy_generators(&(0..order).collect::<Vec<_>>());
        group
    }

    /// Builds a group from a table produced by a closure, which is a group by
    /// construction.
    fn from_closure_table(order: usize, cayley: Vec<usize>, gens: Vec<usize>) -> FiniteGroup {
        let mut inverse = vec![0; order];
        for g in 0..order {
            inverse[g] = (0..order)
                .find(|&h| cayley[g * order + h] == 0)
                .expect("closure is a group");
        }
        let mut group = Self::assemble(order, cayley, inverse);
        let mut gens: Vec<usize> = gens.into_iter().filter(|&g| g != 0).collect();
        gens.dedup();
        if !gens.is_empty() {
            group.generators = gens;
        }
        group
    }

    /// Group generated by permutations of `0..degree` under composition
    /// `(p q)(x) = q(p(x))`. Returns the group together with the permutation
    /// of each element.
    pub fn from_permutation_generators(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
        for (k, p) in gens.iter().enumerate() {
            if !is_permutation(p, degree) {
                return Err(Error::InvalidPermutation(format!(
                    "generator {k} is not a permutation of 0..{degree}"
                )));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let closure = close_under(identity, gens, |p, q| compose_perm(p, q), cap)?;
        Ok((closure.group, closure.elements))
    }

    pub fn trivial() -> FiniteGroup {
        Self::from_closure_table(1, vec![0], vec![])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.element_order[g]
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.element_order
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut x = 0;
        for _ in 0..(k % self.element_order[g]) {
            x = self.mul(x, g);
        }
        x
    }

    /// `k g k^{-1}`
    pub fn conj(&self, k: usize, g: usize) -> usize {
        self.mul(self.mul(k, g), self.inv(k))
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.element_order
            .iter()
            .fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_labels(&self) -> Option<&[String]> {
        self.generator_labels.as_deref()
    }

    pub fn with_generator_labels(mut self, labels: Vec<String>) -> Self {
        self.generator_labels = Some(labels);
        self
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.cayley.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Elements generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut list = vec![0];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        list
    }

    /// Generators picked greedily in index order from `elements`.
    fn greedy_generators(&self, elements: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = vec![false; self.order];
        member[0] = true;
        for &g in elements {
            if !member[g] {
                gens.push(g);
                for x in self.generated(&gens) {
                    member[x] = true;
                }
            }
        }
        gens
    }

    /// Word in the generators reaching every element, by breadth-first search.
    /// `words[g] = Some((parent, generator))` with `g = parent * generator`.
    pub fn bfs_tree(&self, gens: &[usize]) -> Vec<Option<(usize, usize)>> {
        let mut tree = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, g));
                    queue.push_back(y);
                }
            }
        }
        tree
    }
}

pub fn is_permutation(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Right-action composition: first `p`, then `q`.
pub fn compose_perm(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

/// Result of closing a generating set under a multiplication.
#[derive(Debug, Clone)]
pub struct Closure<T> {
    pub group: FiniteGroup,
    pub elements: Vec<T>,
    /// Element index of each input generator.
    pub generator_elements: Vec<usize>,
}

/// Breadth-first closure of `gens` under `mul`, materializing the Cayley table.
///
/// Element `0` is `identity`; the remaining elements appear in BFS order.
pub fn close_under<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<Closure<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    index.insert(identity, 0);
    // right[x][k] = index of elements[x] * gens[k]
    let mut right: Vec<Vec<usize>> = Vec::new();
    // parent[x] = (y, k) with x = y * gens[k]
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        let mut row = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            let y = mul(&x, g);
            let idx = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCapExceeded(cap));
                    }
                    let i = elements.len();
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push(Some((head, k)));
                    i
                }
            };
            row.push(idx);
        }
        right.push(row);
        head += 1;
    }
    let n = elements.len();
    let mut cayley = vec![0; n * n];
    // elements in BFS order: parents precede children
    for x in 0..n {
        cayley[x * n] = x;
        for y in 1..n {
            let (py, k) = parent[y].expect("non-identity has a parent");
            cayley[x * n + y] = right[cayley[x * n + py]][k];
        }
    }
    let generator_elements: Vec<usize> = gens.iter().map(|g| index[g]).collect();
    let group = FiniteGroup::from_closure_table(n, cayley, generator_elements.clone());
    Ok(Closure {
        group,
        elements,
        generator_elements,
    })
}

/// A subgroup, stored as a sorted element list of its parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other) && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn whole(parent: &Arc<FiniteGroup>) -> Subgroup {
        Self::from_sorted(parent, parent.elements().collect())
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Subgroup {
        Self::from_sorted(parent, vec![0])
    }

    pub fn generated_by(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Subgroup {
        Self::from_sorted(parent, parent.generated(gens))
    }

    /// Validating constructor.
    pub fn from_elements(parent: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Subgroup> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.iter().any(|&g| g >= parent.order()) {
            return Err(Error::NotASubgroup("element out of range".into()));
        }
        let s = Self::from_sorted(parent, els);
        if !s.contains(0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &s.elements {
            if !s.contains(parent.inv(a)) {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &s.elements {
                if !s.contains(parent.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        Ok(s)
    }

    fn from_sorted(parent: &Arc<FiniteGroup>, elements: Vec<usize>) -> Subgroup {
        let mut member = vec![false; parent.order()];
        for &g in &elements {
            member[g] = true;
        }
        Subgroup {
            parent: Arc::clone(parent),
            elements,
            member,
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.member.get(g).copied().unwrap_or(false)
    }

    pub fn same_parent(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.same_parent(other) && self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if !self.same_parent(other) {
            return Err(Error::DifferentParents);
        }
        let elements = self
            .elements
            .iter()
            .copied()
            .filter(|&g| other.contains(g))
            .collect();
        Ok(Self::from_sorted(&self.parent, elements))
    }

    /// `k^{-1} H k`
    pub fn conjugate_by(&self, k: usize) -> Subgroup {
        let ki = self.parent.inv(k);
        let mut els: Vec<usize> = self
            .elements
            .iter()
            .map(|&g| self.parent.conj(ki, g))
            .collect();
        els.sort_unstable();
        Self::from_sorted(&self.parent, els)
    }

    pub fn generators(&self) -> Vec<usize> {
        self.parent.greedy_generators(&self.elements)
    }

    pub fn exponent(&self) -> usize {
        self.elements.iter().fold(1, |acc, &g| {
            num_integer::lcm(acc, self.parent.element_order(g))
        })
    }
}

/// Conjugacy classes of a subgroup under its own conjugation.
#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    subgroup: Subgroup,
    class_of: Vec<Option<usize>>,
    reps: Vec<usize>,
    members: Vec<Vec<usize>>,
    inverse_class: Vec<usize>,
}

impl ConjugacyClasses {
    /// Classes ordered by their minimal element; the identity class is first.
    pub fn new(subgroup: &Subgroup) -> ConjugacyClasses {
        let g = subgroup.parent();
        let mut class_of = vec![None; g.order()];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for &h in subgroup.elements() {
            if class_of[h].is_some() {
                continue;
            }
            let idx = reps.len();
            let mut class: Vec<usize> = subgroup.elements().iter().map(|&x| g.conj(x, h)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = Some(idx);
            }
            reps.push(h);
            members.push(class);
        }
        let inverse_class = reps
            .iter()
            .map(|&r| class_of[g.inv(r)].expect("closed under inverse"))
            .collect();
        ConjugacyClasses {
            subgroup: subgroup.clone(),
            class_of,
            reps,
            members,
            inverse_class,
        }
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, g: usize) -> Option<usize> {
        self.class_of.get(g).copied().flatten()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn members(&self, class: usize) -> &[usize] {
        &self.members[class]
    }

    pub fn size(&self, class: usize) -> usize {
        self.members[class].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// Class containing the inverses of `class`.
    pub fn inverse_class(&self, class: usize) -> usize {
        self.inverse_class[class]
    }
}
