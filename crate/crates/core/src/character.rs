//! Characters of subgroups as class functions valued in a split prime field.
//!
//! Irreducible characters are computed with the Burnside–Dixon method: the
//! class sums span the center of the group algebra, and its characters are
//! the common eigenvectors of the class-multiplication matrices.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeEmbedding;
use crate::fp_poly;
use crate::group::{ConjugacyClasses, Subgroup};
use crate::matrix::ModMatrix;

/// An `F_p`-valued function on the conjugacy classes of a subgroup.
#[derive(Debug, Clone)]
pub struct ClassFunction {
    classes: Arc<ConjugacyClasses>,
    field: PrimeEmbedding,
    values: Vec<u64>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.classes.subgroup() == other.classes.subgroup() && self.values == other.values
    }
}

impl Eq for ClassFunction {}

impl ClassFunction {
    pub fn new(
        classes: &Arc<ConjugacyClasses>,
        field: PrimeEmbedding,
        values: Vec<u64>,
    ) -> Result<ClassFunction> {
        if values.len() != classes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} classes",
                values.len(),
                classes.len()
            )));
        }
        let p = field.prime();
        Ok(ClassFunction {
            classes: Arc::clone(classes),
            field,
            values: values.into_iter().map(|v| v % p).collect(),
        })
    }

    /// Evaluates `f` on one representative per class.
    pub fn from_fn(
        classes: &Arc<ConjugacyClasses>,
        field: PrimeEmbedding,
        f: impl Fn(usize) -> u64,
    ) -> ClassFunction {
        let p = field.prime();
        ClassFunction {
            classes: Arc::clone(classes),
            field,
            values: classes.reps().iter().map(|&g| f(g) % p).collect(),
        }
    }

    pub fn trivial(classes: &Arc<ConjugacyClasses>, field: PrimeEmbedding) -> ClassFunction {
        Self::from_fn(classes, field, |_| 1)
    }

    pub fn zero(classes: &Arc<ConjugacyClasses>, field: PrimeEmbedding) -> ClassFunction {
        Self::from_fn(classes, field, |_| 0)
    }

    pub fn classes(&self) -> &Arc<ConjugacyClasses> {
        &self.classes
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.classes.subgroup()
    }

    pub fn field(&self) -> &PrimeEmbedding {
        &self.field
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Value at an element of the subgroup.
    pub fn at(&self, g: usize) -> Option<u64> {
        self.classes.class_of(g).map(|c| self.values[c])
    }

    /// Value at the identity, read as a nonnegative integer.
    pub fn degree(&self) -> u64 {
        self.values[0]
    }

    fn same_group(&self, other: &ClassFunction) -> Result<()> {
        if self.classes.subgroup() != other.classes.subgroup() {
            return Err(Error::NotASubgroup(
                "class functions live on different subgroups".into(),
            ));
        }
        Ok(())
    }

    /// Character of the tensor product.
    pub fn pointwise_product(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_group(other)?;
        let f = &self.field;
        Ok(ClassFunction {
            classes: Arc::clone(&self.classes),
            field: self.field,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f.mul(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.same_group(other)?;
        let f = &self.field;
        Ok(ClassFunction {
            classes: Arc::clone(&self.classes),
            field: self.field,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    /// `|H|^{-1} Σ_g χ(g) ψ(g^{-1})`, in `[0, p)`.
    ///
    /// For characters this is the dimension of the space of homomorphisms,
    /// exact whenever `p` exceeds it.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<u64> {
        self.same_group(other)?;
        let f = &self.field;
        let mut acc = 0;
        for c in 0..self.classes.len() {
            let term = f.mul(self.values[c], other.values[self.classes.inverse_class(c)]);
            acc = f.add(acc, f.mul(term, self.classes.size(c) as u64));
        }
        let order_inv = f
            .inv(self.classes.subgroup().order() as u64)
            .ok_or_else(|| Error::BadPrime(f.prime(), "divides the group order".into()))?;
        Ok(f.mul(acc, order_inv))
    }

    /// Restriction to a subgroup `K`.
    pub fn restrict(&self, target: &Arc<ConjugacyClasses>) -> Result<ClassFunction> {
        if !target.subgroup().is_subgroup_of(self.classes.subgroup()) {
            return Err(Error::NotASubgroup(
                "restriction target is not contained in the domain".into(),
            ));
        }
        Ok(ClassFunction::from_fn(target, self.field, |g| {
            self.at(g).expect("target lies in the domain")
        }))
    }

    /// Twist by `κ`: the class function `g ↦ χ(κ g κ^{-1})` on
    /// `κ^{-1} H κ`, which must be the target's subgroup.
    pub fn conjugate_twist(
        &self,
        kappa: usize,
        target: &Arc<ConjugacyClasses>,
    ) -> Result<ClassFunction> {
        let parent = self.classes.subgroup().parent();
        if &self.classes.subgroup().conjugate_by(kappa) != target.subgroup() {
            return Err(Error::ConjugationMismatch(kappa));
        }
        Ok(ClassFunction::from_fn(target, self.field, |g| {
            self.at(parent.conj(kappa, g))
                .expect("conjugate lies in the domain")
        }))
    }

    /// Multiplicities of the irreducible constituents.
    pub fn decompose(&self, table: &CharacterTable) -> Result<Vec<u64>> {
        table
            .irreducibles()
            .iter()
            .map(|irr| irr.inner_product(self))
            .collect()
    }
}

/// Character of a matrix representation in the right-action convention
/// `M(gh) = M(h) M(g)`, checked on the subgroup's generators.
pub fn action_character(
    classes: &Arc<ConjugacyClasses>,
    field: PrimeEmbedding,
    matrix: impl Fn(usize) -> ModMatrix,
) -> Result<ClassFunction> {
    let h = classes.subgroup();
    let parent = h.parent();
    let gens = h.generators();
    for &x in h.elements() {
        let mx = matrix(x);
        for &g in &gens {
            let lhs = matrix(parent.mul(x, g));
            if lhs != matrix(g).mul(&mx) {
                return Err(Error::NotARepresentation(format!(
                    "M({x}·{g}) != M({g}) M({x})"
                )));
            }
        }
    }
    Ok(ClassFunction::from_fn(classes, field, |g| {
        matrix(g).trace()
    }))
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    classes: Arc<ConjugacyClasses>,
    field: PrimeEmbedding,
    irreducibles: Vec<ClassFunction>,
    degrees: Vec<u64>,
}

impl CharacterTable {
    pub fn compute(subgroup: &Subgroup, field: PrimeEmbedding) -> Result<CharacterTable> {
        Self::from_classes(&Arc::new(ConjugacyClasses::new(subgroup)), field)
    }

    pub fn from_classes(
        classes: &Arc<ConjugacyClasses>,
        field: PrimeEmbedding,
    ) -> Result<CharacterTable> {
        let h = classes.subgroup();
        let order = h.order() as u64;
        let p = field.prime();
        if field.level() % h.exponent() as u64 != 0 {
            return Err(Error::BadPrime(
                p,
                format!(
                    "root-of-unity level {} is not a multiple of the exponent {}",
                    field.level(),
                    h.exponent()
                ),
            ));
        }
        if p <= order {
            return Err(Error::BadPrime(
                p,
                format!("must exceed the group order {order}"),
            ));
        }
        let parent = h.parent();
        let r = classes.len();

        // structure constants: c[j][k][l] = #{x in C_j : x^{-1} z_l in C_k}
        let mut c = vec![vec![vec![0u64; r]; r]; r];
        for l in 0..r {
            let z = classes.reps()[l];
            for &x in h.elements() {
                let y = parent.mul(parent.inv(x), z);
                let j = classes.class_of(x).expect("x in H");
                let k = classes.class_of(y).expect("y in H");
                c[j][k][l] += 1;
            }
        }

        let mut spaces = vec![ModMatrix::identity(r, p)];
        for cj in &c {
            if spaces.iter().all(|s| s.cols() == 1) {
                break;
            }
            let mj = ModMatrix::from_rows(cj, p);
            let mut next = Vec::new();
            for w in spaces {
                if w.cols() == 1 {
                    next.push(w);
                    continue;
                }
                // restriction of M_j to the invariant subspace spanned by w
                let x = w
                    .solve_matrix(&mj.mul(&w))
                    .ok_or_else(|| Error::SplitFailure("subspace is not invariant".into()))?;
                let d = x.cols();
                let mut found = 0;
                for lambda in fp_poly::roots(&fp_poly::char_poly(&x), p) {
                    let shifted = x.sub(&ModMatrix::identity(d, p).scale(lambda));
                    let e = shifted.kernel();
                    found += e.cols();
                    next.push(w.mul(&e));
                }
                if found != d {
                    return Err(Error::SplitFailure(format!(
                        "eigenvalues of a class matrix are not all in F_{p}"
                    )));
                }
            }
            spaces = next;
        }
        if spaces.len() != r || spaces.iter().any(|s| s.cols() != 1) {
            return Err(Error::SplitFailure(format!(
                "{} lines for {} classes",
                spaces.len(),
                r
            )));
        }

        let sizes: Vec<u64> = classes.sizes().iter().map(|&s| s as u64).collect();
        let mut irreducibles = Vec::with_capacity(r);
        for v in spaces {
            let v = v.column(0);
            let lead = field.inv(v[0]).ok_or_else(|| {
                Error::SplitFailure("central character vanishes at the identity".into())
            })?;
            let omega: Vec<u64> = v.iter().map(|&x| field.mul(x, lead)).collect();
            // χ(1)^2 = |H| / Σ_l ω_l ω_{l*} / h_l
            let mut s = 0;
            for l in 0..r {
                let t = field.mul(omega[l], omega[classes.inverse_class(l)]);
                s = field.add(
                    s,
                    field.mul(t, field.inv(sizes[l]).expect("class size < p")),
                );
            }
            let s_inv = field
                .inv(s)
                .ok_or_else(|| Error::SplitFailure("degree normalization is singular".into()))?;
            let d2 = field.mul(order % p, s_inv);
            let degree = (1..=order)
                .take_while(|d| d * d <= order)
                .find(|d| d * d == d2)
                .ok_or_else(|| Error::SplitFailure(format!("{d2} is not a square degree")))?;
            let values = (0..r)
                .map(|l| {
                    field.mul(
                        field.mul(omega[l], degree),
                        field.inv(sizes[l]).expect("class size < p"),
                    )
                })
                .collect();
            irreducibles.push(ClassFunction {
                classes: Arc::clone(classes),
                field,
                values,
            });
        }

        let key = |chi: &ClassFunction| -> (u64, Vec<(u8, u64)>) {
            let entries = chi
                .values
                .iter()
                .map(|&x| match field.discrete_log(x) {
                    Some(k) => (0, k),
                    None => (1, x),
                })
                .collect();
            (chi.degree(), entries)
        };
        irreducibles.sort_by_cached_key(key);
        let degrees = irreducibles.iter().map(ClassFunction::degree).collect();
        let table = CharacterTable {
            classes: Arc::clone(classes),
            field,
            irreducibles,
            degrees,
        };
        table.check()?;
        Ok(table)
    }

    /// Degree-sum identity and row orthogonality.
    fn check(&self) -> Result<()> {
        let order = self.classes.subgroup().order() as u64;
        let sum: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sum != order {
            return Err(Error::SplitFailure(format!(
                "squared degrees sum to {sum}, not {order}"
            )));
        }
        for (a, x) in self.irreducibles.iter().enumerate() {
            for (b, y) in self.irreducibles.iter().enumerate() {
                let ip = x.inner_product(y)?;
                if ip != u64::from(a == b) {
                    return Err(Error::SplitFailure(format!("<χ{a}, χ{b}> = {ip}")));
                }
            }
        }
        Ok(())
    }

    pub fn classes(&self) -> &Arc<ConjugacyClasses> {
        &self.classes
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.classes.subgroup()
    }

    pub fn field(&self) -> &PrimeEmbedding {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn irreducible(&self, k: usize) -> &ClassFunction {
        &self.irreducibles[k]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Index of the irreducible equal to `chi`, if any.
    pub fn position(&self, chi: &ClassFunction) -> Option<usize> {
        self.irreducibles.iter().position(|x| x == chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::choose_prime;
    use crate::group::FiniteGroup;

    fn cyclic(n: usize) -> Arc<FiniteGroup> {
        let t: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Arc::new(FiniteGroup::from_cayley_table(&t).unwrap())
    }

    #[test]
    fn trivial_group_table() {
        let g = cyclic(1);
        let f = choose_prime(1, 10).unwrap();
        let t = CharacterTable::compute(&Subgroup::whole(&g), f).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.irreducible(0).values(), &[1]);
    }

    #[test]
    fn z4_characters_are_powers_of_i() {
        let g = cyclic(4);
        let f = choose_prime(4, 100).unwrap();
        let t = CharacterTable::compute(&Subgroup::whole(&g), f).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 1, 1]);
        let i = f.zeta_pow(1);
        let mut at_gen: Vec<u64> = t.irreducibles().iter().map(|c| c.at(1).unwrap()).collect();
        at_gen.sort();
        let mut expected = vec![1, i, f.mul(i, i), f.mul(i, f.mul(i, i))];
        expected.sort();
        assert_eq!(at_gen, expected);
        // trivial first
        assert!(t.irreducible(0).values().iter().all(|&v| v == 1));
    }

    #[test]
    fn s4_table() {
        let (g, _) =
            FiniteGroup::from_permutation_generators(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 100)
                .unwrap();
        let g = Arc::new(g);
        let f = choose_prime(12, 1000).unwrap();
        let t = CharacterTable::compute(&Subgroup::whole(&g), f).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2, 3, 3]);
    }

    #[test]
    fn level_must_cover_exponent() {
        let g = cyclic(4);
        let f = choose_prime(2, 100).unwrap();
        assert!(matches!(
            CharacterTable::compute(&Subgroup::whole(&g), f),
            Err(Error::BadPrime(..))
        ));
    }

    #[test]
    fn twist_round_trip() {
        let (g, _) =
            FiniteGroup::from_permutation_generators(3, &[vec![1, 2, 0], vec![1, 0, 2]], 100)
                .unwrap();
        let g = Arc::new(g);
        let f = choose_prime(6, 100).unwrap();
        let h = Subgroup::from_elements(&g, &g.generated(&[g.generators()[1]])).unwrap();
        let table = CharacterTable::compute(&h, f).unwrap();
        for k in g.elements() {
            let target = Arc::new(ConjugacyClasses::new(&h.conjugate_by(k)));
            for chi in table.irreducibles() {
                let twisted = chi.conjugate_twist(k, &target).unwrap();
                assert_eq!(twisted.degree(), chi.degree());
                let back = twisted.conjugate_twist(g.inv(k), table.classes()).unwrap();
                assert_eq!(&back, chi);
            }
        }
        // wrong target
        let wrong = Arc::new(ConjugacyClasses::new(&Subgroup::trivial(&g)));
        assert_eq!(
            table.irreducible(0).conjugate_twist(0, &wrong),
            Err(Error::ConjugationMismatch(0))
        );
    }

    #[test]
    fn zero_dimensional_action_character() {
        let g = cyclic(3);
        let f = choose_prime(3, 10).unwrap();
        let cc = Arc::new(ConjugacyClasses::new(&Subgroup::whole(&g)));
        let chi = action_character(&cc, f, |_| ModMatrix::zeros(0, 0, f.prime())).unwrap();
        assert!(chi.values().iter().all(|&v| v == 0));
    }
}
