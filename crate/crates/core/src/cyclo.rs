//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! A [`CycloNumber`] is a rational coefficient vector in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`, always reduced modulo the `N`-th cyclotomic
//! polynomial, so equality is coefficient equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `N`-th cyclotomic polynomial, coefficients from the constant term up.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs N >= 1");
    cached_cyclotomic(n).as_ref().clone()
}

fn cached_cyclotomic(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    // X^N - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cached_cyclotomic(d));
        }
    }
    let phi = Arc::new(num);
    cache
        .lock()
        .expect("cache poisoned")
        .insert(n, Arc::clone(&phi));
    phi
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (t, &dc) in den.iter().enumerate() {
                rem[k + t] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division is exact");
    quot
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    level: u64,
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    pub fn zero(level: u64) -> CycloNumber {
        CycloNumber {
            level,
            coeffs: vec![BigRational::zero(); euler_phi(level) as usize],
        }
    }

    pub fn one(level: u64) -> CycloNumber {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_integer(level: u64, n: i64) -> CycloNumber {
        Self::from_rational(level, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(level: u64, q: BigRational) -> CycloNumber {
        let mut x = Self::zero(level);
        x.coeffs[0] = q;
        x
    }

    /// `ζ_N^k`; negative exponents are allowed.
    pub fn zeta_pow(level: u64, k: i64) -> CycloNumber {
        let e = k.rem_euclid(level as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(level, poly)
    }

    /// Reduces an arbitrary polynomial in `ζ_N`.
    pub fn from_poly(level: u64, mut poly: Vec<BigRational>) -> CycloNumber {
        let phi = cached_cyclotomic(level);
        let d = phi.len() - 1;
        // fold modulo X^N - 1 first
        let n = level as usize;
        if poly.len() > n {
            let tail: Vec<BigRational> = poly.drain(n..).collect();
            for (k, c) in tail.into_iter().enumerate() {
                let slot = (n + k) % n;
                poly[slot] = &poly[slot] + c;
            }
        }
        for k in (d..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], BigRational::zero());
            for (t, &pc) in phi.iter().enumerate().take(d) {
                if pc != 0 {
                    let delta = &c * BigRational::from_integer(BigInt::from(pc));
                    poly[k - d + t] = &poly[k - d + t] - delta;
                }
            }
        }
        poly.resize(d, BigRational::zero());
        CycloNumber {
            level,
            coeffs: poly,
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Rational value, when the number is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the number in `Q(ζ_M)` for a multiple `M` of the level.
    pub fn lift(&self, level: u64) -> CycloNumber {
        if level == self.level {
            return self.clone();
        }
        assert!(
            level % self.level == 0,
            "level {} does not divide {}",
            self.level,
            level
        );
        let step = (level / self.level) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::from_poly(level, poly)
    }

    fn common(a: &CycloNumber, b: &CycloNumber) -> u64 {
        a.level.lcm(&b.level)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Parses `"c0 + c1*z + c2*z^2"`-style literals at the given level.
    /// Rational coefficients `a/b` and negative exponents `z^-1` are accepted.
    pub fn parse(s: &str, level: u64) -> Result<CycloNumber> {
        parse_cyclo(s, level)
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", mag)?,
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{}", k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        let level = CycloNumber::common(self, rhs);
        let (a, b) = (self.lift(level), rhs.lift(level));
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycloNumber { level, coeffs }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if self.is_zero() || rhs.is_zero() {
            return CycloNumber::zero(CycloNumber::common(self, rhs));
        }
        let level = CycloNumber::common(self, rhs);
        let (a, b) = (self.lift(level), rhs.lift(level));
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] = &poly[i + j] + x * y;
                }
            }
        }
        CycloNumber::from_poly(level, poly)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn parse_cyclo(src: &str, level: u64) -> Result<CycloNumber> {
    let err = |msg: &str| Error::Parse(src.to_string(), msg.to_string());
    if level == 0 {
        return Err(err("level must be positive"));
    }
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty literal"));
    }
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let chars: Vec<char> = s.chars().collect();
    for (idx, &c) in chars.iter().enumerate() {
        let after_caret = idx > 0 && chars[idx - 1] == '^';
        let after_paren_caret = idx > 1 && chars[idx - 1] == '(' && chars[idx - 2] == '^';
        if (c == '+' || c == '-') && !after_caret && !after_paren_caret {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if idx > 0 {
                return Err(err("dangling sign"));
            }
            neg = c == '-';
        } else {
            cur.push(c);
        }
    }
    if cur.is_empty() {
        return Err(err("trailing sign"));
    }
    terms.push((neg, cur));

    let mut total = CycloNumber::zero(level);
    for (neg, term) in terms {
        let mut coeff = BigRational::one();
        let mut exp: i64 = 0;
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if let Some(rest) = factor.strip_prefix('z') {
                let e = if rest.is_empty() {
                    1
                } else {
                    let digits = rest
                        .strip_prefix('^')
                        .ok_or_else(|| err("expected ^ after z"))?
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .trim_start_matches('{')
                        .trim_end_matches('}');
                    digits.parse::<i64>().map_err(|_| err("bad exponent"))?
                };
                exp += e;
            } else {
                coeff *= parse_rational(factor).ok_or_else(|| err("bad coefficient"))?;
            }
        }
        if neg {
            coeff = -coeff;
        }
        let t = &CycloNumber::zeta_pow(level, exp) * &CycloNumber::from_rational(level, coeff);
        total = &total + &t;
    }
    Ok(total)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Dense matrix over `Q(ζ_N)` with every entry at the same level.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    level: u64,
    entries: Vec<CycloNumber>,
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        write!(f, "CycloMatrix(level {}, {:?})", self.level, rows)
    }
}

impl CycloMatrix {
    pub fn zeros(rows: usize, cols: usize, level: u64) -> CycloMatrix {
        CycloMatrix {
            rows,
            cols,
            level,
            entries: vec![CycloNumber::zero(level); rows * cols],
        }
    }

    pub fn identity(n: usize, level: u64) -> CycloMatrix {
        let mut m = Self::zeros(n, n, level);
        for i in 0..n {
            m.set(i, i, CycloNumber::one(level));
        }
        m
    }

    /// Row-major entries; all are lifted to the given level.
    pub fn from_rows(rows: Vec<Vec<CycloNumber>>, level: u64) -> Result<CycloMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for x in rows.into_iter().flatten() {
            if level % x.level() != 0 {
                return Err(Error::DimensionMismatch(format!(
                    "entry of level {} in a matrix of level {level}",
                    x.level()
                )));
            }
            entries.push(x.lift(level));
        }
        Ok(CycloMatrix {
            rows: r,
            cols: c,
            level,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn get(&self, r: usize, c: usize) -> &CycloNumber {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: CycloNumber) {
        self.entries[r * self.cols + c] = x.lift(self.level);
    }

    pub fn at_level(&self, level: u64) -> CycloMatrix {
        CycloMatrix {
            rows: self.rows,
            cols: self.cols,
            level,
            entries: self.entries.iter().map(|x| x.lift(level)).collect(),
        }
    }

    pub fn transpose(&self) -> CycloMatrix {
        let mut t = Self::zeros(self.cols, self.rows, self.level);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Product skipping zero entries; actions here are mostly monomial.
    pub fn mul(&self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not compose");
        let level = self.level.lcm(&rhs.level);
        let mut out = Self::zeros(self.rows, rhs.cols, level);
        let rhs_nz: Vec<Vec<usize>> = (0..rhs.rows)
            .map(|k| {
                (0..rhs.cols)
                    .filter(|&c| !rhs.get(k, c).is_zero())
                    .collect()
            })
            .collect();
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for &c in &rhs_nz[k] {
                    let idx = r * out.cols + c;
                    out.entries[idx] = &out.entries[idx] + &(a * rhs.get(k, c));
                }
            }
        }
        out
    }

    /// Determinant by cofactor expansion; used only for tiny matrices.
    pub fn det(&self) -> CycloNumber {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => CycloNumber::one(self.level),
            1 => self.get(0, 0).clone(),
            n => {
                let mut acc = CycloNumber::zero(self.level);
                for c in 0..n {
                    let mut minor = Vec::new();
                    for r in 1..n {
                        minor.push(
                            (0..n)
                                .filter(|&k| k != c)
                                .map(|k| self.get(r, k).clone())
                                .collect(),
                        );
                    }
                    let m = CycloMatrix::from_rows(minor, self.level).expect("square minor");
                    let term = self.get(0, c) * &m.det();
                    acc = if c % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                acc
            }
        }
    }

    pub fn entries(&self) -> &[CycloNumber] {
        &self.entries
    }
}
