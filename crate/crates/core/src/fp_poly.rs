//! Univariate polynomials over `F_p`: characteristic polynomials and roots.
//!
//! Coefficients are stored from the constant term up, without trailing zeros.

use crate::field::{inv_mod, mul_mod};
use crate::matrix::ModMatrix;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (k, &bc) in b.iter().enumerate() {
            let idx = shift + k;
            r[idx] = (r[idx] + p - mul_mod(c, bc, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(a: Poly, p: u64) -> Poly {
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            a.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(x, p)
}

/// `base^exp mod modulus`
fn pow_mod_poly(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = divrem(base, modulus, p).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = divrem(&mul(&acc, &b, p), modulus, p).1;
        }
        b = divrem(&mul(&b, &b, p), modulus, p).1;
        exp >>= 1;
    }
    acc
}

/// Characteristic polynomial `det(xI - A)` by Faddeev–LeVerrier; requires
/// `p > n`.
pub fn char_poly(a: &ModMatrix) -> Poly {
    let n = a.rows();
    let p = a.prime();
    assert!(a.cols() == n && (n as u64) < p);
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let mut m = ModMatrix::zeros(n, n, p);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        m = a.mul(&m);
        let c = coeffs[n - k + 1];
        for i in 0..n {
            m.set(i, i, (m.get(i, i) + c) % p);
        }
        let t = a.mul(&m).trace();
        coeffs[n - k] = mul_mod(p - t % p, inv_mod(k as u64, p), p) % p;
    }
    coeffs
}

/// Distinct roots in `F_p` (odd `p`), sorted ascending.
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = monic(trim(f.to_vec()), p);
    if f.len() <= 1 {
        return Vec::new();
    }
    // product of the distinct linear factors: gcd(f, x^p - x)
    let xp = pow_mod_poly(&[0, 1], p, &f, p);
    let g = gcd(&f, &sub(&xp, &[0, 1], p), p);
    let mut out = Vec::new();
    split(g, p, &mut out);
    out.sort_unstable();
    out
}

fn split(g: Poly, p: u64, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push((p - g[0]) % p),
        _ => {
            // deterministic equal-degree splitting with shifts x + a
            for a in 0..p {
                let h = pow_mod_poly(&[a, 1], (p - 1) / 2, &g, p);
                let d = gcd(&g, &sub(&h, &[1], p), p);
                if d.len() > 1 && d.len() < g.len() {
                    let (q, _) = divrem(&g, &d, p);
                    split(d, p, out);
                    split(monic(q, p), p, out);
                    return;
                }
            }
            unreachable!("a squarefree split polynomial always separates");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1009;

    #[test]
    fn roots_of_products() {
        // (x - 3)(x - 5)(x - 700)^2 (x^2 + 1 has roots iff p = 1 mod 4: 1009 = 1 mod 4)
        let mut f = vec![1];
        for r in [3u64, 5, 700, 700] {
            f = mul(&f, &[(P - r) % P, 1], P);
        }
        assert_eq!(roots(&f, P), vec![3, 5, 700]);
        let g = mul(&f, &[1, 0, 1], P);
        let mut r = roots(&g, P);
        r.retain(|x| ![3, 5, 700].contains(x));
        assert_eq!(r.len(), 2);
        for x in r {
            assert_eq!((mul_mod(x, x, P) + 1) % P, 0);
        }
    }

    #[test]
    fn irreducible_quadratic_has_no_roots() {
        // x^2 - 11: brute force decides whether 11 is a square mod 1009
        let squares: Vec<u64> = (0..P).filter(|x| mul_mod(*x, *x, P) == 11).collect();
        assert_eq!(roots(&[P - 11, 0, 1], P), squares);
    }

    #[test]
    fn char_poly_matches_brute_force_determinant() {
        let a = ModMatrix::from_rows(&[vec![2, 1, 0], vec![0, 3, 4], vec![5, 0, 1]], P);
        let cp = char_poly(&a);
        // det(xI - A) evaluated directly at a few points
        for x in [0u64, 1, 7, 123] {
            let mut m = ModMatrix::identity(3, P).scale(x).sub(&a);
            let det = det3(&mut m);
            let val = cp
                .iter()
                .rev()
                .fold(0, |acc, &c| (mul_mod(acc, x, P) + c) % P);
            assert_eq!(val, det);
        }
    }

    fn det3(m: &mut ModMatrix) -> u64 {
        let g = |r, c| m.get(r, c) as i128;
        let d = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
            - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
            + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
        d.rem_euclid(P as i128) as u64
    }
}
