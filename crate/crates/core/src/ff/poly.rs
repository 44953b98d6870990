//! Dense polynomials over the prime field, constant term first.
//! Only what modulus selection and generic element multiplication need.

use super::numtheory::{mul_mod, pow_mod};

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Remainder of `a` modulo a monic `f`.
pub(crate) fn rem_monic(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let df = f.len() - 1;
    trim(a);
    while a.len() > df {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - df;
        if lead != 0 {
            for (i, &fc) in f.iter().enumerate() {
                let sub = mul_mod(lead, fc, p);
                let slot = &mut a[shift + i];
                *slot = (*slot + p - sub) % p;
            }
        }
        a.pop();
        trim(a);
    }
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    rem_monic(&mut prod, f, p);
    prod
}

fn pow_rem(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    rem_monic(&mut acc, f, p);
    let mut b = base.to_vec();
    rem_monic(&mut b, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_rem(&acc, &b, f, p);
        }
        b = mul_rem(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // make b monic, then a mod b
        let inv = inv_mod(*b.last().unwrap(), p);
        for c in b.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
        rem_monic(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Ben-Or test: a monic `f` of degree `d` is irreducible iff
/// `gcd(f, x^{p^j} - x) = 1` for every `1 <= j <= d/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut frob = x.clone();
    for _ in 1..=d / 2 {
        frob = pow_rem(&frob, p, f, p);
        let mut h = frob.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = gcd(f.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exhaustive root/factor oracle for tiny degrees: a cubic or quadratic is
    // irreducible iff it has no root in F_p.
    fn has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (mul_mod(acc, x, p) + c) % p;
            }
            acc == 0
        })
    }

    #[test]
    fn matches_root_oracle_for_low_degree() {
        for p in [3u64, 5, 7] {
            for d in 2..=3usize {
                let count = p.pow(d as u32);
                for v in 0..count {
                    let mut f: Vec<u64> = (0..d).map(|i| (v / p.pow(i as u32)) % p).collect();
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), !has_root(&f, p), "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn quartic_product_of_quadratics_is_reducible() {
        // (x^2+1)^2 = x^4 + 2x^2 + 1 over F_3 has no roots yet factors.
        let f = vec![1, 0, 2, 0, 1];
        assert!(!has_root(&f, 3));
        assert!(!is_irreducible(&f, 3));
    }
}
