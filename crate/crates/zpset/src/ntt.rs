//! Exact cyclic convolution of indicator vectors via a number-theoretic
//! transform over a fixed 64-bit auxiliary modulus.
//!
//! The sumset of two subsets of `Z_p` is the support of the length-p cyclic
//! convolution of their indicator vectors. We compute the linear convolution
//! at the next power of two >= 2p-1 and fold indices >= p back, so radix-2
//! transforms work for arbitrary prime p. Representation counts never exceed
//! p^2 < Q, hence no wraparound and the support is exact.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// 29 * 2^57 + 1, prime, with 2-adic valuation 57 — room for transforms far
/// beyond the p <= 10^7 desk-scale cap (2p-1 <= 2^25).
pub const NTT_MODULUS: u64 = (29 << 57) + 1;

const R2: u64 = mont_r2();
const NINV: u64 = mont_ninv();

/// -Q^{-1} mod 2^64 by Newton iteration; const so the compiler folds it.
const fn mont_ninv() -> u64 {
    let mut inv = 1u64;
    let mut i = 0;
    while i < 6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(NTT_MODULUS.wrapping_mul(inv)));
        i += 1;
    }
    inv.wrapping_neg()
}

/// 2^128 mod Q, the Montgomery conversion constant.
const fn mont_r2() -> u64 {
    let r = ((1u128 << 64) % NTT_MODULUS as u128) as u64;
    ((r as u128 * r as u128) % NTT_MODULUS as u128) as u64
}

#[inline]
fn mont_mul(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let m = (t as u64).wrapping_mul(NINV);
    let u = ((t + m as u128 * NTT_MODULUS as u128) >> 64) as u64;
    if u >= NTT_MODULUS {
        u - NTT_MODULUS
    } else {
        u
    }
}

#[inline]
fn to_mont(a: u64) -> u64 {
    mont_mul(a, R2)
}

#[inline]
fn add_q(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= NTT_MODULUS {
        s - NTT_MODULUS
    } else {
        s
    }
}

#[inline]
fn sub_q(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + NTT_MODULUS - b
    }
}

fn mont_pow(base: u64, mut exp: u64) -> u64 {
    let mut base = base;
    let mut acc = to_mont(1);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mont_mul(acc, base);
        }
        base = mont_mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Twiddle tables for one transform length, in Montgomery form.
struct NttPlan {
    n: usize,
    fwd: Vec<u64>, // w^i for i < n/2
    inv: Vec<u64>, // w^{-i}
    n_inv: u64,    // n^{-1}, Montgomery form
}

impl NttPlan {
    fn new(log_n: u32) -> Self {
        let n = 1usize << log_n;
        debug_assert!((NTT_MODULUS - 1) % n as u64 == 0);
        // 3 generates Z_Q^*: it is a non-residue for both prime factors
        // 2 and 29 of Q-1 (checked in tests).
        let g = to_mont(3);
        let w = mont_pow(g, (NTT_MODULUS - 1) / n as u64);
        let w_inv = mont_pow(w, NTT_MODULUS - 2);
        let mut fwd = Vec::with_capacity(n / 2);
        let mut inv = Vec::with_capacity(n / 2);
        let (mut f, mut b) = (to_mont(1), to_mont(1));
        for _ in 0..n / 2 {
            fwd.push(f);
            inv.push(b);
            f = mont_mul(f, w);
            b = mont_mul(b, w_inv);
        }
        let n_inv = mont_pow(to_mont(n as u64), NTT_MODULUS - 2);
        NttPlan { n, fwd, inv, n_inv }
    }
}

fn plan_for(log_n: u32) -> Arc<NttPlan> {
    static PLANS: OnceLock<Mutex<HashMap<u32, Arc<NttPlan>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = plans.lock().expect("NTT plan cache poisoned");
    guard
        .entry(log_n)
        .or_insert_with(|| Arc::new(NttPlan::new(log_n)))
        .clone()
}

/// Decimation-in-frequency forward transform; output in bit-reversed order.
fn forward(a: &mut [u64], plan: &NttPlan) {
    let n = plan.n;
    let mut half = n / 2;
    while half >= 1 {
        let stride = n / (2 * half);
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for j in 0..half {
                let u = lo[j];
                let v = hi[j];
                lo[j] = add_q(u, v);
                hi[j] = mont_mul(sub_q(u, v), plan.fwd[j * stride]);
            }
        }
        half /= 2;
    }
}

/// Decimation-in-time inverse; consumes bit-reversed input, yields natural
/// order scaled by n^{-1}.
fn inverse(a: &mut [u64], plan: &NttPlan) {
    let n = plan.n;
    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for j in 0..half {
                let u = lo[j];
                let t = mont_mul(hi[j], plan.inv[j * stride]);
                lo[j] = add_q(u, t);
                hi[j] = sub_q(u, t);
            }
        }
        half *= 2;
    }
    for v in a.iter_mut() {
        *v = mont_mul(*v, plan.n_inv);
    }
}

/// Cyclic convolution support of two indicator vectors over `Z_p`.
///
/// `x` and `y` list the member residues; the result marks every residue
/// `(a + b) mod p` with at least one representation. Counts stay below the
/// auxiliary modulus, so a zero entry really means zero representations.
pub fn cyclic_convolution_support(
    p: u64,
    x: impl Iterator<Item = u64>,
    y: impl Iterator<Item = u64>,
    mark: &mut dyn FnMut(u64),
) {
    let len = (2 * p - 1).next_power_of_two().max(2);
    let log_n = len.trailing_zeros();
    let plan = plan_for(log_n);
    let one = to_mont(1);
    let mut a = vec![0u64; len as usize];
    let mut b = vec![0u64; len as usize];
    for e in x {
        a[e as usize] = one;
    }
    for e in y {
        b[e as usize] = one;
    }
    forward(&mut a, &plan);
    forward(&mut b, &plan);
    for (av, bv) in a.iter_mut().zip(&b) {
        *av = mont_mul(*av, *bv);
    }
    inverse(&mut a, &plan);
    // Montgomery representation is a bijection fixing 0, so a nonzero word
    // is a nonzero count; no conversion out of Montgomery form needed.
    for i in 0..p {
        let wrapped = i + p;
        let hit = a[i as usize] != 0
            || (wrapped <= 2 * p - 2 && a[wrapped as usize] != 0);
        if hit {
            mark(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_is_prime_with_root_3() {
        assert!(crate::zp::is_prime(NTT_MODULUS));
        assert_eq!(NTT_MODULUS, 4_179_340_454_199_820_289);
        let m = |a: u64, b: u64| ((a as u128 * b as u128) % NTT_MODULUS as u128) as u64;
        let pw = |mut base: u64, mut e: u64| {
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = m(acc, base);
                }
                base = m(base, base);
                e >>= 1;
            }
            acc
        };
        assert_ne!(pw(3, (NTT_MODULUS - 1) / 2), 1);
        assert_ne!(pw(3, (NTT_MODULUS - 1) / 29), 1);
    }

    #[test]
    fn montgomery_round_trip() {
        for v in [0u64, 1, 2, 29, NTT_MODULUS - 1, 123_456_789_012_345] {
            assert_eq!(mont_mul(to_mont(v), 1), v);
        }
        // mont_mul(toM(a), toM(b)) = toM(ab)
        let (a, b) = (987_654_321u64, 192_837_465u64);
        let expect = ((a as u128 * b as u128) % NTT_MODULUS as u128) as u64;
        assert_eq!(mont_mul(mont_mul(to_mont(a), to_mont(b)), 1), expect);
    }

    #[test]
    fn transform_inverts() {
        let plan = plan_for(4);
        let orig: Vec<u64> = (0..16).map(|i| to_mont(i * i + 1)).collect();
        let mut a = orig.clone();
        forward(&mut a, &plan);
        inverse(&mut a, &plan);
        assert_eq!(a, orig);
    }

    #[test]
    fn convolution_matches_naive_counts() {
        // Count-level check against direct pair enumeration, several p.
        for &(p, xs, ys) in &[
            (5u64, &[0u64, 1][..], &[0u64, 1][..]),
            (7, &[1, 2, 4][..], &[3, 5][..]),
            (13, &[0, 6, 12][..], &[1, 2, 3, 11][..]),
        ] {
            let mut naive = vec![false; p as usize];
            for &a in xs {
                for &b in ys {
                    naive[((a + b) % p) as usize] = true;
                }
            }
            let mut got = vec![false; p as usize];
            cyclic_convolution_support(p, xs.iter().copied(), ys.iter().copied(), &mut |i| {
                got[i as usize] = true;
            });
            assert_eq!(got, naive, "p={p}");
        }
    }
}
