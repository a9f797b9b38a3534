//! Instance generation: deterministic exhaustive enumeration (subsets by
//! ascending bitmask, scalars ascending) and seeded random sampling
//! (uniform size within caps, then a uniform subset of that size).
//!
//! `exhaustive_space` returns the exact number of instances `visit_exhaustive`
//! will produce; the runner holds the two to each other via the budget check
//! and the unit tests below.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{BoundInstance, Caps, LemmaId};
use crate::set::ZpSet;
use crate::zp::PrimeModulus;

const T1_N_GRID: [u64; 2] = [2, 3];
const T1_RANDOM_N_GRID: [u64; 3] = [2, 3, 4];
const T1_EPS_GRID: [f64; 3] = [0.25, 0.5, 1.0];

/// Nonempty subsets of a ground set of size `ground` with size <= `cap`,
/// saturating at u128::MAX.
fn subset_count(ground: u64, cap: u64) -> u128 {
    let cap = cap.min(ground);
    if cap >= 128 || ground >= 128 {
        // Beyond any sane budget; saturate without computing binomials.
        if ground >= 128 && cap >= 1 {
            return u128::MAX;
        }
    }
    let mut total: u128 = 0;
    let mut c: u128 = 1; // C(ground, s)
    for s in 1..=cap {
        c = match c
            .checked_mul((ground - s + 1) as u128)
            .map(|v| v / s as u128)
        {
            Some(v) => v,
            None => return u128::MAX,
        };
        total = match total.checked_add(c) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    total
}

pub(super) fn exhaustive_space(id: LemmaId, p: u64, caps: &Caps) -> u128 {
    let s = subset_count(p, caps.max_set);
    let sg = subset_count(p - 1, caps.max_g);
    let sat_mul = |a: u128, b: u128| a.checked_mul(b).unwrap_or(u128::MAX);
    let sat_pow = |a: u128, e: u32| {
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = sat_mul(acc, a);
        }
        acc
    };
    match id {
        LemmaId::Cd => (1..=caps.max_arity).fold(0u128, |acc, n| {
            acc.saturating_add(sat_pow(s, n))
        }),
        LemmaId::P1 | LemmaId::L4 | LemmaId::C3 => sat_mul(sat_mul(s, s), (p - 1) as u128),
        LemmaId::L1 | LemmaId::L2 | LemmaId::C6 => sat_mul(s, s),
        LemmaId::L3 | LemmaId::L6 => sat_mul(sat_mul(s, s), p as u128),
        LemmaId::L5 => sat_mul(sat_mul(s, s), sg),
        LemmaId::L7 => sat_mul(sat_mul(s, s), s),
        LemmaId::C4 => s,
        LemmaId::C5 => sat_mul(s, (caps.max_coeff as u128) * caps.max_k as u128),
        LemmaId::C7 | LemmaId::L8 | LemmaId::L9 => sat_mul(s, caps.max_k as u128),
        LemmaId::L10 => sat_mul(s, caps.max_k.saturating_sub(1) as u128),
        LemmaId::T1 => sat_mul(s, (T1_N_GRID.len() * T1_EPS_GRID.len()) as u128),
    }
}

fn masks(p: u64, cap: u64) -> impl Iterator<Item = u64> {
    debug_assert!(p < 64, "exhaustive enumeration is for desk-scale p");
    (1u64..1u64 << p).filter(move |m| (m.count_ones() as u64) <= cap)
}

fn set_from_mask(m: PrimeModulus, mask: u64) -> ZpSet {
    ZpSet::from_elements(m, (0..m.value()).filter(|b| mask >> b & 1 == 1))
}

/// Ground-set masks for `G`: subsets of `Z_p^*`, encoded over bits 1..p.
fn star_masks(p: u64, cap: u64) -> impl Iterator<Item = u64> {
    (1u64..1u64 << (p - 1)).filter_map(move |m| {
        if (m.count_ones() as u64) <= cap {
            Some(m << 1)
        } else {
            None
        }
    })
}

pub(super) fn visit_exhaustive(
    id: LemmaId,
    m: PrimeModulus,
    caps: &Caps,
    visit: &mut dyn FnMut(BoundInstance),
) {
    let p = m.value();
    let cap = caps.max_set;
    match id {
        LemmaId::Cd => {
            for arity in 1..=caps.max_arity {
                let labels: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
                let mut stack = vec![0u64; arity as usize];
                visit_tuples(m, p, cap, &labels, &mut stack, 0, visit);
            }
        }
        LemmaId::P1 | LemmaId::L4 | LemmaId::C3 => {
            for mx in masks(p, cap) {
                for my in masks(p, cap) {
                    for a in 1..p {
                        visit(
                            BoundInstance::new(m)
                                .with_set("X", set_from_mask(m, mx))
                                .with_set("Y", set_from_mask(m, my))
                                .with_scalar("a", a),
                        );
                    }
                }
            }
        }
        LemmaId::L1 | LemmaId::L2 => {
            for ma in masks(p, cap) {
                for mb in masks(p, cap) {
                    visit(
                        BoundInstance::new(m)
                            .with_set("A", set_from_mask(m, ma))
                            .with_set("B", set_from_mask(m, mb)),
                    );
                }
            }
        }
        LemmaId::L3 | LemmaId::L6 => {
            for mx in masks(p, cap) {
                for my in masks(p, cap) {
                    for xi in 0..p {
                        visit(
                            BoundInstance::new(m)
                                .with_set("X", set_from_mask(m, mx))
                                .with_set("Y", set_from_mask(m, my))
                                .with_scalar("xi", xi),
                        );
                    }
                }
            }
        }
        LemmaId::L5 => {
            for mx in masks(p, cap) {
                for my in masks(p, cap) {
                    for mg in star_masks(p, caps.max_g) {
                        visit(
                            BoundInstance::new(m)
                                .with_set("X", set_from_mask(m, mx))
                                .with_set("Y", set_from_mask(m, my))
                                .with_set("G", set_from_mask(m, mg)),
                        );
                    }
                }
            }
        }
        LemmaId::L7 => {
            for mx in masks(p, cap) {
                for my in masks(p, cap) {
                    for mz in masks(p, cap) {
                        visit(
                            BoundInstance::new(m)
                                .with_set("X", set_from_mask(m, mx))
                                .with_set("Y", set_from_mask(m, my))
                                .with_set("Z", set_from_mask(m, mz)),
                        );
                    }
                }
            }
        }
        LemmaId::C4 => {
            for my in masks(p, cap) {
                visit(BoundInstance::new(m).with_set("Y", set_from_mask(m, my)));
            }
        }
        LemmaId::C5 => {
            for my in masks(p, cap) {
                for big_k in 1..=caps.max_coeff {
                    for k in 1..=caps.max_k as u64 {
                        visit(
                            BoundInstance::new(m)
                                .with_set("Y", set_from_mask(m, my))
                                .with_scalar("K", big_k)
                                .with_scalar("k", k),
                        );
                    }
                }
            }
        }
        LemmaId::C6 => {
            for mx in masks(p, cap) {
                for my in masks(p, cap) {
                    visit(
                        BoundInstance::new(m)
                            .with_set("X", set_from_mask(m, mx))
                            .with_set("Y", set_from_mask(m, my)),
                    );
                }
            }
        }
        LemmaId::C7 => {
            for mx in masks(p, cap) {
                for k in 1..=caps.max_k as u64 {
                    visit(
                        BoundInstance::new(m)
                            .with_set("X", set_from_mask(m, mx))
                            .with_scalar("k", k),
                    );
                }
            }
        }
        LemmaId::L8 | LemmaId::L9 => {
            for ma in masks(p, cap) {
                for k in 1..=caps.max_k as u64 {
                    visit(
                        BoundInstance::new(m)
                            .with_set("A", set_from_mask(m, ma))
                            .with_scalar("k", k),
                    );
                }
            }
        }
        LemmaId::L10 => {
            for ma in masks(p, cap) {
                for k in 2..=caps.max_k as u64 {
                    visit(
                        BoundInstance::new(m)
                            .with_set("A", set_from_mask(m, ma))
                            .with_scalar("k", k),
                    );
                }
            }
        }
        LemmaId::T1 => {
            for ma in masks(p, cap) {
                for n in T1_N_GRID {
                    for eps in T1_EPS_GRID {
                        visit(
                            BoundInstance::new(m)
                                .with_set("A", set_from_mask(m, ma))
                                .with_scalar("n", n)
                                .with_real("eps", eps),
                        );
                    }
                }
            }
        }
    }
}

fn visit_tuples(
    m: PrimeModulus,
    p: u64,
    cap: u64,
    labels: &[String],
    stack: &mut Vec<u64>,
    depth: usize,
    visit: &mut dyn FnMut(BoundInstance),
) {
    if depth == labels.len() {
        let mut inst = BoundInstance::new(m);
        for (label, &mask) in labels.iter().zip(stack.iter()) {
            inst = inst.with_set(label, set_from_mask(m, mask));
        }
        visit(inst);
        return;
    }
    for mask in masks(p, cap) {
        stack[depth] = mask;
        visit_tuples(m, p, cap, labels, stack, depth + 1, visit);
    }
}

/// Uniform nonempty subset: size uniform in `[1, min(cap, ground)]`, then a
/// uniform subset of that size. `ground_start` is 0 for subsets of `Z_p`
/// and 1 for subsets of `Z_p^*`.
pub(super) fn rand_set(rng: &mut ChaCha8Rng, m: PrimeModulus, ground_start: u64, cap: u64) -> ZpSet {
    let p = m.value();
    let ground = p - ground_start;
    let size = rng.random_range(1..=cap.min(ground));
    if size * 4 <= ground {
        // sparse: rejection into an ordered set
        let mut chosen = BTreeSet::new();
        while (chosen.len() as u64) < size {
            chosen.insert(rng.random_range(ground_start..p));
        }
        ZpSet::from_elements(m, chosen)
    } else {
        // dense: partial Fisher-Yates over the explicit ground set
        let mut pool: Vec<u64> = (ground_start..p).collect();
        for i in 0..size as usize {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
        }
        ZpSet::from_elements(m, pool[..size as usize].iter().copied())
    }
}

pub(super) fn random_instance(
    id: LemmaId,
    m: PrimeModulus,
    caps: &Caps,
    rng: &mut ChaCha8Rng,
) -> BoundInstance {
    let p = m.value();
    let cap = caps.max_set;
    match id {
        LemmaId::Cd => {
            let arity = rng.random_range(1..=caps.max_arity);
            let mut inst = BoundInstance::new(m);
            for i in 1..=arity {
                inst = inst.with_set(&format!("X{i}"), rand_set(rng, m, 0, cap));
            }
            inst
        }
        LemmaId::P1 | LemmaId::L4 | LemmaId::C3 => BoundInstance::new(m)
            .with_set("X", rand_set(rng, m, 0, cap))
            .with_set("Y", rand_set(rng, m, 0, cap))
            .with_scalar("a", rng.random_range(1..p)),
        LemmaId::L1 | LemmaId::L2 => BoundInstance::new(m)
            .with_set("A", rand_set(rng, m, 0, cap))
            .with_set("B", rand_set(rng, m, 0, cap)),
        LemmaId::L3 | LemmaId::L6 => BoundInstance::new(m)
            .with_set("X", rand_set(rng, m, 0, cap))
            .with_set("Y", rand_set(rng, m, 0, cap))
            .with_scalar("xi", rng.random_range(0..p)),
        LemmaId::L5 => BoundInstance::new(m)
            .with_set("X", rand_set(rng, m, 0, cap))
            .with_set("Y", rand_set(rng, m, 0, cap))
            .with_set("G", rand_set(rng, m, 1, caps.max_g)),
        LemmaId::L7 => BoundInstance::new(m)
            .with_set("X", rand_set(rng, m, 0, cap))
            .with_set("Y", rand_set(rng, m, 0, cap))
            .with_set("Z", rand_set(rng, m, 0, cap)),
        LemmaId::C4 => BoundInstance::new(m).with_set("Y", rand_set(rng, m, 0, cap)),
        LemmaId::C5 => BoundInstance::new(m)
            .with_set("Y", rand_set(rng, m, 0, cap))
            .with_scalar("K", rng.random_range(1..=caps.max_coeff))
            .with_scalar("k", rng.random_range(1..=caps.max_k as u64)),
        LemmaId::C6 => BoundInstance::new(m)
            .with_set("X", rand_set(rng, m, 0, cap))
            .with_set("Y", rand_set(rng, m, 0, cap)),
        LemmaId::C7 => BoundInstance::new(m)
            .with_set("X", rand_set(rng, m, 0, cap))
            .with_scalar("k", rng.random_range(1..=caps.max_k as u64)),
        LemmaId::L8 | LemmaId::L9 => BoundInstance::new(m)
            .with_set("A", rand_set(rng, m, 0, cap))
            .with_scalar("k", rng.random_range(1..=caps.max_k as u64)),
        LemmaId::L10 => BoundInstance::new(m)
            .with_set("A", rand_set(rng, m, 0, cap))
            .with_scalar("k", rng.random_range(2..=caps.max_k.max(2) as u64)),
        LemmaId::T1 => BoundInstance::new(m)
            .with_set("A", rand_set(rng, m, 0, cap))
            .with_scalar(
                "n",
                T1_RANDOM_N_GRID[rng.random_range(0..T1_RANDOM_N_GRID.len())],
            )
            .with_real("eps", T1_EPS_GRID[rng.random_range(0..T1_EPS_GRID.len())]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn space_formula_matches_enumeration() {
        let caps = Caps {
            max_g: 4,
            ..Caps::default()
        };
        for id in LemmaId::ALL {
            let mut count = 0u128;
            visit_exhaustive(id, m(5), &caps, &mut |_| count += 1);
            assert_eq!(
                count,
                exhaustive_space(id, 5, &caps),
                "space mismatch for {id}"
            );
        }
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subset_count(5, 5), 31);
        assert_eq!(subset_count(5, 2), 15);
        assert_eq!(subset_count(4, 4), 15);
        assert_eq!(subset_count(7, 64), 127);
    }

    #[test]
    fn random_sets_respect_caps_and_ground() {
        let mm = m(101);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = rand_set(&mut rng, mm, 1, 16);
            assert!(!s.is_empty() && s.cardinality() <= 16);
            assert!(!s.contains(0));
        }
        // dense branch: cap beyond ground/4 forces Fisher-Yates sometimes
        for _ in 0..50 {
            let s = rand_set(&mut rng, mm, 0, 101);
            assert!(!s.is_empty() && s.cardinality() <= 101);
        }
    }

    #[test]
    fn random_instances_deterministic() {
        let mm = m(1009);
        for id in LemmaId::ALL {
            let mut r1 = ChaCha8Rng::seed_from_u64(99);
            let mut r2 = ChaCha8Rng::seed_from_u64(99);
            let caps = Caps::default();
            for _ in 0..10 {
                assert_eq!(
                    random_instance(id, mm, &caps, &mut r1),
                    random_instance(id, mm, &caps, &mut r2)
                );
            }
        }
    }
}
