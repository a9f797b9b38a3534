//! One checker per verified statement. Each checker validates its
//! hypothesis first (returning [`Outcome::Vacuous`] when unmet) and then
//! decides the conclusion in exact arithmetic: fractional bounds are
//! cross-multiplied in `u128`, and root/irrational bounds are cleared to
//! integer-power comparisons in `BigUint` — never floats.

use num_bigint::{BigInt, BigUint};

use super::{BoundInstance, HarnessError, LemmaId, Outcome};
use crate::construct::{self, a_k_chain, nk_power_sum, Budget};
use crate::set::{SumsetBackend, ZpSet};

pub(super) fn check(
    id: LemmaId,
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    match id {
        LemmaId::Cd => cauchy_davenport(inst, backend),
        LemmaId::P1 => exp_sum_bound(inst),
        LemmaId::L1 => pair_cover_8(inst, backend),
        LemmaId::L2 => pair_cover_16(inst, backend),
        LemmaId::L3 => q_membership_iff_collision(inst, backend),
        LemmaId::L4 => shifted_expansion_lower_bound(inst, backend),
        LemmaId::L5 => existential_shift_bound(inst, backend),
        LemmaId::L6 => q_shift_dominates(inst, backend),
        LemmaId::L7 => ruzsa_triangle(inst),
        LemmaId::C3 => unconditional_expansion_bound(inst, backend),
        LemmaId::C4 => square_chain_bound(inst, backend),
        LemmaId::C5 => chain_step_bound(inst, backend),
        LemmaId::C6 => sum_vs_difference_root(inst, backend),
        LemmaId::C7 => iterated_sum_root_bound(inst, backend),
        LemmaId::L8 => chain_quadratic_bound(inst, backend),
        LemmaId::L9 => chain_min_bound(inst, backend),
        LemmaId::L10 => power_sum_bound(inst, backend),
        LemmaId::T1 => witness_soundness(inst, backend),
    }
}

fn verdict(holds: bool) -> Result<Outcome, HarnessError> {
    Ok(if holds { Outcome::Holds } else { Outcome::Fails })
}

/// `2XY - 2XY + a*Y^2 - a*Y^2`.
fn expansion_set(
    x: &ZpSet,
    y: &ZpSet,
    a: u64,
    backend: SumsetBackend,
) -> Result<ZpSet, HarnessError> {
    let m = x.modulus();
    let xy = x.productset(y)?;
    let two_xy = xy.iterated_sum(2, backend)?;
    let d1 = two_xy.difference(&two_xy)?;
    let ay2 = y.product_power(2)?.dilate(m.element(a))?;
    let d2 = ay2.difference(&ay2)?;
    Ok(d1.sumset(&d2, backend)?)
}

fn cauchy_davenport(inst: &BoundInstance, backend: SumsetBackend) -> Result<Outcome, HarnessError> {
    let mut summands = Vec::new();
    for i in 1.. {
        match inst.sets.get(&format!("X{i}")) {
            Some(s) => summands.push(s),
            None => break,
        }
    }
    if summands.is_empty() {
        return Err(HarnessError::MissingBinding("X1".to_string()));
    }
    if summands.iter().any(|s| s.is_empty()) {
        return Ok(Outcome::Vacuous);
    }
    let p = inst.modulus.value() as i128;
    let mut total = summands[0].clone();
    let mut size_sum = summands[0].cardinality() as i128;
    for s in &summands[1..] {
        total = total.sumset(s, backend)?;
        size_sum += s.cardinality() as i128;
    }
    let bound = (size_sum - summands.len() as i128 + 1).min(p);
    verdict(total.cardinality() as i128 >= bound)
}

fn exp_sum_bound(inst: &BoundInstance) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let a = inst.scalar("a")?;
    if a % inst.modulus.value() == 0 {
        return Ok(Outcome::Vacuous);
    }
    let mag = crate::set::exp_sum_magnitude(x, y, inst.modulus.element(a))?;
    let bound =
        ((inst.modulus.value() * x.cardinality() * y.cardinality()) as f64).sqrt() + 1e-6;
    verdict(mag <= bound)
}

fn pair_cover_8(inst: &BoundInstance, backend: SumsetBackend) -> Result<Outcome, HarnessError> {
    let a = inst.set("A")?;
    let b = inst.set("B")?;
    let half_b = b.cardinality().div_ceil(2);
    if (a.cardinality() as u128) * half_b as u128 <= inst.modulus.value() as u128 {
        return Ok(Outcome::Vacuous);
    }
    let ab = a.productset(b)?;
    verdict(ab.iterated_sum(8, backend)?.is_full())
}

fn pair_cover_16(inst: &BoundInstance, backend: SumsetBackend) -> Result<Outcome, HarnessError> {
    let a = inst.set("A")?;
    let b = inst.set("B")?;
    if (a.cardinality() as u128) * (b.cardinality() as u128) <= inst.modulus.value() as u128 {
        return Ok(Outcome::Vacuous);
    }
    let ab = a.productset(b)?;
    verdict(ab.iterated_sum(16, backend)?.is_full())
}

fn q_membership_iff_collision(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let xi = inst.scalar("xi")?;
    if y.cardinality() <= 1 || x.is_empty() {
        return Ok(Outcome::Vacuous);
    }
    let q = ZpSet::q_set(x, y)?;
    let shifted = x.sumset(&y.dilate(inst.modulus.element(xi))?, backend)?;
    let collides = shifted.cardinality() < x.cardinality() * y.cardinality();
    verdict(q.contains(xi) == collides)
}

fn shifted_expansion_lower_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let a = inst.scalar("a")?;
    if y.cardinality() <= 1 || a % inst.modulus.value() == 0 || x.is_empty() {
        return Ok(Outcome::Vacuous);
    }
    if ZpSet::q_set(x, y)?.is_full() {
        return Ok(Outcome::Vacuous);
    }
    let t = expansion_set(x, y, a, backend)?;
    verdict(t.cardinality() >= x.cardinality() * y.cardinality())
}

fn existential_shift_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let g = inst.set("G")?;
    if g.is_empty() || g.contains(0) {
        return Ok(Outcome::Vacuous);
    }
    let m = inst.modulus;
    let xy = x.cardinality() as u128 * y.cardinality() as u128;
    let rhs = xy * g.cardinality() as u128;
    let den = xy + g.cardinality() as u128;
    for xi in g.iter() {
        let shifted = x.sumset(&y.dilate(m.element(xi))?, backend)?;
        if shifted.cardinality() as u128 * den >= rhs {
            return Ok(Outcome::Holds);
        }
    }
    Ok(Outcome::Fails)
}

fn q_shift_dominates(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let xi = inst.scalar("xi")?;
    if y.cardinality() <= 1 || x.is_empty() {
        return Ok(Outcome::Vacuous);
    }
    if !ZpSet::q_set(x, y)?.contains(xi % inst.modulus.value()) {
        return Ok(Outcome::Vacuous);
    }
    let xy = x.productset(y)?;
    let two_xy = xy.iterated_sum(2, backend)?;
    let spread = two_xy.difference(&two_xy)?;
    let shifted = x.sumset(&y.dilate(inst.modulus.element(xi))?, backend)?;
    verdict(spread.cardinality() >= shifted.cardinality())
}

fn ruzsa_triangle(inst: &BoundInstance) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let z = inst.set("Z")?;
    let lhs = x.cardinality() as u128 * y.difference(z)?.cardinality() as u128;
    let rhs =
        x.difference(y)?.cardinality() as u128 * x.difference(z)?.cardinality() as u128;
    verdict(lhs <= rhs)
}

fn unconditional_expansion_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let a = inst.scalar("a")?;
    if y.cardinality() <= 1 || a % inst.modulus.value() == 0 {
        return Ok(Outcome::Vacuous);
    }
    let t = expansion_set(x, y, a, backend)?;
    let p1 = inst.modulus.value() as u128 - 1;
    let xy = x.cardinality() as u128 * y.cardinality() as u128;
    verdict(t.cardinality() as u128 * (xy + p1) >= xy * p1)
}

fn square_chain_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let y = inst.set("Y")?;
    if y.cardinality() <= 1 {
        return Ok(Outcome::Vacuous);
    }
    let three_y2 = y.product_power(2)?.iterated_sum(3, backend)?;
    let spread = three_y2.difference(&three_y2)?;
    let p1 = inst.modulus.value() as u128 - 1;
    let y2 = y.cardinality() as u128 * y.cardinality() as u128;
    verdict(spread.cardinality() as u128 * (y2 + p1) >= y2 * p1)
}

fn chain_step_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let y = inst.set("Y")?;
    let big_k = inst.scalar("K")?;
    let k = inst.scalar("k")?;
    if y.cardinality() <= 1 || big_k < 1 || k < 1 {
        return Ok(Outcome::Vacuous);
    }
    let yk = y.product_power(k)?.iterated_sum(big_k, backend)?;
    let x = yk.difference(&yk)?;
    let next = y
        .product_power(k + 1)?
        .iterated_sum(4 * big_k + 1, backend)?;
    let spread = next.difference(&next)?;
    let p1 = inst.modulus.value() as u128 - 1;
    let xy = x.cardinality() as u128 * y.cardinality() as u128;
    verdict(spread.cardinality() as u128 * (xy + p1) >= xy * p1)
}

fn sum_vs_difference_root(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let y = inst.set("Y")?;
    let s = x.sumset(y, backend)?.cardinality() as u128;
    let rhs = x.cardinality() as u128 * y.difference(y)?.cardinality() as u128;
    verdict(s * s >= rhs)
}

fn iterated_sum_root_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let x = inst.set("X")?;
    let k = inst.scalar("k")?;
    if k < 1 || x.is_empty() {
        return Ok(Outcome::Vacuous);
    }
    if k > 20 {
        return Err(HarnessError::InstanceOutOfRange(
            "k > 20 makes the cleared exponent 2^{k-1} impractical",
        ));
    }
    // Cleared form: |kX|^{2^{k-1}} >= |X| * |X-X|^{2^{k-1} - 1}.
    let e = 1u32 << (k - 1);
    let kx = x.iterated_sum(k, backend)?;
    let lhs = BigUint::from(kx.cardinality()).pow(e);
    let rhs = BigUint::from(x.cardinality())
        * BigUint::from(x.difference(x)?.cardinality()).pow(e - 1);
    verdict(lhs >= rhs)
}

/// Grid of admissible `U` values: quarters of `|A|^k` plus the paper's
/// preferred operating point `min(|A|^k, (p-1)/2)`.
fn u_grid(q: &BigUint, p: u64) -> Vec<BigUint> {
    let mut grid = vec![
        BigUint::ZERO,
        q / 4u32,
        q / 2u32,
        (q * 3u32) / 4u32,
        q.clone(),
    ];
    grid.push(q.clone().min(BigUint::from((p - 1) / 2)));
    grid
}

fn chain_quadratic_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let a = inst.set("A")?;
    let k = inst.scalar("k")?;
    if a.cardinality() < 5 || k < 1 {
        return Ok(Outcome::Vacuous);
    }
    let chain = a_k_chain(a, k as u32, backend)?;
    let p = inst.modulus.value();
    // Cleared form: 4(p-1)|A_k| >= 4(p-1)U - 5U^2, signed.
    let lhs = BigInt::from(4u32) * BigInt::from(p - 1) * BigInt::from(chain.cardinality());
    let q = BigUint::from(a.cardinality()).pow(k as u32);
    for u in u_grid(&q, p) {
        let u = BigInt::from(u);
        let rhs = BigInt::from(4u32) * BigInt::from(p - 1) * &u - BigInt::from(5u32) * &u * &u;
        if lhs < rhs {
            return Ok(Outcome::Fails);
        }
    }
    Ok(Outcome::Holds)
}

fn chain_min_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let a = inst.set("A")?;
    let k = inst.scalar("k")?;
    if a.cardinality() < 5 || k < 1 {
        return Ok(Outcome::Vacuous);
    }
    let chain = a_k_chain(a, k as u32, backend)?;
    let p = inst.modulus.value();
    let operating = BigUint::from(a.cardinality())
        .pow(k as u32)
        .min(BigUint::from((p - 1) / 2));
    // 8 |A_k| >= 3 min(|A|^k, (p-1)/2)
    verdict(BigUint::from(8 * chain.cardinality()) >= 3u32 * operating)
}

fn power_sum_bound(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let a = inst.set("A")?;
    let k = inst.scalar("k")?;
    let p = inst.modulus.value();
    if a.cardinality() < 5 || k < 2 {
        return Ok(Outcome::Vacuous);
    }
    // The range condition k <= 1 + log((p-1)/2)/log|A| as exact integers.
    if BigUint::from(a.cardinality()).pow(k as u32 - 1) > BigUint::from((p - 1) / 2) {
        return Ok(Outcome::Vacuous);
    }
    let reach = nk_power_sum(a, k as u32, backend)?;
    // Cleared form: 8^7 |N_k A^k|^7 >= 3^7 |A|^{7k - 8}.
    let lhs = BigUint::from(8u32).pow(7) * BigUint::from(reach.cardinality()).pow(7);
    let rhs =
        BigUint::from(3u32).pow(7) * BigUint::from(a.cardinality()).pow(7 * k as u32 - 8);
    verdict(lhs >= rhs)
}

fn witness_soundness(
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    let a = inst.set("A")?;
    let n = inst.scalar("n")? as u32;
    let eps = inst.real("eps")?;
    let p = inst.modulus.value();
    let card = a.cardinality();
    if n < 2
        || !(eps > 0.0 && eps < n as f64)
        || card == 0
        || BigUint::from(card).pow(n) <= BigUint::from(p)
    {
        return Ok(Outcome::Vacuous);
    }
    let w = construct::theorem1_construct(a, n, eps, backend, &Budget::default())?;
    if !w.cover_verified {
        return Ok(Outcome::Fails);
    }
    // Independent replay of the dispatch and the per-case order formula.
    let expected = if card <= 4 {
        (1u8, 1u64 << (2 * n))
    } else if a.iterated_sum(4, backend)?.is_full() {
        (2, 4)
    } else {
        let n0 = construct::floor_log_half_p(card, p);
        if n0 == n - 1 {
            (3, 64 * construct::case3_k(eps) as u64 * construct::nk(n - 1).value)
        } else {
            (4, 192 * construct::nk(n - 1).value)
        }
    };
    verdict((w.case_number, w.cover_order) == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zp::PrimeModulus;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn set(p: u64, elems: &[u64]) -> ZpSet {
        ZpSet::from_elements(m(p), elems.iter().copied())
    }

    const BK: SumsetBackend = SumsetBackend::DenseShift;

    #[test]
    fn l1_spec_example() {
        let inst = BoundInstance::new(m(5))
            .with_set("A", set(5, &[1, 2, 3]))
            .with_set("B", set(5, &[1, 2, 3, 4]));
        assert_eq!(check(LemmaId::L1, &inst, BK).unwrap(), Outcome::Holds);
    }

    #[test]
    fn l1_vacuous_when_small() {
        let inst = BoundInstance::new(m(5))
            .with_set("A", set(5, &[1]))
            .with_set("B", set(5, &[1, 2]));
        assert_eq!(check(LemmaId::L1, &inst, BK).unwrap(), Outcome::Vacuous);
    }

    #[test]
    fn l7_singleton_reasoning() {
        let inst = BoundInstance::new(m(7))
            .with_set("X", set(7, &[3]))
            .with_set("Y", set(7, &[1, 2]))
            .with_set("Z", set(7, &[0, 4, 5]));
        assert_eq!(check(LemmaId::L7, &inst, BK).unwrap(), Outcome::Holds);
    }

    #[test]
    fn l9_spec_example() {
        // p=7, A={1..5}, k=2: |A_2| = 7 >= (3/8) min(25, 3).
        let inst = BoundInstance::new(m(7))
            .with_set("A", set(7, &[1, 2, 3, 4, 5]))
            .with_scalar("k", 2);
        assert_eq!(check(LemmaId::L9, &inst, BK).unwrap(), Outcome::Holds);
    }

    #[test]
    fn l3_spec_example() {
        let inst = BoundInstance::new(m(5))
            .with_set("X", set(5, &[0, 1]))
            .with_set("Y", set(5, &[0, 2]))
            .with_scalar("xi", 2);
        assert_eq!(check(LemmaId::L3, &inst, BK).unwrap(), Outcome::Holds);
    }

    #[test]
    fn t1_golden_instances() {
        let inst = BoundInstance::new(m(5))
            .with_set("A", set(5, &[0, 1, 2]))
            .with_scalar("n", 2)
            .with_real("eps", 0.5);
        assert_eq!(check(LemmaId::T1, &inst, BK).unwrap(), Outcome::Holds);

        let inst = BoundInstance::new(m(101))
            .with_set("A", set(101, &(1..=11).collect::<Vec<_>>()))
            .with_scalar("n", 2)
            .with_real("eps", 0.5);
        assert_eq!(check(LemmaId::T1, &inst, BK).unwrap(), Outcome::Holds);

        // hypothesis unmet: vacuous, not an error
        let inst = BoundInstance::new(m(7))
            .with_set("A", set(7, &[1, 2]))
            .with_scalar("n", 2)
            .with_real("eps", 1.9);
        assert_eq!(check(LemmaId::T1, &inst, BK).unwrap(), Outcome::Vacuous);
    }

    #[test]
    fn cd_arity_three() {
        let inst = BoundInstance::new(m(5))
            .with_set("X1", set(5, &[0, 1]))
            .with_set("X2", set(5, &[2]))
            .with_set("X3", set(5, &[1, 3]));
        assert_eq!(check(LemmaId::Cd, &inst, BK).unwrap(), Outcome::Holds);
    }

    #[test]
    fn c7_exhaustive_small_exponent_agrees_with_floats() {
        // Exactness transform cross-check on random instances.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mm = m(101);
        for _ in 0..100 {
            let size = rng.random_range(1..=24u64);
            let mut elems = std::collections::BTreeSet::new();
            while (elems.len() as u64) < size {
                elems.insert(rng.random_range(0..101u64));
            }
            let x = ZpSet::from_elements(mm, elems.iter().copied());
            let k = rng.random_range(1..=4u64);
            let inst = BoundInstance::new(mm)
                .with_set("X", x.clone())
                .with_scalar("k", k);
            let exact = check(LemmaId::C7, &inst, BK).unwrap();
            // float route: log |kX| >= 2^{1-k} log|X| + (1 - 2^{1-k}) log|X-X|
            let kx = x.iterated_sum(k, BK).unwrap().cardinality() as f64;
            let dx = x.difference(&x).unwrap().cardinality() as f64;
            let w = (2.0f64).powi(1 - k as i32);
            let rhs = w * (x.cardinality() as f64).ln() + (1.0 - w) * dx.ln();
            let diff = kx.ln() - rhs;
            if diff.abs() > 1e-9 {
                let float_holds = diff > 0.0;
                assert_eq!(exact == Outcome::Holds, float_holds);
            }
        }
    }
}
