//! Constructive objects: the coefficient sequence `N_k`, the expansion chain
//! `A_k = N_k A^k - N_k A^k`, the shifted-quotient search behind the key
//! cardinality bound, multiplicative subgroups, and the four-case pipeline
//! that turns a dense-enough set `A` into a machine-verified covering order
//! `N` with `N * A^n = Z_p`.
//!
//! Nothing here trusts the proof: every returned cover is recomputed from
//! scratch by direct set arithmetic and flagged accordingly.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::{SetError, SumsetBackend, ZpSet};
use crate::zp::{primitive_root, PrimeModulus, ZpElement};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("the expansion chain needs |A| >= 5, got {0}")]
    RestrictionViolated(u64),
    #[error("Q[X,Y] is all of Z_p; no shifted escape element exists")]
    QIsFull,
    #[error("Q[X,Y] is empty")]
    QIsEmpty,
    #[error("|Y| must exceed 1")]
    DegenerateY,
    #[error("covering hypothesis fails: |A|^n = {card}^{n} must exceed p = {p}")]
    HypothesisViolated { card: u64, n: u32, p: u64 },
    #[error("eps = {eps} must lie strictly inside (0, {n})")]
    EpsOutOfRange { eps: f64, n: u32 },
    #[error("the pipeline needs n >= 2, got {0}")]
    OrderTooSmall(u32),
    #[error("cover order {order} exceeds the compute budget {budget}")]
    ComputeBudgetExceeded { order: u64, budget: u64 },
    #[error("{d} does not divide p - 1 = {pm1}")]
    NotADivisor { d: u64, pm1: u64 },
}

/// Guardrail for witness construction: the covering order `N` is refused
/// above this bound (`N` grows like `4^n`, so runaway jobs are cheap to ask
/// for and expensive to run).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_cover_order: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cover_order: 1 << 24,
        }
    }
}

impl Budget {
    fn admit(&self, order: u64) -> Result<u64, ConstructError> {
        if order > self.max_cover_order {
            Err(ConstructError::ComputeBudgetExceeded {
                order,
                budget: self.max_cover_order,
            })
        } else {
            Ok(order)
        }
    }
}

/// Coefficient of the expansion chain: `N_1 = 1` by convention, `N_2 = 3`,
/// and `N_{k+1} = 4 N_k + 1` from there; equivalently `(5 * 4^k - 8) / 24`
/// for `k >= 2`, which is exact in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NkCoefficient {
    pub k: u32,
    pub value: u64,
}

pub fn nk(k: u32) -> NkCoefficient {
    assert!(k >= 1, "nk requires k >= 1");
    assert!(k <= 33, "N_k overflows u64 past k = 33");
    let value = match k {
        1 => 1,
        _ => {
            let mut v = 3u64;
            for _ in 2..k {
                v = 4 * v + 1;
            }
            v
        }
    };
    NkCoefficient { k, value }
}

/// `A_k = N_k A^k - N_k A^k` for `k >= 2`; `A_1 = A`. Requires `|A| >= 5`.
pub fn a_k_chain(a: &ZpSet, k: u32, backend: SumsetBackend) -> Result<ZpSet, ConstructError> {
    assert!(k >= 1, "a_k_chain requires k >= 1");
    if a.cardinality() < 5 {
        return Err(ConstructError::RestrictionViolated(a.cardinality()));
    }
    if k == 1 {
        return Ok(a.clone());
    }
    let reach = nk_power_sum(a, k, backend)?;
    Ok(reach.difference(&reach)?)
}

/// `N_k A^k` as a set: the `N_k`-fold sumset of the k-fold product set.
pub fn nk_power_sum(a: &ZpSet, k: u32, backend: SumsetBackend) -> Result<ZpSet, SetError> {
    let power = a.product_power(k as u64)?;
    power.iterated_sum(nk(k).value, backend)
}

/// Finds the smallest `xi` with `xi` in `Q[X,Y]` and `xi + a` outside it.
/// Such an element exists whenever `Q[X,Y]` is neither empty nor all of
/// `Z_p`, because a nonzero shift of a proper nonempty subset cannot fix it.
pub fn find_xi_lemma4(
    x: &ZpSet,
    y: &ZpSet,
    a: ZpElement,
) -> Result<ZpElement, ConstructError> {
    assert!(!a.is_zero(), "find_xi_lemma4 requires a != 0");
    if y.cardinality() <= 1 {
        return Err(ConstructError::DegenerateY);
    }
    let q = ZpSet::q_set(x, y)?;
    if q.is_full() {
        return Err(ConstructError::QIsFull);
    }
    if q.is_empty() {
        return Err(ConstructError::QIsEmpty);
    }
    let m = x.modulus();
    for xi in q.iter() {
        if !q.contains(m.add(xi, a.value())) {
            return Ok(m.element(xi));
        }
    }
    unreachable!("a proper nonempty subset of Z_p cannot absorb a nonzero shift")
}

/// Which branch of the case analysis produced the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl CaseId {
    pub fn number(self) -> u8 {
        match self {
            CaseId::Case1 => 1,
            CaseId::Case2 => 2,
            CaseId::Case3 => 3,
            CaseId::Case4 => 4,
        }
    }
}

/// A covering certificate: the case taken, the covering order `N`, the
/// dispatch quantities, and a `cover_verified` flag recomputed by direct
/// set arithmetic (`N * A^n = Z_p`), never trusted from the argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub p: u64,
    /// The base set, sorted ascending.
    pub a: Vec<u64>,
    pub n: u32,
    pub eps: f64,
    #[serde(rename = "case")]
    pub case_number: u8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(rename = "N")]
    pub cover_order: u64,
    pub cover_verified: bool,
    pub intermediate_sizes: Vec<(String, u64)>,
}

impl Witness {
    pub fn case_id(&self) -> CaseId {
        match self.case_number {
            1 => CaseId::Case1,
            2 => CaseId::Case2,
            3 => CaseId::Case3,
            _ => CaseId::Case4,
        }
    }
}

/// Largest `m >= 0` with `card^m <= (p-1)/2`, in exact integer arithmetic.
pub fn floor_log_half_p(card: u64, p: u64) -> u32 {
    debug_assert!(card >= 2);
    let limit = BigUint::from((p - 1) / 2);
    let base = BigUint::from(card);
    let mut power = base.clone();
    let mut m = 0u32;
    while power <= limit {
        power *= &base;
        m += 1;
    }
    m
}

/// `k = floor(log2(1/eps)) + 3`, clamped to at least 1.
pub fn case3_k(eps: f64) -> u32 {
    let raw = (1.0 / eps).log2().floor() as i64 + 3;
    raw.max(1) as u32
}

fn checked_pow4(n: u32, budget: &Budget) -> Result<u64, ConstructError> {
    if n >= 32 {
        return Err(ConstructError::ComputeBudgetExceeded {
            order: u64::MAX,
            budget: budget.max_cover_order,
        });
    }
    budget.admit(1u64 << (2 * n))
}

/// The four-case covering pipeline.
///
/// Dispatch order: Case 1 if `|A| <= 4` (N = 4^n); else Case 2 if
/// `4A = Z_p` (N = 4, since `a^{n-1} * (4A) = Z_p` sits inside `4 A^n` for
/// any nonzero `a` in `A`); otherwise `n_0` decides between Case 3
/// (`n_0 = n-1`, N = 64 k N_{n-1}) and Case 4 (`n_0 < n-1`,
/// N = 192 N_{n-1}).
///
/// The admission gate is the exact integer condition `|A|^n > p` — the
/// weakest hypothesis under which the dispatch quantities are defined
/// (it is exactly what `n_0 <= n-1` needs).
pub fn theorem1_construct(
    a: &ZpSet,
    n: u32,
    eps: f64,
    backend: SumsetBackend,
    budget: &Budget,
) -> Result<Witness, ConstructError> {
    if n < 2 {
        return Err(ConstructError::OrderTooSmall(n));
    }
    if !(eps > 0.0 && eps < n as f64) {
        return Err(ConstructError::EpsOutOfRange { eps, n });
    }
    let m = a.modulus();
    let p = m.value();
    let card = a.cardinality();
    if BigUint::from(card.max(1)).pow(n) <= BigUint::from(p) || card == 0 {
        return Err(ConstructError::HypothesisViolated { card, n, p });
    }

    let mut sizes: Vec<(String, u64)> = vec![("A".into(), card)];
    let mut n0 = None;
    let mut k = None;

    let (case, order) = if card <= 4 {
        (CaseId::Case1, checked_pow4(n, budget)?)
    } else {
        let four_a = a.iterated_sum(4, backend)?;
        sizes.push(("4A".into(), four_a.cardinality()));
        if four_a.is_full() {
            (CaseId::Case2, 4)
        } else {
            let m0 = floor_log_half_p(card, p);
            n0 = Some(m0);
            debug_assert!((1..n).contains(&m0), "the gate bounds n_0 into [1, n-1]");
            if m0 == n - 1 {
                let kk = case3_k(eps);
                k = Some(kk);
                let order = budget.admit(
                    64u64
                        .checked_mul(kk as u64)
                        .and_then(|v| v.checked_mul(nk(n - 1).value))
                        .unwrap_or(u64::MAX),
                )?;
                (CaseId::Case3, order)
            } else {
                let order = budget.admit(
                    192u64.checked_mul(nk(n - 1).value).unwrap_or(u64::MAX),
                )?;
                (CaseId::Case4, order)
            }
        }
    };

    let power = a.product_power(n as u64)?;
    sizes.push(("A^n".into(), power.cardinality()));
    let cover = power.iterated_sum(order, backend)?;
    sizes.push(("N*A^n".into(), cover.cardinality()));

    Ok(Witness {
        p,
        a: a.elements(),
        n,
        eps,
        case_number: case.number(),
        n0,
        k,
        cover_order: order,
        cover_verified: cover.is_full(),
        intermediate_sizes: sizes,
    })
}

/// The unique multiplicative subgroup of `Z_p^*` of order `d` (for
/// `d | p - 1`): powers of `g^{(p-1)/d}` for the smallest primitive root g.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupSpec {
    pub modulus: PrimeModulus,
    pub order: u64,
    pub elements: ZpSet,
}

pub fn make_subgroup(m: PrimeModulus, d: u64) -> Result<SubgroupSpec, ConstructError> {
    let p = m.value();
    if d == 0 || (p - 1) % d != 0 {
        return Err(ConstructError::NotADivisor { d, pm1: p - 1 });
    }
    let g = primitive_root(m);
    let h = m.pow(g, (p - 1) / d);
    let mut elems = Vec::with_capacity(d as usize);
    let mut x = 1u64;
    for _ in 0..d {
        elems.push(x);
        x = m.mul(x, h);
    }
    debug_assert_eq!(x, 1, "generator order must be exactly d");
    Ok(SubgroupSpec {
        modulus: m,
        order: d,
        elements: ZpSet::from_elements(m, elems),
    })
}

/// Covering check for a multiplicative subgroup `G`: picks the least
/// `n >= 2` with `|G|^{2n-1} > p^2` (that is `|G| > p^{1/(n-1/2)}`), runs
/// the pipeline with `eps = 1/2`, and returns its witness. Since
/// `G^n = G`, the verified cover `N * G^n` collapses to `N * G`.
pub fn corollary1_check(
    g: &SubgroupSpec,
    backend: SumsetBackend,
    budget: &Budget,
) -> Result<Witness, ConstructError> {
    let p = g.modulus.value();
    let card = g.order;
    let p2 = BigUint::from(p) * BigUint::from(p);
    let n = (2u32..=64)
        .find(|&n| BigUint::from(card).pow(2 * n - 1) > p2)
        .ok_or(ConstructError::HypothesisViolated { card, n: 64, p })?;
    theorem1_construct(&g.elements, n, 0.5, backend, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn set(p: u64, elems: &[u64]) -> ZpSet {
        ZpSet::from_elements(m(p), elems.iter().copied())
    }

    const BK: SumsetBackend = SumsetBackend::DenseShift;

    #[test]
    fn nk_first_values() {
        assert_eq!(nk(1).value, 1);
        assert_eq!(nk(2).value, 3);
        assert_eq!(nk(3).value, 13);
        assert_eq!(nk(4).value, 53);
    }

    #[test]
    fn nk_closed_form_is_integral_up_to_30() {
        for k in 2u32..=30 {
            let pow4 = 1u128 << (2 * k);
            assert_eq!((5 * pow4 - 8) % 24, 0, "k={k}");
            assert_eq!(nk(k).value as u128, (5 * pow4 - 8) / 24, "k={k}");
        }
    }

    #[test]
    fn chain_examples() {
        let a = set(7, &[1, 2, 3, 4, 5]);
        let a2 = a_k_chain(&a, 2, BK).unwrap();
        assert!(a2.is_full());
        // S - S is symmetric and contains 0
        let a_small = set(101, &[1, 5, 9, 22, 40]);
        for k in [1u32, 2, 3] {
            let chain = a_k_chain(&a_small, k, BK).unwrap();
            if k > 1 {
                assert!(chain.contains(0));
                assert_eq!(chain.negate(), chain);
            }
        }
        assert_eq!(
            a_k_chain(&set(7, &[1, 2]), 2, BK),
            Err(ConstructError::RestrictionViolated(2))
        );
    }

    #[test]
    fn xi_search_examples() {
        let x = set(7, &[0, 1]);
        let mm = m(7);
        assert_eq!(
            find_xi_lemma4(&x, &x, mm.element(1)).unwrap().value(),
            1
        );
        assert_eq!(
            find_xi_lemma4(&x, &x, mm.element(6)).unwrap().value(),
            6
        );
        let full = ZpSet::full(mm);
        assert_eq!(
            find_xi_lemma4(&full, &full, mm.element(1)),
            Err(ConstructError::QIsFull)
        );
        assert_eq!(
            find_xi_lemma4(&ZpSet::empty(mm), &x, mm.element(1)),
            Err(ConstructError::QIsEmpty)
        );
        assert_eq!(
            find_xi_lemma4(&x, &set(7, &[3]), mm.element(1)),
            Err(ConstructError::DegenerateY)
        );
    }

    #[test]
    fn xi_search_satisfies_lemma_conclusion_exhaustive_p5() {
        // Wherever the search succeeds, |2XY - 2XY + a*Y^2 - a*Y^2| >= |X||Y|.
        let mm = m(5);
        let subsets: Vec<ZpSet> = (1u32..32)
            .map(|mask| ZpSet::from_elements(mm, (0..5).filter(|b| mask >> b & 1 == 1)))
            .collect();
        let mut found = 0u32;
        for x in &subsets {
            for y in subsets.iter().filter(|y| y.cardinality() > 1) {
                for a in 1..5u64 {
                    let a = mm.element(a);
                    let Ok(xi) = find_xi_lemma4(x, y, a) else {
                        continue;
                    };
                    found += 1;
                    let q = ZpSet::q_set(x, y).unwrap();
                    assert!(q.contains(xi.value()));
                    assert!(!q.contains(mm.add(xi.value(), a.value())));
                    let xy = x.productset(y).unwrap();
                    let d1 = xy
                        .iterated_sum(2, BK)
                        .unwrap();
                    let d1 = d1.difference(&d1).unwrap();
                    let ay2 = y.product_power(2).unwrap().dilate(a).unwrap();
                    let d2 = ay2.difference(&ay2).unwrap();
                    let total = d1.sumset(&d2, BK).unwrap();
                    assert!(total.cardinality() >= x.cardinality() * y.cardinality());
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn golden_witness_case1() {
        let w = theorem1_construct(&set(5, &[0, 1, 2]), 2, 0.5, BK, &Budget::default()).unwrap();
        assert_eq!(w.case_number, 1);
        assert_eq!(w.cover_order, 16);
        assert!(w.cover_verified);
        assert_eq!(w.n0, None);
        assert_eq!(w.k, None);
    }

    #[test]
    fn golden_witness_case3() {
        let a: Vec<u64> = (1..=11).collect();
        let w = theorem1_construct(&set(101, &a), 2, 0.5, BK, &Budget::default()).unwrap();
        assert_eq!(w.case_number, 3);
        assert_eq!(w.n0, Some(1));
        assert_eq!(w.k, Some(4));
        assert_eq!(w.cover_order, 256);
        assert!(w.cover_verified);
    }

    #[test]
    fn hypothesis_gate() {
        // 2^2 = 4 < 7: rejected.
        let err = theorem1_construct(&set(7, &[1, 2]), 2, 1.9, BK, &Budget::default());
        assert_eq!(
            err,
            Err(ConstructError::HypothesisViolated {
                card: 2,
                n: 2,
                p: 7
            })
        );
        let err = theorem1_construct(&set(7, &[1, 2]), 2, 2.5, BK, &Budget::default());
        assert_eq!(err, Err(ConstructError::EpsOutOfRange { eps: 2.5, n: 2 }));
        let err = theorem1_construct(&set(7, &[1, 2]), 1, 0.5, BK, &Budget::default());
        assert_eq!(err, Err(ConstructError::OrderTooSmall(1)));
        let err = theorem1_construct(&ZpSet::empty(m(7)), 2, 0.5, BK, &Budget::default());
        assert!(matches!(err, Err(ConstructError::HypothesisViolated { .. })));
    }

    #[test]
    fn case2_when_4a_covers() {
        // A = Z_11 minus a point: 4A = Z_11, |A| = 10 > 4.
        let a = ZpSet::from_elements(m(11), 1..11);
        let w = theorem1_construct(&a, 2, 0.5, BK, &Budget::default()).unwrap();
        assert_eq!(w.case_number, 2);
        assert_eq!(w.cover_order, 4);
        assert!(w.cover_verified);
    }

    #[test]
    fn budget_refusal() {
        let tight = Budget { max_cover_order: 8 };
        let err = theorem1_construct(&set(5, &[0, 1, 2]), 2, 0.5, BK, &tight);
        assert_eq!(
            err,
            Err(ConstructError::ComputeBudgetExceeded {
                order: 16,
                budget: 8
            })
        );
    }

    #[test]
    fn case3_k_values() {
        assert_eq!(case3_k(0.25), 5);
        assert_eq!(case3_k(0.5), 4);
        assert_eq!(case3_k(1.0), 3);
        assert_eq!(case3_k(100.0), 1); // clamped
    }

    #[test]
    fn subgroup_examples() {
        let w = make_subgroup(m(7), 3).unwrap();
        assert_eq!(w.elements.elements(), vec![1, 2, 4]);
        assert_eq!(make_subgroup(m(7), 1).unwrap().elements.elements(), vec![1]);
        assert_eq!(
            make_subgroup(m(7), 6).unwrap().elements.elements(),
            vec![1, 2, 3, 4, 5, 6]
        );
        assert_eq!(
            make_subgroup(m(7), 4),
            Err(ConstructError::NotADivisor { d: 4, pm1: 6 })
        );
    }

    #[test]
    fn subgroup_closure() {
        for (p, d) in [(7u64, 3u64), (13, 4), (101, 25), (1009, 16)] {
            let g = make_subgroup(m(p), d).unwrap();
            assert_eq!(g.elements.cardinality(), d);
            assert!(g.elements.contains(1));
            let mm = m(p);
            for x in g.elements.iter() {
                assert!(g.elements.contains(mm.inv(x).unwrap()));
                for y in g.elements.iter() {
                    assert!(g.elements.contains(mm.mul(x, y)));
                }
            }
        }
    }

    #[test]
    fn corollary1_examples() {
        let g = make_subgroup(m(7), 3).unwrap();
        let w = corollary1_check(&g, BK, &Budget::default()).unwrap();
        assert!(w.cover_verified);
        // N * G = Z_p directly, exploiting G^n = G
        let cover = g
            .elements
            .iterated_sum(w.cover_order, BK)
            .unwrap();
        assert!(cover.is_full());

        let full_group = make_subgroup(m(13), 12).unwrap();
        let w = corollary1_check(&full_group, BK, &Budget::default()).unwrap();
        assert!(w.cover_verified);

        let trivial = make_subgroup(m(7), 1).unwrap();
        assert!(matches!(
            corollary1_check(&trivial, BK, &Budget::default()),
            Err(ConstructError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn witness_json_round_trip() {
        let w = theorem1_construct(&set(101, &(1..=11).collect::<Vec<_>>()), 2, 0.5, BK, &Budget::default())
            .unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.contains("\"case\":3"));
        assert!(json.contains("\"N\":256"));
        let back: Witness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
