//! Exact subsets of `Z_p` and the set operations the whole engine is built
//! from: sumsets, difference sets, product and quotient sets, dilations,
//! iterated sums by doubling, multiplicative powers, the Q-set
//! `(X-X)/(Y-Y)`, and exponential-sum magnitudes.
//!
//! A set is a length-p bit vector with a cached cardinality. The sumset has
//! two interchangeable backends: a dense shift-and-or over the bit vector
//! (`O(|X| * p / 64)`), and an exact NTT convolution of indicator vectors.
//! Both produce identical supports; the property tests and the acceptance
//! suite hold them to that.

use std::f64::consts::TAU;
use std::fmt;

use thiserror::Error;

use crate::ntt;
use crate::zp::{PrimeModulus, ZpElement};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SetError {
    #[error("operands live over different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("denominator set has no nonzero element")]
    EmptyDenominator,
    #[error("Q[X,Y] needs |Y| > 1")]
    DegenerateY,
    #[error("exponential-sum coefficient must be nonzero")]
    ZeroCoefficient,
}

/// Which sumset engine to run. The two are interchangeable by contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumsetBackend {
    #[default]
    DenseShift,
    NttConvolution,
}

/// An immutable subset of `Z_p`, stored as a bit vector with one bit per
/// residue and a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZpSet {
    modulus: PrimeModulus,
    limbs: Vec<u64>,
    card: u64,
}

impl fmt::Debug for ZpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZpSet(mod {}) {{", self.modulus)?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if i >= 32 {
                write!(f, "..")?;
                break;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}} (|.|={})", self.card)
    }
}

#[inline]
fn limbs_for(p: u64) -> usize {
    ((p + 63) / 64) as usize
}

impl ZpSet {
    pub fn empty(modulus: PrimeModulus) -> Self {
        ZpSet {
            modulus,
            limbs: vec![0; limbs_for(modulus.value())],
            card: 0,
        }
    }

    pub fn full(modulus: PrimeModulus) -> Self {
        let p = modulus.value();
        let mut limbs = vec![u64::MAX; limbs_for(p)];
        mask_tail(&mut limbs, p);
        ZpSet {
            modulus,
            limbs,
            card: p,
        }
    }

    /// Members are reduced mod p; duplicates collapse.
    pub fn from_elements(modulus: PrimeModulus, elements: impl IntoIterator<Item = u64>) -> Self {
        let mut s = ZpSet::empty(modulus);
        for e in elements {
            s.insert(e % modulus.value());
        }
        s
    }

    pub fn singleton(modulus: PrimeModulus, v: u64) -> Self {
        ZpSet::from_elements(modulus, [v])
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn cardinality(&self) -> u64 {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.card == self.modulus.value()
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        let v = v % self.modulus.value();
        self.limbs[(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    /// True when some member is nonzero, i.e. the set is not `{}` or `{0}`.
    pub fn has_nonzero(&self) -> bool {
        self.card > if self.contains(0) { 1 } else { 0 }
    }

    /// Ascending members.
    pub fn iter(&self) -> Elements<'_> {
        Elements {
            limbs: &self.limbs,
            word: 0,
            bits: self.limbs.first().copied().unwrap_or(0),
        }
    }

    pub fn elements(&self) -> Vec<u64> {
        self.iter().collect()
    }

    fn insert(&mut self, v: u64) {
        debug_assert!(v < self.modulus.value());
        let w = (v / 64) as usize;
        let bit = 1u64 << (v % 64);
        if self.limbs[w] & bit == 0 {
            self.limbs[w] |= bit;
            self.card += 1;
        }
    }

    fn check_modulus(&self, other: &ZpSet) -> Result<(), SetError> {
        if self.modulus != other.modulus {
            return Err(SetError::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ));
        }
        Ok(())
    }

    /// `{-x : x in X}`.
    pub fn negate(&self) -> ZpSet {
        let m = self.modulus;
        let mut out = ZpSet::empty(m);
        for e in self.iter() {
            out.insert(m.neg(e));
        }
        out
    }

    /// Sumset `{x + y mod p}`. Empty if either operand is empty.
    pub fn sumset(&self, other: &ZpSet, backend: SumsetBackend) -> Result<ZpSet, SetError> {
        self.check_modulus(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(ZpSet::empty(self.modulus));
        }
        if self.is_full() || other.is_full() {
            return Ok(ZpSet::full(self.modulus));
        }
        Ok(match backend {
            SumsetBackend::DenseShift => self.sumset_dense(other),
            SumsetBackend::NttConvolution => self.sumset_ntt(other),
        })
    }

    fn sumset_dense(&self, other: &ZpSet) -> ZpSet {
        let p = self.modulus.value();
        // Shift the larger set by each element of the smaller one.
        let (walk, table) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let doubled = doubled_bits(&table.limbs, p);
        let mut limbs = vec![0u64; limbs_for(p)];
        for e in walk.iter() {
            // Rotation by e: dst[i] = table[(i - e) mod p] = doubled[i + p - e].
            or_window(&mut limbs, &doubled, p - e);
        }
        mask_tail(&mut limbs, p);
        let card = popcount(&limbs);
        ZpSet {
            modulus: self.modulus,
            limbs,
            card,
        }
    }

    fn sumset_ntt(&self, other: &ZpSet) -> ZpSet {
        let mut out = ZpSet::empty(self.modulus);
        ntt::cyclic_convolution_support(
            self.modulus.value(),
            self.iter(),
            other.iter(),
            &mut |i| out.insert(i),
        );
        out
    }

    /// Difference set `{x - y mod p}`.
    pub fn difference(&self, other: &ZpSet) -> Result<ZpSet, SetError> {
        self.sumset(&other.negate(), SumsetBackend::DenseShift)
    }

    /// Product set `{x * y mod p}`.
    pub fn productset(&self, other: &ZpSet) -> Result<ZpSet, SetError> {
        self.check_modulus(other)?;
        let m = self.modulus;
        let mut out = ZpSet::empty(m);
        if self.is_empty() || other.is_empty() {
            return Ok(out);
        }
        let (outer, inner) = if self.card <= other.card {
            (self, other)
        } else {
            (other, self)
        };
        let inner_elems = inner.elements();
        for x in outer.iter() {
            for &y in &inner_elems {
                out.insert(m.mul(x, y));
            }
            if out.is_full() {
                break;
            }
        }
        Ok(out)
    }

    /// Quotient set `{x / y : y != 0}`. Zero denominators are skipped; a
    /// nonempty denominator set without any nonzero element is an error,
    /// while an empty one propagates to an empty result.
    pub fn quotientset(&self, other: &ZpSet) -> Result<ZpSet, SetError> {
        self.check_modulus(other)?;
        let m = self.modulus;
        let mut out = ZpSet::empty(m);
        if self.is_empty() || other.is_empty() {
            return Ok(out);
        }
        if !other.has_nonzero() {
            return Err(SetError::EmptyDenominator);
        }
        let numer = self.elements();
        for y in other.iter() {
            if y == 0 {
                continue;
            }
            let y_inv = m.inv(y).expect("nonzero y");
            for &x in &numer {
                out.insert(m.mul(x, y_inv));
            }
            if out.is_full() {
                break;
            }
        }
        Ok(out)
    }

    /// Dilation `{lambda * a}`.
    pub fn dilate(&self, lambda: ZpElement) -> Result<ZpSet, SetError> {
        if lambda.modulus() != self.modulus {
            return Err(SetError::ModulusMismatch(
                lambda.modulus().value(),
                self.modulus.value(),
            ));
        }
        let m = self.modulus;
        if lambda.value() == 1 {
            return Ok(self.clone());
        }
        let mut out = ZpSet::empty(m);
        if self.is_empty() {
            return Ok(out);
        }
        if lambda.is_zero() {
            out.insert(0);
            return Ok(out);
        }
        for e in self.iter() {
            out.insert(m.mul(lambda.value(), e));
        }
        Ok(out)
    }

    /// k-fold sumset `kX` by binary doubling over `(a+b)X = aX + bX`.
    pub fn iterated_sum(&self, k: u64, backend: SumsetBackend) -> Result<ZpSet, SetError> {
        assert!(k >= 1, "iterated_sum requires k >= 1");
        if self.is_empty() {
            return Ok(self.clone());
        }
        let mut acc: Option<ZpSet> = None;
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc.take() {
                    None => base.clone(),
                    Some(s) if s.is_full() => s,
                    Some(s) => s.sumset(&base, backend)?,
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            if !base.is_full() {
                base = base.sumset(&base, backend)?;
            }
        }
        Ok(acc.expect("k >= 1 sets the accumulator"))
    }

    /// k-fold product set `X^k` by successive multiplication.
    pub fn product_power(&self, k: u64) -> Result<ZpSet, SetError> {
        assert!(k >= 1, "product_power requires k >= 1");
        let mut acc = self.clone();
        for _ in 1..k {
            // Z_p * X stays Z_p once X has a nonzero member.
            if acc.is_full() && self.has_nonzero() {
                break;
            }
            acc = acc.productset(self)?;
        }
        Ok(acc)
    }

    /// `Q[X,Y] = (X-X)/(Y-Y)`, defined for `|Y| > 1`.
    pub fn q_set(x: &ZpSet, y: &ZpSet) -> Result<ZpSet, SetError> {
        x.check_modulus(y)?;
        if y.cardinality() <= 1 {
            return Err(SetError::DegenerateY);
        }
        let dx = x.difference(x)?;
        let dy = y.difference(y)?;
        dx.quotientset(&dy)
    }
}

/// `|sum over x in X, y in Y of exp(2 pi i a x y / p)|` in double precision,
/// accumulated in ascending (x, y) order so results reproduce exactly.
pub fn exp_sum_magnitude(x: &ZpSet, y: &ZpSet, a: ZpElement) -> Result<f64, SetError> {
    if x.modulus() != y.modulus() || a.modulus() != x.modulus() {
        return Err(SetError::ModulusMismatch(
            x.modulus().value(),
            y.modulus().value(),
        ));
    }
    if a.is_zero() {
        return Err(SetError::ZeroCoefficient);
    }
    if x.is_empty() || y.is_empty() {
        return Ok(0.0);
    }
    let m = x.modulus();
    let p = m.value();
    // Unit-circle table for p below ~1M; direct sin/cos beyond that.
    let table: Option<Vec<(f64, f64)>> = if p <= 1 << 20 {
        Some(
            (0..p)
                .map(|t| {
                    let ang = TAU * t as f64 / p as f64;
                    (ang.cos(), ang.sin())
                })
                .collect(),
        )
    } else {
        None
    };
    let ys = y.elements();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for xv in x.iter() {
        let ax = m.mul(a.value(), xv);
        for &yv in &ys {
            let t = m.mul(ax, yv);
            let (c, s) = match &table {
                Some(tab) => tab[t as usize],
                None => {
                    let ang = TAU * t as f64 / p as f64;
                    (ang.cos(), ang.sin())
                }
            };
            re += c;
            im += s;
        }
    }
    Ok(re.hypot(im))
}

fn mask_tail(limbs: &mut [u64], p: u64) {
    let used = (p % 64) as u32;
    if used != 0 {
        if let Some(last) = limbs.last_mut() {
            *last &= (1u64 << used) - 1;
        }
    }
}

fn popcount(limbs: &[u64]) -> u64 {
    limbs.iter().map(|w| w.count_ones() as u64).sum()
}

/// The set's bits twice in a row: bit j of the result equals bit `j mod p`
/// of the input, for j < 2p. One trailing pad limb lets readers overshoot.
fn doubled_bits(limbs: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; limbs_for(2 * p) + 1];
    out[..limbs.len()].copy_from_slice(limbs);
    let shift = p;
    let word = (shift / 64) as usize;
    let bit = (shift % 64) as u32;
    for (i, &w) in limbs.iter().enumerate() {
        out[word + i] |= w << bit;
        if bit > 0 {
            out[word + i + 1] |= w >> (64 - bit);
        }
    }
    out
}

/// OR `src` bits `[offset, offset + len(dst)*64)` into `dst`.
fn or_window(dst: &mut [u64], src: &[u64], offset: u64) {
    let word = (offset / 64) as usize;
    let bit = (offset % 64) as u32;
    if bit == 0 {
        for (i, d) in dst.iter_mut().enumerate() {
            *d |= src[word + i];
        }
    } else {
        for (i, d) in dst.iter_mut().enumerate() {
            *d |= src[word + i] >> bit | src[word + i + 1] << (64 - bit);
        }
    }
}

/// Ascending iterator over set members.
pub struct Elements<'a> {
    limbs: &'a [u64],
    word: usize,
    bits: u64,
}

impl Iterator for Elements<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.limbs.len() {
                return None;
            }
            self.bits = self.limbs[self.word];
        }
        let tz = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some(self.word as u64 * 64 + tz as u64)
    }
}

impl<'a> IntoIterator for &'a ZpSet {
    type Item = u64;
    type IntoIter = Elements<'a>;

    fn into_iter(self) -> Elements<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn set(p: u64, elems: &[u64]) -> ZpSet {
        ZpSet::from_elements(m(p), elems.iter().copied())
    }

    // Independent oracles: direct pair enumeration over Vec<bool>.
    fn naive_op(p: u64, xs: &[u64], ys: &[u64], f: impl Fn(u64, u64) -> u64) -> Vec<u64> {
        let mut seen = vec![false; p as usize];
        for &a in xs {
            for &b in ys {
                seen[f(a, b) as usize] = true;
            }
        }
        (0..p).filter(|&v| seen[v as usize]).collect()
    }

    fn naive_sumset(p: u64, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        naive_op(p, xs, ys, |a, b| (a + b) % p)
    }

    fn naive_difference(p: u64, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        naive_op(p, xs, ys, |a, b| (a + p - b) % p)
    }

    fn naive_product(p: u64, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        naive_op(p, xs, ys, |a, b| a * b % p)
    }

    fn naive_iterated(p: u64, xs: &[u64], k: u64) -> Vec<u64> {
        let mut acc: Vec<u64> = xs.to_vec();
        for _ in 1..k {
            acc = naive_sumset(p, &acc, xs);
        }
        acc.sort_unstable();
        acc.dedup();
        acc
    }

    #[test]
    fn membership_and_cardinality() {
        let s = set(101, &[1, 2, 103]);
        assert_eq!(s.cardinality(), 2); // 103 reduces onto 2
        assert!(s.contains(1) && s.contains(2) && !s.contains(3));
        assert_eq!(s.elements(), vec![1, 2]);
        assert!(ZpSet::empty(m(7)).is_empty());
        assert!(ZpSet::full(m(7)).is_full());
        assert_eq!(ZpSet::full(m(7)).cardinality(), 7);
    }

    #[test]
    fn sumset_examples() {
        for backend in [SumsetBackend::DenseShift, SumsetBackend::NttConvolution] {
            assert_eq!(
                set(7, &[1, 2]).sumset(&set(7, &[1, 2]), backend).unwrap(),
                set(7, &[2, 3, 4])
            );
            // additive identity
            let x = set(7, &[0, 3, 5]);
            assert_eq!(set(7, &[0]).sumset(&x, backend).unwrap(), x);
            // Cauchy-Davenport equality case
            let s = set(5, &[0, 1]).sumset(&set(5, &[0, 1]), backend).unwrap();
            assert_eq!(s, set(5, &[0, 1, 2]));
            assert_eq!(s.cardinality(), 3);
            // empty operand
            assert!(x
                .sumset(&ZpSet::empty(m(7)), backend)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let e = set(7, &[1]).sumset(&set(5, &[1]), SumsetBackend::DenseShift);
        assert_eq!(e, Err(SetError::ModulusMismatch(7, 5)));
        assert!(set(7, &[1]).difference(&set(5, &[1])).is_err());
        assert!(set(7, &[1]).productset(&set(5, &[1])).is_err());
    }

    #[test]
    fn difference_examples() {
        assert_eq!(
            set(7, &[1, 2]).difference(&set(7, &[1, 2])).unwrap(),
            set(7, &[0, 1, 6])
        );
        assert_eq!(
            set(5, &[0, 1]).difference(&set(5, &[0, 2])).unwrap(),
            set(5, &[0, 1, 3, 4])
        );
        // X - X contains 0 for nonempty X
        let x = set(101, &[5, 17, 99]);
        assert!(x.difference(&x).unwrap().contains(0));
    }

    #[test]
    fn product_examples() {
        assert_eq!(
            set(7, &[1, 2]).productset(&set(7, &[1, 2])).unwrap(),
            set(7, &[1, 2, 4])
        );
        let x = set(7, &[2, 3, 6]);
        assert_eq!(set(7, &[1]).productset(&x).unwrap(), x);
        assert_eq!(set(7, &[0]).productset(&x).unwrap(), set(7, &[0]));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(
            set(5, &[0, 1, 4]).quotientset(&set(5, &[2, 3])).unwrap(),
            set(5, &[0, 2, 3])
        );
        let x = set(7, &[3, 5]);
        assert_eq!(x.quotientset(&set(7, &[1])).unwrap(), x);
        assert_eq!(
            x.quotientset(&set(7, &[0])),
            Err(SetError::EmptyDenominator)
        );
        // empty denominator set propagates to empty, per the closure rule
        assert!(x.quotientset(&ZpSet::empty(m(7))).unwrap().is_empty());
        // zero denominators are skipped, not fatal
        assert_eq!(
            set(7, &[2]).quotientset(&set(7, &[0, 2])).unwrap(),
            set(7, &[1])
        );
    }

    #[test]
    fn dilate_examples() {
        let mm = m(7);
        assert_eq!(
            set(7, &[1, 2]).dilate(mm.element(3)).unwrap(),
            set(7, &[3, 6])
        );
        let a = set(7, &[2, 5]);
        assert_eq!(a.dilate(mm.element(1)).unwrap(), a);
        assert_eq!(a.dilate(mm.element(0)).unwrap(), set(7, &[0]));
        assert!(ZpSet::empty(mm).dilate(mm.element(0)).unwrap().is_empty());
    }

    #[test]
    fn iterated_sum_examples() {
        assert_eq!(
            set(5, &[0, 1])
                .iterated_sum(3, SumsetBackend::DenseShift)
                .unwrap(),
            set(5, &[0, 1, 2, 3])
        );
        let x = set(7, &[1, 5]);
        assert_eq!(x.iterated_sum(1, SumsetBackend::DenseShift).unwrap(), x);
        assert_eq!(
            set(7, &[0])
                .iterated_sum(17, SumsetBackend::DenseShift)
                .unwrap(),
            set(7, &[0])
        );
    }

    #[test]
    fn product_power_examples() {
        assert_eq!(
            set(7, &[1, 2]).product_power(2).unwrap(),
            set(7, &[1, 2, 4])
        );
        assert_eq!(
            set(7, &[1, 2]).product_power(3).unwrap(),
            set(7, &[1, 2, 4])
        );
        let x = set(7, &[2, 3]);
        assert_eq!(x.product_power(1).unwrap(), x);
    }

    #[test]
    fn q_set_examples() {
        assert_eq!(
            ZpSet::q_set(&set(5, &[0, 1]), &set(5, &[0, 2])).unwrap(),
            set(5, &[0, 2, 3])
        );
        assert_eq!(
            ZpSet::q_set(&set(7, &[0, 1]), &set(7, &[0, 1])).unwrap(),
            set(7, &[0, 1, 6])
        );
        // singleton X gives {0}
        assert_eq!(
            ZpSet::q_set(&set(7, &[4]), &set(7, &[1, 2, 5])).unwrap(),
            set(7, &[0])
        );
        assert_eq!(
            ZpSet::q_set(&set(7, &[0, 1]), &set(7, &[3])),
            Err(SetError::DegenerateY)
        );
    }

    #[test]
    fn exp_sum_examples() {
        let m5 = m(5);
        let full = ZpSet::full(m5);
        let v = exp_sum_magnitude(&full, &full, m5.element(1)).unwrap();
        assert!((v - 5.0).abs() < 1e-9, "got {v}");

        let m7 = m(7);
        let x = set(7, &[1, 2, 4]);
        let v = exp_sum_magnitude(&x, &x, m7.element(1)).unwrap();
        assert!(v <= (7.0f64 * 9.0).sqrt() + 1e-6);
        // direct recomputation oracle
        let mut re = 0.0;
        let mut im = 0.0;
        for a in [1u64, 2, 4] {
            for b in [1u64, 2, 4] {
                let ang = TAU * ((a * b % 7) as f64) / 7.0;
                re += ang.cos();
                im += ang.sin();
            }
        }
        assert!((v - re.hypot(im)).abs() < 1e-12);

        assert_eq!(
            exp_sum_magnitude(&ZpSet::empty(m7), &x, m7.element(1)).unwrap(),
            0.0
        );
        assert_eq!(
            exp_sum_magnitude(&x, &x, m7.element(0)),
            Err(SetError::ZeroCoefficient)
        );
    }

    #[test]
    fn associativity_exhaustive_p5() {
        let mm = m(5);
        let subsets: Vec<ZpSet> = (1u32..32)
            .map(|mask| {
                ZpSet::from_elements(mm, (0..5).filter(|b| mask >> b & 1 == 1))
            })
            .collect();
        for x in &subsets {
            for y in &subsets {
                for z in &subsets {
                    let b = SumsetBackend::DenseShift;
                    let left = x.sumset(y, b).unwrap().sumset(z, b).unwrap();
                    let right = x.sumset(&y.sumset(z, b).unwrap(), b).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn cauchy_davenport_exhaustive_small() {
        for p in [5u64, 7] {
            let mm = m(p);
            let subsets: Vec<ZpSet> = (1u64..1 << p)
                .map(|mask| ZpSet::from_elements(mm, (0..p).filter(|b| mask >> b & 1 == 1)))
                .collect();
            for x in &subsets {
                for y in &subsets {
                    let s = x.sumset(y, SumsetBackend::DenseShift).unwrap();
                    let bound = (x.cardinality() + y.cardinality() - 1).min(p);
                    assert!(s.cardinality() >= bound);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dense_matches_naive(p in prop::sample::select(vec![3u64, 5, 7, 13, 101]),
                               xs in prop::collection::vec(0u64..200, 0..24),
                               ys in prop::collection::vec(0u64..200, 0..24)) {
            let xs: Vec<u64> = xs.iter().map(|v| v % p).collect();
            let ys: Vec<u64> = ys.iter().map(|v| v % p).collect();
            let x = set(p, &xs);
            let y = set(p, &ys);
            let got = x.sumset(&y, SumsetBackend::DenseShift).unwrap();
            prop_assert_eq!(got.elements(), naive_sumset(p, &xs, &ys));
            let got = x.difference(&y).unwrap();
            prop_assert_eq!(got.elements(), naive_difference(p, &xs, &ys));
            let got = x.productset(&y).unwrap();
            prop_assert_eq!(got.elements(), naive_product(p, &xs, &ys));
        }

        #[test]
        fn backends_agree(p in prop::sample::select(vec![101u64, 1009, 10007]),
                          xs in prop::collection::vec(0u64..10007, 1..48),
                          ys in prop::collection::vec(0u64..10007, 1..48)) {
            let x = ZpSet::from_elements(m(p), xs);
            let y = ZpSet::from_elements(m(p), ys);
            let dense = x.sumset(&y, SumsetBackend::DenseShift).unwrap();
            let conv = x.sumset(&y, SumsetBackend::NttConvolution).unwrap();
            prop_assert_eq!(dense, conv);
        }

        #[test]
        fn commutativity(p in prop::sample::select(vec![5u64, 101]),
                         xs in prop::collection::vec(0u64..101, 1..16),
                         ys in prop::collection::vec(0u64..101, 1..16)) {
            let x = ZpSet::from_elements(m(p), xs);
            let y = ZpSet::from_elements(m(p), ys);
            let b = SumsetBackend::DenseShift;
            prop_assert_eq!(x.sumset(&y, b).unwrap(), y.sumset(&x, b).unwrap());
            prop_assert_eq!(x.productset(&y).unwrap(), y.productset(&x).unwrap());
        }

        #[test]
        fn doubling_identity(a in 1u64..=8, b in 1u64..=8,
                             xs in prop::collection::vec(0u64..101, 1..12)) {
            let x = ZpSet::from_elements(m(101), xs);
            let bk = SumsetBackend::DenseShift;
            let whole = x.iterated_sum(a + b, bk).unwrap();
            let parts = x
                .iterated_sum(a, bk)
                .unwrap()
                .sumset(&x.iterated_sum(b, bk).unwrap(), bk)
                .unwrap();
            prop_assert_eq!(whole, parts);
        }

        #[test]
        fn iterated_matches_naive(k in 1u64..=5,
                                  xs in prop::collection::vec(0u64..13, 1..6)) {
            let xs: Vec<u64> = xs.iter().map(|v| v % 13).collect();
            let x = set(13, &xs);
            let got = x.iterated_sum(k, SumsetBackend::DenseShift).unwrap();
            prop_assert_eq!(got.elements(), naive_iterated(13, &xs, k));
        }

        #[test]
        fn dilation_distributes(lam in 0u64..101,
                                xs in prop::collection::vec(0u64..101, 1..12),
                                ys in prop::collection::vec(0u64..101, 1..12)) {
            let mm = m(101);
            let lam = mm.element(lam);
            let x = ZpSet::from_elements(mm, xs);
            let y = ZpSet::from_elements(mm, ys);
            let b = SumsetBackend::DenseShift;
            let left = x.sumset(&y, b).unwrap().dilate(lam).unwrap();
            let right = x
                .dilate(lam)
                .unwrap()
                .sumset(&y.dilate(lam).unwrap(), b)
                .unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn negate_involution(xs in prop::collection::vec(0u64..101, 0..20)) {
            let x = ZpSet::from_elements(m(101), xs);
            prop_assert_eq!(x.negate().negate(), x);
        }
    }
}
