//! Computational verification of the quantitative statements: instance
//! generators (exhaustive and seeded-random), one checker per lemma or
//! corollary, and report aggregation with a stable JSON form.
//!
//! Checkers verify hypotheses themselves: an instance that fails its
//! lemma's hypothesis is tallied as vacuous, never as a pass. `tested`
//! counts only hypothesis-satisfying instances.

mod checkers;
mod gen;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::ConstructError;
use crate::set::{SetError, SumsetBackend, ZpSet};
use crate::zp::PrimeModulus;

/// Every statement the harness can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    /// Cauchy-Davenport lower bound for |X_1 + ... + X_N|.
    Cd,
    /// Exponential-sum magnitude bound sqrt(p |X| |Y|).
    P1,
    /// |A| ceil(|B|/2) > p forces 8AB = Z_p.
    L1,
    /// |A||B| > p forces 16AB = Z_p.
    L2,
    /// xi in Q[X,Y] iff |X + xi*Y| < |X||Y|.
    L3,
    /// Q[X,Y] proper implies |2XY - 2XY + a*Y^2 - a*Y^2| >= |X||Y|.
    L4,
    /// Some xi in G has |X + xi*Y| >= |X||Y||G| / (|X||Y| + |G|).
    L5,
    /// xi in Q[X,Y] implies |2XY - 2XY| >= |X + xi*Y|.
    L6,
    /// Ruzsa triangle: |X||Y - Z| <= |X - Y||X - Z|.
    L7,
    /// Unconditional |2XY - 2XY + a*Y^2 - a*Y^2| bound.
    C3,
    /// |3Y^2 - 3Y^2| >= |Y|^2 (p-1) / (|Y|^2 + p - 1).
    C4,
    /// Chain step bound for |(4K+1) Y^{k+1} - (4K+1) Y^{k+1}|.
    C5,
    /// |X + Y| >= |X|^{1/2} |Y - Y|^{1/2}.
    C6,
    /// |kX| >= |X|^{2^{1-k}} |X - X|^{1 - 2^{1-k}}.
    C7,
    /// |A_k| >= U - (5/4) U^2 / (p-1) for all admissible U.
    L8,
    /// |A_k| >= (3/8) min(|A|^k, (p-1)/2).
    L9,
    /// |N_k A^k| >= (3/8) |A|^{k - 8/7} in the admissible k-range.
    L10,
    /// Witness soundness plus the explicit per-case cover-order formulas.
    T1,
}

impl LemmaId {
    pub const ALL: [LemmaId; 18] = [
        LemmaId::Cd,
        LemmaId::P1,
        LemmaId::L1,
        LemmaId::L2,
        LemmaId::L3,
        LemmaId::L4,
        LemmaId::L5,
        LemmaId::L6,
        LemmaId::L7,
        LemmaId::C3,
        LemmaId::C4,
        LemmaId::C5,
        LemmaId::C6,
        LemmaId::C7,
        LemmaId::L8,
        LemmaId::L9,
        LemmaId::L10,
        LemmaId::T1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Cd => "CD",
            LemmaId::P1 => "P1",
            LemmaId::L1 => "L1",
            LemmaId::L2 => "L2",
            LemmaId::L3 => "L3",
            LemmaId::L4 => "L4",
            LemmaId::L5 => "L5",
            LemmaId::L6 => "L6",
            LemmaId::L7 => "L7",
            LemmaId::C3 => "C3",
            LemmaId::C4 => "C4",
            LemmaId::C5 => "C5",
            LemmaId::C6 => "C6",
            LemmaId::C7 => "C7",
            LemmaId::L8 => "L8",
            LemmaId::L9 => "L9",
            LemmaId::L10 => "L10",
            LemmaId::T1 => "T1",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lemma id '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Random => "random",
        }
    }
}

/// Size caps for instance generation, plus the exhaustive-run budget
/// (maximum checker calls).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Cap on each randomly drawn set's cardinality.
    pub max_set: u64,
    /// Cap on |G| for the existential shift bound.
    pub max_g: u64,
    /// Summand count range for the Cauchy-Davenport checker.
    pub max_arity: u32,
    /// Cap on the iteration/power index k.
    pub max_k: u32,
    /// Cap on the chain coefficient K.
    pub max_coeff: u64,
    /// Exhaustive instance-space budget in checker calls.
    pub budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_set: 32,
            max_g: 16,
            max_arity: 3,
            max_k: 4,
            max_coeff: 4,
            budget: 10_000_000,
        }
    }
}

/// One concrete tuple of sets and scalars fed to a checker.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInstance {
    pub modulus: PrimeModulus,
    pub sets: BTreeMap<String, ZpSet>,
    pub scalars: BTreeMap<String, u64>,
    pub reals: BTreeMap<String, f64>,
}

impl BoundInstance {
    pub fn new(modulus: PrimeModulus) -> Self {
        BoundInstance {
            modulus,
            sets: BTreeMap::new(),
            scalars: BTreeMap::new(),
            reals: BTreeMap::new(),
        }
    }

    pub fn with_set(mut self, label: &str, set: ZpSet) -> Self {
        debug_assert_eq!(set.modulus(), self.modulus);
        self.sets.insert(label.to_string(), set);
        self
    }

    pub fn with_scalar(mut self, label: &str, v: u64) -> Self {
        self.scalars.insert(label.to_string(), v);
        self
    }

    pub fn with_real(mut self, label: &str, v: f64) -> Self {
        self.reals.insert(label.to_string(), v);
        self
    }

    pub fn set(&self, label: &str) -> Result<&ZpSet, HarnessError> {
        self.sets
            .get(label)
            .ok_or_else(|| HarnessError::MissingBinding(label.to_string()))
    }

    pub fn scalar(&self, label: &str) -> Result<u64, HarnessError> {
        self.scalars
            .get(label)
            .copied()
            .ok_or_else(|| HarnessError::MissingBinding(label.to_string()))
    }

    pub fn real(&self, label: &str) -> Result<f64, HarnessError> {
        self.reals
            .get(label)
            .copied()
            .ok_or_else(|| HarnessError::MissingBinding(label.to_string()))
    }

    pub fn to_doc(&self) -> InstanceDoc {
        InstanceDoc {
            sets: self
                .sets
                .iter()
                .map(|(k, v)| (k.clone(), v.elements()))
                .collect(),
            scalars: self.scalars.clone(),
            reals: self.reals.clone(),
        }
    }
}

/// Result of one checker call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Hypothesis and conclusion both hold.
    Holds,
    /// Hypothesis holds, conclusion fails — an artifact bug for proven
    /// statements.
    Fails,
    /// Hypothesis unmet; reported, never thrown.
    Vacuous,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("instance lacks required binding '{0}'")]
    MissingBinding(String),
    #[error("instance space {space} exceeds the budget of {budget} checker calls")]
    BudgetExceeded { space: u128, budget: u64 },
    #[error("instance out of supported range: {0}")]
    InstanceOutOfRange(&'static str),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Uniform nonempty random subset of `Z_p` with cardinality at most `cap`:
/// size first, then a uniform subset of that size. Shared by the bench
/// command and the acceptance suite.
pub fn random_set(rng: &mut ChaCha8Rng, m: PrimeModulus, cap: u64) -> ZpSet {
    gen::rand_set(rng, m, 0, cap)
}

/// True iff the lemma's conclusion holds on this instance; hypothesis
/// failures come back as [`Outcome::Vacuous`].
pub fn check_lemma(
    id: LemmaId,
    inst: &BoundInstance,
    backend: SumsetBackend,
) -> Result<Outcome, HarnessError> {
    checkers::check(id, inst, backend)
}

/// Verification report for one (lemma, modulus, mode) run.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub p: u64,
    pub mode: Mode,
    /// Generator seed; 0 for exhaustive runs.
    pub seed: u64,
    /// Hypothesis-satisfying instances checked.
    pub tested: u64,
    /// Instances whose hypothesis failed.
    pub vacuous: u64,
    pub failures: Vec<BoundInstance>,
    pub elapsed_ms: u64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_doc(&self) -> LemmaReportDoc {
        LemmaReportDoc {
            lemma: self.lemma.as_str().to_string(),
            p: self.p,
            mode: self.mode.as_str().to_string(),
            seed: self.seed.to_string(),
            tested: self.tested,
            vacuous: self.vacuous,
            failures: self.failures.iter().map(BoundInstance::to_doc).collect(),
            elapsed_ms: self.elapsed_ms,
        }
    }

    /// Stable JSON document; field order fixed, map keys sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("report serialization cannot fail")
    }
}

/// Wire form of a report. The seed travels as a string so 64-bit values
/// survive JSON readers that parse numbers as doubles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReportDoc {
    pub lemma: String,
    pub p: u64,
    pub mode: String,
    pub seed: String,
    pub tested: u64,
    pub vacuous: u64,
    pub failures: Vec<InstanceDoc>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub sets: BTreeMap<String, Vec<u64>>,
    pub scalars: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub reals: BTreeMap<String, f64>,
}

/// Per-instance observer for streaming output; receives the enumeration
/// index, the instance, and its outcome.
pub type InstanceSink<'a> = &'a mut dyn FnMut(u64, &BoundInstance, Outcome);

/// Checks every instance within `caps`, in a deterministic enumeration
/// order. Refuses up front if the instance space exceeds `caps.budget`.
pub fn run_exhaustive(
    id: LemmaId,
    m: PrimeModulus,
    caps: &Caps,
) -> Result<LemmaReport, HarnessError> {
    run_exhaustive_with(id, m, caps, None)
}

pub fn run_exhaustive_with(
    id: LemmaId,
    m: PrimeModulus,
    caps: &Caps,
    mut sink: Option<InstanceSink<'_>>,
) -> Result<LemmaReport, HarnessError> {
    let space = gen::exhaustive_space(id, m.value(), caps);
    if space > caps.budget as u128 {
        return Err(HarnessError::BudgetExceeded {
            space,
            budget: caps.budget,
        });
    }
    let start = Instant::now();
    let mut tested = 0u64;
    let mut vacuous = 0u64;
    let mut failures = Vec::new();
    let mut index = 0u64;
    let mut first_err: Option<HarnessError> = None;
    gen::visit_exhaustive(id, m, caps, &mut |inst| {
        if first_err.is_some() {
            return;
        }
        match check_lemma(id, &inst, SumsetBackend::DenseShift) {
            Ok(outcome) => {
                if let Some(sink) = sink.as_mut() {
                    sink(index, &inst, outcome);
                }
                match outcome {
                    Outcome::Holds => tested += 1,
                    Outcome::Vacuous => vacuous += 1,
                    Outcome::Fails => {
                        tested += 1;
                        failures.push(inst);
                    }
                }
            }
            Err(e) => first_err = Some(e),
        }
        index += 1;
    });
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(LemmaReport {
        lemma: id,
        p: m.value(),
        mode: Mode::Exhaustive,
        seed: 0,
        tested,
        vacuous,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Draws `samples` seeded instances and checks each. Identical
/// `(lemma, p, samples, seed, caps)` reproduce identical reports.
pub fn run_random(
    id: LemmaId,
    m: PrimeModulus,
    samples: u64,
    seed: u64,
    caps: &Caps,
) -> Result<LemmaReport, HarnessError> {
    run_random_with(id, m, samples, seed, caps, None)
}

pub fn run_random_with(
    id: LemmaId,
    m: PrimeModulus,
    samples: u64,
    seed: u64,
    caps: &Caps,
    mut sink: Option<InstanceSink<'_>>,
) -> Result<LemmaReport, HarnessError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0u64;
    let mut vacuous = 0u64;
    let mut failures = Vec::new();
    for index in 0..samples {
        let inst = gen::random_instance(id, m, caps, &mut rng);
        let outcome = check_lemma(id, &inst, SumsetBackend::DenseShift)?;
        if let Some(sink) = sink.as_mut() {
            sink(index, &inst, outcome);
        }
        match outcome {
            Outcome::Holds => tested += 1,
            Outcome::Vacuous => vacuous += 1,
            Outcome::Fails => {
                tested += 1;
                failures.push(inst);
            }
        }
    }
    Ok(LemmaReport {
        lemma: id,
        p: m.value(),
        mode: Mode::Random,
        seed,
        tested,
        vacuous,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn lemma_id_round_trip() {
        for id in LemmaId::ALL {
            assert_eq!(id.as_str().parse::<LemmaId>().unwrap(), id);
        }
        assert!("L99".parse::<LemmaId>().is_err());
        assert_eq!("cd".parse::<LemmaId>().unwrap(), LemmaId::Cd);
    }

    #[test]
    fn exhaustive_l3_counts_match_spec() {
        // (2^5 - 1)^2 restricted to |Y| > 1, times 5 values of xi.
        let report = run_exhaustive(LemmaId::L3, m(5), &Caps::default()).unwrap();
        assert_eq!(report.tested, 31 * 26 * 5);
        assert_eq!(report.tested + report.vacuous, 31 * 31 * 5);
        assert!(report.passed());
    }

    #[test]
    fn exhaustive_l7_counts_match_spec() {
        let report = run_exhaustive(LemmaId::L7, m(5), &Caps::default()).unwrap();
        assert_eq!(report.tested, 31 * 31 * 31);
        assert_eq!(report.vacuous, 0);
        assert!(report.passed());
    }

    #[test]
    fn vacuous_accounting_l1() {
        let report = run_exhaustive(LemmaId::L1, m(5), &Caps::default()).unwrap();
        assert_eq!(report.tested + report.vacuous, 31 * 31);
        assert!(report.tested > 0 && report.vacuous > 0);
        assert!(report.passed());
    }

    #[test]
    fn budget_precheck() {
        let caps = Caps {
            budget: 10,
            ..Caps::default()
        };
        let err = run_exhaustive(LemmaId::L7, m(5), &caps).unwrap_err();
        assert!(matches!(err, HarnessError::BudgetExceeded { .. }));
    }

    #[test]
    fn random_runs_reproduce() {
        let caps = Caps::default();
        let a = run_random(LemmaId::L4, m(101), 64, 42, &caps).unwrap();
        let b = run_random(LemmaId::L4, m(101), 64, 42, &caps).unwrap();
        let mut da = a.to_doc();
        let mut db = b.to_doc();
        da.elapsed_ms = 0;
        db.elapsed_ms = 0;
        assert_eq!(
            serde_json::to_string(&da).unwrap(),
            serde_json::to_string(&db).unwrap()
        );
        let c = run_random(LemmaId::L4, m(101), 64, 43, &caps).unwrap();
        assert!(a.tested != c.tested || a.vacuous != c.vacuous || a.to_doc().failures == c.to_doc().failures);
    }

    #[test]
    fn empty_random_run() {
        let report = run_random(LemmaId::P1, m(101), 0, 7, &Caps::default()).unwrap();
        assert_eq!(report.tested, 0);
        assert_eq!(report.vacuous, 0);
        assert!(report.passed());
    }

    #[test]
    fn report_json_schema() {
        let report = run_random(LemmaId::L9, m(101), 16, 9, &Caps::default()).unwrap();
        let json = report.to_json();
        let doc: LemmaReportDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc.lemma, "L9");
        assert_eq!(doc.p, 101);
        assert_eq!(doc.mode, "random");
        assert_eq!(doc.seed, "9");
        assert_eq!(doc.tested + doc.vacuous, 16);
        assert_eq!(doc.failures.len(), 0);
    }

    #[test]
    fn missing_binding_reported() {
        let inst = BoundInstance::new(m(7));
        let err = check_lemma(LemmaId::L1, &inst, SumsetBackend::DenseShift).unwrap_err();
        assert_eq!(err, HarnessError::MissingBinding("A".to_string()));
    }
}
