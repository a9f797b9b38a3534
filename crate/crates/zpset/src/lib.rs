//! Exact set arithmetic over prime fields `Z_p`.
//!
//! The crate provides four layers:
//!
//! - [`zp`]: validated prime moduli and modular scalar arithmetic;
//! - [`set`]: bit-vector subsets of `Z_p` with sumsets (two interchangeable
//!   backends), difference/product/quotient sets, dilations, iterated sums
//!   by doubling, multiplicative powers, Q-sets, and exponential sums;
//! - [`construct`]: the expansion machinery — the coefficient sequence
//!   `N_k`, chains `N_k A^k - N_k A^k`, multiplicative subgroups, and the
//!   four-case pipeline that emits a machine-verified covering witness
//!   `N * A^n = Z_p`;
//! - [`harness`]: exhaustive and seeded-random verification of every
//!   quantitative statement the constructions rely on, with stable JSON
//!   reports.
//!
//! The `zpset` binary exposes all of it as `verify`, `construct`,
//! `subgroup`, and `bench` subcommands.

pub mod cli;
pub mod construct;
pub mod harness;
mod ntt;
pub mod set;
pub mod zp;

pub use construct::{
    a_k_chain, corollary1_check, find_xi_lemma4, make_subgroup, nk, theorem1_construct, Budget,
    CaseId, ConstructError, NkCoefficient, SubgroupSpec, Witness,
};
pub use harness::{
    check_lemma, run_exhaustive, run_random, BoundInstance, Caps, HarnessError, LemmaId,
    LemmaReport, Mode, Outcome,
};
pub use set::{exp_sum_magnitude, SetError, SumsetBackend, ZpSet};
pub use zp::{is_prime, primitive_root, PrimeModulus, ZpElement, ZpError};
