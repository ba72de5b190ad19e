//! Winning and losing probabilities when every voter attends independently
//! with a known probability.
//!
//! A [`ProbabilisticProfile`] lists rankings together with attendance
//! probabilities. On top of it the crate offers exact dynamic programs for
//! plurality and veto, brute-force oracles for every rule, a multiplicative
//! estimator of the losing probability for positional rules and Condorcet,
//! an additive Monte-Carlo baseline, zeroness tests via voter control, and
//! reduction generators with matching counting oracles.

pub mod conditional;
pub mod error;
pub mod exact;
pub mod fpras;
pub mod generators;
pub mod io;
pub mod profile;
pub mod rules;
mod subsets;
pub mod zeroness;

pub use conditional::{EventModel, LoseEvent, LoseKind, PartialAssignment};
pub use error::{Error, Result};
pub use exact::{brute_force_win_prob, win_prob_exact, DEFAULT_BRUTE_FORCE_LIMIT};
pub use fpras::{klm_lose_prob, mc_win_prob_additive, Estimate, EstimatorConfig, Method};
pub use profile::{CandidateSet, ProbabilisticProfile, Profile, Ranking};
pub use rules::{PositionalFamily, Rule, ScoreVector, Tally, WinnerSemantics};
pub use subsets::MAX_ENUMERATION_BITS;
pub use zeroness::{CcauvInstance, ControlDecision};
