//! Conditional probabilities of pairwise lose-to events.
//!
//! For a target `c` and a rival `d`, each voter `i` contributes a margin
//! `x_i` of `d` over `c`: the score difference `s(T_i, d) - s(T_i, c)` for
//! positional rules, or `+1 / -1` for Condorcet depending on which of the two
//! the voter prefers. The event "d beats c" is `Σ_{i∈I} x_i > 0` (positional)
//! or `Σ_{i∈I} x_i >= 0` (Condorcet, where a tie already defeats `c`).
//!
//! Conditioning on `I ∩ S = S′` fixes the decided part of the sum to
//! `D = Σ_{i∈S′} x_i`, leaving `Pr[Σ_{i∈I∖S} x_i > -D]` (or `>=`), which a DP
//! over the undecided voters computes on the integer range `[A, B]`, where
//! `A` and `B` are the sums of the negative and positive undecided margins.
//! Outside that range the answer is constant: 1 below `A`, 0 above `B`.

use crate::error::{Error, Result};
use crate::profile::{check_candidate, ProbabilisticProfile, Profile};
use crate::rules::Rule;
use crate::subsets::membership;

/// Maximum number of DP cells (`(B - A + 1) × voters`) before refusing.
pub const DEFAULT_TABLE_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoseKind {
    /// `s(d) > s(c)`.
    PositionalStrict,
    /// `N(d, c) >= N(c, d)`.
    CondorcetTieOrBeat,
}

/// The event that `rival` defeats `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoseEvent {
    pub target: usize,
    pub rival: usize,
    pub kind: LoseKind,
}

impl LoseEvent {
    pub fn new(target: usize, rival: usize, kind: LoseKind) -> Result<Self> {
        if target == rival {
            return Err(Error::invalid("target and rival must differ"));
        }
        Ok(LoseEvent {
            target,
            rival,
            kind,
        })
    }

    /// The lose-to event matching `rule`. Maximin has none.
    pub fn for_rule(rule: &Rule, target: usize, rival: usize) -> Result<Self> {
        let kind = match rule {
            Rule::Positional(_) => LoseKind::PositionalStrict,
            Rule::Condorcet => LoseKind::CondorcetTieOrBeat,
            Rule::Maximin => {
                return Err(Error::Unsupported(
                    "no lose-to decomposition is available for maximin".into(),
                ))
            }
        };
        LoseEvent::new(target, rival, kind)
    }
}

/// Attendance of some voters fixed: `decided` is `S`, `present` is `S′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAssignment {
    state: Vec<Option<bool>>,
}

impl PartialAssignment {
    pub fn new(n: usize, decided: &[usize], present: &[usize]) -> Result<Self> {
        let in_s = membership(n, decided, "decided set")?;
        let in_s_prime = membership(n, present, "present set")?;
        let mut state = vec![None; n];
        for i in 0..n {
            if in_s_prime[i] && !in_s[i] {
                return Err(Error::invalid(format!(
                    "voter {i} is marked present but not decided"
                )));
            }
            if in_s[i] {
                state[i] = Some(in_s_prime[i]);
            }
        }
        Ok(PartialAssignment { state })
    }

    /// Nothing decided.
    pub fn none(n: usize) -> Self {
        PartialAssignment {
            state: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    pub fn get(&self, voter: usize) -> Option<bool> {
        self.state[voter]
    }

    /// Returns a copy with `voter` additionally decided.
    pub fn with(&self, voter: usize, present: bool) -> Self {
        let mut state = self.state.clone();
        state[voter] = Some(present);
        PartialAssignment { state }
    }

    pub fn undecided(&self) -> impl Iterator<Item = usize> + '_ {
        self.state
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(i, _)| i)
    }
}

/// `x_i = s(T_i, a) - s(T_i, b)` for every voter.
pub fn pairwise_margin_values(
    rule: &Rule,
    profile: &Profile,
    a: usize,
    b: usize,
) -> Result<Vec<i64>> {
    let m = profile.num_candidates();
    let sv = rule.positional_vector(m)?;
    check_candidate(m, a)?;
    check_candidate(m, b)?;
    if a == b {
        return Err(Error::invalid("margins need two distinct candidates"));
    }
    Ok(profile
        .rankings()
        .iter()
        .map(|r| sv.at(r.position(a)) - sv.at(r.position(b)))
        .collect())
}

/// Per-voter margins of a lose-to event plus the comparison it uses.
#[derive(Debug, Clone)]
pub struct EventModel {
    event: LoseEvent,
    margins: Vec<i64>,
    probs: Vec<f64>,
    strict: bool,
    budget: u128,
}

impl EventModel {
    pub fn new(pp: &ProbabilisticProfile, rule: &Rule, event: LoseEvent) -> Result<Self> {
        let m = pp.num_candidates();
        check_candidate(m, event.target)?;
        check_candidate(m, event.rival)?;
        let profile = pp.profile();
        let (margins, strict) = match (event.kind, rule) {
            (LoseKind::PositionalStrict, Rule::Positional(_)) => (
                pairwise_margin_values(rule, profile, event.rival, event.target)?,
                true,
            ),
            (LoseKind::CondorcetTieOrBeat, Rule::Condorcet) => (
                profile
                    .rankings()
                    .iter()
                    .map(|r| {
                        if r.prefers(event.rival, event.target) {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect(),
                false,
            ),
            (kind, rule) => {
                return Err(Error::invalid(format!(
                    "event kind {kind:?} does not match rule {rule}"
                )))
            }
        };
        Ok(EventModel {
            event,
            margins,
            probs: pp.probs().to_vec(),
            strict,
            budget: DEFAULT_TABLE_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn event(&self) -> LoseEvent {
        self.event
    }

    pub fn margins(&self) -> &[i64] {
        &self.margins
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.margins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.margins.is_empty()
    }

    pub(crate) fn budget(&self) -> u128 {
        self.budget
    }

    pub(crate) fn is_strict(&self) -> bool {
        self.strict
    }

    /// Whether a summed margin defeats the target.
    pub fn defeats(&self, margin_sum: i64) -> bool {
        if self.strict {
            margin_sum > 0
        } else {
            margin_sum >= 0
        }
    }

    /// Evaluates the event on a realized attendance set.
    pub fn holds(&self, present: impl Fn(usize) -> bool) -> bool {
        let sum: i64 = (0..self.margins.len())
            .filter(|&i| present(i))
            .map(|i| self.margins[i])
            .sum();
        self.defeats(sum)
    }

    /// `Pr[event | I ∩ S = S′]`.
    pub fn conditional_prob(&self, assign: &PartialAssignment) -> Result<f64> {
        if assign.len() != self.margins.len() {
            return Err(Error::invalid(format!(
                "assignment covers {} voters, profile has {}",
                assign.len(),
                self.margins.len()
            )));
        }
        let decided_sum: i64 = (0..self.margins.len())
            .filter(|&i| assign.get(i) == Some(true))
            .map(|i| self.margins[i])
            .sum();
        let undecided: Vec<(i64, f64)> = assign
            .undecided()
            .map(|i| (self.margins[i], self.probs[i]))
            .collect();
        let table = MarginTable::build(&undecided, self.strict, 1, self.budget)?;
        Ok(table.exceeds(undecided.len(), -decided_sum))
    }

    /// Unconditional `Pr[event]`.
    pub fn prob(&self) -> Result<f64> {
        self.conditional_prob(&PartialAssignment::none(self.margins.len()))
    }
}

/// DP layers `N(t, y)`: the probability that the attending voters among the
/// first `t` listed satisfy `Σ x > y` (strict) or `Σ x >= y` (weak), for
/// `y ∈ [lo, hi]`.
#[derive(Debug, Clone)]
pub(crate) struct MarginTable {
    lo: i64,
    hi: i64,
    /// Layers kept, counted from the last one backwards.
    layers: Vec<Vec<f64>>,
    first_kept: usize,
}

impl MarginTable {
    /// Runs the DP over `voters` (margin, probability) in order. Only the last
    /// `keep` layers are retained; `keep = usize::MAX` keeps them all.
    pub(crate) fn build(
        voters: &[(i64, f64)],
        strict: bool,
        keep: usize,
        budget: u128,
    ) -> Result<Self> {
        let lo: i64 = voters.iter().map(|(x, _)| (*x).min(0)).sum();
        let hi: i64 = voters.iter().map(|(x, _)| (*x).max(0)).sum();
        let width = (hi - lo + 1) as usize;
        let cells = width as u128 * voters.len().max(1) as u128;
        if cells > budget {
            return Err(Error::TableBudget { cells, budget });
        }
        let base: Vec<f64> = (lo..=hi)
            .map(|y| {
                let holds = if strict { 0 > y } else { 0 >= y };
                if holds {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        let total_layers = voters.len() + 1;
        let keep = keep.clamp(1, total_layers);
        let first_kept = total_layers - keep;
        let mut layers = Vec::with_capacity(keep);
        let mut current = base;
        for (t, &(x, p)) in voters.iter().enumerate() {
            if t >= first_kept {
                layers.push(current.clone());
            }
            let lookup = |row: &[f64], y: i64| -> f64 {
                if y < lo {
                    1.0
                } else if y > hi {
                    0.0
                } else {
                    row[(y - lo) as usize]
                }
            };
            let next: Vec<f64> = (lo..=hi)
                .map(|y| {
                    let idx = (y - lo) as usize;
                    p * lookup(&current, y - x) + (1.0 - p) * current[idx]
                })
                .collect();
            current = next;
        }
        layers.push(current);
        Ok(MarginTable {
            lo,
            hi,
            layers,
            first_kept,
        })
    }

    /// `N(t, y)`, with the constant regions outside `[lo, hi]`.
    pub(crate) fn exceeds(&self, t: usize, y: i64) -> f64 {
        debug_assert!(t >= self.first_kept);
        if y < self.lo {
            1.0
        } else if y > self.hi {
            0.0
        } else {
            self.layers[t - self.first_kept][(y - self.lo) as usize]
        }
    }
}

/// Positional `Pr[s(d) > s(c) | I ∩ S = S′]`.
pub fn exceed_prob_positional(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    event: LoseEvent,
    assign: &PartialAssignment,
) -> Result<f64> {
    if event.kind != LoseKind::PositionalStrict {
        return Err(Error::invalid("expected a positional lose-to event"));
    }
    EventModel::new(pp, rule, event)?.conditional_prob(assign)
}

/// Condorcet `Pr[N(d, c) >= N(c, d) | I ∩ S = S′]`.
pub fn tie_or_beat_prob_condorcet(
    pp: &ProbabilisticProfile,
    event: LoseEvent,
    assign: &PartialAssignment,
) -> Result<f64> {
    if event.kind != LoseKind::CondorcetTieOrBeat {
        return Err(Error::invalid("expected a Condorcet lose-to event"));
    }
    EventModel::new(pp, &Rule::Condorcet, event)?.conditional_prob(assign)
}

/// Unconditional probability of a lose-to event.
pub fn event_prob(pp: &ProbabilisticProfile, rule: &Rule, event: LoseEvent) -> Result<f64> {
    EventModel::new(pp, rule, event)?.prob()
}
