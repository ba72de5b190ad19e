//! Voting rules and deterministic winner determination.

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{check_candidate, Profile, Ranking};

/// A positional score vector `s(1) >= ... >= s(m)` with `s(1) > s(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreVector(Vec<i64>);

impl ScoreVector {
    pub fn new(scores: Vec<i64>) -> Result<Self> {
        if scores.len() < 2 {
            return Err(Error::invalid(
                "a score vector needs at least two positions",
            ));
        }
        if scores.iter().any(|&s| s < 0) {
            return Err(Error::invalid("scores must be natural numbers"));
        }
        if scores.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("scores must be non-increasing"));
        }
        if scores[0] == scores[scores.len() - 1] {
            return Err(Error::invalid("the first score must exceed the last score"));
        }
        Ok(ScoreVector(scores))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Score at 0-based position `pos`.
    pub fn at(&self, pos: usize) -> i64 {
        self.0[pos]
    }

    pub fn max(&self) -> i64 {
        self.0[0]
    }

    /// True when every entry is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&s| s == 0 || s == 1)
    }
}

/// Families of positional scoring rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositionalFamily {
    Plurality,
    Veto,
    KApproval(usize),
    KVeto(usize),
    Borda,
    /// `f` twos, then ones, then `l` zeros.
    Rfl {
        f: usize,
        l: usize,
    },
    Explicit(ScoreVector),
}

/// A voting rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Positional(PositionalFamily),
    Condorcet,
    Maximin,
}

/// Co-winner: nobody scores strictly more. Unique: strictly more than everyone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WinnerSemantics {
    #[default]
    CoWinner,
    Unique,
}

/// Materializes the score vector of `family` for `m` candidates.
pub fn score_vector_for(family: &PositionalFamily, m: usize) -> Result<ScoreVector> {
    if m < 2 {
        return Err(Error::invalid(
            "positional rules need at least two candidates",
        ));
    }
    let ones_then_zeros = |ones: usize| {
        (0..m)
            .map(|j| if j < ones { 1 } else { 0 })
            .collect::<Vec<i64>>()
    };
    let scores = match family {
        PositionalFamily::Plurality => ones_then_zeros(1),
        PositionalFamily::Veto => ones_then_zeros(m - 1),
        PositionalFamily::KApproval(k) | PositionalFamily::KVeto(k) => {
            if *k == 0 || *k >= m {
                return Err(Error::invalid(format!(
                    "k = {k} must satisfy 1 <= k < m = {m}"
                )));
            }
            match family {
                PositionalFamily::KApproval(_) => ones_then_zeros(*k),
                _ => ones_then_zeros(m - k),
            }
        }
        PositionalFamily::Borda => (0..m).rev().map(|s| s as i64).collect(),
        PositionalFamily::Rfl { f, l } => {
            if *f == 0 || *l == 0 || f + l > m {
                return Err(Error::invalid(format!(
                    "R(f, l) needs f >= 1, l >= 1 and f + l <= m (f = {f}, l = {l}, m = {m})"
                )));
            }
            (0..m)
                .map(|j| {
                    if j < *f {
                        2
                    } else if j < m - l {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        }
        PositionalFamily::Explicit(sv) => {
            if sv.len() != m {
                return Err(Error::invalid(format!(
                    "explicit score vector has {} entries, expected {m}",
                    sv.len()
                )));
            }
            return Ok(sv.clone());
        }
    };
    ScoreVector::new(scores)
}

impl Rule {
    pub fn is_positional(&self) -> bool {
        matches!(self, Rule::Positional(_))
    }

    /// The score vector for `m` candidates; `None` for pairwise rules.
    pub fn score_vector(&self, m: usize) -> Result<Option<ScoreVector>> {
        match self {
            Rule::Positional(family) => score_vector_for(family, m).map(Some),
            _ => Ok(None),
        }
    }

    pub(crate) fn positional_vector(&self, m: usize) -> Result<ScoreVector> {
        self.score_vector(m)?
            .ok_or_else(|| Error::invalid(format!("rule {self} is not a positional scoring rule")))
    }
}

impl fmt::Display for Rule {
    /// Uses the command-line spelling of the rule.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Condorcet => f.write_str("condorcet"),
            Rule::Maximin => f.write_str("maximin"),
            Rule::Positional(family) => match family {
                PositionalFamily::Plurality => f.write_str("plurality"),
                PositionalFamily::Veto => f.write_str("veto"),
                PositionalFamily::KApproval(k) => write!(f, "approval:{k}"),
                PositionalFamily::KVeto(k) => write!(f, "kveto:{k}"),
                PositionalFamily::Borda => f.write_str("borda"),
                PositionalFamily::Rfl { f: two, l } => write!(f, "rfl:{two},{l}"),
                PositionalFamily::Explicit(sv) => {
                    let parts: Vec<String> = sv.values().iter().map(|s| s.to_string()).collect();
                    write!(f, "vector:{}", parts.join(","))
                }
            },
        }
    }
}

/// Score that `ranking` gives to candidate `c` under a positional rule.
pub fn position_score(rule: &Rule, ranking: &Ranking, c: usize) -> Result<i64> {
    let sv = rule.positional_vector(ranking.len())?;
    check_candidate(ranking.len(), c)?;
    Ok(sv.at(ranking.position(c)))
}

/// Total positional score of `c` over the whole profile.
pub fn total_score(rule: &Rule, profile: &Profile, c: usize) -> Result<i64> {
    let sv = rule.positional_vector(profile.num_candidates())?;
    check_candidate(profile.num_candidates(), c)?;
    Ok(profile
        .rankings()
        .iter()
        .map(|r| sv.at(r.position(c)))
        .sum())
}

/// Number of voters preferring `a` to `b`.
pub fn pairwise_count(profile: &Profile, a: usize, b: usize) -> Result<u64> {
    let m = profile.num_candidates();
    check_candidate(m, a)?;
    check_candidate(m, b)?;
    if a == b {
        return Err(Error::invalid(
            "pairwise comparison needs two distinct candidates",
        ));
    }
    Ok(profile
        .rankings()
        .iter()
        .filter(|r| r.prefers(a, b))
        .count() as u64)
}

/// Winners of `profile` under `rule`, ascending by candidate index.
pub fn winners(rule: &Rule, profile: &Profile, semantics: WinnerSemantics) -> Result<Vec<usize>> {
    let mut tally = Tally::new(rule, profile.num_candidates())?;
    for r in profile.rankings() {
        tally.add(r);
    }
    Ok(tally.winners(semantics))
}

#[derive(Debug, Clone)]
enum TallyKind {
    Positional(ScoreVector),
    Condorcet,
    Maximin,
}

/// Incremental score bookkeeping for one rule.
///
/// Positional rules keep one total per candidate; Condorcet and Maximin keep
/// the full pairwise matrix `N(a, b)`. Voters can be added and removed, which
/// lets subset enumerations walk a Gray code with one update per step.
#[derive(Debug, Clone)]
pub struct Tally {
    kind: TallyKind,
    m: usize,
    counts: Vec<i64>,
}

impl Tally {
    pub fn new(rule: &Rule, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("at least one candidate is required"));
        }
        let (kind, size) = match rule {
            Rule::Positional(family) => (TallyKind::Positional(score_vector_for(family, m)?), m),
            Rule::Condorcet => (TallyKind::Condorcet, m * m),
            Rule::Maximin => (TallyKind::Maximin, m * m),
        };
        Ok(Tally {
            kind,
            m,
            counts: vec![0; size],
        })
    }

    fn apply(&mut self, ranking: &Ranking, sign: i64) {
        match &self.kind {
            TallyKind::Positional(sv) => {
                for (pos, &c) in ranking.order().iter().enumerate() {
                    self.counts[c] += sign * sv.at(pos);
                }
            }
            TallyKind::Condorcet | TallyKind::Maximin => {
                let order = ranking.order();
                for (i, &a) in order.iter().enumerate() {
                    for &b in &order[i + 1..] {
                        self.counts[a * self.m + b] += sign;
                    }
                }
            }
        }
    }

    pub fn add(&mut self, ranking: &Ranking) {
        self.apply(ranking, 1);
    }

    pub fn remove(&mut self, ranking: &Ranking) {
        self.apply(ranking, -1);
    }

    fn pair(&self, a: usize, b: usize) -> i64 {
        self.counts[a * self.m + b]
    }

    fn maximin_score(&self, c: usize) -> i64 {
        (0..self.m)
            .filter(|&o| o != c)
            .map(|o| self.pair(c, o))
            .min()
            .unwrap_or(0)
    }

    /// Per-candidate score for rules that have one (positional, Maximin).
    pub fn score(&self, c: usize) -> Option<i64> {
        match self.kind {
            TallyKind::Positional(_) => Some(self.counts[c]),
            TallyKind::Maximin => Some(self.maximin_score(c)),
            TallyKind::Condorcet => None,
        }
    }

    pub fn is_winner(&self, c: usize, semantics: WinnerSemantics) -> bool {
        match self.kind {
            TallyKind::Condorcet => (0..self.m)
                .filter(|&o| o != c)
                .all(|o| self.pair(c, o) > self.pair(o, c)),
            TallyKind::Positional(_) | TallyKind::Maximin => {
                let mine = self.score(c).unwrap_or(0);
                (0..self.m).filter(|&o| o != c).all(|o| {
                    let theirs = self.score(o).unwrap_or(0);
                    match semantics {
                        WinnerSemantics::CoWinner => mine >= theirs,
                        WinnerSemantics::Unique => mine > theirs,
                    }
                })
            }
        }
    }

    pub fn winners(&self, semantics: WinnerSemantics) -> Vec<usize> {
        (0..self.m)
            .filter(|&c| self.is_winner(c, semantics))
            .collect()
    }
}
