//! Candidates, rankings and (probabilistic) voting profiles.
//!
//! Candidates and voters are addressed by 0-based index everywhere inside the
//! library. Candidate names only matter when reading or writing files.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The ordered list of candidates. Index order is the global tie-break order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-')
}

impl CandidateSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::invalid("at least one candidate is required"));
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::invalid(format!(
                    "candidate name {name:?} must match [A-Za-z0-9_-]+"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::invalid(format!("duplicate candidate name {name:?}")));
            }
        }
        Ok(CandidateSet { names })
    }

    /// Candidates named `c0, c1, ..., c{m-1}`.
    pub fn indexed(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| format!("c{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A linear order over candidate indices; position 0 is the most preferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Ranking {
    /// Builds a ranking from a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        let mut position = vec![usize::MAX; m];
        for (pos, &c) in order.iter().enumerate() {
            if c >= m {
                return Err(Error::invalid(format!(
                    "candidate index {c} out of range for a ranking of {m} candidates"
                )));
            }
            if position[c] != usize::MAX {
                return Err(Error::invalid(format!(
                    "candidate index {c} appears twice in a ranking"
                )));
            }
            position[c] = pos;
        }
        Ok(Ranking { order, position })
    }

    /// The ranking `0 > 1 > ... > m-1`.
    pub fn identity(m: usize) -> Self {
        Ranking {
            order: (0..m).collect(),
            position: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 0-based position of candidate `c`.
    pub fn position(&self, c: usize) -> usize {
        self.position[c]
    }

    pub fn top(&self) -> usize {
        self.order[0]
    }

    pub fn bottom(&self) -> usize {
        self.order[self.order.len() - 1]
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }

    /// Applies a candidate relabeling: candidate `c` becomes `perm[c]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        Ranking::new(self.order.iter().map(|&c| perm[c]).collect())
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" > "))
    }
}

/// A list of rankings over a shared candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    candidates: Arc<CandidateSet>,
    rankings: Vec<Ranking>,
}

impl Profile {
    pub fn new(candidates: Arc<CandidateSet>, rankings: Vec<Ranking>) -> Result<Self> {
        let m = candidates.len();
        if let Some((i, r)) = rankings.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::invalid(format!(
                "voter {i} ranks {} candidates, expected {m}",
                r.len()
            )));
        }
        Ok(Profile {
            candidates,
            rankings,
        })
    }

    /// Convenience constructor over indexed candidates from raw orders.
    pub fn from_orders(m: usize, orders: &[Vec<usize>]) -> Result<Self> {
        let rankings = orders
            .iter()
            .map(|o| Ranking::new(o.clone()))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(Arc::new(CandidateSet::indexed(m)?), rankings)
    }

    pub fn empty(candidates: Arc<CandidateSet>) -> Self {
        Profile {
            candidates,
            rankings: Vec::new(),
        }
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn ranking(&self, voter: usize) -> &Ranking {
        &self.rankings[voter]
    }

    /// The sub-profile of the given voters, in the given order.
    pub fn select(&self, voters: &[usize]) -> Result<Profile> {
        let n = self.len();
        let rankings = voters
            .iter()
            .map(|&v| {
                self.rankings.get(v).cloned().ok_or_else(|| {
                    Error::invalid(format!("voter index {v} out of range (n = {n})"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Profile {
            candidates: self.candidates.clone(),
            rankings,
        })
    }

    /// `self ∘ other`. Both profiles must share the candidate list.
    pub fn concat(&self, other: &Profile) -> Result<Profile> {
        if self.candidates != other.candidates {
            return Err(Error::invalid("profiles are over different candidate sets"));
        }
        let mut rankings = self.rankings.clone();
        rankings.extend(other.rankings.iter().cloned());
        Ok(Profile {
            candidates: self.candidates.clone(),
            rankings,
        })
    }

    pub fn push(&mut self, ranking: Ranking) -> Result<()> {
        if ranking.len() != self.num_candidates() {
            return Err(Error::invalid(
                "ranking length does not match the candidate set",
            ));
        }
        self.rankings.push(ranking);
        Ok(())
    }
}

/// A profile where voter `i` attends independently with probability `probs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticProfile {
    profile: Profile,
    probs: Vec<f64>,
}

impl ProbabilisticProfile {
    pub fn new(profile: Profile, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != profile.len() {
            return Err(Error::invalid(format!(
                "{} probabilities given for {} voters",
                probs.len(),
                profile.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::invalid(format!(
                "probability {p} of voter {i} is outside [0, 1]"
            )));
        }
        Ok(ProbabilisticProfile { profile, probs })
    }

    /// Every voter attends with the same probability.
    pub fn uniform(profile: Profile, p: f64) -> Result<Self> {
        let n = profile.len();
        Self::new(profile, vec![p; n])
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, voter: usize) -> f64 {
        self.probs[voter]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn num_candidates(&self) -> usize {
        self.profile.num_candidates()
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        self.profile.candidates()
    }

    /// The voters with the given indices, keeping their probabilities.
    pub fn select(&self, voters: &[usize]) -> Result<ProbabilisticProfile> {
        let profile = self.profile.select(voters)?;
        let probs = voters.iter().map(|&v| self.probs[v]).collect();
        Ok(ProbabilisticProfile { profile, probs })
    }

    pub(crate) fn check_candidate(&self, c: usize) -> Result<()> {
        check_candidate(self.num_candidates(), c)
    }
}

pub(crate) fn check_candidate(m: usize, c: usize) -> Result<()> {
    if c >= m {
        Err(Error::invalid(format!(
            "candidate index {c} out of range (m = {m})"
        )))
    } else {
        Ok(())
    }
}
