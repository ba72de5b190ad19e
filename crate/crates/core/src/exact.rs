//! Exact winning probabilities.
//!
//! Plurality and veto admit a polynomial algorithm: every attending voter
//! adds to exactly one candidate's first-place (or last-place) count, so the
//! per-candidate counts are independent and each follows a Poisson-binomial
//! law computed by a one-dimensional DP. Every other rule goes through the
//! exponential enumeration oracle, which is also the reference for tests.

use crate::error::{Error, Result};
use crate::profile::ProbabilisticProfile;
use crate::rules::{PositionalFamily, Rule, Tally, WinnerSemantics};
use crate::subsets::{check_limit, gray_walk, membership};

/// Default cap on the number of voters the enumeration oracles accept.
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

/// Distribution of the number of attending voters among a marked set.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    probs: Vec<f64>,
}

impl CountDistribution {
    /// `Pr[count = y]` for `y = 0..=max_count()`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn max_count(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn pmf(&self, y: usize) -> f64 {
        self.probs.get(y).copied().unwrap_or(0.0)
    }

    /// `Pr[count <= y]`.
    pub fn at_most(&self, y: usize) -> f64 {
        self.probs.iter().take(y + 1).sum()
    }

    /// `Pr[count >= y]`.
    pub fn at_least(&self, y: usize) -> f64 {
        self.probs.iter().skip(y).sum()
    }
}

/// `Pr[I = subset]`.
pub fn subset_probability(pp: &ProbabilisticProfile, subset: &[usize]) -> Result<f64> {
    let member = membership(pp.len(), subset, "subset")?;
    Ok(member_probability(pp.probs(), |i| member[i]))
}

pub(crate) fn member_probability(probs: &[f64], present: impl Fn(usize) -> bool) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(i, &p)| if present(i) { p } else { 1.0 - p })
        .product()
}

fn mask_probability(probs: &[f64], mask: u64) -> f64 {
    member_probability(probs, |i| mask & (1 << i) != 0)
}

/// Distribution of `|I ∩ marked|`, built voter by voter in profile order.
pub fn marginal_count_dist(
    pp: &ProbabilisticProfile,
    marked: &[usize],
) -> Result<CountDistribution> {
    let member = membership(pp.len(), marked, "marked set")?;
    let marked_probs = pp
        .probs()
        .iter()
        .zip(&member)
        .filter(|(_, &m)| m)
        .map(|(&p, _)| p);
    Ok(count_distribution(marked_probs))
}

fn count_distribution(probs: impl Iterator<Item = f64>) -> CountDistribution {
    // table[y] holds N(t, y) for the voters seen so far
    let mut table = vec![1.0];
    for p in probs {
        table.push(0.0);
        for y in (0..table.len()).rev() {
            let shifted = if y > 0 { table[y - 1] } else { 0.0 };
            table[y] = p * shifted + (1.0 - p) * table[y];
        }
    }
    CountDistribution { probs: table }
}

/// Per-candidate count distributions where voter `v` counts for `pick(v)`.
fn per_candidate_counts(
    pp: &ProbabilisticProfile,
    pick: impl Fn(usize) -> usize,
) -> Vec<CountDistribution> {
    (0..pp.num_candidates())
        .map(|cand| {
            let probs = (0..pp.len())
                .filter(|&v| pick(v) == cand)
                .map(|v| pp.prob(v));
            count_distribution(probs)
        })
        .collect()
}

/// Exact `Pr[c wins]` under plurality.
pub fn win_prob_plurality(
    pp: &ProbabilisticProfile,
    c: usize,
    semantics: WinnerSemantics,
) -> Result<f64> {
    pp.check_candidate(c)?;
    if pp.num_candidates() < 2 {
        return Err(Error::invalid("plurality needs at least two candidates"));
    }
    let dists = per_candidate_counts(pp, |v| pp.profile().ranking(v).top());
    let mut total = 0.0;
    for s in 0..=dists[c].max_count() {
        let mut term = dists[c].pmf(s);
        for (other, dist) in dists.iter().enumerate() {
            if other == c || term == 0.0 {
                continue;
            }
            term *= match semantics {
                WinnerSemantics::CoWinner => dist.at_most(s),
                WinnerSemantics::Unique if s == 0 => 0.0,
                WinnerSemantics::Unique => dist.at_most(s - 1),
            };
        }
        total += term;
    }
    Ok(total)
}

/// Exact `Pr[c wins]` under veto.
pub fn win_prob_veto(
    pp: &ProbabilisticProfile,
    c: usize,
    semantics: WinnerSemantics,
) -> Result<f64> {
    pp.check_candidate(c)?;
    if pp.num_candidates() < 2 {
        return Err(Error::invalid("veto needs at least two candidates"));
    }
    let dists = per_candidate_counts(pp, |v| pp.profile().ranking(v).bottom());
    let mut total = 0.0;
    for b in 0..=dists[c].max_count() {
        let mut term = dists[c].pmf(b);
        for (other, dist) in dists.iter().enumerate() {
            if other == c || term == 0.0 {
                continue;
            }
            term *= match semantics {
                WinnerSemantics::CoWinner => dist.at_least(b),
                WinnerSemantics::Unique => dist.at_least(b + 1),
            };
        }
        total += term;
    }
    Ok(total)
}

/// Exact DP when the rule supports one, `None` otherwise.
pub fn win_prob_exact(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    c: usize,
    semantics: WinnerSemantics,
) -> Option<Result<f64>> {
    let family = match rule {
        Rule::Positional(f) => f,
        _ => return None,
    };
    let m = pp.num_candidates();
    let effective = match family {
        PositionalFamily::KApproval(1) => &PositionalFamily::Plurality,
        PositionalFamily::KVeto(1) => &PositionalFamily::Veto,
        f => f,
    };
    match effective {
        PositionalFamily::Plurality => Some(win_prob_plurality(pp, c, semantics)),
        PositionalFamily::Veto => Some(win_prob_veto(pp, c, semantics)),
        PositionalFamily::Borda if m == 2 => Some(win_prob_plurality(pp, c, semantics)),
        _ => None,
    }
}

/// `Pr[c wins]` by enumerating all `2^n` attendance outcomes.
pub fn brute_force_win_prob(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    c: usize,
    semantics: WinnerSemantics,
    limit: usize,
) -> Result<f64> {
    pp.check_candidate(c)?;
    check_limit("number of voters", pp.len(), limit)?;
    let mut tally = Tally::new(rule, pp.num_candidates())?;
    let rankings = pp.profile().rankings();
    let mut total = 0.0;
    gray_walk(pp.len(), |mask, flip| {
        if let Some(flip) = flip {
            if flip.added {
                tally.add(&rankings[flip.index]);
            } else {
                tally.remove(&rankings[flip.index]);
            }
        }
        if tally.is_winner(c, semantics) {
            total += mask_probability(pp.probs(), mask);
        }
    });
    Ok(total)
}

/// `1 - brute_force_win_prob`.
pub fn brute_force_lose_prob(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    c: usize,
    semantics: WinnerSemantics,
    limit: usize,
) -> Result<f64> {
    Ok(1.0 - brute_force_win_prob(pp, rule, c, semantics, limit)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    const TOL: f64 = 1e-9;

    fn pp(m: usize, orders: &[&[usize]], probs: &[f64]) -> ProbabilisticProfile {
        let orders: Vec<Vec<usize>> = orders.iter().map(|o| o.to_vec()).collect();
        ProbabilisticProfile::new(Profile::from_orders(m, &orders).unwrap(), probs.to_vec())
            .unwrap()
    }

    fn plurality() -> Rule {
        Rule::Positional(PositionalFamily::Plurality)
    }

    #[test]
    fn subset_probabilities() {
        let two = pp(2, &[&[0, 1], &[1, 0]], &[0.5, 0.5]);
        assert!((subset_probability(&two, &[0]).unwrap() - 0.25).abs() < TOL);
        let sure = pp(2, &[&[0, 1], &[1, 0]], &[1.0, 1.0]);
        assert_eq!(subset_probability(&sure, &[]).unwrap(), 0.0);
        let mixed = pp(2, &[&[0, 1], &[1, 0]], &[0.3, 0.8]);
        assert!((subset_probability(&mixed, &[0, 1]).unwrap() - 0.24).abs() < TOL);
        assert!(subset_probability(&mixed, &[2]).is_err());
        assert!(subset_probability(&mixed, &[1, 1]).is_err());
    }

    #[test]
    fn count_distribution_examples() {
        let two = pp(2, &[&[0, 1], &[1, 0]], &[0.5, 0.5]);
        let d = marginal_count_dist(&two, &[0, 1]).unwrap();
        assert_eq!(d.probs().len(), 3);
        for (got, want) in d.probs().iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < TOL);
        }
        let none = marginal_count_dist(&two, &[]).unwrap();
        assert_eq!(none.probs(), &[1.0]);
    }

    #[test]
    fn count_distribution_matches_enumeration() {
        let three = pp(2, &[&[0, 1], &[0, 1], &[0, 1]], &[0.2, 0.5, 0.9]);
        let d = marginal_count_dist(&three, &[0, 1, 2]).unwrap();
        let mut oracle = [0.0; 4];
        for mask in 0u64..8 {
            oracle[mask.count_ones() as usize] += mask_probability(three.probs(), mask);
        }
        for (y, want) in oracle.iter().enumerate() {
            assert!((d.pmf(y) - want).abs() < TOL);
        }
    }

    #[test]
    fn plurality_examples() {
        let one = pp(2, &[&[0, 1]], &[0.5]);
        let co = WinnerSemantics::CoWinner;
        assert!((win_prob_plurality(&one, 1, co).unwrap() - 0.5).abs() < TOL);
        assert!((win_prob_plurality(&one, 0, co).unwrap() - 1.0).abs() < TOL);
        let two = pp(3, &[&[0, 1, 2], &[1, 0, 2]], &[0.5, 0.5]);
        assert!((win_prob_plurality(&two, 0, co).unwrap() - 0.75).abs() < TOL);
    }

    #[test]
    fn veto_examples() {
        let one = pp(2, &[&[0, 1]], &[0.7]);
        let co = WinnerSemantics::CoWinner;
        assert!((win_prob_veto(&one, 0, co).unwrap() - 1.0).abs() < TOL);
        assert!((win_prob_veto(&one, 1, co).unwrap() - 0.3).abs() < TOL);
        assert!((win_prob_veto(&one, 0, WinnerSemantics::Unique).unwrap() - 0.7).abs() < TOL);
    }

    #[test]
    fn brute_force_degenerate_probabilities() {
        let orders: &[&[usize]] = &[&[0, 1, 2], &[0, 2, 1], &[1, 2, 0]];
        let all_one = pp(3, orders, &[1.0; 3]);
        let all_zero = pp(3, orders, &[0.0; 3]);
        let co = WinnerSemantics::CoWinner;
        let lim = DEFAULT_BRUTE_FORCE_LIMIT;
        assert_eq!(
            brute_force_win_prob(&all_one, &plurality(), 0, co, lim).unwrap(),
            1.0
        );
        assert_eq!(
            brute_force_win_prob(&all_one, &plurality(), 1, co, lim).unwrap(),
            0.0
        );
        assert_eq!(
            brute_force_win_prob(&all_zero, &plurality(), 2, co, lim).unwrap(),
            1.0
        );
        assert_eq!(
            brute_force_win_prob(&all_zero, &Rule::Condorcet, 0, co, lim).unwrap(),
            0.0
        );
    }

    #[test]
    fn brute_force_lose_single_voter() {
        let one = pp(2, &[&[0, 1]], &[0.5]);
        let lose =
            brute_force_lose_prob(&one, &plurality(), 1, WinnerSemantics::CoWinner, 20).unwrap();
        assert!((lose - 0.5).abs() < TOL);
    }

    #[test]
    fn brute_force_refuses_above_limit() {
        let orders: Vec<Vec<usize>> = vec![vec![0, 1]; 5];
        let big =
            ProbabilisticProfile::uniform(Profile::from_orders(2, &orders).unwrap(), 0.5).unwrap();
        let err =
            brute_force_win_prob(&big, &plurality(), 0, WinnerSemantics::CoWinner, 4).unwrap_err();
        assert!(matches!(err, Error::LimitExceeded { limit: 4, .. }));
    }

    #[test]
    fn exact_dispatch() {
        let one = pp(3, &[&[0, 1, 2]], &[0.5]);
        let co = WinnerSemantics::CoWinner;
        assert!(win_prob_exact(&one, &Rule::Condorcet, 0, co).is_none());
        assert!(win_prob_exact(&one, &Rule::Positional(PositionalFamily::Borda), 0, co).is_none());
        assert!(win_prob_exact(
            &one,
            &Rule::Positional(PositionalFamily::KApproval(1)),
            0,
            co
        )
        .is_some());
    }
}
