//! Naive oracles and proptest strategies shared by the integration tests.
//!
//! Nothing here reuses the library's tallying code: scores, pairwise counts
//! and winners are recomputed from the rankings for every outcome.

#![allow(dead_code)]

use proptest::prelude::*;
use voteprob_core::{PositionalFamily, ProbabilisticProfile, Profile, Rule, WinnerSemantics};

pub const TOL: f64 = 1e-9;

/// Score vectors written out by hand for the families used in tests.
pub fn naive_vector(family: &PositionalFamily, m: usize) -> Vec<i64> {
    match family {
        PositionalFamily::Plurality => (0..m).map(|j| (j == 0) as i64).collect(),
        PositionalFamily::Veto => (0..m).map(|j| (j + 1 < m) as i64).collect(),
        PositionalFamily::KApproval(k) => (0..m).map(|j| (j < *k) as i64).collect(),
        PositionalFamily::KVeto(k) => (0..m).map(|j| (j + k < m) as i64).collect(),
        PositionalFamily::Borda => (0..m).map(|j| (m - 1 - j) as i64).collect(),
        PositionalFamily::Rfl { f, l } => (0..m)
            .map(|j| {
                if j < *f {
                    2
                } else if j + l < m {
                    1
                } else {
                    0
                }
            })
            .collect(),
        PositionalFamily::Explicit(sv) => sv.values().to_vec(),
    }
}

/// Winners of the sub-profile of `orders` selected by `present`.
pub fn naive_winners(
    rule: &Rule,
    m: usize,
    orders: &[Vec<usize>],
    present: impl Fn(usize) -> bool,
    sem: WinnerSemantics,
) -> Vec<usize> {
    let attending: Vec<&Vec<usize>> = orders
        .iter()
        .enumerate()
        .filter(|(i, _)| present(*i))
        .map(|(_, o)| o)
        .collect();
    let beats = |a: usize, b: usize| -> i64 {
        attending
            .iter()
            .filter(|o| {
                let pa = o.iter().position(|&x| x == a).unwrap();
                let pb = o.iter().position(|&x| x == b).unwrap();
                pa < pb
            })
            .count() as i64
    };
    let scores: Vec<i64> = match rule {
        Rule::Positional(family) => {
            let sv = naive_vector(family, m);
            (0..m)
                .map(|c| {
                    attending
                        .iter()
                        .map(|o| sv[o.iter().position(|&x| x == c).unwrap()])
                        .sum()
                })
                .collect()
        }
        Rule::Maximin => (0..m)
            .map(|c| {
                (0..m)
                    .filter(|&d| d != c)
                    .map(|d| beats(c, d))
                    .min()
                    .unwrap_or(0)
            })
            .collect(),
        Rule::Condorcet => {
            return (0..m)
                .filter(|&c| {
                    (0..m)
                        .filter(|&d| d != c)
                        .all(|d| beats(c, d) > beats(d, c))
                })
                .collect()
        }
    };
    (0..m)
        .filter(|&c| {
            (0..m).filter(|&d| d != c).all(|d| match sem {
                WinnerSemantics::CoWinner => scores[c] >= scores[d],
                WinnerSemantics::Unique => scores[c] > scores[d],
            })
        })
        .collect()
}

pub fn orders_of(profile: &Profile) -> Vec<Vec<usize>> {
    profile
        .rankings()
        .iter()
        .map(|r| r.order().to_vec())
        .collect()
}

pub fn mask_prob(probs: &[f64], mask: u64) -> f64 {
    probs
        .iter()
        .enumerate()
        .map(|(i, &p)| if mask >> i & 1 == 1 { p } else { 1.0 - p })
        .product()
}

/// Sums `Pr[I = U]` over every outcome `U` satisfying `pred`.
pub fn naive_prob(probs: &[f64], pred: impl Fn(u64) -> bool) -> f64 {
    (0u64..1 << probs.len())
        .filter(|&mask| pred(mask))
        .map(|mask| mask_prob(probs, mask))
        .sum()
}

pub fn naive_win_prob(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    c: usize,
    sem: WinnerSemantics,
) -> f64 {
    let orders = orders_of(pp.profile());
    let m = pp.num_candidates();
    naive_prob(pp.probs(), |mask| {
        naive_winners(rule, m, &orders, |i| mask >> i & 1 == 1, sem).contains(&c)
    })
}

pub fn build(m: usize, orders: Vec<Vec<usize>>, probs: Vec<f64>) -> ProbabilisticProfile {
    ProbabilisticProfile::new(Profile::from_orders(m, &orders).unwrap(), probs).unwrap()
}

/// A probability that is 0, 1, or uniform on `(0, 1)`, with all three common.
pub fn mixed_prob() -> impl Strategy<Value = f64> {
    prop_oneof![
        1 => Just(0.0),
        2 => Just(1.0),
        5 => 0.01f64..0.99,
    ]
}

pub fn interior_prob() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

pub fn ranking(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<usize>>()).prop_shuffle()
}

/// `m` candidates in `m_range`, `n` voters in `n_range`, mixed probabilities.
pub fn instance(
    m_range: std::ops::RangeInclusive<usize>,
    n_range: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = ProbabilisticProfile> {
    (m_range, n_range).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(ranking(m), n),
            prop::collection::vec(mixed_prob(), n),
        )
            .prop_map(move |(orders, probs)| build(m, orders, probs))
    })
}

pub fn semantics() -> impl Strategy<Value = WinnerSemantics> {
    prop_oneof![
        Just(WinnerSemantics::CoWinner),
        Just(WinnerSemantics::Unique)
    ]
}

/// Rules valid for every `m >= 3`.
pub fn any_rule() -> impl Strategy<Value = Rule> {
    prop_oneof![
        Just(Rule::Positional(PositionalFamily::Plurality)),
        Just(Rule::Positional(PositionalFamily::Veto)),
        Just(Rule::Positional(PositionalFamily::KApproval(2))),
        Just(Rule::Positional(PositionalFamily::KVeto(2))),
        Just(Rule::Positional(PositionalFamily::Borda)),
        Just(Rule::Positional(PositionalFamily::Rfl { f: 1, l: 1 })),
        Just(Rule::Condorcet),
        Just(Rule::Maximin),
    ]
}
