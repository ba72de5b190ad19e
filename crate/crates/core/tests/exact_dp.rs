mod common;

use common::*;
use proptest::prelude::*;
use voteprob_core::exact::{
    brute_force_lose_prob, marginal_count_dist, subset_probability, win_prob_plurality,
    win_prob_veto,
};
use voteprob_core::{
    brute_force_win_prob, win_prob_exact, Error, PositionalFamily, Rule, WinnerSemantics,
};

fn plurality() -> Rule {
    Rule::Positional(PositionalFamily::Plurality)
}

fn veto() -> Rule {
    Rule::Positional(PositionalFamily::Veto)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn plurality_dp_matches_enumeration(pp in instance(2..=5, 0..=10), sem in semantics()) {
        for c in 0..pp.num_candidates() {
            let dp = win_prob_plurality(&pp, c, sem).unwrap();
            prop_assert!((dp - naive_win_prob(&pp, &plurality(), c, sem)).abs() <= TOL);
        }
    }

    #[test]
    fn veto_dp_matches_enumeration(pp in instance(2..=5, 0..=10), sem in semantics()) {
        for c in 0..pp.num_candidates() {
            let dp = win_prob_veto(&pp, c, sem).unwrap();
            prop_assert!((dp - naive_win_prob(&pp, &veto(), c, sem)).abs() <= TOL);
        }
    }

    #[test]
    fn brute_force_matches_enumeration(
        pp in instance(3..=4, 0..=8),
        rule in any_rule(),
        sem in semantics(),
    ) {
        let c = 0;
        let brute = brute_force_win_prob(&pp, &rule, c, sem, 20).unwrap();
        prop_assert!((brute - naive_win_prob(&pp, &rule, c, sem)).abs() <= TOL);
        let lose = brute_force_lose_prob(&pp, &rule, c, sem, 20).unwrap();
        prop_assert!((brute + lose - 1.0).abs() <= TOL);
    }

    #[test]
    fn dp_is_invariant_under_voter_order(pp in instance(2..=5, 0..=10), sem in semantics()) {
        let reversed: Vec<usize> = (0..pp.len()).rev().collect();
        let other = pp.select(&reversed).unwrap();
        for c in 0..pp.num_candidates() {
            let a = win_prob_plurality(&pp, c, sem).unwrap();
            let b = win_prob_plurality(&other, c, sem).unwrap();
            prop_assert!((a - b).abs() <= TOL);
        }
    }

    #[test]
    fn zero_probability_deletes_voter(pp in instance(3..=4, 1..=8), rule in any_rule()) {
        let sem = WinnerSemantics::CoWinner;
        let mut probs = pp.probs().to_vec();
        probs[0] = 0.0;
        let zeroed = build(pp.num_candidates(), orders_of(pp.profile()), probs);
        let rest: Vec<usize> = (1..pp.len()).collect();
        let deleted = pp.select(&rest).unwrap();
        let a = brute_force_win_prob(&zeroed, &rule, 0, sem, 20).unwrap();
        let b = brute_force_win_prob(&deleted, &rule, 0, sem, 20).unwrap();
        prop_assert!((a - b).abs() <= TOL);
    }

    #[test]
    fn probability_one_makes_voter_mandatory(pp in instance(3..=4, 1..=8), rule in any_rule()) {
        let sem = WinnerSemantics::CoWinner;
        let mut probs = pp.probs().to_vec();
        probs[0] = 1.0;
        let sure = build(pp.num_candidates(), orders_of(pp.profile()), probs.clone());
        let orders = orders_of(pp.profile());
        let m = pp.num_candidates();
        // Enumerate the other voters only, with voter 0 always present.
        let others = &probs[1..];
        let oracle = naive_prob(others, |mask| {
            naive_winners(&rule, m, &orders, |i| i == 0 || mask >> (i - 1) & 1 == 1, sem).contains(&0)
        });
        let got = brute_force_win_prob(&sure, &rule, 0, sem, 20).unwrap();
        prop_assert!((got - oracle).abs() <= TOL);
    }

    #[test]
    fn count_distribution_is_a_distribution(pp in instance(2..=3, 0..=10)) {
        let marked: Vec<usize> = (0..pp.len()).step_by(2).collect();
        let d = marginal_count_dist(&pp, &marked).unwrap();
        let total: f64 = d.probs().iter().sum();
        prop_assert!((total - 1.0).abs() <= TOL);
        prop_assert_eq!(d.max_count(), marked.len());
        let mean: f64 = (0..=d.max_count()).map(|y| y as f64 * d.pmf(y)).sum();
        let expected: f64 = marked.iter().map(|&i| pp.prob(i)).sum();
        prop_assert!((mean - expected).abs() <= 1e-9);
    }
}

#[test]
fn one_voter_examples() {
    let pp = build(2, vec![vec![0, 1]], vec![0.5]);
    let co = WinnerSemantics::CoWinner;
    assert!((win_prob_plurality(&pp, 1, co).unwrap() - 0.5).abs() < TOL);
    assert!((win_prob_plurality(&pp, 0, co).unwrap() - 1.0).abs() < TOL);
    let pp = build(2, vec![vec![0, 1]], vec![0.7]);
    assert!((win_prob_veto(&pp, 0, co).unwrap() - 1.0).abs() < TOL);
    let pp = build(2, vec![vec![1, 0]], vec![0.5]);
    let b = brute_force_win_prob(&pp, &plurality(), 1, co, 20).unwrap();
    assert!((b - 1.0).abs() < TOL);
}

#[test]
fn random_four_by_eight_veto_matches_brute_force() {
    let pp = voteprob_core::generators::random_instance(
        4,
        8,
        voteprob_core::generators::ProbMode::Uniform,
        2024,
    )
    .unwrap();
    for sem in [WinnerSemantics::CoWinner, WinnerSemantics::Unique] {
        for c in 0..4 {
            let dp = win_prob_veto(&pp, c, sem).unwrap();
            let bf = brute_force_win_prob(&pp, &veto(), c, sem, 20).unwrap();
            assert!((dp - bf).abs() <= TOL);
        }
    }
}

#[test]
fn exact_dispatch() {
    let pp = build(3, vec![vec![0, 1, 2]], vec![0.5]);
    let co = WinnerSemantics::CoWinner;
    assert!(win_prob_exact(&pp, &Rule::Positional(PositionalFamily::Borda), 0, co).is_none());
    assert!(win_prob_exact(&pp, &Rule::Condorcet, 0, co).is_none());
    assert!(win_prob_exact(
        &pp,
        &Rule::Positional(PositionalFamily::KApproval(1)),
        0,
        co
    )
    .is_some());
}

#[test]
fn brute_force_refuses_large_profiles() {
    let pp = build(2, vec![vec![0, 1]; 5], vec![0.5; 5]);
    let err = brute_force_win_prob(&pp, &plurality(), 0, WinnerSemantics::CoWinner, 4).unwrap_err();
    assert!(matches!(err, Error::LimitExceeded { .. }));
}

#[test]
fn subset_probability_checks_indices() {
    let pp = build(2, vec![vec![0, 1]; 2], vec![0.25, 0.5]);
    assert!((subset_probability(&pp, &[1]).unwrap() - 0.375).abs() < TOL);
    assert!(subset_probability(&pp, &[2]).is_err());
}
