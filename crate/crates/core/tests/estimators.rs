mod common;

use common::*;
use voteprob_core::fpras::{klm_trial_count, mc_trial_count, KlmEstimator};
use voteprob_core::generators::{random_instance, ProbMode};
use voteprob_core::{
    brute_force_win_prob, klm_lose_prob, mc_win_prob_additive, EstimatorConfig, Method,
    PositionalFamily, Rule, WinnerSemantics,
};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let pp = random_instance(4, 10, ProbMode::Uniform, 5).unwrap();
    let borda = Rule::Positional(PositionalFamily::Borda);
    let config = EstimatorConfig::new(0.1, 0.05, 99).unwrap();
    let one = in_pool(1, || klm_lose_prob(&pp, &borda, 0, &config).unwrap());
    let four = in_pool(4, || klm_lose_prob(&pp, &borda, 0, &config).unwrap());
    assert_eq!(one.value.to_bits(), four.value.to_bits());
    let sem = WinnerSemantics::CoWinner;
    let one = in_pool(1, || {
        mc_win_prob_additive(&pp, &Rule::Maximin, 0, sem, &config).unwrap()
    });
    let four = in_pool(4, || {
        mc_win_prob_additive(&pp, &Rule::Maximin, 0, sem, &config).unwrap()
    });
    assert_eq!(one.value.to_bits(), four.value.to_bits());
}

#[test]
fn klm_is_close_on_a_fixed_instance() {
    let pp = random_instance(3, 10, ProbMode::Uniform, 11).unwrap();
    let rule = Rule::Positional(PositionalFamily::KApproval(2));
    let lose = 1.0 - brute_force_win_prob(&pp, &rule, 0, WinnerSemantics::CoWinner, 20).unwrap();
    let est = klm_lose_prob(&pp, &rule, 0, &EstimatorConfig::new(0.05, 0.01, 3).unwrap()).unwrap();
    assert_eq!(est.method, Method::Klm);
    assert!(
        (est.value - lose).abs() <= 0.05 * lose,
        "{} vs {lose}",
        est.value
    );
}

#[test]
fn two_candidates_give_the_event_weight() {
    let pp = build(
        2,
        vec![vec![1, 0], vec![0, 1], vec![1, 0]],
        vec![0.3, 0.6, 0.8],
    );
    let rule = Rule::Positional(PositionalFamily::Plurality);
    let est = KlmEstimator::new(&pp, &rule, 0).unwrap();
    let value = klm_lose_prob(&pp, &rule, 0, &EstimatorConfig::new(0.1, 0.05, 0).unwrap())
        .unwrap()
        .value;
    assert_eq!(value, est.total_weight());
    let lose = 1.0 - naive_win_prob(&pp, &rule, 0, WinnerSemantics::CoWinner);
    assert!((value - lose).abs() <= TOL);
}

#[test]
fn trial_counts() {
    assert_eq!(mc_trial_count(0.05, 0.05), 738);
    assert_eq!(klm_trial_count(3, 0.1, 0.05), 3320);
}
