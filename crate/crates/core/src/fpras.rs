//! Randomized estimators.
//!
//! * [`PosteriorSampler`] draws attendance sets conditioned on a lose-to event,
//!   deciding voters one at a time with the exact conditional inclusion
//!   probability.
//! * [`KlmEstimator`] estimates `Pr[c loses]`, the probability of a union of
//!   lose-to events, with the Karp-Luby-Madras coverage scheme: pick an event
//!   proportionally to its probability, sample an outcome inside it, and count
//!   the outcome only if the picked event is the first (lowest rival index)
//!   one it satisfies.
//! * [`mc_win_prob_additive`] is the plain additive Monte-Carlo baseline.
//!
//! Trial `t` always draws from ChaCha stream `t` of the configured seed, so
//! results do not depend on how trials are scheduled across threads.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conditional::{EventModel, LoseEvent, MarginTable};
use crate::error::{Error, Result};
use crate::profile::ProbabilisticProfile;
use crate::rules::{Rule, Tally, WinnerSemantics};
use crate::subsets::membership;

/// Accuracy target, failure probability and seed of a randomized estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials_override: Option<u64>,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Result<Self> {
        let config = EstimatorConfig {
            epsilon,
            delta,
            seed,
            trials_override: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_trials(mut self, trials: u64) -> Result<Self> {
        self.trials_override = Some(trials);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.epsilon) {
            return Err(Error::invalid(format!(
                "epsilon = {} must lie in (0, 1)",
                self.epsilon
            )));
        }
        if !open_unit(self.delta) {
            return Err(Error::invalid(format!(
                "delta = {} must lie in (0, 1)",
                self.delta
            )));
        }
        if self.trials_override == Some(0) {
            return Err(Error::invalid("trial count must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Klm,
    McAdditive,
    ExactShortcut,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Klm => "klm",
            Method::McAdditive => "mc-additive",
            Method::ExactShortcut => "exact-shortcut",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub trials: u64,
    pub method: Method,
    pub config: EstimatorConfig,
}

/// Independent RNG substream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `⌈3 · events · ln(2/δ) / ε²⌉`.
pub fn klm_trial_count(events: usize, epsilon: f64, delta: f64) -> u64 {
    (3.0 * events as f64 * (2.0 / delta).ln() / (epsilon * epsilon)).ceil() as u64
}

/// `⌈ln(2/δ) / (2ε²)⌉`, the Hoeffding sample size for an additive ε.
pub fn mc_trial_count(epsilon: f64, delta: f64) -> u64 {
    ((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as u64
}

/// Samples `I` conditioned on a lose-to event.
///
/// The DP is run once over the voters in reverse order, so layer `n - i`
/// gives the probability that the suffix `i..n` completes the event from any
/// partial margin. Conditioning on a decided prefix is then a table lookup.
#[derive(Debug, Clone)]
pub struct PosteriorSampler {
    model: EventModel,
    suffix: MarginTable,
    event_prob: f64,
}

impl PosteriorSampler {
    pub fn new(model: EventModel) -> Result<Self> {
        let reversed: Vec<(i64, f64)> = model
            .margins()
            .iter()
            .zip(model.probs())
            .rev()
            .map(|(&x, &p)| (x, p))
            .collect();
        let suffix = MarginTable::build(&reversed, model.is_strict(), usize::MAX, model.budget())?;
        let n = model.len();
        let event_prob = suffix.exceeds(n, 0);
        if event_prob <= 0.0 {
            return Err(Error::ZeroProbabilityEvent);
        }
        Ok(PosteriorSampler {
            model,
            suffix,
            event_prob,
        })
    }

    pub fn model(&self) -> &EventModel {
        &self.model
    }

    pub fn event_prob(&self) -> f64 {
        self.event_prob
    }

    /// `Pr[event | voters 0..i decided with margin sum D]`.
    fn completes(&self, i: usize, decided_sum: i64) -> f64 {
        let n = self.model.len();
        self.suffix.exceeds(n - i, -decided_sum)
    }

    /// `q_i = Pr[i ∈ I | event ∧ I_{i-1} = J_{i-1}]`. The prefix probability
    /// `Pr[I_{i-1} = J_{i-1}]` appears in numerator and denominator and
    /// cancels. `None` when the prefix is already incompatible with the event.
    fn inclusion(&self, i: usize, decided_sum: i64) -> Option<f64> {
        let denominator = self.completes(i, decided_sum);
        if denominator <= 0.0 {
            return None;
        }
        let x = self.model.margins()[i];
        let p = self.model.probs()[i];
        let numerator = p * self.completes(i + 1, decided_sum + x);
        Some((numerator / denominator).clamp(0.0, 1.0))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut chosen = Vec::new();
        let mut sum = 0i64;
        for i in 0..self.model.len() {
            let q = self
                .inclusion(i, sum)
                .expect("sampled prefix always keeps the event possible");
            if rng.gen::<f64>() < q {
                chosen.push(i);
                sum += self.model.margins()[i];
            }
        }
        chosen
    }

    /// Probability that [`sample`](Self::sample) returns exactly `subset`.
    pub fn path_probability(&self, subset: &[usize]) -> Result<f64> {
        let member = membership(self.model.len(), subset, "subset")?;
        let mut prob = 1.0;
        let mut sum = 0i64;
        for (i, &present) in member.iter().enumerate() {
            let Some(q) = self.inclusion(i, sum) else {
                return Ok(0.0);
            };
            if present {
                prob *= q;
                sum += self.model.margins()[i];
            } else {
                prob *= 1.0 - q;
            }
        }
        Ok(prob)
    }
}

/// One posterior draw for `event`.
pub fn sample_posterior<R: Rng + ?Sized>(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    event: LoseEvent,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let sampler = PosteriorSampler::new(EventModel::new(pp, rule, event)?)?;
    Ok(sampler.sample(rng))
}

/// Probability that the posterior sampler for `event` outputs `subset`.
pub fn posterior_path_probability(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    event: LoseEvent,
    subset: &[usize],
) -> Result<f64> {
    let sampler = PosteriorSampler::new(EventModel::new(pp, rule, event)?)?;
    sampler.path_probability(subset)
}

fn check_fpras_rule(rule: &Rule) -> Result<()> {
    match rule {
        Rule::Maximin => Err(Error::Unsupported(
            "no FPRAS implemented for maximin (open problem)".into(),
        )),
        _ => Ok(()),
    }
}

/// The Karp-Luby-Madras union estimator for `Pr[target loses]`.
#[derive(Debug, Clone)]
pub struct KlmEstimator {
    /// One model per rival, ascending rival index.
    models: Vec<EventModel>,
    /// Samplers for the rivals with positive event probability.
    samplers: Vec<(usize, f64, PosteriorSampler)>,
    total_weight: f64,
}

impl KlmEstimator {
    pub fn new(pp: &ProbabilisticProfile, rule: &Rule, target: usize) -> Result<Self> {
        check_fpras_rule(rule)?;
        pp.check_candidate(target)?;
        let mut models = Vec::new();
        let mut samplers = Vec::new();
        for rival in (0..pp.num_candidates()).filter(|&d| d != target) {
            let model = EventModel::new(pp, rule, LoseEvent::for_rule(rule, target, rival)?)?;
            let weight = model.prob()?;
            if weight > 0.0 {
                samplers.push((models.len(), weight, PosteriorSampler::new(model.clone())?));
            }
            models.push(model);
        }
        let total_weight = samplers.iter().map(|(_, w, _)| w).sum();
        Ok(KlmEstimator {
            models,
            samplers,
            total_weight,
        })
    }

    /// Sum of the positive event probabilities.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn num_events(&self) -> usize {
        self.samplers.len()
    }

    /// `(rival, weight)` for every positive-weight event.
    pub fn events(&self) -> Vec<(usize, f64)> {
        self.samplers
            .iter()
            .map(|(k, w, _)| (self.models[*k].event().rival, *w))
            .collect()
    }

    pub fn sampler(&self, event_index: usize) -> &PosteriorSampler {
        &self.samplers[event_index].2
    }

    /// Coverage indicator: the outcome counts for event `event_index` only if
    /// no rival with a smaller index also defeats the target on it.
    pub fn trial_indicator(&self, event_index: usize, outcome: &[usize]) -> bool {
        let (model_index, _, _) = self.samplers[event_index];
        let mut present = vec![false; self.models[model_index].len()];
        for &i in outcome {
            present[i] = true;
        }
        debug_assert!(self.models[model_index].holds(|i| present[i]));
        !self.models[..model_index]
            .iter()
            .any(|m| m.holds(|i| present[i]))
    }

    fn pick_event<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut u = rng.gen::<f64>() * self.total_weight;
        for (k, (_, w, _)) in self.samplers.iter().enumerate() {
            if u < *w {
                return k;
            }
            u -= w;
        }
        self.samplers.len() - 1
    }

    fn run_trial(&self, seed: u64, trial: u64) -> bool {
        let mut rng = trial_rng(seed, trial);
        let k = self.pick_event(&mut rng);
        let outcome = self.sampler(k).sample(&mut rng);
        self.trial_indicator(k, &outcome)
    }

    /// Number of successful trials among `0..trials`.
    pub fn count_hits(&self, seed: u64, trials: u64) -> u64 {
        (0..trials)
            .into_par_iter()
            .filter(|&t| self.run_trial(seed, t))
            .count() as u64
    }

    pub fn estimate(&self, config: &EstimatorConfig) -> Result<Estimate> {
        config.validate()?;
        if self.samplers.is_empty() {
            return Ok(Estimate {
                value: 0.0,
                trials: 0,
                method: Method::ExactShortcut,
                config: *config,
            });
        }
        let trials = config
            .trials_override
            .unwrap_or_else(|| klm_trial_count(self.num_events(), config.epsilon, config.delta));
        let hits = self.count_hits(config.seed, trials);
        let value = (self.total_weight * (hits as f64 / trials as f64)).min(1.0);
        Ok(Estimate {
            value,
            trials,
            method: Method::Klm,
            config: *config,
        })
    }
}

/// Multiplicative `(ε, δ)` estimate of `Pr[target loses]` (co-winner
/// semantics) for positional rules and Condorcet.
pub fn klm_lose_prob(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    target: usize,
    config: &EstimatorConfig,
) -> Result<Estimate> {
    config.validate()?;
    KlmEstimator::new(pp, rule, target)?.estimate(config)
}

/// Additive `(ε, δ)` estimate of `Pr[target wins]` by direct simulation.
pub fn mc_win_prob_additive(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    target: usize,
    semantics: WinnerSemantics,
    config: &EstimatorConfig,
) -> Result<Estimate> {
    config.validate()?;
    pp.check_candidate(target)?;
    let empty = Tally::new(rule, pp.num_candidates())?;
    let trials = config
        .trials_override
        .unwrap_or_else(|| mc_trial_count(config.epsilon, config.delta));
    let rankings = pp.profile().rankings();
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = trial_rng(config.seed, t);
            let mut tally = empty.clone();
            for (ranking, &p) in rankings.iter().zip(pp.probs()) {
                if rng.gen::<f64>() < p {
                    tally.add(ranking);
                }
            }
            tally.is_winner(target, semantics)
        })
        .count() as u64;
    Ok(Estimate {
        value: hits as f64 / trials as f64,
        trials,
        method: Method::McAdditive,
        config: *config,
    })
}
