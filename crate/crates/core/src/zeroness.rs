//! Control by adding an unlimited number of voters (CCAUV) and the zeroness
//! of winning probabilities.
//!
//! Whether `Pr[c wins] > 0` only depends on which voters attend surely, which
//! attend never, and which may or may not attend. Splitting a probabilistic
//! profile along those lines gives a CCAUV instance and vice versa.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::DEFAULT_BRUTE_FORCE_LIMIT;
use crate::profile::{check_candidate, CandidateSet, ProbabilisticProfile, Profile};
use crate::rules::{Rule, Tally, WinnerSemantics};
use crate::subsets::{check_limit, gray_walk, lex_less, mask_to_indices};

/// Registered voters `M`, unregistered voters `Q` and the preferred candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcauvInstance {
    registered: Profile,
    unregistered: Profile,
    target: usize,
}

impl CcauvInstance {
    pub fn new(registered: Profile, unregistered: Profile, target: usize) -> Result<Self> {
        if registered.candidates() != unregistered.candidates() {
            return Err(Error::invalid(
                "registered and unregistered voters use different candidate sets",
            ));
        }
        check_candidate(registered.num_candidates(), target)?;
        Ok(CcauvInstance {
            registered,
            unregistered,
            target,
        })
    }

    pub fn candidates(&self) -> &Arc<CandidateSet> {
        self.registered.candidates()
    }

    pub fn registered(&self) -> &Profile {
        &self.registered
    }

    pub fn unregistered(&self) -> &Profile {
        &self.unregistered
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// `M ∘ Q′` for the given unregistered voter indices.
    pub fn with_added(&self, added: &[usize]) -> Result<Profile> {
        self.registered.concat(&self.unregistered.select(added)?)
    }

    fn base_tally(&self, rule: &Rule) -> Result<Tally> {
        let mut tally = Tally::new(rule, self.registered.num_candidates())?;
        for r in self.registered.rankings() {
            tally.add(r);
        }
        Ok(tally)
    }
}

/// Answer to a CCAUV question; `witness` indexes into `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlDecision {
    pub possible: bool,
    pub witness: Option<Vec<usize>>,
}

impl ControlDecision {
    fn yes(witness: Vec<usize>) -> Self {
        ControlDecision {
            possible: true,
            witness: Some(witness),
        }
    }

    fn no() -> Self {
        ControlDecision {
            possible: false,
            witness: None,
        }
    }
}

/// Voters with `p = 0` are dropped, `p = 1` become registered, the rest
/// unregistered. Also returns the original index of every unregistered voter.
pub fn split_ccauv_with_map(
    pp: &ProbabilisticProfile,
    target: usize,
) -> Result<(CcauvInstance, Vec<usize>)> {
    let mut sure = Vec::new();
    let mut maybe = Vec::new();
    for (i, &p) in pp.probs().iter().enumerate() {
        if p == 1.0 {
            sure.push(i);
        } else if p > 0.0 {
            maybe.push(i);
        }
    }
    let profile = pp.profile();
    let instance = CcauvInstance::new(profile.select(&sure)?, profile.select(&maybe)?, target)?;
    Ok((instance, maybe))
}

pub fn split_ccauv(pp: &ProbabilisticProfile, target: usize) -> Result<CcauvInstance> {
    split_ccauv_with_map(pp, target).map(|(inst, _)| inst)
}

/// `M` attends surely, every voter of `Q` with probability 1/2.
pub fn ccauv_to_probabilistic(instance: &CcauvInstance) -> Result<ProbabilisticProfile> {
    let profile = instance.registered.concat(&instance.unregistered)?;
    let probs = std::iter::repeat_n(1.0, instance.registered.len())
        .chain(std::iter::repeat_n(0.5, instance.unregistered.len()))
        .collect();
    ProbabilisticProfile::new(profile, probs)
}

/// Polynomial CCAUV for rules whose scores are all 0 or 1.
///
/// Adding every unregistered voter that approves the target is never worse
/// than any other choice: each such voter raises the target by one and
/// everyone else by at most one, and a voter that gives the target nothing
/// can only help rivals. So the target can be made to win iff it wins
/// `M ∘ Q*`, where `Q*` is that canonical set (also the returned witness).
pub fn ccauv_binary(
    instance: &CcauvInstance,
    rule: &Rule,
    semantics: WinnerSemantics,
) -> Result<ControlDecision> {
    let m = instance.registered.num_candidates();
    let sv = rule.positional_vector(m)?;
    if !sv.is_binary() {
        return Err(Error::Unsupported(format!(
            "rule {rule} does not have a 0/1 score vector"
        )));
    }
    let c = instance.target;
    let approving: Vec<usize> = instance
        .unregistered
        .rankings()
        .iter()
        .enumerate()
        .filter(|(_, r)| sv.at(r.position(c)) == 1)
        .map(|(i, _)| i)
        .collect();
    let mut tally = instance.base_tally(rule)?;
    for &i in &approving {
        tally.add(instance.unregistered.ranking(i));
    }
    Ok(if tally.is_winner(c, semantics) {
        ControlDecision::yes(approving)
    } else {
        ControlDecision::no()
    })
}

/// Walks all `Q′ ⊆ Q`, calling `visit(mask)` whenever the target wins `M ∘ Q′`.
fn for_each_winning_subset(
    instance: &CcauvInstance,
    rule: &Rule,
    semantics: WinnerSemantics,
    limit: usize,
    mut visit: impl FnMut(u64),
) -> Result<()> {
    let q = &instance.unregistered;
    check_limit("number of unregistered voters", q.len(), limit)?;
    let mut tally = instance.base_tally(rule)?;
    let c = instance.target;
    gray_walk(q.len(), |mask, flip| {
        if let Some(flip) = flip {
            if flip.added {
                tally.add(q.ranking(flip.index));
            } else {
                tally.remove(q.ranking(flip.index));
            }
        }
        if tally.is_winner(c, semantics) {
            visit(mask);
        }
    });
    Ok(())
}

/// CCAUV by enumerating every sub-list of `Q`. The witness is the
/// lexicographically least successful index list.
pub fn ccauv_brute(
    instance: &CcauvInstance,
    rule: &Rule,
    semantics: WinnerSemantics,
    limit: usize,
) -> Result<ControlDecision> {
    let mut best: Option<u64> = None;
    for_each_winning_subset(instance, rule, semantics, limit, |mask| {
        if best.is_none_or(|b| lex_less(mask, b)) {
            best = Some(mask);
        }
    })?;
    Ok(match best {
        Some(mask) => ControlDecision::yes(mask_to_indices(mask)),
        None => ControlDecision::no(),
    })
}

/// `α(Q, M)`: the number of sub-lists `Q′ ⊆ Q` making the target win.
pub fn ccauv_count_brute(
    instance: &CcauvInstance,
    rule: &Rule,
    semantics: WinnerSemantics,
    limit: usize,
) -> Result<u64> {
    let mut count = 0u64;
    for_each_winning_subset(instance, rule, semantics, limit, |_| count += 1)?;
    Ok(count)
}

/// Chooses the polynomial path for 0/1 positional rules, brute force otherwise.
pub fn ccauv_decide(
    instance: &CcauvInstance,
    rule: &Rule,
    semantics: WinnerSemantics,
    limit: usize,
) -> Result<ControlDecision> {
    if is_binary_rule(rule, instance.registered.num_candidates())? {
        ccauv_binary(instance, rule, semantics)
    } else {
        ccauv_brute(instance, rule, semantics, limit)
    }
}

pub fn is_binary_rule(rule: &Rule, m: usize) -> Result<bool> {
    Ok(rule.score_vector(m)?.is_some_and(|sv| sv.is_binary()))
}

/// Whether `Pr[target wins] > 0`, with a witness of original voter indices
/// (the uncertain voters to add on top of the sure ones).
pub fn win_positive_with_witness(
    pp: &ProbabilisticProfile,
    rule: &Rule,
    target: usize,
    semantics: WinnerSemantics,
    limit: usize,
) -> Result<ControlDecision> {
    let (instance, map) = split_ccauv_with_map(pp, target)?;
    let decision = ccauv_decide(&instance, rule, semantics, limit)?;
    Ok(ControlDecision {
        possible: decision.possible,
        witness: decision
            .witness
            .map(|w| w.into_iter().map(|i| map[i]).collect()),
    })
}

pub fn win_positive(pp: &ProbabilisticProfile, rule: &Rule, target: usize) -> Result<bool> {
    win_positive_with_witness(
        pp,
        rule,
        target,
        WinnerSemantics::CoWinner,
        DEFAULT_BRUTE_FORCE_LIMIT,
    )
    .map(|d| d.possible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::PositionalFamily;

    fn profile(m: usize, orders: &[&[usize]]) -> Profile {
        let orders: Vec<Vec<usize>> = orders.iter().map(|o| o.to_vec()).collect();
        Profile::from_orders(m, &orders).unwrap()
    }

    fn plurality() -> Rule {
        Rule::Positional(PositionalFamily::Plurality)
    }

    #[test]
    fn split_buckets() {
        let p = profile(3, &[&[0, 1, 2], &[1, 0, 2], &[2, 1, 0]]);
        let pp = ProbabilisticProfile::new(p, vec![0.0, 0.5, 1.0]).unwrap();
        let (inst, map) = split_ccauv_with_map(&pp, 0).unwrap();
        assert_eq!(
            inst.registered().rankings(),
            &[pp.profile().ranking(2).clone()]
        );
        assert_eq!(
            inst.unregistered().rankings(),
            &[pp.profile().ranking(1).clone()]
        );
        assert_eq!(map, vec![1]);
    }

    #[test]
    fn split_extremes() {
        let p = profile(3, &[&[0, 1, 2], &[1, 0, 2]]);
        let ones = ProbabilisticProfile::uniform(p.clone(), 1.0).unwrap();
        let inst = split_ccauv(&ones, 0).unwrap();
        assert_eq!(inst.registered(), &p);
        assert!(inst.unregistered().is_empty());
        let zeros = ProbabilisticProfile::uniform(p, 0.0).unwrap();
        let inst = split_ccauv(&zeros, 0).unwrap();
        assert!(inst.registered().is_empty() && inst.unregistered().is_empty());
    }

    #[test]
    fn to_probabilistic() {
        let m = profile(3, &[&[0, 1, 2], &[1, 0, 2]]);
        let q = profile(3, &[&[2, 1, 0], &[2, 0, 1], &[0, 2, 1]]);
        let q = Profile::new(m.candidates().clone(), q.rankings().to_vec()).unwrap();
        let inst = CcauvInstance::new(m, q, 0).unwrap();
        let pp = ccauv_to_probabilistic(&inst).unwrap();
        assert_eq!(pp.probs(), &[1.0, 1.0, 0.5, 0.5, 0.5]);
        assert_eq!(split_ccauv(&pp, 0).unwrap(), inst);
    }

    #[test]
    fn binary_examples() {
        let empty = profile(3, &[]);
        let q = Profile::new(
            empty.candidates().clone(),
            vec![crate::Ranking::new(vec![2, 0, 1]).unwrap()],
        )
        .unwrap();
        let inst = CcauvInstance::new(empty.clone(), q.clone(), 2).unwrap();
        let d = ccauv_binary(&inst, &plurality(), WinnerSemantics::CoWinner).unwrap();
        assert!(d.possible);
        assert_eq!(d.witness, Some(vec![0]));

        let two_a = Profile::new(
            empty.candidates().clone(),
            vec![crate::Ranking::new(vec![0, 1, 2]).unwrap(); 2],
        )
        .unwrap();
        let inst = CcauvInstance::new(two_a, q, 2).unwrap();
        let d = ccauv_binary(&inst, &plurality(), WinnerSemantics::CoWinner).unwrap();
        assert!(!d.possible);
        assert_eq!(d.witness, None);
        assert!(matches!(
            ccauv_binary(
                &inst,
                &Rule::Positional(PositionalFamily::Borda),
                WinnerSemantics::CoWinner
            ),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn brute_with_empty_q_is_winner_test() {
        let m = profile(3, &[&[0, 1, 2], &[1, 0, 2], &[0, 2, 1]]);
        let q = Profile::empty(m.candidates().clone());
        for c in 0..3 {
            let inst = CcauvInstance::new(m.clone(), q.clone(), c).unwrap();
            let d = ccauv_brute(&inst, &plurality(), WinnerSemantics::CoWinner, 20).unwrap();
            assert_eq!(d.possible, c == 0);
            let n = ccauv_count_brute(&inst, &plurality(), WinnerSemantics::CoWinner, 20).unwrap();
            assert_eq!(n, u64::from(c == 0));
        }
    }

    #[test]
    fn brute_witness_is_lexicographically_least() {
        // c2 needs at least one of the Q voters ranking it first.
        let m = profile(3, &[&[0, 1, 2]]);
        let q = Profile::new(
            m.candidates().clone(),
            vec![
                crate::Ranking::new(vec![1, 0, 2]).unwrap(),
                crate::Ranking::new(vec![2, 0, 1]).unwrap(),
                crate::Ranking::new(vec![2, 1, 0]).unwrap(),
            ],
        )
        .unwrap();
        let inst = CcauvInstance::new(m, q, 2).unwrap();
        let d = ccauv_brute(&inst, &plurality(), WinnerSemantics::CoWinner, 20).unwrap();
        // [0,1] wins (1:1, 0:1, 2:1) and precedes [1].
        assert_eq!(d.witness, Some(vec![0, 1]));
    }

    #[test]
    fn win_positive_examples() {
        let p = profile(3, &[&[1, 0, 2], &[0, 1, 2], &[2, 1, 0]]);
        let pp = ProbabilisticProfile::new(p, vec![1.0, 0.3, 1.0]).unwrap();
        assert!(win_positive(&pp, &plurality(), 0).unwrap());
        let d =
            win_positive_with_witness(&pp, &plurality(), 0, WinnerSemantics::CoWinner, 20).unwrap();
        assert_eq!(d.witness, Some(vec![1]));
        let absent = ProbabilisticProfile::new(pp.profile().clone(), vec![1.0, 0.0, 1.0]).unwrap();
        assert!(!win_positive(&absent, &plurality(), 0).unwrap());
    }
}
