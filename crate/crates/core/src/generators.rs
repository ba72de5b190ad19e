//! Reduction instances used as correctness fixtures, their counting oracles,
//! and random probabilistic profiles.
//!
//! Each generator turns a combinatorial object into a CCAUV instance whose
//! number of successful sub-lists `α` equals a known count: matchings for
//! k-approval, edge covers for k-veto and exact covers for Condorcet and
//! Maximin. Orders written as a sequence of blocks are expanded by
//! [`block_order`], which lists each block in ascending candidate index.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::profile::{CandidateSet, ProbabilisticProfile, Profile, Ranking};
use crate::rules::{PositionalFamily, Rule};
use crate::subsets::check_limit;
use crate::zeroness::CcauvInstance;

/// Largest edge or set count the counting oracles enumerate.
pub const ORACLE_LIMIT: usize = 20;

/// A simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if normalized.contains(&e) {
                return Err(Error::invalid(format!("duplicate edge ({u}, {v})")));
            }
            normalized.push(e);
        }
        Ok(Graph {
            vertex_count,
            edges: normalized,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.vertex_count).any(|v| !self.edges.iter().any(|&(a, b)| a == v || b == v))
    }
}

/// An X3C instance: a universe of `3q` elements and a family of triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    universe_size: usize,
    sets: Vec<[usize; 3]>,
}

impl SetSystem {
    pub fn new(universe_size: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        if universe_size == 0 || !universe_size.is_multiple_of(3) {
            return Err(Error::invalid(format!(
                "universe size {universe_size} must be a positive multiple of 3"
            )));
        }
        let mut normalized: Vec<[usize; 3]> = Vec::with_capacity(sets.len());
        for set in sets {
            let mut s = set;
            s.sort_unstable();
            if s[2] >= universe_size {
                return Err(Error::invalid(format!(
                    "set {set:?} has an element outside 0..{universe_size}"
                )));
            }
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::invalid(format!(
                    "set {set:?} does not have three distinct elements"
                )));
            }
            if normalized.contains(&s) {
                return Err(Error::invalid(format!("duplicate set {set:?}")));
            }
            normalized.push(s);
        }
        Ok(SetSystem {
            universe_size,
            sets: normalized,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn q(&self) -> usize {
        self.universe_size / 3
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// Adds fresh disjoint triples until `q >= min_q`. Every exact cover of
    /// the result is an exact cover of `self` plus all the fresh triples, so
    /// the number of exact covers is unchanged.
    pub fn padded_to(&self, min_q: usize) -> SetSystem {
        let mut sets = self.sets.clone();
        let mut size = self.universe_size;
        while size / 3 < min_q {
            sets.push([size, size + 1, size + 2]);
            size += 3;
        }
        SetSystem {
            universe_size: size,
            sets,
        }
    }
}

/// Which combinatorial count a generated instance's `α` reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    Matchings,
    EdgeCovers,
    ExactCovers,
}

impl CountKind {
    pub fn name(&self) -> &'static str {
        match self {
            CountKind::Matchings => "matchings",
            CountKind::EdgeCovers => "edge-covers",
            CountKind::ExactCovers => "exact-covers",
        }
    }
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A reduction output together with the rule it is meant for.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub instance: CcauvInstance,
    pub rule: Rule,
    pub count: CountKind,
    /// Remarks about the construction (padding, trivially zero counts).
    pub notes: Vec<String>,
}

/// Concatenates `blocks`, each listed in ascending candidate index.
pub fn block_order(m: usize, blocks: &[Vec<usize>]) -> Result<Ranking> {
    let mut order = Vec::with_capacity(m);
    let mut seen = vec![false; m];
    for block in blocks {
        let mut block = block.clone();
        block.sort_unstable();
        for c in block {
            if c >= m || seen[c] {
                return Err(Error::invalid(format!(
                    "blocks do not partition 0..{m} (offending candidate {c})"
                )));
            }
            seen[c] = true;
            order.push(c);
        }
    }
    if order.len() != m {
        return Err(Error::invalid(format!("blocks do not cover all of 0..{m}")));
    }
    Ranking::new(order)
}

fn complement(m: usize, taken: &[usize]) -> Vec<usize> {
    (0..m).filter(|c| !taken.contains(c)).collect()
}

struct Builder {
    candidates: Arc<CandidateSet>,
    registered: Vec<Ranking>,
    unregistered: Vec<Ranking>,
}

impl Builder {
    fn new(names: Vec<String>) -> Result<Self> {
        Ok(Builder {
            candidates: Arc::new(CandidateSet::new(names)?),
            registered: Vec::new(),
            unregistered: Vec::new(),
        })
    }

    fn m(&self) -> usize {
        self.candidates.len()
    }

    fn registered(&mut self, copies: usize, blocks: &[Vec<usize>]) -> Result<()> {
        let r = block_order(self.m(), blocks)?;
        self.registered.extend(std::iter::repeat_n(r, copies));
        Ok(())
    }

    fn unregistered(&mut self, blocks: &[Vec<usize>]) -> Result<()> {
        let r = block_order(self.m(), blocks)?;
        self.unregistered.push(r);
        Ok(())
    }

    fn finish(self, target: usize) -> Result<CcauvInstance> {
        CcauvInstance::new(
            Profile::new(self.candidates.clone(), self.registered)?,
            Profile::new(self.candidates, self.unregistered)?,
            target,
        )
    }
}

fn vertex_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("u{i}")).collect()
}

fn require_vertices(g: &Graph) -> Result<()> {
    if g.vertex_count == 0 {
        return Err(Error::invalid("the graph needs at least one vertex"));
    }
    Ok(())
}

/// k-approval instance with `α` = number of matchings of `g`.
///
/// Candidates are the vertices, `c`, `d` and filler blocks `F_0..F_|E|` of
/// `k - 2` candidates each. The single registered voter approves
/// `{c, d} ∪ F_0`; the voter for edge `e_i` approves `e_i ∪ F_i`.
pub fn gen_kapproval_from_matching(g: &Graph, k: usize) -> Result<GeneratedInstance> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k} must be at least 2")));
    }
    require_vertices(g)?;
    let nv = g.vertex_count;
    let (c, d) = (nv, nv + 1);
    let mut names = vertex_names(nv);
    names.extend(["c".to_string(), "d".to_string()]);
    let mut fillers = Vec::new();
    for block in 0..=g.edges.len() {
        let ids: Vec<usize> = (0..k - 2).map(|j| names.len() + j).collect();
        names.extend((0..k - 2).map(|j| format!("f{block}_{j}")));
        fillers.push(ids);
    }
    let mut b = Builder::new(names)?;
    let m = b.m();

    let mut top: Vec<usize> = vec![c, d];
    top.extend(&fillers[0]);
    b.registered(1, &[top.clone(), complement(m, &top)])?;
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        let mut top = vec![u, v];
        top.extend(&fillers[i + 1]);
        b.unregistered(&[top.clone(), complement(m, &top)])?;
    }
    Ok(GeneratedInstance {
        instance: b.finish(c)?,
        rule: Rule::Positional(PositionalFamily::KApproval(k)),
        count: CountKind::Matchings,
        notes: Vec::new(),
    })
}

/// k-veto instance with `α` = number of edge covers of `g`.
///
/// Candidates are the vertices, `c`, `d` and a filler block `F` of `k - 2`.
/// The registered voter vetoes `{c, d} ∪ F`; the voter for edge `e_i` vetoes
/// `e_i ∪ F`.
pub fn gen_kveto_from_edgecover(g: &Graph, k: usize) -> Result<GeneratedInstance> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k} must be at least 2")));
    }
    require_vertices(g)?;
    let nv = g.vertex_count;
    let (c, d) = (nv, nv + 1);
    let mut names = vertex_names(nv);
    names.extend(["c".to_string(), "d".to_string()]);
    let filler: Vec<usize> = (0..k - 2).map(|j| nv + 2 + j).collect();
    names.extend((0..k - 2).map(|j| format!("f{j}")));
    let mut b = Builder::new(names)?;
    let m = b.m();

    let vertices: Vec<usize> = (0..nv).collect();
    let mut bottom = vec![c, d];
    bottom.extend(&filler);
    b.registered(1, &[vertices, bottom])?;
    for &(u, v) in &g.edges {
        let mut bottom = vec![u, v];
        bottom.extend(&filler);
        b.unregistered(&[complement(m, &bottom), bottom])?;
    }
    let mut notes = Vec::new();
    if g.has_isolated_vertex() {
        notes.push("graph has an isolated vertex, so no edge cover exists".to_string());
    }
    Ok(GeneratedInstance {
        instance: b.finish(c)?,
        rule: Rule::Positional(PositionalFamily::KVeto(k)),
        count: CountKind::EdgeCovers,
        notes,
    })
}

/// Smallest `q` for which the Condorcet construction is count-preserving.
///
/// With `q - 1` registered voters preferring the universe to `c`, the empty
/// sub-list already makes `c` the Condorcet winner when `q <= 2`.
pub const CONDORCET_MIN_Q: usize = 3;

/// Condorcet instance with `α` = number of exact covers of `sys`.
///
/// Candidates are the universe, `c` and `d`. Registered: `q - 1` voters
/// `(U, c, d)` and two voters `(c, d, U)`. The voter for set `e` is
/// `(e, d, c, U ∖ e)`. Systems with `q < 3` are first padded with fresh
/// disjoint triples.
pub fn gen_condorcet_from_x3c(sys: &SetSystem) -> Result<GeneratedInstance> {
    let mut notes = Vec::new();
    let sys = if sys.q() < CONDORCET_MIN_Q {
        notes.push(format!(
            "universe padded from q = {} to q = {CONDORCET_MIN_Q} with fresh disjoint triples",
            sys.q()
        ));
        sys.padded_to(CONDORCET_MIN_Q)
    } else {
        sys.clone()
    };
    let nu = sys.universe_size;
    let q = sys.q();
    let (c, d) = (nu, nu + 1);
    let mut names = vertex_names(nu);
    names.extend(["c".to_string(), "d".to_string()]);
    let mut b = Builder::new(names)?;
    let m = b.m();

    let universe: Vec<usize> = (0..nu).collect();
    b.registered(q - 1, &[universe.clone(), vec![c], vec![d]])?;
    b.registered(2, &[vec![c], vec![d], universe])?;
    for set in &sys.sets {
        let e = set.to_vec();
        let rest = complement(m, &[set[0], set[1], set[2], c, d]);
        b.unregistered(&[e, vec![d], vec![c], rest])?;
    }
    Ok(GeneratedInstance {
        instance: b.finish(c)?,
        rule: Rule::Condorcet,
        count: CountKind::ExactCovers,
        notes,
    })
}

/// Maximin instance with `α` = number of exact covers of `sys`.
///
/// Candidates are the universe, `c`, `d` and `w`. Registered: `q × (c,d,U,w)`,
/// `(q-1) × (c,U,w,d)`, `1 × (U,c,w,d)`, `2q × (d,w,U,c)`. The voter for set
/// `e` is `(w, U ∖ e, c, e, d)`.
pub fn gen_maximin_from_x3c(sys: &SetSystem) -> Result<GeneratedInstance> {
    let nu = sys.universe_size;
    let q = sys.q();
    let (c, d, w) = (nu, nu + 1, nu + 2);
    let mut names = vertex_names(nu);
    names.extend(["c".to_string(), "d".to_string(), "w".to_string()]);
    let mut b = Builder::new(names)?;

    let universe: Vec<usize> = (0..nu).collect();
    b.registered(q, &[vec![c], vec![d], universe.clone(), vec![w]])?;
    b.registered(q - 1, &[vec![c], universe.clone(), vec![w], vec![d]])?;
    b.registered(1, &[universe.clone(), vec![c], vec![w], vec![d]])?;
    b.registered(2 * q, &[vec![d], vec![w], universe.clone(), vec![c]])?;
    for set in &sys.sets {
        let rest: Vec<usize> = universe
            .iter()
            .copied()
            .filter(|u| !set.contains(u))
            .collect();
        b.unregistered(&[vec![w], rest, vec![c], set.to_vec(), vec![d]])?;
    }
    Ok(GeneratedInstance {
        instance: b.finish(c)?,
        rule: Rule::Maximin,
        count: CountKind::ExactCovers,
        notes: Vec::new(),
    })
}

/// Number of edge subsets touching every vertex at most once.
pub fn count_matchings_brute(g: &Graph) -> Result<u64> {
    check_limit("number of edges", g.edges.len(), ORACLE_LIMIT)?;
    let mut count = 0;
    for mask in 0u64..(1 << g.edges.len()) {
        let mut used = vec![false; g.vertex_count];
        let ok = g.edges.iter().enumerate().all(|(i, &(u, v))| {
            if mask & (1 << i) == 0 {
                return true;
            }
            if used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
            true
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of edge subsets touching every vertex at least once.
pub fn count_edge_covers_brute(g: &Graph) -> Result<u64> {
    check_limit("number of edges", g.edges.len(), ORACLE_LIMIT)?;
    let mut count = 0;
    for mask in 0u64..(1 << g.edges.len()) {
        let mut covered = vec![false; g.vertex_count];
        for (i, &(u, v)) in g.edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                covered[u] = true;
                covered[v] = true;
            }
        }
        if covered.iter().all(|&c| c) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of `q`-element subfamilies of pairwise disjoint sets.
pub fn count_exact_covers_brute(sys: &SetSystem) -> Result<u64> {
    check_limit("number of sets", sys.sets.len(), ORACLE_LIMIT)?;
    let q = sys.q() as u32;
    let mut count = 0;
    for mask in 0u64..(1 << sys.sets.len()) {
        if mask.count_ones() != q {
            continue;
        }
        let mut used = vec![false; sys.universe_size];
        let disjoint = sys.sets.iter().enumerate().all(|(i, set)| {
            if mask & (1 << i) == 0 {
                return true;
            }
            set.iter().all(|&x| !std::mem::replace(&mut used[x], true))
        });
        if disjoint {
            count += 1;
        }
    }
    Ok(count)
}

/// How attendance probabilities are drawn by [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbMode {
    /// Uniform on `[0, 1)`.
    Uniform,
    /// Every voter gets the same probability.
    Fixed(f64),
    /// A third of the voters attend surely, a sixth never, the rest uniform.
    MixedWithOnes,
}

/// `n` uniformly random rankings of `m` indexed candidates.
pub fn random_instance(
    m: usize,
    n: usize,
    mode: ProbMode,
    seed: u64,
) -> Result<ProbabilisticProfile> {
    if m == 0 {
        return Err(Error::invalid("at least one candidate is required"));
    }
    if let ProbMode::Fixed(p) = mode {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rankings = Vec::with_capacity(n);
    let mut probs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        rankings.push(Ranking::new(order)?);
        probs.push(match mode {
            ProbMode::Uniform => rng.gen::<f64>(),
            ProbMode::Fixed(p) => p,
            ProbMode::MixedWithOnes => {
                let roll = rng.gen_range(0..6);
                match roll {
                    0 | 1 => 1.0,
                    2 => 0.0,
                    _ => rng.gen::<f64>(),
                }
            }
        });
    }
    let profile = Profile::new(Arc::new(CandidateSet::indexed(m)?), rankings)?;
    ProbabilisticProfile::new(profile, probs)
}
