//! Text formats for profiles, graphs and set systems, and rule spellings.
//!
//! Profile files:
//!
//! ```text
//! # comment
//! candidates a b c
//! voter 0.5 b a c
//! ```
//!
//! Graph files use `graph <n>` followed by `edge <u> <v>` lines; set systems
//! use `x3c <3q>` followed by `set <a> <b> <c>`. Indices are 0-based.

use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::generators::{Graph, SetSystem};
use crate::profile::{CandidateSet, ProbabilisticProfile, Profile, Ranking};
use crate::rules::{PositionalFamily, Rule, ScoreVector};

/// Non-empty, non-comment lines as `(line number, tokens)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split_whitespace().collect()))
        }
    })
}

fn at_line(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::invalid(format!("line {line}: {msg}"))
}

fn parse_num<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| at_line(line, format!("invalid {what} '{token}'")))
}

/// Parses a profile file.
pub fn parse_profile(text: &str) -> Result<ProbabilisticProfile> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::invalid("missing 'candidates' line"))?;
    if header[0] != "candidates" {
        return Err(at_line(line, "expected 'candidates <name>+'"));
    }
    let candidates =
        Arc::new(CandidateSet::new(header[1..].iter().copied()).map_err(|e| at_line(line, e))?);
    let mut rankings = Vec::new();
    let mut probs = Vec::new();
    for (line, tokens) in lines {
        if tokens[0] != "voter" || tokens.len() < 2 {
            return Err(at_line(line, "expected 'voter <prob> <name>+'"));
        }
        let p: f64 = parse_num(line, tokens[1], "probability")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(at_line(line, format!("probability {p} outside [0, 1]")));
        }
        let order = tokens[2..]
            .iter()
            .map(|name| {
                candidates
                    .index_of(name)
                    .ok_or_else(|| at_line(line, format!("unknown candidate '{name}'")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if order.len() != candidates.len() {
            return Err(at_line(
                line,
                format!(
                    "voter ranks {} candidates, expected {}",
                    order.len(),
                    candidates.len()
                ),
            ));
        }
        rankings.push(Ranking::new(order).map_err(|e| at_line(line, e))?);
        probs.push(p);
    }
    ProbabilisticProfile::new(Profile::new(candidates, rankings)?, probs)
}

/// Prints a profile file. `comments` become leading `#` lines.
pub fn write_profile(pp: &ProbabilisticProfile, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let names = pp.candidates();
    out.push_str("candidates ");
    out.push_str(&names.names().join(" "));
    out.push('\n');
    for (ranking, p) in pp.profile().rankings().iter().zip(pp.probs()) {
        out.push_str(&format!("voter {p}"));
        for &c in ranking.order() {
            out.push(' ');
            out.push_str(names.name(c));
        }
        out.push('\n');
    }
    out
}

/// Parses `graph <n>` / `edge <u> <v>`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::invalid("missing 'graph' line"))?;
    if header.len() != 2 || header[0] != "graph" {
        return Err(at_line(line, "expected 'graph <n>'"));
    }
    let n: usize = parse_num(line, header[1], "vertex count")?;
    let mut edges = Vec::new();
    for (line, tokens) in lines {
        if tokens.len() != 3 || tokens[0] != "edge" {
            return Err(at_line(line, "expected 'edge <u> <v>'"));
        }
        edges.push((
            parse_num(line, tokens[1], "vertex")?,
            parse_num(line, tokens[2], "vertex")?,
        ));
    }
    Graph::new(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

/// Parses `x3c <3q>` / `set <a> <b> <c>`.
pub fn parse_set_system(text: &str) -> Result<SetSystem> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::invalid("missing 'x3c' line"))?;
    if header.len() != 2 || header[0] != "x3c" {
        return Err(at_line(line, "expected 'x3c <3q>'"));
    }
    let size: usize = parse_num(line, header[1], "universe size")?;
    let mut sets = Vec::new();
    for (line, tokens) in lines {
        if tokens.len() != 4 || tokens[0] != "set" {
            return Err(at_line(line, "expected 'set <a> <b> <c>'"));
        }
        sets.push([
            parse_num(line, tokens[1], "element")?,
            parse_num(line, tokens[2], "element")?,
            parse_num(line, tokens[3], "element")?,
        ]);
    }
    SetSystem::new(size, sets)
}

pub fn write_set_system(sys: &SetSystem) -> String {
    let mut out = format!("x3c {}\n", sys.universe_size());
    for [a, b, c] in sys.sets() {
        out.push_str(&format!("set {a} {b} {c}\n"));
    }
    out
}

/// Parses `plurality`, `veto`, `approval:K`, `kveto:K`, `borda`, `rfl:F,L`,
/// `vector:s1,s2,...`, `condorcet` or `maximin`.
pub fn parse_rule(spec: &str) -> Result<Rule> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let bad = || Error::invalid(format!("invalid rule '{spec}'"));
    let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let family = match (name, arg) {
        ("condorcet", None) => return Ok(Rule::Condorcet),
        ("maximin", None) => return Ok(Rule::Maximin),
        ("plurality", None) => PositionalFamily::Plurality,
        ("veto", None) => PositionalFamily::Veto,
        ("borda", None) => PositionalFamily::Borda,
        ("approval", Some(k)) => PositionalFamily::KApproval(int(k)?),
        ("kveto", Some(k)) => PositionalFamily::KVeto(int(k)?),
        ("rfl", Some(args)) => {
            let (f, l) = args.split_once(',').ok_or_else(bad)?;
            PositionalFamily::Rfl {
                f: int(f)?,
                l: int(l)?,
            }
        }
        ("vector", Some(args)) => {
            let scores = args
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<i64>>>()?;
            PositionalFamily::Explicit(ScoreVector::new(scores)?)
        }
        _ => return Err(bad()),
    };
    Ok(Rule::Positional(family))
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rule(s)
    }
}
