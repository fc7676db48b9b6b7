//! Text formats: address grammar, edge lists, DOT, embedding maps.
//!
//! Address grammar: `B` and `T` are the endpoints; an inner vertex is
//! `I:<steps>:<middle>` where `<steps>` is a `.`-separated list of
//! `<branch><L|U>` refinements, possibly empty (`I::3` is a middle of the
//! first construction step). Branch indices are 1-based decimal.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diamond::{
    generation_number, DiamondAddress, DiamondParams, Half, Refinement, SubdiamondRef,
};
use crate::graph::MaterializedGraph;
use crate::tree::{TreeSpec, TreeVertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty address")]
    Empty,
    #[error("address must start with B, T, or I, got {0:?}")]
    BadTag(String),
    #[error("inner address needs exactly two ':' separators: {0:?}")]
    BadShape(String),
    #[error("bad refinement step {0:?} (want <branch><L|U>)")]
    BadStep(String),
    #[error("bad branch index {0:?}")]
    BadBranch(String),
    #[error("bad map line {0:?} (want <tree-vertex> -> <address>)")]
    BadMapLine(String),
    #[error("bad tree vertex {0:?}")]
    BadTreeVertex(String),
}

impl fmt::Display for DiamondAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiamondAddress::Bottom => f.write_str("B"),
            DiamondAddress::Top => f.write_str("T"),
            DiamondAddress::Inner { path, middle } => {
                f.write_str("I:")?;
                for (i, r) in path.iter().enumerate() {
                    if i > 0 {
                        f.write_str(".")?;
                    }
                    write!(f, "{}{}", r.branch, r.half.letter())?;
                }
                write!(f, ":{middle}")
            }
        }
    }
}

impl FromStr for DiamondAddress {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "" => Err(ParseError::Empty),
            "B" => Ok(DiamondAddress::Bottom),
            "T" => Ok(DiamondAddress::Top),
            _ if s.starts_with("I:") => {
                let rest = &s[2..];
                let (steps, middle) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| ParseError::BadShape(s.to_string()))?;
                let middle: u32 = middle
                    .parse()
                    .map_err(|_| ParseError::BadBranch(middle.to_string()))?;
                let mut path = Vec::new();
                if !steps.is_empty() {
                    for step in steps.split('.') {
                        path.push(parse_step(step)?);
                    }
                }
                Ok(DiamondAddress::Inner { path, middle })
            }
            _ => Err(ParseError::BadTag(s.to_string())),
        }
    }
}

/// Inverse of the `Display` in `diamond`: regions reuse the step list of
/// the address grammar, with `-` for the whole graph.
impl FromStr for SubdiamondRef {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "" => Err(ParseError::Empty),
            "-" => Ok(SubdiamondRef::whole()),
            _ => {
                let mut path = Vec::new();
                for step in s.split('.') {
                    path.push(parse_step(step)?);
                }
                Ok(SubdiamondRef::new(path))
            }
        }
    }
}

fn parse_step(step: &str) -> Result<Refinement, ParseError> {
    let half = match step.as_bytes().last() {
        Some(b'L') => Half::Lower,
        Some(b'U') => Half::Upper,
        _ => return Err(ParseError::BadStep(step.to_string())),
    };
    let branch_str = &step[..step.len() - 1];
    let branch: u32 = branch_str
        .parse()
        .map_err(|_| ParseError::BadBranch(branch_str.to_string()))?;
    if branch == 0 {
        return Err(ParseError::BadBranch(branch_str.to_string()));
    }
    Ok(Refinement::new(branch, half))
}

/// One edge per line, `<label> <label>`, smaller label first, lines in
/// ascending order. `header` lines are emitted first, each prefixed `# `.
pub fn write_edge_list<L, P>(g: &MaterializedGraph<L, P>, header: &[String]) -> String
where
    L: Clone + Eq + Ord + std::hash::Hash + fmt::Display,
{
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for (a, b) in g.edge_labels() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

/// DOT for a materialized diamond: vertices keyed by address string,
/// labeled with their generation number (endpoints unlabeled).
pub fn write_dot_diamond(
    g: &MaterializedGraph<DiamondAddress, DiamondParams>,
    header: &[String],
) -> String {
    let params = *g.provenance();
    let mut out = String::new();
    for line in header {
        out.push_str("// ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("graph diamond {\n");
    for v in g.labels() {
        let label = match generation_number(v, &params).expect("materialized address") {
            Some(d) => d.to_string(),
            None => String::new(),
        };
        out.push_str(&format!("  \"{v}\" [label=\"{label}\"];\n"));
    }
    for (a, b) in g.edge_labels() {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

/// DOT for a materialized binary tree, vertices labeled by their bit string.
pub fn write_dot_tree(g: &MaterializedGraph<TreeVertex, TreeSpec>, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("// ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("graph tree {\n");
    for v in g.labels() {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for (a, b) in g.edge_labels() {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

/// One line per assignment, `<tree-vertex> -> <address>`, in length-lex
/// order of the tree vertices.
pub fn write_embedding_map(pairs: &[(TreeVertex, DiamondAddress)], header: &[String]) -> String {
    let mut sorted: Vec<&(TreeVertex, DiamondAddress)> = pairs.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for (t, a) in sorted {
        out.push_str(&format!("{t} -> {a}\n"));
    }
    out
}

/// Parses the `write_embedding_map` format, ignoring `#` comments and
/// blank lines.
pub fn parse_embedding_map(text: &str) -> Result<Vec<(TreeVertex, DiamondAddress)>, ParseError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (t, a) = line
            .split_once(" -> ")
            .ok_or_else(|| ParseError::BadMapLine(line.to_string()))?;
        let t = TreeVertex::parse(t.trim())
            .ok_or_else(|| ParseError::BadTreeVertex(t.trim().to_string()))?;
        let a: DiamondAddress = a.trim().parse()?;
        out.push((t, a));
    }
    Ok(out)
}
