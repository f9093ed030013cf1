//! Line-based text formats for networks, forests and exact tree
//! distributions. Lines starting with `#` are comments.
//!
//! ```text
//! network <vertex_count> <edge_count>
//! e <edge_id> <u> <v> <num>/<den>
//! wired <vertex_id>                      (optional)
//!
//! forest <edge_count>
//! f <edge_id>
//! p <vertex> <edge_id> <+|->             (optional parent lines)
//!
//! t <num>/<den> <edge_id>...
//! total <num>/<den>
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::ExactTreeDistribution;
use crate::forest::{BoundaryForest, SpanningTree};
use crate::network::{AnyNetwork, Edge, Network, OrientedEdge, Rational, WiredNetwork};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn number<T: FromStr>(line: usize, token: Option<&&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_error(line, format!("bad {what} `{token}`")))
}

fn rational(line: usize, token: Option<&&str>) -> Result<Rational> {
    let token = token.ok_or_else(|| parse_error(line, "missing rational"))?;
    let (num, den) = token
        .split_once('/')
        .ok_or_else(|| parse_error(line, format!("expected num/den, got `{token}`")))?;
    let num: BigInt = num
        .parse()
        .map_err(|_| parse_error(line, format!("bad numerator `{num}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| parse_error(line, format!("bad denominator `{den}`")))?;
    if den == BigInt::from(0) {
        return Err(parse_error(line, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn write_rational(out: &mut String, x: &Rational) {
    let _ = write!(out, "{}/{}", x.numer(), x.denom());
}

/// Serializes a network, with a `wired` line if `wired_vertex` is given.
pub fn write_network(network: &Network, wired_vertex: Option<usize>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "network {} {}",
        network.vertex_count(),
        network.edge_count()
    );
    for (id, e) in network.edges().iter().enumerate() {
        let _ = write!(out, "e {id} {} {} ", e.u, e.v);
        write_rational(&mut out, &e.conductance);
        out.push('\n');
    }
    if let Some(w) = wired_vertex {
        let _ = writeln!(out, "wired {w}");
    }
    out
}

pub fn write_any_network(network: &AnyNetwork) -> String {
    write_network(
        network.network(),
        network.wired().map(WiredNetwork::wired_vertex),
    )
}

/// Parses a network; with a `wired` line the result is a wired network.
pub fn parse_network(text: &str) -> Result<AnyNetwork> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_error(0, "empty network file"))?;
    if header.first() != Some(&"network") || header.len() != 3 {
        return Err(parse_error(
            hl,
            "expected `network <vertex_count> <edge_count>`",
        ));
    }
    let n: usize = number(hl, header.get(1), "vertex count")?;
    let m: usize = number(hl, header.get(2), "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut wired = None;
    for (i, tokens) in lines {
        match tokens[0] {
            "e" => {
                if tokens.len() != 5 {
                    return Err(parse_error(i, "expected `e <id> <u> <v> <num>/<den>`"));
                }
                let id: usize = number(i, tokens.get(1), "edge id")?;
                if id != edges.len() {
                    return Err(parse_error(i, format!("edge id {id} out of sequence")));
                }
                let u = number(i, tokens.get(2), "endpoint")?;
                let v = number(i, tokens.get(3), "endpoint")?;
                edges.push(Edge::new(u, v, rational(i, tokens.get(4))?));
            }
            "wired" if wired.is_none() && tokens.len() == 2 => {
                wired = Some(number(i, tokens.get(1), "wired vertex")?);
            }
            other => return Err(parse_error(i, format!("unexpected line `{other} ...`"))),
        }
    }
    if edges.len() != m {
        return Err(parse_error(
            hl,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let network = Network::new(n, edges)?;
    match wired {
        Some(w) => Ok(AnyNetwork::Wired(WiredNetwork::new(network, w)?)),
        None => Ok(AnyNetwork::Free(network)),
    }
}

/// A forest file: edge ids and optional parent assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestRecord {
    pub edges: Vec<usize>,
    pub parents: Vec<(usize, OrientedEdge)>,
}

impl ForestRecord {
    pub fn from_tree(t: &SpanningTree<'_>) -> Self {
        ForestRecord {
            edges: t.edges(),
            parents: Vec::new(),
        }
    }

    pub fn from_forest(f: &BoundaryForest<'_>) -> Self {
        ForestRecord {
            edges: f.edges(),
            parents: f
                .wired()
                .interior()
                .iter()
                .map(|&v| (v, f.parent(v).expect("interior vertices have parents")))
                .collect(),
        }
    }

    pub fn to_tree<'n>(&self, network: &'n Network) -> Result<SpanningTree<'n>> {
        SpanningTree::new(network, &self.edges)
    }

    /// Rebuilds a boundary forest, using the recorded parents if present.
    pub fn to_forest<'n>(&self, wired: &'n WiredNetwork) -> Result<BoundaryForest<'n>> {
        if self.parents.is_empty() {
            return BoundaryForest::from_edges(wired, &self.edges);
        }
        let mut parent = vec![None; wired.network().vertex_count()];
        for &(v, oe) in &self.parents {
            if v >= parent.len() || oe.edge >= wired.network().edge_count() {
                return Err(Error::InvalidForest(format!(
                    "parent line for {v} is out of range"
                )));
            }
            parent[v] = Some(oe);
        }
        BoundaryForest::from_parts(wired, &self.edges, parent)
    }
}

pub fn write_forest(record: &ForestRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "forest {}", record.edges.len());
    for e in &record.edges {
        let _ = writeln!(out, "f {e}");
    }
    for (v, oe) in &record.parents {
        let _ = writeln!(
            out,
            "p {v} {} {}",
            oe.edge,
            if oe.forward { '+' } else { '-' }
        );
    }
    out
}

pub fn parse_forest(text: &str) -> Result<ForestRecord> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_error(0, "empty forest file"))?;
    if header.first() != Some(&"forest") || header.len() != 2 {
        return Err(parse_error(hl, "expected `forest <count>`"));
    }
    let count: usize = number(hl, header.get(1), "edge count")?;
    let mut record = ForestRecord {
        edges: Vec::with_capacity(count),
        parents: Vec::new(),
    };
    for (i, tokens) in lines {
        match (tokens[0], tokens.len()) {
            ("f", 2) => record.edges.push(number(i, tokens.get(1), "edge id")?),
            ("p", 4) => {
                let v = number(i, tokens.get(1), "vertex")?;
                let e = number(i, tokens.get(2), "edge id")?;
                let forward = match tokens[3] {
                    "+" => true,
                    "-" => false,
                    d => {
                        return Err(parse_error(
                            i,
                            format!("direction must be + or -, got `{d}`"),
                        ))
                    }
                };
                record.parents.push((v, OrientedEdge::new(e, forward)));
            }
            (other, _) => return Err(parse_error(i, format!("unexpected line `{other} ...`"))),
        }
    }
    if record.edges.len() != count {
        return Err(parse_error(
            hl,
            format!(
                "header announces {count} edges, found {}",
                record.edges.len()
            ),
        ));
    }
    Ok(record)
}

pub fn write_tree_distribution(dist: &ExactTreeDistribution) -> String {
    let mut out = String::new();
    for (key, w) in &dist.trees {
        out.push_str("t ");
        write_rational(&mut out, w);
        for e in key {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out.push_str("total ");
    write_rational(&mut out, &dist.total_weight);
    out.push('\n');
    out
}

pub fn parse_tree_distribution(text: &str) -> Result<ExactTreeDistribution> {
    let mut trees = Vec::new();
    let mut total = None;
    for (i, tokens) in content_lines(text) {
        match tokens[0] {
            "t" if total.is_none() => {
                let w = rational(i, tokens.get(1))?;
                let key = tokens[2..]
                    .iter()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| parse_error(i, format!("bad edge id `{t}`")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                trees.push((key, w));
            }
            "total" if total.is_none() && tokens.len() == 2 => {
                total = Some(rational(i, tokens.get(1))?)
            }
            other => return Err(parse_error(i, format!("unexpected line `{other} ...`"))),
        }
    }
    let total_weight = total.ok_or_else(|| parse_error(0, "missing `total` line"))?;
    let sum: Rational = trees.iter().map(|(_, w)| w.clone()).sum();
    if sum != total_weight {
        return Err(parse_error(0, "tree weights do not add up to the total"));
    }
    Ok(ExactTreeDistribution {
        trees,
        total_weight,
    })
}
