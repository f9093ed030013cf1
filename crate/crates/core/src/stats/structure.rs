//! Structural statistics of forest components: past and future, core, end
//! counts, ball growth, spine profiles and degrees.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forest::BoundaryForest;
use crate::network::{Network, Rational};

/// `v` together with every vertex whose parent chain passes through `v`.
pub fn past_set(f: &BoundaryForest<'_>, v: usize) -> Vec<usize> {
    let mut out = vec![v];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        i += 1;
        out.extend(f.children(x));
    }
    out.sort_unstable();
    out
}

/// The vertices whose past contains `v`: its parent chain, without the
/// wired vertex.
pub fn future_set(f: &BoundaryForest<'_>, v: usize) -> Vec<usize> {
    let w = f.wired().wired_vertex();
    f.chain(v).into_iter().filter(|&x| x != w).collect()
}

/// Graph distances from `v` in `network`, `None` beyond `max_r`.
fn ball_distances(network: &Network, v: usize, max_r: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; network.vertex_count()];
    dist[v] = Some(0);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].expect("queued vertices have distances");
        if d == max_r {
            continue;
        }
        for oe in network.incident(x) {
            let y = oe.head(network);
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Number of parts of `component` minus `removed` that contain a marked
/// vertex, moving only along `forest_edges`.
fn attached_parts(
    network: &Network,
    in_forest: &[bool],
    component: &[usize],
    attached: &[bool],
    removed: &[bool],
) -> usize {
    let mut member = vec![false; network.vertex_count()];
    for &x in component {
        member[x] = true;
    }
    let mut seen = vec![false; network.vertex_count()];
    let mut parts = 0;
    for &s in component {
        if seen[s] || removed[s] {
            continue;
        }
        seen[s] = true;
        let mut hit = attached[s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for oe in network.incident(x) {
                let y = oe.head(network);
                if in_forest[oe.edge] && member[y] && !removed[y] && !seen[y] {
                    seen[y] = true;
                    hit |= attached[y];
                    queue.push_back(y);
                }
            }
        }
        parts += hit as usize;
    }
    parts
}

fn mask(network: &Network, edges: &[usize]) -> Vec<bool> {
    let mut m = vec![false; network.edge_count()];
    for &e in edges {
        m[e] = true;
    }
    m
}

/// Vertices of `component` whose removal leaves at least two parts that
/// contain a vertex marked in `attached`. Marked vertices stand in for
/// "reaches infinity" on a finite truncation.
pub fn core_vertices(
    network: &Network,
    forest_edges: &[usize],
    component: &[usize],
    attached: &[bool],
) -> Vec<usize> {
    let in_forest = mask(network, forest_edges);
    let mut removed = vec![false; network.vertex_count()];
    let mut out = Vec::new();
    for &x in component {
        removed[x] = true;
        if attached_parts(network, &in_forest, component, attached, &removed) >= 2 {
            out.push(x);
        }
        removed[x] = false;
    }
    out.sort_unstable();
    out
}

/// Number of marked parts of `component` left after deleting the ball of
/// radius `radius` around `center` in the ambient network. A lower bound
/// for the number of ends on a truncation.
pub fn ends_lower_bound(
    network: &Network,
    forest_edges: &[usize],
    component: &[usize],
    attached: &[bool],
    center: usize,
    radius: usize,
) -> usize {
    let in_forest = mask(network, forest_edges);
    let removed: Vec<bool> = ball_distances(network, center, radius)
        .iter()
        .map(Option::is_some)
        .collect();
    attached_parts(network, &in_forest, component, attached, &removed)
}

/// `|B(v, r) ∩ component|` for `r = 0..=max_r`, balls taken in `network`.
pub fn hausdorff_counts(
    network: &Network,
    component: &[usize],
    v: usize,
    max_r: usize,
) -> Vec<usize> {
    let dist = ball_distances(network, v, max_r);
    let mut counts = vec![0usize; max_r + 1];
    for &x in component {
        if let Some(d) = dist[x] {
            counts[d] += 1;
        }
    }
    for r in 1..=max_r {
        counts[r] += counts[r - 1];
    }
    counts
}

/// Conductances of the parent edges from `v` up to the wired vertex.
pub fn spine_profile(f: &BoundaryForest<'_>, v: usize) -> Vec<Rational> {
    let net = f.network();
    let mut out = Vec::new();
    let mut x = v;
    while let Some(p) = f.parent(x) {
        out.push(net.conductance(p.edge).clone());
        x = p.head(net);
    }
    out
}

/// Mean forest degree over `vertex_set`; self-loops never belong to a
/// forest and edges to vertices outside the set still count.
pub fn average_degree(
    network: &Network,
    forest_edges: &[usize],
    vertex_set: &[usize],
) -> Result<Rational> {
    if vertex_set.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut degree = vec![0i64; network.vertex_count()];
    for &e in forest_edges {
        let edge = network.edge(e);
        degree[edge.u] += 1;
        degree[edge.v] += 1;
    }
    let total: i64 = vertex_set.iter().map(|&v| degree[v]).sum();
    Ok(Rational::new(
        total.into(),
        (vertex_set.len() as i64).into(),
    ))
}

/// Arithmetic mean of the natural logarithms of a profile; zero when empty.
pub fn mean_log_conductance(profile: &[Rational]) -> f64 {
    if profile.is_empty() {
        return 0.0;
    }
    let sum: f64 = profile.iter().map(log_rational).sum();
    sum / profile.len() as f64
}

/// Mean log conductance of the spine seen from a uniformly chosen member
/// of `component`; zero when the component is empty.
pub fn component_spine_log_conductance(f: &BoundaryForest<'_>, component: &[usize]) -> f64 {
    if component.is_empty() {
        return 0.0;
    }
    let sum: f64 = component
        .iter()
        .map(|&v| mean_log_conductance(&spine_profile(f, v)))
        .sum();
    sum / component.len() as f64
}

/// Natural logarithm of a positive rational, safe for huge values.
pub fn log_rational(x: &Rational) -> f64 {
    debug_assert!(*x > Rational::zero());
    let ln = |b: &num_bigint::BigInt| {
        let bits = b.bits();
        let shift = bits.saturating_sub(60);
        let top: num_bigint::BigInt = b >> shift;
        let mantissa: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::NAN);
        mantissa.ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln(x.numer()) - ln(x.denom())
}
