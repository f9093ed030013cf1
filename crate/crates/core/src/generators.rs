//! Generators for the networks used as fixtures and examples: grid boxes and
//! tori, canopy trees and their glued doubles, regular-tree balls and the
//! conductance-boosted tree.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::network::{AnyNetwork, Edge, Network, Rational, VertexMergeMap, WiredNetwork};
use crate::rng::RngHandle;
use crate::wilson::sample_wusf_truncation;

/// Generators refuse to build networks with more vertices than this.
pub const MAX_VERTICES: usize = 10_000_000;

fn check_size(count: Option<usize>) -> Result<usize> {
    match count {
        Some(c) if c <= MAX_VERTICES => Ok(c),
        _ => Err(Error::InvalidParameter(format!(
            "network would exceed {MAX_VERTICES} vertices"
        ))),
    }
}

fn unit() -> Rational {
    Rational::one()
}

/// Nearest-neighbour edges of `{0..side-1}^d`, vertex `x` numbered
/// `sum x_i side^i`. With `periodic`, coordinates wrap around.
fn lattice_edges(d: usize, side: usize, periodic: bool) -> Result<(usize, Vec<Edge>)> {
    let count = check_size((0..d).try_fold(1usize, |acc, _| acc.checked_mul(side)))?;
    let mut stride = vec![1usize; d];
    for i in 1..d {
        stride[i] = stride[i - 1] * side;
    }
    let mut edges = Vec::new();
    for v in 0..count {
        for &s in &stride {
            let x = (v / s) % side;
            if x + 1 < side {
                edges.push(Edge::new(v, v + s, unit()));
            } else if periodic {
                edges.push(Edge::new(v, v - x * s, unit()));
            }
        }
    }
    Ok((count, edges))
}

/// The box `{0..side-1}^d` with unit nearest-neighbour edges. The wired
/// variant is the box of side `side + 2` with its outer layer contracted to
/// a single wired vertex (id 0); interior cells keep ascending ids.
pub fn grid_box(d: usize, side: usize, wired: bool) -> Result<AnyNetwork> {
    if d == 0 || side < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs d >= 1 and side >= 2, got d={d} side={side}"
        )));
    }
    if !wired {
        let (n, edges) = lattice_edges(d, side, false)?;
        return Ok(AnyNetwork::Free(Network::new(n, edges)?));
    }
    let outer = side + 2;
    let (n, edges) = lattice_edges(d, outer, false)?;
    let net = Network::new(n, edges)?;
    let inside: Vec<usize> = (0..n)
        .filter(|&v| {
            let mut x = v;
            (0..d).all(|_| {
                let c = x % outer;
                x /= outer;
                (1..=side).contains(&c)
            })
        })
        .collect();
    let (wired, _) = net.wired_contraction(&inside)?;
    Ok(AnyNetwork::Wired(wired))
}

/// The discrete torus `(Z/side)^d`. Sides 2 give doubled edges.
pub fn torus(d: usize, side: usize) -> Result<Network> {
    if d == 0 || side < 2 {
        return Err(Error::InvalidParameter(format!(
            "torus needs d >= 1 and side >= 2, got d={d} side={side}"
        )));
    }
    let (n, edges) = lattice_edges(d, side, true)?;
    Network::new(n, edges)
}

fn level(heap_index: usize) -> u32 {
    (heap_index + 1).ilog2()
}

fn canopy_edges(height: usize, k: &Rational) -> Vec<(usize, usize, Rational)> {
    let count = (1usize << (height + 1)) - 1;
    (1..count)
        .map(|c| {
            let h = height as i32 - level(c) as i32;
            ((c - 1) / 2, c, num_traits::pow(k.clone(), h as usize))
        })
        .collect()
}

fn check_canopy(height: usize, k: &Rational) -> Result<()> {
    if height == 0 {
        return Err(Error::InvalidParameter(
            "canopy height must be at least 1".into(),
        ));
    }
    check_size(1usize.checked_shl(height as u32 + 1))?;
    if *k <= Rational::zero() {
        return Err(Error::InvalidParameter(format!(
            "canopy base must be positive, got {k}"
        )));
    }
    if *k <= Rational::from_integer(BigInt::from(2)) {
        log::warn!("canopy base {k} is at most 2");
    }
    Ok(())
}

/// The canopy tree `T_n(k)`: a binary tree of height `n` in heap order
/// (root 0, children of `i` at `2i+1`, `2i+2`), where an edge whose lower
/// endpoint sits `h` levels above the leaves has conductance `k^h`. Edge
/// `c - 1` joins child `c` to its parent.
pub fn canopy_network(height: usize, k: Rational) -> Result<Network> {
    check_canopy(height, &k)?;
    let count = (1usize << (height + 1)) - 1;
    Network::from_triples(count, &canopy_edges(height, &k))
}

/// Two canopy trees of the same height glued along their leaves, leaf `i`
/// of one matched to leaf `i` of the other in left-to-right order. The first
/// tree keeps its heap ids; internal vertex `j` of the second becomes
/// `2^(n+1) - 1 + j`. The edges of the first tree come first.
pub fn glued_canopy(height: usize, k1: Rational, k2: Rational) -> Result<Network> {
    check_canopy(height, &k1)?;
    check_canopy(height, &k2)?;
    let count = (1usize << (height + 1)) - 1;
    let internal = (1usize << height) - 1;
    let relabel = |j: usize| if j < internal { count + j } else { j };
    let mut edges = canopy_edges(height, &k1);
    edges.extend(
        canopy_edges(height, &k2)
            .into_iter()
            .map(|(p, c, w)| (relabel(p), relabel(c), w)),
    );
    Network::from_triples(count + internal, &edges)
}

/// Roots of the two halves of [`glued_canopy`].
pub fn glued_canopy_roots(height: usize) -> (usize, usize) {
    (0, (1usize << (height + 1)) - 1)
}

/// [`glued_canopy`] with both roots wired together, so each half hangs from
/// the wired vertex through the two children of its root.
pub fn wired_glued_canopy(
    height: usize,
    k1: Rational,
    k2: Rational,
) -> Result<(WiredNetwork, VertexMergeMap)> {
    let net = glued_canopy(height, k1, k2)?;
    let (r1, r2) = glued_canopy_roots(height);
    let keep: Vec<usize> = (0..net.vertex_count())
        .filter(|&v| v != r1 && v != r2)
        .collect();
    net.wired_contraction(&keep)
}

fn ball_size(degree: usize, radius: usize) -> Option<usize> {
    let mut total = 1usize;
    let mut shell = degree;
    for _ in 0..radius {
        total = total.checked_add(shell)?;
        shell = shell.checked_mul(degree - 1)?;
    }
    Some(total)
}

/// The ball of the given radius around a vertex of the `degree`-regular
/// tree, numbered breadth-first. Edge `c - 1` joins vertex `c` to its parent.
pub fn regular_tree_ball(degree: usize, radius: usize) -> Result<Network> {
    if degree < 2 {
        return Err(Error::InvalidParameter(format!(
            "tree degree must be at least 2, got {degree}"
        )));
    }
    let count = check_size(ball_size(degree, radius))?;
    let mut edges = Vec::with_capacity(count.saturating_sub(1));
    let mut next = 1;
    let mut v = 0;
    while next < count {
        let children = if v == 0 { degree } else { degree - 1 };
        for _ in 0..children {
            edges.push(Edge::new(v, next, unit()));
            next += 1;
        }
        v += 1;
    }
    Network::new(count, edges)
}

/// `e^x` as a rational with relative error below `1e-12`.
///
/// The integer part uses a 256-bit fixed-point value of `e` raised by
/// repeated squaring; the fractional part comes from `f64::exp`, which is
/// converted exactly.
pub fn exp_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent must be finite and >= 0, got {x}"
        )));
    }
    const BITS: u64 = 256;
    let n = x.floor();
    let frac = Rational::from_float((x - n).exp()).expect("finite");
    let n = n
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("exponent {x} too large")))?;

    let one = BigUint::one() << BITS;
    // e = sum 1/k!, to well below 2^-256
    let mut term = one.clone();
    let mut e = BigUint::zero();
    let mut k = 1u32;
    while !term.is_zero() {
        e += &term;
        term /= k;
        k += 1;
    }
    let mut result = one;
    let mut base = e;
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            result = (&result * &base) >> BITS;
        }
        base = (&base * &base) >> BITS;
        m >>= 1;
    }
    let denom = BigInt::one() << BITS;
    Ok(Rational::new(BigInt::from(result), denom) * frac)
}

/// A conductance-boosted ball of radius `radius` in the 3-regular tree.
///
/// A forest is drawn from the wired truncation of the ball of radius
/// `radius + 1` (exterior of the radius-`radius` ball wired). Each of its
/// components gets an independent uniform `U` in `[0,1)`, drawn in order of
/// the component's smallest vertex. A forest edge whose child side holds
/// `s` vertices gets conductance `exp((1 + U) s)`, rounded by
/// [`exp_rational`]; all other edges keep conductance 1. Vertex and edge ids
/// match [`regular_tree_ball`]`(3, radius)`.
pub fn boosted_tree(radius: usize, seed: u64) -> Result<Network> {
    if radius == 0 {
        return Err(Error::InvalidParameter(
            "boosted tree radius must be at least 1".into(),
        ));
    }
    let ball = regular_tree_ball(3, radius)?;
    let outer = regular_tree_ball(3, radius + 1)?;
    let inside: Vec<usize> = (0..ball.vertex_count()).collect();
    let (wired, map) = outer.wired_contraction(&inside)?;
    let mut rng = RngHandle::new(seed);
    let forest = sample_wusf_truncation(&wired, &mut rng)?;
    let net = wired.network();
    let w = wired.wired_vertex();

    // subtree sizes: children before parents, i.e. by decreasing depth
    let mut order: Vec<usize> = wired.interior().to_vec();
    let depth = |v: usize| forest.chain(v).len();
    order.sort_by_key(|&v| std::cmp::Reverse(depth(v)));
    let mut size = vec![1usize; net.vertex_count()];
    for &v in &order {
        if let Some(p) = forest.parent_vertex(v) {
            if p != w {
                size[p] += size[v];
            }
        }
    }
    // component of v = its ancestor adjacent to the wired vertex
    let top = |v: usize| {
        let chain = forest.chain(v);
        chain[chain.len() - 2]
    };
    let mut first_seen: Vec<(usize, usize)> = Vec::new();
    for &v in wired.interior() {
        let t = top(v);
        if !first_seen.iter().any(|&(tt, _)| tt == t) {
            first_seen.push((t, v));
        }
    }
    first_seen.sort_by_key(|&(_, v)| v);
    let mut boost = vec![0.0f64; net.vertex_count()];
    for &(t, _) in &first_seen {
        boost[t] = rng.random::<f64>();
    }

    let mut edges: Vec<Edge> = ball.edges().to_vec();
    for &v in wired.interior() {
        let p = forest.parent(v).expect("interior vertices have parents");
        if forest.parent_vertex(v) == Some(w) {
            continue;
        }
        let original = map.edge_origin[p.edge];
        let x = (1.0 + boost[top(v)]) * size[v] as f64;
        edges[original].conductance = exp_rational(x)?;
    }
    Network::new(ball.vertex_count(), edges)
}
