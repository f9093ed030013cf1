//! Double-precision effective resistances for networks too large for the
//! exact solver.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::network::Network;

/// Effective resistance between `u` and `v` by conjugate gradients on the
/// Laplacian grounded at `v`, iterated until the residual norm drops below
/// `tolerance`.
pub fn effective_resistance_f64(
    network: &Network,
    u: usize,
    v: usize,
    tolerance: f64,
) -> Result<f64> {
    let n = network.vertex_count();
    for x in [u, v] {
        if x >= n {
            return Err(Error::InvalidVertex { vertex: x });
        }
    }
    if u == v {
        return Err(Error::InvalidParameter("source and sink coincide".into()));
    }
    let edges: Vec<(usize, usize, f64)> = network
        .edges()
        .iter()
        .filter(|e| !e.is_self_loop())
        .map(|e| (e.u, e.v, e.conductance.to_f64().unwrap_or(f64::MAX)))
        .collect();
    let apply = |x: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(a, b, c) in &edges {
            let d = c * (x[a] - x[b]);
            out[a] += d;
            out[b] -= d;
        }
        out[v] = 0.0;
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    let mut x = vec![0.0; n];
    let mut r = vec![0.0; n];
    r[u] = 1.0;
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    for _ in 0..10 * n + 100 {
        if rr.sqrt() < tolerance {
            break;
        }
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let next = dot(&r, &r);
        let beta = next / rr;
        rr = next;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rr.sqrt() >= tolerance {
        log::warn!("conjugate gradients stopped at residual {}", rr.sqrt());
    }
    Ok(x[u])
}

/// `c(e) R_eff(e-, e+)` in double precision.
pub fn ust_edge_marginal_f64(network: &Network, e: usize, tolerance: f64) -> Result<f64> {
    let edge = network.edge(e);
    if edge.is_self_loop() {
        return Err(Error::SelfLoop { edge: e });
    }
    let c = edge.conductance.to_f64().unwrap_or(f64::MAX);
    Ok(c * effective_resistance_f64(network, edge.u, edge.v, tolerance)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::electrical::effective_resistance;

    #[test]
    fn agrees_with_exact_solver() {
        let net = Network::from_integer_edges(
            5,
            &[
                (0, 1, 1),
                (1, 2, 2),
                (2, 3, 3),
                (3, 4, 1),
                (4, 0, 5),
                (1, 3, 2),
                (0, 1, 4),
            ],
        )
        .unwrap();
        for (u, v) in [(0, 1), (0, 3), (2, 4)] {
            let exact = effective_resistance(&net, u, v).unwrap().to_f64().unwrap();
            let approx = effective_resistance_f64(&net, u, v, 1e-13).unwrap();
            assert!((exact - approx).abs() < 1e-10);
        }
    }
}
