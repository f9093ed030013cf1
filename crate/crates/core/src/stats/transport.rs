use num_traits::{FromPrimitive, Num, Signed, Zero};

use crate::error::{Error, Result};
use crate::network::{Network, Rational};

/// Expected mass sent and received by a uniformly chosen root under the
/// transport `f(network, from, to)`. The two sums range over the same
/// terms, so they agree whenever the plumbing is right.
pub fn mtp_check<T, F>(network: &Network, f: F) -> Result<(T, T)>
where
    T: Num + Clone + PartialOrd + FromPrimitive,
    F: Fn(&Network, usize, usize) -> T,
{
    let n = network.vertex_count();
    let mut mass = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let m = f(network, u, v);
            if m < T::zero() {
                return Err(Error::NegativeMass { from: u, to: v });
            }
            mass.push(m);
        }
    }
    let count = T::from_usize(n).expect("vertex count is representable");
    let mut sent = T::zero();
    for root in 0..n {
        for v in 0..n {
            sent = sent + mass[root * n + v].clone();
        }
    }
    let mut received = T::zero();
    for root in 0..n {
        for u in 0..n {
            received = received + mass[u * n + root].clone();
        }
    }
    Ok((sent / count.clone(), received / count))
}

/// Largest discrepancy between the laws of `(rho, X_1)` and `(X_1, rho)`
/// when `rho` is chosen proportionally to vertex conductance and `X_1` is
/// one step of the walk. Detailed balance makes this exactly zero.
pub fn reversibility_check(network: &Network) -> Rational {
    let pair = biased_step_law(network);
    let mut worst = Rational::zero();
    for (u, row) in pair.iter().enumerate() {
        for (v, p) in row.iter().enumerate().skip(u + 1) {
            let d = (p - &pair[v][u]).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Law of `(rho, X_1)` as a dense matrix, for inspection.
pub fn biased_step_law(network: &Network) -> Vec<Vec<Rational>> {
    let n = network.vertex_count();
    let total: Rational = (0..n).map(|v| network.vertex_conductance(v)).sum();
    let mut pair = vec![vec![Rational::zero(); n]; n];
    for (u, row) in pair.iter_mut().enumerate() {
        for oe in network.incident(u) {
            row[oe.head(network)] += network.conductance(oe.edge) / &total;
        }
    }
    pair
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{ratio, rational};

    fn weighted_triangle() -> Network {
        Network::from_integer_edges(3, &[(0, 1, 1), (1, 2, 2), (2, 0, 3)]).unwrap()
    }

    #[test]
    fn transport_examples() {
        let net = weighted_triangle();
        let adjacent = |g: &Network, u: usize, v: usize| {
            let hit = g.incident(u).iter().any(|oe| oe.head(g) == v);
            Rational::from_integer((hit as i64).into())
        };
        let (s, r) = mtp_check(&net, adjacent).unwrap();
        assert_eq!(s, rational(2));
        assert_eq!(s, r);
        let (s, r) = mtp_check(&net, |_, u, v| if u == v { 1.0 } else { 0.0 }).unwrap();
        assert_eq!((s, r), (1.0, 1.0));
        assert_eq!(
            mtp_check(&net, |_, _, _| -1.0),
            Err(Error::NegativeMass { from: 0, to: 0 })
        );
    }

    #[test]
    fn reversibility_examples() {
        let tri = Network::from_unit_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(reversibility_check(&tri), rational(0));
        let law = biased_step_law(&tri);
        assert_eq!(law[0][1], ratio(1, 6));
        assert_eq!(law[0][0], rational(0));

        let net = weighted_triangle();
        assert_eq!(reversibility_check(&net), rational(0));
        let law = biased_step_law(&net);
        assert_eq!(law[1][2], ratio(2, 12));
        assert_eq!(law[2][1], ratio(2, 12));

        let looped =
            Network::from_integer_edges(3, &[(0, 0, 5), (0, 1, 2), (1, 2, 3), (0, 1, 1)]).unwrap();
        assert_eq!(reversibility_check(&looped), rational(0));
    }
}
