//! Verification suites run over a set of small fixture networks. Each check
//! compares a sampler or identity against an exact oracle.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::batch::sample_batch;
use crate::error::{Error, Result};
use crate::exact::{
    direction_distribution, enumerate_spanning_trees, exact_conditioned_distribution,
    exact_update_pushforward, exact_wired_update_pushforward, minor_tree_distribution,
    tree_weight_total, unit_current_flow, ust_edge_marginal,
};
use crate::network::{AnyNetwork, Network, OrientedEdge, Rational};
use crate::stats::{chi_square_gof, mtp_check, reversibility_check, EmpiricalDistribution};
use crate::update::update_ratio_bound_check;
use crate::wilson::{sample_fusf_truncation, sample_wusf_truncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Update,
    Markov,
    Mtp,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Update => "update",
            Suite::Markov => "markov",
            Suite::Mtp => "mtp",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Suite::Oracle),
            "update" => Ok(Suite::Update),
            "markov" => Ok(Suite::Markov),
            "mtp" => Ok(Suite::Mtp),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub fixture: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.fixture,
            self.check,
            self.detail
        )
    }
}

/// Samples per fixture for the statistical check in the oracle suite.
pub const ORACLE_SAMPLES: usize = 20_000;
/// Significance level for every chi-square check.
pub const P_THRESHOLD: f64 = 1e-3;

struct Recorder<'a> {
    suite: &'static str,
    fixture: &'a str,
    out: Vec<CheckResult>,
}

impl Recorder<'_> {
    fn record(&mut self, check: impl Into<String>, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.out.push(CheckResult {
            suite: self.suite,
            fixture: self.fixture.to_string(),
            check: check.into(),
            passed,
            detail,
        });
    }
}

fn oriented_edges(network: &Network) -> impl Iterator<Item = OrientedEdge> + '_ {
    (0..network.edge_count())
        .filter(|&e| !network.edge(e).is_self_loop())
        .flat_map(|e| [OrientedEdge::new(e, true), OrientedEdge::new(e, false)])
}

fn oracle_checks(rec: &mut Recorder<'_>, fixture: &AnyNetwork, seed: u64) {
    let net = fixture.network();
    rec.record(
        "matrix-tree-total",
        (|| {
            let d = enumerate_spanning_trees(net)?;
            let t = tree_weight_total(net);
            Ok((t == d.total_weight, format!("total={t}")))
        })(),
    );
    rec.record(
        "kirchhoff-marginals",
        (|| {
            let d = enumerate_spanning_trees(net)?;
            let mut sum = Rational::zero();
            for e in (0..net.edge_count()).filter(|&e| !net.edge(e).is_self_loop()) {
                let k = ust_edge_marginal(net, e)?;
                if k != d.edge_marginal(e) {
                    return Ok((false, format!("edge {e}: {k} vs {}", d.edge_marginal(e))));
                }
                sum += k;
            }
            let expected = Rational::from_integer((net.vertex_count() as i64 - 1).into());
            Ok((sum == expected, format!("sum={sum}")))
        })(),
    );
    rec.record(
        "direction-current",
        (|| {
            for oe in oriented_edges(net) {
                let dist = direction_distribution(net, oe)?;
                let flow = unit_current_flow(net, oe)?;
                for &d in net.incident(oe.tail(net)) {
                    if net.edge(d.edge).is_self_loop() {
                        continue;
                    }
                    let p = dist.get(&d).cloned().unwrap_or_else(Rational::zero);
                    if p != flow.along(d) {
                        return Ok((false, format!("e={oe:?} d={d:?}")));
                    }
                }
            }
            Ok((true, String::new()))
        })(),
    );
    rec.record(
        "wilson-chi-square",
        (|| {
            let exact = enumerate_spanning_trees(net)?;
            let keys = match fixture.wired() {
                Some(w) => sample_batch(ORACLE_SAMPLES, seed, |_, rng| {
                    sample_wusf_truncation(w, rng).map(|f| f.key())
                }),
                None => sample_batch(ORACLE_SAMPLES, seed, |_, rng| {
                    sample_fusf_truncation(net, rng).map(|t| t.key())
                }),
            };
            let emp: EmpiricalDistribution = keys
                .into_iter()
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .collect();
            let r = chi_square_gof(&emp, &exact)?;
            Ok((
                r.p_value > P_THRESHOLD,
                format!("p={:.4} stat={:.3}", r.p_value, r.statistic),
            ))
        })(),
    );
}

fn update_checks(rec: &mut Recorder<'_>, fixture: &AnyNetwork, seed: u64) {
    let net = fixture.network();
    rec.record(
        "free-stationarity",
        (|| {
            let ust = enumerate_spanning_trees(net)?;
            for v in 0..net.vertex_count() {
                if !exact_update_pushforward(net, v)?.same_law(&ust) {
                    return Ok((false, format!("vertex {v}")));
                }
            }
            Ok((true, format!("{} vertices", net.vertex_count())))
        })(),
    );
    if let Some(wired) = fixture.wired() {
        rec.record(
            "wired-stationarity",
            (|| {
                let ust = enumerate_spanning_trees(net)?;
                for &v in wired.interior() {
                    if !exact_wired_update_pushforward(wired, v)?.same_law(&ust) {
                        return Ok((false, format!("vertex {v}")));
                    }
                }
                Ok((
                    true,
                    format!("{} interior vertices", wired.interior().len()),
                ))
            })(),
        );
    }
    rec.record(
        "update-tolerance",
        (|| {
            let mut rng = crate::rng::RngHandle::new(seed);
            let mut count = 0;
            for oe in oriented_edges(net) {
                for target in 0..net.edge_count() {
                    let r = update_ratio_bound_check(
                        net,
                        oe,
                        |k| k.binary_search(&target).is_ok(),
                        0,
                        &mut rng,
                    )?;
                    if !r.holds {
                        return Ok((false, format!("e={oe:?} event=contains {target}")));
                    }
                    count += 1;
                }
            }
            Ok((true, format!("{count} edge/event pairs")))
        })(),
    );
}

/// Every `(F, H)` of disjoint edge sets with `|F| + |H| <= 2`.
fn small_conditionings(m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = vec![(vec![], vec![])];
    for a in 0..m {
        out.push((vec![a], vec![]));
        out.push((vec![], vec![a]));
        for b in 0..m {
            if a == b {
                continue;
            }
            out.push((vec![a], vec![b]));
            if a < b {
                out.push((vec![a, b], vec![]));
                out.push((vec![], vec![a, b]));
            }
        }
    }
    out
}

fn markov_checks(rec: &mut Recorder<'_>, fixture: &AnyNetwork) {
    let net = fixture.network();
    rec.record(
        "spatial-markov",
        (|| {
            let (mut compared, mut null) = (0, 0);
            for (f, h) in small_conditionings(net.edge_count()) {
                let a = exact_conditioned_distribution(net, &f, &h);
                let b = minor_tree_distribution(net, &f, &h);
                match (a, b) {
                    (Ok(a), Ok(b)) if a.same_law(&b) => compared += 1,
                    (Err(Error::NullConditioningEvent), Err(Error::NullConditioningEvent)) => {
                        null += 1
                    }
                    (a, b) => {
                        return Ok((
                            false,
                            format!("F={f:?} H={h:?}: {:?} vs {:?}", a.is_ok(), b.is_ok()),
                        ))
                    }
                }
            }
            Ok((true, format!("{compared} events, {null} null")))
        })(),
    );
}

fn mtp_checks(rec: &mut Recorder<'_>, fixture: &AnyNetwork, seed: u64) {
    let net = fixture.network();
    rec.record(
        "mtp-adjacency",
        (|| {
            let (s, r) = mtp_check(net, |g: &Network, u, v| {
                let k = g.incident(u).iter().filter(|oe| oe.head(g) == v).count();
                Rational::from_integer((k as i64).into())
            })?;
            Ok((s == r, format!("sent={s} received={r}")))
        })(),
    );
    rec.record(
        "mtp-diagonal",
        (|| {
            let (s, r) = mtp_check(net, |_, u, v| {
                Rational::from_integer(((u == v) as i64).into())
            })?;
            Ok((
                s == r && s == Rational::from_integer(1.into()),
                format!("sent={s}"),
            ))
        })(),
    );
    if let Some(wired) = fixture.wired() {
        rec.record(
            "mtp-parent",
            (|| {
                let mut rng = crate::rng::RngHandle::new(seed);
                for _ in 0..50 {
                    let f = sample_wusf_truncation(wired, &mut rng)?;
                    let (s, r) = mtp_check(net, |_, u, v| {
                        let hit = wired.is_interior(u) && f.parent_vertex(u) == Some(v);
                        Rational::from_integer((hit as i64).into())
                    })?;
                    if s != r {
                        return Ok((false, format!("sent={s} received={r}")));
                    }
                }
                Ok((true, "50 samples".into()))
            })(),
        );
    }
    rec.record(
        "reversibility",
        Ok({
            let d = reversibility_check(net);
            (d.is_zero(), format!("max discrepancy {d}"))
        }),
    );
}

/// Runs `suite` over named fixtures. Checks run sequentially in fixture
/// order so reports are stable.
pub fn run_suite(suite: Suite, fixtures: &[(String, AnyNetwork)], seed: u64) -> Vec<CheckResult> {
    if suite == Suite::All {
        return [Suite::Oracle, Suite::Update, Suite::Markov, Suite::Mtp]
            .into_iter()
            .flat_map(|s| run_suite(s, fixtures, seed))
            .collect();
    }
    let mut out = Vec::new();
    for (name, fixture) in fixtures {
        let mut rec = Recorder {
            suite: suite.name(),
            fixture: name,
            out: Vec::new(),
        };
        match suite {
            Suite::Oracle => oracle_checks(&mut rec, fixture, seed),
            Suite::Update => update_checks(&mut rec, fixture, seed),
            Suite::Markov => markov_checks(&mut rec, fixture),
            Suite::Mtp => mtp_checks(&mut rec, fixture, seed),
            Suite::All => unreachable!(),
        }
        out.extend(rec.out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conditioning_count() {
        // 1 + 2m + m(m-1) + 2 * m(m-1)/2
        assert_eq!(small_conditionings(3).len(), 1 + 6 + 6 + 6);
    }

    #[test]
    fn suites_pass_on_the_weighted_triangle() {
        let net = Network::from_integer_edges(3, &[(0, 1, 1), (1, 2, 2), (2, 0, 3)]).unwrap();
        let fixtures = vec![("weighted-triangle".to_string(), AnyNetwork::Free(net))];
        let results = run_suite(Suite::All, &fixtures, 1);
        assert!(results.len() >= 9);
        for r in &results {
            assert!(r.passed, "{r}");
        }
        assert_eq!("mtp".parse::<Suite>().unwrap(), Suite::Mtp);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
