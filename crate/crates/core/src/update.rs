//! The update `U(t, e)`: insert an oriented edge and delete the edge at its
//! tail that the insertion makes redundant. Free updates act on spanning
//! trees, wired updates on boundary forests.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::enumerate_spanning_trees;
use crate::forest::{BoundaryForest, SpanningTree};
use crate::network::{Network, OrientedEdge, Rational};
use crate::walk::walk_step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    NoopSelfLoop,
    NoopPresent,
    SameComponentCycle,
    CrossComponentParent,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::NoopSelfLoop => "noop_self_loop",
            CaseTag::NoopPresent => "noop_present",
            CaseTag::SameComponentCycle => "same_component_cycle",
            CaseTag::CrossComponentParent => "cross_component_parent",
        }
    }

    pub fn is_noop(self) -> bool {
        matches!(self, CaseTag::NoopSelfLoop | CaseTag::NoopPresent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateOutcome<S> {
    pub result: S,
    pub inserted: Option<OrientedEdge>,
    pub removed: Option<usize>,
    pub case: CaseTag,
}

impl<S> UpdateOutcome<S> {
    fn noop(result: S, case: CaseTag) -> Self {
        UpdateOutcome {
            result,
            inserted: None,
            removed: None,
            case,
        }
    }
}

/// `D(t, e)`: the first edge of the tree path from `e-` to `e+`, oriented
/// away from `e-`.
pub fn direction(t: &SpanningTree<'_>, e: OrientedEdge) -> Result<OrientedEdge> {
    let net = t.network();
    if net.edge(e.edge).is_self_loop() {
        return Err(Error::SelfLoop { edge: e.edge });
    }
    let path = t.path(e.tail(net), e.head(net));
    Ok(path[0])
}

/// `U(t, e) = t + e - D(t, e)`, or `t` itself if `e` is a self-loop or
/// already in `t`.
pub fn update_free<'n>(t: &SpanningTree<'n>, e: OrientedEdge) -> UpdateOutcome<SpanningTree<'n>> {
    let net = t.network();
    if net.edge(e.edge).is_self_loop() {
        return UpdateOutcome::noop(t.clone(), CaseTag::NoopSelfLoop);
    }
    if t.contains(e.edge) {
        return UpdateOutcome::noop(t.clone(), CaseTag::NoopPresent);
    }
    let d = direction(t, e).expect("not a self-loop");
    let mut result = t.clone();
    result.swap_edges(e.edge, d.edge);
    UpdateOutcome {
        result,
        inserted: Some(e),
        removed: Some(d.edge),
        case: CaseTag::SameComponentCycle,
    }
}

/// The wired update. If `e-` and `e+` lie in the same component, the cycle
/// edge at `e-` is removed; otherwise `e-` drops its parent edge and its
/// subtree re-hangs through `e`. An edge into the wired vertex counts as
/// joining two different components. Edges leaving the wired vertex are
/// rejected.
pub fn update_wired<'n>(
    f: &BoundaryForest<'n>,
    e: OrientedEdge,
) -> Result<UpdateOutcome<BoundaryForest<'n>>> {
    let net = f.network();
    let w = f.wired().wired_vertex();
    if net.edge(e.edge).is_self_loop() {
        return Ok(UpdateOutcome::noop(f.clone(), CaseTag::NoopSelfLoop));
    }
    if f.contains(e.edge) {
        return Ok(UpdateOutcome::noop(f.clone(), CaseTag::NoopPresent));
    }
    let (x, y) = (e.tail(net), e.head(net));
    if x == w {
        return Err(Error::WiredEndpoint { edge: e.edge });
    }
    let top = |v: usize| {
        let chain = f.chain(v);
        chain[chain.len() - 2]
    };
    let (removed, case) = if y != w && top(x) == top(y) {
        (
            direction(&f.as_tree(), e)?.edge,
            CaseTag::SameComponentCycle,
        )
    } else {
        let p = f.parent(x).expect("interior vertices have parents");
        (p.edge, CaseTag::CrossComponentParent)
    };
    let mut result = f.clone();
    let mask = result.in_forest_mut();
    mask[e.edge] = true;
    mask[removed] = false;
    result.reorient_component(x);
    debug_assert!(result.validate().is_ok());
    Ok(UpdateOutcome {
        result,
        inserted: Some(e),
        removed: Some(removed),
        case,
    })
}

/// States the update chain can act on.
pub trait Updatable: Clone {
    fn network(&self) -> &Network;
    /// Vertices an update may start from.
    fn update_vertices(&self) -> Vec<usize>;
    fn apply(&self, e: OrientedEdge) -> Result<UpdateOutcome<Self>>;
    fn component_count(&self) -> usize;
    fn check(&self) -> Result<()>;
}

impl<'n> Updatable for SpanningTree<'n> {
    fn network(&self) -> &Network {
        SpanningTree::network(self)
    }

    fn update_vertices(&self) -> Vec<usize> {
        (0..SpanningTree::network(self).vertex_count()).collect()
    }

    fn apply(&self, e: OrientedEdge) -> Result<UpdateOutcome<Self>> {
        Ok(update_free(self, e))
    }

    fn component_count(&self) -> usize {
        1
    }

    fn check(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidForest("not a spanning tree".into()))
        }
    }
}

impl<'n> Updatable for BoundaryForest<'n> {
    fn network(&self) -> &Network {
        BoundaryForest::network(self)
    }

    fn update_vertices(&self) -> Vec<usize> {
        self.wired().interior().to_vec()
    }

    fn apply(&self, e: OrientedEdge) -> Result<UpdateOutcome<Self>> {
        update_wired(self, e)
    }

    fn component_count(&self) -> usize {
        let net = BoundaryForest::network(self);
        net.incident(self.wired().wired_vertex())
            .iter()
            .filter(|oe| self.contains(oe.edge))
            .count()
    }

    fn check(&self) -> Result<()> {
        self.validate()
    }
}

/// One update at `v` with the inserted edge drawn among edges with tail `v`
/// proportionally to conductance.
pub fn random_update<S: Updatable, R: Rng + ?Sized>(
    state: &S,
    v: usize,
    rng: &mut R,
) -> Result<UpdateOutcome<S>> {
    let e = walk_step(state.network(), v, rng)?;
    state.apply(e)
}

/// How the update chain picks the vertex for each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexSchedule {
    Fixed(usize),
    RoundRobin,
    UniformRandom,
}

/// Runs `steps` random updates from `initial`, passing every outcome to
/// `observe`, and returns the final state.
pub fn update_chain_with<S, R, F>(
    initial: S,
    steps: usize,
    schedule: VertexSchedule,
    rng: &mut R,
    mut observe: F,
) -> Result<S>
where
    S: Updatable,
    R: Rng + ?Sized,
    F: FnMut(usize, &UpdateOutcome<S>),
{
    let vertices = initial.update_vertices();
    if vertices.is_empty() {
        return Err(Error::InvalidParameter("no vertex to update at".into()));
    }
    if let VertexSchedule::Fixed(v) = schedule {
        if !vertices.contains(&v) {
            return Err(Error::InvalidVertex { vertex: v });
        }
    }
    let mut state = initial;
    for step in 0..steps {
        let v = match schedule {
            VertexSchedule::Fixed(v) => v,
            VertexSchedule::RoundRobin => vertices[step % vertices.len()],
            VertexSchedule::UniformRandom => vertices[rng.random_range(0..vertices.len())],
        };
        let outcome = random_update(&state, v, rng)?;
        observe(step, &outcome);
        state = outcome.result;
    }
    Ok(state)
}

/// [`update_chain_with`], collecting the whole trajectory.
pub fn update_chain<S: Updatable, R: Rng + ?Sized>(
    initial: S,
    steps: usize,
    schedule: VertexSchedule,
    rng: &mut R,
) -> Result<Vec<UpdateOutcome<S>>> {
    let mut out = Vec::with_capacity(steps);
    update_chain_with(initial, steps, schedule, rng, |_, o| out.push(o.clone()))?;
    Ok(out)
}

/// Exact and empirical sides of the update-tolerance inequality
/// `P(T in A) >= c(e)/c(e-) P(U(T,e) in A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceReport {
    pub event: Rational,
    pub updated_event: Rational,
    pub factor: Rational,
    pub holds: bool,
    pub empirical_event: f64,
    pub empirical_updated_event: f64,
    pub samples: usize,
}

/// Checks the update-tolerance inequality for the edge `e` and the event
/// `event` (a predicate on sorted edge-id keys), exactly by enumeration and
/// empirically from `samples` Wilson samples.
pub fn update_ratio_bound_check<R: Rng + ?Sized>(
    network: &Network,
    e: OrientedEdge,
    event: impl Fn(&[usize]) -> bool,
    samples: usize,
    rng: &mut R,
) -> Result<ToleranceReport> {
    let dist = enumerate_spanning_trees(network)?;
    let mut p_event = Rational::default();
    let mut p_updated = Rational::default();
    for (key, w) in &dist.trees {
        let p = w / &dist.total_weight;
        if event(key) {
            p_event += &p;
        }
        let tree = SpanningTree::new(network, key)?;
        if event(&update_free(&tree, e).result.key()) {
            p_updated += p;
        }
    }
    let tail = e.tail(network);
    let factor = network.conductance(e.edge) / network.vertex_conductance(tail);
    let holds = p_event >= &factor * &p_updated;

    let (mut hits, mut updated_hits) = (0usize, 0usize);
    for _ in 0..samples {
        let t = crate::wilson::sample_fusf_truncation(network, rng)?;
        hits += event(&t.key()) as usize;
        updated_hits += event(&update_free(&t, e).result.key()) as usize;
    }
    let frac = |k: usize| {
        if samples == 0 {
            f64::NAN
        } else {
            k as f64 / samples as f64
        }
    };
    Ok(ToleranceReport {
        event: p_event,
        updated_event: p_updated,
        factor,
        holds,
        empirical_event: frac(hits),
        empirical_updated_event: frac(updated_hits),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::grid_box;
    use crate::network::{ratio, rational};
    use crate::rng::RngHandle;

    fn triangle() -> Network {
        Network::from_unit_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn direction_examples() {
        let path = Network::from_unit_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = SpanningTree::new(&path, &[0, 1]).unwrap();
        assert_eq!(
            direction(&t, OrientedEdge::new(2, true)).unwrap(),
            OrientedEdge::new(0, true)
        );
        assert_eq!(
            direction(&t, OrientedEdge::new(0, true)).unwrap(),
            OrientedEdge::new(0, true)
        );
        // star centre 0, leaves 1 and 2; e = (1,2)
        let star = Network::from_unit_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = SpanningTree::new(&star, &[0, 1]).unwrap();
        assert_eq!(
            direction(&t, OrientedEdge::new(2, true)).unwrap(),
            OrientedEdge::new(0, false)
        );
    }

    #[test]
    fn free_update_examples() {
        let tri = triangle();
        // t = {ab, bc}, e = (c, a): edge 2 stored (2,0)
        let t = SpanningTree::new(&tri, &[0, 1]).unwrap();
        let out = update_free(&t, OrientedEdge::new(2, true));
        assert_eq!(out.removed, Some(1));
        assert_eq!(out.result.edges(), vec![0, 2]);
        assert_eq!(out.case, CaseTag::SameComponentCycle);
        let out = update_free(&t, OrientedEdge::new(0, false));
        assert_eq!(out.case, CaseTag::NoopPresent);
        assert_eq!(out.result, t);

        let square = Network::from_unit_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let t = SpanningTree::new(&square, &[0, 1, 2]).unwrap();
        let out = update_free(&t, OrientedEdge::new(3, true));
        assert_eq!(out.removed, Some(2));
        assert_eq!(out.result.edges(), vec![0, 1, 3]);

        let looped = Network::from_unit_edges(2, &[(0, 0), (0, 1)]).unwrap();
        let t = SpanningTree::new(&looped, &[1]).unwrap();
        let out = update_free(&t, OrientedEdge::new(0, true));
        assert_eq!(out.case, CaseTag::NoopSelfLoop);
        assert!(out.inserted.is_none() && out.removed.is_none());
    }

    #[test]
    fn wired_update_cases() {
        // path 0-1-2-3-4 with both ends wired: interior 1,2,3, wired vertex 0
        // edges 0:(0,1) 1:(1,2) 2:(2,3) 3:(3,0)
        let path = Network::from_unit_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (wired, _) = path.wired_contraction(&[1, 2, 3]).unwrap();
        // two components {1} and {3,2}, tips 1 and 2
        let f = BoundaryForest::from_edges(&wired, &[0, 2, 3]).unwrap();
        let out = update_wired(&f, OrientedEdge::new(1, true)).unwrap();
        assert_eq!(out.case, CaseTag::CrossComponentParent);
        assert_eq!(out.removed, Some(0));
        assert_eq!(out.result.edges(), vec![1, 2, 3]);
        assert_eq!(out.result.parent_vertex(1), Some(2));
        for &v in wired.interior() {
            assert_eq!(*out.result.chain(v).last().unwrap(), 0);
        }

        let out = update_wired(&f, OrientedEdge::new(2, true)).unwrap();
        assert_eq!(out.case, CaseTag::NoopPresent);

        // into the wired vertex: vertex 3 re-hangs through edge 3 instead
        let g = BoundaryForest::from_edges(&wired, &[0, 1, 2]).unwrap();
        let out = update_wired(&g, OrientedEdge::new(3, true)).unwrap();
        assert_eq!(out.case, CaseTag::CrossComponentParent);
        assert_eq!(out.removed, Some(2));
        assert_eq!(
            update_wired(&g, OrientedEdge::new(3, false)),
            Err(Error::WiredEndpoint { edge: 3 })
        );
    }

    #[test]
    fn wired_cycle_case_uses_direction() {
        let wired = grid_box(2, 2, true).unwrap().into_wired().unwrap();
        let net = wired.network();
        let mut rng = RngHandle::new(4);
        let mut seen_cycle = false;
        for _ in 0..300 {
            let f = crate::wilson::sample_wusf_truncation(&wired, &mut rng).unwrap();
            for e in 0..net.edge_count() {
                for forward in [true, false] {
                    let oe = OrientedEdge::new(e, forward);
                    if oe.tail(net) == wired.wired_vertex() {
                        continue;
                    }
                    let wired_out = update_wired(&f, oe).unwrap();
                    let free_out = update_free(&f.as_tree(), oe);
                    assert_eq!(wired_out.result.edges(), free_out.result.edges());
                    if wired_out.case == CaseTag::SameComponentCycle {
                        seen_cycle = true;
                        assert_eq!(
                            wired_out.removed,
                            Some(direction(&f.as_tree(), oe).unwrap().edge)
                        );
                    }
                }
            }
        }
        assert!(seen_cycle);
    }

    #[test]
    fn chains_stay_valid() {
        let net = Network::from_integer_edges(
            4,
            &[
                (0, 1, 1),
                (1, 2, 2),
                (2, 3, 3),
                (3, 0, 4),
                (0, 2, 1),
                (1, 1, 1),
            ],
        )
        .unwrap();
        let t = SpanningTree::new(&net, &[0, 1, 2]).unwrap();
        let mut rng = RngHandle::new(2);
        assert!(
            update_chain(t.clone(), 0, VertexSchedule::RoundRobin, &mut rng)
                .unwrap()
                .is_empty()
        );
        for schedule in [
            VertexSchedule::Fixed(1),
            VertexSchedule::RoundRobin,
            VertexSchedule::UniformRandom,
        ] {
            let traj = update_chain(t.clone(), 500, schedule, &mut rng).unwrap();
            for o in &traj {
                assert!(o.result.check().is_ok());
                assert_eq!(o.inserted.is_none(), o.case.is_noop());
                assert_eq!(o.removed.is_none(), o.case.is_noop());
            }
        }
        let path = Network::from_unit_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = SpanningTree::new(&path, &[0, 1]).unwrap();
        let traj = update_chain(t, 50, VertexSchedule::UniformRandom, &mut rng).unwrap();
        assert!(traj.iter().all(|o| o.case == CaseTag::NoopPresent));
    }

    #[test]
    fn tolerance_examples() {
        let net = Network::from_integer_edges(3, &[(0, 1, 1), (1, 2, 2), (2, 0, 3)]).unwrap();
        let mut rng = RngHandle::new(8);
        for e in 0..3 {
            for forward in [true, false] {
                let oe = OrientedEdge::new(e, forward);
                let all = update_ratio_bound_check(&net, oe, |_| true, 0, &mut rng).unwrap();
                assert_eq!(all.event, rational(1));
                assert!(all.holds);
                let none = update_ratio_bound_check(&net, oe, |_| false, 0, &mut rng).unwrap();
                assert_eq!(none.event, rational(0));
                assert!(none.holds);
                let with_12 =
                    update_ratio_bound_check(&net, oe, |k| k.contains(&1), 2000, &mut rng).unwrap();
                assert!(with_12.holds);
                assert_eq!(with_12.event, ratio(8, 11));
            }
        }
    }
}
