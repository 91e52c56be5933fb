//! Maximum-degree reduction: either many vertices of very high degree carry a subdivision, or
//! deleting them leaves a graph with bounded maximum degree.

use crate::certify::Certificate;
use crate::cycles::has_short_cycle;
use crate::engine::connect::{budget, connect_plans, needed, ConnectConfig, CorePlan};
use crate::error::{Error, FailureReason, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::params::{ParamSet, ReductionParams};
use crate::report::StageRecord;

/// Exact C4 check up to this many vertices.
const C4_CHECK_LIMIT: usize = 200;

#[derive(Clone, Debug)]
pub enum Reduction {
    /// The high-degree vertices carried a subdivision (in the ids of the input graph).
    Embedded(Certificate),
    /// `G[V ∖ L]`, or `G` itself when `L` is empty.
    Reduced(Graph),
}

pub fn reduce_max_degree(g: &Graph, ps: &ParamSet) -> Result<(Reduction, StageRecord)> {
    let n = g.n();
    let d = g.avg_degree_f64();
    let rp = ps.reduction(n, d);
    let high: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) as f64 >= rp.delta).collect();
    let mut rec = StageRecord::new("reduce-max-degree", "high-degree vertices are cores or get deleted")
        .param("delta", rp.delta)
        .param("delta_prime", rp.delta_prime)
        .param("ell", rp.ell as f64)
        .param("d", d)
        .size("n", n)
        .size("high", high.len());
    if n <= C4_CHECK_LIMIT && has_short_cycle(g, &[4])?.is_some() {
        rec.warn("input contains a 4-cycle");
    }
    if !high.is_empty() && high.len() >= rp.ell {
        let l = VertexSet::from_iter(n, high);
        let cert = embed_from_high_degree_cores(g, &l, &rp)?;
        let rec = rec.size("ell", cert.ell()).outcome("embedded");
        return Ok((Reduction::Embedded(cert), rec));
    }
    if high.is_empty() {
        return Ok((Reduction::Reduced(g.clone()), rec.outcome("unchanged")));
    }
    let keep = VertexSet::from_iter(n, high).complement();
    let h = g.induced(&keep);
    if 2 * h.n() < n {
        rec.warn(format!("kept {} of {n} vertices, fewer than half", h.n()));
    }
    if 2.0 * h.avg_degree_f64() < d {
        rec.warn(format!("average degree fell from {d:.3} to {:.3}", h.avg_degree_f64()));
    }
    let rec = rec.size("kept", h.n()).outcome("reduced");
    Ok((Reduction::Reduced(h), rec))
}

/// Builds a subdivision on the `ℓ` highest-degree vertices of `l`.
///
/// `S1` sets are disjoint, filled round-robin towards `Δ/2`; each `S1` vertex then adds up to
/// `d/2 − 1` children to `S2`. Pairs are joined between the live parts of `B2`, and a core whose
/// `S1` loses more than `Δ′` vertices is discarded.
pub fn embed_from_high_degree_cores(g: &Graph, l: &VertexSet, rp: &ReductionParams) -> Result<Certificate> {
    let n = g.n();
    let mut cand: Vec<Vertex> = l.iter().collect();
    cand.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    cand.truncate(rp.ell.max(1));
    if cand.len() == 1 {
        return Ok(Certificate::single(cand[0]));
    }
    let cores = VertexSet::from_iter(n, cand.iter().copied());
    let mut plans: Vec<CorePlan> = cand.iter().map(|&c| CorePlan::new(c, 0)).collect();
    let s1_target = ((rp.delta / 2.0).floor() as usize).max(1);
    let mut taken = cores.clone();
    let mut cursor = vec![0usize; plans.len()];
    loop {
        let mut grew = false;
        for (i, plan) in plans.iter_mut().enumerate() {
            if plan.s1.len() >= s1_target {
                continue;
            }
            let nbrs = g.neighbors(plan.core);
            while cursor[i] < nbrs.len() && taken.contains(nbrs[cursor[i]]) {
                cursor[i] += 1;
            }
            if let Some(&v) = nbrs.get(cursor[i]) {
                taken.insert(v);
                plan.push(1, v, plan.core);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let s2_target = rp.s2;
    let s1_all = taken.clone();
    for plan in &mut plans {
        let mut mine = VertexSet::new(n);
        for x in plan.s1.clone() {
            let mut kids = 0;
            for &w in g.neighbors(x) {
                if kids >= rp.half_degree || plan.s2.len() >= s2_target {
                    break;
                }
                if s1_all.contains(w) || w == plan.core || g.has_edge(w, plan.core) || mine.contains(w) {
                    continue;
                }
                mine.insert(w);
                plan.push(2, w, x);
                kids += 1;
            }
        }
    }
    let empty = plans.iter().filter(|p| p.s1.is_empty()).count();
    if empty > 0 && plans.len() - empty < needed(plans.len()) {
        return Err(Error::EmbedFailed {
            partial: Box::new(Certificate::single(cand[0])),
            reason: FailureReason::SetConstruction,
            trace: Vec::new(),
        });
    }
    let cfg = ConnectConfig {
        depth: 2,
        budget: budget(rp.diam, n),
        bad_level: 1,
        bad_threshold: rp.delta_prime,
        avoid_other_b1: false,
    };
    let res = connect_plans(g, &mut plans, &cfg);
    if res.cert.ell() >= needed(plans.len()) {
        Ok(res.cert)
    } else {
        let reason = if res.bad > 0 {
            FailureReason::TooManyBad
        } else {
            FailureReason::Connection
        };
        Err(Error::EmbedFailed {
            partial: Box::new(res.cert),
            reason,
            trace: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::validate;
    use crate::generators::{disjoint_kdd, gq_incidence};

    #[test]
    fn large_delta_leaves_graph_alone() {
        let g = gq_incidence(3).unwrap();
        let (r, rec) = reduce_max_degree(&g, &ParamSet::desk()).unwrap();
        assert!(matches!(r, Reduction::Reduced(ref h) if *h == g));
        assert_eq!(rec.sizes["high"], 0);
        let ps = ParamSet::from_json(r#"{"delta": 100}"#).unwrap();
        assert!(matches!(reduce_max_degree(&g, &ps).unwrap().0, Reduction::Reduced(_)));
    }

    #[test]
    fn small_delta_takes_the_embedding_branch() {
        let g = disjoint_kdd(3, 4);
        let ps = ParamSet::from_json(r#"{"delta": 2}"#).unwrap();
        let (r, rec) = reduce_max_degree(&g, &ps).unwrap();
        assert_eq!(rec.outcome, "embedded");
        let Reduction::Embedded(cert) = r else { unreachable!() };
        assert_eq!(cert.ell(), 2);
        assert!(validate(&g, &cert, None).valid);
    }
}
