//! Dense-case embedding: grow three neighbourhood layers around each core, then join the cores
//! through the live parts of their third balls.
//!
//! Stage 1 picks cores block by block and grows `S1` and `S2` subject to constraints
//! (i)–(vi):
//!
//! - (i) the `S1` sets are pairwise disjoint and have the target size;
//! - (ii) every `S2` has the target size and lies on the sphere of radius 2;
//! - (iii) an `S1` vertex has few neighbours in `S2`;
//! - (iv) `B2` sets of cores in the same block are disjoint;
//! - (v) no `S2` meets any `S1`;
//! - (vi) no core lies in another core's `B2`.

use num_rational::Ratio;

use crate::certify::Certificate;
use crate::engine::connect::{budget, connect_plans, needed, ConnectConfig, ConnectResult, CorePlan};
use crate::error::{Error, FailureReason, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::ops::peel_set;
use crate::params::DenseParams;

fn stage_failed(core: usize, constraint: &str) -> Error {
    Error::StageFailed {
        core,
        constraint: constraint.to_string(),
    }
}

/// Chooses the cores and their first two layers.
///
/// Each core is the highest-degree vertex (lowest id on ties) of the subgraph left after
/// removing every earlier core, `S1` and `S2′` and peeling below `d/4`.
pub fn dense_stage1(g: &Graph, dp: &DenseParams) -> Result<Vec<CorePlan>> {
    let n = g.n();
    if (g.min_degree() as f64) < dp.min_degree {
        return Err(stage_failed(0, "minimum degree at least d/4"));
    }
    let tau = g.avg_degree() / 4;
    let tau = if tau > Ratio::from_integer(0) {
        tau
    } else {
        Ratio::from_integer(1)
    };
    let mut excluded = VertexSet::new(n);
    let mut s1_all = VertexSet::new(n);
    let mut plans: Vec<CorePlan> = Vec::new();
    for i in 0..dp.ell {
        let keep = peel_set(g, &excluded.complement(), tau);
        let inner = |v: Vertex| g.neighbors(v).iter().filter(|&&w| keep.contains(w)).count();
        let Some(core) = keep.iter().max_by_key(|&v| (inner(v), std::cmp::Reverse(v))) else {
            return Err(stage_failed(i, "(vi) an admissible core outside earlier balls"));
        };
        let mut plan = CorePlan::new(core, i / dp.b.max(1));
        for &x in g.neighbors(core) {
            if plan.s1.len() < dp.s1 && keep.contains(x) {
                plan.push(1, x, core);
            }
        }
        if plan.s1.len() < dp.s1 {
            return Err(stage_failed(i, "(i) |S1| reaches its target"));
        }
        let mut mine = VertexSet::from_iter(n, plan.ball(1));
        let s1 = VertexSet::from_iter(n, plan.s1.iter().copied());
        // (iii): S2 neighbours of each S1 vertex, counted as S2 grows.
        let mut load = vec![0usize; n];
        for x in plan.s1.clone() {
            let mut kids = 0;
            for &w in g.neighbors(x) {
                if kids >= dp.child_cap {
                    break;
                }
                if !keep.contains(w) || mine.contains(w) || g.has_edge(w, core) {
                    continue;
                }
                let hits = || g.neighbors(w).iter().filter(|&&y| s1.contains(y));
                if hits().any(|&y| (load[y] + 1) as f64 > dp.s1_child_bound) {
                    continue;
                }
                for &y in hits() {
                    load[y] += 1;
                }
                mine.insert(w);
                plan.push(2, w, x);
                kids += 1;
            }
        }
        if plan.s2.len() < dp.s2 {
            return Err(stage_failed(i, "(ii) |S2′| reaches the S2 target"));
        }
        excluded.union_with(&mine);
        s1_all.union_with(&VertexSet::from_iter(n, plan.s1.iter().copied()));
        plans.push(plan);
    }
    for (i, plan) in plans.iter_mut().enumerate() {
        plan.trim(2, dp.s2, |v| !s1_all.contains(v));
        if plan.s2.len() < dp.s2 {
            return Err(stage_failed(i, "(v) S2 avoids every S1"));
        }
    }
    Ok(plans)
}

/// Re-verifies constraints (i)–(vi) as set predicates; returns one message per violation.
pub fn check_stage1(g: &Graph, plans: &[CorePlan], dp: &DenseParams) -> Vec<String> {
    let n = g.n();
    let mut out = Vec::new();
    let mut seen = VertexSet::new(n);
    for p in plans {
        if p.s1.len() != dp.s1 {
            out.push(format!("(i) core {}: |S1| = {} != {}", p.core, p.s1.len(), dp.s1));
        }
        for &x in &p.s1 {
            if !g.has_edge(p.core, x) {
                out.push(format!("(i) core {}: {x} is not a neighbour", p.core));
            }
            if !seen.insert(x) {
                out.push(format!("(i) {x} lies in two S1 sets"));
            }
        }
    }
    let s1_all = seen;
    for p in plans {
        if p.s2.len() != dp.s2 {
            out.push(format!("(ii) core {}: |S2| = {} != {}", p.core, p.s2.len(), dp.s2));
        }
        let s2 = VertexSet::from_iter(n, p.s2.iter().copied());
        for &y in &p.s2 {
            let on_sphere = y != p.core && !g.has_edge(y, p.core) && p.s1.iter().any(|&x| g.has_edge(x, y));
            if !on_sphere {
                out.push(format!("(ii) core {}: {y} is not at distance 2", p.core));
            }
            if s1_all.contains(y) {
                out.push(format!("(v) core {}: {y} is in S2 and in some S1", p.core));
            }
        }
        for &x in &p.s1 {
            let k = g.neighbors(x).iter().filter(|&&w| s2.contains(w)).count();
            if k as f64 > dp.s1_child_bound {
                out.push(format!("(iii) core {}: {x} has {k} neighbours in S2", p.core));
            }
        }
    }
    for (i, p) in plans.iter().enumerate() {
        let bi = VertexSet::from_iter(n, p.ball(2));
        for (j, q) in plans.iter().enumerate() {
            if i == j {
                continue;
            }
            if bi.contains(q.core) {
                out.push(format!("(vi) core {} lies in B2 of core {}", q.core, p.core));
            }
            if i < j && p.block == q.block {
                let bj = VertexSet::from_iter(n, q.ball(2));
                if !bi.is_disjoint(&bj) {
                    out.push(format!("(iv) B2 of cores {} and {} meet", p.core, q.core));
                }
            }
        }
    }
    out
}

/// Grows `S3` from fresh neighbours of each `S2` vertex, avoiding every `B1`.
///
/// In a C6-free graph distinct `S2` vertices never share such a neighbour; each collision is
/// returned as a message naming the vertex.
pub fn dense_stage2(g: &Graph, plans: &mut [CorePlan], dp: &DenseParams) -> Result<Vec<String>> {
    let n = g.n();
    let mut b1_all = VertexSet::new(n);
    for p in plans.iter() {
        for v in p.ball(1) {
            b1_all.insert(v);
        }
    }
    let mut evidence = Vec::new();
    for (i, plan) in plans.iter_mut().enumerate() {
        let own = VertexSet::from_iter(n, plan.ball(2));
        let mut taken = VertexSet::new(n);
        for y in plan.s2.clone() {
            let mut kids = 0;
            for &w in g.neighbors(y) {
                if kids >= dp.child_cap || plan.s3.len() >= dp.s3 {
                    break;
                }
                if own.contains(w) || b1_all.contains(w) || g.has_edge(w, plan.core) {
                    continue;
                }
                if !taken.insert(w) {
                    evidence.push(format!(
                        "core {}: {w} is adjacent to two second-layer vertices (6-cycle through the core)",
                        plan.core
                    ));
                    continue;
                }
                plan.push(3, w, y);
                kids += 1;
            }
        }
        if !plan.s2.is_empty() && plan.s3.len() < dp.s3 {
            return Err(stage_failed(i, "|S3| reaches its target"));
        }
    }
    Ok(evidence)
}

/// Joins the cores pairwise between live `B3` vertices, away from every other core's `B1`.
pub fn dense_connect(g: &Graph, plans: &mut [CorePlan], dp: &DenseParams) -> Result<(Certificate, ConnectResult)> {
    let cfg = ConnectConfig {
        depth: 3,
        budget: budget(dp.diam, g.n()),
        bad_level: 2,
        bad_threshold: dp.delta_double_prime,
        avoid_other_b1: true,
    };
    let res = connect_plans(g, plans, &cfg);
    if res.cert.ell() >= needed(plans.len()) {
        Ok((res.cert.clone(), res))
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
    use crate::generators::gq_incidence;
    use crate::params::ParamSet;

    fn dp(g: &Graph, json: &str) -> DenseParams {
        ParamSet::from_json(json).unwrap().dense(g.n(), g.avg_degree_f64())
    }

    #[test]
    fn stage1_on_gq4_meets_every_constraint() {
        let g = gq_incidence(4).unwrap();
        let dp = dp(&g, r#"{"ell": 3, "s1": 2, "s2": 4}"#);
        let plans = dense_stage1(&g, &dp).unwrap();
        assert_eq!(plans.len(), 3);
        assert_eq!(check_stage1(&g, &plans, &dp), Vec::<String>::new());
    }

    #[test]
    fn single_core_is_trivially_fine() {
        let g = gq_incidence(3).unwrap();
        let dp = dp(&g, r#"{"ell": 1}"#);
        let plans = dense_stage1(&g, &dp).unwrap();
        assert_eq!(plans.len(), 1);
        assert!(check_stage1(&g, &plans, &dp).is_empty());
    }

    #[test]
    fn stage2_hits_its_target_with_disjoint_children() {
        let g = gq_incidence(3).unwrap();
        let dp = dp(&g, r#"{"ell": 2, "s1": 2, "s2": 2, "s3": 2, "child_cap": 1}"#);
        let mut plans = dense_stage1(&g, &dp).unwrap();
        let evidence = dense_stage2(&g, &mut plans, &dp).unwrap();
        assert!(evidence.is_empty());
        for p in &plans {
            assert_eq!(p.s3.len(), 2);
            let parents: Vec<Vertex> = p.s3.iter().map(|&w| p.parent(w).unwrap()).collect();
            assert!(parents.windows(2).all(|w| w[0] != w[1]));
        }
        let (cert, _) = dense_connect(&g, &mut plans, &dp).unwrap();
        assert_eq!(cert.ell(), 2);
        assert!(validate(&g, &cert, None).valid);
    }

    #[test]
    fn zero_budget_needs_touching_balls() {
        let g = gq_incidence(3).unwrap();
        let dp = dp(&g, r#"{"ell": 2, "s1": 2, "s2": 1, "s3": 1, "diam": 0}"#);
        let mut plans = dense_stage1(&g, &dp).unwrap();
        dense_stage2(&g, &mut plans, &dp).unwrap();
        let b3: Vec<VertexSet> = plans.iter().map(|p| VertexSet::from_iter(g.n(), p.ball(3))).collect();
        let res = dense_connect(&g, &mut plans, &dp);
        assert_eq!(res.is_ok(), !b3[0].is_disjoint(&b3[1]));
    }

    #[test]
    fn empty_s2_gives_empty_s3() {
        let g = gq_incidence(3).unwrap();
        let dp = dp(&g, r#"{"ell": 1}"#);
        let mut plans = vec![CorePlan::new(0, 0)];
        dense_stage2(&g, &mut plans, &dp).unwrap();
        assert!(plans[0].s3.is_empty());
    }
}
