//! Core plans (a core with nested neighbourhood layers) and the pairwise connection routine
//! shared by the reduction and dense embedders.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::certify::Certificate;
use crate::graph::{walk_to_path, Graph, Vertex, VertexSet};
use crate::ops::shortest_path_between_sets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanStatus {
    Active,
    Bad,
    Discarded,
}

/// A core vertex with layers `S1 ⊆ N(core)`, `S2`, `S3` grown as a tree: every layer vertex
/// remembers the parent it was reached from.
#[derive(Clone, Debug, Serialize)]
pub struct CorePlan {
    pub core: Vertex,
    pub s1: Vec<Vertex>,
    pub s2: Vec<Vertex>,
    pub s3: Vec<Vertex>,
    pub block: usize,
    pub status: PlanStatus,
    #[serde(skip)]
    parent: BTreeMap<Vertex, Vertex>,
}

impl CorePlan {
    pub fn new(core: Vertex, block: usize) -> Self {
        CorePlan {
            core,
            s1: Vec::new(),
            s2: Vec::new(),
            s3: Vec::new(),
            block,
            status: PlanStatus::Active,
            parent: BTreeMap::new(),
        }
    }

    /// Adds `v` to layer `level` (1, 2 or 3) as a child of `parent`.
    pub fn push(&mut self, level: usize, v: Vertex, parent: Vertex) {
        self.layer_mut(level).push(v);
        self.parent.insert(v, parent);
    }

    pub fn layer(&self, level: usize) -> &[Vertex] {
        match level {
            1 => &self.s1,
            2 => &self.s2,
            3 => &self.s3,
            _ => &[],
        }
    }

    fn layer_mut(&mut self, level: usize) -> &mut Vec<Vertex> {
        match level {
            1 => &mut self.s1,
            2 => &mut self.s2,
            3 => &mut self.s3,
            _ => panic!("layer {level} out of range"),
        }
    }

    /// Keeps only the layer vertices accepted by `keep`, in order, up to `limit`.
    pub fn trim(&mut self, level: usize, limit: usize, mut keep: impl FnMut(Vertex) -> bool) {
        let old = std::mem::take(self.layer_mut(level));
        let (kept, dropped): (Vec<Vertex>, Vec<Vertex>) = {
            let mut kept = Vec::new();
            let mut dropped = Vec::new();
            for v in old {
                if kept.len() < limit && keep(v) {
                    kept.push(v);
                } else {
                    dropped.push(v);
                }
            }
            (kept, dropped)
        };
        for v in dropped {
            self.parent.remove(&v);
        }
        *self.layer_mut(level) = kept;
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.get(&v).copied()
    }

    /// `B_k = {core} ∪ S1 ∪ … ∪ S_k`.
    pub fn ball(&self, k: usize) -> Vec<Vertex> {
        let mut out = vec![self.core];
        for level in 1..=k {
            out.extend_from_slice(self.layer(level));
        }
        out
    }

    /// Tree path from the core down to `v`.
    pub fn tree_path(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = vec![v];
        let mut cur = v;
        while cur != self.core {
            cur = self.parent[&cur];
            out.push(cur);
        }
        out.reverse();
        out
    }

    pub fn is_active(&self) -> bool {
        self.status == PlanStatus::Active
    }

    /// Vertices of `B_depth` whose whole tree path below the core avoids `blocked`.
    fn live(&self, depth: usize, blocked: &VertexSet) -> VertexSet {
        let mut live = VertexSet::new(blocked.universe());
        live.insert(self.core);
        for level in 1..=depth {
            for &v in self.layer(level) {
                if !blocked.contains(v) && live.contains(self.parent[&v]) {
                    live.insert(v);
                }
            }
        }
        live
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConnectConfig {
    /// Deepest layer used as a connection terminal.
    pub depth: usize,
    /// Maximum number of edges in the free part of a connection.
    pub budget: usize,
    /// The layer whose consumption marks a core bad.
    pub bad_level: usize,
    pub bad_threshold: f64,
    /// Keep connections away from every other active core's `B1`.
    pub avoid_other_b1: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ConnectResult {
    /// Certificate on the surviving cores, in the ids of the host passed in.
    pub cert: Certificate,
    pub connected: usize,
    pub failed_pairs: Vec<(Vertex, Vertex)>,
    pub bad: usize,
    /// Used vertices, paths of discarded cores included.
    pub used: usize,
}

/// Joins every pair of active plans in lexicographic order. A pair that cannot be joined
/// discards its later core; a core whose `bad_level` layer loses more than `bad_threshold`
/// vertices to earlier paths goes bad and is discarded.
pub fn connect_plans(g: &Graph, plans: &mut [CorePlan], cfg: &ConnectConfig) -> ConnectResult {
    let n = g.n();
    let cores = VertexSet::from_iter(n, plans.iter().map(|p| p.core));
    let mut used = VertexSet::new(n);
    let mut paths: Vec<(usize, usize, Vec<Vertex>)> = Vec::new();
    let mut out = ConnectResult::default();
    for i in 0..plans.len() {
        for j in i + 1..plans.len() {
            if !plans[i].is_active() || !plans[j].is_active() {
                continue;
            }
            let mut avoid = used.union(&cores);
            if cfg.avoid_other_b1 {
                for (p, plan) in plans.iter().enumerate() {
                    if p != i && p != j && plan.is_active() {
                        for v in plan.ball(1) {
                            avoid.insert(v);
                        }
                    }
                }
            }
            let terminals = |k: usize| {
                let mut blocked = avoid.clone();
                blocked.remove(plans[k].core);
                plans[k].live(cfg.depth, &blocked)
            };
            let (from, to) = (terminals(i), terminals(j));
            let found = shortest_path_between_sets(g, &from, &to, &avoid, cfg.budget);
            let Some(mid) = found else {
                out.failed_pairs.push((plans[i].core, plans[j].core));
                plans[j].status = PlanStatus::Discarded;
                continue;
            };
            let (x, y) = (mid.start().unwrap(), mid.end().unwrap());
            let mut walk = plans[i].tree_path(x);
            walk.extend_from_slice(&mid.0[1..]);
            let tail = plans[j].tree_path(y);
            walk.extend(tail.iter().rev().skip(1));
            let seq = walk_to_path(&walk);
            for &v in &seq[1..seq.len() - 1] {
                used.insert(v);
            }
            paths.push((i, j, seq));
            out.connected += 1;
            for plan in plans.iter_mut().filter(|p| p.is_active()) {
                let consumed = plan.layer(cfg.bad_level).iter().filter(|&&v| used.contains(v)).count();
                if consumed as f64 > cfg.bad_threshold {
                    plan.status = PlanStatus::Bad;
                    out.bad += 1;
                }
            }
            for plan in plans.iter_mut().filter(|p| p.status == PlanStatus::Bad) {
                plan.status = PlanStatus::Discarded;
            }
        }
    }
    let survivors: Vec<Vertex> = plans.iter().filter(|p| p.is_active()).map(|p| p.core).collect();
    let seqs: Vec<Vec<Vertex>> = paths
        .into_iter()
        .filter(|(i, j, _)| plans[*i].is_active() && plans[*j].is_active())
        .map(|(_, _, s)| s)
        .collect();
    out.cert = if seqs.is_empty() && survivors.len() == 1 {
        Certificate::single(survivors[0])
    } else {
        Certificate::best_clique(&survivors, &seqs)
    };
    out.used = used.len();
    out
}

/// Surviving cores an embedder needs out of `ell` planned: half, and never fewer than two.
pub fn needed(ell: usize) -> usize {
    ell.div_ceil(2).max(ell.min(2))
}

/// `⌈x⌉` clamped to `0..=n`, for distance budgets that may be astronomically large.
pub fn budget(x: f64, n: usize) -> usize {
    if x.is_nan() || x <= 0.0 {
        0
    } else if x >= n as f64 {
        n
    } else {
        x.ceil() as usize
    }
}
