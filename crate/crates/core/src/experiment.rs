//! Seeded sweeps over graph families, one row per (instance, seed).

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{validate, Certificate};
use crate::engine::{find_subdivision, Mode};
use crate::error::{Error, Result};
use crate::generators::{disjoint_kdd, gq_incidence, polarity_graph, projective_incidence, random_bipartite};
use crate::graph::Graph;
use crate::params::ParamSet;

pub const FAMILIES: [&str; 5] = ["polarity", "gq", "projective", "kdd", "random"];

/// Copies of `K_{d,d}` in a `kdd` instance.
pub const KDD_COPIES: usize = 3;
/// Side size of a `random` instance; the edge probability is `d / RANDOM_SIDE`.
pub const RANDOM_SIDE: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub q_or_d: u32,
    pub n: usize,
    /// Exact average degree `2m/n` in lowest terms.
    pub d: String,
    pub mode: String,
    pub ell: usize,
    pub ell_over_sqrt_n: f64,
    pub ell_over_d: f64,
    /// Wall-clock milliseconds, or 0 when timing is off.
    pub runtime_ms: u64,
    pub seed: u64,
    pub valid: bool,
    /// Certificate (or best partial) behind `ell`, in the ids of the instance.
    #[serde(skip)]
    pub certificate: Option<Certificate>,
}

/// Instance `family(q_or_d)`; `random` draws its edges from `seed`.
pub fn instance(family: &str, q_or_d: u32, seed: u64) -> Result<Graph> {
    match family {
        "polarity" => polarity_graph(q_or_d),
        "gq" => gq_incidence(q_or_d),
        "projective" => projective_incidence(q_or_d),
        "kdd" => Ok(disjoint_kdd(q_or_d as usize, KDD_COPIES)),
        "random" => random_bipartite(RANDOM_SIDE, RANDOM_SIDE, q_or_d as f64 / RANDOM_SIDE as f64, seed),
        other => Err(Error::Params(format!(
            "unknown family {other:?}; expected one of {FAMILIES:?}"
        ))),
    }
}

/// Runs every `(value, seed)` pair, concurrently, and returns rows sorted by `(family, q_or_d,
/// seed)`. Failures become rows carrying the best partial certificate; only a bad family name or
/// a bad instance parameter aborts the sweep.
pub fn run_experiment(
    family: &str,
    range: &[u32],
    mode: Mode,
    seeds: &[u64],
    ps: &ParamSet,
    timing: bool,
) -> Result<Vec<BenchRow>> {
    let mut jobs = Vec::new();
    for &q in range {
        for &seed in seeds {
            jobs.push((q, seed, instance(family, q, seed)?));
        }
    }
    let mut rows: Vec<BenchRow> = jobs
        .into_par_iter()
        .map(|(q, seed, g)| row(family, q, &g, mode, seed, ps, timing))
        .collect();
    rows.sort_by(|a, b| (&a.family, a.q_or_d, a.seed).cmp(&(&b.family, b.q_or_d, b.seed)));
    Ok(rows)
}

fn row(family: &str, q: u32, g: &Graph, mode: Mode, seed: u64, ps: &ParamSet, timing: bool) -> BenchRow {
    let start = Instant::now();
    let cert = match find_subdivision(g, mode, ps, seed) {
        Ok(out) => out.certificate,
        Err(e) => e.partial().cloned(),
    };
    let runtime_ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    let exact = (mode == Mode::Drc).then_some(3);
    let (ell, valid) = match &cert {
        Some(c) => (c.ell(), validate(g, c, exact).valid),
        None => (0, false),
    };
    let d = g.avg_degree();
    let df = g.avg_degree_f64();
    BenchRow {
        family: family.to_string(),
        q_or_d: q,
        n: g.n(),
        d: d.to_string(),
        mode: mode.to_string(),
        ell,
        ell_over_sqrt_n: ell as f64 / (g.n() as f64).sqrt(),
        ell_over_d: if df > 0.0 { ell as f64 / df } else { 0.0 },
        runtime_ms,
        seed,
        valid,
        certificate: cert,
    }
}

/// CSV with a header row, columns in field order.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "family",
            "q_or_d",
            "n",
            "d",
            "mode",
            "ell",
            "ell_over_sqrt_n",
            "ell_over_d",
            "runtime_ms",
            "seed",
            "valid",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares slope of `y` against `x`; 0 for fewer than two distinct `x`.
pub fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx
}
