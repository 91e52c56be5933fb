//! End-to-end search: bipartite half, C4 removal, expander extraction, degree reduction, then
//! the dense or sparse embedder, or dependent random choice.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::certify::{validate, Certificate};
use crate::cycles::has_short_cycle;
use crate::densest::DensestMethod;
use crate::drc::{run_drc, DrcOptions};
use crate::engine::connect::needed;
use crate::engine::dense::{check_stage1, dense_connect, dense_stage1, dense_stage2};
use crate::engine::generic::generic_tk;
use crate::engine::reduce::{reduce_max_degree, Reduction};
use crate::engine::sparse::{classify, hat_subdivision, sparse_sparsify, sparse_split, Sparsified, Split};
use crate::error::{Error, FailureReason, Result};
use crate::expander::{diam_bound, extract_expander};
use crate::generators::gyori_extract;
use crate::graph::Graph;
use crate::ops::{bipartite_half, peel_to_half_average};
use crate::params::ParamSet;
use crate::report::{RunReport, StageRecord};

/// Exact densest subgraph up to this many vertices, peeling above.
const EXACT_DENSEST_LIMIT: usize = 5000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Auto,
    Dense,
    Sparse,
    Drc,
    ReduceOnly,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::Dense => "dense",
            Mode::Sparse => "sparse",
            Mode::Drc => "drc",
            Mode::ReduceOnly => "reduce-only",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "auto" => Ok(Mode::Auto),
            "dense" => Ok(Mode::Dense),
            "sparse" => Ok(Mode::Sparse),
            "drc" => Ok(Mode::Drc),
            "reduce-only" => Ok(Mode::ReduceOnly),
            other => Err(Error::Params(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    /// In the ids of the input graph; absent only for `reduce-only`.
    pub certificate: Option<Certificate>,
    pub report: RunReport,
    /// The bounded-degree graph left by `reduce-only`.
    pub reduced: Option<Graph>,
}

enum Step {
    Found(Certificate),
    Reduced(Graph),
}

/// Runs the pipeline for `mode` on `g`.
///
/// Every certificate, partial ones included, is re-validated against `g` before it leaves; a
/// failing one is reported as [`Error::Invariant`]. When the chosen embedder gives up, a greedy
/// search on the bipartite half runs as a fallback and the larger of the two certificates comes
/// back inside [`Error::EmbedFailed`] along with the stage trace.
pub fn find_subdivision(g: &Graph, mode: Mode, ps: &ParamSet, seed: u64) -> Result<Outcome> {
    let root = g.clone().into_root();
    if root.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut report = RunReport {
        mode: mode.to_string(),
        profile: ps.profile.to_string(),
        seed,
        overrides: ps.raw_overrides.clone(),
        ..Default::default()
    };
    let exact = (mode == Mode::Drc).then_some(3);
    let failure = match run(&root, mode, ps, seed, &mut report) {
        Ok(Step::Found(cert)) => {
            check(&root, &cert, exact)?;
            report.ell = cert.ell();
            report.valid = true;
            report.outcome = "found".to_string();
            return Ok(Outcome {
                certificate: Some(cert),
                report,
                reduced: None,
            });
        }
        Ok(Step::Reduced(h)) => {
            report.valid = true;
            report.outcome = "reduced".to_string();
            return Ok(Outcome {
                certificate: None,
                report,
                reduced: Some(h),
            });
        }
        Err(e) if is_embed_failure(&e) => e,
        Err(e) => return Err(e),
    };
    let (mut best, reason) = match &failure {
        Error::EmbedFailed { partial, reason, .. } => (Some((**partial).clone()), *reason),
        Error::NoConnector { partial, .. } => (Some((**partial).clone()), FailureReason::Connection),
        Error::StageFailed { .. } | Error::NoHats | Error::SparsifyFailed { .. } => {
            (None, FailureReason::SetConstruction)
        }
        _ => (None, FailureReason::Fallback),
    };
    let mut rec = StageRecord::new("failure", "best partial certificate").outcome(failure.to_string());
    if let Some(p) = &best {
        check(&root, p, exact)?;
        rec = rec.size("partial_ell", p.ell());
    }
    if mode != Mode::Drc {
        let half = bipartite_half(&root, seed);
        let fallback = generic_tk(&half, None)?.lift(&half);
        check(&root, &fallback, None)?;
        rec = rec.size("fallback_ell", fallback.ell());
        rec.warn("greedy fallback carries no order guarantee");
        if best.as_ref().is_none_or(|b| fallback.ell() > b.ell()) {
            best = Some(fallback);
        }
    }
    report.push(rec);
    let partial = best.unwrap_or_else(|| Certificate::single(0));
    report.ell = partial.ell();
    report.valid = true;
    report.outcome = "embed-failed".to_string();
    Err(Error::EmbedFailed {
        partial: Box::new(partial),
        reason,
        trace: report.stages,
    })
}

fn is_embed_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::EmbedFailed { .. }
            | Error::NoConnector { .. }
            | Error::StageFailed { .. }
            | Error::NoHats
            | Error::SparsifyFailed { .. }
            | Error::SelectFailed { .. }
            | Error::BalanceFailed(_)
    )
}

fn check(root: &Graph, cert: &Certificate, exact: Option<usize>) -> Result<()> {
    let rep = validate(root, cert, exact);
    if rep.valid {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "emitted certificate fails validation: {:?}",
            rep.violations
        )))
    }
}

/// Re-expresses the partial certificate of an embedding failure in root ids.
fn lift_err(e: Error, g: &Graph) -> Error {
    match e {
        Error::EmbedFailed { partial, reason, trace } => Error::EmbedFailed {
            partial: Box::new(partial.lift(g)),
            reason,
            trace,
        },
        Error::NoConnector { pair, tally, partial } => Error::NoConnector {
            pair,
            tally,
            partial: Box::new(partial.lift(g)),
        },
        other => other,
    }
}

fn run(root: &Graph, mode: Mode, ps: &ParamSet, seed: u64, report: &mut RunReport) -> Result<Step> {
    if mode == Mode::Drc {
        let opts = DrcOptions {
            ell: ps.overrides.ell,
            c: None,
        };
        let out = run_drc(root, ps, &opts, seed)?;
        for rec in out.records {
            report.push(rec);
        }
        return Ok(Step::Found(out.cert.lift(&out.balanced)));
    }

    let half = bipartite_half(root, seed);
    report.push(
        StageRecord::new("bipartite-half", "spanning bipartite subgraph with half the edges")
            .size("n", half.n())
            .size("edges", half.m())
            .size("input_edges", root.m()),
    );
    let mut host = half;
    if has_short_cycle(&host, &[4])?.is_some() {
        let mut rec = StageRecord::new("c4-removal", "C4-free subgraph of a C6-free bipartite graph");
        match gyori_extract(&host) {
            Ok(out) => {
                rec = rec
                    .param(
                        "retention",
                        *out.retention.numer() as f64 / *out.retention.denom() as f64,
                    )
                    .size("deleted", out.deleted.len())
                    .discards(out.deleted.len());
                host = out.graph;
            }
            Err(Error::NotC6Free(c6)) => {
                rec.warn(format!("host has a 6-cycle {c6:?}; continuing with 4-cycles present"));
                rec = rec.outcome("skipped");
            }
            Err(e) => return Err(e),
        }
        report.push(rec);
    }

    let method = if host.n() <= EXACT_DENSEST_LIMIT {
        DensestMethod::Exact
    } else {
        DensestMethod::Peeling
    };
    let ext = extract_expander(&host, ps.eps1, ps.eps2, ps.effort, seed, method)?;
    report.push(expander_record(&ext));
    let host = ext.graph;
    let (red, rec) = reduce_max_degree(&host, ps)?;
    report.push(rec);
    let host = match red {
        Reduction::Embedded(cert) => return Ok(Step::Found(cert.lift(&host))),
        Reduction::Reduced(h) if mode == Mode::ReduceOnly => return Ok(Step::Reduced(h)),
        Reduction::Reduced(h) => h,
    };
    if host.m() == 0 {
        return Err(Error::EmbedFailed {
            partial: Box::new(Certificate::single(host.origin(0))),
            reason: FailureReason::SetConstruction,
            trace: Vec::new(),
        });
    }

    let d = host.avg_degree_f64();
    let threshold = ps.dense_threshold(host.n());
    let dense = mode == Mode::Dense || (mode == Mode::Auto && d >= threshold);
    let mut rec = StageRecord::new("branch", "dense case above log^14 n, sparse case below")
        .param("d", d)
        .param("threshold", threshold)
        .size("n", host.n())
        .outcome(if dense { "dense" } else { "sparse" });
    if ps.overrides.diam.is_none() && diam_bound(host.n(), ps.eps1, ps.eps2 * d * d).is_err() {
        rec.warn("distance budget undefined at this size; paths may use up to n edges");
    }
    report.push(rec);
    if dense {
        run_dense(&host, ps, report)
    } else {
        run_sparse(&host, ps, seed, report)
    }
}

fn expander_record(ext: &crate::expander::Extraction) -> StageRecord {
    StageRecord::new("expander", "robust expander subgraph with half the average degree")
        .param("d", ext.d)
        .param("t", ext.params.t)
        .size("n", ext.n)
        .size("min_degree", ext.delta)
        .size("rounds", ext.rounds)
        .outcome(if ext.certified { "certified" } else { "uncertified" })
}

/// Stage 1 with `ℓ` lowered one at a time while a constraint cannot be met, then stage 2 and the
/// connection step. The certificate is in root ids.
fn run_dense(host: &Graph, ps: &ParamSet, report: &mut RunReport) -> Result<Step> {
    let h = peel_to_half_average(host);
    if h.m() == 0 {
        return Err(Error::StageFailed {
            core: 0,
            constraint: "nonempty host after peeling".to_string(),
        });
    }
    let mut dp = ps.dense(h.n(), h.avg_degree_f64());
    let top = dp.ell;
    let mut last = None;
    let mut plans = None;
    let mut rec = StageRecord::new("dense-stage1", "cores with disjoint first and second layers");
    for ell in (top.min(2)..=top).rev() {
        dp.ell = ell;
        match dense_stage1(&h, &dp) {
            Ok(p) => {
                plans = Some(p);
                break;
            }
            Err(e @ Error::StageFailed { .. }) => {
                rec.warn(format!("ell = {ell}: {e}"));
                last = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    let Some(mut plans) = plans else {
        report.push(rec.outcome("failed"));
        return Err(last.unwrap_or(Error::StageFailed {
            core: 0,
            constraint: "ell at least 1".to_string(),
        }));
    };
    let violations = check_stage1(&h, &plans, &dp);
    if !violations.is_empty() {
        return Err(Error::Invariant(format!("stage 1 constraints: {violations:?}")));
    }
    report.push(
        rec.param("ell_planned", top as f64)
            .size("ell", dp.ell)
            .size("s1", dp.s1)
            .size("s2", dp.s2)
            .size("child_cap", dp.child_cap)
            .discards(top - dp.ell),
    );
    let evidence = dense_stage2(&h, &mut plans, &dp).inspect_err(|_| {
        report.push(StageRecord::new("dense-stage2", "third layers from fresh neighbours").outcome("failed"));
    })?;
    let mut rec = StageRecord::new("dense-stage2", "third layers from fresh neighbours").size("s3", dp.s3);
    for e in evidence {
        rec.warn(e);
    }
    report.push(rec);
    let res = dense_connect(&h, &mut plans, &dp);
    let mut rec = StageRecord::new("dense-connect", "pairwise paths between third balls")
        .param("delta_double_prime", dp.delta_double_prime)
        .param("diam", dp.diam)
        .size("needed", needed(dp.ell));
    match res {
        Ok((cert, cr)) => {
            rec = rec
                .size("connected", cr.connected)
                .size("failed_pairs", cr.failed_pairs.len())
                .size("bad", cr.bad)
                .size("ell", cert.ell())
                .discards(cr.failed_pairs.len() + cr.bad);
            report.push(rec);
            Ok(Step::Found(cert.lift(&h)))
        }
        Err(e) => {
            report.push(rec.outcome("failed"));
            Err(lift_err(e, &h))
        }
    }
}

/// Degree split, then either the expander route on `U″` or sparsening followed by hats.
fn run_sparse(host: &Graph, ps: &ParamSet, seed: u64, report: &mut RunReport) -> Result<Step> {
    let d = host.avg_degree_f64();
    let sp = ps.sparse(d);
    let (split, rec) = sparse_split(host, &sp, d)?;
    report.push(rec);
    let (gprime, aprime) = match split {
        Split::Hat(hat) => {
            report.push(hat.record());
            return Ok(Step::Found(hat.cert.lift(host)));
        }
        Split::Reduced { gprime, aprime } => (gprime, aprime),
    };
    let cls = classify(&gprime, &aprime, &sp);
    let heavy_u2 = !cls.u2.is_empty() && 5 * cls.u2.len() >= cls.u.len();
    report.push(
        StageRecord::new("classify", "high-degree set W and the split of U by edges into W")
            .param("w_degree", sp.w_degree)
            .size("w", cls.w.len())
            .size("u", cls.u.len())
            .size("u_prime", cls.u1.len())
            .size("u_double_prime", cls.u2.len())
            .outcome(if heavy_u2 { "expander on G′[U]" } else { "sparsify" }),
    );
    if heavy_u2 {
        let gu = gprime.induced(&cls.u);
        if gu.m() == 0 {
            return Err(Error::EmbedFailed {
                partial: Box::new(Certificate::single(gu.origin(0))),
                reason: FailureReason::SetConstruction,
                trace: Vec::new(),
            });
        }
        let ext = extract_expander(&gu, ps.eps1, ps.eps2, ps.effort, seed, DensestMethod::Exact)?;
        report.push(expander_record(&ext));
        let g1 = ext.graph;
        let floor = (g1.n().max(2) as f64).ln().powf(0.125).exp();
        if g1.avg_degree_f64() >= floor {
            let (red, rec) = reduce_max_degree(&g1, ps)?;
            report.push(rec);
            return match red {
                Reduction::Embedded(cert) => Ok(Step::Found(cert.lift(&g1))),
                Reduction::Reduced(h) => run_dense(&h, ps, report),
            };
        }
        let cert = generic_tk(&g1, None)?;
        let mut rec = StageRecord::new("generic", "greedy subdivision in a graph of small average degree")
            .param("d", g1.avg_degree_f64())
            .param("floor", floor)
            .size("ell", cert.ell());
        rec.warn("average degree below exp((ln n)^(1/8)); greedy search carries no order guarantee");
        report.push(rec);
        return Ok(Step::Found(cert.lift(&g1)));
    }
    let (sp_out, attempts) = match sparse_sparsify(&gprime, &cls, &sp, d, seed) {
        Ok(x) => x,
        Err(e) => {
            let tries = match &e {
                Error::SparsifyFailed { attempts } => attempts.len(),
                _ => 0,
            };
            report.push(
                StageRecord::new("sparsify", "random W₀ with bounded degrees from U₀")
                    .discards(tries)
                    .outcome("failed"),
            );
            return Err(e);
        }
    };
    let mut rec = StageRecord::new("sparsify", "random W₀ with bounded degrees from U₀")
        .param("p", sp.p)
        .size("attempts", attempts.len())
        .discards(attempts.len().saturating_sub(1));
    let hat = match sp_out {
        Sparsified::Hat(hat) => {
            rec = rec.outcome("|W| < n/d²: hats into W");
            hat
        }
        Sparsified::Pair { u0, w0, f } => {
            rec = rec.size("u0", u0.len()).size("w0", w0.len());
            hat_subdivision(&f, &u0, &w0)?
        }
    };
    report.push(rec);
    report.push(hat.record());
    Ok(Step::Found(hat.cert.lift(&gprime)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gq_incidence, polarity_graph, random_bipartite};

    #[test]
    fn modes_round_trip() {
        for m in [Mode::Auto, Mode::Dense, Mode::Sparse, Mode::Drc, Mode::ReduceOnly] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("fast".parse::<Mode>().is_err());
    }

    #[test]
    fn reduce_only_returns_no_certificate() {
        let g = gq_incidence(3).unwrap();
        let out = find_subdivision(&g, Mode::ReduceOnly, &ParamSet::desk(), 0).unwrap();
        assert!(out.certificate.is_none());
        assert!(out.reduced.is_some());
        assert_eq!(out.report.stages.last().unwrap().stage, "reduce-max-degree");
    }

    #[test]
    fn drc_on_polarity_has_length_four_paths() {
        let g = polarity_graph(11).unwrap();
        let out = find_subdivision(&g, Mode::Drc, &ParamSet::desk(), 0).unwrap();
        let cert = out.certificate.unwrap();
        assert!(validate(&g, &cert, Some(3)).valid);
        assert!(cert.ell() >= 3);
    }

    #[test]
    fn dense_on_gq4_with_scaled_overrides() {
        let g = gq_incidence(4).unwrap();
        let ps = ParamSet::from_json(r#"{"ell": 3, "s1": 2, "s2": 4}"#).unwrap();
        let out = find_subdivision(&g, Mode::Dense, &ps, 0).unwrap();
        let cert = out.certificate.unwrap();
        assert!(validate(&g, &cert, None).valid);
        assert!(cert.ell() >= 3);
    }

    #[test]
    fn sparse_random_is_valid_or_carries_a_valid_partial() {
        let g = random_bipartite(1000, 1000, 0.006, 1).unwrap();
        match find_subdivision(&g, Mode::Sparse, &ParamSet::desk(), 0) {
            Ok(out) => assert!(validate(&g, &out.certificate.unwrap(), None).valid),
            Err(Error::EmbedFailed { partial, trace, .. }) => {
                assert!(validate(&g, &partial, None).valid);
                assert!(!trace.is_empty());
            }
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = Graph::empty(4);
        assert!(matches!(
            find_subdivision(&g, Mode::Auto, &ParamSet::desk(), 0),
            Err(Error::EmptyGraph)
        ));
    }
}
