//! Acceptance checks, one line per criterion. Runs without the libtest harness so every line is
//! printed; the process fails if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tkcert::certify::{brute_force_max_tk, jung_bound_check};
use tkcert::densest::DensestMethod;
use tkcert::drc::{
    balance_bipartite, density_c, desk_params, drc_feasible, drc_select, n2_samples, paper_params, SecondNeighborhoods,
};
use tkcert::engine::sparse::hat_subdivision;
use tkcert::engine::{find_subdivision, generic_tk, Mode};
use tkcert::expander::{certify_exhaustive, epsilon, extract_expander, ExpanderParams};
use tkcert::experiment::ls_slope;
use tkcert::generators::{disjoint_kdd, gq_incidence, polarity_graph, projective_incidence, random_bipartite};
use tkcert::params::ParamSet;
use tkcert::small::{complete, complete_bipartite, cycle};
use tkcert::{validate, Certificate, Error, Graph, Side};

/// `a/b ≥ c/d` for positive denominators, without floating point.
fn ratio_ge(a: u64, b: u64, c: u64, d: u64) -> bool {
    (a as u128) * (d as u128) >= (c as u128) * (b as u128)
}

type Verdict = (bool, String);
type Check = fn() -> Verdict;

const MODES: [Mode; 4] = [Mode::Auto, Mode::Dense, Mode::Sparse, Mode::Drc];

/// The certificate a run hands back, partial or not.
fn emitted(g: &Graph, mode: Mode, ps: &ParamSet, seed: u64) -> Result<Option<Certificate>, String> {
    match find_subdivision(g, mode, ps, seed) {
        Ok(out) => Ok(out.certificate),
        Err(Error::Invariant(msg)) => Err(msg),
        Err(e) => Ok(e.partial().cloned()),
    }
}

fn exact_for(mode: Mode) -> Option<usize> {
    (mode == Mode::Drc).then_some(3)
}

fn soundness() -> Verdict {
    let mut hosts: Vec<(String, Graph)> = Vec::new();
    for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23] {
        hosts.push((format!("polarity({q})"), polarity_graph(q).unwrap()));
    }
    for q in [2, 3, 4] {
        hosts.push((format!("gq({q})"), gq_incidence(q).unwrap()));
        hosts.push((format!("projective({q})"), projective_incidence(q).unwrap()));
    }
    for d in 2..=6 {
        hosts.push((format!("kdd({d})"), disjoint_kdd(d, 3)));
    }
    let mut i = 0u64;
    while hosts.len() < 50 {
        let side = [20, 40, 60, 100][i as usize % 4];
        let p = 0.03 + 0.02 * (i % 7) as f64;
        hosts.push((
            format!("random({side},{p:.2})"),
            random_bipartite(side, side, p, 1000 + i).unwrap(),
        ));
        i += 1;
    }
    let ps = ParamSet::desk();
    let start = Instant::now();
    let (mut runs, mut certs, mut bad) = (0, 0, Vec::new());
    for (name, g) in &hosts {
        for seed in 0..4u64 {
            let mode = MODES[seed as usize];
            runs += 1;
            match emitted(g, mode, &ps, seed) {
                Ok(Some(c)) => {
                    certs += 1;
                    let rep = validate(g, &c, exact_for(mode));
                    if !rep.valid {
                        bad.push(format!("{name} {mode} seed {seed}: {:?}", rep.violations));
                    }
                }
                Ok(None) => {}
                Err(msg) => bad.push(format!("{name} {mode} seed {seed}: invariant {msg}")),
            }
        }
    }
    let took = start.elapsed();
    let ok = bad.is_empty() && took <= Duration::from_secs(300);
    (
        ok,
        format!(
            "{runs} runs, {certs} certificates, {} violations, {took:.1?} {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn random_small(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn oracle_agreement() -> Verdict {
    let mut hosts: Vec<(String, Graph)> = vec![
        ("K4".into(), complete(4)),
        ("K2,2".into(), complete_bipartite(2, 2)),
        ("K3,3".into(), complete_bipartite(3, 3)),
        ("C6".into(), cycle(6)),
    ];
    for i in 0..100u64 {
        let n = 5 + (i % 5) as usize;
        let p = 0.3 + 0.1 * (i % 5) as f64;
        hosts.push((format!("G({n},{p:.1};{i})"), random_small(n, p, i)));
    }
    let ps = ParamSet::desk();
    let mut problems = Vec::new();
    let mut checked = 0;
    for (name, g) in &hosts {
        if g.m() == 0 {
            continue;
        }
        checked += 1;
        let (best, _) = brute_force_max_tk(g, g.n()).unwrap();
        let exhaustive = generic_tk(g, None).unwrap();
        if exhaustive.ell() != best || !validate(g, &exhaustive, None).valid {
            problems.push(format!("{name}: generic_tk {} vs oracle {best}", exhaustive.ell()));
        }
        for mode in MODES {
            for seed in 0..2 {
                match emitted(g, mode, &ps, seed) {
                    Ok(Some(c)) if c.ell() > best => {
                        problems.push(format!("{name} {mode}: ell {} > oracle {best}", c.ell()))
                    }
                    Err(msg) => problems.push(format!("{name} {mode}: invariant {msg}")),
                    _ => {}
                }
            }
        }
    }
    (
        problems.is_empty(),
        format!(
            "{checked} hosts, {} disagreements {:?}",
            problems.len(),
            problems.first()
        ),
    )
}

fn jung() -> Verdict {
    let expected = [(2, 3, 3), (3, 4, 4), (4, 1, 5)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, lo, hi) in expected {
        let r = jung_bound_check(d).unwrap();
        ok &= r.holds && r.max_tk >= lo && r.max_tk <= hi;
        parts.push(format!("K{d},{d}: {} < {:.3}", r.max_tk, r.bound));
    }
    (ok, parts.join(", "))
}

fn drc_scaling() -> Verdict {
    let ps = ParamSet::desk();
    let mut ok = true;
    let mut pts = Vec::new();
    let mut parts = Vec::new();
    let mut slowest = Duration::ZERO;
    for q in [11, 13, 17, 19, 23] {
        let g = polarity_graph(q).unwrap();
        let mut ells = Vec::new();
        for seed in 0..3 {
            let start = Instant::now();
            let res = find_subdivision(&g, Mode::Drc, &ps, seed);
            slowest = slowest.max(start.elapsed());
            let ell = match res {
                Ok(out) => {
                    let c = out.certificate.unwrap();
                    ok &= validate(&g, &c, Some(3)).valid;
                    c.ell()
                }
                Err(e) => {
                    ok = false;
                    e.partial().map_or(0, Certificate::ell)
                }
            };
            if q >= 13 {
                ok &= ell >= 3;
            }
            pts.push(((g.n() as f64).sqrt(), ell as f64));
            ells.push(ell);
        }
        parts.push(format!("q={q}:{ells:?}"));
    }
    let slope = ls_slope(&pts);
    ok &= slope >= 0.0 && slowest <= Duration::from_secs(60);
    (
        ok,
        format!("{} slope {slope:.4}, slowest {slowest:.1?}", parts.join(" ")),
    )
}

fn monte_carlo() -> Verdict {
    let ps = ParamSet::desk();
    let g = polarity_graph(13).unwrap();
    let balanced = balance_bipartite(&g, 0, ps.retries).unwrap();
    let n = balanced.n();
    let c = density_c(&balanced);
    let params = desk_params(c, n, &ps);
    let samples = n2_samples(&balanced, &params, 200, 0);
    let mean = samples.iter().sum::<usize>() as f64 / samples.len() as f64;
    let prediction = c.powi(2 * params.t_samples as i32) * n as f64;
    let mut ok = mean >= 0.75 * prediction;
    let n2 = SecondNeighborhoods::new(&balanced);
    let mut accepted = 0;
    for seed in 0..10 {
        let Ok(sel) = drc_select(&balanced, &params, seed, ps.retries) else {
            continue;
        };
        accepted += 1;
        let u: Vec<usize> = sel.u.iter().collect();
        for (i, &a) in u.iter().enumerate() {
            for &b in &u[i + 1..] {
                ok &= n2.common(&[a, b]).len() >= params.m;
            }
        }
    }
    ok &= accepted > 0;
    (
        ok,
        format!("mean |N2(T)| {mean:.2} vs 0.75 * {prediction:.2}, c = {c:.4}, t = {}, {accepted}/10 selections pass the pair check", params.t_samples),
    )
}

fn eq2_grid() -> Verdict {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut cells = 0;
    for c in [0.3f64, 0.4, 0.5] {
        let base = c.powi(-20).ceil() as usize;
        for k in 1..=5 {
            let n = base << k;
            cells += 1;
            match paper_params(c, n) {
                Ok(p) if drc_feasible(&p, n) => {}
                other => fails.push(format!("c={c} n={n}: {:?}", other.map(|_| "infeasible"))),
            }
        }
    }
    let took = start.elapsed();
    (
        fails.is_empty() && took < Duration::from_secs(1),
        format!(
            "{cells} cells, {} infeasible, {took:.1?} {:?}",
            fails.len(),
            fails.first()
        ),
    )
}

fn expander_post() -> Verdict {
    let ps = ParamSet::desk();
    let mut problems = Vec::new();
    for i in 0..50u64 {
        let side = 10 + (i as usize * 7) % 91;
        let p = 0.05 + 0.05 * (i % 6) as f64;
        let g = random_bipartite(side, side, p, i).unwrap();
        if g.m() == 0 {
            continue;
        }
        let ext = extract_expander(&g, ps.eps1, ps.eps2, ps.effort, i, DensestMethod::Exact).unwrap();
        let (h, dg) = (&ext.graph, g.avg_degree());
        let dh = h.avg_degree();
        let half_ok = ratio_ge(*dh.numer(), *dh.denom(), *dg.numer(), 2 * *dg.denom());
        let min_ok = ratio_ge(2 * h.min_degree() as u64, 1, *dh.numer(), *dh.denom());
        if !half_ok || !min_ok {
            problems.push(format!("n={}: d(H)={dh} d(G)={dg} delta={}", g.n(), h.min_degree()));
        }
    }
    let mut false_cert = 0;
    let mut certified = 0;
    for i in 0..100u64 {
        let g = random_small(8 + (i % 9) as usize, 0.3 + 0.05 * (i % 8) as f64, 500 + i);
        if g.m() == 0 {
            continue;
        }
        let ext = extract_expander(&g, ps.eps1, ps.eps2, ps.effort, i, DensestMethod::Exact).unwrap();
        let params = ExpanderParams::for_degree(ps.eps1, ps.eps2, ext.d).unwrap();
        let truth = certify_exhaustive(&ext.graph, &params).unwrap().is_none();
        if ext.certified {
            certified += 1;
        }
        if ext.certified != truth {
            false_cert += 1;
        }
    }
    (
        problems.is_empty() && false_cert == 0,
        format!("{} postcondition failures over 50 hosts; {false_cert} flag disagreements ({certified} certified) over 100 hosts", problems.len()),
    )
}

fn epsilon_grid() -> Verdict {
    let (eps1, t) = (0.05, 7.3);
    let oracle = |x: f64| {
        if x < t / 5.0 {
            0.0
        } else {
            eps1 / (15.0 * x / t).ln().powi(2)
        }
    };
    let mut worst = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for i in 0..1000 {
        let x = t / 10.0 + i as f64 * (100.0 * t) / 999.0;
        let (got, want) = (epsilon(x, eps1, t), oracle(x));
        let rel = if want == 0.0 {
            got.abs()
        } else {
            ((got - want) / want).abs()
        };
        worst = worst.max(rel);
        if x >= t / 2.0 {
            let f = x * got;
            monotone &= f >= prev;
            prev = f;
        }
    }
    (
        worst <= 1e-12 && monotone,
        format!("max relative error {worst:.2e}, x*eps(x) monotone: {monotone}"),
    )
}

fn hats() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [2, 3] {
        let f = projective_incidence(q).unwrap();
        let (x, y) = (f.side_set(Side::A), f.side_set(Side::B));
        let out = hat_subdivision(&f, &x, &y).unwrap();
        let expected: u64 = x.iter().map(|v| (f.degree(v) * (f.degree(v) - 1) / 2) as u64).sum();
        let mut pairs: Vec<(usize, usize)> = out.selected.iter().map(|&(_, a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let distinct = pairs.windows(2).all(|w| w[0] != w[1]);
        let even = out.cert.paths.iter().all(|p| (p.seq.len() - 1) % 2 == 0);
        let valid = validate(&f, &out.cert, None).valid;
        ok &= out.total_hats == expected && distinct && even && valid;
        if q == 3 {
            ok &= out.cert.ell() >= 3;
        }
        parts.push(format!(
            "q={q}: hats {} = {expected}, ell {}",
            out.total_hats,
            out.cert.ell()
        ));
    }
    (ok, parts.join(", "))
}

fn pipeline_smoke() -> Verdict {
    let ps = ParamSet::desk();
    let mut ok = true;
    let mut ells = Vec::new();
    for q in [3, 4, 5] {
        let g = gq_incidence(q).unwrap();
        match find_subdivision(&g, Mode::Dense, &ps, 0) {
            Ok(out) => {
                let c = out.certificate.unwrap();
                ok &= validate(&g, &c, None).valid;
                ells.push(c.ell());
            }
            Err(_) => {
                ok = false;
                ells.push(0);
            }
        }
    }
    ok &= ells.windows(2).all(|w| w[0] <= w[1]) && ells[2] >= 3;
    let g = random_bipartite(1000, 1000, 0.006, 7).unwrap();
    let sparse = match find_subdivision(&g, Mode::Sparse, &ps, 0) {
        Ok(out) => {
            let c = out.certificate.unwrap();
            ok &= validate(&g, &c, None).valid;
            format!("valid TK_{}", c.ell())
        }
        Err(Error::EmbedFailed { partial, .. }) => {
            ok &= validate(&g, &partial, None).valid;
            format!("EmbedFailed with valid partial TK_{}", partial.ell())
        }
        Err(e) => {
            ok = false;
            e.to_string()
        }
    };
    (
        ok,
        format!(
            "gq dense ell {ells:?}; random n=2000 d={:.2} sparse: {sparse}",
            g.avg_degree_f64()
        ),
    )
}

fn cli(dir: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tkcert"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cli(d, &["gen", "polarity", "--q", "13", "--out", "pol.txt"]);
    cli(d, &["gen", "gq", "--q", "4", "--out", "gq.txt"]);
    cli(
        d,
        &[
            "--seed", "3", "gen", "random", "--na", "200", "--nb", "200", "--p", "0.03", "--out", "rnd.txt",
        ],
    );
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "--seed", "3", "gen", "random", "--na", "200", "--nb", "200", "--p", "0.03",
        ],
        vec!["find", "--graph", "pol.txt", "--mode", "drc", "--seed", "2"],
        vec!["find", "--graph", "gq.txt", "--mode", "dense"],
        vec!["find", "--graph", "rnd.txt", "--mode", "auto", "--seed", "5"],
        vec!["find", "--graph", "rnd.txt", "--mode", "sparse"],
        vec!["drc", "--graph", "pol.txt", "--seed", "1", "--trials", "20"],
        vec!["expander", "--graph", "rnd.txt"],
        vec![
            "bench", "--family", "polarity", "--range", "11,13", "--mode", "drc", "--seeds", "0..2",
        ],
        vec!["bench", "--family", "random", "--range", "4..6", "--seeds", "0,1"],
        vec!["bench", "--family", "kdd", "--range", "2..3"],
    ];
    let mut diffs = Vec::new();
    for args in &invocations {
        let a = cli(d, args);
        let b = cli(d, args);
        if a != b || a.1.is_empty() {
            diffs.push(args.join(" "));
        }
    }
    (
        diffs.is_empty(),
        format!(
            "{} invocations, {} differ or are empty {:?}",
            invocations.len(),
            diffs.len(),
            diffs.first()
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("certificate soundness", soundness),
        ("oracle agreement", oracle_agreement),
        ("Jung lower bound", jung),
        ("drc scaling on polarity graphs", drc_scaling),
        ("second-neighbourhood Monte Carlo", monte_carlo),
        ("exact size inequality grid", eq2_grid),
        ("expander postconditions", expander_post),
        ("epsilon function", epsilon_grid),
        ("hat construction", hats),
        ("dense and sparse pipeline smoke", pipeline_smoke),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
