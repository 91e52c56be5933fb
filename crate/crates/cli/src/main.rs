use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tkcert::densest::DensestMethod;
use tkcert::drc::{n2_samples, run_drc, DrcOptions};
use tkcert::engine::{find_subdivision, Mode};
use tkcert::expander::{certify_exhaustive, extract_expander, ExpanderParams, EXHAUSTIVE_LIMIT};
use tkcert::experiment::{run_experiment, write_csv};
use tkcert::generators::{disjoint_kdd, gq_incidence, polarity_graph, projective_incidence, random_bipartite};
use tkcert::io::{parse_edge_list, write_edge_list};
use tkcert::params::ParamSet;
use tkcert::{validate, Certificate, Error, Graph};

#[derive(Parser)]
#[command(name = "tkcert", version, about = "Find and check clique-subdivision certificates")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Primary output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
    /// Search for a subdivision and write its certificate.
    Find(FindArgs),
    /// Check a certificate against a graph.
    Verify(VerifyArgs),
    /// Extract a dense expander-like subgraph.
    Expander(ExpanderArgs),
    /// Dependent random choice and a subdivision with paths of length 4.
    Drc(DrcArgs),
    /// Sweep a family and write one CSV row per instance and seed.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Polarity,
    Projective,
    Gq,
    Kdd,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Field order for polarity, projective and gq.
    #[arg(long)]
    q: Option<u32>,
    /// Side size of each K_{d,d}.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    copies: usize,
    #[arg(long)]
    na: Option<usize>,
    #[arg(long)]
    nb: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct FindArgs {
    #[arg(long)]
    graph: PathBuf,
    /// auto, dense, sparse, drc or reduce-only.
    #[arg(long, default_value = "auto")]
    mode: String,
    /// Parameter overrides: a JSON object, or a path to a file holding one.
    #[arg(long)]
    params: Option<String>,
    /// Where to write the run report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    /// Require every path to have exactly this many internal vertices.
    #[arg(long)]
    exact_internal: Option<usize>,
}

#[derive(Args)]
struct ExpanderArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Defaults to the desk profile's value, as do `--eps2` and `--effort`.
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    effort: Option<usize>,
    /// Check expansion exhaustively; refused above 18 vertices.
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct DrcArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Density override for `e = c n^{3/2}`.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    ell: Option<usize>,
    /// Monte-Carlo draws of the common second neighbourhood.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    params: Option<String>,
    /// Where to write the statistics JSON; stderr when absent.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    family: String,
    /// Comma-separated values or an inclusive range `a..b`.
    #[arg(long)]
    range: String,
    #[arg(long, default_value = "auto")]
    mode: String,
    /// Comma-separated seeds or an inclusive range; may be empty.
    #[arg(long, default_value = "0")]
    seeds: String,
    #[arg(long)]
    params: Option<String>,
    /// Record wall-clock time per row; rows are no longer byte-stable.
    #[arg(long)]
    timing: bool,
    /// Also write each row's certificate here as `<family>-<value>-<seed>.json`.
    #[arg(long)]
    cert_dir: Option<PathBuf>,
}

/// Exit statuses.
const INVALID_INPUT: u8 = 1;
const EMBED_FAILED: u8 = 2;
const INVARIANT: u8 = 3;

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => INVARIANT,
            Error::EmbedFailed { .. }
            | Error::NoConnector { .. }
            | Error::StageFailed { .. }
            | Error::NoHats
            | Error::SparsifyFailed { .. }
            | Error::SelectFailed { .. }
            | Error::BalanceFailed(_) => EMBED_FAILED,
            _ => INVALID_INPUT,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: INVALID_INPUT,
        msg: msg.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Gen(a) => gen(cli, a),
        Cmd::Find(a) => find(cli, a),
        Cmd::Verify(a) => verify(cli, a),
        Cmd::Expander(a) => expander(cli, a),
        Cmd::Drc(a) => drc(cli, a),
        Cmd::Bench(a) => bench(cli, a),
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Writes a side report to `path`, or to stderr.
fn side_report(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => eprint!("{text}"),
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(parse_edge_list(&text)?)
}

fn params(arg: Option<&str>) -> Result<ParamSet, Failure> {
    let Some(arg) = arg else {
        return Ok(ParamSet::desk());
    };
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| invalid(format!("{arg}: {e}")))?
    };
    Ok(ParamSet::from_json(&text)?)
}

fn mode(s: &str) -> Result<Mode, Failure> {
    Ok(s.parse::<Mode>()?)
}

fn cert_json(cert: &Certificate) -> String {
    let mut s = cert.to_json();
    s.push('\n');
    s
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<(), Failure> {
    let need_q = || a.q.ok_or_else(|| invalid("--q is required for this family"));
    let g = match a.family {
        Family::Polarity => polarity_graph(need_q()?)?,
        Family::Projective => projective_incidence(need_q()?)?,
        Family::Gq => gq_incidence(need_q()?)?,
        Family::Kdd => disjoint_kdd(a.d.ok_or_else(|| invalid("--d is required for kdd"))?, a.copies),
        Family::Random => {
            let (Some(na), Some(nb), Some(p)) = (a.na, a.nb, a.p) else {
                return Err(invalid("random needs --na, --nb and --p"));
            };
            random_bipartite(na, nb, p, cli.seed)?
        }
    };
    emit(cli.out.as_deref(), &write_edge_list(&g))
}

fn find(cli: &Cli, a: &FindArgs) -> Result<(), Failure> {
    let g = read_graph(&a.graph)?;
    let ps = params(a.params.as_deref())?;
    let mode = mode(&a.mode)?;
    match find_subdivision(&g, mode, &ps, cli.seed) {
        Ok(out) => {
            if let Some(p) = &a.report {
                fs::write(p, out.report.to_json() + "\n")?;
            }
            match (&out.certificate, &out.reduced) {
                (Some(cert), _) => {
                    if cli.format == Format::Text {
                        eprintln!("found TK_{} ({} stages)", cert.ell(), out.report.stages.len());
                    }
                    emit(cli.out.as_deref(), &cert_json(cert))
                }
                (None, Some(h)) => emit(cli.out.as_deref(), &write_edge_list(h)),
                (None, None) => Ok(()),
            }
        }
        Err(Error::EmbedFailed { partial, reason, trace }) => {
            if let Some(p) = &a.report {
                let body =
                    json!({ "outcome": "embed-failed", "reason": reason, "ell": partial.ell(), "stages": trace });
                fs::write(p, serde_json::to_string_pretty(&body).map_err(Error::from)? + "\n")?;
            }
            if partial.ell() >= 2 {
                eprintln!(
                    "warning: embedding failed ({reason}); emitting partial TK_{}",
                    partial.ell()
                );
                emit(cli.out.as_deref(), &cert_json(&partial))
            } else {
                Err(Failure {
                    code: EMBED_FAILED,
                    msg: format!("embedding failed ({reason}) with no useful partial certificate"),
                })
            }
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<(), Failure> {
    let g = read_graph(&a.graph)?;
    let text = fs::read_to_string(&a.cert).map_err(|e| invalid(format!("{}: {e}", a.cert.display())))?;
    let cert = Certificate::from_json(&text)?;
    let rep = validate(&g, &cert, a.exact_internal);
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rep).map_err(Error::from)? + "\n",
        Format::Text => {
            let mut s = format!("{} ell={}\n", if rep.valid { "valid" } else { "invalid" }, rep.ell);
            for v in &rep.violations {
                s.push_str(&format!("{}: {}\n", v.kind, v.evidence));
            }
            s
        }
    };
    emit(cli.out.as_deref(), &body)?;
    if rep.valid {
        Ok(())
    } else {
        Err(invalid(format!("certificate has {} violations", rep.violations.len())))
    }
}

fn expander(cli: &Cli, a: &ExpanderArgs) -> Result<(), Failure> {
    let g = read_graph(&a.graph)?;
    let desk = ParamSet::desk();
    let (eps1, eps2) = (a.eps1.unwrap_or(desk.eps1), a.eps2.unwrap_or(desk.eps2));
    let effort = a.effort.unwrap_or(desk.effort);
    let ext = extract_expander(&g, eps1, eps2, effort, cli.seed, DensestMethod::Exact)?;
    let mut certified = ext.certified;
    if a.certify {
        if ext.graph.n() > EXHAUSTIVE_LIMIT {
            return Err(Error::TooLarge {
                n: ext.graph.n(),
                limit: EXHAUSTIVE_LIMIT,
            }
            .into());
        }
        let params = ExpanderParams::for_degree(eps1, eps2, ext.d)?;
        certified = certify_exhaustive(&ext.graph, &params)?.is_none();
    }
    emit(cli.out.as_deref(), &write_edge_list(&ext.graph))?;
    let report = match cli.format {
        Format::Json => {
            let body = json!({ "d": ext.d, "delta": ext.delta, "t": ext.params.t, "certified": certified });
            body.to_string() + "\n"
        }
        Format::Text => format!(
            "d={} delta={} t={} certified={certified}\n",
            ext.d, ext.delta, ext.params.t
        ),
    };
    side_report(a.report.as_deref(), &report)
}

fn drc(cli: &Cli, a: &DrcArgs) -> Result<(), Failure> {
    let g = read_graph(&a.graph)?;
    let ps = params(a.params.as_deref())?;
    let opts = DrcOptions { ell: a.ell, c: a.c };
    let run = match run_drc(&g, &ps, &opts, cli.seed) {
        Ok(run) => run,
        Err(e) => {
            if let Some(p) = e.partial().filter(|p| p.ell() >= 2) {
                eprintln!("warning: {e}; emitting partial TK_{}", p.ell());
                return emit(cli.out.as_deref(), &cert_json(p));
            }
            return Err(e.into());
        }
    };
    let samples = n2_samples(&run.balanced, &run.params, a.trials, cli.seed);
    let sel = &run.selection;
    let stats = json!({
        "w_samples": samples,
        "w": sel.w,
        "bad_sets": sel.bad_sets,
        "u": sel.u.len(),
        "retention": if sel.w == 0 { 0.0 } else { sel.u.len() as f64 / sel.w as f64 },
        "params": run.params,
        "ell": run.cert.ell(),
    });
    let stats = match cli.format {
        Format::Json => serde_json::to_string_pretty(&stats).map_err(Error::from)? + "\n",
        Format::Text => {
            let mean = samples.iter().sum::<usize>() as f64 / samples.len().max(1) as f64;
            format!(
                "ell={} |W|={} bad_sets={} |U|={} mean|N2(T)|={mean:.3}\n",
                run.cert.ell(),
                sel.w,
                sel.bad_sets,
                sel.u.len()
            )
        }
    };
    side_report(a.stats.as_deref(), &stats)?;
    emit(cli.out.as_deref(), &cert_json(&run.cert))
}

/// `"1,2,5"`, `"3..6"` (inclusive) or a mix; the empty string gives an empty list.
fn parse_list<T>(s: &str) -> Result<Vec<T>, Failure>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    let bad = || invalid(format!("cannot parse list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: T = lo.trim().parse().map_err(|_| bad())?;
                let hi: T = hi.trim().parse().map_err(|_| bad())?;
                for v in lo.into()..=hi.into() {
                    out.push(T::try_from(v).map_err(|_| bad())?);
                }
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn bench(cli: &Cli, a: &BenchArgs) -> Result<(), Failure> {
    let ps = params(a.params.as_deref())?;
    let mode = mode(&a.mode)?;
    let range: Vec<u32> = parse_list(&a.range)?;
    let seeds: Vec<u64> = parse_list(&a.seeds)?;
    let rows = run_experiment(&a.family, &range, mode, &seeds, &ps, a.timing)?;
    if let Some(dir) = &a.cert_dir {
        fs::create_dir_all(dir)?;
        for r in &rows {
            if let Some(c) = &r.certificate {
                let name = format!("{}-{}-{}.json", r.family, r.q_or_d, r.seed);
                fs::write(dir.join(name), cert_json(c))?;
            }
        }
    }
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
        Format::Text => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            String::from_utf8(buf).map_err(|e| invalid(e.to_string()))?
        }
    };
    emit(cli.out.as_deref(), &body)
}
