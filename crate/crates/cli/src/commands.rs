use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qrigid::io::{self, SCHEMA};
use qrigid::rigidity::{self, DPolicy, SweepConfig, SweepReport};
use qrigid::superop::{self, check_quantum_graph};
use qrigid::{
    Backend, Error, GaussRational, OperatorTuple, RigidityCertificate, RngSpec, Sampler, Scalar, Shape, Superoperator,
    TolerancePolicy, TraceMode, C64,
};
use serde_json::{json, Value};

use crate::{
    AxiomArgs, BackendArg, CertifyArgs, ChoiArgs, Cli, Command, Direction, FixtureArgs, Format, Global, SweepArgs,
    SystemArg,
};

/// Text to emit and the process exit code.
pub struct Output {
    pub text: String,
    pub code: u8,
}

type CmdResult = Result<Output, Error>;

pub fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if g.format == Format::Csv && !matches!(cli.command, Command::Sweep(_)) {
        return Err(Error::InvalidInput("--format csv is only available for sweep".into()));
    }
    match &cli.command {
        Command::Certify(a) => match g.backend {
            BackendArg::Float => certify::<C64>(g, a),
            BackendArg::Exact => certify::<GaussRational>(g, a),
        },
        Command::Sweep(a) => match g.backend {
            BackendArg::Float => sweep::<C64>(g, a),
            BackendArg::Exact => sweep::<GaussRational>(g, a),
        },
        Command::CheckAxioms(a) => match g.backend {
            BackendArg::Float => check_axioms::<C64>(g, a),
            BackendArg::Exact => check_axioms::<GaussRational>(g, a),
        },
        Command::Choi(a) => choi(g, a),
        Command::Fixture(a) => fixture(g, a),
    }
}

fn tolerance(g: &Global) -> Result<TolerancePolicy, Error> {
    let mut tol = TolerancePolicy::default();
    if let Some(r) = g.tol_rank {
        tol.rank_rel_tol = r;
    }
    if let Some(m) = g.cert_margin {
        tol.cert_margin = m;
    }
    if !tol.is_valid() {
        return Err(Error::InvalidInput("tolerances must be finite and in (0, 1)".into()));
    }
    Ok(tol)
}

fn trace_mode(g: &Global) -> Result<TraceMode, Error> {
    g.trace_mode.replace('-', "_").parse()
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    io::parse(&text)
}

/// Reads a matrix document for backend `S`; decimal numbers are read exactly
/// when `S` is the exact backend.
fn for_backend<S: Scalar>(v: Value) -> Result<Value, Error> {
    match (S::BACKEND, io::document_backend(&v)?) {
        (Backend::Exact, Backend::Float) => io::exactify(&v),
        (Backend::Float, Backend::Exact) => Err(Error::BackendMismatch),
        _ => Ok(v),
    }
}

fn certify<S: Scalar>(g: &Global, a: &CertifyArgs) -> CmdResult {
    let tol = tolerance(g)?;
    let mode = trace_mode(g)?;
    let (source, tuple, project) = if let Some(name) = &a.source.fixture {
        let v = io::parse(qrigid::fixtures::fixture_json(name)?)?;
        (
            format!("fixture:{name}"),
            io::tuple_from_value::<S>(&for_backend::<S>(v)?)?,
            true,
        )
    } else if let Some(path) = &a.source.input {
        let v = read_json(path)?;
        (
            format!("file:{}", path.display()),
            io::tuple_from_value::<S>(&for_backend::<S>(v)?)?,
            a.project_trace,
        )
    } else if let Some(nd) = &a.source.sample {
        let (n, d) = (nd[0], nd[1]);
        if n == 0 || d == 0 || d >= n * n {
            return Err(Error::InvalidInput(format!(
                "--sample needs n ≥ 1 and 1 ≤ d < n², got {n} {d}"
            )));
        }
        let shape: Shape = a.shape.parse()?;
        let spec = RngSpec::new(g.seed, 0);
        (
            format!("sample:{n}x{d}"),
            Sampler::new(spec).tuple::<S>(n, d, shape),
            a.project_trace,
        )
    } else {
        unreachable!("clap enforces one source")
    };
    let (tuple, removed) = if project || a.project_trace {
        let (t, r) = tuple.traceless_part();
        (t, Some(r))
    } else {
        (tuple, None)
    };
    let cert = rigidity::certify_tuple(&tuple, mode, &tol)?;
    let code = if cert.is_certified() { 0 } else { 1 };
    let text = match g.format {
        Format::Pretty => pretty_certificate(&cert, &source, removed),
        _ => {
            let mut v = io::certificate_to_value(&cert);
            v["source"] = json!(source);
            v["seed"] = json!(g.seed);
            v["trace_removed"] = json!(removed);
            io::canonical(&v)
        }
    };
    Ok(Output { text, code })
}

fn pretty_certificate<S: Scalar>(c: &RigidityCertificate<S>, source: &str, removed: Option<f64>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "source:    {source}");
    let _ = writeln!(s, "n, d:      {}, {}", c.n, c.d);
    let _ = writeln!(
        s,
        "backend:   {} ({:?} basis, {:?} trace)",
        c.backend, c.power_basis, c.mode
    );
    if let Some(r) = removed {
        let _ = writeln!(s, "trace:     projected out, largest |Tr X| = {r:.3e}");
    }
    let _ = writeln!(s, "rank:      {} / {}", c.rank, c.n * c.n);
    if let Some(m) = c.margin() {
        let _ = writeln!(s, "margin:    σ_min/σ_max = {m:.6e}");
    }
    if let Some(det) = c.determinant() {
        let text = det.re.to_string();
        let shown = if text.len() > 60 {
            format!("{}… ({} chars)", &text[..60], text.len())
        } else {
            text
        };
        let _ = writeln!(s, "det (re):  {shown}");
    }
    if let Some(k) = c.closure_dimension {
        let _ = writeln!(s, "closure:   generated algebra has dimension {k}");
    }
    let _ = writeln!(s, "verdict:   {}", c.verdict);
    s
}

/// `a..b` or `a..=b` (both inclusive), `a,b,c`, or a single value.
pub fn parse_list(text: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::InvalidInput(format!("invalid range {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(num).collect()
}

fn sweep<S: Scalar>(g: &Global, a: &SweepArgs) -> CmdResult {
    let cfg = SweepConfig {
        n_values: parse_list(&a.n)?,
        d_policy: match &a.d {
            Some(d) => DPolicy::Fixed(parse_list(d)?),
            None => DPolicy::PaperRange,
        },
        trials: a.trials,
        rng: RngSpec::new(g.seed, 0),
        mode: trace_mode(g)?,
        tol: tolerance(g)?,
        shape: a.shape.parse()?,
        threads: None,
        verify_closure: !a.no_closure,
        record_timing: a.timing,
    };
    let report = rigidity::sweep::<S>(&cfg)?;
    let code = if report.all_cells_certified() { 0 } else { 1 };
    let text = match g.format {
        Format::Json => io::canonical(&report),
        Format::Csv => report.to_csv(),
        Format::Pretty => pretty_sweep(&report),
    };
    Ok(Output { text, code })
}

fn pretty_sweep(r: &SweepReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>7} {:>9} {:>12}",
        "n", "d", "trials", "certified", "min_margin"
    );
    for c in &r.cells {
        let m = c.min_margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:>3} {:>3} {:>7} {:>9} {:>12}", c.n, c.d, c.trials, c.certified, m);
    }
    let _ = writeln!(
        s,
        "{} of {} trials certified; every cell has a witness: {}",
        r.total_certified(),
        r.total_trials(),
        r.all_cells_certified()
    );
    s
}

fn check_axioms<S: Scalar>(g: &Global, a: &AxiomArgs) -> CmdResult {
    let tol = tolerance(g)?;
    let (label, phi): (String, Superoperator<S>) = match (&a.input, a.system) {
        (Some(path), _) => {
            let v = for_backend::<S>(read_json(path)?)?;
            if v.get("rep").is_some() {
                (format!("file:{}", path.display()), io::superop_from_value(&v)?)
            } else {
                let tuple: OperatorTuple<S> = io::tuple_from_value(&v)?;
                let (system, _) = qrigid::opsys::adjoin_unit(&tuple, &tol)?;
                (
                    format!("file:{}", path.display()),
                    superop::adjacency_from_system(&system, &tol)?,
                )
            }
        }
        (None, Some(sys)) => {
            if a.n == 0 {
                return Err(Error::InvalidInput("--n must be positive".into()));
            }
            match sys {
                SystemArg::Trivial => ("trivial".into(), Superoperator::identity(a.n)),
                SystemArg::Full => ("full".into(), Superoperator::complete_graph(a.n)),
            }
        }
        (None, None) => return Err(Error::InvalidInput("give --system or --input".into())),
    };
    let report = check_quantum_graph(&phi, &tol);
    let code = if report.all_pass() { 0 } else { 1 };
    let text = match g.format {
        Format::Pretty => {
            let mut s = format!("system: {label} (n = {}, {})\n", report.n, report.backend);
            for (name, c) in [
                ("schur idempotent", report.schur_idempotent),
                ("reflexive", report.reflexive),
                ("self-adjoint", report.self_adjoint),
                ("completely positive", report.completely_positive),
            ] {
                let _ = writeln!(
                    s,
                    "{name:<20} {:<4} residual {:.3e}",
                    if c.passed { "ok" } else { "FAIL" },
                    c.residual
                );
            }
            s
        }
        _ => {
            let mut v = serde_json::to_value(&report)?;
            v["schema"] = json!(SCHEMA);
            v["system"] = json!(label);
            v["all_pass"] = json!(report.all_pass());
            io::canonical(&v)
        }
    };
    Ok(Output { text, code })
}

fn choi(g: &Global, a: &ChoiArgs) -> CmdResult {
    let v = read_json(&a.input)?;
    match g.backend {
        BackendArg::Float => choi_with::<C64>(g, a, v),
        BackendArg::Exact => choi_with::<GaussRational>(g, a, v),
    }
}

fn choi_with<S: Scalar>(g: &Global, a: &ChoiArgs, v: Value) -> CmdResult {
    let v = for_backend::<S>(v)?;
    let tol = tolerance(g)?;
    let out = match a.direction {
        Direction::ToChoi => {
            let phi: Superoperator<S> = if v.get("rep").is_some() {
                io::superop_from_value(&v)?
            } else {
                superop::superop_from_kraus(&io::kraus_from_value(&v)?)
            };
            let c = superop::choi(&phi);
            let mut out = io::choi_to_value(&c);
            out["schema"] = json!(SCHEMA);
            out["psd"] = json!(c.psd(&tol).psd);
            out
        }
        Direction::FromChoi => {
            let c = io::choi_from_value::<S>(&v)?;
            let mut out = io::superop_to_value(&superop::superop_from_choi(&c));
            out["schema"] = json!(SCHEMA);
            out
        }
    };
    Ok(Output {
        text: match g.format {
            Format::Pretty => serde_json::to_string_pretty(&out)? + "\n",
            _ => io::canonical(&out),
        },
        code: 0,
    })
}

fn fixture(g: &Global, a: &FixtureArgs) -> CmdResult {
    let text = qrigid::fixtures::fixture_json(&a.name)?;
    Ok(Output {
        text: match g.format {
            Format::Pretty => serde_json::to_string_pretty(&io::parse(text)?)? + "\n",
            _ => text.to_string(),
        },
        code: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_list("3..8").unwrap(), vec![3, 4, 5, 6, 7, 8]);
        assert_eq!(parse_list("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(parse_list("2,5").unwrap(), vec![2, 5]);
        assert_eq!(parse_list("4").unwrap(), vec![4]);
        assert!(parse_list("8..3").is_err());
        assert!(parse_list("x").is_err());
    }
}
