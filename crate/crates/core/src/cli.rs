//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when a cap stops the computation before a
//! verdict, 64 for unreadable or malformed input, 65 for input that parses
//! but is mathematically unusable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complete::{compute_until_complete, Inequality, PipelineOptions, PipelineReport};
use crate::dickson::{default_gen_degree, dickson_set, restriction_power_relation, verify_gl_invariance};
use crate::error::Error;
use crate::extint::ExtInt;
use crate::gring::json::{poly_from_json, poly_to_json, HsopFile, PolyJson, RingFile};
use crate::gring::{BettiTable, GradedPresentation, ParameterSequence, Polynomial};
use crate::group::{PGroup, DEFAULT_ORDER_CAP};
use crate::linalg::PrimeField;
use crate::modres::ResolutionCaps;
use crate::regseq::{classify, koszul_cohomology, local_cohomology_report, measure_type, KoszulReport, Mode, QuasiFlags};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Parser)]
#[command(name = "cohomod", version, about = "Mod-p cohomology rings of small p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write the machine-readable report here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Certified,
    Bounded,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Certified => Mode::Certified,
            ModeArg::Bounded => Mode::Bounded,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the cohomology ring of a group until it is certified complete.
    Cohomology {
        group: PathBuf,
        #[arg(long, default_value_t = 32)]
        max_degree: usize,
        #[arg(long, default_value_t = 8192)]
        max_dim: usize,
        /// Parameters in terms of the extracted generators (hsop format).
        #[arg(long)]
        params: Option<PathBuf>,
        /// Dickson dilation exponent per parameter, comma separated.
        #[arg(long, value_delimiter = ',')]
        dilation: Option<Vec<u32>>,
        #[arg(long, conflicts_with = "nonstrict")]
        strict: bool,
        #[arg(long)]
        nonstrict: bool,
        #[arg(long)]
        assume_depth2: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Filter-regular type, a-invariants and regularity of a presented ring.
    AnalyzeRing {
        ring: PathBuf,
        hsop: PathBuf,
        #[arg(long, default_value_t = 40)]
        bound: usize,
        #[arg(long, value_enum, default_value = "certified")]
        mode: ModeArg,
        #[command(flatten)]
        output: Output,
    },
    /// Dickson invariants of a rank-r elementary abelian p-group.
    Dickson {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        gen_degree: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Bigraded Koszul cohomology of a ring over a parameter sequence.
    Koszul {
        ring: PathBuf,
        hsop: PathBuf,
        #[arg(long, default_value_t = 12)]
        window: usize,
        #[arg(long, default_value_t = 40)]
        bound: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidGroup(_) => EXIT_USAGE,
            Error::DegreeCap { .. }
            | Error::DimCap { .. }
            | Error::BasisCap { .. }
            | Error::StoppingBound { .. }
            | Error::WindowTooLarge { .. }
            | Error::DicksonCap { .. }
            | Error::OrderCap { .. } => EXIT_INCOMPLETE,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    p: u32,
    generators: Option<Vec<Vec<usize>>>,
    table: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

/// Common envelope of every JSON report.
#[derive(Debug, Serialize)]
struct ReportDocument<T: Serialize> {
    command: String,
    inputs: Vec<InputDigest>,
    #[serde(flatten)]
    results: T,
}

struct Input {
    digest: InputDigest,
    text: String,
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| usage(format!("{} is not UTF-8", path.display())))?;
    let sha256 = format!("{:x}", Sha256::digest(text.as_bytes()));
    Ok(Input {
        digest: InputDigest {
            path: path.display().to_string(),
            sha256,
        },
        text,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(input: &Input) -> Result<T, Failure> {
    serde_json::from_str(&input.text).map_err(|e| usage(format!("{}: {e}", input.digest.path)))
}

pub fn load_group(text: &str) -> Result<PGroup, Failure> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| usage(e.to_string()))?;
    match (file.generators, file.table) {
        (Some(g), None) => Ok(PGroup::from_permutations(file.p, &g, DEFAULT_ORDER_CAP)?),
        (None, Some(t)) => Ok(PGroup::from_table(file.p, &t, DEFAULT_ORDER_CAP)?),
        _ => Err(usage("group file needs exactly one of \"generators\" or \"table\"")),
    }
}

/// Parameters given before the generators exist: indices are checked
/// against the extracted presentation once it has them.
fn user_params(p: u32, file: &HsopFile) -> Result<Vec<Polynomial>, Failure> {
    let field = PrimeField::new(p)?;
    file.elements
        .iter()
        .map(|e| {
            let ngens = e.iter().flat_map(|t| t.m.iter().map(|&(i, _)| i + 1)).max().unwrap_or(0);
            Ok(poly_from_json(field, ngens, e)?)
        })
        .collect()
}

fn load_ring_and_params(ring: &Input, hsop: &Input) -> Result<(GradedPresentation, ParameterSequence), Failure> {
    let pres = parse_json::<RingFile>(ring)?.to_presentation()?;
    let elements = parse_json::<HsopFile>(hsop)?.to_elements(&pres)?;
    let params = ParameterSequence::new(&pres, elements)?;
    Ok((pres, params))
}

fn emit<T: Serialize>(output: &Output, doc: &ReportDocument<T>, summary: &str, out: &mut String) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(doc).expect("reports serialize");
    match output.json.as_deref() {
        Some(p) if p == Path::new("-") => {
            out.push_str(&json);
            out.push('\n');
        }
        Some(p) => {
            std::fs::write(p, json + "\n")
                .map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
            out.push_str(summary);
        }
        None => out.push_str(summary),
    }
    Ok(())
}

fn show(v: &[ExtInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cohomology_summary(r: &PipelineReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "group of order {} (p = {}, p-rank {}, center rank {})",
        r.order, r.p, r.p_rank, r.center_rank
    );
    let pres = r.presentation.to_presentation().map(|p| p.to_string()).unwrap_or_default();
    if r.complete {
        let _ = writeln!(s, "complete at N = {}", r.n);
    } else {
        let reason = r.stop_reason.clone().unwrap_or_default();
        let _ = writeln!(s, "incomplete at N = {} ({reason})", r.n);
    }
    let _ = writeln!(s, "presentation: {pres}");
    if let Some(d) = r.periodicity {
        let _ = writeln!(s, "periodic: Omega^{d} k = k");
    }
    if let Some(v) = &r.verdict {
        let _ = writeln!(
            s,
            "parameters: {} of degrees {}, type {}, alpha {}, bound {} ({:?})",
            r.parameters.join(", "),
            list(&v.param_degrees),
            show(&v.envelope),
            v.alpha,
            v.bound,
            v.inequality
        );
        for reason in &v.reasons {
            let _ = writeln!(s, "  {reason}");
        }
    }
    let _ = writeln!(s, "resolution ranks: {}", list(&r.resolution_ranks));
    s
}

#[derive(Debug, Serialize)]
struct AnalyzeResults {
    verdict: &'static str,
    #[serde(rename = "type")]
    envelope: Vec<ExtInt>,
    measured: Vec<ExtInt>,
    flags: QuasiFlags,
    depth: usize,
    a_bounds: Vec<ExtInt>,
    a0: ExtInt,
    a_exact: Option<Vec<ExtInt>>,
    a_max: Option<ExtInt>,
    reg: Option<ExtInt>,
    reg_bound: ExtInt,
    betti: Option<BettiTable>,
    param_degrees: Vec<usize>,
    bound: usize,
    mode: Mode,
    fallback: Option<String>,
}

fn verdict_name(f: &QuasiFlags) -> &'static str {
    if f.very_strongly {
        "very-strongly-quasi-regular"
    } else if f.strongly {
        "strongly-quasi-regular"
    } else if f.quasi {
        "quasi-regular"
    } else {
        "filter-regular"
    }
}

fn analyze(pres: &GradedPresentation, params: &ParameterSequence, bound: usize, mode: Mode) -> Result<AnalyzeResults, Failure> {
    let (m, rep) = local_cohomology_report(pres, params, bound, mode)?;
    let flags = classify(&m.envelope, params.len())?;
    Ok(AnalyzeResults {
        verdict: verdict_name(&flags),
        envelope: m.envelope.d.clone(),
        measured: m.measured.d.clone(),
        flags,
        depth: rep.depth,
        a_bounds: rep.a_bound,
        a0: rep.a0_exact,
        a_exact: rep.a_exact,
        a_max: rep.a_max_exact,
        reg: rep.reg_exact,
        reg_bound: rep.reg_bound,
        betti: rep.betti,
        param_degrees: params.degrees.clone(),
        bound,
        mode: m.mode,
        fallback: m.fallback,
    })
}

fn analyze_summary(r: &AnalyzeResults) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "type {} (measured {}), mode {:?}", show(&r.envelope), show(&r.measured), r.mode);
    let f = &r.flags;
    let mark = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        s,
        "quasi-regular {}, strongly {}, very strongly {}",
        mark(f.quasi),
        mark(f.strongly),
        mark(f.very_strongly)
    );
    let _ = writeln!(s, "depth {}", r.depth);
    let _ = writeln!(s, "a-invariant bounds {}, a0 = {}", show(&r.a_bounds), r.a0);
    match r.reg {
        Some(reg) => {
            let _ = writeln!(s, "Reg = {reg}");
        }
        None => {
            let _ = writeln!(s, "Reg <= {}", r.reg_bound);
        }
    }
    s
}

#[derive(Debug, Serialize)]
struct DicksonInvariant {
    name: String,
    degree: usize,
    text: String,
    poly: PolyJson,
}

#[derive(Debug, Serialize)]
struct DicksonResults {
    p: u32,
    r: usize,
    gen_degree: usize,
    ring: RingFile,
    invariants: Vec<DicksonInvariant>,
    gl_invariant: bool,
    restriction_relations: bool,
}

fn dickson_results(p: u32, r: usize, g: Option<usize>) -> Result<DicksonResults, Failure> {
    let g = g.unwrap_or_else(|| default_gen_degree(p));
    let d = dickson_set(p, r, g)?;
    let names = d.ring.names();
    let invariants = d
        .invariants
        .iter()
        .zip(&d.degrees)
        .enumerate()
        .map(|(idx, (c, &degree))| DicksonInvariant {
            name: format!("c_{{{},{}}}", r, r - idx - 1),
            degree,
            text: c.display(&names),
            poly: poly_to_json(c),
        })
        .collect();
    let mut relations = true;
    for s in 1..r {
        relations &= restriction_power_relation(&d, s)?;
    }
    Ok(DicksonResults {
        p,
        r,
        gen_degree: g,
        ring: RingFile::from_presentation(&d.ring),
        invariants,
        gl_invariant: verify_gl_invariance(&d),
        restriction_relations: relations,
    })
}

#[derive(Debug, Serialize)]
struct KoszulResults {
    #[serde(flatten)]
    report: KoszulReport,
    #[serde(rename = "type")]
    envelope: Vec<ExtInt>,
    param_degrees: Vec<usize>,
    violations: Vec<(usize, usize)>,
    mode: Mode,
}

fn koszul_summary(r: &KoszulResults) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dim H^(-s,t) for t = 0..{}", r.report.window);
    for (sdeg, row) in r.report.table.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "s={sdeg}: {}", cells.join(" "));
    }
    if r.violations.is_empty() {
        let _ = writeln!(s, "vanishing above the line from type {} holds", show(&r.envelope));
    } else {
        let _ = writeln!(s, "vanishing violated at {:?}", r.violations);
    }
    s
}

fn command_echo(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

fn dispatch(cli: Cli, echo: String, out: &mut String) -> Result<i32, Failure> {
    match cli.command {
        Command::Cohomology {
            group,
            max_degree,
            max_dim,
            params,
            dilation,
            strict,
            nonstrict,
            assume_depth2,
            output,
        } => {
            let input = read_input(&group)?;
            let g = load_group(&input.text)?;
            let mut inputs = vec![input.digest];
            let params = match params {
                Some(path) => {
                    let i = read_input(&path)?;
                    let file: HsopFile = parse_json(&i)?;
                    inputs.push(i.digest);
                    Some(file)
                }
                None => None,
            };
            let inequality = match (strict, nonstrict) {
                (true, _) => Some(Inequality::Strict),
                (_, true) => Some(Inequality::NonStrict),
                _ => None,
            };
            let options = PipelineOptions {
                caps: ResolutionCaps { max_degree, max_dim },
                params: params.map(|f| user_params(g.p(), &f)).transpose()?,
                dilations: dilation,
                inequality,
                assume_depth2,
            };
            let report = compute_until_complete(Arc::new(g), options)?;
            let summary = cohomology_summary(&report);
            let code = if report.complete { EXIT_OK } else { EXIT_INCOMPLETE };
            let doc = ReportDocument {
                command: echo,
                inputs,
                results: report,
            };
            emit(&output, &doc, &summary, out)?;
            Ok(code)
        }
        Command::AnalyzeRing {
            ring,
            hsop,
            bound,
            mode,
            output,
        } => {
            let (ri, hi) = (read_input(&ring)?, read_input(&hsop)?);
            let (pres, params) = load_ring_and_params(&ri, &hi)?;
            let results = analyze(&pres, &params, bound, mode.into())?;
            let summary = analyze_summary(&results);
            let doc = ReportDocument {
                command: echo,
                inputs: vec![ri.digest, hi.digest],
                results,
            };
            emit(&output, &doc, &summary, out)?;
            Ok(EXIT_OK)
        }
        Command::Dickson { p, r, gen_degree, output } => {
            let results = dickson_results(p, r, gen_degree)?;
            let mut summary = String::new();
            for c in &results.invariants {
                let _ = writeln!(summary, "{} = {}  (degree {})", c.name, c.text, c.degree);
            }
            let doc = ReportDocument {
                command: echo,
                inputs: Vec::new(),
                results,
            };
            emit(&output, &doc, &summary, out)?;
            Ok(EXIT_OK)
        }
        Command::Koszul {
            ring,
            hsop,
            window,
            bound,
            output,
        } => {
            let (ri, hi) = (read_input(&ring)?, read_input(&hsop)?);
            let (pres, params) = load_ring_and_params(&ri, &hi)?;
            let report = koszul_cohomology(&pres, &params, window)?;
            let m = measure_type(&pres, &params, bound, Mode::Certified)?;
            let results = KoszulResults {
                violations: report.violations(&params.degrees, &m.envelope.d),
                report,
                envelope: m.envelope.d,
                param_degrees: params.degrees.clone(),
                mode: m.mode,
            };
            let summary = koszul_summary(&results);
            let doc = ReportDocument {
                command: echo,
                inputs: vec![ri.digest, hi.digest],
                results,
            };
            emit(&output, &doc, &summary, out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Run the command line, returning the exit code and everything destined
/// for stdout; errors go to the returned message.
pub fn run_to_string<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, String::new(), e.render().to_string());
        }
    };
    let mut out = String::new();
    match dispatch(cli, command_echo(&args), &mut out) {
        Ok(code) => (code, out, String::new()),
        Err(f) => (f.code, out, format!("error: {}\n", f.message)),
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, err) = run_to_string(args);
    print!("{out}");
    eprint!("{err}");
    code
}
