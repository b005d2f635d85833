//! `wsl`: enumerate small semigroups, classify the solutions of the twisted
//! Wilson equation on them, cross-check against the exact solver, and run
//! the sampled continuous-group checks.
//!
//! Exit codes: 0 all claims verified, 1 a mathematical claim failed,
//! 2 usage or input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;

use wsl_core::catalog::{
    analyze_semigroup, build_catalog, digest_bytes, emit_report, load_cayley, parse_scalar,
    report_to_string, solve_in_context, CatalogError, CatalogOptions, ReportDocument,
};
use wsl_core::characters::{enumerate_weights, AdmissibleWeight, ComplexValuedMap};
use wsl_core::continuous::{
    check_axb, check_complex_shift, check_heisenberg, check_interval, BenchError, Control,
    IntervalForm, SampledCheck,
};
use wsl_core::cyclotomic::CycNumber;
use wsl_core::semigroup::{
    enumerate_automorphisms, enumerate_semigroups, Automorphism, FiniteSemigroup,
};
use wsl_core::wilson::{
    conformance_check, ConformanceOptions, ConformanceReport, ProbeMode, ResidualForm,
    WilsonContext,
};

#[derive(Parser)]
#[command(
    name = "wsl",
    version,
    about = "Exact and sampled checks for a twisted Wilson functional equation"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report to this path (atomically) instead of stdout.
    #[arg(short, long, global = true, env = "WSL_OUTPUT")]
    output: Option<PathBuf>,
    /// Worker threads for the enumeration sweeps.
    #[arg(long, global = true, env = "WSL_JOBS")]
    jobs: Option<usize>,
    /// Per-context detail on stderr; repeat for per-character detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate semigroups up to an order and conformance-check every context.
    Gen(GenArgs),
    /// Decompose a Cayley-table file: characters, ideals, and families.
    Analyze(FileArgs),
    /// Verify the classified families against the solver on a file or a sweep.
    Conform(ConformArgs),
    /// Solve for f at a fixed g on a Cayley-table file.
    Solve(SolveArgs),
    /// Sampled checks of the four continuous example groups.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeArg {
    Auto,
    On,
    Off,
}

impl From<ProbeArg> for ProbeMode {
    fn from(p: ProbeArg) -> ProbeMode {
        match p {
            ProbeArg::Auto => ProbeMode::Auto,
            ProbeArg::On => ProbeMode::On,
            ProbeArg::Off => ProbeMode::Off,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Largest order to enumerate (capped at 4 unless unlocked).
    #[arg(long, env = "WSL_MAX_ORDER", default_value_t = 4)]
    max_order: usize,
    /// Allow order 5. The sweep grows steeply; expect a long run.
    #[arg(long)]
    unlock_order_5: bool,
    /// Exhaustive g-grid probe: auto probes orders up to 3.
    #[arg(long, value_enum, default_value_t = ProbeArg::Auto)]
    probe: ProbeArg,
}

#[derive(Args)]
struct FileArgs {
    /// Cayley-table file: the order, then that many rows of 0-based indices.
    file: PathBuf,
}

#[derive(Args)]
struct ConformArgs {
    /// Cayley-table file to check.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    file: Option<PathBuf>,
    /// Check every isomorphism class up to this order instead.
    #[arg(long)]
    all: Option<usize>,
    #[arg(long, value_enum, default_value_t = ProbeArg::Auto)]
    probe: ProbeArg,
    /// Self-test hook: negate the twisted term so every claim must fail.
    #[arg(long, hide = true)]
    self_test_break_residual: bool,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Comma-separated g values: rationals like -1/2 or report-form scalars.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    g: Vec<String>,
    /// Automorphism as a comma-separated permutation, default identity.
    #[arg(long)]
    sigma: Option<String>,
    /// Weight values, comma separated, default all 1.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Axb,
    Complex,
    Heisenberg,
    Interval,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    One,
    AbsPow,
    AbsPowSign,
}

impl From<FormArg> for IntervalForm {
    fn from(f: FormArg) -> IntervalForm {
        match f {
            FormArg::One => IntervalForm::One,
            FormArg::AbsPow => IntervalForm::AbsPow,
            FormArg::AbsPowSign => IntervalForm::AbsPowSign,
        }
    }
}

#[derive(Args)]
struct ExamplesArgs {
    #[arg(long, value_enum, default_value_t = Which::All)]
    which: Which,
    #[arg(long, env = "WSL_SAMPLES", default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "WSL_SEED", default_value_t = 20240101)]
    seed: u64,
    /// Residual bound; defaults to 1e-9, widened to 1e-7 for large parameters.
    #[arg(long, env = "WSL_TOLERANCE")]
    tolerance: Option<f64>,
    /// Negative control: perturb g by 1e-3 so the checks must fail.
    #[arg(long)]
    perturb: bool,
    /// Scale of f; also the interval exponent, e.g. 2 or 0.5-0.25i.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// ax+b exponent, e.g. 1+1i.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// First character coefficient for the complex and Heisenberg groups.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Second Heisenberg coefficient, e.g. -0.7i.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Interval scale of f.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Interval character shape; omitted means all three.
    #[arg(long, value_enum)]
    form: Option<FormArg>,
}

enum CliError {
    Catalog(CatalogError),
    Bench(BenchError),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Catalog(e) => write!(f, "{e}"),
            CliError::Bench(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::Catalog(e)
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        CliError::Bench(e)
    }
}

/// Complex literal: `2`, `1+1i`, `0.5-0.25i`, `-0.7i`, `i`, `-i`.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.trim().replace(' ', "");
    if t.is_empty() {
        return Err("empty complex literal".to_string());
    }
    if !t.ends_with('i') {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| format!("bad numeric literal '{t}'"));
    }
    let body = &t[..t.len() - 1];
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..body.len()).rev() {
        let c = bytes[k] as char;
        if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    let (re_s, im_s) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_s.is_empty() {
        0.0
    } else {
        re_s.parse::<f64>()
            .map_err(|_| format!("bad real part in '{t}'"))?
    };
    let im = match im_s {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s
            .parse::<f64>()
            .map_err(|_| format!("bad imaginary part in '{t}'"))?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_opt(value: &Option<String>, flag: &str) -> Result<Option<Complex64>, CliError> {
    value
        .as_deref()
        .map(|t| parse_complex(t).map_err(|m| CliError::Usage(format!("{flag}: {m}"))))
        .transpose()
}

fn read_input(path: &PathBuf) -> Result<(FiniteSemigroup, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(CatalogError::Io)?;
    let s = load_cayley(&text)?;
    Ok((s, digest_bytes(text.as_bytes())))
}

fn write_output(output: &Option<PathBuf>, doc: &ReportDocument) -> Result<(), CliError> {
    match output {
        Some(path) => {
            emit_report(doc, path)?;
            eprintln!("report written to {}", path.display());
        }
        None => print!("{}", report_to_string(doc)),
    }
    Ok(())
}

fn conform_reports(
    s: &FiniteSemigroup,
    probe: ProbeMode,
    form: ResidualForm,
) -> Vec<ConformanceReport> {
    let mut out = Vec::new();
    for sigma in &enumerate_automorphisms(s) {
        for weight in enumerate_weights(s, sigma) {
            let ctx = WilsonContext::with_form(s.clone(), weight, form);
            out.push(conformance_check(&ctx, ConformanceOptions { probe }));
        }
    }
    out
}

/// Findings of failing contexts always go to stderr; -v adds one line per
/// context and -vv one line per character.
fn narrate_conformance(reports: &[ConformanceReport], verbose: u8) {
    for report in reports {
        if verbose >= 1 {
            eprintln!(
                "  {}: {} characters, {}",
                report.context_id,
                report.entries.len(),
                if report.pass { "pass" } else { "FAIL" }
            );
        }
        if verbose >= 2 {
            for entry in &report.entries {
                eprintln!(
                    "    chi [{}]: {:?}, family dimension {}, oracle dimension {}",
                    entry.chi.join(", "),
                    entry.case,
                    entry.family_dimension,
                    entry.oracle_dimension
                );
            }
        }
        if !report.pass || verbose >= 1 {
            for finding in &report.findings {
                eprintln!("  {}: {}", report.context_id, finding);
            }
        }
    }
}

fn run_gen(args: &GenArgs, output: &Option<PathBuf>, verbose: u8) -> Result<bool, CliError> {
    if args.unlock_order_5 {
        eprintln!("warning: order-5 enumeration is much larger than order 4; this can take a long time");
    }
    let doc = build_catalog(
        args.max_order,
        CatalogOptions {
            probe: args.probe.into(),
            unlock_order_5: args.unlock_order_5,
        },
    )?;
    let pass = doc.overall_pass();
    let entries = doc.catalog.as_deref().unwrap_or(&[]);
    let contexts: usize = entries.iter().map(|e| e.contexts.len()).sum();
    let failing: usize = entries
        .iter()
        .flat_map(|e| &e.contexts)
        .filter(|c| !c.pass)
        .count();
    for entry in entries {
        if verbose >= 1 {
            eprintln!("order {}, table {:?}:", entry.order, entry.table);
        }
        narrate_conformance(&entry.contexts, verbose);
    }
    write_output(output, &doc)?;
    eprintln!(
        "catalog: {} classes up to order {}, {} contexts, {} failing",
        entries.len(),
        args.max_order,
        contexts,
        failing
    );
    Ok(pass)
}

fn run_analyze(args: &FileArgs, output: &Option<PathBuf>, verbose: u8) -> Result<bool, CliError> {
    let (s, digest) = read_input(&args.file)?;
    let report = analyze_semigroup(&s);
    let contexts = report.contexts.len();
    let characters: usize = report.contexts.iter().map(|c| c.characters.len()).sum();
    if verbose >= 1 {
        for ctx in &report.contexts {
            eprintln!("  {}: sigma {:?}", ctx.context_id, ctx.sigma);
            for chi in &ctx.characters {
                eprintln!(
                    "    chi [{}]: zero set {:?}, p set {:?}, {:?}, dimension {}",
                    chi.chi.join(", "),
                    chi.zero_set,
                    chi.p_set,
                    chi.case,
                    chi.family_dimension
                );
            }
        }
    }
    let mut doc = ReportDocument::new(digest);
    doc.analysis = Some(vec![report]);
    write_output(output, &doc)?;
    eprintln!(
        "analysis: order {}, {} contexts, {} nonzero characters in total",
        s.order(),
        contexts,
        characters
    );
    Ok(true)
}

fn run_conform(args: &ConformArgs, output: &Option<PathBuf>, verbose: u8) -> Result<bool, CliError> {
    let form = if args.self_test_break_residual {
        eprintln!("self-test: twisted term negated; failures are expected");
        ResidualForm::FlippedTwist
    } else {
        ResidualForm::Standard
    };
    let probe: ProbeMode = args.probe.into();
    let (reports, digest) = match (&args.file, args.all) {
        (Some(path), None) => {
            let (s, digest) = read_input(path)?;
            (conform_reports(&s, probe, form), digest)
        }
        (None, Some(max_order)) => {
            let mut reports = Vec::new();
            for n in 1..=max_order {
                let reps: Vec<FiniteSemigroup> =
                    enumerate_semigroups(n, true).map_err(CatalogError::Algebra)?.collect();
                let batches: Vec<Vec<ConformanceReport>> = reps
                    .par_iter()
                    .map(|s| conform_reports(s, probe, form))
                    .collect();
                reports.extend(batches.into_iter().flatten());
            }
            let params = format!("conform;all={max_order};probe={probe:?};form={form:?}");
            (reports, digest_bytes(params.as_bytes()))
        }
        _ => return Err(CliError::Usage("pass a file or --all ORDER".to_string())),
    };
    let failing = reports.iter().filter(|r| !r.pass).count();
    let total = reports.len();
    let pass = failing == 0;
    narrate_conformance(&reports, verbose);
    let mut doc = ReportDocument::new(digest);
    doc.conformance = Some(reports);
    write_output(output, &doc)?;
    eprintln!("conformance: {total} contexts, {failing} failing");
    Ok(pass)
}

fn parse_values(spec: &str, n: usize, flag: &str) -> Result<ComplexValuedMap, CliError> {
    let values: Vec<CycNumber> = spec
        .split(',')
        .map(|t| parse_scalar(t).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    if values.len() != n {
        return Err(CliError::Usage(format!(
            "{flag}: expected {n} values, found {}",
            values.len()
        )));
    }
    Ok(ComplexValuedMap::new(values))
}

fn run_solve(args: &SolveArgs, output: &Option<PathBuf>, verbose: u8) -> Result<bool, CliError> {
    let (s, digest) = read_input(&args.file)?;
    let n = s.order();
    let sigma = match &args.sigma {
        None => Automorphism::identity(n),
        Some(spec) => {
            let perm: Vec<usize> = spec
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("--sigma: bad entry '{t}'")))
                })
                .collect::<Result<_, _>>()?;
            Automorphism::new(&s, perm).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let mu_map = match &args.mu {
        None => ComplexValuedMap::new(vec![CycNumber::from_integer(1); n]),
        Some(spec) => parse_values(spec, n, "--mu")?,
    };
    let weight =
        AdmissibleWeight::new(&s, sigma, mu_map).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.g.len() != n {
        return Err(CliError::Usage(format!(
            "--g: expected {n} values, found {}",
            args.g.len()
        )));
    }
    let g_values: Vec<CycNumber> = args
        .g
        .iter()
        .map(|t| parse_scalar(t).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let ctx = WilsonContext::new(s, weight);
    let entry = solve_in_context(&ctx, &ComplexValuedMap::new(g_values));
    let pass = entry.family_agrees != Some(false);
    eprintln!(
        "solve: nullspace dimension {}, case {:?}, classification agrees: {}",
        entry.nullspace_dimension,
        entry.case,
        entry
            .family_agrees
            .map_or("n/a".to_string(), |b| b.to_string())
    );
    if verbose >= 1 {
        for f in &entry.basis {
            eprintln!("  f = [{}]", f.join(", "));
        }
    }
    let mut doc = ReportDocument::new(digest);
    doc.solutions = Some(vec![entry]);
    write_output(output, &doc)?;
    Ok(pass)
}

fn run_examples(args: &ExamplesArgs, output: &Option<PathBuf>, verbose: u8) -> Result<bool, CliError> {
    let control = if args.perturb {
        Control::PerturbG
    } else {
        Control::None
    };
    let alpha = parse_opt(&args.alpha, "--alpha")?;
    let lambda = parse_opt(&args.lambda, "--lambda")?;
    let a = parse_opt(&args.a, "--a")?;
    let b = parse_opt(&args.b, "--b")?;
    let c = parse_opt(&args.c, "--c")?;
    let (samples, seed, tol) = (args.samples, args.seed, args.tolerance);

    let mut checks: Vec<SampledCheck> = Vec::new();
    let wants = |w: Which| args.which == w || args.which == Which::All;
    if wants(Which::Axb) {
        checks.push(check_axb(
            alpha.unwrap_or(Complex64::new(2.0, 0.0)),
            lambda.unwrap_or(Complex64::new(1.0, 1.0)),
            samples,
            seed,
            tol,
            control,
        )?);
    }
    if wants(Which::Complex) {
        checks.push(check_complex_shift(
            alpha.unwrap_or(Complex64::new(3.0, 0.0)),
            a.unwrap_or(Complex64::new(0.5, -0.25)),
            samples,
            seed,
            tol,
            control,
        )?);
    }
    if wants(Which::Heisenberg) {
        checks.push(check_heisenberg(
            alpha.unwrap_or(Complex64::new(1.0, 0.0)),
            a.unwrap_or(Complex64::new(0.3, 0.0)),
            b.unwrap_or(Complex64::new(0.0, -0.7)),
            samples,
            seed,
            tol,
            control,
        )?);
    }
    if wants(Which::Interval) {
        let runs: Vec<(IntervalForm, f64, f64)> = match args.form {
            Some(f) => {
                let (c_def, a_def) = match f {
                    FormArg::One => (5.0, 0.0),
                    FormArg::AbsPow => (2.0, 1.5),
                    FormArg::AbsPowSign => (1.0, 0.5),
                };
                vec![(f.into(), c_def, a_def)]
            }
            None => vec![
                (IntervalForm::One, 5.0, 0.0),
                (IntervalForm::AbsPow, 2.0, 1.5),
                (IntervalForm::AbsPowSign, 1.0, 0.5),
            ],
        };
        for (form, c_def, a_def) in runs {
            checks.push(check_interval(
                c.unwrap_or(Complex64::new(c_def, 0.0)),
                form,
                alpha.unwrap_or(Complex64::new(a_def, 0.0)),
                samples,
                seed,
                tol,
                control,
            )?);
        }
    }

    for check in &checks {
        eprintln!(
            "{}: max residual {:.3e} (tolerance {:.1e}), sigma deviation {:.3e}: {}",
            check.label,
            check.max_residual,
            check.tolerance,
            check.sigma_max_deviation,
            if check.pass { "pass" } else { "FAIL" }
        );
        if verbose >= 1 {
            for (k, v) in &check.params {
                eprintln!("  {k} = {v}");
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let params = format!(
        "examples;which={:?};samples={samples};seed={seed};tolerance={tol:?};perturb={};alpha={:?};lambda={:?};a={:?};b={:?};c={:?};form={:?}",
        args.which as u8,
        args.perturb,
        args.alpha,
        args.lambda,
        args.a,
        args.b,
        args.c,
        args.form.map(|f| IntervalForm::from(f).name()),
    );
    let mut doc = ReportDocument::new(digest_bytes(params.as_bytes()));
    doc.continuous = Some(checks);
    write_output(output, &doc)?;
    Ok(pass)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.cmd {
        Cmd::Gen(args) => run_gen(args, &cli.output, cli.verbose),
        Cmd::Analyze(args) => run_analyze(args, &cli.output, cli.verbose),
        Cmd::Conform(args) => run_conform(args, &cli.output, cli.verbose),
        Cmd::Solve(args) => run_solve(args, &cli.output, cli.verbose),
        Cmd::Examples(args) => run_examples(args, &cli.output, cli.verbose),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore failures: the global pool may already exist under test harnesses
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("-3.5").unwrap(), Complex64::new(-3.5, 0.0));
        assert_eq!(parse_complex("1+1i").unwrap(), Complex64::new(1.0, 1.0));
        assert_eq!(
            parse_complex("0.5-0.25i").unwrap(),
            Complex64::new(0.5, -0.25)
        );
        assert_eq!(parse_complex("-0.7i").unwrap(), Complex64::new(0.0, -0.7));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3i").unwrap(), Complex64::new(0.0, 1e-3));
        assert_eq!(
            parse_complex("2.5e2+1E-2i").unwrap(),
            Complex64::new(250.0, 0.01)
        );
        assert!(parse_complex("").is_err());
        assert!(parse_complex("one").is_err());
        assert!(parse_complex("1+2").is_err());
    }
}
