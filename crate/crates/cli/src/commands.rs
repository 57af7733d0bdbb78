use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use gfd_core::basis::{builtin_basis, BasisKind};
use gfd_core::decompose::reconstruct_spectrum;
use gfd_core::io::{
    basis_from_json, decomposition_from_json, decomposition_to_json, format_real, read_signal, schedule_from_json,
    write_fourier_spectrum, write_generalized_spectrum, write_signal,
};
use gfd_core::{
    analyze, analyze_direct, analyze_fourier, analyze_indirect, analyze_multiband, band_filter, check_convergence,
    check_independence, classify_orthogonality, frame_bounds, generalized_spectrum, norm, parseval_power, reconstruct,
    residual, rms_error, BasisPair, BasisSchedule, Decomposition, Method, PeriodicSignal, Tolerances,
};

use crate::args::{
    AnalyzeArgs, BasisArgs, CheckBasisArgs, Command, CompareArgs, FilterArgs, FourierArgs, ReconstructArgs,
    SpectrumArgs,
};
use crate::{CliError, Outcome};

type CliResult<T> = Result<T, CliError>;

pub(crate) fn dispatch(cmd: Command, stdout: &mut dyn Write) -> CliResult<Outcome> {
    match cmd {
        Command::CheckBasis(a) => check_basis(a, stdout),
        Command::Analyze(a) => run_analyze(a, stdout),
        Command::Reconstruct(a) => run_reconstruct(a, stdout),
        Command::Spectrum(a) => run_spectrum(a, stdout),
        Command::Filter(a) => run_filter(a, stdout),
        Command::Compare(a) => run_compare(a, stdout),
        Command::Fourier(a) => run_fourier(a, stdout),
    }
}

// ---------------------------------------------------------------- plumbing

/// Human-readable report lines go to stdout, unless stdout already carries
/// the artifact, in which case they go to stderr.
struct Reporter<'a> {
    stdout: &'a mut dyn Write,
    artifact_on_stdout: bool,
}

impl<'a> Reporter<'a> {
    fn new(stdout: &'a mut dyn Write, out: Option<&PathBuf>) -> Self {
        Self {
            stdout,
            artifact_on_stdout: out.is_none(),
        }
    }

    fn artifact(&mut self, out: Option<&PathBuf>, bytes: &[u8]) -> CliResult<()> {
        match out {
            Some(path) => write_file(path, bytes),
            None => Ok(self.stdout.write_all(bytes)?),
        }
    }

    fn line(&mut self, text: &str) -> CliResult<()> {
        if self.artifact_on_stdout {
            eprintln!("{text}");
            Ok(())
        } else {
            Ok(writeln!(self.stdout, "{text}")?)
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_signal(path: &Path) -> CliResult<PeriodicSignal> {
    let file = fs::File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    read_signal(std::io::BufReader::new(file)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_decomposition(path: &Path) -> CliResult<Decomposition> {
    decomposition_from_json(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn check_samples(n: usize) -> CliResult<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(usage(format!("--samples must be even and at least 4, got {n}")));
    }
    Ok(())
}

fn check_order(order: usize, n: usize) -> CliResult<()> {
    if order == 0 || order > n / 2 - 1 {
        return Err(usage(format!(
            "order must be in 1..={} for {n} samples, got {order}",
            n / 2 - 1
        )));
    }
    Ok(())
}

fn to_bytes(f: impl FnOnce(&mut Vec<u8>) -> gfd_core::Result<()>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn pretty_json<T: Serialize>(v: &T) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Domain(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

enum Source {
    Pair(BasisPair),
    Schedule(BasisSchedule),
}

fn load_basis(a: &BasisArgs) -> CliResult<Source> {
    if let Some(path) = &a.schedule {
        let text = read_text(path)?;
        return schedule_from_json(&text)
            .map(Source::Schedule)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    match a.basis.parse::<BasisKind>() {
        Ok(BasisKind::Custom) => Err(usage("custom bases are read from a basis JSON file")),
        Ok(kind) => {
            let (ds, dr) = kind.default_phases();
            builtin_basis(kind, a.phase_s.unwrap_or(ds), a.phase_r.unwrap_or(dr), a.depth)
                .map(Source::Pair)
                .map_err(CliError::input)
        }
        Err(_) => {
            if a.phase_s.is_some() || a.phase_r.is_some() {
                return Err(usage("--phase-s/--phase-r apply to builtin bases only"));
            }
            let path = Path::new(&a.basis);
            let text = read_text(path)?;
            basis_from_json(&text)
                .map(Source::Pair)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
    }
}

fn require_pair(src: Source, what: &str) -> CliResult<BasisPair> {
    match src {
        Source::Pair(p) => Ok(p),
        Source::Schedule(_) => Err(usage(format!("{what} needs a single basis pair, not a schedule"))),
    }
}

fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

// ---------------------------------------------------------------- check-basis

#[derive(Debug, Serialize)]
struct IndependenceJson {
    pass: bool,
    direct_product: f64,
    cross_product: f64,
    margin: f64,
}

#[derive(Debug, Serialize)]
struct ConvergenceJson {
    pass: bool,
    min_eigenvalue: f64,
    max_eigenvalue: f64,
}

#[derive(Debug, Serialize)]
struct OrthogonalityJson {
    horizontal: String,
    vertical: String,
    max_horizontal: f64,
    max_vertical: f64,
}

#[derive(Debug, Serialize)]
struct FrameBoundsJson {
    order: usize,
    lower: f64,
    upper: f64,
}

#[derive(Debug, Serialize)]
struct SegmentReport {
    start_k: usize,
    label: String,
    independence: IndependenceJson,
    convergence: ConvergenceJson,
    orthogonality: OrthogonalityJson,
    frame_bounds: FrameBoundsJson,
}

#[derive(Debug, Serialize)]
struct CheckReport {
    pass: bool,
    segments: Vec<SegmentReport>,
}

fn check_pair(pair: &BasisPair, start_k: usize, order: usize, tol: &Tolerances) -> CliResult<SegmentReport> {
    let ind = check_independence(pair, tol);
    let conv = check_convergence(pair, tol);
    let orth = classify_orthogonality(pair, order, tol);
    let fb = frame_bounds(pair, order)?;
    Ok(SegmentReport {
        start_k,
        label: pair.label.clone(),
        independence: IndependenceJson {
            pass: ind.independent,
            direct_product: ind.direct_product,
            cross_product: ind.cross_product,
            margin: ind.margin(),
        },
        convergence: ConvergenceJson {
            pass: conv.converges,
            min_eigenvalue: conv.min_eigenvalue,
            max_eigenvalue: conv.max_eigenvalue,
        },
        orthogonality: OrthogonalityJson {
            horizontal: orth.horizontal.to_string(),
            vertical: orth.vertical.to_string(),
            max_horizontal: orth.max_horizontal,
            max_vertical: orth.max_vertical,
        },
        frame_bounds: FrameBoundsJson {
            order,
            lower: fb.lower,
            upper: fb.upper,
        },
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn check_basis(a: CheckBasisArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    if a.order == 0 {
        return Err(usage("--order must be at least 1"));
    }
    let tol = a.tol.tolerances();
    let segments: Vec<(usize, BasisPair)> = match load_basis(&a.basis)? {
        Source::Pair(p) => vec![(1, p)],
        Source::Schedule(s) => s.segments().iter().map(|g| (g.start_k, g.pair.clone())).collect(),
    };
    let reports = segments
        .iter()
        .map(|(k, p)| check_pair(p, *k, a.order, &tol))
        .collect::<CliResult<Vec<_>>>()?;
    // Inside a schedule only the last segment has to converge; earlier ones
    // may diverge because a later basis takes over the high harmonics.
    let last = reports.len() - 1;
    let pass = reports
        .iter()
        .enumerate()
        .all(|(i, r)| r.independence.pass && (i < last || r.convergence.pass));

    for r in &reports {
        if reports.len() > 1 {
            writeln!(stdout, "segment from k = {}", r.start_k)?;
        }
        let i = &r.independence;
        let c = &r.convergence;
        let o = &r.orthogonality;
        let f = &r.frame_bounds;
        writeln!(stdout, "basis: {}", r.label)?;
        writeln!(
            stdout,
            "independence: {} (|s1 r'1| = {}, |s'1 r1| = {}, margin = {})",
            verdict(i.pass),
            sci(i.direct_product),
            sci(i.cross_product),
            sci(i.margin)
        )?;
        writeln!(
            stdout,
            "convergence: {} (eigenvalues of Q: {}, {})",
            verdict(c.pass),
            sci(c.min_eigenvalue),
            sci(c.max_eigenvalue)
        )?;
        writeln!(
            stdout,
            "orthogonality: horizontal {} (max {}), vertical {} (max {})",
            o.horizontal,
            sci(o.max_horizontal),
            o.vertical,
            sci(o.max_vertical)
        )?;
        writeln!(
            stdout,
            "frame bounds (N = {}): lower = {}, upper = {}",
            f.order,
            sci(f.lower),
            sci(f.upper)
        )?;
    }
    writeln!(stdout, "verdict: {}", verdict(pass))?;

    let report = CheckReport {
        pass,
        segments: reports,
    };
    if let Some(path) = &a.json_out {
        write_file(path, &pretty_json(&report)?)?;
    }
    Ok(if pass { Outcome::Ok } else { Outcome::Failed })
}

// ---------------------------------------------------------------- analyze

fn decompose(
    f: &PeriodicSignal,
    src: &Source,
    order: usize,
    method: Method,
    a: &AnalyzeArgs,
) -> CliResult<Decomposition> {
    let tol = a.tol.tolerances();
    Ok(match (src, method) {
        (Source::Pair(p), _) => analyze(f, p, order, method, a.pruning, &tol)?,
        (Source::Schedule(s), Method::Indirect) => analyze_multiband(f, s, order, &tol)?,
        (Source::Schedule(_), Method::Direct) => {
            return Err(usage("the direct method needs a single basis pair, not a schedule"))
        }
    })
}

/// First harmonic whose residual coefficient exceeds `tol`.
pub(crate) fn noise_onset(r: &PeriodicSignal, tol: f64) -> CliResult<Option<usize>> {
    let spec = analyze_fourier(r, r.max_harmonic())?;
    let onset = spec
        .terms()
        .find(|(_, a, b)| a.abs() > tol || b.abs() > tol)
        .map(|(k, _, _)| k);
    Ok(onset)
}

fn run_analyze(a: AnalyzeArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let f = load_signal(&a.input)?;
    check_order(a.order, f.len())?;
    let src = load_basis(&a.basis)?;
    let d = decompose(&f, &src, a.order, a.method, &a)?;
    let r = residual(&f, &d)?;
    let onset = noise_onset(&r, a.noise_tol)?;

    let mut rep = Reporter::new(stdout, a.out.as_ref());
    rep.artifact(a.out.as_ref(), decomposition_to_json(&d)?.as_bytes())?;
    rep.line(&format!("method: {}", d.method))?;
    rep.line(&format!("order: {}", d.order()))?;
    if let Some(cond) = d.condition_estimate {
        let flag = if d.is_ill_conditioned(&a.tol.tolerances()) {
            " (ill-conditioned)"
        } else {
            ""
        };
        rep.line(&format!("condition: {}{flag}", sci(cond)))?;
    }
    rep.line(&format!("residual norm: {}", sci(norm(&r))))?;
    rep.line(&match onset {
        Some(k) => format!("residual content above {} starts at harmonic {k}", sci(a.noise_tol)),
        None => format!("no residual harmonic above {}", sci(a.noise_tol)),
    })?;
    Ok(Outcome::Ok)
}

// ---------------------------------------------------------------- reconstruct / spectrum / filter

fn run_reconstruct(a: ReconstructArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    check_samples(a.samples)?;
    let d = load_decomposition(&a.input)?;
    check_order(d.order(), a.samples)?;
    let s = reconstruct(&d, a.samples)?;
    let bytes = to_bytes(|buf| write_signal(&s, buf))?;
    Reporter::new(stdout, a.out.as_ref()).artifact(a.out.as_ref(), &bytes)?;
    Ok(Outcome::Ok)
}

#[derive(Debug, Serialize)]
struct SpectrumTotals {
    band_cap: usize,
    c0_sq: f64,
    total: f64,
    parseval_lhs: f64,
}

fn run_spectrum(a: SpectrumArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    check_samples(a.samples)?;
    let d = load_decomposition(&a.input)?;
    let cap = a.samples / 2 - 1;
    let g = generalized_spectrum(&d, cap);
    let bytes = to_bytes(|buf| write_generalized_spectrum(&g, buf))?;
    Reporter::new(stdout, a.out.as_ref()).artifact(a.out.as_ref(), &bytes)?;
    if let Some(path) = &a.json_out {
        let totals = SpectrumTotals {
            band_cap: cap,
            c0_sq: g.c0_sq,
            total: g.total(),
            parseval_lhs: parseval_power(&reconstruct_spectrum(&d, cap)),
        };
        write_file(path, &pretty_json(&totals)?)?;
    }
    Ok(Outcome::Ok)
}

fn run_filter(a: FilterArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let d = load_decomposition(&a.input)?;
    let kept = band_filter(&d, a.keep_from, a.keep_to)?;
    if let Some(path) = &a.csv_out {
        check_samples(a.samples)?;
        check_order(kept.order(), a.samples)?;
        let s = reconstruct(&kept, a.samples)?;
        write_file(path, &to_bytes(|buf| write_signal(&s, buf))?)?;
    }
    Reporter::new(stdout, a.out.as_ref()).artifact(a.out.as_ref(), decomposition_to_json(&kept)?.as_bytes())?;
    Ok(Outcome::Ok)
}

// ---------------------------------------------------------------- compare / fourier

fn run_compare(a: CompareArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let f = load_signal(&a.input)?;
    for &order in &a.orders {
        check_order(order, f.len())?;
    }
    let pair = require_pair(load_basis(&a.basis)?, "compare")?;
    let tol = a.tol.tolerances();
    let mut out = String::from("order,k,a_direct,b_direct,a_indirect,b_indirect,rms_direct,rms_indirect\n");
    for &order in &a.orders {
        let direct = analyze_direct(&f, &pair, order, a.pruning, &tol)?;
        let indirect = analyze_indirect(&f, &pair, order, &tol)?;
        let (rd, ri) = (rms_error(&f, &direct)?, rms_error(&f, &indirect)?);
        for k in 1..=order {
            out.push_str(&format!(
                "{order},{k},{},{},{},{},{},{}\n",
                format_real(direct.a(k)),
                format_real(direct.b(k)),
                format_real(indirect.a(k)),
                format_real(indirect.b(k)),
                format_real(rd),
                format_real(ri),
            ));
        }
    }
    Reporter::new(stdout, a.out.as_ref()).artifact(a.out.as_ref(), out.as_bytes())?;
    Ok(Outcome::Ok)
}

fn run_fourier(a: FourierArgs, stdout: &mut dyn Write) -> CliResult<Outcome> {
    let f = load_signal(&a.input)?;
    let order = a.order.unwrap_or(f.max_harmonic());
    check_order(order, f.len())?;
    let spec = analyze_fourier(&f, order)?;
    let bytes = to_bytes(|buf| write_fourier_spectrum(&spec, buf))?;
    Reporter::new(stdout, a.out.as_ref()).artifact(a.out.as_ref(), &bytes)?;
    Ok(Outcome::Ok)
}
