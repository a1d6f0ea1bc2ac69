//! `qso-spectra`: runs the verification suites and spectrum generators and
//! prints JSON (or CSV) reports.
//!
//! Exit codes: 0 everything verified, 1 something only probable or
//! undecided, 2 a definite failure or invalid input.

mod config;

use clap::{Args, Parser, Subcommand};
use config::{Format, RunConfig, SpectralConfig};
use num_rational::BigRational;
use qso_core::action::Actions;
use qso_core::exterior::{
    kappa_power, mask_indices, verify_f_properties, verify_lefschetz_iso, verify_nonprimitive, ExtParams,
};
use qso_core::field::{fmt_rational, AtV, Specialize, Q2};
use qso_core::lemma::{verify_spherical_identities, verify_with, y_elem, z_elem, Checker};
use qso_core::orbit::{orbit_scan, verify_pair_projection, OrbitContext};
use qso_core::rep::{vector_rep_with, verify_qea_relations_with, RepConvention};
use qso_core::spectrum::{check_divergence, spectrum_table, validate_params, SpectrumError};
use qso_core::verify::{hw_check, verify_covariance};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 7;
const DEFAULT_Q: [&str; 2] = ["11/10", "101/100"];

#[derive(Parser)]
#[command(name = "qso-spectra", version, about = "Exact verification suites for quantum orthogonal groups and quantum quadrics")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Matrix size N (at least 5).
    #[arg(long = "n", global = true)]
    n: Option<usize>,
    /// Seed for randomized specializations.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "QSO_SPECTRA_JOBS")]
    jobs: Option<usize>,
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Keep wall-clock timings in reports (they are zeroed otherwise).
    #[arg(long, global = true)]
    timings: bool,
    /// Sample value of q, as "p/q"; repeatable.
    #[arg(long = "q", global = true)]
    q: Vec<String>,
    /// Short-node convention: q^1/2, q or q^2.
    #[arg(long, global = true)]
    q2: Option<String>,
    /// Comma-separated plus-side lambdas.
    #[arg(long, global = true, value_delimiter = ',')]
    lambda_plus: Option<Vec<String>>,
    /// Comma-separated minus-side lambdas.
    #[arg(long, global = true, value_delimiter = ',')]
    lambda_minus: Option<Vec<String>>,
    /// Allow q = 1 among the samples.
    #[arg(long, global = true)]
    classical: bool,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Cmd {
    /// Algebra-level checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Fiber exterior algebra checks.
    #[command(subcommand)]
    Fiber(FiberCmd),
    /// Laplacian eigenvalues on zero forms.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Full pipeline, stopping at the first definite failure.
    All,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Commutation relation families of the coordinate algebra.
    Rels,
    /// Quantum group relations on the vector representation.
    Rep,
    /// Invariance of the relation span under the actions.
    Covariance {
        #[arg(long)]
        detailed: bool,
    },
    /// Commutation identities and highest weights of z and y.
    Spherical,
    /// Orbit of y under the F-sequence and the fiber projection.
    Orbit,
}

#[derive(Subcommand)]
enum FiberCmd {
    /// Coefficients of the powers of the Kähler form.
    KappaPowers {
        #[arg(long = "l")]
        l: Option<usize>,
    },
    /// Bijectivity of the Lefschetz powers.
    Lefschetz,
    /// Non-primitivity of the top Lefschetz image.
    Nonprimitive,
}

#[derive(Args, Clone, Default)]
struct SpecArgs {
    /// Parameter set: default or boundary.
    #[arg(long, default_value = "default")]
    params: String,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu_y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu_z: Option<String>,
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Eigenvalues and multiplicities on a grid of (k, l).
    Table {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 5)]
        kmax: u64,
        #[arg(long, default_value_t = 5)]
        lmax: u64,
    },
    /// Divergence of the shell minima past a bound.
    Diverge {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "1000")]
        bound: String,
        #[arg(long, default_value_t = 500)]
        shell_max: usize,
    },
}

/// Settings after merging the config file and flags.
struct Ctx {
    n: usize,
    seed: u64,
    q_samples: Vec<BigRational>,
    q2: Q2,
    lambda_plus: Option<Vec<BigRational>>,
    lambda_minus: Option<Vec<BigRational>>,
    spectral: SpectralConfig,
    format: Format,
    out: Option<PathBuf>,
    timings: bool,
    verbosity: u8,
}

struct Outcome {
    code: u8,
    report: Value,
    csv: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn resolve(c: &Common) -> Result<Ctx, String> {
    let file = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let n = c.n.or(file.n).ok_or("--n is required (or N in the config)")?;
    if n < 5 {
        return Err(format!("N = {n}: N must be at least 5"));
    }
    let qs: Vec<String> = if !c.q.is_empty() {
        c.q.clone()
    } else if let Some(q) = &file.q_samples {
        q.clone()
    } else {
        DEFAULT_Q.iter().map(|s| s.to_string()).collect()
    };
    let q_samples = config::rationals(&qs)?;
    let classical = c.classical || file.classical.unwrap_or(false);
    let one = BigRational::from_integer(1.into());
    for q in &q_samples {
        if *q < one || (*q == one && !classical) {
            return Err(format!("q = {}: samples must exceed 1 (pass --classical to allow q = 1)", fmt_rational(q)));
        }
    }
    if q_samples.is_empty() {
        return Err("at least one q sample is required".into());
    }
    let q2 = match c.q2.as_ref().or(file.q2_convention.as_ref()) {
        Some(s) => config::q2(s)?,
        None => Q2::HalfQ,
    };
    let lam = |flag: &Option<Vec<String>>, cfg: &Option<Vec<String>>| -> Result<Option<Vec<BigRational>>, String> {
        flag.as_ref().or(cfg.as_ref()).map(|v| config::rationals(v)).transpose()
    };
    Ok(Ctx {
        n,
        seed: c.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        q_samples,
        q2,
        lambda_plus: lam(&c.lambda_plus, &file.lambda_plus)?,
        lambda_minus: lam(&c.lambda_minus, &file.lambda_minus)?,
        spectral: file.spectral.unwrap_or_default(),
        format: c.format.or(file.format).unwrap_or_default(),
        out: c.out.clone().or(file.out),
        timings: c.timings,
        verbosity: c.verbose.max(file.verbosity.unwrap_or(0)),
    })
    .and_then(|ctx| {
        if let Some(j) = c.jobs.or(file.jobs) {
            if j == 0 {
                return Err("--jobs must be positive".into());
            }
            // a second initialisation in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
        }
        Ok(ctx)
    })
}

impl Ctx {
    fn convention(&self) -> RepConvention {
        RepConvention { q2: self.q2, ..RepConvention::default() }
    }

    fn ext_params(&self) -> Result<ExtParams, String> {
        let m = self.n - 2;
        let one = || vec![BigRational::from_integer(1.into()); m];
        let plus = self.lambda_plus.clone().unwrap_or_else(one);
        let minus = self.lambda_minus.clone().unwrap_or_else(one);
        ExtParams::with_lambdas(m, plus, minus).map_err(|e| e.to_string())
    }

    fn spectral_params(&self, a: &SpecArgs) -> Result<qso_core::spectrum::SpectralParams, String> {
        let pick = |flag: &Option<String>, cfg: &Option<String>| flag.clone().or_else(|| cfg.clone());
        let s = &self.spectral;
        let over = SpectralConfig {
            theta: pick(&a.theta, &s.theta),
            theta1: pick(&a.theta1, &s.theta1),
            theta2: pick(&a.theta2, &s.theta2),
            theta3: pick(&a.theta3, &s.theta3),
            mu_y: pick(&a.mu_y, &s.mu_y),
            mu_z: pick(&a.mu_z, &s.mu_z),
        };
        config::spectral(&a.params, self.n, self.q_samples[0].clone(), &over)
    }
}

fn verify_rels(ctx: &Ctx) -> Result<Outcome, String> {
    let checker = Checker::new(ctx.n, ctx.seed).map_err(|e| e.to_string())?;
    let mut rep = verify_with(&checker);
    if !ctx.timings {
        rep.instances.iter_mut().for_each(|r| r.millis = 0);
    }
    Ok(Outcome { code: rep.severity(), report: to_value(&rep), csv: None })
}

fn verify_rep(ctx: &Ctx) -> Result<Outcome, String> {
    let rep = verify_qea_relations_with(ctx.n, ctx.convention()).map_err(|e| e.to_string())?;
    Ok(Outcome { code: if rep.all_ok { 0 } else { 2 }, report: to_value(&rep), csv: None })
}

fn verify_cov(ctx: &Ctx, detailed: bool) -> Result<Outcome, String> {
    let checker = Checker::new(ctx.n, ctx.seed).map_err(|e| e.to_string())?;
    let act = Actions::new(&vector_rep_with(ctx.n, ctx.convention()).map_err(|e| e.to_string())?);
    let rep = verify_covariance(&checker.rels, &checker.rw, &act, detailed);
    Ok(Outcome { code: if rep.all_ok() { 0 } else { 2 }, report: to_value(&rep), csv: None })
}

fn verify_spherical(ctx: &Ctx) -> Result<Outcome, String> {
    let checker = Checker::new(ctx.n, ctx.seed).map_err(|e| e.to_string())?;
    let mut ids = verify_spherical_identities(&checker);
    if !ctx.timings {
        ids.iter_mut().for_each(|r| r.millis = 0);
    }
    let rep = vector_rep_with(ctx.n, ctx.convention()).map_err(|e| e.to_string())?;
    let act = Actions::new(&rep);
    let two = BigRational::from_integer(2.into());
    let zw: Vec<BigRational> = rep.cartan.fundamental[0].iter().map(|x| x * &two).collect();
    let hw = [
        hw_check("z", &z_elem(ctx.n), &zw, &rep, &act, &checker.rw),
        hw_check("y", &y_elem(ctx.n), &rep.cartan.y_weight(), &rep, &act, &checker.rw),
    ];
    let mut code = ids.iter().map(|r| r.status.severity()).max().unwrap_or(0);
    if hw.iter().any(|h| !h.ok) {
        code = 2;
    }
    Ok(Outcome { code, report: json!({ "n": ctx.n, "identities": ids, "highest_weight": hw }), csv: None })
}

fn verify_orbit(ctx: &Ctx) -> Result<Outcome, String> {
    let oc = OrbitContext::new(ctx.n).map_err(|e| e.to_string())?;
    let q = &ctx.q_samples[0];
    let mut scan = orbit_scan(&oc, q).map_err(|e| e.to_string())?;
    if ctx.verbosity == 0 {
        scan.trace.clear();
    }
    let pair = verify_pair_projection(&oc, q).map_err(|e| e.to_string())?;
    let code = if scan.ok && pair.ok { 0 } else { 2 };
    Ok(Outcome { code, report: json!({ "orbit": scan, "pair_projection": pair }), csv: None })
}

fn fiber_kappa(ctx: &Ctx, l: Option<usize>) -> Result<Outcome, String> {
    let params = ctx.ext_params()?;
    let rep = verify_f_properties(&params, &ctx.q_samples).map_err(|e| e.to_string())?;
    let at1 = AtV::new(BigRational::from_integer(1.into()));
    let levels: Vec<usize> = match l {
        Some(l) if l > params.m => return Err(format!("l = {l} exceeds M = {}", params.m)),
        Some(l) => vec![l],
        None => (0..=params.m).collect(),
    };
    let mut powers = Vec::new();
    for l in levels {
        let kp = kappa_power(&params, l);
        let mut entries = Vec::new();
        for (&(p, n), c) in kp.form.terms() {
            let f1 = at1.map(c).map(|x| fmt_rational(&x)).ok();
            entries.push(json!({ "plus": mask_indices(p), "minus": mask_indices(n), "f": c.to_string(), "f_at_1": f1 }));
        }
        let level = rep.levels.iter().find(|x| x.l == l);
        powers.push(json!({ "l": l, "phase": kp.phase, "entries": entries, "summary": level }));
    }
    let code = if rep.ok { 0 } else { 2 };
    Ok(Outcome { code, report: json!({ "m": params.m, "powers": powers, "report": rep }), csv: None })
}

fn fiber_lefschetz(ctx: &Ctx) -> Result<Outcome, String> {
    let params = ctx.ext_params()?;
    let reps = ctx
        .q_samples
        .iter()
        .map(|q| verify_lefschetz_iso(&params, q).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let code = if reps.iter().all(|r| r.ok) { 0 } else { 2 };
    Ok(Outcome { code, report: json!({ "m": params.m, "samples": reps }), csv: None })
}

fn fiber_nonprimitive(ctx: &Ctx) -> Result<Outcome, String> {
    let rep = verify_nonprimitive(&ctx.ext_params()?, &ctx.q_samples).map_err(|e| e.to_string())?;
    Ok(Outcome { code: if rep.ok { 0 } else { 2 }, report: to_value(&rep), csv: None })
}

fn spectrum_tab(ctx: &Ctx, spec: &SpecArgs, kmax: u64, lmax: u64) -> Result<Outcome, String> {
    let p = ctx.spectral_params(spec)?;
    let validation = validate_params(&p);
    let recs = spectrum_table(&p, kmax, lmax).map_err(|e| e.to_string())?;
    let csv = if ctx.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut rows = vec![["k", "l", "value", "multiplicity", "weight"].map(String::from).to_vec()];
        for r in &recs {
            let weight: Vec<String> = r.weight.iter().map(fmt_rational).collect();
            rows.push(vec![
                r.k.to_string(),
                r.l.to_string(),
                fmt_rational(&r.value),
                r.multiplicity.to_string(),
                weight.join(";"),
            ]);
        }
        for row in rows {
            w.write_record(&row).map_err(|e| e.to_string())?;
        }
        Some(String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).expect("utf-8"))
    } else {
        None
    };
    let report = json!({ "params": validation.params, "q": fmt_rational(&p.q), "validation": validation, "records": recs });
    Ok(Outcome { code: if validation.ok { 0 } else { 1 }, report, csv })
}

fn spectrum_div(ctx: &Ctx, spec: &SpecArgs, bound: &str, shell_max: usize) -> Result<Outcome, String> {
    let p = ctx.spectral_params(spec)?;
    let bound = config::rational(bound)?;
    let validation = validate_params(&p);
    let (code, div) = match check_divergence(&p, shell_max, &bound) {
        Ok(r) => (if validation.ok { 0 } else { 1 }, to_value(&r)),
        Err(SpectrumError::BoundNotCleared(r)) => (2, to_value(&r)),
        Err(e) => return Err(e.to_string()),
    };
    Ok(Outcome { code, report: json!({ "validation": validation, "divergence": div }), csv: None })
}

fn all(ctx: &Ctx) -> Result<Outcome, String> {
    type Stage<'a> = (&'a str, Box<dyn Fn() -> Result<Outcome, String> + 'a>);
    let spec = SpecArgs { params: "default".into(), ..SpecArgs::default() };
    let stages: Vec<Stage> = vec![
        ("verify rep", Box::new(|| verify_rep(ctx))),
        ("verify rels", Box::new(|| verify_rels(ctx))),
        ("verify covariance", Box::new(|| verify_cov(ctx, false))),
        ("verify spherical", Box::new(|| verify_spherical(ctx))),
        ("verify orbit", Box::new(|| verify_orbit(ctx))),
        ("fiber kappa-powers", Box::new(|| fiber_kappa(ctx, None))),
        ("fiber lefschetz", Box::new(|| fiber_lefschetz(ctx))),
        ("fiber nonprimitive", Box::new(|| fiber_nonprimitive(ctx))),
        ("spectrum table", Box::new(|| spectrum_tab(ctx, &spec, 5, 5))),
        ("spectrum diverge", Box::new(|| spectrum_div(ctx, &spec, "1000", 500))),
    ];
    let mut code = 0;
    let mut done = Vec::new();
    for (name, f) in stages {
        let o = f()?;
        code = code.max(o.code);
        done.push(json!({ "stage": name, "exit": o.code, "report": o.report }));
        if o.code == 2 {
            break;
        }
    }
    Ok(Outcome { code, report: json!({ "n": ctx.n, "exit": code, "stages": done }), csv: None })
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let ctx = resolve(&cli.common)?;
    let is_table = matches!(cli.cmd, Cmd::Spectrum(SpectrumCmd::Table { .. }));
    if ctx.format == Format::Csv && !is_table {
        return Err("csv output is only available for spectrum table".into());
    }
    let out = match &cli.cmd {
        Cmd::Verify(VerifyCmd::Rels) => verify_rels(&ctx),
        Cmd::Verify(VerifyCmd::Rep) => verify_rep(&ctx),
        Cmd::Verify(VerifyCmd::Covariance { detailed }) => verify_cov(&ctx, *detailed),
        Cmd::Verify(VerifyCmd::Spherical) => verify_spherical(&ctx),
        Cmd::Verify(VerifyCmd::Orbit) => verify_orbit(&ctx),
        Cmd::Fiber(FiberCmd::KappaPowers { l }) => fiber_kappa(&ctx, *l),
        Cmd::Fiber(FiberCmd::Lefschetz) => fiber_lefschetz(&ctx),
        Cmd::Fiber(FiberCmd::Nonprimitive) => fiber_nonprimitive(&ctx),
        Cmd::Spectrum(SpectrumCmd::Table { spec, kmax, lmax }) => spectrum_tab(&ctx, spec, *kmax, *lmax),
        Cmd::Spectrum(SpectrumCmd::Diverge { spec, bound, shell_max }) => spectrum_div(&ctx, spec, bound, *shell_max),
        Cmd::All => all(&ctx),
    }?;
    let text = match &out.csv {
        Some(csv) => csv.clone(),
        None => serde_json::to_string_pretty(&out.report).expect("json") + "\n",
    };
    match &ctx.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => ExitCode::from(o.code),
        Err(e) => {
            eprintln!("qso-spectra: {e}");
            ExitCode::from(2)
        }
    }
}
