//! Command-line front end.
//!
//! [`run`] takes the argument list and output streams and returns the
//! process exit code, so the binary stays a one-liner and tests can drive
//! commands in-process.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{
    build_cc_phi_add_mod, build_cmult_mod, build_controlled_swap_register, build_controlled_ua, build_phi_add_const,
    build_qft, BlockParams,
};
use crate::circuit::{json, Circuit};
use crate::error::{Error, Result};
use crate::numtheory::{shor_factor, FactorConfig, FactorFailure, FactorizationResult};
use crate::orderfind::{
    build_order_finding_circuit, phase_to_order, run_semiclassical_order_finding_traced, OrderFindingParams,
    OrderReport,
};
use crate::resources::{self, estimate, KmaxRule, ResourceReport};
use crate::simulator::Simulator;
use crate::verify::{self, Fault, SuiteReport, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

pub const SEED_ENV: &str = "SHOR_SEED";

/// Largest `n` run with the exact transform by default.
pub const EXACT_KMAX_UP_TO: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "shor", version, about = "Shor order finding with a 2n+3 qubit circuit")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed; drawn from the OS when neither this nor SHOR_SEED is set.
    #[arg(long, global = true, env = SEED_ENV)]
    seed: Option<u64>,

    /// Rotation cutoff of every Fourier transform: a positive integer or "exact".
    #[arg(long, global = true, value_parser = parse_kmax)]
    kmax: Option<Kmax>,

    /// Bases tried before `factor` gives up.
    #[arg(long, global = true, default_value_t = 10)]
    max_attempts: usize,

    /// Base for `factor` instead of a random one.
    #[arg(long = "a", global = true)]
    forced_a: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(long, global = true, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor N.
    Factor { n: u64 },
    /// Run one order-finding circuit for a modulo N.
    Order { n: u64, a: u64 },
    /// Gate, depth and qubit counts for an n-bit modulus.
    Resources { n: usize },
    /// Write a circuit as JSON.
    Emit {
        n: u64,
        a: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = BlockArg::Order)]
        block: BlockArg,
    },
    /// Run the exhaustive small-instance oracle suites.
    Verify {
        /// Run only this suite.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kmax {
    Exact,
    Value(usize),
}

fn parse_kmax(s: &str) -> std::result::Result<Kmax, String> {
    if s.eq_ignore_ascii_case("exact") {
        return Ok(Kmax::Exact);
    }
    match s.parse::<usize>() {
        Ok(0) => Err("kmax must be at least 1".into()),
        Ok(k) => Ok(Kmax::Value(k)),
        Err(_) => Err(format!("'{s}' is neither a positive integer nor \"exact\"")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    /// Resource table rows; only `resources` supports it.
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BlockArg {
    Qft,
    Phiadd,
    Ccaddmod,
    Cmult,
    Cswap,
    Cua,
    Order,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    NegatePhase,
}

/// `kmax` for an `n`-bit modulus: explicit value, or exact up to
/// [`EXACT_KMAX_UP_TO`] and logarithmic above.
pub fn resolve_kmax(kmax: Option<Kmax>, n: usize) -> usize {
    let rule = match kmax {
        Some(Kmax::Exact) => KmaxRule::Exact,
        Some(Kmax::Value(k)) => return k,
        None if n <= EXACT_KMAX_UP_TO => KmaxRule::Exact,
        None => KmaxRule::Logarithmic,
    };
    rule.kmax_for(n)
}

/// Usage line of the subcommand named in `args`, or of the whole tool.
fn usage_for(args: &[std::ffi::OsString]) -> String {
    use clap::CommandFactory;
    let mut cmd = Cli::command();
    let name = args.iter().skip(1).find_map(|a| {
        let a = a.to_str()?;
        cmd.get_subcommands().any(|s| s.get_name() == a).then(|| a.to_string())
    });
    match name.and_then(|n| cmd.find_subcommand_mut(&n).cloned()) {
        Some(mut sub) => sub.render_usage().to_string().replacen("Usage: ", "Usage: shor ", 1),
        None => cmd.render_usage().to_string(),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    seed: u64,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(value)?)?;
        Ok(())
    }

    fn text(&mut self, s: &str) -> Result<()> {
        self.out.write_all(s.as_bytes())?;
        Ok(())
    }

    fn no_csv(&self, command: &str) -> Result<()> {
        match self.cli.format {
            Format::Csv => Err(Error::InvalidParameter(format!("--format csv is not supported by {command}"))),
            _ => Ok(()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let mut text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    if !text.contains("Usage:") {
                        text.push('\n');
                        text.push_str(&usage_for(&args));
                        text.push('\n');
                    }
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let seed = cli.seed.unwrap_or_else(|| rand::thread_rng().gen());
    let mut ctx = Ctx { cli: &cli, seed, out };
    let result = match &cli.command {
        Command::Factor { n } => cmd_factor(&mut ctx, *n),
        Command::Order { n, a } => cmd_order(&mut ctx, *n, *a),
        Command::Resources { n } => cmd_resources(&mut ctx, *n),
        Command::Emit { n, a, output, block } => cmd_emit(&mut ctx, *n, *a, output.as_deref(), *block),
        Command::Verify { suite } => cmd_verify(&mut ctx, suite.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::AttemptsExhausted { .. } => EXIT_EXHAUSTED,
                _ => EXIT_USAGE,
            }
        }
    }
}

#[derive(Serialize)]
struct FactorJson<'a> {
    seed: u64,
    #[serde(flatten)]
    result: &'a FactorizationResult,
    cofactor: u64,
}

#[derive(Serialize)]
struct FailureJson<'a> {
    seed: u64,
    #[serde(rename = "N")]
    modulus: u64,
    factor: Option<u64>,
    attempts: &'a [crate::numtheory::Attempt],
}

fn attempt_lines(s: &mut String, attempts: &[crate::numtheory::Attempt]) {
    for at in attempts {
        let r = at.r.map_or("-".to_string(), |r| r.to_string());
        let outcome = serde_json::to_value(at.outcome).ok().and_then(|v| v.as_str().map(String::from));
        let _ = writeln!(s, "  a = {:<6} r = {:<6} {}", at.a, r, outcome.unwrap_or_default());
    }
}

fn cmd_factor(ctx: &mut Ctx, n: u64) -> Result<i32> {
    ctx.no_csv("factor")?;
    let bits = BlockParams::bits_of(n);
    let config = FactorConfig {
        max_attempts: ctx.cli.max_attempts,
        forced_a: ctx.cli.forced_a,
        kmax: Some(resolve_kmax(ctx.cli.kmax, bits)),
    };
    let mut rng = ctx.rng();
    match shor_factor(n, &config, &mut rng)? {
        Ok(res) => {
            if ctx.cli.format == Format::Json {
                ctx.json(&FactorJson { seed: ctx.seed, result: &res, cofactor: n / res.factor })?;
            } else {
                let route = serde_json::to_value(res.route)?;
                let mut s = format!(
                    "N = {n}\nfactor = {} x {}\nroute = {}\nseed = {}\n",
                    res.factor,
                    n / res.factor,
                    route.as_str().unwrap_or_default(),
                    ctx.seed
                );
                if !res.attempts.is_empty() {
                    s.push_str("attempts:\n");
                    attempt_lines(&mut s, &res.attempts);
                }
                ctx.text(&s)?;
            }
            Ok(EXIT_OK)
        }
        Err(FactorFailure { modulus, attempts }) => {
            if ctx.cli.format == Format::Json {
                ctx.json(&FailureJson { seed: ctx.seed, modulus, factor: None, attempts: &attempts })?;
            } else {
                let mut s = format!("N = {n}\nno factor found (N may be prime)\nseed = {}\nattempts:\n", ctx.seed);
                attempt_lines(&mut s, &attempts);
                ctx.text(&s)?;
            }
            Err(Error::AttemptsExhausted { modulus, attempts: attempts.len() })
        }
    }
}

#[derive(Serialize)]
struct OrderJson {
    seed: u64,
    #[serde(rename = "N")]
    modulus: u64,
    a: u64,
    qubits: usize,
    kmax: usize,
    #[serde(flatten)]
    report: OrderReport,
}

fn cmd_order(ctx: &mut Ctx, n: u64, a: u64) -> Result<i32> {
    ctx.no_csv("order")?;
    let bits = BlockParams::bits_of(n);
    let kmax = resolve_kmax(ctx.cli.kmax, bits);
    let params = OrderFindingParams::new(n, a, Some(kmax))?;
    let mut rng = ctx.rng();
    let trace = run_semiclassical_order_finding_traced(&Simulator::default(), n, a, Some(kmax), &mut rng)?;
    let result = phase_to_order(&trace.record, n, a);
    let report = OrderReport::from(&result);
    if ctx.cli.format == Format::Json {
        ctx.json(&OrderJson { seed: ctx.seed, modulus: n, a, qubits: trace.qubits, kmax: params.kmax, report })?;
    } else {
        let bits: String = report.bits.iter().map(|b| char::from(b'0' + b)).collect();
        let r = match report.r {
            Some(r) => format!("{r} (validated)"),
            None => "not found".into(),
        };
        let s = format!(
            "N = {n}, a = {a}\nqubits = {}\nkmax = {}\nbits = {bits} (first measured first)\nm = {}\nphase = {}\nr = {r}\nseed = {}\n",
            trace.qubits, params.kmax, report.m, report.phase, ctx.seed
        );
        ctx.text(&s)?;
    }
    Ok(EXIT_OK)
}

fn resources_text(r: &ResourceReport) -> String {
    let mode = match r.mode {
        resources::CountingMode::Constructed => "constructed",
        resources::CountingMode::Extrapolated => "extrapolated",
    };
    let mut s = format!(
        "n = {}\nkmax = {}\nqubits = {}\ngates = {}\ndepth = {}\nmode = {mode}\ngate counts:\n",
        r.n, r.kmax, r.qubits, r.gates_total, r.depth
    );
    for (kind, count) in r.gate_counts.iter().filter(|&(_, c)| c > 0) {
        let _ = writeln!(s, "  {:<14} {count}", kind.name());
    }
    let _ = writeln!(
        s,
        "predicted:\n  qubits         {}\n  gates          {}\n  n^3 kmax       {:.0}\n  n^3            {:.0}",
        r.predicted.qubits, r.predicted.gates_closed_form, r.predicted.gates_scale, r.predicted.depth_scale
    );
    s
}

fn cmd_resources(ctx: &mut Ctx, n: usize) -> Result<i32> {
    if !(2..=resources::MAX_EXTRAPOLATED_N).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "n = {n} is outside the supported range [2, {}]",
            resources::MAX_EXTRAPOLATED_N
        )));
    }
    let report = estimate(n, resolve_kmax(ctx.cli.kmax, n))?;
    match ctx.cli.format {
        Format::Json => ctx.json(&report)?,
        Format::Csv => {
            let csv = resources::to_csv(std::slice::from_ref(&report));
            ctx.text(&csv)?
        }
        Format::Text => ctx.text(&resources_text(&report))?,
    }
    Ok(EXIT_OK)
}

fn build_block(block: BlockArg, n: u64, a: u64, kmax: usize) -> Result<Circuit> {
    let bits = BlockParams::bits_of(n);
    // Every block is checked against the same (N, a) as the full circuit.
    OrderFindingParams::new(n, a, Some(kmax))?;
    match block {
        BlockArg::Qft => build_qft(bits + 1, kmax),
        BlockArg::Phiadd => build_phi_add_const(bits + 1, a, 0),
        BlockArg::Ccaddmod => build_cc_phi_add_mod(bits, a, n, kmax),
        BlockArg::Cmult => build_cmult_mod(bits, a, n, kmax),
        BlockArg::Cswap => build_controlled_swap_register(bits),
        BlockArg::Cua => build_controlled_ua(bits, a, n, kmax),
        BlockArg::Order => build_order_finding_circuit(n, a, Some(kmax)),
    }
}

fn cmd_emit(ctx: &mut Ctx, n: u64, a: u64, output: Option<&std::path::Path>, block: BlockArg) -> Result<i32> {
    ctx.no_csv("emit")?;
    let kmax = resolve_kmax(ctx.cli.kmax, BlockParams::bits_of(n));
    let circuit = build_block(block, n, a, kmax)?;
    let text = json::to_json_pretty(&circuit)?;
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n")
                .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
            if ctx.cli.format == Format::Text {
                let msg =
                    format!("wrote {} gates on {} qubits to {}\n", circuit.len(), circuit.num_qubits(), path.display());
                ctx.text(&msg)?;
            }
        }
        None => ctx.text(&(text + "\n"))?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &mut Ctx, suite: Option<&str>) -> Result<i32> {
    ctx.no_csv("verify")?;
    let fault = match ctx.cli.inject_fault {
        Some(FaultArg::NegatePhase) => Fault::NegatePhase,
        None => Fault::None,
    };
    let names: Vec<&str> = match suite {
        Some(s) => vec![s],
        None => SUITES.to_vec(),
    };
    let reports: Vec<SuiteReport> =
        names.par_iter().map(|name| verify::run_suite(name, fault)).collect::<Result<_>>()?;
    let all_passed = reports.iter().all(SuiteReport::passed);
    if ctx.cli.format == Format::Json {
        ctx.json(&reports)?;
    } else {
        let mut s = String::new();
        for r in &reports {
            let status = if r.passed() { "ok" } else { "FAILED" };
            let _ = writeln!(s, "{:<10} {:>6} checks {:>6} failures  {status}", r.name, r.checks, r.failures);
            if let Some(f) = &r.first_failure {
                let _ = writeln!(s, "           first failure: {f}");
            }
        }
        ctx.text(&s)?;
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
