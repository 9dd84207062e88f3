//! Command-line front end: argument parsing, report rendering and the
//! bundled self-check.
//!
//! Exit codes: `0` success, `1` usage or input error, `2` the computation ran
//! but a consistency check failed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ratmod::io::{class_label, load_surface, parse_class, ClassJson, PolyJson, SeriesConfig, SeriesReport};
use ratmod::numerics::{alpha_class, moduli_dim, perp_basis, Existence};
use ratmod::series::{extend_series, CheckStatus};
use ratmod::strata::strata_report;
use ratmod::{hilb_epoly, BettiData, KClass, Pair, PairingCtx, QPoly};

pub mod selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Parser)]
#[command(name = "ratmod", version, about = "Euler pairings, moduli dimensions and E-polynomial recursions on rational surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub emit: Emit,
    /// Surface preset (`p2`, `p1xp1:N`), a surface JSON file, or inline JSON.
    #[arg(long, global = true, default_value = "p2")]
    pub surface: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler pairing χ(x, y). Classes are `r,c1...,chi` or `(r,c1,chi)`.
    Pair {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Reflection of x through an exceptional class e0.
    Reflect {
        #[arg(long, allow_hyphen_values = true)]
        e0: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value = "left")]
        side: Side,
    },
    /// Dimension, existence, Grassmannian-bundle data and α/β classes.
    Invariants {
        /// Exceptional class; defaults to the structure sheaf.
        #[arg(long, allow_hyphen_values = true)]
        e0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// Number of copies of E0 for the Syst / Grassmannian data.
        #[arg(long)]
        n: Option<i64>,
    },
    /// Solve a Brill–Noether series from a JSON or TOML config.
    Series {
        #[arg(long)]
        config: PathBuf,
    },
    /// Stratum types of the contracted moduli space of r·e0 − a·ω.
    Strata {
        #[arg(long = "rk-e0")]
        rk_e0: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        r: i64,
    },
    /// Claimed boundary rays α_e, β_e of the nef cone.
    Nef {
        #[arg(long, allow_hyphen_values = true)]
        e0: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
    /// E-polynomial of the Hilbert scheme of n points.
    Hilb {
        #[arg(long)]
        n: usize,
    },
    /// Re-run the bundled consistency checks.
    Selftest,
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Whether to colour text output: only on a terminal and never when
/// `NO_COLOR` is set.
pub fn color_enabled() -> bool {
    use std::io::IsTerminal;
    std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

pub(crate) fn paint(text: &str, good: bool, color: bool) -> String {
    if !color {
        return text.to_string();
    }
    let code = if good { "32" } else { "31" };
    format!("\x1b[{code}m{text}\x1b[0m")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, color: bool) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, color),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: rendered }
            } else {
                Outcome::ok(rendered)
            }
        }
    }
}

pub fn run(cli: &Cli, color: bool) -> Outcome {
    match dispatch(cli, color) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::usage(e),
    }
}

type CmdResult = Result<Outcome, String>;

fn ctx_for(cli: &Cli) -> Result<PairingCtx, String> {
    Ok(PairingCtx::new(load_surface(&cli.surface).map_err(|e| e.to_string())?))
}

fn class_arg(ctx: &PairingCtx, s: &str) -> Result<KClass, String> {
    parse_class(ctx, s).map_err(|e| format!("class `{s}`: {e}"))
}

fn pair_arg(ctx: &PairingCtx, e0: Option<&str>) -> Result<Pair, String> {
    match e0 {
        None => Ok(Pair::structure_sheaf(ctx.clone())),
        Some(s) => Pair::new(ctx.clone(), class_arg(ctx, s)?).map_err(|e| e.to_string()),
    }
}

fn dispatch(cli: &Cli, color: bool) -> CmdResult {
    let s = |e: ratmod::Error| e.to_string();
    match &cli.command {
        Command::Pair { x, y } => {
            let ctx = ctx_for(cli)?;
            let (x, y) = (class_arg(&ctx, x)?, class_arg(&ctx, y)?);
            let chi = ctx.euler_pairing(&x, &y).map_err(s)?;
            let kv = vec![
                ("x", json!(ClassJson::from(&x)), class_label(&x)),
                ("y", json!(ClassJson::from(&y)), class_label(&y)),
                ("chi", json!(chi), chi.to_string()),
            ];
            match cli.emit {
                Emit::Text => Ok(Outcome::ok(format!("{chi}\n"))),
                emit => emit_kv(&kv, emit),
            }
        }
        Command::Reflect { e0, x, side } => {
            let ctx = ctx_for(cli)?;
            let (e0, x) = (class_arg(&ctx, e0)?, class_arg(&ctx, x)?);
            let image = match side {
                Side::Left => ctx.reflect_left(&e0, &x),
                Side::Right => ctx.reflect_right(&e0, &x),
            }
            .map_err(s)?;
            match cli.emit {
                Emit::Text => Ok(Outcome::ok(format!("{}\n", class_label(&image)))),
                emit => emit_kv(&[("image", json!(ClassJson::from(&image)), class_label(&image))], emit),
            }
        }
        Command::Invariants { e0, e, n } => {
            let ctx = ctx_for(cli)?;
            let pair = pair_arg(&ctx, e0.as_deref())?;
            let e = class_arg(&ctx, e)?;
            emit_kv(&invariants(&pair, &e, *n).map_err(s)?, cli.emit)
        }
        Command::Series { config } => run_series(config, cli.emit, color),
        Command::Strata { rk_e0, a, r } => {
            let rep = strata_report(*rk_e0, *a, *r).map_err(s)?;
            emit_strata(&rep, cli.emit)
        }
        Command::Nef { e0, e } => {
            let ctx = ctx_for(cli)?;
            let pair = pair_arg(&ctx, e0.as_deref())?;
            let e = class_arg(&ctx, e)?;
            let rays = pair.nef_rays(&e).map_err(s)?;
            let note = if rays.applicable {
                "claimed boundary rays".to_string()
            } else {
                "claimed boundary rays; outside the stated range (needs e0 = O_X, rk e > 0, chi(e,e0) < 0)".to_string()
            };
            let kv = vec![
                ("alpha", json!(ClassJson::from(&rays.alpha)), class_label(&rays.alpha)),
                ("beta", json!(ClassJson::from(&rays.beta)), class_label(&rays.beta)),
                ("applicable", json!(rays.applicable), rays.applicable.to_string()),
                ("note", json!(note), note.clone()),
            ];
            emit_kv(&kv, cli.emit)
        }
        Command::Hilb { n } => {
            let ctx = ctx_for(cli)?;
            let p: QPoly = hilb_epoly(&BettiData::rational(ctx.rho()), *n);
            match cli.emit {
                Emit::Text => Ok(Outcome::ok(format!("e(Hilb^{n} X) = {p}\n"))),
                emit => emit_kv(
                    &[("n", json!(n), n.to_string()), ("poly", json!(PolyJson::from(&p)), p.to_string())],
                    emit,
                ),
            }
        }
        Command::Selftest => Ok(selftest::run(cli.emit, color)),
    }
}

type Kv = (&'static str, Value, String);

fn invariants(pair: &Pair, e: &KClass, n: Option<i64>) -> ratmod::Result<Vec<Kv>> {
    let ctx = pair.ctx();
    let e0 = pair.e0();
    let mut kv: Vec<Kv> = Vec::new();
    let mut push = |k: &'static str, v: Value, t: String| kv.push((k, v, t));
    push("e", json!(ClassJson::from(e)), class_label(e));
    push("e0", json!(ClassJson::from(e0)), class_label(e0));
    let dim = moduli_dim(ctx, e)?;
    push("moduli_dim", json!(dim), dim.to_string());
    let (h_e0_e, h_e_e0) = (ctx.euler_pairing(e0, e)?, ctx.euler_pairing(e, e0)?);
    push("chi(e0,e)", json!(h_e0_e), h_e0_e.to_string());
    push("chi(e,e0)", json!(h_e_e0), h_e_e0.to_string());
    let s = pair.s_of(e)?;
    push("s", json!(s), s.to_string());
    let tw = ctx.twisted_invariants(e0, e)?;
    push("twisted_rank", json!(tw.rank), tw.rank.to_string());
    push("twisted_degree", json!(tw.degree), tw.degree.to_string());
    let perp = perp_basis(ctx, e)?;
    let labels: Vec<String> = perp.iter().map(class_label).collect();
    push("perp_basis", json!(perp.iter().map(ClassJson::from).collect::<Vec<_>>()), labels.join(" "));
    // e as r·e0 − a·ω when it lies on that ray
    if e.r > 0 && e.r % e0.r == 0 {
        let r = e.r / e0.r;
        let a = -(e.chi - r * e0.chi);
        if pair.class_of(r, a) == *e && a >= 0 {
            let ex = pair.mu_stable_exists(r, a)?;
            let word = if ex == Existence::Exists { "exists" } else { "empty" };
            push("mu_stable", json!(ex), word.into());
            let sd = pair.stack_dim_mu_ss(r, a)?;
            push("stack_dim_mu_ss", json!(sd), sd.to_string());
        }
    }
    if e.r > 0 {
        let alpha = alpha_class(ctx, e)?;
        push("alpha", json!(ClassJson::from(&alpha)), class_label(&alpha));
        let beta = pair.beta_class(e)?;
        push("beta", json!(ClassJson::from(&beta)), class_label(&beta));
    }
    if let Ok(f) = pair.birational_fiber_check(e) {
        push("birational_fiber", json!(f), format!("k = {}, s = {}, dim drop = {}", f.k, f.s, f.dim_drop));
    }
    if let Some(n) = n {
        let sd = pair.syst_dim(e, n)?;
        push("syst_dim", json!(sd), sd.to_string());
        let gr = pair.gr_bundle_params(e, n)?;
        let dual = if gr.dual { " (dual side)" } else { "" };
        let text = format!("Gr({},{}) over M_H{}{dual}, fiber dim {}", gr.ambient, gr.sub, class_label(&gr.base), gr.fiber_dim());
        push("grassmann_bundle", json!(gr), text);
    }
    Ok(kv)
}

fn emit_kv(kv: &[Kv], emit: Emit) -> CmdResult {
    let out = match emit {
        Emit::Text => kv.iter().map(|(k, _, t)| format!("{k}: {t}\n")).collect(),
        Emit::Json => {
            let map: serde_json::Map<String, Value> = kv.iter().map(|(k, v, _)| (k.to_string(), v.clone())).collect();
            to_json(&map)
        }
        Emit::Csv => csv_string(&["key", "value"], kv.iter().map(|(k, _, t)| vec![k.to_string(), t.clone()]))?,
    };
    Ok(Outcome::ok(out))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

/// Renders a series report; rows ascend in `k`.
pub fn emit_table(report: &SeriesReport, emit: Emit, color: bool) -> Result<String, String> {
    let values = report.values().map_err(|e| e.to_string())?;
    match emit {
        Emit::Json => Ok(to_json(report)),
        Emit::Csv => csv_string(
            &["k", "class", "poly"],
            values.iter().map(|(k, p)| vec![k.to_string(), report.classes[k].clone(), p.to_string()]),
        ),
        Emit::Text => {
            let mut out = String::new();
            for (k, p) in &values {
                let _ = writeln!(out, "e(M_H{}) = {p}", report.classes[k]);
            }
            let failed: Vec<_> = report.diagnostics.iter().filter(|d| d.status != CheckStatus::Ok).collect();
            let ok = report.diagnostics.len() - failed.len();
            let _ = writeln!(out, "checks: {ok} ok, {} not ok", failed.len());
            for d in failed {
                let status = paint(&d.status.to_string(), false, color);
                let at = d.index.map(|i| format!(" at k = {i}")).unwrap_or_default();
                let _ = writeln!(out, "  {status}: {:?}{at}: {}", d.check, d.detail);
            }
            Ok(out)
        }
    }
}

fn run_series(path: &std::path::Path, emit: Emit, color: bool) -> CmdResult {
    let loaded = SeriesConfig::load(path).map_err(|e| e.to_string())?;
    let spec = loaded.build().map_err(|e| e.to_string())?;
    let result = extend_series(&spec).map_err(|e| e.to_string())?;
    let report = SeriesReport::new(loaded.config.name.clone(), &spec, &result);
    let stdout = emit_table(&report, emit, color)?;
    if result.is_consistent() {
        Ok(Outcome::ok(stdout))
    } else {
        Ok(Outcome { code: EXIT_INCONSISTENT, stdout, stderr: "error: series failed a consistency check\n".into() })
    }
}

fn emit_strata(rep: &ratmod::strata::StrataReport<i64>, emit: Emit) -> CmdResult {
    let rows = rep.rows.iter().map(|r| vec![r.label.clone(), r.stratum.l.to_string(), r.dim.to_string(), r.hom_dim.to_string()]);
    let out = match emit {
        Emit::Json => to_json(rep),
        Emit::Csv => csv_string(&["parts", "l", "dim", "hom_dim"], rows)?,
        Emit::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "rk(e0) = {}, a = {}, r = {}, n = {}", rep.rk_e0, rep.a, rep.r, rep.index);
            if !rep.index_ok {
                let _ = writeln!(out, "warning: n < 0, outside the Brill-Noether range");
            }
            if !rep.hypothesis_ok {
                let _ = writeln!(out, "warning: r*rk(e0) < 2, normality is not claimed here");
            }
            let width = rep.rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(5);
            let _ = writeln!(out, "{:<width$}  {:>3}  {:>4}  {:>7}", "parts", "l", "dim", "hom_dim");
            for r in &rep.rows {
                let _ = writeln!(out, "{:<width$}  {:>3}  {:>4}  {:>7}", r.label, r.stratum.l, r.dim, r.hom_dim);
            }
            let _ = writeln!(out, "{} strata", rep.rows.len());
            if !rep.ordering_violations.is_empty() {
                let _ = writeln!(
                    out,
                    "note: {} boundary/top pairs where the boundary stratum is not smaller",
                    rep.ordering_violations.len()
                );
            }
            out
        }
    };
    Ok(Outcome::ok(out))
}

