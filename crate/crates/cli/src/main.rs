//! `qell`: batch driver for the quasi-elliptic toolkit.
//!
//! Every run prints exactly one JSON report on stdout and a short summary on
//! stderr. Exit codes: 0 success, 1 a check failed (the report carries a
//! witness), 2 the input could not be parsed or validated.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

use qell_core::character::CharacterTable;
use qell_core::chern::chern_character;
use qell_core::cocycle::{Cochain3, Qz};
use qell_core::devoto::invariant_rank_pt;
use qell_core::extension::{projective_irreps, CentralExtension};
use qell_core::group::FiniteGroup;
use qell_core::gset::GSet;
use qell_core::input::{class_from_value, parse_cocycle_arg, parse_group_arg, parse_json, parse_space_arg, CocycleSpec, GroupSpec, SpaceSpec};
use qell_core::pairs::Sl2Matrix;
use qell_core::qell::{QEll, QEllClass};
use qell_core::verify::{self, Check};
use qell_core::Error;

/// Default directory for reports when `--out` is not given.
const OUT_DIR_ENV: &str = "QELL_OUT_DIR";

#[derive(Parser)]
#[command(name = "qell", version, about = "Exact quasi-elliptic cohomology of finite group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this file as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// More detail in the stderr summary.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Order, conjugacy classes and character table.
    GroupInfo(Inputs),
    /// Cocycle and normalization check for a 3-cochain.
    CocycleCheck(Inputs),
    /// Transgressed 2-cocycles `θ_g` on centralizers.
    Transgress(Inputs),
    /// Central extension by `θ_g` and its projective irreducibles.
    Extension(Inputs),
    /// Ranks and basis of (twisted) quasi-elliptic cohomology.
    Qell(Inputs),
    /// Invariant rank of the elliptic target over a point.
    DevotoRank(Inputs),
    /// Chern character of a class with kernel, line and SL2 checks.
    Chern(Inputs),
    /// Run verification checks.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[command(flatten)]
        inputs: Inputs,
    },
}

#[derive(Args, Clone, Default)]
struct Inputs {
    /// `builtin:NAME`, inline JSON or a file.
    #[arg(long)]
    group: Option<String>,
    /// `zero`, `cyclic:n:k`, `explicit:<entries>`, `coboundary:<beta>`, inline JSON or a file.
    #[arg(long)]
    cocycle: Option<String>,
    /// `pt`, `regular`, `trivial:n`, inline JSON or a file.
    #[arg(long)]
    space: Option<String>,
    /// Class terms as JSON (defaults to the sum of all generators).
    #[arg(long)]
    class: Option<String>,
    /// Restrict to one group element.
    #[arg(long)]
    element: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    All,
    Cocycles,
    Transgression,
    OrderLemma,
    Tables,
    Ranks,
    Restriction,
    Devoto,
    Chern,
    Ell,
    Kernel,
    Willerton,
    Sl2,
}

/// A finished computation: the report and whether every check passed.
struct Outcome {
    report: Value,
    passed: bool,
    summary: Vec<String>,
}

enum Failure {
    Input(Error),
    Internal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::NoPrime(_) => Failure::Internal(e),
            _ => Failure::Input(e),
        }
    }
}

type Run = std::result::Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let (code, report, summary) = match run(&cli) {
        Ok(o) => {
            let status = if o.passed { "ok" } else { "check-failed" };
            let mut report = o.report;
            report["status"] = json!(status);
            (if o.passed { 0 } else { 1 }, report, o.summary)
        }
        Err(Failure::Input(e)) => (2, error_report(name, "input-error", &e), vec![format!("input error: {e}")]),
        Err(Failure::Internal(e)) => (1, error_report(name, "internal-error", &e), vec![format!("internal error: {e}")]),
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    if code != 2 {
        if let Some(path) = output_path(&cli, name) {
            if let Err(e) = write_atomic(&path, &text) {
                eprintln!("qell: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }
    print!("{text}");
    let _ = std::io::stdout().flush();
    for line in summary {
        eprintln!("{line}");
    }
    ExitCode::from(code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::GroupInfo(_) => "group-info",
        Command::CocycleCheck(_) => "cocycle-check",
        Command::Transgress(_) => "transgress",
        Command::Extension(_) => "extension",
        Command::Qell(_) => "qell",
        Command::DevotoRank(_) => "devoto-rank",
        Command::Chern(_) => "chern",
        Command::Verify { .. } => "verify",
    }
}

fn error_report(command: &str, status: &str, e: &Error) -> Value {
    let error = match e {
        Error::Schema { path, message } => json!({"path": path, "message": message}),
        other => json!({"message": other.to_string()}),
    };
    json!({"command": command, "status": status, "error": error})
}

fn output_path(cli: &Cli, name: &str) -> Option<PathBuf> {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| Path::new(&d).join(format!("{name}.json"))))
}

/// Writes through a temporary sibling so a failed write leaves nothing behind.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let res = fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

fn run(cli: &Cli) -> Run {
    let v = cli.verbose;
    match &cli.command {
        Command::GroupInfo(i) => group_info(i, v),
        Command::CocycleCheck(i) => cocycle_check(i),
        Command::Transgress(i) => transgress(i),
        Command::Extension(i) => extension(i, v),
        Command::Qell(i) => qell(i, v),
        Command::DevotoRank(i) => devoto_rank(i, v),
        Command::Chern(i) => chern(i, v),
        Command::Verify { target, inputs } => verify_cmd(*target, inputs, cli.seed, v),
    }
}

/// Inline JSON, a shorthand, or the contents of a file.
fn resolve(arg: &str, shorthand: &[&str]) -> std::result::Result<String, Error> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') || shorthand.iter().any(|p| arg == *p || arg.starts_with(p)) {
        return Ok(arg.to_string());
    }
    let path = arg.strip_prefix('@').unwrap_or(arg);
    fs::read_to_string(path).map_err(|e| Error::Schema {
        path: "$".into(),
        message: format!("`{arg}` is neither a recognized shorthand nor a readable file: {e}"),
    })
}

fn load_group(i: &Inputs) -> std::result::Result<(GroupSpec, Arc<FiniteGroup>), Error> {
    let arg = i.group.as_deref().ok_or_else(|| Error::Schema {
        path: "--group".into(),
        message: "this command needs --group".into(),
    })?;
    let spec = parse_group_arg(&resolve(arg, &["builtin:"])?)?;
    let g = Arc::new(spec.build()?);
    Ok((spec, g))
}

fn load_cocycle(i: &Inputs, g: &Arc<FiniteGroup>) -> std::result::Result<Option<(CocycleSpec, Cochain3)>, Error> {
    let Some(arg) = i.cocycle.as_deref() else {
        return Ok(None);
    };
    let spec = parse_cocycle_arg(&resolve(arg, &["zero", "cyclic:", "explicit:", "coboundary:"])?)?;
    let alpha = spec.build(g)?;
    Ok(Some((spec, alpha)))
}

/// A cocycle that must be valid for the computation to make sense.
fn load_twist(i: &Inputs, g: &Arc<FiniteGroup>) -> std::result::Result<Option<(CocycleSpec, Cochain3)>, Error> {
    let c = load_cocycle(i, g)?;
    if let Some((_, a)) = &c {
        a.ensure_normalized_cocycle()?;
    }
    Ok(c)
}

fn load_space(i: &Inputs, g: &Arc<FiniteGroup>) -> std::result::Result<(SpaceSpec, GSet), Error> {
    let spec = match i.space.as_deref() {
        Some(arg) => parse_space_arg(&resolve(arg, &["pt", "regular", "trivial:"])?)?,
        None => SpaceSpec::Point,
    };
    let x = spec.build(g)?;
    Ok((spec, x))
}

fn inputs_json(group: &GroupSpec, cocycle: Option<&CocycleSpec>, space: Option<&SpaceSpec>) -> Value {
    let mut v = json!({"group": group.to_value()});
    if let Some(c) = cocycle {
        v["cocycle"] = c.to_value();
    }
    if let Some(s) = space {
        v["space"] = s.to_value();
    }
    v
}

fn group_info(i: &Inputs, verbose: u8) -> Run {
    let (spec, g) = load_group(i)?;
    let table = CharacterTable::<Rational64>::compute(g.clone())?;
    let classes: Vec<Value> = g
        .conjugacy_classes()
        .iter()
        .map(|c| json!({"representative": c.representative, "size": c.members.len(), "order": g.element_order(c.representative)}))
        .collect();
    let mut summary = vec![format!("order {}, {} classes, abelian: {}", g.order(), classes.len(), g.is_abelian())];
    if verbose > 0 {
        for row in &table.rows {
            summary.push(format!("  degree {}: {}", row.degree, row.values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
        }
    }
    Ok(Outcome {
        report: json!({
            "command": "group-info",
            "input": inputs_json(&spec, None, None),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "exponent": g.exponent(),
            "classes": classes,
            "character_table": table.to_json(),
        }),
        passed: true,
        summary,
    })
}

fn cocycle_check(i: &Inputs) -> Run {
    let (gspec, g) = load_group(i)?;
    let (cspec, alpha) = load_cocycle(i, &g)?.ok_or_else(|| Error::Schema {
        path: "--cocycle".into(),
        message: "this command needs --cocycle".into(),
    })?;
    let defect = alpha.cocycle_defect();
    let normalized = alpha.is_normalized();
    let passed = defect.is_none() && normalized;
    let summary = vec![match defect {
        Some(w) => format!("not a cocycle: defect at {w:?}"),
        None if !normalized => "cocycle, but not normalized".into(),
        None => format!("normalized cocycle, values of order dividing {}", alpha.value_order()),
    }];
    Ok(Outcome {
        report: json!({
            "command": "cocycle-check",
            "input": inputs_json(&gspec, Some(&cspec), None),
            "cocycle": defect.is_none(),
            "normalized": normalized,
            "value_order": alpha.value_order(),
            "witness": defect,
        }),
        passed,
        summary,
    })
}

fn elements(i: &Inputs, g: &FiniteGroup) -> std::result::Result<Vec<usize>, Error> {
    match i.element {
        Some(x) if x >= g.order() => Err(Error::Schema {
            path: "--element".into(),
            message: format!("element {x} is out of range (< {})", g.order()),
        }),
        Some(x) => Ok(vec![x]),
        None => Ok(g.elements().collect()),
    }
}

fn entries_json(e: Vec<([usize; 2], Qz)>) -> Value {
    Value::Array(e.into_iter().map(|(t, v)| json!([t, v.to_string()])).collect())
}

fn transgress(i: &Inputs) -> Run {
    let (gspec, g) = load_group(i)?;
    let (cspec, alpha) = load_twist(i, &g)?.ok_or_else(|| Error::Schema {
        path: "--cocycle".into(),
        message: "this command needs --cocycle".into(),
    })?;
    let mut out = Vec::new();
    let mut passed = true;
    for x in elements(i, &g)? {
        let theta = alpha.transgress_unchecked(x);
        let defect = theta.cocycle_defect();
        let gro: Vec<Value> = theta
            .carrier()
            .iter()
            .map(|&h| {
                let c = alpha.gro_character(x, h).expect("carrier commutes with x");
                json!({"h": h, "character": theta.carrier().iter().map(|&k| c.value(k).expect("carrier").to_string()).collect::<Vec<_>>()})
            })
            .collect();
        passed &= defect.is_none() && theta.is_normalized();
        out.push(json!({
            "element": x,
            "carrier": theta.carrier(),
            "theta": entries_json(theta.entries()),
            "cocycle": defect.is_none(),
            "witness": defect,
            "value_order": theta.value_order(),
            "gro_characters": gro,
        }));
    }
    let summary = vec![format!("{} transgressions, all 2-cocycles: {passed}", out.len())];
    Ok(Outcome {
        report: json!({"command": "transgress", "input": inputs_json(&gspec, Some(&cspec), None), "transgressions": out}),
        passed,
        summary,
    })
}

fn extension(i: &Inputs, verbose: u8) -> Run {
    let (gspec, g) = load_group(i)?;
    let twist = load_twist(i, &g)?;
    let alpha = twist.as_ref().map_or_else(|| Cochain3::zero(g.clone()), |(_, a)| a.clone());
    let mut out = Vec::new();
    let mut passed = true;
    let mut summary = Vec::new();
    for x in elements(i, &g)? {
        let theta = alpha.transgress_unchecked(x);
        let ext = CentralExtension::new(&theta)?;
        let ord = ext.element_order(Qz::ZERO, x)?;
        let bound = theta.value_order() as usize * g.element_order(x);
        passed &= bound % ord == 0;
        let irreps: Vec<Value> = projective_irreps::<Rational64>(&theta)?
            .iter()
            .map(|p| json!({"degree": p.degree, "values": p.values}))
            .collect();
        if verbose > 0 {
            summary.push(format!("  g={x}: |extension| = {}, ord(0,g) = {ord}, bound {bound}", ext.order()));
        }
        out.push(json!({
            "element": x,
            "carrier": theta.carrier(),
            "theta": entries_json(theta.entries()),
            "extension_order": ext.order(),
            "lift_order": ord,
            "order_bound": bound,
            "projective_irreps": irreps,
        }));
    }
    summary.insert(0, format!("{} extensions, order lemma holds: {passed}", out.len()));
    Ok(Outcome {
        report: json!({
            "command": "extension",
            "input": inputs_json(&gspec, twist.as_ref().map(|t| &t.0), None),
            "extensions": out,
        }),
        passed,
        summary,
    })
}

type Space = Arc<QEll<Rational64>>;

fn load_qell(i: &Inputs) -> std::result::Result<(Value, Space), Error> {
    let (gspec, g) = load_group(i)?;
    let twist = load_twist(i, &g)?;
    let (sspec, x) = load_space(i, &g)?;
    let input = inputs_json(&gspec, twist.as_ref().map(|t| &t.0), Some(&sspec));
    Ok((input, Arc::new(QEll::new(x, twist.map(|t| t.1))?)))
}

fn qell(i: &Inputs, verbose: u8) -> Run {
    let (input, s) = load_qell(i)?;
    let ranks = s.rank_report();
    let degrees: Vec<String> = ranks.degrees().iter().map(Qz::to_string).collect();
    let mut summary = vec![format!("total rank {}, degrees {{{}}}", ranks.total, degrees.join(", "))];
    if verbose > 0 {
        for sec in &ranks.sectors {
            summary.push(format!("  σ={}: rank {}", sec.sigma, sec.rank));
        }
    }
    Ok(Outcome {
        report: json!({
            "command": "qell",
            "input": input,
            "total": ranks.total,
            "degrees": degrees,
            "sectors": ranks.sectors,
            "basis": s.basis(),
        }),
        passed: true,
        summary,
    })
}

fn devoto_rank(i: &Inputs, verbose: u8) -> Run {
    let (gspec, g) = load_group(i)?;
    let twist = load_twist(i, &g)?;
    let r = invariant_rank_pt(&g, twist.as_ref().map(|t| &t.1))?;
    let orbits = verify::commuting_pair_orbit_count(&g);
    let passed = twist.is_some() || r.total == orbits;
    let mut summary = vec![format!("invariant rank {} ({} conjugation orbits of commuting pairs)", r.total, orbits)];
    if verbose > 0 {
        for o in &r.orbits {
            summary.push(format!("  {}: {} conjugation orbits", o.representative, o.conjugation_orbits.len()));
        }
    }
    Ok(Outcome {
        report: json!({
            "command": "devoto-rank",
            "input": inputs_json(&gspec, twist.as_ref().map(|t| &t.0), None),
            "total": r.total,
            "pair_orbits": orbits,
            "orbits": r.orbits,
        }),
        passed,
        summary,
    })
}

fn load_class(i: &Inputs, s: &Space) -> std::result::Result<QEllClass<Rational64>, Error> {
    match i.class.as_deref() {
        Some(arg) => {
            let terms = class_from_value(&parse_json(&resolve(arg, &[])?)?)?;
            QEllClass::from_json(s.clone(), &terms)
        }
        None => {
            let mut c = QEllClass::zero(s.clone());
            for b in s.basis() {
                c.add_term(b.key(), 1)?;
            }
            Ok(c)
        }
    }
}

fn chern(i: &Inputs, verbose: u8) -> Run {
    let (mut input, s) = load_qell(i)?;
    let class = load_class(i, &s)?;
    input["class"] = json!(class.to_json());
    let out = chern_character(&class)?;
    let mut kernel = verify::empty_check("kernel");
    verify::kernel_check(&s, &mut kernel)?;
    let mut willerton = verify::empty_check("willerton");
    if let Some(a) = &s.alpha {
        verify::willerton_check(a, &mut willerton)?;
    }
    let mut sl2 = serde_json::Map::new();
    let mut witnesses = serde_json::Map::new();
    let mut passed = kernel.passed && willerton.passed;
    for (name, a) in [("S", Sl2Matrix::S), ("T", Sl2Matrix::T)] {
        let r = qell_core::chern::check_image_preservation(a, &class)?;
        passed &= r.holds;
        sl2.insert(name.into(), json!(r.holds));
        if let Some(m) = r.mismatch {
            witnesses.insert(format!("sl2:{name}"), json!(m));
        }
    }
    for c in [&kernel, &willerton] {
        if let Some(w) = &c.witness {
            witnesses.insert(c.name.clone(), w.clone());
        }
    }
    let j = out.to_json();
    let mut summary = vec![format!(
        "chern character on {} components; kernel {}, willerton {}, S {}, T {}",
        out.class.components().count(),
        kernel.passed,
        willerton.passed,
        sl2["S"],
        sl2["T"]
    )];
    if verbose > 0 {
        for (pair, x, f) in out.class.components().filter(|(_, _, f)| !f.is_zero()) {
            summary.push(format!("  {pair} at {x}: {} terms", f.len()));
        }
    }
    let mut report = json!({
        "command": "chern",
        "input": input,
        "output": j.output,
        "lines": j.lines,
        "checks": {"kernel": kernel.passed, "willerton": willerton.passed, "sl2": sl2},
    });
    if !witnesses.is_empty() {
        report["witness"] = Value::Object(witnesses);
    }
    Ok(Outcome { report, passed, summary })
}

fn checks_outcome(input: Value, target: &str, checks: Vec<Check>) -> Outcome {
    let passed = checks.iter().all(|c| c.passed);
    let summary = checks
        .iter()
        .map(|c| format!("{}: {} ({} cases)", c.name, if c.passed { "pass" } else { "FAIL" }, c.cases))
        .collect();
    Outcome {
        report: json!({"command": "verify", "target": target, "input": input, "checks": checks}),
        passed,
        summary,
    }
}

fn verify_cmd(target: VerifyTarget, i: &Inputs, seed: u64, _verbose: u8) -> Run {
    let seeded = json!({"seed": seed});
    let name = target.to_possible_value().expect("not skipped").get_name().to_string();
    let checks = match target {
        VerifyTarget::All => verify::run_all(seed)?,
        VerifyTarget::Cocycles => vec![verify::cocycle_identities(seed)?],
        VerifyTarget::Transgression => vec![verify::transgression(seed)?],
        VerifyTarget::OrderLemma => vec![verify::order_lemma(seed)?],
        VerifyTarget::Tables => vec![verify::character_tables()?],
        VerifyTarget::Ranks => vec![verify::quasi_elliptic_ranks()?],
        VerifyTarget::Restriction => vec![verify::restriction(seed)?],
        VerifyTarget::Devoto => vec![verify::devoto_point_counts()?],
        VerifyTarget::Chern => vec![verify::chern_pipeline(seed)?],
        VerifyTarget::Ell => vec![verify::ell_soundness(seed)?],
        VerifyTarget::Kernel | VerifyTarget::Willerton | VerifyTarget::Sl2 => {
            let (input, s) = load_qell(i)?;
            let mut checks = Vec::new();
            match target {
                VerifyTarget::Kernel => {
                    let mut c = verify::empty_check("kernel");
                    verify::kernel_check(&s, &mut c)?;
                    checks.push(c);
                }
                VerifyTarget::Willerton => {
                    let mut c = verify::empty_check("willerton");
                    if let Some(a) = &s.alpha {
                        verify::willerton_check(a, &mut c)?;
                    }
                    checks.push(c);
                }
                _ => {
                    for (n, a) in [("sl2:S", Sl2Matrix::S), ("sl2:T", Sl2Matrix::T)] {
                        let mut c = verify::empty_check(n);
                        verify::sl2_check(&s, a, &mut c)?;
                        checks.push(c);
                    }
                }
            }
            return Ok(checks_outcome(input, &name, checks));
        }
    };
    Ok(checks_outcome(seeded, &name, checks))
}
