//! Command line front end.
//!
//! Every command produces a report; `--json` prints it as deterministic
//! JSON (`{"command", "inputs", "result", "version"}` with sorted keys),
//! otherwise a short human-readable summary is printed. `scan` always emits
//! one JSON object per line. Exit codes: 0 success, 1 verification or
//! assertion failure, 2 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::deform::{break_up_zero, collapse, rel_move, search_admissible};
use crate::error::{Error, Result};
use crate::geodesics::{cylinder_decomposition, designated_connections, saddle_connections_len2};
use crate::prym::{
    build_prototype_surface, classify_components, component_invariant, enumerate_prototypes, find_prym_involutions,
    prototype_polygons, rm_generator, verify_real_multiplication, Kappa, Prototype, PrymSurface,
};
use crate::qfield::{QuadNum, Vec2};
use crate::render::{render_svg, slit_edges, RenderOptions};
use crate::surface::{self, mat2_det, parse_rational, vec2_from_json, vec2_json, Mat2, TranslationSurface};

#[derive(Parser, Debug)]
#[command(name = "prymform", version, about = "Prym eigenforms in H(2,2)^odd and H(1,1,2)")]
pub struct Cli {
    /// Print the full report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// Where a command takes its surface from: a surface JSON file or
/// prototype parameters.
#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    /// Surface JSON file.
    #[arg(long, conflicts_with_all = ["w", "h", "e"])]
    pub input: Option<PathBuf>,
    /// Stratum of the prototype: 2,2 or 1,1,2.
    #[arg(long, default_value = "2,2")]
    pub kappa: Kappa,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<i64>,
    /// Slit length as `n` or `n/d`.
    #[arg(long)]
    pub slit: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the prototypes of a discriminant.
    Prototypes {
        #[arg(long)]
        disc: i64,
    },
    /// Classify prototypes by component invariant over a range of D.
    Classify {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long, default_value = "2,2")]
        kappa: Kappa,
    },
    /// Build and verify a prototype surface.
    Build {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Write the surface JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Saddle connections up to a length.
    Scan {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Length bound as `n` or `n/d`.
        #[arg(long)]
        len: String,
    },
    /// Cylinder decomposition in a direction.
    Cylinders {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Direction `dx,dy` with rational components.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Component invariant of a prototype.
    Invariant {
        #[arg(long, default_value = "2,2")]
        kappa: Kappa,
        #[arg(long, allow_hyphen_values = true)]
        w: i64,
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
    },
    /// Prym involutions of a surface.
    Involutions {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Replay a deformation script.
    Replay {
        #[arg(long)]
        script: PathBuf,
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Draw a surface as SVG.
    Render {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Search small rel moves for an admissible designated connection.
    Search {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 200)]
        tries: usize,
        /// Denominator of the move coordinates.
        #[arg(long, default_value_t = 20)]
        den: i64,
        /// Collapse the connection found.
        #[arg(long)]
        collapse: bool,
    },
}

/// A command's result.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub human: String,
    /// Exit code for a completed run (0 or 1).
    pub code: i32,
    /// Emit `result` as JSON lines instead of a report.
    pub lines: bool,
}

/// Exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) => 2,
        _ => 1,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match execute(&cli) {
        Ok(o) => {
            if o.lines {
                for line in o.result.as_array().into_iter().flatten() {
                    let _ = writeln!(out, "{line}");
                }
            } else if cli.json {
                let report = json!({
                    "command": name,
                    "inputs": o.inputs,
                    "result": o.result,
                    "version": env!("CARGO_PKG_VERSION"),
                });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("JSON values serialize"));
            } else {
                let _ = write!(out, "{}", o.human);
            }
            o.code
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({"command": name, "error": e.to_string()}));
            }
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Prototypes { .. } => "prototypes",
        Command::Classify { .. } => "classify",
        Command::Build { .. } => "build",
        Command::Scan { .. } => "scan",
        Command::Cylinders { .. } => "cylinders",
        Command::Invariant { .. } => "invariant",
        Command::Involutions { .. } => "involutions",
        Command::Replay { .. } => "replay",
        Command::Render { .. } => "render",
        Command::Search { .. } => "search",
    }
}

fn usage(m: impl Into<String>) -> Error {
    Error::Usage(m.into())
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{} is not JSON: {e}", path.display())))
}

fn rational(s: &str) -> Result<QuadNum> {
    parse_rational(s).map_err(usage)
}

impl SurfaceArgs {
    fn prototype(&self) -> Result<Option<Prototype>> {
        match (self.w, self.h, self.e) {
            (Some(w), Some(h), Some(e)) => Ok(Some(Prototype::new(self.kappa, w, h, e)?)),
            (None, None, None) => Ok(None),
            _ => Err(usage("prototype needs all of --w, --h, --e")),
        }
    }

    fn slit(&self) -> Result<Option<QuadNum>> {
        self.slit.as_deref().map(rational).transpose()
    }

    fn describe(&self) -> Value {
        match &self.input {
            Some(p) => json!({"input": p.display().to_string()}),
            None => json!({"kappa": self.kappa.to_string(), "w": self.w, "h": self.h, "e": self.e, "slit": self.slit}),
        }
    }

    /// The surface in its natural presentation (polygons for prototypes).
    fn plain(&self) -> Result<TranslationSurface> {
        if let Some(path) = &self.input {
            return TranslationSurface::from_json(&read_json(path)?);
        }
        let p = self.prototype()?.ok_or_else(|| usage("give --input or --w/--h/--e"))?;
        Ok(prototype_polygons(&p, self.slit()?.as_ref())?.0)
    }

    fn prym(&self) -> Result<PrymSurface> {
        if let Some(path) = &self.input {
            return PrymSurface::detect(&TranslationSurface::from_json(&read_json(path)?)?);
        }
        let p = self.prototype()?.ok_or_else(|| usage("give --input or --w/--h/--e"))?;
        build_prototype_surface(&p, self.slit()?.as_ref())
    }

    fn given(&self) -> bool {
        self.input.is_some() || self.w.is_some() || self.h.is_some() || self.e.is_some()
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Prototypes { disc } => cmd_prototypes(*disc),
        Command::Classify { from, to, kappa } => cmd_classify(*from, *to, *kappa),
        Command::Build { surface, out } => cmd_build(surface, out.as_ref()),
        Command::Scan { surface, len } => cmd_scan(surface, len),
        Command::Cylinders { surface, dir } => cmd_cylinders(surface, dir),
        Command::Invariant { kappa, w, h, e } => cmd_invariant(Prototype::new(*kappa, *w, *h, *e)?),
        Command::Involutions { surface } => cmd_involutions(surface),
        Command::Replay { script, surface } => cmd_replay(script, surface),
        Command::Render { surface, svg } => cmd_render(surface, svg),
        Command::Search { surface, tries, den, collapse } => cmd_search(surface, cli.seed, *tries, *den, *collapse),
    }
}

fn ok(inputs: Value, result: Value, human: String) -> Result<Outcome> {
    Ok(Outcome { inputs, result, human, code: 0, lines: false })
}

fn cmd_prototypes(d: i64) -> Result<Outcome> {
    if d < 1 {
        return Err(usage("--disc must be positive"));
    }
    let mut rows = Vec::new();
    let mut human = format!("D = {d}: {} prototypes\n", enumerate_prototypes(d).len());
    for (w, h, e) in enumerate_prototypes(d) {
        let p = Prototype { kappa: Kappa::TwoTwo, w, h, e };
        let class = component_invariant(&p);
        rows.push(json!({"w": w, "h": h, "e": e, "lambda": p.lambda().to_json(), "parity": class.parity}));
        let parity = class.parity.map_or("-".to_string(), |x| x.to_string());
        human.push_str(&format!("  ({w}, {h}, {e})  lambda = {}  parity {parity}\n", p.lambda().to_plain()));
    }
    ok(json!({"disc": d}), Value::Array(rows), human)
}

/// One row of the classification table.
pub fn classify_row(d: i64, kappa: Kappa) -> Value {
    let nonempty_expected = matches!(d.rem_euclid(8), 0 | 1 | 4);
    match classify_components(d, kappa) {
        Ok(r) => {
            let status = if nonempty_expected && r.is_consistent() { "ok" } else { "FAILURE" };
            json!({
                "D": d,
                "status": status,
                "classes": r.classes.len(),
                "expected": r.expected_classes,
                "prototypes": r.classes.iter().map(|c| c.prototypes.len()).sum::<usize>(),
                "detail": r.to_json(),
            })
        }
        Err(Error::EmptyLocus(_)) => json!({
            "D": d,
            "status": if nonempty_expected { "FAILURE" } else { "empty" },
            "classes": 0,
            "expected": 0,
            "prototypes": 0,
        }),
        Err(e) => json!({"D": d, "status": "FAILURE", "error": e.to_string()}),
    }
}

fn cmd_classify(from: i64, to: i64, kappa: Kappa) -> Result<Outcome> {
    if from < 8 || to < from {
        return Err(usage(format!("range must satisfy 8 <= from <= to, got {from}..{to}")));
    }
    let ds: Vec<i64> = (from..=to).collect();
    #[cfg(feature = "parallel")]
    let rows: Vec<Value> = {
        use rayon::prelude::*;
        ds.par_iter().map(|&d| classify_row(d, kappa)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Value> = ds.iter().map(|&d| classify_row(d, kappa)).collect();
    let failures = rows.iter().filter(|r| r["status"] == "FAILURE").count();
    let mut human = String::new();
    for r in &rows {
        let line = match r["status"].as_str() {
            Some("empty") => format!("D={}: empty\n", r["D"]),
            Some("ok") => format!("D={}: {} class{}\n", r["D"], r["classes"], if r["classes"] == 1 { "" } else { "es" }),
            _ => format!("D={}: FAILURE {}\n", r["D"], r),
        };
        human.push_str(&line);
    }
    Ok(Outcome {
        inputs: json!({"from": from, "to": to, "kappa": kappa.to_string()}),
        result: json!({"rows": rows, "failures": failures}),
        human,
        code: i32::from(failures > 0),
        lines: false,
    })
}

fn periods_json(ps: &PrymSurface) -> Value {
    Value::Array(ps.periods().iter().map(vec2_json).collect())
}

fn cmd_build(args: &SurfaceArgs, out: Option<&PathBuf>) -> Result<Outcome> {
    let ps = args.prym()?;
    let mut result = json!({
        "stratum": ps.surface.stratum().to_string(),
        "area": ps.surface.area().to_json(),
        "periods": periods_json(&ps),
        "fixed_points": ps.tau_fixed_points(),
        "surface": ps.surface.to_json(),
    });
    let mut human = format!(
        "stratum {}\narea {}\ninvolution fixed points {}\n",
        ps.surface.stratum(),
        ps.surface.area().to_plain(),
        ps.tau_fixed_points()
    );
    let mut code = 0;
    if let Some(p) = args.prototype()? {
        let d = p.discriminant();
        result["D"] = json!(d);
        result["lambda"] = p.lambda().to_json();
        match verify_real_multiplication(&ps, &rm_generator(&p), d) {
            Ok(_) => {
                result["real_multiplication"] = json!("verified");
                human.push_str(&format!("D = {d}, lambda = {}: real multiplication verified\n", p.lambda().to_plain()));
            }
            Err(e) => {
                result["real_multiplication"] = json!(e.to_string());
                human.push_str(&format!("verification FAILED: {e}\n"));
                code = 1;
            }
        }
    }
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&ps.surface.to_json()).expect("JSON values serialize");
        std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        human.push_str(&format!("surface written to {}\n", path.display()));
    }
    Ok(Outcome { inputs: args.describe(), result, human, code, lines: false })
}

fn cmd_scan(args: &SurfaceArgs, len: &str) -> Result<Outcome> {
    let l = rational(len)?;
    let s = args.plain()?;
    let rows: Vec<Value> = saddle_connections_len2(&s, &(&l * &l)).iter().map(|sc| sc.to_json()).collect();
    Ok(Outcome { inputs: json!({"len": len}), result: Value::Array(rows), human: String::new(), code: 0, lines: true })
}

fn parse_dir(dir: &str) -> Result<Vec2> {
    let (x, y) = dir.split_once(',').ok_or_else(|| usage("--dir must be dx,dy"))?;
    Ok(Vec2::new(rational(x)?, rational(y)?))
}

fn cmd_cylinders(args: &SurfaceArgs, dir: &str) -> Result<Outcome> {
    let d = parse_dir(dir)?;
    let s = args.plain()?;
    let cyls = cylinder_decomposition(&s, &d)?;
    let mut human = format!("{} cylinders in direction ({dir})\n", cyls.len());
    for c in &cyls {
        human.push_str(&format!("  width {}  height {}\n", c.width.to_plain(), c.height.to_plain()));
    }
    let result = Value::Array(cyls.iter().map(|c| c.to_json()).collect());
    ok(json!({"dir": dir, "surface": args.describe()}), result, human)
}

fn cmd_invariant(p: Prototype) -> Result<Outcome> {
    let c = component_invariant(&p);
    let human = match c.parity {
        Some(x) => format!("{p}: D = {}, parity {x}\n", c.disc),
        None => format!("{p}: D = {} even, single class (raw parity {})\n", c.disc, c.raw_parity),
    };
    ok(
        json!({"kappa": p.kappa.to_string(), "w": p.w, "h": p.h, "e": p.e}),
        json!({"D": c.disc, "parity": c.parity, "raw_parity": c.raw_parity}),
        human,
    )
}

fn cmd_involutions(args: &SurfaceArgs) -> Result<Outcome> {
    let s = args.plain()?;
    let census = find_prym_involutions(&s);
    let composites: Vec<Value> = census
        .composites
        .iter()
        .map(|&(i, j, ord, g)| json!({"i": i, "j": j, "order": ord, "quotient_genus": g}))
        .collect();
    let mut human = format!("{} Prym involution(s)\n", census.involutions.len());
    for &(i, j, ord, g) in &census.composites {
        human.push_str(&format!("  tau{i} o tau{j}: order {ord}, quotient genus {}\n", g.map_or("-".into(), |x| x.to_string())));
    }
    ok(args.describe(), json!({"count": census.involutions.len(), "composites": composites}), human)
}

fn cmd_render(args: &SurfaceArgs, path: &PathBuf) -> Result<Outcome> {
    let s = args.plain()?;
    let opts = RenderOptions { highlight: slit_edges(&s), ..RenderOptions::default() };
    let svg = render_svg(&s, &opts);
    std::fs::write(path, &svg).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    ok(
        json!({"svg": path.display().to_string(), "surface": args.describe()}),
        json!({"faces": s.num_faces(), "bytes": svg.len()}),
        format!("wrote {} ({} faces)\n", path.display(), s.num_faces()),
    )
}

fn cmd_search(args: &SurfaceArgs, seed: u64, tries: usize, den: i64, do_collapse: bool) -> Result<Outcome> {
    if den <= 0 {
        return Err(usage("--den must be positive"));
    }
    let ps = args.prym()?;
    let inputs = json!({"seed": seed, "tries": tries, "den": den, "surface": args.describe()});
    let Some(found) = search_admissible(&ps, seed, tries, den) else {
        return Ok(Outcome {
            inputs,
            result: json!({"found": false}),
            human: format!("no admissible connection within {tries} tries\n"),
            code: 1,
            lines: false,
        });
    };
    let mut result = json!({"found": true, "v": vec2_json(&found.v), "sigma0": found.sigma0.to_json()});
    let mut human = format!(
        "rel move v = ({}, {}): admissible {:?} -> {:?} with holonomy ({}, {})\n",
        found.v.x.to_plain(),
        found.v.y.to_plain(),
        found.sigma0.start,
        found.sigma0.end,
        found.sigma0.holonomy.x.to_plain(),
        found.sigma0.holonomy.y.to_plain()
    );
    let mut code = 0;
    if do_collapse {
        let c = collapse(&found.surface, &found.sigma0)?;
        result["collapsed"] = json!({"stratum": c.surface.stratum().to_string(), "surface": c.surface.to_json()});
        human.push_str(&format!("collapsed to {}\n", c.surface.stratum()));
        if let Some(p) = args.prototype()? {
            let verdict = verify_real_multiplication(&c, &rm_generator(&p), p.discriminant());
            result["collapsed"]["real_multiplication"] =
                json!(verdict.as_ref().map(|_| "verified".to_string()).unwrap_or_else(|e| e.to_string()));
            match verdict {
                Ok(_) => human.push_str(&format!("real multiplication by O_{} verified on the collapse\n", p.discriminant())),
                Err(e) => {
                    human.push_str(&format!("verification FAILED: {e}\n"));
                    code = 1;
                }
            }
        }
    }
    Ok(Outcome { inputs, result, human, code, lines: false })
}

fn cmd_replay(path: &PathBuf, args: &SurfaceArgs) -> Result<Outcome> {
    let script = read_json(path)?;
    let fallback = if args.given() { Some(args.prym()?) } else { None };
    let report = replay_script(&script, fallback)?;
    let human = format!(
        "{} step(s) applied; final stratum {}{}\n",
        report.steps,
        report.surface.surface.stratum(),
        if report.asserted { "; assertion passed" } else { "" }
    );
    ok(
        json!({"script": path.display().to_string()}),
        json!({
            "steps": report.steps,
            "asserted": report.asserted,
            "stratum": report.surface.surface.stratum().to_string(),
            "periods": periods_json(&report.surface),
            "final": report.surface.surface.to_json(),
        }),
        human,
    )
}

/// Result of a replayed script.
pub struct ReplayReport {
    pub steps: usize,
    pub surface: PrymSurface,
    /// Whether an assertion block was present (and passed).
    pub asserted: bool,
}

/// Builds a surface from `{"prototype": {"kappa", "w", "h", "e", "slit"?}}`
/// or `{"surface": <surface JSON>}`.
pub fn surface_from_value(v: &Value) -> Result<PrymSurface> {
    if let Some(p) = v.get("prototype") {
        let int = |k: &str| p.get(k).and_then(Value::as_i64).ok_or_else(|| usage(format!("prototype needs integer {k}")));
        let kappa: Kappa = p.get("kappa").and_then(Value::as_str).unwrap_or("2,2").parse()?;
        let proto = Prototype::new(kappa, int("w")?, int("h")?, int("e")?)?;
        let slit = match p.get("slit") {
            None => None,
            Some(Value::String(s)) => Some(rational(s)?),
            Some(Value::Number(n)) => Some(QuadNum::from_int(n.as_i64().ok_or_else(|| usage("bad slit"))?)),
            Some(other) => Some(QuadNum::from_json(other).map_err(usage)?),
        };
        return build_prototype_surface(&proto, slit.as_ref());
    }
    if let Some(s) = v.get("surface") {
        return PrymSurface::detect(&TranslationSurface::from_json(s)?);
    }
    Err(usage("surface description needs \"prototype\" or \"surface\""))
}

fn matrix_from_json(v: &Value) -> Result<Mat2> {
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| usage("matrix must be [[a, b], [c, d]]"))?;
    let r0 = vec2_from_json(&rows[0]).map_err(usage)?;
    let r1 = vec2_from_json(&rows[1]).map_err(usage)?;
    Ok([[r0.x, r0.y], [r1.x, r1.y]])
}

/// Applies a linear map with positive determinant, carrying the involution.
pub fn apply_gl2(ps: &PrymSurface, m: &Mat2) -> Result<PrymSurface> {
    if mat2_det(m).sign() <= 0 {
        return Err(Error::NonPositiveDeterminant);
    }
    let mut chains = ps.tracked_chains();
    let cells = ps.surface.apply_gl2(m)?.delaunay_cells_tracked(&mut chains);
    ps.from_tracked(cells, &chains)
}

fn apply_step(ps: &PrymSurface, step: &Value) -> Result<PrymSurface> {
    let op = step.get("op").and_then(Value::as_str).ok_or_else(|| usage("step needs \"op\""))?;
    let vec_arg = |k: &str| -> Result<Vec2> {
        vec2_from_json(step.get(k).ok_or_else(|| usage(format!("step {op} needs \"{k}\"")))?).map_err(usage)
    };
    match op {
        "rel" => rel_move(ps, &vec_arg("v")?),
        "gl2" => apply_gl2(ps, &matrix_from_json(step.get("m").ok_or_else(|| usage("gl2 needs \"m\""))?)?),
        "collapse" => {
            let i = step.get("sc").and_then(Value::as_u64).ok_or_else(|| usage("collapse needs index \"sc\""))? as usize;
            let list = designated_connections(ps, &ps.surface.area());
            let sc = list.get(i).ok_or_else(|| usage(format!("no designated connection with index {i}")))?;
            collapse(ps, sc)
        }
        "break_up" => {
            let split: Kappa = step.get("split").and_then(Value::as_str).unwrap_or("2,2").parse()?;
            break_up_zero(ps, &vec_arg("v")?, split)
        }
        other => Err(usage(format!("unknown step op {other}"))),
    }
}

/// Replays a deformation script: either an array of steps (applied to
/// `fallback`) or `{"initial", "steps", "assert"}`. The assertion
/// `{"isomorphic_to": surface, "g": matrix, "respect_labels": bool}` demands
/// that the final surface be translation-isomorphic to `g · target`.
pub fn replay_script(script: &Value, fallback: Option<PrymSurface>) -> Result<ReplayReport> {
    let (initial, steps, assertion) = match script {
        Value::Array(a) => (None, a.clone(), None),
        Value::Object(o) => (
            o.get("initial"),
            o.get("steps").and_then(Value::as_array).cloned().unwrap_or_default(),
            o.get("assert"),
        ),
        _ => return Err(usage("script must be an array of steps or an object")),
    };
    let mut ps = match initial {
        Some(initial) => surface_from_value(initial)?,
        None => fallback.ok_or_else(|| usage("script has no initial surface; give --input or prototype flags"))?,
    };
    for (index, step) in steps.iter().enumerate() {
        ps = apply_step(&ps, step).map_err(|e| Error::StepFailed { index, source: Box::new(e) })?;
    }
    let asserted = if let Some(a) = assertion {
        let target = surface_from_value(a.get("isomorphic_to").ok_or_else(|| usage("assert needs \"isomorphic_to\""))?)?;
        let g = match a.get("g") {
            Some(m) => matrix_from_json(m)?,
            None => surface::mat2_from_ints([[1, 0], [0, 1]]),
        };
        let labels = a.get("respect_labels").and_then(Value::as_bool).unwrap_or(true);
        let moved = target.surface.apply_gl2(&g)?.delaunay_cells();
        if ps.surface.is_isomorphic(&moved, labels).is_none() {
            return Err(Error::AssertionFailed("final surface is not isomorphic to g · target".into()));
        }
        true
    } else {
        false
    };
    Ok(ReplayReport { steps: steps.len(), surface: ps, asserted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("prymform").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_small_range() {
        let (code, out, _) = run_args(&["classify", "--from", "8", "--to", "17"]);
        assert_eq!(code, 0);
        assert!(out.contains("D=9: 2 classes"));
        assert!(out.contains("D=13: empty"));
        assert!(out.contains("D=16: 1 class"));
    }

    #[test]
    fn malformed_range_is_usage() {
        assert_eq!(run_args(&["classify", "--from", "20", "--to", "10"]).0, 2);
        assert_eq!(run_args(&["classify", "--from", "x"]).0, 2);
    }

    #[test]
    fn json_report_is_sorted_and_versioned() {
        let (code, out, _) = run_args(&["--json", "invariant", "--w", "1", "--h", "1", "--e", "-1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["parity"], 0);
        assert_eq!(v["command"], "invariant");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn scan_emits_json_lines() {
        let (code, out, _) = run_args(&["scan", "--w", "1", "--h", "1", "--e", "1", "--len", "1"]);
        assert_eq!(code, 0);
        for line in out.lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            assert!(v.get("hol").is_some() && v.get("len2").is_some());
        }
        assert!(out.lines().count() > 0);
    }

    #[test]
    fn empty_script_echoes_initial() {
        let script = json!({"initial": {"prototype": {"w": 1, "h": 1, "e": 1}}, "steps": []});
        let r = replay_script(&script, None).unwrap();
        assert_eq!(r.steps, 0);
        let again = surface_from_value(&script["initial"]).unwrap();
        assert!(r.surface.surface.is_isomorphic(&again.surface, true).is_some());
    }

    #[test]
    fn colliding_step_fails_with_index() {
        let script = json!({
            "initial": {"prototype": {"w": 1, "h": 1, "e": 1, "slit": "1/2"}},
            "steps": [{"op": "rel", "v": ["1/10", 0]}, {"op": "rel", "v": ["-1", 0]}],
        });
        match replay_script(&script, None) {
            Err(Error::StepFailed { index: 1, source }) => assert!(matches!(*source, Error::CollisionDuringMove(_))),
            other => panic!("unexpected {:?}", other.map(|r| r.steps)),
        }
    }
}
