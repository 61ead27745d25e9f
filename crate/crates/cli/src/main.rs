//! `bianchi`: scriptable verification runs. Every subcommand prints one
//! JSON report on stdout and exits 0 iff its status is `pass`.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use bianchi::congruence::{systole_lower_bound, AuditOptions, CongruenceGroup};
use bianchi::covers::{branch_preimage_counts, check_monodromy, extend_trivially, Component, Monodromy};
use bianchi::fillpipe::{self, FillOptions};
use bianchi::fpcore::{
    default_panel, fingerprint_with, tietze_simplify, todd_coxeter, FiniteGroup, TietzeOptions, DEFAULT_HOM_GUARD,
};
use bianchi::geombounds;
use bianchi::matgroup::{classify, IsomKind};
use bianchi::par::Jobs;
use bianchi::words::{eval_swan, load_meridians_from, parse_word_in, swan_presentation, Presentation, Word};
use bianchi::QuadInt;

/// Float comparisons in reports are exact up to this absolute tolerance.
const FLOAT_TOLERANCE: f64 = 1e-12;
/// Tolerance used when comparing audited lengths against the bound.
const AUDIT_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "bianchi", version, about = "Exact computations in Bianchi groups and congruence link groups")]
struct Cli {
    /// Worker threads for audits, scans and homomorphism counts.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    /// Directory holding `meridians.txt`; defaults to the bundled table.
    #[arg(long, global = true, env = "BIANCHI_DATA_DIR")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct AlphaArg {
    /// Gaussian integer such as `3+2i`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the Swan relators in exact arithmetic.
    RelatorsCheck,
    /// Check every meridian is a parabolic element of Gamma(3+2i).
    MeridiansCheck,
    /// Trace-congruence systole lower bound for Gamma(alpha).
    SystoleBound(AlphaArg),
    /// Number of cusps of Gamma(alpha).
    CuspCount(AlphaArg),
    /// Coset table of Gamma(alpha) from the reduction map.
    CosetTable {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Include the full permutation table.
        #[arg(long)]
        full: bool,
    },
    /// Coset enumeration for a presentation file.
    ToddCoxeter {
        file: PathBuf,
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        extra_relators: Vec<String>,
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        subgroup: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Present Gamma(alpha) on Schreier generators and rewrite words into it.
    Rewrite {
        #[command(flatten)]
        alpha: AlphaArg,
        /// Swan words to rewrite; defaults to the peripheral generators.
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        word: Vec<String>,
        /// Print the Schreier presentation too.
        #[arg(long)]
        full: bool,
    },
    /// Fill meridians of the 3+2i congruence link.
    Fill {
        /// A meridian index 1..42 to keep, `all` to scan every index, or
        /// `none` to fill all 42.
        #[arg(long)]
        keep: String,
        #[arg(long)]
        budget: Option<usize>,
        /// Comma-separated panel such as `S3,S4,S5,A5,PSL2(7)`.
        #[arg(long)]
        panel: Option<String>,
    },
    /// Abelianization and homomorphism counts of a presentation file.
    Fingerprint {
        file: PathBuf,
        #[arg(long)]
        targets: Option<String>,
        /// Tietze-simplify before counting.
        #[arg(long)]
        simplify: bool,
    },
    /// Compare the fingerprints of two presentation files.
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        targets: Option<String>,
    },
    /// Search the Cayley ball for short geodesics in Gamma(alpha).
    AuditGeodesics {
        #[command(flatten)]
        alpha: AlphaArg,
        #[arg(long)]
        radius: usize,
    },
    /// Area, genus and systole bounds.
    Geometry {
        #[arg(long)]
        sys: Option<f64>,
        #[arg(long)]
        area: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Validate a monodromy file.
    MonodromyCheck { file: PathBuf },
    /// Extend a monodromy to a larger link by sending new meridians to the
    /// identity.
    MonodromyExtend {
        file: PathBuf,
        /// Presentation of the larger link, with optional `component:` lines.
        #[arg(long)]
        full: PathBuf,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        new_meridians: Vec<String>,
        /// `gen=word` images of full generators in the old generators.
        #[arg(long = "map", num_args = 1..)]
        maps: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Incomplete,
}

#[derive(Serialize)]
struct Report {
    command: String,
    parameters: Value,
    status: Status,
    payload: Value,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

type Outcome = Result<(Status, Value), String>;

fn real(value: f64) -> Value {
    json!({ "value": value, "tolerance": FLOAT_TOLERANCE })
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn parse_alpha(s: &str) -> Result<QuadInt, String> {
    s.parse::<QuadInt>().map_err(|e| format!("bad --alpha {s:?}: {e}"))
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_presentation(path: &Path) -> Result<Presentation, String> {
    Presentation::from_text(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn panel(descriptors: Option<&str>) -> Result<Vec<FiniteGroup>, String> {
    match descriptors {
        None => Ok(default_panel()),
        Some(s) => split_panel(s).iter().map(|d| FiniteGroup::from_descriptor(d).map_err(|e| e.to_string())).collect(),
    }
}

/// Splits on commas outside parentheses so `PSL2(7)` survives.
fn split_panel(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn relators_check() -> Outcome {
    let swan = swan_presentation();
    let mut rows = Vec::new();
    let mut ok = true;
    for r in swan.relators() {
        let m = eval_swan(r).map_err(|e| e.to_string())?;
        ok &= m.is_identity();
        rows.push(json!({ "relator": r.to_string(), "identity": m.is_identity() }));
    }
    Ok((pass_if(ok), json!({ "relators": rows })))
}

fn meridians_check(data_dir: Option<&Path>) -> Outcome {
    let table = load_meridians_from(data_dir).map_err(|e| e.to_string())?;
    let g = CongruenceGroup::new(QuadInt::gaussian(3, 2)).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    let mut good = 0;
    for (i, w) in table.words().iter().enumerate() {
        let m = eval_swan(w).map_err(|e| e.to_string())?;
        let member = g.member(&m);
        let cls = classify(&m);
        let parabolic = cls.kind == IsomKind::Parabolic;
        good += usize::from(member && parabolic);
        rows.push(json!({
            "index": i + 1,
            "word": w.to_string(),
            "trace": cls.trace.to_string(),
            "kernel": member,
            "parabolic": parabolic,
        }));
    }
    let ok = good == table.len() && table.len() == 42;
    Ok((pass_if(ok), json!({ "checked": table.len(), "parabolic_kernel_members": good, "meridians": rows })))
}

fn systole_bound(alpha: &str) -> Outcome {
    let a = parse_alpha(alpha)?;
    let bound = systole_lower_bound(&a).map_err(|e| e.to_string())?;
    let threshold = geombounds::genus2_exclusion_threshold();
    Ok((
        Status::Pass,
        json!({
            "norm": a.norm().to_string(),
            "bound": real(bound),
            "genus2_threshold": real(threshold),
            "excludes_genus2": geombounds::excludes_genus2(bound),
        }),
    ))
}

fn cusp_count(alpha: &str) -> Outcome {
    let g = CongruenceGroup::new(parse_alpha(alpha)?).map_err(|e| e.to_string())?;
    let q = g.quotient().map_err(|e| e.to_string())?;
    let cusps = g.count_cusps().map_err(|e| e.to_string())?;
    Ok((Status::Pass, json!({ "cusps": cusps, "quotient_order": q.order() })))
}

fn coset_table(alpha: &str, full: bool) -> Outcome {
    let a = parse_alpha(alpha)?;
    let (t, _, _) = fillpipe::congruence_presentation(&a).map_err(|e| e.to_string())?;
    let mut payload = json!({ "cosets": t.len() });
    if full {
        payload["table"] = serde_json::to_value(t.export(&swan_presentation())).map_err(|e| e.to_string())?;
    }
    Ok((Status::Pass, payload))
}

fn words_in(texts: &[String], gens: &[String]) -> Result<Vec<Word>, String> {
    texts.iter().map(|w| parse_word_in(w, gens).map_err(|e| format!("{w:?}: {e}"))).collect()
}

fn todd_coxeter_cmd(file: &Path, extra: &[String], subgroup: &[String], limit: usize) -> Outcome {
    let p = read_presentation(file)?;
    let p = p.with_relators(words_in(extra, p.generators())?).map_err(|e| e.to_string())?;
    let sub = words_in(subgroup, p.generators())?;
    let t = todd_coxeter(&p, &sub, limit).map_err(|e| e.to_string())?;
    Ok((Status::Pass, json!({ "cosets": t.len() })))
}

fn rewrite(alpha: &str, words: &[String], full: bool) -> Outcome {
    let a = parse_alpha(alpha)?;
    let (t, p, rw) = fillpipe::congruence_presentation(&a).map_err(|e| e.to_string())?;
    let defaults = ["t^13".to_string(), "t^-5*u".to_string()];
    let words = if words.is_empty() { &defaults[..] } else { words };
    let swan = swan_presentation();
    let mut rows = Vec::new();
    let mut ok = true;
    for w in words_in(words, swan.generators())? {
        match rw.rewrite(&w) {
            Ok(x) => rows.push(json!({ "word": w.to_string(), "rewritten": x.to_string() })),
            Err(e) => {
                ok = false;
                rows.push(json!({ "word": w.to_string(), "error": e.to_string() }));
            }
        }
    }
    let mut payload = json!({
        "index": t.len(),
        "generators": p.generators().len(),
        "relators": p.relators().len(),
        "rewritten": rows,
    });
    if full {
        payload["presentation"] = json!(p.to_text());
    }
    Ok((pass_if(ok), payload))
}

fn fill(keep: &str, budget: Option<usize>, panel_arg: Option<&str>, jobs: Jobs) -> Outcome {
    let mut opts = FillOptions { jobs, panel: panel(panel_arg)?, ..Default::default() };
    if let Some(b) = budget {
        opts.tietze.budget = b;
    }
    let k = fillpipe::kernel().map_err(|e| e.to_string())?;
    let note = "fingerprint equality with abelianization Z is evidence for, not proof of, isomorphism";
    match keep {
        "all" => {
            let results = fillpipe::scan_all(k, &opts).map_err(|e| e.to_string())?;
            let matches = fillpipe::matching_indices(&results);
            let status = if !matches.is_empty() {
                Status::Pass
            } else if results.iter().any(|r| r.incomplete) {
                Status::Incomplete
            } else {
                Status::Fail
            };
            Ok((status, json!({ "matching": matches, "results": results, "note": note })))
        }
        "none" => {
            let r = fillpipe::fill(k, None, &opts).map_err(|e| e.to_string())?;
            let trivial = r.abelian.is_trivial() && r.fingerprint.as_ref().is_some_and(|f| f.all_ones());
            Ok((pass_if(trivial), json!({ "trivial": trivial, "results": [r] })))
        }
        s => {
            let i: usize = s.parse().map_err(|_| format!("--keep expects 1..42, all or none, not {s:?}"))?;
            let r = fillpipe::fill(k, Some(i), &opts).map_err(|e| e.to_string())?;
            let status = if r.incomplete { Status::Incomplete } else { Status::Pass };
            Ok((status, json!({ "matching": if r.matches_fig8 { vec![i] } else { vec![] }, "results": [r], "note": note })))
        }
    }
}

fn fingerprint_cmd(file: &Path, targets: Option<&str>, simplify: bool, jobs: Jobs) -> Outcome {
    let mut p = read_presentation(file)?;
    if simplify {
        p = tietze_simplify(&p, &TietzeOptions::default()).presentation;
    }
    let f = fingerprint_with(&p, &panel(targets)?, jobs, DEFAULT_HOM_GUARD).map_err(|e| e.to_string())?;
    Ok((Status::Pass, json!({ "generators": p.generators().len(), "fingerprint": f })))
}

fn compare(f1: &Path, f2: &Path, targets: Option<&str>, jobs: Jobs) -> Outcome {
    let pan = panel(targets)?;
    let a = fingerprint_with(&read_presentation(f1)?, &pan, jobs, DEFAULT_HOM_GUARD).map_err(|e| e.to_string())?;
    let b = fingerprint_with(&read_presentation(f2)?, &pan, jobs, DEFAULT_HOM_GUARD).map_err(|e| e.to_string())?;
    let equal = a == b;
    Ok((pass_if(equal), json!({ "equal": equal, "first": a, "second": b })))
}

fn audit(alpha: &str, radius: usize, jobs: Jobs) -> Outcome {
    let g = CongruenceGroup::new(parse_alpha(alpha)?).map_err(|e| e.to_string())?;
    let rep = g
        .audit_short_geodesics(radius, &AuditOptions { jobs, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let mut payload = serde_json::to_value(&rep).map_err(|e| e.to_string())?;
    payload["tolerance"] = json!(AUDIT_TOLERANCE);
    Ok((pass_if(rep.violations.is_empty()), payload))
}

fn geometry(sys: Option<f64>, area: Option<f64>, r: Option<f64>) -> Outcome {
    if sys.is_none() && area.is_none() && r.is_none() {
        return Err("geometry needs at least one of --sys, --area, --r".into());
    }
    let mut payload = json!({ "genus2_threshold": real(geombounds::genus2_exclusion_threshold()) });
    if let Some(s) = sys {
        if s <= 0.0 {
            return Err("--sys must be positive".into());
        }
        let b = geombounds::from_systole(s);
        payload["sys"] = json!({
            "sys": real(b.sys),
            "min_area": real(b.min_area),
            "min_genus": b.min_genus,
            "excludes_genus2": b.excludes_genus2,
        });
    }
    if let Some(a) = area {
        if a < 0.0 {
            return Err("--area must be non-negative".into());
        }
        payload["area"] = json!({ "area": real(a), "min_genus": geombounds::min_genus_from_area(a) });
    }
    if let Some(r) = r {
        if r < 0.0 {
            return Err("--r must be non-negative".into());
        }
        let area = geombounds::ball_area_bound(r);
        payload["r"] = json!({
            "r": real(r),
            "ball_area_bound": real(area),
            "min_genus": geombounds::min_genus_from_area(area),
        });
    }
    Ok((Status::Pass, payload))
}

fn monodromy_check(file: &Path) -> Outcome {
    let m = Monodromy::from_text(&read(file)?).map_err(|e| e.to_string())?;
    let c = check_monodromy(&m);
    Ok((
        pass_if(c.valid),
        json!({ "degree": m.degree(), "check": c, "preimage_counts": branch_preimage_counts(&m) }),
    ))
}

/// A presentation file that may also carry `component:` lines.
fn read_link(path: &Path) -> Result<(Presentation, Vec<Component>), String> {
    let text = read(path)?;
    let mut pres = String::new();
    let mut comps = Vec::new();
    for line in text.lines() {
        let l = line.split('#').next().unwrap_or("").trim();
        if let Some(rest) = l.strip_prefix("component:") {
            comps.push(Component { meridians: rest.split_whitespace().map(str::to_string).collect() });
        } else {
            pres.push_str(l);
            pres.push('\n');
        }
    }
    let p = Presentation::from_text(&pres).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((p, comps))
}

fn monodromy_extend(file: &Path, full: &Path, new: &[String], maps: &[String]) -> Outcome {
    let m = Monodromy::from_text(&read(file)?).map_err(|e| e.to_string())?;
    let (fp, comps) = read_link(full)?;
    let mut corr = HashMap::new();
    for entry in maps {
        let (g, w) = entry.split_once('=').ok_or_else(|| format!("--map expects gen=word, not {entry:?}"))?;
        let w = parse_word_in(w.trim(), m.presentation().generators()).map_err(|e| e.to_string())?;
        corr.insert(g.trim().to_string(), w);
    }
    let ext = extend_trivially(&m, &fp, comps, new, &corr).map_err(|e| e.to_string())?;
    let c = check_monodromy(&ext);
    Ok((
        pass_if(c.valid),
        json!({
            "degree": ext.degree(),
            "check": c,
            "preimage_counts": branch_preimage_counts(&ext),
            "monodromy": ext.to_text(),
        }),
    ))
}

fn run(cli: &Cli) -> (String, Value, Outcome) {
    let jobs = Jobs(cli.jobs.max(1));
    let dd = cli.data_dir.as_deref();
    match &cli.cmd {
        Cmd::RelatorsCheck => ("relators-check".into(), json!({}), relators_check()),
        Cmd::MeridiansCheck => (
            "meridians-check".into(),
            json!({ "data_dir": dd.map(|d| d.display().to_string()) }),
            meridians_check(dd),
        ),
        Cmd::SystoleBound(a) => ("systole-bound".into(), json!({ "alpha": a.alpha }), systole_bound(&a.alpha)),
        Cmd::CuspCount(a) => ("cusp-count".into(), json!({ "alpha": a.alpha }), cusp_count(&a.alpha)),
        Cmd::CosetTable { alpha, full } => (
            "coset-table".into(),
            json!({ "alpha": alpha.alpha, "full": full }),
            coset_table(&alpha.alpha, *full),
        ),
        Cmd::ToddCoxeter { file, extra_relators, subgroup, limit } => (
            "todd-coxeter".into(),
            json!({ "file": file.display().to_string(), "extra_relators": extra_relators, "subgroup": subgroup, "limit": limit }),
            todd_coxeter_cmd(file, extra_relators, subgroup, *limit),
        ),
        Cmd::Rewrite { alpha, word, full } => (
            "rewrite".into(),
            json!({ "alpha": alpha.alpha, "words": word, "full": full }),
            rewrite(&alpha.alpha, word, *full),
        ),
        Cmd::Fill { keep, budget, panel } => (
            "fill".into(),
            json!({ "keep": keep, "budget": budget, "panel": panel, "jobs": jobs.0 }),
            fill(keep, *budget, panel.as_deref(), jobs),
        ),
        Cmd::Fingerprint { file, targets, simplify } => (
            "fingerprint".into(),
            json!({ "file": file.display().to_string(), "targets": targets, "simplify": simplify }),
            fingerprint_cmd(file, targets.as_deref(), *simplify, jobs),
        ),
        Cmd::Compare { file1, file2, targets } => (
            "compare".into(),
            json!({ "file1": file1.display().to_string(), "file2": file2.display().to_string(), "targets": targets }),
            compare(file1, file2, targets.as_deref(), jobs),
        ),
        Cmd::AuditGeodesics { alpha, radius } => (
            "audit-geodesics".into(),
            json!({ "alpha": alpha.alpha, "radius": radius, "jobs": jobs.0 }),
            audit(&alpha.alpha, *radius, jobs),
        ),
        Cmd::Geometry { sys, area, r } => ("geometry".into(), json!({ "sys": sys, "area": area, "r": r }), geometry(*sys, *area, *r)),
        Cmd::MonodromyCheck { file } => (
            "monodromy-check".into(),
            json!({ "file": file.display().to_string() }),
            monodromy_check(file),
        ),
        Cmd::MonodromyExtend { file, full, new_meridians, maps } => (
            "monodromy-extend".into(),
            json!({ "file": file.display().to_string(), "full": full.display().to_string(), "new_meridians": new_meridians, "map": maps }),
            monodromy_extend(file, full, new_meridians, maps),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (command, parameters, outcome) = run(&cli);
    let (status, payload) = outcome.unwrap_or_else(|e| {
        eprintln!("bianchi {command}: {e}");
        (Status::Fail, json!({ "error": e }))
    });
    let report = Report {
        command,
        parameters,
        status,
        payload,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: cli.timing.then(|| start.elapsed().as_secs_f64()),
    };
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if status == Status::Pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
