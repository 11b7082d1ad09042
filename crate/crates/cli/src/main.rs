//! `qcauchy`: load, generate and check finite quantaloids and the categories
//! enriched in them.
//!
//! Exit codes: 0 when the property holds (or the artifact was written), 1
//! when it fails, 2 on unreadable input, invalid preconditions or an
//! exceeded search cap.

mod gen;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qcauchy::completion::{
    cauchy_completion, is_cauchy_complete, l_functor, presheaf_name, symmetric_completion, witness_category,
    DEFAULT_MAX_PRESHEAVES,
};
use qcauchy::constructors::ConstructorError;
use qcauchy::format::{
    category_over, category_to_file, completion_to_file, detect, quantaloid_from_file, site_from_file, to_json,
    CategoryFile, FileKind, FormatError, QuantaloidFile, QuantaloidSource, SiteFile,
};
use qcauchy::qcat::QCatError;
use qcauchy::quantaloid::{
    check_cauchy_bilateral_with, check_strong_cauchy_bilateral, BilateralityMode, BilateralityOptions, Law,
    DEFAULT_MAX_PAIRS,
};
use qcauchy::sampling::sample_categories;
use qcauchy::{QCategory, Quantaloid};

use gen::GenKind;
use report::{family_json, family_text, morphism_json, morphism_text, Report, Status};

#[derive(Debug, Parser)]
#[command(
    name = "qcauchy",
    version,
    about = "Finite involutive quantaloids, enriched categories and their completions"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Largest candidate pool for the Cauchy-bilateral search.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: usize,
    /// Largest number of candidate presheaves enumerated per completion.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PRESHEAVES)]
    max_presheaves: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a quantaloid, category or site file against its axioms.
    Validate { path: PathBuf },
    /// Write a generated structure as JSON.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file; standard output when omitted.
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Decide a property of a quantaloid file.
    Check { kind: CheckKind, path: PathBuf },
    /// Complete or symmetrise a category file.
    Complete {
        mode: CompleteMode,
        path: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare the symmetric completion of the symmetrisation with the
    /// symmetrisation of the Cauchy completion.
    CompareL { path: PathBuf },
    /// Build a symmetric category whose Cauchy completion is not symmetric.
    Counterexample {
        path: PathBuf,
        /// Where to write the symmetric category.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Where to write its Cauchy completion.
        #[arg(long)]
        completion_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    Bilateral,
    Strong,
    Modular,
    Localic,
    Integral,
    Involution,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CompleteMode {
    Cauchy,
    Symmetric,
    Symmetrise,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn parse_as<T: serde::de::DeserializeOwned>(value: Value, path: &Path, what: &str) -> Result<T> {
    serde_json::from_value(value).with_context(|| format!("{} is not a {what} file", path.display()))
}

/// Parses a quantaloid file without checking the axioms.
pub(crate) fn read_quantaloid(path: &Path) -> Result<Quantaloid> {
    let file: QuantaloidFile = parse_as(read_json(path)?, path, "quantaloid")?;
    Ok(quantaloid_from_file(&file)?)
}

fn require_valid(q: &Quantaloid, what: &str, skip_involution: bool) -> Result<()> {
    let involution_law =
        |l: Law| matches!(l, Law::InvolutionMonotone | Law::InvolutionReversesComposition | Law::InvolutionInvolutive);
    if let Some(v) = q.validate().into_iter().find(|v| !(skip_involution && involution_law(v.law))) {
        bail!("{what} is not a valid quantaloid ({v})");
    }
    Ok(())
}

fn valid_quantaloid(path: &Path) -> Result<Quantaloid> {
    let q = read_quantaloid(path)?;
    require_valid(&q, &path.display().to_string(), false)?;
    Ok(q)
}

fn category_base(file: &CategoryFile, path: &Path) -> Result<Quantaloid> {
    let qfile = match &file.quantaloid {
        QuantaloidSource::Inline(q) => (**q).clone(),
        QuantaloidSource::Path(p) => {
            let qpath = path.parent().unwrap_or(Path::new("")).join(p);
            parse_as(read_json(&qpath)?, &qpath, "quantaloid")?
        }
    };
    Ok(quantaloid_from_file(&qfile)?)
}

fn read_category(path: &Path) -> Result<QCategory> {
    let file: CategoryFile = parse_as(read_json(path)?, path, "category")?;
    let q = category_base(&file, path)?;
    require_valid(&q, &format!("the base of {}", path.display()), false)?;
    Ok(category_over(Arc::new(q), &file)?)
}

fn write_artifact(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

struct Ctx {
    caps: BilateralityOptions,
    max_presheaves: usize,
    report: Report,
}

fn cmd_validate(ctx: &mut Ctx, path: &Path) -> Result<Status> {
    let value = read_json(path)?;
    let r = &mut ctx.report;
    let mut problems: Vec<(String, Value)> = Vec::new();
    match detect(&value) {
        None => bail!("{} is neither a quantaloid, a category nor a site file", path.display()),
        Some(FileKind::Quantaloid) => {
            let file: QuantaloidFile = parse_as(value, path, "quantaloid")?;
            let q = quantaloid_from_file(&file)?;
            r.fact("kind", "quantaloid");
            r.fact("objects", q.n_objects());
            r.fact("involutive", q.is_involutive());
            for v in q.validate() {
                problems.push((v.to_string(), json!({"law": v.law.name(), "detail": v.detail})));
            }
        }
        Some(FileKind::Category) => {
            let file: CategoryFile = parse_as(value, path, "category")?;
            let q = category_base(&file, path)?;
            r.fact("kind", "category");
            r.fact("objects", file.objects.len());
            for v in q.validate() {
                problems.push((format!("base: {v}"), json!({"law": v.law.name(), "detail": v.detail})));
            }
            if problems.is_empty() {
                match category_over(Arc::new(q), &file) {
                    Ok(_) => {}
                    Err(FormatError::Category(QCatError::Invalid(vs))) => {
                        for v in vs {
                            problems.push((v.to_string(), json!({"law": v.kind.to_string(), "detail": v.detail})));
                        }
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Some(FileKind::Site) => {
            let file: SiteFile = parse_as(value, path, "site")?;
            r.fact("kind", "site");
            r.fact("objects", file.objects.len());
            match site_from_file(&file) {
                Ok(_) => {}
                Err(FormatError::Constructor(e @ ConstructorError::InvalidCategory(_)))
                | Err(FormatError::Constructor(e @ ConstructorError::TopologyAxiomViolated { .. })) => {
                    problems.push((e.to_string(), json!({"law": "site", "detail": e.to_string()})));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let ok = r.verdict("valid", problems.is_empty());
    for (text, value) in problems {
        r.witness(text, value);
    }
    Ok(Status::from_bool(ok))
}

fn cmd_check(ctx: &mut Ctx, kind: CheckKind, path: &Path) -> Result<Status> {
    let q = read_quantaloid(path)?;
    require_valid(&q, &path.display().to_string(), matches!(kind, CheckKind::Involution))?;
    let r = &mut ctx.report;
    let holds = match kind {
        CheckKind::Bilateral | CheckKind::Strong => {
            let report = if matches!(kind, CheckKind::Bilateral) {
                r.cap("max-pairs", ctx.caps.max_pairs);
                check_cauchy_bilateral_with(&q, ctx.caps)?
            } else {
                check_strong_cauchy_bilateral(&q)?
            };
            if let Some(w) = &report.witness {
                r.witness(family_text(&q, w), family_json(&q, w));
            }
            r.verdict(report.mode.property_name(), report.holds)
        }
        CheckKind::Modular => {
            let w = q.modular_law_witness()?;
            if let Some((g, f, h)) = w {
                r.witness(
                    format!(
                        "g∘f ∧ h ≰ g∘(f ∧ gᵒ∘h) with g = {}, f = {}, h = {}",
                        morphism_text(&q, g),
                        morphism_text(&q, f),
                        morphism_text(&q, h)
                    ),
                    json!({"g": morphism_json(&q, g), "f": morphism_json(&q, f), "h": morphism_json(&q, h)}),
                );
            }
            r.verdict("modular", w.is_none())
        }
        CheckKind::Localic => {
            let n = q.n_objects();
            let bad = (0..n * n).find_map(|i| q.hom(i / n, i % n).distributivity_witness().map(|w| (i / n, i % n, w)));
            if let Some((x, y, (a, b, c))) = bad {
                let l = |e| q.label(x, y, e);
                let hom = format!("{}->{}", q.object_name(x), q.object_name(y));
                r.witness(
                    format!(
                        "in {hom}: {} ∧ ({} ∨ {}) differs from ({} ∧ {}) ∨ ({} ∧ {})",
                        l(a),
                        l(b),
                        l(c),
                        l(a),
                        l(b),
                        l(a),
                        l(c)
                    ),
                    json!({"hom": hom, "a": l(a), "b": l(b), "c": l(c)}),
                );
            }
            r.verdict("locally localic", bad.is_none())
        }
        CheckKind::Integral => {
            let bad = (0..q.n_objects()).find(|&x| q.id(x) != q.hom(x, x).top());
            if let Some(x) = bad {
                let name = q.object_name(x);
                let (id, top) = (q.label(x, x, q.id(x)), q.label(x, x, q.hom(x, x).top()));
                r.witness(
                    format!("the identity {id} on {name} is below the top {top}"),
                    json!({"object": name, "identity": id, "top": top}),
                );
            }
            r.verdict("integral", bad.is_none())
        }
        CheckKind::Involution => {
            if !q.is_involutive() {
                r.witness("no involution is given", json!({"law": "involution", "detail": "missing"}));
                r.verdict("involutive", false)
            } else {
                let vs = q.involution_violations();
                for v in &vs {
                    r.witness(v.to_string(), json!({"law": v.law.name(), "detail": v.detail}));
                }
                r.verdict("involutive", vs.is_empty())
            }
        }
    };
    Ok(Status::from_bool(holds))
}

/// Records the first asymmetric pair of `a`, if any.
fn asymmetry(r: &mut Report, a: &QCategory) {
    let Some((y, x)) = a.asymmetric_pair() else { return };
    let q = a.base();
    let (tx, ty) = (a.type_of(x), a.type_of(y));
    let forward = q.label(tx, ty, a.hom(y, x)).to_string();
    let back = q.label(tx, ty, q.inv(ty, tx, a.hom(x, y))).to_string();
    r.witness(
        format!(
            "hom({}, {}) = {forward} but the involute of hom({}, {}) is {back}",
            a.name(y),
            a.name(x),
            a.name(x),
            a.name(y)
        ),
        json!({"y": a.name(y), "x": a.name(x), "hom": forward, "involute_of_reverse": back}),
    );
}

fn cmd_complete(ctx: &mut Ctx, mode: CompleteMode, path: &Path, out: Option<&Path>) -> Result<Status> {
    let a = read_category(path)?;
    let cap = ctx.max_presheaves;
    let r = &mut ctx.report;
    r.cap("max-presheaves", cap);
    let (text, result) = match mode {
        CompleteMode::Cauchy => {
            let c = cauchy_completion(&a, cap)?;
            (to_json(&completion_to_file(&c)), c.completion)
        }
        CompleteMode::Symmetric => {
            if !a.is_symmetric()? {
                bail!("{} is not a symmetric category", path.display());
            }
            let c = symmetric_completion(&a, cap)?;
            (to_json(&completion_to_file(&c)), c.completion)
        }
        CompleteMode::Symmetrise => {
            let s = a.symmetrise()?;
            (to_json(&category_to_file(&s)), s)
        }
    };
    r.fact("objects", result.len());
    r.fact("object names", json!(result.names()));
    r.verdict("symmetric", result.is_symmetric()?);
    r.verdict("Cauchy complete", is_cauchy_complete(&result, cap)?);
    asymmetry(r, &result);
    if let Some(out) = out {
        write_artifact(out, &text)?;
    }
    Ok(Status::Holds)
}

fn cmd_compare_l(ctx: &mut Ctx, path: &Path) -> Result<Status> {
    let a = read_category(path)?;
    let cap = ctx.max_presheaves;
    let r = &mut ctx.report;
    r.cap("max-presheaves", cap);
    let cmp = l_functor(&a, cap)?;
    r.fact("domain objects", cmp.domain.completion.len());
    r.fact("codomain objects", cmp.codomain.len());
    r.verdict("injective on objects", cmp.is_injective());
    r.verdict("surjective on objects", cmp.is_surjective());
    r.verdict("fully faithful", cmp.is_fully_faithful());
    let mut recovered = true;
    for i in 0..cmp.domain.presheaves.len() {
        recovered &= cmp.recovers(&a, i)?;
    }
    r.verdict("presheaf recovered from its image", recovered);
    for y in cmp.missing() {
        let name = presheaf_name(&cmp.cauchy.presheaves[y]);
        r.witness(format!("not in the image: {name}"), json!({"missing": name}));
    }
    Ok(Status::from_bool(r.verdict("isomorphism", cmp.is_isomorphism())))
}

fn cmd_counterexample(ctx: &mut Ctx, path: &Path, out: Option<&Path>, completion_out: Option<&Path>) -> Result<Status> {
    let q = Arc::new(valid_quantaloid(path)?);
    if !q.is_involutive() {
        bail!("{} carries no involution", path.display());
    }
    let cap = ctx.max_presheaves;
    let r = &mut ctx.report;
    r.cap("max-pairs", ctx.caps.max_pairs);
    r.cap("max-presheaves", cap);
    let report = check_cauchy_bilateral_with(&q, ctx.caps)?;
    r.verdict(BilateralityMode::Cauchy.property_name(), report.holds);
    let Some(w) = report.witness else {
        r.fact("counterexample", "none: every symmetric category has a symmetric Cauchy completion");
        return Ok(Status::Fails);
    };
    r.witness(family_text(&q, &w), family_json(&q, &w));
    let wc = witness_category(&q, &w)?;
    r.fact("witness category hom", "A(j,i) = f_j ∘ g_i ∨ δ_ij (f_j ∘ g_j does not type-check)");
    let mut candidates = Vec::new();
    if wc.category.is_symmetric()? {
        candidates.push(wc.category.clone());
    }
    candidates.push(wc.category.symmetrise()?);
    let mut found = None;
    for a in candidates {
        let cc = cauchy_completion(&a, cap)?;
        if !cc.completion.is_symmetric()? {
            found = Some((a, cc));
            break;
        }
    }
    if found.is_none() {
        for a in sample_categories(&q, 200, 0).categories {
            if a.is_symmetric()? {
                let cc = cauchy_completion(&a, cap)?;
                if !cc.completion.is_symmetric()? {
                    found = Some((a, cc));
                    break;
                }
            }
        }
    }
    let Some((a, cc)) = found else {
        bail!("no symmetric category with an asymmetric Cauchy completion was found");
    };
    r.fact("category objects", a.len());
    r.fact("completion objects", cc.completion.len());
    r.fact("completion object names", json!(cc.completion.names()));
    r.verdict("category symmetric", a.is_symmetric()?);
    r.verdict("Cauchy completion symmetric", cc.completion.is_symmetric()?);
    asymmetry(r, &cc.completion);
    if let Some(out) = out {
        write_artifact(out, &to_json(&category_to_file(&a)))?;
    }
    if let Some(out) = completion_out {
        write_artifact(out, &to_json(&completion_to_file(&cc)))?;
    }
    Ok(Status::Holds)
}

fn run(cli: Cli, command_line: String) -> Result<Status> {
    let mut ctx = Ctx {
        caps: BilateralityOptions { max_pairs: cli.max_pairs, ..BilateralityOptions::default() },
        max_presheaves: cli.max_presheaves,
        report: Report::new(command_line, cli.timing),
    };
    let status = match &cli.command {
        Command::Validate { path } => cmd_validate(&mut ctx, path)?,
        Command::Gen { kind, out } => {
            let text = gen::generate(kind, &mut ctx.report)?;
            match out {
                Some(out) => write_artifact(out, &text)?,
                None => {
                    print!("{text}");
                    return Ok(Status::Holds);
                }
            }
            Status::Holds
        }
        Command::Check { kind, path } => cmd_check(&mut ctx, *kind, path)?,
        Command::Complete { mode, path, out } => cmd_complete(&mut ctx, *mode, path, out.as_deref())?,
        Command::CompareL { path } => cmd_compare_l(&mut ctx, path)?,
        Command::Counterexample { path, out, completion_out } => {
            cmd_counterexample(&mut ctx, path, out.as_deref(), completion_out.as_deref())?
        }
    };
    ctx.report.print(cli.json);
    Ok(status)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let command_line =
        std::iter::once("qcauchy".to_string()).chain(args.iter().skip(1).cloned()).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    match run(cli, command_line) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
