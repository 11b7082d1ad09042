use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde_json::json;

use qcauchy::constructors::{
    crible_quantaloid, example_e7_quantale, example_poset_site, free_quantaloid, group_quantale, interval_quantale,
    locale_quantale, path_metric_category, quotient_quantaloid, rel_quantaloid, FiniteCategory, Topology,
};
use qcauchy::format::{category_to_file, quantaloid_to_file, site_from_file, to_json, SiteFile};
use qcauchy::lattice::FiniteLattice;
use qcauchy::quantaloid::split_idempotents;
use qcauchy::Quantaloid;

use crate::read_quantaloid;
use crate::report::Report;

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Powerset quantaloid of a finite category (`Zn`, `poset`, or a site file).
    FreeCat {
        source: String,
        /// Omit the canonical involution.
        #[arg(long)]
        no_involution: bool,
    },
    /// Group quantale of a cyclic group with the trivial involution (`Z3`).
    Group { group: String },
    /// Quantale of a finite distributive lattice (`chain:N`, `powerset:N`, `diamond`).
    Locale { lattice: String },
    /// Truncated distances `0..=N` under addition.
    Interval { cap: usize },
    /// The five-element quantale on ⊤, 1, a, b, 0.
    E7,
    /// Relations between finite sets of the given sizes (`1,2`).
    Rel { sizes: String },
    /// Quantaloid of cribles of a finite category (`Zn`, `poset`, or a site file).
    Crible { source: String },
    /// Closed cribles of a finite site (`Zn`, `poset`, or a site file).
    SiteQuotient { source: String },
    /// Shortest-path category over the interval quantale.
    PathMetric {
        #[arg(long)]
        points: usize,
        /// Directed edges such as `0-1,1-2`.
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        cap: usize,
    },
    /// Splits the idempotents of a quantaloid file.
    SplitIdempotents { path: std::path::PathBuf },
}

fn parse_group(s: &str) -> Result<usize> {
    let digits = s.trim_start_matches('Z').trim_start_matches('/');
    match digits.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => bail!("expected a cyclic group such as Z3, got {s:?}"),
    }
}

fn parse_lattice(s: &str) -> Result<FiniteLattice> {
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let size = || arg.parse::<usize>().with_context(|| format!("expected a size in {s:?}"));
    Ok(match name {
        "chain" => {
            let n = size()?;
            if n == 0 {
                bail!("a chain needs at least one element");
            }
            FiniteLattice::chain(n)
        }
        "powerset" => {
            let n = size()?;
            if n > 10 {
                bail!("powerset of {n} points is too large");
            }
            FiniteLattice::powerset(n as u32)
        }
        "diamond" => FiniteLattice::diamond(),
        "pentagon" => FiniteLattice::from_order(5, &[(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)])?,
        _ => bail!("unknown lattice {s:?}; use chain:N, powerset:N, diamond or pentagon"),
    })
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|p| p.trim().parse::<usize>().with_context(|| format!("bad number {p:?} in {s:?}"))).collect()
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|e| {
            let (a, b) = e.split_once('-').with_context(|| format!("edge {e:?} is not of the form a-b"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect()
}

/// A finite category with a topology: a cyclic group with the minimal one,
/// the two-object example site, or a site file.
fn load_site(source: &str) -> Result<(FiniteCategory, Topology)> {
    if source == "poset" {
        return Ok(example_poset_site());
    }
    if let Some(rest) = source.strip_prefix('Z') {
        if let Ok(n) = parse_group(rest) {
            let c = FiniteCategory::cyclic_group(n);
            let t = Topology::minimal(&c);
            return Ok((c, t));
        }
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read site {source:?}"))?;
    let file: SiteFile = serde_json::from_str(&text).with_context(|| format!("{source} is not a site file"))?;
    let (c, t) = site_from_file(&file)?;
    let t = t.unwrap_or_else(|| Topology::minimal(&c));
    Ok((c, t))
}

fn hom_sizes(q: &Quantaloid) -> serde_json::Value {
    let n = q.n_objects();
    let names = q.object_names();
    let mut map = serde_json::Map::new();
    for x in 0..n {
        for y in 0..n {
            map.insert(format!("{}->{}", names[x], names[y]), json!(q.hom(x, y).size()));
        }
    }
    serde_json::Value::Object(map)
}

/// Builds the requested structure and returns its canonical JSON.
pub fn generate(kind: &GenKind, report: &mut Report) -> Result<String> {
    let q = match kind {
        GenKind::FreeCat { source, no_involution } => free_quantaloid(&load_site(source)?.0, !no_involution)?,
        GenKind::Group { group } => group_quantale(&FiniteCategory::cyclic_group(parse_group(group)?))?,
        GenKind::Locale { lattice } => locale_quantale(&parse_lattice(lattice)?)?,
        GenKind::Interval { cap } => {
            if *cap == 0 {
                bail!("the cap must be positive");
            }
            interval_quantale(*cap)
        }
        GenKind::E7 => example_e7_quantale(),
        GenKind::Rel { sizes } => rel_quantaloid(&parse_list(sizes)?)?,
        GenKind::Crible { source } => crible_quantaloid(&load_site(source)?.0)?.into_quantaloid(),
        GenKind::SiteQuotient { source } => {
            let (c, t) = load_site(source)?;
            quotient_quantaloid(&c, &t)?.into_quantaloid()
        }
        GenKind::SplitIdempotents { path } => split_idempotents(&read_quantaloid(path)?)?,
        GenKind::PathMetric { points, edges, cap } => {
            if *cap == 0 {
                bail!("the cap must be positive");
            }
            let a = path_metric_category(*points, &parse_edges(edges)?, *cap)?;
            report.fact("kind", "category");
            report.fact("objects", a.len());
            report.verdict("symmetric", a.is_symmetric()?);
            return Ok(to_json(&category_to_file(&a)));
        }
    };
    report.fact("kind", "quantaloid");
    report.fact("objects", q.n_objects());
    report.fact("hom sizes", hom_sizes(&q));
    report.verdict("involutive", q.is_involutive());
    Ok(to_json(&quantaloid_to_file(&q)))
}
