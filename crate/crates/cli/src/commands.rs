use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ekrw_core::canonical::{bounds_report, build, CanonicalSpec, Placement};
use ekrw_core::family::{edge_from_list, FamilyJson};
use ekrw_core::search::{enumerate_maximum, max_family, ConstraintSet, SearchConfig};
use ekrw_core::separability::{
    build_prop1_family, build_prop2_family, non_separable, DisjointnessGraph, SetSystem,
};
use ekrw_core::shifting::{
    ai_profile, beyond_hm, classify_shift_outcome, enumerate_shift_preimages, hm_or_ekr_centers, hm_triples,
    is_stable, movable_edges, counting_window, potential, shift_family, stabilize, stabilize_guarded,
};
use ekrw_core::verify::{default_grid, verify_all, verify_theorem, Theorem};
use ekrw_core::{are_isomorphic, embeds_into, random_intersecting, EdgeMask, SetFamily};

use crate::render::render_table;
use crate::{Cli, Command, Format};

pub const BUDGET_ENV: &str = "EKRW_BUDGET_SECS";
const DEFAULT_BUDGET_SECS: u64 = 300;

/// Flag, then `EKRW_BUDGET_SECS`, then the default.
fn budget(flag: Option<u64>) -> Result<Duration> {
    if let Some(secs) = flag {
        return Ok(Duration::from_secs(secs));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(text) => {
            let secs: u64 = text.trim().parse().with_context(|| format!("{BUDGET_ENV}={text:?} is not a number of seconds"))?;
            Ok(Duration::from_secs(secs))
        }
        Err(_) => Ok(Duration::from_secs(DEFAULT_BUDGET_SECS)),
    }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_family(path: &Path) -> Result<SetFamily> {
    let text = read_text(path)?;
    SetFamily::from_json(&text).with_context(|| format!("parsing family {}", path.display()))
}

/// Separability accepts sets of mixed sizes, so `k` is optional here.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemJson {
    n: usize,
    #[serde(default)]
    k: Option<usize>,
    edges: Vec<Vec<usize>>,
}

fn read_system(path: &Path) -> Result<SetSystem> {
    let text = read_text(path)?;
    let raw: SystemJson = serde_json::from_str(&text).with_context(|| format!("parsing set system {}", path.display()))?;
    if let Some(k) = raw.k {
        let fam = FamilyJson { n: raw.n, k, edges: raw.edges }.into_family()?;
        return Ok(SetSystem::from(&fam));
    }
    let mut sets = Vec::with_capacity(raw.edges.len());
    for (i, list) in raw.edges.iter().enumerate() {
        sets.push(edge_from_list(raw.n, list).with_context(|| format!("edges[{i}]"))?);
    }
    Ok(SetSystem::new(raw.n, sets)?)
}

fn lists(masks: &[EdgeMask]) -> Vec<Vec<usize>> {
    masks.iter().map(|m| m.to_vec()).collect()
}

fn system_json(b: &SetSystem) -> Value {
    json!({ "n": b.n(), "edges": lists(b.sets()) })
}

fn write_out(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(value)?,
        Format::Table => render_table(&serde_json::to_value(value)?),
    };
    write_out(cli, &text)
}

/// Families are printed in compact canonical form so that re-reading and
/// re-printing is byte-identical.
fn emit_family(cli: &Cli, fam: &SetFamily) -> Result<()> {
    match cli.format {
        Format::Json => write_out(cli, &fam.to_json()),
        Format::Table => emit(cli, fam),
    }
}

fn mask(list: &[usize]) -> EdgeMask {
    EdgeMask::from_elements(list.iter().copied())
}

#[allow(clippy::too_many_arguments)]
fn construct_spec(
    kind: &str,
    n: usize,
    k: usize,
    center: Option<usize>,
    f_set: &Option<Vec<usize>>,
    s_set: &Option<Vec<usize>>,
    e_set: &Option<Vec<usize>>,
    j_set: &Option<Vec<usize>>,
    x0: Option<usize>,
) -> Result<CanonicalSpec> {
    let kind = kind.trim().to_ascii_lowercase();
    let index = |prefix: &str| -> Result<Option<usize>> {
        match kind.strip_prefix(prefix) {
            Some(i) => Ok(Some(i.parse().with_context(|| format!("bad index in --kind {kind}"))?)),
            None => Ok(None),
        }
    };
    let mut spec = match kind.as_str() {
        "star" => CanonicalSpec::star(n, k),
        "hm" => CanonicalSpec::hilton_milner(n, k),
        "t3" => CanonicalSpec::triangle(n, k),
        _ => {
            if let Some(i) = index("g:")? {
                CanonicalSpec::g(n, k, i)
            } else if let Some(i) = index("j:")? {
                CanonicalSpec::j(n, k, i)
            } else {
                bail!("unknown --kind {kind:?}; expected star, hm, t3, g:<i> or j:<i>");
            }
        }
    };
    spec.placement = match spec.placement {
        Placement::Star { center: c } => Placement::Star { center: center.unwrap_or(c) },
        Placement::HiltonMilner { f, center: c } => Placement::HiltonMilner {
            f: f_set.as_deref().map(mask).unwrap_or(f),
            center: center.unwrap_or(c),
        },
        Placement::Triangle3Set { s } => Placement::Triangle3Set { s: s_set.as_deref().map(mask).unwrap_or(s) },
        Placement::G { e, x0: x } => Placement::G { e: e_set.as_deref().map(mask).unwrap_or(e), x0: x0.unwrap_or(x) },
        Placement::J { e, j, x0: x } => Placement::J {
            e: e_set.as_deref().map(mask).unwrap_or(e),
            j: j_set.as_deref().map(mask).unwrap_or(j),
            x0: x0.unwrap_or(x),
        },
    };
    Ok(spec)
}

fn classify(fam: &SetFamily) -> Value {
    let (n, k) = (fam.n(), fam.k());
    let targets = [
        ("F0", CanonicalSpec::star(n, k)),
        ("F1", CanonicalSpec::hilton_milner(n, k)),
        ("G2", CanonicalSpec::g(n, k, 2)),
        ("T3", CanonicalSpec::triangle(n, k)),
        ("J2", CanonicalSpec::j(n, k, 2)),
    ];
    let mut embeds = BTreeMap::new();
    let mut isomorphic_to = Vec::new();
    for (name, spec) in targets {
        let verdict = build(&spec).ok().map(|target| {
            if are_isomorphic(fam, &target) {
                isomorphic_to.push(name);
            }
            matches!(embeds_into(fam, &target), Ok(Some(_)))
        });
        embeds.insert(name, verdict);
    }
    let trivial_center = fam.is_trivial().ok().flatten();
    json!({
        "n": n,
        "k": k,
        "size": fam.len(),
        "intersecting": fam.is_intersecting(),
        "trivial": trivial_center.is_some(),
        "trivial_center": trivial_center,
        "hm_or_ekr_centers": hm_or_ekr_centers(fam).to_vec(),
        "hm_triples": lists(&hm_triples(fam)),
        "beyond_hm": fam.is_intersecting() && beyond_hm(fam),
        "embeds_into": embeds,
        "isomorphic_to": isomorphic_to,
        "max_degree": fam.max_degree(),
        "degrees": fam.degrees(),
    })
}

fn separability_report(b: &SetSystem) -> Value {
    let comps = DisjointnessGraph::new(b).components();
    json!({
        "non_separable": non_separable(b),
        "components": comps,
        "component_count": comps.len(),
        "sets": b.len(),
    })
}

pub fn run(cli: &Cli) -> Result<u8> {
    let config = |flag: Option<u64>| -> Result<SearchConfig> {
        Ok(SearchConfig { budget: Some(budget(flag)?), workers: cli.workers.max(1), ..SearchConfig::default() })
    };
    match &cli.command {
        Command::Construct { kind, n, k, center, f_set, s_set, e_set, j_set, x0 } => {
            let spec = construct_spec(kind, *n, *k, *center, f_set, s_set, e_set, j_set, *x0)?;
            emit_family(cli, &build(&spec)?)?;
        }
        Command::Bounds { n, k, s } => emit(cli, &bounds_report(*n, *k, *s))?,
        Command::Normalize(arg) => emit_family(cli, &read_family(&arg.family)?)?,
        Command::Classify(arg) => emit(cli, &classify(&read_family(&arg.family)?))?,
        Command::Shift(p) => {
            let fam = read_family(&p.family.family)?;
            let image = shift_family(&fam, p.x, p.y)?;
            let changed = fam.edges().iter().filter(|e| !image.contains(**e)).count();
            let outcome = classify_shift_outcome(&fam, p.x, p.y).ok();
            emit(
                cli,
                &json!({
                    "family": image,
                    "trace": {
                        "applied": [{ "x": p.x, "y": p.y, "changed": changed }],
                        "potential_history": [potential(&fam), potential(&image)],
                    },
                    "outcome": outcome,
                }),
            )?;
        }
        Command::Stabilize { family, exclude, guarded } => {
            let fam = read_family(&family.family)?;
            let excl = mask(exclude);
            let trace = if *guarded { stabilize_guarded(&fam, excl)? } else { stabilize(&fam, excl) };
            let final_excl = mask(&trace.exclusion);
            emit(
                cli,
                &json!({
                    "family": trace.final_family,
                    "stable": is_stable(&trace.final_family, final_excl),
                    "passes": trace.passes(),
                    "trace": trace,
                }),
            )?;
        }
        Command::Preimages(p) => {
            let target = read_family(&p.family.family)?;
            let pre = enumerate_shift_preimages(&target, p.x, p.y)?;
            let all_iso = pre.iter().all(|h| are_isomorphic(h, &target));
            emit(
                cli,
                &json!({
                    "x": p.x,
                    "y": p.y,
                    "movable": lists(&movable_edges(&target, p.x, p.y)),
                    "count": pre.len(),
                    "all_isomorphic_to_target": all_iso,
                    "preimages": pre,
                }),
            )?;
        }
        Command::Profile { family, window, exclude } => {
            let fam = read_family(&family.family)?;
            let window = match window {
                Some(w) => mask(w),
                None => counting_window(fam.n(), fam.k(), mask(exclude)),
            };
            let p = ai_profile(&fam, window);
            let classes: BTreeMap<usize, Vec<Vec<usize>>> = p.classes.iter().map(|(i, c)| (*i, lists(c))).collect();
            emit(
                cli,
                &json!({
                    "window": p.window,
                    "counts": p.counts,
                    "classes": classes,
                    "union_intersecting": p.union_intersecting,
                }),
            )?;
        }
        Command::Separability(arg) => emit(cli, &separability_report(&read_system(&arg.family)?))?,
        Command::Prop1 { c, a, b, s } => {
            let sys = build_prop1_family(*c, *a, *b, *s)?;
            let mut report = separability_report(&sys);
            report["family"] = system_json(&sys);
            emit(cli, &report)?;
        }
        Command::Prop2 { m, r, asize } => {
            let fam = build_prop2_family(*m, *r, *asize)?;
            let sys = SetSystem::from(&fam);
            let mut report = separability_report(&sys);
            report["family"] = serde_json::to_value(&fam)?;
            emit(cli, &report)?;
        }
        Command::Corpus { n, k, count, max_len } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let fams = (0..*count)
                .map(|_| random_intersecting(*n, *k, *max_len, &mut rng))
                .collect::<ekrw_core::Result<Vec<_>>>()?;
            emit(cli, &fams)?;
        }
        Command::Search { n, k, forbid, degree_cap, budget, enumerate } => {
            let mut constraints = ConstraintSet::parse_forbid(forbid)?;
            constraints.max_degree_cap = *degree_cap;
            let cfg = config(*budget)?;
            let outcome =
                if *enumerate { enumerate_maximum(*n, *k, &constraints, &cfg)? } else { max_family(*n, *k, &constraints, &cfg)? };
            emit(cli, &outcome)?;
            return Ok(if outcome.complete { 0 } else { 3 });
        }
        Command::Verify { theorem, n, k, budget } => {
            let theorem: Theorem = theorem.parse()?;
            let report = verify_theorem(theorem, *n, *k, &config(*budget)?)?;
            emit(cli, &report)?;
            return Ok(report.verdict.exit_code() as u8);
        }
        Command::VerifyAll { budget } => {
            let summary = verify_all(&default_grid(), &config(*budget)?);
            match cli.format {
                Format::Json => emit(cli, &summary)?,
                Format::Table => {
                    let rows: Vec<Value> = summary
                        .rows
                        .iter()
                        .map(|r| {
                            json!({
                                "theorem": r.theorem.to_string(),
                                "n": r.n,
                                "k": r.k,
                                "formula": r.formula,
                                "optimum": r.optimum,
                                "classes": r.classes.join(" "),
                                "verdict": r.verdict,
                                "seconds": format!("{:.2}", r.elapsed.as_secs_f64()),
                            })
                        })
                        .collect();
                    write_out(cli, &render_table(&json!({ "rows": rows, "errors": summary.errors, "verdict": summary.verdict })))?;
                }
            }
            return Ok(summary.exit_code() as u8);
        }
    }
    Ok(0)
}
