//! Command line front end: parameter arithmetic, incidence bijections,
//! asymmetry certificates, bound reports, tree counting, catalogues,
//! certified constructions, and the exhaustive oracles.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use distpart::construct::{self, RingSpec};
use distpart::hypercore::{engine, LabeledHypergraph};
use distpart::oracle::{self, LabelMode};
use distpart::partition::{self, BoundCheck, MultipartiteShape, RegularPartition};
use distpart::trees::{self, EnrichmentSpec, Series};
use distpart::{Error, Result};
use num_rational::BigRational;
use serde_json::json;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Parser)]
#[command(name = "distpart", version, about = "Distinguishing partitions of complete multipartite graphs: constructions, certificates, counts, and oracles")]
struct Cli {
    /// Seed for all randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker-count hint for enumeration; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Node budget for the automorphism engine. Overrides the
    /// DISTPART_BUDGET environment variable, which overrides the default.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parameter decomposition (j, k, r) for an edge size and alphabet.
    Params {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
    },
    /// Incidence hypergraph of a regular partition (file or stdin).
    Tau { file: Option<PathBuf> },
    /// Label-encoded incidence hypergraph; the listed parts become labels.
    TauPrime {
        /// Comma-separated part indices recorded as label elements 1..m2.
        #[arg(long, value_delimiter = ',', required = true)]
        m2_parts: Vec<usize>,
        file: Option<PathBuf>,
    },
    /// Asymmetry certificate for a hypergraph (file or stdin).
    Verify { file: Option<PathBuf> },
    /// Weight, value, and the full bound suite for a hypergraph.
    Bounds { file: Option<PathBuf> },
    /// Asymmetric tree counts from the progressive recurrence.
    CountTrees {
        #[arg(long, default_value_t = 10)]
        max_edges: usize,
        #[arg(long)]
        rooted: bool,
    },
    /// Enriched asymmetric tree counts for a decoration weight vector.
    EnumerateEnriched {
        #[arg(long)]
        max_edges: usize,
        /// Comma-separated decoration counts by degree, starting at 0.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        planted: bool,
    },
    /// Positive-value labelled tree catalogue ordered by per-edge value.
    TStar {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        max_edges: u64,
        /// Also print each class representative.
        #[arg(long)]
        emit_reps: bool,
    },
    /// Certified constructions.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Exhaustive ground-truth searches at desk scale.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Regime classification and exact constants for a parameter triple.
    Constants {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Symmetry breaking ring with a chosen edge count.
    Ring {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        edges: u64,
    },
    /// Packed catalogue-plus-ring construction.
    Delta {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long, default_value_t = 8)]
        catalogue_max_edges: u64,
    },
    /// Even-alphabet chain family (k = 0 at the extreme j, m2 even >= 4).
    Chains {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        /// Comma-separated distinct chain lengths summing to m1.
        #[arg(long, value_delimiter = ',')]
        t_partition: Option<Vec<u64>>,
    },
    /// Two-label chain (n1 = 3).
    #[command(name = "m2-2")]
    M22 {
        #[arg(long)]
        m1: u64,
        #[arg(long, default_value_t = 3)]
        n1: u32,
    },
    /// Odd-alphabet cycle family (k = 0 at the extreme j, m2 odd >= 3).
    OddCycle {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
    },
    /// Random near-regular asymmetric structure, dualized and edge-fixed.
    Regular {
        #[arg(long)]
        psi: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        t_floor: Option<u64>,
    },
    /// Near-regular family for k >= 1 at the extreme j.
    K1Jlarge {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        t_floor: Option<u64>,
    },
}

#[derive(Subcommand)]
enum OracleOp {
    /// Distinguishing-partition existence for a multipartite shape.
    Exists {
        /// Comma-separated part sizes.
        #[arg(long, value_delimiter = ',')]
        parts: Option<Vec<u32>>,
        /// Equipartite shorthand: m parts of size n.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        vertex_bound: Option<u64>,
    },
    /// Exact maximum n2 by descending certified search.
    MaxN2 {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        n2_bound: u64,
    },
    /// Uniform hypertree stream with optional labelings.
    Trees {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        max_edges: u64,
        #[arg(long, default_value_t = 1)]
        m2: u32,
        /// Emit every labeling over the m2 alphabet instead of shapes only.
        #[arg(long)]
        labels: bool,
        /// Also print each hypergraph.
        #[arg(long)]
        emit: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_emit: u64,
    },
    /// Writes the fixture table consumed by the acceptance suite.
    Fixtures {
        #[arg(long)]
        fixtures_out: PathBuf,
    },
}

struct Out {
    format: Format,
}

/// Writes to stdout; a closed pipe ends the run quietly instead of
/// panicking, any other write failure is fatal.
fn write_stdout(chunk: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(chunk.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

impl Out {
    fn line(&self, text: String, record: serde_json::Value) {
        match self.format {
            Format::Text => write_stdout(&format!("{text}\n")),
            Format::JsonLines => write_stdout(&format!("{record}\n")),
        }
    }

    fn hypergraph(&self, h: &LabeledHypergraph) {
        match self.format {
            Format::Text => write_stdout(&h.to_text()),
            Format::JsonLines => write_stdout(&format!("{}\n", json!({ "hypergraph": h.to_text() }))),
        }
    }

    fn partition(&self, p: &RegularPartition) {
        match self.format {
            Format::Text => write_stdout(&p.to_text()),
            Format::JsonLines => write_stdout(&format!("{}\n", json!({ "partition": p.to_text() }))),
        }
    }
}

fn ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn opt_check(c: &Option<BoundCheck>) -> String {
    match c {
        None => "na".into(),
        Some(b) => format!("{}:{}", ratio(&b.bound), if b.holds { "ok" } else { "violated" }),
    }
}

fn opt_bool(b: &Option<bool>) -> String {
    match b {
        None => "na".into(),
        Some(true) => "ok".into(),
        Some(false) => "violated".into(),
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String> {
    match file {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("DISTPART_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(engine::DEFAULT_NODE_BUDGET)
}

fn emit_report(out: &Out, report: &construct::ConstructionReport) {
    out.hypergraph(&report.hypergraph);
    out.line(
        format!("n2 {}", ratio(&report.n2)),
        json!({ "n2": ratio(&report.n2) }),
    );
    out.line("cert ok".into(), json!({ "cert": "ok" }));
    if let Some(seed) = report.seed {
        out.line(format!("seed {seed}"), json!({ "seed": seed }));
    }
    if let Some(bound) = &report.error_bound {
        out.line(
            format!("error_bound {}", ratio(bound)),
            json!({ "error_bound": ratio(bound) }),
        );
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.threads == 0 {
        return Err(Error::Domain("--threads must be at least 1".into()));
    }
    let out = Out { format: cli.format };
    let budget = resolve_budget(cli.budget_nodes);
    match cli.cmd {
        Cmd::Params { n1, m2 } => {
            let p = partition::params(n1, m2)?;
            out.line(
                format!("j={} k={} r={}", p.j, p.k, p.r),
                json!({ "j": p.j, "k": p.k, "r": p.r.to_string() }),
            );
        }
        Cmd::Tau { file } => {
            let p = RegularPartition::parse(&read_input(&file)?)?;
            out.hypergraph(&partition::tau(&p));
        }
        Cmd::TauPrime { m2_parts, file } => {
            let p = RegularPartition::parse(&read_input(&file)?)?;
            out.hypergraph(&partition::tau_prime(&p, &m2_parts)?);
        }
        Cmd::Verify { file } => {
            let h = LabeledHypergraph::parse(&read_input(&file)?)?;
            let report = engine::automorphisms_with_budget(&h, budget)?;
            if report.is_asymmetric {
                out.line(
                    "cert ok group_order=1".into(),
                    json!({ "cert": "ok", "group_order": "1" }),
                );
            } else {
                out.line(
                    format!("cert fail group_order={}", report.group_order),
                    json!({ "cert": "fail", "group_order": report.group_order.to_string() }),
                );
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Bounds { file } => {
            let h = LabeledHypergraph::parse(&read_input(&file)?)?;
            let n1 = h
                .uniform_size()?
                .ok_or_else(|| Error::Domain("bound report needs at least one edge".into()))?;
            let params = partition::params(n1 as u32, h.m2())?;
            let b = partition::value_bounds(&h, &params)?;
            for (i, c) in b.components.iter().enumerate() {
                out.line(
                    format!(
                        "component={i} edges={} tree={} mu={} leaves={} deg1={} weight={} value={} defects={} applicable={}",
                        c.edge_ids.len(),
                        c.is_tree,
                        c.mu,
                        c.leaf_count.map_or("na".into(), |l| l.to_string()),
                        c.deg1_count,
                        c.weight,
                        ratio(&c.value),
                        c.defect_total,
                        c.applicable
                    ),
                    json!({
                        "component": i,
                        "edges": c.edge_ids.len(),
                        "tree": c.is_tree,
                        "mu": c.mu,
                        "leaves": c.leaf_count,
                        "deg1": c.deg1_count,
                        "weight": c.weight,
                        "value": ratio(&c.value),
                        "defects": c.defect_total,
                        "applicable": c.applicable,
                    }),
                );
                out.line(
                    format!(
                        "component={i} degree_identity={} leaf_mu_bound={} positive_value_tree={} cap_by_edges={} cap_balanced={} cap_extremal={} cap_uniform={} value_cap_extreme={} tree_value_cap={}",
                        if c.degree_identity { "ok" } else { "violated" },
                        opt_bool(&c.leaf_mu_bound),
                        opt_bool(&c.positive_value_tree),
                        opt_check(&c.cap_by_edges),
                        opt_check(&c.cap_balanced),
                        opt_check(&c.cap_extremal),
                        opt_check(&c.cap_uniform),
                        opt_check(&c.value_cap_extreme),
                        opt_check(&c.tree_value_cap),
                    ),
                    json!({
                        "component": i,
                        "degree_identity": c.degree_identity,
                        "leaf_mu_bound": c.leaf_mu_bound,
                        "positive_value_tree": c.positive_value_tree,
                        "cap_by_edges": opt_check(&c.cap_by_edges),
                        "cap_balanced": opt_check(&c.cap_balanced),
                        "cap_extremal": opt_check(&c.cap_extremal),
                        "cap_uniform": opt_check(&c.cap_uniform),
                        "value_cap_extreme": opt_check(&c.value_cap_extreme),
                        "tree_value_cap": opt_check(&c.tree_value_cap),
                    }),
                );
            }
            out.line(
                format!(
                    "isolated weight={} cap={} distinct={} ok={}",
                    b.isolated_weight,
                    b.isolated_cap,
                    b.isolated_labels_distinct,
                    opt_bool(&b.isolated_ok)
                ),
                json!({
                    "isolated_weight": b.isolated_weight,
                    "isolated_cap": b.isolated_cap,
                    "isolated_labels_distinct": b.isolated_labels_distinct,
                    "isolated_ok": b.isolated_ok,
                }),
            );
            out.line(
                format!("total value={}", ratio(&b.total_value)),
                json!({ "total_value": ratio(&b.total_value) }),
            );
        }
        Cmd::CountTrees { max_edges, rooted } => {
            let table = trees::count_asymmetric_trees(max_edges);
            let series = if rooted { Series::Rooted } else { Series::Unrooted };
            for e in 1..=max_edges {
                let count = table
                    .get(series, e)
                    .map_or_else(|| "0".into(), |c| c.to_string());
                out.line(
                    format!("edges={e} count={count}"),
                    json!({ "edges": e, "count": count }),
                );
            }
        }
        Cmd::EnumerateEnriched { max_edges, weights, planted } => {
            let spec = EnrichmentSpec { weights };
            let table = trees::count_enriched_trees(max_edges, &spec)?;
            let series = if planted {
                Series::EnrichedPlanted
            } else {
                Series::EnrichedUnrooted
            };
            for e in 1..=max_edges {
                let count = table
                    .get(series, e)
                    .map_or_else(|| "0".into(), |c| c.to_string());
                out.line(
                    format!("edges={e} count={count}"),
                    json!({ "edges": e, "count": count }),
                );
            }
        }
        Cmd::TStar { n1, m2, max_edges, emit_reps } => {
            let params = partition::params(n1, m2)?;
            let catalogue = trees::build_t_star(&params, max_edges)?;
            for (i, c) in catalogue.classes.iter().enumerate() {
                out.line(
                    format!(
                        "class={} edges={} size={} weight={} value={} edge_value={}",
                        i + 1,
                        c.edges,
                        c.class_size,
                        c.weight,
                        ratio(&c.value),
                        ratio(&c.edge_value)
                    ),
                    json!({
                        "class": i + 1,
                        "edges": c.edges,
                        "size": c.class_size,
                        "weight": c.weight,
                        "value": ratio(&c.value),
                        "edge_value": ratio(&c.edge_value),
                    }),
                );
                if emit_reps {
                    out.hypergraph(&c.representative);
                }
            }
        }
        Cmd::Construct { family } => match family {
            Family::Ring { n1, m2, edges } => {
                let report = construct::ring_report(&RingSpec::new(n1, m2, edges)?)?;
                emit_report(&out, &report);
            }
            Family::Delta { m1, n1, m2, catalogue_max_edges } => {
                let report = construct::build_delta(m1, n1, m2, catalogue_max_edges)?;
                emit_report(&out, &report);
            }
            Family::Chains { m1, n1, m2, t_partition } => {
                let report = construct::build_even_m2_chains(m1, n1, m2, t_partition)?;
                emit_report(&out, &report);
            }
            Family::M22 { m1, n1 } => {
                let report = construct::build_m2_2_chain(m1, n1)?;
                emit_report(&out, &report);
            }
            Family::OddCycle { m1, n1, m2 } => {
                let report = construct::build_odd_m2_cycle(m1, n1, m2)?;
                emit_report(&out, &report);
            }
            Family::Regular { psi, s, t, n1, t_floor } => {
                let built = construct::build_regular_asymmetric(psi, s, t, n1, cli.seed, t_floor)?;
                out.hypergraph(&built.hypergraph);
                out.line("cert ok".into(), json!({ "cert": "ok" }));
                out.line(format!("seed {}", built.seed), json!({ "seed": built.seed }));
                out.line(
                    format!("t_floor {}", built.t_floor),
                    json!({ "t_floor": built.t_floor }),
                );
            }
            Family::K1Jlarge { m1, n1, m2, t_floor } => {
                let report = construct::build_k1_jlarge(m1, n1, m2, cli.seed, t_floor)?;
                emit_report(&out, &report);
                let s = partition::params(n1, m2)?.k + 2;
                let floor = t_floor.unwrap_or_else(|| construct::default_regular_floor(s));
                out.line(format!("t_floor {floor}"), json!({ "t_floor": floor }));
            }
        },
        Cmd::Oracle { op } => match op {
            OracleOp::Exists { parts, n, m, vertex_bound } => {
                let shape = match (parts, n, m) {
                    (Some(p), None, None) => MultipartiteShape::new(p)?,
                    (None, Some(n), Some(m)) => {
                        MultipartiteShape::new(vec![n; m as usize])?
                    }
                    _ => {
                        return Err(Error::Domain(
                            "give either --parts or both --n and --m".into(),
                        ))
                    }
                };
                let bound = vertex_bound.unwrap_or(oracle::DEFAULT_EXISTS_VERTEX_BOUND);
                match oracle::exists_distinguishing_with(&shape, bound, budget)? {
                    Some(witness) => {
                        out.line(
                            "exists true".into(),
                            json!({ "exists": true, "witness": witness.to_text() }),
                        );
                        if cli.format == Format::Text {
                            out.partition(&witness);
                        }
                    }
                    None => out.line("exists false".into(), json!({ "exists": false })),
                }
            }
            OracleOp::MaxN2 { m1, n1, m2, n2_bound } => {
                match oracle::max_n2_with(m1, n1, m2, n2_bound, budget)? {
                    Some(report) => {
                        out.line(
                            format!(
                                "max_n2 {} total_weight={} components={}",
                                report.n2, report.total_weight, report.component_count
                            ),
                            json!({
                                "max_n2": report.n2,
                                "total_weight": report.total_weight,
                                "components": report.component_count,
                            }),
                        );
                        out.hypergraph(&report.witness);
                    }
                    None => out.line("max_n2 none".into(), json!({ "max_n2": null })),
                }
            }
            OracleOp::Trees { n1, max_edges, m2, labels, emit, max_emit } => {
                let mode = if labels { LabelMode::All } else { LabelMode::Off };
                let mut total = 0u64;
                oracle::enumerate_small_trees(n1, max_edges, m2, mode, max_emit, &mut |h, stats| {
                    total += 1;
                    out.line(
                        format!(
                            "tree edges={} vertices={} mu={} leaf_edges={}",
                            stats.edges, stats.vertices, stats.mu, stats.leaf_edges
                        ),
                        json!({
                            "edges": stats.edges,
                            "vertices": stats.vertices,
                            "mu": stats.mu,
                            "leaf_edges": stats.leaf_edges,
                        }),
                    );
                    if emit {
                        out.hypergraph(h);
                    }
                    Ok(())
                })?;
                out.line(format!("total {total}"), json!({ "total": total }));
            }
            OracleOp::Fixtures { fixtures_out } => {
                let mut table = String::from("# oracle fixture table\n");
                for n in 1..=12u32 {
                    for m in 1..=12u32 {
                        if n * m > 12 {
                            continue;
                        }
                        let shape = MultipartiteShape::new(vec![n; m as usize])?;
                        let found =
                            oracle::exists_distinguishing_with(&shape, 12, budget)?.is_some();
                        table.push_str(&format!("exists n={n} m={m} -> {found}\n"));
                    }
                }
                // n = 1 is excluded: existence there is not monotone in m,
                // so no threshold exists.
                for n in 2..=3u64 {
                    let threshold = oracle::complete_equipartite_threshold(n)?;
                    table.push_str(&format!("threshold n={n} -> {threshold}\n"));
                }
                for m1 in 1..=6u64 {
                    let row = match oracle::max_n2_with(m1, 2, 1, 10, budget)? {
                        Some(r) => r.n2.to_string(),
                        None => "none".into(),
                    };
                    table.push_str(&format!("max_n2 m1={m1} n1=2 m2=1 -> {row}\n"));
                }
                let lines = table.lines().count();
                std::fs::write(&fixtures_out, &table)?;
                out.line(
                    format!("fixtures {} lines={lines}", fixtures_out.display()),
                    json!({ "fixtures": fixtures_out.display().to_string(), "lines": lines }),
                );
            }
        },
        Cmd::Constants { n1, m2, m1, alpha, beta } => {
            let tc = trees::regime_constants(n1, m2, m1, alpha, beta)?;
            let text = format!(
                "regime={}\nepsilon={}\nepsilon_exact={}\nc={}\nz={}\nepsilon_estimate={}\nmin_ring_edges={}\nomega={}",
                tc.regime,
                tc.epsilon_description,
                tc.epsilon_exact.as_ref().map_or("na".into(), ratio),
                tc.c_constant.as_ref().map_or("na".into(), ratio),
                tc.z.map_or("na".into(), |z| z.to_string()),
                tc.epsilon_estimate.map_or("na".into(), |e| format!("{e:.6}")),
                tc.min_ring_edges,
                ratio(&tc.omega),
            );
            out.line(
                text,
                json!({
                    "regime": tc.regime,
                    "epsilon": tc.epsilon_description,
                    "epsilon_exact": tc.epsilon_exact.as_ref().map(ratio),
                    "c": tc.c_constant.as_ref().map(ratio),
                    "z": tc.z,
                    "epsilon_estimate": tc.epsilon_estimate,
                    "min_ring_edges": tc.min_ring_edges,
                    "omega": ratio(&tc.omega),
                }),
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
