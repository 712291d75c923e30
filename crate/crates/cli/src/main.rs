//! Command-line front end: validate rules, build subdivisions, decide
//! expansion properties, emit graphs and run probes.
//!
//! Exit codes: 0 when the command succeeds and nothing failed, 1 when a
//! property fails or a probe finds a violation, 2 on input or usage
//! errors. Codes depend on report content only, so reruns agree.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use std::path::Path;
use std::process::ExitCode;

use fsrlab_core::analyze::{
    build_separation_graph, check_bounded_valence, classify_properties, crosscheck_at_bound,
    node_bound, CrosscheckOutcome, CrosscheckReport, DisjointnessMode, Property, PropertyVerdict,
    SepNode, SeparationKind, ValenceReport, Witness,
};
use fsrlab_core::engine::{subdivide_sphere, subdivide_tile, CellBudget};
use fsrlab_core::fixtures::{fixture, fixture_names, FIXTURES};
use fsrlab_core::graphs::{build_subdivision_graph, Flavor};
use fsrlab_core::model::{parse_fsr, Rule};
use fsrlab_core::probes::{
    boundary_pair_report, contraction_report, rushton_probe, BoundaryReport, ContractionReport,
    ProbeStatus, RushtonReport,
};
use fsrlab_core::render::{disk_svg, separation_dot, subdivision_graph_dot, Layout};
use fsrlab_core::report;

// die quietly with the usual SIGPIPE status when the reader goes away,
// instead of panicking mid-report
macro_rules! println {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(141);
        }
    }};
}
macro_rules! print {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let mut out = std::io::stdout();
        if write!(out, $($arg)*).and_then(|_| out.flush()).is_err() {
            std::process::exit(141);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "fsrlab",
    version,
    about = "Finite subdivision rules: build, analyze, probe",
    after_help = "FILE arguments take a path to an .fsr file; a name with no \
file behind it falls back to the bundled fixture of that name (see \
`fsrlab fixtures list`). The env var FSRLAB_CELL_BUDGET caps the total \
cells any single command may build."
)]
struct Cli {
    /// machine-readable JSON report on stdout
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a rule file and report validation findings
    Validate { file: String },
    /// Build the subdivision tower and print the resulting complex
    Subdivide {
        file: String,
        /// how many times to subdivide
        #[arg(long)]
        level: u32,
        /// subdivide this tile type's model disk instead of the sphere
        #[arg(long)]
        tile: Option<String>,
        /// output format: json, or svg (svg requires --tile)
        #[arg(long, default_value = "json")]
        emit: String,
        /// svg layout: tutte | radial
        #[arg(long, default_value = "tutte")]
        layout: String,
    },
    /// Decide the expansion properties of a rule
    Analyze {
        file: String,
        /// one of esub, esep, vesep, vsep, m0comb, combexp, bounded-valence
        /// (default: all)
        #[arg(long)]
        property: Option<String>,
        /// replay each verdict on brute-forced complexes up to this level
        #[arg(long)]
        crosscheck: Option<u32>,
        /// disjointness reading: model-disk | glued
        #[arg(long, default_value = "model-disk")]
        disjointness: String,
        /// with a separation --property: emit its graph as DOT, any
        /// witness cycle highlighted
        #[arg(long)]
        emit: Option<String>,
    },
    /// Build the path subdivision graph of tiles
    Graph {
        file: String,
        /// deepest level to include
        #[arg(long)]
        levels: u32,
        /// horizontal adjacency: fat (share an edge) | skinny (intersect)
        #[arg(long, default_value = "fat")]
        flavor: String,
        /// output format: dot | json
        #[arg(long, default_value = "dot")]
        emit: String,
    },
    /// Run a probe against a rule
    Probe {
        file: String,
        #[command(subcommand)]
        probe: Probe,
    },
    /// List the bundled rules or print one as .fsr text
    Fixtures {
        #[command(subcommand)]
        which: Fixtures,
    },
}

#[derive(Subcommand)]
enum Probe {
    /// Check that far tile pairs spread apart when lifted n levels
    Rushton {
        /// distance threshold: only pairs at least this far apart count
        #[arg(long = "M")]
        threshold: u32,
        /// how many levels to lift each pair
        #[arg(long)]
        n: u32,
        /// deepest graph level to build
        #[arg(long)]
        depth: u32,
    },
    /// Certify contraction, or search for non-winding obstruction cycles
    Contraction {
        /// deepest level to search for obstruction cycles
        #[arg(long = "max-n", default_value_t = 4)]
        max_n: u32,
    },
    /// Track tile faces that keep meeting two disjoint level-0 cells
    Boundary {
        /// deepest level to scan
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
}

#[derive(Subcommand)]
enum Fixtures {
    /// Names and expected verdicts of every bundled rule
    List,
    /// Print one bundled rule as .fsr text
    Emit { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn budget() -> Result<CellBudget> {
    match std::env::var("FSRLAB_CELL_BUDGET") {
        Ok(s) => {
            let max = s
                .trim()
                .parse::<u64>()
                .with_context(|| format!("FSRLAB_CELL_BUDGET must be a cell count, got `{s}`"))?;
            Ok(CellBudget::new(max))
        }
        Err(_) => Ok(CellBudget::default()),
    }
}

/// A path on disk, or the name of a bundled fixture as a fallback.
fn rule_text(file: &str) -> Result<String> {
    let path = Path::new(file);
    if path.exists() {
        return std::fs::read_to_string(path).with_context(|| format!("reading {file}"));
    }
    let stem = file.strip_suffix(".fsr").unwrap_or(file);
    if let Some(fx) = fixture(stem) {
        return Ok(fx.text.to_string());
    }
    bail!(
        "no file `{file}` and no bundled fixture named `{stem}` (available: {})",
        fixture_names().join(", ")
    );
}

fn load_rule(file: &str) -> Result<Rule> {
    let text = rule_text(file)?;
    let spec = parse_fsr(&text).map_err(|e| anyhow!("{file}: {e}"))?;
    Rule::compile(&spec).map_err(|report| anyhow!("{file} does not validate:\n{report}"))
}

fn tile_by_name(rule: &Rule, name: &str) -> Result<usize> {
    (0..rule.spec.tiles.len())
        .find(|&t| rule.spec.tile_name(t) == name)
        .ok_or_else(|| {
            let all: Vec<_> = (0..rule.spec.tiles.len())
                .map(|t| rule.spec.tile_name(t).to_string())
                .collect();
            anyhow!("no tile type `{name}` (available: {})", all.join(", "))
        })
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("report serializes")
    );
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file, cli.json),
        Command::Subdivide {
            file,
            level,
            tile,
            emit,
            layout,
        } => cmd_subdivide(&file, level, tile.as_deref(), &emit, &layout, cli.json),
        Command::Analyze {
            file,
            property,
            crosscheck,
            disjointness,
            emit,
        } => cmd_analyze(
            &file,
            property.as_deref(),
            crosscheck,
            &disjointness,
            emit.as_deref(),
            cli.json,
        ),
        Command::Graph {
            file,
            levels,
            flavor,
            emit,
        } => cmd_graph(&file, levels, &flavor, &emit, cli.json),
        Command::Probe { file, probe } => cmd_probe(&file, probe, cli.json),
        Command::Fixtures { which } => cmd_fixtures(which, cli.json),
    }
}

fn cmd_validate(file: &str, json: bool) -> Result<ExitCode> {
    let text = rule_text(file)?;
    let spec = parse_fsr(&text).map_err(|e| anyhow!("{file}: {e}"))?;
    let report = fsrlab_core::validate_fsr(&spec);
    if json {
        print_json(&report::validate_report(&spec.name, &report));
    } else if report.is_valid() {
        println!("{}: valid", spec.name);
    } else {
        println!("{}: {} findings", spec.name, report.findings.len());
        print!("{report}");
    }
    Ok(if report.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_subdivide(
    file: &str,
    level: u32,
    tile: Option<&str>,
    emit: &str,
    layout: &str,
    json: bool,
) -> Result<ExitCode> {
    let rule = load_rule(file)?;
    let budget = budget()?;
    if json || emit == "json" {
        let tower = match tile {
            Some(name) => subdivide_tile(&rule, tile_by_name(&rule, name)?, level, &budget)?,
            None => subdivide_sphere(&rule, level, &budget)?,
        };
        print_json(&report::complex_report(&rule, &tower, level));
        return Ok(ExitCode::SUCCESS);
    }
    match emit {
        "svg" => {
            let name = tile.ok_or_else(|| {
                anyhow!("unsupported combination: svg renders disk complexes; pass --tile")
            })?;
            let layout = Layout::parse(layout)
                .ok_or_else(|| anyhow!("no layout `{layout}` (tutte | radial)"))?;
            let svg = disk_svg(&rule, tile_by_name(&rule, name)?, level, layout, &budget)?;
            print!("{svg}");
            Ok(ExitCode::SUCCESS)
        }
        other => bail!("unsupported combination: cannot emit `{other}` for a complex"),
    }
}

fn parse_property(s: &str) -> Result<Property> {
    let squashed: String = s.chars().filter(|c| *c != '-' && *c != '_').collect();
    Property::parse(&squashed).ok_or_else(|| {
        anyhow!("no property `{s}` (esub, esep, vesep, vsep, m0comb, combexp, bounded-valence)")
    })
}

fn cmd_analyze(
    file: &str,
    property: Option<&str>,
    crosscheck: Option<u32>,
    disjointness: &str,
    emit: Option<&str>,
    json: bool,
) -> Result<ExitCode> {
    let rule = load_rule(file)?;
    let mode = DisjointnessMode::parse(disjointness)
        .ok_or_else(|| anyhow!("no disjointness mode `{disjointness}` (model-disk | glued)"))?;
    let valence = check_bounded_valence(&rule).map_err(|e| anyhow!("{e}"))?;
    let requested = property.map(parse_property).transpose()?;
    if let Some(fmt) = emit {
        return emit_separation(&rule, requested, mode, fmt);
    }
    let verdicts: Vec<PropertyVerdict> = match requested {
        Some(Property::BoundedValence) => vec![valence.verdict.clone()],
        Some(p) => classify_properties(&rule, mode)
            .into_iter()
            .filter(|v| v.property == p)
            .collect(),
        None => classify_properties(&rule, mode),
    };
    let crosschecks: Vec<CrosscheckReport> = match crosscheck {
        Some(n_max) => verdicts
            .iter()
            .filter(|v| v.property != Property::BoundedValence)
            .map(|v| crosscheck_at_bound(&rule, v.property, n_max, mode))
            .collect(),
        None => Vec::new(),
    };
    let bound = node_bound(&rule.spec);
    let failed = verdicts.iter().any(|v| !v.holds)
        || crosschecks.iter().any(|c| !c.agreed)
        || requested == Some(Property::BoundedValence) && !valence.verdict.holds;
    if json {
        print_json(&report::verdict_report(
            &rule,
            mode,
            bound,
            &verdicts,
            &valence,
            &crosschecks,
        ));
    } else {
        print_analysis(
            &rule,
            mode,
            bound,
            &verdicts,
            &valence,
            &crosschecks,
            requested,
        );
    }
    Ok(if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn pair_text(rule: &Rule, kind: SeparationKind, n: &SepNode) -> String {
    let part = |first: bool, a: usize| {
        let corner = match kind {
            SeparationKind::EE => false,
            SeparationKind::VV => true,
            SeparationKind::VE => first,
        };
        if corner {
            format!("corner {a}")
        } else {
            format!("slot {a}")
        }
    };
    format!(
        "({}, {}, {})",
        rule.spec.tile_name(n.tile),
        part(true, n.a1),
        part(false, n.a2)
    )
}

fn witness_text(rule: &Rule, w: &Witness) -> String {
    match w {
        Witness::SeparationCycle { kind, nodes } => {
            let hops: Vec<String> = nodes.iter().map(|n| pair_text(rule, *kind, n)).collect();
            format!("{} cycle {}", kind.name(), hops.join(" -> "))
        }
        Witness::EdgeCycle { edges } => {
            let hops: Vec<&str> = edges.iter().map(|&e| rule.spec.edge_name(e)).collect();
            format!("unsplit edge cycle {}", hops.join(" -> "))
        }
        Witness::IdealVertices { vertices } => {
            let names: Vec<&str> = vertices.iter().map(|&v| rule.spec.vertex_name(v)).collect();
            format!("ideal vertices {}", names.join(", "))
        }
    }
}

fn outcome_text(rule: &Rule, o: &CrosscheckOutcome) -> String {
    match o {
        CrosscheckOutcome::ViolationReplayed { level, tile, face } => format!(
            "violation replayed at level {level}: face {face} of {}'s subdivision",
            rule.spec.tile_name(*tile)
        ),
        CrosscheckOutcome::EdgeNeverSplit { level, edge } => format!(
            "edge {} still whole at level {level}",
            rule.spec.edge_name(*edge)
        ),
        CrosscheckOutcome::ConfirmedUpTo { level } => format!("confirmed up to level {level}"),
        CrosscheckOutcome::Capped { wanted, reason } => {
            format!("capped before level {wanted}: {reason}")
        }
        CrosscheckOutcome::Disagreement { level, detail } => {
            format!("DISAGREEMENT at level {level}: {detail}")
        }
        CrosscheckOutcome::NotApplicable => "not applicable".to_string(),
    }
}

#[allow(clippy::too_many_arguments)]
fn print_analysis(
    rule: &Rule,
    mode: DisjointnessMode,
    bound: usize,
    verdicts: &[PropertyVerdict],
    valence: &ValenceReport,
    crosschecks: &[CrosscheckReport],
    requested: Option<Property>,
) {
    let mode_name = match mode {
        DisjointnessMode::ModelDisk => "model-disk",
        DisjointnessMode::Glued => "glued",
    };
    println!(
        "{} (disjointness {mode_name}, separation node bound {bound})",
        rule.spec.name
    );
    for v in verdicts {
        if v.holds {
            match v.certified_level {
                Some(n) => println!("  {}: holds (certified at level {n})", v.property),
                None => println!("  {}: holds", v.property),
            }
        } else {
            println!("  {}: FAILS", v.property);
            if let Some(w) = &v.witness {
                println!("    witness: {}", witness_text(rule, w));
            }
        }
    }
    if requested.is_none() {
        if valence.verdict.holds {
            println!("  bounded valence: holds");
        } else {
            let names: Vec<&str> = valence
                .ideal
                .iter()
                .map(|&v| rule.spec.vertex_name(v))
                .collect();
            println!(
                "  bounded valence: FAILS (ideal vertices {})",
                names.join(", ")
            );
        }
    }
    for c in crosschecks {
        let agreed = if c.agreed { "agreed" } else { "DISAGREED" };
        println!(
            "  crosscheck {} up to level {}: {agreed}",
            c.property, c.n_max
        );
        for e in &c.entries {
            println!("    {}", outcome_text(rule, &e.outcome));
        }
    }
}

fn cmd_graph(file: &str, levels: u32, flavor: &str, emit: &str, json: bool) -> Result<ExitCode> {
    let rule = load_rule(file)?;
    let flavor =
        Flavor::parse(flavor).ok_or_else(|| anyhow!("no flavor `{flavor}` (fat | skinny)"))?;
    let graph = build_subdivision_graph(&rule, levels, flavor, &budget()?)?;
    if json || emit == "json" {
        print_json(&report::graph_report(&rule, &graph));
        return Ok(ExitCode::SUCCESS);
    }
    match emit {
        "dot" => {
            print!("{}", subdivision_graph_dot(&graph));
            Ok(ExitCode::SUCCESS)
        }
        other => bail!("unsupported combination: cannot emit `{other}` for a graph"),
    }
}

fn cmd_probe(file: &str, probe: Probe, json: bool) -> Result<ExitCode> {
    let rule = load_rule(file)?;
    let budget = budget()?;
    match probe {
        Probe::Rushton {
            threshold,
            n,
            depth,
        } => {
            if n < 1 || depth < n || threshold < 1 {
                bail!("rushton needs M >= 1, n >= 1 and depth >= n");
            }
            let r = rushton_probe(&rule, threshold, n, depth, &budget)?;
            if json {
                print_json(&report::rushton_report_json(&rule, &r));
            } else {
                print_rushton(&r);
            }
            Ok(exit_for(r.status))
        }
        Probe::Contraction { max_n } => {
            let r = contraction_report(&rule, max_n, DisjointnessMode::default(), &budget);
            if json {
                print_json(&report::contraction_report_json(&rule, &r));
            } else {
                print_contraction(&rule, &r);
            }
            Ok(exit_for(r.status))
        }
        Probe::Boundary { depth } => {
            let r = boundary_pair_report(&rule, depth, &budget).map_err(|e| anyhow!("{e}"))?;
            if json {
                print_json(&report::boundary_report_json(&rule, &r));
            } else {
                print_boundary(&rule, &r);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(status: ProbeStatus) -> ExitCode {
    match status {
        ProbeStatus::Violation | ProbeStatus::Witness => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn print_rushton(r: &RushtonReport) {
    println!(
        "rushton M={} n={} depth={}: {}",
        r.threshold,
        r.n,
        r.depth,
        r.status.name()
    );
    println!(
        "  {} far pairs, {} lifted pairs checked",
        r.pairs_checked, r.lifts_checked
    );
    if let Some(v) = &r.violation {
        println!(
            "  tiles {} and {} at level {}: distance {}; lifts {} and {} at level {}: distance {} (no increase)",
            v.u, v.v, v.m, v.delta_m, v.u_lift, v.v_lift, v.m + r.n, v.delta_lift
        );
    }
}

fn print_contraction(rule: &Rule, r: &ContractionReport) {
    println!(
        "contraction (searched n <= {}): {}",
        r.n_max,
        r.status.name()
    );
    let sep = |v: &PropertyVerdict| if v.holds { "holds" } else { "fails" };
    println!(
        "  edge separation {}, vertex separation {}",
        sep(&r.edge_separation),
        sep(&r.vertex_separation)
    );
    for (level, cycle) in &r.cycles {
        let crossed: Vec<&str> = cycle
            .crossed_base
            .iter()
            .map(|&e| rule.spec.edge_name(e))
            .collect();
        println!(
            "  level {level}: non-winding cycle of length {} crossing {}",
            cycle.nodes.len(),
            crossed.join(", ")
        );
    }
    if let Some(note) = &r.note {
        println!("  note: {note}");
    }
}

fn base_cell_text(rule: &Rule, c: (u8, usize)) -> String {
    match c.0 {
        0 => format!("vertex {}", rule.spec.vertex_name(c.1)),
        _ => format!("edge {}", rule.spec.edge_name(c.1)),
    }
}

fn print_boundary(rule: &Rule, r: &BoundaryReport) {
    let status = if r.pairs.is_empty() {
        "SEPARATED"
    } else {
        "PERSISTENT"
    };
    println!("boundary pairs to depth {}: {status}", r.depth);
    for p in &r.pairs {
        println!(
            "  {} and {} meet in level-{} face {}",
            base_cell_text(rule, p.a),
            base_cell_text(rule, p.b),
            r.depth,
            p.witness_face
        );
    }
    if !r.ideal_vertices.is_empty() {
        let names: Vec<&str> = r
            .ideal_vertices
            .iter()
            .map(|&v| rule.spec.vertex_name(v))
            .collect();
        println!("  ideal vertices: {}", names.join(", "));
    }
}

fn cmd_fixtures(which: Fixtures, json: bool) -> Result<ExitCode> {
    match which {
        Fixtures::List => {
            if json {
                let rows: Vec<serde_json::Value> = FIXTURES
                    .iter()
                    .map(|fx| {
                        serde_json::json!({
                            "name": fx.name,
                            "expected": {
                                "Esub": fx.expected.esub,
                                "Esep": fx.expected.esep,
                                "VEsep": fx.expected.vesep,
                                "Vsep": fx.expected.vsep,
                                "M0comb": fx.expected.m0comb,
                                "CombExp": fx.expected.comb_exp,
                                "BoundedValence": fx.expected.bounded_valence,
                            },
                        })
                    })
                    .collect();
                print_json(&serde_json::Value::Array(rows));
            } else {
                for fx in FIXTURES {
                    let e = &fx.expected;
                    let mark = |b: bool| if b { "holds" } else { "fails" };
                    println!(
                        "{}: CombExp {}, M0comb {}, bounded valence {}",
                        fx.name,
                        mark(e.comb_exp),
                        mark(e.m0comb),
                        mark(e.bounded_valence)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Fixtures::Emit { name } => {
            let fx = fixture(&name).ok_or_else(|| {
                anyhow!(
                    "no bundled fixture `{name}` (available: {})",
                    fixture_names().join(", ")
                )
            })?;
            print!("{}", fx.text);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_separation(
    rule: &Rule,
    requested: Option<Property>,
    mode: DisjointnessMode,
    fmt: &str,
) -> Result<ExitCode> {
    if fmt != "dot" {
        bail!("unsupported combination: cannot emit `{fmt}` for a separation graph");
    }
    let kind = match requested {
        Some(Property::Esep) => SeparationKind::EE,
        Some(Property::Vsep) => SeparationKind::VV,
        Some(Property::VEsep) => SeparationKind::VE,
        _ => bail!("--emit dot needs --property esep, vsep or vesep"),
    };
    let graph = build_separation_graph(rule, kind, mode);
    let verdict = fsrlab_core::analyze::check_separation(rule, kind, mode);
    let highlight = match &verdict.witness {
        Some(Witness::SeparationCycle { nodes, .. }) => nodes.clone(),
        _ => Vec::new(),
    };
    print!("{}", separation_dot(rule, &graph, &highlight));
    Ok(if verdict.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
