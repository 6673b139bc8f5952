use clap::{Args, Parser, Subcommand, ValueEnum};
use saidi::generators::{self, CubicFamily, GridPattern, KRingVariant};
use saidi::io::{fmt_num, load, to_report_json, NetworkDocument};
use saidi::planner::{design_rule_audit, evaluate_candidate, suggest_edges, CandidateEdge, EvalMode};
use saidi::report::{analyze, curve, risks};
use saidi::risk::RiskKind;
use saidi::{Error, Network};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// SAIDI analysis of source-rooted networks with independent edge failures.
#[derive(Parser)]
#[command(name = "saidi", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    KOrder,
}

#[derive(Args)]
struct Eval {
    /// uniform edge failure probability; default is each edge's p_fail
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// truncation order for k-order mode
    #[arg(long, default_value_t = saidi::exact::DEFAULT_K)]
    k: usize,
}

impl Eval {
    fn mode(&self) -> EvalMode {
        match self.mode {
            ModeArg::Exact => EvalMode::Exact,
            ModeArg::KOrder => EvalMode::KOrder(self.k),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Star,
    Path,
    BinaryTree,
    Ring,
    KRings,
    MultiStar,
    Cubic,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum CubicArg {
    K4,
    Prism,
    Petersen,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    Basic,
    MiddleRow,
    ThirdRow,
}

#[derive(Subcommand)]
enum Cmd {
    /// SAIDI and normalized SAIDI of a network file
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        eval: Eval,
        #[arg(long)]
        json: bool,
    },
    /// Largest minimal-cut-set risks
    Risks {
        file: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 5)]
        top: usize,
        /// largest cut-set order considered (1..=3)
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// SAIDI against p as CSV (p, saidi, normalized[, network])
    Curve {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 0.1)]
        p_max: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = saidi::exact::DEFAULT_K)]
        k: usize,
    },
    /// Effect of adding one edge, given as u,v,p_fail,cost
    Whatif {
        file: PathBuf,
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        eval: Eval,
        #[arg(long)]
        json: bool,
    },
    /// Greedy edge plan under a budget
    Suggest {
        file: PathBuf,
        /// JSON array of {id, u, v, p_fail, cost}
        #[arg(long)]
        candidates: PathBuf,
        /// a number or `inf`
        #[arg(long)]
        budget: f64,
        #[command(flatten)]
        eval: Eval,
        #[arg(long)]
        json: bool,
    },
    /// Design-rule report
    Audit {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated network document
    Generate {
        #[arg(value_enum)]
        family: Family,
        /// consumers (total nodes for cubic)
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// rings for k-rings
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// edges for multi-star
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        hub: bool,
        #[arg(long, value_enum, default_value = "petersen")]
        cubic: CubicArg,
        /// hubs of the prism
        #[arg(long, default_value_t = 6)]
        hubs: usize,
        #[arg(long, default_value_t = 7)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, value_enum, default_value = "basic")]
        pattern: PatternArg,
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long)]
        name: Option<String>,
        /// output file; stdout if absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn open(path: &Path) -> saidi::Result<Network> {
    load(path).map_err(|e| match e {
        Error::Io(io) => Error::InvalidArgument(format!("{}: {io}", path.display())),
        other => other,
    })
}

fn json_line(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(&to_report_json(v)).unwrap();
    s.push('\n');
    s
}

fn parse_edge(spec: &str, net: &Network) -> saidi::Result<CandidateEdge> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || Error::InvalidArgument(format!("--edge expects u,v,p_fail,cost; got `{spec}`"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let p: f64 = parts[2].parse().map_err(|_| bad())?;
    let cost: f64 = parts[3].parse().map_err(|_| bad())?;
    let id = net.fresh_edge_id("new").0;
    Ok(CandidateEdge::new(id, parts[0], parts[1], p, cost))
}

fn kind_label(k: &RiskKind) -> String {
    match k {
        RiskKind::Structural { chains } => format!("structural({})", chains.join("+")),
        RiskKind::InterChain { chain } => format!("inter-chain({chain})"),
    }
}

fn run(cli: Cli) -> saidi::Result<String> {
    let mut out = String::new();
    match cli.cmd {
        Cmd::Analyze { file, eval, json } => {
            let a = analyze(&open(&file)?, eval.p, eval.mode())?;
            if json {
                out = json_line(&a);
            } else {
                writeln!(out, "saidi {}", fmt_num(a.saidi)).unwrap();
                writeln!(out, "normalized {}", fmt_num(a.normalized)).unwrap();
            }
        }
        Cmd::Risks { file, p, top, order, format } => {
            let rows = risks(&open(&file)?, p, top, order)?;
            match format {
                Format::Json => out = json_line(&rows),
                Format::Csv => {
                    out.push_str("cutset,order,kind,disconnected_weight,reach_prob,fail_prob,risk\n");
                    for r in &rows {
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            r.cutset.id(),
                            r.order,
                            kind_label(&r.kind),
                            fmt_num(r.disconnected_weight),
                            fmt_num(r.reach_prob),
                            fmt_num(r.fail_prob),
                            fmt_num(r.risk)
                        )
                        .unwrap();
                    }
                }
                Format::Table => {
                    writeln!(out, "{:<4} {:<24} {:>5} {:>14} {:>14} {:>20}", "rank", "cutset", "order", "D", "reach", "risk").unwrap();
                    for (i, r) in rows.iter().enumerate() {
                        writeln!(
                            out,
                            "{:<4} {:<24} {:>5} {:>14} {:>14} {:>20}",
                            i + 1,
                            r.cutset.id(),
                            r.order,
                            fmt_num(r.disconnected_weight),
                            fmt_num(r.reach_prob),
                            fmt_num(r.risk)
                        )
                        .unwrap();
                    }
                }
            }
        }
        Cmd::Curve { files, p_min, p_max, points, mode, k } => {
            let mode = Eval { p: None, mode, k }.mode();
            let many = files.len() > 1;
            out.push_str(if many { "p,saidi,normalized,network\n" } else { "p,saidi,normalized\n" });
            for f in &files {
                let net = open(f)?;
                let label = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                for pt in curve(&net, p_min, p_max, points, mode)? {
                    write!(out, "{},{},{}", fmt_num(pt.p), fmt_num(pt.saidi), fmt_num(pt.normalized)).unwrap();
                    if many {
                        write!(out, ",{label}").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        Cmd::Whatif { file, edge, eval, json } => {
            let net = open(&file)?;
            let cand = parse_edge(&edge, &net)?;
            let d = evaluate_candidate(&net, &cand, eval.p, eval.mode())?;
            if json {
                out = json_line(&d);
            } else {
                writeln!(out, "edge {} {}-{} ({})", d.candidate.id, d.candidate.u, d.candidate.v, d.kind).unwrap();
                writeln!(out, "saidi_before {}", fmt_num(d.saidi_before)).unwrap();
                writeln!(out, "saidi_after {}", fmt_num(d.saidi_after)).unwrap();
                writeln!(out, "delta {}", fmt_num(d.total)).unwrap();
                match (d.effectiveness, d.unbounded) {
                    (Some(e), _) => writeln!(out, "effectiveness {}", fmt_num(e)).unwrap(),
                    (None, true) => writeln!(out, "effectiveness inf").unwrap(),
                    (None, false) => writeln!(out, "effectiveness 0").unwrap(),
                }
                for c in &d.per_cutset {
                    writeln!(out, "  {} {}", c.cutset.id(), fmt_num(c.delta)).unwrap();
                }
            }
        }
        Cmd::Suggest { file, candidates, budget, eval, json } => {
            let net = open(&file)?;
            let text = std::fs::read_to_string(&candidates)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", candidates.display())))?;
            let cands: Vec<CandidateEdge> = serde_json::from_str(&text)
                .map_err(|e| Error::Document { path: candidates.display().to_string(), msg: e.to_string() })?;
            let plan = suggest_edges(&net, &cands, budget, eval.p, eval.mode())?;
            if json {
                out = json_line(&plan);
            } else {
                writeln!(out, "saidi_before {}", fmt_num(plan.saidi_before)).unwrap();
                for s in &plan.steps {
                    let c = &s.delta.candidate;
                    writeln!(out, "add {} {}-{} cost {} delta {} spent {}", c.id, c.u, c.v, fmt_num(c.cost), fmt_num(s.delta.total), fmt_num(s.spent))
                        .unwrap();
                }
                writeln!(out, "saidi_after {}", fmt_num(plan.saidi_after)).unwrap();
            }
        }
        Cmd::Audit { file, json } => {
            let r = design_rule_audit(&open(&file)?)?;
            if json {
                out = json_line(&r);
            } else {
                writeln!(out, "hubs {} chains {}", r.hubs, r.chains).unwrap();
                writeln!(out, "degrees {:?}", r.degree_histogram).unwrap();
                for v in &r.violations {
                    writeln!(out, "FAIL {}: {}", v.rule, v.detail).unwrap();
                }
                writeln!(out, "{}", if r.passed { "passed" } else { "failed" }).unwrap();
            }
        }
        Cmd::Generate { family, n, k, m, hub, cubic, hubs, rows, cols, pattern, p, name, out: dest } => {
            let net = match family {
                Family::Star => generators::star(n, p)?,
                Family::Path => generators::path(n, p)?,
                Family::BinaryTree => generators::balanced_binary_tree(n, p)?,
                Family::Ring => generators::ring(n, p)?,
                Family::KRings => {
                    let v = if hub { KRingVariant::Hub } else { KRingVariant::AtSource };
                    generators::k_rings(n, k, v, p)?
                }
                Family::MultiStar => generators::multi_star(n, m.unwrap_or(2 * n), p)?,
                Family::Cubic => {
                    let fam = match cubic {
                        CubicArg::K4 => CubicFamily::K4,
                        CubicArg::Prism => CubicFamily::TwoConnectedRings { h: hubs },
                        CubicArg::Petersen => CubicFamily::Petersen,
                    };
                    generators::subdivide_equal(&generators::cubic_structure(fam)?, n, p)?
                }
                Family::Grid => {
                    let pat = match pattern {
                        PatternArg::Basic => GridPattern::Basic,
                        PatternArg::MiddleRow => GridPattern::MiddleRow,
                        PatternArg::ThirdRow => GridPattern::ThirdRow,
                    };
                    generators::grid(rows, cols, &pat, p)?
                }
            };
            let mut doc = NetworkDocument::from_network(&net);
            if let Some(name) = name {
                doc.metadata = Some(saidi::io::Metadata { name: Some(name), ..Default::default() });
            }
            match dest {
                Some(path) => saidi::io::save_document(&doc, path)?,
                None => out = doc.to_json(),
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("SAIDI_THREADS").ok().and_then(|v| v.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_size_guard() { 3 } else { 2 })
        }
    }
}
