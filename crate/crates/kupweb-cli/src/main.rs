//! Command-line front end: parsing, invariants, certificates, equivalence
//! fuzzing, braid traces, and exports.  Output is JSON by default; exit code
//! 0 on success, 1 on domain errors, 2 on usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use kupweb::braid::{closure_trace, closure_trace_normalized, represent, verify_relations, BraidWord};
use kupweb::diagram::moves::MoveKind;
use kupweb::diagram::{parse_gauss, ChordDiagram};
use kupweb::fuzz;
use kupweb::g2::{bipartite_state, g2_free, g2_minimality};
use kupweb::parity::{
    free_mod2_bracket, parity_bracket, parity_bracket_flat, parity_certificate,
};
use kupweb::penrose::{count_edge_3_colorings, penrose_bracket};
use kupweb::sl3::{bracket, free_bracket, minimality_report, unoriented_state};
use kupweb::web::export::{to_dot, to_json as web_to_json, trivalent_from_json};

#[derive(Parser)]
#[command(name = "kupweb", version, about = "Graph-valued bracket invariants for virtual, flat and free knots")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Thread cap (default: the KUPWEB_THREADS environment variable)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized commands (printed in the output)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a Gauss code and print its JSON form
    Parse { code: String },
    /// Compute an invariant of a Gauss-code diagram
    Invariant {
        #[command(subcommand)]
        which: InvariantCmd,
    },
    /// Certification reports
    Certify {
        #[command(subcommand)]
        which: CertifyCmd,
    },
    /// Compute all invariants of two codes and report which differ
    Compare { code1: String, code2: String },
    /// Braid operations
    Braid {
        #[command(subcommand)]
        which: BraidCmd,
    },
    /// Random move orbits checking an invariant for stability
    Fuzz {
        /// Moves per trial
        #[arg(long, default_value_t = 25)]
        moves: usize,
        /// Number of trials
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Which invariant to track
        #[arg(long, value_enum, default_value_t = FuzzInvariant::Sl3)]
        invariant: FuzzInvariant,
        /// Crossing-count cap during orbits
        #[arg(long, default_value_t = 8)]
        max_chords: usize,
        code: String,
    },
    /// Export a diagram
    Export {
        #[command(subcommand)]
        which: ExportCmd,
    },
    /// Edge-coloring counts for trivalent graphs
    Colorings {
        #[command(subcommand)]
        which: ColoringsCmd,
    },
}

#[derive(Subcommand)]
enum InvariantCmd {
    /// Generalized Kuperberg sl(3) bracket (normalized)
    Sl3 {
        /// Also evaluate at A = 1 or A = -1
        #[arg(long = "at-A", value_parser = clap::value_parser!(i8))]
        at_a: Option<i8>,
        /// Compute the bracket for both orientations of every component
        #[arg(long)]
        both_orientations: bool,
        code: String,
    },
    /// Free-knot G2 bracket at q = 1
    G2 { code: String },
    /// Manturov parity bracket
    Parity {
        #[arg(long, value_enum, default_value_t = ParityMode::Virtual)]
        mode: ParityMode,
        code: String,
    },
    /// Penrose coloring bracket of a trivalent graph (JSON input)
    Penrose { graph_json: String },
    /// Odd writhe
    OddWrithe { code: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityMode {
    Virtual,
    Flat,
    Free,
}

#[derive(Subcommand)]
enum CertifyCmd {
    /// Unoriented-state certificates: bigon/quad-free K_us, girth
    Sl3Minimal { code: String },
    /// Leading-state girth certificate for the free G2 bracket
    G2Minimal { code: String },
    /// Odd-crossing structure and irreducibility of the parity state
    ParityOdd { code: String },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Trace of a virtual braid word through the graph category
    Trace {
        #[arg(long)]
        strands: usize,
        /// Apply the A^{-8wr} normalization
        #[arg(long)]
        normalized: bool,
        word: String,
    },
    /// Verify the Hecke-algebra relations on n strands
    Relations {
        #[arg(long, default_value_t = 4)]
        strands: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzInvariant {
    Sl3,
    G2,
    ParityVirtual,
    ParityFlat,
    ParityFree,
    OddWrithe,
}

#[derive(Subcommand)]
enum ExportCmd {
    /// DOT of the framed diagram graph (or the all-unoriented state)
    Dot {
        #[arg(long)]
        kus: bool,
        code: String,
    },
    /// JSON of the parsed diagram and its framed graph
    Json { code: String },
}

#[derive(Subcommand)]
enum ColoringsCmd {
    /// Count proper edge 3-colorings of a trivalent graph (JSON input)
    Count { graph_json: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("KUPWEB_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(&cli) {
        Ok(value) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
                Format::Human => println!("{}", human(&value)),
            }
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn human(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}: {}", human(v)))
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn parse(code: &str) -> Result<ChordDiagram, String> {
    parse_gauss(code).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<serde_json::Value, String> {
    match &cli.command {
        Command::Parse { code } => {
            let d = parse(code)?;
            Ok(json!({
                "code": d.code(),
                "level": format!("{:?}", d.level()),
                "chords": d.num_chords(),
                "circles": d.num_circles(),
                "diagram": d.to_json(),
            }))
        }
        Command::Invariant { which } => invariant(which),
        Command::Certify { which } => certify(which),
        Command::Compare { code1, code2 } => compare(code1, code2),
        Command::Braid { which } => braid(which),
        Command::Fuzz { moves, trials, invariant, max_chords, code } => {
            fuzz_cmd(*moves, *trials, *invariant, *max_chords, code, cli.seed)
        }
        Command::Export { which } => export(which),
        Command::Colorings { which } => match which {
            ColoringsCmd::Count { graph_json } => {
                let v: serde_json::Value =
                    serde_json::from_str(graph_json).map_err(|e| e.to_string())?;
                let g = trivalent_from_json(&v)?;
                let n = count_edge_3_colorings(&g).map_err(|e| e.to_string())?;
                Ok(json!({ "colorings": n }))
            }
        },
    }
}

fn invariant(which: &InvariantCmd) -> Result<serde_json::Value, String> {
    match which {
        InvariantCmd::Sl3 { at_a, both_orientations, code } => {
            let d = parse(code)?;
            let dv = d.to_virtual();
            let b = bracket(&dv);
            let mut out = json!({
                "bracket": b.to_json(),
                "scalar": b.is_scalar(),
                "classical_flag": if b.is_scalar() { "inconclusive" } else { "non-classical" },
                "odd_writhe": dv.odd_writhe().map_err(|e| e.to_string())?,
                "writhe": dv.writhe().map_err(|e| e.to_string())?,
                "certificates": minimality_report(&dv).to_json(),
            });
            if let Some(a) = at_a {
                if *a != 1 && *a != -1 {
                    return Err("--at-A takes 1 or -1".into());
                }
                out["at_A"] = free_bracket(&dv, *a).to_json();
            }
            if *both_orientations {
                let mut alts = Vec::new();
                for c in 0..dv.num_circles() {
                    let rev = dv.reverse_component(c);
                    alts.push(json!({
                        "reversed_component": c,
                        "bracket": bracket(&rev).to_json(),
                    }));
                }
                out["orientations"] = serde_json::Value::Array(alts);
            }
            Ok(out)
        }
        InvariantCmd::G2 { code } => {
            let d = parse(code)?;
            let fg = d.to_free().to_framed_graph();
            let v = g2_free(&fg);
            Ok(json!({
                "g2_free": v.to_json(),
                "scalar": v.is_scalar(),
                "states": 4u64.pow(fg.web.num_vertices() as u32),
            }))
        }
        InvariantCmd::Parity { mode, code } => {
            let d = parse(code)?;
            match mode {
                ParityMode::Virtual => {
                    let pb = parity_bracket(&d).map_err(|e| e.to_string())?;
                    Ok(json!({ "parity_bracket": pb.to_json(), "terms": pb.num_terms() }))
                }
                ParityMode::Flat => {
                    let pb = parity_bracket_flat(&d, 1).map_err(|e| e.to_string())?;
                    Ok(json!({ "parity_bracket_at_1": pb.to_json(), "terms": pb.num_terms() }))
                }
                ParityMode::Free => {
                    let fg = d.to_free().to_framed_graph();
                    let val = free_mod2_bracket(&fg).map_err(|e| e.to_string())?;
                    let keys: Vec<String> = val.iter().map(|k| k.hex()).collect();
                    Ok(json!({ "free_mod2_classes": keys }))
                }
            }
        }
        InvariantCmd::Penrose { graph_json } => {
            let v: serde_json::Value =
                serde_json::from_str(graph_json).map_err(|e| e.to_string())?;
            let g = trivalent_from_json(&v)?;
            let p = penrose_bracket(&g).map_err(|e| e.to_string())?;
            Ok(json!({ "penrose": p }))
        }
        InvariantCmd::OddWrithe { code } => {
            let d = parse(code)?.to_virtual();
            Ok(json!({ "odd_writhe": d.odd_writhe().map_err(|e| e.to_string())? }))
        }
    }
}

fn certify(which: &CertifyCmd) -> Result<serde_json::Value, String> {
    match which {
        CertifyCmd::Sl3Minimal { code } => {
            let d = parse(code)?.to_virtual();
            let report = minimality_report(&d);
            Ok(report.to_json())
        }
        CertifyCmd::G2Minimal { code } => {
            let d = parse(code)?;
            let fg = d.to_free().to_framed_graph();
            let cert = g2_minimality(&fg);
            let mut out = cert.to_json();
            out["bipartite_state_exists"] = json!(bipartite_state(&fg).is_some());
            Ok(out)
        }
        CertifyCmd::ParityOdd { code } => {
            let d = parse(code)?.to_virtual();
            let cert = parity_certificate(&d).map_err(|e| e.to_string())?;
            Ok(json!({
                "all_odd": cert.all_odd,
                "single_term": cert.single_term,
                "irreducible_without_z": cert.irreducible_without_z,
                "reducible_with_z": cert.reducible_with_z,
                "nodes": cert.node_count,
            }))
        }
    }
}

fn compare(code1: &str, code2: &str) -> Result<serde_json::Value, String> {
    let d1 = parse(code1)?.to_virtual();
    let d2 = parse(code2)?.to_virtual();
    let mut diffs = Vec::new();
    let mut same = Vec::new();
    let mut record = |name: &str, eq: bool| {
        if eq {
            same.push(name.to_string())
        } else {
            diffs.push(name.to_string())
        }
    };
    record("odd_writhe", d1.odd_writhe() == d2.odd_writhe());
    record("sl3_bracket", bracket(&d1) == bracket(&d2));
    record("sl3_at_1", free_bracket(&d1, 1) == free_bracket(&d2, 1));
    record("sl3_at_-1", free_bracket(&d1, -1) == free_bracket(&d2, -1));
    record(
        "parity_bracket",
        parity_bracket(&d1).map_err(|e| e.to_string())?
            == parity_bracket(&d2).map_err(|e| e.to_string())?,
    );
    let f1 = d1.to_free().to_framed_graph();
    let f2 = d2.to_free().to_framed_graph();
    record("g2_free", g2_free(&f1) == g2_free(&f2));
    if f1.is_unicursal() && f2.is_unicursal() {
        record(
            "free_mod2",
            free_mod2_bracket(&f1).map_err(|e| e.to_string())?
                == free_mod2_bracket(&f2).map_err(|e| e.to_string())?,
        );
    }
    Ok(json!({
        "distinguished": !diffs.is_empty(),
        "differ": diffs,
        "agree": same,
    }))
}

fn braid(which: &BraidCmd) -> Result<serde_json::Value, String> {
    match which {
        BraidCmd::Trace { strands, normalized, word } => {
            let b = BraidWord::parse(*strands, word).map_err(|e| e.to_string())?;
            let t = represent(&b);
            let trace =
                if *normalized { closure_trace_normalized(&b) } else { closure_trace(&b) };
            Ok(json!({
                "strands": strands,
                "tangle_terms": t.num_terms(),
                "trace": trace.to_json(),
            }))
        }
        BraidCmd::Relations { strands } => {
            let report = verify_relations(*strands);
            let checks: Vec<serde_json::Value> = report
                .checks
                .iter()
                .map(|(name, ok)| json!({ "relation": name, "holds": ok }))
                .collect();
            Ok(json!({ "all_hold": report.all_hold(), "checks": checks }))
        }
    }
}

fn fuzz_cmd(
    moves: usize,
    trials: usize,
    invariant: FuzzInvariant,
    max_chords: usize,
    code: &str,
    seed: Option<u64>,
) -> Result<serde_json::Value, String> {
    let d0 = parse(code)?.to_virtual();
    let seed = seed.unwrap_or_else(|| rand::rng().random());
    let allowed: Vec<MoveKind> = match invariant {
        FuzzInvariant::Sl3 | FuzzInvariant::OddWrithe => fuzz::z_stable_moves(),
        FuzzInvariant::G2 | FuzzInvariant::ParityFree => fuzz::free_moves(),
        FuzzInvariant::ParityVirtual => fuzz::virtual_isotopy_moves(),
        FuzzInvariant::ParityFlat => {
            let mut m = fuzz::virtual_isotopy_moves();
            m.push(MoveKind::CrossingSwitch);
            m
        }
    };
    let eval = |d: &ChordDiagram| -> Result<String, String> {
        Ok(match invariant {
            FuzzInvariant::Sl3 => format!("{}", bracket(d)),
            FuzzInvariant::OddWrithe => format!("{}", d.odd_writhe().map_err(|e| e.to_string())?),
            FuzzInvariant::G2 => format!("{}", g2_free(&d.to_free().to_framed_graph())),
            FuzzInvariant::ParityVirtual => {
                format!("{}", parity_bracket(d).map_err(|e| e.to_string())?)
            }
            FuzzInvariant::ParityFlat => {
                format!("{}", parity_bracket_flat(d, 1).map_err(|e| e.to_string())?)
            }
            FuzzInvariant::ParityFree => {
                let fg = d.to_free().to_framed_graph();
                if !fg.is_unicursal() {
                    return Ok("skip".to_string());
                }
                format!("{:?}", free_mod2_bracket(&fg).map_err(|e| e.to_string())?)
            }
        })
    };
    let base = eval(&d0)?;
    for trial in 0..trials {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(trial as u64));
        let (orbit, path) = fuzz::random_orbit(&d0, &allowed, moves, max_chords, &mut rng);
        for (i, x) in orbit.iter().enumerate() {
            let v = eval(x)?;
            if v != "skip" && v != base {
                let steps: Vec<String> =
                    path[..=i].iter().map(|(_, s)| s.to_string()).collect();
                return Ok(json!({
                    "result": "COUNTEREXAMPLE",
                    "seed": seed,
                    "trial": trial,
                    "moves": steps,
                    "diagram": x.code(),
                }));
            }
        }
    }
    Ok(json!({ "result": "INVARIANT STABLE", "seed": seed, "trials": trials, "moves": moves }))
}

fn export(which: &ExportCmd) -> Result<serde_json::Value, String> {
    match which {
        ExportCmd::Dot { kus, code } => {
            let d = parse(code)?;
            let dot = if *kus {
                to_dot(&unoriented_state(&d))
            } else {
                to_dot(&d.to_framed_graph().web)
            };
            Ok(json!({ "dot": dot }))
        }
        ExportCmd::Json { code } => {
            let d = parse(code)?;
            Ok(json!({
                "diagram": d.to_json(),
                "framed_graph": web_to_json(&d.to_framed_graph().web),
            }))
        }
    }
}
