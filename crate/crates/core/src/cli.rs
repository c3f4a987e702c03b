//! Command-line front end.
//!
//! Exit codes: 0 verified, 1 a check ran and failed, 2 usage or input
//! error, 3 the window was too small to decide.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::graph::{cayley_vs_distant_report, DistantGraph};
use crate::involution::{assemble, sigma_star, validate, CaseId, InvolutionWindow};
use crate::neumann::{
    check_neumann_with, coset_decompose, elements_up_to_height, CosetError, DescentError,
    NeumannOptions,
};
use crate::structure::{
    check_independence, check_tietze, independent_generators, structure_report, synthesize_blocks,
    StructureCounts, SynthesisError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "neumann",
    version,
    about = "Exact checks for Neumann subgroups of PGL(2,Z)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the blocks of a spec file and check the involution conditions.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Print `n iota delta a b c d` for every generator in the window.
    Generators {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Existence and uniqueness of the element sending ∞ to each vertex.
    NeumannCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        oracle_len: Option<usize>,
        #[arg(long)]
        oracle_cap: Option<u64>,
    },
    /// Decompose every element of height at most H as s·t.
    CosetCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        height: u64,
    },
    /// Free-product structure of the block sequence.
    Structure {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Per-block generator classes, elimination identities and a bounded
    /// relation search.
    Independence {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Export the distant graph of height at most H.
    Graph {
        #[arg(long)]
        height: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Compare the Cayley graph with the distant graph.
    IsoCheck {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        height: u64,
    },
    /// Emit a spec file realizing a structure.
    Synthesize {
        #[arg(long, default_value_t = 0)]
        r2: u64,
        #[arg(long, default_value_t = 0)]
        r3: u64,
        #[arg(long, default_value_t = 0)]
        rinfp: u64,
        #[arg(long, default_value_t = 0)]
        rinfm: u64,
        #[arg(long, default_value_t = 1)]
        pad: u8,
        #[arg(long)]
        blocks: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Adj,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: expected `block <1-6>`, found `{text}`")]
    BadLine { line: usize, text: String },
    #[error("spec file lists no blocks")]
    Empty,
}

/// Parses `block <case>` lines; `#` starts a comment.
pub fn parse_spec(text: &str) -> Result<Vec<CaseId>, SpecError> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || SpecError::BadLine {
            line: i + 1,
            text: raw.trim().to_string(),
        };
        let mut parts = line.split_whitespace();
        let (Some("block"), Some(id), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let case = id
            .parse::<u8>()
            .ok()
            .and_then(|n| CaseId::new(n).ok())
            .ok_or_else(bad)?;
        cases.push(case);
    }
    if cases.is_empty() {
        return Err(SpecError::Empty);
    }
    Ok(cases)
}

pub fn format_spec(cases: &[CaseId]) -> String {
    cases.iter().map(|c| format!("block {c}\n")).collect()
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<(Vec<CaseId>, InvolutionWindow), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let cases =
        parse_spec(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let w = assemble(&cases).map_err(|e| Failure::usage(e.to_string()))?;
    Ok((cases, w))
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(f) => (f.code, format!("error: {}\n", f.message)),
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn execute(cmd: Command) -> Result<(i32, String), Failure> {
    let mut out = String::new();
    let code = match cmd {
        Command::Validate { spec } => {
            let (_, w) = load(&spec)?;
            let report = validate(&w);
            write!(out, "{report}").unwrap();
            verdict(report.is_valid())
        }
        Command::Generators { spec } => {
            let (_, w) = load(&spec)?;
            for n in w.indices() {
                let s = sigma_star(&w, n).expect("in window");
                let [a, b, c, d] = s.entries();
                writeln!(
                    out,
                    "{n} {} {} {a} {b} {c} {d}",
                    w.iota(n).expect("in window"),
                    w.delta(n).expect("in window")
                )
                .unwrap();
            }
            EXIT_OK
        }
        Command::NeumannCheck {
            spec,
            height,
            oracle_len,
            oracle_cap,
        } => {
            let (_, w) = load(&spec)?;
            let opts = NeumannOptions {
                oracle_len,
                oracle_height_cap: oracle_cap,
            };
            let report = check_neumann_with(&w, height, opts);
            write!(out, "{report}").unwrap();
            if report.verified {
                EXIT_OK
            } else if report.only_window_limited() {
                EXIT_WINDOW
            } else {
                EXIT_FAILED
            }
        }
        Command::CosetCheck { spec, height } => {
            let (_, w) = load(&spec)?;
            coset_check(&w, height, &mut out)
        }
        Command::Structure { spec } => {
            let (cases, _) = load(&spec)?;
            let report = structure_report(&cases);
            write!(out, "{report}").unwrap();
            verdict(report.constraint2 && report.constraint3)
        }
        Command::Independence { spec, max_len } => {
            if max_len == 0 {
                return Err(Failure::usage("--max-len must be at least 1"));
            }
            let (_, w) = load(&spec)?;
            independence(&w, max_len, &mut out)
        }
        Command::Graph { height, format } => {
            let g = DistantGraph::build(height).map_err(|e| Failure::usage(e.to_string()))?;
            out = match format {
                GraphFormat::Dot => g.to_dot(),
                GraphFormat::Adj => g.to_adjacency_json(),
            };
            EXIT_OK
        }
        Command::IsoCheck { spec, height } => {
            let (_, w) = load(&spec)?;
            match cayley_vs_distant_report(&w, height) {
                Ok(r) => {
                    writeln!(out, "vertices {}", r.vertices).unwrap();
                    writeln!(out, "edges {}", r.edges).unwrap();
                    writeln!(out, "pairs_checked {}", r.pairs_checked).unwrap();
                    for m in &r.mismatches {
                        writeln!(out, "mismatch {m}").unwrap();
                    }
                    writeln!(out, "isomorphic {}", if r.holds() { "yes" } else { "no" }).unwrap();
                    verdict(r.holds())
                }
                Err(DescentError::OutOfWindow(n)) => {
                    writeln!(out, "out-of-window {n}").unwrap();
                    EXIT_WINDOW
                }
                Err(e) => {
                    writeln!(out, "error {e}").unwrap();
                    EXIT_FAILED
                }
            }
        }
        Command::Synthesize {
            r2,
            r3,
            rinfp,
            rinfm,
            pad,
            blocks,
        } => {
            let pad = CaseId::new(pad).map_err(|e| Failure::usage(e.to_string()))?;
            let target = StructureCounts::new(r2, r3, rinfp, rinfm);
            match synthesize_blocks(target, pad, blocks) {
                Ok(s) => {
                    writeln!(out, "# structure {target}").unwrap();
                    out.push_str(&format_spec(s.prefix()));
                    if !s.padding().is_empty() {
                        out.push_str("# padding\n");
                        out.push_str(&format_spec(s.padding()));
                    }
                    EXIT_OK
                }
                Err(e @ SynthesisError::TooFewBlocks { .. }) => {
                    return Err(Failure::usage(e.to_string()))
                }
                Err(e) => {
                    writeln!(out, "unrealizable: {e}").unwrap();
                    EXIT_FAILED
                }
            }
        }
    };
    Ok((code, out))
}

fn coset_check(w: &InvolutionWindow, height: u64, out: &mut String) -> i32 {
    let mut failed = 0usize;
    let mut window = 0usize;
    let elements = elements_up_to_height(height);
    for g in &elements {
        let [a, b, c, d] = g.rep().entries();
        write!(out, "{a} {b} {c} {d} ").unwrap();
        match coset_decompose(w, g) {
            Ok(dec) => {
                let exact = dec.s.compose(&dec.t()) == *g;
                let [sa, sb, sc, sd] = dec.s.rep().entries();
                writeln!(
                    out,
                    "s {sa} {sb} {sc} {sd} t {} {} {}",
                    dec.kind,
                    dec.n,
                    if exact { "ok" } else { "mismatch" }
                )
                .unwrap();
                if !exact {
                    failed += 1;
                }
            }
            Err(CosetError::Descent(DescentError::OutOfWindow(n))) => {
                writeln!(out, "out-of-window {n}").unwrap();
                window += 1;
            }
            Err(e) => {
                writeln!(out, "error {e}").unwrap();
                failed += 1;
            }
        }
    }
    writeln!(
        out,
        "checked {} failed {failed} out_of_window {window}",
        elements.len()
    )
    .unwrap();
    if failed > 0 {
        EXIT_FAILED
    } else if window > 0 {
        EXIT_WINDOW
    } else {
        EXIT_OK
    }
}

fn independence(w: &InvolutionWindow, max_len: usize, out: &mut String) -> i32 {
    let mut ok = true;
    for b in w.blocks() {
        writeln!(out, "block {} base {}", b.case(), b.base()).unwrap();
        let gens = independent_generators(w, b).expect("block of this window");
        for g in &gens {
            writeln!(
                out,
                "  generator {} {} expected {} {}",
                g.index,
                g.class,
                g.expected,
                if g.matches() { "ok" } else { "mismatch" }
            )
            .unwrap();
            ok &= g.matches();
        }
        let gated = (3..=5).contains(&b.case().get());
        for t in check_tietze(b, w).expect("block of this window") {
            writeln!(
                out,
                "  tietze {} {}",
                t.identity,
                if t.holds { "holds" } else { "fails" }
            )
            .unwrap();
            ok &= t.holds || !gated;
        }
        let pairs: Vec<_> = gens.iter().map(|g| (g.element.clone(), g.class)).collect();
        let free = check_independence(&pairs, max_len);
        writeln!(
            out,
            "  independent {} max_len {max_len}",
            if free { "yes" } else { "no" }
        )
        .unwrap();
        ok &= free;
    }
    writeln!(out, "verified {}", if ok { "yes" } else { "no" }).unwrap();
    verdict(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        let cases = parse_spec("# two fixed points\nblock 1\n\n  block 1  # again\n").unwrap();
        assert_eq!(cases.len(), 2);
        assert_eq!(
            parse_spec("block 7\n"),
            Err(SpecError::BadLine {
                line: 1,
                text: "block 7".into()
            })
        );
        assert!(matches!(
            parse_spec("blocks 1"),
            Err(SpecError::BadLine { .. })
        ));
        assert!(matches!(
            parse_spec("block 1 2"),
            Err(SpecError::BadLine { .. })
        ));
        assert_eq!(parse_spec("# nothing\n"), Err(SpecError::Empty));
        assert_eq!(parse_spec(&format_spec(&cases)).unwrap(), cases);
    }

    #[test]
    fn usage_errors() {
        let (code, _) = run(["neumann", "frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, out) = run(["neumann", "validate", "--spec", "/nonexistent/x.spec"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.contains("cannot read"));
        let (code, _) = run(["neumann", "graph", "--height", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, out) = run(["neumann", "--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("neumann-check"));
    }

    #[test]
    fn graph_export() {
        let (code, out) = run(["neumann", "graph", "--height", "1", "--format", "dot"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.matches("label=").count(), 4);
        assert_eq!(out.matches(" -- ").count(), 5);
    }

    #[test]
    fn synthesize_output() {
        let (code, out) = run([
            "neumann",
            "synthesize",
            "--r2",
            "1",
            "--rinfm",
            "1",
            "--pad",
            "3",
            "--blocks",
            "4",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(
            out,
            "# structure 1 0 0 1\nblock 4\n# padding\nblock 3\nblock 3\nblock 3\n"
        );
        let (code, _) = run([
            "neumann",
            "synthesize",
            "--rinfp",
            "1",
            "--rinfm",
            "1",
            "--blocks",
            "3",
        ]);
        assert_eq!(code, EXIT_FAILED);
        let (code, _) = run(["neumann", "synthesize", "--r2", "3", "--blocks", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
