//! Command-line interface.
//!
//! Data goes to standard output (or `--output`), diagnostics to standard
//! error. Exit codes: 0 success, 1 invalid input, 2 internal inconsistency.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bn_curve::{build_bn_curve, export_graph, genus_cross_check, BNCurveGraph};
use crate::chain_model::{component_tables, limit_series_census, Census, ChainSpec};
use crate::combinatorics::generalized_catalan;
use crate::error::{ChainError, CurveError, GonalityError};
use crate::gonality5::cover::cover_degree;
use crate::gonality5::{
    build_degree6_cover, build_double_cover, build_w14_circuit, exclude_degree, gonality,
    verify_cover, verify_double_cover, ProofTrace, VerificationReport,
};
use crate::selftest::{render_table, Bounds, Faults, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "bncurve",
    version,
    about = "Brill-Noether curves of elliptic chains"
)]
pub struct Cli {
    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Catalan number (Catalan for m = 2).
    Catalan {
        #[arg(long)]
        a: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// Number of g^r_d on a general curve when rho = 0: g = a(r+1), d = r(a+1).
    Castelnuovo {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        r: u32,
    },
    /// What the chain says about W^r_d.
    Census {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Bundle tables of the components of W^1_d (g = 2a+1, d = a+2).
    Tables {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Build the dual graph of W^1_{a+2} and report its invariants.
    Curve {
        #[arg(long)]
        a: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Allow a above the default enumeration guard.
        #[arg(long)]
        allow_large: bool,
    },
    /// Gonality of W^1_4 on a genus-5 chain.
    Gonality5 {
        /// Only exclude this degree (1-5) or verify the degree-6 cover (6).
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run every consistency criterion.
    Selftest {
        #[arg(long)]
        max_a: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, hide = true)]
        corrupt_catalan5: bool,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Disconnected => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<GonalityError> for Failure {
    fn from(e: GonalityError) -> Self {
        match e {
            GonalityError::DegreeOutOfRange(_) => Failure::Input(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn bad_format(cmd: &str, f: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&f) {
        Ok(())
    } else {
        Err(Failure::Input(
            format!("{cmd} does not support --format {f:?}").to_lowercase(),
        ))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// Output of a successful command, or output plus a failure (selftest).
pub struct Rendered {
    pub data: String,
    pub failure: Option<Failure>,
}

impl From<String> for Rendered {
    fn from(data: String) -> Self {
        Self {
            data,
            failure: None,
        }
    }
}

pub fn execute(command: &Command) -> Result<Rendered, Failure> {
    match command {
        Command::Catalan { a, m } => {
            if *m < 2 {
                return Err(Failure::Input("m must be at least 2".into()));
            }
            Ok(format!("{}\n", generalized_catalan(*a, *m)).into())
        }
        Command::Castelnuovo { a, r } => {
            if *a == 0 || *r == 0 {
                return Err(Failure::Input("a and r must be positive".into()));
            }
            match limit_series_census(a * (r + 1), *r, r * (a + 1))? {
                Census::Finite(n) => {
                    let formula = generalized_catalan(*a, r + 1);
                    if n != formula {
                        return Err(Failure::Internal(format!(
                            "census {n} disagrees with product formula {formula}"
                        )));
                    }
                    Ok(format!("{n}\n").into())
                }
                other => Err(Failure::Internal(format!(
                    "rho = 0 census returned {other:?}"
                ))),
            }
        }
        Command::Census { g, r, d, format } => {
            bad_format("census", *format, &[Format::Text, Format::Json])?;
            let census = limit_series_census(*g, *r, *d)?;
            Ok(match format {
                Format::Json => to_json(&census),
                _ => match census {
                    Census::Empty => "empty\n".to_string(),
                    Census::Finite(n) => format!("finite {n}\n"),
                    Census::Curve(n) => format!("curve with {n} components\n"),
                },
            }
            .into())
        }
        Command::Tables { g, d, format } => {
            bad_format("tables", *format, &[Format::Csv, Format::Text])?;
            let chain = ChainSpec::new(*g, 1, *d)?;
            let table = component_tables(&chain)?;
            Ok(match format {
                Format::Text => table.render_text(),
                _ => table.render_csv(),
            }
            .into())
        }
        Command::Curve {
            a,
            format,
            allow_large,
        } => {
            if *a == 0 {
                return Err(CurveError::ZeroParameter.into());
            }
            let graph = build_bn_curve(*a, *allow_large)?;
            curve_output(&graph, *format)
        }
        Command::Gonality5 { degree, format } => {
            bad_format("gonality5", *format, &[Format::Text, Format::Json])?;
            gonality_output(*degree, *format == Format::Json)
        }
        Command::Selftest {
            max_a,
            format,
            corrupt_catalan5,
        } => {
            bad_format("selftest", *format, &[Format::Text, Format::Json])?;
            let bounds = match max_a {
                Some(0) => return Err(Failure::Input("--max-a must be at least 1".into())),
                Some(n) => Bounds::with_max_a(*n),
                None => Bounds::default(),
            };
            let mut suite = Suite::new(
                bounds,
                Faults {
                    corrupt_catalan5: *corrupt_catalan5,
                },
            );
            let results = suite.run_all();
            let failed = results.iter().filter(|r| !r.passed).count();
            let data = if *format == Format::Json {
                to_json(&results)
            } else {
                render_table(&results)
            };
            Ok(Rendered {
                data,
                failure: (failed > 0)
                    .then(|| Failure::Internal(format!("{failed} criteria failed"))),
            })
        }
    }
}

fn curve_output(graph: &BNCurveGraph, format: Format) -> Result<Rendered, Failure> {
    bad_format("curve", format, &[Format::Json, Format::Dot, Format::Text])?;
    let check = genus_cross_check(graph)?;
    let data = match format {
        Format::Json => export_graph(graph, "json")?,
        Format::Dot => export_graph(graph, "dot")?,
        _ => {
            let mut out = String::new();
            let c = graph.chain;
            let _ = writeln!(out, "W^1_{} on a chain of genus {}", c.d, c.g);
            let _ = writeln!(out, "components  {}", graph.nu());
            let _ = writeln!(out, "nodes       {}", graph.delta());
            let _ = writeln!(out, "genus       {} (graph)", check.graph);
            let _ = writeln!(out, "genus       {} (closed form)", check.closed);
            let _ = writeln!(
                out,
                "eh_formula  {}{}",
                check.eh_formula,
                if check.eh_discrepancy {
                    " (DISCREPANCY: differs from the graph genus)"
                } else {
                    ""
                }
            );
            out
        }
    };
    if !check.consistent() {
        return Ok(Rendered {
            data,
            failure: Some(Failure::Internal(format!(
                "graph genus {} differs from closed form {}",
                check.graph, check.closed
            ))),
        });
    }
    if check.eh_discrepancy && format != Format::Text {
        eprintln!(
            "note: eh_formula = {} differs from the graph genus {}",
            check.eh_formula, check.graph
        );
    }
    Ok(data.into())
}

fn render_trace(out: &mut String, t: &ProofTrace) {
    let _ = writeln!(out, "degree {}: {}", t.degree, t.conclusion);
    for s in &t.steps {
        let _ = writeln!(
            out,
            "  [{}] {}",
            if s.passed() { "ok" } else { "FAIL" },
            s.claim
        );
        for c in &s.oracle_calls {
            let _ = writeln!(
                out,
                "       {}: {} ~ {} is {}",
                c.component, c.lhs, c.rhs, c.equivalent
            );
        }
        if let Some(d) = &s.detail {
            let _ = writeln!(out, "       {d}");
        }
    }
}

fn render_report(out: &mut String, r: &VerificationReport) {
    let _ = writeln!(
        out,
        "{}: {}",
        r.subject,
        if r.passed() { "verified" } else { "FAILED" }
    );
    for s in &r.steps {
        let _ = writeln!(
            out,
            "  [{}] {}",
            if s.passed() { "ok" } else { "FAIL" },
            s.claim
        );
        if let Some(d) = s.detail.as_ref().filter(|_| !s.passed()) {
            let _ = writeln!(out, "       {d}");
        }
    }
}

fn gonality_output(degree: Option<u32>, json: bool) -> Result<Rendered, Failure> {
    let circuit = build_w14_circuit()?;
    match degree {
        Some(6) => {
            let cover = build_degree6_cover(&circuit)?;
            let report = verify_cover(&cover);
            let failure = (!report.passed())
                .then(|| Failure::Internal("degree-6 cover does not verify".into()));
            let data = if json {
                to_json(&report)
            } else {
                let mut out = String::new();
                render_report(&mut out, &report);
                let _ = writeln!(
                    out,
                    "degree over each target component: {:?}",
                    cover_degree(&cover)
                );
                out
            };
            Ok(Rendered { data, failure })
        }
        Some(d) => {
            let trace = exclude_degree(&circuit, d)?;
            let failure = (!trace.holds()).then(|| Failure::Internal(trace.conclusion.clone()));
            let data = if json {
                to_json(&trace)
            } else {
                let mut out = String::new();
                render_trace(&mut out, &trace);
                out
            };
            Ok(Rendered { data, failure })
        }
        None => {
            let gon = gonality()?;
            let double = build_double_cover(&circuit)?;
            let genus = crate::bn_curve::genus_from_graph(&circuit.graph)?;
            let dc = verify_double_cover(&double, &genus);
            let failure = (!dc.report.passed())
                .then(|| Failure::Internal("double cover does not verify".into()));
            if json {
                #[derive(Serialize)]
                struct Doc<'a> {
                    gonality: &'a crate::gonality5::Gonality,
                    double_cover: &'a crate::gonality5::cover::DoubleCoverReport,
                }
                return Ok(Rendered {
                    data: to_json(&Doc {
                        gonality: &gon,
                        double_cover: &dc,
                    }),
                    failure,
                });
            }
            let mut out = String::new();
            for t in &gon.lower_certificate {
                let _ = writeln!(
                    out,
                    "degree {}: {} ({} steps, {} oracle calls)",
                    t.degree,
                    t.conclusion,
                    t.steps.len(),
                    t.oracle_call_count()
                );
            }
            render_report(&mut out, &gon.upper_certificate);
            render_report(&mut out, &dc.report);
            let _ = writeln!(
                out,
                "double cover: source genus {}, target genus {}",
                dc.source_genus,
                dc.target_genus.map_or("?".into(), |g| g.to_string())
            );
            let _ = writeln!(out, "gonality = {}", gon.value);
            Ok(Rendered { data: out, failure })
        }
    }
}

fn emit(output: Option<&PathBuf>, data: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, data)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(data.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Internal(format!("cannot write output: {e}")))
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    1
                }
            };
        }
    };
    let result = execute(&cli.command).and_then(|r| {
        emit(cli.output.as_ref(), &r.data)?;
        r.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Input(msg) => {
                    eprintln!("error: {msg}");
                    eprintln!(
                        "{}",
                        <Cli as clap::CommandFactory>::command().render_usage()
                    );
                }
                Failure::Internal(msg) => eprintln!("internal consistency failure: {msg}"),
            }
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(args: &[&str]) -> String {
        let cli =
            Cli::try_parse_from(std::iter::once("bncurve").chain(args.iter().copied())).unwrap();
        let r = execute(&cli.command).unwrap_or_else(|f| panic!("{f:?}"));
        assert!(r.failure.is_none());
        r.data
    }

    #[test]
    fn castelnuovo_example() {
        assert_eq!(data(&["castelnuovo", "--a", "2", "--r", "1"]), "2\n");
        assert_eq!(data(&["castelnuovo", "--a", "2", "--r", "2"]), "5\n");
    }

    #[test]
    fn census_formats() {
        assert_eq!(
            data(&["census", "--g", "5", "--r", "1", "--d", "4"]),
            "curve with 10 components\n"
        );
        assert_eq!(
            data(&["census", "--g", "5", "--r", "1", "--d", "2"]),
            "empty\n"
        );
        let j: serde_json::Value = serde_json::from_str(&data(&[
            "census", "--g", "4", "--r", "1", "--d", "3", "--format", "json",
        ]))
        .unwrap();
        assert_eq!(j["kind"], "Finite");
        assert_eq!(j["count"], "2");
    }

    #[test]
    fn curve_json() {
        let j: serde_json::Value =
            serde_json::from_str(&data(&["curve", "--a", "2", "--format", "json"])).unwrap();
        assert_eq!(
            (j["nu"].as_str(), j["delta"].as_str(), j["genus"].as_str()),
            (Some("10"), Some("10"), Some("11"))
        );
        assert_eq!(j["eh_formula"], "6");
        assert_eq!(j["eh_discrepancy"], true);
    }

    #[test]
    fn gonality_text_ends_with_value() {
        assert!(data(&["gonality5"]).ends_with("gonality = 6\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["bncurve", "frobnicate"]), 1);
        assert_eq!(run(["bncurve", "curve", "--a", "7"]), 1);
        assert_eq!(run(["bncurve", "tables", "--g", "5", "--d", "3"]), 1);
        assert_eq!(run(["bncurve", "gonality5", "--degree", "9"]), 1);
        assert_eq!(
            run(["bncurve", "census", "--g", "5", "--r", "1", "--d", "4", "--format", "dot"]),
            1
        );
    }
}
