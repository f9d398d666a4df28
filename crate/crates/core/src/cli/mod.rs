//! The `qpmut` command line.
//!
//! Commands that need a QP read it from `--input FILE` or standard input, in
//! the QP text format. QP-valued output is printed in the same format with
//! `#` comment lines, so commands can be chained through pipes:
//!
//! ```text
//! qpmut catalog four_cycle | qpmut seq -k 2,3
//! ```
//!
//! Exit status: 0 on success, 1 on invalid input or engine errors, 2 on
//! usage errors, 3 when a mutation cannot be applied because its vertex lies
//! on an oriented 2-cycle.

pub mod json;
pub mod serve;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{self, Params};
use crate::error::{Error, Result};
use crate::field::{Field, Fp, Rational};
use crate::jacobian::{deformation_dim, is_rigid, jacobian_dim, kk_dim, DimReport, Qp};
use crate::mutation::{b_matrix, mutate, mutate_sequence, random_potential, split, MutationResult};
use crate::quiver::Vertex;
use crate::rep_mutation::mutate_rep;
use crate::reps::{format_rep, parse_rep, DecoratedRep};
use crate::text::format_series;

pub const DEFAULT_TRUNC: usize = 6;

/// Primes accepted by `--field fp:<p>`.
pub const PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 101, 32003, 2147483647];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime(u64),
}

fn parse_field(s: &str) -> std::result::Result<FieldChoice, String> {
    match s {
        "q" | "Q" => Ok(FieldChoice::Rational),
        _ => {
            let p = s
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| format!("expected `q` or `fp:<p>`, got `{s}`"))?;
            if PRIMES.contains(&p) {
                Ok(FieldChoice::Prime(p))
            } else {
                Err(format!("unsupported prime {p}; choose one of {PRIMES:?}"))
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qpmut",
    version,
    about = "Quivers with potential: mutation, reduction and Jacobian invariants"
)]
pub struct Cli {
    /// Truncation degree N (default 6, or the `trunc:` line of the input).
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    pub field: FieldChoice,
    /// Seed for random potentials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// QP file; standard input when absent.
    #[arg(long, short = 'i', global = true)]
    pub input: Option<PathBuf>,
    /// Also write the output (for `serve`: the session state) to this file.
    #[arg(long, global = true)]
    pub save: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where a representation comes from.
#[derive(Debug, Clone, clap::Args)]
pub struct RepSource {
    /// Representation file over the input QP.
    #[arg(long, conflicts_with_all = ["band", "a3"])]
    pub rep: Option<PathBuf>,
    /// Band module M(m,n) on the double triangle (no QP input needed).
    #[arg(long, value_name = "M,N", conflicts_with = "a3")]
    pub band: Option<String>,
    /// Indecomposable of the A3 path, 1..=6 (no QP input needed).
    #[arg(long, value_name = "I")]
    pub a3: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the QP, its B-matrix and the vertices blocked by 2-cycles.
    Show,
    /// Mutate at one vertex.
    Mutate {
        #[arg(short = 'k')]
        k: Vertex,
        /// Replace the potential by a seeded random one up to this degree.
        #[arg(long, value_name = "DEG")]
        random: Option<usize>,
    },
    /// Mutate along a sequence, stopping at the first blocked step.
    Seq {
        #[arg(short = 'k', value_delimiter = ',', required = true)]
        k: Vec<Vertex>,
        #[arg(long, value_name = "DEG")]
        random: Option<usize>,
    },
    /// Split off the trivial part and print the reduced QP.
    Reduce,
    /// Graded dimensions of the truncated Jacobian algebra.
    Jdim {
        /// Restrict to paths from and to this vertex.
        #[arg(long)]
        at: Option<Vertex>,
    },
    /// Graded dimensions of the deformation space.
    Defdim,
    /// Rigidity test.
    Rigid,
    /// Mutate a representation.
    Repmutate {
        #[arg(short = 'k')]
        k: Vertex,
        #[command(flatten)]
        source: RepSource,
        /// Also mutate back and report whether the result is isomorphic to the input.
        #[arg(long)]
        check: bool,
        /// Write the mutated QP to this file.
        #[arg(long)]
        qp_out: Option<PathBuf>,
    },
    /// Check a QP, or a representation against its relations.
    Validate {
        #[command(flatten)]
        source: RepSource,
    },
    /// List the catalog, or print one entry.
    Catalog {
        name: Option<String>,
        /// Grid order.
        #[arg(long)]
        n: Option<usize>,
        /// Power-series coefficients, lowest degree first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<String>>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Catalog entry loaded at start when no input file is given.
        #[arg(long, default_value = "four_cycle")]
        load: String,
    },
}

/// A command failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if matches!(e, Error::TwoCycleThroughVertex(_)) {
            3
        } else {
            1
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// Successful command output, plus optional diagnostics for stderr.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub warnings: Vec<String>,
}

struct Ctx<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    fn trunc(&self) -> usize {
        self.cli.trunc.unwrap_or(DEFAULT_TRUNC)
    }

    fn read_input(&mut self) -> Result<String> {
        match &self.cli.input {
            Some(p) => Ok(std::fs::read_to_string(p)?),
            None => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(s)
            }
        }
    }

    fn qp<F: Field>(&mut self) -> Result<Qp<F>> {
        let src = self.read_input()?;
        if src.trim().is_empty() {
            return Err(Error::Parse("no QP on input".into()));
        }
        if src.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(&src).map_err(|e| Error::Parse(e.to_string()))?;
            let v = if v.get("quiver").is_some() {
                v
            } else {
                v.get("qp").cloned().unwrap_or(v)
            };
            let qp = json::qp_from_value::<F>(&v)?;
            return Ok(match self.cli.trunc {
                Some(n) => qp.with_trunc(n),
                None => qp,
            });
        }
        Qp::parse(&src, DEFAULT_TRUNC, self.cli.trunc)
    }

    fn rep<F: Field>(&mut self, source: &RepSource) -> Result<Option<DecoratedRep<F>>> {
        let trunc = self.trunc();
        if let Some(spec) = &source.band {
            let (m, n) = spec
                .split_once(',')
                .and_then(|(m, n)| Some((m.trim().parse().ok()?, n.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("expected `m,n`, got `{spec}`")))?;
            let dt = catalog::double_triangle::<F>(trunc)?;
            return Ok(Some(catalog::band_rep(&dt, m, n)?));
        }
        if let Some(i) = source.a3 {
            let qp = catalog::a3::<F>(trunc)?;
            let all = catalog::a3_indecomposables(&qp)?;
            return all
                .get(i.wrapping_sub(1))
                .cloned()
                .map(Some)
                .ok_or_else(|| Error::InvalidParams(format!("A3 index {i} outside 1..=6")));
        }
        if let Some(path) = &source.rep {
            let qp = self.qp::<F>()?;
            let src = std::fs::read_to_string(path)?;
            return Ok(Some(parse_rep(&qp, &src)?));
        }
        Ok(None)
    }
}

fn comment(out: &mut String, line: impl AsRef<str>) {
    for l in line.as_ref().lines() {
        let _ = writeln!(out, "# {l}");
    }
}

fn b_matrix_text<F: Field>(qp: &Qp<F>) -> String {
    let b = b_matrix(qp.quiver());
    let head: Vec<String> = b.vertices.iter().map(|v| format!("{v:>3}")).collect();
    format!("B-matrix (rows/cols {}):\n{b}", head.join(" ").trim())
}

fn show<F: Field>(qp: &Qp<F>) -> Output {
    let mut text = String::new();
    comment(&mut text, b_matrix_text(qp));
    let blocked = json::two_cycle_vertices(qp.quiver());
    if !blocked.is_empty() {
        comment(&mut text, format!("vertices on 2-cycles: {blocked:?}"));
    }
    text.push_str(&qp.to_text());
    Output {
        text,
        json: json::qp_value(qp),
        warnings: vec![],
    }
}

fn mutation_text<F: Field>(m: &MutationResult<F>, out: &mut String) {
    comment(out, format!("mutation at {}", m.vertex));
    comment(
        out,
        format!(
            "premutated potential: {}",
            format_series(m.premutation.qp.potential().series())
        ),
    );
    let pairs = m.reduction.trivial_pair_names();
    if pairs.is_empty() {
        comment(out, "trivial pairs: none");
    } else {
        let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        comment(out, format!("trivial pairs: {}", shown.join(" ")));
    }
}

fn degenerate_warning<F: Field>(m: &MutationResult<F>) -> Option<String> {
    m.degenerate.then(|| {
        format!(
            "warning: mutation at {} produced oriented 2-cycles; blocked vertices {:?}",
            m.vertex,
            json::two_cycle_vertices(m.mutated.quiver())
        )
    })
}

fn with_random<F: Field>(qp: Qp<F>, random: Option<usize>, seed: u64) -> Result<Qp<F>> {
    match random {
        Some(d) => random_potential::<F>(qp.quiver(), d, qp.trunc(), seed),
        None => Ok(qp),
    }
}

fn dims_output(kind: &str, r: &DimReport) -> Output {
    Output {
        text: format!("{kind} dimensions (char {})\n{r}\n", r.characteristic),
        json: json::dims_value(kind, r),
        warnings: vec![],
    }
}

fn run_typed<F: Field>(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let mut ctx = Ctx { cli, stdin };
    match &cli.command {
        Command::Show => Ok(show(&ctx.qp::<F>()?)),
        Command::Mutate { k, random } => {
            let qp = with_random(ctx.qp::<F>()?, *random, cli.seed)?;
            let m = mutate(&qp, *k)?;
            let mut text = String::new();
            mutation_text(&m, &mut text);
            text.push_str(&m.mutated.to_text());
            Ok(Output {
                text,
                json: json::mutation_value(&m),
                warnings: degenerate_warning(&m).into_iter().collect(),
            })
        }
        Command::Seq { k, random } => {
            let qp = with_random(ctx.qp::<F>()?, *random, cli.seed)?;
            let out = mutate_sequence(&qp, k)?;
            let mut text = String::new();
            let mut warnings = Vec::new();
            for m in &out.results {
                mutation_text(m, &mut text);
                warnings.extend(degenerate_warning(m));
            }
            let last = out.last().unwrap_or(&qp).clone();
            let steps: Vec<Value> = out.results.iter().map(json::mutation_value).collect();
            let halt = out
                .halt
                .as_ref()
                .map(|h| json!({ "step": h.step, "vertex": h.vertex, "reason": h.reason }));
            if let Some(h) = &out.halt {
                return Err(Failure {
                    status: 3,
                    message: format!(
                        "halted at step {} (vertex {}): {}",
                        h.step, h.vertex, h.reason
                    ),
                });
            }
            text.push_str(&last.to_text());
            Ok(Output {
                text,
                json: json!({ "schema": json::SCHEMA, "steps": steps, "halt": halt, "qp": json::qp_value(&last), "nondegenerate": out.nondegenerate() }),
                warnings,
            })
        }
        Command::Reduce => {
            let qp = ctx.qp::<F>()?;
            let r = split(&qp)?;
            let mut text = String::new();
            let pairs: Vec<String> = r
                .trivial_pair_names()
                .iter()
                .map(|(a, b)| format!("({a}, {b})"))
                .collect();
            comment(
                &mut text,
                format!(
                    "trivial pairs: {}",
                    if pairs.is_empty() {
                        "none".into()
                    } else {
                        pairs.join(" ")
                    }
                ),
            );
            comment(
                &mut text,
                format!(
                    "trivial part: {}",
                    format_series(r.split_potential.series())
                ),
            );
            if !r.pairing_full_rank {
                comment(&mut text, "reduced part still has 2-cycles");
            }
            text.push_str(&r.reduced.to_text());
            Ok(Output {
                text,
                json: json!({
                    "schema": json::SCHEMA,
                    "trivial_pairs": r.trivial_pair_names(),
                    "reduced": json::qp_value(&r.reduced),
                    "two_acyclic": r.reduced.quiver().is_two_acyclic(),
                }),
                warnings: vec![],
            })
        }
        Command::Jdim { at } => {
            let qp = ctx.qp::<F>()?;
            match at {
                Some(k) => Ok(dims_output(
                    &format!("jacobian e{k}..e{k}"),
                    &kk_dim(&qp, *k)?,
                )),
                None => Ok(dims_output("jacobian", &jacobian_dim(&qp))),
            }
        }
        Command::Defdim => Ok(dims_output(
            "deformation",
            &deformation_dim(&ctx.qp::<F>()?),
        )),
        Command::Rigid => {
            let qp = ctx.qp::<F>()?;
            let r = is_rigid(&qp);
            let jd = jacobian_dim(&qp);
            // First degree from which the Jacobian algebra vanishes.
            let stable_from = jd.dims.iter().rposition(|&d| d > 0).map_or(0, |i| i + 1);
            let witness = r.witness.as_ref().map(format_series);
            let text = if r.rigid {
                format!("rigid (stabilized at degree {stable_from})\n")
            } else if r.report.truncated_total() > 0 {
                format!(
                    "not rigid (deformation dim >= {}, witness {})\n",
                    r.report.truncated_total(),
                    witness.clone().unwrap_or_default()
                )
            } else {
                format!(
                    "undecided (no deformations up to degree {}, not stabilized)\n",
                    qp.trunc()
                )
            };
            let mut warnings = vec![];
            if F::characteristic() != 0 {
                warnings.push(format!(
                    "note: computed in characteristic {}",
                    F::characteristic()
                ));
            }
            Ok(Output {
                text,
                json: json!({
                    "schema": json::SCHEMA,
                    "rigid": r.rigid,
                    "stabilized": r.stabilized,
                    "stabilized_at": r.rigid.then_some(stable_from),
                    "deformation": json::dims_value("deformation", &r.report),
                    "witness": witness,
                }),
                warnings,
            })
        }
        Command::Repmutate {
            k,
            source,
            check,
            qp_out,
        } => {
            let rep = ctx
                .rep::<F>(source)?
                .ok_or_else(|| Error::InvalidParams("give --rep, --band or --a3".into()))?;
            let out = mutate_rep(&rep, *k)?;
            let mut text = String::new();
            comment(
                &mut text,
                format!("dims {} -> {}", rep.dim_vector(), out.dim_vector()),
            );
            let mut info = json!({
                "schema": json::SCHEMA,
                "vertex": k,
                "before": json::rep_value(&rep),
                "rep": json::rep_value(&out),
                "qp": json::qp_value(out.qp()),
            });
            if *check {
                let back = mutate_rep(&out, *k)?;
                let verdict = crate::mutation::find_signed_matching(rep.qp(), back.qp())?
                    .map(|phi| back.pullback(rep.qp(), &phi))
                    .transpose()?
                    .map(|pulled| crate::reps::is_isomorphic(&rep, &pulled))
                    .transpose()?;
                let word = match &verdict {
                    Some(v) if v.is_isomorphic() => "isomorphic",
                    Some(v) if v.is_proved_non_isomorphic() => "not isomorphic",
                    Some(_) => "no isomorphism found",
                    None => "QPs not identified",
                };
                comment(&mut text, format!("mutating back at {k}: {word}"));
                info["involution"] = json!(word);
            }
            text.push_str(&format_rep(&out));
            if let Some(p) = qp_out {
                std::fs::write(p, out.qp().to_text()).map_err(Error::from)?;
            }
            Ok(Output {
                text,
                json: info,
                warnings: vec![],
            })
        }
        Command::Validate { source } => {
            if source.rep.is_none() && source.band.is_none() && source.a3.is_none() {
                let qp = ctx.qp::<F>()?;
                let mut text = format!(
                    "valid QP: {} vertices, {} arrows, {} potential terms\n",
                    qp.quiver().vertices().len(),
                    qp.quiver().num_arrows(),
                    qp.potential().series().len()
                );
                if !qp.quiver().is_two_acyclic() {
                    text.push_str("note: quiver has oriented 2-cycles\n");
                }
                return Ok(Output {
                    text,
                    json: json!({ "schema": json::SCHEMA, "valid": true, "two_acyclic": qp.quiver().is_two_acyclic(), "reduced": qp.is_reduced() }),
                    warnings: vec![],
                });
            }
            let rep = ctx.rep::<F>(source)?.expect("a source was given");
            match rep.validate() {
                Ok(()) => Ok(Output {
                    text: format!("valid representation, dims {}\n", rep.dim_vector()),
                    json: json!({ "schema": json::SCHEMA, "valid": true, "rep": json::rep_value(&rep) }),
                    warnings: vec![],
                }),
                Err(v) => Err(Failure {
                    status: 1,
                    message: format!("invalid representation: {v}"),
                }),
            }
        }
        Command::Catalog { name, n, coeffs } => {
            let Some(name) = name else {
                let mut text = String::new();
                for e in catalog::ENTRIES {
                    let _ = writeln!(text, "{:<16} {:<20} {}", e.name, e.params, e.description);
                }
                let entries: Vec<Value> = catalog::ENTRIES
                    .iter()
                    .map(|e| json!({ "name": e.name, "params": e.params, "description": e.description }))
                    .collect();
                return Ok(Output {
                    text,
                    json: json!({ "schema": json::SCHEMA, "entries": entries }),
                    warnings: vec![],
                });
            };
            let params = Params {
                n: *n,
                coeffs: coeffs
                    .as_ref()
                    .map(|cs| {
                        cs.iter()
                            .map(|c| F::parse(c.trim()))
                            .collect::<Result<Vec<_>>>()
                    })
                    .transpose()?,
            };
            let qp = catalog::make_qp::<F>(name, &params, ctx.trunc())?;
            Ok(Output {
                text: qp.to_text(),
                json: json::qp_value(&qp),
                warnings: vec![],
            })
        }
        Command::Serve { port, host, load } => {
            let (name, qp) = if cli.input.is_some() {
                ("custom".to_string(), ctx.qp::<F>()?)
            } else {
                (
                    load.clone(),
                    catalog::make_qp::<F>(load, &Params::default(), ctx.trunc())?,
                )
            };
            let mut session = serve::Session::new(name, qp, cli.seed);
            let server = serve::bind(host, *port)?;
            eprintln!("serving on http://{}", server.server_addr());
            serve::serve(&server, &mut session, cli.save.as_ref());
            Ok(Output::default())
        }
    }
}

macro_rules! dispatch_prime {
    ($p:expr, $cli:expr, $stdin:expr; $($q:literal),*) => {
        match $p {
            $($q => run_typed::<Fp<$q>>($cli, $stdin),)*
            other => Err(Failure { status: 2, message: format!("unsupported prime {other}") }),
        }
    };
}

fn run_cli(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    match cli.field {
        FieldChoice::Rational => run_typed::<Rational>(cli, stdin),
        FieldChoice::Prime(p) => {
            dispatch_prime!(p, cli, stdin; 2, 3, 5, 7, 11, 13, 101, 32003, 2147483647)
        }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if status == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return status;
        }
    };
    match run_cli(&cli, stdin) {
        Ok(out) => {
            for w in &out.warnings {
                let _ = writeln!(stderr, "{w}");
            }
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json if out.json.is_null() => String::new(),
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&out.json).expect("json")
                ),
            };
            if let Some(path) = &cli.save {
                if !matches!(cli.command, Command::Serve { .. }) {
                    if let Err(e) = std::fs::write(path, &body) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
            }
            let _ = write!(stdout, "{body}");
            0
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.status
        }
    }
}

/// Runs a command line against an in-memory standard input and returns
/// `(status, stdout, stderr)`.
pub fn run_captured(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = run(args.iter().copied(), &mut input, &mut out, &mut err);
    (
        status,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpmut(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut full = vec!["qpmut"];
        full.extend_from_slice(args);
        run_captured(&full, stdin)
    }

    #[test]
    fn field_flag() {
        assert_eq!(parse_field("q"), Ok(FieldChoice::Rational));
        assert_eq!(parse_field("fp:7"), Ok(FieldChoice::Prime(7)));
        assert!(parse_field("fp:8").is_err());
        assert!(parse_field("r").is_err());
    }

    #[test]
    fn catalog_then_sequence() {
        let (status, four, _) = qpmut(&["catalog", "four_cycle"], "");
        assert_eq!(status, 0);
        let (status, out, err) = qpmut(&["seq", "-k", "2,3"], &four);
        assert_eq!(status, 0, "{err}");
        assert!(out.contains("potential: 0"));
        assert!(out.contains("b: 2 -> 3"));
    }

    #[test]
    fn degenerate_pipeline() {
        let (_, tri, _) = qpmut(
            &[
                "catalog",
                "cyclic_triangle",
                "--coeffs",
                "0,1",
                "--trunc",
                "8",
            ],
            "",
        );
        let (status, mu, err) = qpmut(&["mutate", "-k", "2"], &tri);
        assert_eq!(status, 0);
        assert!(err.contains("2-cycles"));
        let (status, _, err) = qpmut(&["mutate", "-k", "1"], &mu);
        assert_eq!(status, 3);
        assert!(err.contains("2-cycle"));
    }

    #[test]
    fn invalid_input_exits_nonzero() {
        assert_eq!(qpmut(&["show"], "a: 1 -> \n").0, 1);
        assert_eq!(qpmut(&["show"], "a: 1 -> 1\n").0, 1);
        assert_eq!(qpmut(&["catalog", "nothing"], "").0, 1);
        assert_eq!(qpmut(&["bogus"], "").0, 2);
        assert_eq!(qpmut(&["--field", "fp:4", "show"], "").0, 2);
    }

    #[test]
    fn json_output_has_schema() {
        let (status, out, _) = qpmut(&["--format", "json", "catalog", "double_triangle"], "");
        assert_eq!(status, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["b_matrix"][0], json!([0, -2, 2]));
        let (status, out, _) = qpmut(&["--format", "json", "show"], &out);
        assert_eq!(status, 0, "structured input is accepted");
        assert_eq!(serde_json::from_str::<Value>(&out).unwrap(), v);
    }

    #[test]
    fn rigidity_report() {
        let (_, tri, _) = qpmut(&["catalog", "cyclic_triangle", "--trunc", "9"], "");
        let (status, out, _) = qpmut(&["rigid"], &tri);
        assert_eq!(status, 0);
        assert_eq!(out, "rigid (stabilized at degree 2)\n");
        let (_, sq, _) = qpmut(
            &[
                "catalog",
                "cyclic_triangle",
                "--coeffs",
                "0,1",
                "--trunc",
                "9",
            ],
            "",
        );
        let (_, out, _) = qpmut(&["rigid"], &sq);
        assert!(out.starts_with("not rigid"), "{out}");
    }

    #[test]
    fn representation_commands() {
        let (status, out, err) = qpmut(&["repmutate", "-k", "2", "--band", "2,1", "--check"], "");
        assert_eq!(status, 0, "{err}");
        assert!(
            out.contains("((2,0),(3,0),(1,0)) -> ((2,0),(1,0),(1,0))"),
            "{out}"
        );
        assert!(out.contains("mutating back at 2: isomorphic"), "{out}");
        let (status, out, _) = qpmut(&["validate", "--a3", "6"], "");
        assert_eq!(status, 0);
        assert!(out.starts_with("valid representation"));
        let dir = std::env::temp_dir().join(format!("qpmut-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let rep = dir.join("bad.rep");
        std::fs::write(&rep, "vertex 1: m=1\nvertex 2: m=1\nvertex 3: m=1\narrow a: 1x1 = 1\narrow b: 1x1 = 1\narrow c: 1x1 = 1\n").unwrap();
        let (_, tri, _) = qpmut(&["catalog", "cyclic_triangle"], "");
        let (status, _, err) = qpmut(&["validate", "--rep", rep.to_str().unwrap()], &tri);
        assert_eq!(status, 1);
        assert!(err.contains("invalid representation"));
    }

    #[test]
    fn prime_field_runs() {
        let (_, four, _) = qpmut(&["--field", "fp:101", "catalog", "four_cycle"], "");
        let (status, out, _) = qpmut(&["--field", "fp:101", "jdim"], &four);
        assert_eq!(status, 0);
        assert!(out.contains("char 101"));
    }
}
