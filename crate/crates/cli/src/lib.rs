//! Command-line front end for the `qcuntz` verification suites.
//!
//! [`run`] parses arguments, runs one subcommand and writes its report.
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 for
//! configuration errors (bad flags, unparsable `q`, a `q` outside the range
//! a command needs).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcuntz::scalars::{ExactField, Field, FloatField, GaussQ, ScalarError, ScalarMode};
use qcuntz::star_algebra::{gram_matrix, parse_expression, AlgebraError, Family, RewriteSystem, StarPolynomial};
use qcuntz::transforms::{roundtrip_defect, s_alphabet, PartialSumSpec};
use qcuntz::verification::{
    defect_norm_suite, fock_vacuum_suite, gram_suite, lemma_suite, qcun_suite, roundtrip_suite, transport_suite, wild_suite,
    Functor, VerificationError, VerificationReport, CLOSED_FORM_TOL, MODEL_TOL,
};
use serde_json::{json, Value};
use thiserror::Error;

/// Environment variable naming a directory that receives a copy of every
/// report as `<command>.json` or `<command>.txt`.
pub const REPORT_DIR_ENV: &str = "QCUNTZ_REPORT_DIR";

/// Largest accepted series order.
pub const MAX_ORDER: usize = 12;

const AFTER_HELP: &str = "\
Exit codes: 0 all checks pass, 1 a check fails, 2 configuration error.
q is exact text: 1/2, -3/5, 0.9, (3+4i)/5. Without --q, wild-check and
intertwine use q = 1 and the other commands q = 0. Tolerances default to
1e-12 for closed-form identities and 1e-10 for matrix models.
Set QCUNTZ_REPORT_DIR to also write each report to <dir>/<command>.<json|txt>.";

#[derive(Debug, Parser)]
#[command(name = "qcuntz", version, about = "Exact and truncated-matrix checks for deformed Cuntz relations", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub session: Session,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Session {
    /// Deformation parameter as exact text.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Scalar arithmetic.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numeric tolerance [default: 1e-12 closed forms, 1e-10 models].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    NormalForm {
        /// Relation family: toeplitz, deformed, qcommuting, cuntz, oinf:K.
        #[arg(long, default_value = "deformed", value_parser = parse_family)]
        rel: Family,
        /// Expression such as "s2* s1 s1* s2".
        expr: String,
    },
    /// Gram matrix of the deformed Fock space and its positivity.
    Gram {
        /// Largest word length.
        #[arg(long, default_value_t = 3)]
        level: usize,
    },
    /// The pair identities and the partial-sum identities up to an order.
    Lemmas {
        /// Largest series order N.
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Round trip through the two pairs at one order.
    Roundtrip {
        /// Series order N.
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Relations of the block model built from a Fock O_∞ input.
    QcunCheck {
        /// Number L of block rows.
        #[arg(long, default_value_t = 6)]
        level: usize,
        /// Number k of O_∞ generators.
        #[arg(long, default_value_t = 6)]
        k: usize,
        /// Word length L' of the O_∞ Fock input.
        #[arg(long, default_value_t = 2)]
        fock_level: usize,
    },
    /// Relations and isometry norms of the q-commuting construction.
    WildCheck {
        /// Level L of the dyadic Cuntz pair.
        #[arg(long, default_value_t = 5)]
        level: usize,
        /// Size M of the shift factor.
        #[arg(long, default_value_t = 6)]
        m: usize,
        /// Diagonal of C, repeated cyclically.
        #[arg(long, default_value = "3/5,4/5")]
        c: String,
        /// Random sample vectors in addition to the lowest basis vector.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Transport random intertwiners through the functors.
    Intertwine {
        #[arg(long, value_enum, default_value_t = FunctorArg::All)]
        functor: FunctorArg,
        /// Random intertwiners in total.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FunctorArg {
    Cun,
    FreeProduct,
    Wild,
    All,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::NormalForm { .. } => "normal-form",
            Command::Gram { .. } => "gram",
            Command::Lemmas { .. } => "lemmas",
            Command::Roundtrip { .. } => "roundtrip",
            Command::QcunCheck { .. } => "qcun-check",
            Command::WildCheck { .. } => "wild-check",
            Command::Intertwine { .. } => "intertwine",
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "toeplitz" | "cuntz-toeplitz" => Ok(Family::CuntzToeplitz2),
        "deformed" => Ok(Family::DeformedCuntz2),
        "qcommuting" | "q-commuting" => Ok(Family::QCommuting2),
        "cuntz" => Ok(Family::Cuntz2),
        _ => {
            let k = s.strip_prefix("oinf:").ok_or_else(|| format!("unknown relation family {s:?}"))?;
            let k: u16 = k.parse().map_err(|_| format!("bad generator count in {s:?}"))?;
            if k == 0 {
                return Err("oinf needs at least one generator".into());
            }
            Ok(Family::OInfinity(k))
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Verification(#[from] VerificationError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// What a subcommand produced.
pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    pub result: Option<Value>,
    /// Plain text printed instead of the reports in text format.
    pub text: Option<String>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

/// Resolved session settings, recorded in every JSON report.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub q_text: String,
    pub q: GaussQ,
    pub mode: ScalarMode,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl SessionConfig {
    fn resolve(session: &Session, command: &Command) -> Result<Self, CliError> {
        let unit = matches!(command, Command::WildCheck { .. } | Command::Intertwine { .. });
        let q_text = session.q.clone().unwrap_or_else(|| if unit { "1" } else { "0" }.into());
        let q: GaussQ = q_text.parse()?;
        if let Some(t) = session.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Config(format!("tolerance must be a nonnegative number, got {t}")));
            }
        }
        let mode = match session.mode {
            Mode::Exact => ScalarMode::Exact,
            Mode::Float => ScalarMode::Float,
        };
        Ok(SessionConfig { q_text, q, mode, tol: session.tol, seed: session.seed })
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// `|q|` compared with 1, exactly.
    fn modulus_class(&self) -> std::cmp::Ordering {
        ExactField::new(self.q.clone()).q_modulus_class().cmp(&0)
    }
}

fn require(cfg: &SessionConfig, command: &Command) -> Result<(), CliError> {
    use std::cmp::Ordering::*;
    let need_disk = match command {
        Command::NormalForm { rel, .. } => {
            (*rel == Family::DeformedCuntz2).then_some(true).or((*rel == Family::QCommuting2).then_some(false))
        }
        Command::Gram { .. } | Command::Lemmas { .. } | Command::Roundtrip { .. } | Command::QcunCheck { .. } => Some(true),
        Command::WildCheck { .. } => Some(false),
        Command::Intertwine { functor, .. } => matches!(functor, FunctorArg::Wild | FunctorArg::All).then_some(false),
    };
    match (need_disk, cfg.modulus_class()) {
        (Some(true), Less) | (Some(false), Equal) | (None, _) => {}
        (Some(true), _) => return Err(CliError::Config(format!("{} needs |q| < 1, got q = {}", command.name(), cfg.q))),
        (Some(false), _) => return Err(CliError::Config(format!("{} needs |q| = 1, got q = {}", command.name(), cfg.q))),
    }
    let order = match command {
        Command::Lemmas { order } | Command::Roundtrip { order } => Some(*order),
        _ => None,
    };
    if let Some(n) = order.filter(|&n| n > MAX_ORDER) {
        return Err(CliError::Config(format!("order {n} exceeds the cap {MAX_ORDER}")));
    }
    Ok(())
}

fn execute<F: Field>(field: &F, cfg: &SessionConfig, command: &Command) -> Result<Outcome, CliError> {
    let closed = cfg.tol(CLOSED_FORM_TOL);
    let model = cfg.tol(MODEL_TOL);
    let only = |r: VerificationReport| Outcome { reports: vec![r], result: None, text: None };
    Ok(match command {
        Command::NormalForm { rel, expr } => {
            let rs = RewriteSystem::new(*rel, field)?;
            let p = parse_expression(expr, rs.alphabet(), field)?;
            let nf = rs.normal_form(&p).display(rs.alphabet()).to_string();
            Outcome {
                reports: vec![],
                result: Some(json!({ "family": rel.to_string(), "input": expr, "normal_form": nf })),
                text: Some(format!("{nf}\n")),
            }
        }
        Command::Gram { level } => {
            let rs = RewriteSystem::new(Family::DeformedCuntz2, field)?;
            let g = gram_matrix(*level, &rs)?;
            let render = |c: &F::Elem| StarPolynomial::constant(c.clone()).display(rs.alphabet()).to_string();
            let entries: Vec<Vec<String>> = g.entries.iter().map(|row| row.iter().map(render).collect()).collect();
            let result = json!({ "labels": g.labels(rs.alphabet()), "entries": entries });
            Outcome { reports: vec![gram_suite(field, *level, closed)?], result: Some(result), text: None }
        }
        Command::Lemmas { order } => Outcome {
            reports: vec![lemma_suite(field, *order, closed)?, defect_norm_suite(field, *order, closed)?],
            result: None,
            text: None,
        },
        Command::Roundtrip { order } => {
            let d = roundtrip_defect(field, PartialSumSpec::new(*order))?;
            let defect = d.display(&s_alphabet()).to_string();
            let mut reports = vec![roundtrip_suite(field, *order, closed)?];
            reports.push(fock_vacuum_suite(field, 6, (*order).min(4), closed)?);
            Outcome { reports, result: Some(json!({ "order": order, "defect": defect })), text: None }
        }
        Command::QcunCheck { level, k, fock_level } => only(qcun_suite(field, *k, *fock_level, *level, closed, model)?),
        Command::WildCheck { level, m, c, samples } => {
            let pattern =
                c.split(',').map(|t| Ok(field.gauss(&t.trim().parse::<GaussQ>()?))).collect::<Result<Vec<_>, ScalarError>>()?;
            only(wild_suite(field, *level, *m, &pattern, *samples, cfg.seed, closed)?)
        }
        Command::Intertwine { functor, samples } => {
            let functors: Vec<Functor> = match functor {
                FunctorArg::Cun => vec![Functor::Cun],
                FunctorArg::FreeProduct => vec![Functor::FreeProduct],
                FunctorArg::Wild => vec![Functor::Wild],
                FunctorArg::All => vec![Functor::Cun, Functor::FreeProduct, Functor::Wild],
            };
            let per = functors.len();
            let mut reports = vec![];
            for (i, f) in functors.into_iter().enumerate() {
                // split the samples as evenly as possible, earlier functors first
                let n = samples / per + usize::from(i < samples % per);
                reports.push(transport_suite(field, f, n, cfg.seed.wrapping_add(i as u64), closed)?);
            }
            Outcome { reports, result: None, text: None }
        }
    })
}

fn render(outcome: &Outcome, cfg: &SessionConfig, command: &Command, format: Format) -> String {
    match format {
        Format::Text => {
            if let Some(t) = &outcome.text {
                return t.clone();
            }
            let mut out = String::new();
            for r in &outcome.reports {
                out.push_str(&r.to_text());
            }
            if let Some(res) = outcome.result.as_ref().and_then(|v| v.get("defect")) {
                out.push_str(&format!("defect: {}\n", res.as_str().unwrap_or_default()));
            }
            out.push_str(&format!("overall: {}\n", if outcome.pass() { "PASS" } else { "FAIL" }));
            out
        }
        Format::Json => {
            let mut v = json!({
                "tool": "qcuntz",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command.name(),
                "config": {
                    "q": cfg.q_text,
                    "mode": cfg.mode,
                    "seed": cfg.seed,
                    "tolerance": {
                        "closed_form": cfg.tol(CLOSED_FORM_TOL),
                        "model": cfg.tol(MODEL_TOL),
                    },
                },
                "pass": outcome.pass(),
                "reports": outcome.reports,
            });
            if let Some(r) = &outcome.result {
                v["result"] = r.clone();
            }
            let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

fn write_file(path: &std::path::Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match run_cli(&cli, stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Runs a parsed command; `Ok(pass)` on completion.
pub fn run_cli(cli: &Cli, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = SessionConfig::resolve(&cli.session, &cli.command)?;
    require(&cfg, &cli.command)?;
    let outcome = match cfg.mode {
        ScalarMode::Exact => execute(&ExactField::new(cfg.q.clone()), &cfg, &cli.command)?,
        ScalarMode::Float => execute(&FloatField::new(cfg.q.to_complex()), &cfg, &cli.command)?,
    };
    let body = render(&outcome, &cfg, &cli.command, cli.session.format);
    match &cli.session.out {
        Some(path) => write_file(path, &body)?,
        None => stdout.write_all(body.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })?,
    }
    if let Some(dir) = std::env::var_os(REPORT_DIR_ENV) {
        let ext = match cli.session.format {
            Format::Json => "json",
            Format::Text => "txt",
        };
        let dir = PathBuf::from(dir);
        std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        write_file(&dir.join(format!("{}.{ext}", cli.command.name())), &body)?;
    }
    Ok(outcome.pass())
}
