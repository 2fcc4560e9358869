use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use posmap_core::forms::{
    self, decomposability_certificate, non_extremality_certificate, proof_replay_q41, qi_hou_form, scan_biquadratic,
    verify_identity, Identity, ScanOptions,
};
use posmap_core::span::{span_report, ScanParams};
use posmap_core::{qi_hou_map, Error};
use serde_json::{json, Value};

mod render;

#[derive(Parser)]
#[command(name = "posmap", version, about = "Positive maps, biquadratic forms and entanglement witnesses")]
struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for scans (default: all cores).
    #[arg(long, env = "POSMAP_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Cyclic maps Φ(n,k)(A) = diag(b) − A.
    #[command(subcommand)]
    Map(MapCommand),
    /// Biquadratic forms.
    #[command(subcommand)]
    Form(FormCommand),
    /// Exact polynomial identities; exit 1 with the residual when one fails.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Decomposition certificates.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Symbolic replay of a proof computation.
    #[command(subcommand)]
    Replay(ReplayCommand),
    /// Numerical scans (evidence only).
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Re-check a certificate document from scratch.
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum MapCommand {
    /// Choi blocks, Choi matrix and witness W = C/n.
    Build { n: usize, k: usize },
    /// Complete positivity and copositivity with exact evidence.
    Classify { n: usize, k: usize },
}

#[derive(Subcommand)]
enum FormCommand {
    /// The form yᵀ Φ(n,k)(x xᵀ) y.
    Build { n: usize, k: usize },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// O′(xz², xyw, zw², xzw) = x⁴z⁶w⁶ O.
    OcticPrime,
    /// Q(zw³, xyw², yzw², xw³, xyzw, w⁴) = w⁸ O′.
    SenaryPrime,
    /// Rotation invariance of the size-4 shift-1 form.
    Cyclic,
    /// O(y², y, z, w) expansion.
    OcticSlice,
    /// Q(s, t, t, s, s, t) = 2(s² − t²)².
    SenaryDiagonal,
    /// Form of shift k | n as block terms plus cross squares.
    DivisorSplit { n: usize, k: usize },
    /// Block d renamed onto n/k variables is the reduced cyclic form.
    BlockRename { n: usize, k: usize, d: usize },
    /// μ carries the form of shift gcd(n, q) to the form of shift q.
    Mu { n: usize, q: usize },
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Sum of ≥ 2 non-proportional positive summands (needs gcd(n, q) ≥ 2).
    NonExtremal {
        n: usize,
        q: usize,
        #[command(flatten)]
        scan: EvidenceArgs,
    },
    /// W = P + Q^Γ with P, Q ⪰ 0 for shift n/2 (n even).
    Decomposable { n: usize },
}

#[derive(Args)]
struct EvidenceArgs {
    /// Restarts of the nonnegativity scan run on every summand.
    #[arg(long, default_value_t = 1000)]
    scan_restarts: usize,
    #[arg(long, default_value_t = 0)]
    scan_seed: u64,
    #[arg(long, default_value_t = forms::DEFAULT_TOL)]
    scan_tol: f64,
    /// Skip the numerical evidence.
    #[arg(long)]
    no_scan: bool,
}

#[derive(Subcommand)]
enum ReplayCommand {
    /// Discriminant argument for the senary quartic Q.
    Q41,
}

#[derive(Subcommand)]
enum ScanCommand {
    /// Rank of the span of zero product vectors of the witness.
    Spanning {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        zero_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        rank_tol: f64,
        /// Scan the partial transpose W^Γ.
        #[arg(long)]
        gamma: bool,
        /// Real starting points only.
        #[arg(long)]
        real: bool,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long, default_value_t = 1000)]
        polish_steps: usize,
    },
    /// Minimum of the form over unit x and y.
    Nonneg {
        n: usize,
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = forms::DEFAULT_TOL)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidCertificate(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// JSON payload, text rendering, and whether the command verified.
struct Outcome {
    json: Value,
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, ok: true }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn with_schema(schema: &str, mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), Value::String(schema.into()));
    }
    value
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    Ok(match &cli.command {
        Command::Map(MapCommand::Build { n, k }) => {
            let map = qi_hou_map(*n, *k)?;
            let (choi, witness) = map.choi_and_witness();
            let json = json!({
                "schema": "posmap.map.v1", "n": n, "k": k,
                "map": to_value(&map), "choi": to_value(&choi), "witness": to_value(&witness),
            });
            Outcome::ok(json, render::map(*n, *k, &map, &witness))
        }
        Command::Map(MapCommand::Classify { n, k }) => {
            let class = qi_hou_map(*n, *k)?.classify();
            let text = render::classification(*n, *k, &class);
            Outcome::ok(with_schema("posmap.classification.v1", json!({"n": n, "k": k, "classification": to_value(&class)})), text)
        }
        Command::Form(FormCommand::Build { n, k }) => {
            let form = qi_hou_form(*n, *k)?;
            let json = json!({
                "schema": "posmap.form.v1", "n": n, "k": k,
                "variables": form.registry().names(), "form": form.to_string(),
            });
            Outcome::ok(json, form.to_string())
        }
        Command::Verify(v) => {
            let identity = match *v {
                VerifyCommand::OcticPrime => Identity::OcticPrimePullback,
                VerifyCommand::SenaryPrime => Identity::SenaryPullback,
                VerifyCommand::Cyclic => Identity::Cyclic,
                VerifyCommand::OcticSlice => Identity::OcticSlice,
                VerifyCommand::SenaryDiagonal => Identity::SenaryDiagonal,
                VerifyCommand::DivisorSplit { n, k } => Identity::DivisorSplit { n, k },
                VerifyCommand::BlockRename { n, k, d } => Identity::BlockRename { n, k, d },
                VerifyCommand::Mu { n, q } => Identity::MuIntertwine { n, q },
            };
            let check = verify_identity(identity)?;
            let residuals: Vec<Value> = check
                .residuals
                .iter()
                .map(|(label, r)| json!({"label": label, "residual": r.to_string()}))
                .collect();
            let json = json!({
                "schema": "posmap.identity.v1", "identity": identity.to_string(),
                "holds": check.holds(), "residuals": residuals,
            });
            let text = render::identity(&check);
            Outcome { json, text, ok: check.holds() }
        }
        Command::Certify(CertifyCommand::NonExtremal { n, q, scan }) => {
            let opts = ScanOptions {
                restarts: scan.scan_restarts,
                seed: scan.scan_seed,
                tol: scan.scan_tol,
                ..ScanOptions::default()
            };
            let cert = non_extremality_certificate(*n, *q, (!scan.no_scan).then_some(&opts))?;
            let text = render::decomposition(&cert);
            Outcome::ok(to_value(&cert), text)
        }
        Command::Certify(CertifyCommand::Decomposable { n }) => {
            let cert = decomposability_certificate(*n)?;
            let text = render::decomposability(&cert);
            Outcome::ok(to_value(&cert), text)
        }
        Command::Replay(ReplayCommand::Q41) => {
            let report = proof_replay_q41()?;
            let text = render::replay(&report);
            Outcome::ok(with_schema("posmap.replay.v1", to_value(&report)), text)
        }
        Command::Scan(ScanCommand::Spanning { n, k, restarts, seed, zero_tol, rank_tol, gamma, real, max_iters, polish_steps }) => {
            let params = ScanParams {
                restarts: *restarts,
                seed: *seed,
                zero_tol: *zero_tol,
                rank_tol: *rank_tol,
                max_iters: *max_iters,
                polish_steps: *polish_steps,
                complex: !real,
                ..ScanParams::default()
            };
            let w = qi_hou_map(*n, *k)?.witness();
            let report = span_report(&w, &params, *gamma)?;
            let mut json = with_schema("posmap.span.v1", to_value(&report));
            json["k"] = json!(k);
            json["note"] = json!("sampling evidence: a rank below n² does not prove the absence of spanning");
            let text = render::span(*k, &report);
            Outcome::ok(json, text)
        }
        Command::Scan(ScanCommand::Nonneg { n, k, restarts, seed, tol }) => {
            let form = qi_hou_form(*n, *k)?;
            let opts = ScanOptions {
                restarts: *restarts,
                seed: *seed,
                tol: *tol,
                probes: vec![vec![1.0; 2 * n]],
                ..ScanOptions::default()
            };
            let scan = scan_biquadratic(&form, &opts)?;
            let text = render::nonneg(*n, *k, &scan);
            let json = with_schema("posmap.nonneg.v1", json!({"n": n, "k": k, "scan": to_value(&scan)}));
            Outcome::ok(json, text)
        }
        Command::Validate { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let cert = forms::validate(&text).map_err(|e| Failure::Check(e.to_string()))?;
            Outcome::ok(
                json!({"schema": "posmap.validation.v1", "valid": true, "certificate": cert.schema()}),
                format!("valid {}", cert.schema()),
            )
        }
    })
}

fn emit(cli: &Cli, outcome: &Outcome) -> std::io::Result<()> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("json") + "\n",
        Format::Text => outcome.text.clone() + "\n",
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed:\n{}", outcome.text);
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("invalid: {msg}");
            ExitCode::from(1)
        }
    }
}
