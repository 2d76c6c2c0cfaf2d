//! Command-line front end. Every command produces a [`RunReport`]; exit
//! code 0 means every check passed, 1 a check failed with a witness, 2 the
//! input could not be read or violates an invariant.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::complexes::{betti_vec, homology_dims, omega_homology_dims, BettiNumbers, ChainComplex};
use crate::format::{parse, AnyComplex, CellDoc, ComplexDoc, ComplexInput, CycleDoc, FormatError, MapInput, WangDoc};
use crate::hofer::{
    hofer_norm, sigma_gate, Quadrature, SampledHamiltonian, SigmaThresholds, Threshold, DEFAULT_SNAP_DENOMINATOR,
};
use crate::models;
use crate::morse::{build_morse_complex, MorseData, MorseError};
use crate::omega::Exponent;
use crate::random::random_wang_instance;
use crate::seidel::{
    corollary2_injectivity, run_dataset, theorem1_checks, theorem1_verdict, CheckOutcome, Corollary2Verdict, Dataset,
    Theorem1Verdict,
};
use crate::wang::{
    build_wang, monodromy_trivial_direct_with, monodromy_trivial_via_i_with, verify_wang_exactness_with, WangComplex,
};

#[derive(Debug, Parser)]
#[command(
    name = "monodromy-lab",
    version,
    about = "Morse complexes, Wang cones and filtered section maps over Z2"
)]
pub struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for batch modes.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Overrides the epsilon of every moduli table, as p/q.
    #[arg(long, global = true)]
    pub epsilon: Option<Exponent>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discrete Morse complexes of cell complexes with matchings.
    Morse {
        #[command(subcommand)]
        action: MorseAction,
    },
    /// Betti numbers of a chain complex or a cell complex.
    Homology { file: PathBuf },
    /// The mapping cone of `phi + phi_g` and the monodromy verdicts.
    Wang {
        #[command(subcommand)]
        action: WangAction,
    },
    /// Filtered section maps built from moduli tables.
    Seidel {
        #[command(subcommand)]
        action: SeidelAction,
    },
    /// Hofer norm of a sampled Hamiltonian.
    Hofer(HoferArgs),
    /// Energy gate, algebraic identities and the monodromy verdict.
    Pipeline(PipelineArgs),
    /// Runs the bundled model suite and a seeded random batch.
    Selftest {
        /// Random Wang instances in the batch.
        #[arg(long, default_value_t = 50)]
        instances: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum MorseAction {
    /// Builds the Morse complex; a bad matching is an input error.
    Build { file: PathBuf },
    /// Checks the matching and compares Morse with cellular homology.
    Check { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct WangInputs {
    /// One document holding minus, plus, phi and phi_g.
    #[arg(long, conflicts_with_all = ["minus", "plus", "phi", "phig"])]
    pub wang: Option<PathBuf>,
    #[arg(long, requires_all = ["plus", "phi", "phig"])]
    pub minus: Option<PathBuf>,
    #[arg(long)]
    pub plus: Option<PathBuf>,
    #[arg(long)]
    pub phi: Option<PathBuf>,
    #[arg(long)]
    pub phig: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum WangAction {
    Build(WangInputs),
    Verdict(WangInputs),
    Exactness(WangInputs),
}

#[derive(Debug, Subcommand)]
pub enum SeidelAction {
    /// Builds every map of a dataset and checks the homotopy identities.
    Verify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        complex: PathBuf,
        /// Restrict to one identity.
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
        lemma: Option<u8>,
        /// Replays the injectivity argument on a cycle.
        #[arg(long)]
        corollary2: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    Auto,
    Trapezoid,
    Simpson,
}

impl From<RuleArg> for Quadrature {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Auto => Quadrature::Auto,
            RuleArg::Trapezoid => Quadrature::Trapezoid,
            RuleArg::Simpson => Quadrature::Simpson,
        }
    }
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// Minimal sphere energy, or `inf`.
    #[arg(long = "sigma")]
    pub sigma_s: Option<Threshold>,
    /// Minimal disc energy, or `inf`.
    #[arg(long = "sigma-l")]
    pub sigma_l: Option<Threshold>,
    /// Generator of the disc period group of a rational Lagrangian.
    #[arg(long)]
    pub eta: Option<Exponent>,
}

impl GateArgs {
    fn thresholds(&self) -> Option<SigmaThresholds> {
        if self.sigma_s.is_none() && self.sigma_l.is_none() && self.eta.is_none() {
            return None;
        }
        Some(SigmaThresholds {
            sigma_s: self.sigma_s.clone(),
            sigma_l: self.sigma_l.clone(),
            eta: self.eta.clone(),
        })
    }
}

#[derive(Debug, Args)]
pub struct HoferArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = RuleArg::Auto)]
    pub rule: RuleArg,
    /// Denominator used to snap the norms to rationals.
    #[arg(long, default_value_t = DEFAULT_SNAP_DENOMINATOR)]
    pub snap: u64,
    #[command(flatten)]
    pub gate: GateArgs,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub hofer: PathBuf,
    #[command(flatten)]
    pub gate: GateArgs,
    #[arg(long)]
    pub wang: PathBuf,
    #[arg(long)]
    pub table: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub check: String,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub checks: Vec<CheckOutcome>,
    pub witnesses: Vec<WitnessRecord>,
    pub summary: Vec<String>,
    pub result: Value,
    /// SHA-256 of the report without timing.
    pub digest: String,
    pub timing_ms: f64,
}

impl RunReport {
    fn new(
        command: String,
        inputs: Vec<InputRecord>,
        checks: Vec<CheckOutcome>,
        summary: Vec<String>,
        result: Value,
    ) -> Self {
        let witnesses = checks
            .iter()
            .filter_map(|c| {
                c.witness.clone().map(|witness| WitnessRecord {
                    check: c.check.clone(),
                    witness,
                })
            })
            .collect();
        let mut r = Self {
            command,
            inputs,
            checks,
            witnesses,
            summary,
            result,
            digest: String::new(),
            timing_ms: 0.0,
        };
        r.digest = r.compute_digest();
        r
    }

    pub fn compute_digest(&self) -> String {
        let body = json!({
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "witnesses": self.witnesses,
            "summary": self.summary,
            "result": self.result,
        });
        hex::encode(Sha256::digest(body.to_string().as_bytes()))
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for i in &self.inputs {
            let _ = writeln!(s, "input:   {} (sha256 {})", i.path, &i.sha256[..16]);
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{}  {}  [{}]",
                if c.pass { "PASS" } else { "FAIL" },
                c.check,
                c.operation
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "      witness: {}", w);
            }
        }
        for line in &self.summary {
            let _ = writeln!(s, "{line}");
        }
        let _ = writeln!(s, "digest:  {}", self.digest);
        s
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

#[derive(Debug)]
struct InputError(String);

impl From<FormatError> for InputError {
    fn from(e: FormatError) -> Self {
        InputError(e.to_string())
    }
}

struct Session {
    inputs: Vec<InputRecord>,
    epsilon: Option<Exponent>,
}

impl Session {
    fn read(&mut self, path: &Path) -> Result<String, InputError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: cannot read: {e}", path.display())))?;
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        });
        Ok(text)
    }

    fn load<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, InputError> {
        let text = self.read(path)?;
        parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }

    fn dataset(&mut self, path: &Path) -> Result<Dataset, InputError> {
        let mut ds: Dataset = self.load(path)?;
        if let Some(eps) = &self.epsilon {
            for t in ds.tables.iter_mut() {
                t.energy_caps.epsilon = eps.clone();
            }
        }
        Ok(ds)
    }

    fn wang(&mut self, w: &WangInputs) -> Result<WangComplex, InputError> {
        let doc = match (&w.wang, &w.minus, &w.plus, &w.phi, &w.phig) {
            (Some(p), ..) => self.load::<WangDoc>(p)?,
            (None, Some(m), Some(p), Some(f), Some(g)) => WangDoc {
                minus: self.load::<ComplexInput>(m)?,
                plus: self.load::<ComplexInput>(p)?,
                phi: self.load::<MapInput>(f)?,
                phi_g: self.load::<MapInput>(g)?,
            },
            _ => {
                return Err(InputError(
                    "give --wang, or all of --minus --plus --phi --phig".to_string(),
                ))
            }
        };
        Ok(doc.resolve()?)
    }
}

type CommandOutput = (Vec<CheckOutcome>, Vec<String>, Value);

pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let mut session = Session {
        inputs: Vec::new(),
        epsilon: cli.epsilon.clone(),
    };
    let command = command_name(&cli.command);
    let result = match &cli.command {
        Command::Morse {
            action: MorseAction::Build { file },
        } => morse_build(&mut session, file),
        Command::Morse {
            action: MorseAction::Check { file },
        } => morse_check(&mut session, file),
        Command::Homology { file } => homology(&mut session, file),
        Command::Wang { action } => wang(&mut session, action),
        Command::Seidel {
            action:
                SeidelAction::Verify {
                    table,
                    complex,
                    lemma,
                    corollary2,
                },
        } => seidel_verify(&mut session, table, complex, *lemma, corollary2.as_deref()),
        Command::Hofer(args) => hofer(&mut session, args),
        Command::Pipeline(args) => pipeline(&mut session, args),
        Command::Selftest { instances } => selftest(cli.seed, cli.jobs, *instances),
    };
    match result {
        Ok((checks, summary, value)) => {
            let mut report = RunReport::new(command, session.inputs, checks, summary, value);
            report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            let stdout = match cli.format {
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
                    s.push('\n');
                    s
                }
                OutputFormat::Text => report.render_text(),
            };
            Outcome {
                code: report.exit_code(),
                stdout,
                stderr: String::new(),
                report: Some(report),
            }
        }
        Err(InputError(message)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            report: None,
        },
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Morse {
            action: MorseAction::Build { .. },
        } => "morse build",
        Command::Morse {
            action: MorseAction::Check { .. },
        } => "morse check",
        Command::Homology { .. } => "homology",
        Command::Wang {
            action: WangAction::Build(_),
        } => "wang build",
        Command::Wang {
            action: WangAction::Verdict(_),
        } => "wang verdict",
        Command::Wang {
            action: WangAction::Exactness(_),
        } => "wang exactness",
        Command::Seidel { .. } => "seidel verify",
        Command::Hofer(_) => "hofer",
        Command::Pipeline(_) => "pipeline",
        Command::Selftest { .. } => "selftest",
    }
    .to_string()
}

fn betti_line(b: &BettiNumbers) -> String {
    b.values().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn agreement_check(d: &MorseData, morse: &ChainComplex) -> CheckOutcome {
    let cellular = homology_dims(&d.complex().chain_complex());
    let from_morse = homology_dims(morse);
    if cellular == from_morse {
        CheckOutcome::pass("morse homology equals cellular homology", "morse::build_morse_complex")
    } else {
        CheckOutcome::fail(
            "morse homology equals cellular homology",
            "morse::build_morse_complex",
            json!({"cellular": cellular, "morse": from_morse}),
        )
    }
}

fn morse_result(d: &MorseData) -> Result<CommandOutput, MorseError> {
    let m = build_morse_complex(d)?;
    let critical: Vec<Vec<String>> = m
        .critical
        .iter()
        .enumerate()
        .map(|(dim, idx)| idx.iter().map(|&i| d.complex().cells()[dim][i].clone()).collect())
        .collect();
    let betti = homology_dims(&m.complex);
    let summary = vec![
        format!(
            "critical cells per dimension: {}",
            critical
                .iter()
                .map(|c| c.len().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ),
        format!("betti: {}", betti_line(&betti)),
    ];
    let checks = vec![agreement_check(d, &m.complex)];
    let value = json!({"critical": critical, "betti": betti, "complex": ComplexDoc::from_z2(&m.complex)});
    Ok((checks, summary, value))
}

fn morse_build(s: &mut Session, file: &Path) -> Result<CommandOutput, InputError> {
    let doc: CellDoc = s.load(file)?;
    let d = doc.to_morse_data()?;
    morse_result(&d).map_err(|e| InputError(format!("{}: {e}", file.display())))
}

fn morse_check(s: &mut Session, file: &Path) -> Result<CommandOutput, InputError> {
    let doc: CellDoc = s.load(file)?;
    let d = doc.to_morse_data()?;
    if let Err(cycle) = d.validate_matching() {
        let check = CheckOutcome::fail(
            "matching acyclic",
            "morse::MorseData::validate_matching",
            cycle.to_string(),
        );
        return Ok((
            vec![check],
            vec!["matching has a closed V-path".to_string()],
            Value::Null,
        ));
    }
    let (mut checks, summary, value) = morse_result(&d).map_err(|e| InputError(e.to_string()))?;
    checks.insert(
        0,
        CheckOutcome::pass("matching acyclic", "morse::MorseData::validate_matching"),
    );
    Ok((checks, summary, value))
}

fn homology(s: &mut Session, file: &Path) -> Result<CommandOutput, InputError> {
    let input: ComplexInput = s.load(file)?;
    match input {
        ComplexInput::Cellular(doc) => {
            let d = doc.to_morse_data()?;
            let cellular = homology_dims(&d.complex().chain_complex());
            let m = build_morse_complex(&d).map_err(|e| InputError(e.to_string()))?;
            let checks = vec![agreement_check(&d, &m.complex)];
            let summary = vec![format!("betti: {}", betti_line(&cellular))];
            Ok((checks, summary, json!({"ring": "Z2", "betti": cellular})))
        }
        ComplexInput::Chain(doc) => {
            let (ring, betti) = match doc.to_complex()? {
                AnyComplex::Z2(c) => ("Z2", homology_dims(&c)),
                AnyComplex::Omega(c) => (
                    "Omega",
                    omega_homology_dims(&c).map_err(|e| InputError(format!("{}: {e}", file.display())))?,
                ),
            };
            Ok((
                Vec::new(),
                vec![format!("betti: {}", betti_line(&betti))],
                json!({"ring": ring, "betti": betti}),
            ))
        }
    }
}

fn wang(s: &mut Session, action: &WangAction) -> Result<CommandOutput, InputError> {
    match action {
        WangAction::Build(inputs) => {
            let w = s.wang(inputs)?;
            let betti = w.betti_cone();
            let summary = vec![format!("cone betti: {}", betti_line(&betti))];
            let checks = vec![CheckOutcome::pass(
                "cone boundary squares to zero",
                "wang_monodromy::build_wang",
            )];
            let value = json!({
                "betti_minus": homology_dims(&w.minus),
                "betti_plus": homology_dims(&w.plus),
                "betti_cone": betti,
                "cone": ComplexDoc::from_z2(&w.cone),
            });
            Ok((checks, summary, value))
        }
        WangAction::Verdict(inputs) => {
            let w = s.wang(inputs)?;
            let h = w.homologies();
            let via_i = monodromy_trivial_via_i_with(&w, &h);
            let direct = monodromy_trivial_direct_with(&w, &h);
            let mut checks = vec![match &via_i.kernel_witness {
                None => CheckOutcome::pass(
                    "inclusion injective on homology",
                    "wang_monodromy::monodromy_trivial_via_i",
                ),
                Some(kw) => CheckOutcome::fail(
                    "inclusion injective on homology",
                    "wang_monodromy::monodromy_trivial_via_i",
                    kw,
                ),
            }];
            let direct_value = match &direct {
                Ok(d) => {
                    let agree = d.trivial == via_i.trivial;
                    checks.push(if agree {
                        CheckOutcome::pass(
                            "direct identification agrees",
                            "wang_monodromy::monodromy_trivial_direct",
                        )
                    } else {
                        CheckOutcome::fail(
                            "direct identification agrees",
                            "wang_monodromy::monodromy_trivial_direct",
                            d,
                        )
                    });
                    to_value(d)
                }
                Err(e) => json!({"unavailable": e.to_string()}),
            };
            let verdict = if via_i.trivial { "trivial" } else { "nontrivial" };
            let mut summary = vec![format!("monodromy {verdict}")];
            if let Some(kw) = &via_i.kernel_witness {
                summary.push(format!("kernel witness: {kw}"));
            }
            let betti = w.betti_cone();
            summary.push(format!("cone betti: {}", betti_line(&betti)));
            let value = json!({
                "verdict": verdict,
                "kernel_witness": via_i.kernel_witness,
                "betti_cone": betti,
                "direct": direct_value,
            });
            Ok((checks, summary, value))
        }
        WangAction::Exactness(inputs) => {
            let w = s.wang(inputs)?;
            let checks = vec![CheckOutcome::from_result(
                "long exact sequence exact at every position and degree",
                "wang_monodromy::verify_wang_exactness",
                verify_wang_exactness_with(&w, &w.homologies()),
            )];
            Ok((checks, Vec::new(), json!({"betti_cone": w.betti_cone()})))
        }
    }
}

fn seidel_verify(
    s: &mut Session,
    table: &Path,
    complex: &Path,
    lemma: Option<u8>,
    corollary2: Option<&Path>,
) -> Result<CommandOutput, InputError> {
    let ds = s.dataset(table)?;
    let c = s.load::<ComplexInput>(complex)?.resolve()?.complex;
    let cycle = match corollary2 {
        Some(p) => {
            let doc: CycleDoc = s.load(p)?;
            let chain = doc.to_chain(&c)?;
            if !c.is_cycle(doc.degree, &chain) {
                return Err(InputError(format!(
                    "{}: chain is not a cycle in degree {}",
                    p.display(),
                    doc.degree
                )));
            }
            Some((doc.degree, chain))
        }
        None => None,
    };
    let (outcome, maps) = run_dataset(&ds, &c);
    let skip: &[&str] = match lemma {
        Some(3) => &["inverse homotopy identity", "glued degree-0 part homotopic to identity"],
        Some(4) => &["gluing homotopy identity"],
        _ => &[],
    };
    let mut checks: Vec<CheckOutcome> = outcome
        .checks
        .into_iter()
        .filter(|c| !skip.contains(&c.check.as_str()))
        .collect();
    let mut value = json!({});
    let mut summary = Vec::new();
    if let Some(maps) = &maps {
        let filtered: Vec<String> = maps
            .phi
            .filtered
            .iter()
            .chain(&maps.phi_inverse.filtered)
            .map(|e| e.to_string())
            .collect();
        summary.push(format!("entries above the cap: {}", filtered.len()));
        value["filtered_entries"] = to_value(&filtered);
        value["phi_g"] = to_value(maps.phi.describe());
        value["phi_g_inverse"] = to_value(maps.phi_inverse.describe());
        if let Some((degree, chain)) = &cycle {
            let report = corollary2_injectivity(&maps.phi, &maps.psi, &maps.big_h, &c, &c, *degree, chain)
                .map_err(|e| InputError(e.to_string()))?;
            let name = "injectivity replay";
            let op = "seidel_filtered::corollary2_injectivity";
            checks.push(match report.verdict {
                Corollary2Verdict::Inconsistent { .. } => CheckOutcome::fail(name, op, &report),
                _ => CheckOutcome::pass(name, op),
            });
            summary.push(format!(
                "injectivity replay: {}",
                to_value(&report.verdict)["verdict"].as_str().unwrap_or("")
            ));
            value["corollary2"] = to_value(&report);
        }
    } else if cycle.is_some() {
        summary.push("injectivity not replayed: the maps could not be built".to_string());
    }
    Ok((checks, summary, value))
}

fn hofer(s: &mut Session, args: &HoferArgs) -> Result<CommandOutput, InputError> {
    let h: SampledHamiltonian = s.load(&args.input)?;
    let n = hofer_norm(&h, args.rule.into(), args.snap)
        .map_err(|e| InputError(format!("{}: {e}", args.input.display())))?;
    let mut summary = vec![
        format!("norm {}", n.norm_exact),
        format!("plus {}", n.plus_exact),
        format!("minus {}", n.minus_exact),
    ];
    let mut checks = Vec::new();
    let mut value = json!({"norm": to_value(&n)});
    if let Some(t) = args.gate.thresholds() {
        let g = sigma_gate(&n.norm_exact, &t).map_err(|e| InputError(e.to_string()))?;
        checks.push(if g.pass {
            CheckOutcome::pass("energy gate", "hofer::sigma_gate")
        } else {
            CheckOutcome::fail("energy gate", "hofer::sigma_gate", &g)
        });
        summary.push(format!("gate {}", if g.pass { "passes" } else { "fails" }));
        value["gate"] = to_value(&g);
    }
    Ok((checks, summary, value))
}

fn pipeline(s: &mut Session, args: &PipelineArgs) -> Result<CommandOutput, InputError> {
    let h: SampledHamiltonian = s.load(&args.hofer)?;
    let n = hofer_norm(&h, Quadrature::Auto, DEFAULT_SNAP_DENOMINATOR)
        .map_err(|e| InputError(format!("{}: {e}", args.hofer.display())))?;
    let thresholds = args.gate.thresholds().unwrap_or_default();
    let gate = sigma_gate(&n.norm_exact, &thresholds).map_err(|e| InputError(e.to_string()))?;
    let w = s.wang(&WangInputs {
        wang: Some(args.wang.clone()),
        minus: None,
        plus: None,
        phi: None,
        phig: None,
    })?;
    let ds = s.dataset(&args.table)?;
    let mut identities = theorem1_checks(&ds, &w);
    let caps_match = ds
        .caps()
        .map(|c| c.h_plus == n.plus_exact && c.h_minus == n.minus_exact);
    identities.push(match caps_match {
        Some(true) => CheckOutcome::pass("energy caps match the one-sided norms", "hofer::hofer_norm"),
        _ => CheckOutcome::fail(
            "energy caps match the one-sided norms",
            "hofer::hofer_norm",
            json!({"plus": n.plus_exact, "minus": n.minus_exact, "caps": ds.caps()}),
        ),
    });
    let report = theorem1_verdict(gate.clone(), &w, identities.clone());
    let mut checks = vec![if gate.pass {
        CheckOutcome::pass("energy gate", "hofer::sigma_gate")
    } else {
        CheckOutcome::fail("energy gate", "hofer::sigma_gate", &gate)
    }];
    checks.extend(identities);
    let verdict_line = match &report.verdict {
        Theorem1Verdict::MonodromyTrivial => "verdict: monodromy trivial".to_string(),
        Theorem1Verdict::Inconclusive { failed } => {
            format!("verdict: inconclusive, hypothesis fails ({})", failed.join(", "))
        }
        Theorem1Verdict::Inconsistent { detail } => format!("verdict: inconsistent data ({detail})"),
    };
    let summary = vec![verdict_line, format!("cross-check: {}", report.cross_check)];
    let value = json!({
        "gate": report.gate,
        "identities": report.identities,
        "verdict": to_value(&report.verdict),
        "wang_trivial": report.wang_trivial,
        "cross_check": report.cross_check,
    });
    Ok((checks, summary, value))
}

fn selftest(seed: u64, jobs: usize, instances: usize) -> Result<CommandOutput, InputError> {
    let mut checks = Vec::new();
    let models: [(&str, MorseData, Vec<usize>); 5] = [
        ("circle", models::circle(), vec![1, 1]),
        ("sphere", models::sphere(), vec![1, 0, 1]),
        ("torus", models::torus_perfect(), vec![1, 2, 1]),
        ("projective plane", models::projective_plane(), vec![1, 1, 1]),
        ("klein bottle", models::klein_bottle(), vec![1, 2, 1]),
    ];
    for (name, d, expected) in models {
        let m = models::morse(&d);
        let got = betti_vec(&m.complex);
        let cellular = betti_vec(&d.complex().chain_complex());
        let check = format!("{name}: morse and cellular betti numbers");
        checks.push(if got == expected && cellular == expected {
            CheckOutcome::pass(&check, "morse::build_morse_complex")
        } else {
            CheckOutcome::fail(
                &check,
                "morse::build_morse_complex",
                json!({"morse": got, "cellular": cellular}),
            )
        });
    }
    let wang_cases = [
        ("trivial torus", models::trivial_torus_wang(), vec![1, 3, 3, 1], true),
        ("dehn twist", models::dehn_twist_wang(), vec![1, 2, 2, 1], false),
        ("circle", models::circle_wang(), vec![1, 2, 1], true),
    ];
    for (name, (m, phi, phi_g), betti, trivial) in wang_cases {
        let w = build_wang(m.complex.clone(), m.complex, phi, phi_g).map_err(|e| InputError(e.to_string()))?;
        let h = w.homologies();
        let v = monodromy_trivial_via_i_with(&w, &h);
        let check = format!("{name}: cone betti and verdict");
        let got = betti_vec(&w.cone);
        checks.push(
            if got == betti && v.trivial == trivial && v.kernel_witness.is_some() != trivial {
                CheckOutcome::pass(&check, "wang_monodromy::monodromy_trivial_via_i")
            } else {
                CheckOutcome::fail(
                    &check,
                    "wang_monodromy::monodromy_trivial_via_i",
                    json!({"betti": got, "trivial": v.trivial}),
                )
            },
        );
    }
    let torus = models::morse(&models::minimal_torus()).complex;
    let caps = models::standard_caps();
    let (trivial, _) = run_dataset(&models::trivial_dataset(&torus, &caps), &torus);
    checks.push(match trivial.first_failure() {
        None => CheckOutcome::pass(
            "trivial dataset passes both identities",
            "seidel_filtered::check_lemma4",
        ),
        Some(f) => CheckOutcome::fail(
            "trivial dataset passes both identities",
            "seidel_filtered::check_lemma4",
            f,
        ),
    });
    let (dehn, _) = run_dataset(&models::dehn_dataset(&caps), &torus);
    let lemma4_fails = dehn.get("inverse homotopy identity").is_some_and(|c| !c.pass);
    checks.push(if lemma4_fails {
        CheckOutcome::pass(
            "dehn dataset violates the inverse homotopy identity",
            "seidel_filtered::check_lemma4",
        )
    } else {
        CheckOutcome::fail(
            "dehn dataset violates the inverse homotopy identity",
            "seidel_filtered::check_lemma4",
            &dehn,
        )
    });
    let sep = SampledHamiltonian::sample(5, &[-1.0, 0.0, 1.0], |t, x| t * x);
    let n = hofer_norm(&sep, Quadrature::Auto, DEFAULT_SNAP_DENOMINATOR).map_err(|e| InputError(e.to_string()))?;
    checks.push(if n.norm_exact == Exponent::integer(1) {
        CheckOutcome::pass("separable hamiltonian has norm 1", "hofer::hofer_norm")
    } else {
        CheckOutcome::fail("separable hamiltonian has norm 1", "hofer::hofer_norm", &n)
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| InputError(format!("cannot start {jobs} workers: {e}")))?;
    let failures: Vec<Value> = pool.install(|| {
        (0..instances as u64)
            .into_par_iter()
            .filter_map(|i| random_instance_failure(seed, i))
            .collect()
    });
    let check = format!("{instances} random cones: exact, and both verdicts agree");
    checks.push(match failures.first() {
        None => CheckOutcome::pass(&check, "wang_monodromy::verify_wang_exactness"),
        Some(f) => CheckOutcome::fail(&check, "wang_monodromy::verify_wang_exactness", f),
    });
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = vec![format!("{passed}/{} checks pass (seed {seed})", checks.len())];
    Ok((checks, summary, json!({"seed": seed, "instances": instances})))
}

fn random_instance_failure(seed: u64, index: u64) -> Option<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(index));
    let (c, phi, phi_g) = random_wang_instance(&mut rng, 40);
    let w = match build_wang(c.clone(), c, phi, phi_g) {
        Ok(w) => w,
        Err(e) => return Some(json!({"instance": index, "error": e.to_string()})),
    };
    let h = w.homologies();
    if let Err(v) = verify_wang_exactness_with(&w, &h) {
        return Some(json!({"instance": index, "exactness": v}));
    }
    let via_i = monodromy_trivial_via_i_with(&w, &h);
    match monodromy_trivial_direct_with(&w, &h) {
        Ok(d) if d.trivial != via_i.trivial => {
            Some(json!({"instance": index, "via_i": via_i.trivial, "direct": d.trivial}))
        }
        _ => None,
    }
}
