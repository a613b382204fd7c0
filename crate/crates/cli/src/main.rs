// Copyright 2026 The qss-rs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `qss`: run, attack and verify quantum secret sharing scenarios.
//!
//! Exit codes: 0 success, 2 validation error, 3 protocol abort,
//! 4 attack-analysis anomaly. Errors go to stderr as one line,
//! `qss: error[<kind>]: <Code>: <message>`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qss_core::adversary::AdversaryError;
use qss_core::protocol::ProtocolError;
use qss_core::scenario::{AttackSpec, Scenario, ScenarioError};
use qss_core::span_program::{verify_msp, SpanError};
use qss_core::transcript::{
    run_attack, run_scenario, AttackKind, AttackReport, AttackResult, RunError, Transcript,
};

const EXIT_VALIDATION: u8 = 2;
const EXIT_ABORT: u8 = 3;
const EXIT_ANOMALY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qss",
    version,
    about = "Quantum secret sharing over monotone span programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in worked example (secret 3 over Z_5, set {P1,P2,P3}).
    Demo {
        /// Seed recorded in the transcript; the example pins all randomness.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the JSON transcript instead of the summary.
        #[arg(long)]
        json: bool,
        /// Also write the JSON transcript to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario file and emit its transcript.
    Run {
        scenario: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the transcript here and print a summary; default prints JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an attack model against a scenario.
    Attack {
        scenario: PathBuf,
        /// intercept-resend | entangle-measure | forgery | collusion
        #[arg(long = "type", value_parser = parse_kind)]
        kind: AttackKind,
        /// Trial count [defaults: intercept-resend 10000, entangle-measure 1000, forgery 1000]
        #[arg(long)]
        trials: Option<u64>,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Coalition for collusion, as 1-based indices (e.g. 3,4) [default: every
        /// maximal set that cannot reconstruct]
        #[arg(long, value_delimiter = ',')]
        coalition: Option<Vec<usize>>,
        /// Print the JSON report instead of the summary.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the scenario's span program realizes its access structure.
    VerifyMsp {
        scenario: PathBuf,
        /// Print the JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
}

fn parse_kind(s: &str) -> Result<AttackKind, String> {
    s.parse()
}

struct Failure {
    exit: u8,
    kind: &'static str,
    code: &'static str,
    message: String,
}

impl Failure {
    fn new(exit: u8, kind: &'static str, code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            exit,
            kind,
            code,
            message: message.into(),
        }
    }
}

fn scenario_code(e: &ScenarioError) -> &'static str {
    match e {
        ScenarioError::Parse { .. } => "Parse",
        ScenarioError::Schema(_) => "Schema",
        ScenarioError::ZeroIndex(_) => "ZeroIndex",
        ScenarioError::EmptyMatrix => "EmptyMatrix",
        ScenarioError::Field(_) => "Field",
        ScenarioError::Span(s) => span_code(s),
        ScenarioError::TamperOutsideSet(_) => "TamperOutsideSet",
    }
}

fn span_code(e: &SpanError) -> &'static str {
    match e {
        SpanError::Field(_) => "Field",
        SpanError::TooManyParticipants(_) => "TooManyParticipants",
        SpanError::UnknownParticipant { .. } => "UnknownParticipant",
        SpanError::LabelingNotSurjective(_) => "LabelingNotSurjective",
        SpanError::LabelingLength { .. } => "LabelingLength",
        SpanError::EmptyMatrix => "EmptyMatrix",
        SpanError::ParticipantCountMismatch { .. } => "ParticipantCountMismatch",
        SpanError::NotAuthorized(_) => "NotAuthorized",
        SpanError::MissingShare(_) => "MissingShare",
    }
}

fn protocol_code(e: &ProtocolError) -> &'static str {
    match e {
        ProtocolError::NotAuthorized(_) => "NotAuthorized",
        ProtocolError::FixtureWidth { .. } => "FixtureWidth",
        ProtocolError::StateInconsistency { .. } => "StateInconsistency",
        ProtocolError::NotInSet(_) => "NotInSet",
        ProtocolError::Span(s) => span_code(s),
        ProtocolError::Field(_) => "Field",
        ProtocolError::Qudit(_) => "Qudit",
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        let code = match &e {
            RunError::Scenario(s) => scenario_code(s),
            RunError::Protocol(p) => protocol_code(p),
            RunError::Adversary(AdversaryError::Protocol(p)) => protocol_code(p),
            RunError::Adversary(AdversaryError::InvalidHop { .. }) => "InvalidHop",
            RunError::Adversary(AdversaryError::NotUnauthorized(_)) => "NotUnauthorized",
            RunError::Adversary(AdversaryError::InvariantViolation(_)) => "InvariantViolation",
            RunError::Attack(_) => "AttackConfig",
        };
        let kind = if code == "Parse" {
            "parse"
        } else {
            "validation"
        };
        Failure::new(EXIT_VALIDATION, kind, code, e.to_string())
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        RunError::from(e).into()
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            "io",
            "Read",
            format!("{}: {e}", path.display()),
        )
    })?;
    Ok(Scenario::from_json(&text)?)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n")).map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            "io",
            "Write",
            format!("{}: {e}", path.display()),
        )
    })
}

fn summarize(t: &Transcript) {
    println!(
        "scenario {} over Z_{}, active set {}",
        t.scenario, t.d, t.set
    );
    let shares: Vec<_> = t
        .shares
        .iter()
        .map(|s| format!("s{}={} ({})", s.row, s.value, s.holder))
        .collect();
    println!("shares:      {}", shares.join(" "));
    let lambda: Vec<_> = t
        .lambda
        .iter()
        .map(|l| format!("row{}={}", l.row, l.value))
        .collect();
    println!("lambda:      {}", lambda.join(" "));
    println!("H1:          {}", t.commitments.h1);
    println!("H2:          {}", t.commitments.h2);
    let labels: Vec<_> = t.rounds.iter().map(|r| r.label.to_string()).collect();
    println!("labels:      {}", labels.join(" -> "));
    if let (Some(q), Some(r)) = (t.q_i, t.r_i) {
        println!("dealer:      measured r = {r} in basis q = {q}");
    }
    match &t.verdicts.abort_reason {
        Some(reason) => println!("verdict:     abort ({reason})"),
        None => println!("verdict:     accept, H1 verified"),
    }
    if let Some(rec) = &t.recovered {
        let h2 = if t.verdicts.h2_verified == Some(true) {
            "H2 verified"
        } else {
            "H2 MISMATCH"
        };
        println!(
            "recovered:   S = {}, s = {} ({h2})",
            rec.shared_value, rec.secret
        );
    }
}

fn finish_run(t: &Transcript) -> Result<(), Failure> {
    if t.succeeded() {
        Ok(())
    } else if let Some(reason) = &t.verdicts.abort_reason {
        Err(Failure::new(
            EXIT_ABORT,
            "abort",
            "DealerAbort",
            reason.clone(),
        ))
    } else {
        Err(Failure::new(
            EXIT_ABORT,
            "abort",
            "SecretHashMismatch",
            "H2 mismatch: recovered secret does not match the commitment",
        ))
    }
}

fn print_attack(r: &AttackReport) {
    println!(
        "{} attack on {} over Z_{}, set {}, seed {}",
        attack_name(&r.attack),
        r.scenario,
        r.d,
        r.set,
        r.seed
    );
    match &r.attack {
        AttackResult::InterceptResend {
            hop,
            oracle_correct_basis,
            oracle_acceptance,
            stats,
        } => {
            println!(
                "hop {hop}, {} trials x {} qudits",
                stats.trials, stats.qudits_per_trial
            );
            let row = |name: &str, rate: &qss_core::adversary::Rate, oracle: Option<f64>| {
                let o = oracle.map_or(String::new(), |o| format!("  (expected {o:.4})"));
                println!(
                    "  {name:<22} {:.4} ± {:.4}{o}",
                    rate.value, rate.radius_3sigma
                );
            };
            let d = r.d as f64;
            row(
                "eve correct basis",
                &stats.eve_correct_basis_rate,
                Some(*oracle_correct_basis),
            );
            row(
                "eve secret success",
                &stats.eve_secret_success_rate,
                Some(oracle_correct_basis.powi(stats.qudits_per_trial as i32)),
            );
            row(
                "dealer acceptance",
                &stats.alice_acceptance_rate,
                Some(*oracle_acceptance),
            );
            row(
                "dealer detection",
                &stats.alice_detection_rate,
                Some((d - 1.0).powi(2) / (d * d)),
            );
            println!("  (radii are 3 sigma)");
        }
        AttackResult::EntangleMeasure {
            ancilla_dim,
            search,
        } => {
            println!(
                "{} compliant and {} generic attacks, ancilla dimension {ancilla_dim}",
                search.attacks, search.attacks
            );
            println!(
                "  compliant max disturbance        {:.3e}",
                search.compliant_max_disturbance
            );
            println!(
                "  compliant max distinguishability {:.3e}",
                search.compliant_max_distinguishability
            );
            println!(
                "  generic min disturbance          {:.3e}",
                search.generic_min_disturbance
            );
            println!(
                "{} zero-disturbance informative attacks found",
                search.zero_disturbance_informative
            );
        }
        AttackResult::Forgery { tamper, stats } => {
            println!(
                "tamper {}",
                serde_json::to_string(tamper).unwrap_or_default()
            );
            println!("  trials                {}", stats.trials);
            println!("  caught by r check     {}", stats.dealer_result);
            println!("  caught by H1          {}", stats.dealer_hash);
            println!("  caught by H2          {}", stats.participant_hash);
            println!("  caught by consistency {}", stats.state_consistency);
            println!(
                "  undetected            {} ({} with a wrong secret)",
                stats.undetected, stats.undetected_corrupted
            );
        }
        AttackResult::Collusion {
            verdicts,
            all_identical,
        } => {
            let mut last = None;
            for v in verdicts {
                if last != Some(v.coalition) {
                    let ok = verdicts
                        .iter()
                        .filter(|w| w.coalition == v.coalition)
                        .all(|w| w.identical);
                    let msg = if ok {
                        "perfect privacy: identical distributions"
                    } else {
                        "LEAK: distributions differ"
                    };
                    println!(
                        "  coalition {}: {msg} ({} share vectors per secret)",
                        v.coalition, v.samples
                    );
                    last = Some(v.coalition);
                }
            }
            if verdicts.is_empty() {
                println!("  no coalition to check");
            } else if *all_identical {
                println!("perfect privacy: identical distributions");
            }
        }
    }
}

fn attack_name(a: &AttackResult) -> &'static str {
    match a {
        AttackResult::InterceptResend { .. } => "intercept-resend",
        AttackResult::EntangleMeasure { .. } => "entangle-measure",
        AttackResult::Forgery { .. } => "forgery",
        AttackResult::Collusion { .. } => "collusion",
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Demo { seed, json, out } => {
            let t = run_scenario(&Scenario::worked_example(), seed)?;
            if let Some(path) = out {
                write(&path, &t.to_json())?;
            }
            if json {
                println!("{}", t.to_json());
            } else {
                summarize(&t);
            }
            finish_run(&t)
        }
        Command::Run {
            scenario,
            seed,
            out,
        } => {
            let s = load(&scenario)?;
            let t = run_scenario(&s, seed.unwrap_or(s.seed))?;
            match out {
                Some(path) => {
                    write(&path, &t.to_json())?;
                    summarize(&t);
                }
                None => println!("{}", t.to_json()),
            }
            finish_run(&t)
        }
        Command::Attack {
            scenario,
            kind,
            trials,
            seed,
            coalition,
            json,
            out,
        } => {
            let mut s = load(&scenario)?;
            if let Some(c) = coalition {
                if kind != AttackKind::Collusion {
                    return Err(Failure::new(
                        EXIT_VALIDATION,
                        "usage",
                        "Usage",
                        "--coalition only applies to --type collusion",
                    ));
                }
                let (sigma, sigma_prime) = match &s.attack {
                    Some(AttackSpec::Collusion {
                        sigma, sigma_prime, ..
                    }) => (*sigma, *sigma_prime),
                    _ => (None, None),
                };
                s.attack = Some(AttackSpec::Collusion {
                    coalition: c,
                    sigma,
                    sigma_prime,
                });
            }
            let report = run_attack(&s, kind, trials, seed.unwrap_or(s.seed))?;
            if let Some(path) = out {
                write(&path, &report.to_json())?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print_attack(&report);
            }
            match report.attack.anomaly() {
                Some(msg) => Err(Failure::new(EXIT_ANOMALY, "anomaly", "AttackAnomaly", msg)),
                None => Ok(()),
            }
        }
        Command::VerifyMsp { scenario, json } => {
            let s = load(&scenario)?;
            let report = verify_msp(&s.msp, &s.gamma).map_err(ScenarioError::from)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{report}");
            }
            let failed: Vec<_> = report.failures().map(|c| c.set.to_string()).collect();
            if failed.is_empty() {
                if !json {
                    println!("all {} checks passed", report.checks.len());
                }
                Ok(())
            } else {
                Err(Failure::new(
                    EXIT_VALIDATION,
                    "validation",
                    "MspMismatch",
                    format!(
                        "span program disagrees with the access structure on {}",
                        failed.join(", ")
                    ),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            eprintln!("qss: error[usage]: Usage: {first}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let message = f.message.replace('\n', " ");
            eprintln!("qss: error[{}]: {}: {message}", f.kind, f.code);
            ExitCode::from(f.exit)
        }
    }
}
