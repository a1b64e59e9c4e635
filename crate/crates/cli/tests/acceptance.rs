//! Acceptance gate. Runs every criterion over the default sweep domain
//! (B <= 10, 1 <= C <= B, 0 <= f < B, 0 <= T <= 4B+3, B < B' <= 2B) and
//! prints one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ringfill_cli::report::{TraceDocument, VerifyDocument};
use ringfill_cli::{build_trace_document, run, EXIT_VIOLATION};
use ringfill_core::verifier::{stage3_clauses, Status};
use ringfill_core::{
    gap, label, plan_stage1, prose_oracle_stage1, run_lifecycle, sweep, PlacementParams,
    RequirementId, SweepDomain, TokenId,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn domain() -> Vec<PlacementParams> {
    SweepDomain::default()
        .instances()
        .expect("default domain is valid")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let instances = domain();
    for p in &instances {
        ensure(plan_stage1(p) == prose_oracle_stage1(p), || {
            format!("plan differs from oracle at {p}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}, limit 60s")
    })?;
    Ok(format!(
        "{} instances identical in {:.2?}",
        instances.len(),
        elapsed
    ))
}

fn requirements_hold() -> Verdict {
    let report = sweep(&SweepDomain::default()).map_err(|e| e.to_string())?;
    let ids = [
        RequirementId::R1,
        RequirementId::R2,
        RequirementId::R3,
        RequirementId::R4,
        RequirementId::R5,
        RequirementId::RC,
    ];
    for id in ids {
        let s = report.summary(id);
        ensure(s.violations == 0, || {
            format!(
                "{id}: {} violations, first {:?}",
                s.violations,
                s.minimal.as_ref().map(|w| w.params)
            )
        })?;
    }
    ensure(report.oracle_mismatches.is_empty(), || {
        "sweep saw oracle mismatches".into()
    })?;
    Ok(format!(
        "R1-R5 and RC: 0 violations over {} instances",
        report.instances_checked
    ))
}

fn stage3_split_verdict() -> Verdict {
    let mut spread_two = 0u64;
    for p in domain() {
        let tr = run_lifecycle(&p);
        let clauses = stage3_clauses(&tr);
        ensure(clauses.residue_correct, || {
            format!("residue clause fails at {p}")
        })?;
        ensure(clauses.count_spread <= 2, || {
            format!("spread {} at {p}", clauses.count_spread)
        })?;
        if !gap(&p).present {
            ensure(clauses.count_spread <= 1, || {
                format!("gap-free spread {} at {p}", clauses.count_spread)
            })?;
        }
        if clauses.count_spread == 2 {
            spread_two += 1;
        }
    }
    ensure(spread_two > 0, || "no spread-2 instance found".into())?;

    let report = sweep(&SweepDomain::default()).map_err(|e| e.to_string())?;
    ensure(
        report.summary(RequirementId::R6).violations == spread_two,
        || "sweep R6 count disagrees with direct enumeration".into(),
    )?;

    let out = Command::new(env!("CARGO_BIN_EXE_ringfill"))
        .args([
            "verify",
            "--tokens",
            "5",
            "--buckets",
            "4",
            "--fill",
            "3",
            "--first",
            "0",
            "--target-buckets",
            "5",
            "--format",
            "json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(EXIT_VIOLATION), || {
        format!("verify exit {:?}", out.status.code())
    })?;
    let doc: VerifyDocument = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let r6 = doc
        .requirements
        .get(RequirementId::R6)
        .ok_or("no R6 entry")?;
    let hist = r6.witness.as_ref().and_then(|w| w.histogram.clone());
    ensure(
        r6.status == Status::Fail && hist.as_deref() == Some(&[1, 2, 1, 1, 0][..]),
        || format!("R6 entry {r6:?}"),
    )?;
    Ok(format!("{spread_two} spread-2 instances, all with a gap; verify exits 2 with occupancy3 [1,2,1,1,0]"))
}

fn anchor_identities() -> Verdict {
    let mut checked = 0u64;
    for p in domain() {
        let (t, b, c, f) = (
            p.token_count(),
            p.first_set_size(),
            p.fill_width(),
            p.first_bucket(),
        );
        let l = |i: u64| {
            label(&p, TokenId(i))
                .map(|l| l.0)
                .map_err(|e| e.to_string())
        };
        if t >= 1 {
            ensure(l(0)? == f + c - 1, || format!("l(0) at {p}"))?;
        }
        if t >= c {
            ensure(l(c - 1)? == f, || format!("l(C-1) at {p}"))?;
        }
        if t > b + c - 1 {
            ensure(l(b)? == f + b + c - 1, || format!("l(B) at {p}"))?;
            ensure(l(b + c - 1)? == f + b, || format!("l(B+C-1) at {p}"))?;
        }
        checked += 1;
    }
    Ok(format!("anchors exact on {checked} instances"))
}

fn gap_law() -> Verdict {
    let mut with_gap = 0u64;
    for p in domain() {
        let labels: BTreeSet<u64> = p.tokens().map(|t| label(&p, t).unwrap().0).collect();
        let missing: Vec<u64> = match labels.iter().next_back() {
            Some(&max) => (p.first_bucket()..=max)
                .filter(|l| !labels.contains(l))
                .collect(),
            None => Vec::new(),
        };
        let g = gap(&p);
        ensure(g.present == !missing.is_empty(), || {
            format!("presence mismatch at {p}")
        })?;
        ensure(g.labels().collect::<Vec<_>>() == missing, || {
            format!("interval mismatch at {p}")
        })?;
        with_gap += u64::from(g.present);
    }
    Ok(format!(
        "gap descriptor matches brute force; {with_gap} instances with a gap"
    ))
}

fn run_lib(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ringfill"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, out)
}

fn cli_determinism_and_round_trip() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("trace.json");
    let mut round_trips = 0u64;
    for p in domain().into_iter().filter(|p| p.first_set_size() <= 5) {
        let doc = build_trace_document(&p);
        std::fs::write(&path, ringfill_cli::report::json(&doc).unwrap())
            .map_err(|e| e.to_string())?;
        let again = ringfill_cli::reverify_file(&path).map_err(|e| format!("{e:#}"))?;
        ensure(again.requirements == doc.requirements, || {
            format!("round trip differs at {p}")
        })?;
        round_trips += 1;
    }

    let commands: [&[&str]; 5] = [
        &[
            "plan",
            "--tokens",
            "23",
            "--buckets",
            "7",
            "--fill",
            "4",
            "--first",
            "5",
            "--format",
            "csv",
        ],
        &[
            "trace",
            "--tokens",
            "23",
            "--buckets",
            "7",
            "--fill",
            "4",
            "--first",
            "5",
            "--target-buckets",
            "11",
            "--format",
            "json",
        ],
        &[
            "trace",
            "--tokens",
            "23",
            "--buckets",
            "7",
            "--fill",
            "4",
            "--first",
            "5",
            "--target-buckets",
            "11",
        ],
        &[
            "verify",
            "--tokens",
            "5",
            "--buckets",
            "4",
            "--fill",
            "3",
            "--first",
            "0",
            "--target-buckets",
            "5",
        ],
        &["sweep", "--format", "json"],
    ];
    for args in commands {
        let a = Command::new(env!("CARGO_BIN_EXE_ringfill"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let b = Command::new(env!("CARGO_BIN_EXE_ringfill"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            a.stdout == b.stdout && a.status.code() == b.status.code(),
            || format!("non-deterministic output for {args:?}"),
        )?;
        ensure(!a.stdout.is_empty(), || {
            format!("empty output for {args:?}")
        })?;
    }

    // binary trace -> file -> binary verify
    let (code, bytes) = run_lib(&[
        "trace",
        "--tokens",
        "5",
        "--buckets",
        "4",
        "--fill",
        "3",
        "--first",
        "0",
        "--target-buckets",
        "5",
        "--format",
        "json",
    ]);
    ensure(code == 0, || format!("trace exit {code}"))?;
    std::fs::write(&path, &bytes).map_err(|e| e.to_string())?;
    let saved: TraceDocument = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_ringfill"))
        .args([
            "verify",
            "--input",
            path.to_str().unwrap(),
            "--format",
            "json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let verified: VerifyDocument =
        serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(verified.requirements == saved.requirements, || {
        "binary round trip differs".into()
    })?;

    Ok(format!(
        "{round_trips} JSON round trips identical; 5 commands byte-identical across runs"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("oracle equivalence over default domain", oracle_equivalence),
        ("R1-R5 and RC zero violations", requirements_hold),
        ("R6 split verdict", stage3_split_verdict),
        ("label anchor identities", anchor_identities),
        ("gap law", gap_law),
        (
            "CLI determinism and JSON round trip",
            cli_determinism_and_round_trip,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(note) => println!("PASS criterion {}: {name} ({note})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
