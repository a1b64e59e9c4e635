//! Serialized shapes written by the commands, and the renderers for each
//! output format.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use ringfill_core::verifier::{RequirementSummary, Stage3Summary, Status, Violation};
use ringfill_core::{
    GapDescriptor, LifecycleTrace, PlacementParams, RequirementReport, SweepDomain, SweepReport,
    TokenPlacement,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub token: u64,
    pub label: u64,
    pub stage1_bucket: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub params: PlacementParams,
    pub placements: Vec<PlanRecord>,
}

/// JSON form of a full trace. `verify --input` reads this back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub params: PlacementParams,
    pub placements: Vec<TokenPlacement>,
    pub occupancy1: Vec<u64>,
    pub occupancy2: Vec<u64>,
    pub occupancy3: Vec<u64>,
    pub gap: GapDescriptor,
    pub requirements: RequirementReport,
}

impl TraceDocument {
    pub fn new(trace: LifecycleTrace, gap: GapDescriptor, requirements: RequirementReport) -> Self {
        Self {
            params: trace.params,
            placements: trace.placements,
            occupancy1: trace.occupancy1,
            occupancy2: trace.occupancy2,
            occupancy3: trace.occupancy3,
            gap,
            requirements,
        }
    }

    pub fn into_trace(self) -> LifecycleTrace {
        LifecycleTrace {
            params: self.params,
            placements: self.placements,
            occupancy1: self.occupancy1,
            occupancy2: self.occupancy2,
            occupancy3: self.occupancy3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub params: PlacementParams,
    pub requirements: RequirementReport,
}

/// Sweep output; the full violation list is only included on request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub domain: SweepDomain,
    pub instances_checked: u64,
    pub requirements: Vec<RequirementSummary>,
    pub stage3: Stage3Summary,
    pub oracle_mismatches: Vec<PlacementParams>,
    pub end_state_mismatches: Vec<PlacementParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<Violation>>,
}

impl SweepDocument {
    pub fn new(report: SweepReport, list_violations: bool) -> Self {
        Self {
            domain: report.domain,
            instances_checked: report.instances_checked,
            requirements: report.requirements,
            stage3: report.stage3,
            oracle_mismatches: report.oracle_mismatches,
            end_state_mismatches: report.end_state_mismatches,
            violations: list_violations.then_some(report.violations),
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).context("serializing report")?;
    s.push('\n');
    Ok(s)
}

fn csv_from_rows<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().context("flushing csv")?;
    Ok(String::from_utf8(bytes)?)
}

fn list(values: &[u64]) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

fn params_line(p: &PlacementParams) -> String {
    format!(
        "T={} B={} C={} f={} B'={}",
        p.token_count(),
        p.first_set_size(),
        p.fill_width(),
        p.first_bucket(),
        p.second_set_size()
    )
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn plan_csv(doc: &PlanDocument) -> Result<String> {
    csv_from_rows(
        &["token", "label", "stage1_bucket"],
        doc.placements.iter().map(|r| {
            [
                r.token.to_string(),
                r.label.to_string(),
                r.stage1_bucket.to_string(),
            ]
        }),
    )
}

pub fn plan_table(doc: &PlanDocument) -> String {
    let p = &doc.params;
    let mut out = format!(
        "plan T={} B={} C={} f={}\n",
        p.token_count(),
        p.first_set_size(),
        p.fill_width(),
        p.first_bucket()
    );
    let rows: Vec<Vec<String>> = doc
        .placements
        .iter()
        .map(|r| {
            vec![
                r.token.to_string(),
                r.label.to_string(),
                r.stage1_bucket.to_string(),
            ]
        })
        .collect();
    out.push_str(&table(&["token", "label", "stage1_bucket"], &rows));
    out
}

pub fn trace_csv(doc: &TraceDocument) -> Result<String> {
    csv_from_rows(
        &[
            "token",
            "label",
            "stage1_bucket",
            "stage2_bucket",
            "stage3_bucket",
            "moved",
        ],
        doc.placements.iter().map(|pl| {
            [
                pl.token.0.to_string(),
                pl.label.0.to_string(),
                pl.stage1_bucket.to_string(),
                pl.stage2_bucket.to_string(),
                pl.stage3_bucket.to_string(),
                pl.moved_in_stage2.to_string(),
            ]
        }),
    )
}

fn gap_line(g: &GapDescriptor) -> String {
    if g.present {
        format!(
            "gap: start={} length={} round={} offset={}",
            g.gap_start, g.gap_length, g.round, g.offset
        )
    } else {
        "gap: none".to_string()
    }
}

pub fn trace_table(doc: &TraceDocument) -> String {
    let mut out = format!("trace {}\n", params_line(&doc.params));
    let rows: Vec<Vec<String>> = doc
        .placements
        .iter()
        .map(|pl| {
            vec![
                pl.token.0.to_string(),
                pl.label.0.to_string(),
                pl.stage1_bucket.to_string(),
                pl.stage2_bucket.to_string(),
                pl.stage3_bucket.to_string(),
                if pl.moved_in_stage2 { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    out.push_str(&table(
        &[
            "token",
            "label",
            "stage1_bucket",
            "stage2_bucket",
            "stage3_bucket",
            "moved",
        ],
        &rows,
    ));
    let _ = writeln!(out, "occupancy1: {}", list(&doc.occupancy1));
    let _ = writeln!(out, "occupancy2: {}", list(&doc.occupancy2));
    let _ = writeln!(out, "occupancy3: {}", list(&doc.occupancy3));
    let _ = writeln!(out, "{}", gap_line(&doc.gap));
    out.push_str(&requirements_table(&doc.requirements));
    out
}

pub fn requirements_table(report: &RequirementReport) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let _ = write!(
            out,
            "{:<2} {}  {}",
            e.id,
            status_word(e.status),
            e.id.describe()
        );
        if let Some(w) = &e.witness {
            let _ = write!(out, " -- {}", w.detail);
            if let Some(h) = &w.histogram {
                let _ = write!(out, "; histogram {}", list(h));
            }
            if !w.tokens.is_empty() {
                let _ = write!(out, "; tokens {}", list(&w.tokens));
            }
            if !w.buckets.is_empty() {
                let _ = write!(out, "; buckets {}", list(&w.buckets));
            }
        }
        out.push('\n');
    }
    out
}

pub fn verify_table(doc: &VerifyDocument) -> String {
    format!(
        "verify {}\n{}",
        params_line(&doc.params),
        requirements_table(&doc.requirements)
    )
}

pub fn verify_csv(doc: &VerifyDocument) -> Result<String> {
    csv_from_rows(
        &["id", "status", "observed_spread", "detail"],
        doc.requirements.entries.iter().map(|e| {
            let w = e.witness.as_ref();
            [
                e.id.to_string(),
                status_word(e.status).to_string(),
                w.and_then(|w| w.observed_spread)
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
                w.map(|w| w.detail.clone()).unwrap_or_default(),
            ]
        }),
    )
}

fn minimal_cells(s: &RequirementSummary) -> [String; 5] {
    match &s.minimal {
        Some(w) => {
            let p = &w.params;
            [
                p.first_set_size().to_string(),
                p.fill_width().to_string(),
                p.first_bucket().to_string(),
                p.token_count().to_string(),
                p.second_set_size().to_string(),
            ]
        }
        None => Default::default(),
    }
}

pub fn sweep_csv(doc: &SweepDocument) -> Result<String> {
    csv_from_rows(
        &[
            "id",
            "violations",
            "min_b",
            "min_c",
            "min_f",
            "min_t",
            "min_b_prime",
        ],
        doc.requirements.iter().map(|s| {
            let [b, c, f, t, b2] = minimal_cells(s);
            [s.id.to_string(), s.violations.to_string(), b, c, f, t, b2]
        }),
    )
}

pub fn sweep_table(doc: &SweepDocument) -> String {
    let d = &doc.domain;
    let mut out = format!(
        "sweep B in {}..={}, C in 1..=B, f in 0..B, T in 0..={}*B+{}, B' in B+1..={}*B{}\n",
        d.min_buckets,
        d.max_buckets,
        d.max_rounds,
        d.extra_tokens,
        d.target_span,
        if d.gap_free_only {
            " (gap-free only)"
        } else {
            ""
        }
    );
    let _ = writeln!(out, "instances checked: {}", doc.instances_checked);
    let _ = writeln!(out, "oracle mismatches: {}", doc.oracle_mismatches.len());
    let _ = writeln!(
        out,
        "end-state mismatches: {}",
        doc.end_state_mismatches.len()
    );
    for s in &doc.requirements {
        let _ = write!(out, "{:<2} violations: {}", s.id, s.violations);
        if let Some(w) = &s.minimal {
            let _ = write!(out, "  minimal: {}", params_line(&w.params));
            if let Some(spread) = w.observed_spread {
                let _ = write!(out, " spread {spread}");
            }
            if let Some(h) = &w.histogram {
                let _ = write!(out, " histogram {}", list(h));
            }
        }
        out.push('\n');
    }
    let st = &doc.stage3;
    let _ = writeln!(
        out,
        "stage 3: residue failures {}, gap-free spread failures {}, spread>2 {}, spread=2 instances {}, max spread {}",
        st.residue_failures,
        st.gap_free_spread_failures,
        st.spread_above_two,
        st.spread_two_instances,
        st.max_spread
    );
    if let Some(vs) = &doc.violations {
        for v in vs {
            let ids: Vec<String> = v.report.failures().map(|e| e.id.to_string()).collect();
            let _ = writeln!(
                out,
                "violation {}: {}",
                params_line(&v.params),
                ids.join(",")
            );
        }
    }
    out
}
