//! Report structure and its JSON and text renderings.

use std::fmt::Write as _;

use crformal_core::local::CodimensionResult;
use crformal_core::mapping::{AuditCheck, CheckStatus, PredicateReport};
use crformal_core::series::Series;
use crformal_core::verdict::Verdict;
use serde::Serialize;

use crate::scenario::Request;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub truncation: u32,
    pub cutoff: u32,
    pub seed: u64,
    pub requests: Vec<Request>,
    pub fixtures: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifoldReport {
    pub name: String,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "Q")]
    pub q: Vec<String>,
    pub precision: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub change: Option<Vec<String>>,
    pub reality: Verdict,
    pub normality: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_type: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub essential_type: Option<CodimensionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finitely_nondegenerate: Option<Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReflectionEntry {
    pub k: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MapReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub source: String,
    pub target: String,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<String>,
    pub maps_into: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicates: Option<PredicateReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reflection: Vec<ReflectionEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<AuditCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit_not_run: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub passed: usize,
    pub skipped: usize,
    pub violated: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub header: Header,
    pub manifolds: Vec<ManifoldReport>,
    pub maps: Vec<MapReport>,
    pub summary: Summary,
}

pub fn series_strings(v: &[Series]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl Report {
    pub fn tally(&mut self) {
        let mut s = Summary::default();
        for c in self.maps.iter().filter_map(|m| m.audit.as_ref()).flatten() {
            match c.status {
                CheckStatus::Passed => s.passed += 1,
                CheckStatus::Skipped => s.skipped += 1,
                CheckStatus::Violated => s.violated += 1,
            }
        }
        self.summary = s;
    }

    pub fn has_violations(&self) -> bool {
        self.summary.violated > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let h = &self.header;
        let _ = writeln!(
            out,
            "{} {}  K={} cutoff={} seed={}",
            h.tool, h.version, h.truncation, h.cutoff, h.seed
        );
        for m in &self.manifolds {
            let _ = writeln!(out, "\nmanifold {} (n={}, d={}, {})", m.name, m.n, m.d, m.precision);
            for (j, q) in m.q.iter().enumerate() {
                let _ = writeln!(out, "  Q{} = {q}", j + 1);
            }
            if let Some(ch) = &m.change {
                for (j, w) in ch.iter().enumerate() {
                    let _ = writeln!(out, "  old w{} = {w}", j + 1);
                }
            }
            verdict_line(&mut out, "reality", &m.reality);
            verdict_line(&mut out, "normality", &m.normality);
            if let Some(v) = &m.finite_type {
                verdict_line(&mut out, "finite type", v);
            }
            if let Some(e) = &m.essential_type {
                codim_line(&mut out, "essential type", e);
            }
            if let Some(v) = &m.finitely_nondegenerate {
                verdict_line(&mut out, "finitely nondegenerate", v);
            }
        }
        for m in &self.maps {
            let _ = writeln!(out, "\nmap {}: {} -> {}", m.name, m.source, m.target);
            if let Some(d) = &m.description {
                let _ = writeln!(out, "  {d}");
            }
            for (j, f) in m.f.iter().enumerate() {
                let _ = writeln!(out, "  F{} = {f}", j + 1);
            }
            for (j, g) in m.g.iter().enumerate() {
                let _ = writeln!(out, "  G{} = {g}", j + 1);
            }
            verdict_line(&mut out, "maps into target", &m.maps_into);
            if let Some(p) = &m.predicates {
                predicate_lines(&mut out, p);
            }
            for r in &m.reflection {
                verdict_line(&mut out, &format!("reflection identity k={}", r.k), &r.verdict);
            }
            if let Some(checks) = &m.audit {
                let _ = writeln!(out, "  audit:");
                for c in checks {
                    let _ = writeln!(out, "    {c}");
                }
            }
            if let Some(why) = &m.audit_not_run {
                let _ = writeln!(out, "  audit not run: {why}");
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\nsummary: {} passed, {} skipped, {} violated",
            s.passed, s.skipped, s.violated
        );
        out
    }
}

fn verdict_line(out: &mut String, label: &str, v: &Verdict) {
    let _ = writeln!(out, "  {label}: {v}");
}

fn codim_line(out: &mut String, label: &str, c: &CodimensionResult) {
    let _ = write!(out, "  {label}: {}", c.summary());
    if !c.standard_monomials.is_empty() {
        let _ = write!(out, " basis {{{}}}", c.standard_monomials.join(", "));
    }
    out.push('\n');
}

fn predicate_lines(out: &mut String, p: &PredicateReport) {
    verdict_line(out, "CR transversal", &p.cr_transversal);
    verdict_line(out, "transversal", &p.transversal);
    verdict_line(out, "not totally degenerate", &p.not_totally_degenerate);
    verdict_line(out, "Segre finite", &p.segre_finite);
    codim_line(out, "m_H", &p.m_h);
    verdict_line(out, "finite", &p.finite);
    codim_line(out, "mult(H)", &p.mult);
    verdict_line(out, "transversally regular", &p.transversally_regular);
    verdict_line(out, "Jac H nonzero", &p.jacobian_nonzero);
    verdict_line(out, "biholomorphism", &p.biholomorphism);
    verdict_line(out, "source finite type", &p.source_finite_type);
    verdict_line(out, "target finite type", &p.target_finite_type);
    codim_line(out, "Ess(source)", &p.source_ess_type);
    codim_line(out, "Ess(target)", &p.target_ess_type);
    verdict_line(out, "source finitely nondegenerate", &p.source_fin_nondeg);
}
