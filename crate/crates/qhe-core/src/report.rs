//! Human-readable text rendering of certificates, including the rhombal
//! layout of a standard filtration as an ASCII diagram.

use crate::cert::{Certificate, Verdict};
use crate::qh::QhIndexReport;

/// Render filtration factors as a diamond: one row per stage, indented by
/// the level offset from the certified index.
pub fn render_rhombal(factors: &[(String, i64)]) -> String {
    if factors.is_empty() {
        return String::from("  (zero module)\n");
    }
    let min_off = factors.iter().map(|&(_, o)| o).min().unwrap();
    let max_off = factors.iter().map(|&(_, o)| o).max().unwrap();
    let cell = factors.iter().map(|(v, _)| v.len() + 8).max().unwrap().max(10);
    let mut out = String::new();
    for (stage, (vertex, off)) in factors.iter().enumerate() {
        let col = (off - min_off) as usize;
        let mut line = format!("  stage {stage:>2} |");
        line.push_str(&" ".repeat(col * cell));
        line.push_str(&format!("D({vertex},{off:+})"));
        out.push_str(line.trim_end());
        out.push('\n');
    }
    let width = ((max_off - min_off) as usize + 1) * cell;
    out.push_str(&format!("  offsets {}..{} ({} columns)\n", min_off, max_off, width / cell));
    out
}

/// One line per certified index plus a diagram for the first one.
pub fn render_qh_reports(title: &str, reports: &[QhIndexReport]) -> String {
    let mut out = format!("{title}\n");
    for r in reports {
        let status = if r.ok { "ok" } else { "FAIL" };
        let factors: Vec<String> =
            r.factors.iter().map(|(v, o)| format!("D({v},{o:+})")).collect();
        out.push_str(&format!(
            "  {:<12} End(D)={} [{status}] factors: {}\n",
            r.object,
            r.end_dim,
            factors.join(", ")
        ));
        if let Some(f) = &r.failure {
            out.push_str(&format!("    failure: {f}\n"));
        }
    }
    if let Some(first) = reports.iter().find(|r| r.ok) {
        out.push_str("  filtration layout at the first certified index:\n");
        out.push_str(&render_rhombal(&first.factors));
    }
    out
}

pub fn render_certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("claim   : {}\n", cert.claim));
    out.push_str(&format!("digest  : {}\n", cert.input_digest));
    out.push_str(&format!("params  : {}\n", cert.params));
    out.push_str(&format!("verdict : {}\n", match cert.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    }));
    if let Some(f) = &cert.failure {
        out.push_str(&format!("failure : {f}\n"));
    }
    out.push_str(&format!(
        "note    : {} / {} / {}\n",
        cert.convention.composition, cert.convention.modules, cert.convention.window_semantics
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhombal_layout_is_stable() {
        let factors = vec![
            ("1".to_string(), 0i64),
            ("1".to_string(), 1),
            ("2".to_string(), 1),
            ("1".to_string(), 2),
        ];
        let a = render_rhombal(&factors);
        assert_eq!(a, render_rhombal(&factors));
        assert!(a.contains("stage  0 |D(1,+0)"));
        assert!(a.lines().count() >= 4);
    }
}
