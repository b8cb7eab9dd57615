use serde_json::json;
use taut_core::exact::ExactRational;
use taut_core::report::CheckReport;

use crate::config::{Config, Format};

/// One computed value with its provenance.
#[derive(Debug, Clone)]
pub struct Row {
    pub g: u32,
    pub n: usize,
    pub value: ExactRational,
    pub route: String,
}

fn decimal(cfg: &Config, v: &ExactRational) -> Option<String> {
    cfg.decimal.map(|d| v.to_decimal(d))
}

pub fn warn_decimal(cfg: &Config) {
    if let Some(d) = cfg.decimal {
        log::warn!("decimal rendering truncates to {d} digits; exact values are the p/q fields");
        eprintln!("warning: decimal values are truncated to {d} digits");
    }
}

pub fn render_rows(cfg: &Config, rows: &[Row], bare_single: bool) -> String {
    let mut out = String::new();
    match cfg.format {
        Format::Json => {
            for r in rows {
                let mut v = json!({"g": r.g, "n": r.n, "value": r.value.to_string(), "route": r.route});
                if let Some(d) = decimal(cfg, &r.value) {
                    v["decimal"] = json!(d);
                }
                out.push_str(&v.to_string());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(if cfg.decimal.is_some() { "g,n,value,route,decimal\n" } else { "g,n,value,route\n" });
            for r in rows {
                out.push_str(&format!("{},{},{},{}", r.g, r.n, r.value, r.route));
                if let Some(d) = decimal(cfg, &r.value) {
                    out.push_str(&format!(",{d}"));
                }
                out.push('\n');
            }
        }
        Format::Text => {
            if bare_single && rows.len() == 1 {
                out.push_str(&rows[0].value.to_string());
                if let Some(d) = decimal(cfg, &rows[0].value) {
                    out.push_str(&format!(" ~ {d}"));
                }
                out.push('\n');
            } else {
                for r in rows {
                    out.push_str(&format!("g={} n={} {}: {}", r.g, r.n, r.route, r.value));
                    if let Some(d) = decimal(cfg, &r.value) {
                        out.push_str(&format!(" ~ {d}"));
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}

pub fn render_reports(cfg: &Config, reports: &[CheckReport]) -> String {
    let mut out = String::new();
    match cfg.format {
        Format::Json => {
            for r in reports {
                out.push_str(&r.to_json_line());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("check,pass,pairings,parameters,expected,got\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},\"{}\",\"{}\",\"{}\"\n",
                    r.check,
                    r.pass,
                    r.pairings,
                    r.parameters.to_string().replace('"', "\"\""),
                    r.expected.replace('"', "\"\""),
                    r.got.replace('"', "\"\"")
                ));
            }
        }
        Format::Text => {
            for r in reports {
                let tag = if r.pass { "PASS" } else { "FAIL" };
                out.push_str(&format!("{tag} {} {}", r.check, r.parameters));
                if !r.pass {
                    out.push_str(&format!(" expected={} got={}", r.expected, r.got));
                }
                out.push('\n');
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            out.push_str(&format!("{} checks, {} failed\n", reports.len(), failed));
        }
    }
    out
}
