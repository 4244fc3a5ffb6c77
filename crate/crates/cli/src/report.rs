//! Verification reports and their text, JSON and CSV renderings.

use std::fmt::Write as _;
use std::time::Duration;

use hodge_core::Rat;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub pass: bool,
}

impl Check {
    pub fn new(id: String, lhs: Rat, rhs: Rat) -> Self {
        let pass = lhs == rhs;
        Check { id, lhs, rhs, pass }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn set_elapsed(&mut self, d: Option<Duration>) {
        self.elapsed_ms = d.map(|d| d.as_millis());
    }
}

pub fn render(reports: &[SuiteReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "check_id", "lhs", "rhs", "pass"])
                .expect("in-memory write");
            for r in reports {
                for c in &r.checks {
                    w.write_record([
                        r.suite.as_str(),
                        c.id.as_str(),
                        &c.lhs.to_string(),
                        &c.rhs.to_string(),
                        if c.pass { "true" } else { "false" },
                    ])
                    .expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                for c in &r.checks {
                    let mark = if c.pass { "ok  " } else { "FAIL" };
                    writeln!(s, "{mark} {}/{}  {} = {}", r.suite, c.id, c.lhs, c.rhs).unwrap();
                }
                let total = r.checks.len();
                write!(s, "{}: {}/{} passed", r.suite, total - r.failures(), total).unwrap();
                if let Some(ms) = r.elapsed_ms {
                    write!(s, " in {ms} ms").unwrap();
                }
                s.push('\n');
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<SuiteReport> {
        vec![SuiteReport {
            suite: "demo".into(),
            checks: vec![
                Check::new("g=1,d=2".into(), Rat::new(1, 24), Rat::new(1, 24)),
                Check::new("x".into(), Rat::one(), Rat::zero()),
            ],
            elapsed_ms: None,
        }]
    }

    #[test]
    fn pass_is_exact_equality() {
        let r = &sample()[0];
        assert!(r.checks[0].pass);
        assert!(!r.checks[1].pass);
        assert!(!r.passed());
        assert_eq!(r.failures(), 1);
    }

    #[test]
    fn csv_quotes_ids() {
        let s = render(&sample(), Format::Csv);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("suite,check_id,lhs,rhs,pass"));
        assert_eq!(lines.next(), Some("demo,\"g=1,d=2\",1/24,1/24,true"));
        assert_eq!(lines.next(), Some("demo,x,1,0,false"));
    }

    #[test]
    fn json_uses_rational_strings() {
        let v: serde_json::Value = serde_json::from_str(&render(&sample(), Format::Json)).unwrap();
        assert_eq!(v[0]["checks"][0]["lhs"], "1/24");
        assert_eq!(v[0]["checks"][1]["pass"], false);
        assert!(v[0].get("elapsed_ms").is_none());
    }

    #[test]
    fn text_summary() {
        let s = render(&sample(), Format::Text);
        assert!(s.contains("FAIL demo/x  1 = 0"));
        assert!(s.ends_with("demo: 1/2 passed\n"));
    }
}
