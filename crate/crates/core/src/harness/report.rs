use std::fmt::Write;

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "elliptic-schubert/report/v1";

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Unique `suite/check` name; reports are sorted by it.
    pub name: String,
    /// The identity being tested.
    pub identity: String,
    /// The result it comes from, in words.
    pub anchor: String,
    pub parameters: serde_json::Value,
    pub passed: bool,
    /// Counts and failing instances.
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub status: Status,
    /// Names of failing checks.
    pub failures: Vec<String>,
}

impl ReportDocument {
    pub fn new(suite: &str, seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let failures: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
        ReportDocument { schema: REPORT_SCHEMA.into(), suite: suite.into(), seed, checks, status, failures }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let flag = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(s, "{flag}  {:width$}  {}", c.name, c.identity);
            if !c.detail.is_empty() {
                let _ = write!(s, "  [{}]", c.detail);
            }
            if let Some(ms) = c.elapsed_ms {
                let _ = write!(s, "  {ms} ms");
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "suite {}: {} ({} of {} checks passed, seed {})",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len() - self.failures.len(),
            self.checks.len(),
            self.seed
        );
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::from("\\begin{tabular}{lll}\n\\hline\ncheck & identity & result \\\\\n\\hline\n");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "\\texttt{{{}}} & {} & {} \\\\",
                escape(&c.name),
                escape(&c.identity),
                if c.passed { "pass" } else { "fail" }
            );
        }
        s.push_str("\\hline\n\\end{tabular}\n");
        s
    }
}

/// Escapes LaTeX specials for text mode.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\textbackslash{}"),
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            '_' | '{' | '}' | '#' | '&' | '%' | '$' => {
                out.push('\\');
                out.push(ch);
            }
            _ => out.push(ch),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(name: &str, passed: bool) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            identity: "sum_w b_{u,w} x^2 = 1".into(),
            anchor: "a".into(),
            parameters: serde_json::json!({}),
            passed,
            detail: String::new(),
            elapsed_ms: None,
        }
    }

    #[test]
    fn sorted_and_forms_agree() {
        let r = ReportDocument::new("s", 7, vec![record("b/two", false), record("a/one", true)]);
        assert_eq!(r.checks[0].name, "a/one");
        assert_eq!(r.failures, vec!["b/two".to_string()]);
        assert_eq!(r.status, Status::Fail);
        let ascii = r.to_ascii();
        let lines: Vec<&str> = ascii.lines().collect();
        assert_eq!(lines.len(), r.checks.len() + 1);
        for (line, c) in lines.iter().zip(&r.checks) {
            assert!(line.starts_with(if c.passed { "PASS" } else { "FAIL" }));
            assert!(line.contains(&c.name));
        }
        assert!(lines[2].contains("FAIL (1 of 2 checks passed, seed 7)"));
        let json: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(json["status"], "fail");
        assert!(json["checks"][0].get("elapsed_ms").is_none());
    }

    #[test]
    fn latex_escapes_specials() {
        assert_eq!(escape("b_{u,w}^2 & 50%"), "b\\_\\{u,w\\}\\^{}2 \\& 50\\%");
        let r = ReportDocument::new("s", 0, vec![record("x_y", true)]);
        assert!(r.to_latex().contains("\\texttt{x\\_y}"));
    }
}
