//! Structured `key: value` reports.

use std::fmt::Write as _;
use std::time::Duration;

/// The outcome of one command. Everything except `elapsed` is a pure
/// function of the manifest and the flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: &'static str,
    pub kind: String,
    pub verdict: String,
    /// Whether the property holds (or the operation succeeded).
    pub holds: bool,
    pub details: Vec<(String, String)>,
    pub obstructions: Vec<String>,
    pub assumptions_used: Vec<String>,
    pub caveats: Vec<String>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: &'static str, kind: &str) -> Self {
        Report {
            command,
            kind: kind.to_string(),
            verdict: String::new(),
            holds: true,
            details: Vec::new(),
            obstructions: Vec::new(),
            assumptions_used: Vec::new(),
            caveats: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.details.push((key.into(), value.into()));
    }

    /// `0` when the property holds, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }

    /// The report without the timing line.
    pub fn render_stable(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| {
            // values never span lines, so each line is one key
            writeln!(out, "{k}: {}", v.replace('\n', " ")).expect("write to String");
        };
        line("command", self.command);
        line("kind", &self.kind);
        line("verdict", &self.verdict);
        for (k, v) in &self.details {
            line(k, v);
        }
        for o in &self.obstructions {
            line("obstruction", o);
        }
        for a in &self.assumptions_used {
            line("assumption", a);
        }
        for c in &self.caveats {
            line("caveat", c);
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = self.render_stable();
        writeln!(out, "elapsed_ms: {}", self.elapsed.as_millis()).expect("write to String");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_in_order() {
        let mut r = Report::new("check", "jacobi");
        r.verdict = "jacobi: false".into();
        r.holds = false;
        r.detail("chart_dim", "3");
        r.obstructions.push("[E,π]_s ≠ 0".into());
        r.elapsed = Duration::from_millis(7);
        assert_eq!(
            r.render(),
            "command: check\nkind: jacobi\nverdict: jacobi: false\nchart_dim: 3\n\
             obstruction: [E,π]_s ≠ 0\nelapsed_ms: 7\n"
        );
        assert_eq!(r.exit_code(), 1);
    }
}
