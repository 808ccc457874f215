use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// How `computed_value` must relate to `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtMost,
    AtLeast,
    /// `|computed − bound| ≤ tolerance`; zero tolerance means an exact check.
    Within(f64),
}

/// Outcome of checking one computed quantity against its bound or closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub parameters: Vec<(String, f64)>,
    pub computed_value: f64,
    pub bound: f64,
    pub direction: Direction,
    pub satisfied: bool,
    /// Distance to the bound on the satisfied side (negative when violated).
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, computed_value: f64, bound: f64, direction: Direction) -> Self {
        let margin = match direction {
            Direction::AtMost => bound - computed_value,
            Direction::AtLeast => computed_value - bound,
            Direction::Within(tol) => tol - (computed_value - bound).abs(),
        };
        let satisfied = match direction {
            Direction::Within(0.0) => computed_value == bound,
            _ => margin >= 0.0,
        };
        Self {
            name: name.into(),
            parameters: Vec::new(),
            computed_value,
            bound,
            direction,
            satisfied,
            margin,
            note: None,
        }
    }

    /// A check whose verdict comes from exact arithmetic elsewhere.
    pub fn exact(name: impl Into<String>, computed_value: f64, bound: f64, holds: bool) -> Self {
        let mut r = Self::new(name, computed_value, bound, Direction::Within(0.0));
        r.satisfied = holds;
        r.margin = if holds { 0.0 } else { -1.0 };
        r
    }

    /// A check that could not be carried out; reported but not failing.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut r = Self::new(name, f64::NAN, f64::NAN, Direction::AtMost);
        r.satisfied = true;
        r.margin = f64::NAN;
        r.note = Some(format!("skipped: {}", reason.into()));
        r
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.push((key.to_string(), value));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Plain-text table, one report per line.
pub fn render_table(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<4} {:<44} {:>14} {:>14} {:>10} {:>11}  {}",
        "ok", "check", "computed", "bound", "relation", "margin", "parameters"
    );
    for r in reports {
        let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let rel = match r.direction {
            Direction::AtMost => "<=".to_string(),
            Direction::AtLeast => ">=".to_string(),
            Direction::Within(t) if t == 0.0 => "==".to_string(),
            Direction::Within(t) => format!("±{t:.0e}"),
        };
        let _ = writeln!(
            out,
            "{:<4} {:<44} {:>14.6e} {:>14.6e} {:>10} {:>11.3e}  {}{}",
            if r.satisfied { "PASS" } else { "FAIL" },
            r.name,
            r.computed_value,
            r.bound,
            rel,
            r.margin,
            params.join(" "),
            r.note.as_ref().map(|n| format!("  ({n})")).unwrap_or_default()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions() {
        assert!(BoundReport::new("a", 0.2, 0.3, Direction::AtMost).satisfied);
        assert!(!BoundReport::new("a", 0.4, 0.3, Direction::AtMost).satisfied);
        assert!(BoundReport::new("a", 0.4, 0.3, Direction::AtLeast).satisfied);
        assert!(BoundReport::new("a", 0.3 + 1e-12, 0.3, Direction::Within(1e-9)).satisfied);
        assert!(!BoundReport::new("a", 0.3 + 1e-12, 0.3, Direction::Within(0.0)).satisfied);
        let r = BoundReport::exact("b", 0.0, 0.0, false);
        assert!(!r.satisfied);
        let text = render_table(&[r.param("h", 2.0)]);
        assert!(text.contains("FAIL") && text.contains("h=2"));
        let json = serde_json::to_string(&BoundReport::new("c", 1.0, 2.0, Direction::AtMost)).unwrap();
        assert!(json.contains("\"satisfied\":true"));
    }
}
