use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

pub const SCHEMA: &str = "v1";

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex(Complex64),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Real(x) => write!(f, "{x:e}"),
            Quantity::Complex(z) => {
                let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "{:e}{sign}{:e}i", z.re, z.im.abs())
            }
        }
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(z: Complex64) -> Self {
        Quantity::Complex(z)
    }
}

/// One comparison: `error` is a relative error, a residual or an excess over
/// a bound, and the check passes when it is at most `tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, lhs: impl Into<Quantity>, rhs: impl Into<Quantity>, error: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            error,
            tolerance,
            passed: error <= tolerance,
            detail: None,
        }
    }

    /// `lhs ≤ rhs + tolerance`, reporting the excess.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Check::new(name, lhs, rhs, lhs - rhs, tolerance)
    }

    pub fn with_detail(mut self, detail: impl Serialize) -> Self {
        self.detail = serde_json::to_value(detail).ok();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    #[serde(skip)]
    pub text: Option<String>,
    #[serde(skip)]
    pub csv: Option<(String, Vec<String>)>,
}

impl Report {
    pub fn new(command: impl Into<String>, checks: Vec<Check>) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            data: None,
            text: None,
            csv: None,
        }
    }

    pub fn with_data(mut self, data: impl Serialize) -> Self {
        self.data = serde_json::to_value(data).ok();
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn with_csv(mut self, header: &str, rows: Vec<String>) -> Self {
        self.csv = Some((header.to_string(), rows));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.csv {
            Some((header, rows)) => {
                out.push_str(header);
                out.push('\n');
                for r in rows {
                    out.push_str(r);
                    out.push('\n');
                }
            }
            None => {
                out.push_str("name,lhs,rhs,error,tolerance,passed\n");
                for c in &self.checks {
                    out.push_str(&format!(
                        "{},{},{},{:e},{:e},{}\n",
                        c.name, c.lhs, c.rhs, c.error, c.tolerance, c.passed
                    ));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.text {
            out.push_str(t);
            if !t.ends_with('\n') {
                out.push('\n');
            }
        }
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}: lhs={} rhs={} error={:e} (tolerance {:e})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.lhs,
                c.rhs,
                c.error,
                c.tolerance
            ));
        }
        out
    }
}
