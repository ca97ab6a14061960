use std::collections::BTreeMap;
use std::fmt;

/// Outcome of one named numerical check.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub check_id: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: BTreeMap<String, String>,
}

impl VerificationReport {
    /// `passed` is `residual <= tolerance`; a NaN residual fails.
    pub fn new(check_id: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { check_id: check_id.into(), residual, tolerance, passed: residual <= tolerance, context: BTreeMap::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.context.insert(key.into(), value.to_string());
        self
    }

    /// `check_id,residual,tolerance,passed`
    pub fn to_record(&self) -> String {
        format!("{},{:e},{:e},{}", self.check_id, self.residual, self.tolerance, self.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<28} residual {:>10.3e}  tol {:>8.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_id,
            self.residual,
            self.tolerance
        )?;
        if !self.context.is_empty() {
            let ctx: Vec<String> = self.context.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "  ({})", ctx.join(", "))?;
        }
        Ok(())
    }
}

pub const RECORD_HEADER: &str = "check_id,residual,tolerance,passed";
