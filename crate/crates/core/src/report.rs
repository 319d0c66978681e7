//! Structured residual records shared by the symbolic and field checks.

use serde::Serialize;

/// Space-time grid the residual was measured on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMeta {
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Nx")]
    pub nx: usize,
    pub tmin: f64,
    pub tmax: f64,
    #[serde(rename = "Nt")]
    pub nt: usize,
}

/// Max and L2 residual magnitudes with the gate they were held to.
///
/// `pass` is `max_abs <= tolerance` when a tolerance is set, and `None` for
/// diagnostic-only measurements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub l2: f64,
    pub pass: Option<bool>,
    pub tolerance: Option<f64>,
    pub notes: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_terms: Option<usize>,
}

impl ResidualReport {
    pub fn new(max_abs: f64, l2: f64, tolerance: Option<f64>) -> Self {
        Self {
            max_abs,
            l2,
            pass: tolerance.map(|tol| max_abs <= tol),
            tolerance,
            notes: String::new(),
            grid: None,
            relative: None,
            residual_terms: None,
        }
    }

    /// Diagnostic record with the gate suppressed.
    pub fn diagnostic(max_abs: f64, l2: f64, notes: impl Into<String>) -> Self {
        Self {
            notes: notes.into(),
            ..Self::new(max_abs, l2, None)
        }
    }

    pub fn with_grid(mut self, grid: GridMeta) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.pass.unwrap_or(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
