use serde::{Deserialize, Serialize};

/// How a numerical value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    Mc,
}

/// A numerical value with an uncertainty: standard error for Monte Carlo,
/// an error bound for quadrature, zero for closed forms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    /// 0 for deterministic results.
    pub samples: u64,
    pub method: Method,
}

impl Estimate {
    pub fn closed_form(value: f64) -> Self {
        Estimate { value, stderr: 0.0, samples: 0, method: Method::ClosedForm }
    }

    pub fn quadrature(value: f64, bound: f64) -> Self {
        Estimate { value, stderr: bound, samples: 0, method: Method::Quadrature }
    }

    pub fn mc(value: f64, stderr: f64, samples: u64) -> Self {
        Estimate { value, stderr, samples, method: Method::Mc }
    }

    /// |self - other| in units of the combined uncertainty (minimum 1e-300
    /// to avoid 0/0 for two exact values that agree).
    pub fn z_against(&self, other: &Estimate) -> f64 {
        let spread = (self.stderr.powi(2) + other.stderr.powi(2)).sqrt().max(1e-300);
        (self.value - other.value).abs() / spread
    }
}
