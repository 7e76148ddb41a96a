//! Residual records and suite reports.

use serde::{Deserialize, Serialize};

/// A named scalar residual produced by a verification routine.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

/// Whether a case passes by staying below or by exceeding its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Below,
    /// Negative controls: the residual must exceed the threshold.
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub inputs: String,
    pub residual: f64,
    pub threshold: f64,
    pub expect: Expect,
    pub pass: bool,
}

impl Case {
    pub fn new(
        name: impl Into<String>,
        inputs: impl Into<String>,
        residual: f64,
        threshold: f64,
        expect: Expect,
    ) -> Self {
        let residual = if residual.is_nan() || residual.is_infinite() {
            f64::MAX
        } else {
            residual
        };
        let pass = match expect {
            Expect::Below => residual < threshold,
            Expect::Above => residual > threshold,
        };
        Self {
            name: name.into(),
            inputs: inputs.into(),
            residual,
            threshold,
            expect,
            pass,
        }
    }

    pub fn below(
        name: impl Into<String>,
        inputs: impl Into<String>,
        residual: f64,
        threshold: f64,
    ) -> Self {
        Self::new(name, inputs, residual, threshold, Expect::Below)
    }

    pub fn above(
        name: impl Into<String>,
        inputs: impl Into<String>,
        residual: f64,
        threshold: f64,
    ) -> Self {
        Self::new(name, inputs, residual, threshold, Expect::Above)
    }

    /// A case that could not be evaluated (e.g. a pole after the retry budget).
    pub fn failed(name: impl Into<String>, inputs: impl Into<String>, threshold: f64) -> Self {
        Self::below(name, inputs, f64::MAX, threshold)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.inputs.cmp(&b.inputs)));
        let pass = cases.iter().all(|c| c.pass);
        Self {
            suite: suite.into(),
            cases,
            pass,
        }
    }

    pub fn worst(&self) -> Option<&Case> {
        self.cases
            .iter()
            .filter(|c| c.expect == Expect::Below)
            .max_by(|a, b| (a.residual / a.threshold).total_cmp(&(b.residual / b.threshold)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }
}
