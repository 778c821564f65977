// SPDX-License-Identifier: Apache-2.0

//! Named scalar diagnostics for one channel.

use serde::{Deserialize, Serialize};

use crate::sampling::{McEstimate, SampleStream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<SampleStream>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub channel: String,
    pub entries: Vec<Diagnostic>,
}

impl DiagnosticsReport {
    pub fn new(channel: impl Into<String>) -> Self {
        DiagnosticsReport { channel: channel.into(), entries: Vec::new() }
    }

    pub fn exact(&mut self, name: &str, value: f64) -> &mut Self {
        self.entries.push(Diagnostic { name: name.into(), value, stderr: None, samples: None, stream: None });
        self
    }

    pub fn estimate(&mut self, name: &str, est: &McEstimate, stream: &SampleStream) -> &mut Self {
        self.entries.push(Diagnostic {
            name: name.into(),
            value: est.mean,
            stderr: Some(est.stderr),
            samples: Some(est.n),
            stream: Some(*stream),
        });
        self
    }

    pub fn get(&self, name: &str) -> Option<&Diagnostic> {
        self.entries.iter().find(|d| d.name == name)
    }
}
