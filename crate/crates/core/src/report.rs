use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub quantity: String,
    pub value: f64,
    pub units: String,
    /// Unclamped value, kept only when clamping changed it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw: Option<f64>,
}

/// Named quantities computed for one scenario. Every value is finite and
/// nonnegative.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GainReport {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_prob_mode: Option<String>,
    pub entries: Vec<ReportEntry>,
}

impl GainReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, quantity: impl Into<String>, value: f64, units: &str) -> Result<()> {
        self.push_raw(quantity, value, None, units)
    }

    pub fn push_raw(
        &mut self,
        quantity: impl Into<String>,
        value: f64,
        raw: Option<f64>,
        units: &str,
    ) -> Result<()> {
        let quantity = quantity.into();
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidReportValue { quantity, value });
        }
        self.entries.push(ReportEntry {
            quantity,
            value,
            units: units.to_string(),
            raw: raw.filter(|r| *r != value),
        });
        Ok(())
    }

    pub fn get(&self, quantity: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.quantity == quantity)
            .map(|e| e.value)
    }

    /// `quantity,value,units` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "quantity,value,units")?;
        for e in &self.entries {
            writeln!(out, "{},{},{}", e.quantity, e.value, e.units)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
