//! Spectrum records in CSV and JSON.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::radial::Eigenpair;

/// Scientific notation with 17 significant digits (round-trip exact).
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub label: String,
    pub ell: usize,
    pub nodes: usize,
    pub energy: f64,
    pub epsilon_bar: Option<f64>,
    pub norm_residual: f64,
}

impl SpectrumRecord {
    pub fn from_eigenpair(label: impl Into<String>, e: &Eigenpair) -> Self {
        Self {
            label: label.into(),
            ell: e.ell,
            nodes: e.nodes,
            energy: e.energy,
            epsilon_bar: e.epsilon_bar,
            norm_residual: e.norm_residual,
        }
    }
}

/// Spectroscopic label with principal number `n = nodes + ℓ + 1`, e.g. `2p`.
pub fn state_label(ell: usize, nodes: usize) -> String {
    const L: &[u8] = b"spdfghik";
    let letter = L
        .get(ell)
        .map(|&c| (c as char).to_string())
        .unwrap_or_else(|| format!("l{ell}"));
    format!("{}{}", nodes + ell + 1, letter)
}

pub const CSV_HEADER: &str = "label,ell,nodes,energy,epsilon_bar,norm_residual";

pub fn write_csv(out: &mut impl Write, records: &[SpectrumRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.label,
            r.ell,
            r.nodes,
            fmt17(r.energy),
            r.epsilon_bar.map(fmt17).unwrap_or_default(),
            fmt17(r.norm_residual)
        )?;
    }
    Ok(())
}

pub fn write_json(out: &mut impl Write, records: &[SpectrumRecord]) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, records)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(state_label(0, 0), "1s");
        assert_eq!(state_label(1, 0), "2p");
        assert_eq!(state_label(0, 2), "3s");
        assert_eq!(state_label(9, 0), "10l9");
    }

    #[test]
    fn csv_round_trips_digits() {
        let rec = SpectrumRecord {
            label: "1s".into(),
            ell: 0,
            nodes: 0,
            energy: -2.662_567_937_919_856e-5,
            epsilon_bar: None,
            norm_residual: 1e-17,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&rec)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        let e: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(e, rec.energy);
        assert_eq!(line.split(',').nth(4).unwrap(), "");
    }
}
