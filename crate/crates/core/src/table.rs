//! Power tables: CSV body plus a JSON sidecar describing how it was produced.

use crate::error::{Error, Result};
use crate::montecarlo::PowerStudyConfig;
use crate::sampling::AlternativeFamily;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueEntry {
    pub statistic: String,
    pub n: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerMetadata {
    pub config: PowerStudyConfig,
    pub rng_algorithm: String,
    pub critical_values: Vec<CriticalValueEntry>,
    /// Not serialized, so seeded runs write identical files.
    #[serde(skip)]
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub alternative: AlternativeFamily,
    pub n: usize,
    pub rates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub columns: Vec<String>,
    pub rows: Vec<PowerRow>,
    pub metadata: PowerMetadata,
}

impl PowerTable {
    pub fn rate(&self, alternative: &AlternativeFamily, n: usize, column: &str) -> Option<f64> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows
            .iter()
            .find(|r| r.alternative == *alternative && r.n == n)
            .map(|r| r.rates[j])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alternative,n");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{},{}", row.alternative, row.n);
            for r in &row.rates {
                let _ = write!(out, ",{r}");
            }
            out.push('\n');
        }
        out
    }

    pub fn metadata_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.metadata)? + "\n")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Path of the metadata file written next to a CSV table.
    pub fn sidecar_path(csv: &Path) -> PathBuf {
        let mut name = csv.file_name().unwrap_or_default().to_os_string();
        name.push(".meta.json");
        csv.with_file_name(name)
    }

    /// Writes the CSV and its sidecar.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        std::fs::write(Self::sidecar_path(path), self.metadata_json()?)?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let metadata: PowerMetadata =
            serde_json::from_str(&std::fs::read_to_string(Self::sidecar_path(path))?)?;
        Self::parse_csv(&text, metadata)
    }

    pub fn parse_csv(text: &str, metadata: PowerMetadata) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Input("empty table".into()))?;
        let mut cols = header.split(',');
        if cols.next() != Some("alternative") || cols.next() != Some("n") {
            return Err(Error::Input(format!("unexpected table header `{header}`")));
        }
        let columns: Vec<String> = cols.map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let bad = |what: &str| Error::Input(format!("table row {}: {what}", i + 1));
            let mut cells = line.split(',');
            let alternative = cells
                .next()
                .ok_or_else(|| bad("missing alternative"))?
                .parse()
                .map_err(|_| bad("bad alternative"))?;
            let n = cells
                .next()
                .ok_or_else(|| bad("missing n"))?
                .parse()
                .map_err(|_| bad("bad n"))?;
            let rates = cells
                .map(|c| c.parse::<f64>().map_err(|_| bad("bad rate")))
                .collect::<Result<Vec<_>>>()?;
            if rates.len() != columns.len() {
                return Err(bad("wrong number of cells"));
            }
            rows.push(PowerRow {
                alternative,
                n,
                rates,
            });
        }
        Ok(Self {
            columns,
            rows,
            metadata,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PowerTable {
        PowerTable {
            columns: vec!["G".into(), "G*".into()],
            rows: vec![
                PowerRow {
                    alternative: AlternativeFamily::A(1.5),
                    n: 10,
                    rates: vec![0.125, 0.5],
                },
                PowerRow {
                    alternative: AlternativeFamily::Beta(0.5),
                    n: 20,
                    rates: vec![1.0, 0.0],
                },
            ],
            metadata: PowerMetadata {
                config: PowerStudyConfig {
                    alternatives: vec![AlternativeFamily::A(1.5), AlternativeFamily::Beta(0.5)],
                    sample_sizes: vec![10, 20],
                    statistics: vec![
                        "greenwood".parse().unwrap(),
                        "greenwood:co".parse().unwrap(),
                    ],
                    alpha: 0.05,
                    replications: 8,
                    null_replications: 100,
                    master_seed: 3,
                },
                rng_algorithm: crate::rng::RNG_ALGORITHM.into(),
                critical_values: vec![],
                wall_time_secs: 0.0,
            },
        }
    }

    #[test]
    fn csv_layout() {
        let csv = table().to_csv();
        assert_eq!(
            csv,
            "alternative,n,G,G*\nA:1.5,10,0.125,0.5\nbeta:0.5,20,1,0\n"
        );
    }

    #[test]
    fn round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("power.csv");
        let t = table();
        t.write_csv(&path).unwrap();
        assert!(dir.path().join("power.csv.meta.json").exists());
        assert_eq!(PowerTable::read_csv(&path).unwrap(), t);
        assert_eq!(t.rate(&AlternativeFamily::A(1.5), 10, "G*"), Some(0.5));
    }

    #[test]
    fn rejects_ragged_rows() {
        let meta = table().metadata;
        assert!(PowerTable::parse_csv("alternative,n,G\nA:1.5,10,0.1,0.2\n", meta).is_err());
    }
}
