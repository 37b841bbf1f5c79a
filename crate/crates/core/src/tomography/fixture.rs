//! Recorded measurement tables.
//!
//! CSV columns: `label,Z0,Z1,X+,X-,Y+,Y-,P0,P1`; empty cells mean "not
//! measured". A label ending in an integer is a run, `Mean value` is the
//! published mean, anything else is a reference row.

use super::{reconstruct, Basis, DensityMatrix1Q};
use crate::error::{Error, Result};
use serde::Serialize;
use std::path::Path;

/// Sum-to-one slack before a row is flagged.
const ROW_SUM_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "run", rename_all = "snake_case")]
pub enum RowKind {
    Run(u32),
    Mean,
    Reference,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureRow {
    pub label: String,
    pub kind: RowKind,
    pub source: String,
    pub z: Option<[f64; 2]>,
    pub x: Option<[f64; 2]>,
    pub y: Option<[f64; 2]>,
    /// Position-register probabilities, when recorded.
    pub position: Option<[f64; 2]>,
}

impl FixtureRow {
    pub fn pair(&self, basis: Basis) -> Option<[f64; 2]> {
        match basis {
            Basis::Z => self.z,
            Basis::X => self.x,
            Basis::Y => self.y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectationSource {
    MeanRow,
    RunAverage,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureEstimate {
    pub basis: Basis,
    pub value: f64,
    pub source: ExpectationSource,
    /// Average of `p₀ − p₁` over run rows, when there are any.
    pub run_average: Option<f64>,
    pub runs: usize,
}

/// Rows from one or more fixture files.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TomographyFixture {
    pub rows: Vec<FixtureRow>,
}

const COLUMNS: [&str; 9] = ["label", "Z0", "Z1", "X+", "X-", "Y+", "Y-", "P0", "P1"];

fn classify(label: &str) -> RowKind {
    let trimmed = label.trim();
    if trimmed.eq_ignore_ascii_case("mean value") || trimmed.eq_ignore_ascii_case("mean") {
        return RowKind::Mean;
    }
    let digits: String = trimmed
        .chars()
        .rev()
        .take_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    match digits.parse() {
        Ok(n) if digits.len() < trimmed.len() => RowKind::Run(n),
        _ => RowKind::Reference,
    }
}

impl TomographyFixture {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| parse_err(1, e))?
            .clone();
        let col: Vec<Option<usize>> = COLUMNS
            .iter()
            .map(|c| headers.iter().position(|h| h == *c))
            .collect();
        if col[0].is_none() {
            return Err(Error::Parse {
                line: 1,
                message: "missing 'label' column".into(),
            });
        }
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                parse_err(line, e)
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let cell = |i: usize| -> Result<Option<f64>> {
                match col[i].and_then(|c| rec.get(c)).filter(|s| !s.is_empty()) {
                    None => Ok(None),
                    Some(s) => s.parse().map(Some).map_err(|_| Error::Parse {
                        line,
                        message: format!("'{s}' in column {} is not a number", COLUMNS[i]),
                    }),
                }
            };
            let pair = |i: usize| -> Result<Option<[f64; 2]>> {
                match (cell(i)?, cell(i + 1)?) {
                    (Some(a), Some(b)) => Ok(Some([a, b])),
                    (None, None) => Ok(None),
                    _ => Err(Error::Parse {
                        line,
                        message: format!("columns {} and {} must both be set", COLUMNS[i], COLUMNS[i + 1]),
                    }),
                }
            };
            let label = rec.get(col[0].unwrap()).unwrap_or("").to_string();
            rows.push(FixtureRow {
                kind: classify(&label),
                label,
                source: source.to_string(),
                z: pair(1)?,
                x: pair(3)?,
                y: pair(5)?,
                position: pair(7)?,
            });
        }
        Ok(TomographyFixture { rows })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Concatenates the rows of several fixtures.
    pub fn merge(parts: impl IntoIterator<Item = TomographyFixture>) -> Self {
        TomographyFixture {
            rows: parts.into_iter().flat_map(|p| p.rows).collect(),
        }
    }

    /// Human-readable notes on rows whose probability pairs do not sum to 1.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            let named = [("Z", r.z), ("X", r.x), ("Y", r.y), ("position", r.position)];
            for (name, p) in named {
                if let Some([a, b]) = p {
                    if (a + b - 1.0).abs() > ROW_SUM_TOL {
                        out.push(format!(
                            "{}: row '{}' {name} probabilities sum to {:.6}",
                            r.source,
                            r.label,
                            a + b
                        ));
                    }
                }
            }
        }
        out
    }

    /// `⟨basis⟩`, from the published mean row when present, otherwise the
    /// average over run rows.
    pub fn estimate(&self, basis: Basis) -> Option<FixtureEstimate> {
        let runs: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| matches!(r.kind, RowKind::Run(_)))
            .filter_map(|r| r.pair(basis))
            .map(|[a, b]| a - b)
            .collect();
        let run_average = (!runs.is_empty()).then(|| runs.iter().sum::<f64>() / runs.len() as f64);
        let mean = self
            .rows
            .iter()
            .filter(|r| r.kind == RowKind::Mean)
            .find_map(|r| r.pair(basis))
            .map(|[a, b]| a - b);
        let (value, source) = match (mean, run_average) {
            (Some(m), _) => (m, ExpectationSource::MeanRow),
            (None, Some(a)) => (a, ExpectationSource::RunAverage),
            (None, None) => return None,
        };
        Some(FixtureEstimate {
            basis,
            value,
            source,
            run_average,
            runs: runs.len(),
        })
    }

    /// Estimates for Z, X and Y, failing if a basis is missing.
    pub fn estimates(&self) -> Result<[FixtureEstimate; 3]> {
        let get = |b: Basis| {
            self.estimate(b)
                .ok_or_else(|| Error::Measurement(format!("fixture has no {b}-basis data")))
        };
        Ok([get(Basis::Z)?, get(Basis::X)?, get(Basis::Y)?])
    }

    /// `½(I + xX + yY + zZ)` from [`TomographyFixture::estimates`].
    pub fn reconstruct(&self) -> Result<DensityMatrix1Q> {
        let [z, x, y] = self.estimates()?;
        Ok(reconstruct(x.value, y.value, z.value))
    }
}

fn parse_err(line: usize, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        line,
        message: e.to_string(),
    }
}
