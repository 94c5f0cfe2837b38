//! UCR-style dataset files and result documents.
//!
//! Dataset files hold one series per line: a class label followed by the
//! values, separated by commas or by runs of whitespace (detected from the
//! first non-blank line). Blank lines are skipped. Labels are parsed as
//! numbers and rounded to the nearest integer, so `1.0000000e+00` reads as 1.
//!
//! Result documents are TOML. Floats are written in shortest round-trip
//! form, so [`read_result`] reproduces every value exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{
    DiscoveryConfig, DiscoveryResult, LookupNorm, PaaRatio, PruningThreshold, Shapelet,
    TimeSeriesDataset,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    #[default]
    Auto,
    Comma,
    Whitespace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetFileSpec {
    pub path: PathBuf,
    pub delimiter: Delimiter,
}

impl DatasetFileSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            delimiter: Delimiter::Auto,
        }
    }
}

pub fn load_dataset(spec: &DatasetFileSpec) -> Result<TimeSeriesDataset> {
    let text = fs::read_to_string(&spec.path).map_err(|source| Error::Io {
        path: spec.path.clone(),
        source,
    })?;
    parse_dataset(&text, spec.delimiter, &spec.path)
}

/// Parses dataset text; `origin` is only used in error messages.
pub fn parse_dataset(text: &str, delimiter: Delimiter, origin: &Path) -> Result<TimeSeriesDataset> {
    let mut delimiter = delimiter;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::new();
    let mut expected = None;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if delimiter == Delimiter::Auto {
            delimiter = if line.contains(',') {
                Delimiter::Comma
            } else {
                Delimiter::Whitespace
            };
        }
        let tokens: Vec<&str> = match delimiter {
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            _ => line.split_whitespace().collect(),
        };
        let parse = |column: usize, token: &str| -> Result<f64> {
            token
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    path: origin.to_path_buf(),
                    line: line_no,
                    column,
                    token: token.to_string(),
                })
        };
        let values = tokens.len() - 1;
        match expected {
            None => expected = Some(values),
            Some(e) if e != values => {
                return Err(Error::RaggedLine {
                    path: origin.to_path_buf(),
                    line: line_no,
                    expected: e,
                    found: values,
                })
            }
            _ => {}
        }
        let label = parse(1, tokens[0])?.round() as i64;
        let row = tokens[1..]
            .iter()
            .enumerate()
            .map(|(k, t)| parse(k + 2, t))
            .collect::<Result<Vec<_>>>()?;
        labels.push(label);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile {
            path: origin.to_path_buf(),
        });
    }
    TimeSeriesDataset::new(rows, labels)
}

/// Comma-separated UCR text: label first, then the values.
pub fn format_dataset(dataset: &TimeSeriesDataset) -> String {
    let mut out = String::new();
    for (row, label) in dataset.rows().zip(dataset.labels()) {
        out.push_str(&label.to_string());
        for v in row {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(dataset: &TimeSeriesDataset, path: &Path) -> Result<()> {
    write_text(path, &format_dataset(dataset))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

const FORMAT_NAME: &str = "shapelet-discovery-result";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ResultDoc {
    format: String,
    version: u32,
    config: ConfigDoc,
    summary: SummaryDoc,
    #[serde(default)]
    shapelets: Vec<ShapeletDoc>,
    transform: TransformDoc,
}

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    paa_ratio: String,
    percentile: u8,
    length_fractions: Vec<f64>,
    /// String so the full u64 range survives TOML's i64 integers.
    seed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    candidate_budget: Option<u64>,
    lookup: String,
}

#[derive(Serialize, Deserialize)]
struct SummaryDoc {
    compressed_len: usize,
    shapelet_lengths: Vec<usize>,
    pruning: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    sampled: u64,
    considered: u64,
    refused: u64,
    rejected: u64,
    accepted: u64,
    window_evaluations: u64,
    accuracy_trace: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ShapeletDoc {
    origin_series: usize,
    origin_start: usize,
    length: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TransformDoc {
    rows: Vec<Vec<f64>>,
}

fn lookup_name(norm: LookupNorm) -> &'static str {
    match norm {
        LookupNorm::Normalized => "normalized",
        LookupNorm::Unnormalized => "unnormalized",
    }
}

/// Renders a result as a TOML document.
pub fn format_result(result: &DiscoveryResult) -> Result<String> {
    let cfg = &result.config;
    let doc = ResultDoc {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        config: ConfigDoc {
            paa_ratio: cfg.paa_ratio.to_string(),
            percentile: cfg.percentile,
            length_fractions: cfg.length_fractions.clone(),
            seed: cfg.seed.to_string(),
            candidate_budget: cfg.candidate_budget,
            lookup: lookup_name(cfg.lookup).into(),
        },
        summary: SummaryDoc {
            compressed_len: result.compressed_len,
            shapelet_lengths: result.shapelet_lengths.clone(),
            pruning: result.threshold.radius().is_some(),
            epsilon: result.threshold.radius(),
            sampled: result.sampled_count,
            considered: result.considered_count,
            refused: result.refused_count,
            rejected: result.rejected_count,
            accepted: result.accepted_count(),
            window_evaluations: result.window_evaluations,
            accuracy_trace: result.accuracy_trace.clone(),
        },
        shapelets: result
            .accepted
            .iter()
            .map(|s| ShapeletDoc {
                origin_series: s.origin_series,
                origin_start: s.origin_start,
                length: s.len(),
                values: s.values.clone(),
            })
            .collect(),
        transform: TransformDoc {
            rows: result.transform.clone(),
        },
    };
    toml::to_string(&doc).map_err(|e| Error::Document(e.to_string()))
}

/// Parses a document produced by [`format_result`].
pub fn parse_result(text: &str) -> Result<DiscoveryResult> {
    let doc: ResultDoc = toml::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let bad = |msg: String| Error::Document(msg);
    if doc.format != FORMAT_NAME || doc.version != FORMAT_VERSION {
        return Err(bad(format!(
            "unsupported document {} v{}",
            doc.format, doc.version
        )));
    }
    let lookup = match doc.config.lookup.as_str() {
        "normalized" => LookupNorm::Normalized,
        "unnormalized" => LookupNorm::Unnormalized,
        other => return Err(bad(format!("unknown lookup mode {other:?}"))),
    };
    let config = DiscoveryConfig {
        paa_ratio: doc.config.paa_ratio.parse::<PaaRatio>()?,
        percentile: doc.config.percentile,
        length_fractions: doc.config.length_fractions,
        seed: doc
            .config
            .seed
            .parse()
            .map_err(|_| bad(format!("bad seed {:?}", doc.config.seed)))?,
        candidate_budget: doc.config.candidate_budget,
        lookup,
    };
    let threshold = match (doc.summary.pruning, doc.summary.epsilon) {
        (false, None) => PruningThreshold::Disabled,
        (true, Some(eps)) => PruningThreshold::Radius(eps),
        _ => return Err(bad("pruning flag and epsilon disagree".into())),
    };
    let accepted = doc
        .shapelets
        .into_iter()
        .map(|s| {
            if s.values.len() != s.length {
                return Err(bad(format!(
                    "shapelet declares length {} but has {} values",
                    s.length,
                    s.values.len()
                )));
            }
            Ok(Shapelet {
                values: s.values,
                origin_series: s.origin_series,
                origin_start: s.origin_start,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if accepted.len() as u64 != doc.summary.accepted {
        return Err(bad("accepted count does not match shapelet list".into()));
    }
    let result = DiscoveryResult {
        config,
        compressed_len: doc.summary.compressed_len,
        shapelet_lengths: doc.summary.shapelet_lengths,
        threshold,
        accepted,
        sampled_count: doc.summary.sampled,
        considered_count: doc.summary.considered,
        refused_count: doc.summary.refused,
        rejected_count: doc.summary.rejected,
        window_evaluations: doc.summary.window_evaluations,
        transform: doc.transform.rows,
        accuracy_trace: doc.summary.accuracy_trace,
    };
    result.check_consistency()?;
    Ok(result)
}

pub fn write_result(result: &DiscoveryResult, path: &Path) -> Result<()> {
    write_text(path, &format_result(result)?)
}

pub fn read_result(path: &Path) -> Result<DiscoveryResult> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_result(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<TimeSeriesDataset> {
        parse_dataset(text, Delimiter::Auto, Path::new("mem"))
    }

    #[test]
    fn comma_file() {
        let ds = parse("1,0.0,1.0\n2,1.0,0.0\n").unwrap();
        assert_eq!((ds.n_series(), ds.series_len()), (2, 2));
        assert_eq!(ds.labels(), &[1, 2]);
        assert_eq!(ds.row(1), &[1.0, 0.0]);
    }

    #[test]
    fn whitespace_file_with_blank_lines() {
        let ds = parse("1 0.5 0.25\n\n1 0.5   0.25\n2\t9 9\n").unwrap();
        assert_eq!((ds.n_series(), ds.series_len()), (3, 2));
    }

    #[test]
    fn scientific_labels_round() {
        let ds = parse("1.0000000e+00 1 2\n-2.0000000e+00 3 4\n").unwrap();
        assert_eq!(ds.labels(), &[1, -2]);
    }

    #[test]
    fn ragged_line_is_reported() {
        let err = parse("1,0,0,0\n2,0,0,0,0\n").unwrap_err();
        assert!(err.to_string().contains("ragged line 2"), "{err}");
    }

    #[test]
    fn bad_token_reports_line_and_column() {
        let err = parse("1,0,0\n2,0,x\n").unwrap_err();
        assert!(
            matches!(err, Error::Parse { line: 2, column: 3, ref token, .. } if token == "x"),
            "{err}"
        );
        assert!(parse("1,0,nan\n2,0,1\n").is_err());
        assert!(matches!(parse("\n\n"), Err(Error::EmptyFile { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_dataset(&DatasetFileSpec::new("/nonexistent/x.txt")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    fn sample_result(shapelets: Vec<Shapelet>) -> DiscoveryResult {
        let k = shapelets.len();
        DiscoveryResult {
            config: DiscoveryConfig {
                paa_ratio: PaaRatio::new(1, 3).unwrap(),
                seed: u64::MAX,
                candidate_budget: Some(99),
                ..DiscoveryConfig::default()
            },
            compressed_len: 10,
            shapelet_lengths: vec![2, 4, 6],
            threshold: PruningThreshold::Radius(0.1 + 0.2),
            sampled_count: 99,
            considered_count: k as u64 + 4,
            refused_count: 95 - k as u64,
            rejected_count: 4,
            window_evaluations: 1234,
            transform: (0..k).map(|i| vec![i as f64 / 3.0, 1e-300, 7.0]).collect(),
            accuracy_trace: (0..k).map(|i| (i + 1) as f64 / 7.0).collect(),
            accepted: shapelets,
        }
    }

    #[test]
    fn round_trip_keeps_lengths_and_values() {
        let result = sample_result(vec![
            Shapelet {
                values: vec![0.1, -2.5e-17, 3.0],
                origin_series: 1,
                origin_start: 4,
            },
            Shapelet {
                values: vec![1.0 / 3.0, 2.0, 3.0, 4.0, 5.0],
                origin_series: 2,
                origin_start: 0,
            },
        ]);
        let text = format_result(&result).unwrap();
        let back = parse_result(&text).unwrap();
        assert_eq!(back, result);
        assert_eq!(back.accepted[0].len(), 3);
        assert_eq!(back.accepted[1].len(), 5);
    }

    #[test]
    fn empty_result_round_trips() {
        let mut result = sample_result(Vec::new());
        result.threshold = PruningThreshold::Disabled;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("res.toml");
        write_result(&result, &path).unwrap();
        let back = read_result(&path).unwrap();
        assert_eq!(back, result);
        assert!(back.transform.is_empty());
    }

    #[test]
    fn unwritable_path_errors() {
        let result = sample_result(Vec::new());
        assert!(write_result(&result, Path::new("/nonexistent/dir/res.toml")).is_err());
    }

    #[test]
    fn dataset_text_round_trip() {
        let ds = parse("1,0.1,0.2,0.30000000000000004\n-4,1e-7,2,3\n").unwrap();
        assert_eq!(parse(&format_dataset(&ds)).unwrap(), ds);
    }
}
