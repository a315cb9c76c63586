//! Data ingestion (CSV, GeoJSON) and result output.

pub mod csv_table;
pub mod geojson;
pub mod output;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{GwError, Result};
use crate::gw::ObservationTable;

pub use csv_table::{read_csv, read_csv_path, write_table_csv, CoordColumns};
pub use geojson::{read_geojson, read_geojson_path, ring_centroid};
pub use output::{write_atomic, write_gwr, write_gwss, write_trace_csv};

/// An ingested dataset: the numeric table plus whatever was kept for
/// output (text columns and, for GeoJSON input, the source features).
#[derive(Debug, Clone)]
pub struct Dataset {
    pub table: ObservationTable,
    pub text_columns: Vec<(String, Vec<String>)>,
    pub features: Option<Vec<Value>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    GeoJson,
}

impl InputFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("geojson") | Some("json") => InputFormat::GeoJson,
            _ => InputFormat::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(InputFormat::Csv),
            "geojson" => Ok(InputFormat::GeoJson),
            _ => Err(GwError::Config(format!("unknown input format '{s}'"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Csv => "csv",
            InputFormat::GeoJson => "geojson",
        })
    }
}

/// Reads `path` as `format`. For GeoJSON, `cols.id` names the label
/// property; the coordinate column names are unused.
pub fn ingest(path: &Path, format: InputFormat, cols: &CoordColumns) -> Result<Dataset> {
    match format {
        InputFormat::Csv => read_csv_path(path, cols),
        InputFormat::GeoJson => read_geojson_path(path, cols.id.as_deref()),
    }
}

/// Shortest decimal string that parses back to exactly `v`.
pub fn format_number(v: f64) -> String {
    format!("{v}")
}
