use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::descriptive::{SummaryStat, SummarySurface};
use crate::error::{GwError, Result};
use crate::io::{format_number, Dataset};
use crate::regression::{GwrResult, SearchResult};

/// Writes through a temporary file in the destination directory and
/// renames it into place only after `body` succeeds.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| GwError::Io(e.error))?;
    Ok(())
}

fn wants_geojson(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("geojson") | Some("json")
    )
}

/// Result columns appended after `id, x, y`.
type Columns = Vec<(String, Vec<f64>)>;

fn write_columns(path: &Path, data: &Dataset, columns: &Columns) -> Result<()> {
    if wants_geojson(path) {
        let features = data.features.as_ref().ok_or_else(|| {
            GwError::Config("GeoJSON output requires GeoJSON input".into())
        })?;
        return write_atomic(path, |w| write_geojson_columns(w, features, columns));
    }
    write_atomic(path, |w| write_csv_columns(w, data, columns))
}

fn write_csv_columns(w: &mut dyn Write, data: &Dataset, columns: &Columns) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let mut header = vec!["id".to_string(), "x".to_string(), "y".to_string()];
    header.extend(columns.iter().map(|(name, _)| name.clone()));
    wtr.write_record(&header)?;
    let table = &data.table;
    for i in 0..table.len() {
        let mut rec = vec![
            table.label(i),
            format_number(table.coords()[i][0]),
            format_number(table.coords()[i][1]),
        ];
        rec.extend(columns.iter().map(|(_, v)| format_number(v[i])));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn write_geojson_columns(w: &mut dyn Write, features: &[Value], columns: &Columns) -> Result<()> {
    let out: Vec<Value> = features
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut f = f.clone();
            let mut props = f
                .get("properties")
                .and_then(Value::as_object)
                .cloned()
                .unwrap_or_else(Map::new);
            for (name, values) in columns {
                props.insert(name.clone(), json_number(values[i]));
            }
            f["properties"] = Value::Object(props);
            f
        })
        .collect();
    let doc = json!({ "type": "FeatureCollection", "features": out });
    serde_json::to_writer(&mut *w, &doc)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Coefficient surface plus fitted values and residuals.
pub fn write_gwr(path: &Path, data: &Dataset, result: &GwrResult) -> Result<()> {
    let mut columns: Columns = result
        .coef_names
        .iter()
        .enumerate()
        .map(|(j, name)| (name.clone(), result.coef_column(j)))
        .collect();
    columns.push(("fitted".into(), result.fitted.clone()));
    columns.push(("residual".into(), result.residuals.clone()));
    write_columns(path, data, &columns)
}

/// One column per surface, named `<variable>_<stat>`. When skew is
/// requested a `<variable>_zero_spread` flag column (0/1) follows.
pub fn write_gwss(path: &Path, data: &Dataset, surfaces: &[SummarySurface]) -> Result<()> {
    let mut columns: Columns = Vec::new();
    for s in surfaces {
        columns.push((format!("{}_{}", s.variable, s.stat), s.values.clone()));
        if s.stat == SummaryStat::Skew {
            columns.push((
                format!("{}_zero_spread", s.variable),
                s.zero_spread.iter().map(|&z| if z { 1.0 } else { 0.0 }).collect(),
            ));
        }
    }
    write_columns(path, data, &columns)
}

/// Search trace as `candidate,score` rows in evaluation order.
pub fn write_trace_csv(path: &Path, result: &SearchResult) -> Result<()> {
    write_atomic(path, |w| {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wtr.write_record(["candidate", "score"])?;
        for p in &result.trace {
            wtr.write_record([format_number(p.candidate), format_number(p.score)])?;
        }
        wtr.flush()?;
        Ok(())
    })
}
