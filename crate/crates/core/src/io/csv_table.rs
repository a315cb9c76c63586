use std::io::{Read, Write};
use std::path::Path;

use crate::error::{GwError, Result};
use crate::gw::{Attribute, ObservationTable};
use crate::io::{format_number, Dataset};

/// Which CSV columns hold coordinates and, optionally, row labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordColumns {
    pub x: String,
    pub y: String,
    /// Label column; defaults to the first non-numeric column.
    pub id: Option<String>,
}

impl Default for CoordColumns {
    fn default() -> Self {
        Self {
            x: "X".into(),
            y: "Y".into(),
            id: None,
        }
    }
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn read_csv_path(path: &Path, cols: &CoordColumns) -> Result<Dataset> {
    let file = std::fs::File::open(path)
        .map_err(|e| GwError::Ingest(format!("cannot open {}: {e}", path.display())))?;
    read_csv(file, cols)
}

/// Reads a headed CSV. Coordinate columns must be numeric in every row;
/// other columns that are numeric throughout become attributes and the
/// rest are kept as text labels.
pub fn read_csv<R: Read>(reader: R, cols: &CoordColumns) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| GwError::Ingest(format!("missing coordinate column '{name}'")))
    };
    let xi = find(&cols.x)?;
    let yi = find(&cols.y)?;
    let id_idx = match &cols.id {
        Some(name) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| GwError::Ingest(format!("missing id column '{name}'")))?,
        ),
        None => None,
    };

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != headers.len() {
            return Err(GwError::Ingest(format!(
                "row {} has {} fields, expected {}",
                row + 1,
                record.len(),
                headers.len()
            )));
        }
        for (c, cell) in record.iter().enumerate() {
            cells[c].push(cell.to_string());
        }
    }
    let n = cells.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(GwError::Ingest("no data rows".into()));
    }

    let coord_column = |c: usize| -> Result<Vec<f64>> {
        cells[c]
            .iter()
            .enumerate()
            .map(|(row, cell)| {
                parse_number(cell).ok_or_else(|| {
                    GwError::Ingest(format!(
                        "non-numeric coordinate '{cell}' in column '{}' at row {}",
                        headers[c],
                        row + 1
                    ))
                })
            })
            .collect()
    };
    let xs = coord_column(xi)?;
    let ys = coord_column(yi)?;
    let coords: Vec<[f64; 2]> = xs.into_iter().zip(ys).map(|(x, y)| [x, y]).collect();

    let mut attributes = Vec::new();
    let mut text_columns = Vec::new();
    for (c, name) in headers.iter().enumerate() {
        if c == xi || c == yi || Some(c) == id_idx {
            continue;
        }
        let parsed: Option<Vec<f64>> = cells[c].iter().map(|s| parse_number(s)).collect();
        match parsed {
            Some(values) => attributes.push(Attribute {
                name: name.clone(),
                values,
            }),
            None => text_columns.push((name.clone(), cells[c].clone())),
        }
    }
    let labels = match id_idx {
        Some(c) => Some(cells[c].clone()),
        None => text_columns.first().map(|(_, v)| v.clone()),
    };
    let table = ObservationTable::new(coords, attributes, labels)
        .map_err(|e| GwError::Ingest(e.to_string()))?;
    Ok(Dataset {
        table,
        text_columns,
        features: None,
    })
}

/// Writes `table` as CSV: optional `id` column, the coordinate columns,
/// then every attribute, numbers in shortest round-trip form.
pub fn write_table_csv<W: Write>(writer: W, table: &ObservationTable, cols: &CoordColumns) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let id_name = cols.id.clone().unwrap_or_else(|| "id".into());
    let mut header = Vec::new();
    if table.labels().is_some() {
        header.push(id_name);
    }
    header.push(cols.x.clone());
    header.push(cols.y.clone());
    header.extend(table.attribute_names().map(str::to_string));
    wtr.write_record(&header)?;
    for i in 0..table.len() {
        let mut rec = Vec::with_capacity(header.len());
        if let Some(labels) = table.labels() {
            rec.push(labels[i].clone());
        }
        rec.push(format_number(table.coords()[i][0]));
        rec.push(format_number(table.coords()[i][1]));
        rec.extend(table.attributes().iter().map(|a| format_number(a.values[i])));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
