use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{GwError, Result};
use crate::gw::{Attribute, ObservationTable};
use crate::io::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Point,
    Areal,
}

fn ingest_err<T>(msg: String) -> Result<T> {
    Err(GwError::Ingest(msg))
}

fn position(v: &Value, feature: usize) -> Result<[f64; 2]> {
    let arr = v.as_array().filter(|a| a.len() >= 2);
    let xy = arr.and_then(|a| Some([a[0].as_f64()?, a[1].as_f64()?]));
    match xy {
        Some(p) if p[0].is_finite() && p[1].is_finite() => Ok(p),
        _ => ingest_err(format!("feature {feature}: invalid position {v}")),
    }
}

fn ring(v: &Value, feature: usize) -> Result<Vec<[f64; 2]>> {
    let pts = v
        .as_array()
        .ok_or_else(|| GwError::Ingest(format!("feature {feature}: ring is not an array")))?
        .iter()
        .map(|p| position(p, feature))
        .collect::<Result<Vec<_>>>()?;
    if pts.len() < 3 {
        return ingest_err(format!("feature {feature}: ring has fewer than 3 positions"));
    }
    Ok(pts)
}

/// Signed shoelace area and area-weighted centroid of a ring. Falls back
/// to the vertex mean when the ring has zero area.
pub fn ring_centroid(ring: &[[f64; 2]]) -> (f64, [f64; 2]) {
    let mut pts = ring.to_vec();
    if pts.first() == pts.last() && pts.len() > 1 {
        pts.pop();
    }
    // shift to the first vertex for accuracy with large projected values
    let origin = pts[0];
    let mut a2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for k in 0..pts.len() {
        let p = pts[k];
        let q = pts[(k + 1) % pts.len()];
        let (px, py) = (p[0] - origin[0], p[1] - origin[1]);
        let (qx, qy) = (q[0] - origin[0], q[1] - origin[1]);
        let cross = px * qy - qx * py;
        a2 += cross;
        cx += (px + qx) * cross;
        cy += (py + qy) * cross;
    }
    if a2 == 0.0 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
        let my = pts.iter().map(|p| p[1]).sum::<f64>() / n;
        return (0.0, [mx, my]);
    }
    let area = 0.5 * a2;
    (
        area,
        [origin[0] + cx / (3.0 * a2), origin[1] + cy / (3.0 * a2)],
    )
}

fn representative_point(geom: &Value, feature: usize) -> Result<(Family, [f64; 2])> {
    let kind = geom.get("type").and_then(Value::as_str).unwrap_or("");
    let coords = geom.get("coordinates");
    let coords = match coords {
        Some(c) => c,
        None => return ingest_err(format!("feature {feature}: geometry has no coordinates")),
    };
    let exterior_rings: Vec<&Value> = match kind {
        "Point" => return Ok((Family::Point, position(coords, feature)?)),
        "Polygon" => coords.as_array().and_then(|r| r.first()).into_iter().collect(),
        "MultiPolygon" => coords
            .as_array()
            .map(|polys| polys.iter().filter_map(|p| p.as_array()?.first()).collect())
            .unwrap_or_default(),
        other => {
            return ingest_err(format!(
                "feature {feature}: unsupported geometry type '{other}'"
            ))
        }
    };
    if exterior_rings.is_empty() {
        return ingest_err(format!("feature {feature}: polygon has no exterior ring"));
    }
    let mut best: Option<(f64, [f64; 2])> = None;
    for r in exterior_rings {
        let (area, c) = ring_centroid(&ring(r, feature)?);
        if best.is_none_or(|(a, _)| area.abs() > a) {
            best = Some((area.abs(), c));
        }
    }
    Ok((Family::Areal, best.map(|(_, c)| c).unwrap_or_default()))
}

pub fn read_geojson_path(path: &Path, id_property: Option<&str>) -> Result<Dataset> {
    let file = std::fs::File::open(path)
        .map_err(|e| GwError::Ingest(format!("cannot open {}: {e}", path.display())))?;
    read_geojson(file, id_property)
}

/// Reads a FeatureCollection of Point or (Multi)Polygon features.
///
/// Polygons are represented by the area-weighted centroid of their
/// largest exterior ring. Properties numeric in every feature become
/// attributes; the others are kept as text.
pub fn read_geojson<R: Read>(reader: R, id_property: Option<&str>) -> Result<Dataset> {
    let root: Value = serde_json::from_reader(reader)?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return ingest_err("top-level object is not a FeatureCollection".into());
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| GwError::Ingest("FeatureCollection has no features array".into()))?;
    if features.is_empty() {
        return ingest_err("empty feature collection".into());
    }

    let empty = Map::new();
    let mut coords = Vec::with_capacity(features.len());
    let mut family = None;
    let mut props: Vec<&Map<String, Value>> = Vec::with_capacity(features.len());
    for (i, f) in features.iter().enumerate() {
        let geom = f
            .get("geometry")
            .filter(|g| !g.is_null())
            .ok_or_else(|| GwError::Ingest(format!("feature {i}: missing geometry")))?;
        let (fam, xy) = representative_point(geom, i)?;
        match family {
            None => family = Some(fam),
            Some(prev) if prev != fam => {
                return ingest_err(format!(
                    "feature {i}: mixed geometry types in collection (points and polygons)"
                ))
            }
            _ => {}
        }
        coords.push(xy);
        props.push(f.get("properties").and_then(Value::as_object).unwrap_or(&empty));
    }

    // property names in first-seen order
    let mut names: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    for p in &props {
        for k in p.keys() {
            if seen.insert(k.clone()) {
                names.push(k.clone());
            }
        }
    }
    let text = |v: Option<&Value>| match v {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Null) | None => String::new(),
        Some(other) => other.to_string(),
    };
    let mut attributes = Vec::new();
    let mut text_columns = Vec::new();
    for name in names {
        if Some(name.as_str()) == id_property {
            continue;
        }
        let numeric: Option<Vec<f64>> = props
            .iter()
            .map(|p| p.get(&name).and_then(Value::as_f64).filter(|v| v.is_finite()))
            .collect();
        match numeric {
            Some(values) => attributes.push(Attribute { name, values }),
            None => {
                let col: Vec<String> = props.iter().map(|p| text(p.get(&name))).collect();
                text_columns.push((name, col));
            }
        }
    }
    let labels = match id_property {
        Some(key) => Some(props.iter().map(|p| text(p.get(key))).collect()),
        None if features.iter().all(|f| f.get("id").is_some()) => {
            Some(features.iter().map(|f| text(f.get("id"))).collect())
        }
        None => text_columns.first().map(|(_, v)| v.clone()),
    };
    let table = ObservationTable::new(coords, attributes, labels)
        .map_err(|e| GwError::Ingest(e.to_string()))?;
    Ok(Dataset {
        table,
        text_columns,
        features: Some(features.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collection(features: &str) -> String {
        format!(r#"{{"type":"FeatureCollection","features":[{features}]}}"#)
    }

    #[test]
    fn unit_square_centroid() {
        let src = collection(
            r#"{"type":"Feature","properties":{"v":1.5,"name":"sq"},
                "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}}"#,
        );
        let ds = read_geojson(src.as_bytes(), None).unwrap();
        assert_eq!(ds.table.coords(), &[[0.5, 0.5]]);
        assert_eq!(ds.table.attribute("v"), Some(&[1.5][..]));
        assert_eq!(ds.table.labels().unwrap(), &["sq".to_string()]);
    }

    #[test]
    fn l_shape_centroid() {
        // two unit squares side by side plus one above the left one
        let (area, c) = ring_centroid(&[
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 2.0],
            [0.0, 2.0],
            [0.0, 0.0],
        ]);
        assert!((area - 3.0).abs() < 1e-12);
        // (0.5,0.5), (1.5,0.5), (0.5,1.5) averaged
        assert!((c[0] - 2.5 / 3.0).abs() < 1e-12);
        assert!((c[1] - 2.5 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn multipolygon_uses_largest_ring() {
        let src = collection(
            r#"{"type":"Feature","properties":{},
                "geometry":{"type":"MultiPolygon","coordinates":[
                  [[[10,10],[11,10],[11,11],[10,11],[10,10]]],
                  [[[0,0],[4,0],[4,4],[0,4],[0,0]]]
                ]}}"#,
        );
        let ds = read_geojson(src.as_bytes(), None).unwrap();
        assert_eq!(ds.table.coords(), &[[2.0, 2.0]]);
    }

    #[test]
    fn points_and_properties() {
        let src = collection(
            r#"{"type":"Feature","id":"a","properties":{"v":1,"t":"x"},"geometry":{"type":"Point","coordinates":[3,4]}},
               {"type":"Feature","id":"b","properties":{"v":2,"t":5},"geometry":{"type":"Point","coordinates":[5,6]}}"#,
        );
        let ds = read_geojson(src.as_bytes(), None).unwrap();
        assert_eq!(ds.table.coords(), &[[3.0, 4.0], [5.0, 6.0]]);
        assert_eq!(ds.table.attribute("v"), Some(&[1.0, 2.0][..]));
        assert!(ds.table.attribute("t").is_none());
        assert_eq!(ds.table.labels().unwrap(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn rejects_empty_and_mixed() {
        let empty = collection("");
        assert!(matches!(
            read_geojson(empty.as_bytes(), None),
            Err(GwError::Ingest(_))
        ));
        let mixed = collection(
            r#"{"type":"Feature","properties":{},"geometry":{"type":"Point","coordinates":[0,0]}},
               {"type":"Feature","properties":{},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}}"#,
        );
        let err = read_geojson(mixed.as_bytes(), None).unwrap_err();
        assert!(err.to_string().contains("feature 1"), "{err}");
        let line = collection(
            r#"{"type":"Feature","properties":{},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}}"#,
        );
        assert!(read_geojson(line.as_bytes(), None).is_err());
    }
}
