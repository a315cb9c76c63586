use std::collections::HashSet;

use crate::error::{GwError, Result};

/// A named numeric column of an [`ObservationTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<f64>,
}

/// `n` spatial observations: projected planar coordinates plus named
/// numeric attributes, optionally with a row label per observation.
///
/// Construction validates the table; once built it is immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationTable {
    coords: Vec<[f64; 2]>,
    attributes: Vec<Attribute>,
    labels: Option<Vec<String>>,
}

impl ObservationTable {
    pub fn new(
        coords: Vec<[f64; 2]>,
        attributes: Vec<Attribute>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(GwError::InvalidInput("table has no observations".into()));
        }
        if let Some(row) = coords.iter().position(|c| !c[0].is_finite() || !c[1].is_finite()) {
            return Err(GwError::InvalidInput(format!(
                "non-finite coordinate at row {row}"
            )));
        }
        let mut seen = HashSet::new();
        for attr in &attributes {
            if attr.name.is_empty() {
                return Err(GwError::InvalidInput("empty attribute name".into()));
            }
            if !seen.insert(attr.name.as_str()) {
                return Err(GwError::InvalidInput(format!(
                    "duplicate attribute name '{}'",
                    attr.name
                )));
            }
            if attr.values.len() != n {
                return Err(GwError::InvalidInput(format!(
                    "attribute '{}' has {} values, expected {n}",
                    attr.name,
                    attr.values.len()
                )));
            }
            if let Some(row) = attr.values.iter().position(|v| !v.is_finite()) {
                return Err(GwError::InvalidInput(format!(
                    "non-finite value in attribute '{}' at row {row}",
                    attr.name
                )));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(GwError::InvalidInput(format!(
                    "{} row labels for {n} observations",
                    labels.len()
                )));
            }
        }
        Ok(Self {
            coords,
            attributes,
            labels,
        })
    }

    /// Convenience constructor from `(name, values)` pairs.
    pub fn from_columns<S: Into<String>>(
        coords: Vec<[f64; 2]>,
        columns: Vec<(S, Vec<f64>)>,
    ) -> Result<Self> {
        let attributes = columns
            .into_iter()
            .map(|(name, values)| Attribute {
                name: name.into(),
                values,
            })
            .collect();
        Self::new(coords, attributes, None)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&[f64]> {
        self.attributes
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.values.as_slice())
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.attributes.iter().map(|a| a.name.as_str())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label for row `i`: the stored label, or the 1-based row number.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => (i + 1).to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_table() {
        let err = ObservationTable::from_columns::<&str>(vec![], vec![]).unwrap_err();
        assert!(matches!(err, GwError::InvalidInput(_)));
    }

    #[test]
    fn rejects_bad_columns() {
        let coords = vec![[0.0, 0.0], [1.0, 1.0]];
        assert!(ObservationTable::from_columns(coords.clone(), vec![("a", vec![1.0])]).is_err());
        assert!(ObservationTable::from_columns(
            coords.clone(),
            vec![("a", vec![1.0, 2.0]), ("a", vec![1.0, 2.0])]
        )
        .is_err());
        assert!(ObservationTable::from_columns(coords.clone(), vec![("", vec![1.0, 2.0])]).is_err());
        assert!(
            ObservationTable::from_columns(coords, vec![("a", vec![1.0, f64::NAN])]).is_err()
        );
        assert!(ObservationTable::from_columns::<&str>(vec![[f64::INFINITY, 0.0]], vec![]).is_err());
    }

    #[test]
    fn lookups() {
        let t = ObservationTable::from_columns(
            vec![[0.0, 0.0], [1.0, 1.0]],
            vec![("y", vec![1.0, 2.0]), ("x", vec![3.0, 4.0])],
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.attribute("x"), Some(&[3.0, 4.0][..]));
        assert_eq!(t.attribute("z"), None);
        assert_eq!(t.attribute_names().collect::<Vec<_>>(), vec!["y", "x"]);
        assert_eq!(t.label(1), "2");
    }
}
