use std::fmt;
use std::str::FromStr;

use crate::error::{GwError, Result};
use crate::gw::ObservationTable;

/// Name of the intercept column in designs and coefficient output.
pub const INTERCEPT: &str = "Intercept";

/// `response ~ predictor + predictor ...`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaSpec {
    pub response: String,
    pub predictors: Vec<String>,
    pub intercept: bool,
}

impl FormulaSpec {
    pub fn new<S: Into<String>>(response: S, predictors: Vec<S>) -> Result<Self> {
        let spec = Self {
            response: response.into(),
            predictors: predictors.into_iter().map(Into::into).collect(),
            intercept: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn without_intercept(mut self) -> Result<Self> {
        self.intercept = false;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.response.is_empty() {
            return Err(GwError::Config("empty response name".into()));
        }
        for (i, p) in self.predictors.iter().enumerate() {
            if p == &self.response {
                return Err(GwError::Config(format!("response '{p}' used as a predictor")));
            }
            if self.predictors[..i].contains(p) {
                return Err(GwError::Config(format!("duplicate predictor '{p}'")));
            }
        }
        if self.n_coefficients() == 0 {
            return Err(GwError::Config("model has no coefficients".into()));
        }
        Ok(())
    }

    /// Number of coefficients `m`, counting the intercept.
    pub fn n_coefficients(&self) -> usize {
        self.predictors.len() + usize::from(self.intercept)
    }

    /// Coefficient column names: intercept first, then predictors in order.
    pub fn coefficient_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_coefficients());
        if self.intercept {
            names.push(INTERCEPT.to_string());
        }
        names.extend(self.predictors.iter().cloned());
        names
    }

    /// Extracts the design matrix and response from `table`.
    pub fn design(&self, table: &ObservationTable) -> Result<Design> {
        let lookup = |name: &str| {
            table.attribute(name).ok_or_else(|| {
                GwError::Config(format!("formula variable '{name}' not found in data"))
            })
        };
        let y = lookup(&self.response)?.to_vec();
        let columns = self
            .predictors
            .iter()
            .map(|p| lookup(p))
            .collect::<Result<Vec<_>>>()?;
        let n = table.len();
        let m = self.n_coefficients();
        let mut x = Vec::with_capacity(n * m);
        for i in 0..n {
            if self.intercept {
                x.push(1.0);
            }
            x.extend(columns.iter().map(|c| c[i]));
        }
        Ok(Design {
            n,
            m,
            x,
            y,
            names: self.coefficient_names(),
        })
    }
}

impl fmt::Display for FormulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.response, self.predictors.join(" + "))
    }
}

impl FromStr for FormulaSpec {
    type Err = GwError;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

/// Row-major `n x m` design matrix with its response vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub n: usize,
    pub m: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub names: Vec<String>,
}

impl Design {
    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) || y.len() != n {
            return Err(GwError::InvalidInput("ragged or empty design".into()));
        }
        Ok(Self {
            n,
            m,
            x: rows.concat(),
            y,
            names: (0..m).map(|j| format!("x{j}")).collect(),
        })
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.m..(i + 1) * self.m]
    }

    /// Indices of non-intercept columns with zero variance.
    pub fn constant_columns(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&j| self.names[j] != INTERCEPT)
            .filter(|&j| {
                let first = self.x[j];
                (0..self.n).all(|i| self.x[i * self.m + j] == first)
            })
            .collect()
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '.'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(GwError::Formula {
            position: self.pos,
            message: message.into(),
        })
    }

    fn ident(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if is_ident_start(c) => {}
            Some(c) => return self.error(format!("expected {what}, found '{c}'")),
            None => return self.error(format!("expected {what}, found end of input")),
        }
        while let Some(c) = self.peek() {
            if !is_ident_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        Ok((start, &self.text[start..self.pos]))
    }

    fn expect(&mut self, token: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == token => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.error(format!("expected '{token}', found '{c}'")),
            None => self.error(format!("expected '{token}', found end of input")),
        }
    }
}

/// Parses `response ~ predictor (+ predictor)*`. The intercept is always
/// included. Error positions are byte offsets into `text`.
pub fn parse_formula(text: &str) -> Result<FormulaSpec> {
    let mut cur = Cursor { text, pos: 0 };
    if !text.contains('~') {
        cur.pos = text.len();
        return cur.error("missing '~'");
    }
    let (_, response) = cur.ident("response name")?;
    cur.expect('~')?;
    let mut predictors: Vec<String> = Vec::new();
    loop {
        let (start, name) = cur.ident("predictor name")?;
        if name == response {
            return Err(GwError::Formula {
                position: start,
                message: format!("response '{name}' repeated as a predictor"),
            });
        }
        if predictors.iter().any(|p| p == name) {
            return Err(GwError::Formula {
                position: start,
                message: format!("duplicate predictor '{name}'"),
            });
        }
        predictors.push(name.to_string());
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
        cur.expect('+')?;
    }
    Ok(FormulaSpec {
        response: response.to_string(),
        predictors,
        intercept: true,
    })
}
