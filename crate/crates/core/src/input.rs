//! Text input format.
//!
//! ```text
//! n d
//! <n rows of d integers>
//! gens | ineqs
//! [grading
//!  <d integers>]
//! ```
//!
//! Blank lines and text after `#` are ignored.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::Error;
use crate::linalg::primitivize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Gens,
    Ineqs,
}

/// The cone description of an input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeInput {
    pub dim: usize,
    pub rows: Vec<Vec<BigInt>>,
    pub kind: InputKind,
    /// Primitive, if given.
    pub grading: Option<Vec<BigInt>>,
}

impl ConeInput {
    pub fn generators(rows: Vec<Vec<BigInt>>, dim: usize) -> Self {
        ConeInput {
            dim,
            rows,
            kind: InputKind::Gens,
            grading: None,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>], kind: InputKind) -> Self {
        let dim = rows.first().map_or(0, Vec::len);
        ConeInput {
            dim,
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            kind,
            grading: None,
        }
    }

    pub fn with_grading(mut self, grading: &[i64]) -> Self {
        self.grading = Some(grading.iter().map(|&x| BigInt::from(x)).collect());
        self
    }

    /// Renders the input in the text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows.len(), self.dim);
        for r in &self.rows {
            s.push_str(&join(r));
            s.push('\n');
        }
        s.push_str(match self.kind {
            InputKind::Gens => "gens\n",
            InputKind::Ineqs => "ineqs\n",
        });
        if let Some(g) = &self.grading {
            s.push_str("grading\n");
            s.push_str(&join(g));
            s.push('\n');
        }
        s
    }
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn integers(line: usize, text: &str) -> Result<Vec<BigInt>, Error> {
    text.split_whitespace()
        .map(|t| BigInt::from_str(t).map_err(|_| Error::parse(line, format!("not an integer: {t:?}"))))
        .collect()
}

pub fn parse_input(text: &str) -> Result<ConeInput, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let h: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::parse(hl, "header must be two nonnegative integers \"n d\""))?;
    let [n, d] = h[..] else {
        return Err(Error::parse(hl, "header must be two nonnegative integers \"n d\""));
    };
    if n == 0 {
        return Err(Error::parse(hl, "no rows"));
    }
    if d == 0 {
        return Err(Error::parse(hl, "dimension must be positive"));
    }

    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::parse(text.lines().count(), format!("expected {n} rows, found {k}")))?;
        let row = integers(ln, l)?;
        if row.len() != d {
            return Err(Error::parse(
                ln,
                format!("row {} has {} entries, expected {d}", k + 1, row.len()),
            ));
        }
        rows.push(row);
    }

    let (kl, kw) = lines
        .next()
        .ok_or_else(|| Error::parse(text.lines().count(), "missing input kind (gens or ineqs)"))?;
    let kind = match kw {
        "gens" => InputKind::Gens,
        "ineqs" => InputKind::Ineqs,
        other => {
            return Err(Error::parse(
                kl,
                format!("expected \"gens\" or \"ineqs\", found {other:?}"),
            ));
        }
    };

    let mut grading = None;
    if let Some((gl, g)) = lines.next() {
        if g != "grading" {
            return Err(Error::parse(gl, format!("unexpected {g:?}")));
        }
        let (vl, v) = lines
            .next()
            .ok_or_else(|| Error::parse(gl, "grading keyword without a grading"))?;
        let v = integers(vl, v)?;
        if v.len() != d {
            return Err(Error::parse(
                vl,
                format!("grading has {} entries, expected {d}", v.len()),
            ));
        }
        let p = primitivize(&v).map_err(|_| Error::parse(vl, "grading is zero"))?;
        grading = Some(p);
        if let Some((el, e)) = lines.next() {
            return Err(Error::parse(el, format!("unexpected {e:?}")));
        }
    }

    Ok(ConeInput {
        dim: d,
        rows,
        kind,
        grading,
    })
}
