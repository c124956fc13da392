//! Run reports and their text and JSON renderings.
//!
//! In JSON every integer of the result (vector entries, determinants,
//! series coefficients) is written as a decimal string.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::input::InputKind;
use crate::poly;
use crate::series::{format_cyclotomic_denominator, format_denominator, HilbertSeries};

/// Serde adapter writing big integers (and nested containers of them) as
/// decimal strings.
pub mod dec {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub trait Dec: Sized {
        fn to_json(&self) -> Value;
        fn from_json(v: &Value) -> Result<Self, String>;
    }

    impl Dec for BigInt {
        fn to_json(&self) -> Value {
            Value::String(self.to_string())
        }
        fn from_json(v: &Value) -> Result<Self, String> {
            v.as_str()
                .and_then(|s| BigInt::from_str(s).ok())
                .ok_or_else(|| format!("expected a decimal string, found {v}"))
        }
    }

    impl Dec for BigRational {
        fn to_json(&self) -> Value {
            Value::String(self.to_string())
        }
        fn from_json(v: &Value) -> Result<Self, String> {
            v.as_str()
                .and_then(|s| BigRational::from_str(s).ok())
                .ok_or_else(|| format!("expected a rational string, found {v}"))
        }
    }

    impl<T: Dec> Dec for Vec<T> {
        fn to_json(&self) -> Value {
            Value::Array(self.iter().map(Dec::to_json).collect())
        }
        fn from_json(v: &Value) -> Result<Self, String> {
            v.as_array()
                .ok_or_else(|| format!("expected an array, found {v}"))?
                .iter()
                .map(T::from_json)
                .collect()
        }
    }

    impl<T: Dec> Dec for Option<T> {
        fn to_json(&self) -> Value {
            self.as_ref().map_or(Value::Null, Dec::to_json)
        }
        fn from_json(v: &Value) -> Result<Self, String> {
            if v.is_null() {
                Ok(None)
            } else {
                T::from_json(v).map(Some)
            }
        }
    }

    pub fn serialize<S: Serializer, T: Dec>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        x.to_json().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Dec>(d: D) -> Result<T, D::Error> {
        let v = Value::deserialize(d)?;
        T::from_json(&v).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationSummary {
    /// Number of simplicial cones.
    pub size: u64,
    /// `Σ |det|`, the number of components of the Stanley decomposition.
    #[serde(with = "dec")]
    pub stanley_components: BigInt,
    pub partial: bool,
    /// Sorted simplex keys (indices into `generators`) with `|det|`, when
    /// kept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplices: Option<Vec<SimplexRecord>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexRecord {
    pub key: Vec<usize>,
    #[serde(with = "dec")]
    pub det: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub simplices: u64,
    pub unimodular: u64,
    pub potentially_unimodular: u64,
    pub nongeneric: u64,
    pub inherited_dets: u64,
    pub det_mismatches: u64,
}

/// Values that depend on scheduling or the machine.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub arithmetic: String,
    pub threads: usize,
    pub seconds: BTreeMap<String, f64>,
    pub pyramids_per_level: Vec<u64>,
    pub recursive_pyramids: u64,
    pub discarded_height_one: u64,
    pub skipped_height_one_simplices: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub ambient_dim: usize,
    pub rank: usize,
    pub input_kind: InputKind,
    pub tasks: Vec<String>,
    /// Rows of a basis of the lattice `span(C) ∩ Z^d` when `rank < ambient_dim`.
    #[serde(with = "dec")]
    pub sublattice_basis: Option<Vec<Vec<BigInt>>>,
    #[serde(with = "dec")]
    pub grading: Option<Vec<BigInt>>,
    pub grading_source: Option<String>,
    /// Primitive generators used for the triangulation, in input order.
    #[serde(with = "dec")]
    pub generators: Vec<Vec<BigInt>>,
    pub num_extreme_rays: usize,
    #[serde(with = "dec")]
    pub extreme_rays: Vec<Vec<BigInt>>,
    pub num_support_hyperplanes: usize,
    /// Sorted primitive support forms, when requested.
    #[serde(with = "dec")]
    pub support_hyperplanes: Option<Vec<Vec<BigInt>>>,
    pub triangulation: Option<TriangulationSummary>,
    /// Multiplicity: `Σ |det| / Π deg` over the triangulation.
    #[serde(with = "dec")]
    pub volume: Option<BigRational>,
    pub hilbert_series: Option<HilbertSeries>,
    pub num_denominator_classes: Option<usize>,
    pub multiplicity_check: Option<bool>,
    #[serde(with = "dec")]
    pub hilbert_basis: Option<Vec<Vec<BigInt>>>,
    #[serde(with = "dec")]
    pub degree1_elements: Option<Vec<Vec<BigInt>>>,
    pub evaluation: EvalCounts,
    pub info: RunInfo,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// JSON without the scheduling dependent `info` section.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("info");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        let _ = writeln!(w, "ambient dimension {}", self.ambient_dim);
        let _ = writeln!(w, "rank {}", self.rank);
        match (&self.grading, &self.grading_source) {
            (Some(g), Some(src)) => {
                let _ = writeln!(w, "grading ({src}) {}", row(g));
            }
            _ => {
                let _ = writeln!(w, "no grading");
            }
        }
        let _ = writeln!(w, "extreme rays {}", self.num_extreme_rays);
        let _ = writeln!(w, "support hyperplanes {}", self.num_support_hyperplanes);
        if let Some(h) = &self.triangulation {
            let kind = if h.partial {
                "partial triangulation"
            } else {
                "triangulation"
            };
            let _ = writeln!(w, "{kind} size {}", h.size);
            let _ = writeln!(w, "stanley components {}", h.stanley_components);
        }
        if let Some(v) = &self.volume {
            let _ = writeln!(w, "multiplicity {v}");
        }
        if let Some(b) = &self.hilbert_basis {
            let _ = writeln!(w, "hilbert basis elements {}", b.len());
        }
        if let Some(b) = &self.degree1_elements {
            let _ = writeln!(w, "degree 1 elements {}", b.len());
        }
        if let Some(h) = &self.hilbert_series {
            let _ = writeln!(w);
            let _ = writeln!(w, "hilbert series");
            let _ = writeln!(
                w,
                "raw: ({}) / {}",
                poly::format(&h.raw.numerator, "t"),
                format_denominator(&h.raw.denominator)
            );
            let _ = writeln!(
                w,
                "cyclotomic: ({}) / {}",
                poly::format(&h.cyclotomic.numerator, "t"),
                format_cyclotomic_denominator(&h.cyclotomic.factors)
            );
            match &h.standard {
                Some(st) => {
                    let _ = writeln!(
                        w,
                        "standard: ({}) / {}",
                        poly::format(&st.numerator, "t"),
                        format_denominator(&st.denominator)
                    );
                }
                None => {
                    let _ = writeln!(w, "standard: numerator too large");
                }
            }
            match &h.quasipolynomial {
                Some(q) => {
                    let _ = writeln!(w, "quasipolynomial period {} denominator {}", q.period, q.denominator);
                    for (r, c) in q.coefficients.iter().enumerate() {
                        let _ = writeln!(w, "  {r}: {}", row(c));
                    }
                }
                None => {
                    let _ = writeln!(w, "quasipolynomial: period too large");
                }
            }
            if let Some(ok) = self.multiplicity_check {
                let _ = writeln!(w, "multiplicity check {}", if ok { "passed" } else { "FAILED" });
            }
        }
        if let Some(h) = &self.support_hyperplanes {
            section(w, "support hyperplanes", h);
        }
        if self.support_hyperplanes.is_some() {
            section(w, "extreme rays", &self.extreme_rays);
        }
        if let Some(b) = &self.hilbert_basis {
            section(w, "hilbert basis", b);
        }
        if let Some(b) = &self.degree1_elements {
            section(w, "degree 1 elements", b);
        }
        if let Some(b) = &self.sublattice_basis {
            section(w, "sublattice basis", b);
        }
        if let Some(keys) = self.triangulation.as_ref().and_then(|t| t.simplices.as_ref()) {
            let _ = writeln!(w);
            let _ = writeln!(w, "triangulation");
            for k in keys {
                let _ = writeln!(
                    w,
                    "{} : {}",
                    k.key.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                    k.det
                );
            }
        }
        s
    }
}

fn row(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn section(w: &mut String, title: &str, rows: &[Vec<BigInt>]) {
    let _ = writeln!(w);
    let _ = writeln!(w, "{title} {}", rows.len());
    for r in rows {
        let _ = writeln!(w, "{}", row(r));
    }
}
