//! Structured verification results.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::{Serialize, Serializer};
use serde_json::{json, Value};

pub const REPORT_SCHEMA: u32 = 1;

/// Residual of a check: exact zero, an exact nonzero rational magnitude, or a
/// floating-point max-abs error.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    ExactZero,
    Exact(BigRational),
    Float(f64),
}

impl Residual {
    pub fn exact(r: BigRational) -> Self {
        if r.is_zero() {
            Residual::ExactZero
        } else {
            Residual::Exact(r)
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Residual::ExactZero)
    }

    pub fn as_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            Residual::ExactZero => 0.0,
            Residual::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Residual::Float(x) => *x,
        }
    }

    /// Keeps the larger residual.
    pub fn max(self, other: Residual) -> Residual {
        match (self, other) {
            (Residual::ExactZero, o) | (o, Residual::ExactZero) => o,
            (Residual::Exact(a), Residual::Exact(b)) => Residual::Exact(if a > b { a } else { b }),
            (a, b) => {
                if a.as_f64() >= b.as_f64() {
                    a
                } else {
                    b
                }
            }
        }
    }
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::ExactZero => s.serialize_str("exact-zero"),
            Residual::Exact(r) => s.serialize_str(&r.to_string()),
            Residual::Float(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, Value>,
    pub residual: Residual,
    pub pass: bool,
    pub runtime_ms: u128,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        Self {
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            residual: Residual::ExactZero,
            pass: true,
            runtime_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Records a failure together with a description of where it happened.
    pub fn fail(&mut self, s: impl Into<String>) {
        self.pass = false;
        self.notes.push(s.into());
    }

    /// JSON document with the schema version attached.
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().insert("schema".into(), json!(REPORT_SCHEMA));
        v
    }

    /// Combines several reports into one whose pass flag is the conjunction.
    pub fn merge(name: &str, parts: Vec<VerificationReport>) -> VerificationReport {
        let mut out = VerificationReport::new(name);
        let mut residual = Residual::ExactZero;
        for p in parts {
            residual = residual.max(p.residual.clone());
            out.pass &= p.pass;
            out.runtime_ms += p.runtime_ms;
            for n in p.notes {
                out.notes.push(format!("{}: {}", p.check_name, n));
            }
            for (k, v) in p.parameters {
                out.parameters.entry(k).or_insert(v);
            }
        }
        out.residual = residual;
        out
    }
}

/// Wall-clock timer that stamps `runtime_ms` on a report.
pub struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(Instant::now())
    }

    pub fn stamp(&self, r: &mut VerificationReport) {
        r.runtime_ms = self.0.elapsed().as_millis();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn residual_serialization() {
        let mut r = VerificationReport::new("demo");
        let v = r.to_json();
        assert_eq!(v["residual"], "exact-zero");
        assert_eq!(v["schema"], 1);
        r.residual = Residual::Exact(BigRational::new(BigInt::from(3), BigInt::from(4)));
        assert_eq!(r.to_json()["residual"], "3/4");
        r.residual = Residual::Float(1e-12);
        assert_eq!(r.to_json()["residual"], 1e-12);
    }

    #[test]
    fn merge_is_conjunction() {
        let a = VerificationReport::new("a");
        let mut b = VerificationReport::new("b");
        b.fail("broken");
        b.residual = Residual::Float(0.5);
        let m = VerificationReport::merge("ab", vec![a, b]);
        assert!(!m.pass);
        assert_eq!(m.residual, Residual::Float(0.5));
        assert_eq!(m.notes, vec!["b: broken".to_string()]);
    }
}
