//! Named textual inputs of one trial, exact enough to replay it.

use std::collections::BTreeMap;
use std::str::FromStr;

use normlab::dyadic::DyadicStepFunction;
use normlab::scalar::{format_scalar, parse_scalar};
use normlab::seqspace::SparseFn;
use normlab::{Exponent, Field, Matrix, Scalar, Vector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Case {
    pub inputs: BTreeMap<String, String>,
}

fn field_name(f: Field) -> &'static str {
    match f {
        Field::Real => "real",
        Field::Complex => "complex",
    }
}

fn parse_field(s: &str) -> Option<Field> {
    match s {
        "real" => Some(Field::Real),
        "complex" => Some(Field::Complex),
        _ => None,
    }
}

fn scalars(s: &str) -> Option<Vec<Scalar>> {
    s.split(',').map(|x| parse_scalar(x).ok()).collect()
}

fn join(xs: &[Scalar]) -> String {
    xs.iter()
        .map(|z| format_scalar(*z))
        .collect::<Vec<_>>()
        .join(",")
}

impl Case {
    pub fn new() -> Self {
        Self::default()
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.inputs
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| self.bad(key, "missing"))
    }

    fn bad(&self, key: &str, reason: &str) -> Error {
        Error::Case {
            key: key.into(),
            reason: reason.into(),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        self.raw(key)?
            .parse()
            .map_err(|_| self.bad(key, "unparsable"))
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.parsed(key)
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.parsed(key)
    }

    pub fn u32(&self, key: &str) -> Result<u32> {
        self.parsed(key)
    }

    /// Floats are written in shortest round-trip form, so this is exact.
    pub fn f64(&self, key: &str) -> Result<f64> {
        self.parsed(key)
    }

    pub fn put_f64s(&mut self, key: &str, xs: &[f64]) -> &mut Self {
        let s = xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        self.put(key, s)
    }

    pub fn f64s(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.raw(key)?;
        if raw.is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|x| x.trim().parse().map_err(|_| self.bad(key, "bad float")))
            .collect()
    }

    pub fn exponent(&self, key: &str) -> Result<Exponent> {
        Exponent::from_str(self.raw(key)?).map_err(|_| self.bad(key, "bad exponent"))
    }

    pub fn put_field(&mut self, key: &str, f: Field) -> &mut Self {
        self.put(key, field_name(f))
    }

    pub fn field(&self, key: &str) -> Result<Field> {
        parse_field(self.raw(key)?).ok_or_else(|| self.bad(key, "bad field"))
    }

    /// Written `field;z1,z2,...`.
    pub fn put_vector(&mut self, key: &str, v: &Vector) -> &mut Self {
        self.put(
            key,
            format!("{};{}", field_name(v.field()), join(v.entries())),
        )
    }

    pub fn vector(&self, key: &str) -> Result<Vector> {
        let raw = self.raw(key)?;
        let (f, body) = raw
            .split_once(';')
            .ok_or_else(|| self.bad(key, "no field"))?;
        let field = parse_field(f).ok_or_else(|| self.bad(key, "bad field"))?;
        let entries = scalars(body).ok_or_else(|| self.bad(key, "bad scalar"))?;
        Ok(Vector::new(entries, field)?)
    }

    pub fn put_vectors(&mut self, prefix: &str, vs: &[Vector]) -> &mut Self {
        self.put(&format!("{prefix}.count"), vs.len());
        for (i, v) in vs.iter().enumerate() {
            self.put_vector(&format!("{prefix}.{i}"), v);
        }
        self
    }

    pub fn vectors(&self, prefix: &str) -> Result<Vec<Vector>> {
        let n = self.usize(&format!("{prefix}.count"))?;
        (0..n)
            .map(|i| self.vector(&format!("{prefix}.{i}")))
            .collect()
    }

    /// Written `rows x cols;field;row-major entries`.
    pub fn put_matrix(&mut self, key: &str, m: &Matrix) -> &mut Self {
        self.put(
            key,
            format!(
                "{}x{};{};{}",
                m.rows(),
                m.cols(),
                field_name(m.field()),
                join(m.entries())
            ),
        )
    }

    pub fn matrix(&self, key: &str) -> Result<Matrix> {
        let raw = self.raw(key)?;
        let mut parts = raw.splitn(3, ';');
        let shape = parts.next().unwrap_or_default();
        let (r, c) = shape
            .split_once('x')
            .ok_or_else(|| self.bad(key, "no shape"))?;
        let rows = r.parse().map_err(|_| self.bad(key, "bad rows"))?;
        let cols = c.parse().map_err(|_| self.bad(key, "bad cols"))?;
        let field = parts
            .next()
            .and_then(parse_field)
            .ok_or_else(|| self.bad(key, "bad field"))?;
        let entries = parts
            .next()
            .and_then(scalars)
            .ok_or_else(|| self.bad(key, "bad scalar"))?;
        Ok(Matrix::new(rows, cols, entries, field)?)
    }

    pub fn put_step(&mut self, key: &str, f: &DyadicStepFunction) -> &mut Self {
        self.put(key, f)
    }

    pub fn step(&self, key: &str) -> Result<DyadicStepFunction> {
        Ok(self.raw(key)?.parse()?)
    }

    pub fn put_sparse(&mut self, key: &str, f: &SparseFn) -> &mut Self {
        self.put(key, f)
    }

    pub fn sparse(&self, key: &str) -> Result<SparseFn> {
        Ok(self.raw(key)?.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use normlab::random;

    #[test]
    fn values_round_trip_exactly() {
        let mut rng = random::rng(5);
        let v = random::vector(&mut rng, 4, Field::Complex);
        let m = random::matrix(&mut rng, 2, 3, Field::Real);
        let f = random::step_function(&mut rng, 3, Field::Complex);
        let mut case = Case::new();
        case.put_vector("v", &v)
            .put_matrix("m", &m)
            .put_step("f", &f)
            .put("p", Exponent::INF)
            .put("x", 0.1 + 0.2)
            .put_f64s("xs", &[1.5, -0.25]);
        assert_eq!(case.vector("v").unwrap(), v);
        assert_eq!(case.matrix("m").unwrap(), m);
        assert_eq!(case.step("f").unwrap(), f);
        assert_eq!(case.exponent("p").unwrap(), Exponent::INF);
        assert_eq!(case.f64("x").unwrap(), 0.1 + 0.2);
        assert_eq!(case.f64s("xs").unwrap(), vec![1.5, -0.25]);
        assert!(case.vector("missing").is_err());
    }
}
