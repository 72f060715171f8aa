//! Finitely supported functions on opaque index sets.
//!
//! Keys are byte strings; their order is used only to make summation
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use percent_encoding::{percent_decode_str, percent_encode, AsciiSet, NON_ALPHANUMERIC};

use crate::duality::dual_extremizer;
use crate::scalar::{format_scalar, modulus, parse_scalar, Complex64, Field, Scalar};
use crate::vector::p_norm_of;
use crate::{Error, Exponent, Result, Vector};

pub type Key = Vec<u8>;

const KEY_ESCAPES: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'_')
    .remove(b'-')
    .remove(b'.')
    .remove(b':')
    .remove(b'/');

/// A scalar function with finite support. Zero values are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseFn {
    entries: BTreeMap<Key, Scalar>,
}

impl SparseFn {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on a repeated key.
    pub fn from_pairs<K: Into<Key>>(pairs: impl IntoIterator<Item = (K, Scalar)>) -> Result<Self> {
        let mut f = Self::new();
        for (k, v) in pairs {
            let k = k.into();
            if f.entries.contains_key(&k) {
                return Err(Error::InvalidArgument(format!(
                    "repeated key `{}`",
                    escape(&k)
                )));
            }
            f.insert(k, v);
        }
        Ok(f)
    }

    /// `δ_z`.
    pub fn delta(key: impl Into<Key>) -> Self {
        let mut f = Self::new();
        f.insert(key.into(), Complex64::new(1.0, 0.0));
        f
    }

    /// Sets `f(key) = value`, removing the key when `value = 0`.
    pub fn insert(&mut self, key: impl Into<Key>, value: Scalar) {
        let key = key.into();
        if value == Complex64::new(0.0, 0.0) {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn get(&self, key: &[u8]) -> Scalar {
        self.entries.get(key).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Key> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.entries.iter()
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + Clone + '_ {
        self.entries.values().map(|&v| modulus(v))
    }

    pub fn field(&self) -> Field {
        if self.entries.values().any(|v| v.im != 0.0) {
            Field::Complex
        } else {
            Field::Real
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(Scalar, Scalar) -> Scalar) -> Self {
        let keys: BTreeSet<&Key> = self.entries.keys().chain(other.entries.keys()).collect();
        let mut out = Self::new();
        for k in keys {
            out.insert(k.clone(), op(self.get(k), other.get(k)));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let mut out = Self::new();
        for (k, &v) in &self.entries {
            out.insert(k.clone(), v * c);
        }
        out
    }

    fn real_values(&self) -> Option<Vec<(&Key, f64)>> {
        self.entries
            .iter()
            .map(|(k, v)| (v.im == 0.0).then_some((k, v.re)))
            .collect()
    }
}

/// `Σ_x f(x)`, accumulated in key order.
pub fn unordered_sum(f: &SparseFn) -> Scalar {
    f.entries.values().sum()
}

/// `‖f‖_p` over the support.
pub fn lp_norm_seq(f: &SparseFn, p: Exponent) -> f64 {
    p_norm_of(f.moduli(), p)
}

/// A smallest set `A` of keys with `Σ_{x ∉ A} |f(x)| ≤ ε`, taking the
/// largest moduli first (ties in key order), and that tail.
pub fn truncate(f: &SparseFn, eps: f64) -> Result<(BTreeSet<Key>, f64)> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must be nonnegative, got {eps}"
        )));
    }
    let mut ranked: Vec<(&Key, f64)> = f.entries.iter().map(|(k, &v)| (k, modulus(v))).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    // suffix[k] = Σ_{i ≥ k} |f|, summed from the smallest
    let mut suffix = vec![0.0; ranked.len() + 1];
    for k in (0..ranked.len()).rev() {
        suffix[k] = suffix[k + 1] + ranked[k].1;
    }
    let keep = (0..=ranked.len())
        .find(|&k| suffix[k] <= eps)
        .unwrap_or(ranked.len());
    let set = ranked[..keep].iter().map(|(k, _)| (*k).clone()).collect();
    Ok((set, suffix[keep]))
}

/// `Σ |f·g|` over common keys.
pub fn pairing_abs(f: &SparseFn, g: &SparseFn) -> f64 {
    f.entries
        .iter()
        .filter_map(|(k, &a)| g.entries.get(k).map(|&b| modulus(a * b)))
        .sum()
}

/// `λ_g(f) = Σ f(x)·g(x)`.
pub fn pairing_seq(f: &SparseFn, g: &SparseFn) -> Scalar {
    f.entries
        .iter()
        .filter_map(|(k, &a)| g.entries.get(k).map(|&b| a * b))
        .sum()
}

/// A unit vector `f` in `ℓ^p`, supported in `supp g`, with
/// `|λ_g(f)| = ‖g‖_q`.
pub fn dual_extremizer_seq(g: &SparseFn, p: Exponent) -> Result<SparseFn> {
    if g.is_empty() {
        return Err(Error::ZeroVector);
    }
    let w = Vector::new(g.entries.values().copied().collect(), g.field())?;
    let v = dual_extremizer(&w, p)?;
    let n = v.p_norm(p);
    let mut out = SparseFn::new();
    for (k, &x) in g.entries.keys().zip(v.entries()) {
        out.insert(k.clone(), x / n);
    }
    Ok(out)
}

/// `x ⊕ y` as a key: the big-endian `u32` length of `x`, then `x`, then `y`.
pub fn product_key(x: &[u8], y: &[u8]) -> Key {
    let mut k = Vec::with_capacity(4 + x.len() + y.len());
    k.extend_from_slice(&(x.len() as u32).to_be_bytes());
    k.extend_from_slice(x);
    k.extend_from_slice(y);
    k
}

pub fn split_product_key(key: &[u8]) -> Result<(&[u8], &[u8])> {
    let (len, rest) = key.split_first_chunk::<4>().ok_or(Error::MalformedKey)?;
    let n = u32::from_be_bytes(*len) as usize;
    if n > rest.len() {
        return Err(Error::MalformedKey);
    }
    Ok(rest.split_at(n))
}

/// The double sum and both iterated sums of a function on a product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FubiniReport {
    pub double: Scalar,
    pub iterated_xy: Scalar,
    pub iterated_yx: Scalar,
}

impl FubiniReport {
    pub fn max_gap(&self) -> f64 {
        modulus(self.double - self.iterated_xy)
            .max(modulus(self.double - self.iterated_yx))
            .max(modulus(self.iterated_xy - self.iterated_yx))
    }
}

/// `Σ_{(x,y)} f`, `Σ_x Σ_y f` and `Σ_y Σ_x f` for `f` keyed by
/// [`product_key`].
pub fn fubini_check(f: &SparseFn) -> Result<FubiniReport> {
    let mut rows: BTreeMap<&[u8], Vec<Scalar>> = BTreeMap::new();
    let mut cols: BTreeMap<&[u8], Vec<Scalar>> = BTreeMap::new();
    for (k, &v) in &f.entries {
        let (x, y) = split_product_key(k)?;
        rows.entry(x).or_default().push(v);
        cols.entry(y).or_default().push(v);
    }
    let iterated = |m: &BTreeMap<&[u8], Vec<Scalar>>| -> Scalar {
        m.values().map(|inner| inner.iter().sum::<Scalar>()).sum()
    };
    Ok(FubiniReport {
        double: unordered_sum(f),
        iterated_xy: iterated(&rows),
        iterated_yx: iterated(&cols),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvergenceMode {
    Monotone,
    Fatou,
    Dominated,
}

impl ConvergenceMode {
    fn name(self) -> &'static str {
        match self {
            ConvergenceMode::Monotone => "monotone",
            ConvergenceMode::Fatou => "fatou",
            ConvergenceMode::Dominated => "dominated",
        }
    }
}

impl fmt::Display for ConvergenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConvergenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "monotone" => Ok(ConvergenceMode::Monotone),
            "fatou" => Ok(ConvergenceMode::Fatou),
            "dominated" => Ok(ConvergenceMode::Dominated),
            other => Err(Error::Parse(format!("unknown convergence mode `{other}`"))),
        }
    }
}

/// What a convergence theorem says about a finite family.
///
/// `lhs ≤ rhs` is the headline inequality of the mode: the last sum
/// against the limit's sum (monotone), `Σ inf_k f_k` against
/// `inf_k Σ f_k` (Fatou), the last gap against its bound `Σ|f_j − f|`
/// (dominated).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub mode: ConvergenceMode,
    pub holds: bool,
    pub sums: Vec<Scalar>,
    pub limit_sum: Scalar,
    /// `|Σ f_j − Σ f|`.
    pub gaps: Vec<f64>,
    /// Dominated mode: `Σ|f_j − f|`; empty otherwise.
    pub bounds: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

const SLACK: f64 = 1e-12;

fn precondition(mode: ConvergenceMode, reason: impl Into<String>) -> Error {
    Error::ConvergencePrecondition {
        mode: mode.name(),
        reason: reason.into(),
    }
}

fn universe<'a>(family: &'a [SparseFn], limit: &'a SparseFn) -> BTreeSet<&'a Key> {
    family
        .iter()
        .chain([limit])
        .flat_map(|f| f.entries.keys())
        .collect()
}

pub fn convergence_check(
    mode: ConvergenceMode,
    family: &[SparseFn],
    limit: &SparseFn,
    dominator: Option<&SparseFn>,
) -> Result<ConvergenceReport> {
    if family.is_empty() {
        return Err(precondition(mode, "empty family"));
    }
    let keys = universe(family, limit);
    let sums: Vec<Scalar> = family.iter().map(unordered_sum).collect();
    let limit_sum = unordered_sum(limit);
    let gaps: Vec<f64> = sums.iter().map(|&s| modulus(s - limit_sum)).collect();
    let scale = |x: f64| SLACK * x.abs().max(1.0);

    let mut report = ConvergenceReport {
        mode,
        holds: true,
        sums,
        limit_sum,
        gaps,
        bounds: Vec::new(),
        lhs: 0.0,
        rhs: 0.0,
    };

    match mode {
        ConvergenceMode::Monotone => {
            let mut all: Vec<&SparseFn> = family.iter().collect();
            all.push(limit);
            if all.iter().any(|f| f.real_values().is_none()) {
                return Err(precondition(mode, "complex values"));
            }
            for (j, pair) in all.windows(2).enumerate() {
                if let Some(k) = keys.iter().find(|k| pair[0].get(k).re > pair[1].get(k).re) {
                    return Err(precondition(
                        mode,
                        format!("not increasing at step {j}, key `{}`", escape(k)),
                    ));
                }
            }
            let last = report.sums.last().expect("nonempty").re;
            report.lhs = last;
            report.rhs = limit_sum.re;
            let shrinking = report.gaps.windows(2).all(|g| g[1] <= g[0] + scale(g[0]));
            report.holds = shrinking && last <= limit_sum.re + scale(limit_sum.re);
        }
        ConvergenceMode::Fatou => {
            for f in family {
                match f.real_values() {
                    Some(v) if v.iter().all(|(_, x)| *x >= 0.0) => {}
                    _ => return Err(precondition(mode, "values must be real and nonnegative")),
                }
            }
            let n = family.len();
            let mut holds = true;
            let mut headline = (0.0, 0.0);
            // tails f_m, f_{m+1}, …: Σ_x min_k f_k(x) ≤ min_k Σ_x f_k(x)
            for m in (0..n).rev() {
                let lhs: f64 = keys
                    .iter()
                    .map(|k| {
                        family[m..]
                            .iter()
                            .map(|f| f.get(k).re)
                            .fold(f64::INFINITY, f64::min)
                    })
                    .sum();
                let rhs = report.sums[m..]
                    .iter()
                    .map(|s| s.re)
                    .fold(f64::INFINITY, f64::min);
                holds &= lhs <= rhs + scale(rhs);
                headline = (lhs, rhs);
            }
            report.lhs = headline.0;
            report.rhs = headline.1;
            report.holds = holds;
        }
        ConvergenceMode::Dominated => {
            let g =
                dominator.ok_or_else(|| precondition(mode, "no dominating function supplied"))?;
            for (j, f) in family.iter().enumerate() {
                if let Some(k) = keys
                    .iter()
                    .find(|k| modulus(f.get(k)) > g.get(k).re || g.get(k).im != 0.0)
                {
                    return Err(precondition(
                        mode,
                        format!("|f_{j}| exceeds the dominator at key `{}`", escape(k)),
                    ));
                }
            }
            report.bounds = family
                .iter()
                .map(|f| keys.iter().map(|k| modulus(f.get(k) - limit.get(k))).sum())
                .collect();
            report.holds = report
                .gaps
                .iter()
                .zip(&report.bounds)
                .all(|(g, b)| *g <= b + scale(*b));
            report.lhs = *report.gaps.last().expect("nonempty");
            report.rhs = *report.bounds.last().expect("nonempty");
        }
    }
    Ok(report)
}

fn escape(key: &[u8]) -> String {
    percent_encode(key, KEY_ESCAPES).to_string()
}

fn unescape(s: &str) -> Key {
    percent_decode_str(s).collect()
}

/// One `key=value` line per support point, in key order.
impl fmt::Display for SparseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{}={}", escape(k), format_scalar(*v))?;
        }
        Ok(())
    }
}

impl FromStr for SparseFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `key=value`, got `{line}`")))?;
            pairs.push((unescape(k), parse_scalar(v)?));
        }
        Self::from_pairs(pairs)
    }
}
