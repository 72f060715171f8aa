use crate::linalg::least_squares_real;
use crate::lp::{minimize, LpOutcome};
use crate::{Error, Result, Vector};

/// Membership is decided by enumerating active sets, so the number of
/// generators is capped.
pub const MAX_CONE_GENERATORS: usize = 8;

/// The cone of nonnegative combinations of finitely many real generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    generators: Vec<Vec<f64>>,
}

impl PolyhedralCone {
    pub fn new(generators: &[Vector]) -> Result<Self> {
        let first = generators.first().ok_or(Error::Empty("cone generators"))?;
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            crate::error::check_dims(first.dim(), g.dim())?;
            if g.entries().iter().any(|z| z.im != 0.0) {
                return Err(Error::InvalidArgument(
                    "cone generators must be real".into(),
                ));
            }
            gens.push(g.entries().iter().map(|z| z.re).collect());
        }
        Ok(Self { generators: gens })
    }

    /// The nonnegative orthant of `R^n`.
    pub fn orthant(n: usize) -> Result<Self> {
        let gens = (0..n)
            .map(|k| Vector::unit(n, k, crate::Field::Real))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&gens)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    /// The dual cone `{λ : ⟨λ, g_i⟩ ≥ 0 for all i}` in inequality form; its
    /// constraint rows are the generators themselves.
    pub fn dual_constraints(&self) -> Vec<Vector> {
        self.generators
            .iter()
            .map(|g| Vector::real(g).expect("generators are nonempty"))
            .collect()
    }

    /// Whether `λ` satisfies every dual-cone constraint up to `tol`.
    pub fn dual_contains(&self, lambda: &Vector, tol: f64) -> Result<bool> {
        let l = real_vec(lambda, self.dim())?;
        Ok(self.generators.iter().all(|g| dot(g, &l) >= -tol))
    }

    /// Whether `v = Σ t_i g_i` for some `t ≥ 0`, up to residual `tol`.
    ///
    /// Every active set of at most `dim` generators is tried; by
    /// Carathéodory's theorem this is exhaustive.
    pub fn contains(&self, v: &Vector, tol: f64) -> Result<bool> {
        let got = self.generators.len();
        if got > MAX_CONE_GENERATORS {
            return Err(Error::TooManyGenerators {
                max: MAX_CONE_GENERATORS,
                got,
            });
        }
        let target = real_vec(v, self.dim())?;
        let max_active = self.dim().min(got);
        for mask in 0u32..1 << got {
            if mask.count_ones() as usize > max_active {
                continue;
            }
            let cols: Vec<&[f64]> = (0..got)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| self.generators[k].as_slice())
                .collect();
            let Ok((t, residual)) = least_squares_real(&cols, &target) else {
                continue;
            };
            if residual <= tol && t.iter().all(|&c| c >= -tol) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Membership in the double dual `E″ = {v : ⟨λ, v⟩ ≥ 0 for all λ ∈ E′}`,
    /// decided by minimizing `⟨λ, v⟩` over `λ ∈ E′` with `|λ_k| ≤ 1`.
    pub fn double_dual_contains(&self, v: &Vector, tol: f64) -> Result<bool> {
        let d = self.dim();
        let m = self.generators.len();
        let target = real_vec(v, d)?;
        // variables: λ⁺ (d), λ⁻ (d), box slacks (2d), surplus (m)
        let nvars = 4 * d + m;
        let mut a = Vec::with_capacity(2 * d + m);
        let mut b = Vec::with_capacity(2 * d + m);
        for k in 0..d {
            for offset in [0, d] {
                let mut row = vec![0.0; nvars];
                row[offset + k] = 1.0;
                row[2 * d + offset + k] = 1.0;
                a.push(row);
                b.push(1.0);
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            let mut row = vec![0.0; nvars];
            for k in 0..d {
                row[k] = g[k];
                row[d + k] = -g[k];
            }
            row[4 * d + i] = -1.0;
            a.push(row);
            b.push(0.0);
        }
        let mut c = vec![0.0; nvars];
        for k in 0..d {
            c[k] = target[k];
            c[d + k] = -target[k];
        }
        match minimize(&c, &a, &b)? {
            LpOutcome::Optimal { value, .. } => Ok(value >= -tol),
            _ => unreachable!("λ = 0 is feasible and the box is bounded"),
        }
    }
}

pub fn cone_contains(cone: &PolyhedralCone, v: &Vector, tol: f64) -> Result<bool> {
    cone.contains(v, tol)
}

/// Constraint rows of the dual cone.
pub fn dual_cone(cone: &PolyhedralCone) -> Vec<Vector> {
    cone.dual_constraints()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn real_vec(v: &Vector, dim: usize) -> Result<Vec<f64>> {
    crate::error::check_dims(dim, v.dim())?;
    if v.entries().iter().any(|z| z.im != 0.0) {
        return Err(Error::InvalidArgument(
            "cone membership is over the reals".into(),
        ));
    }
    Ok(v.entries().iter().map(|z| z.re).collect())
}
