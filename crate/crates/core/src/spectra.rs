//! Dense symmetric eigendecomposition and the brute-force QE-constant
//! oracle.
//!
//! The oracle works straight from the definition: the QE constant of a
//! connected graph is the maximum of `<f, D f>` over unit vectors `f`
//! orthogonal to the all-ones vector. Restricting `D` to that hyperplane with
//! an orthonormal basis `Q` turns this into the largest eigenvalue of
//! `Qᵀ D Q`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{QecError, Result};
use crate::graphs::{distance_matrix, Graph};

/// Default tolerance for grouping numerically equal eigenvalues.
pub const CLUSTER_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted in descending order; column `k` of `vectors` belongs
/// to `values[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }

    /// Indices of the eigenvalues within `tol` of `alpha`, as a contiguous
    /// range of the sorted spectrum. Empty if nothing matches.
    pub fn cluster_at(&self, alpha: f64, tol: f64) -> std::ops::Range<usize> {
        let hits: Vec<usize> = (0..self.len())
            .filter(|&k| (self.values[k] - alpha).abs() <= tol)
            .collect();
        match (hits.first(), hits.last()) {
            (Some(&a), Some(&b)) => a..b + 1,
            _ => 0..0,
        }
    }

    /// Distinct eigenvalues after merging neighbours closer than `tol`,
    /// each with its multiplicity. Descending.
    pub fn distinct(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize, f64)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((_, count, last)) if (*last - v).abs() <= tol => {
                    *count += 1;
                    *last = v;
                }
                _ => out.push((v, 1, v)),
            }
        }
        out.into_iter()
            .map(|(first, count, last)| ((first + last) / 2.0, count))
            .collect()
    }
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Deterministic for a fixed input. Rejects matrices that are not symmetric
/// to within `1e-12` relative to the largest entry.
pub fn eigen_sym(m: &DMatrix<f64>) -> Result<Spectrum> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(QecError::invalid(format!(
            "matrix is {}x{}, expected square",
            n,
            m.ncols()
        )));
    }
    let scale = m.amax().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(QecError::invalid(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = a.norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-2 * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps ties in rotation order, so output is reproducible.
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum { values, vectors })
}

/// Orthonormal basis (as columns) of the hyperplane orthogonal to the
/// all-ones vector in `R^n`.
///
/// Built from the Householder reflector `H` that swaps `1/√n` with the first
/// coordinate axis; columns `1..n` of `H` span the complement.
pub fn ones_complement_basis(n: usize) -> DMatrix<f64> {
    assert!(n >= 1);
    let u = 1.0 / (n as f64).sqrt();
    // v = u·1 - e_0, scaled so that H = I - 2 v vᵀ / (vᵀv)
    let mut v = DVector::from_element(n, u);
    v[0] -= 1.0;
    let vv = v.dot(&v);
    let h = if vv == 0.0 {
        DMatrix::identity(n, n)
    } else {
        DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv)
    };
    h.columns(1, n - 1).into_owned()
}

/// Largest eigenvalue of `Qᵀ D Q` for an orthonormal basis `Q` of the
/// ones-complement.
pub fn constrained_max(d: &DMatrix<f64>, basis: &DMatrix<f64>) -> Result<f64> {
    let restricted = basis.transpose() * d * basis;
    let restricted = (&restricted + restricted.transpose()) * 0.5;
    Ok(eigen_sym(&restricted)?.max())
}

/// Where a QE constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Oracle,
    Lambda0,
    Lambda1,
    Lambda2,
    Lambda3,
    FanClosedForm,
}

impl Source {
    /// Stable ASCII name, identical to the serialized form.
    pub fn tag(self) -> &'static str {
        match self {
            Source::Oracle => "oracle",
            Source::Lambda0 => "lambda0",
            Source::Lambda1 => "lambda1",
            Source::Lambda2 => "lambda2",
            Source::Lambda3 => "lambda3",
            Source::FanClosedForm => "fan-closed-form",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Oracle => "oracle",
            Source::Lambda0 => "Λ₀",
            Source::Lambda1 => "Λ₁",
            Source::Lambda2 => "Λ₂",
            Source::Lambda3 => "Λ₃",
            Source::FanClosedForm => "fan-closed-form",
        })
    }
}

/// A QE constant with its provenance. `alpha` is always `-value - 2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QecResult {
    pub value: f64,
    pub alpha: f64,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<StationaryWitness>,
}

impl QecResult {
    pub fn from_alpha(alpha: f64, source: Source) -> Self {
        QecResult {
            value: -alpha - 2.0,
            alpha,
            source,
            witness: None,
        }
    }

    pub fn from_value(value: f64, source: Source) -> Self {
        QecResult {
            value,
            alpha: -value - 2.0,
            source,
            witness: None,
        }
    }
}

/// A solution `(α, μ, f, g)` of the stationarity system for the QE
/// constant of a join `G1 + G2`:
///
/// ```text
/// (A1 - J - αI) f = -(μ/2) 1
/// (A2 - J - αI) g = -(μ/2) 1
/// <f,f> + <g,g> = 1,   <1,f> + <1,g> = 0
/// ```
///
/// The objective at such a point equals `λ = -α - 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryWitness {
    pub alpha: f64,
    pub mu: f64,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

/// Residuals of a [`StationaryWitness`] against its defining equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResiduals {
    pub normalization: f64,
    pub balance: f64,
    pub first_block: f64,
    pub second_block: f64,
}

impl WitnessResiduals {
    pub fn within(&self, norm_tol: f64, eq_tol: f64) -> bool {
        self.normalization <= norm_tol
            && self.balance <= norm_tol
            && self.first_block <= eq_tol
            && self.second_block <= eq_tol
    }
}

impl StationaryWitness {
    pub fn lambda(&self) -> f64 {
        -self.alpha - 2.0
    }

    fn stacked(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.f.len() + self.g.len(),
            self.f.iter().chain(self.g.iter()).copied(),
        )
    }

    /// Objective `<h, D h>` with `h = [f; g]`.
    pub fn psi(&self, d: &DMatrix<f64>) -> f64 {
        let h = self.stacked();
        h.dot(&(d * &h))
    }

    /// Residuals given the adjacency matrices of the two join operands.
    pub fn residuals(&self, a1: &DMatrix<f64>, a2: &DMatrix<f64>) -> WitnessResiduals {
        let block = |a: &DMatrix<f64>, x: &[f64]| -> f64 {
            let x = DVector::from_column_slice(x);
            let sum = x.sum();
            let r = a * &x - x.scale(self.alpha);
            r.iter()
                .map(|&ri| (ri - sum + self.mu / 2.0).abs())
                .fold(0.0, f64::max)
        };
        let h = self.stacked();
        WitnessResiduals {
            normalization: (h.dot(&h) - 1.0).abs(),
            balance: h.sum().abs(),
            first_block: block(a1, &self.f),
            second_block: block(a2, &self.g),
        }
    }
}

/// Brute-force QE constant of a connected graph with at least two vertices.
pub fn qec_oracle(g: &Graph) -> Result<QecResult> {
    if g.n() < 2 {
        return Err(QecError::invalid(
            "the QE constant is undefined for a single vertex",
        ));
    }
    let d = distance_matrix(g)?.to_f64();
    let value = constrained_max(&d, &ones_complement_basis(g.n()))?;
    Ok(QecResult::from_value(value, Source::Oracle))
}

/// Whether the eigenspace of the eigenvalue cluster at `alpha` contains a
/// nonzero vector orthogonal to the all-ones vector.
pub fn eigenspace_orthogonal_to_ones(spec: &Spectrum, alpha: f64, cluster_tol: f64) -> Result<bool> {
    let range = spec.cluster_at(alpha, cluster_tol);
    match range.len() {
        0 => Err(QecError::invalid(format!(
            "{alpha} is not an eigenvalue within {cluster_tol}"
        ))),
        1 => {
            let n = spec.vectors.nrows();
            let dot = spec.vector(range.start).sum();
            Ok(dot.abs() <= 1e-8 * (n as f64).sqrt())
        }
        _ => Ok(true),
    }
}

/// A unit vector in the eigenspace at `alpha` that is orthogonal to the
/// all-ones vector, if one exists.
pub(crate) fn eigenvector_orthogonal_to_ones(
    spec: &Spectrum,
    alpha: f64,
    cluster_tol: f64,
) -> Option<DVector<f64>> {
    let range = spec.cluster_at(alpha, cluster_tol);
    let n = spec.vectors.nrows();
    match range.len() {
        0 => None,
        1 => {
            let v = spec.vector(range.start);
            (v.sum().abs() <= 1e-8 * (n as f64).sqrt()).then_some(v)
        }
        _ => {
            // Combine the first two basis vectors so the ones-component cancels.
            let (a, b) = (spec.vector(range.start), spec.vector(range.start + 1));
            let (ca, cb) = (a.sum(), b.sum());
            let w = if ca.abs() < 1e-14 && cb.abs() < 1e-14 {
                a
            } else {
                a * cb - b * ca
            };
            let norm = w.norm();
            Some(w / norm)
        }
    }
}
