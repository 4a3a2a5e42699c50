//! Fan graphs `K1 + P_n`: closed-form QE constants, the boundary-value
//! recurrence behind them, and an explicit quadratic embedding.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use crate::cheb_poly::{isolate_all, phi, real_roots, refine_root, u_tilde, RootInterval};
use crate::error::{QecError, Result};
use crate::graphs::DistanceMatrix;
use crate::join_qec::{LambdaSets, ROOT_TOL};
use crate::spectra::{QecResult, Source};

/// Distance within which `λ` is snapped to `±2` or to a path eigenvalue.
pub const SNAP_TOL: f64 = 1e-12;

/// Solutions of `f_{k+2} - λ f_{k+1} + f_k = μ` (`0 <= k < n`) with
/// `f_0 = f_{n+1} = 0`. Vectors hold `f_0, ..., f_{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RecurrenceSolution {
    Unique { values: Vec<f64> },
    /// `base + t * direction` for every real `t`.
    Family { base: Vec<f64>, direction: Vec<f64> },
    None,
}

impl RecurrenceSolution {
    pub fn kind(&self) -> &'static str {
        match self {
            RecurrenceSolution::Unique { .. } => "unique",
            RecurrenceSolution::Family { .. } => "family",
            RecurrenceSolution::None => "none",
        }
    }

    /// Largest violation of the recurrence or the boundary conditions.
    pub fn residual(&self, lambda: f64, mu: f64) -> f64 {
        match self {
            RecurrenceSolution::Unique { values } => recurrence_residual(values, lambda, mu),
            RecurrenceSolution::Family { base, direction } => recurrence_residual(base, lambda, mu)
                .max(recurrence_residual(direction, lambda, 0.0)),
            RecurrenceSolution::None => 0.0,
        }
    }
}

fn recurrence_residual(f: &[f64], lambda: f64, mu: f64) -> f64 {
    let boundary = f[0].abs().max(f[f.len() - 1].abs());
    f.windows(3)
        .map(|w| (w[2] - lambda * w[1] + w[0] - mu).abs())
        .fold(boundary, f64::max)
}

/// `cosh(a) / cosh(b)` for `|a| <= b` without overflow.
fn cosh_ratio(a: f64, b: f64) -> f64 {
    let a = a.abs();
    (a - b).exp() * (1.0 + (-2.0 * a).exp()) / (1.0 + (-2.0 * b).exp())
}

/// `sinh(a) / sinh(b)` for `|a| <= b`, `b > 0`, without overflow.
fn sinh_ratio(a: f64, b: f64) -> f64 {
    let s = a.signum();
    let a = a.abs();
    s * (a - b).exp() * -(-2.0 * a).exp_m1() / -(-2.0 * b).exp_m1()
}

/// The eigenvalue index `l` with `λ = 2cos(lπ/(n+1))`, if any.
fn path_eigen_index(n: usize, lambda: f64) -> Option<usize> {
    if !(-2.0..=2.0).contains(&lambda) {
        return None;
    }
    let theta = (lambda / 2.0).acos();
    let l = (theta * (n as f64 + 1.0) / PI).round() as usize;
    (1..=n)
        .contains(&l)
        .then_some(l)
        .filter(|&l| (path_eigenvalue(n, l) - lambda).abs() <= SNAP_TOL)
}

fn path_eigenvalue(n: usize, l: usize) -> f64 {
    2.0 * (l as f64 * PI / (n as f64 + 1.0)).cos()
}

/// Solves the zero-boundary recurrence for `n >= 1`.
pub fn solve_recurrence(n: usize, lambda: f64, mu: f64) -> Result<RecurrenceSolution> {
    if n == 0 {
        return Err(QecError::invalid("the recurrence needs n >= 1"));
    }
    if !lambda.is_finite() || !mu.is_finite() {
        return Err(QecError::invalid("λ and μ must be finite"));
    }
    let nf = n as f64;
    let ks = 0..=n + 1;
    let half = (nf + 1.0) / 2.0;

    if (lambda - 2.0).abs() <= SNAP_TOL {
        let values = ks
            .map(|k| {
                let k = k as f64;
                mu / 2.0 * (k * k - (nf + 1.0) * k)
            })
            .collect();
        return Ok(RecurrenceSolution::Unique { values });
    }
    if (lambda + 2.0).abs() <= SNAP_TOL {
        let parity = if n % 2 == 0 { 2.0 } else { 0.0 };
        let values = ks
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                mu / 4.0 * (1.0 - sign) + mu / (4.0 * (nf + 1.0)) * parity * sign * k as f64
            })
            .collect();
        return Ok(RecurrenceSolution::Unique { values });
    }
    if let Some(l) = path_eigen_index(n, lambda) {
        let theta = l as f64 * PI / (nf + 1.0);
        let direction: Vec<f64> = ks.clone().map(|k| (k as f64 * theta).sin()).collect();
        let mut direction = direction;
        direction[0] = 0.0;
        direction[n + 1] = 0.0;
        if mu == 0.0 {
            return Ok(RecurrenceSolution::Family {
                base: vec![0.0; n + 2],
                direction,
            });
        }
        if l % 2 == 1 {
            return Ok(RecurrenceSolution::None);
        }
        let c = mu / (2.0 - path_eigenvalue(n, l));
        let mut base: Vec<f64> = ks.map(|k| c * (1.0 - (k as f64 * theta).cos())).collect();
        base[0] = 0.0;
        base[n + 1] = 0.0;
        return Ok(RecurrenceSolution::Family { base, direction });
    }

    let c = mu / (2.0 - lambda);
    let ratio: Box<dyn Fn(f64) -> f64> = if lambda.abs() < 2.0 {
        let theta = (lambda / 2.0).acos();
        let denom = (half * theta).cos();
        Box::new(move |k| ((k - half) * theta).cos() / denom)
    } else if lambda > 2.0 {
        let t = (lambda / 2.0).acosh();
        Box::new(move |k| cosh_ratio((k - half) * t, half * t))
    } else {
        let t = (-lambda / 2.0).acosh();
        let odd = n % 2 == 1;
        Box::new(move |k| {
            let sign = if (k as usize) % 2 == 0 { 1.0 } else { -1.0 };
            if odd {
                sign * cosh_ratio((k - half) * t, half * t)
            } else {
                sign * sinh_ratio((half - k) * t, half * t)
            }
        })
    };
    let mut values: Vec<f64> = ks.map(|k| c * (1.0 - ratio(k as f64))).collect();
    values[0] = 0.0;
    values[n + 1] = 0.0;
    Ok(RecurrenceSolution::Unique { values })
}

/// An eigenpair of `A(P_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEigen {
    pub alpha: f64,
    pub vector: DVector<f64>,
    pub orthogonal_to_ones: bool,
}

/// `α = 2cos(lπ/(n+1))` with eigenvector `(sin(klπ/(n+1)))_k`, which is
/// orthogonal to `1` exactly when `l` is even.
pub fn path_eigen(n: usize, l: usize) -> Result<PathEigen> {
    if n == 0 || l == 0 || l > n {
        return Err(QecError::invalid(format!("need 1 <= l <= n, got n = {n}, l = {l}")));
    }
    let theta = l as f64 * PI / (n as f64 + 1.0);
    Ok(PathEigen {
        alpha: 2.0 * theta.cos(),
        vector: DVector::from_fn(n, |k, _| ((k + 1) as f64 * theta).sin()),
        orthogonal_to_ones: l % 2 == 0,
    })
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| QecError::internal(format!("{x} is not finite")))
}

/// Least real root of `Φ_n`.
///
/// For odd `n >= 3` the root is isolated in `(-2, -2cos(π/(n+1)))` after
/// checking the signs of `Φ_n` at both ends exactly; otherwise every real
/// root is isolated.
pub fn phi_min_root(n: usize) -> Result<f64> {
    let f = phi(n)?;
    if n >= 3 && n % 2 == 1 {
        let lo = rational(-2.0)?;
        let hi = rational(-2.0 * (PI / (n as f64 + 1.0)).cos())?;
        if f.sign_at(&lo) >= 0 || f.sign_at(&hi) <= 0 {
            return Err(QecError::internal(format!(
                "Φ_{n} does not change sign on its search bracket"
            )));
        }
        return refine_root(&f, &RootInterval { lo, hi }, ROOT_TOL);
    }
    let iso = isolate_all(&f)?;
    let first = iso
        .intervals
        .first()
        .ok_or_else(|| QecError::internal(format!("Φ_{n} has no real root")))?;
    refine_root(&f, first, ROOT_TOL)
}

/// `QEC(K1 + P_n)`.
pub fn qec_fan(n: usize) -> Result<QecResult> {
    match n {
        0 => Err(QecError::invalid("the fan needs n >= 1")),
        1 | 2 => Ok(QecResult::from_value(-1.0, Source::FanClosedForm)),
        _ if n % 2 == 0 => {
            let nf = n as f64;
            let mut r = QecResult::from_value(
                -4.0 * (PI / (2.0 * (nf + 1.0))).sin().powi(2),
                Source::FanClosedForm,
            );
            r.alpha = -2.0 * (PI / (nf + 1.0)).cos();
            Ok(r)
        }
        _ => Ok(QecResult::from_alpha(phi_min_root(n)?, Source::FanClosedForm)),
    }
}

/// The sets `Λ₀..Λ₃` of `K1 + P_n`, from `Φ_n` and the path spectrum
/// rather than from the general join solver.
pub fn fan_lambda_sets(n: usize) -> Result<LambdaSets> {
    if n < 3 {
        return Err(QecError::invalid("fan Λ-sets are defined for n >= 3"));
    }
    let f = phi(n)?.square_free_part();
    let spectral = f.gcd(&u_tilde(n));
    let reduced = f
        .div_exact(&spectral)
        .ok_or_else(|| QecError::internal("gcd does not divide Φ_n"))?
        .deflate_integer_roots(&[2, 0, -1, -2]);
    let lambda1 = if reduced.is_constant() {
        vec![]
    } else {
        real_roots(&reduced, ROOT_TOL)?.into_iter().map(|(x, _)| x).collect()
    };

    let near = |x: f64, r: f64| (x - r).abs() <= SNAP_TOL;
    let mut lambda3: Vec<f64> = (2..=n)
        .step_by(2)
        .map(|l| path_eigenvalue(n, l))
        .filter(|&a| !near(a, 0.0) && !near(a, -1.0))
        .collect();
    lambda3.sort_by(f64::total_cmp);

    let mut excluded: Vec<f64> = (1..=n).map(|l| path_eigenvalue(n, l)).collect();
    excluded.extend([0.0, -1.0, -2.0]);
    excluded.sort_by(f64::total_cmp);
    excluded.dedup_by(|x, y| near(*x, *y));

    Ok(LambdaSets {
        m: 1,
        lambda0: vec![],
        lambda1,
        lambda2: vec![],
        lambda3,
        excluded,
    })
}

/// Points `x_0, ..., x_n` in `R^n` realising the distance matrix of a
/// fan, hub first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub points: Vec<Vec<f64>>,
}

impl Embedding {
    pub fn squared_distance(&self, j: usize, k: usize) -> f64 {
        self.points[j]
            .iter()
            .zip(&self.points[k])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// `max |‖x_j - x_k‖² - d(j, k)|` over all pairs.
    pub fn max_residual(&self, d: &DistanceMatrix) -> f64 {
        let n = self.points.len();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j + 1..n {
                worst = worst.max((self.squared_distance(j, k) - d.get(j, k) as f64).abs());
            }
        }
        worst
    }
}

/// `x_0 = 0` and `x_k = √((k-1)/2k) e_{k-1} + √((k+1)/2k) e_k`.
pub fn fan_embedding(n: usize) -> Result<Embedding> {
    if n == 0 {
        return Err(QecError::invalid("the fan needs n >= 1"));
    }
    let mut points = vec![vec![0.0; n]];
    for k in 1..=n {
        let kf = k as f64;
        let mut x = vec![0.0; n];
        if k >= 2 {
            x[k - 2] = ((kf - 1.0) / (2.0 * kf)).sqrt();
        }
        x[k - 1] = ((kf + 1.0) / (2.0 * kf)).sqrt();
        points.push(x);
    }
    Ok(Embedding { points })
}
