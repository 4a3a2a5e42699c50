//! Exact QE constants of joins `K̄_m + G` of an empty graph with an arbitrary
//! graph.
//!
//! Every stationary point of the constrained quadratic form on the join has
//! the form `(α, μ, f, g)` (see [`StationaryWitness`]) and its value is
//! `-α - 2`. The admissible `α` fall into four sets:
//!
//! * `Λ₀`: `α = -m`, present iff `m >= 2` and `m` is an eigenvalue of `J - A`;
//! * `Λ₁`: roots of `(α + 2m) <1, (A - α)⁻¹ 1> = m` away from `ev(A)`,
//!   `0`, `-m`, `-2m`;
//! * `Λ₂`: `α = -2m`, present iff `-2m` is an eigenvalue of `A`;
//! * `Λ₃`: eigenvalues of `A` (other than `0`, `-m`, `-2m`) with an
//!   eigenvector orthogonal to `1`.
//!
//! The QE constant is `-α̃ - 2` with `α̃` the least element of the union.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cheb_poly::{real_roots, IntPoly};
use crate::error::{QecError, Result};
use crate::graphs::{family, join_distance_matrix, FamilyKind, Graph};
use crate::spectra::{
    eigen_sym, eigenspace_orthogonal_to_ones, eigenvector_orthogonal_to_ones, QecResult, Source,
    Spectrum, StationaryWitness, CLUSTER_TOL,
};

/// Root refinement width for `Λ₁`.
pub const ROOT_TOL: f64 = 1e-12;
/// Minima closer than this are treated as ties.
pub const TIE_TOL: f64 = 1e-10;
/// Accepted residual of a constructed [`StationaryWitness`].
pub const WITNESS_TOL: f64 = 1e-8;

type BigMatrix = Vec<Vec<BigInt>>;

fn to_big(m: &DMatrix<i64>) -> BigMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| BigInt::from(m[(i, j)])).collect())
        .collect()
}

fn check_square(m: &DMatrix<i64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(QecError::invalid(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// `det(xI - M)` by Faddeev–LeVerrier in exact integer arithmetic.
pub fn char_poly(m: &DMatrix<i64>) -> Result<IntPoly> {
    check_square(m)?;
    let n = m.nrows();
    let a = to_big(m);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    // mk = A M_{k-1} + c_{n-k+1} I, starting from M_0 = 0
    let mut mk: BigMatrix = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mul(&a, &next);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let kb = BigInt::from(k);
        if !(&trace % &kb).is_zero() {
            return Err(QecError::internal("non-integral Faddeev–LeVerrier step"));
        }
        coeffs[n - k] = -(trace / kb);
        mk = next;
    }
    Ok(IntPoly::new(coeffs))
}

fn mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn bareiss_det(m: &DMatrix<i64>) -> Result<BigInt> {
    check_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    let mut a = to_big(m);
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(&a[n - 1][n - 1] * sign)
}

/// `(p, q)` with `p(x) = det(A - xI)` and `q(x) = det(A - xI + J) - p(x)`,
/// so that `<1, (A - αI)⁻¹ 1> = q(α) / p(α)` off the spectrum.
pub fn ones_quadratic_form_poly(a: &DMatrix<i64>) -> Result<(IntPoly, IntPoly)> {
    check_square(a)?;
    let n = a.nrows();
    let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
    let chi = char_poly(a)?;
    let chi_j = char_poly(&a.map(|v| v + 1))?;
    let p = chi.scale_i64(sign);
    let q = (&chi_j - &chi).scale_i64(sign);
    Ok((p, q))
}

/// The four candidate sets for `α̃`, ascending, plus the values excluded
/// from `Λ₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSets {
    pub m: usize,
    pub lambda0: Vec<f64>,
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
    pub lambda3: Vec<f64>,
    /// Distinct `ev(A)` together with `0`, `-m`, `-2m`.
    pub excluded: Vec<f64>,
}

impl LambdaSets {
    pub fn sets(&self) -> [(&[f64], Source); 4] {
        [
            (&self.lambda0, Source::Lambda0),
            (&self.lambda1, Source::Lambda1),
            (&self.lambda2, Source::Lambda2),
            (&self.lambda3, Source::Lambda3),
        ]
    }

    /// Least element of the union and the lowest-indexed set attaining it
    /// within [`TIE_TOL`].
    pub fn min(&self) -> Option<(f64, Source)> {
        let alpha = self
            .sets()
            .iter()
            .flat_map(|(s, _)| s.iter().copied())
            .fold(f64::INFINITY, f64::min);
        if !alpha.is_finite() {
            return None;
        }
        self.sets()
            .iter()
            .find(|(s, _)| s.iter().any(|&v| v <= alpha + TIE_TOL))
            .map(|&(_, src)| (alpha, src))
    }
}

fn reject_complete(m: usize, g: &Graph) -> Result<()> {
    if m == 0 {
        return Err(QecError::invalid("m must be positive"));
    }
    if g.n() == 0 {
        return Err(QecError::invalid("G must have at least one vertex"));
    }
    if m == 1 && g.is_complete() {
        return Err(QecError::invalid(format!(
            "K̄1 + {g} is the complete graph K{}; its QE constant is -1",
            g.n() + 1
        )));
    }
    Ok(())
}

fn nearest_integer_root(chi: &IntPoly, alpha: f64) -> Option<i64> {
    let r = alpha.round();
    ((alpha - r).abs() <= 1e-6 && chi.eval_i64(r as i64).is_zero()).then_some(r as i64)
}

struct Prepared {
    a: DMatrix<i64>,
    chi: IntPoly,
    spec: Spectrum,
}

fn prepare(g: &Graph) -> Result<Prepared> {
    let a = g.adjacency();
    let chi = char_poly(&a)?;
    let spec = eigen_sym(&g.adjacency_f64())?;
    Ok(Prepared { a, chi, spec })
}

fn lambda_sets_from(m: usize, prep: &Prepared) -> Result<LambdaSets> {
    let Prepared { a, chi, spec } = prep;
    let n = a.nrows();
    let mi = m as i64;
    let special = [0, -mi, -2 * mi];

    let lambda0 = if m >= 2 {
        let shifted = DMatrix::from_fn(n, n, |i, j| 1 - a[(i, j)] - if i == j { mi } else { 0 });
        if bareiss_det(&shifted)?.is_zero() {
            vec![-(m as f64)]
        } else {
            vec![]
        }
    } else {
        vec![]
    };

    let lambda2 = {
        let shifted = DMatrix::from_fn(n, n, |i, j| a[(i, j)] + if i == j { 2 * mi } else { 0 });
        if bareiss_det(&shifted)?.is_zero() {
            vec![-2.0 * m as f64]
        } else {
            vec![]
        }
    };

    let (p, q) = ones_quadratic_form_poly(a)?;
    let numerator = &(&IntPoly::from_i64s(&[2 * mi, 1]) * &q) - &p.scale_i64(mi);
    if numerator.is_zero() {
        return Err(QecError::internal("secular polynomial vanished identically"));
    }
    let sqf = numerator.square_free_part();
    let reduced = sqf
        .div_exact(&sqf.gcd(&p))
        .ok_or_else(|| QecError::internal("gcd does not divide the secular polynomial"))?
        .deflate_integer_roots(&special);
    let lambda1 = if reduced.is_constant() {
        vec![]
    } else {
        real_roots(&reduced, ROOT_TOL)?
            .into_iter()
            .map(|(x, _)| x)
            .collect()
    };

    let mut lambda3 = Vec::new();
    let mut excluded: Vec<f64> = special.iter().map(|&r| r as f64).collect();
    for (alpha, mult) in spec.distinct(CLUSTER_TOL) {
        excluded.push(alpha);
        if let Some(r) = nearest_integer_root(chi, alpha) {
            let exact = chi.root_multiplicity(r);
            if exact != mult {
                return Err(QecError::internal(format!(
                    "eigenvalue {r} has multiplicity {exact} but {mult} eigenvalues cluster there"
                )));
            }
            if special.contains(&r) {
                continue;
            }
        }
        if eigenspace_orthogonal_to_ones(spec, alpha, CLUSTER_TOL)? {
            lambda3.push(alpha);
        }
    }
    lambda3.sort_by(f64::total_cmp);
    excluded.sort_by(f64::total_cmp);
    excluded.dedup_by(|x, y| (*x - *y).abs() <= CLUSTER_TOL);

    Ok(LambdaSets {
        m,
        lambda0,
        lambda1,
        lambda2,
        lambda3,
        excluded,
    })
}

/// The sets `Λ₀..Λ₃` for `K̄_m + G`.
pub fn compute_lambda_sets(m: usize, g: &Graph) -> Result<LambdaSets> {
    reject_complete(m, g)?;
    lambda_sets_from(m, &prepare(g)?)
}

/// Exact QE constant of `K̄_m + G`, with a stationary point attaining it.
pub fn qec_join_empty(m: usize, g: &Graph) -> Result<QecResult> {
    reject_complete(m, g)?;
    let prep = prepare(g)?;
    let sets = lambda_sets_from(m, &prep)?;
    let (alpha, source) = sets
        .min()
        .ok_or_else(|| QecError::internal("no stationary value found"))?;
    if alpha >= -1.0 {
        return Err(QecError::internal(format!(
            "least stationary value {alpha} is not below -1"
        )));
    }
    let witness = witness(m, &prep, alpha, source)?;
    let a1 = DMatrix::<f64>::zeros(m, m);
    let res = witness.residuals(&a1, &g.adjacency_f64());
    if !res.within(WITNESS_TOL, WITNESS_TOL) {
        return Err(QecError::internal(format!(
            "stationary point at α = {alpha} ({source}) fails its equations: {res:?}"
        )));
    }
    let mut out = QecResult::from_alpha(alpha, source);
    out.witness = Some(witness);
    Ok(out)
}

fn eigenvector_at(m: &DMatrix<f64>, alpha: f64) -> Result<DVector<f64>> {
    let spec = eigen_sym(m)?;
    let range = spec.cluster_at(alpha, 1e-7);
    if range.is_empty() {
        return Err(QecError::internal(format!("{alpha} is not an eigenvalue")));
    }
    Ok(spec.vector(range.start))
}

fn witness(m: usize, prep: &Prepared, alpha: f64, source: Source) -> Result<StationaryWitness> {
    let n = prep.a.nrows();
    let mf = m as f64;
    let a = prep.a.map(|v| v as f64);
    let build = |c: f64, g: DVector<f64>, mu: f64| StationaryWitness {
        alpha,
        mu,
        f: vec![c; m],
        g: g.iter().copied().collect(),
    };
    match source {
        Source::Lambda0 => {
            let g0 = eigenvector_at(&a.map(|v| 1.0 - v), mf)?;
            let s1 = g0.sum();
            let gamma = 1.0 / (g0.norm_squared() + s1 * s1 / mf).sqrt();
            Ok(build(-gamma * s1 / mf, g0 * gamma, 0.0))
        }
        Source::Lambda1 => {
            let shifted = &a - DMatrix::identity(n, n) * alpha;
            let h = shifted
                .lu()
                .solve(&DVector::from_element(n, 1.0))
                .ok_or_else(|| QecError::internal("A - αI is singular at a Λ₁ root"))?;
            let cf = 1.0 / (alpha + mf);
            let cg = -(alpha + 2.0 * mf) / (alpha + mf);
            let s = 1.0 / (mf * cf * cf + cg * cg * h.norm_squared()).sqrt();
            Ok(build(cf * s, h * (cg * s), 2.0 * s))
        }
        Source::Lambda2 => {
            let g0 = eigenvector_at(&a, -2.0 * mf)?;
            let s1 = g0.sum();
            let gamma = 1.0 / (g0.norm_squared() + s1 * s1 / mf).sqrt();
            let s = gamma * s1;
            Ok(build(-s / mf, g0 * gamma, 2.0 * s))
        }
        Source::Lambda3 => {
            let g0 = eigenvector_orthogonal_to_ones(&prep.spec, alpha, CLUSTER_TOL)
                .ok_or_else(|| QecError::internal("no eigenvector orthogonal to 1"))?;
            Ok(build(0.0, g0, 0.0))
        }
        other => Err(QecError::internal(format!("unexpected source {other}"))),
    }
}

/// `QEC(K1 + G)` for a `κ`-regular `G` on `n` vertices:
/// `max{-(κ+2)/(n+1), -min ev(A) - 2}`.
pub fn qec_k1_regular(g: &Graph) -> Result<QecResult> {
    let kappa = g
        .regular_degree()
        .ok_or_else(|| QecError::invalid(format!("{g} is not regular")))?;
    if kappa == 0 {
        return Err(QecError::invalid("the regular degree must be at least 1"));
    }
    let n = g.n() as f64;
    let secular = -(kappa as f64 + 2.0) / (n + 1.0);
    let spectral = -eigen_sym(&g.adjacency_f64())?.min() - 2.0;
    Ok(if spectral > secular + TIE_TOL {
        QecResult::from_value(spectral, Source::Lambda3)
    } else {
        QecResult::from_value(secular, Source::Lambda1)
    })
}

/// The join `K̄_m + G` and its distance matrix, in the vertex order used by
/// the witnesses.
pub fn join_with_empty(m: usize, g: &Graph) -> Result<(Graph, DMatrix<f64>)> {
    let empty = family(FamilyKind::Empty, m)?;
    let d = join_distance_matrix(&empty, g).to_f64();
    Ok((crate::graphs::join(&empty, g), d))
}

/// Rational evaluation of `q/p` as a float, for diagnostics.
pub fn ones_quadratic_form_value(p: &IntPoly, q: &IntPoly, alpha: f64) -> f64 {
    q.eval_f64(alpha) / p.eval_f64(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::FamilyKind::*;
    use crate::spectra::qec_oracle;

    fn fam(k: FamilyKind, n: usize) -> Graph {
        family(k, n).unwrap()
    }

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&fam(Path, 3).adjacency()).unwrap(), p(&[0, -2, 0, 1]));
        assert_eq!(char_poly(&fam(Complete, 2).adjacency()).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(char_poly(&DMatrix::zeros(2, 2)).unwrap(), p(&[0, 0, 1]));
        // C4: x^2 (x-2)(x+2)
        assert_eq!(char_poly(&fam(Cycle, 4).adjacency()).unwrap(), p(&[0, 0, -4, 0, 1]));
        assert!(char_poly(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn bareiss_examples() {
        let m = DMatrix::from_row_slice(3, 3, &[2, -1, 0, -1, 2, -1, 0, -1, 2]);
        assert_eq!(bareiss_det(&m).unwrap(), BigInt::from(4));
        let m = DMatrix::from_row_slice(2, 2, &[0, 1, 1, 0]);
        assert_eq!(bareiss_det(&m).unwrap(), BigInt::from(-1));
        let m = DMatrix::from_row_slice(2, 2, &[1, 2, 2, 4]);
        assert_eq!(bareiss_det(&m).unwrap(), BigInt::zero());
    }

    #[test]
    fn bareiss_agrees_with_char_poly_at_integers() {
        let a = fam(Cycle, 6).adjacency();
        let chi = char_poly(&a).unwrap();
        for r in -3..=3i64 {
            let m = DMatrix::from_fn(6, 6, |i, j| if i == j { r } else { 0 } - a[(i, j)]);
            assert_eq!(bareiss_det(&m).unwrap(), chi.eval_i64(r));
        }
    }

    fn reduced_ratio(a: &DMatrix<i64>) -> (IntPoly, IntPoly) {
        let (p, q) = ones_quadratic_form_poly(a).unwrap();
        let g = p.gcd(&q);
        let (mut p, mut q) = (p.div_exact(&g).unwrap(), q.div_exact(&g).unwrap());
        if p.leading().unwrap() < &BigInt::zero() {
            p = -p;
            q = -q;
        }
        (p, q)
    }

    #[test]
    fn ones_form_examples() {
        assert_eq!(reduced_ratio(&fam(Complete, 2).adjacency()), (p(&[-1, 1]), p(&[-2])));
        assert_eq!(reduced_ratio(&fam(Path, 3).adjacency()), (p(&[-2, 0, 1]), p(&[-4, -3])));
        assert_eq!(reduced_ratio(&fam(Cycle, 4).adjacency()), (p(&[-2, 1]), p(&[-4])));
    }

    fn approx(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-10)
    }

    #[test]
    fn lambda_sets_examples() {
        let s = compute_lambda_sets(2, &fam(Complete, 2)).unwrap();
        assert!(s.lambda0.is_empty() && s.lambda2.is_empty());
        assert!(approx(&s.lambda1, &[-1.5]));
        assert!(s.lambda3.iter().all(|&a| a >= -1.0));

        let s = compute_lambda_sets(1, &fam(Cycle, 4)).unwrap();
        assert!(approx(&s.lambda1, &[-1.2]));
        assert!(approx(&s.lambda2, &[-2.0]));

        let s = compute_lambda_sets(2, &fam(Path, 3)).unwrap();
        assert!(approx(&s.lambda0, &[-2.0]));
        assert!(approx(&s.lambda1, &[-1.2]));
    }

    #[test]
    fn complete_join_rejected() {
        let err = compute_lambda_sets(1, &fam(Complete, 4)).unwrap_err();
        assert!(matches!(err, QecError::InvalidArgument(_)));
        assert!(qec_join_empty(0, &fam(Path, 3)).is_err());
        assert!(qec_join_empty(2, &fam(Complete, 4)).is_ok());
    }

    #[test]
    fn join_examples() {
        let r = qec_join_empty(2, &fam(Complete, 2)).unwrap();
        assert!((r.value + 0.5).abs() < 1e-12);
        assert_eq!(r.source, Source::Lambda1);
        let r = qec_join_empty(1, &fam(Cycle, 4)).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert_eq!(r.source, Source::Lambda2);
        for m in 1..=10usize {
            let mf = m as f64;
            let want = (mf - 4.0 + (3.0 * mf * mf - 6.0 * mf + 4.0).sqrt()) / (mf + 3.0);
            let r = qec_join_empty(m, &fam(Path, 3)).unwrap();
            assert!((r.value - want).abs() < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn witnesses_attain_the_value() {
        let cases = [
            (2, fam(Complete, 2)),
            (1, fam(Cycle, 4)),
            (2, fam(Path, 3)),
            (3, fam(Cycle, 6)),
            (2, fam(Empty, 3)),
            (1, fam(Path, 6)),
        ];
        for (m, g) in cases {
            let r = qec_join_empty(m, &g).unwrap();
            let (_, d) = join_with_empty(m, &g).unwrap();
            let w = r.witness.unwrap();
            assert!((w.psi(&d) - r.value).abs() < 1e-8, "m={m} g={g}");
        }
    }

    #[test]
    fn lambda0_witness() {
        // J - A(P3) has eigenvalue 2 with eigenvector (1, 0, -1)
        let r = qec_join_empty(2, &fam(Path, 3)).unwrap();
        assert_eq!(r.source, Source::Lambda0);
        assert!(r.value.abs() < 1e-12);
        let w = r.witness.unwrap();
        let res = w.residuals(&DMatrix::zeros(2, 2), &fam(Path, 3).adjacency_f64());
        assert!(res.within(1e-10, 1e-10), "{res:?}");
    }

    #[test]
    fn matches_oracle_on_families() {
        for m in 1..=3 {
            for kind in FamilyKind::ALL {
                for n in 1..=6 {
                    let Ok(g) = family(kind, n) else { continue };
                    if m == 1 && g.is_complete() {
                        continue;
                    }
                    let (joined, _) = join_with_empty(m, &g).unwrap();
                    let exact = qec_join_empty(m, &g).unwrap().value;
                    let brute = qec_oracle(&joined).unwrap().value;
                    assert!((exact - brute).abs() < 1e-8, "m={m} g={g}: {exact} vs {brute}");
                }
            }
        }
    }

    #[test]
    fn regular_shortcut() {
        assert!(qec_k1_regular(&fam(Cycle, 4)).unwrap().value.abs() < 1e-12);
        let r = qec_k1_regular(&fam(Complete, 5)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        let r = qec_k1_regular(&fam(Cycle, 5)).unwrap();
        let want = -2.0 * (4.0 * std::f64::consts::PI / 5.0).cos() - 2.0;
        assert!((r.value - want).abs() < 1e-12);
        assert_eq!(r.source, Source::Lambda3);
        assert!(qec_k1_regular(&fam(Path, 4)).is_err());
        assert!(qec_k1_regular(&fam(Empty, 4)).is_err());
    }
}
