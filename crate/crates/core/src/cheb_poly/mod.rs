//! Exact integer polynomials for the Chebyshev family used by the fan-graph
//! formula.
//!
//! Everything is kept in the compressed normalisation `Ũ_n(x) = U_n(x/2)`,
//! which makes every polynomial here monic or at least integral:
//!
//! * `Ũ_n`, the characteristic polynomial of the path `P_n`;
//! * the partial Chebyshev factors `Ũᵉ_n`, `Ũᵒ_n` with `Ũ_n = Ũᵉ_n · Ũᵒ_n`,
//!   collecting the zeros `2cos(lπ/(n+1))` with `l` even and odd;
//! * `Φ_n = ((n+1)x² - 6x - 4n) Ũ_n + 2(x+2) Ũ_{n-1} + 2(x+2)`;
//! * `4Q_n(x/2) = Φ_n / Ũᵉ_n` and `R_n = 4Q_n(x/2) / (x-2)²`.
//!
//! The classical form of a compressed polynomial `p` is `p.scale_var(2)`.

mod int_poly;
mod sturm;

pub use int_poly::IntPoly;
pub use sturm::{
    interval_from_f64, isolate_all, real_roots, refine_root, root_bound, sturm_isolate,
    RootInterval, RootIsolation, SturmChain,
};

use crate::error::{QecError, Result};

/// `Ũ_0, ..., Ũ_n` from `Ũ_0 = 1`, `Ũ_1 = x`, `Ũ_{k+1} = x Ũ_k - Ũ_{k-1}`.
pub fn u_tilde_seq(n: usize) -> Vec<IntPoly> {
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(IntPoly::one());
    if n >= 1 {
        seq.push(IntPoly::x());
    }
    for k in 2..=n {
        let next = &seq[k - 1].shift(1) - &seq[k - 2];
        seq.push(next);
    }
    seq
}

/// Compressed Chebyshev polynomial of the second kind, `Ũ_n(x) = U_n(x/2)`.
pub fn u_tilde(n: usize) -> IntPoly {
    u_tilde_seq(n).pop().unwrap()
}

/// `Ũ_k` with `Ũ_{-1} = 0` and `Ũ_{-2} = -1`, the values the three-term
/// recurrence extends to.
fn u_tilde_ext(seq: &[IntPoly], k: isize) -> IntPoly {
    match k {
        -1 => IntPoly::zero(),
        -2 => IntPoly::constant(-1),
        k if k >= 0 => seq[k as usize].clone(),
        _ => unreachable!("index {k} below -2"),
    }
}

/// The partial Chebyshev pair `(Ũᵉ_n, Ũᵒ_n)`:
///
/// ```text
/// Ũᵉ_2k   = Ũ_k + Ũ_{k-1}     Ũᵒ_2k   = Ũ_k - Ũ_{k-1}
/// Ũᵉ_2k+1 = Ũ_k               Ũᵒ_2k+1 = Ũ_{k+1} - Ũ_{k-1}
/// ```
pub fn partial_chebyshev(n: usize) -> (IntPoly, IntPoly) {
    let k = n / 2;
    let seq = u_tilde_seq(k + 1);
    let at = |i: isize| u_tilde_ext(&seq, i);
    let k = k as isize;
    if n % 2 == 0 {
        (&at(k) + &at(k - 1), &at(k) - &at(k - 1))
    } else {
        (at(k), &at(k + 1) - &at(k - 1))
    }
}

/// `Φ_n(x) = ((n+1)x² - 6x - 4n) Ũ_n + 2(x+2) Ũ_{n-1} + 2(x+2)`.
pub fn phi(n: usize) -> Result<IntPoly> {
    if n == 0 {
        return Err(QecError::invalid("Φ_n is defined for n >= 1"));
    }
    let seq = u_tilde_seq(n);
    let n_i = n as i64;
    let quad = IntPoly::from_i64s(&[-4 * n_i, -6, n_i + 1]);
    let lin = IntPoly::from_i64s(&[4, 2]);
    Ok(&(&(&quad * &seq[n]) + &(&lin * &seq[n - 1])) + &lin)
}

/// `4Q_n(x/2)`, the cofactor of `Ũᵉ_n` in `Φ_n`, by exact division.
pub fn q_poly(n: usize) -> Result<IntPoly> {
    let phi_n = phi(n)?;
    let (ue, _) = partial_chebyshev(n);
    phi_n
        .div_exact(&ue)
        .ok_or_else(|| QecError::internal(format!("Ũᵉ_{n} does not divide Φ_{n}")))
}

/// `4Q_n(x/2)` from its closed form in Chebyshev polynomials, compressed:
///
/// ```text
/// 4Q_2k(x/2)   = ((2k+1)x² - 6x - 8k)(Ũ_k - Ũ_{k-1}) + 2(x+2)(Ũ_{k-1} - Ũ_{k-2})
/// 4Q_2k+1(x/2) = ((2k+2)x² - 6x - 8k-4)(Ũ_{k+1} - Ũ_{k-1}) + 2(x+2)(Ũ_k - Ũ_{k-2})
/// ```
///
/// Independent of [`q_poly`], which divides instead.
pub fn q_poly_closed_form(n: usize) -> Result<IntPoly> {
    if n == 0 {
        return Err(QecError::invalid("Q_n is defined for n >= 1"));
    }
    let k = n / 2;
    let seq = u_tilde_seq(k + 1);
    let at = |i: isize| u_tilde_ext(&seq, i);
    let ki = k as isize;
    let k64 = k as i64;
    let lin = IntPoly::from_i64s(&[4, 2]);
    if n % 2 == 0 {
        let quad = IntPoly::from_i64s(&[-8 * k64, -6, 2 * k64 + 1]);
        Ok(&quad * &(&at(ki) - &at(ki - 1)) + &lin * &(&at(ki - 1) - &at(ki - 2)))
    } else {
        let quad = IntPoly::from_i64s(&[-8 * k64 - 4, -6, 2 * k64 + 2]);
        Ok(&quad * &(&at(ki + 1) - &at(ki - 1)) + &lin * &(&at(ki) - &at(ki - 2)))
    }
}

/// `R_n = 4Q_n(x/2) / (x-2)²`.
pub fn r_poly(n: usize) -> Result<IntPoly> {
    let q = q_poly(n)?;
    let square = IntPoly::from_i64s(&[4, -4, 1]);
    q.div_exact(&square)
        .ok_or_else(|| QecError::internal(format!("(x-2)² does not divide 4Q_{n}(x/2)")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use std::f64::consts::PI;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn u_tilde_small() {
        assert_eq!(u_tilde(0), p(&[1]));
        assert_eq!(u_tilde(1), p(&[0, 1]));
        assert_eq!(u_tilde(2), p(&[-1, 0, 1]));
        assert_eq!(u_tilde(3), p(&[0, -2, 0, 1]));
    }

    #[test]
    fn uncompressed_view() {
        // U_2(x) = 4x² - 1
        assert_eq!(u_tilde(2).scale_var(2), p(&[-1, 0, 4]));
        let (ue, uo) = partial_chebyshev(2);
        assert_eq!(ue.scale_var(2), p(&[1, 2]));
        assert_eq!(uo.scale_var(2), p(&[-1, 2]));
    }

    #[test]
    fn partial_chebyshev_small() {
        assert_eq!(partial_chebyshev(0), (p(&[1]), p(&[1])));
        assert_eq!(partial_chebyshev(1), (p(&[1]), p(&[0, 1])));
        assert_eq!(partial_chebyshev(2), (p(&[1, 1]), p(&[-1, 1])));
        let (ue, uo) = partial_chebyshev(3);
        assert_eq!(ue, p(&[0, 1]));
        assert_eq!(uo, p(&[-2, 0, 1]));
        assert_eq!(&ue * &uo, u_tilde(3));
    }

    #[test]
    fn phi_small() {
        assert_eq!(phi(1).unwrap(), p(&[8, 0, -6, 2]));
        let three_x2_x1 = (p(&[4, -4, 1]) * p(&[1, 2, 1])).scale_i64(3);
        assert_eq!(phi(2).unwrap(), three_x2_x1);
        assert!(phi(0).is_err());
    }

    #[test]
    fn phi_degree_and_values_at_minus_two() {
        for n in 1..=50usize {
            let f = phi(n).unwrap();
            assert_eq!(f.degree(), Some(n + 2));
            assert_eq!(f.leading().cloned(), Some(BigInt::from(n + 1)));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(f.eval_i64(-2), BigInt::from(16 * (n as i64 + 1) * sign));
            assert!(f.eval_i64(2).is_zero());
            assert!(f.derivative().eval_i64(2).is_zero());
            assert!(!f.derivative().derivative().eval_i64(2).is_zero());
        }
    }

    #[test]
    fn q_and_r_small() {
        assert_eq!(q_poly(1).unwrap(), phi(1).unwrap());
        assert_eq!(q_poly(2).unwrap(), (p(&[4, -4, 1]) * p(&[1, 1])).scale_i64(3));
        assert_eq!(r_poly(1).unwrap(), p(&[2, 2]));
        assert_eq!(r_poly(4).unwrap(), p(&[3, 9, 5]));
        assert_eq!(r_poly(10).unwrap(), p(&[11, -15, -57, -12, 27, 11]));
    }

    #[test]
    fn closed_form_q_matches_division() {
        for n in 1..=50 {
            assert_eq!(q_poly_closed_form(n).unwrap(), q_poly(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn partial_roots_split_by_parity() {
        for n in 1..=40usize {
            let (ue, uo) = partial_chebyshev(n);
            for l in 1..=n {
                let a = 2.0 * (l as f64 * PI / (n as f64 + 1.0)).cos();
                let (zero, other) = if l % 2 == 0 { (&ue, &uo) } else { (&uo, &ue) };
                let slope = zero.derivative().eval_f64(a).abs().max(1.0);
                assert!(zero.eval_f64(a).abs() <= 1e-10 * slope, "n={n} l={l}");
                assert!(other.eval_f64(a).abs() > 1e-6, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn phi_at_path_eigenvalues() {
        for n in 3..=30usize {
            let f = phi(n).unwrap();
            let df = f.derivative();
            // monomial-basis evaluation on [-2, 2] cancels heavily
            let scale = |q: &IntPoly| 1e-14 * (n as f64 + 3.0) * q.abs_sum_at(2.0);
            let (tol, dtol) = (scale(&f), scale(&df));
            for l in 1..=n {
                let theta = l as f64 * PI / (n as f64 + 1.0);
                let (c, s) = (theta.cos(), theta.sin());
                // 4(α+2) at odd l, a double-angle form of 16cos²(θ/2)
                let want = if l % 2 == 1 { 16.0 * (theta / 2.0).cos().powi(2) } else { 0.0 };
                assert!((f.eval_f64(2.0 * c) - want).abs() <= tol, "n={n} l={l}");
                if l % 2 == 0 {
                    let nf = n as f64;
                    let slope = 2.0 * (nf + 1.0) * (nf + 2.0) * (1.0 - c) / (s * s)
                        * (c + nf / (nf + 2.0));
                    assert!((df.eval_f64(2.0 * c) - slope).abs() <= dtol, "n={n} l={l}");
                    assert!(slope.abs() > 1e-6);
                }
            }
        }
    }
}
