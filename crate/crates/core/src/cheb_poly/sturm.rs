//! Real-root isolation with Sturm sequences and exact bisection.
//!
//! All sign evaluations are exact over the rationals; floating point only
//! appears when a refined root is finally reported.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPoly;
use crate::error::{QecError, Result};

/// Sturm sequence of a square-free polynomial, each member scaled to its
/// primitive part by a positive factor so signs are preserved.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let mut chain = vec![positive_primitive(p), positive_primitive(&p.derivative())];
        loop {
            let (a, b) = (&chain[chain.len() - 2], &chain[chain.len() - 1]);
            if b.is_zero() {
                chain.pop();
                break;
            }
            if b.is_constant() {
                break;
            }
            // lc(b)^k · a = q·b + r, so -rem(a, b) has the sign of -r / lc(b)^k.
            let k = a.degree().unwrap() - b.degree().unwrap() + 1;
            let mut r = -a.pseudo_rem(b);
            if b.leading().unwrap().is_negative() && k % 2 == 1 {
                r = -r;
            }
            chain.push(positive_primitive(&r));
        }
        SturmChain { chain }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Sign variations of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Divides by the content, keeping the sign of the leading coefficient.
fn positive_primitive(p: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return IntPoly::zero();
    }
    let c = p.content();
    IntPoly::new(p.coeffs().iter().map(|a| a / &c).collect())
}

/// A rational interval `(lo, hi]` holding exactly one distinct real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Isolating intervals for the distinct real roots of a polynomial in a
/// range, with the multiplicity of each root. Sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootIsolation {
    pub intervals: Vec<RootInterval>,
    pub multiplicities: Vec<usize>,
}

impl RootIsolation {
    pub fn distinct(&self) -> usize {
        self.intervals.len()
    }

    /// Number of roots counted with multiplicity.
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// Cauchy bound: every real root lies strictly inside `(-B, B)`.
pub fn root_bound(p: &IntPoly) -> BigRational {
    let lc = p.leading().expect("nonzero polynomial").abs();
    let max = p
        .coeffs()
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(BigInt::zero);
    BigRational::new(max, lc) + BigRational::one()
}

fn rat(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| QecError::invalid(format!("non-finite bound {x}")))
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

fn bisect_isolate(
    chain: &SturmChain,
    lo: BigRational,
    hi: BigRational,
    out: &mut Vec<RootInterval>,
) {
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        match chain.count(&a, &b) {
            0 => {}
            1 => {
                // The open end may be the neighbouring root; move it off so
                // the interval shows a sign change or ends on the root.
                let (mut a, mut b) = (a, b);
                while chain.chain[0].sign_at(&a) == 0 {
                    let m = (&a + &b) / two();
                    if chain.count(&m, &b) == 1 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                out.push(RootInterval { lo: a, hi: b });
            }
            _ => {
                let m = (&a + &b) / two();
                // Upper half first onto the stack so the lower half pops first.
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
}

/// Isolates all real roots of `p` in `(lo, hi]` and reports their
/// multiplicities from the square-free decomposition.
pub fn sturm_isolate(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<RootIsolation> {
    if p.is_zero() {
        return Err(QecError::invalid("cannot isolate roots of the zero polynomial"));
    }
    if lo >= hi {
        return Err(QecError::invalid(format!("empty interval ({lo}, {hi}]")));
    }
    let factors = p.square_free_decomposition();
    let square_free = factors
        .iter()
        .fold(IntPoly::one(), |acc, (f, _)| &acc * f);
    if square_free.is_constant() {
        return Ok(RootIsolation {
            intervals: Vec::new(),
            multiplicities: Vec::new(),
        });
    }
    let chain = SturmChain::new(&square_free);
    let mut intervals = Vec::new();
    bisect_isolate(&chain, lo.clone(), hi.clone(), &mut intervals);

    let factor_chains: Vec<(SturmChain, usize)> = factors
        .iter()
        .map(|(f, k)| (SturmChain::new(f), *k))
        .collect();
    let mut multiplicities = Vec::with_capacity(intervals.len());
    for iv in &intervals {
        let mut hits = factor_chains
            .iter()
            .filter(|(c, _)| c.count(&iv.lo, &iv.hi) == 1)
            .map(|(_, k)| *k);
        let k = hits
            .next()
            .ok_or_else(|| QecError::internal("isolated root belongs to no square-free factor"))?;
        if hits.next().is_some() {
            return Err(QecError::internal("square-free factors share a root"));
        }
        multiplicities.push(k);
    }
    Ok(RootIsolation {
        intervals,
        multiplicities,
    })
}

/// Isolates every real root of `p`.
pub fn isolate_all(p: &IntPoly) -> Result<RootIsolation> {
    if p.is_zero() {
        return Err(QecError::invalid("cannot isolate roots of the zero polynomial"));
    }
    let b = root_bound(p);
    sturm_isolate(p, &-b.clone(), &b)
}

/// Narrows a sign-changing interval of `p` to width at most `tol` by exact
/// bisection, then polishes the midpoint with Newton steps that stay inside
/// the final bracket.
///
/// When `p` keeps its sign at both ends the sign test switches to the
/// square-free part, so a root of any multiplicity can be refined as long
/// as it is the only root in the interval. An endpoint that is an exact root is returned as is.
pub fn refine_root(p: &IntPoly, interval: &RootInterval, tol: f64) -> Result<f64> {
    if p.is_zero() {
        return Err(QecError::invalid("cannot refine a root of the zero polynomial"));
    }
    if !(tol > 0.0) {
        return Err(QecError::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = (interval.lo.clone(), interval.hi.clone());
    if lo >= hi {
        return Err(QecError::invalid("empty refinement interval"));
    }
    let sf = if p.sign_at(&lo) * p.sign_at(&hi) < 0 {
        p.clone()
    } else {
        p.square_free_part()
    };
    let (slo, shi) = (sf.sign_at(&lo), sf.sign_at(&hi));
    if shi == 0 {
        return Ok(hi.to_f64().unwrap_or(f64::NAN));
    }
    if slo == 0 {
        return Ok(lo.to_f64().unwrap_or(f64::NAN));
    }
    if slo == shi {
        return Err(QecError::invalid(format!(
            "no sign change on [{}, {}]",
            lo.to_f64().unwrap_or(f64::NAN),
            hi.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let tol = rat(tol)?;
    while &hi - &lo > tol {
        let m = (&lo + &hi) / two();
        match sf.sign_at(&m) {
            0 => return Ok(m.to_f64().unwrap_or(f64::NAN)),
            s if s == slo => lo = m,
            _ => hi = m,
        }
    }
    let (a, b) = (lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN));
    Ok(newton_polish(&sf, ((lo + hi) / two()).to_f64().unwrap_or(f64::NAN), a, b))
}

/// A few Newton steps in `f64`, kept inside `[a, b]`.
fn newton_polish(p: &IntPoly, mut x: f64, a: f64, b: f64) -> f64 {
    let dp = p.derivative();
    for _ in 0..4 {
        let (fx, dx) = (p.eval_f64(x), dp.eval_f64(x));
        if fx == 0.0 || !fx.is_finite() || dx == 0.0 || !dx.is_finite() {
            break;
        }
        let next = x - fx / dx;
        if !(a..=b).contains(&next) || next == x {
            break;
        }
        x = next;
    }
    x
}

/// All distinct real roots of `p` refined to `tol`, ascending, with
/// multiplicities.
pub fn real_roots(p: &IntPoly, tol: f64) -> Result<Vec<(f64, usize)>> {
    let iso = isolate_all(p)?;
    iso.intervals
        .iter()
        .zip(&iso.multiplicities)
        .map(|(iv, &k)| Ok((refine_root(p, iv, tol)?, k)))
        .collect()
}

/// Rational interval from floating endpoints.
pub fn interval_from_f64(lo: f64, hi: f64) -> Result<RootInterval> {
    Ok(RootInterval {
        lo: rat(lo)?,
        hi: rat(hi)?,
    })
}
