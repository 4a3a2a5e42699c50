//! Dense univariate polynomials with arbitrary-precision integer
//! coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer polynomial, coefficients in ascending degree. The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64s(&[c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: i64) -> Self {
        Self::from_i64s(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c))
    }

    /// `p(c·x)`.
    pub fn scale_var(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= &c;
        }
        Self::new(out)
    }

    /// `x^k · p`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + BigRational::from(a.clone()))
    }

    /// Exact sign of `p(x)` as -1, 0 or 1.
    ///
    /// Evaluates the homogenised form `Σ a_i num^i den^(d-i)`, which has the
    /// sign of `p(num/den)` because `den > 0`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        debug_assert!(x.denom().is_positive());
        sign_of(&self.homogeneous_eval(x.numer(), x.denom()))
    }

    fn homogeneous_eval(&self, num: &BigInt, den: &BigInt) -> BigInt {
        // Horner over descending coefficients: acc = acc·num + a_i·den^(d-i).
        let d = self.coeffs.len();
        let mut den_powers = Vec::with_capacity(d);
        let mut den_pow = BigInt::one();
        for _ in 0..d {
            den_powers.push(den_pow.clone());
            den_pow *= den;
        }
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(BigInt::zero(), |acc, (i, a)| acc * num + a * &den_powers[d - 1 - i])
    }

    /// Floating-point evaluation by Horner's rule.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + a.to_f64().unwrap_or(f64::NAN))
    }

    /// `Σ |a_k| r^k`, a bound on `|p(x)|` for `|x| <= r` and the natural
    /// scale of rounding error in [`IntPoly::eval_f64`].
    pub fn abs_sum_at(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * r + a.to_f64().unwrap_or(f64::NAN).abs())
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// `p / content(p)` with a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Quotient and remainder over the rationals, scaled by
    /// `lc(d)^(deg p - deg d + 1)` so both stay integral:
    /// `lc(d)^k · p = q·d + r`.
    pub fn pseudo_div_rem(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let Some(pd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if pd < dd {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); pd - dd + 1];
        for k in (0..=pd - dd).rev() {
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for c in q.iter_mut() {
                *c *= &lc;
            }
            let t = r[k + dd].clone() / &lc;
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= &t * dj;
            }
            q[k] += t;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        self.pseudo_div_rem(d).1
    }

    /// Exact quotient in `Z[x]`, or `None` if `d` does not divide `self`
    /// there.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let Some(pd) = self.degree() else {
            return Some(Self::zero());
        };
        if pd < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); pd - dd + 1];
        for k in (0..=pd - dd).rev() {
            let (t, rem) = r[k + dd].div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] -= &t * dj;
            }
            q[k] = t;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Greatest common divisor in `Z[x]`, normalised to a positive leading
    /// coefficient. Computed with a primitive remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.scale(&content)
    }

    /// `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn square_free_part(&self) -> IntPoly {
        if self.is_constant() {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative()).primitive_part();
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides its argument")
    }

    /// Yun's square-free decomposition: primitive, pairwise coprime,
    /// square-free factors `s_i` with `p = c · Π s_i^i`. Constant factors
    /// are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.primitive_part();
        let df = f.derivative();
        let a0 = f.gcd(&df).primitive_part();
        let mut b = f.div_exact(&a0).expect("gcd divides f");
        let mut c = df.div_exact(&a0).expect("gcd divides f'");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d).primitive_part();
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("a divides b");
            c = d.div_exact(&a).expect("a divides d");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Multiplicity of the integer root `r` (0 if `p(r) != 0`).
    pub fn root_multiplicity(&self, r: i64) -> usize {
        let factor = Self::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() && p.eval_i64(r).is_zero() {
            p = p.div_exact(&factor).expect("x - r divides p when p(r) = 0");
            k += 1;
        }
        k
    }

    /// Removes every factor `x - r` for the listed integer roots.
    pub fn deflate_integer_roots(&self, roots: &[i64]) -> IntPoly {
        let mut p = self.clone();
        for &r in roots {
            let factor = Self::linear_root(r);
            while !p.is_zero() && p.eval_i64(r).is_zero() {
                p = p.div_exact(&factor).expect("x - r divides p when p(r) = 0");
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly { (&self).$m(&rhs) }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly { (&self).$m(rhs) }
        }
        impl $tr<IntPoly> for &IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Renders as e.g. `11x^5+27x^4-12x^3-57x^2-15x+11`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let abs = a.abs();
            if a.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if i == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Serialized as an ascending array of integers. Coefficients that do not
/// fit in 128 bits are written as decimal strings.
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i128() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

struct CoeffVisitor;

impl<'de> Visitor<'de> for CoeffVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_i128<E: de::Error>(self, v: i128) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u128<E: de::Error>(self, v: u128) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        v.parse().map_err(E::custom)
    }
}

struct Coeff(BigInt);

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(CoeffVisitor).map(Coeff)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct SeqVisitor;
        impl<'de> Visitor<'de> for SeqVisitor {
            type Value = IntPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of integer coefficients")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<IntPoly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(Coeff(c)) = seq.next_element()? {
                    coeffs.push(c);
                }
                Ok(IntPoly::new(coeffs))
            }
        }
        d.deserialize_seq(SeqVisitor)
    }
}
