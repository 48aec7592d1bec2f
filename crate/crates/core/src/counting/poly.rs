use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact polynomial in `q` with arbitrary-precision integer coefficients,
/// stored densely in ascending degree without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `q^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    /// `q - 1`
    pub fn q_minus_one() -> Self {
        Self::from_i64s(&[-1, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_i64(&self, q: i64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    /// Division with remainder by a divisor whose leading coefficient is a
    /// unit or divides every intermediate leading term.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::NonDivisible);
        };
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = rem[top].clone();
            if !c.is_zero() {
                let (f, r) = c.div_rem(lead);
                if !r.is_zero() {
                    return Err(Error::NonDivisible);
                }
                let shift = top - dd;
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] -= &f * d;
                }
                quot[shift] = f;
            }
            rem.pop();
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonDivisible)
        }
    }

    /// Coefficients in the basis of powers of `q - 1`, i.e. the coefficients
    /// of `p(x + 1)`, computed by repeated synthetic division by `q - 1`.
    pub fn to_q_minus_one_basis(&self) -> Vec<BigInt> {
        let mut cur = self.coeffs.clone();
        let mut out = Vec::with_capacity(cur.len());
        while !cur.is_empty() {
            // Horner at 1: quotient by (q - 1) and remainder p(1).
            let mut carry = BigInt::zero();
            let mut quot = vec![BigInt::zero(); cur.len() - 1];
            for i in (0..cur.len()).rev() {
                carry += &cur[i];
                if i > 0 {
                    quot[i - 1] = carry.clone();
                }
            }
            out.push(carry);
            cur = quot;
        }
        out
    }

    /// Inverse of [`Self::to_q_minus_one_basis`].
    pub fn from_q_minus_one_basis(b: &[BigInt]) -> Self {
        let qm1 = Self::q_minus_one();
        b.iter().rev().fold(Self::zero(), |acc, c| &(&acc * &qm1) + &Self::constant(c.clone()))
    }

    /// Order of vanishing at `q = 1` and the value of `p / (q-1)^rho` there.
    pub fn vanishing_order_and_limit(&self) -> Result<LimitResult> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let b = self.to_q_minus_one_basis();
        let rho = b.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
        Ok(LimitResult { rho, limit: b[rho].clone() })
    }
}

/// Result of the `q -> 1` analysis of a counting polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitResult {
    pub rho: usize,
    #[serde(serialize_with = "serialize_bigint")]
    pub limit: BigInt,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}q^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
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
        IntPolynomial::new(out)
    }
}

impl std::iter::Sum for IntPolynomial {
    fn sum<I: Iterator<Item = IntPolynomial>>(iter: I) -> Self {
        iter.fold(IntPolynomial::zero(), |acc, p| &acc + &p)
    }
}

impl std::iter::Product for IntPolynomial {
    fn product<I: Iterator<Item = IntPolynomial>>(iter: I) -> Self {
        iter.fold(IntPolynomial::one(), |acc, p| &acc * &p)
    }
}

/// Serializes an integer as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&bigint_json(c))?;
        }
        seq.end()
    }
}

/// `[n]_q = 1 + q + ... + q^{n-1}`
pub fn gauss_number(n: usize) -> IntPolynomial {
    IntPolynomial::new(vec![BigInt::one(); n])
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`
pub fn gauss_factorial(n: usize) -> IntPolynomial {
    (1..=n).map(gauss_number).product()
}

/// `[n choose k]_q`, by exact division of Gauss factorials. Zero outside
/// `0 <= k <= n`.
pub fn gauss_binomial(n: usize, k: usize) -> Result<IntPolynomial> {
    if k > n {
        return Ok(IntPolynomial::zero());
    }
    let denom = &gauss_factorial(k) * &gauss_factorial(n - k);
    gauss_factorial(n).div_exact(&denom)
}
