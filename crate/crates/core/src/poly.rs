//! Exact sparse polynomials in `beta, x_1..x_n` with arbitrary-precision
//! integer coefficients, divided difference operators, and the Grothendieck
//! polynomials they generate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::perm::Permutation;
use crate::{Error, Result};

/// Sparse polynomial in `beta` and `x_1..x_n`. Exponent vectors keep the
/// `beta` degree in slot 0 and the degree of `x_i` in slot `i`; no stored
/// coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.insert_term(vec![0; nvars + 1], c);
        p
    }

    /// The variable `x_i`, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= nvars, "variable index {i} out of range");
        let mut exps = vec![0; nvars + 1];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.insert_term(exps, BigInt::one());
        p
    }

    pub fn beta(nvars: usize) -> Self {
        let mut exps = vec![0; nvars + 1];
        exps[0] = 1;
        let mut p = Self::zero(nvars);
        p.insert_term(exps, BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(exponents, coefficient)` pairs; slot 0 of the exponent
    /// vector is the `beta` degree.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Adds `c * monomial(exps)` in place, dropping the term if it cancels.
    pub fn insert_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.nvars + 1, "exponent vector length");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Applies `s_i`, swapping `x_i` and `x_{i+1}`.
    pub fn swap_vars(&self, i: usize) -> Self {
        assert!(
            (1..self.nvars).contains(&i),
            "variable index {i} out of range"
        );
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let mut e = exps.clone();
            e.swap(i, i + 1);
            out.insert_term(e, c.clone());
        }
        out
    }

    /// Multiplies by `x_i^k`.
    fn shift_var(&self, i: usize, k: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let mut e = exps.clone();
            e[i] += k;
            out.insert_term(e, c.clone());
        }
        out
    }

    /// Divided difference `(f - s_i f) / (x_i - x_{i+1})`, computed by
    /// synthetic division in `x_i`. The quotient is exact because the
    /// numerator is antisymmetric in `x_i, x_{i+1}`; a nonzero remainder is
    /// reported as an internal error.
    pub fn divided_difference(&self, i: usize) -> Result<Self> {
        if i < 1 || i + 1 > self.nvars {
            return Err(Error::BadVariable(i));
        }
        let g = self - &self.swap_vars(i);
        if g.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        // split g by the degree of x_i, zeroing that slot
        let mut parts: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (exps, c) in &g.terms {
            let k = exps[i];
            let mut e = exps.clone();
            e[i] = 0;
            parts
                .entry(k)
                .or_insert_with(|| Self::zero(self.nvars))
                .insert_term(e, c.clone());
        }
        let d = *parts.keys().next_back().expect("g is nonzero");
        let x_next = Self::var(self.nvars, i + 1);
        let mut quotient = Self::zero(self.nvars);
        let mut carry = parts.remove(&d).unwrap();
        for k in (0..d).rev() {
            quotient = &quotient + &carry.shift_var(i, k);
            let part = parts.remove(&k).unwrap_or_else(|| Self::zero(self.nvars));
            carry = &part + &(&x_next * &carry);
        }
        if !carry.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(quotient)
    }

    /// The operator `pi_i`: divided difference of `f * (1 + beta x_{i+1})`.
    pub fn pi_op(&self, i: usize) -> Result<Self> {
        if i < 1 || i + 1 > self.nvars {
            return Err(Error::BadVariable(i));
        }
        let factor =
            &Self::one(self.nvars) + &(&Self::beta(self.nvars) * &Self::var(self.nvars, i + 1));
        (self * &factor).divided_difference(i)
    }

    /// Substitutes `x_i = 1` for every `i`, collecting by `beta` degree.
    pub fn specialize_ones(&self) -> BetaPoly {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (exps, c) in &self.terms {
            let d = exps[0] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigInt::zero());
            }
            coeffs[d] += c;
        }
        BetaPoly::from_coeffs(coeffs)
    }

    /// The terms of `beta`-degree zero.
    pub fn beta_zero_slice(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// One JSON object per term: `{"beta": d, "x": [e1..en], "c": k}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(exps, c)| {
                    json!({
                        "beta": exps[0],
                        "x": exps[1..].to_vec(),
                        "c": json_int(c),
                    })
                })
                .collect(),
        )
    }
}

/// A `BigInt` as a JSON number when it fits `i64`, a decimal string
/// otherwise.
fn json_int(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(c.to_string()),
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            if exps[0] == 1 {
                factors.push("b".into());
            } else if exps[0] > 1 {
                factors.push(format!("b^{}", exps[0]));
            }
            for (i, &e) in exps.iter().enumerate().skip(1) {
                if e == 1 {
                    factors.push(format!("x{i}"));
                } else if e > 1 {
                    factors.push(format!("x{i}^{e}"));
                }
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The Grothendieck polynomial of `w`, computed by descending from the
/// longest element: the staircase monomial for `n ... 2 1`, then one `pi_i`
/// per ascent. The result does not depend on which ascent is taken at each
/// step.
pub fn grothendieck_via_divided_differences(w: &Permutation) -> MultiPoly {
    grothendieck_dd_with(w, |u| u.first_ascent())
}

/// Same polynomial, with the ascent strategy made explicit so that path
/// independence can be exercised directly.
pub fn grothendieck_dd_with(
    w: &Permutation,
    ascent: impl Fn(&Permutation) -> Option<usize>,
) -> MultiPoly {
    let n = w.size();
    if n == 0 {
        return MultiPoly::one(0);
    }
    let mut ops = Vec::new();
    let mut u = w.clone();
    while let Some(i) = ascent(&u) {
        ops.push(i);
        u = u.swap_positions(i);
    }
    debug_assert_eq!(u, Permutation::longest(n));
    let exps: Vec<u32> = std::iter::once(0)
        .chain((1..=n).map(|i| (n - i) as u32))
        .collect();
    let mut f = MultiPoly::zero(n);
    f.insert_term(exps, BigInt::one());
    for &i in ops.iter().rev() {
        f = f.pi_op(i).expect("pi_op division is exact");
    }
    f
}

/// Polynomial in `beta` with integer coefficients: ascending coefficient
/// list, trailing zeros trimmed, empty list for zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BetaPoly {
    coeffs: Vec<BigInt>,
}

impl BetaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BetaPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `beta^d` (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `beta^d`.
    pub fn add_power(&mut self, d: usize) {
        if self.coeffs.len() <= d {
            self.coeffs.resize(d + 1, BigInt::zero());
        }
        self.coeffs[d] += 1;
        // adding 1 cannot create a trailing zero beyond index d
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn is_coeff_nonneg(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Coefficient-wise `self <= other`, missing coefficients read as zero.
    pub fn coeff_leq(&self, other: &BetaPoly) -> bool {
        (0..self.coeffs.len().max(other.coeffs.len())).all(|d| self.coeff(d) <= other.coeff(d))
    }

    /// Ascending coefficient array; the zero polynomial prints as `[0]`.
    pub fn to_json(&self) -> Value {
        if self.is_zero() {
            return json!([0]);
        }
        Value::Array(self.coeffs.iter().map(json_int).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::CacheIo(format!("expected a coefficient array, got {v}")))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for item in arr {
            let c = match item {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::CacheIo(format!("bad coefficient {item}")))?,
                Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| Error::CacheIo(format!("bad coefficient {item}")))?,
                _ => return Err(Error::CacheIo(format!("bad coefficient {item}"))),
            };
            coeffs.push(c);
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl Add for &BetaPoly {
    type Output = BetaPoly;
    fn add(self, rhs: &BetaPoly) -> BetaPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs[d] += c;
        }
        for (d, c) in rhs.coeffs.iter().enumerate() {
            coeffs[d] += c;
        }
        BetaPoly::from_coeffs(coeffs)
    }
}

impl Sub for &BetaPoly {
    type Output = BetaPoly;
    fn sub(self, rhs: &BetaPoly) -> BetaPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs[d] += c;
        }
        for (d, c) in rhs.coeffs.iter().enumerate() {
            coeffs[d] -= c;
        }
        BetaPoly::from_coeffs(coeffs)
    }
}

impl Neg for &BetaPoly {
    type Output = BetaPoly;
    fn neg(self) -> BetaPoly {
        BetaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl AddAssign<&BetaPoly> for BetaPoly {
    fn add_assign(&mut self, rhs: &BetaPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&BetaPoly> for BetaPoly {
    fn sub_assign(&mut self, rhs: &BetaPoly) {
        *self = &*self - rhs;
    }
}

impl fmt::Display for BetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "[0]");
        }
        let list = self
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "[{list}]")
    }
}
