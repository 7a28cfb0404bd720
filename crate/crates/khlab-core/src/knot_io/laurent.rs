//! Integer Laurent polynomials in a single variable `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Polynomial in `q` and `q^-1` with integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    coefficients: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * q^exp`.
    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// The loop value `q + q^-1`.
    pub fn loop_value() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coefficients.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coefficients.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coefficients.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coefficients.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coefficients.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coefficients.keys().next_back().copied()
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|(&e, &c)| (e + shift, c)).collect(),
        }
    }

    pub fn scale(&self, factor: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * factor)))
    }

    /// Substitutes `q -> q^-1`.
    pub fn mirror(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// Substitutes `q -> q^factor`.
    pub fn dilate(&self, factor: i32) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e * factor, c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a complex point given as `(re, im)`.
    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        let z = num_complex_pow(re, im);
        let mut total = (0.0, 0.0);
        for (e, c) in self.terms() {
            let t = z(e);
            total.0 += c as f64 * t.0;
            total.1 += c as f64 * t.1;
        }
        total
    }

    /// One `coeff q^exp` line per term, highest exponent first.
    pub fn to_terms_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.coefficients.iter().rev() {
            out.push_str(&format!("{c} q^{e}\n"));
        }
        out
    }

    /// Exponent -> coefficient map with string keys, for JSON output.
    pub fn to_json_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.terms()
            .map(|(e, c)| (e.to_string(), serde_json::Value::from(c)))
            .collect()
    }
}

fn num_complex_pow(re: f64, im: f64) -> impl Fn(i32) -> (f64, f64) {
    let r = (re * re + im * im).sqrt();
    let theta = im.atan2(re);
    move |e: i32| {
        let rho = r.powi(e);
        let phi = theta * e as f64;
        (rho * phi.cos(), rho * phi.sin())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.coefficients.iter().rev().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (*e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "q")?,
                (1, m) => write!(f, "{m}q")?,
                (e, 1) => write!(f, "q^{e}")?,
                (e, m) => write!(f, "{m}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(mut self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPolynomial> for LaurentPolynomial {
    fn add_assign(&mut self, rhs: &LaurentPolynomial) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(-1)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = LaurentPolynomial::from_terms([(2, 1), (2, -1), (0, 3)]);
        assert_eq!(p, LaurentPolynomial::monomial(3, 0));
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn loop_value_squared() {
        let s = LaurentPolynomial::loop_value();
        assert_eq!(s.pow(2), LaurentPolynomial::from_terms([(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn display_and_terms_text() {
        let p = LaurentPolynomial::from_terms([(9, -1), (5, 1), (3, 1), (1, 1)]);
        assert_eq!(p.to_string(), "-q^9 + q^5 + q^3 + q");
        assert_eq!(p.to_terms_text(), "-1 q^9\n1 q^5\n1 q^3\n1 q^1\n");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn mirror_is_involution() {
        let p = LaurentPolynomial::from_terms([(-3, 2), (4, -1)]);
        assert_eq!(p.mirror().mirror(), p);
        assert_eq!(p.mirror().coeff(3), 2);
    }

    #[test]
    fn eval_at_one_sums_coefficients() {
        let p = LaurentPolynomial::from_terms([(-3, 2), (4, -1), (0, 5)]);
        let (re, im) = p.eval_complex(1.0, 0.0);
        assert!((re - 6.0).abs() < 1e-12 && im.abs() < 1e-12);
    }
}
