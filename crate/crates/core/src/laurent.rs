//! Exact sparse multivariate Laurent polynomials with rational coefficients.
//!
//! A [`LaurentPoly`] is a finite map from integer exponent vectors to
//! nonzero rational coefficients. The number of variable slots (the arity) is
//! fixed per polynomial and checked on every binary operation. The same type
//! serves three rings in the crate:
//!
//! - the vertex ring, one slot per puncture `v_i`;
//! - the lambda ring, one slot per edge `λ_i`;
//! - the quantum ring, one slot for the exponent of `q^½` followed by one slot
//!   per puncture.
//!
//! Terms are kept in a `BTreeMap`, so iteration and serialization order is
//! deterministic and two polynomials are equal exactly when their term maps
//! are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational coefficient type used by every polynomial in the crate.
pub type Rational = BigRational;

/// Builds a rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds the rational `n / d`.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational '{s}'")))
}

/// Sparse Laurent polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl LaurentPoly {
    /// The zero polynomial in `nvars` variables.
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    /// The constant polynomial `c`.
    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The unit polynomial.
    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The monomial `c · x^exps`.
    pub fn monomial(exps: Vec<i32>, c: Rational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `x_i` raised to `power`.
    pub fn var_pow(nvars: usize, i: usize, power: i32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        Self::monomial(e, Rational::one())
    }

    /// Number of variable slots.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// True when no term is stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when the polynomial has no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(exponents, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the given monomial (zero when absent).
    pub fn coeff(&self, exps: &[i32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · x^exps` in place.
    pub fn add_term(&mut self, exps: Vec<i32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Arity(format!("polynomials with {} and {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Difference of two polynomials.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, failing when the division leaves a
    /// remainder.
    ///
    /// Runs multivariate division with respect to the lexicographic order on
    /// exponent vectors: each step cancels the leading term of the running
    /// remainder against the leading term of the divisor. An exact quotient is
    /// found in as many steps as it has terms; `max_steps` bounds the search.
    pub fn div_exact(&self, divisor: &Self, max_steps: usize) -> Result<Self> {
        self.check_arity(divisor)?;
        let (lead_e, lead_c) =
            divisor.terms.iter().next_back().ok_or_else(|| Error::Unsupported("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        for _ in 0..max_steps {
            let Some((e, c)) = rem.terms.iter().next_back() else {
                return Ok(quot);
            };
            let qe: Vec<i32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let q = Self::monomial(qe.clone(), c / lead_c);
            rem = rem.sub(&q.mul(divisor)?)?;
            quot.add_term(qe, q.terms.into_values().next().unwrap_or_else(Rational::zero));
        }
        Err(Error::Unsupported(format!("division not exact within {max_steps} steps")))
    }

    /// Multiplication by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Nonnegative integer power.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    /// Minimum exponent of slot `i` over all terms (`None` for zero).
    pub fn min_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Maximum exponent of slot `i` over all terms (`None` for zero).
    pub fn max_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Substitutes `x_i = 1` and drops slot `i`.
    pub fn collapse_slot(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.remove(i);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Inserts a new slot at position `i` with exponent zero everywhere.
    pub fn insert_slot(&self, i: usize) -> Self {
        LaurentPoly {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.insert(i, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Exact evaluation at a point with all coordinates nonzero.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Arity(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().any(|p| p.is_zero()) {
            return Err(Error::Unsupported("evaluation at a zero coordinate".into()));
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k >= 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                } else {
                    term /= num_traits::pow(x.clone(), (-k) as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// True when every coefficient is a positive integer.
    pub fn has_positive_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && c.is_positive())
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// JSON form: object mapping `"[e0,e1,...]"` to `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in &self.terms {
            map.insert(exps_key(e), serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }

    /// Parses the JSON form produced by [`LaurentPoly::to_json`].
    pub fn from_json(nvars: usize, v: &serde_json::Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("polynomial must be a JSON object".into()))?;
        let mut out = Self::zero(nvars);
        for (k, c) in obj {
            let exps: Vec<i32> =
                serde_json::from_str(k).map_err(|_| Error::Parse(format!("bad exponent key '{k}'")))?;
            if exps.len() != nvars {
                return Err(Error::Arity(format!("exponent key '{k}' has wrong length")));
            }
            let c = match c {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Number(n) => parse_rational(&n.to_string())?,
                _ => return Err(Error::Parse("coefficient must be a string".into())),
            };
            out.add_term(exps, c);
        }
        Ok(out)
    }
}

/// Canonical string key for an exponent vector.
pub fn exps_key(e: &[i32]) -> String {
    let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    write!(f, "*x{i}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_division_recovers_factor() {
        let x = LaurentPoly::var_pow(3, 0, 1);
        let y = LaurentPoly::var_pow(3, 1, -2);
        let z = LaurentPoly::var_pow(3, 2, 1);
        let a = x.add(&y).unwrap().add(&z.scale(&rat(3))).unwrap();
        let b = x.mul(&z).unwrap().add(&LaurentPoly::one(3)).unwrap().add(&y).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.div_exact(&b, 100).unwrap(), a);
        assert_eq!(p.div_exact(&a, 100).unwrap(), b);
        assert!(x.div_exact(&x.add(&z).unwrap(), 50).is_err());
    }

    #[test]
    fn arithmetic_identities() {
        let x = LaurentPoly::var_pow(2, 0, 1);
        let y = LaurentPoly::var_pow(2, 1, -1);
        let s = x.add(&y).unwrap();
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&[1, -1]), rat(2));
        assert!(s.sub(&s).unwrap().is_zero());
        assert_eq!(s.pow(0), LaurentPoly::one(2));
    }

    #[test]
    fn evaluation_with_negative_exponents() {
        let p = LaurentPoly::monomial(vec![2, -1], rat(3));
        let v = p.evaluate(&[rat(2), rat(3)]).unwrap();
        assert_eq!(v, rat(4));
    }

    #[test]
    fn json_round_trip() {
        let mut p = LaurentPoly::zero(3);
        p.add_term(vec![1, 0, -2], rat_frac(3, 2));
        p.add_term(vec![0, 0, 0], rat(-1));
        let j = p.to_json();
        assert_eq!(LaurentPoly::from_json(3, &j).unwrap(), p);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let a = LaurentPoly::one(1);
        let b = LaurentPoly::one(2);
        assert!(matches!(a.add(&b), Err(Error::Arity(_))));
    }

    #[test]
    fn collapse_slot_specializes_to_one() {
        let mut p = LaurentPoly::zero(2);
        p.add_term(vec![1, 0], rat(1));
        p.add_term(vec![-1, 0], rat(1));
        let c = p.collapse_slot(0);
        assert_eq!(c, LaurentPoly::constant(1, rat(2)));
    }
}
