//! Truncated formal series in one variable with rational exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ExactError;
use crate::scalar::{ExactScalar, ScalarJson};

/// A rational exponent in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FracExp(Rational64);

impl FracExp {
    pub fn new(num: i64, den: i64) -> Self {
        FracExp(Rational64::new(num, den))
    }

    pub fn int(n: i64) -> Self {
        FracExp(Rational64::from_integer(n))
    }

    /// `n / 2`
    pub fn half(n: i64) -> Self {
        Self::new(n, 2)
    }

    pub fn value(self) -> Rational64 {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }

    /// `self · m` as an integer, if it is one.
    pub fn times_int(self, m: i64) -> Option<i64> {
        let r = self.0 * m;
        r.is_integer().then(|| r.to_integer())
    }

    pub fn scale(self, m: i64) -> Self {
        FracExp(self.0 * m)
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        let bad = || ExactError::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 {
            return Err(bad());
        }
        Ok(FracExp::new(n, d))
    }
}

impl From<Rational64> for FracExp {
    fn from(r: Rational64) -> Self {
        FracExp(r)
    }
}

impl Add for FracExp {
    type Output = FracExp;
    fn add(self, o: FracExp) -> FracExp {
        FracExp(self.0 + o.0)
    }
}

impl Neg for FracExp {
    type Output = FracExp;
    fn neg(self) -> FracExp {
        FracExp(-self.0)
    }
}

impl fmt::Display for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variable {
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "x")]
    X,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Q => "q",
            Variable::X => "x",
        })
    }
}

/// `Σ c_e v^e + O(v^T)`: only exponents strictly below the truncation are
/// stored, and no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    var: Variable,
    trunc: FracExp,
    terms: BTreeMap<FracExp, ExactScalar>,
}

impl Series {
    pub fn zero(var: Variable, trunc: FracExp) -> Self {
        Series {
            var,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        var: Variable,
        trunc: FracExp,
        terms: impl IntoIterator<Item = (FracExp, ExactScalar)>,
    ) -> Self {
        let mut s = Self::zero(var, trunc);
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    pub fn monomial(var: Variable, exp: FracExp, coeff: ExactScalar, trunc: FracExp) -> Self {
        Self::from_terms(var, trunc, [(exp, coeff)])
    }

    pub fn variable(&self) -> Variable {
        self.var
    }

    pub fn truncation(&self) -> FracExp {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<FracExp, ExactScalar> {
        &self.terms
    }

    pub fn coeff(&self, e: FracExp) -> ExactScalar {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest stored exponent, or the truncation for the zero series.
    pub fn valuation(&self) -> FracExp {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn add_term(&mut self, e: FracExp, c: &ExactScalar) {
        if e >= self.trunc || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn check_var(&self, o: &Series) -> Result<(), ExactError> {
        if self.var != o.var {
            return Err(ExactError::VariableMismatch(self.var.to_string(), o.var.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Series) -> Result<Series, ExactError> {
        self.check_var(o)?;
        let mut out = Series::zero(self.var, self.trunc.min(o.trunc));
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Series) -> Result<Series, ExactError> {
        self.add(&o.scale(&ExactScalar::from_int(-1)))
    }

    /// Product; the result is known below `min(T_f + val g, T_g + val f)`,
    /// which is `min(T_f, T_g)` for series starting at exponent 0.
    pub fn mul(&self, o: &Series) -> Result<Series, ExactError> {
        self.check_var(o)?;
        let trunc = (self.trunc + o.valuation()).min(o.trunc + self.valuation());
        let mut out = Series::zero(self.var, trunc);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = *e1 + *e2;
                if e < trunc {
                    out.add_term(e, &(c1 * c2));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &ExactScalar) -> Series {
        let mut out = Series::zero(self.var, self.trunc);
        for (e, c) in &self.terms {
            out.add_term(*e, &(c * s));
        }
        out
    }

    /// Lower the truncation (never raises it).
    pub fn truncate(&self, t: FracExp) -> Series {
        Series::from_terms(
            self.var,
            self.trunc.min(t),
            self.terms.iter().map(|(e, c)| (*e, c.clone())),
        )
    }

    /// `v ↦ v^m` for a positive integer `m`.
    pub fn dilate(&self, m: i64) -> Series {
        assert!(m > 0, "dilation factor must be positive");
        Series::from_terms(
            self.var,
            self.trunc.scale(m),
            self.terms.iter().map(|(e, c)| (e.scale(m), c.clone())),
        )
    }

    /// Replace `x^{1/k}` by `η^j x^{1/k}` with `η = e^{2πi/k}`; only `k = 2`
    /// (`η = −1`) is supported, where `x^e ↦ (−1)^{2je} x^e` for `e ∈ ½ℤ`.
    pub fn substitute_root_phase(&self, j: i64, k: i64) -> Result<Series, ExactError> {
        if k != 2 {
            return Err(ExactError::UnsupportedK(k));
        }
        let mut out = Series::zero(self.var, self.trunc);
        for (e, c) in &self.terms {
            let twice = e
                .times_int(2)
                .ok_or_else(|| ExactError::UnsupportedExponent(e.to_string()))?;
            if (twice * j).rem_euclid(2) == 1 {
                out.add_term(*e, &-c);
            } else {
                out.add_term(*e, c);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            variable: self.var,
            truncation: self.trunc.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.to_string(),
                    coeff: c.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Series, ExactError> {
        let trunc = FracExp::parse(&j.truncation)?;
        let mut s = Series::zero(j.variable, trunc);
        for t in &j.terms {
            s.add_term(FracExp::parse(&t.exp)?, &ExactScalar::from_json(&t.coeff)?);
        }
        Ok(s)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let unit = if e.value().is_zero() {
                String::new()
            } else if e.value().abs() == Rational64::from_integer(1) && e.value().is_positive() {
                self.var.to_string()
            } else {
                format!("{}^({})", self.var, e)
            };
            if unit.is_empty() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "{}", unit)?;
            } else {
                write!(f, "({})·{}", c, unit)?;
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        write!(f, " + O({}^({}))", self.var, self.trunc)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: ScalarJson,
}

/// Canonical JSON form of a [`Series`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub variable: Variable,
    pub truncation: String,
    pub terms: Vec<TermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(terms: &[(i64, i64, i64)], trunc: FracExp) -> Series {
        Series::from_terms(
            Variable::Q,
            trunc,
            terms.iter().map(|&(n, d, c)| (FracExp::new(n, d), ExactScalar::from_int(c))),
        )
    }

    #[test]
    fn difference_of_squares() {
        let t = FracExp::int(10);
        let a = q(&[(0, 1, 1), (1, 2, 1)], t);
        let b = q(&[(0, 1, 1), (1, 2, -1)], t);
        assert_eq!(a.mul(&b).unwrap(), q(&[(0, 1, 1), (1, 1, -1)], t));
    }

    #[test]
    fn scale_by_sqrt2() {
        let t = FracExp::int(2);
        let f = q(&[(-1, 16, 1)], t);
        let g = f.scale(&ExactScalar::sqrt2());
        assert_eq!(g.coeff(FracExp::new(-1, 16)), ExactScalar::sqrt2());
        assert_eq!(g.terms().len(), 1);
    }

    #[test]
    fn distinct_parts_through_q3() {
        // brute force: subsets of {1,2,3} by sum
        let mut counts = [0i64; 4];
        for mask in 0u32..8 {
            let s: usize = (0..3).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).sum();
            if s < 4 {
                counts[s] += 1;
            }
        }
        let t = FracExp::int(4);
        let p = q(&[(0, 1, 1), (1, 1, 1)], t)
            .mul(&q(&[(0, 1, 1), (2, 1, 1)], t))
            .unwrap()
            .mul(&q(&[(0, 1, 1), (3, 1, 1)], t))
            .unwrap();
        let expected = q(&[(0, 1, counts[0]), (1, 1, counts[1]), (2, 1, counts[2]), (3, 1, counts[3])], t);
        assert_eq!(p, expected);
        assert_eq!(counts, [1, 1, 1, 2]);
    }

    #[test]
    fn truncation_never_reported() {
        let a = q(&[(0, 1, 1), (3, 1, 1)], FracExp::int(4));
        let b = q(&[(0, 1, 1), (2, 1, 1)], FracExp::int(3));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.truncation(), FracExp::int(3));
        assert!(p.terms().keys().all(|e| *e < FracExp::int(3)));
    }

    #[test]
    fn mismatched_variables() {
        let a = Series::zero(Variable::Q, FracExp::int(1));
        let b = Series::zero(Variable::X, FracExp::int(1));
        assert!(matches!(a.add(&b), Err(ExactError::VariableMismatch(..))));
    }

    #[test]
    fn root_phase_examples() {
        let t = FracExp::int(5);
        let x = |terms: &[(i64, i64, i64)]| {
            Series::from_terms(
                Variable::X,
                t,
                terms.iter().map(|&(n, d, c)| (FracExp::new(n, d), ExactScalar::from_int(c))),
            )
        };
        assert_eq!(x(&[(1, 2, 1)]).substitute_root_phase(1, 2).unwrap(), x(&[(1, 2, -1)]));
        assert_eq!(x(&[(3, 1, 1)]).substitute_root_phase(1, 2).unwrap(), x(&[(3, 1, 1)]));
        assert_eq!(
            x(&[(-3, 2, 2), (1, 1, 1)]).substitute_root_phase(1, 2).unwrap(),
            x(&[(-3, 2, -2), (1, 1, 1)])
        );
        assert_eq!(x(&[(1, 1, 1)]).substitute_root_phase(1, 3), Err(ExactError::UnsupportedK(3)));
        assert!(x(&[(-3, 4, 1)]).substitute_root_phase(1, 2).is_err());
    }

    #[test]
    fn json_shape() {
        let s = q(&[(-1, 16, 2)], FracExp::int(2));
        let v = serde_json::to_value(s.to_json()).unwrap();
        assert_eq!(v["variable"], "q");
        assert_eq!(v["truncation"], "2");
        assert_eq!(v["terms"][0]["exp"], "-1/16");
        assert_eq!(v["terms"][0]["coeff"]["a"], "2");
        assert_eq!(Series::from_json(&s.to_json()).unwrap(), s);
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        prop::collection::vec((0i64..12, -5i64..5), 0..6).prop_map(|ts| {
            Series::from_terms(
                Variable::X,
                FracExp::int(3),
                ts.into_iter().map(|(e, c)| (FracExp::new(e, 4), ExactScalar::from_int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }

        #[test]
        fn root_phase_is_involution(ts in prop::collection::vec((-8i64..8, -5i64..5), 0..6)) {
            let f = Series::from_terms(
                Variable::X,
                FracExp::int(4),
                ts.into_iter().map(|(e, c)| (FracExp::new(e, 2), ExactScalar::from_int(c))),
            );
            let twice = f.substitute_root_phase(1, 2).unwrap().substitute_root_phase(1, 2).unwrap();
            prop_assert_eq!(twice, f);
        }
    }
}
