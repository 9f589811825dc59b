use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::poly::Poly;
use super::registry::VarRegistry;
use super::Rat;
use crate::error::{Error, Result};

/// Quotient of two polynomials over one registry.
///
/// Kept normalized: the denominator is monic under the registry order, a
/// common monomial factor is removed, and exact or univariate common factors
/// are cancelled. No multivariate gcd is attempted, so equality is decided by
/// cross-multiplication rather than by comparing fields.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let reg = p.registry().clone();
        Self {
            num: p,
            den: Poly::one(&reg),
        }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Rat) -> Self {
        Self::from_poly(Poly::constant(reg, c))
    }

    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        Self::from_poly(Poly::zero(reg))
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::from_poly(Poly::one(reg))
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        let reg = num.registry().clone();
        if num.is_zero() {
            return Self {
                num,
                den: Poly::one(&reg),
            };
        }
        if let Some(c) = den.as_constant() {
            return Self {
                num: num.scale(&c.recip()),
                den: Poly::one(&reg),
            };
        }
        // common monomial factor
        let mn = num.min_monomial();
        let md = den.min_monomial();
        let common: Vec<u32> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|&e| e > 0) {
            num = num.shift_down(&common);
            den = den.shift_down(&common);
        }
        if let Some(q) = num.div_exact(&den) {
            return Self {
                num: q,
                den: Poly::one(&reg),
            };
        }
        if let Some(g) = num.univariate_gcd(&den) {
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if let Some(c) = den.as_constant() {
            num = num.scale(&c.recip());
            den = Poly::one(&reg);
        }
        Self { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.num.registry()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        self.den
            .as_constant()
            .map(|c| self.num.scale(&c.recip()))
    }

    pub fn as_constant(&self) -> Option<Rat> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    /// Rational constant `c` with `self == c`, decided exactly even when the
    /// representation is not fully reduced.
    pub fn constant_value(&self) -> Option<Rat> {
        if let Some(c) = self.as_constant() {
            return Some(c);
        }
        let c = self.num.leading_coeff() / self.den.leading_coeff();
        (&self.num - &self.den.scale(&c)).is_zero().then_some(c)
    }

    /// Integer value if the function is a constant integer.
    pub fn integer_value(&self) -> Option<i64> {
        let c = self.constant_value()?;
        if c.is_integer() {
            i64::try_from(c.to_integer()).ok()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::normalized(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.num.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, other: &RatFunc) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    pub fn eval(&self, assignment: &BTreeMap<usize, Rat>) -> Result<RatFunc> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self::normalized(self.num.eval(assignment)?, d))
    }

    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<RatFunc> {
        Ok(Self {
            num: self.num.embed(target)?,
            den: self.den.embed(target)?,
        })
    }

    /// Partial derivative by the quotient rule.
    pub fn differentiate(&self, id: usize) -> Result<RatFunc> {
        let dn = self.num.differentiate(id)?;
        let dd = self.den.differentiate(id)?;
        if dd.is_zero() {
            return Ok(Self::normalized(dn, self.den.clone()));
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Ok(Self::normalized(num, &self.den * &self.den))
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let p = self.as_poly().unwrap();
            if p.num_terms() > 1 {
                return write!(f, "({p})");
            }
            return write!(f, "{p}");
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, rat};

    fn reg() -> Arc<VarRegistry> {
        VarRegistry::for_algebra(2, &["lambda2", "eps"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, &reg()).unwrap()
    }

    #[test]
    fn cancels_univariate_common_factor() {
        let r = RatFunc::new(p("lambda2^2 - 1"), p("3*lambda2 + 3")).unwrap();
        assert_eq!(r.numer(), &p("1/3*lambda2 - 1/3"));
        assert!(r.is_polynomial());
    }

    #[test]
    fn denominator_is_monic() {
        let r = RatFunc::new(p("4 + 2*lambda2"), p("6 + 4*lambda2")).unwrap();
        assert_eq!(r.denom().leading_coeff(), rat(1, 1));
        let s = RatFunc::new(p("1 + 1/2*lambda2"), p("3/2 + lambda2")).unwrap();
        assert!(r.equals(&s));
    }

    #[test]
    fn integer_difference_detected() {
        let a = RatFunc::new(p("4 + 2*lambda2"), p("3 + 2*lambda2")).unwrap();
        let b = a.sub(&RatFunc::constant(&reg(), rat(1, 1)));
        let d = a.sub(&b);
        assert_eq!(d.integer_value(), Some(1));
        assert_eq!(a.integer_value(), None);
    }

    #[test]
    fn field_operations() {
        let a = RatFunc::new(p("x1"), p("lambda2 + 1")).unwrap();
        let b = RatFunc::new(p("eps"), p("lambda2")).unwrap();
        let s = a.add(&b).sub(&b);
        assert!(s.equals(&a));
        let q = a.div(&a).unwrap();
        assert_eq!(q.constant_value(), Some(rat(1, 1)));
        assert!(RatFunc::zero(&reg()).inv().is_err());
    }

    #[test]
    fn quotient_rule() {
        let a = RatFunc::new(p("x1^2"), p("x2")).unwrap();
        let d = a.differentiate(1).unwrap();
        let expected = RatFunc::new(p("-x1^2"), p("x2^2")).unwrap();
        assert!(d.equals(&expected));
    }
}
