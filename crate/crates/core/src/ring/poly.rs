use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::registry::{same_registry, VarKind, VarRegistry};
use super::Rat;
use crate::error::{Error, Result};

/// Dense exponent vector, one entry per registry variable.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by dense exponent vectors and kept in lexicographic
/// order of the registry, so the last entry is the leading term.
#[derive(Clone)]
pub struct Poly {
    reg: Arc<VarRegistry>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        Self {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Rat) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(vec![0; reg.len()], c);
        }
        p
    }

    pub fn from_int(reg: &Arc<VarRegistry>, c: i64) -> Self {
        Self::constant(reg, Rat::from_integer(c.into()))
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::constant(reg, Rat::one())
    }

    pub fn var(reg: &Arc<VarRegistry>, id: usize) -> Result<Self> {
        reg.check(id)?;
        let mut mono = vec![0; reg.len()];
        mono[id] = 1;
        Ok(Self::monomial(reg, mono, Rat::one()))
    }

    /// Variable looked up by name.
    pub fn named(reg: &Arc<VarRegistry>, name: &str) -> Result<Self> {
        Self::var(reg, reg.lookup(name)?)
    }

    pub fn monomial(reg: &Arc<VarRegistry>, mono: Monomial, c: Rat) -> Self {
        debug_assert_eq!(mono.len(), reg.len());
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn from_terms(reg: &Arc<VarRegistry>, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(reg);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[u32]) -> Rat {
        self.terms.get(mono).cloned().unwrap_or_else(Rat::zero)
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Value of a constant polynomial, `None` when a variable occurs.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, id: usize) -> u32 {
        self.terms.keys().map(|m| m[id]).max().unwrap_or(0)
    }

    /// Ids of variables that occur with a positive exponent.
    pub fn vars_used(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    out.insert(i);
                }
            }
        }
        out
    }

    pub fn uses_kind(&self, kind: VarKind) -> bool {
        self.vars_used().iter().any(|&i| self.reg.kind(i) == kind)
    }

    /// Names of non-coordinate variables occurring in the polynomial.
    pub fn non_coordinate_names(&self) -> Vec<String> {
        self.vars_used()
            .into_iter()
            .filter(|&i| self.reg.kind(i) != VarKind::Coordinate)
            .map(|i| self.reg.name(i).to_string())
            .collect()
    }

    /// True when every term has the same total degree `d`.
    pub fn is_homogeneous_in(&self, ids: &[usize], d: u32) -> bool {
        self.terms
            .keys()
            .all(|m| ids.iter().map(|&i| m[i]).sum::<u32>() == d)
    }

    fn add_term(&mut self, mono: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Poly) {
        assert!(
            same_registry(&self.reg, &other.reg),
            "polynomials built on different registries"
        );
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.reg);
        }
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        self.assert_compatible(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Poly) {
        self.assert_compatible(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    /// `self += c * mono * other`, the inner step of division and Bareiss.
    fn add_scaled_shifted(&mut self, other: &Poly, c: &Rat, mono: &[u32]) {
        for (m, v) in &other.terms {
            let shifted: Monomial = m.iter().zip(mono).map(|(a, b)| a + b).collect();
            self.add_term(shifted, v * c);
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.reg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to variable `id`.
    pub fn differentiate(&self, id: usize) -> Result<Poly> {
        self.reg.check(id)?;
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            let e = m[id];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[id] -= 1;
            out.add_term(m2, c * Rat::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Substitutes rational values for some variables. The registry is kept;
    /// substituted variables simply no longer occur.
    pub fn eval(&self, assignment: &BTreeMap<usize, Rat>) -> Result<Poly> {
        for &id in assignment.keys() {
            self.reg.check(id)?;
        }
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut m2 = m.clone();
            for (&id, val) in assignment {
                let e = m2[id];
                if e > 0 {
                    coeff *= num_traits::pow(val.clone(), e as usize);
                    m2[id] = 0;
                }
            }
            out.add_term(m2, coeff);
        }
        Ok(out)
    }

    /// Substitutes by variable name.
    pub fn eval_named(&self, assignment: &BTreeMap<String, Rat>) -> Result<Poly> {
        let mut by_id = BTreeMap::new();
        for (name, v) in assignment {
            by_id.insert(self.reg.lookup(name)?, v.clone());
        }
        self.eval(&by_id)
    }

    /// Evaluates at a full assignment; fails if a variable is left free.
    pub fn eval_rat(&self, assignment: &BTreeMap<usize, Rat>) -> Result<Rat> {
        let p = self.eval(assignment)?;
        p.as_constant().ok_or_else(|| {
            Error::UnknownVariable(format!(
                "unassigned variables {:?}",
                p.vars_used()
                    .into_iter()
                    .map(|i| self.reg.name(i).to_string())
                    .collect::<Vec<_>>()
            ))
        })
    }

    /// Substitutes polynomials for variables.
    pub fn compose(&self, subs: &BTreeMap<usize, Poly>) -> Poly {
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut kept = m.clone();
            let mut factor = Poly::one(&self.reg);
            for (&id, q) in subs {
                let e = kept[id];
                if e > 0 {
                    factor = &factor * &q.pow(e);
                    kept[id] = 0;
                }
            }
            let mut t = Poly::monomial(&self.reg, kept, c.clone());
            t = &t * &factor;
            out.add_assign_ref(&t);
        }
        out
    }

    /// Re-expresses the polynomial over another registry, matching variables
    /// by name.
    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<Poly> {
        if same_registry(&self.reg, target) {
            return Ok(Poly {
                reg: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let used = self.vars_used();
        let mut map = BTreeMap::new();
        for &i in &used {
            map.insert(i, target.lookup(self.reg.name(i))?);
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.len()];
            for (&i, &j) in &map {
                m2[j] = m[i];
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Structural equality after mapping variables by name.
    pub fn same_as(&self, other: &Poly) -> bool {
        match other.embed(&self.reg) {
            Ok(o) => o.terms == self.terms,
            Err(_) => false,
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        self.assert_compatible(divisor);
        let (dlead, dcoeff) = divisor.leading_term()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.reg);
        while let Some((rlead, rcoeff)) = rem.leading_term() {
            if rlead.iter().zip(dlead).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Monomial = rlead.iter().zip(dlead).map(|(a, b)| a - b).collect();
            let c = rcoeff / dcoeff;
            quot.add_term(shift.clone(), c.clone());
            rem.add_scaled_shifted(divisor, &-c, &shift);
        }
        Some(quot)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.reg.len()];
        };
        let mut out = first.clone();
        for m in it {
            for (o, &e) in out.iter_mut().zip(m) {
                *o = (*o).min(e);
            }
        }
        out
    }

    /// Divides every term by a monomial that divides all of them.
    pub fn shift_down(&self, mono: &[u32]) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(mono).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &[u32]) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.iter().zip(mono).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Collects coefficients with respect to a subset of variables: the keys
    /// are exponent vectors restricted to `ids`, the values polynomials in
    /// the remaining variables.
    pub fn collect_by(&self, ids: &[usize]) -> BTreeMap<Vec<u32>, Poly> {
        let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = ids.iter().map(|&i| m[i]).collect();
            let mut rest = m.clone();
            for &i in ids {
                rest[i] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Poly::zero(&self.reg))
                .add_term(rest, c.clone());
        }
        out
    }

    /// Greatest common divisor for polynomials in at most one variable,
    /// normalized monic. `None` when more than one variable is involved.
    pub fn univariate_gcd(&self, other: &Poly) -> Option<Poly> {
        let mut vars = self.vars_used();
        vars.extend(other.vars_used());
        if vars.len() > 1 {
            return None;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.univariate_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Some(a);
        }
        let lc = a.leading_coeff();
        Some(a.scale(&lc.recip()))
    }

    fn univariate_rem(&self, divisor: &Poly) -> Poly {
        let (dlead, dcoeff) = divisor.leading_term().expect("nonzero divisor");
        let dlead = dlead.clone();
        let dcoeff = dcoeff.clone();
        let mut rem = self.clone();
        loop {
            let Some((rlead, rcoeff)) = rem.leading_term() else {
                break;
            };
            if rlead.iter().zip(&dlead).any(|(a, b)| a < b) {
                break;
            }
            let shift: Monomial = rlead.iter().zip(&dlead).map(|(a, b)| a - b).collect();
            let c = rcoeff / &dcoeff;
            rem.add_scaled_shifted(divisor, &-c, &shift);
        }
        rem
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_registry(&self.reg, &other.reg) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &rhs.terms {
            out.add_scaled_shifted(self, c, m);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Infix rendering in the grammar accepted by [`crate::ring::parse_poly`],
    /// leading term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.reg.name(i).to_string()
                    } else {
                        format!("{}^{}", self.reg.name(i), e)
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if factors.is_empty() {
                f.write_str(&fmt_rat(&abs))?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rat(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, rat};

    fn reg6() -> Arc<VarRegistry> {
        VarRegistry::for_algebra(6, &["lambda2"]).unwrap()
    }

    #[test]
    fn derivative_power_rule() {
        let reg = reg6();
        let p = parse_poly("x1*x6 + x3*x5 - 1/2*x4^2", &reg).unwrap();
        let d = p.differentiate(reg.lookup("x4").unwrap()).unwrap();
        assert_eq!(d, parse_poly("-x4", &reg).unwrap());
    }

    #[test]
    fn derivative_of_absent_variable_is_zero() {
        let reg = reg6();
        let p = Poly::named(&reg, "x3").unwrap();
        assert!(p.differentiate(1).unwrap().is_zero());
    }

    #[test]
    fn parameter_is_constant_under_coordinate_derivative() {
        let reg = reg6();
        let p = parse_poly("lambda2*x2", &reg).unwrap();
        let d = p.differentiate(reg.lookup("x2").unwrap()).unwrap();
        assert_eq!(d, Poly::named(&reg, "lambda2").unwrap());
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let reg = reg6();
        assert!(Poly::one(&reg).differentiate(40).is_err());
    }

    #[test]
    fn eval_full_and_partial() {
        let reg = reg6();
        let p = parse_poly("x1*x6 - 1/2*x4^2", &reg).unwrap();
        let mut a = BTreeMap::new();
        a.insert(0, rat(2, 1));
        a.insert(5, rat(3, 1));
        a.insert(3, rat(2, 1));
        assert_eq!(p.eval_rat(&a).unwrap(), rat(4, 1));

        let lam = reg.lookup("lambda2").unwrap();
        let q = parse_poly("lambda2 + 3 - 2", &reg).unwrap();
        let mut b = BTreeMap::new();
        b.insert(lam, rat(-1, 1));
        assert!(q.eval(&b).unwrap().is_zero());

        let mut c = BTreeMap::new();
        c.insert(0, rat(2, 1));
        let partial = p.eval(&c).unwrap();
        assert_eq!(partial, parse_poly("2*x6 - 1/2*x4^2", &reg).unwrap());
    }

    #[test]
    fn exact_division() {
        let reg = reg6();
        let a = parse_poly("x1 + x2", &reg).unwrap();
        let b = parse_poly("x1 - 3*x3*x2 + 1", &reg).unwrap();
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn univariate_gcd_cancels_common_factor() {
        let reg = reg6();
        let a = parse_poly("lambda2^2 - 1", &reg).unwrap();
        let b = parse_poly("2*lambda2 + 2", &reg).unwrap();
        let g = a.univariate_gcd(&b).unwrap();
        assert_eq!(g, parse_poly("lambda2 + 1", &reg).unwrap());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let reg = reg6();
        let p = parse_poly("12*lambda2 + 12 - 1/3*x1^2*x6", &reg).unwrap();
        let q = parse_poly(&p.to_string(), &reg).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn embed_maps_by_name() {
        let reg = reg6();
        let ext = reg.extended(&["a1", "a2"], VarKind::Auxiliary).unwrap();
        let p = parse_poly("x1*lambda2", &reg).unwrap();
        let e = p.embed(&ext).unwrap();
        assert!(e.same_as(&p));
        let back = parse_poly("a1", &ext).unwrap();
        assert!(back.embed(&reg).is_err());
    }
}
