//! Coadjoint vector fields, the commutator matrix and exact verification of
//! generalized Casimir invariants.
//!
//! Fields follow `X̂_i = -C_ij^k x_k ∂/∂x_j`. Candidate invariants are
//! [`GenExpr`] values: finite sums of `c · ∏ B_b^{e_b} · ∏ (ln B_b)^{m_b}`
//! over caller-declared bases `B_b`, with exponents that may depend on the
//! algebra's parameters. Identities are decided on the domain where every
//! base is positive.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::ring::{Matrix, Poly, RankStrategy, Rat, RatFunc, VarKind, VarRegistry};

/// `A(g)`, entry `(i, j) = C_ij^k x_k`.
pub fn commutator_matrix(g: &LieAlgebra) -> Matrix<Poly> {
    let n = g.dim();
    let reg = g.registry();
    let mut m = Matrix::zeros_poly(reg, n, n);
    for ((i, j), terms) in g.nonzero_brackets() {
        let mut entry = Poly::zero(reg);
        for (&k, c) in terms {
            let xk = Poly::var(reg, g.coord(k)).expect("coordinate id");
            entry.add_assign_ref(&(c * &xk));
        }
        m[(j, i)] = -&entry;
        m[(i, j)] = entry;
    }
    m
}

/// Number of functionally independent invariants, `dim g - rank A(g)`.
pub fn num_invariants_bb(g: &LieAlgebra, strategy: RankStrategy) -> Result<usize> {
    let rank = commutator_matrix(g).rank_with(strategy)?;
    Ok(g.dim() - rank)
}

/// First-order operator `X̂_i = Σ_j coeffs[j] ∂/∂x_j`.
#[derive(Debug, Clone)]
pub struct CoadjointField {
    pub index: usize,
    pub coeffs: Vec<Poly>,
}

impl CoadjointField {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn apply_poly(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero(p.registry());
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = p.differentiate(j).expect("coordinate id");
            if !d.is_zero() {
                out.add_assign_ref(&(c * &d));
            }
        }
        out
    }

    pub fn apply_ratfunc(&self, r: &RatFunc) -> RatFunc {
        let reg = r.registry();
        let mut out = RatFunc::zero(reg);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = r.differentiate(j).expect("coordinate id");
            if !d.is_zero() {
                out = out.add(&d.mul_poly(c));
            }
        }
        out
    }

    /// Applies the field to a generalized expression.
    pub fn apply(&self, e: &GenExpr) -> GenExpr {
        apply_field(self, e)
    }
}

/// One field per generator, coefficients exactly `-C_ij^k x_k`.
pub fn coadjoint_fields(g: &LieAlgebra) -> Vec<CoadjointField> {
    let a = commutator_matrix(g);
    (0..g.dim())
        .map(|i| CoadjointField {
            index: i,
            coeffs: (0..g.dim()).map(|j| -&a[(i, j)]).collect(),
        })
        .collect()
}

/// One term `coeff · ∏ B_b^{exponents[b]} · ∏ (ln B_b)^{logs[b]}`.
///
/// The coefficient may carry polynomial cofactors in the coordinates; its
/// denominator involves parameters only.
#[derive(Clone)]
pub struct GenTerm {
    pub coeff: RatFunc,
    pub exponents: Vec<RatFunc>,
    pub logs: Vec<u32>,
}

impl GenTerm {
    fn same_shape(&self, other: &GenTerm) -> bool {
        self.logs == other.logs
            && self
                .exponents
                .iter()
                .zip(&other.exponents)
                .all(|(a, b)| a.equals(b))
    }

    /// Per-base integer offsets `self - other`, if every difference is an
    /// integer and the log powers agree.
    fn integer_offsets(&self, other: &GenTerm) -> Option<Vec<i64>> {
        if self.logs != other.logs {
            return None;
        }
        self.exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a.sub(b).integer_value())
            .collect()
    }
}

/// Generalized expression in the coordinates: sums of products of rational
/// powers and logarithms of declared polynomial bases.
#[derive(Clone)]
pub struct GenExpr {
    reg: Arc<VarRegistry>,
    bases: Vec<Poly>,
    terms: Vec<GenTerm>,
}

impl GenExpr {
    /// Empty expression over the given bases. Bases must be distinct,
    /// non-constant, built from coordinates only and have a positive leading
    /// coefficient.
    pub fn new(reg: &Arc<VarRegistry>, bases: Vec<Poly>) -> Result<Self> {
        let mut checked: Vec<Poly> = Vec::with_capacity(bases.len());
        for b in bases {
            let b = b.embed(reg)?;
            if b.is_constant() {
                return Err(Error::Parse(format!("base {b} is constant")));
            }
            if !b.non_coordinate_names().is_empty() {
                return Err(Error::Parse(format!("base {b} involves non-coordinate variables")));
            }
            if b.leading_coeff().is_negative() {
                return Err(Error::Parse(format!("base {b} has a negative leading coefficient")));
            }
            if checked.contains(&b) {
                return Err(Error::Parse(format!("base {b} declared twice")));
            }
            checked.push(b);
        }
        Ok(Self {
            reg: reg.clone(),
            bases: checked,
            terms: Vec::new(),
        })
    }

    /// A polynomial viewed as a generalized expression without bases.
    pub fn from_poly(p: &Poly) -> Self {
        let mut e = Self {
            reg: p.registry().clone(),
            bases: Vec::new(),
            terms: Vec::new(),
        };
        e.push(GenTerm {
            coeff: RatFunc::from_poly(p.clone()),
            exponents: Vec::new(),
            logs: Vec::new(),
        });
        e
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn bases(&self) -> &[Poly] {
        &self.bases
    }

    pub fn terms(&self) -> &[GenTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · ∏ B^exponents · ∏ (ln B)^logs`. Missing trailing
    /// exponents/log powers default to zero.
    pub fn add_term(&mut self, coeff: RatFunc, exponents: Vec<RatFunc>, logs: Vec<u32>) -> Result<&mut Self> {
        let nb = self.bases.len();
        if exponents.len() > nb || logs.len() > nb {
            return Err(Error::Dimension {
                expected: nb,
                got: exponents.len().max(logs.len()),
            });
        }
        let mut exps = exponents
            .into_iter()
            .map(|e| e.embed(&self.reg))
            .collect::<Result<Vec<_>>>()?;
        for e in &exps {
            if e.numer().uses_kind(VarKind::Coordinate) || e.denom().uses_kind(VarKind::Coordinate) {
                return Err(Error::Parse(format!("exponent {e} depends on coordinates")));
            }
        }
        exps.resize(nb, RatFunc::zero(&self.reg));
        let mut logs = logs;
        logs.resize(nb, 0);
        let coeff = coeff.embed(&self.reg)?;
        if coeff.denom().uses_kind(VarKind::Coordinate) {
            return Err(Error::Parse(format!(
                "coefficient {coeff} has coordinates in its denominator; declare a base instead"
            )));
        }
        self.push(GenTerm {
            coeff,
            exponents: exps,
            logs,
        });
        Ok(self)
    }

    /// Adds `coeff · B_base^exponent`.
    pub fn add_power(&mut self, coeff: RatFunc, base: usize, exponent: RatFunc) -> Result<&mut Self> {
        let mut exps = vec![RatFunc::zero(&self.reg); self.bases.len()];
        if base >= exps.len() {
            return Err(Error::Dimension {
                expected: exps.len(),
                got: base + 1,
            });
        }
        exps[base] = exponent;
        self.add_term(coeff, exps, Vec::new())
    }

    /// Adds `coeff · (ln B_base)^power`.
    pub fn add_log(&mut self, coeff: RatFunc, base: usize, power: u32) -> Result<&mut Self> {
        let mut logs = vec![0; self.bases.len()];
        if base >= logs.len() {
            return Err(Error::Dimension {
                expected: logs.len(),
                got: base + 1,
            });
        }
        logs[base] = power;
        self.add_term(coeff, Vec::new(), logs)
    }

    fn push(&mut self, t: GenTerm) {
        if t.coeff.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|s| s.same_shape(&t)) {
            let c = self.terms[pos].coeff.add(&t.coeff);
            if c.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].coeff = c;
            }
        } else {
            self.terms.push(t);
        }
    }

    /// Ensures `other`'s bases are present; returns the index map.
    fn absorb_bases(&mut self, other: &GenExpr) -> Vec<usize> {
        other
            .bases
            .iter()
            .map(|b| match self.bases.iter().position(|x| x == b) {
                Some(i) => i,
                None => {
                    self.bases.push(b.clone());
                    for t in &mut self.terms {
                        t.exponents.push(RatFunc::zero(&self.reg));
                        t.logs.push(0);
                    }
                    self.bases.len() - 1
                }
            })
            .collect()
    }

    fn remap(&self, t: &GenTerm, map: &[usize]) -> GenTerm {
        let nb = self.bases.len();
        let mut exps = vec![RatFunc::zero(&self.reg); nb];
        let mut logs = vec![0; nb];
        for (src, &dst) in map.iter().enumerate() {
            exps[dst] = t.exponents[src].clone();
            logs[dst] = t.logs[src];
        }
        GenTerm {
            coeff: t.coeff.clone(),
            exponents: exps,
            logs,
        }
    }

    pub fn add(&self, other: &GenExpr) -> GenExpr {
        let mut out = self.clone();
        let map = out.absorb_bases(other);
        for t in &other.terms {
            let t = out.remap(t, &map);
            out.push(t);
        }
        out
    }

    pub fn neg(&self) -> GenExpr {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff = t.coeff.neg();
        }
        out
    }

    pub fn sub(&self, other: &GenExpr) -> GenExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFunc) -> GenExpr {
        let mut out = self.clone();
        out.terms.clear();
        for t in &self.terms {
            out.push(GenTerm {
                coeff: t.coeff.mul(c),
                ..t.clone()
            });
        }
        out
    }

    pub fn mul(&self, other: &GenExpr) -> GenExpr {
        let mut out = self.clone();
        let map = out.absorb_bases(other);
        let lhs = out.terms.clone();
        out.terms.clear();
        for a in &lhs {
            for b in &other.terms {
                let b = out.remap(b, &map);
                out.push(GenTerm {
                    coeff: a.coeff.mul(&b.coeff),
                    exponents: a
                        .exponents
                        .iter()
                        .zip(&b.exponents)
                        .map(|(x, y)| x.add(y))
                        .collect(),
                    logs: a.logs.iter().zip(&b.logs).map(|(x, y)| x + y).collect(),
                });
            }
        }
        out
    }

    /// Groups terms whose exponents differ by integers and whose log powers
    /// agree, factors out the componentwise minimal exponent and sums each
    /// group. The result has one term per nonzero group.
    pub fn normalized(&self) -> GenExpr {
        let mut groups: Vec<(GenTerm, Vec<(usize, Vec<i64>)>)> = Vec::new();
        for (idx, t) in self.terms.iter().enumerate() {
            let hit = groups
                .iter_mut()
                .find_map(|(rep, members)| t.integer_offsets(rep).map(|off| (members, off)));
            match hit {
                Some((members, off)) => members.push((idx, off)),
                None => groups.push((t.clone(), vec![(idx, vec![0; self.bases.len()])])),
            }
        }
        let mut out = GenExpr {
            reg: self.reg.clone(),
            bases: self.bases.clone(),
            terms: Vec::new(),
        };
        for (rep, members) in groups {
            let nb = self.bases.len();
            let mins: Vec<i64> = (0..nb)
                .map(|b| members.iter().map(|(_, off)| off[b]).min().unwrap_or(0))
                .collect();
            let mut sum = RatFunc::zero(&self.reg);
            for (idx, off) in &members {
                let mut factor = Poly::one(&self.reg);
                for b in 0..nb {
                    let shift = (off[b] - mins[b]) as u32;
                    if shift > 0 {
                        factor = &factor * &self.bases[b].pow(shift);
                    }
                }
                sum = sum.add(&self.terms[*idx].coeff.mul_poly(&factor));
            }
            if sum.is_zero() {
                continue;
            }
            let exponents = rep
                .exponents
                .iter()
                .zip(&mins)
                .map(|(e, &m)| e.add(&RatFunc::constant(&self.reg, Rat::from_integer(m.into()))))
                .collect();
            out.terms.push(GenTerm {
                coeff: sum,
                exponents,
                logs: rep.logs,
            });
        }
        out
    }

    /// Identically zero on the domain where all bases are positive.
    pub fn is_zero(&self) -> bool {
        genexpr_zero_test(self)
    }

    /// Plain polynomial, when every exponent is a non-negative integer and no
    /// logarithm occurs.
    pub fn to_poly(&self) -> Option<Poly> {
        let mut out = Poly::zero(&self.reg);
        for t in &self.terms {
            if t.logs.iter().any(|&m| m > 0) {
                return None;
            }
            let mut p = t.coeff.as_poly()?;
            for (b, e) in t.exponents.iter().enumerate() {
                let k = e.integer_value()?;
                if k < 0 {
                    return None;
                }
                p = &p * &self.bases[b].pow(k as u32);
            }
            out.add_assign_ref(&p);
        }
        Some(out)
    }
}

impl fmt::Display for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = vec![t.coeff.to_string()];
                for (b, base) in self.bases.iter().enumerate() {
                    let e = &t.exponents[b];
                    if !e.is_zero() {
                        if e.constant_value() == Some(Rat::one()) {
                            factors.push(format!("({base})"));
                        } else {
                            factors.push(format!("({base})^({e})"));
                        }
                    }
                    match t.logs[b] {
                        0 => {}
                        1 => factors.push(format!("ln({base})")),
                        m => factors.push(format!("ln({base})^{m}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenExpr({self})")
    }
}

/// Exact derivative of a generalized expression along a field.
pub fn apply_field(f: &CoadjointField, e: &GenExpr) -> GenExpr {
    let reg = &e.reg;
    let dbases: Vec<Poly> = e.bases.iter().map(|b| f.apply_poly(b)).collect();
    let one = RatFunc::one(reg);
    let mut out = GenExpr {
        reg: reg.clone(),
        bases: e.bases.clone(),
        terms: Vec::new(),
    };
    for t in &e.terms {
        let dc = f.apply_ratfunc(&t.coeff);
        if !dc.is_zero() {
            out.push(GenTerm {
                coeff: dc,
                ..t.clone()
            });
        }
        for (b, db) in dbases.iter().enumerate() {
            if db.is_zero() {
                continue;
            }
            let e_b = &t.exponents[b];
            let mut lowered = t.exponents.clone();
            lowered[b] = e_b.sub(&one);
            if !e_b.is_zero() {
                out.push(GenTerm {
                    coeff: t.coeff.mul(e_b).mul_poly(db),
                    exponents: lowered.clone(),
                    logs: t.logs.clone(),
                });
            }
            let m = t.logs[b];
            if m > 0 {
                let mut logs = t.logs.clone();
                logs[b] = m - 1;
                out.push(GenTerm {
                    coeff: t.coeff.mul_poly(db).scale(&Rat::from_integer(m.into())),
                    exponents: lowered,
                    logs,
                });
            }
        }
    }
    out
}

/// True iff `e` vanishes identically where all bases are positive.
///
/// Bases are assumed multiplicatively independent; dependent bases can make
/// a zero expression look nonzero.
pub fn genexpr_zero_test(e: &GenExpr) -> bool {
    e.normalized().terms.is_empty()
}

/// Outcome of [`is_invariant`].
#[derive(Debug, Clone)]
pub enum InvariantReport {
    Pass,
    /// Generator index and normalized nonzero residual.
    Residuals(Vec<(usize, GenExpr)>),
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        matches!(self, InvariantReport::Pass)
    }
}

/// Residual `X̂_i e` (normalized) for every generator.
pub fn residuals(g: &LieAlgebra, e: &GenExpr) -> Vec<(usize, GenExpr)> {
    coadjoint_fields(g)
        .iter()
        .map(|f| (f.index, apply_field(f, e).normalized()))
        .collect()
}

/// Checks `X̂_i e = 0` for every generator, parameters kept symbolic.
pub fn is_invariant(g: &LieAlgebra, e: &GenExpr) -> InvariantReport {
    let bad: Vec<(usize, GenExpr)> = residuals(g, e)
        .into_iter()
        .filter(|(_, r)| !r.terms.is_empty())
        .collect();
    if bad.is_empty() {
        InvariantReport::Pass
    } else {
        InvariantReport::Residuals(bad)
    }
}

/// Weight `μ` with `f(e) = μ·e`, or `None` when the image is not a
/// coordinate-free multiple of `e`.
pub fn semi_invariant_weight(f: &CoadjointField, e: &GenExpr) -> Option<RatFunc> {
    let reg = &e.reg;
    let en = e.normalized();
    let first = en.terms.first()?;
    let image = apply_field(f, e);
    let rn = image.normalized();

    let candidate = match rn.terms.iter().find_map(|t| t.integer_offsets(first).map(|off| (t, off))) {
        None => RatFunc::zero(reg),
        Some((t, off)) => {
            // t / first = (R / P) · ∏ B^off
            let mut up = Poly::one(reg);
            let mut down = Poly::one(reg);
            for (b, &k) in off.iter().enumerate() {
                if k > 0 {
                    up = &up * &en.bases[b].pow(k as u32);
                } else if k < 0 {
                    down = &down * &en.bases[b].pow((-k) as u32);
                }
            }
            let r = &t.coeff;
            let p = &first.coeff;
            let num = &(&(r.numer() * p.denom()) * &up);
            let den = &(&(p.numer() * r.denom()) * &down);
            let mu = match num.div_exact(den) {
                Some(q) => RatFunc::from_poly(q),
                None => RatFunc::new(num.clone(), den.clone()).ok()?,
            };
            if mu.numer().uses_kind(VarKind::Coordinate) || mu.denom().uses_kind(VarKind::Coordinate) {
                return None;
            }
            mu
        }
    };
    genexpr_zero_test(&image.sub(&e.scale(&candidate))).then_some(candidate)
}

/// Basis of homogeneous quadratic polynomials annihilated by every field.
pub fn quadratic_invariants(g: &LieAlgebra) -> Result<Vec<Poly>> {
    g.require_numeric()?;
    let n = g.dim();
    let reg = g.registry();
    let monos: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let index: BTreeMap<(usize, usize), usize> = monos.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let fields = coadjoint_fields(g);

    // Column u: image of monomial u under each field, expanded over monomials.
    let mut rows: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
    for (u, &(a, b)) in monos.iter().enumerate() {
        let mono = &Poly::var(reg, a)? * &Poly::var(reg, b)?;
        for f in &fields {
            let img = f.apply_poly(&mono);
            for (m, c) in img.terms() {
                let vars: Vec<usize> = m
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                    .collect();
                let key = (vars[0], vars[1]);
                let row = rows
                    .entry((f.index, index[&key]))
                    .or_insert_with(|| vec![Rat::zero(); monos.len()]);
                row[u] += c;
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::<Rat>::zeros(1, monos.len()).nullspace()
    } else {
        Matrix::from_rows(rows.into_values().collect())?.nullspace()
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(reg);
            for (u, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, b) = monos[u];
                let m = &Poly::var(reg, a).unwrap() * &Poly::var(reg, b).unwrap();
                p.add_assign_ref(&m.scale(c));
            }
            p
        })
        .collect())
}

/// Jacobian of polynomial functions with respect to the coordinates.
pub fn jacobian(g: &LieAlgebra, funcs: &[Poly]) -> Matrix<Poly> {
    let n = g.dim();
    Matrix::from_fn(funcs.len(), n, |r, c| {
        funcs[r].differentiate(g.coord(c)).expect("coordinate id")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, parse_poly, parse_ratfunc};

    fn q6() -> LieAlgebra {
        let mut b = LieAlgebra::builder_numbered(6);
        for i in 1..=3 {
            b.add_int(0, i, i + 1, 1).unwrap();
        }
        b.add_int(1, 4, 5, 1).unwrap();
        b.add_int(2, 3, 5, -1).unwrap();
        b.build()
    }

    fn h1() -> LieAlgebra {
        let mut b = LieAlgebra::builder_numbered(3);
        b.add_int(0, 1, 2, 1).unwrap();
        b.build()
    }

    fn rf(s: &str, reg: &Arc<VarRegistry>) -> RatFunc {
        parse_ratfunc(s, reg).unwrap()
    }

    #[test]
    fn commutator_matrix_of_heisenberg() {
        let g = h1();
        let a = commutator_matrix(&g);
        let reg = g.registry();
        assert_eq!(a[(0, 1)], parse_poly("x3", reg).unwrap());
        assert_eq!(a[(1, 0)], parse_poly("-x3", reg).unwrap());
        assert!(a[(2, 2)].is_zero());
        assert!(a.is_antisymmetric());
        assert_eq!(a.bareiss_rank(), 2);
    }

    #[test]
    fn q6_counts() {
        let g = q6();
        assert_eq!(commutator_matrix(&g)[(0, 1)], parse_poly("x3", g.registry()).unwrap());
        assert_eq!(num_invariants_bb(&g, RankStrategy::Symbolic).unwrap(), 2);
        assert_eq!(
            num_invariants_bb(&g, RankStrategy::Random { seed: 0, trials: 5 }).unwrap(),
            2
        );
        let ab = LieAlgebra::builder_numbered(5).build();
        assert_eq!(num_invariants_bb(&ab, RankStrategy::Symbolic).unwrap(), 5);
        assert!(coadjoint_fields(&ab).iter().all(CoadjointField::is_zero));
    }

    #[test]
    fn q6_fields_match_hand_expansion() {
        let g = q6();
        let reg = g.registry();
        let fields = coadjoint_fields(&g);
        // X̂_5 = x6 ∂_2
        let f5 = &fields[4];
        for (j, c) in f5.coeffs.iter().enumerate() {
            if j == 1 {
                assert_eq!(c, &parse_poly("x6", reg).unwrap());
            } else {
                assert!(c.is_zero());
            }
        }
        // X̂_1 = -(x3 ∂_2 + x4 ∂_3 + x5 ∂_4)
        let f1 = &fields[0];
        assert_eq!(f1.coeffs[1], parse_poly("-x3", reg).unwrap());
        assert_eq!(f1.coeffs[2], parse_poly("-x4", reg).unwrap());
        assert_eq!(f1.coeffs[3], parse_poly("-x5", reg).unwrap());
    }

    #[test]
    fn zero_test_examples() {
        let g = q6();
        let reg = g.registry();
        let x6 = parse_poly("x6", reg).unwrap();
        let one = RatFunc::one(reg);

        let mut e = GenExpr::new(reg, vec![x6.clone()]).unwrap();
        e.add_power(one.clone(), 0, rf("2", reg)).unwrap();
        let mut f = GenExpr::new(reg, vec![x6.clone()]).unwrap();
        f.add_power(one.clone(), 0, rf("-2", reg)).unwrap();
        let prod = e.mul(&f).sub(&GenExpr::from_poly(&Poly::one(reg)));
        assert!(genexpr_zero_test(&prod));

        let mut half = GenExpr::new(reg, vec![x6.clone()]).unwrap();
        half.add_power(one.clone(), 0, rf("1/2", reg)).unwrap();
        half.add_power(one.neg(), 0, rf("1", reg)).unwrap();
        assert!(!genexpr_zero_test(&half));

        // shifted exponents in the same class cancel: x6 * x6^(-1/2) - x6^(1/2)
        let mut shifted = GenExpr::new(reg, vec![x6]).unwrap();
        shifted
            .add_term(RatFunc::from_poly(parse_poly("x6", reg).unwrap()), vec![rf("-1/2", reg)], vec![])
            .unwrap();
        shifted.add_power(one.neg(), 0, rf("1/2", reg)).unwrap();
        assert!(genexpr_zero_test(&shifted));
    }

    #[test]
    fn casimir_of_q6_verified() {
        let g = q6();
        let reg = g.registry();
        let i2 = parse_poly("x1*x6 + x3*x5 - 1/2*x4^2", reg).unwrap();
        assert!(is_invariant(&g, &GenExpr::from_poly(&i2)).passed());
        assert!(is_invariant(&g, &GenExpr::from_poly(&parse_poly("x6", reg).unwrap())).passed());
        // oracle: plain polynomial expansion
        for f in coadjoint_fields(&g) {
            assert!(f.apply_poly(&i2).is_zero());
        }
        let wrong = parse_poly("x1*x6 + x3*x5 + 1/2*x4^2", reg).unwrap();
        assert!(!is_invariant(&g, &GenExpr::from_poly(&wrong)).passed());
    }

    #[test]
    fn x1_is_not_invariant_of_q6() {
        let g = q6();
        let x1 = parse_poly("x1", g.registry()).unwrap();
        let InvariantReport::Residuals(r) = is_invariant(&g, &GenExpr::from_poly(&x1)) else {
            panic!("x1 reported invariant");
        };
        assert!(r.iter().any(|(i, _)| *i == 1));
    }

    #[test]
    fn constant_is_annihilated() {
        let g = q6();
        let c = GenExpr::from_poly(&Poly::one(g.registry()));
        for f in coadjoint_fields(&g) {
            assert!(apply_field(&f, &c).is_empty());
        }
    }

    #[test]
    fn semi_invariant_weight_zero_for_center() {
        let g = q6();
        let x6 = GenExpr::from_poly(&parse_poly("x6", g.registry()).unwrap());
        let f5 = &coadjoint_fields(&g)[4];
        let w = semi_invariant_weight(f5, &x6).unwrap();
        assert!(w.is_zero());
        // x2 is moved off itself by X̂_1
        let x2 = GenExpr::from_poly(&parse_poly("x2", g.registry()).unwrap());
        assert!(semi_invariant_weight(&coadjoint_fields(&g)[0], &x2).is_none());
    }

    #[test]
    fn quadratic_invariants_small_cases() {
        let g = h1();
        let q = quadratic_invariants(&g).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0], parse_poly("x3^2", g.registry()).unwrap());

        let q6 = q6();
        let qs = quadratic_invariants(&q6).unwrap();
        assert_eq!(qs.len(), 2);
        for p in &qs {
            for f in coadjoint_fields(&q6) {
                assert!(f.apply_poly(p).is_zero());
            }
        }

        let ab = LieAlgebra::builder_numbered(4).build();
        assert_eq!(quadratic_invariants(&ab).unwrap().len(), 10);
    }

    #[test]
    fn log_derivative() {
        let g = h1();
        let reg = g.registry();
        // field x3 ∂_1 acting on ln(x1) gives x3 / x1
        let f = CoadjointField {
            index: 0,
            coeffs: vec![parse_poly("x3", reg).unwrap(), Poly::zero(reg), Poly::zero(reg)],
        };
        let mut e = GenExpr::new(reg, vec![parse_poly("x1", reg).unwrap()]).unwrap();
        e.add_log(RatFunc::one(reg), 0, 1).unwrap();
        let d = apply_field(&f, &e);
        let mut expected = GenExpr::new(reg, vec![parse_poly("x1", reg).unwrap()]).unwrap();
        expected
            .add_power(RatFunc::from_poly(parse_poly("x3", reg).unwrap()), 0, rf("-1", reg))
            .unwrap();
        assert!(genexpr_zero_test(&d.sub(&expected)));
        let _ = int(0);
    }
}
