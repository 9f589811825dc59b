//! Builtin algebras: the filiform-type nilpotent algebras `Q_{2n}` and
//! `n_{n,1}`, their solvable extensions, and a few small fixtures.
//!
//! Generators are `X1..X{2n}` followed by the torus `Y` (or `Y1`, `Y2`).
//! Coordinates follow generator order, so `x_{2n}` is the centre.

use std::fmt;

use crate::coadjoint::GenExpr;
use crate::error::{Error, Result};
use crate::liealg::{JacobiReport, LieAlgebra, LieAlgebraBuilder};
use crate::ring::{rat, Poly, Rat, RatFunc, VarRegistry};
use crate::structure::ContractionSpec;

/// A scalar that is either a formal parameter or a fixed rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Symbolic,
    Value(Rat),
}

impl ParamValue {
    pub fn int(n: i64) -> Self {
        ParamValue::Value(Rat::from_integer(n.into()))
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            ParamValue::Symbolic => None,
            ParamValue::Value(v) => Some(v),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Symbolic => f.write_str("symbolic"),
            ParamValue::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Which builtin algebra to construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Abelian { dim: usize },
    /// `h_k`, dimension `2k+1`, `[X_i, X_{k+i}] = X_{2k+1}`.
    Heisenberg { k: usize },
    /// Model filiform `n_{dim,1}`: `[X1, X_i] = X_{i+1}`.
    NN1 { dim: usize },
    /// `Q_{2m}`, `m >= 3`.
    Q { m: usize },
    A622,
    /// `r_{2n+1}(λ2)`.
    RLambda { n: usize, lambda2: ParamValue },
    /// `r_{2n+1}(2-n, ε)`.
    REps { n: usize, eps: ParamValue },
    /// `r_{2n+1}(λ^5, .., λ^{2n-1})`; `tail[i]` multiplies `F_2^{2i+5}`.
    RTail { n: usize, tail: Vec<ParamValue> },
    /// `r_{2n+2}` with two torus generators.
    RMax { n: usize },
    /// `k_n`: the subalgebra of `Q_{2n}` spanned by `X1, X3, .., X_{2n}`.
    KSub { n: usize },
}

impl FamilySpec {
    /// Short identifier, as used on the command line.
    pub fn id(&self) -> &'static str {
        match self {
            FamilySpec::Abelian { .. } => "abelian",
            FamilySpec::Heisenberg { .. } => "heisenberg",
            FamilySpec::NN1 { .. } => "n-n1",
            FamilySpec::Q { .. } => "q2n",
            FamilySpec::A622 => "a622",
            FamilySpec::RLambda { .. } => "r-lambda",
            FamilySpec::REps { .. } => "r-eps",
            FamilySpec::RTail { .. } => "r-tail",
            FamilySpec::RMax { .. } => "r-max",
            FamilySpec::KSub { .. } => "k-sub",
        }
    }

    /// Symbolic tail with `n-2` parameters.
    pub fn tail_symbolic(n: usize) -> Self {
        FamilySpec::RTail {
            n,
            tail: vec![ParamValue::Symbolic; n.saturating_sub(2)],
        }
    }

    /// Dimension of the described algebra.
    pub fn dim(&self) -> usize {
        match *self {
            FamilySpec::Abelian { dim } | FamilySpec::NN1 { dim } => dim,
            FamilySpec::Heisenberg { k } => 2 * k + 1,
            FamilySpec::Q { m } => 2 * m,
            FamilySpec::A622 => 6,
            FamilySpec::RLambda { n, .. } | FamilySpec::REps { n, .. } | FamilySpec::RTail { n, .. } => 2 * n + 1,
            FamilySpec::RMax { n } => 2 * n + 2,
            FamilySpec::KSub { n } => 2 * n - 1,
        }
    }

    /// Half-size `n` of the nilradical `Q_{2n}`, for families built on it.
    pub fn q_half(&self) -> Option<usize> {
        match *self {
            FamilySpec::Q { m } => Some(m),
            FamilySpec::RLambda { n, .. }
            | FamilySpec::REps { n, .. }
            | FamilySpec::RTail { n, .. }
            | FamilySpec::RMax { n }
            | FamilySpec::KSub { n } => Some(n),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Constraint(msg));
        match self {
            FamilySpec::Abelian { dim } if *dim == 0 => fail("abelian algebra needs dim >= 1".into()),
            FamilySpec::Heisenberg { k } if *k == 0 => fail("heisenberg algebra needs k >= 1".into()),
            FamilySpec::NN1 { dim } if *dim < 3 => fail(format!("n_(n,1) needs dim >= 3, got {dim}")),
            FamilySpec::RTail { n, tail } if *n >= 3 && tail.len() != n - 2 => fail(format!(
                "r-tail with n = {n} takes {} tail parameters, got {}",
                n - 2,
                tail.len()
            )),
            _ => match self.q_half() {
                Some(m) if m < 3 => fail(format!("Q_(2m) requires m >= 3, got m = {m}")),
                _ => Ok(()),
            },
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Abelian { dim } => write!(f, "abelian({dim})"),
            FamilySpec::Heisenberg { k } => write!(f, "h{k}"),
            FamilySpec::NN1 { dim } => write!(f, "n({dim},1)"),
            FamilySpec::Q { m } => write!(f, "Q{}", 2 * m),
            FamilySpec::A622 => f.write_str("A6,22"),
            FamilySpec::RLambda { n, lambda2 } => write!(f, "r{}(lambda2={lambda2})", 2 * n + 1),
            FamilySpec::REps { n, eps } => write!(f, "r{}({}, eps={eps})", 2 * n + 1, 2 - *n as i64),
            FamilySpec::RTail { n, tail } => {
                let t: Vec<String> = tail.iter().map(ToString::to_string).collect();
                write!(f, "r{}(tail=[{}])", 2 * n + 1, t.join(","))
            }
            FamilySpec::RMax { n } => write!(f, "r{}", 2 * n + 2),
            FamilySpec::KSub { n } => write!(f, "k{n}"),
        }
    }
}

/// Name of the `i`-th tail parameter (`i = 0` is `λ^5`).
pub fn tail_param_name(i: usize) -> String {
    format!("lambda2_{}", 2 * i + 5)
}

fn nil_labels(n2: usize) -> Vec<String> {
    (1..=n2).map(|i| format!("X{i}")).collect()
}

/// Adds the brackets of `Q_{2n}` on generators `0..2n`.
fn q_brackets(b: &mut LieAlgebraBuilder, n: usize) -> Result<()> {
    let top = 2 * n - 1;
    for i in 1..=(2 * n - 3) {
        b.add_int(0, i, i + 1, 1)?;
    }
    for k in 2..=n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        b.add_int(k - 1, 2 * n - k, top, sign)?;
    }
    Ok(())
}

fn param_poly(b: &LieAlgebraBuilder, name: &str, v: &ParamValue) -> Result<Poly> {
    match v {
        ParamValue::Symbolic => b.param(name),
        ParamValue::Value(r) => Ok(Poly::constant(b.registry(), r.clone())),
    }
}

fn symbolic_names<'a>(pairs: impl IntoIterator<Item = (String, &'a ParamValue)>) -> Vec<String> {
    pairs
        .into_iter()
        .filter(|(_, v)| matches!(v, ParamValue::Symbolic))
        .map(|(n, _)| n)
        .collect()
}

/// Constructs the algebra and checks the Jacobi identity symbolically.
pub fn build(spec: &FamilySpec) -> Result<LieAlgebra> {
    spec.validate()?;
    let g = match spec {
        FamilySpec::Abelian { dim } => LieAlgebra::builder_numbered(*dim).build(),
        FamilySpec::Heisenberg { k } => {
            let mut b = LieAlgebra::builder_numbered(2 * k + 1);
            for i in 0..*k {
                b.add_int(i, k + i, 2 * k, 1)?;
            }
            b.build()
        }
        FamilySpec::NN1 { dim } => {
            let mut b = LieAlgebra::builder_numbered(*dim);
            for i in 1..dim - 1 {
                b.add_int(0, i, i + 1, 1)?;
            }
            b.build()
        }
        FamilySpec::Q { m } => {
            let mut b = LieAlgebra::builder_numbered(2 * m);
            q_brackets(&mut b, *m)?;
            b.build()
        }
        FamilySpec::A622 => {
            let mut b = LieAlgebra::builder_numbered(6);
            for (i, j, k) in [(2, 6, 1), (3, 4, 1), (3, 5, 2), (4, 6, 2), (4, 5, 3), (5, 6, 4)] {
                b.add_int(i - 1, j - 1, k - 1, 1)?;
            }
            b.build()
        }
        FamilySpec::RLambda { n, lambda2 } => {
            let n = *n;
            let mut labels = nil_labels(2 * n);
            labels.push("Y".into());
            let params = symbolic_names([("lambda2".to_string(), lambda2)]);
            let mut b = LieAlgebra::builder(&labels, &params)?;
            q_brackets(&mut b, n)?;
            let l = param_poly(&b, "lambda2", lambda2)?;
            let y = 2 * n;
            b.add_int(y, 0, 0, 1)?;
            for k in 2..=(2 * n - 1) {
                let c = &b.int(k as i64 - 2) + &l;
                b.add(y, k - 1, k - 1, c)?;
            }
            let c = &b.int(2 * n as i64 - 3) + &l.scale(&rat(2, 1));
            b.add(y, 2 * n - 1, 2 * n - 1, c)?;
            b.build()
        }
        FamilySpec::REps { n, eps } => {
            let n = *n;
            let mut labels = nil_labels(2 * n);
            labels.push("Y".into());
            let params = symbolic_names([("eps".to_string(), eps)]);
            let mut b = LieAlgebra::builder(&labels, &params)?;
            q_brackets(&mut b, n)?;
            let e = param_poly(&b, "eps", eps)?;
            let y = 2 * n;
            b.add_int(y, 0, 0, 1)?;
            b.add(y, 0, 2 * n - 1, e)?;
            for k in 2..=(2 * n - 1) {
                b.add_int(y, k - 1, k - 1, k as i64 - n as i64)?;
            }
            b.add_int(y, 2 * n - 1, 2 * n - 1, 1)?;
            b.build()
        }
        FamilySpec::RTail { n, tail } => {
            let n = *n;
            let mut labels = nil_labels(2 * n);
            labels.push("Y".into());
            let params = symbolic_names(tail.iter().enumerate().map(|(i, v)| (tail_param_name(i), v)));
            let mut b = LieAlgebra::builder(&labels, &params)?;
            q_brackets(&mut b, n)?;
            let y = 2 * n;
            // F_2^2: identity on X2..X_{2n-1}, doubling on the centre.
            for k in 2..=(2 * n - 1) {
                b.add_int(y, k - 1, k - 1, 1)?;
            }
            b.add_int(y, 2 * n - 1, 2 * n - 1, 2)?;
            // F_2^{2k+1}: X_{2+t} -> X_{2k+1+t}.
            for (i, v) in tail.iter().enumerate() {
                let k = i + 2;
                let c = param_poly(&b, &tail_param_name(i), v)?;
                if c.is_zero() {
                    continue;
                }
                for t in 0..=(2 * (n - 1 - k)) {
                    b.add(y, 1 + t, 2 * k + t, c.clone())?;
                }
            }
            b.build()
        }
        FamilySpec::RMax { n } => {
            let n = *n;
            let mut labels = nil_labels(2 * n);
            labels.push("Y1".into());
            labels.push("Y2".into());
            let mut b = LieAlgebra::builder(&labels, &[] as &[&str])?;
            q_brackets(&mut b, n)?;
            let (y1, y2) = (2 * n, 2 * n + 1);
            for k in 1..=(2 * n - 1) {
                b.add_int(y1, k - 1, k - 1, k as i64)?;
            }
            b.add_int(y1, 2 * n - 1, 2 * n - 1, 2 * n as i64 + 1)?;
            for k in 2..=(2 * n - 1) {
                b.add_int(y2, k - 1, k - 1, 1)?;
            }
            b.add_int(y2, 2 * n - 1, 2 * n - 1, 2)?;
            b.build()
        }
        FamilySpec::KSub { n } => {
            let q = build(&FamilySpec::Q { m: *n })?;
            q.subalgebra_restrict(&k_sub_indices(*n))?
        }
    };
    if let JacobiReport::Violations(v) = g.jacobi_check() {
        let first = &v[0];
        return Err(Error::Jacobi(format!(
            "{spec}: Jacobi fails on ({}, {}, {})",
            g.labels()[first.i],
            g.labels()[first.j],
            g.labels()[first.k]
        )));
    }
    Ok(g)
}

/// Generators of `Q_{2n}` spanning `k_n` (0-based).
pub fn k_sub_indices(n: usize) -> Vec<usize> {
    std::iter::once(0).chain(2..2 * n).collect()
}

/// Quadratic Casimir of `Q_{2n}` in the coordinates of `reg`:
/// `x1 x_{2n} + x3 x_{2n-1} + Σ_{k=4}^{n} (-1)^{k+1} x_k x_{2n+2-k} + (-1)^n/2 x_{n+1}^2`.
pub fn casimir_i2(n: usize, reg: &std::sync::Arc<VarRegistry>) -> Result<Poly> {
    let x = |i: usize| Poly::var(reg, i - 1);
    let mut p = &x(1)? * &x(2 * n)?;
    for k in 3..=n {
        let sign = if k % 2 == 0 { -1 } else { 1 };
        let term = &x(k)? * &x(2 * n + 2 - k)?;
        p.add_assign_ref(&term.scale(&Rat::from_integer(sign.into())));
    }
    let half = if n.is_multiple_of(2) { rat(1, 2) } else { rat(-1, 2) };
    p.add_assign_ref(&x(n + 1)?.pow(2).scale(&half));
    Ok(p)
}

/// Invariants attached to a family, with an optional remark.
#[derive(Debug, Clone)]
pub struct CanonicalInvariants {
    pub exprs: Vec<GenExpr>,
    pub note: Option<String>,
}

/// Closed-form invariants for `Q_{2n}` and the solvable extensions.
///
/// For `r_{2n+1}(λ2)` with a numeric `λ2` the degenerate cases are handled:
/// `x_{2n}` when `2n-3+2λ2 = 0` and `I2` when `2n-2+2λ2 = 0`.
pub fn canonical_invariants(spec: &FamilySpec, g: &LieAlgebra) -> Result<CanonicalInvariants> {
    let reg = g.registry();
    let one = RatFunc::one(reg);
    let c = |v: i64| RatFunc::constant(reg, Rat::from_integer(v.into()));
    let only = |exprs: Vec<GenExpr>| CanonicalInvariants { exprs, note: None };
    let (i2, centre) = match spec.q_half() {
        Some(n) => (casimir_i2(n, reg)?, Poly::var(reg, 2 * n - 1)?),
        None => {
            return Err(Error::Constraint(format!(
                "no closed-form invariants recorded for {spec}"
            )))
        }
    };
    let i2_times_power = |alpha: RatFunc| -> Result<GenExpr> {
        let mut e = GenExpr::new(reg, vec![i2.clone(), centre.clone()])?;
        e.add_term(one.clone(), vec![one.clone(), alpha.neg()], vec![])?;
        Ok(e)
    };
    match spec {
        FamilySpec::Q { .. } => Ok(only(vec![GenExpr::from_poly(&centre), GenExpr::from_poly(&i2)])),
        FamilySpec::RLambda { n, lambda2 } => {
            let n = *n as i64;
            let l = match lambda2 {
                ParamValue::Symbolic => RatFunc::from_poly(Poly::named(reg, "lambda2")?),
                ParamValue::Value(v) => RatFunc::constant(reg, v.clone()),
            };
            let num = c(2 * n - 2).add(&l.scale(&rat(2, 1)));
            let den = c(2 * n - 3).add(&l.scale(&rat(2, 1)));
            if den.is_zero() {
                return Ok(only(vec![GenExpr::from_poly(&centre)]));
            }
            if num.is_zero() {
                return Ok(only(vec![GenExpr::from_poly(&i2)]));
            }
            Ok(only(vec![i2_times_power(num.div(&den)?)?]))
        }
        FamilySpec::REps { eps, .. } => {
            let e = match eps {
                ParamValue::Symbolic => RatFunc::from_poly(Poly::named(reg, "eps")?),
                ParamValue::Value(v) => RatFunc::constant(reg, v.clone()),
            };
            let mut j = i2_times_power(c(2))?;
            j.add_log(e.neg(), 1, 1)?;
            Ok(only(vec![j]))
        }
        FamilySpec::RTail { .. } => Ok(only(vec![i2_times_power(c(1))?])),
        FamilySpec::RMax { .. } => Ok(CanonicalInvariants {
            exprs: vec![],
            note: Some("no invariants".into()),
        }),
        _ => Err(Error::Constraint(format!(
            "no closed-form invariants recorded for {spec}"
        ))),
    }
}

/// Basis change `X1' = X1 + X2`, `X_k' = ε X_k` (`k >= 2`) on `Q_{2m}`,
/// whose limit `ε -> 0` is `n_{2m,1}`.
pub fn contraction_spec_q_to_n(m: usize) -> Result<ContractionSpec> {
    if m < 3 {
        return Err(Error::Constraint(format!("Q_(2m) requires m >= 3, got m = {m}")));
    }
    let dim = 2 * m;
    let reg = ContractionSpec::registry();
    let eps = Poly::named(&reg, ContractionSpec::VAR)?;
    let entries = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    let p = match (r, c) {
                        (0, 0) | (1, 0) => Poly::one(&reg),
                        _ if r == c => eps.clone(),
                        _ => Poly::zero(&reg),
                    };
                    RatFunc::from_poly(p)
                })
                .collect()
        })
        .collect();
    ContractionSpec::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coadjoint::{coadjoint_fields, is_invariant, num_invariants_bb};
    use crate::ring::{parse_poly, RankStrategy};

    #[test]
    fn q6_brackets() {
        let g = build(&FamilySpec::Q { m: 3 }).unwrap();
        let reg = g.registry();
        assert_eq!(g.constant(1, 4, 5), Poly::one(reg));
        assert_eq!(g.constant(2, 3, 5), -&Poly::one(reg));
        assert_eq!(g.constant(0, 4, 5), Poly::zero(reg));
        assert_eq!(g.to_string().matches('=').count(), 5);
    }

    #[test]
    fn q_bound_enforced() {
        assert!(matches!(build(&FamilySpec::Q { m: 2 }), Err(Error::Constraint(_))));
        assert!(build(&FamilySpec::NN1 { dim: 4 }).is_ok());
        assert!(matches!(
            build(&FamilySpec::RLambda { n: 2, lambda2: ParamValue::Symbolic }),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn r_max_brackets() {
        let g = build(&FamilySpec::RMax { n: 3 }).unwrap();
        let reg = g.registry();
        assert_eq!(g.dim(), 8);
        assert_eq!(g.constant(6, 5, 5), Poly::from_int(reg, 7));
        assert_eq!(g.constant(7, 5, 5), Poly::from_int(reg, 2));
        assert_eq!(g.constant(7, 0, 0), Poly::zero(reg));
    }

    #[test]
    fn all_families_satisfy_jacobi() {
        for n in 3..=5 {
            let specs = [
                FamilySpec::Q { m: n },
                FamilySpec::RLambda { n, lambda2: ParamValue::Symbolic },
                FamilySpec::REps { n, eps: ParamValue::Symbolic },
                FamilySpec::tail_symbolic(n),
                FamilySpec::RMax { n },
                FamilySpec::KSub { n },
            ];
            for s in &specs {
                build(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            }
        }
    }

    #[test]
    fn truncated_tail_breaks_jacobi() {
        // Dropping the last shift term of F_2^5 on X_{2+t} for even t is not a derivation.
        let n = 4;
        let mut labels = nil_labels(2 * n);
        labels.push("Y".into());
        let mut b = LieAlgebra::builder(&labels, &["l5"]).unwrap();
        q_brackets(&mut b, n).unwrap();
        for k in 2..=(2 * n - 1) {
            b.add_int(8, k - 1, k - 1, 1).unwrap();
        }
        b.add_int(8, 7, 7, 2).unwrap();
        let l5 = b.param("l5").unwrap();
        // the truncated bound keeps t = 0, 1 and drops X4 -> X7
        for t in [0usize, 1] {
            b.add(8, 1 + t, 4 + t, l5.clone()).unwrap();
        }
        assert!(!b.build().jacobi_check().passed());
    }

    #[test]
    fn i2_forms() {
        let g = build(&FamilySpec::Q { m: 4 }).unwrap();
        let reg = g.registry();
        assert_eq!(
            casimir_i2(4, reg).unwrap(),
            parse_poly("x1*x8 + x3*x7 - x4*x6 + 1/2*x5^2", reg).unwrap()
        );
        let g3 = build(&FamilySpec::Q { m: 3 }).unwrap();
        assert_eq!(
            casimir_i2(3, g3.registry()).unwrap(),
            parse_poly("x1*x6 + x3*x5 - 1/2*x4^2", g3.registry()).unwrap()
        );
    }

    #[test]
    fn i2_annihilated_by_plain_expansion() {
        for n in 3..=5 {
            let g = build(&FamilySpec::Q { m: n }).unwrap();
            let i2 = casimir_i2(n, g.registry()).unwrap();
            for f in coadjoint_fields(&g) {
                assert!(f.apply_poly(&i2).is_zero(), "n = {n}, field {}", f.index);
            }
        }
    }

    #[test]
    fn canonical_invariants_pass() {
        for n in 3..=4 {
            let specs = [
                FamilySpec::Q { m: n },
                FamilySpec::RLambda { n, lambda2: ParamValue::Symbolic },
                FamilySpec::REps { n, eps: ParamValue::Symbolic },
                FamilySpec::tail_symbolic(n),
            ];
            for s in &specs {
                let g = build(s).unwrap();
                let inv = canonical_invariants(s, &g).unwrap();
                for e in &inv.exprs {
                    assert!(is_invariant(&g, e).passed(), "{s}: {e}");
                }
            }
        }
    }

    #[test]
    fn special_lambda_values() {
        let n = 3;
        for (lambda, expected) in [(rat(-3, 2), "x6"), (rat(-2, 1), "I2")] {
            let spec = FamilySpec::RLambda { n, lambda2: ParamValue::Value(lambda) };
            let g = build(&spec).unwrap();
            let inv = canonical_invariants(&spec, &g).unwrap();
            assert_eq!(inv.exprs.len(), 1);
            let poly = inv.exprs[0].to_poly().unwrap();
            let want = if expected == "x6" {
                Poly::var(g.registry(), 5).unwrap()
            } else {
                casimir_i2(n, g.registry()).unwrap()
            };
            assert_eq!(poly, want);
            assert!(is_invariant(&g, &inv.exprs[0]).passed());
            assert_eq!(num_invariants_bb(&g, RankStrategy::Symbolic).unwrap(), 1);
        }
    }

    #[test]
    fn r_max_has_no_invariants() {
        let spec = FamilySpec::RMax { n: 3 };
        let g = build(&spec).unwrap();
        let inv = canonical_invariants(&spec, &g).unwrap();
        assert!(inv.exprs.is_empty());
        assert_eq!(inv.note.as_deref(), Some("no invariants"));
        assert_eq!(num_invariants_bb(&g, RankStrategy::Symbolic).unwrap(), 0);
    }

    #[test]
    fn k_sub_is_closed() {
        let g = build(&FamilySpec::KSub { n: 3 }).unwrap();
        assert_eq!(g.dim(), 5);
        assert_eq!(g.labels(), &["X1", "X3", "X4", "X5", "X6"]);
    }
}
