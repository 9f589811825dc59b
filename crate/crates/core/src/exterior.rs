//! Exterior forms on the dual of a Lie algebra, Maurer-Cartan equations,
//! the `j0` rank invariant and contact forms.
//!
//! The Maurer-Cartan differential is `dω_k = Σ_{i<j} C_ij^k ω_i ∧ ω_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::ring::{Poly, Rat, RatSampler, VarKind, VarRegistry};

/// Homogeneous exterior form of fixed degree with polynomial coefficients.
#[derive(Clone, PartialEq)]
pub struct ExtForm {
    reg: Arc<VarRegistry>,
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

/// Sign of the permutation sorting `a ++ b`, or `None` if they overlap.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if y < x {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl ExtForm {
    pub fn zero(reg: &Arc<VarRegistry>, dim: usize, degree: usize) -> Self {
        Self {
            reg: reg.clone(),
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant function `c` as a 0-form.
    pub fn scalar(reg: &Arc<VarRegistry>, dim: usize, c: Poly) -> Self {
        let mut f = Self::zero(reg, dim, 0);
        f.add_term(vec![], c);
        f
    }

    /// Dual basis 1-form `ω_i` (0-based).
    pub fn basis(reg: &Arc<VarRegistry>, dim: usize, i: usize) -> Self {
        let mut f = Self::zero(reg, dim, 1);
        f.add_term(vec![i], Poly::one(reg));
        f
    }

    /// Adds `c · ω_{indices}`; indices in any order, sign adjusted.
    pub fn add_term(&mut self, mut indices: Vec<usize>, c: Poly) {
        assert_eq!(indices.len(), self.degree, "term degree");
        assert!(indices.iter().all(|&i| i < self.dim), "index out of range");
        let mut odd = false;
        for i in 0..indices.len() {
            for j in (i + 1)..indices.len() {
                if indices[i] == indices[j] {
                    return;
                }
                if indices[j] < indices[i] {
                    odd = !odd;
                }
            }
        }
        indices.sort_unstable();
        let c = if odd { -&c } else { c };
        let slot = self.coeffs.entry(indices.clone()).or_insert_with(|| Poly::zero(&self.reg));
        slot.add_assign_ref(&c);
        if slot.is_zero() {
            self.coeffs.remove(&indices);
        }
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.coeffs
    }

    /// Coefficient of `ω_{indices}` (increasing indices).
    pub fn coeff(&self, indices: &[usize]) -> Poly {
        self.coeffs.get(indices).cloned().unwrap_or_else(|| Poly::zero(&self.reg))
    }

    /// Coefficient of the volume form `ω_1 ∧ .. ∧ ω_dim`.
    pub fn volume_coeff(&self) -> Poly {
        let all: Vec<usize> = (0..self.dim).collect();
        self.coeff(&all)
    }

    pub fn embed(&self, target: &Arc<VarRegistry>) -> Result<ExtForm> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| Ok((k.clone(), c.embed(target)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            reg: target.clone(),
            dim: self.dim,
            degree: self.degree,
            coeffs,
        })
    }

    pub fn add(&self, other: &ExtForm) -> ExtForm {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> ExtForm {
        let mut out = Self::zero(&self.reg, self.dim, self.degree);
        if c.is_zero() {
            return out;
        }
        for (k, a) in &self.coeffs {
            out.add_term(k.clone(), a * c);
        }
        out
    }

    pub fn neg(&self) -> ExtForm {
        self.scale(&-&Poly::one(&self.reg))
    }

    pub fn wedge(&self, other: &ExtForm) -> ExtForm {
        assert_eq!(self.dim, other.dim, "ambient dimension mismatch");
        let degree = self.degree + other.degree;
        let mut out = Self::zero(&self.reg, self.dim, degree);
        if degree > self.dim {
            return out;
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some((idx, odd)) = merge_sign(a, b) {
                    let c = ca * cb;
                    out.add_term(idx, if odd { -&c } else { c });
                }
            }
        }
        out
    }

    /// `j`-fold wedge power, folded from the left.
    pub fn power(&self, j: usize) -> ExtForm {
        let mut acc = Self::scalar(&self.reg, self.dim, Poly::one(&self.reg));
        for _ in 0..j {
            acc = acc.wedge(self);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let w: Vec<String> = k.iter().map(|i| format!("w{}", i + 1)).collect();
                let w = w.join("^");
                if c.is_constant() && c.as_constant().is_some_and(|v| v == Rat::from_integer(1.into())) {
                    w
                } else if c.num_terms() > 1 {
                    format!("({c})*{w}")
                } else {
                    format!("{c}*{w}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtForm({self})")
    }
}

/// Differentials `dω_k` of the dual basis.
#[derive(Debug, Clone)]
pub struct MCSystem {
    pub forms: Vec<ExtForm>,
}

impl MCSystem {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        self.forms[0].registry()
    }
}

pub fn maurer_cartan(g: &LieAlgebra) -> MCSystem {
    let n = g.dim();
    let reg = g.registry();
    let mut forms = vec![ExtForm::zero(reg, n, 2); n];
    for ((i, j), terms) in g.nonzero_brackets() {
        for (&k, c) in terms {
            forms[k].add_term(vec![i, j], c.clone());
        }
    }
    MCSystem { forms }
}

/// Largest `j` with a nonzero `j`-th wedge power; 0 for the zero form.
pub fn j0_of_form(w: &ExtForm) -> usize {
    assert_eq!(w.degree(), 2, "j0 is defined for 2-forms");
    let mut j = 0;
    let mut p = ExtForm::scalar(w.registry(), w.dim(), Poly::one(w.registry()));
    loop {
        let next = p.wedge(w);
        if next.is_zero() {
            return j;
        }
        p = next;
        j += 1;
    }
}

/// Auxiliary variable names `a1..a{dim}`.
fn aux_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `d(Σ a_i ω_i)` with fresh auxiliary coefficients `a_i`.
fn generic_exact_form(g: &LieAlgebra, prefix: &str) -> Result<(ExtForm, Vec<Poly>)> {
    let n = g.dim();
    let reg = g.registry().extended(&aux_names(prefix, n), VarKind::Auxiliary)?;
    let coeffs: Vec<Poly> = aux_names(prefix, n)
        .iter()
        .map(|name| Poly::named(&reg, name))
        .collect::<Result<_>>()?;
    let w = d_of_one_form(&maurer_cartan(g), &coeffs)?;
    Ok((w, coeffs))
}

/// `j0(g)`: maximal `j0` over the span of the Maurer-Cartan 2-forms,
/// computed on the generic element `Σ a_i dω_i`.
pub fn j0_of_algebra(g: &LieAlgebra) -> Result<usize> {
    if g.dim() == 0 {
        return Ok(0);
    }
    let (w, _) = generic_exact_form(g, "a")?;
    Ok(j0_of_form(&w))
}

/// `dim g - 2 j0(g)`.
pub fn num_invariants_rc(g: &LieAlgebra) -> Result<usize> {
    Ok(g.dim() - 2 * j0_of_algebra(g)?)
}

/// `d(Σ c_i ω_i) = Σ c_i dω_i`. Coefficients may live in an extension of the
/// algebra's registry.
pub fn d_of_one_form(mc: &MCSystem, coeffs: &[Poly]) -> Result<ExtForm> {
    let n = mc.dim();
    if coeffs.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: coeffs.len(),
        });
    }
    let reg = coeffs.first().map(|c| c.registry().clone()).unwrap_or_else(|| mc.registry().clone());
    let mut out = ExtForm::zero(&reg, n, 2);
    for (c, dw) in coeffs.iter().zip(&mc.forms) {
        if c.is_zero() || dw.is_zero() {
            continue;
        }
        let c = c.embed(&reg)?;
        out = out.add(&dw.embed(&reg)?.scale(&c));
    }
    Ok(out)
}

fn one_form(reg: &Arc<VarRegistry>, coeffs: &[Poly]) -> Result<ExtForm> {
    let n = coeffs.len();
    let mut w = ExtForm::zero(reg, n, 1);
    for (i, c) in coeffs.iter().enumerate() {
        w.add_term(vec![i], c.embed(reg)?);
    }
    Ok(w)
}

/// Volume coefficient of `ω ∧ (dω)^m` for `ω = Σ c_i ω_i` on an algebra of
/// dimension `2m+1`.
pub fn contact_check(g: &LieAlgebra, coeffs: &[Poly]) -> Result<Poly> {
    let n = g.dim();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let dw = d_of_one_form(&maurer_cartan(g), coeffs)?;
    let w = one_form(dw.registry(), coeffs)?;
    Ok(w.wedge(&dw.power(n / 2)).volume_coeff())
}

/// [`contact_check`] with rational coefficients.
pub fn contact_check_rat(g: &LieAlgebra, coeffs: &[Rat]) -> Result<Poly> {
    let reg = g.registry();
    let polys: Vec<Poly> = coeffs.iter().map(|c| Poly::constant(reg, c.clone())).collect();
    contact_check(g, &polys)
}

/// Volume coefficient of `(dω)^m` for `ω = Σ c_i ω_i` on an algebra of
/// dimension `2m`; nonzero means `dω` is an exact symplectic form.
pub fn symplectic_check(g: &LieAlgebra, coeffs: &[Poly]) -> Result<Poly> {
    let n = g.dim();
    if n % 2 == 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: n,
        });
    }
    let dw = d_of_one_form(&maurer_cartan(g), coeffs)?;
    Ok(dw.power(n / 2).volume_coeff())
}

/// Result of [`contact_search`].
#[derive(Debug, Clone)]
pub enum ContactSearch {
    /// Coefficients of a contact form and its nonzero volume coefficient,
    /// a polynomial in the algebra's parameters.
    Witness { coeffs: Vec<Rat>, volume: Poly },
    /// `ω ∧ (dω)^m` vanishes identically in generic coefficients `c_i`.
    NoneExists,
}

impl ContactSearch {
    pub fn found(&self) -> bool {
        matches!(self, ContactSearch::Witness { .. })
    }
}

const CONTACT_SAMPLES: usize = 20;

/// Looks for a linear contact form: seeded samples first, then the symbolic
/// volume coefficient in generic coefficients, which is conclusive.
/// With free parameters a witness holds for generic parameter values.
pub fn contact_search(g: &LieAlgebra, seed: u64) -> Result<ContactSearch> {
    let n = g.dim();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let mut sampler = RatSampler::new(seed);
    let try_point = |sampler: &mut RatSampler| -> Result<Option<ContactSearch>> {
        let coeffs = sampler.vector(n);
        let v = contact_check_rat(g, &coeffs)?;
        Ok((!v.is_zero()).then_some(ContactSearch::Witness { coeffs, volume: v }))
    };
    for _ in 0..CONTACT_SAMPLES {
        if let Some(w) = try_point(&mut sampler)? {
            return Ok(w);
        }
    }
    let reg = g.registry().extended(&aux_names("c", n), VarKind::Auxiliary)?;
    let coeffs: Vec<Poly> = aux_names("c", n)
        .iter()
        .map(|name| Poly::named(&reg, name))
        .collect::<Result<_>>()?;
    if contact_check(g, &coeffs)?.is_zero() {
        return Ok(ContactSearch::NoneExists);
    }
    loop {
        if let Some(w) = try_point(&mut sampler)? {
            return Ok(w);
        }
    }
}
