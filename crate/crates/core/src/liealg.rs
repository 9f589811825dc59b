//! Lie algebras stored as structure-constant tables.
//!
//! Only brackets `[X_i, X_j]` with `i < j` are stored; lookups with `i > j`
//! negate, and `[X_i, X_i]` is zero. Coefficients are polynomials in the
//! family parameters and never contain coordinate variables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ring::{Matrix, Poly, Rat, VarKind, VarRegistry};

/// Incremental constructor for [`LieAlgebra`].
#[derive(Debug, Clone)]
pub struct LieAlgebraBuilder {
    labels: Vec<String>,
    reg: Arc<VarRegistry>,
    constants: BTreeMap<(usize, usize), BTreeMap<usize, Poly>>,
}

impl LieAlgebraBuilder {
    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    /// Polynomial in the builder's parameters, looked up by name.
    pub fn param(&self, name: &str) -> Result<Poly> {
        let id = self.reg.lookup(name)?;
        if self.reg.kind(id) != VarKind::Parameter {
            return Err(Error::UnknownVariable(format!("{name} is not a parameter")));
        }
        Poly::var(&self.reg, id)
    }

    pub fn int(&self, c: i64) -> Poly {
        Poly::from_int(&self.reg, c)
    }

    /// Adds `coeff * X_k` to `[X_i, X_j]` (0-based indices, any order).
    pub fn add(&mut self, i: usize, j: usize, k: usize, coeff: Poly) -> Result<&mut Self> {
        let n = self.labels.len();
        for idx in [i, j, k] {
            if idx >= n {
                return Err(Error::Dimension {
                    expected: n,
                    got: idx + 1,
                });
            }
        }
        if coeff.uses_kind(VarKind::Coordinate) {
            return Err(Error::Parse(format!(
                "structure constant {coeff} contains a coordinate variable"
            )));
        }
        if i == j {
            if coeff.is_zero() {
                return Ok(self);
            }
            return Err(Error::Parse(format!(
                "[{0}, {0}] must vanish",
                self.labels[i]
            )));
        }
        let coeff = coeff.embed(&self.reg)?;
        let (key, c) = if i < j {
            ((i, j), coeff)
        } else {
            ((j, i), -&coeff)
        };
        let entry = self.constants.entry(key).or_default();
        let slot = entry.entry(k).or_insert_with(|| Poly::zero(&self.reg));
        slot.add_assign_ref(&c);
        if slot.is_zero() {
            entry.remove(&k);
        }
        if entry.is_empty() {
            self.constants.remove(&key);
        }
        Ok(self)
    }

    /// Adds an integer multiple of `X_k` to `[X_i, X_j]`.
    pub fn add_int(&mut self, i: usize, j: usize, k: usize, c: i64) -> Result<&mut Self> {
        let p = self.int(c);
        self.add(i, j, k, p)
    }

    pub fn build(self) -> LieAlgebra {
        LieAlgebra {
            labels: self.labels,
            reg: self.reg,
            constants: self.constants,
        }
    }
}

/// Finite-dimensional Lie algebra over exact rationals, possibly depending on
/// formal parameters.
#[derive(Clone)]
pub struct LieAlgebra {
    labels: Vec<String>,
    reg: Arc<VarRegistry>,
    constants: BTreeMap<(usize, usize), BTreeMap<usize, Poly>>,
}

/// One failing triple of the Jacobi identity (0-based, `i < j < k`).
#[derive(Debug, Clone)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<Poly>,
}

/// Outcome of [`LieAlgebra::jacobi_check`].
#[derive(Debug, Clone)]
pub enum JacobiReport {
    Pass,
    Violations(Vec<JacobiViolation>),
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass)
    }
}

/// Dimensions of a descending series of ideals, ending at the stabilized
/// value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesProfile(pub Vec<usize>);

impl SeriesProfile {
    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn reaches_zero(&self) -> bool {
        self.0.last() == Some(&0)
    }
}

impl fmt::Display for SeriesProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Linear subspace of the algebra, stored as a reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let mut m = Matrix::from_rows(vectors.to_vec()).expect("vectors share a length");
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Self { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::span(self.ambient, &vs).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::from_integer(1.into());
    v
}

impl LieAlgebra {
    /// Starts an algebra with the given generator labels and parameters.
    /// Coordinates `x1..x{dim}` are registered ahead of the parameters.
    pub fn builder<S: AsRef<str>, P: AsRef<str>>(labels: &[S], params: &[P]) -> Result<LieAlgebraBuilder> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateVariable(l.clone()));
            }
        }
        let reg = VarRegistry::for_algebra(labels.len(), params)?;
        Ok(LieAlgebraBuilder {
            labels,
            reg,
            constants: BTreeMap::new(),
        })
    }

    /// Builder with labels `X1..X{dim}` and no parameters.
    pub fn builder_numbered(dim: usize) -> LieAlgebraBuilder {
        let labels: Vec<String> = (1..=dim).map(|i| format!("X{i}")).collect();
        Self::builder(&labels, &[] as &[&str]).expect("distinct labels")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn parameters(&self) -> Vec<String> {
        self.reg.names_of_kind(VarKind::Parameter)
    }

    /// Parameters that actually occur in some structure constant.
    pub fn free_parameters(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .constants
            .values()
            .flat_map(|m| m.values())
            .flat_map(|p| p.non_coordinate_names())
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn is_numeric(&self) -> bool {
        self.free_parameters().is_empty()
    }

    pub fn require_numeric(&self) -> Result<()> {
        let free = self.free_parameters();
        if free.is_empty() {
            Ok(())
        } else {
            Err(Error::UnsubstitutedParameters(free))
        }
    }

    /// Coordinate variable id of generator `i`.
    pub fn coord(&self, i: usize) -> usize {
        i
    }

    /// `C_ij^k` for any ordering of `i`, `j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Poly {
        if i == j {
            return Poly::zero(&self.reg);
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.constants.get(&key).and_then(|m| m.get(&k)) {
            Some(p) if neg => -p,
            Some(p) => p.clone(),
            None => Poly::zero(&self.reg),
        }
    }

    /// Nonzero terms of `[X_i, X_j]`.
    pub fn bracket_of_basis(&self, i: usize, j: usize) -> Vec<(usize, Poly)> {
        if i == j {
            return Vec::new();
        }
        let (key, neg) = if i < j { ((i, j), false) } else { ((j, i), true) };
        self.constants
            .get(&key)
            .map(|m| {
                m.iter()
                    .map(|(&k, p)| (k, if neg { -p } else { p.clone() }))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Stored brackets, `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = ((usize, usize), &BTreeMap<usize, Poly>)> {
        self.constants.iter().map(|(&k, v)| (k, v))
    }

    /// Bracket of two vectors with polynomial entries.
    pub fn bracket(&self, u: &[Poly], v: &[Poly]) -> Result<Vec<Poly>> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: w.len(),
                });
            }
        }
        let mut out = vec![Poly::zero(&self.reg); n];
        for (&(i, j), terms) in &self.constants {
            // u_i v_j - u_j v_i
            let coef = &(&u[i] * &v[j]) - &(&u[j] * &v[i]);
            if coef.is_zero() {
                continue;
            }
            for (&k, c) in terms {
                out[k].add_assign_ref(&(&coef * c));
            }
        }
        Ok(out)
    }

    /// Bracket of rational vectors; the result may still carry parameters.
    pub fn bracket_rat(&self, u: &[Rat], v: &[Rat]) -> Result<Vec<Poly>> {
        let lift = |w: &[Rat]| -> Vec<Poly> { w.iter().map(|c| Poly::constant(&self.reg, c.clone())).collect() };
        self.bracket(&lift(u), &lift(v))
    }

    /// Bracket of rational vectors in a numeric algebra.
    pub fn bracket_numeric(&self, u: &[Rat], v: &[Rat]) -> Result<Vec<Rat>> {
        let n = self.dim();
        for w in [u, v] {
            if w.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: w.len(),
                });
            }
        }
        let mut out = vec![Rat::zero(); n];
        for (&(i, j), terms) in &self.constants {
            let coef = &u[i] * &v[j] - &u[j] * &v[i];
            if coef.is_zero() {
                continue;
            }
            for (&k, c) in terms {
                let c = c
                    .as_constant()
                    .ok_or_else(|| Error::UnsubstitutedParameters(c.non_coordinate_names()))?;
                out[k] += &coef * c;
            }
        }
        Ok(out)
    }

    /// Substitutes values for parameters by name; remaining parameters stay
    /// symbolic.
    pub fn substitute(&self, values: &BTreeMap<String, Rat>) -> Result<LieAlgebra> {
        for name in values.keys() {
            let id = self.reg.lookup(name)?;
            if self.reg.kind(id) != VarKind::Parameter {
                return Err(Error::UnknownVariable(format!("{name} is not a parameter")));
            }
        }
        let remaining: Vec<String> = self
            .parameters()
            .into_iter()
            .filter(|p| !values.contains_key(p))
            .collect();
        let mut b = LieAlgebra::builder(&self.labels, &remaining)?;
        for (&(i, j), terms) in &self.constants {
            for (&k, c) in terms {
                let v = c.eval_named(values)?;
                b.add(i, j, k, v.embed(&b.reg)?)?;
            }
        }
        Ok(b.build())
    }

    /// Convenience wrapper around [`substitute`](Self::substitute).
    pub fn with_params(&self, values: &[(&str, Rat)]) -> Result<LieAlgebra> {
        let map = values
            .iter()
            .map(|(n, v)| (n.to_string(), v.clone()))
            .collect();
        self.substitute(&map)
    }

    /// Checks `[[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j] = 0` for
    /// all `i < j < k`, with parameters kept symbolic.
    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim();
        let mut bad = Vec::new();
        let cycle = |a: usize, b: usize, c: usize, out: &mut Vec<Poly>| {
            for (m, cm) in self.bracket_of_basis(a, b) {
                for (l, cl) in self.bracket_of_basis(m, c) {
                    out[l].add_assign_ref(&(&cm * &cl));
                }
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut res = vec![Poly::zero(&self.reg); n];
                    cycle(i, j, k, &mut res);
                    cycle(j, k, i, &mut res);
                    cycle(k, i, j, &mut res);
                    if res.iter().any(|p| !p.is_zero()) {
                        bad.push(JacobiViolation {
                            i,
                            j,
                            k,
                            residual: res,
                        });
                    }
                }
            }
        }
        if bad.is_empty() {
            JacobiReport::Pass
        } else {
            JacobiReport::Violations(bad)
        }
    }

    fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Result<Subspace> {
        let mut vs = Vec::new();
        for u in a.basis() {
            for v in b.basis() {
                let w = self.bracket_numeric(u, v)?;
                if w.iter().any(|x| !x.is_zero()) {
                    vs.push(w);
                }
            }
        }
        Ok(Subspace::span(self.dim(), &vs))
    }

    fn series(&self, central: bool) -> Result<Vec<Subspace>> {
        self.require_numeric()?;
        let whole = Subspace::whole(self.dim());
        let mut out = vec![whole.clone()];
        loop {
            let last = out.last().unwrap();
            let next = if central {
                self.bracket_spaces(&whole, last)?
            } else {
                self.bracket_spaces(last, last)?
            };
            if next.dim() == last.dim() {
                return Ok(out);
            }
            let done = next.dim() == 0;
            out.push(next);
            if done {
                return Ok(out);
            }
        }
    }

    /// Ideals `D^0 ⊃ D^1 ⊃ ...` until stabilization.
    pub fn derived_ideals(&self) -> Result<Vec<Subspace>> {
        self.series(false)
    }

    /// Ideals `C^0 ⊃ C^1 ⊃ ...` until stabilization.
    pub fn lower_central_ideals(&self) -> Result<Vec<Subspace>> {
        self.series(true)
    }

    pub fn derived_series(&self) -> Result<SeriesProfile> {
        Ok(SeriesProfile(self.derived_ideals()?.iter().map(Subspace::dim).collect()))
    }

    pub fn lower_central_series(&self) -> Result<SeriesProfile> {
        Ok(SeriesProfile(
            self.lower_central_ideals()?.iter().map(Subspace::dim).collect(),
        ))
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.lower_central_series()?.reaches_zero())
    }

    pub fn is_solvable(&self) -> Result<bool> {
        Ok(self.derived_series()?.reaches_zero())
    }

    /// Common kernel of all `ad(X_i)`.
    pub fn center(&self) -> Result<Subspace> {
        self.require_numeric()?;
        let n = self.dim();
        // rows indexed by (i, k): coefficient of X_k in [v, X_i] = sum_a v_a C_ai^k
        let mut m = Matrix::zeros(n * n, n);
        for a in 0..n {
            for i in 0..n {
                for (k, c) in self.bracket_of_basis(a, i) {
                    m[(i * n + k, a)] = c.as_constant().expect("numeric");
                }
            }
        }
        Ok(Subspace::span(n, &m.nullspace()))
    }

    /// Associated graded algebra of the lower central series.
    ///
    /// The adapted basis completes `C^{i+1}` inside `C^i` layer by layer,
    /// preferring standard basis vectors. When the adapted basis is a
    /// permutation of the standard basis the result keeps the original
    /// generator order and labels; otherwise generators are ordered by layer
    /// and labelled `g{layer}_{index}`.
    pub fn graded_algebra(&self) -> Result<LieAlgebra> {
        let (basis, layer) = self.graded_basis()?;
        let n = self.dim();

        let permutation: Option<Vec<usize>> = basis
            .iter()
            .map(|v| {
                let nz: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
                (nz.len() == 1 && v[nz[0]] == Rat::from_integer(1.into())).then(|| nz[0])
            })
            .collect();

        // order[p] = index into `basis` of the p-th output generator
        let (order, labels): (Vec<usize>, Vec<String>) = match &permutation {
            Some(pos) => {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by_key(|&b| pos[b]);
                let labels = order.iter().map(|&b| self.labels[pos[b]].clone()).collect();
                (order, labels)
            }
            None => {
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                let labels = (0..n)
                    .map(|b| {
                        let c = counts.entry(layer[b]).or_insert(0);
                        *c += 1;
                        format!("g{}_{}", layer[b], c)
                    })
                    .collect();
                ((0..n).collect(), labels)
            }
        };
        let mut slot = vec![0; n];
        for (p, &b) in order.iter().enumerate() {
            slot[b] = p;
        }

        // coordinates of a vector in the adapted basis
        let change = Matrix::from_fn(n, n, |r, c| basis[c][r].clone());
        let inv = change.inverse()?;

        let mut b = LieAlgebra::builder(&labels, &[] as &[&str])?;
        for a in 0..n {
            for c in a + 1..n {
                let w = self.bracket_numeric(&basis[a], &basis[c])?;
                let coords = inv.mul_vec(&w)?;
                let target = layer[a] + layer[c];
                for (m, val) in coords.iter().enumerate() {
                    if !val.is_zero() && layer[m] == target {
                        let coeff = Poly::constant(b.registry(), val.clone());
                        b.add(slot[a], slot[c], slot[m], coeff)?;
                    }
                }
            }
        }
        Ok(b.build())
    }

    /// Adapted basis and the layer (1-based) of each vector.
    fn graded_basis(&self) -> Result<(Vec<Vec<Rat>>, Vec<usize>)> {
        let ideals = self.lower_central_ideals()?;
        if ideals.last().map(Subspace::dim) != Some(0) {
            return Err(Error::NotNilpotent);
        }
        let n = self.dim();
        let mut basis = Vec::new();
        let mut layer = Vec::new();
        for (idx, pair) in ideals.windows(2).enumerate() {
            let (upper, lower) = (&pair[0], &pair[1]);
            let mut acc: Vec<Vec<Rat>> = lower.basis().to_vec();
            let candidates = (0..n)
                .map(|i| unit(n, i))
                .filter(|v| upper.contains(v))
                .chain(upper.basis().iter().cloned());
            for v in candidates {
                if acc.len() == upper.dim() {
                    break;
                }
                let mut trial = acc.clone();
                trial.push(v.clone());
                if Subspace::span(n, &trial).dim() > acc.len() {
                    acc = trial;
                    basis.push(v);
                    layer.push(idx + 1);
                }
            }
        }
        Ok((basis, layer))
    }

    /// Subalgebra spanned by the chosen generators (0-based indices).
    pub fn subalgebra_restrict(&self, indices: &[usize]) -> Result<LieAlgebra> {
        let n = self.dim();
        for &i in indices {
            if i >= n {
                return Err(Error::Dimension {
                    expected: n,
                    got: i + 1,
                });
            }
        }
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let labels: Vec<String> = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let mut b = LieAlgebra::builder(&labels, &self.parameters())?;
        for (p, &i) in indices.iter().enumerate() {
            for &j in &indices[p + 1..] {
                for (k, c) in self.bracket_of_basis(i, j) {
                    let Some(&pk) = pos.get(&k) else {
                        return Err(Error::NotClosed {
                            left: self.labels[i].clone(),
                            right: self.labels[j].clone(),
                        });
                    };
                    b.add(pos[&i], pos[&j], pk, c.embed(b.registry())?)?;
                }
            }
        }
        Ok(b.build())
    }

    /// Structure constants as a dense `dim x dim x dim` table of
    /// polynomials, `[i][j][k] = C_ij^k`.
    pub fn constant_table(&self) -> Vec<Vec<Vec<Poly>>> {
        let n = self.dim();
        let mut t = vec![vec![vec![Poly::zero(&self.reg); n]; n]; n];
        for (&(i, j), terms) in &self.constants {
            for (&k, c) in terms {
                t[i][j][k] = c.clone();
                t[j][i][k] = -c;
            }
        }
        t
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LieAlgebra {
    /// Lists nonzero brackets, e.g. `[X1,X2] = X3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines = Vec::new();
        for (&(i, j), terms) in &self.constants {
            let rhs: Vec<String> = terms
                .iter()
                .map(|(&k, c)| match c.as_constant() {
                    Some(v) if v == Rat::from_integer(1.into()) => self.labels[k].clone(),
                    Some(v) if v == Rat::from_integer((-1).into()) => format!("-{}", self.labels[k]),
                    _ => format!("({c})*{}", self.labels[k]),
                })
                .collect();
            lines.push(format!(
                "[{},{}] = {}",
                self.labels[i],
                self.labels[j],
                rhs.join(" + ")
            ));
        }
        if lines.is_empty() {
            write!(f, "abelian({})", self.dim())
        } else {
            f.write_str(&lines.join("; "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    /// Q_6 written out by hand.
    fn q6() -> LieAlgebra {
        let mut b = LieAlgebra::builder_numbered(6);
        for i in 1..=4 {
            b.add_int(0, i, i + 1, 1).unwrap();
        }
        b.add_int(1, 4, 5, 1).unwrap();
        b.add_int(2, 3, 5, -1).unwrap();
        b.build()
    }

    fn a622() -> LieAlgebra {
        let mut b = LieAlgebra::builder_numbered(6);
        for (i, j, k) in [(2, 6, 1), (3, 4, 1), (3, 5, 2), (4, 6, 2), (4, 5, 3), (5, 6, 4)] {
            b.add_int(i - 1, j - 1, k - 1, 1).unwrap();
        }
        b.build()
    }

    fn e(n: usize, i: usize) -> Vec<Rat> {
        unit(n, i)
    }

    #[test]
    fn q6_brackets() {
        let g = q6();
        let w = g.bracket_numeric(&e(6, 0), &e(6, 1)).unwrap();
        assert_eq!(w, e(6, 2));
        let w = g.bracket_numeric(&e(6, 2), &e(6, 3)).unwrap();
        assert_eq!(w, e(6, 5).iter().map(|x| -x).collect::<Vec<_>>());
        let u = vec![int(1), int(2), int(-3), int(0), int(5), int(7)];
        assert!(g.bracket_numeric(&u, &u).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn jacobi_detects_corruption() {
        assert!(q6().jacobi_check().passed());
        let mut b = LieAlgebra::builder_numbered(6);
        b.add_int(0, 1, 2, 2).unwrap();
        for i in 2..=4 {
            b.add_int(0, i, i + 1, 1).unwrap();
        }
        b.add_int(1, 4, 5, 1).unwrap();
        b.add_int(2, 3, 5, -1).unwrap();
        let JacobiReport::Violations(v) = b.build().jacobi_check() else {
            panic!("corrupted Q6 passed Jacobi");
        };
        let hit = v.iter().find(|x| (x.i, x.j, x.k) == (0, 1, 3)).expect("violation at (1,2,4)");
        assert_eq!(hit.residual[5].as_constant(), Some(int(-1)));
    }

    #[test]
    fn series_of_a622() {
        let g = a622();
        assert_eq!(g.derived_series().unwrap().dims(), &[6, 4, 1, 0]);
        assert_eq!(g.lower_central_series().unwrap().dims(), &[6, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn q6_center_and_predicates() {
        let g = q6();
        assert!(g.is_nilpotent().unwrap());
        let z = g.center().unwrap();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&e(6, 5)));
    }

    #[test]
    fn abelian_center_is_everything() {
        let g = LieAlgebra::builder_numbered(3).build();
        assert_eq!(g.center().unwrap().dim(), 3);
        assert_eq!(g.derived_series().unwrap().dims(), &[3, 0]);
        let gr = g.graded_algebra().unwrap();
        assert_eq!(gr.nonzero_brackets().count(), 0);
    }

    #[test]
    fn graded_a622_drops_one_bracket() {
        let gr = a622().graded_algebra().unwrap();
        let expected = {
            let mut b = LieAlgebra::builder_numbered(6);
            for (i, j, k) in [(2, 6, 1), (3, 4, 1), (3, 5, 2), (4, 5, 3), (5, 6, 4)] {
                b.add_int(i - 1, j - 1, k - 1, 1).unwrap();
            }
            b.build()
        };
        assert_eq!(gr.to_string(), expected.to_string());
    }

    #[test]
    fn graded_requires_nilpotent() {
        let mut b = LieAlgebra::builder_numbered(2);
        b.add_int(0, 1, 1, 1).unwrap();
        assert!(matches!(b.build().graded_algebra(), Err(Error::NotNilpotent)));
    }

    #[test]
    fn restriction_closure() {
        let g = q6();
        let k3 = g.subalgebra_restrict(&[0, 2, 3, 4, 5]).unwrap();
        assert_eq!(k3.dim(), 5);
        assert_eq!(k3.labels()[1], "X3");
        assert!(g.subalgebra_restrict(&[1, 2, 3, 4, 5]).is_ok());
        assert!(matches!(
            g.subalgebra_restrict(&[0, 1]),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn symbolic_series_refused() {
        let mut b = LieAlgebra::builder(&["X1", "X2"], &["t"]).unwrap();
        let t = b.param("t").unwrap();
        b.add(0, 1, 1, t).unwrap();
        let g = b.build();
        assert!(matches!(
            g.derived_series(),
            Err(Error::UnsubstitutedParameters(_))
        ));
        let g1 = g.with_params(&[("t", int(1))]).unwrap();
        assert_eq!(g1.derived_series().unwrap().dims(), &[2, 1, 0]);
        assert_eq!(g1.lower_central_series().unwrap().dims(), &[2, 1]);
        assert!(!g1.is_nilpotent().unwrap());
        assert!(g1.is_solvable().unwrap());
    }
}
