//! Derivations, nilpotency tests, quadratic forms and contractions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::coadjoint::quadratic_invariants;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::ring::{Matrix, Poly, Rat, RatFunc, RatSampler, VarKind, VarRegistry};

/// Numeric structure constants as a dense table `[i][j][k]`.
fn numeric_table(g: &LieAlgebra) -> Result<Vec<Vec<Vec<Rat>>>> {
    g.require_numeric()?;
    Ok(g.constant_table()
        .into_iter()
        .map(|plane| {
            plane
                .into_iter()
                .map(|row| row.into_iter().map(|p| p.as_constant().unwrap_or_else(Rat::zero)).collect())
                .collect()
        })
        .collect())
}

/// Matrix of `Y -> [x, Y]`; column `j` holds `[x, X_j]`.
pub fn ad_matrix(g: &LieAlgebra, x: &[Poly]) -> Result<Matrix<Poly>> {
    let n = g.dim();
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    let reg = g.registry();
    let mut m = Matrix::zeros_poly(reg, n, n);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for j in 0..n {
            for (k, c) in g.bracket_of_basis(i, j) {
                let v = &m[(k, j)] + &(xi * &c);
                m[(k, j)] = v;
            }
        }
    }
    Ok(m)
}

/// [`ad_matrix`] for a rational vector of a numeric algebra.
pub fn ad_matrix_rat(g: &LieAlgebra, x: &[Rat]) -> Result<Matrix<Rat>> {
    g.require_numeric()?;
    let reg = g.registry();
    let polys: Vec<Poly> = x.iter().map(|c| Poly::constant(reg, c.clone())).collect();
    let m = ad_matrix(g, &polys)?;
    Ok(m.map(|p| p.as_constant().unwrap_or_else(Rat::zero)))
}

/// `M^dim == 0`.
pub fn is_nilpotent_matrix(m: &Matrix<Rat>) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    m.pow(m.rows() as u32).map(|p| p.is_zero()).unwrap_or(false)
}

/// Checks `D[x, y] = [Dx, y] + [x, Dy]` on all generator pairs.
pub fn is_derivation(g: &LieAlgebra, d: &Matrix<Rat>) -> Result<bool> {
    let n = g.dim();
    if d.rows() != n || d.cols() != n {
        return Err(Error::Shape {
            expected: format!("{n}x{n}"),
            got: format!("{}x{}", d.rows(), d.cols()),
        });
    }
    let t = numeric_table(g)?;
    for a in 0..n {
        for b in (a + 1)..n {
            for l in 0..n {
                let mut r = Rat::zero();
                for k in 0..n {
                    if !t[a][b][k].is_zero() {
                        r += &t[a][b][k] * &d[(l, k)];
                    }
                }
                for s in 0..n {
                    if !t[s][b][l].is_zero() {
                        r -= &d[(s, a)] * &t[s][b][l];
                    }
                    if !t[a][s][l].is_zero() {
                        r -= &d[(s, b)] * &t[a][s][l];
                    }
                }
                if !r.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Solved derivation algebra of a numeric Lie algebra.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub algebra: LieAlgebra,
    pub basis: Vec<Matrix<Rat>>,
    pub total_dim: usize,
    pub inner_dim: usize,
}

impl DerivationSpace {
    pub fn outer_dim(&self) -> usize {
        self.total_dim - self.inner_dim
    }
}

/// Solves the Leibniz system in the `dim^2` unknowns `D[r][c]`, where
/// `D(X_c) = Σ_r D[r][c] X_r`.
pub fn derivation_space(g: &LieAlgebra) -> Result<DerivationSpace> {
    let n = g.dim();
    let t = numeric_table(g)?;
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for l in 0..n {
                let mut row = vec![Rat::zero(); n * n];
                for k in 0..n {
                    if !t[a][b][k].is_zero() {
                        row[var(l, k)] += &t[a][b][k];
                    }
                }
                for s in 0..n {
                    if !t[s][b][l].is_zero() {
                        row[var(s, a)] -= &t[s][b][l];
                    }
                    if !t[a][s][l].is_zero() {
                        row[var(s, b)] -= &t[a][s][l];
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::<Rat>::zeros(1, n * n).nullspace()
    } else {
        Matrix::from_rows(rows)?.nullspace()
    };
    let basis: Vec<Matrix<Rat>> = kernel
        .iter()
        .map(|v| Matrix::from_fn(n, n, |r, c| v[var(r, c)].clone()))
        .collect();
    for d in &basis {
        if !is_derivation(g, d)? {
            return Err(Error::Constraint("solved matrix fails the Leibniz rule".into()));
        }
    }
    let ads: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let m = ad_matrix_rat(g, &crate::liealg::unit(n, i))?;
            Ok(m.iter().cloned().collect())
        })
        .collect::<Result<_>>()?;
    let inner_dim = Matrix::from_rows(ads)?.rank();
    Ok(DerivationSpace {
        algebra: g.clone(),
        total_dim: basis.len(),
        basis,
        inner_dim,
    })
}

/// Outcome of [`derivation_profile_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileReport {
    Pass,
    Mismatch(Vec<String>),
}

impl ProfileReport {
    pub fn passed(&self) -> bool {
        matches!(self, ProfileReport::Pass)
    }
}

/// Checks that every basis derivation of `Q_{2n}` has the expected shape:
/// `f(X1) ∈ span{X1, X3..X_{2n}}`, `f(X2) ∈ span{X2, X3, X5, X7, .., X_{2n-1}, X_{2n}}`,
/// `f(X_{2n}) ∈ span{X_{2n}}`, diagonal entries `d_{2+t} = t d_1 + d_2` and
/// `d_{2n} = (2n-3) d_1 + 2 d_2`, and the Leibniz rule.
pub fn derivation_profile_check(ds: &DerivationSpace, n: usize) -> Result<ProfileReport> {
    let dim = 2 * n;
    if ds.algebra.dim() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: ds.algebra.dim(),
        });
    }
    let mut issues = Vec::new();
    let x2_allowed: Vec<usize> = [1, 2]
        .into_iter()
        .chain((4..=(2 * n - 2)).step_by(2))
        .chain([2 * n - 1])
        .collect();
    for (idx, d) in ds.basis.iter().enumerate() {
        if !is_derivation(&ds.algebra, d)? {
            issues.push(format!("basis element {idx} violates the Leibniz rule"));
            continue;
        }
        if !d[(1, 0)].is_zero() {
            issues.push(format!("basis element {idx}: f(X1) has an X2 component"));
        }
        for r in 0..dim {
            if !x2_allowed.contains(&r) && !d[(r, 1)].is_zero() {
                issues.push(format!("basis element {idx}: f(X2) has an X{} component", r + 1));
            }
            if r != dim - 1 && !d[(r, dim - 1)].is_zero() {
                issues.push(format!("basis element {idx}: f(X{dim}) has an X{} component", r + 1));
            }
        }
        let d1 = &d[(0, 0)];
        let d2 = &d[(1, 1)];
        for t in 1..=(2 * n - 3) {
            let want = d1 * Rat::from_integer((t as i64).into()) + d2;
            if d[(1 + t, 1 + t)] != want {
                issues.push(format!("basis element {idx}: diagonal entry at X{} is not {t}*d1 + d2", t + 2));
            }
        }
        let want = d1 * Rat::from_integer((2 * n as i64 - 3).into()) + d2 * Rat::from_integer(2.into());
        if d[(dim - 1, dim - 1)] != want {
            issues.push(format!("basis element {idx}: centre eigenvalue is not (2n-3)*d1 + 2*d2"));
        }
    }
    Ok(if issues.is_empty() {
        ProfileReport::Pass
    } else {
        ProfileReport::Mismatch(issues)
    })
}

/// Symmetric matrix `g^{ab}` of a quadratic form in the coordinates.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub matrix: Matrix<Rat>,
}

impl QuadraticForm {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.matrix.rows()
    }
}

/// Splits cross terms evenly: entry `(a, b)` is half the coefficient of
/// `x_a x_b` for `a != b`.
pub fn quadratic_form_of(g: &LieAlgebra, q: &Poly) -> Result<QuadraticForm> {
    let n = g.dim();
    let q = q.embed(g.registry())?;
    let coords: Vec<usize> = (0..n).map(|i| g.coord(i)).collect();
    if !q.non_coordinate_names().is_empty() {
        return Err(Error::UnsubstitutedParameters(q.non_coordinate_names()));
    }
    if q.is_zero() || !q.is_homogeneous_in(&coords, 2) {
        return Err(Error::NotHomogeneous(2));
    }
    let mut m = Matrix::<Rat>::zeros(n, n);
    let half = Rat::new(1.into(), 2.into());
    for (mono, c) in q.terms() {
        let vars: Vec<usize> = mono
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (a, b) = (vars[0], vars[1]);
        if a == b {
            m[(a, a)] = c.clone();
        } else {
            m[(a, b)] = c * &half;
            m[(b, a)] = c * &half;
        }
    }
    Ok(QuadraticForm { matrix: m })
}

/// Outcome of [`quasi_classical_check`].
#[derive(Debug, Clone)]
pub enum QuasiClassical {
    /// Non-degenerate quadratic Casimir `g` and the invariant metric `h = g^{-1}`.
    Certificate { form: QuadraticForm, metric: Matrix<Rat> },
    Refusal { reason: String },
}

impl QuasiClassical {
    pub fn is_certificate(&self) -> bool {
        matches!(self, QuasiClassical::Certificate { .. })
    }
}

pub const NO_QUADRATIC_INVARIANT: &str = "no quadratic invariant";
pub const ALL_DEGENERATE: &str = "all quadratic invariants degenerate";

/// `h([x, y], z) == h(x, [y, z])` on all generator triples.
pub fn is_associative_form(g: &LieAlgebra, h: &Matrix<Rat>) -> Result<bool> {
    let n = g.dim();
    let t = numeric_table(g)?;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut lhs = Rat::zero();
                let mut rhs = Rat::zero();
                for k in 0..n {
                    if !t[x][y][k].is_zero() {
                        lhs += &t[x][y][k] * &h[(k, z)];
                    }
                    if !t[y][z][k].is_zero() {
                        rhs += &h[(x, k)] * &t[y][z][k];
                    }
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Searches the quadratic invariants for a non-degenerate one: basis
/// elements first, then seeded random combinations, then the symbolic
/// determinant of a generic combination.
pub fn quasi_classical_check(g: &LieAlgebra, seed: u64) -> Result<QuasiClassical> {
    let qs = quadratic_invariants(g)?;
    if qs.is_empty() {
        return Ok(QuasiClassical::Refusal {
            reason: NO_QUADRATIC_INVARIANT.into(),
        });
    }
    let forms: Vec<Matrix<Rat>> = qs
        .iter()
        .map(|q| quadratic_form_of(g, q).map(|f| f.matrix))
        .collect::<Result<_>>()?;
    let n = g.dim();
    let combine = |coeffs: &[Rat]| {
        Matrix::from_fn(n, n, |r, c| {
            forms
                .iter()
                .zip(coeffs)
                .fold(Rat::zero(), |acc, (f, a)| acc + &f[(r, c)] * a)
        })
    };

    let mut found = forms.iter().find(|f| !f.det().unwrap().is_zero()).cloned();
    let mut sampler = RatSampler::new(seed);
    if found.is_none() && forms.len() > 1 {
        for _ in 0..20 {
            let m = combine(&sampler.vector(forms.len()));
            if !m.det()?.is_zero() {
                found = Some(m);
                break;
            }
        }
    }
    if found.is_none() && forms.len() > 1 {
        let names: Vec<String> = (1..=forms.len()).map(|i| format!("t{i}")).collect();
        let reg = VarRegistry::new().extended(&names, VarKind::Auxiliary)?;
        let ts: Vec<Poly> = (0..forms.len()).map(|i| Poly::var(&reg, i)).collect::<Result<_>>()?;
        let generic = Matrix::from_fn(n, n, |r, c| {
            forms.iter().zip(&ts).fold(Poly::zero(&reg), |acc, (f, t)| {
                &acc + &t.scale(&f[(r, c)])
            })
        });
        let det = generic.bareiss_det()?;
        if !det.is_zero() {
            let ids: Vec<usize> = (0..forms.len()).collect();
            loop {
                let point = sampler.point(&ids);
                if !det.eval_rat(&point)?.is_zero() {
                    let coeffs: Vec<Rat> = ids.iter().map(|i| point[i].clone()).collect();
                    found = Some(combine(&coeffs));
                    break;
                }
            }
        }
    }
    let Some(matrix) = found else {
        return Ok(QuasiClassical::Refusal {
            reason: ALL_DEGENERATE.into(),
        });
    };
    let metric = matrix.inverse()?;
    if !matrix.is_symmetric() || !is_associative_form(g, &metric)? {
        return Ok(QuasiClassical::Refusal {
            reason: "non-degenerate quadratic invariant yields a non-invariant metric".into(),
        });
    }
    Ok(QuasiClassical::Certificate {
        form: QuadraticForm { matrix },
        metric,
    })
}

/// Basis change depending on a contraction variable `epsilon`: column `j`
/// holds the coordinates of the new generator `X'_j` in the old basis.
#[derive(Debug, Clone)]
pub struct ContractionSpec {
    entries: Vec<Vec<RatFunc>>,
}

impl ContractionSpec {
    pub const VAR: &'static str = "epsilon";

    /// Registry holding only the contraction variable.
    pub fn registry() -> Arc<VarRegistry> {
        VarRegistry::new()
            .extended(&[Self::VAR], VarKind::Auxiliary)
            .expect("single variable")
    }

    pub fn new(entries: Vec<Vec<RatFunc>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Shape {
                expected: format!("{n}x{n}"),
                got: "ragged rows".into(),
            });
        }
        let reg = Self::registry();
        let entries = entries
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.embed(&reg)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![0; dim])
    }

    /// `X'_i = ε^{powers[i]} X_i`.
    pub fn diagonal(powers: &[i32]) -> Self {
        let reg = Self::registry();
        let eps = RatFunc::from_poly(Poly::var(&reg, 0).expect("epsilon"));
        let n = powers.len();
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r != c {
                            return RatFunc::zero(&reg);
                        }
                        let p = powers[r];
                        let e = RatFunc::from_poly(eps.numer().pow(p.unsigned_abs()));
                        if p < 0 {
                            e.inv().expect("nonzero")
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &RatFunc {
        &self.entries[r][c]
    }

    /// The matrix at a fixed value of the contraction variable.
    pub fn at(&self, value: &Rat) -> Result<Matrix<Rat>> {
        let point = BTreeMap::from([(0usize, value.clone())]);
        let rows = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.eval(&point)?.as_constant().ok_or(Error::Singular))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }
}

impl fmt::Display for ContractionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn invert_ratfunc(m: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>> {
    let n = m.len();
    let reg = m[0][0].registry().clone();
    let mut a: Vec<Vec<RatFunc>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut row = row.clone();
            row.extend((0..n).map(|c| if c == r { RatFunc::one(&reg) } else { RatFunc::zero(&reg) }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        for c in 0..2 * n {
            a[col][c] = a[col][c].mul(&inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = a[r][c].sub(&f.mul(&a[col][c]));
                a[r][c] = v;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Transforms the structure constants through the basis change and takes the
/// limit `epsilon -> 0`. A constant with a pole at zero is an error.
pub fn contraction_limit(g: &LieAlgebra, spec: &ContractionSpec) -> Result<LieAlgebra> {
    let n = g.dim();
    if spec.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: spec.dim(),
        });
    }
    let reg = g.registry().extended(&[ContractionSpec::VAR], VarKind::Auxiliary)?;
    let eps_id = reg.lookup(ContractionSpec::VAR)?;
    let m: Vec<Vec<RatFunc>> = spec
        .entries
        .iter()
        .map(|row| row.iter().map(|e| e.embed(&reg)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let p = invert_ratfunc(&m)?;
    let table = g.constant_table();
    let table: Vec<Vec<Vec<RatFunc>>> = table
        .into_iter()
        .map(|plane| {
            plane
                .into_iter()
                .map(|row| row.into_iter().map(|c| c.embed(&reg).map(RatFunc::from_poly)).collect())
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut b = LieAlgebra::builder(g.labels(), &g.parameters())?;
    for a in 0..n {
        for bb in (a + 1)..n {
            // [X'_a, X'_b] = Σ M_ia M_jb C_ij^k X_k, then X_k = Σ_l P_lk X'_l.
            let mut w = vec![RatFunc::zero(&reg); n];
            for i in 0..n {
                if m[i][a].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if m[j][bb].is_zero() || i == j {
                        continue;
                    }
                    let f = m[i][a].mul(&m[j][bb]);
                    for k in 0..n {
                        if !table[i][j][k].is_zero() {
                            w[k] = w[k].add(&f.mul(&table[i][j][k]));
                        }
                    }
                }
            }
            for l in 0..n {
                let mut c = RatFunc::zero(&reg);
                for k in 0..n {
                    if !w[k].is_zero() && !p[l][k].is_zero() {
                        c = c.add(&p[l][k].mul(&w[k]));
                    }
                }
                if c.is_zero() {
                    continue;
                }
                let limit = limit_at_zero(&c, eps_id)?;
                if !limit.is_zero() {
                    b.add(a, bb, l, limit.embed(b.registry())?)?;
                }
            }
        }
    }
    let out = b.build();
    if !out.jacobi_check().passed() {
        return Err(Error::Jacobi("contraction limit violates the Jacobi identity".into()));
    }
    Ok(out)
}

/// Value at `ε = 0` of a rational function without a pole there.
fn limit_at_zero(c: &RatFunc, eps: usize) -> Result<Poly> {
    let vn = c.numer().min_monomial()[eps];
    let vd = c.denom().min_monomial()[eps];
    if vn < vd {
        return Err(Error::Pole(format!(
            "constant {c} has a pole at epsilon = 0; not a contraction along this spec"
        )));
    }
    if vn > vd {
        return Ok(Poly::zero(c.registry()));
    }
    let shift = |p: &Poly, v: u32| {
        let mut mono = vec![0; p.registry().len()];
        mono[eps] = v;
        p.shift_down(&mono)
    };
    let at0 = BTreeMap::from([(eps, Rat::zero())]);
    let num = shift(c.numer(), vn).eval(&at0)?;
    let den = shift(c.denom(), vd).eval(&at0)?;
    num.div_exact(&den)
        .ok_or_else(|| Error::Pole(format!("limit of {c} is not polynomial in the parameters")))
}

/// Entrywise equality of structure constants (labels ignored).
pub fn same_constants(a: &LieAlgebra, b: &LieAlgebra) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let (ta, tb) = (a.constant_table(), b.constant_table());
    ta.iter().flatten().flatten().zip(tb.iter().flatten().flatten()).all(|(x, y)| {
        if x.is_zero() || y.is_zero() {
            x.is_zero() && y.is_zero()
        } else {
            x.same_as(y)
        }
    })
}

/// Result of [`nil_independence_check`].
#[derive(Debug, Clone)]
pub struct NilIndependenceReport {
    /// Each tested tuple with `true` when the combination is non-nilpotent.
    pub tuples: Vec<(Vec<Rat>, bool)>,
    /// `tr(M(α)^k)` for `k = 1..dim` in auxiliary variables `a1..`.
    pub certificate: Vec<Poly>,
}

impl NilIndependenceReport {
    pub fn passed(&self) -> bool {
        self.tuples.iter().all(|(_, ok)| *ok)
    }
}

fn poly_matmul(a: &Matrix<Poly>, b: &Matrix<Poly>, reg: &Arc<VarRegistry>) -> Matrix<Poly> {
    let n = a.rows();
    Matrix::from_fn(n, b.cols(), |r, c| {
        let mut acc = Poly::zero(reg);
        for k in 0..a.cols() {
            if !a[(r, k)].is_zero() && !b[(k, c)].is_zero() {
                acc.add_assign_ref(&(&a[(r, k)] * &b[(k, c)]));
            }
        }
        acc
    })
}

/// Tests that no listed combination `Σ α_i ad(e_i)` is nilpotent, on the grid
/// plus 20 seeded random tuples, and emits the trace-power certificate.
pub fn nil_independence_check(
    g: &LieAlgebra,
    elements: &[Vec<Rat>],
    grid: &[Vec<Rat>],
    seed: u64,
) -> Result<NilIndependenceReport> {
    let n = g.dim();
    let k = elements.len();
    let ads: Vec<Matrix<Rat>> = elements.iter().map(|e| ad_matrix_rat(g, e)).collect::<Result<_>>()?;
    let mut tuples: Vec<Vec<Rat>> = Vec::new();
    for t in grid {
        if t.len() != k {
            return Err(Error::Dimension {
                expected: k,
                got: t.len(),
            });
        }
        if t.iter().all(Zero::is_zero) {
            return Err(Error::ZeroTuple);
        }
        tuples.push(t.clone());
    }
    let mut sampler = RatSampler::new(seed);
    for _ in 0..20 {
        tuples.push((0..k).map(|_| sampler.next_signed()).collect());
    }
    let results = tuples
        .into_iter()
        .map(|t| {
            let m = Matrix::from_fn(n, n, |r, c| {
                ads.iter().zip(&t).fold(Rat::zero(), |acc, (ad, a)| acc + &ad[(r, c)] * a)
            });
            let ok = !is_nilpotent_matrix(&m);
            (t, ok)
        })
        .collect();

    let names: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    let reg = VarRegistry::new().extended(&names, VarKind::Auxiliary)?;
    let generic = Matrix::from_fn(n, n, |r, c| {
        ads.iter().enumerate().fold(Poly::zero(&reg), |acc, (i, ad)| {
            &acc + &Poly::var(&reg, i).expect("aux").scale(&ad[(r, c)])
        })
    });
    let mut power = generic.clone();
    let mut certificate = Vec::with_capacity(n);
    for step in 0..n {
        if step > 0 {
            power = poly_matmul(&power, &generic, &reg);
        }
        let tr = (0..n).fold(Poly::zero(&reg), |acc, i| &acc + &power[(i, i)]);
        certificate.push(tr);
    }
    Ok(NilIndependenceReport {
        tuples: results,
        certificate,
    })
}

/// Dimension of the span of generators with nilpotent `ad`, when that span
/// is a nilpotent ideal. For the builtin solvable algebras this span is the
/// nilradical.
pub fn nilpotent_generator_span(g: &LieAlgebra) -> Result<Option<usize>> {
    let n = g.dim();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| {
            ad_matrix_rat(g, &crate::liealg::unit(n, i))
                .map(|m| is_nilpotent_matrix(&m))
                .unwrap_or(false)
        })
        .collect();
    let sub = match g.subalgebra_restrict(&idx) {
        Ok(s) => s,
        Err(Error::NotClosed { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let is_ideal = (0..n).all(|a| {
        idx.iter()
            .all(|&b| g.bracket_of_basis(a, b).iter().all(|(k, _)| idx.contains(k)))
    });
    Ok((is_ideal && sub.is_nilpotent()?).then_some(idx.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, casimir_i2, contraction_spec_q_to_n, FamilySpec, ParamValue};
    use crate::liealg::unit;
    use crate::ring::{int, parse_poly};

    fn q(m: usize) -> LieAlgebra {
        build(&FamilySpec::Q { m }).unwrap()
    }

    #[test]
    fn ad_of_x1_on_q6_is_shift() {
        let g = q(3);
        let m = ad_matrix_rat(&g, &unit(6, 0)).unwrap();
        for (r, c) in [(2, 1), (3, 2), (4, 3)] {
            assert_eq!(m[(r, c)], int(1));
        }
        assert_eq!(m.iter().filter(|x| !x.is_zero()).count(), 3);
        assert!(is_nilpotent_matrix(&m));
        assert!(is_nilpotent_matrix(&Matrix::zeros(3, 3)));
    }

    #[test]
    fn ad_of_torus_is_diagonal() {
        let g = build(&FamilySpec::RLambda { n: 3, lambda2: ParamValue::Symbolic }).unwrap();
        let reg = g.registry();
        let mut y = vec![Poly::zero(reg); 7];
        y[6] = Poly::one(reg);
        let m = ad_matrix(&g, &y).unwrap();
        let diag = ["1", "lambda2", "1 + lambda2", "2 + lambda2", "3 + lambda2", "3 + 2*lambda2", "0"];
        for (i, d) in diag.iter().enumerate() {
            assert_eq!(m[(i, i)], parse_poly(d, reg).unwrap());
        }
        let g1 = build(&FamilySpec::RLambda { n: 3, lambda2: ParamValue::int(1) }).unwrap();
        assert!(!is_nilpotent_matrix(&ad_matrix_rat(&g1, &unit(7, 6)).unwrap()));
    }

    #[test]
    fn derivations_of_heisenberg() {
        let g = build(&FamilySpec::Heisenberg { k: 1 }).unwrap();
        let ds = derivation_space(&g).unwrap();
        assert_eq!(ds.total_dim, 6);
        assert_eq!(ds.inner_dim, 2);
    }

    #[test]
    fn derivations_of_q() {
        for (m, total, outer) in [(3, 9, 4), (4, 12, 5)] {
            let ds = derivation_space(&q(m)).unwrap();
            assert_eq!(ds.total_dim, total);
            assert_eq!(ds.outer_dim(), outer);
            assert_eq!(derivation_profile_check(&ds, m).unwrap(), ProfileReport::Pass);
        }
    }

    #[test]
    fn augmented_space_mismatches() {
        let mut ds = derivation_space(&q(3)).unwrap();
        ds.basis.push(Matrix::identity(6));
        assert!(!derivation_profile_check(&ds, 3).unwrap().passed());
    }

    #[test]
    fn quadratic_form_of_i2() {
        let g = q(3);
        let f = quadratic_form_of(&g, &casimir_i2(3, g.registry()).unwrap()).unwrap();
        assert!(f.matrix.is_symmetric());
        assert_eq!(f.rank(), 5);
        let sq = quadratic_form_of(&g, &parse_poly("x6^2", g.registry()).unwrap()).unwrap();
        assert_eq!(sq.matrix.iter().filter(|x| !x.is_zero()).count(), 1);
        assert_eq!(sq.matrix[(5, 5)], int(1));
        let bad = parse_poly("x1*x6 + x2", g.registry()).unwrap();
        assert!(matches!(quadratic_form_of(&g, &bad), Err(Error::NotHomogeneous(2))));
    }

    #[test]
    fn quasi_classical_cases() {
        for n in [3, 4] {
            let k = build(&FamilySpec::KSub { n }).unwrap();
            let QuasiClassical::Certificate { form, metric } = quasi_classical_check(&k, 0).unwrap() else {
                panic!("k{n} refused");
            };
            assert_eq!(form.rank(), 2 * n - 1);
            assert!(is_associative_form(&k, &metric).unwrap());
            match quasi_classical_check(&q(n), 0).unwrap() {
                QuasiClassical::Refusal { reason } => assert_eq!(reason, ALL_DEGENERATE),
                _ => panic!("Q{} certified", 2 * n),
            }
        }
        let ab = build(&FamilySpec::Abelian { dim: 3 }).unwrap();
        assert!(quasi_classical_check(&ab, 0).unwrap().is_certificate());
        let r = build(&FamilySpec::RMax { n: 3 }).unwrap();
        match quasi_classical_check(&r, 0).unwrap() {
            QuasiClassical::Refusal { reason } => assert_eq!(reason, NO_QUADRATIC_INVARIANT),
            _ => panic!("r8 certified"),
        }
    }

    #[test]
    fn contraction_of_q_is_model_filiform() {
        for m in [3, 4] {
            let spec = contraction_spec_q_to_n(m).unwrap();
            let lim = contraction_limit(&q(m), &spec).unwrap();
            assert!(same_constants(&lim, &build(&FamilySpec::NN1 { dim: 2 * m }).unwrap()));
            assert!(!spec.at(&int(1)).unwrap().det().unwrap().is_zero());
        }
    }

    #[test]
    fn contraction_at_one_gives_transformed_brackets() {
        // At epsilon = 1 the new basis still closes with [X_k', X_{2n+1-k}'] = (-1)^k X_{2n}'.
        let g = q(3);
        let spec = contraction_spec_q_to_n(3).unwrap();
        let m = spec.at(&int(1)).unwrap();
        let p = m.inverse().unwrap();
        let new = |a: usize| m.column(a);
        let br = |a: usize, b: usize| p.mul_vec(&g.bracket_numeric(&new(a), &new(b)).unwrap()).unwrap();
        assert_eq!(br(1, 4), unit(6, 5));
        assert_eq!(br(2, 3), unit(6, 5).iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(br(0, 4), unit(6, 5));
    }

    #[test]
    fn identity_and_pole() {
        let g = q(3);
        assert!(same_constants(&contraction_limit(&g, &ContractionSpec::identity(6)).unwrap(), &g));
        let h = build(&FamilySpec::Heisenberg { k: 1 }).unwrap();
        // X3' = ε X3 makes [X1', X2'] = ε^{-1} X3'.
        let spec = ContractionSpec::diagonal(&[0, 0, 1]);
        assert!(matches!(contraction_limit(&h, &spec), Err(Error::Pole(_))));
        let spec = ContractionSpec::diagonal(&[1, 0, 0]);
        let lim = contraction_limit(&h, &spec).unwrap();
        assert!(same_constants(&lim, &build(&FamilySpec::Abelian { dim: 3 }).unwrap()));
    }

    #[test]
    fn same_constants_cases() {
        let a = build(&FamilySpec::A622).unwrap();
        assert!(same_constants(&a, &a));
        assert!(!same_constants(&a.graded_algebra().unwrap(), &a));
    }

    #[test]
    fn nil_independence() {
        let r = build(&FamilySpec::RMax { n: 3 }).unwrap();
        let grid: Vec<Vec<Rat>> = [(1, 0), (0, 1), (1, 1), (1, -1)]
            .iter()
            .map(|&(a, b)| vec![int(a), int(b)])
            .collect();
        let rep = nil_independence_check(&r, &[unit(8, 6), unit(8, 7)], &grid, 0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.certificate.len(), 8);
        assert!(!rep.certificate[0].is_zero());

        let g = q(3);
        let rep = nil_independence_check(&g, &[unit(6, 0)], &[vec![int(1)]], 0).unwrap();
        assert!(!rep.passed());
        assert!(rep.certificate.iter().all(Poly::is_zero));

        assert!(matches!(
            nil_independence_check(&g, &[unit(6, 0)], &[vec![int(0)]], 0),
            Err(Error::ZeroTuple)
        ));
    }

    #[test]
    fn nilradical_bound() {
        let r = build(&FamilySpec::RMax { n: 3 }).unwrap();
        assert_eq!(nilpotent_generator_span(&r).unwrap(), Some(6));
        assert_eq!(nilpotent_generator_span(&q(3)).unwrap(), Some(6));
    }
}
