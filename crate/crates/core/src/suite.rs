//! Reproduction checks for the `Q_{2n}` families, grouped by claim.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::coadjoint::{
    apply_field, coadjoint_fields, commutator_matrix, is_invariant, num_invariants_bb, GenExpr,
};
use crate::error::{Error, Result};
use crate::exterior::{
    contact_check, contact_search, j0_of_algebra, num_invariants_rc, symplectic_check, ContactSearch,
};
use crate::families::{
    build, canonical_invariants, casimir_i2, contraction_spec_q_to_n, FamilySpec, ParamValue,
};
use crate::liealg::LieAlgebra;
use crate::ring::{rat, Poly, RankStrategy, Rat, RatFunc, RatSampler};
use crate::structure::{
    contraction_limit, derivation_profile_check, derivation_space, nilpotent_generator_span,
    quadratic_form_of, quasi_classical_check, same_constants, QuasiClassical, ALL_DEGENERATE,
};

/// One verdict of the suite.
#[derive(Debug, Clone)]
pub struct Check {
    pub group: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{:>2}] {verdict} {}: {}", self.group, self.name, self.detail)
    }
}

fn check(group: u8, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        group,
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn unit_coeffs(g: &LieAlgebra, idx: &[usize]) -> Vec<Poly> {
    let reg = g.registry();
    (0..g.dim())
        .map(|i| if idx.contains(&i) { Poly::one(reg) } else { Poly::zero(reg) })
        .collect()
}

fn up_to_sign(p: &Poly, q: &Poly) -> bool {
    p == q || *p == -q
}

/// Runs every check for each `n` (at least 3), plus the size-independent
/// fixtures once.
pub fn paper_suite(ns: &[usize], seed: u64) -> Result<Vec<Check>> {
    if let Some(&bad) = ns.iter().find(|&&n| n < 3) {
        return Err(Error::Constraint(format!("Q_(2m) requires m >= 3, got m = {bad}")));
    }
    let mut out = Vec::new();
    for &n in ns {
        out.push(invariant_count(n, seed)?);
        out.push(casimirs(n)?);
        out.push(derivations(n)?);
        out.extend(solvable_invariants(n)?);
        out.push(no_invariants(n)?);
        out.extend(contact_forms(n, seed)?);
        out.push(quasi_classical(n, seed)?);
        out.push(contraction(n)?);
        out.push(cross_formula(&size_n_algebras(n, seed)?, seed, &format!("n={n} families"))?);
        out.push(central_series(n)?);
    }
    out.extend(fixtures(seed)?);
    out.sort_by_key(|c| c.group);
    Ok(out)
}

fn invariant_count(n: usize, seed: u64) -> Result<Check> {
    let g = build(&FamilySpec::Q { m: n })?;
    let sym = num_invariants_bb(&g, RankStrategy::Symbolic)?;
    let rnd = num_invariants_bb(&g, RankStrategy::Random { seed, trials: 5 })?;
    let rc = num_invariants_rc(&g)?;
    let j0 = j0_of_algebra(&g)?;
    Ok(check(
        1,
        format!("Q{} invariant count", 2 * n),
        sym == 2 && rnd == 2 && rc == 2 && j0 == n - 1,
        format!("N_bb={sym} (random {rnd}) N_rc={rc} j0={j0}"),
    ))
}

fn casimirs(n: usize) -> Result<Check> {
    let g = build(&FamilySpec::Q { m: n })?;
    let reg = g.registry();
    let i1 = Poly::var(reg, 2 * n - 1)?;
    let i2 = casimir_i2(n, reg)?;
    let e2 = GenExpr::from_poly(&i2);
    let agree = coadjoint_fields(&g).iter().all(|f| {
        let plain = f.apply_poly(&i2);
        apply_field(f, &e2).to_poly().is_some_and(|p| p == plain)
    });
    let inv1 = is_invariant(&g, &GenExpr::from_poly(&i1)).passed();
    let inv2 = is_invariant(&g, &e2).passed();
    Ok(check(
        2,
        format!("Q{} Casimirs", 2 * n),
        inv1 && inv2 && agree,
        format!("I1 {inv1}, I2 = {i2} {inv2}, plain expansion agrees {agree}"),
    ))
}

fn derivations(n: usize) -> Result<Check> {
    let g = build(&FamilySpec::Q { m: n })?;
    let ds = derivation_space(&g)?;
    let profile = derivation_profile_check(&ds, n)?;
    Ok(check(
        3,
        format!("Der(Q{})", 2 * n),
        ds.total_dim == 3 * n && ds.outer_dim() == n + 1 && profile.passed(),
        format!(
            "dim {} (expected {}), outer {} (expected {}), profile {}",
            ds.total_dim,
            3 * n,
            ds.outer_dim(),
            n + 1,
            if profile.passed() { "ok" } else { "mismatch" }
        ),
    ))
}

fn single_invariant(spec: &FamilySpec) -> Result<(LieAlgebra, GenExpr, bool, usize)> {
    let g = build(spec)?;
    let inv = canonical_invariants(spec, &g)?;
    let e = inv.exprs.into_iter().next().ok_or_else(|| Error::Constraint(format!("{spec}: no invariant")))?;
    let ok = is_invariant(&g, &e).passed();
    let count = num_invariants_bb(&g, RankStrategy::Symbolic)?;
    Ok((g, e, ok, count))
}

fn solvable_invariants(n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let dim = 2 * n + 1;

    let spec = FamilySpec::RLambda { n, lambda2: ParamValue::Symbolic };
    let (_, e, ok, count) = single_invariant(&spec)?;
    out.push(check(4, format!("r{dim}(lambda2) invariant"), ok && count == 1, format!("J = {e}, N_bb={count}")));

    for (label, lambda) in [("x{2n}", rat(3 - 2 * n as i64, 2)), ("I2", rat(1 - n as i64, 1))] {
        let spec = FamilySpec::RLambda { n, lambda2: ParamValue::Value(lambda.clone()) };
        let (g, e, ok, count) = single_invariant(&spec)?;
        let expected = if label == "I2" {
            casimir_i2(n, g.registry())?
        } else {
            Poly::var(g.registry(), 2 * n - 1)?
        };
        let shape = e.to_poly().is_some_and(|p| p == expected);
        out.push(check(
            4,
            format!("r{dim}(lambda2={lambda}) invariant"),
            ok && shape && count == 1,
            format!("J = {e}, N_bb={count}"),
        ));
    }
    let spec = FamilySpec::RLambda { n, lambda2: ParamValue::Value(rat(2 - n as i64, 1)) };
    let g = build(&spec)?;
    let i2_at_2mn = is_invariant(&g, &GenExpr::from_poly(&casimir_i2(n, g.registry())?)).passed();
    out.push(check(
        4,
        format!("r{dim}(lambda2={}) has no polynomial I2", 2 - n as i64),
        !i2_at_2mn,
        format!("I2 invariant: {i2_at_2mn}"),
    ));

    let spec = FamilySpec::REps { n, eps: ParamValue::Symbolic };
    let (g, e, ok, count) = single_invariant(&spec)?;
    let reg = g.registry();
    let y = &coadjoint_fields(&g)[2 * n];
    let eps = GenExpr::from_poly(&Poly::named(reg, "eps")?);
    let one = GenExpr::from_poly(&Poly::one(reg));
    let i2 = casimir_i2(n, reg)?;
    let x = Poly::var(reg, 2 * n - 1)?;
    let mut scaled = GenExpr::new(reg, vec![i2, x.clone()])?;
    scaled.add_term(
        RatFunc::one(reg),
        vec![RatFunc::one(reg), RatFunc::constant(reg, rat(-2, 1))],
        vec![],
    )?;
    let mut log = GenExpr::new(reg, vec![x])?;
    log.add_log(RatFunc::one(reg), 0, 1)?;
    let a = apply_field(y, &scaled);
    let b = apply_field(y, &log);
    let sign_a = if a.sub(&eps).is_zero() { 1 } else if a.add(&eps).is_zero() { -1 } else { 0 };
    let sign_b = if b.sub(&one).is_zero() { 1 } else if b.add(&one).is_zero() { -1 } else { 0 };
    out.push(check(
        4,
        format!("r{dim}({}, eps) invariant", 2 - n as i64),
        ok && count == 1 && sign_a != 0 && sign_a == sign_b,
        format!("J = {e}, N_bb={count}, Y(I2 x^-2) = {sign_a}*eps, Y(ln x) = {sign_b}"),
    ));

    let spec = FamilySpec::tail_symbolic(n);
    let (_, e, ok, count) = single_invariant(&spec)?;
    out.push(check(4, format!("r{dim}(tail) invariant"), ok && count == 1, format!("J = {e}, N_bb={count}")));
    Ok(out)
}

fn no_invariants(n: usize) -> Result<Check> {
    let g = build(&FamilySpec::RMax { n })?;
    let bb = num_invariants_bb(&g, RankStrategy::Symbolic)?;
    let rc = num_invariants_rc(&g)?;
    let v = symplectic_check(&g, &unit_coeffs(&g, &[0, 2 * n - 1]))?
        .as_constant()
        .unwrap_or_else(Rat::zero);
    let stated = Rat::from_integer((2 * n as i64 * factorial(n)).into());
    Ok(check(
        5,
        format!("r{} has no invariants", 2 * n + 2),
        bb == 0 && rc == 0 && v.abs() == stated,
        format!("N_bb={bb} N_rc={rc}, top power of dw1+dw{} = {v} (stated magnitude {stated})", 2 * n),
    ))
}

fn contact_forms(n: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let dim = 2 * n + 1;
    let omega = [0, 2 * n - 1];

    let g = build(&FamilySpec::RLambda { n, lambda2: ParamValue::Symbolic })?;
    let v = contact_check(&g, &unit_coeffs(&g, &omega))?;
    let reg = v.registry().clone();
    let l = Poly::named(&reg, "lambda2")?;
    let c = 2 * n as i64 * factorial(n - 1);
    let want = &l.scale(&Rat::from_integer(c.into())) + &Poly::from_int(&reg, c * (n as i64 - 2));
    out.push(check(6, format!("r{dim}(lambda2) contact coefficient"), up_to_sign(&v, &want), format!("{v}")));

    let g = build(&FamilySpec::REps { n, eps: ParamValue::Symbolic })?;
    let v = contact_check(&g, &unit_coeffs(&g, &omega))?;
    let want = Poly::named(v.registry(), "eps")?.scale(&Rat::from_integer(factorial(n).into()));
    out.push(check(6, format!("r{dim}({}, eps) contact coefficient", 2 - n as i64), up_to_sign(&v, &want), format!("{v}")));

    let g = build(&FamilySpec::tail_symbolic(n))?;
    let v = contact_check(&g, &unit_coeffs(&g, &omega))?;
    let want = Poly::from_int(v.registry(), 2 * factorial(n));
    out.push(check(6, format!("r{dim}(tail) contact coefficient"), up_to_sign(&v, &want), format!("{v}")));

    let none = build(&FamilySpec::REps { n, eps: ParamValue::int(0) })?;
    let res = contact_search(&none, seed)?;
    out.push(check(
        6,
        format!("r{dim}({}, 0) has no contact form", 2 - n as i64),
        matches!(res, ContactSearch::NoneExists),
        describe_search(&res),
    ));
    let mut tail = vec![ParamValue::int(0); n - 2];
    tail[0] = ParamValue::int(1);
    for spec in [
        FamilySpec::RLambda { n, lambda2: ParamValue::int(1) },
        FamilySpec::REps { n, eps: ParamValue::int(1) },
        FamilySpec::RTail { n, tail },
    ] {
        let res = contact_search(&build(&spec)?, seed)?;
        out.push(check(6, format!("{spec} contact search"), res.found(), describe_search(&res)));
    }
    Ok(out)
}

fn describe_search(r: &ContactSearch) -> String {
    match r {
        ContactSearch::NoneExists => "volume coefficient vanishes identically".into(),
        ContactSearch::Witness { coeffs, volume } => {
            let c: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
            format!("witness ({}) with volume {volume}", c.join(","))
        }
    }
}

fn quasi_classical(n: usize, seed: u64) -> Result<Check> {
    let k = build(&FamilySpec::KSub { n })?;
    let (k_ok, k_detail) = match quasi_classical_check(&k, seed)? {
        QuasiClassical::Certificate { form, .. } => (
            form.matrix.is_symmetric() && form.is_nondegenerate(),
            format!("k{n} certified (rank {})", form.rank()),
        ),
        QuasiClassical::Refusal { reason } => (false, format!("k{n} refused: {reason}")),
    };
    let q = build(&FamilySpec::Q { m: n })?;
    let rank = quadratic_form_of(&q, &casimir_i2(n, q.registry())?)?.rank();
    let (q_ok, q_detail) = match quasi_classical_check(&q, seed)? {
        QuasiClassical::Refusal { reason } => (reason == ALL_DEGENERATE, format!("Q{} refused: {reason}", 2 * n)),
        QuasiClassical::Certificate { .. } => (false, format!("Q{} certified", 2 * n)),
    };
    Ok(check(
        7,
        format!("quasi-classical k{n} / Q{}", 2 * n),
        k_ok && q_ok && rank == 2 * n - 1,
        format!("{k_detail}; {q_detail}; I2 rank {rank}"),
    ))
}

fn contraction(n: usize) -> Result<Check> {
    let q = build(&FamilySpec::Q { m: n })?;
    let lim = contraction_limit(&q, &contraction_spec_q_to_n(n)?)?;
    let ok = same_constants(&lim, &build(&FamilySpec::NN1 { dim: 2 * n })?);
    Ok(check(8, format!("Q{} contracts to n({},1)", 2 * n, 2 * n), ok, format!("limit: {lim}")))
}

fn central_series(n: usize) -> Result<Check> {
    let g = build(&FamilySpec::Q { m: n })?;
    let cds = g.lower_central_series()?;
    let expected: Vec<usize> = std::iter::once(2 * n).chain((0..=(2 * n - 2)).rev()).collect();
    Ok(check(10, format!("CDS(Q{})", 2 * n), cds.dims() == expected.as_slice(), format!("{cds}")))
}

/// Every family at size `n`, parametric ones at three seeded points.
pub fn size_n_algebras(n: usize, seed: u64) -> Result<Vec<(String, LieAlgebra)>> {
    let mut sampler = RatSampler::new(seed);
    let mut specs = vec![
        FamilySpec::Q { m: n },
        FamilySpec::NN1 { dim: 2 * n },
        FamilySpec::RMax { n },
        FamilySpec::KSub { n },
    ];
    for _ in 0..3 {
        specs.push(FamilySpec::RLambda { n, lambda2: ParamValue::Value(sampler.next_signed()) });
        specs.push(FamilySpec::REps { n, eps: ParamValue::Value(sampler.next_signed()) });
        specs.push(FamilySpec::RTail {
            n,
            tail: (0..n - 2).map(|_| ParamValue::Value(sampler.next_signed())).collect(),
        });
    }
    specs
        .iter()
        .map(|s| Ok((s.to_string(), build(s)?)))
        .collect()
}

/// Size-independent fixtures.
pub fn fixture_algebras() -> Result<Vec<(String, LieAlgebra)>> {
    [
        FamilySpec::Abelian { dim: 5 },
        FamilySpec::Heisenberg { k: 1 },
        FamilySpec::Heisenberg { k: 2 },
        FamilySpec::A622,
    ]
    .iter()
    .map(|s| Ok((s.to_string(), build(s)?)))
    .collect()
}

/// Both invariant-count formulas, symbolic vs random rank, even rank,
/// Jacobi, and the nilradical dimension bound for solvable algebras.
pub fn cross_formula(algebras: &[(String, LieAlgebra)], seed: u64, label: &str) -> Result<Check> {
    let mut failures = Vec::new();
    for (name, g) in algebras {
        let a = commutator_matrix(g);
        let sym = a.bareiss_rank();
        let rnd = a.random_rank(seed, 5)?;
        let bb = g.dim() - sym;
        let rc = num_invariants_rc(g)?;
        if sym != rnd || sym % 2 == 1 || bb != rc || !g.jacobi_check().passed() {
            failures.push(format!("{name}: rank {sym}/{rnd}, N_bb={bb}, N_rc={rc}"));
        }
        if g.is_solvable()? && !g.is_nilpotent()? {
            match nilpotent_generator_span(g)? {
                Some(d) if 2 * d >= g.dim() => {}
                other => failures.push(format!("{name}: nilradical span {other:?}")),
            }
        }
    }
    Ok(check(
        9,
        format!("cross-formula {label}"),
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} algebras consistent", algebras.len())
        } else {
            failures.join("; ")
        },
    ))
}

fn fixtures(seed: u64) -> Result<Vec<Check>> {
    let a = build(&FamilySpec::A622)?;
    let gr = a.graded_algebra()?;
    let mut b = LieAlgebra::builder_numbered(6);
    for (i, j, k) in [(2, 6, 1), (3, 4, 1), (3, 5, 2), (4, 5, 3), (5, 6, 4)] {
        b.add_int(i - 1, j - 1, k - 1, 1)?;
    }
    let listed = b.build();
    let graded_ok = same_constants(&gr, &listed) && !same_constants(&gr, &a);
    let ds = a.derived_series()?;
    let cds = a.lower_central_series()?;
    Ok(vec![
        check(8, "gr(A6,22) brackets", graded_ok, format!("gr = {gr}")),
        cross_formula(&fixture_algebras()?, seed, "fixtures")?,
        check(
            10,
            "A6,22 series",
            ds.dims() == [6, 4, 1, 0] && cds.dims() == [6, 4, 3, 2, 1, 0],
            format!("DS={ds} CDS={cds}"),
        ),
    ])
}
