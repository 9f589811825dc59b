//! JSON formats for algebras and generalized expressions.
//!
//! Coefficients, polynomials and exponents are strings in a small infix
//! grammar (integers, `/`, `+`, `-`, `*`, `^`, names) so values stay exact.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coadjoint::GenExpr;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::ring::{parse_poly, parse_ratfunc, RatFunc, VarKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub gen: String,
    pub coeff: String,
}

impl AlgebraFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Parse(format!("algebra file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let labels = g.labels();
        let brackets = g
            .nonzero_brackets()
            .map(|((i, j), terms)| BracketEntry {
                left: labels[i].clone(),
                right: labels[j].clone(),
                terms: terms
                    .iter()
                    .map(|(&k, c)| TermEntry {
                        gen: labels[k].clone(),
                        coeff: c.to_string(),
                    })
                    .collect(),
            })
            .collect();
        Self {
            dim: g.dim(),
            generators: labels.to_vec(),
            parameters: g.parameters(),
            brackets,
        }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        if self.generators.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: self.generators.len(),
            });
        }
        let mut b = LieAlgebra::builder(&self.generators, &self.parameters)?;
        let index = |name: &str| {
            self.generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::UnknownVariable(format!("generator {name}")))
        };
        let mut seen = BTreeSet::new();
        for br in &self.brackets {
            let (i, j) = (index(&br.left)?, index(&br.right)?);
            if i == j {
                return Err(Error::Parse(format!("bracket [{0}, {0}] listed", br.left)));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Parse(format!(
                    "bracket [{}, {}] listed twice",
                    br.left, br.right
                )));
            }
            for t in &br.terms {
                let k = index(&t.gen)?;
                let c = parse_poly(&t.coeff, b.registry())?;
                b.add(i, j, k, c)?;
            }
        }
        Ok(b.build())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprFile {
    #[serde(default)]
    pub bases: Vec<BaseEntry>,
    pub terms: Vec<ExprTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseEntry {
    pub name: String,
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprTerm {
    pub coeff: String,
    #[serde(default)]
    pub exponents: BTreeMap<String, String>,
    #[serde(default)]
    pub logs: BTreeMap<String, u32>,
}

impl ExprFile {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Parse(format!("expression file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Parses the expression in the coordinates and parameters of `g`.
    pub fn to_genexpr(&self, g: &LieAlgebra) -> Result<GenExpr> {
        let reg = g.registry();
        let mut names = Vec::with_capacity(self.bases.len());
        let mut bases = Vec::with_capacity(self.bases.len());
        for b in &self.bases {
            let p = parse_poly(&b.poly, reg)?;
            if p.uses_kind(VarKind::Parameter) {
                return Err(Error::Parse(format!("base {} depends on parameters", b.name)));
            }
            names.push(b.name.clone());
            bases.push(p);
        }
        let position = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownVariable(format!("base {name}")))
        };
        let mut e = GenExpr::new(reg, bases)?;
        for t in &self.terms {
            let coeff = parse_ratfunc(&t.coeff, reg)?;
            let mut exps = vec![RatFunc::zero(reg); names.len()];
            for (name, s) in &t.exponents {
                exps[position(name)?] = parse_ratfunc(s, reg)?;
            }
            let mut logs = vec![0; names.len()];
            for (name, &m) in &t.logs {
                logs[position(name)?] = m;
            }
            e.add_term(coeff, exps, logs)?;
        }
        Ok(e)
    }

    /// Serializes with bases named `B1, B2, ..`.
    pub fn from_genexpr(e: &GenExpr) -> Self {
        let names: Vec<String> = (1..=e.bases().len()).map(|i| format!("B{i}")).collect();
        let bases = names
            .iter()
            .zip(e.bases())
            .map(|(name, p)| BaseEntry {
                name: name.clone(),
                poly: p.to_string(),
            })
            .collect();
        let terms = e
            .terms()
            .iter()
            .map(|t| ExprTerm {
                coeff: ratfunc_string(&t.coeff),
                exponents: names
                    .iter()
                    .zip(&t.exponents)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(n, x)| (n.clone(), ratfunc_string(x)))
                    .collect(),
                logs: names
                    .iter()
                    .zip(&t.logs)
                    .filter(|(_, &m)| m > 0)
                    .map(|(n, &m)| (n.clone(), m))
                    .collect(),
            })
            .collect();
        Self { bases, terms }
    }
}

fn ratfunc_string(r: &RatFunc) -> String {
    if r.is_polynomial() {
        r.as_poly().expect("polynomial").to_string()
    } else {
        format!("({})/({})", r.numer(), r.denom())
    }
}
