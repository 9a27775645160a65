//! Evaluation-based checks of a star product with explicit coefficients.
//!
//! Test arguments are monomials. The exhaustive set holds every triple of
//! total degree at most the bound. The targeted set holds, for each slot
//! pair `(I, J)` present in some level, the triples `(x^A, x^B, x^J)` with
//! `A + B = I` and `(x^I, x^B, x^C)` with `B + C = J`. A nonzero term of
//! `δ` of a single bidifferential term always has slots of that shape, so
//! any change of one coefficient that breaks associativity shows up there.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::jacobi::PoissonVector;
use crate::cochain::{Cochain, Slots};
use crate::error::Result;
use crate::multi_index::MultiIndex;
use crate::poly::Polynomial;
use crate::rational::int;

/// `x^I`.
pub fn monomial_of(index: &MultiIndex) -> Polynomial {
    let c = index.counts();
    Polynomial::monomial([c[0] as u32, c[1] as u32, c[2] as u32], int(1))
}

/// Coefficients of `ν^0 … ν^upto` in `f ⋆ g`.
pub fn star_apply(levels: &[Cochain<Polynomial>], f: &Polynomial, g: &Polynomial, upto: usize) -> Result<Vec<Polynomial>> {
    levels
        .iter()
        .take(upto + 1)
        .map(|m| m.eval(&[f.clone(), g.clone()]))
        .collect()
}

fn star_series(levels: &[Cochain<Polynomial>], f: &[Polynomial], g: &Polynomial, upto: usize, left: bool) -> Result<Vec<Polynomial>> {
    let mut out = vec![Polynomial::zero(); upto + 1];
    for (b, fb) in f.iter().enumerate() {
        for a in 0..=(upto - b) {
            let args = if left { [fb.clone(), g.clone()] } else { [g.clone(), fb.clone()] };
            out[a + b] = &out[a + b] + &levels[a].eval(&args)?;
        }
    }
    Ok(out)
}

/// Coefficients of `ν^0 … ν^order` in `(f⋆g)⋆h − f⋆(g⋆h)`.
pub fn associator(
    levels: &[Cochain<Polynomial>],
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    order: usize,
) -> Result<Vec<Polynomial>> {
    let order = order.min(levels.len() - 1);
    let fg = star_apply(levels, f, g, order)?;
    let gh = star_apply(levels, g, h, order)?;
    let left = star_series(levels, &fg, h, order, true)?;
    let right = star_series(levels, &gh, f, order, false)?;
    Ok(left.iter().zip(&right).map(|(l, r)| l - r).collect())
}

/// Coefficients of `ν^0 … ν^N` in `f⋆g − g⋆f`.
pub fn commutator_probe(levels: &[Cochain<Polynomial>], f: &Polynomial, g: &Polynomial) -> Result<Vec<Polynomial>> {
    let n = levels.len() - 1;
    let fg = star_apply(levels, f, g, n)?;
    let gf = star_apply(levels, g, f, n)?;
    Ok(fg.iter().zip(&gf).map(|(a, b)| a - b).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    #[serde(rename = "inputsDigest")]
    pub inputs_digest: String,
    /// `"0"` or the first nonzero residual found.
    pub residual: String,
    pub pass: bool,
    /// Arguments of the first failure in canonical order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    /// Power of `ν` at which the failure occurs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub cases: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub degree: u32,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Bound on the total degree of exhaustive test arguments.
    pub degree: u32,
    /// Add the targeted triples derived from the slot pairs of every level.
    pub targeted: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            degree: 3,
            targeted: true,
        }
    }
}

fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

fn levels_digest(levels: &[Cochain<Polynomial>]) -> String {
    let json: Vec<_> = levels.iter().map(|l| l.to_json()).collect();
    digest(&[&serde_json::to_string(&json).unwrap_or_default()])
}

fn monomials_by_degree(max: u32) -> Vec<(u32, Polynomial)> {
    Polynomial::monomials_up_to(max)
        .into_iter()
        .map(|m| (m.degree().unwrap_or(0), m))
        .collect()
}

fn exhaustive_pairs(max: u32) -> Vec<[Polynomial; 2]> {
    let ms = monomials_by_degree(max);
    let mut out = Vec::new();
    for (da, a) in &ms {
        for (db, b) in &ms {
            if da + db <= max {
                out.push([a.clone(), b.clone()]);
            }
        }
    }
    out
}

fn exhaustive_triples(max: u32) -> Vec<[Polynomial; 3]> {
    let ms = monomials_by_degree(max);
    let mut out = Vec::new();
    for (da, a) in &ms {
        for (db, b) in &ms {
            if da + db > max {
                continue;
            }
            for (dc, c) in &ms {
                if da + db + dc <= max {
                    out.push([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    out
}

fn slot_pairs(levels: &[Cochain<Polynomial>]) -> BTreeSet<Slots> {
    levels.iter().flat_map(|l| l.terms().map(|(s, _)| s.clone())).collect()
}

fn targeted_pairs(levels: &[Cochain<Polynomial>]) -> Vec<[Polynomial; 2]> {
    slot_pairs(levels)
        .into_iter()
        .map(|s| [monomial_of(&s[0]), monomial_of(&s[1])])
        .collect()
}

fn targeted_triples(levels: &[Cochain<Polynomial>]) -> Vec<[Polynomial; 3]> {
    let mut set: BTreeSet<[MultiIndex; 3]> = BTreeSet::new();
    for s in slot_pairs(levels) {
        let (i, j) = (s[0], s[1]);
        for a in i.sub_indices() {
            let b = i.checked_sub(&a).expect("sub-index");
            set.insert([a, b, j]);
        }
        for b in j.sub_indices() {
            let c = j.checked_sub(&b).expect("sub-index");
            set.insert([i, b, c]);
        }
    }
    set.into_iter()
        .map(|t| [monomial_of(&t[0]), monomial_of(&t[1]), monomial_of(&t[2])])
        .collect()
}

struct Failure {
    witness: Vec<String>,
    order: Option<usize>,
    residual: Polynomial,
}

fn first_failure<const A: usize>(
    cases: &[[Polynomial; A]],
    check: impl Fn(&[Polynomial; A]) -> Result<Option<(Option<usize>, Polynomial)>> + Sync,
) -> Result<Option<Failure>> {
    let found = cases
        .par_iter()
        .map(|c| check(c).map(|r| r.map(|(order, residual)| (c, order, residual))))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(None)) => Ok(None),
        Some(Ok(Some((c, order, residual)))) => Ok(Some(Failure {
            witness: c.iter().map(|p| p.to_string()).collect(),
            order,
            residual,
        })),
    }
}

fn report(name: &str, digest: String, cases: usize, failure: Option<Failure>) -> CheckReport {
    match failure {
        None => CheckReport {
            name: name.into(),
            inputs_digest: digest,
            residual: "0".into(),
            pass: true,
            witness: None,
            order: None,
            cases,
        },
        Some(f) => CheckReport {
            name: name.into(),
            inputs_digest: digest,
            residual: f.residual.to_string(),
            pass: false,
            witness: Some(f.witness),
            order: f.order,
            cases,
        },
    }
}

fn first_nonzero(series: Vec<Polynomial>) -> Option<(Option<usize>, Polynomial)> {
    series
        .into_iter()
        .enumerate()
        .find(|(_, p)| !p.is_zero())
        .map(|(k, p)| (Some(k), p))
}

/// Runs every check on `levels = [M_0 … M_N]`. With `vector`, the first
/// order is compared against the Poisson bracket.
pub fn verify_levels(
    levels: &[Cochain<Polynomial>],
    vector: Option<&PoissonVector>,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let n = levels.len().saturating_sub(1);
    let base = levels_digest(levels);
    let deg = options.degree.to_string();
    let dig = |name: &str| digest(&[name, &base, &deg]);
    let mut checks = Vec::new();

    let mut pairs = exhaustive_pairs(options.degree);
    let mut triples = exhaustive_triples(options.degree);
    if options.targeted {
        pairs.extend(targeted_pairs(levels));
        triples.extend(targeted_triples(levels));
    }

    let f = match levels.first() {
        Some(m0) => first_failure(&pairs, |[a, b]| {
            let d = &m0.eval(&[a.clone(), b.clone()])? - &(a * b);
            Ok((!d.is_zero()).then_some((Some(0), d)))
        })?,
        None => Some(Failure {
            witness: Vec::new(),
            order: Some(0),
            residual: Polynomial::zero(),
        }),
    };
    checks.push(report("m0-multiplication", dig("m0-multiplication"), pairs.len(), f));

    let f = first_failure(&pairs, |[a, b]| {
        for (k, m) in levels.iter().enumerate().skip(1) {
            let s = if k % 2 == 0 { int(1) } else { int(-1) };
            let d = &m.eval(&[a.clone(), b.clone()])? - &m.eval(&[b.clone(), a.clone()])?.scale(&s);
            if !d.is_zero() {
                return Ok(Some((Some(k), d)));
            }
        }
        Ok(None)
    })?;
    checks.push(report("parity", dig("parity"), pairs.len(), f));

    let mut bad = None;
    for (k, m) in levels.iter().enumerate().skip(1) {
        if let Some((s, _)) = m.terms().find(|(s, _)| s.iter().any(|i| i.is_empty())) {
            bad = Some(Failure {
                witness: s.iter().map(|i| monomial_of(i).to_string()).collect(),
                order: Some(k),
                residual: m.eval(&[monomial_of(&s[0]), monomial_of(&s[1])])?,
            });
            break;
        }
    }
    checks.push(report("vanishing-on-constants", dig("vanishing-on-constants"), n, bad));

    let mut bad = None;
    for (k, m) in levels.iter().enumerate().skip(2) {
        if let Some((s, _)) = m.terms().find(|(s, _)| s[0].len() + s[1].len() < 3) {
            bad = Some(Failure {
                witness: s.iter().map(|i| monomial_of(i).to_string()).collect(),
                order: Some(k),
                residual: m.eval(&[monomial_of(&s[0]), monomial_of(&s[1])])?,
            });
            break;
        }
    }
    checks.push(report("total-degree", dig("total-degree"), n.saturating_sub(1), bad));

    if let (Some(v), Some(m1)) = (vector, levels.get(1)) {
        let f = first_failure(&pairs, |[a, b]| {
            let d = &m1.eval(&[a.clone(), b.clone()])?.scale(&int(2)) - &v.bracket(a, b);
            Ok((!d.is_zero()).then_some((Some(1), d)))
        })?;
        checks.push(report("m1-bracket", dig("m1-bracket"), pairs.len(), f));
    }

    let f = first_failure(&triples, |[a, b, c]| Ok(first_nonzero(associator(levels, a, b, c, n)?)))?;
    checks.push(report("associator", dig("associator"), triples.len(), f));

    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        pass,
        degree: options.degree,
        checks,
    })
}
