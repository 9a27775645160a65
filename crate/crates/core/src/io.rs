//! JSON form of constructed star products.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coefficient::Coefficient;
use crate::cochain::{Cochain, CochainJson};
use crate::error::{Result, StarError};
use crate::jet::{JetPolynomial, JetTermJson};
use crate::poisson::{PoissonMode, PotentialSource};
use crate::poly::Polynomial;
use crate::star::{Gauge, ObstructionReport, StarProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    Symbolic,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionReportJson {
    pub k: usize,
    pub ar: CochainJson,
    pub coordinate_witness: Vec<JetTermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shortcut: Option<CochainJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shortcut_witness: Option<Vec<JetTermJson>>,
    pub parity_path: bool,
    pub is_zero: bool,
}

impl ObstructionReportJson {
    pub fn from_report<C: Coefficient>(r: &ObstructionReport<C>) -> Self {
        ObstructionReportJson {
            k: r.k,
            ar: r.ar.to_json(),
            coordinate_witness: r.coordinate_witness.to_json(),
            shortcut: r.shortcut.as_ref().map(Cochain::to_json),
            shortcut_witness: r.shortcut_witness.as_ref().map(Coefficient::to_json),
            parity_path: r.parity_path,
            is_zero: r.is_zero,
        }
    }

    pub fn to_report<C: Coefficient>(&self) -> Result<ObstructionReport<C>> {
        let ar = Cochain::from_json(&self.ar)?;
        if ar.is_zero() != self.is_zero {
            return Err(StarError::Serde(format!(
                "obstruction report at level {} disagrees with its isZero flag",
                self.k
            )));
        }
        Ok(ObstructionReport {
            k: self.k,
            ar,
            coordinate_witness: C::from_json(&self.coordinate_witness)?,
            shortcut: self.shortcut.as_ref().map(Cochain::from_json).transpose()?,
            shortcut_witness: self.shortcut_witness.as_deref().map(C::from_json).transpose()?,
            parity_path: self.parity_path,
            is_zero: self.is_zero,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StarProductJson {
    pub mode: String,
    pub order: usize,
    pub kind: CoefficientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    pub gauge: Gauge,
    pub levels: Vec<CochainJson>,
    #[serde(default)]
    pub obstruction_reports: Vec<ObstructionReportJson>,
}

impl<C: Coefficient> StarProduct<C> {
    pub fn to_json(&self) -> StarProductJson {
        let (kind, phi, psi) = match &self.source {
            PotentialSource::Symbolic => (CoefficientKind::Symbolic, None, None),
            PotentialSource::Explicit { phi, psi } => (
                CoefficientKind::Explicit,
                Some(phi.to_string()),
                psi.as_ref().map(Polynomial::to_string),
            ),
        };
        StarProductJson {
            mode: self.mode.to_string(),
            order: self.order(),
            kind,
            phi,
            psi,
            gauge: self.gauge,
            levels: self.levels.iter().map(Cochain::to_json).collect(),
            obstruction_reports: self.reports.iter().map(ObstructionReportJson::from_report).collect(),
        }
    }
}

/// A star product read back from JSON, in whichever coefficient ring it was built.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedStar {
    Symbolic(StarProduct<JetPolynomial>),
    Explicit(StarProduct<Polynomial>),
}

fn decode<C: Coefficient>(j: &StarProductJson, source: PotentialSource) -> Result<StarProduct<C>> {
    let mode: PoissonMode = j.mode.parse()?;
    if j.levels.len() != j.order + 1 {
        return Err(StarError::Serde(format!(
            "order {} needs {} levels, found {}",
            j.order,
            j.order + 1,
            j.levels.len()
        )));
    }
    let levels = j
        .levels
        .iter()
        .map(|l| {
            let c = Cochain::<C>::from_json(l)?;
            c.expect_arity(2)?;
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let reports = j
        .obstruction_reports
        .iter()
        .map(ObstructionReportJson::to_report)
        .collect::<Result<Vec<_>>>()?;
    Ok(StarProduct {
        mode,
        source,
        gauge: j.gauge,
        levels,
        reports,
    })
}

impl StarProductJson {
    pub fn decode(&self) -> Result<LoadedStar> {
        match self.kind {
            CoefficientKind::Symbolic => Ok(LoadedStar::Symbolic(decode(self, PotentialSource::Symbolic)?)),
            CoefficientKind::Explicit => {
                let phi = self
                    .phi
                    .as_deref()
                    .ok_or_else(|| StarError::Serde("explicit star product without phi".into()))?;
                let source = PotentialSource::Explicit {
                    phi: Polynomial::parse(phi)?,
                    psi: self.psi.as_deref().map(Polynomial::parse).transpose()?,
                };
                Ok(LoadedStar::Explicit(decode(self, source)?))
            }
        }
    }
}

pub fn to_string<C: Coefficient>(star: &StarProduct<C>) -> Result<String> {
    serde_json::to_string_pretty(&star.to_json()).map_err(|e| StarError::Serde(e.to_string()))
}

pub fn from_str(src: &str) -> Result<LoadedStar> {
    let j: StarProductJson = serde_json::from_str(src).map_err(|e| StarError::Serde(e.to_string()))?;
    j.decode()
}

pub fn load(path: &Path) -> Result<LoadedStar> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| StarError::Serde(format!("cannot read {}: {e}", path.display())))?;
    from_str(&src)
}

impl StarProduct<JetPolynomial> {
    /// Substitutes explicit potentials into every coefficient.
    pub fn specialize(&self, phi: &Polynomial, psi: Option<&Polynomial>) -> Result<StarProduct<Polynomial>> {
        let mut ev = crate::jet::JetEvaluator::new(phi.clone(), psi.cloned());
        let levels = self
            .levels
            .iter()
            .map(|l| l.map_coefficients(|c| ev.eval(c)))
            .collect::<Result<Vec<_>>>()?;
        let reports = self
            .reports
            .iter()
            .map(|r| {
                let ar = r.ar.map_coefficients(|c| ev.eval(c))?;
                Ok(ObstructionReport {
                    k: r.k,
                    is_zero: ar.is_zero(),
                    coordinate_witness: ev.eval(&r.coordinate_witness)?,
                    shortcut: r.shortcut.as_ref().map(|s| s.map_coefficients(|c| ev.eval(c))).transpose()?,
                    shortcut_witness: r.shortcut_witness.as_ref().map(|w| ev.eval(w)).transpose()?,
                    parity_path: r.parity_path,
                    ar,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StarProduct {
            mode: self.mode,
            source: PotentialSource::Explicit {
                phi: phi.clone(),
                psi: psi.cloned(),
            },
            gauge: self.gauge,
            levels,
            reports,
        })
    }
}
