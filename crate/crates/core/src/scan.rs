//! Scans over particle number: spectral widths and the square
//! roots of Σ₁₁ and Σ₂₂ for fixed irrep families.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::moments::{EnsembleSpec, Engine};
use crate::young::{casimir_su3, dim_u, partitions, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Quantity {
    Width,
    Sigma11,
    Sigma22,
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "WIDTH" => Ok(Self::Width),
            "SIGMA11" => Ok(Self::Sigma11),
            "SIGMA22" => Ok(Self::Sigma22),
            _ => invalid(format!("unknown quantity {s:?} (WIDTH, SIGMA11, SIGMA22)")),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Width => "WIDTH",
            Self::Sigma11 => "SIGMA11",
            Self::Sigma22 => "SIGMA22",
        })
    }
}

/// Rule mapping `m` to the irrep(s) scanned at that particle number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyRule {
    OneRow,
    TwoRow,
    ThreeRow,
    /// Every irrep with at most `min(r, 3)` rows and nonzero U(Ω) dimension.
    All,
}

impl FromStr for FamilyRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "ONE" | "ONE_ROW" => Ok(Self::OneRow),
            "TWO" | "TWO_ROW" => Ok(Self::TwoRow),
            "THREE" | "THREE_ROW" => Ok(Self::ThreeRow),
            "ALL" => Ok(Self::All),
            _ => invalid(format!("unknown family {s:?} (ONE, TWO, THREE, ALL)")),
        }
    }
}

impl FamilyRule {
    pub fn irreps(self, m: u32, omega: usize, r: u32) -> Vec<Partition> {
        let one = |v: Vec<u32>| vec![Partition::new(v).expect("valid partition")];
        match self {
            Self::OneRow => one(vec![m]),
            Self::TwoRow => one(vec![m.div_ceil(2), m / 2]),
            Self::ThreeRow => one(three_row(m)),
            Self::All => partitions(m, (r as usize).min(3))
                .into_iter()
                .filter(|f| dim_u(f, omega).map(|d| !d.is_zero()).unwrap_or(false))
                .collect(),
        }
    }
}

/// `{m/3,m/3,m/3}`, `{(m+2)/3,(m−1)/3,(m−1)/3}` or `{(m+4)/3,(m−2)/3,(m−2)/3}`
/// according to `m mod 3`.
pub fn three_row(m: u32) -> Vec<u32> {
    match m % 3 {
        0 => vec![m / 3; 3],
        1 => vec![m.div_ceil(3), (m - 1) / 3, (m - 1) / 3],
        _ => vec![(m + 4) / 3, (m - 2) / 3, (m - 2) / 3],
    }
}

#[derive(Debug, Clone)]
pub struct ScanPlan {
    pub quantity: Quantity,
    pub spec: EnsembleSpec,
    pub m_min: u32,
    pub m_max: u32,
    pub family: FamilyRule,
    /// Partner irrep for Σ scans; without one, Σ scans cover the `(m, m′)`
    /// grid of the family.
    pub partner: Option<Partition>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub m: u32,
    pub irrep: Partition,
    pub m_prime: Option<u32>,
    pub irrep_prime: Option<Partition>,
    pub casimir_su3: Option<i64>,
    /// `√h2` for widths, `√Σ` for correlations.
    pub value: Option<f64>,
    pub error: Option<String>,
}

fn sqrt_checked(x: f64) -> std::result::Result<f64, String> {
    if x < 0.0 {
        Err(format!("negative value {x} has no square root"))
    } else {
        Ok(x.sqrt())
    }
}

impl ScanPlan {
    pub fn validate(&self) -> Result<()> {
        if self.m_min < 1 || self.m_min > self.m_max {
            return invalid(format!("invalid m range {}..{}", self.m_min, self.m_max));
        }
        if self.quantity == Quantity::Width && self.partner.is_some() {
            return invalid("a partner irrep applies to SIGMA11/SIGMA22 only");
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(Partition, Option<Partition>)> {
        let (om, r) = (self.spec.omega, self.spec.r);
        let per_m = |m: u32| self.family.irreps(m, om, r);
        let ms = self.m_min..=self.m_max;
        match (self.quantity, &self.partner) {
            (Quantity::Width, _) => ms.flat_map(per_m).map(|f| (f, None)).collect(),
            (_, Some(g)) => ms.flat_map(per_m).map(|f| (f, Some(g.clone()))).collect(),
            (_, None) => {
                let all: Vec<Partition> = ms.flat_map(per_m).collect();
                let mut out = Vec::new();
                for f in &all {
                    for g in &all {
                        out.push((f.clone(), Some(g.clone())));
                    }
                }
                out
            }
        }
    }

    fn row(&self, engine: &Engine, f: &Partition, g: Option<&Partition>) -> ScanRow {
        let casimir = (self.spec.r == 3).then(|| casimir_su3(f).ok()).flatten();
        let value = (|| -> std::result::Result<f64, String> {
            let a = self.spec.state(f.clone()).map_err(|e| e.to_string())?;
            match (self.quantity, g) {
                (Quantity::Width, _) => {
                    sqrt_checked(engine.h2_average(&self.spec, &a).map_err(|e| e.to_string())?)
                }
                (q, Some(g)) => {
                    let b = self.spec.state(g.clone()).map_err(|e| e.to_string())?;
                    let s = if q == Quantity::Sigma11 {
                        engine.sigma11(&self.spec, &a, &b)
                    } else {
                        engine.sigma22(&self.spec, &a, &b)
                    };
                    sqrt_checked(s.map_err(|e| e.to_string())?)
                }
                (_, None) => Err("missing partner irrep".into()),
            }
        })();
        let (value, error) = match value {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e)),
        };
        ScanRow {
            m: f.boxes(),
            irrep: f.clone(),
            m_prime: g.map(Partition::boxes),
            irrep_prime: g.cloned(),
            casimir_su3: casimir,
            value,
            error,
        }
    }

    /// All rows, ordered by `m`, then by the partner's `m′`, then by irrep
    /// in reverse lexicographic order.
    pub fn run(&self) -> Result<Vec<ScanRow>> {
        self.validate()?;
        let engine = Engine::new();
        Ok(self
            .pairs()
            .par_iter()
            .map(|(f, g)| self.row(&engine, f, g.as_ref()))
            .collect())
    }

    fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["m", "irrep"];
        if self.quantity != Quantity::Width {
            h.extend(["m_prime", "irrep_prime"]);
        }
        if self.spec.r == 3 {
            h.push("casimir_su3");
        }
        h.extend(["value", "error"]);
        h
    }

    pub fn write_csv<W: Write>(&self, rows: &[ScanRow], out: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header()).map_err(io)?;
        for row in rows {
            let mut rec = vec![row.m.to_string(), row.irrep.to_string()];
            if self.quantity != Quantity::Width {
                rec.push(row.m_prime.map(|x| x.to_string()).unwrap_or_default());
                rec.push(row.irrep_prime.as_ref().map(|x| x.to_string()).unwrap_or_default());
            }
            if self.spec.r == 3 {
                rec.push(row.casimir_su3.map(|x| x.to_string()).unwrap_or_default());
            }
            rec.push(row.value.map(|x| x.to_string()).unwrap_or_default());
            rec.push(row.error.clone().unwrap_or_default());
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
        Ok(())
    }
}
