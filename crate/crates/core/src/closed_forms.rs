//! Closed-form moments for the irrep families that admit them: one-row
//! irreps at r = 1, two-row irreps at r = 2, and the `{r,r,r}`,
//! `{r+1,r,r}`, `{r+2,r,r}` families at r = 3.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::racah_tables::y_surd;
use crate::young::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    R1Symmetric,
    R2TwoRow,
    R3Rrr,
    R3Rp1rr,
    R3Rp2rr,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::R1Symmetric => "R1_SYMMETRIC",
            Family::R2TwoRow => "R2_TWOROW",
            Family::R3Rrr => "R3_RRR",
            Family::R3Rp1rr => "R3_RP1RR",
            Family::R3Rp2rr => "R3_RP2RR",
        })
    }
}

/// How single `P` factors enter the two-row `Q^ν` and `R¹` expressions.
///
/// `AsPrinted` uses the signed `P`; `PMagnitude` uses `|P| = −P`, which is
/// the reading that agrees with the generic engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignConvention {
    AsPrinted,
    #[default]
    PMagnitude,
}

/// Named closed-form values: `p_sym`, `p_anti`, `q_sym_{ν}`, `q_anti_{ν}`, `r_0`, `r_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormResult {
    pub family: Family,
    pub sign_convention: SignConvention,
    pub values: BTreeMap<String, f64>,
}

impl ClosedFormResult {
    fn build(family: Family, sign_convention: SignConvention, v: &[(&str, f64)]) -> Self {
        Self {
            family,
            sign_convention,
            values: v.iter().map(|(k, x)| (k.to_string(), *x)).collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

/// Keys in the canonical order used by reports.
pub const VALUE_KEYS: [&str; 10] = [
    "p_sym", "p_anti", "q_sym_0", "q_sym_1", "q_sym_2", "q_anti_0", "q_anti_1", "q_anti_2", "r_0", "r_1",
];

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `⟨H²⟩` of `{m}` at r = 1: `λ²·C(m,2)·C(Ω+m−1,2)`.
pub fn r1_h2(omega: usize, m: u32, var: f64) -> f64 {
    let (o, m) = (omega as f64, m as f64);
    var * m * (m - 1.0) / 2.0 * (o + m - 1.0) * (o + m - 2.0) / 2.0
}

/// `Λ^ν(Ω,m,k) = C(m−ν, k)·C(Ω+m+ν−1, k)`.
pub fn lambda_nu(omega: usize, m: u32, k: u32, nu: u32) -> BigUint {
    if nu > m {
        return BigUint::zero();
    }
    let (o, m, k, nu) = (omega as u64, m as u64, k as u64, nu as u64);
    binom(m - nu, k) * binom(o + m + nu - 1, k)
}

/// Σ₁₁ between `{m}` and `{m′}` at r = 1.
pub fn r1_sigma11(omega: usize, m: u32, mp: u32) -> f64 {
    let (o, m, mp) = (omega as f64, m as f64, mp as f64);
    2.0 * (m * (m - 1.0) * mp * (mp - 1.0)).sqrt()
        / (o * (o + 1.0) * ((o + m - 1.0) * (o + m - 2.0) * (o + mp - 1.0) * (o + mp - 2.0)).sqrt())
}

/// Σ₂₂ between `{m}` and `{m′}` at r = 1, evaluated exactly.
pub fn r1_sigma22_exact(omega: usize, m: u32, mp: u32) -> BigRational {
    let o = omega as u64;
    let (m, mp) = (m as u64, mp as u64);
    let ob = BigUint::from(o);
    let big = |x: u64| BigUint::from(x);
    let c3 = binom(o + 2, 3);
    let den = big(36) * &c3 * &c3 * big(o + 3) * binom(o + m - 1, 2) * binom(o + mp - 1, 2);
    let t1 = big(4) * &ob * &ob * big(o - 1) * binom(o + m + 1, 2) * binom(o + mp + 1, 2);
    let t2 = big(4) * big(o + 2) * big(o + 2) * big(o + 3) * binom(m, 2) * binom(mp, 2);
    let t3 = big(4) * big(o * o - 1) * big(o + 3) * big(m - 1) * big(o + m) * big(mp - 1) * big(o + mp);
    ratio(big(2) * (t1 + t2 + t3), den)
}

pub fn r1_sigma22(omega: usize, m: u32, mp: u32) -> f64 {
    f(&r1_sigma22_exact(omega, m, mp))
}

/// Σ₂₂ of `{m}` with itself in the `Λ^ν` form, evaluated exactly.
pub fn r1_sigma22_self_exact(omega: usize, m: u32) -> BigRational {
    let o = omega as u64;
    let omega_m = binom(o + m as u64 - 1, m as u64);
    let l0 = lambda_nu(omega, m, 2, 0);
    let dims = [BigUint::one(), BigUint::from(o * o - 1), BigUint::from(o * o * (o + 3) * (o - 1) / 4)];
    let mut s = BigRational::zero();
    for nu in 0..=2u32 {
        let l = lambda_nu(omega, m, m - 2, nu);
        s += ratio(&l * &l * &dims[nu as usize], &l0 * &l0);
    }
    s * ratio(BigUint::from(2u32), &omega_m * &omega_m)
}

pub fn r1_sigma22_self(omega: usize, m: u32) -> f64 {
    f(&r1_sigma22_self_exact(omega, m))
}

/// Large-m limits `(Σ₁₁, Σ₂₂)` of the one-row correlations at fixed Ω.
pub fn r1_limits(omega: usize) -> (f64, f64) {
    let o = omega as f64;
    let s11 = 2.0 / (o * (o + 1.0));
    let num = o * o * (o - 1.0) + (o + 2.0).powi(2) * (o + 3.0) + 4.0 * (o * o - 1.0) * (o + 3.0);
    let s22 = 8.0 * num / (o * o * (o + 1.0).powi(2) * (o + 2.0).powi(2) * (o + 3.0));
    (s11, s22)
}

/// P, Q and R for `{m}` at r = 1.
pub fn r1_moments(omega: usize, m: u32) -> Result<ClosedFormResult> {
    if m < 2 {
        return invalid("one-row closed forms need m >= 2");
    }
    let (o, mf) = (omega as f64, m as f64);
    let q0 = mf * mf * (mf - 1.0) * (mf - 1.0) / 4.0;
    let q1 = q0 * 2.0 * (o + mf) * (o * o - 1.0) / (mf * (o + 2.0));
    let q2 = q0 * o * o * (o - 1.0) * (o + mf) * (o + mf + 1.0) / (2.0 * (o + 2.0) * mf * (mf - 1.0));
    Ok(ClosedFormResult::build(
        Family::R1Symmetric,
        SignConvention::default(),
        &[
            ("p_sym", -mf * (mf - 1.0) / 2.0),
            ("p_anti", 0.0),
            ("q_sym_0", q0),
            ("q_sym_1", q1),
            ("q_sym_2", q2),
            ("q_anti_0", 0.0),
            ("q_anti_1", 0.0),
            ("q_anti_2", 0.0),
            ("r_0", 0.0),
            ("r_1", 0.0),
        ],
    ))
}

/// Two-row `{m/2+F, m/2−F}` moments at r = 2; `two_f = 2F`.
pub fn r2_moments(omega: usize, m: u32, two_f: u32, conv: SignConvention) -> Result<ClosedFormResult> {
    if two_f > m || !(m - two_f).is_multiple_of(2) {
        return invalid(format!("(m={m}, 2F={two_f}) does not define a two-row irrep"));
    }
    let o = omega as f64;
    let mf = m as f64;
    let ff = two_f as f64 / 2.0;
    let c = ff * (ff + 1.0);
    let ps = -(3.0 * mf * (mf - 2.0) + 4.0 * c) / 8.0;
    let pa = -(mf * (mf + 2.0) - 4.0 * c) / 8.0;
    let (s, a) = match conv {
        SignConvention::AsPrinted => (ps, pa),
        SignConvention::PMagnitude => (ps.abs(), pa.abs()),
    };
    let qs1 = (o + 1.0) / (16.0 * (o + 2.0))
        * (2.0 * (o - 2.0) * s * (3.0 * (2.0 * o + mf) * (mf - 2.0) + 4.0 * c)
            + 8.0 * o * (mf - 1.0) * (o + 2.0 * mf - 4.0) * c);
    let qa1 = (o - 1.0) * a / 8.0 * ((2.0 * o + mf) * (mf + 2.0) - 4.0 * c);
    let qs2 = o / (8.0 * (o + 2.0))
        * ((3.0 * o * o + 7.0 * o + 6.0) * c * c
            + 3.0 / 16.0 * mf * (mf - 2.0) * (2.0 * o + mf) * (2.0 * o + mf + 2.0) * (o - 1.0) * (o - 2.0)
            + c / 2.0
                * (mf * (2.0 * o + mf) * (5.0 * o + 3.0) * (o - 2.0) + 2.0 * o * (o * o - 1.0) * (o - 6.0)));
    let qa2 = o * (o - 3.0) * a / 16.0 * ((2.0 * o + mf) * (2.0 * o + mf - 2.0) - 4.0 * c);
    let r1 = y_surd(omega) * (2.0 - o) * a / 8.0 * (4.0 * (c - 3.0 * o) + 3.0 * mf * (2.0 * o + mf - 2.0));
    Ok(ClosedFormResult::build(
        Family::R2TwoRow,
        conv,
        &[
            ("p_sym", ps),
            ("p_anti", pa),
            ("q_sym_0", ps * ps),
            ("q_sym_1", qs1),
            ("q_sym_2", qs2),
            ("q_anti_0", pa * pa),
            ("q_anti_1", qa1),
            ("q_anti_2", qa2),
            ("r_0", ps * pa),
            ("r_1", r1),
        ],
    ))
}

/// P, Q and R for `{r,r,r}` (m = 3r).
pub fn r3_rrr_moments(omega: usize, r: u32) -> Result<ClosedFormResult> {
    if r < 1 {
        return invalid("r must be at least 1");
    }
    let (o, r) = (omega as f64, r as f64);
    let ps = -3.0 * r * (r - 1.0);
    let pa = -1.5 * r * (r + 1.0);
    Ok(ClosedFormResult::build(
        Family::R3Rrr,
        SignConvention::default(),
        &[
            ("p_sym", ps),
            ("p_anti", pa),
            ("q_sym_0", ps * ps),
            ("q_sym_1", 6.0 * (o + 1.0) * (o - 3.0) * r * (r - 1.0).powi(2) * (o + r) / (o + 2.0)),
            (
                "q_sym_2",
                3.0 * o * (o - 2.0) * (o - 3.0) * r * (r - 1.0) * (o + r) * (o + r + 1.0) / (4.0 * (o + 2.0)),
            ),
            ("q_anti_0", pa * pa),
            ("q_anti_1", 3.0 * (o - 1.0) * (o - 3.0) * r * (r + 1.0).powi(2) * (o + r) / (2.0 * (o - 2.0))),
            (
                "q_anti_2",
                3.0 * o * (o - 3.0) * (o - 4.0) * r * (r + 1.0) * (o + r) * (o + r - 1.0) / (8.0 * (o - 2.0)),
            ),
            ("r_0", 9.0 * r * r * (r * r - 1.0) / 2.0),
            ("r_1", -y_surd(omega) * 3.0 * (o - 3.0) * r * (r * r - 1.0) * (o + r)),
        ],
    ))
}

/// `⟨H²⟩` of `{r,r,r}`.
pub fn r3_h2_rrr(omega: usize, r: u32, var_sym: f64, var_anti: f64) -> f64 {
    let (o, r) = (omega as f64, r as f64);
    var_sym * 1.5 * r * (r - 1.0) * (o + r - 3.0) * (o + r - 4.0)
        + var_anti * 0.75 * r * (r + 1.0) * (o + r - 2.0) * (o + r - 3.0)
}

/// P, Q and R for `{r+1,r,r}` or `{r+2,r,r}`.
pub fn r3_family_moments(omega: usize, r: u32, family: Family) -> Result<ClosedFormResult> {
    if r < 1 {
        return invalid("r must be at least 1");
    }
    let (o, r) = (omega as f64, r as f64);
    let s = y_surd(omega);
    let v: Vec<(&str, f64)> = match family {
        Family::R3Rp1rr => {
            let ps = -r * (3.0 * r - 1.0);
            let pa = -r / 2.0 * (5.0 + 3.0 * r);
            vec![
                ("p_sym", ps),
                ("p_anti", pa),
                ("q_sym_0", ps * ps),
                (
                    "q_sym_1",
                    r * (1.0 + o) / (2.0 + o)
                        * (6.0 * r.powi(3) * (o - 3.0)
                            + 3.0 * (o - 3.0) * o
                            + 2.0 * r * r * (o - 3.0) * (3.0 * o - 2.0)
                            + r * (-2.0 + 3.0 * (9.0 - 2.0 * o) * o)),
                ),
                (
                    "q_sym_2",
                    r * (o - 3.0) * o * (1.0 + r + o) / (4.0 * (2.0 + o))
                        * (8.0 + 3.0 * r * r * (o - 2.0) - (o - 8.0) * o + r * (o - 2.0) * (1.0 + 3.0 * o)),
                ),
                ("q_anti_0", pa * pa),
                (
                    "q_anti_1",
                    r * (o - 1.0) / (2.0 * (o - 2.0))
                        * (-r * (5.0 + 3.0 * r).powi(2)
                            + (-18.0 + r * (-18.0 + r + 3.0 * r * r)) * o
                            + 3.0 * (1.0 + r) * (2.0 + r) * o * o),
                ),
                (
                    "q_anti_2",
                    r * (o - 3.0) * o * (o + r - 1.0) / (8.0 * (o - 2.0))
                        * (-16.0 + 3.0 * r * r * (o - 4.0) + r * (o - 4.0) * (7.0 + 3.0 * o) + o * (5.0 * o - 14.0)),
                ),
                ("r_0", r * r / 2.0 * (3.0 * r - 1.0) * (5.0 + 3.0 * r)),
                (
                    "r_1",
                    r / 24.0
                        * s
                        * (r.powi(3) * (468.0 - 151.0 * o)
                            + 153.0 * (o - 3.0) * o
                            + r * r * (600.0 + (283.0 - 151.0 * o) * o)
                            - 5.0 * r * (60.0 + 13.0 * o * (2.0 * o - 7.0))),
                ),
            ]
        }
        Family::R3Rp2rr => {
            let ps = -(3.0 * r * r + r + 1.0);
            let pa = -r / 2.0 * (7.0 + 3.0 * r);
            vec![
                ("p_sym", ps),
                ("p_anti", pa),
                ("q_sym_0", ps * ps),
                (
                    "q_sym_1",
                    (1.0 + o) / (2.0 * (2.0 + o))
                        * (-4.0 * (1.0 + r + 3.0 * r * r).powi(2)
                            + (2.0 + r * (3.0 + r * (51.0 + 4.0 * r * (3.0 * r - 7.0)))) * o
                            + (2.0 + 11.0 * r + 12.0 * r.powi(3)) * o * o),
                ),
                (
                    "q_sym_2",
                    o / (4.0 * (2.0 + o))
                        * (3.0 * r.powi(4) * (o - 3.0) * (o - 2.0)
                            + (o - 1.0) * o * (2.0 + o) * (3.0 + o)
                            + 2.0 * r.powi(3) * (o - 3.0) * (o - 2.0) * (4.0 + 3.0 * o)
                            + r * r * (o - 3.0) * o * (7.0 + 3.0 * o * (1.0 + o))
                            + r * (o - 3.0) * (22.0 + o * (42.0 + o * (19.0 + o)))),
                ),
                ("q_anti_0", pa * pa),
                (
                    "q_anti_1",
                    r * (o - 1.0) / (2.0 * (o - 2.0))
                        * (-r * (7.0 + 3.0 * r).powi(2)
                            + (5.0 + 3.0 * r) * (r * r - 6.0) * o
                            + (10.0 + 3.0 * r * (4.0 + r)) * o * o),
                ),
                (
                    "q_anti_2",
                    r * (o - 3.0) * o * (o + r - 1.0) / (8.0 * (o - 2.0))
                        * (-44.0 + 3.0 * r * r * (o - 4.0) + r * (o - 4.0) * (11.0 + 3.0 * o) + o * (7.0 * o - 12.0)),
                ),
                ("r_0", r / 2.0 * (7.0 + 3.0 * r) * (1.0 + r + 3.0 * r * r)),
                (
                    "r_1",
                    r / 48.0
                        * s
                        * (8.0 * (7.0 + 3.0 * r) * (12.0 + r + 37.0 * r * r)
                            + (-1008.0 + r * (1106.0 + (241.0 - 289.0 * r) * r)) * o
                            + (208.0 - r * (489.0 + 289.0 * r)) * o * o),
                ),
            ]
        }
        other => return invalid(format!("{other} is not a {{r+k,r,r}} family")),
    };
    Ok(ClosedFormResult::build(family, SignConvention::default(), &v))
}

/// Identify the closed-form family of `f` by its shape, with its parameter
/// (m for one row, 2F for two rows, r for three rows).
pub fn family_of(f: &Partition) -> Option<(Family, u32)> {
    match *f.parts() {
        [m] if m >= 2 => Some((Family::R1Symmetric, m)),
        [a, b] => Some((Family::R2TwoRow, a - b)),
        [a, b, c] if b == c => match a - b {
            0 => Some((Family::R3Rrr, b)),
            1 => Some((Family::R3Rp1rr, b)),
            2 => Some((Family::R3Rp2rr, b)),
            _ => None,
        },
        _ => None,
    }
}

/// Closed-form values for `f` routed by shape.
pub fn closed_moments(f: &Partition, omega: usize, conv: SignConvention) -> Result<ClosedFormResult> {
    match family_of(f) {
        Some((Family::R1Symmetric, m)) => r1_moments(omega, m),
        Some((Family::R2TwoRow, two_f)) => r2_moments(omega, f.boxes(), two_f, conv),
        Some((Family::R3Rrr, r)) => r3_rrr_moments(omega, r),
        Some((fam, r)) => r3_family_moments(omega, r, fam),
        None => invalid(format!("no closed form for {f}")),
    }
}
