//! Reduced SU(Ω) Racah-coefficient ratios `X_UU` and `Y_UU` as closed
//! functions of axial distances and Π-products.
//!
//! Removal pairs are classified by how their rows overlap. When the two
//! removals share exactly one row that row is labelled `a`. Pairings with no
//! formula yield [`Error::TableCoverage`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::young::{axial_distance, pi_product, Channel, Partition, PiVariant, Removal};

/// Channel of a removal pairing; `Cross` pairs an antisymmetric left removal
/// with a symmetric right removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseChannel {
    Sym,
    Antisym,
    Cross,
}

impl From<Channel> for CaseChannel {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Sym => CaseChannel::Sym,
            Channel::Antisym => CaseChannel::Antisym,
        }
    }
}

impl fmt::Display for CaseChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseChannel::Sym => "SYM",
            CaseChannel::Antisym => "ANTISYM",
            CaseChannel::Cross => "CROSS",
        })
    }
}

/// Row-overlap shape of a removal pair after canonical relabelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    AbAb,
    AbAc,
    AaAa,
    AaBb,
    AaAb,
    AbAa,
    AaBc,
    AbCc,
    AbCd,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::AbAb => "AB/AB",
            Shape::AbAc => "AB/AC",
            Shape::AaAa => "AA/AA",
            Shape::AaBb => "AA/BB",
            Shape::AaAb => "AA/AB",
            Shape::AbAa => "AB/AA",
            Shape::AaBc => "AA/BC",
            Shape::AbCc => "AB/CC",
            Shape::AbCd => "AB/CD",
        })
    }
}

/// Concrete row numbers behind the canonical labels `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Labels {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCase {
    pub left: Removal,
    pub right: Removal,
    pub channel: CaseChannel,
    pub shape: Shape,
    pub labels: Labels,
}

impl PatternCase {
    fn coverage_error(&self, f: &Partition, nu: u8) -> Error {
        Error::TableCoverage {
            channel: self.channel.to_string(),
            shape: self.shape.to_string(),
            nu,
            irrep: f.to_string(),
            left_rows: self.left.rows,
            right_rows: self.right.rows,
        }
    }
}

fn shape_of(l: (usize, usize), r: (usize, usize)) -> (Shape, Labels) {
    let (la, lb) = l;
    let (ra, rb) = r;
    let lab = |a, b, c| Labels { a, b, c };
    let l_has = |x| x == la || x == lb;
    let r_has = |x| x == ra || x == rb;
    if la == lb && ra == rb {
        return if la == ra {
            (Shape::AaAa, lab(la, 0, 0))
        } else {
            (Shape::AaBb, lab(la, ra, 0))
        };
    }
    if la == lb {
        return if r_has(la) {
            let other = if ra == la { rb } else { ra };
            (Shape::AaAb, lab(la, other, 0))
        } else {
            (Shape::AaBc, Labels::default())
        };
    }
    if ra == rb {
        return if l_has(ra) {
            let other = if la == ra { lb } else { la };
            (Shape::AbAa, lab(ra, other, 0))
        } else {
            (Shape::AbCc, Labels::default())
        };
    }
    if l == r {
        return (Shape::AbAb, lab(la, lb, 0));
    }
    let shared: Vec<usize> = [la, lb].into_iter().filter(|&x| r_has(x)).collect();
    if shared.len() == 1 {
        let a = shared[0];
        let b = if la == a { lb } else { la };
        let c = if ra == a { rb } else { ra };
        (Shape::AbAc, lab(a, b, c))
    } else {
        (Shape::AbCd, Labels::default())
    }
}

/// Classify a removal pair of `f` for the requested channel.
pub fn classify(f: &Partition, left: &Removal, right: &Removal, channel: CaseChannel) -> Result<PatternCase> {
    let ok = match channel {
        CaseChannel::Sym => left.channels.sym && right.channels.sym,
        CaseChannel::Antisym => left.channels.anti && right.channels.anti,
        CaseChannel::Cross => left.channels.anti && right.channels.sym,
    };
    if !ok {
        return invalid(format!(
            "removals {:?}/{:?} of {f} do not support channel {channel}",
            left.rows, right.rows
        ));
    }
    let (shape, labels) = shape_of(left.rows, right.rows);
    Ok(PatternCase { left: left.clone(), right: right.clone(), channel, shape, labels })
}

/// Source of `X_UU` and `Y_UU` values; `StandardTable` holds the closed-form entries.
pub trait RatioTable: Sync {
    /// Exact `X_UU` for ν ∈ {1, 2}.
    fn xuu(&self, f: &Partition, omega: usize, case: &PatternCase, nu: u8) -> Result<BigRational>;

    /// Rational coefficient `c` in `Y_UU(ν=1) = c·√((Ω²−1)/(Ω²−4))`.
    fn yuu_coefficient(&self, f: &Partition, omega: usize, case: &PatternCase) -> Result<BigRational>;
}

/// The reduced closed-form ratio table.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardTable;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn nonzero(x: &BigRational, what: &str) -> Result<()> {
    if x.is_zero() {
        Err(Error::SingularConfiguration(format!("{what} vanishes")))
    } else {
        Ok(())
    }
}

impl RatioTable for StandardTable {
    fn xuu(&self, f: &Partition, omega: usize, case: &PatternCase, nu: u8) -> Result<BigRational> {
        if !(nu == 1 || nu == 2) {
            return invalid(format!("X_UU is tabulated for nu in {{1,2}}, got {nu}"));
        }
        let o = omega as i64;
        let d2 = if nu == 2 { BigRational::one() } else { BigRational::zero() };
        let d1 = if nu == 1 { BigRational::one() } else { BigRational::zero() };
        let k = int(3 - 2 * nu as i64);
        let Labels { a, b, c } = case.labels;
        let pi = |row, v| pi_product(f, omega, row, v);
        let tau = |i, j| axial_distance(f, i, j, omega).map(int);
        let four_over_o = rat(4, o);

        match (case.channel, case.shape) {
            (CaseChannel::Antisym, Shape::AbAb) => {
                if o == 2 {
                    return Err(Error::SingularConfiguration("Ω − 2 vanishes".into()));
                }
                let t = tau(a, b)?;
                let pab = pi(a, PiVariant::Excluding(b))?;
                let pba = pi(b, PiVariant::Excluding(a))?;
                let inner = &d2
                    + int((o - 1) * (o - 2)) / (int(2) * &pab * &pba) * &d2
                    + &k * int(o - 1) / int(2)
                        * ((BigRational::one() + t.recip()) / &pba
                            + (BigRational::one() - t.recip()) / &pab
                            - &four_over_o * &d1);
                Ok(rat(o, o - 2) * inner)
            }
            (CaseChannel::Antisym, Shape::AbAc) => {
                if o == 2 {
                    return Err(Error::SingularConfiguration("Ω − 2 vanishes".into()));
                }
                let pabc = pi(a, PiVariant::Excluding2(b, c))?;
                let inner = rat(2, o - 1) * &d2 - &four_over_o * &d1 + &k / pabc;
                Ok(rat(o * (o - 1), 2 * (o - 2)) * inner)
            }
            (CaseChannel::Sym, Shape::AbAb) => {
                let t = tau(a, b)?;
                nonzero(&(&t - int(1)), "τ_ab − 1")?;
                nonzero(&(&t + int(1)), "τ_ab + 1")?;
                let pab = pi(a, PiVariant::Excluding(b))?;
                let pba = pi(b, PiVariant::Excluding(a))?;
                let tm = &t - int(1);
                let tp = &t + int(1);
                let bracket = &tm * &tm / (&t * &tp) / &pba + &tp * &tp / (&t * &tm) / &pab - &four_over_o * &d1;
                let inner = &d2 / (&pab * &pba) + rat(2, (o + 1) * (o + 2)) * &d2 + &k / int(o + 2) * bracket;
                Ok(rat(o * (o + 1), 2) * inner)
            }
            (CaseChannel::Sym, Shape::AaAa) => {
                let p1 = pi(a, PiVariant::Prime)?;
                let p2 = pi(a, PiVariant::DoublePrime)?;
                let inner = &d2 + &k * int(2 * (o + 1)) / p1 + int((o + 1) * (o + 2)) / (int(2) * p2) * &d2
                    - rat(2 * (o + 1), o) * &d1;
                Ok(rat(o, o + 2) * inner)
            }
            (CaseChannel::Sym, Shape::AaBb) => Ok(rat(-2 * (o + 1), o + 2) * &d1 + rat(o, o + 2) * &d2),
            (CaseChannel::Sym, Shape::AaAb) | (CaseChannel::Sym, Shape::AbAa) => {
                let t = tau(a, b)?;
                nonzero(&(&t - int(1)), "τ_ab − 1")?;
                let pab = pi(a, PiVariant::Excluding(b))?;
                let inner = &d2 + &k * int(o + 1) * (&t + int(1)) / ((&t - int(1)) * pab) - rat(2 * (o + 1), o) * &d1;
                Ok(rat(o, o + 2) * inner)
            }
            _ => Err(case.coverage_error(f, nu)),
        }
    }

    fn yuu_coefficient(&self, f: &Partition, omega: usize, case: &PatternCase) -> Result<BigRational> {
        if case.channel != CaseChannel::Cross {
            return invalid("Y_UU needs a CROSS case");
        }
        let o = omega as i64;
        if o <= 2 {
            return Err(Error::SingularConfiguration("Ω² − 4 vanishes".into()));
        }
        let Labels { a, b, c } = case.labels;
        let pi = |row, v| pi_product(f, omega, row, v);
        let tau = |i, j| axial_distance(f, i, j, omega).map(int);
        let half = rat(-o, 2);
        match case.shape {
            Shape::AbAb => {
                let t = tau(a, b)?;
                let pab = pi(a, PiVariant::Excluding(b))?;
                let pba = pi(b, PiVariant::Excluding(a))?;
                Ok(half
                    * ((BigRational::one() + t.recip()) / pab + (BigRational::one() - t.recip()) / pba
                        - rat(4, o)))
            }
            Shape::AbAc => {
                let t = tau(a, c)?;
                let pab = pi(a, PiVariant::Excluding(b))?;
                Ok(half * ((BigRational::one() + t.recip()) / pab - rat(4, o)))
            }
            Shape::AbAa => {
                let pab = pi(a, PiVariant::Excluding(b))?;
                Ok(int(-o) * (pab.recip() - rat(2, o)))
            }
            _ => Err(case.coverage_error(f, 1)),
        }
    }
}

/// `√((Ω²−1)/(Ω²−4))`, the surd multiplying every `Y_UU` entry.
pub fn y_surd(omega: usize) -> f64 {
    let o = omega as f64;
    ((o * o - 1.0) / (o * o - 4.0)).sqrt()
}

/// `X_UU` from the standard table.
pub fn xuu(f: &Partition, omega: usize, case: &PatternCase, nu: u8) -> Result<BigRational> {
    StandardTable.xuu(f, omega, case, nu)
}

/// `Y_UU` from the standard table as a float; only ν = 1 is tabulated.
pub fn yuu(f: &Partition, omega: usize, case: &PatternCase, nu: u8) -> Result<f64> {
    if nu != 1 {
        return invalid("Y_UU at nu=0 enters only through R⁰ = P·P");
    }
    let c = StandardTable.yuu_coefficient(f, omega, case)?;
    Ok(c.to_f64().unwrap_or(f64::NAN) * y_surd(omega))
}

/// Dimension of the SU(Ω) tensor irrep `F_ν` carried by channel `ch`.
pub fn dim_fnu(nu: u8, ch: Channel, omega: usize) -> u64 {
    let o = omega as u64;
    match (nu, ch) {
        (0, _) => 1,
        (1, _) => o * o - 1,
        (2, Channel::Sym) => o * o * (o + 3) * (o - 1) / 4,
        (2, Channel::Antisym) => (o * o * (o + 1)).saturating_mul(o.saturating_sub(3)) / 4,
        _ => 0,
    }
}

/// Wraps a table and scales one (channel, shape, ν) entry by `1 + eps`.
#[derive(Debug, Clone, Copy)]
pub struct Perturbed<T> {
    pub inner: T,
    pub channel: CaseChannel,
    pub shape: Shape,
    pub nu: u8,
    pub eps: f64,
}

impl<T: RatioTable> RatioTable for Perturbed<T> {
    fn xuu(&self, f: &Partition, omega: usize, case: &PatternCase, nu: u8) -> Result<BigRational> {
        let v = self.inner.xuu(f, omega, case, nu)?;
        if case.channel == self.channel && case.shape == self.shape && nu == self.nu {
            let s = BigRational::from_float(1.0 + self.eps).expect("finite eps");
            Ok(v * s)
        } else {
            Ok(v)
        }
    }

    fn yuu_coefficient(&self, f: &Partition, omega: usize, case: &PatternCase) -> Result<BigRational> {
        let v = self.inner.yuu_coefficient(f, omega, case)?;
        if self.channel == CaseChannel::Cross && case.shape == self.shape && self.nu == 1 {
            Ok(v * BigRational::from_float(1.0 + self.eps).expect("finite eps"))
        } else {
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::removals;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rem(f: &Partition, rows: (usize, usize)) -> Removal {
        removals(f).unwrap().into_iter().find(|r| r.rows == rows).unwrap()
    }

    #[test]
    fn classify_examples() {
        let f = p("2,2");
        let r = rem(&f, (2, 2));
        assert_eq!(classify(&f, &r, &r, CaseChannel::Sym).unwrap().shape, Shape::AaAa);

        let f = p("5,2");
        let c = classify(&f, &rem(&f, (1, 1)), &rem(&f, (1, 2)), CaseChannel::Sym).unwrap();
        assert_eq!(c.shape, Shape::AaAb);
        assert_eq!((c.labels.a, c.labels.b), (1, 2));

        let f = p("3,2,1");
        let c = classify(&f, &rem(&f, (1, 2)), &rem(&f, (1, 3)), CaseChannel::Antisym).unwrap();
        assert_eq!(c.shape, Shape::AbAc);
        assert_eq!((c.labels.a, c.labels.b, c.labels.c), (1, 2, 3));

        // Shared second row is relabelled `a`.
        let f = p("3,2,1");
        let c = classify(&f, &rem(&f, (1, 2)), &rem(&f, (2, 3)), CaseChannel::Antisym).unwrap();
        assert_eq!((c.labels.a, c.labels.b, c.labels.c), (2, 1, 3));

        let f = p("2,2");
        assert!(classify(&f, &rem(&f, (1, 2)), &rem(&f, (1, 2)), CaseChannel::Sym).is_err());
    }

    #[test]
    fn xuu_examples() {
        let f = p("4");
        let r = rem(&f, (1, 1));
        let c = classify(&f, &r, &r, CaseChannel::Sym).unwrap();
        assert_eq!(xuu(&f, 6, &c, 2).unwrap(), rat(825, 8));
        assert_eq!(xuu(&f, 6, &c, 1).unwrap(), rat(175, 8));

        let f = p("1,1,1");
        let r = rem(&f, (2, 3));
        let c = classify(&f, &r, &r, CaseChannel::Antisym).unwrap();
        assert_eq!(xuu(&f, 6, &c, 1).unwrap(), rat(35, 2));
        for o in 4..=10i64 {
            assert_eq!(xuu(&f, o as usize, &c, 1).unwrap(), rat(2 * (o - 1) * (o + 1) * (o - 3), 3 * (o - 2)));
        }
    }

    #[test]
    fn uncovered_cases_name_the_triple() {
        let f = p("5,3,1");
        let rs = removals(&f).unwrap();
        let aa = rs.iter().find(|r| r.rows == (1, 1)).unwrap();
        let bc = rs.iter().find(|r| r.rows == (2, 3)).unwrap();
        let c = classify(&f, aa, bc, CaseChannel::Sym).unwrap();
        assert_eq!(c.shape, Shape::AaBc);
        match xuu(&f, 6, &c, 1) {
            Err(Error::TableCoverage { channel, shape, nu, .. }) => {
                assert_eq!((channel.as_str(), shape.as_str(), nu), ("SYM", "AA/BC", 1));
            }
            other => panic!("expected coverage error, got {other:?}"),
        }
        let c = classify(&f, bc, aa, CaseChannel::Cross).unwrap();
        assert!(matches!(yuu(&f, 6, &c, 1), Err(Error::TableCoverage { .. })));
    }

    #[test]
    fn yuu_ab_aa_on_two_by_two() {
        let f = p("2,2");
        let c = classify(&f, &rem(&f, (1, 2)), &rem(&f, (2, 2)), CaseChannel::Cross).unwrap();
        assert_eq!(c.shape, Shape::AbAa);
        for o in 3..=9usize {
            let pab = pi_product(&f, o, 2, PiVariant::Excluding(1)).unwrap().to_f64().unwrap();
            let of = o as f64;
            let want = -of * y_surd(o) * (1.0 / pab - 2.0 / of);
            let got = yuu(&f, o, &c, 1).unwrap();
            assert!((got - want).abs() < 1e-12 * want.abs());
        }
    }

    #[test]
    fn yuu_rrr_is_negative() {
        let f = p("2,2,2");
        let c = classify(&f, &rem(&f, (2, 3)), &rem(&f, (3, 3)), CaseChannel::Cross).unwrap();
        assert!(yuu(&f, 6, &c, 1).unwrap() < 0.0);
        assert!(yuu(&f, 6, &c, 0).is_err());
    }

    #[test]
    fn fnu_dimensions() {
        assert_eq!(dim_fnu(1, Channel::Sym, 6), 35);
        assert_eq!(dim_fnu(1, Channel::Antisym, 6), 35);
        assert_eq!(dim_fnu(2, Channel::Sym, 6), 405);
        assert_eq!(dim_fnu(2, Channel::Antisym, 3), 0);
        assert_eq!(dim_fnu(0, Channel::Antisym, 3), 1);
        for o in 2..=12 {
            assert_eq!(dim_fnu(2, Channel::Antisym, o) == 0, o <= 3);
        }
    }

    #[test]
    fn perturbation_touches_one_entry() {
        let f = p("4");
        let r = rem(&f, (1, 1));
        let c = classify(&f, &r, &r, CaseChannel::Sym).unwrap();
        let t = Perturbed { inner: StandardTable, channel: CaseChannel::Sym, shape: Shape::AaAa, nu: 2, eps: 1e-6 };
        let base = xuu(&f, 6, &c, 2).unwrap().to_f64().unwrap();
        let pert = t.xuu(&f, 6, &c, 2).unwrap().to_f64().unwrap();
        assert!(((pert / base) - 1.0 - 1e-6).abs() < 1e-12);
        assert_eq!(t.xuu(&f, 6, &c, 1).unwrap(), xuu(&f, 6, &c, 1).unwrap());
    }
}
