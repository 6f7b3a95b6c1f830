//! Analytic moments of EGUE(2)-SU(r) blocks: centroids, spectral variances
//! and their normalized cross-correlations between irreps.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::racah_tables::{classify, dim_fnu, y_surd, CaseChannel, RatioTable, StandardTable};
use crate::young::{dim_ratio_sm, dim_u, removals, Channel, IrrepState, Partition, Removal, Statistics};

/// One EGUE(2)-SU(r) ensemble: Ω spatial orbitals, SU(r) rank, and the
/// variances of the two GUE blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub omega: usize,
    pub r: u32,
    pub statistics: Statistics,
    pub var_sym: f64,
    pub var_anti: f64,
}

impl EnsembleSpec {
    pub fn new(omega: usize, r: u32, statistics: Statistics, var_sym: f64, var_anti: f64) -> Result<Self> {
        if omega < 2 {
            return invalid("omega must be at least 2");
        }
        if r < 1 {
            return invalid("r must be at least 1");
        }
        if !(var_sym >= 0.0 && var_anti >= 0.0) || !var_sym.is_finite() || !var_anti.is_finite() {
            return invalid("variances must be finite and non-negative");
        }
        if var_sym == 0.0 && var_anti == 0.0 {
            return Err(Error::DegenerateEnsemble("both block variances are zero".into()));
        }
        Ok(Self { omega, r, statistics, var_sym, var_anti })
    }

    /// Unit variances in both channels.
    pub fn unit(omega: usize, r: u32, statistics: Statistics) -> Result<Self> {
        Self::new(omega, r, statistics, 1.0, 1.0)
    }

    /// SU(r) two-particle irrep paired with spatial channel `ch`.
    pub fn internal_pair_irrep(&self, ch: Channel) -> Partition {
        let sym = Partition::row(2);
        let anti = Partition::new(vec![1, 1]).expect("valid");
        match (self.statistics, ch) {
            (Statistics::Boson, Channel::Sym) | (Statistics::Fermion, Channel::Antisym) => sym,
            _ => anti,
        }
    }

    /// Variance of the GUE block in channel `ch`; zero when the paired SU(r)
    /// two-particle irrep does not exist (e.g. `{1²}` at r = 1).
    pub fn variance(&self, ch: Channel) -> f64 {
        let exists = dim_u(&self.internal_pair_irrep(ch), self.r as usize)
            .map(|d| !d.is_zero())
            .unwrap_or(false);
        if !exists {
            return 0.0;
        }
        match ch {
            Channel::Sym => self.var_sym,
            Channel::Antisym => self.var_anti,
        }
    }

    /// U(Ω) dimension of the two-particle irrep of channel `ch`.
    pub fn pair_dim(&self, ch: Channel) -> f64 {
        let o = self.omega as f64;
        match ch {
            Channel::Sym => o * (o + 1.0) / 2.0,
            Channel::Antisym => o * (o - 1.0) / 2.0,
        }
    }

    /// Build and validate the block state for irrep `f` under this ensemble.
    pub fn state(&self, f: Partition) -> Result<IrrepState> {
        let s = IrrepState::new(f, self.r, self.statistics)?;
        self.check(&s)?;
        Ok(s)
    }

    fn check(&self, s: &IrrepState) -> Result<()> {
        if s.r != self.r || s.statistics != self.statistics {
            return invalid(format!(
                "state (r={}, {}) does not match ensemble (r={}, {})",
                s.r, s.statistics, self.r, self.statistics
            ));
        }
        if s.f.rows() > self.omega {
            return invalid(format!("{} has more rows than Ω={}", s.f, self.omega));
        }
        Ok(())
    }
}

/// `F(m) = −m(m−1)/2`.
pub fn f_of_m(m: u32) -> i64 {
    let m = m as i64;
    -m * (m - 1) / 2
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn sm_ratio(child: &Partition, f: &Partition) -> BigRational {
    dim_ratio_sm(child, f).expect("removal child is a sub-diagram")
}

fn channel_removals(f: &Partition, ch: Channel) -> Vec<Removal> {
    if f.boxes() < 2 {
        return Vec::new();
    }
    removals(f)
        .expect("at least two boxes")
        .into_iter()
        .filter(|r| r.channels.contains(ch))
        .collect()
}

/// The analytic engine, generic over the ratio table it draws from.
#[derive(Debug, Clone, Default)]
pub struct Engine<T = StandardTable> {
    pub table: T,
}

impl Engine<StandardTable> {
    pub fn new() -> Self {
        Self { table: StandardTable }
    }
}

impl<T: RatioTable> Engine<T> {
    pub fn with_table(table: T) -> Self {
        Self { table }
    }

    /// `P^{f₂} = F(m)·Σ dim ratio` over the removals in channel `ch`.
    pub fn p_term(&self, ch: Channel, f: &Partition) -> BigRational {
        let s = channel_removals(f, ch)
            .iter()
            .fold(BigRational::zero(), |acc, r| acc + sm_ratio(&r.child, f));
        s * BigRational::from_integer(BigInt::from(f_of_m(f.boxes())))
    }

    /// Exact `Q^ν(f₂)`; ν = 0 is `P²`, vanishing `F_ν` irreps give zero.
    pub fn q_nu_exact(&self, ch: Channel, nu: u8, f: &Partition, omega: usize) -> Result<BigRational> {
        if nu > 2 {
            return invalid(format!("nu must be 0, 1 or 2, got {nu}"));
        }
        if nu == 0 {
            let p = self.p_term(ch, f);
            return Ok(&p * &p);
        }
        if dim_fnu(nu, ch, omega) == 0 {
            return Ok(BigRational::zero());
        }
        let rem = channel_removals(f, ch);
        let mut s = BigRational::zero();
        for l in &rem {
            let wl = sm_ratio(&l.child, f);
            for r in &rem {
                let case = classify(f, l, r, CaseChannel::from(ch))?;
                let x = self.table.xuu(f, omega, &case, nu)?;
                s += &wl * sm_ratio(&r.child, f) * x;
            }
        }
        let fm = BigRational::from_integer(BigInt::from(f_of_m(f.boxes())));
        Ok(&fm * &fm * s)
    }

    pub fn q_nu(&self, ch: Channel, nu: u8, f: &Partition, omega: usize) -> Result<f64> {
        self.q_nu_exact(ch, nu, f, omega).map(|q| to_f64(&q))
    }

    /// Rational part `c` of `R¹ = c·√((Ω²−1)/(Ω²−4))`.
    pub fn r1_coefficient(&self, f: &Partition, omega: usize) -> Result<BigRational> {
        let anti = channel_removals(f, Channel::Antisym);
        let sym = channel_removals(f, Channel::Sym);
        let mut s = BigRational::zero();
        for l in &anti {
            let wl = sm_ratio(&l.child, f);
            for r in &sym {
                let case = classify(f, l, r, CaseChannel::Cross)?;
                let y = self.table.yuu_coefficient(f, omega, &case)?;
                s += &wl * sm_ratio(&r.child, f) * y;
            }
        }
        let fm = BigRational::from_integer(BigInt::from(f_of_m(f.boxes())));
        Ok(&fm * &fm * s)
    }

    /// `R^ν` for ν ∈ {0, 1}.
    pub fn r_nu(&self, nu: u8, f: &Partition, omega: usize) -> Result<f64> {
        match nu {
            0 => Ok(to_f64(&(self.p_term(Channel::Sym, f) * self.p_term(Channel::Antisym, f)))),
            1 => {
                let c = self.r1_coefficient(f, omega)?;
                Ok(if c.is_zero() { 0.0 } else { to_f64(&c) * y_surd(omega) })
            }
            _ => invalid(format!("R^nu is defined for nu in {{0,1}}, got {nu}")),
        }
    }

    /// Ensemble average of `⟨H²⟩` over the block.
    pub fn h2_average(&self, spec: &EnsembleSpec, state: &IrrepState) -> Result<f64> {
        spec.check(state)?;
        let mut h2 = 0.0;
        for ch in Channel::BOTH {
            let v = spec.variance(ch);
            if v == 0.0 {
                continue;
            }
            let mut q = BigRational::zero();
            for nu in 0..=2 {
                q += self.q_nu_exact(ch, nu, &state.f, spec.omega)?;
            }
            h2 += v / spec.pair_dim(ch) * to_f64(&q);
        }
        Ok(h2)
    }

    /// `E[⟨H⟩^A ⟨H⟩^B]`.
    pub fn centroid_covariance(&self, spec: &EnsembleSpec, a: &IrrepState, b: &IrrepState) -> Result<f64> {
        spec.check(a)?;
        spec.check(b)?;
        let mut c = 0.0;
        for ch in Channel::BOTH {
            let v = spec.variance(ch);
            if v == 0.0 {
                continue;
            }
            c += v / spec.pair_dim(ch) * to_f64(&(self.p_term(ch, &a.f) * self.p_term(ch, &b.f)));
        }
        Ok(c)
    }

    /// `Cov(⟨H²⟩^A, ⟨H²⟩^B)`, the numerator of Σ₂₂.
    pub fn variance_covariance(&self, spec: &EnsembleSpec, a: &IrrepState, b: &IrrepState) -> Result<f64> {
        spec.check(a)?;
        spec.check(b)?;
        let o = spec.omega;
        let mut x = 0.0;
        for ch in Channel::BOTH {
            let v = spec.variance(ch);
            if v == 0.0 {
                continue;
            }
            let d = spec.pair_dim(ch);
            for nu in 0..=2u8 {
                let dim = dim_fnu(nu, ch, o);
                if dim == 0 {
                    continue;
                }
                let qa = self.q_nu(ch, nu, &a.f, o)?;
                let qb = self.q_nu(ch, nu, &b.f, o)?;
                x += 2.0 * v * v / (d * d) * qa * qb / dim as f64;
            }
        }
        let (vs, va) = (spec.variance(Channel::Sym), spec.variance(Channel::Antisym));
        if vs > 0.0 && va > 0.0 {
            let pref = vs * va / (spec.pair_dim(Channel::Sym) * spec.pair_dim(Channel::Antisym));
            let mut xc = 0.0;
            for nu in 0..=1u8 {
                let ra = self.r_nu(nu, &a.f, o)?;
                if ra == 0.0 {
                    continue;
                }
                let rb = self.r_nu(nu, &b.f, o)?;
                xc += ra * rb / dim_fnu(nu, Channel::Sym, o) as f64;
            }
            x += 4.0 * pref * xc;
        }
        Ok(x)
    }

    fn norm(&self, spec: &EnsembleSpec, a: &IrrepState, b: &IrrepState) -> Result<f64> {
        let ha = self.h2_average(spec, a)?;
        let hb = self.h2_average(spec, b)?;
        if ha <= 0.0 || hb <= 0.0 {
            let which = if ha <= 0.0 { &a.f } else { &b.f };
            return Err(Error::DegenerateEnsemble(format!("⟨H²⟩ vanishes for {which}")));
        }
        Ok(ha * hb)
    }

    /// Normalized centroid cross-correlation Σ₁₁.
    pub fn sigma11(&self, spec: &EnsembleSpec, a: &IrrepState, b: &IrrepState) -> Result<f64> {
        let n = self.norm(spec, a, b)?;
        Ok(self.centroid_covariance(spec, a, b)? / n.sqrt())
    }

    /// Normalized spectral-variance cross-correlation Σ₂₂.
    pub fn sigma22(&self, spec: &EnsembleSpec, a: &IrrepState, b: &IrrepState) -> Result<f64> {
        let n = self.norm(spec, a, b)?;
        Ok(self.variance_covariance(spec, a, b)? / n)
    }

    /// Full moment report for one block.
    pub fn report(&self, spec: &EnsembleSpec, state: &IrrepState) -> Result<MomentReport> {
        let f = &state.f;
        let o = spec.omega;
        let mut q = QTable::default();
        for nu in 0..=2u8 {
            q.sym[nu as usize] = self.q_nu(Channel::Sym, nu, f, o)?;
            q.anti[nu as usize] = self.q_nu(Channel::Antisym, nu, f, o)?;
        }
        let h2 = self.h2_average(spec, state)?;
        Ok(MomentReport {
            omega: o,
            r: spec.r,
            statistics: spec.statistics,
            irrep: f.clone(),
            m: state.m,
            dim_u: dim_u(f, o)?,
            p_sym: to_f64(&self.p_term(Channel::Sym, f)),
            p_anti: to_f64(&self.p_term(Channel::Antisym, f)),
            q,
            r_nu: [self.r_nu(0, f, o)?, self.r_nu(1, f, o)?],
            h2,
            width: h2.sqrt(),
        })
    }
}

/// `Q^ν` per channel, indexed by ν.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QTable {
    pub sym: [f64; 3],
    pub anti: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub omega: usize,
    pub r: u32,
    pub statistics: Statistics,
    pub irrep: Partition,
    pub m: u32,
    #[serde(serialize_with = "ser_biguint", deserialize_with = "de_biguint")]
    pub dim_u: BigUint,
    pub p_sym: f64,
    pub p_anti: f64,
    pub q: QTable,
    pub r_nu: [f64; 2],
    pub h2: f64,
    pub width: f64,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn de_biguint<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}
