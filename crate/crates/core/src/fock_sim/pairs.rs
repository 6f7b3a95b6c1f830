use crate::error::{invalid, Error, Result};
use crate::young::{Channel, Statistics};

/// A normalized two-particle state as first-quantized amplitudes `ψ(i, j)`
/// over mode indices, listing only nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    pub amps: Vec<(usize, usize, f64)>,
}

impl PairState {
    fn inner(&self, other: &PairState) -> f64 {
        let mut s = 0.0;
        for &(i, j, a) in &self.amps {
            for &(k, l, b) in &other.amps {
                if i == k && j == l {
                    s += a * b;
                }
            }
        }
        s
    }
}

/// Symmetric (`sym = true`) or antisymmetric normalized two-index states on `n` labels.
fn two_index(n: usize, sym: bool) -> Vec<Vec<(usize, usize, f64)>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..n {
        if sym {
            out.push(vec![(i, i, 1.0)]);
        }
        for j in i + 1..n {
            let s = if sym { h } else { -h };
            out.push(vec![(i, j, h), (j, i, s)]);
        }
    }
    out
}

/// Two-particle states coupled as spatial channel ⊗ internal SU(r) irrep.
///
/// States in each channel are indexed `v·d_int + β`, with `v` the spatial
/// label carrying the GUE block and `β` the internal degeneracy label.
#[derive(Debug, Clone)]
pub struct PairBasis {
    pub omega: usize,
    pub r: usize,
    pub statistics: Statistics,
    pub sym: Vec<PairState>,
    pub anti: Vec<PairState>,
    /// `(spatial, internal)` dimensions per channel.
    pub sym_dims: (usize, usize),
    pub anti_dims: (usize, usize),
}

impl PairBasis {
    pub fn new(omega: usize, r: usize, statistics: Statistics) -> Result<Self> {
        if omega < 2 || r < 1 {
            return invalid("pair basis needs omega >= 2 and r >= 1");
        }
        if statistics == Statistics::Fermion && omega * r < 2 {
            return invalid("fermion pair basis needs at least two modes");
        }
        let (int_for_sym, int_for_anti) = match statistics {
            Statistics::Boson => (true, false),
            Statistics::Fermion => (false, true),
        };
        let build = |spatial_sym: bool, internal_sym: bool| {
            let sp = two_index(omega, spatial_sym);
            let it = two_index(r, internal_sym);
            let mut states = Vec::with_capacity(sp.len() * it.len());
            for s in &sp {
                for t in &it {
                    let mut amps = Vec::new();
                    for &(w1, w2, a) in s {
                        for &(s1, s2, b) in t {
                            amps.push((w1 * r + s1, w2 * r + s2, a * b));
                        }
                    }
                    states.push(PairState { amps });
                }
            }
            (states, (sp.len(), it.len()))
        };
        let (sym, sym_dims) = build(true, int_for_sym);
        let (anti, anti_dims) = build(false, int_for_anti);
        let basis = Self { omega, r, statistics, sym, anti, sym_dims, anti_dims };
        basis.check_orthonormal(1e-12)?;
        Ok(basis)
    }

    pub fn states(&self, ch: Channel) -> &[PairState] {
        match ch {
            Channel::Sym => &self.sym,
            Channel::Antisym => &self.anti,
        }
    }

    pub fn dims(&self, ch: Channel) -> (usize, usize) {
        match ch {
            Channel::Sym => self.sym_dims,
            Channel::Antisym => self.anti_dims,
        }
    }

    pub fn len(&self) -> usize {
        self.sym.len() + self.anti.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Maximum deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let all: Vec<&PairState> = self.sym.iter().chain(self.anti.iter()).collect();
        let mut worst = 0.0f64;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate().skip(i) {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - want).abs());
            }
        }
        worst
    }

    fn check_orthonormal(&self, tol: f64) -> Result<()> {
        let e = self.orthonormality_error();
        if e > tol {
            return Err(Error::InvalidArgument(format!("pair basis not orthonormal (error {e:e})")));
        }
        Ok(())
    }
}

/// Index of the unordered mode pair `i <= j` among `n(n+1)/2` pairs.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// Coefficients of a boson pair state on normalized pair-occupation states.
pub(crate) fn occupation_coefficients(state: &PairState, n: usize) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for &(i, j, a) in &state.amps {
        if i > j {
            continue;
        }
        let c = if i == j { a } else { std::f64::consts::SQRT_2 * a };
        out.push((pair_index(i, j, n), c));
    }
    out
}
