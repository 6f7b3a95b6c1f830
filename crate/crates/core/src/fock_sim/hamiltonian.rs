use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::pairs::{occupation_coefficients, pair_index, PairBasis};
use super::space::FockSpace;
use crate::moments::EnsembleSpec;
use crate::young::Channel;

/// A hermitian matrix stored as real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl Hermitian {
    pub fn zeros(d: usize) -> Self {
        Self { re: DMatrix::zeros(d, d), im: DMatrix::zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.re.nrows()
    }

    /// `max |H − H†|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let a = (&self.re - self.re.transpose()).amax();
        let b = (&self.im + self.im.transpose()).amax();
        a.max(b)
    }

    /// `Tr H²` (real for hermitian H).
    pub fn trace_sq(&self) -> f64 {
        self.re.norm_squared() + self.im.norm_squared()
    }
}

/// One GUE draw: real diagonal with variance `var`, off-diagonal real and
/// imaginary parts each with variance `var/2`, so `E|H_ij|² = var`.
pub fn sample_gue<R: Rng + ?Sized>(d: usize, var: f64, rng: &mut R) -> Hermitian {
    let mut h = Hermitian::zeros(d);
    let sd = var.sqrt();
    let half = (var / 2.0).sqrt();
    for i in 0..d {
        let x: f64 = rng.sample(StandardNormal);
        h.re[(i, i)] = sd * x;
        for j in i + 1..d {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            h.re[(i, j)] = half * a;
            h.re[(j, i)] = half * a;
            h.im[(i, j)] = half * b;
            h.im[(j, i)] = -half * b;
        }
    }
    h
}

/// The two independent GUE blocks over spatial pair labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBody {
    pub sym: Hermitian,
    pub anti: Hermitian,
}

impl TwoBody {
    pub fn block(&self, ch: Channel) -> &Hermitian {
        match ch {
            Channel::Sym => &self.sym,
            Channel::Antisym => &self.anti,
        }
    }
}

/// Draw both blocks; the symmetric block is always drawn first.
pub fn sample_h2<R: Rng + ?Sized>(basis: &PairBasis, spec: &EnsembleSpec, rng: &mut R) -> TwoBody {
    let sym = sample_gue(basis.sym_dims.0, spec.var_sym, rng);
    let anti = sample_gue(basis.anti_dims.0, spec.var_anti, rng);
    TwoBody { sym, anti }
}

/// The two-body operator on normalized mode-pair occupation states,
/// `W = Σ_β C_β H C_βᵀ` per channel.
pub fn pair_matrix(basis: &PairBasis, h: &TwoBody) -> Hermitian {
    let n = basis.omega * basis.r;
    let np = n * (n + 1) / 2;
    let mut w = Hermitian::zeros(np);
    for ch in Channel::BOTH {
        let (dv, db) = basis.dims(ch);
        if dv == 0 || db == 0 {
            continue;
        }
        let states = basis.states(ch);
        let coeffs: Vec<Vec<(usize, f64)>> = states.iter().map(|s| occupation_coefficients(s, n)).collect();
        let blk = h.block(ch);
        for beta in 0..db {
            for v in 0..dv {
                let cv = &coeffs[v * db + beta];
                for vp in 0..dv {
                    let (hre, him) = (blk.re[(v, vp)], blk.im[(v, vp)]);
                    if hre == 0.0 && him == 0.0 {
                        continue;
                    }
                    for &(p, a) in cv {
                        for &(q, b) in &coeffs[vp * db + beta] {
                            w.re[(p, q)] += a * b * hre;
                            w.im[(p, q)] += a * b * him;
                        }
                    }
                }
            }
        }
    }
    w
}

/// Precomputed matrix elements of `P†_p P_q` within each weight sector.
///
/// For every (m−2)-particle intermediate state the group lists
/// `(pair, state, ⟨state|P†_pair|intermediate⟩)`.
#[derive(Debug, Clone)]
pub struct Embedder {
    groups: Vec<Vec<Vec<(u32, u32, f64)>>>,
    dims: Vec<usize>,
}

impl Embedder {
    pub fn new(space: &FockSpace) -> Self {
        let n = space.modes();
        let mut groups = Vec::with_capacity(space.sectors.len());
        for sec in &space.sectors {
            let mut by_x: std::collections::BTreeMap<Vec<u8>, Vec<(u32, u32, f64)>> = Default::default();
            for (col, occ) in sec.states.iter().enumerate() {
                for i in 0..n {
                    if occ[i] == 0 {
                        continue;
                    }
                    for j in i..n {
                        let need = if i == j { 2 } else { 1 };
                        if occ[j] < need {
                            continue;
                        }
                        let mut x = occ.clone();
                        x[i] -= 1;
                        x[j] -= 1;
                        let amp = if i == j {
                            ((occ[i] as f64) * (occ[i] as f64 - 1.0) / 2.0).sqrt()
                        } else {
                            ((occ[i] as f64) * (occ[j] as f64)).sqrt()
                        };
                        by_x.entry(x).or_default().push((pair_index(i, j, n) as u32, col as u32, amp));
                    }
                }
            }
            groups.push(by_x.into_values().collect());
        }
        Self { groups, dims: space.sectors.iter().map(|s| s.dim()).collect() }
    }

    /// Many-body matrices of the two-body operator `w`, one per sector.
    pub fn embed(&self, w: &Hermitian) -> Vec<Hermitian> {
        self.groups
            .iter()
            .zip(&self.dims)
            .map(|(groups, &d)| {
                let mut h = Hermitian::zeros(d);
                for g in groups {
                    for &(p, row, a) in g {
                        for &(q, col, b) in g {
                            let (p, q) = (p as usize, q as usize);
                            let (wr, wi) = (w.re[(p, q)], w.im[(p, q)]);
                            if wr != 0.0 || wi != 0.0 {
                                let ab = a * b;
                                h.re[(row as usize, col as usize)] += ab * wr;
                                h.im[(row as usize, col as usize)] += ab * wi;
                            }
                        }
                    }
                }
                h
            })
            .collect()
    }
}

/// Many-body Hamiltonian of one two-body draw on `space`.
pub fn embed_h(space: &FockSpace, basis: &PairBasis, h: &TwoBody) -> Vec<Hermitian> {
    Embedder::new(space).embed(&pair_matrix(basis, h))
}
