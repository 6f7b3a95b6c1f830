use nalgebra::{DMatrix, DVector};

use super::blocks::Block;
use super::hamiltonian::{pair_matrix, Embedder, Hermitian, TwoBody};
use super::pairs::PairBasis;
use super::space::FockSpace;
use crate::moments::EnsembleSpec;
use crate::young::{Channel, Partition};

/// Ensemble averages over the Gaussian two-body couplings, evaluated
/// exactly by Wick contraction in the Fock basis.
#[derive(Debug, Clone)]
pub struct ExactMoments {
    pub irreps: Vec<Partition>,
    /// `E[⟨H²⟩_f]` per block.
    pub h2: Vec<f64>,
    /// `E[⟨H⟩_f ⟨H⟩_g]`; the centroids have zero mean.
    pub centroid_cov: DMatrix<f64>,
    /// `Cov(⟨H²⟩_f, ⟨H²⟩_g)`.
    pub h2_cov: DMatrix<f64>,
}

impl ExactMoments {
    fn index(&self, f: &Partition) -> Option<usize> {
        self.irreps.iter().position(|x| x == f)
    }

    pub fn h2_of(&self, f: &Partition) -> Option<f64> {
        self.index(f).map(|i| self.h2[i])
    }

    pub fn sigma11(&self, a: &Partition, b: &Partition) -> Option<f64> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Some(self.centroid_cov[(i, j)] / (self.h2[i] * self.h2[j]).sqrt())
    }

    pub fn sigma22(&self, a: &Partition, b: &Partition) -> Option<f64> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Some(self.h2_cov[(i, j)] / (self.h2[i] * self.h2[j]))
    }
}

/// Real coordinates of one GUE block with their variances.
fn coordinates(d: usize, var: f64) -> Vec<(Hermitian, f64)> {
    let mut out = Vec::with_capacity(d * d);
    for v in 0..d {
        let mut g = Hermitian::zeros(d);
        g.re[(v, v)] = 1.0;
        out.push((g, var));
        for w in v + 1..d {
            let mut g = Hermitian::zeros(d);
            g.re[(v, w)] = 1.0;
            g.re[(w, v)] = 1.0;
            out.push((g, var / 2.0));
            let mut g = Hermitian::zeros(d);
            g.im[(v, w)] = 1.0;
            g.im[(w, v)] = -1.0;
            out.push((g, var / 2.0));
        }
    }
    out
}

/// Exact block moments for the ensemble `spec` on `space`.
pub fn exact_moments(space: &FockSpace, basis: &PairBasis, spec: &EnsembleSpec, blocks: &[Block]) -> ExactMoments {
    let embedder = Embedder::new(space);
    let (ds, da) = (basis.sym_dims.0, basis.anti_dims.0);
    let mut coords: Vec<(TwoBody, f64)> = Vec::new();
    for ch in Channel::BOTH {
        let var = spec.variance(ch);
        if var == 0.0 || basis.dims(ch).1 == 0 {
            continue;
        }
        let d = basis.dims(ch).0;
        for (g, v) in coordinates(d, var) {
            let tb = match ch {
                Channel::Sym => TwoBody { sym: g, anti: Hermitian::zeros(da) },
                Channel::Antisym => TwoBody { sym: Hermitian::zeros(ds), anti: g },
            };
            coords.push((tb, v));
        }
    }
    let nb = blocks.len();
    let nc = coords.len();
    // Per block: column k is the flattened projection V†G_kV, and t[k] = tr/dim.
    let mut flat: Vec<DMatrix<f64>> = Vec::with_capacity(nb);
    let mut traces: Vec<DVector<f64>> = Vec::with_capacity(nb);
    for b in blocks {
        let len: usize = b.parts.iter().map(|(_, v)| 2 * v.ncols() * v.ncols()).sum();
        flat.push(DMatrix::zeros(len, nc));
        traces.push(DVector::zeros(nc));
    }
    for (k, (tb, _)) in coords.iter().enumerate() {
        let g = embedder.embed(&pair_matrix(basis, tb));
        for (bi, b) in blocks.iter().enumerate() {
            let mut off = 0;
            let mut tr = 0.0;
            for (s, v) in &b.parts {
                let re = v.transpose() * &g[*s].re * v;
                let im = v.transpose() * &g[*s].im * v;
                tr += re.trace();
                for x in re.iter().chain(im.iter()) {
                    flat[bi][(off, k)] = *x;
                    off += 1;
                }
            }
            traces[bi][k] = tr / b.dim as f64;
        }
    }
    let sig = DVector::from_iterator(nc, coords.iter().map(|(_, v)| *v));
    let grams: Vec<DMatrix<f64>> = blocks
        .iter()
        .zip(&flat)
        .map(|(b, a)| a.transpose() * a / b.dim as f64)
        .collect();
    let h2: Vec<f64> = grams.iter().map(|m| m.diagonal().dot(&sig)).collect();
    let mut centroid_cov = DMatrix::zeros(nb, nb);
    let mut h2_cov = DMatrix::zeros(nb, nb);
    for i in 0..nb {
        for j in 0..nb {
            centroid_cov[(i, j)] = traces[i].component_mul(&traces[j]).dot(&sig);
            let mut acc = 0.0;
            for k in 0..nc {
                for l in 0..nc {
                    acc += sig[k] * sig[l] * grams[i][(k, l)] * grams[j][(k, l)];
                }
            }
            h2_cov[(i, j)] = 2.0 * acc;
        }
    }
    ExactMoments { irreps: blocks.iter().map(|b| b.irrep.clone()).collect(), h2, centroid_cov, h2_cov }
}
