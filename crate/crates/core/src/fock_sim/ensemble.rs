use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::blocks::{casimir_blocks, Block};
use super::hamiltonian::{pair_matrix, sample_h2, Embedder};
use super::pairs::PairBasis;
use super::space::FockSpace;
use crate::error::{invalid, Error, Result};
use crate::moments::EnsembleSpec;
use crate::young::{dim_u, IrrepState, Partition, Statistics};

/// Stream reserved for bootstrap resampling.
const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// A Monte Carlo run over `realizations` independent two-body draws.
#[derive(Debug, Clone)]
pub struct McRun {
    pub spec: EnsembleSpec,
    pub m: u32,
    pub realizations: usize,
    pub seed: u64,
    /// Blocks to report; empty means every block present.
    pub targets: Vec<IrrepState>,
    pub bootstrap: usize,
    /// Restrict the Fock space to these SU(r) weight sectors.
    pub weights: Option<Vec<Vec<u32>>>,
}

impl McRun {
    pub fn new(spec: EnsembleSpec, m: u32, realizations: usize, seed: u64) -> Self {
        Self { spec, m, realizations, seed, targets: Vec::new(), bootstrap: 200, weights: None }
    }

    pub fn with_targets(mut self, targets: Vec<IrrepState>) -> Self {
        self.targets = targets;
        self
    }

    pub fn with_weights(mut self, weights: Vec<Vec<u32>>) -> Self {
        self.weights = Some(weights);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.realizations < 2 {
            return invalid("at least two realizations are required");
        }
        if self.spec.statistics != Statistics::Boson {
            return invalid("the Fock-space simulation supports bosons only");
        }
        for t in &self.targets {
            if t.m != self.m || t.r != self.spec.r || t.statistics != self.spec.statistics {
                return invalid(format!("target {} is inconsistent with the run", t.f));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Result<FockSpace> {
        let (om, r) = (self.spec.omega, self.spec.r as usize);
        match &self.weights {
            Some(w) => FockSpace::with_weights(om, r, w),
            None => FockSpace::new(om, r, self.m),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockEstimate {
    pub irrep: Partition,
    pub casimir: f64,
    /// Observed Casimir eigenspace dimension.
    pub block_dim: usize,
    pub centroid_mean: f64,
    pub centroid_se: f64,
    pub h2_mean: f64,
    pub h2_se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEstimate {
    pub a: Partition,
    pub b: Partition,
    /// `mean(c_a c_b)`, using the known zero centroid mean.
    pub cov11: f64,
    pub cov11_se: f64,
    /// Sample covariance of the block variances.
    pub cov22: f64,
    pub cov22_se: f64,
    pub sigma11: f64,
    pub sigma11_se: f64,
    pub sigma22: f64,
    pub sigma22_se: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub omega: usize,
    pub r: u32,
    pub m: u32,
    pub seed: u64,
    pub realizations: usize,
    pub bootstrap: usize,
    pub full_space: bool,
    pub blocks: Vec<BlockEstimate>,
    pub pairs: Vec<PairEstimate>,
    /// Per-realization `(centroid, h2)` per block, in realization order.
    #[serde(skip)]
    pub samples: Vec<Vec<(f64, f64)>>,
}

impl McEstimate {
    pub fn block(&self, f: &Partition) -> Option<&BlockEstimate> {
        self.blocks.iter().find(|b| &b.irrep == f)
    }

    pub fn pair(&self, a: &Partition, b: &Partition) -> Option<&PairEstimate> {
        self.pairs.iter().find(|p| (&p.a == a && &p.b == b) || (&p.a == b && &p.b == a))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimate serializes")
    }

    /// One CSV row per block pair.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        w.write_record([
            "irrep_a", "irrep_b", "sigma11", "sigma11_se", "sigma22", "sigma22_se", "cov11", "cov22",
        ])
        .map_err(io)?;
        for p in &self.pairs {
            w.write_record([
                p.a.to_string(),
                p.b.to_string(),
                p.sigma11.to_string(),
                p.sigma11_se.to_string(),
                p.sigma22.to_string(),
                p.sigma22_se.to_string(),
                p.cov11.to_string(),
                p.cov22.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut s = 0.0;
    let mut n = 0;
    for x in xs {
        s += x;
        n += 1;
    }
    (s / n as f64, n)
}

/// Mean and standard error of the mean.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let (mu, n) = mean(xs.iter().copied());
    let var = xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n as f64 - 1.0);
    (mu, (var / n as f64).sqrt())
}

/// `(cov11, cov22, sigma11, sigma22)` over the realizations in `idx`.
fn pair_stats(samples: &[Vec<(f64, f64)>], idx: &[usize], i: usize, j: usize) -> [f64; 4] {
    let n = idx.len() as f64;
    let (mut cc, mut ha, mut hb, mut hab) = (0.0, 0.0, 0.0, 0.0);
    for &k in idx {
        let (a, b) = (samples[k][i], samples[k][j]);
        cc += a.0 * b.0;
        ha += a.1;
        hb += b.1;
        hab += a.1 * b.1;
    }
    let (cc, ha, hb) = (cc / n, ha / n, hb / n);
    let cov22 = (hab - n * ha * hb) / (n - 1.0);
    [cc, cov22, cc / (ha * hb).sqrt(), cov22 / (ha * hb)]
}

fn std_dev(xs: &[f64]) -> f64 {
    let (mu, n) = mean(xs.iter().copied());
    (xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n as f64 - 1.0)).sqrt()
}

/// Run the ensemble; output is identical for a given run regardless of the
/// rayon thread count.
pub fn run_ensemble(run: &McRun) -> Result<McEstimate> {
    run.validate()?;
    let space = run.space()?;
    let (om, r) = (run.spec.omega, run.spec.r as usize);
    let basis = PairBasis::new(om, r, Statistics::Boson)?;
    let mut blocks: Vec<Block> = casimir_blocks(&space)?;
    if !run.targets.is_empty() {
        let mut chosen = Vec::new();
        for t in &run.targets {
            match blocks.iter().find(|b| b.irrep == t.f) {
                Some(b) => chosen.push(b.clone()),
                None => return invalid(format!("irrep {} has no block in this space", t.f)),
            }
        }
        blocks = chosen;
    }
    if space.is_full() {
        for b in &blocks {
            let want = dim_u(&b.irrep, om)? * dim_u(&b.irrep, r)?;
            if want != b.dim.into() {
                return Err(Error::BlockDimensionMismatch {
                    irrep: b.irrep.to_string(),
                    expected: u128::try_from(want).unwrap_or(u128::MAX),
                    found: b.dim as u128,
                });
            }
        }
    }
    let embedder = Embedder::new(&space);
    let samples: Vec<Vec<(f64, f64)>> = (0..run.realizations)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            rng.set_stream(k as u64);
            let h = sample_h2(&basis, &run.spec, &mut rng);
            let many = embedder.embed(&pair_matrix(&basis, &h));
            blocks.iter().map(|b| b.moments(&many)).collect()
        })
        .collect();

    let mut estimates = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        let c: Vec<f64> = samples.iter().map(|s| s[i].0).collect();
        let h: Vec<f64> = samples.iter().map(|s| s[i].1).collect();
        let (cm, cse) = mean_se(&c);
        let (hm, hse) = mean_se(&h);
        estimates.push(BlockEstimate {
            irrep: b.irrep.clone(),
            casimir: b.casimir,
            block_dim: b.dim,
            centroid_mean: cm,
            centroid_se: cse,
            h2_mean: hm,
            h2_se: hse,
        });
    }

    let n = run.realizations;
    let all: Vec<usize> = (0..n).collect();
    let resamples: Vec<Vec<usize>> = {
        let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
        rng.set_stream(BOOTSTRAP_STREAM);
        (0..run.bootstrap).map(|_| (0..n).map(|_| rng.random_range(0..n)).collect()).collect()
    };
    let mut pairs = Vec::new();
    for i in 0..blocks.len() {
        for j in i..blocks.len() {
            let point = pair_stats(&samples, &all, i, j);
            let boot: Vec<[f64; 4]> = resamples.iter().map(|idx| pair_stats(&samples, idx, i, j)).collect();
            let se = |q: usize| {
                if boot.len() < 2 {
                    f64::NAN
                } else {
                    std_dev(&boot.iter().map(|x| x[q]).collect::<Vec<_>>())
                }
            };
            pairs.push(PairEstimate {
                a: blocks[i].irrep.clone(),
                b: blocks[j].irrep.clone(),
                cov11: point[0],
                cov11_se: se(0),
                cov22: point[1],
                cov22_se: se(1),
                sigma11: point[2],
                sigma11_se: se(2),
                sigma22: point[3],
                sigma22_se: se(3),
            });
        }
    }
    Ok(McEstimate {
        omega: om,
        r: run.spec.r,
        m: run.m,
        seed: run.seed,
        realizations: n,
        bootstrap: run.bootstrap,
        full_space: space.is_full(),
        blocks: estimates,
        pairs,
        samples,
    })
}
