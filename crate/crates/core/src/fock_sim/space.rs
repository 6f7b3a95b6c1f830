use std::collections::HashMap;

use crate::error::{invalid, Error, Result};

/// Boson occupation numbers over the `Ω·r` modes, mode index `ω·r + σ`.
pub type Occupation = Vec<u8>;

/// Default upper bound on the number of Fock states.
pub const DEFAULT_FOCK_CAP: u128 = 50_000;

/// Reads `EGUE_FOCK_CAP`, falling back to [`DEFAULT_FOCK_CAP`].
pub fn fock_cap() -> u128 {
    std::env::var("EGUE_FOCK_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_FOCK_CAP)
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(Ωr + m − 1, m)`, the boson Fock dimension.
pub fn boson_fock_dim(omega: usize, r: usize, m: u32) -> u128 {
    binom((omega * r) as u128 + m as u128 - 1, m as u128)
}

/// States with fixed SU(r) weight: `weight[σ]` bosons carry internal label σ.
#[derive(Debug, Clone)]
pub struct Sector {
    pub weight: Vec<u32>,
    pub states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl Sector {
    fn new(omega: usize, r: usize, weight: Vec<u32>) -> Self {
        let per: Vec<Vec<Vec<u8>>> = weight.iter().map(|&n| compositions(n, omega)).collect();
        let mut states = Vec::new();
        let mut pick = vec![0usize; r];
        'outer: loop {
            let mut occ = vec![0u8; omega * r];
            for (s, &i) in pick.iter().enumerate() {
                for (o, &n) in per[s][i].iter().enumerate() {
                    occ[o * r + s] = n;
                }
            }
            states.push(occ);
            for s in (0..r).rev() {
                pick[s] += 1;
                if pick[s] < per[s].len() {
                    continue 'outer;
                }
                pick[s] = 0;
            }
            break;
        }
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { weight, states, index }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn position(&self, occ: &[u8]) -> Option<usize> {
        self.index.get(occ).copied()
    }
}

/// Distributions of `n` bosons over `k` boxes, lexicographically descending.
fn compositions(n: u32, k: usize) -> Vec<Vec<u8>> {
    if k == 1 {
        return vec![vec![n as u8]];
    }
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for mut rest in compositions(n - a, k - 1) {
            rest.insert(0, a as u8);
            out.push(rest);
        }
    }
    out
}

/// The m-boson Fock space of `Ω·r` modes, split into weight sectors.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub omega: usize,
    pub r: usize,
    pub m: u32,
    pub sectors: Vec<Sector>,
    full: bool,
}

impl FockSpace {
    /// Every weight sector.
    pub fn new(omega: usize, r: usize, m: u32) -> Result<Self> {
        Self::validate(omega, r, m)?;
        let dim = boson_fock_dim(omega, r, m);
        let cap = fock_cap();
        if dim > cap {
            return Err(Error::ResourceLimit { dim, cap });
        }
        let weights: Vec<Vec<u32>> = compositions(m, r).into_iter().map(|w| w.into_iter().map(u32::from).collect()).collect();
        Ok(Self {
            omega,
            r,
            m,
            sectors: weights.into_iter().map(|w| Sector::new(omega, r, w)).collect(),
            full: true,
        })
    }

    /// Only the listed weight sectors.
    pub fn with_weights(omega: usize, r: usize, weights: &[Vec<u32>]) -> Result<Self> {
        let Some(first) = weights.first() else {
            return invalid("at least one weight is required");
        };
        let m: u32 = first.iter().sum();
        Self::validate(omega, r, m)?;
        for w in weights {
            if w.len() != r || w.iter().sum::<u32>() != m {
                return invalid(format!("weight {w:?} is not a composition of {m} into {r} parts"));
            }
        }
        let dim: u128 = weights
            .iter()
            .map(|w| w.iter().map(|&n| binom((omega as u128) + n as u128 - 1, n as u128)).product::<u128>())
            .sum();
        let cap = fock_cap();
        if dim > cap {
            return Err(Error::ResourceLimit { dim, cap });
        }
        let full = weights.len() == compositions(m, r).len();
        Ok(Self {
            omega,
            r,
            m,
            sectors: weights.iter().map(|w| Sector::new(omega, r, w.clone())).collect(),
            full,
        })
    }

    fn validate(omega: usize, r: usize, m: u32) -> Result<()> {
        if omega < 1 || r < 1 {
            return invalid("omega and r must be positive");
        }
        if m > u8::MAX as u32 {
            return invalid("at most 255 particles are supported");
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.omega * self.r
    }

    /// True when every weight sector is present.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn dim(&self) -> usize {
        self.sectors.iter().map(Sector::dim).sum()
    }

    pub fn sector_of(&self, weight: &[u32]) -> Option<usize> {
        self.sectors.iter().position(|s| s.weight == weight)
    }
}
