use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::ToPrimitive;
use serde::Serialize;

use super::hamiltonian::Hermitian;
use super::space::{FockSpace, Sector};
use crate::error::{Error, Result};
use crate::young::{casimir_su2, casimir_su3, casimir_u, dim_u, partitions, Partition};

/// One labelled symmetry block: orthonormal columns spanning the block
/// inside each weight sector.
#[derive(Debug, Clone)]
pub struct Block {
    pub irrep: Partition,
    /// SU(r) quadratic Casimir (F(F+1) at r = 2, `C₂[SU(3)]` at r = 3,
    /// the U(r) value otherwise).
    pub casimir: f64,
    pub dim: usize,
    pub parts: Vec<(usize, DMatrix<f64>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSummary {
    pub irrep: Partition,
    pub casimir: f64,
    pub dim: usize,
}

impl Block {
    pub fn summary(&self) -> BlockSummary {
        BlockSummary { irrep: self.irrep.clone(), casimir: self.casimir, dim: self.dim }
    }

    /// `(Tr(HP)/d, Tr(H²P)/d)` for the block projector `P`.
    pub fn moments(&self, h: &[Hermitian]) -> (f64, f64) {
        let mut tr1 = 0.0;
        let mut tr2 = 0.0;
        for (s, v) in &self.parts {
            let hv_re = &h[*s].re * v;
            let hv_im = &h[*s].im * v;
            tr1 += v.dot(&hv_re);
            tr2 += hv_re.norm_squared() + hv_im.norm_squared();
        }
        (tr1 / self.dim as f64, tr2 / self.dim as f64)
    }
}

fn su_casimir(f: &Partition, r: usize) -> f64 {
    match r {
        2 => casimir_su2(f).ok().and_then(|x| x.to_f64()).unwrap_or(f64::NAN),
        3 => casimir_su3(f).map(|x| x as f64).unwrap_or(f64::NAN),
        _ => casimir_u(f, r).map(|x| x as f64).unwrap_or(f64::NAN),
    }
}

/// `Σ_{st} E_st E_ts` on one weight sector, by direct action on occupations.
pub fn casimir_matrix(space: &FockSpace, sector: &Sector) -> DMatrix<f64> {
    let (om, r) = (space.omega, space.r);
    let d = sector.dim();
    let mut c = DMatrix::zeros(d, d);
    for (col, occ) in sector.states.iter().enumerate() {
        for s in 0..r {
            for t in 0..r {
                for o in 0..om {
                    // E_ts: move one particle at orbital o from s to t.
                    let (from, to) = (o * r + s, o * r + t);
                    if occ[from] == 0 {
                        continue;
                    }
                    let mut st = occ.clone();
                    let mut a = (st[from] as f64).sqrt();
                    st[from] -= 1;
                    a *= (st[to] as f64 + 1.0).sqrt();
                    st[to] += 1;
                    for o2 in 0..om {
                        // E_st: move one particle at orbital o2 from t to s.
                        let (from2, to2) = (o2 * r + t, o2 * r + s);
                        if st[from2] == 0 {
                            continue;
                        }
                        let mut st2 = st.clone();
                        let mut a2 = a * (st2[from2] as f64).sqrt();
                        st2[from2] -= 1;
                        a2 *= (st2[to2] as f64 + 1.0).sqrt();
                        st2[to2] += 1;
                        let row = sector.position(&st2).expect("Casimir preserves the weight");
                        c[(row, col)] += a2;
                    }
                }
            }
        }
    }
    c
}

/// Decompose `space` into SU(r) Casimir eigenspaces labelled by boson irreps
/// `f = F` with at most `min(r, Ω)` rows.
///
/// On a full space each block dimension is checked against
/// `dim_U(Ω)(f)·dim_U(r)(f)`.
pub fn casimir_blocks(space: &FockSpace) -> Result<Vec<Block>> {
    let (om, r, m) = (space.omega, space.r, space.m);
    let candidates: Vec<Partition> = partitions(m, r.min(om));
    let eig_of = |f: &Partition| casimir_u(f, r).expect("row count bounded by r");
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            if eig_of(a) == eig_of(b) {
                return Err(Error::AmbiguousBlock(format!(
                    "irreps {a} and {b} share Casimir eigenvalue {} at m={m}",
                    eig_of(a)
                )));
            }
        }
    }
    let mut blocks: Vec<Block> = candidates
        .iter()
        .map(|f| Block { irrep: f.clone(), casimir: su_casimir(f, r), dim: 0, parts: Vec::new() })
        .collect();
    for (si, sec) in space.sectors.iter().enumerate() {
        let eig = SymmetricEigen::new(casimir_matrix(space, sec));
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); candidates.len()];
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            let pos = candidates.iter().position(|f| (eig_of(f) as f64 - lam).abs() < 1e-6);
            match pos {
                Some(p) => cols[p].push(k),
                None => {
                    return Err(Error::AmbiguousBlock(format!(
                        "Casimir eigenvalue {lam} in sector {:?} matches no irrep",
                        sec.weight
                    )))
                }
            }
        }
        for (p, ks) in cols.into_iter().enumerate() {
            if ks.is_empty() {
                continue;
            }
            let v = eig.eigenvectors.select_columns(ks.iter());
            blocks[p].dim += ks.len();
            blocks[p].parts.push((si, v));
        }
    }
    if space.is_full() {
        for b in &blocks {
            let expected = dim_u(&b.irrep, om)? * dim_u(&b.irrep, r)?;
            let expected = expected.to_u128().unwrap_or(u128::MAX);
            if expected != b.dim as u128 {
                return Err(Error::BlockDimensionMismatch {
                    irrep: b.irrep.to_string(),
                    expected,
                    found: b.dim as u128,
                });
            }
        }
    }
    blocks.retain(|b| b.dim > 0);
    Ok(blocks)
}

/// Image of one state under a generator: target sector and `(row, amplitude)` terms.
type Image = Option<(usize, Vec<(usize, f64)>)>;

/// Largest entry of `[H, E_st]` for the SU(r) generator
/// `E_st = Σ_ω a†_{ωs} a_{ωt}` with `s ≠ t`; requires a full space.
pub fn generator_commutator(space: &FockSpace, h: &[Hermitian], s: usize, t: usize) -> f64 {
    let r = space.r;
    let apply = |occ: &[u8]| -> Image {
        let mut out = Vec::new();
        let mut sector = None;
        for o in 0..space.omega {
            let (from, to) = (o * r + t, o * r + s);
            if occ[from] == 0 {
                continue;
            }
            let mut st = occ.to_vec();
            let mut a = (st[from] as f64).sqrt();
            st[from] -= 1;
            a *= (st[to] as f64 + 1.0).sqrt();
            st[to] += 1;
            let w: Vec<u32> = (0..r).map(|sig| (0..space.omega).map(|oo| st[oo * r + sig] as u32).sum()).collect();
            let si = space.sector_of(&w)?;
            sector = Some(si);
            out.push((space.sectors[si].position(&st)?, a));
        }
        sector.map(|si| (si, out))
    };
    let mut worst = 0.0f64;
    for (wi, sec) in space.sectors.iter().enumerate() {
        let d = sec.dim();
        let mut target = None;
        let images: Vec<Image> = sec.states.iter().map(|o| apply(o)).collect();
        for im in images.iter().flatten() {
            target = Some(im.0);
        }
        let Some(tw) = target else { continue };
        let dt = space.sectors[tw].dim();
        for col in 0..d {
            let mut re = vec![0.0; dt];
            let mut imv = vec![0.0; dt];
            if let Some((_, img)) = &images[col] {
                for &(y, a) in img {
                    for row in 0..dt {
                        re[row] += a * h[tw].re[(row, y)];
                        imv[row] += a * h[tw].im[(row, y)];
                    }
                }
            }
            for (i, image) in images.iter().enumerate() {
                let (hr, hi) = (h[wi].re[(i, col)], h[wi].im[(i, col)]);
                if hr == 0.0 && hi == 0.0 {
                    continue;
                }
                if let Some((_, img)) = image {
                    for &(y, a) in img {
                        re[y] -= a * hr;
                        imv[y] -= a * hi;
                    }
                }
            }
            for k in 0..dt {
                worst = worst.max(re[k].abs()).max(imv[k].abs());
            }
        }
    }
    worst
}
