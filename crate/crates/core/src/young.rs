//! Young-diagram combinatorics: dimensions, two-box removals, axial
//! distances, Π-products and Casimir eigenvalues. Everything here is exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A weakly decreasing list of row lengths with trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("parts {parts:?} are not weakly decreasing"));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    /// Single-row diagram `{m}`.
    pub fn row(m: u32) -> Self {
        if m == 0 {
            Self::default()
        } else {
            Self { parts: vec![m] }
        }
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Total box count `m`.
    pub fn boxes(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Length of row `i` (1-based); zero past the last row.
    pub fn get(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `n` (never truncates).
    pub fn padded(&self, n: usize) -> Vec<u32> {
        let mut v = self.parts.clone();
        if v.len() < n {
            v.resize(n, 0);
        }
        v
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.is_empty() {
            return invalid("empty irrep string");
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad part {p:?} in irrep {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Two-particle spatial symmetry channel: `{2}` or `{1²}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Channel {
    Sym,
    Antisym,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Sym, Channel::Antisym];

    pub fn label(self) -> &'static str {
        match self {
            Channel::Sym => "SYM",
            Channel::Antisym => "ANTISYM",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Channels supported by a removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Channels {
    pub sym: bool,
    pub anti: bool,
}

impl Channels {
    pub fn contains(self, ch: Channel) -> bool {
        match ch {
            Channel::Sym => self.sym,
            Channel::Antisym => self.anti,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowPattern {
    AA,
    AB,
}

/// A legal removal of two boxes `f_m → f_{m-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Removal {
    pub child: Partition,
    /// 1-based rows `(a, b)` with `a <= b`.
    pub rows: (usize, usize),
    pub channels: Channels,
    pub pattern: RowPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Boson => "BOSON",
            Statistics::Fermion => "FERMION",
        })
    }
}

impl FromStr for Statistics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "bosons" | "b" => Ok(Statistics::Boson),
            "fermion" | "fermions" | "f" => Ok(Statistics::Fermion),
            _ => invalid(format!("unknown statistics {s:?}")),
        }
    }
}

/// An ensemble block: `m` particles in U(Ω) irrep `f` paired with an SU(r) irrep.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IrrepState {
    pub m: u32,
    pub f: Partition,
    pub r: u32,
    pub statistics: Statistics,
}

impl IrrepState {
    pub fn new(f: Partition, r: u32, statistics: Statistics) -> Result<Self> {
        if r < 1 {
            return invalid("rank r must be at least 1");
        }
        match statistics {
            Statistics::Boson if f.rows() > r as usize => {
                return invalid(format!("boson irrep {f} has more than r={r} rows"))
            }
            Statistics::Fermion if f.get(1) > r => {
                return invalid(format!("fermion irrep {f} has a row longer than r={r}"))
            }
            _ => {}
        }
        Ok(Self { m: f.boxes(), f, r, statistics })
    }

    /// The SU(r) irrep `F_m` paired with `f`.
    pub fn su_r_irrep(&self) -> Partition {
        match self.statistics {
            Statistics::Boson => self.f.clone(),
            Statistics::Fermion => transpose(&self.f),
        }
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Dimension of the U(Ω) irrep `f`; zero for diagrams taller than Ω.
pub fn dim_u(f: &Partition, omega: usize) -> Result<BigUint> {
    if omega < 1 {
        return invalid("omega must be at least 1");
    }
    if f.rows() > omega {
        return Ok(BigUint::zero());
    }
    let p = f.padded(omega);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..omega {
        for j in i + 1..omega {
            num *= (p[i] - p[j]) as u64 + (j - i) as u64;
            den *= (j - i) as u64;
        }
    }
    Ok(num / den)
}

/// Dimension of the symmetric-group irrep `f` of `S_m`.
pub fn dim_sm(f: &Partition) -> BigUint {
    let p = f.rows();
    if p == 0 {
        return BigUint::one();
    }
    let l: Vec<u64> = (0..p).map(|i| (f.parts[i] as usize + p - 1 - i) as u64).collect();
    let mut num = factorial(f.boxes() as u64);
    for i in 0..p {
        for k in i + 1..p {
            num *= l[i] - l[k];
        }
    }
    let den = l.iter().fold(BigUint::one(), |acc, &x| acc * factorial(x));
    num / den
}

fn is_subdiagram(child: &Partition, parent: &Partition) -> bool {
    child.rows() <= parent.rows() && (1..=child.rows()).all(|i| child.get(i) <= parent.get(i))
}

/// `dim_sm(child) / dim_sm(parent)` for a two-box removal.
pub fn dim_ratio_sm(child: &Partition, parent: &Partition) -> Result<BigRational> {
    if child.boxes() + 2 != parent.boxes() || !is_subdiagram(child, parent) {
        return invalid(format!("{child} is not a two-box removal from {parent}"));
    }
    Ok(BigRational::new(
        BigInt::from(dim_sm(child)),
        BigInt::from(dim_sm(parent)),
    ))
}

/// All legal two-box removals, ordered lexicographically by rows.
pub fn removals(f: &Partition) -> Result<Vec<Removal>> {
    if f.boxes() < 2 {
        return invalid(format!("{f} has fewer than two boxes"));
    }
    let p = f.rows();
    let mut out = Vec::new();
    for a in 0..p {
        for b in a..p {
            let mut g = f.parts.clone();
            if g[a] == 0 {
                continue;
            }
            g[a] -= 1;
            if g[b] == 0 {
                continue;
            }
            g[b] -= 1;
            if g.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            let (channels, pattern) = if a == b {
                (Channels { sym: true, anti: false }, RowPattern::AA)
            } else {
                let distinct_cols = f.parts[a] != f.parts[b];
                (Channels { sym: distinct_cols, anti: true }, RowPattern::AB)
            };
            out.push(Removal {
                child: Partition::new(g)?,
                rows: (a + 1, b + 1),
                channels,
                pattern,
            });
        }
    }
    Ok(out)
}

/// `τ_ij = f_i − f_j + j − i` on `f` padded to Ω rows.
pub fn axial_distance(f: &Partition, i: usize, j: usize, omega: usize) -> Result<i64> {
    if i == j {
        return invalid("axial distance needs distinct rows");
    }
    if i < 1 || j < 1 || i > omega || j > omega {
        return invalid(format!("rows ({i},{j}) outside 1..={omega}"));
    }
    Ok(f.get(i) as i64 - f.get(j) as i64 + j as i64 - i as i64)
}

/// Which Π-product to evaluate for row `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiVariant {
    /// `Π′_a`: all rows but `a`, factors `1 − 1/τ`.
    Prime,
    /// `Π″_a`: all rows but `a`, factors `1 − 2/τ`.
    DoublePrime,
    /// `Π_a^{(b)}`.
    Excluding(usize),
    /// `Π_a^{(bc)}`.
    Excluding2(usize, usize),
}

/// Π-product over `i = 1..=Ω` minus the excluded rows, evaluated on the parent `f`.
pub fn pi_product(f: &Partition, omega: usize, a: usize, variant: PiVariant) -> Result<BigRational> {
    if a < 1 || a > omega {
        return invalid(format!("row {a} outside 1..={omega}"));
    }
    let (step, excl): (i64, Vec<usize>) = match variant {
        PiVariant::Prime => (1, vec![]),
        PiVariant::DoublePrime => (2, vec![]),
        PiVariant::Excluding(b) => (1, vec![b]),
        PiVariant::Excluding2(b, c) => (1, vec![b, c]),
    };
    let mut v = BigRational::one();
    for i in 1..=omega {
        if i == a || excl.contains(&i) {
            continue;
        }
        let t = axial_distance(f, a, i, omega)?;
        if t == 0 || t == step {
            return Err(Error::SingularConfiguration(format!(
                "Π factor vanishes or diverges for {f} at rows ({a},{i}), τ={t}"
            )));
        }
        v *= BigRational::new(BigInt::from(t - step), BigInt::from(t));
    }
    Ok(v)
}

/// Transposed diagram `f̃`.
pub fn transpose(f: &Partition) -> Partition {
    let cols = f.get(1) as usize;
    let parts = (1..=cols)
        .map(|c| f.parts.iter().filter(|&&x| x as usize >= c).count() as u32)
        .collect::<Vec<_>>();
    Partition { parts }
}

/// Conjugate `f̄ = {f₁−f_n, …, f₁−f₂, 0}` within an `n`-row budget.
pub fn conjugate_within(f: &Partition, n: usize) -> Result<Partition> {
    if f.rows() > n {
        return invalid(format!("{f} has more than {n} rows"));
    }
    let p = f.padded(n);
    let top = p.first().copied().unwrap_or(0);
    Partition::new(p.iter().rev().map(|&x| top - x).collect::<Vec<_>>())
}

/// `C₂[SU(3)] = λ² + μ² + λμ + 3(λ+μ)`.
pub fn casimir_su3(f: &Partition) -> Result<i64> {
    if f.rows() > 3 {
        return invalid(format!("{f} has more than three rows"));
    }
    let lam = (f.get(1) - f.get(2)) as i64;
    let mu = (f.get(2) - f.get(3)) as i64;
    Ok(lam * lam + mu * mu + lam * mu + 3 * (lam + mu))
}

/// `F(F+1)` with `F = (f₁ − f₂)/2`.
pub fn casimir_su2(f: &Partition) -> Result<BigRational> {
    if f.rows() > 2 {
        return invalid(format!("{f} has more than two rows"));
    }
    let d = (f.get(1) - f.get(2)) as i64;
    Ok(BigRational::new(BigInt::from(d * (d + 2)), BigInt::from(4)))
}

/// Eigenvalue of `Σ_{st} E_st E_ts` of U(r) on irrep `f`: `Σ_i f_i(f_i + r + 1 − 2i)`.
pub fn casimir_u(f: &Partition, r: usize) -> Result<i64> {
    if f.rows() > r {
        return invalid(format!("{f} has more than {r} rows"));
    }
    Ok((1..=r)
        .map(|i| {
            let fi = f.get(i) as i64;
            fi * (fi + r as i64 + 1 - 2 * i as i64)
        })
        .sum())
}

/// Partitions of `m` with at most `max_rows` rows, in reverse lexicographic order.
pub fn partitions(m: u32, max_rows: usize) -> Vec<Partition> {
    fn go(n: u32, cap: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows == 0 {
            return;
        }
        for k in (1..=n.min(cap)).rev() {
            cur.push(k);
            go(n - k, k, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, max_rows, &mut Vec::new(), &mut out);
    out
}
