//! Positive-definite integral lattices, short-vector enumeration, genus-one
//! theta series and characters `theta_L / eta^n`, and genus-two theta
//! series as exact tables in `q1^a q2^b r^c`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{rat, Scalar};
use crate::modular_forms::{eta_power, QExpansion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Builtin {
    A1,
    Z,
    E8,
    D16plus,
    E8PlusE8,
    Sqrt2E8,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [Builtin::A1, Builtin::Z, Builtin::E8, Builtin::D16plus, Builtin::E8PlusE8, Builtin::Sqrt2E8];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::A1 => "A1",
            Builtin::Z => "Z",
            Builtin::E8 => "E8",
            Builtin::D16plus => "D16plus",
            Builtin::E8PlusE8 => "E8_plus_E8",
            Builtin::Sqrt2E8 => "sqrt2_E8",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lattice {s:?}")))
    }
}

/// A lattice given by its Gram matrix in some basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    name: String,
    gram: Vec<Vec<i64>>,
    /// Basis in doubled coordinates (so half-integral models stay integral).
    model: Option<Vec<Vec<i64>>>,
}

/// `{rank, gram}` or `{builtin}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeJson {
    Builtin { builtin: String },
    Gram { rank: usize, gram: Vec<Vec<i64>> },
}

impl Lattice {
    pub fn new(name: impl Into<String>, gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::BadGram("gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::BadGram(format!("gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        if leading_minors(&gram).iter().any(|m| !m.is_positive()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Lattice { name: name.into(), gram, model: None })
    }

    /// Lattice spanned by rows of `basis`, given in doubled coordinates.
    fn from_doubled_basis(name: &str, basis: Vec<Vec<i64>>) -> Result<Self> {
        let gram = basis
            .iter()
            .map(|u| {
                basis
                    .iter()
                    .map(|v| {
                        let dot: i64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                        debug_assert_eq!(dot % 4, 0);
                        dot / 4
                    })
                    .collect()
            })
            .collect();
        let mut l = Lattice::new(name, gram)?;
        l.model = Some(basis);
        Ok(l)
    }

    pub fn builtin(b: Builtin) -> Self {
        let l = match b {
            Builtin::A1 => Lattice::new("A1", vec![vec![2]]),
            Builtin::Z => Lattice::new("Z", vec![vec![1]]),
            Builtin::E8 => d_plus("E8", 8),
            Builtin::D16plus => d_plus("D16plus", 16),
            Builtin::E8PlusE8 => {
                let e8 = Lattice::builtin(Builtin::E8);
                Ok(e8.direct_sum(&e8).renamed("E8_plus_E8"))
            }
            Builtin::Sqrt2E8 => {
                let e8 = Lattice::builtin(Builtin::E8);
                Ok(e8.scaled(2).renamed("sqrt2_E8"))
            }
        };
        l.expect("built-in lattices are positive definite")
    }

    pub fn from_json(j: &LatticeJson) -> Result<Self> {
        match j {
            LatticeJson::Builtin { builtin } => Ok(Lattice::builtin(builtin.parse()?)),
            LatticeJson::Gram { rank, gram } => {
                if gram.len() != *rank {
                    return Err(Error::BadGram(format!("rank {rank} but {} rows", gram.len())));
                }
                Lattice::new(format!("gram lattice of rank {rank}"), gram.clone())
            }
        }
    }

    /// The zero lattice.
    pub fn zero() -> Self {
        Lattice { name: "0".into(), gram: Vec::new(), model: None }
    }

    fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            gram[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].copy_from_slice(&other.gram[i]);
        }
        let model = match (&self.model, &other.model) {
            (Some(a), Some(b)) => {
                let (da, db) = (a.first().map_or(0, Vec::len), b.first().map_or(0, Vec::len));
                let mut rows: Vec<Vec<i64>> = a.iter().map(|r| r.iter().copied().chain(std::iter::repeat(0).take(db)).collect()).collect();
                rows.extend(b.iter().map(|r| std::iter::repeat(0).take(da).chain(r.iter().copied()).collect()));
                Some(rows)
            }
            _ => None,
        };
        Lattice { name: format!("{} + {}", self.name, other.name), gram, model }
    }

    /// Same basis with the form multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Lattice {
        Lattice {
            name: format!("{k}*{}", self.name),
            gram: self.gram.iter().map(|r| r.iter().map(|x| x * k).collect()).collect(),
            model: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Basis in doubled coordinates, for the coordinate-model built-ins.
    pub fn model(&self) -> Option<&[Vec<i64>]> {
        self.model.as_deref()
    }

    pub fn determinant(&self) -> BigInt {
        leading_minors(&self.gram).last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_one()
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            let mut row = 0;
            for j in 0..n {
                row += self.gram[i][j] * v[j];
            }
            s += v[i] * row;
        }
        s
    }

    pub fn inner(&self, u: &[i64], v: &[i64]) -> i64 {
        let n = self.rank();
        (0..n).map(|i| u[i] * (0..n).map(|j| self.gram[i][j] * v[j]).sum::<i64>()).sum()
    }
}

/// `D_n^+`: basis `h, e_2 - e_3, ..., e_(n-1) - e_n, e_(n-1) + e_n` with
/// `h = (1/2, ..., 1/2)`.
fn d_plus(name: &str, n: usize) -> Result<Lattice> {
    let mut basis = vec![vec![1i64; n]];
    for i in 1..n - 1 {
        let mut v = vec![0; n];
        v[i] = 2;
        v[i + 1] = -2;
        basis.push(v);
    }
    let mut last = vec![0; n];
    last[n - 2] = 2;
    last[n - 1] = 2;
    basis.push(last);
    Lattice::from_doubled_basis(name, basis)
}

/// Leading principal minors by fraction-free elimination.
fn leading_minors(g: &[Vec<i64>]) -> Vec<BigInt> {
    let n = g.len();
    let mut a: Vec<Vec<BigInt>> = g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            // a zero pivot means this leading minor vanishes
            minors.push(BigInt::zero());
            return minors;
        }
        minors.push(a[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    minors
}

/// Completed-square form `Q(x) = sum_i q_ii (x_i + sum_(j>i) q_ij x_j)^2`.
fn completed_square(g: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut q: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    q
}

struct Enumerator<'a> {
    gram: &'a [Vec<i64>],
    q: Vec<Vec<f64>>,
    bound: i64,
}

impl Enumerator<'_> {
    /// Visits every `x` with `x^T G x <= bound`, passing the exact norm.
    /// `x[n-1]` is fixed to `top`.
    fn run(&self, top: i64, visit: &mut impl FnMut(&[i64], i64)) {
        let n = self.gram.len();
        let mut x = vec![0i64; n];
        x[n - 1] = top;
        let centre_term = self.q[n - 1][n - 1] * (top as f64).powi(2);
        let remaining = self.bound as f64 - centre_term;
        if remaining < -1e-6 {
            return;
        }
        let exact = self.gram[n - 1][n - 1] * top * top;
        self.level(n - 1, &mut x, remaining, exact, visit);
    }

    fn level(&self, done: usize, x: &mut [i64], remaining: f64, exact: i64, visit: &mut impl FnMut(&[i64], i64)) {
        if done == 0 {
            if exact <= self.bound {
                visit(x, exact);
            }
            return;
        }
        let i = done - 1;
        let n = x.len();
        let mut centre = 0.0;
        let mut cross = 0i64;
        for j in i + 1..n {
            centre -= self.q[i][j] * x[j] as f64;
            cross += self.gram[i][j] * x[j];
        }
        let qii = self.q[i][i];
        let radius = (remaining.max(0.0) / qii).sqrt() + 1e-9;
        let lo = (centre - radius).ceil() as i64;
        let hi = (centre + radius).floor() as i64;
        let gii = self.gram[i][i];
        for xi in lo..=hi {
            let d = xi as f64 - centre;
            let rest = remaining - qii * d * d;
            if rest < -1e-6 {
                continue;
            }
            x[i] = xi;
            self.level(i, x, rest, exact + gii * xi * xi + 2 * xi * cross, visit);
        }
        x[i] = 0;
    }

    fn top_range(&self) -> std::ops::RangeInclusive<i64> {
        let n = self.gram.len();
        let r = (self.bound as f64 / self.q[n - 1][n - 1]).sqrt() + 1e-9;
        (-(r.floor() as i64))..=(r.floor() as i64)
    }
}

/// Vector counts by norm: entry `k` is the number of `x` with `x^T G x = k`,
/// for `k <= norm_bound`.
pub fn short_vectors(l: &Lattice, norm_bound: i64) -> Result<Vec<u64>> {
    if norm_bound < 0 {
        return Err(Error::InvalidArgument(format!("norm bound must be non-negative, got {norm_bound}")));
    }
    let size = norm_bound as usize + 1;
    if l.rank() == 0 {
        let mut out = vec![0; size];
        out[0] = 1;
        return Ok(out);
    }
    let e = Enumerator { gram: &l.gram, q: completed_square(&l.gram), bound: norm_bound };
    let tops: Vec<i64> = e.top_range().collect();
    Ok(tops
        .par_iter()
        .map(|&top| {
            let mut counts = vec![0u64; size];
            e.run(top, &mut |_, norm| counts[norm as usize] += 1);
            counts
        })
        .reduce(|| vec![0u64; size], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        }))
}

/// The vectors themselves (coordinates in the lattice basis), sorted by
/// norm then lexicographically.
pub fn short_vector_list(l: &Lattice, norm_bound: i64) -> Result<Vec<(i64, Vec<i64>)>> {
    if norm_bound < 0 {
        return Err(Error::InvalidArgument(format!("norm bound must be non-negative, got {norm_bound}")));
    }
    if l.rank() == 0 {
        return Ok(vec![(0, Vec::new())]);
    }
    let e = Enumerator { gram: &l.gram, q: completed_square(&l.gram), bound: norm_bound };
    let tops: Vec<i64> = e.top_range().collect();
    let mut out: Vec<(i64, Vec<i64>)> = tops
        .par_iter()
        .flat_map_iter(|&top| {
            let mut found = Vec::new();
            e.run(top, &mut |x, norm| found.push((norm, x.to_vec())));
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `theta_L = sum_alpha q^((alpha, alpha)/2)` to `q^n`; even lattices only.
pub fn theta_genus1(l: &Lattice, n: usize) -> Result<QExpansion> {
    if let Some(i) = (0..l.rank()).find(|&i| l.gram[i][i] % 2 != 0) {
        return Err(Error::OddLattice(l.gram[i][i]));
    }
    let counts = short_vectors(l, 2 * n as i64)?;
    if let Some(k) = counts.iter().enumerate().position(|(k, &c)| k % 2 == 1 && c > 0) {
        return Err(Error::OddLattice(k as i64));
    }
    let coeffs = counts.iter().step_by(2).map(|&c| Scalar::from_integer(BigInt::from(c))).collect();
    Ok(QExpansion::new(Scalar::zero(), coeffs, Some(l.rank() as i64 / 2)))
}

/// `theta_L / eta^rank`, leading exponent `-rank/24`.
pub fn lattice_character(l: &Lattice, n: usize) -> Result<QExpansion> {
    let theta = theta_genus1(l, n)?;
    Ok(theta.mul(&eta_power(-(l.rank() as i64), n)).truncate(n).with_weight(None))
}

/// Counts of pairs `(alpha, beta)` by `(a, b, c) = (|alpha|^2/2, |beta|^2/2, (alpha, beta))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaGenus2 {
    pub a_max: u64,
    pub b_max: u64,
    pub coeffs: BTreeMap<(u64, u64, i64), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaGenus2Json {
    pub bounds: [u64; 2],
    pub entries: Vec<(u64, u64, i64, u64)>,
}

impl ThetaGenus2 {
    pub fn coeff(&self, a: u64, b: u64, c: i64) -> u64 {
        self.coeffs.get(&(a, b, c)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> ThetaGenus2Json {
        ThetaGenus2Json {
            bounds: [self.a_max, self.b_max],
            entries: self.coeffs.iter().map(|(&(a, b, c), &n)| (a, b, c, n)).collect(),
        }
    }

    /// `(a, b) -> (b, a)` within the common bounds, `c -> -c`, and
    /// `c^2 <= 4ab`; returns the first violated entry.
    pub fn symmetry_violation(&self) -> Option<(u64, u64, i64)> {
        let common = self.a_max.min(self.b_max);
        self.coeffs.keys().copied().find(|&(a, b, c)| {
            let n = self.coeff(a, b, c);
            (c * c) as u64 > 4 * a * b
                || n != self.coeff(a, b, -c)
                || (a <= common && b <= common && n != self.coeff(b, a, c))
        })
    }
}

/// Default cap on the number of `(alpha, beta)` pairs.
pub const DEFAULT_PAIR_BUDGET: u64 = 50_000_000;

pub fn theta_genus2(l: &Lattice, a_max: u64, b_max: u64, budget: u64) -> Result<ThetaGenus2> {
    if l.rank() > 0 && !l.is_even() {
        return Err(Error::OddLattice(l.gram.iter().enumerate().map(|(i, r)| r[i]).find(|d| d % 2 != 0).unwrap_or(1)));
    }
    let bound = 2 * a_max.max(b_max) as i64;
    let vectors = short_vector_list(l, bound)?;
    let alphas: Vec<&(i64, Vec<i64>)> = vectors.iter().filter(|(n, _)| *n <= 2 * a_max as i64).collect();
    let betas: Vec<(u64, Vec<i64>)> = vectors
        .iter()
        .filter(|(n, _)| *n <= 2 * b_max as i64)
        .map(|(n, v)| {
            let gv: Vec<i64> = (0..l.rank()).map(|i| (0..l.rank()).map(|j| l.gram[i][j] * v[j]).sum()).collect();
            ((*n / 2) as u64, gv)
        })
        .collect();
    let pairs = alphas.len() as u64 * betas.len() as u64;
    if pairs > budget {
        return Err(Error::BudgetExceeded(format!("{pairs} pairs at bounds ({a_max}, {b_max}), cap {budget}")));
    }
    let coeffs = alphas
        .par_iter()
        .map(|(na, alpha)| {
            let a = (*na / 2) as u64;
            let mut bins: BTreeMap<(u64, u64, i64), u64> = BTreeMap::new();
            for (b, gb) in &betas {
                let c: i64 = alpha.iter().zip(gb).map(|(x, y)| x * y).sum();
                *bins.entry((a, *b, c)).or_insert(0) += 1;
            }
            bins
        })
        .reduce(BTreeMap::new, |mut acc, bins| {
            for (k, v) in bins {
                *acc.entry(k).or_insert(0) += v;
            }
            acc
        });
    Ok(ThetaGenus2 { a_max, b_max, coeffs })
}

/// Diagonal specialisation `r = 1`: `sum_c coeff(a, b, c)` against
/// `coeff(a, 0, 0) coeff(0, b, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub collapsed: BTreeMap<String, u64>,
    /// `(a, b, collapsed, product)` wherever they differ.
    pub mismatches: Vec<(u64, u64, u64, u64)>,
    pub agree: bool,
}

pub fn theta_genus2_specialize(t: &ThetaGenus2) -> Specialization {
    let mut collapsed: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for (&(a, b, _), &n) in &t.coeffs {
        *collapsed.entry((a, b)).or_insert(0) += n;
    }
    let mut mismatches = Vec::new();
    for a in 0..=t.a_max {
        for b in 0..=t.b_max {
            let got = collapsed.get(&(a, b)).copied().unwrap_or(0);
            let want = t.coeff(a, 0, 0) * t.coeff(0, b, 0);
            if got != want {
                mismatches.push((a, b, got, want));
            }
        }
    }
    Specialization {
        collapsed: collapsed.into_iter().map(|((a, b), n)| (format!("{a},{b}"), n)).collect(),
        agree: mismatches.is_empty(),
        mismatches,
    }
}

/// Half-integral helper for reporting `(alpha, alpha)/2`.
pub fn half_norm(norm: i64) -> Scalar {
    rat(norm, 2)
}
