//! Finite-difference solve of `-d²/dy² + V(y)` for the two-channel
//! potential, on a uniform grid with Dirichlet ends.
//!
//! Unknowns are interleaved (`2i + channel`), which makes the matrix block
//! tridiagonal with 2×2 blocks. Eigenvalues in a window are found by
//! bisection on the inertia of the block LDLᵀ factorization of `A - σ`
//! (Sylvester's law); a cyclic Jacobi solver on the dense matrix serves as
//! an independent check on small grids.

use serde::Serialize;

use super::levels::{algebraic_spectrum, eigenfunctions_y, AlgebraicSpectrum};
use super::{HamiltonianSpec, RawHamiltonian};
use crate::error::{Error, Result};

/// Interior grid points and box `[-half_width, half_width]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FdGrid {
    pub points: usize,
    pub half_width: f64,
}

impl FdGrid {
    pub fn new(points: usize, half_width: f64) -> Result<Self> {
        if points < 2 || !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParams(format!(
                "grid needs at least 2 points and a positive box, got {points} points, half width {half_width}"
            )));
        }
        Ok(FdGrid { points, half_width })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points + 1) as f64
    }

    /// The grid with half the spacing.
    pub fn refined(&self) -> Self {
        FdGrid {
            points: 2 * self.points + 1,
            half_width: self.half_width,
        }
    }

    fn y(&self, i: usize) -> f64 {
        -self.half_width + (i + 1) as f64 * self.spacing()
    }
}

/// Diagonal 2×2 blocks `(top, bottom, coupling)` and the off-block value.
struct BlockTridiagonal {
    blocks: Vec<(f64, f64, f64)>,
    off: f64,
}

impl BlockTridiagonal {
    fn new(raw: &RawHamiltonian, grid: &FdGrid) -> Self {
        let h = grid.spacing();
        let kin = 2.0 / (h * h);
        let blocks = (0..grid.points)
            .map(|i| {
                let (t, b, c) = raw.potential_f64(grid.y(i));
                (kin + t, kin + b, c)
            })
            .collect();
        BlockTridiagonal {
            blocks,
            off: -1.0 / (h * h),
        }
    }

    /// Number of eigenvalues below `sigma`.
    fn count_below(&self, sigma: f64) -> usize {
        // retry with a nudged shift if a pivot block is singular
        let mut s = sigma;
        for _ in 0..8 {
            if let Some(k) = self.inertia(s) {
                return k;
            }
            s += (sigma.abs() + 1.0) * 1e-13;
        }
        self.inertia(s).unwrap_or(0)
    }

    fn inertia(&self, sigma: f64) -> Option<usize> {
        let off2 = self.off * self.off;
        let mut neg = 0;
        // previous pivot block, stored as its inverse
        let mut inv = (0.0, 0.0, 0.0);
        for (i, &(t, b, c)) in self.blocks.iter().enumerate() {
            let (mut a, mut d, mut e) = (t - sigma, b - sigma, c);
            if i > 0 {
                a -= off2 * inv.0;
                d -= off2 * inv.1;
                e -= off2 * inv.2;
            }
            let det = a * d - e * e;
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            neg += if det < 0.0 {
                1
            } else if a < 0.0 {
                2
            } else {
                0
            };
            inv = (d / det, a / det, -e / det);
        }
        Some(neg)
    }

    fn dense(&self) -> Vec<f64> {
        let dim = 2 * self.blocks.len();
        let mut m = vec![0.0; dim * dim];
        for (i, &(t, b, c)) in self.blocks.iter().enumerate() {
            let (p, q) = (2 * i, 2 * i + 1);
            m[p * dim + p] = t;
            m[q * dim + q] = b;
            m[p * dim + q] = c;
            m[q * dim + p] = c;
            if i + 1 < self.blocks.len() {
                for k in [p, q] {
                    m[k * dim + k + 2] = self.off;
                    m[(k + 2) * dim + k] = self.off;
                }
            }
        }
        m
    }
}

const EIG_TOL: f64 = 1e-11;

/// All eigenvalues of the FD matrix in `(lo, hi]`, ascending.
pub fn fd_eigenvalues_window(raw: &RawHamiltonian, grid: &FdGrid, lo: f64, hi: f64) -> Vec<f64> {
    let m = BlockTridiagonal::new(raw, grid);
    let mut out = Vec::new();
    let (clo, chi) = (m.count_below(lo), m.count_below(hi));
    bisect(&m, lo, hi, clo, chi, &mut out);
    out
}

fn bisect(m: &BlockTridiagonal, lo: f64, hi: f64, clo: usize, chi: usize, out: &mut Vec<f64>) {
    if chi <= clo {
        return;
    }
    if hi - lo < EIG_TOL {
        out.extend(std::iter::repeat_n(0.5 * (lo + hi), chi - clo));
        return;
    }
    let mid = 0.5 * (lo + hi);
    let cm = m.count_below(mid);
    bisect(m, lo, mid, clo, cm, out);
    bisect(m, mid, hi, cm, chi, out);
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending. Stops once the off-diagonal Frobenius norm is below `1e-10`
/// relative to the full norm.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, dim: usize) -> Result<Vec<f64>> {
    let total: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    s += a[i * dim + j] * a[i * dim + j];
                }
            }
        }
        s.sqrt()
    };
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= 1e-10 * total {
            let mut ev: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
            ev.sort_by(f64::total_cmp);
            return Ok(ev);
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::NonConvergence(MAX_SWEEPS))
}

/// Every eigenvalue of the FD matrix via [`jacobi_eigenvalues`].
pub fn fd_eigenvalues_jacobi(raw: &RawHamiltonian, grid: &FdGrid) -> Result<Vec<f64>> {
    let m = BlockTridiagonal::new(raw, grid);
    jacobi_eigenvalues(m.dense(), 2 * grid.points)
}

/// Largest `|φ(L)| / max |φ|` over all algebraic eigenfunction components.
pub fn boundary_amplitude(spectrum: &AlgebraicSpectrum, half_width: f64) -> Result<f64> {
    let eval = |coeffs: &[f64], y: f64| -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c) * (-y.powi(4) / 4.0).exp()
    };
    let mut worst: f64 = 0.0;
    for f in eigenfunctions_y(spectrum)? {
        for comp in [&f.top_y, &f.bottom_y] {
            if comp.iter().all(|c| *c == 0.0) {
                continue;
            }
            let peak = (0..=2000)
                .map(|k| eval(comp, half_width * k as f64 / 2000.0).abs())
                .fold(0.0, f64::max);
            if peak > 0.0 {
                worst = worst.max(eval(comp, half_width).abs() / peak);
            }
        }
    }
    Ok(worst)
}

/// Boundary amplitude above which the box is declared too small.
const BOX_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelMatch {
    pub algebraic: f64,
    pub numeric: f64,
    pub diff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub spec: HamiltonianSpec,
    pub grid: FdGrid,
    pub matches: Vec<LevelMatch>,
    pub max_diff: f64,
    /// Every numeric level in the window around the algebraic ones, so
    /// non-algebraic levels interleaving with them are visible.
    pub numeric_window: Vec<f64>,
}

/// Matches each algebraic level to the nearest unused FD level.
pub fn numeric_crosscheck(spec: &HamiltonianSpec, grid: &FdGrid) -> Result<CrossCheck> {
    if grid.points < 200 {
        return Err(Error::InvalidParams(format!(
            "cross-check needs at least 200 grid points, got {}",
            grid.points
        )));
    }
    let spectrum = algebraic_spectrum(spec)?;
    let amp = boundary_amplitude(&spectrum, grid.half_width)?;
    if amp > BOX_TOL {
        return Err(Error::BoxTooSmall {
            half_width: grid.half_width,
            amplitude: amp,
        });
    }
    crosscheck_unchecked(spec, &spectrum, grid)
}

fn crosscheck_unchecked(spec: &HamiltonianSpec, spectrum: &AlgebraicSpectrum, grid: &FdGrid) -> Result<CrossCheck> {
    let alg = spectrum.energies();
    let lo = alg.first().copied().unwrap_or(0.0) - 2.0;
    let hi = alg.last().copied().unwrap_or(0.0) + 2.0;
    let numeric = fd_eigenvalues_window(&RawHamiltonian::new(spec), grid, lo, hi);
    let mut pairs: Vec<(f64, usize, usize)> = alg
        .iter()
        .enumerate()
        .flat_map(|(i, a)| numeric.iter().enumerate().map(move |(j, b)| ((a - b).abs(), i, j)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut matched: Vec<Option<usize>> = vec![None; alg.len()];
    let mut used = vec![false; numeric.len()];
    for (_, i, j) in pairs {
        if matched[i].is_none() && !used[j] {
            matched[i] = Some(j);
            used[j] = true;
        }
    }
    let matches = alg
        .iter()
        .zip(&matched)
        .map(|(a, m)| {
            let j = m.ok_or_else(|| {
                Error::InvalidParams(format!("no numeric level left to match algebraic level {a}"))
            })?;
            Ok(LevelMatch {
                algebraic: *a,
                numeric: numeric[j],
                diff: (a - numeric[j]).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_diff = matches.iter().map(|m| m.diff).fold(0.0, f64::max);
    Ok(CrossCheck {
        spec: spec.clone(),
        grid: *grid,
        matches,
        max_diff,
        numeric_window: numeric,
    })
}

/// The same check at spacing `h` and `h/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Convergence {
    pub coarse: CrossCheck,
    pub fine: CrossCheck,
    /// `max_diff(h) / max_diff(h/2)`; about 4 for a second-order scheme.
    pub ratio: f64,
}

pub fn convergence_study(spec: &HamiltonianSpec, grid: &FdGrid) -> Result<Convergence> {
    let coarse = numeric_crosscheck(spec, grid)?;
    let fine = numeric_crosscheck(spec, &grid.refined())?;
    let ratio = coarse.max_diff / fine.max_diff;
    Ok(Convergence { coarse, fine, ratio })
}
