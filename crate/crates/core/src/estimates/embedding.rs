use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constitutive::ConstitutiveLaw;
use crate::discretization::Grid;
use crate::error::{Error, Result};
use crate::functionals::{double_bracket, rho, weighted_bracket, SpaceTimeSamples};

/// A smooth space-time test field: trigonometric modes with time modulation,
/// plus a low-order polynomial part for fields that do not vanish on `∂U`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusField {
    pub extent: [f64; 2],
    /// `(kx, ky, amplitude, omega, phase)`.
    pub modes: Vec<(u32, u32, f64, f64, f64)>,
    /// `c0 + cx x + cy y + cxy x y`, all zero for homogeneous fields.
    pub poly: [f64; 4],
    pub dim: usize,
}

impl CorpusField {
    pub fn eval(&self, x: [f64; 2], t: f64) -> f64 {
        let (lx, ly) = (self.extent[0], self.extent[1]);
        let mut v = 0.0;
        for &(kx, ky, amp, omega, phase) in &self.modes {
            let sy = if self.dim == 2 { (ky as f64 * PI * x[1] / ly).sin() } else { 1.0 };
            v += amp * (kx as f64 * PI * x[0] / lx).sin() * sy * (1.0 + 0.5 * (omega * t + phase).cos());
        }
        let [c0, cx, cy, cxy] = self.poly;
        v + (c0 + cx * x[0] + cy * x[1] + cxy * x[0] * x[1]) * (1.0 + 0.25 * t)
    }

    pub fn vanishes_on_boundary(&self) -> bool {
        self.poly == [0.0; 4]
    }

    pub fn sample(&self, grid: Grid, t_end: f64, slabs: usize) -> Result<SpaceTimeSamples> {
        SpaceTimeSamples::from_fn(grid, t_end, slabs, |x, t| self.eval(x, t))
    }
}

/// `count` random fields with 1–3 modes of wave numbers up to 3.
pub fn smooth_corpus(grid: &Grid, count: usize, homogeneous: bool, seed: u64) -> Vec<CorpusField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extent = [grid.extent()[0], if grid.dim() == 2 { grid.extent()[1] } else { 1.0 }];
    (0..count)
        .map(|_| {
            let modes = (0..rng.gen_range(1..=3))
                .map(|_| {
                    (
                        rng.gen_range(1..=3),
                        rng.gen_range(1..=3),
                        rng.gen_range(-1.0..=1.0),
                        rng.gen_range(0.0..=2.0 * PI),
                        rng.gen_range(0.0..=2.0 * PI),
                    )
                })
                .collect();
            let poly = if homogeneous {
                [0.0; 4]
            } else {
                let mut p = [0.0; 4];
                p.iter_mut().for_each(|c| *c = rng.gen_range(-1.0..=1.0));
                if grid.dim() == 1 {
                    p[2] = 0.0;
                    p[3] = 0.0;
                }
                p
            };
            CorpusField {
                extent,
                modes,
                poly,
                dim: grid.dim(),
            }
        })
        .collect()
}

/// Ratios over a corpus; zero-denominator items are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioStats {
    pub ratios: Vec<f64>,
    pub skipped: usize,
}

impl RatioStats {
    fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut ratios = Vec::new();
        let mut skipped = 0;
        for (num, den) in pairs {
            if den > 0.0 && den.is_finite() {
                ratios.push(num / den);
            } else {
                log::debug!("skipping corpus item with zero bracket");
                skipped += 1;
            }
        }
        Self { ratios, skipped }
    }

    pub fn max(&self) -> f64 {
        self.ratios.iter().cloned().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        if self.ratios.is_empty() {
            0.0
        } else {
            self.ratios.iter().sum::<f64>() / self.ratios.len() as f64
        }
    }
}

/// `‖u‖_{L^p(Q_T)} / ((1+δT)^{1/p} [[u]])` with `p = α(1+(2−a)/n) − a`,
/// `δ = 0` for fields vanishing on `∂U` and `1` otherwise.
pub fn sob4_ratio(u: &SpaceTimeSamples, alpha: f64, a: f64, homogeneous: bool) -> (f64, f64) {
    let n = u.grid.dim() as f64;
    let p = alpha * (1.0 + (2.0 - a) / n) - a;
    let delta = if homogeneous { 0.0 } else { 1.0 };
    let den = (1.0 + delta * u.duration()).powf(1.0 / p) * double_bracket(u, alpha, a);
    (u.lp(p), den)
}

pub fn check_sob4(corpus: &[SpaceTimeSamples], alpha: f64, a: f64, homogeneous: bool) -> Result<RatioStats> {
    if !(alpha >= 2.0) || !(alpha > a * corpus.first().map_or(1, |u| u.grid.dim()) as f64 / (2.0 - a)) {
        return Err(Error::Domain(format!("alpha = {alpha} is not admissible for the embedding")));
    }
    Ok(RatioStats::from_pairs(corpus.iter().map(|u| sob4_ratio(u, alpha, a, homogeneous))))
}

/// Weight `W = K(|∇u|)` at every sample.
pub fn coefficient_weight(u: &SpaceTimeSamples, law: &ConstitutiveLaw) -> Result<Vec<Vec<f64>>> {
    u.gradients
        .iter()
        .map(|g| g.iter().map(|g| law.eval_K(g[0].hypot(g[1]))).collect())
        .collect()
}

/// `‖u‖_{L^ϱ(Q_T)}` against `[[u]]_{2,W;T} {δ T^{1/ϱ} + sup_t (∫ W^{−r/(2−r)} χ_{supp u})^{(2−r)/(ϱr)}}`.
pub fn weighted_ratio(u: &SpaceTimeSamples, weight: &[Vec<f64>], r: f64, homogeneous: bool) -> (f64, f64) {
    let n = u.grid.dim();
    let varrho = rho(r, n);
    let delta = if homogeneous { 0.0 } else { 1.0 };
    let vol = u.grid.cell_volume();
    let sup_term = u
        .values
        .iter()
        .zip(weight)
        .map(|(vals, w)| {
            let s: f64 = vals
                .iter()
                .zip(w)
                .filter(|(v, _)| **v != 0.0)
                .map(|(_, w)| w.powf(-r / (2.0 - r)))
                .sum();
            (vol * s).powf((2.0 - r) / (varrho * r))
        })
        .fold(0.0, f64::max);
    let den = weighted_bracket(u, weight) * (delta * u.duration().powf(1.0 / varrho) + sup_term);
    (u.lp(varrho), den)
}

pub fn check_weighted_embedding(
    corpus: &[SpaceTimeSamples],
    law: &ConstitutiveLaw,
    s0: f64,
    homogeneous: bool,
) -> Result<RatioStats> {
    let n = corpus.first().map_or(1, |u| u.grid.dim()) as f64;
    if !(s0 > 2.0 * n / (n + 2.0) && s0 < 2.0) {
        return Err(Error::Domain(format!("s0 = {s0} outside (2n/(n+2), 2)")));
    }
    let pairs = corpus
        .iter()
        .map(|u| Ok(weighted_ratio(u, &coefficient_weight(u, law)?, s0, homogeneous)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioStats::from_pairs(pairs))
}

/// Maximal ratio on a grid and on its refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementDrift {
    pub coarse: f64,
    pub fine: f64,
}

impl RefinementDrift {
    /// `|fine − coarse| / coarse`.
    pub fn drift(&self) -> f64 {
        (self.fine - self.coarse).abs() / self.coarse
    }
}

/// Sample the corpus on `grid` with `slabs` time slabs and on the
/// twice-refined grid with `2·slabs`, and compare the maximal ratios.
pub fn refinement_drift(
    corpus: &[CorpusField],
    grid: &Grid,
    t_end: f64,
    slabs: usize,
    stats: impl Fn(&[SpaceTimeSamples]) -> Result<RatioStats>,
) -> Result<RefinementDrift> {
    let run = |g: Grid, k: usize| -> Result<f64> {
        let samples = corpus.iter().map(|f| f.sample(g, t_end, k)).collect::<Result<Vec<_>>>()?;
        Ok(stats(&samples)?.max())
    };
    Ok(RefinementDrift {
        coarse: run(*grid, slabs)?,
        fine: run(grid.refined(2)?, 2 * slabs)?,
    })
}
