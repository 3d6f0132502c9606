use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::expr::{Expr, Var};

/// A function of position and time.
pub type SpaceTimeFn = Arc<dyn Fn([f64; 2], f64) -> f64 + Send + Sync>;

/// Partial derivatives of the extension `Ψ` that callers may register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivative {
    T,
    X,
    Y,
    XX,
    XY,
    YY,
    XT,
    YT,
}

impl Derivative {
    pub const ALL: [Derivative; 8] = [
        Derivative::T,
        Derivative::X,
        Derivative::Y,
        Derivative::XX,
        Derivative::XY,
        Derivative::YY,
        Derivative::XT,
        Derivative::YT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Derivative::T => "psi_t",
            Derivative::X => "psi_x",
            Derivative::Y => "psi_y",
            Derivative::XX => "psi_xx",
            Derivative::XY => "psi_xy",
            Derivative::YY => "psi_yy",
            Derivative::XT => "psi_xt",
            Derivative::YT => "psi_yt",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }

    /// Lower-order callback this one differentiates, and the direction.
    fn parent(self) -> (Option<Derivative>, Axis) {
        match self {
            Derivative::T => (None, Axis::T),
            Derivative::X => (None, Axis::X),
            Derivative::Y => (None, Axis::Y),
            Derivative::XX => (Some(Derivative::X), Axis::X),
            Derivative::XY => (Some(Derivative::X), Axis::Y),
            Derivative::YY => (Some(Derivative::Y), Axis::Y),
            Derivative::XT => (Some(Derivative::X), Axis::T),
            Derivative::YT => (Some(Derivative::Y), Axis::T),
        }
    }

    /// Whether this derivative involves `y` and so is only needed in 2D.
    pub fn involves_y(self) -> bool {
        matches!(self, Derivative::Y | Derivative::XY | Derivative::YY | Derivative::YT)
    }
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    X,
    Y,
    T,
}

/// Dirichlet data `ψ` given through a domain extension `Ψ(x, t)` and its
/// analytic derivatives.
#[derive(Clone)]
pub struct BoundaryData {
    psi: SpaceTimeFn,
    derivatives: [Option<SpaceTimeFn>; 8],
    time_independent: bool,
    description: String,
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let registered: Vec<&str> = Derivative::ALL
            .iter()
            .filter(|d| self.has(**d))
            .map(|d| d.name())
            .collect();
        f.debug_struct("BoundaryData")
            .field("psi", &self.description)
            .field("derivatives", &registered)
            .field("time_independent", &self.time_independent)
            .finish()
    }
}

/// Expression sources for [`BoundaryData::from_expressions`].
#[derive(Debug, Clone, Default)]
pub struct BoundaryExpressions {
    pub psi: String,
    pub psi_t: Option<String>,
    pub psi_x: Option<String>,
    pub psi_y: Option<String>,
    pub psi_xx: Option<String>,
    pub psi_xy: Option<String>,
    pub psi_yy: Option<String>,
    pub psi_xt: Option<String>,
    pub psi_yt: Option<String>,
}

impl BoundaryExpressions {
    pub fn get(&self, d: Derivative) -> Option<&String> {
        match d {
            Derivative::T => self.psi_t.as_ref(),
            Derivative::X => self.psi_x.as_ref(),
            Derivative::Y => self.psi_y.as_ref(),
            Derivative::XX => self.psi_xx.as_ref(),
            Derivative::XY => self.psi_xy.as_ref(),
            Derivative::YY => self.psi_yy.as_ref(),
            Derivative::XT => self.psi_xt.as_ref(),
            Derivative::YT => self.psi_yt.as_ref(),
        }
    }
}

fn expr_fn(e: Expr) -> SpaceTimeFn {
    Arc::new(move |x: [f64; 2], t: f64| e.eval(x[0], x[1], t))
}

impl BoundaryData {
    pub fn new(psi: SpaceTimeFn) -> Self {
        Self {
            psi,
            derivatives: Default::default(),
            time_independent: false,
            description: "<closure>".into(),
        }
    }

    /// `Ψ ≡ c` with every derivative registered as zero.
    pub fn constant(c: f64) -> Self {
        let zero: SpaceTimeFn = Arc::new(|_, _| 0.0);
        let mut data = Self::new(Arc::new(move |_, _| c));
        for d in Derivative::ALL {
            data.derivatives[d.slot()] = Some(zero.clone());
        }
        data.time_independent = true;
        data.description = format!("{c}");
        data
    }

    pub fn with(mut self, d: Derivative, f: SpaceTimeFn) -> Self {
        self.derivatives[d.slot()] = Some(f);
        self
    }

    /// Declare `Ψ` independent of time; `Ψ_t`, `∇Ψ_t` are then registered as zero
    /// unless already present.
    pub fn time_independent(mut self) -> Self {
        self.time_independent = true;
        let zero: SpaceTimeFn = Arc::new(|_, _| 0.0);
        for d in [Derivative::T, Derivative::XT, Derivative::YT] {
            if self.derivatives[d.slot()].is_none() {
                self.derivatives[d.slot()] = Some(zero.clone());
            }
        }
        self
    }

    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }

    pub fn from_expressions(src: &BoundaryExpressions) -> Result<Self> {
        let psi = Expr::parse(&src.psi)?;
        let is_static = !psi.uses(Var::T);
        let mut data = Self::new(expr_fn(psi)).with_description(src.psi.clone());
        for d in Derivative::ALL {
            if let Some(text) = src.get(d) {
                data = data.with(d, expr_fn(Expr::parse(text)?));
            }
        }
        if is_static {
            data = data.time_independent();
        }
        Ok(data)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn is_time_independent(&self) -> bool {
        self.time_independent
    }

    #[inline]
    pub fn psi(&self, x: [f64; 2], t: f64) -> f64 {
        (self.psi)(x, t)
    }

    pub fn psi_fn(&self) -> &SpaceTimeFn {
        &self.psi
    }

    pub fn has(&self, d: Derivative) -> bool {
        self.derivatives[d.slot()].is_some()
    }

    pub fn derivative(&self, d: Derivative) -> Result<&SpaceTimeFn> {
        self.derivatives[d.slot()]
            .as_ref()
            .ok_or_else(|| Error::Config(format!("boundary derivative `{}` is not registered", d.name())))
    }

    pub fn eval(&self, d: Derivative, x: [f64; 2], t: f64) -> Result<f64> {
        Ok((self.derivative(d)?)(x, t))
    }

    /// Derivatives required for a grid of the given dimension.
    pub fn require(&self, dim: usize, needed: &[Derivative]) -> Result<()> {
        for d in needed {
            if dim == 1 && d.involves_y() {
                continue;
            }
            self.derivative(*d)?;
        }
        Ok(())
    }

    pub fn gradient(&self, dim: usize, x: [f64; 2], t: f64) -> Result<[f64; 2]> {
        let gx = self.eval(Derivative::X, x, t)?;
        let gy = if dim == 2 { self.eval(Derivative::Y, x, t)? } else { 0.0 };
        Ok([gx, gy])
    }

    /// Hessian entries `(xx, xy, yy)`.
    pub fn hessian(&self, dim: usize, x: [f64; 2], t: f64) -> Result<[f64; 3]> {
        let xx = self.eval(Derivative::XX, x, t)?;
        if dim == 1 {
            return Ok([xx, 0.0, 0.0]);
        }
        Ok([xx, self.eval(Derivative::XY, x, t)?, self.eval(Derivative::YY, x, t)?])
    }

    pub fn gradient_t(&self, dim: usize, x: [f64; 2], t: f64) -> Result<[f64; 2]> {
        let gx = self.eval(Derivative::XT, x, t)?;
        let gy = if dim == 2 { self.eval(Derivative::YT, x, t)? } else { 0.0 };
        Ok([gx, gy])
    }

    /// Cross-validate every registered derivative against central differences
    /// of its parent (or of `Ψ`) at random probes in `Ū × [0, t_max]`.
    ///
    /// Returns the worst error relative to `max(1, |callback|)`.
    pub fn check_derivatives(&self, grid: &Grid, t_max: f64, probes: usize, step: f64, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = grid.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..probes {
            let x = [
                rng.gen_range(0.0..=grid.extent()[0]),
                if dim == 2 { rng.gen_range(0.0..=grid.extent()[1]) } else { 0.0 },
            ];
            let t = rng.gen_range(0.0..=t_max);
            for d in Derivative::ALL {
                if dim == 1 && d.involves_y() {
                    continue;
                }
                let Some(f) = &self.derivatives[d.slot()] else {
                    continue;
                };
                let value = f(x, t);
                let (parent, axis) = d.parent();
                let fd = match parent.and_then(|p| self.derivatives[p.slot()].as_ref()) {
                    Some(pf) => central(pf, x, t, axis, step),
                    None => match parent {
                        None => central(&self.psi, x, t, axis, step),
                        Some(p) => second_central(&self.psi, x, t, p.parent().1, axis, step),
                    },
                };
                worst = worst.max((fd - value).abs() / value.abs().max(1.0));
            }
        }
        worst
    }
}

fn shifted(x: [f64; 2], t: f64, axis: Axis, h: f64) -> ([f64; 2], f64) {
    match axis {
        Axis::X => ([x[0] + h, x[1]], t),
        Axis::Y => ([x[0], x[1] + h], t),
        Axis::T => (x, t + h),
    }
}

fn central(f: &SpaceTimeFn, x: [f64; 2], t: f64, axis: Axis, h: f64) -> f64 {
    let (xp, tp) = shifted(x, t, axis, h);
    let (xm, tm) = shifted(x, t, axis, -h);
    (f(xp, tp) - f(xm, tm)) / (2.0 * h)
}

fn second_central(f: &SpaceTimeFn, x: [f64; 2], t: f64, a: Axis, b: Axis, h: f64) -> f64 {
    // Nested central differences; the larger step keeps roundoff below truncation.
    let h = h.sqrt().max(h) * 0.1;
    let g = |xx: [f64; 2], tt: f64| central(f, xx, tt, a, h);
    let (xp, tp) = shifted(x, t, b, h);
    let (xm, tm) = shifted(x, t, b, -h);
    (g(xp, tp) - g(xm, tm)) / (2.0 * h)
}

/// Boundary values of `ψ` at one time level, sampled where the face
/// operators need them.
///
/// `west`/`east` hold `ψ` at the midpoints of the x-normal boundary faces,
/// `south`/`north` at the y-normal ones. The `*_nodes` arrays hold `ψ` at the
/// face endpoints (grid vertices along each side), used for tangential
/// derivatives on boundary faces.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    pub t: f64,
    pub west: Vec<f64>,
    pub east: Vec<f64>,
    pub south: Vec<f64>,
    pub north: Vec<f64>,
    pub west_nodes: Vec<f64>,
    pub east_nodes: Vec<f64>,
    pub south_nodes: Vec<f64>,
    pub north_nodes: Vec<f64>,
}

impl BoundaryFrame {
    pub fn sample(grid: &Grid, t: f64, psi: impl Fn([f64; 2], f64) -> f64) -> Self {
        let (nx, ny) = (grid.nx(), grid.ny());
        let (hx, hy) = (grid.h(0), grid.h(1));
        let lx = grid.extent()[0];
        if grid.dim() == 1 {
            return Self {
                t,
                west: vec![psi([0.0, 0.0], t)],
                east: vec![psi([lx, 0.0], t)],
                south: Vec::new(),
                north: Vec::new(),
                west_nodes: Vec::new(),
                east_nodes: Vec::new(),
                south_nodes: Vec::new(),
                north_nodes: Vec::new(),
            };
        }
        let ly = grid.extent()[1];
        let yc = |j: usize| (j as f64 + 0.5) * hy;
        let xc = |i: usize| (i as f64 + 0.5) * hx;
        Self {
            t,
            west: (0..ny).map(|j| psi([0.0, yc(j)], t)).collect(),
            east: (0..ny).map(|j| psi([lx, yc(j)], t)).collect(),
            south: (0..nx).map(|i| psi([xc(i), 0.0], t)).collect(),
            north: (0..nx).map(|i| psi([xc(i), ly], t)).collect(),
            west_nodes: (0..=ny).map(|j| psi([0.0, j as f64 * hy], t)).collect(),
            east_nodes: (0..=ny).map(|j| psi([lx, j as f64 * hy], t)).collect(),
            south_nodes: (0..=nx).map(|i| psi([i as f64 * hx, 0.0], t)).collect(),
            north_nodes: (0..=nx).map(|i| psi([i as f64 * hx, ly], t)).collect(),
        }
    }

    pub fn from_data(grid: &Grid, data: &BoundaryData, t: f64) -> Self {
        Self::sample(grid, t, |x, t| data.psi(x, t))
    }

    /// Homogeneous data, `ψ ≡ 0`.
    pub fn zero(grid: &Grid, t: f64) -> Self {
        Self::sample(grid, t, |_, _| 0.0)
    }

    /// Smallest and largest boundary value.
    pub fn range(&self) -> (f64, f64) {
        [&self.west, &self.east, &self.south, &self.north]
            .iter()
            .flat_map(|v| v.iter())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}
