use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{grad_ls_id, ExponentBundle, FunctionalSeries};

use super::fitting::{fit_constants, FittedConstants, ShapeSample};

/// A local-in-time window `[T₀, T₀+T]` with interior fraction `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub t0: f64,
    pub t: f64,
    pub theta: f64,
}

impl Window {
    pub fn new(t0: f64, t: f64, theta: f64) -> Self {
        Self { t0, t, theta }
    }

    pub fn end(&self) -> f64 {
        self.t0 + self.t
    }

    /// `[T₀+θT, T₀+T]`.
    pub fn inner(&self) -> (f64, f64) {
        (self.t0 + self.theta * self.t, self.end())
    }

    /// `[T₀+θT/2, T₀+T]`.
    pub fn half(&self) -> (f64, f64) {
        (self.t0 + 0.5 * self.theta * self.t, self.end())
    }

    pub fn theta_t(&self) -> f64 {
        self.theta * self.t
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T0={} T={} theta={}", self.t0, self.t, self.theta)
    }
}

/// Where an inequality is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    Window(Window),
    Time(f64),
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Window(w) => w.fmt(f),
            Probe::Time(t) => write!(f, "t={t}"),
        }
    }
}

/// Admissible probes of a shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Window,
    /// Times in `(lo, hi]`, or `[lo, hi]` when `closed`.
    Time { lo: f64, hi: f64, closed: bool },
}

impl Domain {
    fn admits(&self, probe: &Probe) -> bool {
        match (self, probe) {
            (Domain::Window, Probe::Window(w)) => w.t > 0.0 && w.theta > 0.0 && w.theta < 1.0 && w.t0 >= 0.0,
            (Domain::Time { lo, hi, closed }, Probe::Time(t)) => (*t > *lo || (*closed && *t == *lo)) && *t <= *hi,
            _ => false,
        }
    }
}

/// A registered inequality shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub id: &'static str,
    pub summary: &'static str,
    pub domain: Domain,
    pub exponential: bool,
}

const EARLY: Domain = Domain::Time {
    lo: 0.0,
    hi: 3.0,
    closed: false,
};

const fn after(lo: f64, closed: bool) -> Domain {
    Domain::Time {
        lo,
        hi: f64::INFINITY,
        closed,
    }
}

/// Every registered shape.
pub const SHAPES: &[Shape] = &[
    Shape {
        id: "pbar_sup_local",
        summary: "sup |pbar| on the inner window by six homogeneous terms in ||pbar||_{L^alpha(Q)} and data norms",
        domain: Domain::Window,
        exponential: false,
    },
    Shape {
        id: "pbar_sup_simplified",
        summary: "sup |pbar| by (1+(theta T)^{-1/delta1}+T^{z1}) (1+data)^{z2} (1+||pbar||)^{z3}",
        domain: Domain::Window,
        exponential: false,
    },
    Shape {
        id: "pbar_sup_early",
        summary: "|pbar(t)|_inf by t^{-1/delta1} (1+|pbar0|+EnvA^{1/(alpha-a)})^{z3} (1+data(0,t))^{z2}, t <= 3",
        domain: EARLY,
        exponential: false,
    },
    Shape {
        id: "pbar_sup_late",
        summary: "|pbar(t)|_inf by (1+|pbar0|+EnvA^{1/(alpha-a)})^{z3} (1+data(t-1,t))^{z2}, t >= 1",
        domain: after(1.0, true),
        exponential: false,
    },
    Shape {
        id: "bdry_grad_early",
        summary: "boundary |grad p(t)| by t^{-mu0} data sup times exp(C' t^{-1/delta1} ...), t <= 3",
        domain: EARLY,
        exponential: true,
    },
    Shape {
        id: "bdry_grad_late",
        summary: "boundary |grad p(t)| by data sup on [t-1,t] times exp(C' ...), t > 1",
        domain: after(1.0, false),
        exponential: true,
    },
    Shape {
        id: "grad_ls_early",
        summary: "int |grad p(t)|^s by t^{-1-s~ kappa1} K1, K2 powers (1+int G1) exp(C' ...), t <= 3",
        domain: EARLY,
        exponential: true,
    },
    Shape {
        id: "grad_ls_late",
        summary: "int |grad p(t)|^s by K1, K2bar powers (1+int_{t-1}^t G1) exp(C' ...), t > 2",
        domain: after(2.0, false),
        exponential: true,
    },
    Shape {
        id: "grad_sup_local",
        summary: "sup |grad p| on the inner window by (1+(theta T)^{-1})^{(s1+1)/2} lambda^{s1/2} ||grad p||_{L^2} + boundary sup",
        domain: Domain::Window,
        exponential: false,
    },
    Shape {
        id: "grad_sup_early",
        summary: "|grad p(t)|_inf by t^{-kappa2/2} K1, K2 powers (1+int G1)^{s3/2} exp(C ...), t <= 3",
        domain: EARLY,
        exponential: true,
    },
    Shape {
        id: "grad_sup_late",
        summary: "|grad p(t)|_inf by K1, K2tilde powers (1+int_{t-2}^t G1)^{s3/2} exp(C ...), t > 3",
        domain: after(3.0, false),
        exponential: true,
    },
    Shape {
        id: "pt_sup_local",
        summary: "sup |p_t| on the inner window by lambda^{s1/2} (1+(theta T)^{-1})^{(s1+1)/2} ||p_t||_{L^2} + max |psi_t| on the boundary",
        domain: Domain::Window,
        exponential: false,
    },
    Shape {
        id: "pt_sup_early",
        summary: "|p_t(t)|_inf by t^{-kappa4/2} powers (1+int G3)^{s3/2} exp(C ...) + sup |psi_t|, t <= 3",
        domain: EARLY,
        exponential: true,
    },
    Shape {
        id: "pt_sup_late",
        summary: "|p_t(t)|_inf by K1^{kappa6} K2tilde powers (1+int_{t-2}^t G3)^{s3/2} exp(C' ...) + sup |psi_t|, t > 3",
        domain: after(3.0, false),
        exponential: true,
    },
    Shape {
        id: "h_integral",
        summary: "int_0^t int H(|grad p|) by C(||pbar0||^2 + int_0^t G1)",
        domain: after(0.0, false),
        exponential: false,
    },
    Shape {
        id: "energy",
        summary: "int H(|grad p(t)|) + int_0^t ||pbar_t||^2 by int [H(|grad p0|) + pbar0^2] + C int_0^t G3",
        domain: after(0.0, false),
        exponential: false,
    },
];

/// The shapes checked by default.
pub const DEFAULT_SHAPES: &[&str] = &["pbar_sup_local", "grad_sup_local", "pt_sup_local", "h_integral", "energy"];

pub fn shape(id: &str) -> Result<&'static Shape> {
    SHAPES
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::Config(format!("unknown theorem shape `{id}`")))
}

/// Read access to one run's series with the derived quantities the shapes share.
pub struct RunView<'a> {
    pub series: &'a FunctionalSeries,
    pub bundle: &'a ExponentBundle,
}

impl<'a> RunView<'a> {
    pub fn new(series: &'a FunctionalSeries, bundle: &'a ExponentBundle) -> Self {
        Self { series, bundle }
    }

    fn at(&self, name: &str, t: f64) -> Result<f64> {
        self.series.value_at(name, t)
    }

    fn sup(&self, name: &str, lo: f64, hi: f64) -> Result<f64> {
        self.series.sup(name, lo.max(0.0), hi)
    }

    /// `(∫_lo^hi ‖·‖^q dt)^{1/q}` of a spatial-norm column.
    fn spacetime(&self, name: &str, q: f64, lo: f64, hi: f64) -> Result<f64> {
        Ok(self.series.integrate_with(name, lo.max(0.0), hi, |v| v.powf(q))?.powf(1.0 / q))
    }

    /// `‖p̄‖_{L^α(U×(lo,hi))}`.
    pub fn pbar_alpha(&self, lo: f64, hi: f64) -> Result<f64> {
        self.spacetime("pbar_Lalpha", self.bundle.alpha, lo, hi)
    }

    /// `‖p̄₀‖_{L^α(U)}`.
    pub fn pbar0(&self) -> Result<f64> {
        self.at("pbar_Lalpha", 0.0)
    }

    /// `(‖∇Ψ‖_{L^{αq₁}(U×(lo,hi))}, ‖Ψ_t‖_{L^{αq₁}(U×(lo,hi))})`.
    pub fn data_norms(&self, lo: f64, hi: f64) -> Result<(f64, f64)> {
        let aq = self.bundle.alpha_q1();
        let norm = |name: &str| -> Result<f64> {
            if aq.is_infinite() {
                self.sup(name, lo, hi)
            } else {
                Ok(self.series.integrate(name, lo.max(0.0), hi)?.powf(1.0 / aq))
            }
        };
        Ok((norm("gradpsi_aq")?, norm("psi_t_aq")?))
    }

    fn data_sum(&self, lo: f64, hi: f64) -> Result<f64> {
        let (g, pt) = self.data_norms(lo, hi)?;
        Ok(g + pt)
    }

    /// `𝒦₁(t) = 1 + [Env A(α,t)]^{1/(α−a)}`.
    pub fn k1(&self, t: f64) -> Result<f64> {
        let b = self.bundle;
        Ok(1.0 + self.at("EnvA", t)?.max(0.0).powf(1.0 / (b.alpha - b.a)))
    }

    fn psi_sup_terms(&self, lo: f64, hi: f64, with_psi: bool) -> Result<f64> {
        let mu0 = self.bundle.mu0;
        self.series.sup_combined(
            &["psi_sup", "psi_t_sup", "grad_psi_sup", "hess_psi_sup"],
            lo.max(0.0),
            hi,
            |v| if with_psi { v[0] } else { 0.0 } + v[1].powf(mu0) + v[2] * v[2] + v[3],
        )
    }

    /// `𝒦₂` over `[lo, hi]`: `1 + sup(‖Ψ‖_∞ + ‖Ψ_t‖_∞^{μ₀} + ‖∇Ψ‖_∞² + ‖∇²Ψ‖_∞) + (data norms)^{z₂}`.
    pub fn k2(&self, lo: f64, hi: f64) -> Result<f64> {
        Ok(1.0 + self.psi_sup_terms(lo, hi, true)? + self.data_sum(lo, hi)?.powf(self.bundle.z2))
    }

    /// `λ(T₀,T,θ) = (∫_{T₀+θT/2}^{T₀+T} ∫(1+|∇p|)^{as₀/(2−s₀)})^{(2−s₀)/s₀}`.
    pub fn lambda(&self, w: &Window) -> Result<f64> {
        let (lo, hi) = w.half();
        let s0 = self.bundle.s0;
        Ok(self.series.integrate("lambda", lo, hi)?.powf((2.0 - s0) / s0))
    }

    fn grad_ls_column(&self) -> Result<(String, f64)> {
        let s: Vec<f64> = self
            .series
            .columns()
            .iter()
            .filter_map(|c| c.strip_prefix("grad_L").and_then(|v| v.parse::<f64>().ok()))
            .filter(|s| *s > 2.0)
            .collect();
        match s.first() {
            Some(&s) => Ok((grad_ls_id(s), s)),
            None => Err(Error::MissingFunctional("grad_L{s} with s > 2".into())),
        }
    }

    /// The six terms of the local `sup|p̄|` bound, without the constant.
    pub fn pbar_sup_terms(&self, w: &Window) -> Result<[f64; 6]> {
        let b = self.bundle;
        let (al, a) = (b.alpha, b.a);
        let (d1, d2, d3, d4) = (b.delta1, b.delta2, b.delta3, b.delta4);
        let tt = w.t;
        let th = w.theta_t();
        let x = self.pbar_alpha(w.t0, w.end())?;
        let (g, pt) = self.data_norms(w.t0, w.end())?;
        let data = tt.powf((al - 2.0) / (2.0 * al)) * g + tt.powf((al - 1.0) / al) * pt;
        Ok([
            th.powf(-1.0 / d1) * x,
            tt.powf((al - 2.0) / (2.0 * al * (1.0 + d1))) * x.powf(d1 / (1.0 + d1)),
            th.powf(-1.0 / ((al - a) * d1)) * x.powf(d3 / d1),
            tt.powf((al - 2.0) / (2.0 * (al - a) * (1.0 + d2))) * x.powf(d3 / (1.0 + d2)),
            data.powf(1.0 / (1.0 + d3)) * x.powf(d2 / (1.0 + d3)),
            data.powf(al / ((al - a) * (1.0 + d4))) * x.powf(d4 / (1.0 + d4)),
        ])
    }

    /// `(L, F, P, Q)` of a shape at a probe.
    pub fn evaluate(&self, shape: &Shape, probe: &Probe) -> Result<(f64, f64, f64, Option<f64>)> {
        let b = self.bundle;
        let (al, a) = (b.alpha, b.a);
        let ea = 1.0 / (al - a);
        let env = |t: f64| -> Result<f64> { Ok(self.at("EnvA", t)?.max(0.0).powf(ea)) };
        let win = match probe {
            Probe::Window(w) => Some(*w),
            Probe::Time(_) => None,
        };
        let t = match probe {
            Probe::Time(t) => *t,
            Probe::Window(w) => w.end(),
        };
        let s2t = b.s2_tilde;
        let out = match shape.id {
            "pbar_sup_local" => {
                let w = win.unwrap();
                let (lo, hi) = w.inner();
                (self.sup("sup_pbar", lo, hi)?, 0.0, self.pbar_sup_terms(&w)?.iter().sum(), None)
            }
            "pbar_sup_simplified" => {
                let w = win.unwrap();
                let (lo, hi) = w.inner();
                let p = (1.0 + w.theta_t().powf(-1.0 / b.delta1) + w.t.powf(b.z1))
                    * (1.0 + self.data_sum(w.t0, w.end())?).powf(b.z2)
                    * (1.0 + self.pbar_alpha(w.t0, w.end())?).powf(b.z3);
                (self.sup("sup_pbar", lo, hi)?, 0.0, p, None)
            }
            "pbar_sup_early" | "pbar_sup_late" => {
                let lo = if shape.id == "pbar_sup_early" { 0.0 } else { t - 1.0 };
                let pre = if shape.id == "pbar_sup_early" { t.powf(-1.0 / b.delta1) } else { 1.0 };
                let p = pre
                    * (1.0 + self.pbar0()? + env(t)?).powf(b.z3)
                    * (1.0 + self.data_sum(lo, t)?).powf(b.z2);
                (self.at("sup_pbar", t)?, 0.0, p, None)
            }
            "bdry_grad_early" | "bdry_grad_late" => {
                let early = shape.id == "bdry_grad_early";
                let (lo, dlo) = if early { (t / 4.0, 0.0) } else { (t - 1.0, t - 1.0) };
                let p = if early { t.powf(-b.mu0) } else { 1.0 } * (1.0 + self.psi_sup_terms(lo, t, false)?);
                let q = if early { t.powf(-1.0 / b.delta1) } else { 1.0 }
                    * (1.0 + self.pbar0()?).powf(b.z3)
                    * (1.0 + env(t)?).powf(b.z3)
                    * (1.0 + self.data_sum(dlo, t)?).powf(b.z2);
                (self.at("bdry_grad_sup", t)?, 0.0, p, Some(q))
            }
            "grad_ls_early" | "grad_ls_late" => {
                let (col, s) = self.grad_ls_column()?;
                let st = b.s_tilde(s);
                let x0 = self.pbar0()?;
                let k1 = self.k1(t)?;
                let lhs = self.at(&col, t)?.powf(s);
                if shape.id == "grad_ls_early" {
                    let p = t.powf(-1.0 - st * b.kappa1)
                        * (1.0 + x0).powf(2.0 * st * b.z3 + 2.0)
                        * k1.powf(2.0 * st * b.z3)
                        * self.k2(0.0, t)?.powf(2.0 * st)
                        * (1.0 + self.series.integrate("G1", 0.0, t)?);
                    let q = t.powf(-1.0 / b.delta1)
                        * (1.0 + x0).powf(b.z3)
                        * k1.powf(b.z3)
                        * (1.0 + self.data_sum(0.0, t)?).powf(b.z2);
                    (lhs, 0.0, p, Some(q))
                } else {
                    let p = (1.0 + x0).powf(2.0 * st * b.z3 + al)
                        * k1.powf(2.0 * st * b.z3 + al)
                        * self.k2(t - 2.0, t)?.powf(2.0 * st)
                        * (1.0 + self.series.integrate("G1", t - 1.0, t)?);
                    let q = (1.0 + x0.powf(b.z3)) * k1.powf(b.z3) * (1.0 + self.data_sum(t - 2.0, t)?).powf(b.z2);
                    (lhs, 0.0, p, Some(q))
                }
            }
            "grad_sup_local" => {
                let w = win.unwrap();
                let (lo, hi) = w.inner();
                let (hlo, hhi) = w.half();
                let s1 = b.s1;
                let l2 = self.spacetime("grad_L2", 2.0, hlo, hhi)?;
                let p = (1.0 + 1.0 / w.theta_t()).powf((s1 + 1.0) / 2.0) * self.lambda(&w)?.powf(s1 / 2.0) * l2
                    + self.sup("bdry_grad_sup", hlo, hhi)?;
                (self.sup("grad_Linf", lo, hi)?, 0.0, p, None)
            }
            "grad_sup_early" | "grad_sup_late" => {
                let x0 = self.pbar0()?;
                let k1 = self.k1(t)?;
                let lhs = self.at("grad_Linf", t)?;
                if shape.id == "grad_sup_early" {
                    let p = t.powf(-b.kappa2 / 2.0)
                        * (1.0 + x0).powf((s2t * b.z3 + 1.0) * b.s3)
                        * k1.powf(s2t * b.z3 * b.s3)
                        * self.k2(0.0, t)?.powf(s2t * b.s3)
                        * (1.0 + self.series.integrate("G1", 0.0, t)?).powf(b.s3 / 2.0);
                    let q = t.powf(-1.0 / b.delta1)
                        * (1.0 + x0.powf(b.z3))
                        * k1.powf(b.z3)
                        * (1.0 + self.data_sum(0.0, t)?).powf(b.z2);
                    (lhs, 0.0, p, Some(q))
                } else {
                    let p = (1.0 + x0).powf(b.kappa3 * b.s3)
                        * k1.powf(b.kappa3 * b.s3)
                        * self.k2(t - 3.0, t)?.powf(s2t * b.s3)
                        * (1.0 + self.series.integrate("G1", t - 2.0, t)?).powf(b.s3 / 2.0);
                    let q = (1.0 + x0.powf(b.z3)) * k1.powf(b.z3) * (1.0 + self.data_sum(t - 2.0, t)?).powf(b.z2);
                    (lhs, 0.0, p, Some(q))
                }
            }
            "pt_sup_local" => {
                let w = win.unwrap();
                let (lo, hi) = w.inner();
                let (hlo, hhi) = w.half();
                let s1 = b.s1;
                let l2 = self.spacetime("pt_L2", 2.0, hlo, hhi)?;
                let p = self.lambda(&w)?.powf(s1 / 2.0) * (1.0 + 1.0 / w.theta_t()).powf((s1 + 1.0) / 2.0) * l2;
                let f = self.sup("bdry_psi_t_sup", w.t0, w.end())?;
                (self.sup("pt_Linf", lo, hi)?, f, p, None)
            }
            "pt_sup_early" | "pt_sup_late" => {
                let x0 = self.pbar0()?;
                let k1 = self.k1(t)?;
                let lhs = self.at("pt_Linf", t)?;
                let sn = b.s3 - 1.0;
                if shape.id == "pt_sup_early" {
                    let p = t.powf(-b.kappa4 / 2.0)
                        * (1.0 + x0).powf(b.kappa5)
                        * (1.0 + self.at("H_int", 0.0)?).sqrt()
                        * k1.powf(s2t * sn * b.z3)
                        * self.k2(0.0, t)?.powf(s2t * sn)
                        * (1.0 + self.series.integrate("G3", 0.0, t)?).powf(b.s3 / 2.0);
                    let q = t.powf(-1.0 / b.delta1)
                        * (1.0 + x0).powf(b.z3)
                        * k1.powf(b.z3)
                        * (1.0 + self.data_sum(0.0, t)?).powf(b.z2);
                    (lhs, self.sup("bdry_psi_t_sup", 0.0, t)?, p, Some(q))
                } else {
                    let p = (1.0 + x0).powf(b.kappa6)
                        * k1.powf(b.kappa6)
                        * self.k2(t - 3.0, t)?.powf(s2t * sn)
                        * (1.0 + self.series.integrate("G3", t - 2.0, t)?).powf(b.s3 / 2.0);
                    let q = (1.0 + x0.powf(b.z3)) * k1.powf(b.z3) * (1.0 + self.data_sum(t - 3.0, t)?).powf(b.z2);
                    (lhs, self.sup("bdry_psi_t_sup", t - 1.0, t)?, p, Some(q))
                }
            }
            "h_integral" => {
                let l = self.series.integrate("H_int", 0.0, t)?;
                let p = self.at("pbar_L2", 0.0)?.powi(2) + self.series.integrate("G1", 0.0, t)?;
                (l, 0.0, p, None)
            }
            "energy" => {
                let l = self.at("H_int", t)? + self.series.integrate_right("pbar_t_L2", 0.0, t, |v| v * v)?;
                let f = self.at("H_int", 0.0)? + self.at("pbar_L2", 0.0)?.powi(2);
                (l, f, self.series.integrate("G3", 0.0, t)?, None)
            }
            other => return Err(Error::Config(format!("unknown theorem shape `{other}`"))),
        };
        Ok(out)
    }
}

/// Windows and times at which shapes are sampled, and the holdout tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSettings {
    pub windows: Vec<Window>,
    pub times: Vec<f64>,
    /// Holdout passes when `L ≤ factor · fitted RHS`.
    pub holdout_factor: f64,
    /// Fit one constant per term of `pbar_sup_local` instead of a shared one.
    pub per_term: bool,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            windows: vec![
                Window::new(0.25, 1.0, 0.5),
                Window::new(0.5, 1.5, 0.5),
                Window::new(1.0, 1.0, 0.5),
            ],
            times: vec![0.5, 1.0, 1.5, 2.0],
            holdout_factor: 1.5,
            per_term: false,
        }
    }
}

impl ProbeSettings {
    fn probes(&self, shape: &Shape, t_end: f64) -> Vec<Probe> {
        let slack = 1e-9 * t_end.max(1.0);
        let all = self
            .windows
            .iter()
            .filter(|w| w.end() <= t_end + slack)
            .map(|w| Probe::Window(*w))
            .chain(self.times.iter().filter(|t| **t <= t_end + slack).map(|t| Probe::Time(*t)));
        all.filter(|p| shape.domain.admits(p)).collect()
    }
}

/// Samples of one shape across a family of runs.
pub fn collect_samples(
    shape: &Shape,
    family: &[&FunctionalSeries],
    bundle: &ExponentBundle,
    settings: &ProbeSettings,
) -> Result<Vec<ShapeSample>> {
    let mut out = Vec::new();
    for (run, series) in family.iter().enumerate() {
        let view = RunView::new(series, bundle);
        let t_end = series.times().last().copied().unwrap_or(0.0);
        for probe in settings.probes(shape, t_end) {
            let (lhs, fixed, factor, exponent) = view.evaluate(shape, &probe)?;
            out.push(ShapeSample {
                run,
                probe: probe.to_string(),
                lhs,
                fixed,
                factor,
                exponent,
            });
        }
    }
    Ok(out)
}

/// Fitted constants and transfer statistics of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub id: String,
    pub fitted: FittedConstants,
    pub train_samples: usize,
    pub holdout_samples: usize,
    /// Largest `L / fitted RHS` over the training samples (at most 1).
    pub train_max_ratio: f64,
    /// Largest `L / fitted RHS` over the holdout samples.
    pub holdout_max_ratio: f64,
    pub holdout_factor: f64,
    /// Per-term constants when the six terms of `pbar_sup_local` are fitted separately.
    pub term_constants: Option<Vec<f64>>,
    /// Probe descriptions, for the report.
    pub probes: Vec<String>,
    pub passed: bool,
}

/// Fit `(C, C′)` on `train` and evaluate the transfer to `holdout`.
pub fn fit_theorem_constant(
    id: &str,
    train: &[&FunctionalSeries],
    holdout: &[&FunctionalSeries],
    bundle: &ExponentBundle,
    settings: &ProbeSettings,
) -> Result<InequalityCheck> {
    let shape = shape(id)?;
    if settings.per_term && id == "pbar_sup_local" {
        return fit_per_term(train, holdout, bundle, settings);
    }
    let train_s = collect_samples(shape, train, bundle, settings)?;
    let hold_s = collect_samples(shape, holdout, bundle, settings)?;
    if train_s.is_empty() || hold_s.is_empty() {
        return Err(Error::Precondition(format!(
            "shape `{id}` has no admissible probes in the {} family",
            if train_s.is_empty() { "training" } else { "holdout" }
        )));
    }
    let fitted = fit_constants(&train_s);
    let max_ratio = |s: &[ShapeSample]| s.iter().map(|x| fitted.ratio(x)).fold(0.0, f64::max);
    let holdout_max_ratio = max_ratio(&hold_s);
    let mut probes: Vec<String> = train_s.iter().map(|s| s.probe.clone()).collect();
    probes.sort();
    probes.dedup();
    Ok(InequalityCheck {
        id: id.to_string(),
        train_samples: train_s.len(),
        holdout_samples: hold_s.len(),
        train_max_ratio: max_ratio(&train_s),
        holdout_max_ratio,
        holdout_factor: settings.holdout_factor,
        passed: holdout_max_ratio <= settings.holdout_factor,
        term_constants: None,
        probes,
        fitted,
    })
}

fn term_samples(
    family: &[&FunctionalSeries],
    bundle: &ExponentBundle,
    settings: &ProbeSettings,
) -> Result<Vec<(f64, [f64; 6], String)>> {
    let shape = shape("pbar_sup_local")?;
    let mut out = Vec::new();
    for series in family {
        let view = RunView::new(series, bundle);
        let t_end = series.times().last().copied().unwrap_or(0.0);
        for probe in settings.probes(shape, t_end) {
            let Probe::Window(w) = probe else { continue };
            let (lo, hi) = w.inner();
            out.push((view.sup("sup_pbar", lo, hi)?, view.pbar_sup_terms(&w)?, probe.to_string()));
        }
    }
    Ok(out)
}

/// Per-term fit of `pbar_sup_local`: every training sample is attributed to
/// its largest term, and `C_k` is the smallest constant covering the samples
/// attributed to term `k`. Each training sample then satisfies
/// `L ≤ C_k P_k ≤ Σ_j C_j P_j`.
fn fit_per_term(
    train: &[&FunctionalSeries],
    holdout: &[&FunctionalSeries],
    bundle: &ExponentBundle,
    settings: &ProbeSettings,
) -> Result<InequalityCheck> {
    let train_s = term_samples(train, bundle, settings)?;
    let hold_s = term_samples(holdout, bundle, settings)?;
    if train_s.is_empty() || hold_s.is_empty() {
        return Err(Error::Precondition("shape `pbar_sup_local` has no admissible windows".into()));
    }
    let mut c = vec![0.0_f64; 6];
    for (lhs, terms, _) in &train_s {
        let (k, pk) = terms
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, v)| if *v > best.1 { (k, *v) } else { best });
        if *lhs > 0.0 && pk > 0.0 {
            c[k] = c[k].max(lhs / pk);
        }
    }
    let ratio = |(lhs, terms, _): &(f64, [f64; 6], String)| {
        let rhs: f64 = c.iter().zip(terms).map(|(c, p)| c * p).sum();
        if *lhs == 0.0 {
            0.0
        } else {
            lhs / rhs
        }
    };
    let max_ratio = |s: &[(f64, [f64; 6], String)]| s.iter().map(ratio).fold(0.0, f64::max);
    let holdout_max_ratio = max_ratio(&hold_s);
    let mut probes: Vec<String> = train_s.iter().map(|s| s.2.clone()).collect();
    probes.sort();
    probes.dedup();
    Ok(InequalityCheck {
        id: "pbar_sup_local".into(),
        fitted: FittedConstants {
            c: c.iter().cloned().fold(0.0, f64::max),
            c_prime: None,
        },
        train_samples: train_s.len(),
        holdout_samples: hold_s.len(),
        train_max_ratio: max_ratio(&train_s),
        holdout_max_ratio,
        holdout_factor: settings.holdout_factor,
        term_constants: Some(c),
        probes,
        passed: holdout_max_ratio <= settings.holdout_factor,
    })
}
