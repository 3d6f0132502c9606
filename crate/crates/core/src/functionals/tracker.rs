use serde::{Deserialize, Serialize};

use crate::constitutive::ConstitutiveLaw;
use crate::discretization::{BoundaryData, BoundaryFrame, Derivative, Grid, ScalarField, SpaceTimeFn};
use crate::error::{Error, Result};

use super::data::{compute_a_from, compute_g_from, DataSamples, GFunctional};
use super::norms::{boundary_points, boundary_sup_grad, gradient_magnitudes, integral, lp_values};

/// Exponents feeding the tracked functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FunctionalParams {
    pub alpha: f64,
    pub p1: f64,
    pub s0: f64,
    /// Exponents `s` for the `grad_L{s}` columns.
    pub s: Vec<f64>,
}

impl Default for FunctionalParams {
    fn default() -> Self {
        Self {
            alpha: 4.0,
            p1: 1.0,
            s0: 1.5,
            s: vec![3.0],
        }
    }
}

impl FunctionalParams {
    /// `α q₁`, infinite when `p₁ = 1`.
    pub fn alpha_q1(&self) -> f64 {
        if self.p1 == 1.0 {
            f64::INFINITY
        } else {
            self.alpha * self.p1 / (self.p1 - 1.0)
        }
    }
}

const T: Derivative = Derivative::T;
const X: Derivative = Derivative::X;
const Y: Derivative = Derivative::Y;

/// Column id for `‖∇p‖_{L^s}`.
pub fn grad_ls_id(s: f64) -> String {
    format!("grad_L{s}")
}

/// Every column id, in output order.
pub fn all_columns(params: &FunctionalParams) -> Vec<String> {
    let mut ids: Vec<String> = ["sup_p", "sup_pbar", "pbar_L2", "pbar_Lalpha", "grad_L2", "grad_Linf"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    ids.extend(params.s.iter().map(|&s| grad_ls_id(s)));
    ids.extend(
        [
            "bdry_grad_sup",
            "pt_L2",
            "pt_Linf",
            "pbar_t_L2",
            "H_int",
            "A_alpha",
            "EnvA",
            "G1",
            "G2",
            "G3",
            "psi_sup",
            "psi_t_sup",
            "grad_psi_sup",
            "hess_psi_sup",
            "gradpsi_aq",
            "psi_t_aq",
            "bdry_psi_t_sup",
            "lambda",
            "mp_margin",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    ids
}

/// Boundary derivatives a column needs.
pub fn requirements(id: &str) -> &'static [Derivative] {
    match id {
        "pbar_t_L2" | "psi_t_sup" | "psi_t_aq" | "bdry_psi_t_sup" => &[T],
        "A_alpha" | "EnvA" | "G1" => &[X, Y, T],
        "G2" => &[T, Derivative::XT, Derivative::YT],
        "G3" => &[X, Y, T, Derivative::XT, Derivative::YT],
        "grad_psi_sup" | "gradpsi_aq" => &[X, Y],
        "hess_psi_sup" => &[Derivative::XX, Derivative::XY, Derivative::YY],
        _ => &[],
    }
}

/// Evaluates one row of functionals per recorded state.
pub struct Tracker<'a> {
    law: &'a ConstitutiveLaw,
    boundary: &'a BoundaryData,
    source: Option<&'a SpaceTimeFn>,
    params: FunctionalParams,
    columns: Vec<String>,
    env_a: f64,
}

impl<'a> Tracker<'a> {
    /// `tracked = None` selects every column the boundary data supports.
    pub fn new(
        law: &'a ConstitutiveLaw,
        boundary: &'a BoundaryData,
        source: Option<&'a SpaceTimeFn>,
        params: FunctionalParams,
        tracked: Option<&[String]>,
        dim: usize,
    ) -> Result<Self> {
        if !(params.alpha >= 1.0) || !(params.p1 >= 1.0) || !(params.s0 > 0.0 && params.s0 < 2.0) {
            return Err(Error::Config(format!(
                "functional exponents need alpha >= 1, p1 >= 1, 0 < s0 < 2 (got {}, {}, {})",
                params.alpha, params.p1, params.s0
            )));
        }
        if let Some(s) = params.s.iter().find(|s| !(**s > 0.0)) {
            return Err(Error::Config(format!("gradient exponent s must be positive, got {s}")));
        }
        let all = all_columns(&params);
        let columns = match tracked {
            Some(ids) => {
                for id in ids {
                    if !all.contains(id) {
                        return Err(Error::Config(format!("unknown functional id `{id}`")));
                    }
                    boundary.require(dim, requirements(id))?;
                }
                all.into_iter().filter(|c| ids.contains(c)).collect()
            }
            None => all
                .into_iter()
                .filter(|c| boundary.require(dim, requirements(c)).is_ok())
                .collect(),
        };
        Ok(Self {
            law,
            boundary,
            source,
            params,
            columns,
            env_a: f64::NEG_INFINITY,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn params(&self) -> &FunctionalParams {
        &self.params
    }

    fn rate(&self, state: &ScalarField, frame: &BoundaryFrame) -> Result<Vec<f64>> {
        let mut rate = crate::discretization::apply_operator(state, self.law, frame)?;
        if let Some(f) = self.source {
            let t = state.t();
            rate.iter_mut().zip(state.grid().centers()).for_each(|(r, x)| *r += f(x, t));
        }
        Ok(rate)
    }

    /// One row for `state`; `margin` is the step's maximum-principle margin.
    pub fn row(&mut self, state: &ScalarField, margin: f64) -> Result<Vec<f64>> {
        let grid: Grid = *state.grid();
        let t = state.t();
        let p = &self.params;
        let a = self.law.degree_exponent();
        let frame = BoundaryFrame::from_data(&grid, self.boundary, t);
        let data = DataSamples::sample(&grid, self.boundary, t);
        let pbar: Vec<f64> = state.values().iter().zip(&data.psi).map(|(p, s)| p - s).collect();
        let grad = gradient_magnitudes(state, &frame);
        let wants = |id: &str| self.columns.iter().any(|c| c == id);
        let rate = if wants("pt_L2") || wants("pt_Linf") || wants("pbar_t_L2") {
            Some(self.rate(state, &frame)?)
        } else {
            None
        };
        let aq = p.alpha_q1();
        let data_norm = |v: &[f64]| {
            if aq.is_infinite() {
                lp_values(&grid, v, f64::INFINITY)
            } else {
                integral(&grid, &v.iter().map(|x| x.abs().powf(aq)).collect::<Vec<_>>())
            }
        };

        let mut row = Vec::with_capacity(self.columns.len());
        for id in &self.columns {
            let v = match id.as_str() {
                "sup_p" => state.max_abs(),
                "sup_pbar" => lp_values(&grid, &pbar, f64::INFINITY),
                "pbar_L2" => lp_values(&grid, &pbar, 2.0),
                "pbar_Lalpha" => lp_values(&grid, &pbar, p.alpha),
                "grad_L2" => lp_values(&grid, &grad, 2.0),
                "grad_Linf" => lp_values(&grid, &grad, f64::INFINITY),
                "bdry_grad_sup" => boundary_sup_grad(state, &frame),
                "pt_L2" => lp_values(&grid, rate.as_ref().unwrap(), 2.0),
                "pt_Linf" => lp_values(&grid, rate.as_ref().unwrap(), f64::INFINITY),
                "pbar_t_L2" => {
                    let d: Vec<f64> = rate.as_ref().unwrap().iter().zip(data.psi_t()?).map(|(r, s)| r - s).collect();
                    lp_values(&grid, &d, 2.0)
                }
                "H_int" => {
                    let h = grad.iter().map(|g| self.law.eval_H(*g)).collect::<Result<Vec<_>>>()?;
                    integral(&grid, &h)
                }
                "A_alpha" | "EnvA" => {
                    let value = compute_a_from(&grid, &data, a, p.alpha)?;
                    if id == "EnvA" {
                        self.env_a = self.env_a.max(value);
                        self.env_a
                    } else {
                        value
                    }
                }
                "G1" => compute_g_from(&grid, &data, a, GFunctional::G1)?,
                "G2" => compute_g_from(&grid, &data, a, GFunctional::G2)?,
                "G3" => compute_g_from(&grid, &data, a, GFunctional::G3)?,
                "psi_sup" => lp_values(&grid, &data.psi, f64::INFINITY),
                "psi_t_sup" => lp_values(&grid, data.psi_t()?, f64::INFINITY),
                "grad_psi_sup" => lp_values(&grid, &data.grad_magnitudes()?, f64::INFINITY),
                "hess_psi_sup" => lp_values(&grid, &data.hessian_magnitudes()?, f64::INFINITY),
                "gradpsi_aq" => data_norm(&data.grad_magnitudes()?),
                "psi_t_aq" => data_norm(data.psi_t()?),
                "bdry_psi_t_sup" => {
                    let f = self.boundary.derivative(T)?;
                    boundary_points(&grid).into_iter().fold(0.0_f64, |m, x| m.max(f(x, t).abs()))
                }
                "lambda" => {
                    let e = a * p.s0 / (2.0 - p.s0);
                    integral(&grid, &grad.iter().map(|g| (1.0 + g).powf(e)).collect::<Vec<_>>())
                }
                "mp_margin" => margin,
                other => match p.s.iter().find(|&&s| grad_ls_id(s) == other) {
                    Some(&s) => lp_values(&grid, &grad, s),
                    None => return Err(Error::MissingFunctional(other.to_string())),
                },
            };
            row.push(v);
        }
        Ok(row)
    }
}
