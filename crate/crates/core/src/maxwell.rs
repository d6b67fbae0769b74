//! Maxwell's equations on a graph:
//!
//! ```text
//! dE/dt = −curl B,   dB/dt = −J + curl E,   div E = ρ,   div B = 0
//! ```
//!
//! integrated with fixed-step classical Runge–Kutta. ρ is only monitored.

use alloc::vec::Vec;

use crate::field::{ScalarField, VectorField};
use crate::hodge::Hodge;
use crate::numerics::dot;
use crate::{Error, Result};

/// Tolerance for constraint and energy drift.
pub const MAXWELL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EMState<'g> {
    pub e: VectorField<'g>,
    pub b: VectorField<'g>,
    pub t: f64,
}

impl<'g> EMState<'g> {
    pub fn new(e: VectorField<'g>, b: VectorField<'g>) -> Result<Self> {
        if e.graph() != b.graph() {
            return Err(Error::GraphMismatch);
        }
        Ok(EMState { e, b, t: 0.0 })
    }

    /// (|E|² + |B|²)/2.
    pub fn energy(&self) -> f64 {
        let (e, b) = (self.e.coefficients(), self.b.coefficients());
        0.5 * (dot(e, e) + dot(b, b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sources<'g> {
    pub j: VectorField<'g>,
    pub rho: ScalarField<'g>,
}

impl<'g> Sources<'g> {
    /// J = 0 with the given charge density.
    pub fn static_charge(rho: ScalarField<'g>) -> Self {
        Sources { j: VectorField::zeros(rho.graph()), rho }
    }
}

/// States at t = 0, dt, 2dt, … (every `record_every`-th step plus the last).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<'g> {
    pub states: Vec<EMState<'g>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub steps: usize,
    pub dt: f64,
    /// max |div E₀ − ρ|.
    pub initial_gauss: f64,
    /// max |div B₀|.
    pub initial_magnetic: f64,
    /// Whether the initial state satisfied both constraints to tolerance.
    pub initial_constraints_hold: bool,
    /// max |div J|; nonzero current divergence makes div B drift.
    pub current_divergence: f64,
    /// max over time of max |(div E_t − ρ) − (div E₀ − ρ)|.
    pub gauss_drift: f64,
    /// max over time of max |div B_t − div B₀|.
    pub magnetic_drift: f64,
    pub initial_energy: f64,
    /// max |energy_t − energy₀| / energy₀ (absolute when energy₀ = 0);
    /// only tracked when J = 0.
    pub energy_drift: Option<f64>,
    pub tolerance: f64,
    /// All tracked drifts are within tolerance.
    pub pass: bool,
}

fn same_graph(hodge: &Hodge<'_>, fields: &[&VectorField<'_>], rho: &ScalarField<'_>) -> Result<()> {
    let g = hodge.graph();
    if fields.iter().all(|f| f.graph() == g) && rho.graph() == g {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

fn rhs(hodge: &Hodge<'_>, e: &[f64], b: &[f64], j: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let curl = hodge.curl_matrix();
    let de = curl.mul_vec(b)?.into_iter().map(|v| -v).collect();
    let db = curl.mul_vec(e)?.into_iter().zip(j).map(|(c, j)| c - j).collect();
    Ok((de, db))
}

/// (dE/dt, dB/dt) = (−curl B, −J + curl E).
pub fn maxwell_rhs<'g>(
    hodge: &Hodge<'g>,
    state: &EMState<'_>,
    sources: &Sources<'_>,
) -> Result<(VectorField<'g>, VectorField<'g>)> {
    same_graph(hodge, &[&state.e, &state.b, &sources.j], &sources.rho)?;
    let (de, db) = rhs(hodge, state.e.coefficients(), state.b.coefficients(), sources.j.coefficients())?;
    Ok((VectorField::new(hodge.graph(), de)?, VectorField::new(hodge.graph(), db)?))
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

fn max_abs_diff_of(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Integrates `steps` RK4 steps of size `dt`, keeping every `record_every`-th
/// state (`0` keeps only the first and last).
pub fn maxwell_integrate<'g>(
    hodge: &Hodge<'g>,
    state0: &EMState<'_>,
    sources: &Sources<'_>,
    dt: f64,
    steps: usize,
    record_every: usize,
) -> Result<(Trajectory<'g>, ConstraintReport)> {
    if dt.is_nan() || dt <= 0.0 || dt.is_infinite() {
        return Err(Error::NonPositiveStep);
    }
    same_graph(hodge, &[&state0.e, &state0.b, &sources.j], &sources.rho)?;
    let g = hodge.graph();
    let div = hodge.calculus().divergence_matrix();
    let rho = sources.rho.values();
    let j = sources.j.coefficients();

    let gauss =
        |e: &[f64]| -> Result<Vec<f64>> { Ok(div.mul_vec(e)?.into_iter().zip(rho).map(|(d, r)| d - r).collect()) };
    let gauss0 = gauss(state0.e.coefficients())?;
    let magnetic0 = div.mul_vec(state0.b.coefficients())?;
    let initial_gauss = gauss0.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let initial_magnetic = magnetic0.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let current_divergence = div.mul_vec(j)?.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let track_energy = j.iter().all(|&v| v == 0.0);
    let energy0 = state0.energy();

    let mut e = state0.e.coefficients().to_vec();
    let mut b = state0.b.coefficients().to_vec();
    let mut t = state0.t;
    let (mut gauss_drift, mut magnetic_drift, mut energy_drift) = (0.0_f64, 0.0_f64, 0.0_f64);
    let snapshot = |e: &[f64], b: &[f64], t: f64| -> Result<EMState<'g>> {
        Ok(EMState { e: VectorField::new(g, e.to_vec())?, b: VectorField::new(g, b.to_vec())?, t })
    };
    let mut states = Vec::new();
    states.push(snapshot(&e, &b, t)?);

    for step in 1..=steps {
        let (k1e, k1b) = rhs(hodge, &e, &b, j)?;
        let (k2e, k2b) = rhs(hodge, &axpy(&e, dt / 2.0, &k1e), &axpy(&b, dt / 2.0, &k1b), j)?;
        let (k3e, k3b) = rhs(hodge, &axpy(&e, dt / 2.0, &k2e), &axpy(&b, dt / 2.0, &k2b), j)?;
        let (k4e, k4b) = rhs(hodge, &axpy(&e, dt, &k3e), &axpy(&b, dt, &k3b), j)?;
        for i in 0..e.len() {
            e[i] += dt / 6.0 * (k1e[i] + 2.0 * k2e[i] + 2.0 * k3e[i] + k4e[i]);
            b[i] += dt / 6.0 * (k1b[i] + 2.0 * k2b[i] + 2.0 * k3b[i] + k4b[i]);
        }
        t = state0.t + step as f64 * dt;

        gauss_drift = gauss_drift.max(max_abs_diff_of(&gauss(&e)?, &gauss0));
        magnetic_drift = magnetic_drift.max(max_abs_diff_of(&div.mul_vec(&b)?, &magnetic0));
        if track_energy {
            let energy = 0.5 * (dot(&e, &e) + dot(&b, &b));
            let delta = (energy - energy0).abs();
            energy_drift = energy_drift.max(if energy0 > 0.0 { delta / energy0 } else { delta });
        }
        if (record_every > 0 && step % record_every == 0) || step == steps {
            states.push(snapshot(&e, &b, t)?);
        }
    }

    let energy_drift = track_energy.then_some(energy_drift);
    let pass = gauss_drift <= MAXWELL_TOLERANCE
        && magnetic_drift <= MAXWELL_TOLERANCE
        && energy_drift.is_none_or(|d| d <= MAXWELL_TOLERANCE);
    let report = ConstraintReport {
        steps,
        dt,
        initial_gauss,
        initial_magnetic,
        initial_constraints_hold: initial_gauss <= MAXWELL_TOLERANCE && initial_magnetic <= MAXWELL_TOLERANCE,
        current_divergence,
        gauss_drift,
        magnetic_drift,
        initial_energy: energy0,
        energy_drift,
        tolerance: MAXWELL_TOLERANCE,
        pass,
    };
    Ok((Trajectory { states }, report))
}
