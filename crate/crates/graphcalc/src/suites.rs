//! Randomized verification suites driven by `graphcalc check`.

use graphcalc_core::cycles::line_integral;
use graphcalc_core::hodge::parity_matrix;
use graphcalc_core::operators::{divergence, gradient, laplacian_apply};
use graphcalc_core::theorems::{
    divergence_theorem_sides, first_order_boundary_sides, greens_identity_sides, greens_theorem_sides, GreensIdentity,
    IdentityReport,
};
use graphcalc_core::{Calculus, DenseMatrix, Graph, Hodge, VertexId};
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::random;

pub const THEOREM_TOLERANCE: f64 = 1e-12;
pub const HODGE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorems,
    Hodge,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Residuals accumulated per identity, in first-seen order.
#[derive(Debug, Default)]
pub struct Tally {
    checks: Vec<IdentityCheck>,
}

impl Tally {
    pub fn record(&mut self, name: &'static str, residual: f64, tolerance: f64) {
        let i = match self.checks.iter().position(|c| c.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(IdentityCheck { name, trials: 0, max_residual: 0.0, tolerance, pass: true });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[i];
        c.trials += 1;
        // a NaN residual sticks so the check fails
        if !c.max_residual.is_nan() && (residual.is_nan() || residual > c.max_residual) {
            c.max_residual = residual;
        }
        c.pass = c.max_residual <= c.tolerance;
    }

    pub fn record_report(&mut self, name: &'static str, report: &IdentityReport) {
        self.record(name, report.residual, report.tolerance);
    }

    pub fn checks(&self) -> &[IdentityCheck] {
        &self.checks
    }

    pub fn into_checks(self) -> Vec<IdentityCheck> {
        self.checks
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    /// Replaces every floating-point tolerance when set; the integer-input
    /// checks always require exact agreement.
    pub tolerance: Option<f64>,
    pub cycle_limit: usize,
}

pub fn run_suite(g: &Graph, suite: Suite, opts: &SuiteOptions) -> Result<Vec<IdentityCheck>> {
    let mut tally = Tally::default();
    let mut rng = random::rng(opts.seed);
    if matches!(suite, Suite::Theorems | Suite::All) {
        theorem_suite(g, opts, &mut rng, &mut tally)?;
    }
    if matches!(suite, Suite::Hodge | Suite::All) {
        hodge_suite(g, opts, &mut rng, &mut tally)?;
    }
    Ok(tally.into_checks())
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0_f64, |m, x| if x.abs() > m || x.is_nan() { x.abs() } else { m })
}

/// |ΔG_i − (e_i − 1/|V|)|_∞ and |Σ_j G_i(j)|.
pub fn greens_function_residuals(calc: &Calculus<'_>, pole: VertexId) -> Result<(f64, f64)> {
    let g = calc.graph();
    let i = g.require_vertex(pole)?;
    let green = calc.greens_function(pole)?;
    let n = g.vertex_count() as f64;
    let lap = laplacian_apply(&green);
    let residual =
        max_abs(lap.values().iter().enumerate().map(|(j, v)| v - (if j == i { 1.0 } else { 0.0 } - 1.0 / n)));
    Ok((residual, green.sum().abs()))
}

fn theorem_suite(g: &Graph, opts: &SuiteOptions, rng: &mut impl Rng, tally: &mut Tally) -> Result<()> {
    let calc = Calculus::new(g)?;
    let tol = opts.tolerance.unwrap_or(THEOREM_TOLERANCE);
    for _ in 0..opts.trials {
        let h = random::subgraph(rng, g);
        let x = random::vector_field(rng, g);
        let phi = random::scalar_field(rng, g);
        let psi = random::scalar_field(rng, g);
        let pole = random::vertex(rng, g);

        let reports = [
            ("divergence_theorem", divergence_theorem_sides(&calc, &h, &x)?),
            ("greens_theorem", greens_theorem_sides(&calc, &h, &phi)?),
            ("first_order_boundary", first_order_boundary_sides(&calc, &h, &x, &phi)?),
            ("greens_identity_1", greens_identity_sides(&calc, &h, &phi, &psi, GreensIdentity::First, None)?),
            ("greens_identity_2", greens_identity_sides(&calc, &h, &phi, &psi, GreensIdentity::Second, None)?),
            ("greens_identity_3", greens_identity_sides(&calc, &h, &phi, &psi, GreensIdentity::Third, Some(pole))?),
        ];
        for (name, r) in &reports {
            tally.record(name, r.residual, tol);
        }

        let (lap, sum) = greens_function_residuals(&calc, pole)?;
        tally.record("greens_function_laplacian", lap, tol);
        tally.record("greens_function_mean_zero", sum, tol);

        // integer inputs: every sum is exact in floating point
        let xi = random::integer_vector_field(rng, g);
        let phii = random::integer_scalar_field(rng, g);
        let psii = random::integer_scalar_field(rng, g);
        let exact = [
            ("divergence_theorem_integer", divergence_theorem_sides(&calc, &h, &xi)?),
            ("greens_theorem_integer", greens_theorem_sides(&calc, &h, &phii)?),
            ("first_order_boundary_integer", first_order_boundary_sides(&calc, &h, &xi, &phii)?),
            ("greens_identity_1_integer", greens_identity_sides(&calc, &h, &phii, &psii, GreensIdentity::First, None)?),
            (
                "greens_identity_2_integer",
                greens_identity_sides(&calc, &h, &phii, &psii, GreensIdentity::Second, None)?,
            ),
        ];
        for (name, r) in &exact {
            tally.record(name, r.residual, 0.0);
        }
    }
    Ok(())
}

fn frob(m: &DenseMatrix) -> f64 {
    m.frobenius_norm()
}

fn hodge_suite(g: &Graph, opts: &SuiteOptions, rng: &mut impl Rng, tally: &mut Tally) -> Result<()> {
    let hodge = Hodge::new(g, opts.cycle_limit)?;
    let tol = opts.tolerance.unwrap_or(HODGE_TOLERANCE);
    let parity_tol = opts.tolerance.unwrap_or(THEOREM_TOLERANCE);
    let curl = hodge.curl_matrix();
    let n = curl.rows();

    tally.record("curl_idempotent", frob(&curl.matmul(curl)?.sub(curl)?), tol);
    tally.record("curl_self_adjoint", frob(&curl.sub(&curl.transpose())?), tol);
    let grad: &DenseMatrix = hodge.calculus().gradient_matrix();
    let div: &DenseMatrix = hodge.calculus().divergence_matrix();
    tally.record("curl_of_gradient", frob(&curl.matmul(grad)?), tol);
    tally.record("divergence_of_curl", frob(&div.matmul(curl)?), tol);

    let s = parity_matrix(g, true);
    let a = parity_matrix(g, false);
    let id = DenseMatrix::identity(n);
    let parity = [
        frob(&s.matmul(&s)?.sub(&s)?),
        frob(&a.matmul(&a)?.sub(&a)?),
        frob(&s.add(&a)?.sub(&id)?),
        frob(&s.matmul(&a)?),
        frob(&s.sub(&s.transpose())?),
    ];
    tally.record("parity_projectors", max_abs(parity), parity_tol);

    let report = hodge.exact_sequence_report()?;
    let homology_ok =
        report.antisymmetric_homology == report.cyclomatic && report.symmetric_homology == report.cyclomatic;
    tally.record("homology_dimension", if homology_ok { 0.0 } else { 1.0 }, 0.0);
    tally.record("exact_sequence", max_abs([report.symmetric_gradient, report.divergence_symmetric]), tol);
    tally.record("parity_split", max_abs([report.circulation_free_split, report.harmonic_split]), tol);

    let harmonic = hodge.harmonic_basis();
    for v in harmonic.vectors() {
        let x = graphcalc_core::VectorField::new(g, v)?;
        let (sx, ax) = x.parity_parts();
        let r = harmonic.residual(sx.coefficients())?.max(harmonic.residual(ax.coefficients())?);
        tally.record("harmonic_parity_parts", r, tol);
    }

    let dims = hodge.dimension_report();
    let dims_ok = dims.is_complete() && dims.gradient + 1 == dims.vertices;
    tally.record("dimension_sum", if dims_ok { 0.0 } else { 1.0 }, 0.0);

    let walks = hodge.cycles().walks(g)?;
    for _ in 0..opts.trials {
        let x = random::vector_field(rng, g);
        let d = hodge.hodge_decompose(&x)?;
        tally.record("hodge_reconstruction", d.reconstruction_residual, tol);
        tally.record("hodge_orthogonality", d.orthogonality_residual, tol);
        tally.record("hodge_gradient_consistency", d.gradient_consistency, tol);
        let mut circ = 0.0_f64;
        for w in &walks {
            circ = circ.max((line_integral(w, &x)? - line_integral(w, &d.curl_part)?).abs());
        }
        tally.record("circulation_preservation", circ, tol);
        tally.record("curl_divergence_free", max_abs(divergence(&d.curl_part).into_values()), tol);
        let phi = random::scalar_field(rng, g);
        tally.record("curl_kills_gradients", hodge.curl(&gradient(&phi))?.max_abs(), tol);
    }
    Ok(())
}
