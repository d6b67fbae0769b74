//! Subcommand implementations. Each returns the stdout payload and whether
//! every requested check passed; input problems are errors.

use std::fs;
use std::path::Path;

use graphcalc_core::cycles::circulation_system;
use graphcalc_core::graph::boundary as boundary_of;
use graphcalc_core::maxwell::maxwell_integrate;
use graphcalc_core::numerics::range_basis;
use graphcalc_core::{Calculus, EMState, Graph, Hodge, ScalarField, Sources, VectorField, VertexId};
use serde::Serialize;
use serde_json::json;

use crate::dot::{graph_dot, tangent_dot};
use crate::error::{CliError, Result};
use crate::formats::{read_graph, read_json, FieldFile, ScalarFile, Scenario, SubgraphFile};
use crate::suites::{greens_function_residuals, run_suite, IdentityCheck, Suite, SuiteOptions};

pub const DECOMPOSE_TOLERANCE: f64 = 1e-10;
pub const GREENS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub payload: String,
    /// False maps to exit code 2.
    pub verified: bool,
    /// Lines for standard error.
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn json(value: &impl Serialize, verified: bool) -> Self {
        let payload = serde_json::to_string_pretty(value).expect("payload serializes");
        Outcome { payload, verified, diagnostics: Vec::new() }
    }
}

fn write_dot(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn dimensions_json(hodge: &Hodge<'_>) -> serde_json::Value {
    let d = hodge.dimension_report();
    json!({
        "gradient": d.gradient,
        "curl": d.curl,
        "harmonic": d.harmonic,
        "circulation_free": d.circulation_free,
        "cyclomatic": d.cyclomatic,
    })
}

pub fn tangent(graph: &Path, dot: Option<&Path>) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let tg = g.tangent();
    if let Some(path) = dot {
        write_dot(path, &tangent_dot(&g))?;
    }
    let value = json!({
        "vertices": tg.len(),
        "directed_edges": tg.directed_edges().iter().map(|u| [u.base, u.tip]).collect::<Vec<_>>(),
        "adjacency": tg.edges(),
    });
    Ok(Outcome::json(&value, true))
}

pub fn boundary(graph: &Path, subgraph: &Path, dot: Option<&Path>) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let h = read_json::<SubgraphFile>(subgraph)?.to_spec(&g)?;
    let b = boundary_of(&g, &h)?;
    if let Some(path) = dot {
        write_dot(path, &graph_dot(&g, Some(&h)))?;
    }
    let value = json!({
        "subgraph": SubgraphFile::from_spec(&h),
        "v_minus": b.v_minus,
        "v_plus": b.v_plus,
        "boundary_edges": b.boundary_edges.iter().map(|&(a, c)| [a, c]).collect::<Vec<_>>(),
        "normal": FieldFile::from_field(&b.normal),
    });
    Ok(Outcome::json(&value, true))
}

pub fn decompose(graph: &Path, field: &Path, cycle_limit: usize, tolerance: Option<f64>) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let x = read_json::<FieldFile>(field)?.to_field(&g)?;
    let hodge = Hodge::new(&g, cycle_limit)?;
    let d = hodge.hodge_decompose(&x)?;
    let tol = tolerance.unwrap_or(DECOMPOSE_TOLERANCE);
    let verified = d.max_residual() <= tol;
    let value = json!({
        "gradient_part": FieldFile::from_field(&d.gradient_part),
        "curl_part": FieldFile::from_field(&d.curl_part),
        "harmonic_part": FieldFile::from_field(&d.harmonic_part),
        "dimensions": dimensions_json(&hodge),
        "residuals": {
            "reconstruction": d.reconstruction_residual,
            "orthogonality": d.orthogonality_residual,
            "gradient_consistency": d.gradient_consistency,
        },
        "tolerance": tol,
    });
    let mut out = Outcome::json(&value, verified);
    if !verified {
        out.diagnostics.push(format!("decomposition residual {:e} exceeds {tol:e}", d.max_residual()));
    }
    Ok(out)
}

pub fn cycles(graph: &Path, cycle_limit: usize) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let sys = circulation_system(&g, cycle_limit)?;
    let rank = range_basis(&sys.matrix.transpose(), Default::default()).cols();
    let value = json!({
        "cycles": sys.cycles.cycles(),
        "circuits": sys.cycles.circuits(),
        "circulation_system": {
            "rows": sys.matrix.rows(),
            "cols": sys.matrix.cols(),
            "columns": g.tangent().directed_edges().iter().map(|u| [u.base, u.tip]).collect::<Vec<_>>(),
            "matrix": sys.matrix.to_rows(),
            "rank": rank,
        },
    });
    Ok(Outcome::json(&value, true))
}

pub fn greens(graph: &Path, pole: Option<VertexId>, tolerance: Option<f64>) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let calc = Calculus::new(&g)?;
    let poles: Vec<VertexId> = match pole {
        Some(p) => {
            g.require_vertex(p)?;
            vec![p]
        }
        None => g.vertices().to_vec(),
    };
    let tol = tolerance.unwrap_or(GREENS_TOLERANCE);
    let mut verified = true;
    let mut entries = Vec::new();
    for p in poles {
        let green = calc.greens_function(p)?;
        let (laplacian_residual, sum) = greens_function_residuals(&calc, p)?;
        verified &= laplacian_residual <= tol && sum <= tol;
        entries.push(json!({
            "pole": p,
            "values": ScalarFile::from_field(&green).values,
            "laplacian_residual": laplacian_residual,
            "sum": sum,
        }));
    }
    Ok(Outcome::json(&json!({ "greens_functions": entries, "tolerance": tol }), verified))
}

pub struct CheckArgs {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub cycle_limit: usize,
}

pub fn check(graph: &Path, args: &CheckArgs) -> Result<Outcome> {
    let g = read_graph(graph)?;
    let opts =
        SuiteOptions { trials: args.trials, seed: args.seed, tolerance: args.tolerance, cycle_limit: args.cycle_limit };
    let checks = run_suite(&g, args.suite, &opts)?;
    let verified = checks.iter().all(|c| c.pass);
    let mut dimensions = serde_json::Value::Null;
    if matches!(args.suite, Suite::Hodge | Suite::All) {
        dimensions = dimensions_json(&Hodge::new(&g, args.cycle_limit)?);
    }
    let value = json!({
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "dimensions": dimensions,
        "identities": checks,
        "pass": verified,
    });
    let mut out = Outcome::json(&value, verified);
    out.diagnostics.extend(checks.iter().filter(|c| !c.pass).map(describe_failure));
    Ok(out)
}

fn describe_failure(c: &IdentityCheck) -> String {
    format!("{} failed: max residual {:e} > {:e}", c.name, c.max_residual, c.tolerance)
}

#[derive(Serialize)]
struct StateRecord<'a> {
    t: f64,
    #[serde(rename = "E")]
    e: &'a [f64],
    #[serde(rename = "B")]
    b: &'a [f64],
}

/// JSON lines: one record per stored state, then one `{"report": …}` record.
pub fn maxwell(scenario: &Path, cycle_limit: usize) -> Result<Outcome> {
    let s: Scenario = read_json(scenario)?;
    let g: Graph = s.graph.to_graph()?;
    let e0 = s.e0.to_field(&g)?;
    let b0 = s.b0.to_field(&g)?;
    let j = match &s.j {
        Some(f) => f.to_field(&g)?,
        None => VectorField::zeros(&g),
    };
    let rho = match &s.rho {
        Some(f) => f.to_field(&g)?,
        None => ScalarField::zeros(&g),
    };
    let hodge = Hodge::new(&g, cycle_limit)?;
    let state0 = EMState::new(e0, b0)?;
    let (trajectory, report) =
        maxwell_integrate(&hodge, &state0, &Sources { j, rho }, s.dt, s.steps, s.record_every.unwrap_or(1))?;

    let mut payload = String::new();
    for st in &trajectory.states {
        let rec = StateRecord { t: st.t, e: st.e.coefficients(), b: st.b.coefficients() };
        payload.push_str(&serde_json::to_string(&rec).expect("record serializes"));
        payload.push('\n');
    }
    let summary = json!({
        "report": {
            "steps": report.steps,
            "dt": report.dt,
            "directed_edges": g.tangent().directed_edges().iter().map(|u| [u.base, u.tip]).collect::<Vec<_>>(),
            "initial_gauss": report.initial_gauss,
            "initial_magnetic": report.initial_magnetic,
            "initial_constraints_hold": report.initial_constraints_hold,
            "current_divergence": report.current_divergence,
            "gauss_drift": report.gauss_drift,
            "magnetic_drift": report.magnetic_drift,
            "initial_energy": report.initial_energy,
            "energy_drift": report.energy_drift,
            "tolerance": report.tolerance,
            "pass": report.pass,
        }
    });
    payload.push_str(&serde_json::to_string(&summary).expect("report serializes"));

    let mut diagnostics = Vec::new();
    if !report.initial_constraints_hold {
        diagnostics.push(format!(
            "warning: initial state violates constraints (|div E - rho| = {:e}, |div B| = {:e})",
            report.initial_gauss, report.initial_magnetic
        ));
    }
    if !report.pass {
        diagnostics.push(format!(
            "constraint drift: div E - rho {:e}, div B {:e}, energy {:?}",
            report.gauss_drift, report.magnetic_drift, report.energy_drift
        ));
    }
    Ok(Outcome { payload, verified: report.pass, diagnostics })
}
