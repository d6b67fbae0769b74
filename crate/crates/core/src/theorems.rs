//! Both sides of the boundary integral identities, evaluated independently.
//!
//! Each function returns an [`IdentityReport`] with the left-hand side, one or
//! more right-hand expressions and the largest discrepancy between them. The
//! sums are finite and involve no solver (except Green's third identity, which
//! needs a Green's function), so the default tolerance is tight.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{ScalarField, VectorField};
use crate::graph::{boundary, BoundarySpec, SubgraphSpec, VertexId};
use crate::operators::{divergence, gradient, laplacian_apply, Calculus};
use crate::{Error, Result};

/// Absolute residual tolerance for the integral identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub label: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: &'static str,
    pub lhs: Side,
    pub rhs: Vec<Side>,
    /// `max_k |lhs − rhs_k|`.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: &'static str, lhs: Side, rhs: Vec<Side>) -> Self {
        let residual = rhs.iter().fold(0.0_f64, |m, s| m.max((lhs.value - s.value).abs()));
        IdentityReport { name, lhs, rhs, residual, tolerance: IDENTITY_TOLERANCE, pass: residual <= IDENTITY_TOLERANCE }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.residual <= tolerance;
        self
    }

    /// True when every side agrees bit for bit.
    pub fn exact(&self) -> bool {
        self.rhs.iter().all(|s| s.value == self.lhs.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensIdentity {
    First,
    Second,
    Third,
}

fn side(label: &'static str, value: f64) -> Side {
    Side { label, value }
}

fn sum_over(mask: &[bool], values: &[f64]) -> f64 {
    mask.iter().zip(values).filter(|(m, _)| **m).map(|(_, v)| v).sum()
}

/// Σ_{j ∈ V_∂H} n_H·Y(j), i.e. Σ over directed boundary edges of n_H(u)·Y(u).
fn normal_flux(b: &BoundarySpec<'_>, y: &[f64]) -> f64 {
    let n = b.normal.coefficients();
    b.directed.iter().map(|&k| n[k] * y[k]).sum()
}

/// Σ_{j ∈ V⁻_∂H} div_∂H Y(j): the divergence of Y restricted to the boundary
/// graph, summed over the inner boundary vertices.
fn inner_boundary_divergence(calc: &Calculus<'_>, b: &BoundarySpec<'_>, y: &[f64]) -> f64 {
    let tg = calc.graph().tangent();
    b.directed.iter().filter(|&&k| b.inside[tg.base_index(k)]).map(|&k| y[tg.reverse_index(k)] - y[k]).sum()
}

fn same_graph(calc: &Calculus<'_>, g: &crate::Graph) -> Result<()> {
    if calc.graph() == g {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

/// Σ_{V_H} div X = Σ_{V_∂H} n_H·X = Σ_{V⁻_∂H} div_∂H X.
pub fn divergence_theorem_sides(calc: &Calculus<'_>, h: &SubgraphSpec, x: &VectorField<'_>) -> Result<IdentityReport> {
    same_graph(calc, x.graph())?;
    let b = boundary(calc.graph(), h)?;
    let div = divergence(x);
    let c = x.coefficients();
    Ok(IdentityReport::new(
        "divergence_theorem",
        side("sum_H div X", sum_over(&b.inside, div.values())),
        vec![
            side("sum_boundary n.X", normal_flux(&b, c)),
            side("sum_inner_boundary div_boundary X", inner_boundary_divergence(calc, &b, c)),
        ],
    ))
}

/// Σ_{V_H} Δφ = Σ_{V_∂H} n_H·∇φ = Σ_{V⁻_∂H} Δ_∂H φ.
pub fn greens_theorem_sides(calc: &Calculus<'_>, h: &SubgraphSpec, phi: &ScalarField<'_>) -> Result<IdentityReport> {
    same_graph(calc, phi.graph())?;
    let g = calc.graph();
    let tg = g.tangent();
    let b = boundary(g, h)?;
    let d = gradient(phi);
    let dphi = d.coefficients();
    // Δ_∂H φ(j) = −2 Σ over boundary directed edges based at j of dφ(u)
    let boundary_laplacian: f64 =
        b.directed.iter().filter(|&&k| b.inside[tg.base_index(k)]).map(|&k| -2.0 * dphi[k]).sum();
    Ok(IdentityReport::new(
        "greens_theorem",
        side("sum_H laplacian phi", sum_over(&b.inside, laplacian_apply(phi).values())),
        vec![
            side("sum_boundary n.grad phi", normal_flux(&b, dphi)),
            side("sum_inner_boundary boundary_laplacian phi", boundary_laplacian),
        ],
    ))
}

/// Σ_{V_H} Xφ = Σ_{V_H} φ·div X + Σ_{V_∂H} n_H·(φX̄), where (φX̄)(u) = φ(π(u))·X(ū).
pub fn first_order_boundary_sides(
    calc: &Calculus<'_>,
    h: &SubgraphSpec,
    x: &VectorField<'_>,
    phi: &ScalarField<'_>,
) -> Result<IdentityReport> {
    same_graph(calc, x.graph())?;
    same_graph(calc, phi.graph())?;
    let g = calc.graph();
    let tg = g.tangent();
    let b = boundary(g, h)?;
    let xphi = calc.first_order_apply(x, phi)?;
    let div = divergence(x);
    let interior: f64 = (0..g.vertex_count()).filter(|&i| b.inside[i]).map(|i| phi.values()[i] * div.values()[i]).sum();
    let c = x.coefficients();
    let phi_xbar: Vec<f64> = (0..tg.len()).map(|k| phi.values()[tg.base_index(k)] * c[tg.reverse_index(k)]).collect();
    Ok(IdentityReport::new(
        "first_order_boundary",
        side("sum_H X phi", sum_over(&b.inside, xphi.values())),
        vec![
            side("sum_H phi div X + sum_boundary n.(phi Xbar)", interior + normal_flux(&b, &phi_xbar)),
            side(
                "sum_H phi div X + sum_inner_boundary div_boundary(phi Xbar)",
                interior + inner_boundary_divergence(calc, &b, &phi_xbar),
            ),
        ],
    ))
}

/// Green's identities. `psi` is ignored for the third identity, which needs a pole.
pub fn greens_identity_sides(
    calc: &Calculus<'_>,
    h: &SubgraphSpec,
    phi: &ScalarField<'_>,
    psi: &ScalarField<'_>,
    which: GreensIdentity,
    pole: Option<VertexId>,
) -> Result<IdentityReport> {
    same_graph(calc, phi.graph())?;
    let g = calc.graph();
    let tg = g.tangent();
    let b = boundary(g, h)?;
    let base = |k: usize| tg.base_index(k);
    let lap_phi = laplacian_apply(phi);
    let dphi = gradient(phi);
    let (p, dp, lp) = (phi.values(), dphi.coefficients(), lap_phi.values());
    let n = b.normal.coefficients();

    match which {
        GreensIdentity::First => {
            same_graph(calc, psi.graph())?;
            let dpsi = gradient(psi);
            let (s, ds) = (psi.values(), dpsi.coefficients());
            let lhs: f64 = (0..g.vertex_count())
                .filter(|&j| b.inside[j])
                .map(|j| {
                    let dot: f64 = tg.outgoing(j).iter().map(|&k| ds[k] * dp[k]).sum();
                    s[j] * lp[j] - dot
                })
                .sum();
            let rhs: f64 = b.directed.iter().map(|&k| n[k] * s[base(k)] * dp[k]).sum();
            Ok(IdentityReport::new(
                "greens_first_identity",
                side("sum_H (psi lap phi - grad psi.grad phi)", lhs),
                vec![side("sum_boundary n.(psi grad phi)", rhs)],
            ))
        }
        GreensIdentity::Second => {
            same_graph(calc, psi.graph())?;
            let dpsi = gradient(psi);
            let lap_psi = laplacian_apply(psi);
            let (s, ds, ls) = (psi.values(), dpsi.coefficients(), lap_psi.values());
            let lhs: f64 = (0..g.vertex_count()).filter(|&j| b.inside[j]).map(|j| s[j] * lp[j] - p[j] * ls[j]).sum();
            let rhs: f64 = b.directed.iter().map(|&k| n[k] * (s[base(k)] * dp[k] - p[base(k)] * ds[k])).sum();
            Ok(IdentityReport::new(
                "greens_second_identity",
                side("sum_H (psi lap phi - phi lap psi)", lhs),
                vec![side("sum_boundary (psi n.grad phi - phi n.grad psi)", rhs)],
            ))
        }
        GreensIdentity::Third => {
            let pole = pole.ok_or(Error::MissingPole)?;
            let i = g.require_vertex(pole)?;
            let green = calc.greens_function(pole)?;
            let dgreen = gradient(&green);
            let (gv, dg) = (green.values(), dgreen.coefficients());
            let lhs: f64 = (0..g.vertex_count()).filter(|&j| b.inside[j]).map(|j| gv[j] * lp[j]).sum();
            let sum_h_phi = sum_over(&b.inside, p);
            let point = if b.inside[i] { p[i] } else { 0.0 };
            // (|V_H|/|V_G|)·φ̄_H = Σ_H φ / |V_G|
            let point_term = point - sum_h_phi / g.vertex_count() as f64;
            let flux: f64 = b.directed.iter().map(|&k| n[k] * (gv[base(k)] * dp[k] - p[base(k)] * dg[k])).sum();
            Ok(IdentityReport::new(
                "greens_third_identity",
                side("sum_H G_i lap phi", lhs),
                vec![side("point term + sum_boundary (G_i n.grad phi - phi n.grad G_i)", point_term + flux)],
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::Graph;

    fn int_scalar<'g>(g: &'g Graph, rng: &mut Lcg) -> ScalarField<'g> {
        ScalarField::new(g, (0..g.vertex_count()).map(|_| rng.int()).collect()).unwrap()
    }

    fn int_vector<'g>(g: &'g Graph, rng: &mut Lcg) -> VectorField<'g> {
        VectorField::new(g, (0..g.tangent().len()).map(|_| rng.int()).collect()).unwrap()
    }

    #[test]
    fn divergence_theorem_on_isolated_vertex() {
        let g = diag_rect();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(4);
        let x = VectorField::new(&g, rng.vec(10)).unwrap();
        let r = divergence_theorem_sides(&calc, &SubgraphSpec::new([3], []), &x).unwrap();
        let div3 = divergence(&x).at(3).unwrap();
        assert_eq!(r.lhs.value, div3);
        assert!(r.residual <= 1e-15, "{r:?}");
    }

    #[test]
    fn divergence_theorem_on_whole_graph() {
        let g = diag_rect();
        let calc = Calculus::new(&g).unwrap();
        let x = int_vector(&g, &mut Lcg(9));
        let r = divergence_theorem_sides(&calc, &SubgraphSpec::whole(&g), &x).unwrap();
        assert_eq!(r.lhs.value, 0.0);
        assert!(r.rhs.iter().all(|s| s.value == 0.0));
    }

    #[test]
    fn divergence_theorem_exact_for_integers() {
        let g = diag_rect();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(19);
        let h = SubgraphSpec::new([1, 2], [(1, 2)]);
        for _ in 0..20 {
            let r = divergence_theorem_sides(&calc, &h, &int_vector(&g, &mut rng)).unwrap();
            assert!(r.exact(), "{r:?}");
        }
    }

    #[test]
    fn greens_identities() {
        let g = diag_rect();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(6);
        let h = SubgraphSpec::new([1, 2, 3], [(1, 2)]);
        for _ in 0..10 {
            let phi = ScalarField::new(&g, rng.vec(4)).unwrap();
            let psi = ScalarField::new(&g, rng.vec(4)).unwrap();
            let r1 = greens_identity_sides(&calc, &h, &phi, &psi, GreensIdentity::First, None).unwrap();
            assert!(r1.pass && r1.residual <= 1e-12, "{r1:?}");
            let r2 = greens_identity_sides(&calc, &h, &phi, &psi, GreensIdentity::Second, None).unwrap();
            assert!(r2.pass, "{r2:?}");
            let same = greens_identity_sides(&calc, &h, &phi, &phi, GreensIdentity::Second, None).unwrap();
            assert!(same.lhs.value.abs() <= 1e-15 && same.rhs[0].value.abs() <= 1e-15);
            for pole in [1, 4] {
                let r3 = greens_identity_sides(&calc, &h, &phi, &psi, GreensIdentity::Third, Some(pole)).unwrap();
                assert!(r3.pass, "{r3:?}");
            }
        }
        let phi = ScalarField::zeros(&g);
        assert_eq!(
            greens_identity_sides(&calc, &h, &phi, &phi, GreensIdentity::Third, None).unwrap_err(),
            Error::MissingPole
        );
    }

    #[test]
    fn third_identity_recovers_point_values() {
        let g = fig1();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(13);
        let h = SubgraphSpec::new([1, 2, 3], [(1, 2), (2, 3)]);
        let mask = h.validate(&g).unwrap();
        for _ in 0..5 {
            // make φ average to zero over H
            let mut phi = rng.vec(4);
            let mean = (0..4).filter(|&i| mask[i]).map(|i| phi[i]).sum::<f64>() / 3.0;
            (0..4).filter(|&i| mask[i]).for_each(|i| phi[i] -= mean);
            let phi = ScalarField::new(&g, phi).unwrap();
            for pole in [1, 2, 3] {
                let r = greens_identity_sides(&calc, &h, &phi, &phi, GreensIdentity::Third, Some(pole)).unwrap();
                let b = boundary(&g, &h).unwrap();
                let green = calc.greens_function(pole).unwrap();
                let (dphi, dg) = (gradient(&phi), gradient(&green));
                let tg = g.tangent();
                let flux: f64 = b
                    .directed
                    .iter()
                    .map(|&k| {
                        let j = tg.base_index(k);
                        b.normal.coefficients()[k]
                            * (green.values()[j] * dphi.coefficients()[k] - phi.values()[j] * dg.coefficients()[k])
                    })
                    .sum();
                assert!((r.lhs.value - flux - phi.at(pole).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn greens_theorem_and_first_order_reduction() {
        let g = fig1();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(21);
        let h = SubgraphSpec::new([1, 2, 3], [(1, 2), (2, 3), (1, 3)]);
        for _ in 0..10 {
            let phi = int_scalar(&g, &mut rng);
            let green = greens_theorem_sides(&calc, &h, &phi).unwrap();
            assert!(green.exact(), "{green:?}");
            let minus_two = VectorField::constant(&g, -2.0);
            let fo = first_order_boundary_sides(&calc, &h, &minus_two, &phi).unwrap();
            assert!(fo.exact(), "{fo:?}");
            assert_eq!(fo.lhs.value, green.lhs.value);
            assert_eq!(fo.rhs[0].value, green.rhs[0].value);
        }
    }

    #[test]
    fn first_order_identity_with_constant_phi_and_real_inputs() {
        let g = fig1();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(27);
        let h = SubgraphSpec::new([1, 2, 3], [(1, 2), (2, 3), (1, 3)]);
        let x = VectorField::new(&g, rng.vec(8)).unwrap();
        let c = ScalarField::constant(&g, 1.5);
        let r = first_order_boundary_sides(&calc, &h, &x, &c).unwrap();
        assert_eq!(r.lhs.value, 0.0);
        assert!(r.residual <= 1e-12, "{r:?}");
        for _ in 0..10 {
            let x = VectorField::new(&g, rng.vec(8)).unwrap();
            let phi = ScalarField::new(&g, rng.vec(4)).unwrap();
            let r = first_order_boundary_sides(&calc, &h, &x, &phi).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn first_order_identity_for_every_basis_field() {
        let g = diag_rect();
        let calc = Calculus::new(&g).unwrap();
        let mut rng = Lcg(55);
        let h = SubgraphSpec::new([2, 3], []);
        let phi = int_scalar(&g, &mut rng);
        for k in 0..g.tangent().len() {
            let e = VectorField::basis_index(&g, k);
            let r = first_order_boundary_sides(&calc, &h, &e, &phi).unwrap();
            assert!(r.exact(), "{r:?}");
        }
    }

    #[test]
    fn invalid_inputs() {
        let g = diag_rect();
        let calc = Calculus::new(&g).unwrap();
        let x = VectorField::zeros(&g);
        assert!(matches!(
            divergence_theorem_sides(&calc, &SubgraphSpec::new([9], []), &x),
            Err(Error::InvalidSubgraph(_))
        ));
        let other = k3();
        assert_eq!(
            divergence_theorem_sides(&calc, &SubgraphSpec::new([1], []), &VectorField::zeros(&other)).unwrap_err(),
            Error::GraphMismatch
        );
    }
}
