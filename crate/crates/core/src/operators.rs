//! Gradient, divergence, Laplacian and first-order operators.
//!
//! The local operators are free functions acting directly on fields. Anything
//! that needs the inverse Laplacian goes through [`Calculus`], which requires a
//! connected graph and computes its operator matrices once.
//!
//! Conventions follow the tangent-graph calculus:
//!
//! * `dφ(u) = φ(π₊(u)) − φ(π(u))`
//! * `div X(i) = Σ_{π(u)=i} (X(ū) − X(u))`, the adjoint of the gradient
//! * `Δ = div ∘ ∇`, so `Δφ(i) = −2 Σ_{π(u)=i} dφ(u)`. This is twice the usual
//!   combinatorial Laplacian `D − A`.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{pointwise_scale, ScalarField, VectorField};
use crate::graph::{Graph, VertexId};
use crate::numerics::{deflated_solve, DenseMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorRole {
    Gradient,
    Divergence,
    Laplacian,
    FirstOrder,
    Adjoint,
    Projector,
}

/// A dense operator matrix in canonical vertex / directed-edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub role: OperatorRole,
    pub matrix: DenseMatrix,
}

impl core::ops::Deref for OperatorMatrix {
    type Target = DenseMatrix;

    fn deref(&self) -> &DenseMatrix {
        &self.matrix
    }
}

pub fn gradient<'g>(phi: &ScalarField<'g>) -> VectorField<'g> {
    let g = phi.graph();
    let tg = g.tangent();
    let v = phi.values();
    let coefficients = (0..tg.len()).map(|k| v[tg.tip_index(k)] - v[tg.base_index(k)]).collect();
    VectorField::new(g, coefficients).expect("length matches tangent graph")
}

pub fn divergence<'g>(x: &VectorField<'g>) -> ScalarField<'g> {
    let g = x.graph();
    let tg = g.tangent();
    let c = x.coefficients();
    let values =
        (0..g.vertex_count()).map(|i| tg.outgoing(i).iter().map(|&k| c[tg.reverse_index(k)] - c[k]).sum()).collect();
    ScalarField::new(g, values).expect("length matches vertex count")
}

/// `Δφ(i) = −2 Σ_{π(u)=i} dφ(u)`.
pub fn laplacian_apply<'g>(phi: &ScalarField<'g>) -> ScalarField<'g> {
    let g = phi.graph();
    let tg = g.tangent();
    let v = phi.values();
    let values = (0..g.vertex_count())
        .map(|i| -2.0 * tg.outgoing(i).iter().map(|&k| v[tg.tip_index(k)] - v[i]).sum::<f64>())
        .collect();
    ScalarField::new(g, values).expect("length matches vertex count")
}

/// The first-order operator of a vector field: `Xφ(i) = Σ_{π(u)=i} X(u)·dφ(u)`.
pub fn first_order_apply<'g>(x: &VectorField<'g>, phi: &ScalarField<'_>) -> Result<ScalarField<'g>> {
    if x.graph() != phi.graph() {
        return Err(Error::GraphMismatch);
    }
    let g = x.graph();
    let tg = g.tangent();
    let (c, v) = (x.coefficients(), phi.values());
    let values = (0..g.vertex_count())
        .map(|i| tg.outgoing(i).iter().map(|&k| c[k] * (v[tg.tip_index(k)] - v[i])).sum())
        .collect();
    ScalarField::new(g, values)
}

pub fn gradient_matrix(g: &Graph) -> OperatorMatrix {
    let tg = g.tangent();
    let mut m = DenseMatrix::zeros(tg.len(), g.vertex_count());
    for k in 0..tg.len() {
        m[(k, tg.tip_index(k))] += 1.0;
        m[(k, tg.base_index(k))] -= 1.0;
    }
    OperatorMatrix { role: OperatorRole::Gradient, matrix: m }
}

pub fn divergence_matrix(g: &Graph) -> OperatorMatrix {
    let tg = g.tangent();
    let mut m = DenseMatrix::zeros(g.vertex_count(), tg.len());
    for i in 0..g.vertex_count() {
        for &k in tg.outgoing(i) {
            m[(i, tg.reverse_index(k))] += 1.0;
            m[(i, k)] -= 1.0;
        }
    }
    OperatorMatrix { role: OperatorRole::Divergence, matrix: m }
}

pub fn laplacian_matrix(g: &Graph) -> OperatorMatrix {
    let m = first_order_matrix(&VectorField::constant(g, -2.0)).matrix;
    OperatorMatrix { role: OperatorRole::Laplacian, matrix: m }
}

/// Matrix of `φ ↦ Xφ`.
pub fn first_order_matrix(x: &VectorField<'_>) -> OperatorMatrix {
    let g = x.graph();
    let tg = g.tangent();
    let c = x.coefficients();
    let mut m = DenseMatrix::zeros(g.vertex_count(), g.vertex_count());
    for k in 0..tg.len() {
        let (i, j) = (tg.base_index(k), tg.tip_index(k));
        m[(i, j)] += c[k];
        m[(i, i)] -= c[k];
    }
    OperatorMatrix { role: OperatorRole::FirstOrder, matrix: m }
}

/// Matrix of the adjoint `X* = X̄ + m(div X)`.
pub fn adjoint_matrix(x: &VectorField<'_>) -> OperatorMatrix {
    let mut m = first_order_matrix(&x.reverse()).matrix;
    let div = divergence(x);
    for (i, d) in div.values().iter().enumerate() {
        m[(i, i)] += d;
    }
    OperatorMatrix { role: OperatorRole::Adjoint, matrix: m }
}

/// Calculus on a connected graph: the local operators as cached matrices plus
/// the inverse Laplacian on mean-zero functions.
#[derive(Debug, Clone)]
pub struct Calculus<'g> {
    graph: &'g Graph,
    gradient: OperatorMatrix,
    divergence: OperatorMatrix,
    laplacian: OperatorMatrix,
    constants: Vec<Vec<f64>>,
}

impl<'g> Calculus<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        graph.require_connected()?;
        Ok(Calculus {
            graph,
            gradient: gradient_matrix(graph),
            divergence: divergence_matrix(graph),
            laplacian: laplacian_matrix(graph),
            constants: vec![vec![1.0; graph.vertex_count()]],
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn gradient_matrix(&self) -> &OperatorMatrix {
        &self.gradient
    }

    pub fn divergence_matrix(&self) -> &OperatorMatrix {
        &self.divergence
    }

    pub fn laplacian_matrix(&self) -> &OperatorMatrix {
        &self.laplacian
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if g == self.graph {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// Δ⁻¹ on mean-zero functions. The result is the unique mean-zero ψ with Δψ = φ.
    pub fn laplacian_solve(&self, phi: &ScalarField<'_>) -> Result<ScalarField<'g>> {
        self.check(phi.graph())?;
        if !phi.is_mean_zero() {
            return Err(Error::NotMeanZero { sum: phi.sum() });
        }
        let x = deflated_solve(&self.laplacian, phi.values(), &self.constants)?;
        ScalarField::new(self.graph, x)
    }

    /// Green's function with pole at `pole`: `G_i = Δ⁻¹(e_i − 1/|V|)`.
    pub fn greens_function(&self, pole: VertexId) -> Result<ScalarField<'g>> {
        let i = self.graph.require_vertex(pole)?;
        let n = self.graph.vertex_count();
        let mut rhs = vec![-1.0 / n as f64; n];
        rhs[i] += 1.0;
        let x = deflated_solve(&self.laplacian, &rhs, &self.constants)?;
        ScalarField::new(self.graph, x)
    }

    /// Matrix whose column j is G_j; on mean-zero functions it is Δ⁻¹.
    pub fn greens_matrix(&self) -> Result<DenseMatrix> {
        let n = self.graph.vertex_count();
        let columns = self
            .graph
            .vertices()
            .iter()
            .map(|&v| self.greens_function(v).map(ScalarField::into_values))
            .collect::<Result<Vec<_>>>()?;
        DenseMatrix::from_columns(n, &columns)
    }

    /// Splits X into its gradient part `p∇X = ∇Δ⁻¹div X` and the divergence-free rest.
    pub fn helmholtz_split(&self, x: &VectorField<'_>) -> Result<(VectorField<'g>, VectorField<'g>)> {
        self.check(x.graph())?;
        let x = VectorField::new(self.graph, x.coefficients().to_vec())?;
        let potential = self.laplacian_solve(&divergence(&x))?;
        let grad = gradient(&potential);
        let rest = x.sub(&grad)?;
        Ok((grad, rest))
    }

    /// Matrix of the projector `p∇ = ∇∘Δ⁻¹∘div` onto gradient fields.
    pub fn helmholtz_projector(&self) -> Result<OperatorMatrix> {
        let m = self.gradient.matmul(&self.greens_matrix()?)?.matmul(&self.divergence)?;
        Ok(OperatorMatrix { role: OperatorRole::Projector, matrix: m })
    }

    /// `X φ` for the field's first-order operator, checked against this graph.
    pub fn first_order_apply(&self, x: &VectorField<'_>, phi: &ScalarField<'_>) -> Result<ScalarField<'g>> {
        self.check(x.graph())?;
        let x = VectorField::new(self.graph, x.coefficients().to_vec())?;
        first_order_apply(&x, phi)
    }
}

/// ψ·∇φ as a vector field: `(ψ∇φ)(u) = ψ(π(u))·dφ(u)`.
pub fn scaled_gradient<'g>(psi: &ScalarField<'_>, phi: &ScalarField<'g>) -> Result<VectorField<'g>> {
    pointwise_scale(psi, &gradient(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::numerics::max_abs_diff;

    fn random_scalar<'g>(g: &'g Graph, rng: &mut Lcg) -> ScalarField<'g> {
        ScalarField::new(g, rng.vec(g.vertex_count())).unwrap()
    }

    fn random_vector<'g>(g: &'g Graph, rng: &mut Lcg) -> VectorField<'g> {
        VectorField::new(g, rng.vec(g.tangent().len())).unwrap()
    }

    fn all_graphs() -> Vec<Graph> {
        vec![p2(), k3(), fig1(), diag_rect(), cycle(5), path(4), Graph::complete(5).unwrap()]
    }

    #[test]
    fn gradient_examples() {
        let g = p2();
        let d = gradient(&ScalarField::new(&g, vec![0.0, 1.0]).unwrap());
        assert_eq!(d.coefficients(), &[1.0, -1.0]);

        let g = diag_rect();
        assert_eq!(gradient(&ScalarField::constant(&g, 3.7)), VectorField::zeros(&g));

        let g = k3();
        let d = gradient(&ScalarField::new(&g, vec![0.0, 1.0, 2.0]).unwrap());
        assert_eq!(d.at(1, 2).unwrap(), 1.0);
        assert_eq!(d.at(2, 3).unwrap(), 1.0);
        assert_eq!(d.at(1, 3).unwrap(), 2.0);
        assert_eq!(d.at(2, 1).unwrap(), -1.0);
        assert_eq!(d.at(3, 2).unwrap(), -1.0);
        assert_eq!(d.at(3, 1).unwrap(), -2.0);
        assert_eq!(d.reverse(), d.scale(-1.0));
    }

    #[test]
    fn divergence_examples() {
        let g = p2();
        let e12 = VectorField::basis(&g, 1, 2).unwrap();
        assert_eq!(divergence(&e12).values(), &[-1.0, 1.0]);

        let g = diag_rect();
        let mut rng = Lcg(41);
        let sym = random_vector(&g, &mut rng).symmetric_part();
        assert!(divergence(&sym).values().iter().all(|&v| v.abs() <= 1e-15));
        for _ in 0..10 {
            assert!(divergence(&random_vector(&g, &mut rng)).sum().abs() <= 1e-14);
        }
    }

    #[test]
    fn laplacian_examples() {
        let g = p2();
        let l = laplacian_apply(&ScalarField::new(&g, vec![1.0, 0.0]).unwrap());
        assert_eq!(l.values(), &[2.0, -2.0]);
        for g in all_graphs() {
            assert!(laplacian_apply(&ScalarField::constant(&g, -4.0)).values().iter().all(|&v| v == 0.0));
            let two_d_minus_a = g.degree_matrix().sub(&g.adjacency_matrix()).unwrap().scale(2.0);
            assert_eq!(laplacian_matrix(&g).matrix, two_d_minus_a);
        }
    }

    #[test]
    fn laplacian_is_divergence_of_gradient() {
        let mut rng = Lcg(5);
        for g in all_graphs() {
            let gm = gradient_matrix(&g);
            let dm = divergence_matrix(&g);
            assert_eq!(dm.matrix, gm.transpose());
            assert_eq!(dm.matmul(&gm).unwrap(), laplacian_matrix(&g).matrix);
            let phi = random_scalar(&g, &mut rng);
            let a = laplacian_apply(&phi);
            let b = divergence(&gradient(&phi));
            assert!(max_abs_diff(a.values(), b.values()) <= 1e-14);
            // non-negative, zero only on constants
            let q = a.inner_product(&phi).unwrap();
            assert!(q > 0.0);
        }
    }

    #[test]
    fn gradient_and_divergence_are_adjoint() {
        let mut rng = Lcg(8);
        for g in all_graphs() {
            for _ in 0..10 {
                let phi = random_scalar(&g, &mut rng);
                let x = random_vector(&g, &mut rng);
                let lhs = gradient(&phi).inner_product(&x).unwrap();
                let rhs = phi.inner_product(&divergence(&x)).unwrap();
                assert!((lhs - rhs).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn first_order_examples() {
        let g = diag_rect();
        let mut rng = Lcg(12);
        let phi = random_scalar(&g, &mut rng);
        let minus_two = VectorField::constant(&g, -2.0);
        let a = first_order_apply(&minus_two, &phi).unwrap();
        assert!(max_abs_diff(a.values(), laplacian_apply(&phi).values()) <= 1e-15);

        let x = random_vector(&g, &mut rng);
        let c = first_order_apply(&x, &ScalarField::constant(&g, 2.0)).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.0));

        let g = p2();
        let e12 = VectorField::basis(&g, 1, 2).unwrap();
        let r = first_order_apply(&e12, &ScalarField::new(&g, vec![0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(r.values(), &[1.0, 0.0]);

        let other = k3();
        assert_eq!(first_order_apply(&e12, &ScalarField::zeros(&other)).unwrap_err(), Error::GraphMismatch);
    }

    #[test]
    fn first_order_operators_are_local() {
        // path 1-2-3-4: vertices 1 and 3 are at distance 2
        let g = path(4);
        let mut rng = Lcg(2);
        let m = first_order_matrix(&random_vector(&g, &mut rng));
        assert_eq!(m[(0, 2)], 0.0);
        assert_eq!(m[(0, 3)], 0.0);
        assert_eq!(m[(1, 3)], 0.0);
    }

    #[test]
    fn adjoint_formula() {
        let mut rng = Lcg(23);
        for g in all_graphs() {
            for _ in 0..5 {
                // integer coefficients: the two routes agree exactly
                let coeffs: Vec<f64> = (0..g.tangent().len()).map(|_| rng.int()).collect();
                let x = VectorField::new(&g, coeffs).unwrap();
                assert_eq!(adjoint_matrix(&x).matrix, first_order_matrix(&x).transpose());
                let x = random_vector(&g, &mut rng);
                let diff = adjoint_matrix(&x).sub(&first_order_matrix(&x).transpose()).unwrap();
                assert!(diff.max_abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn adjoint_of_symmetric_and_skew_fields() {
        let g = diag_rect();
        let mut rng = Lcg(31);
        let sym = random_vector(&g, &mut rng).symmetric_part();
        let d = adjoint_matrix(&sym).sub(&first_order_matrix(&sym)).unwrap();
        assert!(d.max_abs() <= 1e-15);

        // the circulating antisymmetric field around the 4-cycle is divergence-free
        let c4 = cycle(4);
        let y = VectorField::from_fn(&c4, |u| if u.tip == u.base % 4 + 1 { 1.0 } else { -1.0 });
        assert!(divergence(&y).values().iter().all(|&v| v == 0.0));
        assert_eq!(adjoint_matrix(&y).matrix, first_order_matrix(&y).scale(-1.0));
    }

    #[test]
    fn adjoint_on_p2_basis_pairs() {
        let g = p2();
        let x = VectorField::basis(&g, 1, 2).unwrap();
        let adj = adjoint_matrix(&x);
        for a in [1, 2] {
            for b in [1, 2] {
                let phi = ScalarField::basis(&g, a).unwrap();
                let psi = ScalarField::basis(&g, b).unwrap();
                let lhs = first_order_apply(&x, &phi).unwrap().inner_product(&psi).unwrap();
                let xpsi = adj.mul_vec(psi.values()).unwrap();
                let rhs = crate::numerics::dot(phi.values(), &xpsi);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn laplacian_solve_examples() {
        let g = p2();
        let calc = Calculus::new(&g).unwrap();
        let psi = calc.laplacian_solve(&ScalarField::new(&g, vec![0.5, -0.5]).unwrap()).unwrap();
        assert!(max_abs_diff(psi.values(), &[0.125, -0.125]) <= 1e-15);
        assert!(matches!(
            calc.laplacian_solve(&ScalarField::new(&g, vec![1.0, 0.0]).unwrap()),
            Err(Error::NotMeanZero { .. })
        ));

        let mut rng = Lcg(77);
        for g in all_graphs() {
            let calc = Calculus::new(&g).unwrap();
            let phi = random_scalar(&g, &mut rng).centered();
            let psi = calc.laplacian_solve(&phi).unwrap();
            assert!(psi.is_mean_zero());
            assert!(max_abs_diff(laplacian_apply(&psi).values(), phi.values()) <= 1e-12);
            let back = calc.laplacian_solve(&laplacian_apply(&phi)).unwrap();
            assert!(max_abs_diff(back.values(), phi.values()) <= 1e-12);
        }
    }

    #[test]
    fn calculus_rejects_disconnected_graphs() {
        let g = Graph::new(&[1, 2, 3], &[(1, 2)]).unwrap();
        assert_eq!(Calculus::new(&g).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn greens_functions() {
        let g = p2();
        let calc = Calculus::new(&g).unwrap();
        let g1 = calc.greens_function(1).unwrap();
        assert!(max_abs_diff(g1.values(), &[0.125, -0.125]) <= 1e-15);
        assert_eq!(calc.greens_function(9).unwrap_err(), Error::UnknownVertex(9));

        let mut rng = Lcg(3);
        for g in all_graphs() {
            let calc = Calculus::new(&g).unwrap();
            let n = g.vertex_count();
            for &v in g.vertices() {
                let gi = calc.greens_function(v).unwrap();
                assert!(gi.sum().abs() <= 1e-12);
                let mut expected = vec![-1.0 / n as f64; n];
                expected[g.index_of(v).unwrap()] += 1.0;
                assert!(max_abs_diff(laplacian_apply(&gi).values(), &expected) <= 1e-12);
            }
            // Δ⁻¹(i,j) = G_j(i) on mean-zero functions
            let gm = calc.greens_matrix().unwrap();
            let phi = random_scalar(&g, &mut rng).centered();
            let via_matrix = gm.mul_vec(phi.values()).unwrap();
            let via_solve = calc.laplacian_solve(&phi).unwrap();
            assert!(max_abs_diff(&via_matrix, via_solve.values()) <= 1e-12);
        }
    }

    #[test]
    fn helmholtz_examples() {
        let g = p2();
        let calc = Calculus::new(&g).unwrap();
        let (grad, rest) = calc.helmholtz_split(&VectorField::basis(&g, 1, 2).unwrap()).unwrap();
        assert!(max_abs_diff(grad.coefficients(), &[0.5, -0.5]) <= 1e-15);
        assert!(max_abs_diff(rest.coefficients(), &[0.5, 0.5]) <= 1e-15);

        let mut rng = Lcg(90);
        for g in all_graphs() {
            let calc = Calculus::new(&g).unwrap();
            let x = gradient(&random_scalar(&g, &mut rng));
            let (grad, rest) = calc.helmholtz_split(&x).unwrap();
            assert!(grad.sub(&x).unwrap().max_abs() <= 1e-12);
            assert!(rest.max_abs() <= 1e-12);

            let sym = random_vector(&g, &mut rng).symmetric_part();
            let (grad, rest) = calc.helmholtz_split(&sym).unwrap();
            assert!(grad.max_abs() <= 1e-12);
            assert!(rest.sub(&sym).unwrap().max_abs() <= 1e-12);

            let x = random_vector(&g, &mut rng);
            let (grad, rest) = calc.helmholtz_split(&x).unwrap();
            assert!(divergence(&rest).values().iter().all(|v| v.abs() <= 1e-12));
            assert!(grad.inner_product(&rest).unwrap().abs() <= 1e-12);
        }
    }

    #[test]
    fn helmholtz_projector_is_an_orthogonal_projection() {
        for g in all_graphs() {
            let calc = Calculus::new(&g).unwrap();
            let p = calc.helmholtz_projector().unwrap();
            assert!(p.matmul(&p).unwrap().sub(&p).unwrap().max_abs() <= 1e-12);
            assert!(p.sub(&p.transpose()).unwrap().max_abs() <= 1e-12);
            // ker div = (im ∇)^⊥: I − p∇ is annihilated by div
            let rest = DenseMatrix::identity(p.rows()).sub(&p).unwrap();
            assert!(calc.divergence_matrix().matmul(&rest).unwrap().max_abs() <= 1e-12);
        }
    }
}
