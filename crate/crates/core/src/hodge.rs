//! Curl projector, harmonic fields and the Helmholtz–Hodge decomposition.
//!
//! Z(G) is the null space of the circulation system, curl is the orthogonal
//! projector onto Z(G)^⊥ and H(G) = ker(div) ∩ Z(G). All subspaces are computed
//! once, from the same rank policy, when a [`Hodge`] is built.

use alloc::vec::Vec;

use crate::cycles::{circulation_system, CirculationSystem, CycleSet};
use crate::field::VectorField;
use crate::graph::Graph;
use crate::numerics::{nullspace_basis, orthogonal_projector, range_basis, rank, DenseMatrix, RankPolicy};
use crate::operators::Calculus;
use crate::{Error, Result};

/// Residual tolerance for projector and decomposition checks.
pub const HODGE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceRole {
    CirculationFree,
    Harmonic,
    GradientImage,
    CurlImage,
    SymmetricPart,
    AntisymmetricPart,
}

/// Orthonormal columns over directed-edge coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub role: SubspaceRole,
    pub basis: DenseMatrix,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|j| self.basis.column(j)).collect()
    }

    pub fn projector(&self) -> Result<DenseMatrix> {
        orthogonal_projector(&self.basis)
    }

    /// Orthogonal projection of `v` onto the span.
    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        let coords = self.basis.tr_mul_vec(v)?;
        self.basis.mul_vec(&coords)
    }

    /// `|v − Pv|`, the distance from `v` to the span.
    pub fn residual(&self, v: &[f64]) -> Result<f64> {
        let p = self.project(v)?;
        Ok(libm::sqrt(v.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum()))
    }
}

/// Computed subspace dimensions next to the graph's size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    pub vertices: usize,
    pub edges: usize,
    pub gradient: usize,
    pub curl: usize,
    pub harmonic: usize,
    pub circulation_free: usize,
    pub cyclomatic: usize,
}

impl DimensionReport {
    /// `(|V|−1, 2(|E|−|V|+1), |V|−1)`: the count claimed for the three summands.
    pub fn formula(&self) -> (usize, usize, usize) {
        (self.vertices - 1, 2 * self.cyclomatic, self.vertices - 1)
    }

    pub fn computed(&self) -> (usize, usize, usize) {
        (self.gradient, self.curl, self.harmonic)
    }

    pub fn matches_formula(&self) -> bool {
        self.formula() == self.computed()
    }

    /// The three summands fill X(G).
    pub fn is_complete(&self) -> bool {
        self.gradient + self.curl + self.harmonic == 2 * self.edges
    }
}

/// Exactness, homology and parity-splitting checks. Norms are Frobenius norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSequenceReport {
    /// ‖s∘∇‖: im(∇) ⊆ ker(s).
    pub symmetric_gradient: f64,
    /// ‖div∘s‖: im(s) ⊆ ker(div).
    pub divergence_symmetric: f64,
    /// ‖curl∘∇‖: im(∇) ⊆ ker(curl).
    pub curl_gradient: f64,
    /// ‖div∘curl‖: im(curl) ⊆ ker(div).
    pub divergence_curl: f64,
    /// dim X^a − dim im(∇).
    pub antisymmetric_homology: usize,
    /// dim ker(div) − dim X^s.
    pub symmetric_homology: usize,
    pub cyclomatic: usize,
    /// ‖(I − P_Z)·s·P_Z‖: s maps Z(G) into itself, so Z = Z^s ⊕ Z^a.
    pub circulation_free_split: f64,
    /// ‖(I − P_H)·s·P_H‖: H = H^s ⊕ H^a.
    pub harmonic_split: f64,
    pub circulation_free_symmetric: usize,
    pub circulation_free_antisymmetric: usize,
    pub harmonic_symmetric: usize,
    pub harmonic_antisymmetric: usize,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeDecomposition<'g> {
    pub gradient_part: VectorField<'g>,
    pub curl_part: VectorField<'g>,
    pub harmonic_part: VectorField<'g>,
    pub dimensions: DimensionReport,
    /// `|X − (grad + curl + harmonic)| / max(|X|, 1)`.
    pub reconstruction_residual: f64,
    /// Largest pairwise `|⟨·,·⟩| / max(|X|², 1)`.
    pub orthogonality_residual: f64,
    /// `|p∇(X − curl − harmonic) − gradient_part| / max(|X|, 1)`.
    pub gradient_consistency: f64,
}

impl HodgeDecomposition<'_> {
    pub fn max_residual(&self) -> f64 {
        self.reconstruction_residual.max(self.orthogonality_residual).max(self.gradient_consistency)
    }
}

/// Projectors of `B = im(f) ⊕ im(g*) ⊕ (ker f* ∩ ker g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractHodge {
    pub im_f: DenseMatrix,
    pub im_g_adjoint: DenseMatrix,
    pub kernel: DenseMatrix,
}

impl AbstractHodge {
    /// `‖P₁ + P₂ + P₃ − I‖`.
    pub fn sum_residual(&self) -> f64 {
        let n = self.kernel.rows();
        let sum = self.im_f.add(&self.im_g_adjoint).and_then(|m| m.add(&self.kernel));
        sum.and_then(|s| s.sub(&DenseMatrix::identity(n))).map(|d| d.frobenius_norm()).unwrap_or(f64::INFINITY)
    }
}

/// Splits `B` for maps `f: A → B` (a `dim B × dim A` matrix) and `g: B → C`
/// with `g∘f = 0`.
pub fn abstract_hodge(f: &DenseMatrix, g: &DenseMatrix, policy: RankPolicy) -> Result<AbstractHodge> {
    let n = f.rows();
    if g.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.cols() });
    }
    let norm = g.matmul(f)?.frobenius_norm();
    if norm > HODGE_TOLERANCE * (f.frobenius_norm() * g.frobenius_norm()).max(1.0) {
        return Err(Error::CompositionNotZero { norm });
    }
    let im_f = orthogonal_projector(&range_basis(f, policy))?;
    let im_g_adjoint = orthogonal_projector(&range_basis(&g.transpose(), policy))?;
    let kernel = orthogonal_projector(&nullspace_basis(&f.transpose().vstack(g)?, policy))?;
    Ok(AbstractHodge { im_f, im_g_adjoint, kernel })
}

/// Reversal permutation u ↦ ū as a matrix.
fn reversal_matrix(g: &Graph) -> DenseMatrix {
    let tg = g.tangent();
    DenseMatrix::from_fn(tg.len(), tg.len(), |i, j| if tg.reverse_index(i) == j { 1.0 } else { 0.0 })
}

/// s = (I + R)/2 when `symmetric`, a = (I − R)/2 otherwise.
pub fn parity_matrix(g: &Graph, symmetric: bool) -> DenseMatrix {
    let r = reversal_matrix(g);
    let sign = if symmetric { 1.0 } else { -1.0 };
    DenseMatrix::from_fn(r.rows(), r.cols(), |i, j| 0.5 * (if i == j { 1.0 } else { 0.0 } + sign * r[(i, j)]))
}

/// Subspaces and projectors of a connected graph, computed once.
#[derive(Debug, Clone)]
pub struct Hodge<'g> {
    calculus: Calculus<'g>,
    system: CirculationSystem,
    policy: RankPolicy,
    circulation_free: SubspaceBasis,
    curl_image: SubspaceBasis,
    harmonic: SubspaceBasis,
    gradient_image: SubspaceBasis,
    curl: DenseMatrix,
    harmonic_projector: DenseMatrix,
}

impl<'g> Hodge<'g> {
    pub fn new(graph: &'g Graph, cycle_limit: usize) -> Result<Self> {
        Self::with_policy(graph, cycle_limit, RankPolicy::default())
    }

    pub fn with_policy(graph: &'g Graph, cycle_limit: usize, policy: RankPolicy) -> Result<Self> {
        let calculus = Calculus::new(graph)?;
        let system = circulation_system(graph, cycle_limit)?;
        let c = &system.matrix;
        let z = nullspace_basis(c, policy);
        let curl = DenseMatrix::identity(z.rows()).sub(&orthogonal_projector(&z)?)?;
        let curl_image = range_basis(&c.transpose(), policy);
        let harmonic = nullspace_basis(&calculus.divergence_matrix().vstack(c)?, policy);
        let harmonic_projector = orthogonal_projector(&harmonic)?;
        let gradient_image = range_basis(calculus.gradient_matrix(), policy);
        Ok(Hodge {
            calculus,
            system,
            policy,
            circulation_free: SubspaceBasis { role: SubspaceRole::CirculationFree, basis: z },
            curl_image: SubspaceBasis { role: SubspaceRole::CurlImage, basis: curl_image },
            harmonic: SubspaceBasis { role: SubspaceRole::Harmonic, basis: harmonic },
            gradient_image: SubspaceBasis { role: SubspaceRole::GradientImage, basis: gradient_image },
            curl,
            harmonic_projector,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.calculus.graph()
    }

    pub fn calculus(&self) -> &Calculus<'g> {
        &self.calculus
    }

    pub fn cycles(&self) -> &CycleSet {
        &self.system.cycles
    }

    pub fn circulation_system(&self) -> &CirculationSystem {
        &self.system
    }

    pub fn policy(&self) -> RankPolicy {
        self.policy
    }

    /// The `2|E| × 2|E|` projector onto Z(G)^⊥.
    pub fn curl_matrix(&self) -> &DenseMatrix {
        &self.curl
    }

    pub fn harmonic_projector(&self) -> &DenseMatrix {
        &self.harmonic_projector
    }

    fn check(&self, x: &VectorField<'_>) -> Result<()> {
        if x.graph() == self.graph() {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn curl(&self, x: &VectorField<'_>) -> Result<VectorField<'g>> {
        self.check(x)?;
        VectorField::new(self.graph(), self.curl.mul_vec(x.coefficients())?)
    }

    pub fn harmonic_projection(&self, x: &VectorField<'_>) -> Result<VectorField<'g>> {
        self.check(x)?;
        VectorField::new(self.graph(), self.harmonic_projector.mul_vec(x.coefficients())?)
    }

    pub fn circulation_free_basis(&self) -> &SubspaceBasis {
        &self.circulation_free
    }

    pub fn curl_image_basis(&self) -> &SubspaceBasis {
        &self.curl_image
    }

    pub fn harmonic_basis(&self) -> &SubspaceBasis {
        &self.harmonic
    }

    pub fn gradient_image_basis(&self) -> &SubspaceBasis {
        &self.gradient_image
    }

    /// Image of a subspace under s (`symmetric`) or a.
    pub fn parity_basis(&self, of: &SubspaceBasis, symmetric: bool) -> Result<SubspaceBasis> {
        let p = parity_matrix(self.graph(), symmetric).matmul(&of.basis)?;
        let role = if symmetric { SubspaceRole::SymmetricPart } else { SubspaceRole::AntisymmetricPart };
        Ok(SubspaceBasis { role, basis: range_basis(&p, self.policy) })
    }

    pub fn dimension_report(&self) -> DimensionReport {
        let g = self.graph();
        DimensionReport {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            gradient: self.gradient_image.dim(),
            curl: self.curl_image.dim(),
            harmonic: self.harmonic.dim(),
            circulation_free: self.circulation_free.dim(),
            cyclomatic: g.cyclomatic_number(),
        }
    }

    pub fn hodge_decompose(&self, x: &VectorField<'_>) -> Result<HodgeDecomposition<'g>> {
        self.check(x)?;
        let (gradient_part, _) = self.calculus.helmholtz_split(x)?;
        let curl_part = self.curl(x)?;
        let harmonic_part = self.harmonic_projection(x)?;
        let scale = x.norm().max(1.0);

        let sum = gradient_part.add(&curl_part)?.add(&harmonic_part)?;
        let reconstruction_residual = x.sub(&sum)?.norm() / scale;

        let orthogonality_residual = [
            gradient_part.inner_product(&curl_part)?,
            gradient_part.inner_product(&harmonic_part)?,
            curl_part.inner_product(&harmonic_part)?,
        ]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
            / (scale * scale);

        let rest = x.sub(&curl_part)?.sub(&harmonic_part)?;
        let (again, _) = self.calculus.helmholtz_split(&rest)?;
        let gradient_consistency = again.sub(&gradient_part)?.norm() / scale;

        Ok(HodgeDecomposition {
            gradient_part,
            curl_part,
            harmonic_part,
            dimensions: self.dimension_report(),
            reconstruction_residual,
            orthogonality_residual,
            gradient_consistency,
        })
    }

    pub fn exact_sequence_report(&self) -> Result<ExactSequenceReport> {
        let g = self.graph();
        let grad: &DenseMatrix = self.calculus.gradient_matrix();
        let div: &DenseMatrix = self.calculus.divergence_matrix();
        let s = parity_matrix(g, true);
        let e = g.edge_count();

        let symmetric_gradient = s.matmul(grad)?.frobenius_norm();
        let divergence_symmetric = div.matmul(&s)?.frobenius_norm();
        let curl_gradient = self.curl.matmul(grad)?.frobenius_norm();
        let divergence_curl = div.matmul(&self.curl)?.frobenius_norm();

        let antisymmetric_homology = e - rank(grad, self.policy);
        let symmetric_homology = (2 * e - rank(div, self.policy)) - e;

        let split = |basis: &SubspaceBasis| -> Result<f64> {
            let p = basis.projector()?;
            let outside = DenseMatrix::identity(p.rows()).sub(&p)?;
            Ok(outside.matmul(&s)?.matmul(&p)?.frobenius_norm())
        };
        let circulation_free_split = split(&self.circulation_free)?;
        let harmonic_split = split(&self.harmonic)?;

        let z_s = self.parity_basis(&self.circulation_free, true)?.dim();
        let z_a = self.parity_basis(&self.circulation_free, false)?.dim();
        let h_s = self.parity_basis(&self.harmonic, true)?.dim();
        let h_a = self.parity_basis(&self.harmonic, false)?.dim();

        let xi = g.cyclomatic_number();
        let residuals = [
            symmetric_gradient,
            divergence_symmetric,
            curl_gradient,
            divergence_curl,
            circulation_free_split,
            harmonic_split,
        ];
        let pass = residuals.iter().all(|&r| r <= HODGE_TOLERANCE)
            && antisymmetric_homology == xi
            && symmetric_homology == xi
            && z_s + z_a == self.circulation_free.dim()
            && h_s + h_a == self.harmonic.dim();
        Ok(ExactSequenceReport {
            symmetric_gradient,
            divergence_symmetric,
            curl_gradient,
            divergence_curl,
            antisymmetric_homology,
            symmetric_homology,
            cyclomatic: xi,
            circulation_free_split,
            harmonic_split,
            circulation_free_symmetric: z_s,
            circulation_free_antisymmetric: z_a,
            harmonic_symmetric: h_s,
            harmonic_antisymmetric: h_a,
            tolerance: HODGE_TOLERANCE,
            pass,
        })
    }
}
