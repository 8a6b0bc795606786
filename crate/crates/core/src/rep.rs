//! Unitary representations of finite groups.

use crate::error::{Error, Result};
use crate::group::{ConjugacyClasses, FiniteGroup};
use crate::linalg::{self, CMatrix, C64};

/// Relative singular-value cutoff used when counting commutant dimensions.
pub const NULL_SPACE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl UnitaryRep {
    /// Wrap per-element matrices. Shapes are checked here; unitarity and the
    /// homomorphism property are measured by the residual methods.
    pub fn new(group: FiniteGroup, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::DimMismatch {
                expected: group.order(),
                actual: matrices.len(),
            });
        }
        let dim = matrices[0].nrows();
        if dim == 0 {
            return Err(Error::InvalidPoint(
                "zero-dimensional representation".into(),
            ));
        }
        if let Some(bad) = matrices.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(Error::DimMismatch {
                expected: dim,
                actual: bad.nrows().max(bad.ncols()),
            });
        }
        let mut matrices = matrices;
        matrices[group.identity()] = linalg::identity(dim);
        Ok(UnitaryRep {
            group,
            dim,
            matrices,
        })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        let matrices = vec![linalg::identity(1); group.order()];
        UnitaryRep {
            group: group.clone(),
            dim: 1,
            matrices,
        }
    }

    /// Left regular representation: `ρ(g) δ_h = δ_{gh}`.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for h in 0..n {
                    m[(group.mul(g, h), h)] = linalg::ONE;
                }
                m
            })
            .collect();
        UnitaryRep {
            group: group.clone(),
            dim: n,
            matrices,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// `max_g ‖U(g)U(g)* − I‖` (entrywise max).
    pub fn unitarity_residual(&self) -> f64 {
        let id = linalg::identity(self.dim);
        self.matrices
            .iter()
            .map(|u| linalg::max_abs_diff(&(u * u.adjoint()), &id))
            .fold(0.0, f64::max)
    }

    /// `max_{g,h} ‖U(g)U(h) − U(gh)‖` (entrywise max).
    pub fn homomorphism_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for g in self.group.elements() {
            for h in self.group.elements() {
                let lhs = &self.matrices[g] * &self.matrices[h];
                worst = worst.max(linalg::max_abs_diff(
                    &lhs,
                    &self.matrices[self.group.mul(g, h)],
                ));
            }
        }
        worst
    }

    /// Character per group element.
    pub fn character(&self) -> Vec<C64> {
        self.matrices.iter().map(linalg::trace).collect()
    }

    /// Character per conjugacy class, evaluated at class representatives.
    pub fn class_character(&self, classes: &ConjugacyClasses) -> Vec<C64> {
        classes
            .representatives()
            .into_iter()
            .map(|g| linalg::trace(&self.matrices[g]))
            .collect()
    }

    /// Largest spread of the character within one conjugacy class.
    pub fn class_function_residual(&self, classes: &ConjugacyClasses) -> f64 {
        let chi = self.character();
        classes
            .classes()
            .iter()
            .flat_map(|c| c.iter().map(|&g| (chi[g] - chi[c[0]]).norm()))
            .fold(0.0, f64::max)
    }

    /// Kronecker-product representation `g ↦ U_a(g) ⊗ U_b(g)`.
    pub fn tensor(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| linalg::kron(a, b))
            .collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            dim: self.dim * other.dim,
            matrices,
        })
    }

    /// Restriction to the subspace spanned by the orthonormal columns of
    /// `basis`: `g ↦ Q* U(g) Q`.
    pub fn restrict(&self, basis: &CMatrix) -> UnitaryRep {
        let qh = basis.adjoint();
        let mut matrices: Vec<CMatrix> = self.matrices.iter().map(|u| &qh * u * basis).collect();
        matrices[self.group.identity()] = linalg::identity(basis.ncols());
        UnitaryRep {
            group: self.group.clone(),
            dim: basis.ncols(),
            matrices,
        }
    }

    /// `max_g ‖M U(g) − U(g) M‖`.
    pub fn intertwining_residual(&self, m: &CMatrix) -> f64 {
        self.matrices
            .iter()
            .map(|u| linalg::max_abs_diff(&(m * u), &(u * m)))
            .fold(0.0, f64::max)
    }

    pub fn intertwines(&self, m: &CMatrix, tol: f64) -> bool {
        m.shape() == (self.dim, self.dim) && self.intertwining_residual(m) <= tol
    }

    /// Dimension of `{M : M U(g) = U(g) M for all g}` from the null space of
    /// the stacked commutation equations over a generating set.
    pub fn commutant_dim(&self) -> usize {
        let d = self.dim;
        let gens = self.group.generators();
        if gens.is_empty() {
            return d * d;
        }
        let id = linalg::identity(d);
        let mut system = CMatrix::zeros(gens.len() * d * d, d * d);
        for (k, &g) in gens.iter().enumerate() {
            let u = &self.matrices[g];
            // column-major vec: vec(MU) = (Uᵀ ⊗ I) vec(M), vec(UM) = (I ⊗ U) vec(M)
            let block = linalg::kron(&u.transpose(), &id) - linalg::kron(&id, u);
            system
                .view_mut((k * d * d, 0), (d * d, d * d))
                .copy_from(&block);
        }
        linalg::null_space_dim(&system, NULL_SPACE_TOL)
    }

    /// Average `X ↦ (1/|G|) Σ_g U(g) X V(g)*` projecting onto intertwiners
    /// from `other` to `self`.
    pub fn average_intertwiner(&self, other: &UnitaryRep, x: &CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, other.dim);
        for (u, v) in self.matrices.iter().zip(&other.matrices) {
            acc += u * x * v.adjoint();
        }
        acc.unscale(self.group.order() as f64)
    }
}

/// Hermitian inner product of class functions given per element:
/// `(1/|G|) Σ_g conj(χ_a(g)) χ_b(g)`.
pub fn character_inner(a: &[C64], b: &[C64]) -> C64 {
    let n = a.len() as f64;
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>() / n
}
