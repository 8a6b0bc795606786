//! Fourier transform `Ψ: C[G] → End(V₁) × ⋯ × End(V_k)`, `δ_g ↦ (ρ₁(g), …, ρ_k(g))`.

use crate::error::{Error, Result};
use crate::group_algebra::GroupAlgebraElement;
use crate::irreps::IrrepCatalog;
use crate::linalg::{self, CMatrix};

/// Relative roundtrip residual above which inversion is declared singular.
const INVERSION_GUARD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierBlocks {
    blocks: Vec<CMatrix>,
}

impl FourierBlocks {
    pub fn new(blocks: Vec<CMatrix>) -> Self {
        FourierBlocks { blocks }
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    /// Blockwise product.
    pub fn mul(&self, other: &FourierBlocks) -> Result<FourierBlocks> {
        if self.dims() != other.dims() {
            return Err(Error::LayoutMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(FourierBlocks {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &FourierBlocks) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| linalg::max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }
}

/// `Ψ(a)ᵢ = Σ_g a_g ρᵢ(g)`.
pub fn fourier(a: &GroupAlgebraElement, catalog: &IrrepCatalog) -> Result<FourierBlocks> {
    if a.group() != catalog.group() {
        return Err(Error::GroupMismatch);
    }
    let blocks = catalog
        .irreps()
        .iter()
        .map(|rep| {
            let mut b = CMatrix::zeros(rep.dim(), rep.dim());
            for (g, &ag) in a.coeffs().iter().enumerate() {
                b += rep.matrix(g) * ag;
            }
            b
        })
        .collect();
    Ok(FourierBlocks { blocks })
}

/// `a_g = Σᵢ (dᵢ/|G|) tr(Bᵢ ρᵢ(g)*)`, followed by a forward roundtrip that
/// rejects catalogs for which this formula is not an inverse.
pub fn fourier_inverse(
    blocks: &FourierBlocks,
    catalog: &IrrepCatalog,
) -> Result<GroupAlgebraElement> {
    let group = catalog.group();
    let n = group.order();
    if blocks.dims() != catalog.dims() {
        return Err(Error::CatalogMismatch(format!(
            "block dims {:?}, catalog dims {:?}",
            blocks.dims(),
            catalog.dims()
        )));
    }
    let coeffs = group
        .elements()
        .map(|g| {
            catalog
                .irreps()
                .iter()
                .zip(blocks.blocks())
                .map(|(rep, b)| {
                    linalg::trace(&(b * rep.matrix(g).adjoint())) * (rep.dim() as f64 / n as f64)
                })
                .sum()
        })
        .collect();
    let a = GroupAlgebraElement::new(group, coeffs)?;
    let residual = fourier(&a, catalog)?.max_abs_diff(blocks);
    if !(residual <= INVERSION_GUARD * blocks.max_abs().max(1.0)) {
        return Err(Error::SingularSystem(format!(
            "roundtrip residual {residual:e}"
        )));
    }
    Ok(a)
}
