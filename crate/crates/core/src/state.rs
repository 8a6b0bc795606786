//! States on `C(G)` and `C[G]`, stored by their values on the Dirac basis,
//! and the isomorphism `Φ: DM(V₁) + ⋯ + DM(V_k) → St(C[G])`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convex::{
    Component, CoproductPoint, CoproductSpace, DensityMatrix, Part, SimplexPoint, ZERO_WEIGHT,
};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::group_algebra::GroupAlgebraElement;
use crate::irreps::IrrepCatalog;
use crate::linalg::{self, CMatrix, C64};

/// Which algebra a state lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    /// `C(G)`, pointwise multiplication.
    Function,
    /// `C[G]`, convolution.
    Group,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraState {
    group: FiniteGroup,
    kind: AlgebraKind,
    values: Vec<C64>,
}

impl AlgebraState {
    /// Validate normalisation and positivity within `tol`.
    pub fn new(group: &FiniteGroup, kind: AlgebraKind, values: Vec<C64>, tol: f64) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimMismatch {
                expected: group.order(),
                actual: values.len(),
            });
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::NotAState("non-finite value".into()));
        }
        let s = AlgebraState {
            group: group.clone(),
            kind,
            values,
        };
        let norm = s.normalization_residual();
        if norm > tol {
            return Err(Error::NotAState(format!("σ(1) off by {norm:e}")));
        }
        let pos = s.positivity_residual();
        if pos > tol {
            return Err(Error::NotAState(format!("positivity violated by {pos:e}")));
        }
        Ok(s)
    }

    pub(crate) fn unchecked(group: &FiniteGroup, kind: AlgebraKind, values: Vec<C64>) -> Self {
        AlgebraState {
            group: group.clone(),
            kind,
            values,
        }
    }

    /// Unit of the state monoid: `σ ≡ 1` on `C[G]`, the point mass at `e`
    /// on `C(G)`.
    pub fn unit(group: &FiniteGroup, kind: AlgebraKind) -> Self {
        match kind {
            AlgebraKind::Group => Self::unchecked(group, kind, vec![linalg::ONE; group.order()]),
            AlgebraKind::Function => Self::point_mass(group, group.identity()),
        }
    }

    pub fn point_mass(group: &FiniteGroup, g: usize) -> Self {
        let mut values = vec![linalg::ZERO; group.order()];
        values[g] = linalg::ONE;
        Self::unchecked(group, AlgebraKind::Function, values)
    }

    pub fn from_distribution(group: &FiniteGroup, p: &SimplexPoint) -> Result<Self> {
        if p.n() != group.order() {
            return Err(Error::DimMismatch {
                expected: group.order(),
                actual: p.n(),
            });
        }
        Ok(Self::unchecked(
            group,
            AlgebraKind::Function,
            p.weights().iter().map(|&w| C64::new(w, 0.0)).collect(),
        ))
    }

    /// Function states: a uniform random distribution. Group states: a
    /// random mixture of up to three vector states `a ↦ ⟨L_a ψ, ψ⟩`.
    pub fn random<R: Rng + ?Sized>(group: &FiniteGroup, kind: AlgebraKind, rng: &mut R) -> Self {
        match kind {
            AlgebraKind::Function => {
                Self::from_distribution(group, &SimplexPoint::random(group.order(), rng))
                    .expect("size matches")
            }
            AlgebraKind::Group => {
                let terms = rng.random_range(1..=3);
                let mix = SimplexPoint::random(terms, rng);
                let mut values = vec![linalg::ZERO; group.order()];
                for &w in mix.weights() {
                    let psi = GroupAlgebraElement::random(group, rng);
                    let norm2 = psi.norm().powi(2);
                    // ⟨L_g ψ, ψ⟩ = Σ_h ψ_h conj(ψ_{gh})
                    for (g, v) in values.iter_mut().enumerate() {
                        let s: C64 = group
                            .elements()
                            .map(|h| psi.coeff(h) * psi.coeff(group.mul(g, h)).conj())
                            .sum();
                        *v += s * (w / norm2);
                    }
                }
                Self::unchecked(group, kind, values)
            }
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, g: usize) -> C64 {
        self.values[g]
    }

    pub fn normalization_residual(&self) -> f64 {
        match self.kind {
            AlgebraKind::Group => (self.values[self.group.identity()] - linalg::ONE).norm(),
            AlgebraKind::Function => (self.values.iter().sum::<C64>() - linalg::ONE).norm(),
        }
    }

    /// `[σ(δ_{g⁻¹h})]_{g,h}`; `σ(a*a) = c* M c` for `a = Σ c_h δ_h`.
    pub fn gram_matrix(&self) -> CMatrix {
        let g = &self.group;
        CMatrix::from_fn(g.order(), g.order(), |x, y| {
            self.values[g.mul(g.inverse(x), y)]
        })
    }

    /// How far the state is from positive. Function states: the most
    /// negative or most imaginary value. Group states: non-Hermitian part
    /// plus the most negative eigenvalue of the Gram matrix.
    pub fn positivity_residual(&self) -> f64 {
        match self.kind {
            AlgebraKind::Function => self
                .values
                .iter()
                .map(|z| (-z.re).max(0.0).max(z.im.abs()))
                .fold(0.0, f64::max),
            AlgebraKind::Group => {
                let m = self.gram_matrix();
                let herm = linalg::hermitian_residual(&m);
                let min = linalg::hermitian_eigenvalues(&linalg::hermitian_part(&m))[0];
                herm + (-min).max(0.0)
            }
        }
    }

    pub fn max_abs_diff(&self, other: &AlgebraState) -> f64 {
        if self.group != other.group || self.kind != other.kind {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `λσ + (1 − λ)τ`.
    pub fn combine(&self, lambda: f64, other: &AlgebraState) -> Result<AlgebraState> {
        self.compatible(other)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidPoint(format!(
                "mixing weight {lambda} outside [0, 1]"
            )));
        }
        Ok(Self::unchecked(
            &self.group,
            self.kind,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * lambda + b * (1.0 - lambda))
                .collect(),
        ))
    }

    fn compatible(&self, other: &AlgebraState) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        if self.kind != other.kind {
            return Err(Error::NotAState("states live on different algebras".into()));
        }
        Ok(())
    }

    fn expect_kind(&self, kind: AlgebraKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::NotAState(format!("expected a {kind:?} state")))
        }
    }
}

/// `(σ·τ)(δ_g) = σ(δ_g) τ(δ_g)` on `C[G]`.
pub fn state_mult_group(s: &AlgebraState, t: &AlgebraState) -> Result<AlgebraState> {
    s.compatible(t)?;
    s.expect_kind(AlgebraKind::Group)?;
    Ok(AlgebraState::unchecked(
        &s.group,
        AlgebraKind::Group,
        s.values.iter().zip(&t.values).map(|(a, b)| a * b).collect(),
    ))
}

/// `(p·q)(g) = Σ_{hk = g} p(h) q(k)` on `C(G)`: the dual of `Δφ(g, h) = φ(gh)`.
pub fn state_mult_function(p: &AlgebraState, q: &AlgebraState) -> Result<AlgebraState> {
    p.compatible(q)?;
    p.expect_kind(AlgebraKind::Function)?;
    let g = &p.group;
    let mut values = vec![linalg::ZERO; g.order()];
    for (h, &ph) in p.values.iter().enumerate() {
        for (k, &qk) in q.values.iter().enumerate() {
            values[g.mul(h, k)] += ph * qk;
        }
    }
    Ok(AlgebraState::unchecked(g, AlgebraKind::Function, values))
}

/// `DM(V₁) + ⋯ + DM(V_k)` for the catalog's irreps.
pub fn dm_space(catalog: &IrrepCatalog) -> CoproductSpace {
    CoproductSpace::density(&catalog.dims()).expect("catalog is non-empty")
}

fn check_space(point: &CoproductPoint, catalog: &IrrepCatalog) -> Result<()> {
    let expected: Vec<Component> = catalog.dims().into_iter().map(Component::Density).collect();
    if point.space().components() != expected.as_slice() {
        return Err(Error::CatalogMismatch(format!(
            "components {:?}, catalog dims {:?}",
            point.space().components(),
            catalog.dims()
        )));
    }
    Ok(())
}

/// `Φ(Σ rᵢTᵢ)(δ_g) = Σᵢ rᵢ tr(Tᵢ ρᵢ(g))`.
pub fn phi(point: &CoproductPoint, catalog: &IrrepCatalog) -> Result<AlgebraState> {
    check_space(point, catalog)?;
    let group = catalog.group();
    let mut values = vec![linalg::ZERO; group.order()];
    for (i, rep) in catalog.irreps().iter().enumerate() {
        let Some(Part::Density(t)) = point.part(i) else {
            continue;
        };
        let r = point.weights()[i];
        for (g, v) in values.iter_mut().enumerate() {
            *v += linalg::trace(&(t.matrix() * rep.matrix(g))) * r;
        }
    }
    Ok(AlgebraState::unchecked(group, AlgebraKind::Group, values))
}

/// Unnormalised blocks `Bᵢ = rᵢTᵢ = (dᵢ/|G|) Σ_g σ(δ_g) ρᵢ(g⁻¹)`.
pub fn phi_inverse_blocks(state: &AlgebraState, catalog: &IrrepCatalog) -> Vec<CMatrix> {
    let n = catalog.group().order() as f64;
    catalog
        .irreps()
        .iter()
        .map(|rep| {
            let mut b = CMatrix::zeros(rep.dim(), rep.dim());
            for (g, &v) in state.values().iter().enumerate() {
                b += rep.matrix(g).adjoint() * v;
            }
            b * C64::new(rep.dim() as f64 / n, 0.0)
        })
        .collect()
}

/// The point with `Φ(point) = state`. Blocks with weight `≤ ZERO_WEIGHT` are
/// dropped and the remaining weights renormalised.
pub fn phi_inverse(
    state: &AlgebraState,
    catalog: &IrrepCatalog,
    tol: f64,
) -> Result<CoproductPoint> {
    if state.group() != catalog.group() {
        return Err(Error::GroupMismatch);
    }
    state.expect_kind(AlgebraKind::Group)?;
    let norm = state.normalization_residual();
    if norm > tol {
        return Err(Error::NotAState(format!("σ(δ_e) off by {norm:e}")));
    }
    let pos = state.positivity_residual();
    if pos > tol {
        return Err(Error::NotAState(format!(
            "positivity certificate fails by {pos:e}"
        )));
    }
    let blocks = phi_inverse_blocks(state, catalog);
    let mut weights: Vec<f64> = blocks.iter().map(|b| linalg::trace(b).re).collect();
    if let Some(w) = weights.iter().find(|&&w| w < -tol) {
        return Err(Error::NotAState(format!("negative block weight {w:e}")));
    }
    for w in &mut weights {
        if *w <= ZERO_WEIGHT {
            *w = 0.0;
        }
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NotAState("all block weights vanish".into()));
    }
    let mut parts = Vec::with_capacity(blocks.len());
    for (b, w) in blocks.iter().zip(weights.iter_mut()) {
        *w /= total;
        parts.push(if *w > 0.0 {
            Some(Part::Density(DensityMatrix::from_psd(b)?))
        } else {
            None
        });
    }
    CoproductPoint::new(dm_space(catalog), weights, parts, tol.max(1e-9))
}

/// `T · S = Φ⁻¹(Φ(T) Φ(S))`.
pub fn dm_coproduct_mult(
    t: &CoproductPoint,
    s: &CoproductPoint,
    catalog: &IrrepCatalog,
) -> Result<CoproductPoint> {
    let product = state_mult_group(&phi(t, catalog)?, &phi(s, catalog)?)?;
    phi_inverse(&product, catalog, 1e-8)
}

/// `g ↦ tr((T ⊗ S)(ρᵢ ⊗ ρⱼ)(g))` for `T ∈ DM(Vᵢ)`, `S ∈ DM(Vⱼ)`.
pub fn tensor_state_values(
    t: &DensityMatrix,
    i: usize,
    s: &DensityMatrix,
    j: usize,
    catalog: &IrrepCatalog,
) -> Result<Vec<C64>> {
    let tensor = catalog.irrep(i).tensor(catalog.irrep(j))?;
    let ts = linalg::kron(t.matrix(), s.matrix());
    Ok(catalog
        .group()
        .elements()
        .map(|g| linalg::trace(&(&ts * tensor.matrix(g))))
        .collect())
}
