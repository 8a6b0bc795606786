//! States of `C(G) ⊗ C[G]` against the coproduct of density matrices over
//! the irreps `Wᵢ ⊗ W′ⱼ`.
//!
//! `St(C(G) ⊗ C[G]) ≅ St(C[G]) + ⋯ + St(C[G]) ≅ D(n) ⊗ St(C[G])` with
//! `n = |G|`. A state is stored by its values `σ(δ_x ⊗ δ_g)`, row `x`.
//! The coproduct side has components indexed `(x, i)`, copy-major, the
//! `x`-th copy of `DM(Vᵢ)` standing for `DM(Wᵢ ⊗ W′ₓ)`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::certificate::{SampleConfig, Witness};
use crate::convex::{
    tensor_simplex_coproduct, ConvexPoint, CoproductPoint, CoproductSpace, Part, SimplexPoint,
    ZERO_WEIGHT,
};
use crate::error::{Error, Result};
use crate::irreps::IrrepCatalog;
use crate::linalg::{self, CMatrix, C64};
use crate::state::{dm_space, phi, phi_inverse, AlgebraKind, AlgebraState};

/// A state on `C(G) ⊗ C[G]`: `values[x][g] = σ(δ_x ⊗ δ_g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    values: Vec<Vec<C64>>,
}

impl ProductState {
    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    /// `p ⊗ σ`.
    pub fn tensor(p: &SimplexPoint, s: &AlgebraState) -> Self {
        ProductState {
            values: p
                .weights()
                .iter()
                .map(|&w| s.values().iter().map(|v| v * w).collect())
                .collect(),
        }
    }

    pub fn combine(&self, lambda: f64, other: &ProductState) -> ProductState {
        ProductState {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x * lambda + y * (1.0 - lambda))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &ProductState) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Marginal on `C(G)`: `p_x = σ(δ_x ⊗ δ_e)`.
    pub fn marginal(&self, identity: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[identity].re).collect()
    }

    /// Multiply `(p ⊗ σ)(q ⊗ τ) = (p * q) ⊗ (σ τ)`, extended bilinearly:
    /// `(στ)(δ_x ⊗ δ_g) = Σ_{yz = x} σ(δ_y ⊗ δ_g) τ(δ_z ⊗ δ_g)`.
    pub fn mult(&self, other: &ProductState, catalog: &IrrepCatalog) -> ProductState {
        let group = catalog.group();
        let n = group.order();
        let mut values = vec![vec![linalg::ZERO; n]; n];
        for y in 0..n {
            for z in 0..n {
                let x = group.mul(y, z);
                for g in 0..n {
                    values[x][g] += self.values[y][g] * other.values[z][g];
                }
            }
        }
        ProductState { values }
    }
}

/// `Σ_{x,i} DM(Wᵢ ⊗ W′ₓ)`: `|G|` copies of the catalog's DM components.
pub fn tensor_dm_space(catalog: &IrrepCatalog) -> CoproductSpace {
    dm_space(catalog).repeated(catalog.group().order())
}

/// `Σ r_{x,i} T_{x,i} ↦ σ(δ_x ⊗ δ_g) = Σᵢ r_{x,i} tr(T_{x,i} ρᵢ(g))`.
pub fn tensor_phi(point: &CoproductPoint, catalog: &IrrepCatalog) -> Result<ProductState> {
    let n = catalog.group().order();
    let k = catalog.len();
    if point.space() != &tensor_dm_space(catalog) {
        return Err(Error::CatalogMismatch(
            "point is not over Σ DM(Wᵢ ⊗ W′ⱼ)".into(),
        ));
    }
    let space = dm_space(catalog);
    let mut values = Vec::with_capacity(n);
    for x in 0..n {
        let weights = &point.weights()[x * k..(x + 1) * k];
        let mass: f64 = weights.iter().sum();
        if mass <= ZERO_WEIGHT {
            values.push(vec![linalg::ZERO; n]);
            continue;
        }
        let parts: Vec<Option<Part>> = (0..k).map(|i| point.part(x * k + i).cloned()).collect();
        let slice = CoproductPoint::new(
            space.clone(),
            weights.iter().map(|w| w / mass).collect(),
            parts,
            1e-9,
        )?;
        values.push(
            phi(&slice, catalog)?
                .values()
                .iter()
                .map(|v| v * mass)
                .collect(),
        );
    }
    Ok(ProductState { values })
}

/// Inverse of [`tensor_phi`]: split off the marginal and invert `Φ` on
/// every row of positive mass.
pub fn tensor_phi_inverse(
    state: &ProductState,
    catalog: &IrrepCatalog,
    tol: f64,
) -> Result<CoproductPoint> {
    let group = catalog.group();
    let n = group.order();
    let k = catalog.len();
    let mut weights = vec![0.0; n * k];
    let mut parts = vec![None; n * k];
    for (x, row) in state.values.iter().enumerate() {
        let mass = row[group.identity()].re;
        if mass < -tol {
            return Err(Error::NotAState(format!("negative marginal {mass:e}")));
        }
        if mass <= ZERO_WEIGHT {
            continue;
        }
        let normalized = AlgebraState::new(
            group,
            AlgebraKind::Group,
            row.iter().map(|v| v / mass).collect(),
            tol / mass,
        )?;
        let slice = phi_inverse(&normalized, catalog, tol / mass)?;
        for i in 0..k {
            weights[x * k + i] = mass * slice.weights()[i];
            parts[x * k + i] = slice.part(i).cloned();
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    CoproductPoint::new(tensor_dm_space(catalog), weights, parts, tol.max(1e-9))
}

fn random_product_state<R: Rng + ?Sized>(catalog: &IrrepCatalog, rng: &mut R) -> ProductState {
    // mixtures of up to three product states p ⊗ σ
    let g = catalog.group();
    let mut out = ProductState::tensor(
        &SimplexPoint::random(g.order(), rng),
        &AlgebraState::random(g, AlgebraKind::Group, rng),
    );
    for _ in 0..rng.random_range(0..3) {
        let extra = ProductState::tensor(
            &SimplexPoint::random(g.order(), rng),
            &AlgebraState::random(g, AlgebraKind::Group, rng),
        );
        out = out.combine(rng.random(), &extra);
    }
    out
}

/// Every residual needed to certify `Σ_{i,j} DM(Wᵢ ⊗ W′ⱼ) ≅ D(n) ⊗ St(C[G])`.
pub fn tensor_case_witnesses(catalog: &IrrepCatalog, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let group = catalog.group();
    let n = group.order();
    let dims = catalog.dims();
    let space = tensor_dm_space(catalog);
    let mut rng = cfg.rng(61);

    // component multiset: |G| copies of each DM(Vᵢ), matrix size (dim Wᵢ)²
    let mut lhs: BTreeMap<usize, usize> = BTreeMap::new();
    for c in space.components() {
        if let crate::convex::Component::Density(d) = c {
            *lhs.entry(*d).or_default() += 1;
        }
    }
    let mut rhs: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in &dims {
        *rhs.entry(d).or_default() += n;
    }
    let multiset_ok = lhs == rhs && space.len() == n * dims.len();

    let (mut affine, mut there_back, mut back_there, mut product, mut irrep_mult, mut positivity) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let (a, b) = (space.sample(&mut rng), space.sample(&mut rng));
        let lambda: f64 = rng.random();
        let (fa, fb) = (tensor_phi(&a, catalog)?, tensor_phi(&b, catalog)?);
        affine = affine.max(
            tensor_phi(&a.combine(lambda, &b)?, catalog)?.max_abs_diff(&fa.combine(lambda, &fb)),
        );
        there_back = there_back.max(tensor_phi_inverse(&fa, catalog, 1e-8)?.part_distance(&a));
        positivity = positivity.max(product_positivity(&fa, catalog));

        let z = random_product_state(catalog, &mut rng);
        back_there = back_there
            .max(tensor_phi(&tensor_phi_inverse(&z, catalog, 1e-8)?, catalog)?.max_abs_diff(&z));

        // p ⊗ T on the coproduct side lands on p ⊗ Φ(T)
        let p = SimplexPoint::random(n, &mut rng);
        let t = dm_space(catalog).sample(&mut rng);
        let lhs_point = tensor_simplex_coproduct(&p, &t);
        product = product.max(
            tensor_phi(&lhs_point, catalog)?
                .max_abs_diff(&ProductState::tensor(&p, &phi(&t, catalog)?)),
        );

        // Wᵢ ⊗ W′ⱼ act multiplicatively on product points
        let (q, s) = (
            SimplexPoint::random(n, &mut rng),
            AlgebraState::random(group, AlgebraKind::Group, &mut rng),
        );
        let (u, v) = (
            SimplexPoint::random(n, &mut rng),
            AlgebraState::random(group, AlgebraKind::Group, &mut rng),
        );
        let x = ProductState::tensor(&q, &s);
        let y = ProductState::tensor(&u, &v);
        let xy = x.mult(&y, catalog);
        for irrep in 0..catalog.len() {
            for j in group.elements() {
                let act = |w: &ProductState| extend_row(catalog, irrep, w, j);
                irrep_mult = irrep_mult.max(linalg::max_abs_diff(&act(&xy), &(act(&x) * act(&y))));
            }
        }
    }

    // with all irreps one-dimensional both sides are the simplex on n·k
    // vertices: their images must be affinely independent
    let abelian_reduces = if dims.iter().all(|&d| d == 1) {
        let verts: Vec<Vec<C64>> = (0..space.len())
            .map(|j| tensor_phi(&space.vertex(j), catalog).map(|s| s.values.concat()))
            .collect::<Result<_>>()?;
        let m = CMatrix::from_fn(verts[0].len(), verts.len(), |r, c| verts[c][r]);
        let independent = linalg::null_space_dim(&m, 1e-10) == 0;
        Witness::flag(
            "reduces_to_simplex",
            independent && space.components().iter().all(|c| c.is_one_point()),
        )
        .with_detail(format!("D({})", space.len()))
    } else {
        Witness::flag("reduces_to_simplex", true).with_detail("not applicable")
    };

    Ok(vec![
        Witness::flag("component_multiset", multiset_ok)
            .with_detail(format!("{} components", space.len())),
        Witness::new("affine", affine),
        Witness::new("inverse_after_map", there_back),
        Witness::new("map_after_inverse", back_there),
        Witness::new("image_positive", positivity),
        Witness::new("tensor_of_points", product),
        Witness::new("tensor_irreps_multiplicative", irrep_mult),
        abelian_reduces,
    ])
}

/// `(Wᵢ ⊗ W′ⱼ)(w) = Σ_x ρᵢ(x) w(δ_x ⊗ δ_j)`.
fn extend_row(catalog: &IrrepCatalog, i: usize, w: &ProductState, j: usize) -> CMatrix {
    let rep = catalog.irrep(i);
    let mut out = CMatrix::zeros(rep.dim(), rep.dim());
    for (x, row) in w.values.iter().enumerate() {
        out += rep.matrix(x) * row[j];
    }
    out
}

/// Negative marginal mass plus the worst Gram-matrix violation per row.
fn product_positivity(s: &ProductState, catalog: &IrrepCatalog) -> f64 {
    let group = catalog.group();
    s.values
        .iter()
        .map(|row| {
            let mass = row[group.identity()].re;
            let gram = AlgebraState::unchecked(group, AlgebraKind::Group, row.clone())
                .positivity_residual();
            (-mass).max(0.0) + gram
        })
        .fold(0.0, f64::max)
}
