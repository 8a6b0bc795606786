//! The group algebra `C[G]`: convolution, involution, the Hilbert-algebra
//! inner product, multiplication operators, comultiplications, and the block
//! form of its effect module.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::certificate::{SampleConfig, Witness};
use crate::effect::{is_effect, BlockEffect, HermitianEffect};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::irreps::IrrepCatalog;
use crate::linalg::{self, CMatrix, C64};
use crate::rep::{UnitaryRep, NULL_SPACE_TOL};

/// `Σ_g a_g δ_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement {
    group: FiniteGroup,
    coeffs: Vec<C64>,
}

impl GroupAlgebraElement {
    pub fn new(group: &FiniteGroup, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimMismatch {
                expected: group.order(),
                actual: coeffs.len(),
            });
        }
        if coeffs.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coefficient".into()));
        }
        Ok(GroupAlgebraElement {
            group: group.clone(),
            coeffs,
        })
    }

    pub fn zero(group: &FiniteGroup) -> Self {
        GroupAlgebraElement {
            group: group.clone(),
            coeffs: vec![linalg::ZERO; group.order()],
        }
    }

    pub fn dirac(group: &FiniteGroup, g: usize) -> Self {
        let mut a = Self::zero(group);
        a.coeffs[g] = linalg::ONE;
        a
    }

    /// `δ_e`, the unit of convolution.
    pub fn unit(group: &FiniteGroup) -> Self {
        Self::dirac(group, group.identity())
    }

    /// Independent standard complex Gaussian coefficients.
    pub fn random<R: Rng + ?Sized>(group: &FiniteGroup, rng: &mut R) -> Self {
        let coeffs = (0..group.order())
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        GroupAlgebraElement {
            group: group.clone(),
            coeffs,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> C64 {
        self.coeffs[g]
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(a*)_g = conj(a_{g⁻¹})`.
    pub fn star(&self) -> Self {
        let coeffs = self
            .group
            .elements()
            .map(|g| self.coeffs[self.group.inverse(g)].conj())
            .collect();
        GroupAlgebraElement {
            group: self.group.clone(),
            coeffs,
        }
    }

    /// `⟨a, b⟩ = Σ_g a_g conj(b_g)`, linear in the first argument.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_group(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(a * b)(g) = Σ_{hk = g} a_h b_k`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let g = &self.group;
        let mut coeffs = vec![linalg::ZERO; g.order()];
        for (h, &ah) in self.coeffs.iter().enumerate() {
            if ah == linalg::ZERO {
                continue;
            }
            for (k, &bk) in other.coeffs.iter().enumerate() {
                coeffs[g.mul(h, k)] += ah * bk;
            }
        }
        Ok(GroupAlgebraElement {
            group: g.clone(),
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(GroupAlgebraElement {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, z: C64) -> Self {
        GroupAlgebraElement {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|a| a * z).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.group != other.group {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix of `x ↦ a * x`: `L[k, h] = a_{k h⁻¹}`.
    pub fn left_mult_operator(&self) -> CMatrix {
        let g = &self.group;
        CMatrix::from_fn(g.order(), g.order(), |k, h| {
            self.coeffs[g.mul(k, g.inverse(h))]
        })
    }

    /// Matrix of `x ↦ x * a`: `R[k, h] = a_{h⁻¹ k}`. Commutes with the left
    /// regular action.
    pub fn right_mult_operator(&self) -> CMatrix {
        let g = &self.group;
        CMatrix::from_fn(g.order(), g.order(), |k, h| {
            self.coeffs[g.mul(g.inverse(h), k)]
        })
    }

    /// `0 ≤ a ≤ 1` in `C[G]`, tested on the right-multiplication operator.
    pub fn is_effect(&self, tol: f64) -> bool {
        is_effect(&self.right_mult_operator(), tol)
    }

    /// Read an element back from the column of an operator at `δ_e`.
    fn from_operator_at_unit(group: &FiniteGroup, op: &CMatrix) -> Self {
        GroupAlgebraElement {
            group: group.clone(),
            coeffs: op.column(group.identity()).iter().copied().collect(),
        }
    }
}

/// `a ↦ (x ↦ xa)`.
pub fn effect_in_algebra_to_operator(a: &GroupAlgebraElement, tol: f64) -> Result<CMatrix> {
    let op = a.right_mult_operator();
    if !is_effect(&op, tol) {
        return Err(Error::NotAnEffect(
            "right multiplication operator leaves [0, 1]".into(),
        ));
    }
    Ok(op)
}

/// `ε ↦ ε(δ_e)` for an effect operator commuting with the left regular action.
pub fn operator_to_effect_in_algebra(
    group: &FiniteGroup,
    eps: &CMatrix,
    tol: f64,
) -> Result<GroupAlgebraElement> {
    let n = group.order();
    if eps.nrows() != n || eps.ncols() != n {
        return Err(Error::DimMismatch {
            expected: n,
            actual: eps.nrows(),
        });
    }
    let residual = UnitaryRep::regular(group).intertwining_residual(eps);
    if residual > tol {
        return Err(Error::NotIntertwining(residual));
    }
    if !is_effect(eps, tol) {
        return Err(Error::NotAnEffect("operator spectrum leaves [0, 1]".into()));
    }
    Ok(GroupAlgebraElement::from_operator_at_unit(group, eps))
}

/// Average of a random matrix over the left regular action; lands in the
/// commutant.
pub fn random_intertwiner<R: Rng + ?Sized>(group: &FiniteGroup, rng: &mut R) -> CMatrix {
    let n = group.order();
    let m = linalg::random_complex(n, n, rng);
    let g = group;
    // L_g M L_g⁻¹ permutes entries: (k, h) ← (g⁻¹k, g⁻¹h)
    CMatrix::from_fn(n, n, |k, h| {
        let total: C64 = g.elements().map(|x| m[(g.mul(x, k), g.mul(x, h))]).sum();
        total / n as f64
    })
}

/// A random intertwining effect: the spectrum of a random Hermitian
/// intertwiner squeezed into `[0, 1]` by an affine rescale.
pub fn random_intertwining_effect<R: Rng + ?Sized>(group: &FiniteGroup, rng: &mut R) -> CMatrix {
    let h = linalg::hermitian_part(&random_intertwiner(group, rng));
    let ev = linalg::hermitian_eigenvalues(&h);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    let span = (hi - lo).max(f64::EPSILON);
    let (a, b): (f64, f64) = (rng.random_range(0.0..0.3), rng.random_range(0.7..1.0));
    linalg::spectral_map(&h, |x| a + (b - a) * (x - lo) / span)
}

/// `Δ(φ)(g, h) = φ(gh)`, indexed `g·|G| + h`.
pub fn comult_function_algebra(group: &FiniteGroup, phi: &[C64]) -> Vec<C64> {
    let n = group.order();
    (0..n * n).map(|i| phi[group.mul(i / n, i % n)]).collect()
}

/// `Δ̂(Σ a_g δ_g) = Σ a_g δ_(g,g)` in `C[G × G]`.
pub fn comult_group_algebra(a: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
    let g = a.group();
    let n = g.order();
    let pair = FiniteGroup::product(g, g)?;
    let mut coeffs = vec![linalg::ZERO; n * n];
    for x in g.elements() {
        coeffs[x * n + x] = a.coeff(x);
    }
    GroupAlgebraElement::new(&pair, coeffs)
}

/// `max |φ((gh)k) − φ(g(hk))|`: `(Δ ⊗ id)Δ` against `(id ⊗ Δ)Δ`.
pub fn function_coassociativity_residual(group: &FiniteGroup, phi: &[C64]) -> f64 {
    let n = group.order();
    let d = comult_function_algebra(group, phi);
    let mut worst = 0.0f64;
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                // (Δ ⊗ id): apply Δ to the first slot of Δφ(·, k)
                let left = d[group.mul(g, h) * n + k];
                let right = d[g * n + group.mul(h, k)];
                worst = worst.max((left - right).norm());
            }
        }
    }
    worst
}

/// `(Δ̂ ⊗ id)Δ̂ a` against `(id ⊗ Δ̂)Δ̂ a` on `G × G × G`.
pub fn group_coassociativity_residual(a: &GroupAlgebraElement) -> f64 {
    let n = a.group().order();
    let d: Vec<C64> = (0..n * n)
        .map(|i| {
            if i / n == i % n {
                a.coeff(i / n)
            } else {
                linalg::ZERO
            }
        })
        .collect();
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                // left: split the first factor of Δ̂a, right: split the second
                let left = if x == y { d[x * n + z] } else { linalg::ZERO };
                let right = if y == z { d[x * n + y] } else { linalg::ZERO };
                worst = worst.max((left - right).norm());
            }
        }
    }
    worst
}

/// Hilbert-algebra axioms on sampled triples and the properties of maps of
/// left actions (square root, adjoint, adjoint at the unit).
pub fn hilbert_algebra_witnesses(group: &FiniteGroup, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let mut rng = cfg.rng(11);
    let regular = UnitaryRep::regular(group);
    let unit = GroupAlgebraElement::unit(group);
    let (mut conj_sym, mut bounded, mut adjoint_mult) = (0.0f64, 0.0f64, 0.0f64);
    let (mut sqrt_inter, mut sqrt_square, mut adj_inter, mut adj_unit) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut span = CMatrix::zeros(group.order(), group.order().max(cfg.samples));

    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let a = GroupAlgebraElement::random(group, &mut rng);
        let b = GroupAlgebraElement::random(group, &mut rng);
        let c = GroupAlgebraElement::random(group, &mut rng);

        conj_sym = conj_sym.max((a.inner(&b)? - b.star().inner(&a.star())?).norm());
        let ab = a.convolve(&b)?;
        let op_norm = linalg::spectral_norm(&a.left_mult_operator());
        bounded = bounded.max(ab.norm() - op_norm * b.norm() * (1.0 + 1e-12));
        adjoint_mult = adjoint_mult.max((ab.inner(&c)? - b.inner(&a.star().convolve(&c)?)?).norm());
        if i < span.ncols() {
            span.set_column(
                i,
                &CMatrix::from_column_slice(ab.coeffs.len(), 1, &ab.coeffs).column(0),
            );
        }

        // a positive map of left actions: x ↦ x c*c
        let f = c.star().convolve(&c)?.right_mult_operator();
        let root = linalg::psd_sqrt(&f);
        sqrt_inter = sqrt_inter.max(regular.intertwining_residual(&root));
        let s = GroupAlgebraElement::from_operator_at_unit(group, &root);
        let f1 = GroupAlgebraElement::from_operator_at_unit(group, &f);
        sqrt_square = sqrt_square.max(s.convolve(&s)?.max_abs_diff(&f1));

        let g = random_intertwiner(group, &mut rng);
        let g_adj = g.adjoint();
        adj_inter = adj_inter.max(regular.intertwining_residual(&g_adj));
        let g1 = GroupAlgebraElement::from_operator_at_unit(group, &g);
        let g_adj1 = GroupAlgebraElement::from_operator_at_unit(group, &g_adj);
        adj_unit = adj_unit.max(g_adj1.max_abs_diff(&g1.star()));
    }
    // with fewer samples than |G|, unit products fill the remaining columns
    for (j, g) in (cfg.samples..span.ncols()).zip(group.elements()) {
        let p = GroupAlgebraElement::dirac(group, g).convolve(&unit)?;
        span.set_column(
            j,
            &CMatrix::from_column_slice(p.coeffs.len(), 1, &p.coeffs).column(0),
        );
    }
    let rank_deficit = linalg::null_space_dim(&span.adjoint(), NULL_SPACE_TOL);

    Ok(vec![
        Witness::new("inner_conjugate_symmetry", conj_sym),
        Witness::new("left_mult_bounded", bounded.max(0.0)),
        Witness::new("left_mult_adjoint", adjoint_mult),
        Witness::flag("products_span", rank_deficit == 0),
        Witness::new("sqrt_is_map_of_left_actions", sqrt_inter),
        Witness::new("sqrt_squares_at_unit", sqrt_square),
        Witness::new("adjoint_is_map_of_left_actions", adj_inter),
        Witness::new("adjoint_at_unit", adj_unit),
    ])
}

/// `Ef(C[G]) ≅ Ef(V₁) × ⋯ × Ef(V_k)`, realised concretely on the catalog's
/// isotypic basis.
///
/// In that basis `R_a` becomes `⊕ᵢ Eᵢ ⊗ I_{dᵢ}` with `Eᵢ[p, q]` the leading
/// entry of the `(p, q)` copy block; `extraction[i][p]` is the basis index of
/// that entry for copy `p`.
#[derive(Clone, Debug)]
pub struct EffectBlockIso<'a> {
    catalog: &'a IrrepCatalog,
    extraction: Vec<Vec<usize>>,
}

impl<'a> EffectBlockIso<'a> {
    pub fn new(catalog: &'a IrrepCatalog) -> Self {
        let extraction = catalog
            .block_layout()
            .iter()
            .map(|copies| copies.iter().map(|r| r.start).collect())
            .collect();
        EffectBlockIso {
            catalog,
            extraction,
        }
    }

    pub fn layout(&self) -> Vec<usize> {
        self.catalog.dims()
    }

    pub fn extraction_indices(&self) -> &[Vec<usize>] {
        &self.extraction
    }

    fn conjugated(&self, a: &GroupAlgebraElement) -> Result<CMatrix> {
        if a.group() != self.catalog.group() {
            return Err(Error::GroupMismatch);
        }
        let q = self.catalog.basis_change();
        Ok(q.adjoint() * a.right_mult_operator() * q)
    }

    fn blocks_of(&self, m: &CMatrix) -> Vec<CMatrix> {
        self.extraction
            .iter()
            .map(|idx| CMatrix::from_fn(idx.len(), idx.len(), |p, q| m[(idx[p], idx[q])]))
            .collect()
    }

    /// Distance of `Q* R_a Q` from the reconstructed `⊕ Eᵢ ⊗ I`.
    pub fn block_form_residual(&self, a: &GroupAlgebraElement) -> Result<f64> {
        let m = self.conjugated(a)?;
        Ok(linalg::max_abs_diff(
            &m,
            &self.assemble(&self.blocks_of(&m)),
        ))
    }

    fn assemble(&self, blocks: &[CMatrix]) -> CMatrix {
        let n = self.catalog.group().order();
        let mut m = CMatrix::zeros(n, n);
        for (i, copies) in self.catalog.block_layout().iter().enumerate() {
            let d = self.catalog.dims()[i];
            for (p, rp) in copies.iter().enumerate() {
                for (q, rq) in copies.iter().enumerate() {
                    for t in 0..d {
                        m[(rp.start + t, rq.start + t)] = blocks[i][(p, q)];
                    }
                }
            }
        }
        m
    }

    pub fn to_blocks(&self, a: &GroupAlgebraElement, tol: f64) -> Result<BlockEffect> {
        let m = self.conjugated(a)?;
        BlockEffect::from_matrices(self.blocks_of(&m), tol)
    }

    /// The intertwining operator `Q (⊕ Eᵢ ⊗ I) Q*` for a block effect.
    pub fn operator_from_blocks(&self, b: &BlockEffect) -> Result<CMatrix> {
        let layout = self.layout();
        if b.layout() != layout {
            return Err(Error::LayoutMismatch {
                left: b.layout(),
                right: layout,
            });
        }
        let mats: Vec<CMatrix> = b.blocks().iter().map(|e| e.matrix().clone()).collect();
        let q = self.catalog.basis_change();
        Ok(q * self.assemble(&mats) * q.adjoint())
    }

    pub fn from_blocks(&self, b: &BlockEffect) -> Result<GroupAlgebraElement> {
        let op = self.operator_from_blocks(b)?;
        Ok(GroupAlgebraElement::from_operator_at_unit(
            self.catalog.group(),
            &op,
        ))
    }

    /// An effect in `C[G]` drawn uniformly-ish through the block form.
    pub fn random_effect<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupAlgebraElement {
        let b = BlockEffect::random(&self.layout(), rng);
        self.from_blocks(&b).expect("layout matches")
    }
}

/// The positive square root of a positive block effect, blockwise.
pub fn block_sqrt(b: &BlockEffect) -> BlockEffect {
    BlockEffect::new(
        b.blocks()
            .iter()
            .map(|e| HermitianEffect::clamped(&linalg::psd_sqrt(e.matrix())))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::{PartialSum, EFFECT_TOL};
    use crate::irreps::{decompose_irreps, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn dirac_convolution_follows_the_table() {
        let g = FiniteGroup::symmetric(3).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                let p = GroupAlgebraElement::dirac(&g, x)
                    .convolve(&GroupAlgebraElement::dirac(&g, y))
                    .unwrap();
                assert_eq!(p, GroupAlgebraElement::dirac(&g, g.mul(x, y)));
            }
        }
    }

    #[test]
    fn unit_and_commutativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = FiniteGroup::cyclic(4).unwrap();
        let a = GroupAlgebraElement::random(&g, &mut rng);
        let b = GroupAlgebraElement::random(&g, &mut rng);
        let e = GroupAlgebraElement::unit(&g);
        assert_eq!(a.convolve(&e).unwrap(), a);
        assert_eq!(e.convolve(&a).unwrap(), a);
        assert!(
            a.convolve(&b)
                .unwrap()
                .max_abs_diff(&b.convolve(&a).unwrap())
                < 1e-14
        );
        let other = FiniteGroup::cyclic(3).unwrap();
        assert!(matches!(
            a.convolve(&GroupAlgebraElement::unit(&other)),
            Err(Error::GroupMismatch)
        ));
    }

    #[test]
    fn right_mult_examples() {
        let g = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(
            GroupAlgebraElement::unit(&g).right_mult_operator(),
            linalg::identity(8)
        );
        let x = 5;
        let r = GroupAlgebraElement::dirac(&g, x).right_mult_operator();
        for h in g.elements() {
            for k in g.elements() {
                let expected = if k == g.mul(h, x) {
                    linalg::ONE
                } else {
                    linalg::ZERO
                };
                assert_eq!(r[(k, h)], expected);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = GroupAlgebraElement::random(&g, &mut rng);
        assert!(UnitaryRep::regular(&g).intertwining_residual(&a.right_mult_operator()) < 1e-13);
        // operators realise convolution
        let b = GroupAlgebraElement::random(&g, &mut rng);
        let via_op = a.left_mult_operator() * CMatrix::from_column_slice(8, 1, b.coeffs());
        let direct = a.convolve(&b).unwrap();
        for k in 0..8 {
            assert!((via_op[(k, 0)] - direct.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn effect_operator_correspondence() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let half = GroupAlgebraElement::unit(&g).scale(c(0.5));
        let eps = effect_in_algebra_to_operator(&half, EFFECT_TOL).unwrap();
        assert!(linalg::max_abs_diff(&eps, &linalg::identity(4).scale(0.5)) < 1e-15);
        assert_eq!(
            operator_to_effect_in_algebra(&g, &eps, EFFECT_TOL).unwrap(),
            half
        );

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let eps = random_intertwining_effect(&g, &mut rng);
            let a = operator_to_effect_in_algebra(&g, &eps, 1e-9).unwrap();
            let back = effect_in_algebra_to_operator(&a, 1e-9).unwrap();
            assert!(linalg::max_abs_diff(&back, &eps) <= 1e-10);
        }
        let not_effect = GroupAlgebraElement::unit(&g).scale(c(2.0));
        assert!(matches!(
            effect_in_algebra_to_operator(&not_effect, 1e-9),
            Err(Error::NotAnEffect(_))
        ));
        let mut swap = CMatrix::zeros(4, 4);
        swap[(0, 0)] = linalg::ONE;
        assert!(matches!(
            operator_to_effect_in_algebra(&g, &swap, 1e-9),
            Err(Error::NotIntertwining(_))
        ));
    }

    #[test]
    fn comultiplications() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let ones = vec![linalg::ONE; 6];
        assert!(comult_function_algebra(&g, &ones)
            .iter()
            .all(|z| *z == linalg::ONE));
        for x in g.elements() {
            let d = comult_group_algebra(&GroupAlgebraElement::dirac(&g, x)).unwrap();
            assert_eq!(d.group().order(), 36);
            assert_eq!(d, GroupAlgebraElement::dirac(d.group(), x * 6 + x));
            assert_eq!(
                group_coassociativity_residual(&GroupAlgebraElement::dirac(&g, x)),
                0.0
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = GroupAlgebraElement::random(&g, &mut rng);
        assert_eq!(function_coassociativity_residual(&g, a.coeffs()), 0.0);
        assert_eq!(group_coassociativity_residual(&a), 0.0);
    }

    #[test]
    fn hilbert_axioms_on_s3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let cfg = SampleConfig::new(40, 5, 1e-10);
        let ws = hilbert_algebra_witnesses(&g, &cfg).unwrap();
        for w in &ws {
            assert!(w.residual <= 1e-10, "{} = {}", w.label, w.residual);
        }
        let sym = ws
            .iter()
            .find(|w| w.label == "inner_conjugate_symmetry")
            .unwrap();
        assert!(sym.residual <= 1e-12);
    }

    #[test]
    fn block_iso_layouts() {
        let trivial = decompose_irreps(&FiniteGroup::cyclic(1).unwrap(), 1, DEFAULT_TOL).unwrap();
        assert_eq!(EffectBlockIso::new(&trivial).layout(), vec![1]);
        let z2 = decompose_irreps(&FiniteGroup::cyclic(2).unwrap(), 1, DEFAULT_TOL).unwrap();
        let iso = EffectBlockIso::new(&z2);
        assert_eq!(iso.layout(), vec![1, 1]);
        // a = x δ_e + y δ_g: blocks are the character values x + y and x − y
        let g = z2.group();
        let a = GroupAlgebraElement::new(g, vec![c(0.5), c(0.2)]).unwrap();
        let b = iso.to_blocks(&a, EFFECT_TOL).unwrap();
        assert!((b.blocks()[0].matrix()[(0, 0)].re - 0.7).abs() < 1e-14);
        assert!((b.blocks()[1].matrix()[(0, 0)].re - 0.3).abs() < 1e-14);
        let s3 = decompose_irreps(&FiniteGroup::symmetric(3).unwrap(), 1, DEFAULT_TOL).unwrap();
        assert_eq!(EffectBlockIso::new(&s3).layout(), vec![1, 1, 2]);
    }

    #[test]
    fn block_iso_is_an_effect_module_isomorphism() {
        let cat = decompose_irreps(&FiniteGroup::symmetric(3).unwrap(), 2, DEFAULT_TOL).unwrap();
        let iso = EffectBlockIso::new(&cat);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let layout = iso.layout();
        for _ in 0..30 {
            let x = BlockEffect::random(&layout, &mut rng);
            let a = iso.from_blocks(&x).unwrap();
            assert!(a.is_effect(1e-9));
            assert!(iso.block_form_residual(&a).unwrap() < 1e-12);
            assert!(iso.to_blocks(&a, 1e-9).unwrap().max_abs_diff(&x) < 1e-12);
            let back = iso.from_blocks(&iso.to_blocks(&a, 1e-9).unwrap()).unwrap();
            assert!(back.max_abs_diff(&a) < 1e-12);

            let y = BlockEffect::random(&layout, &mut rng)
                .scalar_mul(0.4)
                .unwrap();
            let x = x.scalar_mul(0.5).unwrap();
            let (ax, ay) = (iso.from_blocks(&x).unwrap(), iso.from_blocks(&y).unwrap());
            match x.partial_add(&y).unwrap() {
                PartialSum::Defined(s) => {
                    let sum = ax.add(&ay).unwrap();
                    assert!(iso.to_blocks(&sum, 1e-9).unwrap().max_abs_diff(&s) < 1e-12);
                }
                PartialSum::Undefined => panic!("0.5 + 0.4 ≤ 1 always defined"),
            }
        }
        assert!(
            iso.to_blocks(&GroupAlgebraElement::unit(cat.group()), 1e-9)
                .unwrap()
                .max_abs_diff(&BlockEffect::one(&layout))
                < 1e-12
        );
        let not_effect = GroupAlgebraElement::dirac(cat.group(), 1);
        assert!(iso.to_blocks(&not_effect, 1e-9).is_err());
    }

    #[test]
    fn positive_square_root_at_the_unit() {
        let cat = decompose_irreps(&FiniteGroup::dihedral(4).unwrap(), 3, DEFAULT_TOL).unwrap();
        let iso = EffectBlockIso::new(&cat);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let a = iso.random_effect(&mut rng);
            let root = block_sqrt(&iso.to_blocks(&a, 1e-9).unwrap());
            let s = iso.from_blocks(&root).unwrap();
            assert!(s.convolve(&s).unwrap().max_abs_diff(&a) < 1e-9);
        }
    }
}
