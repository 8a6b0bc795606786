//! Effect-module structure on Hermitian matrices and finite block products.
//!
//! An effect is a Hermitian matrix between 0 and 1 in the Löwner order. A
//! [`BlockEffect`] is a tuple of effects, one per block, with the operations
//! applied blockwise. Partial addition returns [`PartialSum::Undefined`]
//! rather than an error when the sum leaves the unit interval.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::Witness;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};

/// Eigenvalue slack accepted by the effect tests.
pub const EFFECT_TOL: f64 = 1e-9;

/// Hermitian within `tol` and spectrum inside `[−tol, 1 + tol]`.
pub fn is_effect(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() || m.iter().any(|z| !z.is_finite()) {
        return false;
    }
    if linalg::hermitian_residual(m) > tol {
        return false;
    }
    let spec = linalg::hermitian_eigenvalues(m);
    spec.iter().all(|&x| x >= -tol && x <= 1.0 + tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianEffect {
    matrix: CMatrix,
}

impl HermitianEffect {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        if !is_effect(&matrix, tol) {
            return Err(Error::NotAnEffect(format!(
                "{}×{} matrix is not Hermitian with spectrum in [0, 1]",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(HermitianEffect { matrix })
    }

    /// Nearest effect: Hermitian part with eigenvalues clamped to `[0, 1]`.
    pub fn clamped(matrix: &CMatrix) -> Self {
        HermitianEffect {
            matrix: linalg::clamp_spectrum(matrix, 0.0, 1.0),
        }
    }

    pub fn scalar(dim: usize, r: f64) -> Self {
        HermitianEffect {
            matrix: linalg::identity(dim).scale(r),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::scalar(dim, 0.0)
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    /// `U diag(λ) U*` with Haar-random `U` and `λ` uniform in `[0, 1]`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let u = linalg::random_unitary(dim, rng);
        let mut scaled = u.clone();
        for j in 0..dim {
            let lambda: f64 = rng.random();
            scaled.column_mut(j).scale_mut(lambda);
        }
        HermitianEffect {
            matrix: linalg::hermitian_part(&(&scaled * u.adjoint())),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

/// Outcome of `a ⊞ b`.
#[derive(Clone, Debug, PartialEq)]
pub enum PartialSum {
    Defined(BlockEffect),
    Undefined,
}

impl PartialSum {
    pub fn is_defined(&self) -> bool {
        matches!(self, PartialSum::Defined(_))
    }

    pub fn defined(self) -> Option<BlockEffect> {
        match self {
            PartialSum::Defined(e) => Some(e),
            PartialSum::Undefined => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockEffect {
    blocks: Vec<HermitianEffect>,
}

/// `{ "layout": [d1, ...], "blocks": [[[re, im], ...], ...] }`, each block
/// row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockEffectJson {
    pub layout: Vec<usize>,
    pub blocks: Vec<Vec<[f64; 2]>>,
}

impl BlockEffect {
    pub fn new(blocks: Vec<HermitianEffect>) -> Self {
        BlockEffect { blocks }
    }

    pub fn from_matrices(matrices: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let blocks = matrices
            .into_iter()
            .map(|m| HermitianEffect::new(m, tol))
            .collect::<Result<_>>()?;
        Ok(BlockEffect { blocks })
    }

    pub fn scalar(layout: &[usize], r: f64) -> Self {
        BlockEffect {
            blocks: layout
                .iter()
                .map(|&d| HermitianEffect::scalar(d, r))
                .collect(),
        }
    }

    pub fn zero(layout: &[usize]) -> Self {
        Self::scalar(layout, 0.0)
    }

    pub fn one(layout: &[usize]) -> Self {
        Self::scalar(layout, 1.0)
    }

    pub fn random<R: Rng + ?Sized>(layout: &[usize], rng: &mut R) -> Self {
        BlockEffect {
            blocks: layout
                .iter()
                .map(|&d| HermitianEffect::random(d, rng))
                .collect(),
        }
    }

    pub fn layout(&self) -> Vec<usize> {
        self.blocks.iter().map(HermitianEffect::dim).collect()
    }

    pub fn blocks(&self) -> &[HermitianEffect] {
        &self.blocks
    }

    fn check_layout(&self, other: &BlockEffect) -> Result<()> {
        if self.layout() != other.layout() {
            return Err(Error::LayoutMismatch {
                left: self.layout(),
                right: other.layout(),
            });
        }
        Ok(())
    }

    pub fn partial_add(&self, other: &BlockEffect) -> Result<PartialSum> {
        self.partial_add_with_tol(other, EFFECT_TOL)
    }

    pub fn partial_add_with_tol(&self, other: &BlockEffect, tol: f64) -> Result<PartialSum> {
        self.check_layout(other)?;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let sum = &a.matrix + &b.matrix;
            if !is_effect(&sum, tol) {
                return Ok(PartialSum::Undefined);
            }
            blocks.push(HermitianEffect { matrix: sum });
        }
        Ok(PartialSum::Defined(BlockEffect { blocks }))
    }

    pub fn orthocomplement(&self) -> BlockEffect {
        BlockEffect {
            blocks: self
                .blocks
                .iter()
                .map(|b| HermitianEffect {
                    matrix: linalg::identity(b.dim()) - &b.matrix,
                })
                .collect(),
        }
    }

    pub fn scalar_mul(&self, r: f64) -> Result<BlockEffect> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidPoint(format!("scalar {r} outside [0, 1]")));
        }
        Ok(BlockEffect {
            blocks: self
                .blocks
                .iter()
                .map(|b| HermitianEffect {
                    matrix: b.matrix.scale(r),
                })
                .collect(),
        })
    }

    /// `sup_σ |σ(a) − σ(b)|`, which for block matrix algebras is the largest
    /// spectral norm of a blockwise difference.
    pub fn distance(&self, other: &BlockEffect) -> Result<f64> {
        self.check_layout(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| linalg::hermitian_norm(&(&a.matrix - &b.matrix)))
            .fold(0.0, f64::max))
    }

    /// Largest entrywise difference; used for residual bookkeeping.
    pub fn max_abs_diff(&self, other: &BlockEffect) -> f64 {
        if self.layout() != other.layout() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| linalg::max_abs_diff(&a.matrix, &b.matrix))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> BlockEffectJson {
        BlockEffectJson {
            layout: self.layout(),
            blocks: self
                .blocks
                .iter()
                .map(|b| linalg::to_pairs(&b.matrix))
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data")
    }

    pub fn from_json(json: &BlockEffectJson, tol: f64) -> Result<Self> {
        if json.layout.len() != json.blocks.len() {
            return Err(Error::InvalidPoint(format!(
                "layout lists {} blocks but {} are given",
                json.layout.len(),
                json.blocks.len()
            )));
        }
        let mut blocks = Vec::with_capacity(json.blocks.len());
        for (&d, pairs) in json.layout.iter().zip(&json.blocks) {
            if d.checked_mul(d) != Some(pairs.len()) {
                return Err(Error::DimMismatch {
                    expected: d,
                    actual: pairs.len(),
                });
            }
            blocks.push(HermitianEffect::new(linalg::from_pairs(pairs)?, tol)?);
        }
        Ok(BlockEffect { blocks })
    }

    pub fn from_json_str(text: &str, tol: f64) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?, tol)
    }
}

/// Sampled residuals for every effect-module axiom on the given layout.
///
/// Definedness disagreements count as residual 1.
pub fn effect_module_law_witnesses<R: Rng + ?Sized>(
    layout: &[usize],
    samples: usize,
    rng: &mut R,
) -> Vec<Witness> {
    let zero = BlockEffect::zero(layout);
    let one = BlockEffect::one(layout);
    let mut worst = LawResiduals::default();
    let mut defined_count = 0usize;

    let draw = |rng: &mut R| {
        // mix full-range effects with shrunken ones so that ⊞ is defined often
        let e = BlockEffect::random(layout, rng);
        let shrink: f64 = if rng.random_bool(0.5) {
            rng.random_range(0.0..0.5)
        } else {
            1.0
        };
        e.scalar_mul(shrink).expect("shrink in [0, 1]")
    };

    for _ in 0..samples {
        let (a, b, c) = (draw(rng), draw(rng), draw(rng));
        let r: f64 = rng.random();
        let s: f64 = rng.random::<f64>() * (1.0 - r);

        let ab = a.partial_add(&b).expect("same layout");
        let ba = b.partial_add(&a).expect("same layout");
        worst.commutativity = worst.commutativity.max(match (&ab, &ba) {
            (PartialSum::Defined(x), PartialSum::Defined(y)) => x.max_abs_diff(y),
            (PartialSum::Undefined, PartialSum::Undefined) => 0.0,
            _ => 1.0,
        });

        if let PartialSum::Defined(ab) = &ab {
            defined_count += 1;
            if let PartialSum::Defined(ab_c) = ab.partial_add(&c).expect("same layout") {
                let res = match b.partial_add(&c).expect("same layout") {
                    PartialSum::Defined(bc) => match a.partial_add(&bc).expect("same layout") {
                        PartialSum::Defined(a_bc) => ab_c.max_abs_diff(&a_bc),
                        PartialSum::Undefined => 1.0,
                    },
                    PartialSum::Undefined => 1.0,
                };
                worst.associativity = worst.associativity.max(res);
            }
            let scaled_sum = ab.scalar_mul(r).expect("r in [0, 1]");
            let sum_scaled = a
                .scalar_mul(r)
                .and_then(|x| x.partial_add(&b.scalar_mul(r)?))
                .expect("valid operands");
            worst.scalar_distributes_over_sum =
                worst.scalar_distributes_over_sum.max(match sum_scaled {
                    PartialSum::Defined(x) => x.max_abs_diff(&scaled_sum),
                    PartialSum::Undefined => 1.0,
                });
        }

        let unit_res = match (a.partial_add(&zero).unwrap(), zero.partial_add(&a).unwrap()) {
            (PartialSum::Defined(x), PartialSum::Defined(y)) => {
                x.max_abs_diff(&a).max(y.max_abs_diff(&a))
            }
            _ => 1.0,
        };
        worst.zero_unit = worst.zero_unit.max(unit_res);

        let perp = a.orthocomplement();
        worst.orthocomplement_sum =
            worst
                .orthocomplement_sum
                .max(match a.partial_add(&perp).unwrap() {
                    PartialSum::Defined(x) => x.max_abs_diff(&one),
                    PartialSum::Undefined => 1.0,
                });
        worst.orthocomplement_involution = worst
            .orthocomplement_involution
            .max(perp.orthocomplement().max_abs_diff(&a));
        // uniqueness: any b with a ⊞ b = 1 must be a^⊥
        if let PartialSum::Defined(x) = a.partial_add(&b).unwrap() {
            if x.max_abs_diff(&one) <= EFFECT_TOL && b.max_abs_diff(&perp) > EFFECT_TOL {
                worst.orthocomplement_unique = 1.0;
            }
        }
        let nudged = perp.scalar_mul(1.0 - 1e-3 * rng.random::<f64>()).unwrap();
        if let PartialSum::Defined(x) = a.partial_add(&nudged).unwrap() {
            if x.max_abs_diff(&one) <= EFFECT_TOL {
                worst.orthocomplement_unique = 1.0;
            }
        }

        // a ⊞ 1 defined forces a = 0
        for cand in [&a, &zero, &a.scalar_mul(1e-12).unwrap()] {
            if cand.partial_add(&one).unwrap().is_defined() {
                worst.one_absorbs = worst
                    .one_absorbs
                    .max((cand.max_abs_diff(&zero) - EFFECT_TOL).max(0.0));
            }
        }

        let r_s_a = a.scalar_mul(s).and_then(|x| x.scalar_mul(r)).unwrap();
        worst.scalar_associative = worst
            .scalar_associative
            .max(r_s_a.max_abs_diff(&a.scalar_mul(r * s).unwrap()));

        let split = a
            .scalar_mul(r)
            .unwrap()
            .partial_add(&a.scalar_mul(s).unwrap())
            .unwrap();
        worst.scalar_distributes_over_scalars =
            worst.scalar_distributes_over_scalars.max(match split {
                PartialSum::Defined(x) => x.max_abs_diff(&a.scalar_mul(r + s).unwrap()),
                PartialSum::Undefined => 1.0,
            });

        worst.scalar_unit = worst
            .scalar_unit
            .max(a.scalar_mul(1.0).unwrap().max_abs_diff(&a));

        let dab = a.distance(&b).unwrap();
        let dba = b.distance(&a).unwrap();
        let dac = a.distance(&c).unwrap();
        let dcb = c.distance(&b).unwrap();
        worst.metric_symmetry = worst.metric_symmetry.max((dab - dba).abs());
        worst.metric_triangle = worst.metric_triangle.max((dab - dac - dcb).max(0.0));
        worst.metric_identity = worst.metric_identity.max(a.distance(&a).unwrap());
    }

    let mut out = worst.into_witnesses();
    out.push(
        Witness::flag("definedness_exercised", defined_count > 0)
            .with_detail(format!("{defined_count} of {samples} sampled sums defined")),
    );
    out
}

#[derive(Default)]
struct LawResiduals {
    commutativity: f64,
    associativity: f64,
    zero_unit: f64,
    orthocomplement_sum: f64,
    orthocomplement_unique: f64,
    orthocomplement_involution: f64,
    one_absorbs: f64,
    scalar_associative: f64,
    scalar_distributes_over_scalars: f64,
    scalar_distributes_over_sum: f64,
    scalar_unit: f64,
    metric_symmetry: f64,
    metric_triangle: f64,
    metric_identity: f64,
}

impl LawResiduals {
    fn into_witnesses(self) -> Vec<Witness> {
        vec![
            Witness::new("commutativity", self.commutativity),
            Witness::new("associativity", self.associativity),
            Witness::new("zero_unit", self.zero_unit),
            Witness::new("orthocomplement_sum", self.orthocomplement_sum),
            Witness::new("orthocomplement_unique", self.orthocomplement_unique),
            Witness::new(
                "orthocomplement_involution",
                self.orthocomplement_involution,
            ),
            Witness::new("one_absorbs", self.one_absorbs),
            Witness::new("scalar_associative", self.scalar_associative),
            Witness::new(
                "scalar_distributes_over_scalars",
                self.scalar_distributes_over_scalars,
            ),
            Witness::new(
                "scalar_distributes_over_sum",
                self.scalar_distributes_over_sum,
            ),
            Witness::new("scalar_unit", self.scalar_unit),
            Witness::new("metric_symmetry", self.metric_symmetry),
            Witness::new("metric_triangle", self.metric_triangle),
            Witness::new("metric_identity", self.metric_identity),
        ]
    }
}

/// A 1×1 block holding the scalar `r`.
pub fn scalar_block(r: f64) -> CMatrix {
    CMatrix::from_element(1, 1, C64::new(r, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    #[test]
    fn is_effect_examples() {
        assert!(is_effect(&CMatrix::zeros(3, 3), EFFECT_TOL));
        assert!(is_effect(&linalg::identity(3), EFFECT_TOL));
        assert!(!is_effect(&diag(&[1.5, 0.0]), EFFECT_TOL));
        assert!(!is_effect(&diag(&[-0.1, 0.5]), EFFECT_TOL));
        let mut skew = linalg::identity(2).scale(0.5);
        skew[(0, 1)] = C64::new(0.1, 0.0);
        assert!(!is_effect(&skew, EFFECT_TOL));
        assert!(!is_effect(&CMatrix::zeros(2, 3), EFFECT_TOL));
    }

    #[test]
    fn partial_add_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let layout = [1, 1, 2];
        let a = BlockEffect::random(&layout, &mut rng);
        let zero = BlockEffect::zero(&layout);
        assert_eq!(
            a.partial_add(&zero).unwrap(),
            PartialSum::Defined(a.clone())
        );
        let sum = a
            .partial_add(&a.orthocomplement())
            .unwrap()
            .defined()
            .unwrap();
        assert!(sum.max_abs_diff(&BlockEffect::one(&layout)) < 1e-15);
        let seven = BlockEffect::scalar(&layout, 0.7);
        assert_eq!(seven.partial_add(&seven).unwrap(), PartialSum::Undefined);
        assert!(matches!(
            a.partial_add(&BlockEffect::zero(&[1, 1])),
            Err(Error::LayoutMismatch { .. })
        ));
    }

    #[test]
    fn orthocomplement_examples() {
        let layout = [2, 1];
        assert_eq!(
            BlockEffect::zero(&layout).orthocomplement(),
            BlockEffect::one(&layout)
        );
        let third = BlockEffect::from_matrices(vec![scalar_block(0.3)], EFFECT_TOL).unwrap();
        let perp = third.orthocomplement();
        assert!((perp.blocks()[0].matrix()[(0, 0)].re - 0.7).abs() < 1e-15);
        assert!(perp.orthocomplement().max_abs_diff(&third) < 1e-15);
    }

    #[test]
    fn scalar_mul_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = BlockEffect::random(&[2, 3], &mut rng);
        assert_eq!(a.scalar_mul(1.0).unwrap(), a);
        assert_eq!(
            a.scalar_mul(0.0)
                .unwrap()
                .max_abs_diff(&BlockEffect::zero(&[2, 3])),
            0.0
        );
        let half = BlockEffect::one(&[2]).scalar_mul(0.5).unwrap();
        assert_eq!(half.blocks()[0].matrix(), &diag(&[0.5, 0.5]));
        assert!(a.scalar_mul(1.5).is_err());
        assert!(a.scalar_mul(-0.1).is_err());
    }

    #[test]
    fn distance_examples() {
        let layout = [1, 2];
        let d = BlockEffect::zero(&layout)
            .distance(&BlockEffect::one(&layout))
            .unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let a = BlockEffect::from_matrices(vec![scalar_block(0.2)], EFFECT_TOL).unwrap();
        let b = BlockEffect::from_matrices(vec![scalar_block(0.65)], EFFECT_TOL).unwrap();
        assert!((a.distance(&b).unwrap() - 0.45).abs() < 1e-15);
    }

    #[test]
    fn distance_dominates_sampled_states() {
        // oracle: |tr(ρ(a − b))| over sampled density matrices lower-bounds
        // the supremum and gets close to it
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let a = BlockEffect::random(&[2], &mut rng);
        let b = BlockEffect::random(&[2], &mut rng);
        let delta = a.blocks()[0].matrix() - b.blocks()[0].matrix();
        let d = a.distance(&b).unwrap();
        let mut best = 0.0f64;
        for _ in 0..10_000 {
            // pure states: the supremum is attained at an eigenvector
            let m = linalg::random_complex(2, 1, &mut rng);
            let rho = &m * m.adjoint();
            let rho = rho.unscale(linalg::trace(&rho).re);
            let val = linalg::trace(&(&rho * &delta)).re.abs();
            assert!(val <= d + 1e-12);
            best = best.max(val);
        }
        assert!(d - best <= 1e-3, "sup {d} vs sampled {best}");
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = BlockEffect::random(&[1, 1, 2], &mut rng);
        let back = BlockEffect::from_json_str(&a.to_json_string(), EFFECT_TOL).unwrap();
        assert_eq!(back, a);
        assert!(
            BlockEffect::from_json_str(r#"{"layout":[1],"blocks":[[[1.5,0.0]]]}"#, EFFECT_TOL)
                .is_err()
        );
        assert!(
            BlockEffect::from_json_str(r#"{"layout":[2],"blocks":[[[1.0,0.0]]]}"#, EFFECT_TOL)
                .is_err()
        );
        assert!(BlockEffect::from_json_str(
            r#"{"layout":[1,1],"blocks":[[[1.0,0.0]]]}"#,
            EFFECT_TOL
        )
        .is_err());
    }

    #[test]
    fn law_suite_is_clean() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let witnesses = effect_module_law_witnesses(&[1, 1, 2], 100, &mut rng);
        for w in &witnesses {
            assert!(w.residual <= 1e-10, "{} = {}", w.label, w.residual);
        }
    }
}
