//! Finite-dimensional convex spaces as concrete data.
//!
//! Simplices `D(n)`, density-matrix spaces `DM(ℂ^d)`, and finite coproducts
//! of these. A coproduct point is stored intrinsically as a weight vector and
//! one part per component of positive weight; [`CoproductPoint::ambient`]
//! gives the equivalent embedding `(r₁x₁, …, r_kx_k, r₁, …, r_k)`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::effect::HermitianEffect;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};

/// Components whose weight is at or below this are dropped.
pub const ZERO_WEIGHT: f64 = 1e-12;
/// Slack for point validation (weights, trace, positivity).
pub const POINT_TOL: f64 = 1e-9;

/// A point of a convex space equipped with a metric for residuals.
pub trait ConvexPoint: Sized {
    /// `λ·self + (1 − λ)·other`.
    fn combine(&self, lambda: f64, other: &Self) -> Result<Self>;
    fn distance(&self, other: &Self) -> f64;
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::InvalidPoint(format!(
            "mixing weight {lambda} outside [0, 1]"
        )))
    }
}

impl ConvexPoint for f64 {
    fn combine(&self, lambda: f64, other: &Self) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(lambda * self + (1.0 - lambda) * other)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>, tol: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPoint("empty simplex".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < -tol) {
            return Err(Error::InvalidPoint("negative or non-finite weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidPoint(format!("weights sum to {total}")));
        }
        Ok(SimplexPoint { weights })
    }

    pub fn vertex(n: usize, j: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[j] = 1.0;
        SimplexPoint { weights }
    }

    pub fn uniform(n: usize) -> Self {
        SimplexPoint {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Uniform on the simplex (normalised exponentials).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        SimplexPoint {
            weights: raw.into_iter().map(|x| x / total).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// View as a point of `1 + ⋯ + 1`.
    pub fn to_coproduct(&self) -> CoproductPoint {
        let space = CoproductSpace::simplex_as_coproduct(self.n());
        let parts = self
            .weights
            .iter()
            .map(|&w| (w > ZERO_WEIGHT).then(|| Part::Simplex(SimplexPoint::vertex(1, 0))))
            .collect();
        CoproductPoint::from_parts_unchecked(space, self.weights.clone(), parts)
    }

    pub fn from_coproduct(p: &CoproductPoint) -> Result<Self> {
        if !p.space().components().iter().all(Component::is_one_point) {
            return Err(Error::SpaceMismatch);
        }
        Ok(SimplexPoint {
            weights: p.weights().to_vec(),
        })
    }
}

impl ConvexPoint for SimplexPoint {
    fn combine(&self, lambda: f64, other: &Self) -> Result<Self> {
        check_lambda(lambda)?;
        if self.n() != other.n() {
            return Err(Error::SpaceMismatch);
        }
        Ok(SimplexPoint {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
        })
    }

    fn distance(&self, other: &Self) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `(p ⊗ q)_{(x,y)} = p_x q_y`, pairs in row-major order.
pub fn tensor_simplex(p: &SimplexPoint, q: &SimplexPoint) -> SimplexPoint {
    SimplexPoint {
        weights: p
            .weights
            .iter()
            .flat_map(|&a| q.weights.iter().map(move |&b| a * b))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.is_empty() {
            return Err(Error::InvalidPoint(
                "density matrix must be square and non-empty".into(),
            ));
        }
        if matrix.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidPoint("non-finite entry".into()));
        }
        if linalg::hermitian_residual(&matrix) > tol {
            return Err(Error::InvalidPoint(
                "density matrix is not Hermitian".into(),
            ));
        }
        let tr = linalg::trace(&matrix).re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidPoint(format!("trace {tr} ≠ 1")));
        }
        let min = linalg::hermitian_eigenvalues(&matrix)[0];
        if min < -tol {
            return Err(Error::InvalidPoint(format!("negative eigenvalue {min}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Normalise a positive semidefinite matrix: Hermitian part, negative
    /// eigenvalues clamped to zero, trace scaled to one.
    pub fn from_psd(m: &CMatrix) -> Result<Self> {
        let clamped = linalg::clamp_spectrum(m, 0.0, f64::INFINITY);
        let tr = linalg::trace(&clamped).re;
        if !(tr > 0.0) {
            return Err(Error::InvalidPoint("zero trace".into()));
        }
        Ok(DensityMatrix {
            matrix: clamped.unscale(tr),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: linalg::identity(dim).unscale(dim as f64),
        }
    }

    /// `|ψ⟩⟨ψ|` for a non-zero vector, normalised.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let v = CMatrix::from_column_slice(psi.len(), 1, psi);
        Self::from_psd(&(&v * v.adjoint()))
    }

    /// Normalised `M M*` for a complex Gaussian `M`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let m = linalg::random_complex(dim, dim, rng);
        let p = linalg::hermitian_part(&(&m * m.adjoint()));
        let tr = linalg::trace(&p).re;
        DensityMatrix {
            matrix: p.unscale(tr),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

impl ConvexPoint for DensityMatrix {
    fn combine(&self, lambda: f64, other: &Self) -> Result<Self> {
        check_lambda(lambda)?;
        if self.dim() != other.dim() {
            return Err(Error::SpaceMismatch);
        }
        Ok(DensityMatrix {
            matrix: self.matrix.scale(lambda) + other.matrix.scale(1.0 - lambda),
        })
    }

    fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}

/// Deterministic random density matrix for `seed`.
pub fn sample_density_matrix(dim: usize, seed: u64) -> DensityMatrix {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    DensityMatrix::random(dim, &mut rng)
}

/// `tr(ρa)`, snapped into `[0, 1]` when within `tol` of the boundary.
pub fn dm_effect_pairing(rho: &DensityMatrix, a: &HermitianEffect, tol: f64) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            actual: a.dim(),
        });
    }
    let v = linalg::trace(&(rho.matrix() * a.matrix())).re;
    if v < -tol || v > 1.0 + tol {
        return Err(Error::InvalidPoint(format!("pairing {v} outside [0, 1]")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Kind of a coproduct summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Simplex(usize),
    Density(usize),
}

impl Component {
    pub fn is_one_point(&self) -> bool {
        matches!(self, Component::Simplex(1) | Component::Density(1))
    }

    /// Number of ambient coordinates (complex for density matrices).
    fn ambient_len(&self) -> usize {
        match *self {
            Component::Simplex(n) => n,
            Component::Density(d) => d * d,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Part {
        match *self {
            Component::Simplex(n) => Part::Simplex(SimplexPoint::random(n, rng)),
            Component::Density(d) => Part::Density(DensityMatrix::random(d, rng)),
        }
    }

    fn base_point(&self) -> Part {
        match *self {
            Component::Simplex(n) => Part::Simplex(SimplexPoint::vertex(n, 0)),
            Component::Density(d) => Part::Density(DensityMatrix::maximally_mixed(d)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductSpace {
    components: Vec<Component>,
}

impl CoproductSpace {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidPoint(
                "coproduct needs at least one component".into(),
            ));
        }
        if components
            .iter()
            .any(|c| matches!(c, Component::Simplex(0) | Component::Density(0)))
        {
            return Err(Error::InvalidPoint("empty component".into()));
        }
        Ok(CoproductSpace { components })
    }

    /// `DM(ℂ^{d₁}) + ⋯ + DM(ℂ^{d_k})`.
    pub fn density(dims: &[usize]) -> Result<Self> {
        Self::new(dims.iter().map(|&d| Component::Density(d)).collect())
    }

    /// `D(n)` realised as `1 + ⋯ + 1`.
    pub fn simplex_as_coproduct(n: usize) -> Self {
        CoproductSpace {
            components: vec![Component::Simplex(1); n.max(1)],
        }
    }

    /// `D(n) ⊗ X ≅ X + ⋯ + X` (n copies, copy-major).
    pub fn repeated(&self, n: usize) -> Self {
        CoproductSpace {
            components: (0..n)
                .flat_map(|_| self.components.iter().copied())
                .collect(),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `i_j(part)`: the point with all weight on component `j`.
    pub fn inject(&self, j: usize, part: Part) -> Result<CoproductPoint> {
        let mut weights = vec![0.0; self.len()];
        *weights.get_mut(j).ok_or(Error::SpaceMismatch)? = 1.0;
        let mut parts = vec![None; self.len()];
        parts[j] = Some(part);
        CoproductPoint::new(self.clone(), weights, parts, POINT_TOL)
    }

    /// Vertex `j`, using the canonical base point of component `j`.
    pub fn vertex(&self, j: usize) -> CoproductPoint {
        self.inject(j, self.components[j].base_point())
            .expect("base point fits")
    }

    /// A random point: random weights, random parts.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CoproductPoint {
        let w = SimplexPoint::random(self.len(), rng);
        self.sample_with_weights(w.weights().to_vec(), rng)
    }

    pub(crate) fn sample_with_weights<R: Rng + ?Sized>(
        &self,
        weights: Vec<f64>,
        rng: &mut R,
    ) -> CoproductPoint {
        let parts = self
            .components
            .iter()
            .zip(&weights)
            .map(|(c, &w)| {
                let part = c.sample(rng);
                (w > ZERO_WEIGHT).then_some(part)
            })
            .collect();
        CoproductPoint::from_parts_unchecked(self.clone(), weights, parts)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Part {
    Simplex(SimplexPoint),
    Density(DensityMatrix),
}

impl Part {
    fn fits(&self, c: &Component) -> bool {
        match (self, c) {
            (Part::Simplex(p), Component::Simplex(n)) => p.n() == *n,
            (Part::Density(t), Component::Density(d)) => t.dim() == *d,
            _ => false,
        }
    }

    pub fn as_density(&self) -> Option<&DensityMatrix> {
        match self {
            Part::Density(t) => Some(t),
            Part::Simplex(_) => None,
        }
    }

    fn push_scaled(&self, r: f64, out: &mut Vec<C64>) {
        match self {
            Part::Simplex(p) => out.extend(p.weights().iter().map(|&w| C64::new(r * w, 0.0))),
            Part::Density(t) => out.extend(t.matrix().iter().map(|z| z * r)),
        }
    }

    /// `(a·self + b·other) / (a + b)` for non-negative `a`, `b`.
    fn mix(a: f64, x: Option<&Part>, b: f64, y: Option<&Part>) -> Result<Part> {
        let total = a + b;
        match (x, y) {
            (Some(x), None) => Ok(x.clone()),
            (None, Some(y)) => Ok(y.clone()),
            (Some(Part::Simplex(x)), Some(Part::Simplex(y))) => {
                Ok(Part::Simplex(x.combine(a / total, y)?))
            }
            (Some(Part::Density(x)), Some(Part::Density(y))) => {
                Ok(Part::Density(x.combine(a / total, y)?))
            }
            (None, None) => Err(Error::InvalidPoint("no part to mix".into())),
            _ => Err(Error::SpaceMismatch),
        }
    }

    fn distance(&self, other: &Part) -> f64 {
        match (self, other) {
            (Part::Simplex(x), Part::Simplex(y)) => x.distance(y),
            (Part::Density(x), Part::Density(y)) => x.distance(y),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoproductPoint {
    space: CoproductSpace,
    weights: Vec<f64>,
    parts: Vec<Option<Part>>,
}

/// `{ "weights": [...], "parts": { "<i>": <point> } }` where a simplex
/// point is a weight array and a density matrix is row-major `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoproductPointJson {
    pub weights: Vec<f64>,
    pub parts: BTreeMap<String, PartJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartJson {
    Simplex(Vec<f64>),
    Density(Vec<[f64; 2]>),
}

impl CoproductPoint {
    /// Validate weights and parts. Parts supplied at weights `≤ ZERO_WEIGHT`
    /// are discarded; a missing part at positive weight is an error.
    pub fn new(
        space: CoproductSpace,
        weights: Vec<f64>,
        parts: Vec<Option<Part>>,
        tol: f64,
    ) -> Result<Self> {
        if weights.len() != space.len() || parts.len() != space.len() {
            return Err(Error::DimMismatch {
                expected: space.len(),
                actual: weights.len().max(parts.len()),
            });
        }
        SimplexPoint::new(weights.clone(), tol)?;
        let mut kept = Vec::with_capacity(parts.len());
        for ((c, &w), part) in space.components.iter().zip(&weights).zip(parts) {
            if w <= ZERO_WEIGHT {
                kept.push(None);
                continue;
            }
            let part =
                part.ok_or_else(|| Error::InvalidPoint(format!("missing part for weight {w}")))?;
            if !part.fits(c) {
                return Err(Error::SpaceMismatch);
            }
            kept.push(Some(part));
        }
        Ok(CoproductPoint {
            space,
            weights,
            parts: kept,
        })
    }

    pub(crate) fn from_parts_unchecked(
        space: CoproductSpace,
        weights: Vec<f64>,
        parts: Vec<Option<Part>>,
    ) -> Self {
        debug_assert_eq!(weights.len(), parts.len());
        CoproductPoint {
            space,
            weights,
            parts,
        }
    }

    pub fn space(&self) -> &CoproductSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn part(&self, i: usize) -> Option<&Part> {
        self.parts[i].as_ref()
    }

    pub fn parts(&self) -> &[Option<Part>] {
        &self.parts
    }

    /// Embedding `(r₁x₁, …, r_kx_k, r₁, …, r_k)`.
    pub fn ambient(&self) -> Vec<C64> {
        let mut out = Vec::new();
        for ((c, &w), part) in self
            .space
            .components
            .iter()
            .zip(&self.weights)
            .zip(&self.parts)
        {
            match part {
                Some(p) => p.push_scaled(w, &mut out),
                None => out.extend(std::iter::repeat_n(linalg::ZERO, c.ambient_len())),
            }
        }
        out.extend(self.weights.iter().map(|&w| C64::new(w, 0.0)));
        out
    }

    pub fn to_json(&self) -> CoproductPointJson {
        let parts = self
            .parts
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_ref().map(|p| (i, p)))
            .map(|(i, p)| {
                let json = match p {
                    Part::Simplex(s) => PartJson::Simplex(s.weights().to_vec()),
                    Part::Density(t) => PartJson::Density(linalg::to_pairs(t.matrix())),
                };
                (i.to_string(), json)
            })
            .collect();
        CoproductPointJson {
            weights: self.weights.clone(),
            parts,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data")
    }

    pub fn from_json(json: &CoproductPointJson, space: &CoproductSpace, tol: f64) -> Result<Self> {
        let mut parts: Vec<Option<Part>> = vec![None; space.len()];
        for (key, value) in &json.parts {
            let i: usize = key
                .parse()
                .map_err(|_| Error::InvalidPoint(format!("part key `{key}` is not an index")))?;
            let slot = parts
                .get_mut(i)
                .ok_or_else(|| Error::InvalidPoint(format!("part index {i} out of range")))?;
            *slot = Some(match value {
                PartJson::Simplex(w) => Part::Simplex(SimplexPoint::new(w.clone(), tol)?),
                PartJson::Density(pairs) => {
                    Part::Density(DensityMatrix::new(linalg::from_pairs(pairs)?, tol)?)
                }
            });
        }
        CoproductPoint::new(space.clone(), json.weights.clone(), parts, tol)
    }

    pub fn from_json_str(text: &str, space: &CoproductSpace, tol: f64) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?, space, tol)
    }
}

impl ConvexPoint for CoproductPoint {
    /// Weights mix linearly; each part mixes with the induced conditional
    /// weights `λ r_p / (λ r_p + (1 − λ) r_q)`.
    fn combine(&self, lambda: f64, other: &Self) -> Result<Self> {
        check_lambda(lambda)?;
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut weights = Vec::with_capacity(self.weights.len());
        let mut parts = Vec::with_capacity(self.weights.len());
        for i in 0..self.weights.len() {
            let a = lambda * self.weights[i];
            let b = (1.0 - lambda) * other.weights[i];
            let w = a + b;
            weights.push(w);
            if w <= ZERO_WEIGHT {
                parts.push(None);
                continue;
            }
            let x = self.parts[i].as_ref().filter(|_| a > 0.0);
            let y = other.parts[i].as_ref().filter(|_| b > 0.0);
            parts.push(Some(Part::mix(a, x, b, y)?));
        }
        Ok(CoproductPoint {
            space: self.space.clone(),
            weights,
            parts,
        })
    }

    fn distance(&self, other: &Self) -> f64 {
        if self.space != other.space {
            return f64::INFINITY;
        }
        self.ambient()
            .iter()
            .zip(other.ambient())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl CoproductPoint {
    /// Componentwise distance of parts at positive weight, plus weights.
    /// Unlike [`ConvexPoint::distance`] this is not damped by small weights.
    pub fn part_distance(&self, other: &Self) -> f64 {
        if self.space != other.space {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.weights.len() {
            worst = worst.max((self.weights[i] - other.weights[i]).abs());
            if let (Some(x), Some(y)) = (&self.parts[i], &other.parts[i]) {
                worst = worst.max(x.distance(y));
            }
        }
        worst
    }
}

/// `p ⊗ t` in `D(n) ⊗ (X₁ + ⋯ + X_k) ≅ Σ_{x,i} X_i`, copy-major.
pub fn tensor_simplex_coproduct(p: &SimplexPoint, t: &CoproductPoint) -> CoproductPoint {
    let space = t.space.repeated(p.n());
    let mut weights = Vec::with_capacity(space.len());
    let mut parts = Vec::with_capacity(space.len());
    for &px in p.weights() {
        for (w, part) in t.weights.iter().zip(&t.parts) {
            let wx = px * w;
            weights.push(wx);
            parts.push(if wx > ZERO_WEIGHT { part.clone() } else { None });
        }
    }
    CoproductPoint::from_parts_unchecked(space, weights, parts)
}

pub type PartMap<'a, Z> = &'a dyn Fn(&Part) -> Result<Z>;

/// The map out of a coproduct induced by one affine map per component:
/// `Σ r_i x_i ↦ Σ r_i f_i(x_i)`.
pub fn copair<Z: ConvexPoint>(point: &CoproductPoint, maps: &[PartMap<'_, Z>]) -> Result<Z> {
    if maps.len() != point.space.len() {
        return Err(Error::SpaceMismatch);
    }
    let mut acc: Option<(f64, Z)> = None;
    for (i, part) in point.parts.iter().enumerate() {
        let Some(part) = part else { continue };
        let w = point.weights[i];
        let value = maps[i](part)?;
        acc = Some(match acc {
            None => (w, value),
            Some((aw, av)) => {
                let total = aw + w;
                (total, av.combine(aw / total, &value)?)
            }
        });
    }
    acc.map(|(_, z)| z)
        .ok_or_else(|| Error::InvalidPoint("point has no parts".into()))
}

type BoxedMap<'a, X, Y> = Box<dyn Fn(&X) -> Result<Y> + 'a>;

/// A map between convex spaces whose affineness can be sample-checked.
pub struct AffineMapSample<'a, X, Y> {
    pub domain: String,
    pub codomain: String,
    map: BoxedMap<'a, X, Y>,
    residual: Option<f64>,
    tol: f64,
}

impl<'a, X: ConvexPoint, Y: ConvexPoint> AffineMapSample<'a, X, Y> {
    pub fn new(domain: &str, codomain: &str, map: impl Fn(&X) -> Result<Y> + 'a) -> Self {
        AffineMapSample {
            domain: domain.to_string(),
            codomain: codomain.to_string(),
            map: Box::new(map),
            residual: None,
            tol: 0.0,
        }
    }

    pub fn eval(&self, x: &X) -> Result<Y> {
        (self.map)(x)
    }

    /// Worst `‖f(λx + (1−λ)y) − (λf(x) + (1−λ)f(y))‖` over the triples.
    pub fn certify(&mut self, triples: &[(X, X, f64)], tol: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for (x, y, lambda) in triples {
            let lhs = self.eval(&x.combine(*lambda, y)?)?;
            let rhs = self.eval(x)?.combine(*lambda, &self.eval(y)?)?;
            worst = worst.max(lhs.distance(&rhs));
        }
        self.residual = Some(worst);
        self.tol = tol;
        Ok(worst)
    }

    pub fn is_certified(&self) -> bool {
        self.residual.is_some_and(|r| r <= self.tol)
    }

    pub fn residual(&self) -> Option<f64> {
        self.residual
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(2024)
    }

    #[test]
    fn combine_with_lambda_one_is_identity() {
        let mut rng = rng();
        let p = SimplexPoint::random(4, &mut rng);
        let q = SimplexPoint::random(4, &mut rng);
        assert_eq!(p.combine(1.0, &q).unwrap(), p);
        let space = CoproductSpace::density(&[1, 2]).unwrap();
        let x = space.sample(&mut rng);
        let y = space.sample(&mut rng);
        assert!(x.combine(1.0, &y).unwrap().distance(&x) < 1e-15);
        assert!(p.combine(1.5, &q).is_err());
    }

    #[test]
    fn binary_coproduct_matches_ambient_formula() {
        // combining i_X(x) and i_Y(y) with weight r gives (r x, (1−r) y, r)
        let mut rng = rng();
        let space =
            CoproductSpace::new(vec![Component::Density(2), Component::Simplex(3)]).unwrap();
        let x = DensityMatrix::random(2, &mut rng);
        let y = SimplexPoint::random(3, &mut rng);
        let r = 0.3;
        let ix = space.inject(0, Part::Density(x.clone())).unwrap();
        let iy = space.inject(1, Part::Simplex(y.clone())).unwrap();
        let mixed = ix.combine(r, &iy).unwrap();
        assert_eq!(mixed.weights(), &[r, 1.0 - r]);
        assert_eq!(mixed.part(0), Some(&Part::Density(x.clone())));
        assert_eq!(mixed.part(1), Some(&Part::Simplex(y.clone())));
        let mut expected: Vec<C64> = x.matrix().iter().map(|z| z * r).collect();
        expected.extend(y.weights().iter().map(|&w| C64::new((1.0 - r) * w, 0.0)));
        expected.extend([C64::new(r, 0.0), C64::new(1.0 - r, 0.0)]);
        let amb = mixed.ambient();
        assert_eq!(amb.len(), expected.len());
        for (a, b) in amb.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn mixed_density_keeps_unit_trace() {
        let mut rng = rng();
        let a = DensityMatrix::random(3, &mut rng);
        let b = DensityMatrix::random(3, &mut rng);
        let m = a.combine(0.37, &b).unwrap();
        assert!((linalg::trace(m.matrix()).re - 1.0).abs() < 1e-14);
        assert!(DensityMatrix::new(m.matrix().clone(), POINT_TOL).is_ok());
    }

    #[test]
    fn simplex_as_coproduct_examples() {
        let one = CoproductSpace::simplex_as_coproduct(1);
        assert_eq!(one.len(), 1);
        assert!(one.components()[0].is_one_point());
        let v = SimplexPoint::vertex(4, 2).to_coproduct();
        assert_eq!(v.weights(), &[0.0, 0.0, 1.0, 0.0]);
        assert!(v.part(2).is_some() && v.part(0).is_none());
        let u = SimplexPoint::uniform(5);
        let back = SimplexPoint::from_coproduct(&u.to_coproduct()).unwrap();
        assert_eq!(back, u);
        assert!(
            SimplexPoint::from_coproduct(&CoproductSpace::density(&[2]).unwrap().vertex(0))
                .is_err()
        );
    }

    #[test]
    fn tensor_simplex_examples() {
        let v = tensor_simplex(&SimplexPoint::vertex(3, 1), &SimplexPoint::vertex(2, 1));
        assert_eq!(v, SimplexPoint::vertex(6, 3));
        let u = tensor_simplex(&SimplexPoint::uniform(3), &SimplexPoint::uniform(4));
        assert!(u.distance(&SimplexPoint::uniform(12)) < 1e-15);
        let mut rng = rng();
        let p = SimplexPoint::random(5, &mut rng);
        assert_eq!(tensor_simplex(&p, &SimplexPoint::vertex(1, 0)), p);
    }

    #[test]
    fn tensor_simplex_is_biaffine() {
        let mut rng = rng();
        let q = SimplexPoint::random(3, &mut rng);
        let p0 = SimplexPoint::random(4, &mut rng);
        let mut left = AffineMapSample::new("D(4)", "D(12)", |p: &SimplexPoint| {
            Ok(tensor_simplex(p, &q))
        });
        let mut right = AffineMapSample::new("D(3)", "D(12)", |q: &SimplexPoint| {
            Ok(tensor_simplex(&p0, q))
        });
        let triples_l: Vec<_> = (0..50)
            .map(|_| {
                (
                    SimplexPoint::random(4, &mut rng),
                    SimplexPoint::random(4, &mut rng),
                    rng.random(),
                )
            })
            .collect();
        let triples_r: Vec<_> = (0..50)
            .map(|_| {
                (
                    SimplexPoint::random(3, &mut rng),
                    SimplexPoint::random(3, &mut rng),
                    rng.random(),
                )
            })
            .collect();
        assert!(left.certify(&triples_l, 1e-12).unwrap() <= 1e-12);
        assert!(right.certify(&triples_r, 1e-12).unwrap() <= 1e-12);
        assert!(left.is_certified() && right.is_certified());
    }

    #[test]
    fn pairing_examples() {
        let mut rng = rng();
        let rho = DensityMatrix::random(2, &mut rng);
        assert!(
            (dm_effect_pairing(&rho, &HermitianEffect::one(2), 1e-9).unwrap() - 1.0).abs() < 1e-14
        );
        assert_eq!(
            dm_effect_pairing(&rho, &HermitianEffect::zero(2), 1e-9).unwrap(),
            0.0
        );
        let mut proj = CMatrix::zeros(2, 2);
        proj[(0, 0)] = linalg::ONE;
        let a = HermitianEffect::new(proj, 1e-9).unwrap();
        let half = dm_effect_pairing(&DensityMatrix::maximally_mixed(2), &a, 1e-9).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
        assert!(dm_effect_pairing(&rho, &HermitianEffect::one(3), 1e-9).is_err());
    }

    #[test]
    fn sampled_density_matrices() {
        assert_eq!(sample_density_matrix(1, 4).matrix()[(0, 0)], linalg::ONE);
        let a = sample_density_matrix(3, 1);
        assert!(DensityMatrix::new(a.matrix().clone(), POINT_TOL).is_ok());
        let b = sample_density_matrix(3, 2);
        assert!(a.distance(&b) > 0.0);
        assert_eq!(sample_density_matrix(3, 1), a);
    }

    #[test]
    fn coproduct_universal_property() {
        // f: DM(ℂ²) → ℝ, g: D(3) → ℝ affine; h = copair(f, g)
        let mut rng = rng();
        let space =
            CoproductSpace::new(vec![Component::Density(2), Component::Simplex(3)]).unwrap();
        let e = HermitianEffect::random(2, &mut rng);
        let coef = [0.2, 0.9, 0.4];
        let f = |p: &Part| -> Result<f64> { dm_effect_pairing(p.as_density().unwrap(), &e, 1e-9) };
        let g = |p: &Part| -> Result<f64> {
            match p {
                Part::Simplex(s) => Ok(s.weights().iter().zip(coef).map(|(w, c)| w * c).sum()),
                _ => Err(Error::SpaceMismatch),
            }
        };
        let maps: [&dyn Fn(&Part) -> Result<f64>; 2] = [&f, &g];
        for _ in 0..20 {
            let x = DensityMatrix::random(2, &mut rng);
            let y = SimplexPoint::random(3, &mut rng);
            let ix = space.inject(0, Part::Density(x.clone())).unwrap();
            let iy = space.inject(1, Part::Simplex(y.clone())).unwrap();
            assert_eq!(copair(&ix, &maps).unwrap(), f(&Part::Density(x)).unwrap());
            assert_eq!(copair(&iy, &maps).unwrap(), g(&Part::Simplex(y)).unwrap());
            // any affine h' agreeing on the injections is the ambient-linear
            // functional below; it agrees with h on every point
            let p = space.sample(&mut rng);
            let amb = p.ambient();
            let mut alt = 0.0;
            for (k, z) in e.matrix().transpose().iter().enumerate() {
                alt += (amb[k] * z).re;
            }
            alt += coef
                .iter()
                .enumerate()
                .map(|(k, c)| amb[4 + k].re * c)
                .sum::<f64>();
            assert!((copair(&p, &maps).unwrap() - alt).abs() < 1e-12);
        }
    }

    #[test]
    fn generalized_associativity_of_mixing() {
        let mut rng = rng();
        let space = CoproductSpace::density(&[1, 2, 2]).unwrap();
        for _ in 0..20 {
            let (x, y, z) = (
                space.sample(&mut rng),
                space.sample(&mut rng),
                space.sample(&mut rng),
            );
            let w = SimplexPoint::random(3, &mut rng);
            let (a, b, c) = (w.weights()[0], w.weights()[1], w.weights()[2]);
            // (a x + b y) + c z  vs  a x + (b y + c z)
            let left = x
                .combine(a / (a + b), &y)
                .unwrap()
                .combine(a + b, &z)
                .unwrap();
            let right = x.combine(a, &y.combine(b / (b + c), &z).unwrap()).unwrap();
            assert!(left.distance(&right) < 1e-12);
        }
    }

    #[test]
    fn zero_weight_parts_are_dropped() {
        let space = CoproductSpace::density(&[1, 2]).unwrap();
        let parts = vec![
            Some(Part::Density(DensityMatrix::maximally_mixed(1))),
            Some(Part::Density(DensityMatrix::maximally_mixed(2))),
        ];
        let p = CoproductPoint::new(space.clone(), vec![1.0, 0.0], parts, POINT_TOL).unwrap();
        assert!(p.part(1).is_none());
        assert_eq!(p, space.vertex(0));
        assert!(
            CoproductPoint::new(space.clone(), vec![0.5, 0.5], vec![None, None], POINT_TOL)
                .is_err()
        );
    }

    #[test]
    fn coproduct_json() {
        let mut rng = rng();
        let space = CoproductSpace::new(vec![
            Component::Density(2),
            Component::Simplex(2),
            Component::Density(1),
        ])
        .unwrap();
        let p = space.sample(&mut rng);
        let back = CoproductPoint::from_json_str(&p.to_json_string(), &space, POINT_TOL).unwrap();
        assert!(back.distance(&p) < 1e-15);
        let bad = r#"{"weights":[0.5,0.5,0.0],"parts":{"0":[[1.0,0.0]]}}"#;
        assert!(CoproductPoint::from_json_str(bad, &space, POINT_TOL).is_err());
        let bad_key = r#"{"weights":[1.0,0.0,0.0],"parts":{"x":[[1.0,0.0]]}}"#;
        assert!(CoproductPoint::from_json_str(bad_key, &space, POINT_TOL).is_err());
    }

    #[test]
    fn tensor_with_coproduct_distributes() {
        let mut rng = rng();
        let space = CoproductSpace::density(&[1, 2]).unwrap();
        let t = space.sample(&mut rng);
        let p = SimplexPoint::random(3, &mut rng);
        let pt = tensor_simplex_coproduct(&p, &t);
        assert_eq!(pt.space().len(), 6);
        let total: f64 = pt.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        for x in 0..3 {
            for i in 0..2 {
                assert!((pt.weights()[2 * x + i] - p.weights()[x] * t.weights()[i]).abs() < 1e-15);
            }
        }
    }
}
