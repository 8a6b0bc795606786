//! Convex monoids attached to a finite group, their linear representations,
//! and the construction `X ↦ DM(V₁) + ⋯ + DM(V_k)` over the irreducible
//! representations `Vᵢ` of `X`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::certificate::{SampleConfig, Witness};
use crate::convex::{ConvexPoint, CoproductPoint, CoproductSpace, SimplexPoint};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::irreps::IrrepCatalog;
use crate::linalg::{self, CMatrix, C64};
use crate::rep::character_inner;
use crate::state::{
    dm_coproduct_mult, dm_space, phi, state_mult_function, state_mult_group, AlgebraKind,
    AlgebraState,
};

/// The four monoids the construction moves between.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoidKind {
    /// `D(G) ≅ St(C(G))` under convolution of distributions.
    Distributions,
    /// `St(C[G])` under pointwise multiplication of values.
    GroupStates,
    /// `DM(V₁) + ⋯ + DM(V_k)` over the irreps of `G`, multiplied through `Φ`.
    DensityCoproduct,
    /// `DM(ℂ) + ⋯ + DM(ℂ)`, one one-point component per evaluation
    /// character `ρ_g`, with the convolution of `D(G)` transported.
    EvaluationCoproduct,
}

impl MonoidKind {
    pub const ALL: [MonoidKind; 4] = [
        MonoidKind::Distributions,
        MonoidKind::GroupStates,
        MonoidKind::DensityCoproduct,
        MonoidKind::EvaluationCoproduct,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MonoidKind::Distributions => "distributions",
            MonoidKind::GroupStates => "group-states",
            MonoidKind::DensityCoproduct => "density-coproduct",
            MonoidKind::EvaluationCoproduct => "evaluation-coproduct",
        }
    }
}

impl fmt::Display for MonoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MonoidKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MonoidKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnrecognizedMonoid(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MonoidPoint {
    Distribution(SimplexPoint),
    State(AlgebraState),
    Coproduct(CoproductPoint),
}

/// A recognized convex monoid together with the irrep catalog of its group.
#[derive(Clone, Debug)]
pub struct ConvexMonoid {
    kind: MonoidKind,
    catalog: Arc<IrrepCatalog>,
}

fn wrong_point(kind: MonoidKind) -> Error {
    Error::InvalidPoint(format!("point does not belong to the {kind} monoid"))
}

impl ConvexMonoid {
    pub fn new(kind: MonoidKind, catalog: Arc<IrrepCatalog>) -> Self {
        ConvexMonoid { kind, catalog }
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    pub fn catalog(&self) -> &Arc<IrrepCatalog> {
        &self.catalog
    }

    pub fn group(&self) -> &FiniteGroup {
        self.catalog.group()
    }

    /// Carrier of the coproduct-shaped monoids.
    pub fn coproduct_space(&self) -> Option<CoproductSpace> {
        match self.kind {
            MonoidKind::DensityCoproduct => Some(dm_space(&self.catalog)),
            MonoidKind::EvaluationCoproduct => {
                Some(CoproductSpace::simplex_as_coproduct(self.group().order()))
            }
            _ => None,
        }
    }

    pub fn unit(&self) -> MonoidPoint {
        let g = self.group();
        match self.kind {
            MonoidKind::Distributions => {
                MonoidPoint::Distribution(SimplexPoint::vertex(g.order(), g.identity()))
            }
            MonoidKind::GroupStates => {
                MonoidPoint::State(AlgebraState::unit(g, AlgebraKind::Group))
            }
            MonoidKind::DensityCoproduct => {
                MonoidPoint::Coproduct(dm_space(&self.catalog).vertex(self.catalog.trivial_index()))
            }
            MonoidKind::EvaluationCoproduct => {
                MonoidPoint::Coproduct(SimplexPoint::vertex(g.order(), g.identity()).to_coproduct())
            }
        }
    }

    /// A random point. One draw in five is a vertex so that zero weights
    /// are exercised.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MonoidPoint {
        let g = self.group();
        let vertex = rng.random_bool(0.2);
        match self.kind {
            MonoidKind::Distributions => MonoidPoint::Distribution(if vertex {
                SimplexPoint::vertex(g.order(), rng.random_range(0..g.order()))
            } else {
                SimplexPoint::random(g.order(), rng)
            }),
            MonoidKind::GroupStates => {
                MonoidPoint::State(AlgebraState::random(g, AlgebraKind::Group, rng))
            }
            MonoidKind::DensityCoproduct | MonoidKind::EvaluationCoproduct => {
                let space = self.coproduct_space().expect("coproduct carrier");
                MonoidPoint::Coproduct(if vertex {
                    let mut weights = vec![0.0; space.len()];
                    weights[rng.random_range(0..space.len())] = 1.0;
                    space.sample_with_weights(weights, rng)
                } else {
                    space.sample(rng)
                })
            }
        }
    }

    pub fn mult(&self, x: &MonoidPoint, y: &MonoidPoint) -> Result<MonoidPoint> {
        let g = self.group();
        match (self.kind, x, y) {
            (
                MonoidKind::Distributions,
                MonoidPoint::Distribution(p),
                MonoidPoint::Distribution(q),
            ) => Ok(MonoidPoint::Distribution(convolve_distributions(g, p, q)?)),
            (MonoidKind::GroupStates, MonoidPoint::State(s), MonoidPoint::State(t)) => {
                Ok(MonoidPoint::State(state_mult_group(s, t)?))
            }
            (
                MonoidKind::DensityCoproduct,
                MonoidPoint::Coproduct(t),
                MonoidPoint::Coproduct(s),
            ) => Ok(MonoidPoint::Coproduct(dm_coproduct_mult(
                t,
                s,
                &self.catalog,
            )?)),
            (
                MonoidKind::EvaluationCoproduct,
                MonoidPoint::Coproduct(t),
                MonoidPoint::Coproduct(s),
            ) => {
                let p = convolve_distributions(
                    g,
                    &SimplexPoint::from_coproduct(t)?,
                    &SimplexPoint::from_coproduct(s)?,
                )?;
                Ok(MonoidPoint::Coproduct(p.to_coproduct()))
            }
            _ => Err(wrong_point(self.kind)),
        }
    }

    /// `λx + (1 − λ)y`.
    pub fn combine(&self, lambda: f64, x: &MonoidPoint, y: &MonoidPoint) -> Result<MonoidPoint> {
        match (x, y) {
            (MonoidPoint::Distribution(p), MonoidPoint::Distribution(q)) => {
                Ok(MonoidPoint::Distribution(p.combine(lambda, q)?))
            }
            (MonoidPoint::State(s), MonoidPoint::State(t)) => {
                Ok(MonoidPoint::State(s.combine(lambda, t)?))
            }
            (MonoidPoint::Coproduct(a), MonoidPoint::Coproduct(b)) => {
                Ok(MonoidPoint::Coproduct(a.combine(lambda, b)?))
            }
            _ => Err(wrong_point(self.kind)),
        }
    }

    pub fn distance(&self, x: &MonoidPoint, y: &MonoidPoint) -> f64 {
        match (x, y) {
            (MonoidPoint::Distribution(p), MonoidPoint::Distribution(q)) => p.distance(q),
            (MonoidPoint::State(s), MonoidPoint::State(t)) => s.max_abs_diff(t),
            (MonoidPoint::Coproduct(a), MonoidPoint::Coproduct(b)) => a.distance(b),
            _ => f64::INFINITY,
        }
    }
}

fn convolve_distributions(
    g: &FiniteGroup,
    p: &SimplexPoint,
    q: &SimplexPoint,
) -> Result<SimplexPoint> {
    let sp = AlgebraState::from_distribution(g, p)?;
    let sq = AlgebraState::from_distribution(g, q)?;
    let r = state_mult_function(&sp, &sq)?;
    SimplexPoint::new(r.values().iter().map(|z| z.re).collect(), 1e-9)
}

/// Unit laws, associativity and separate affineness on sampled points.
pub fn monoid_law_witnesses(m: &ConvexMonoid, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let mut rng = cfg.rng(21);
    let unit = m.unit();
    let (mut unit_law, mut assoc, mut affine) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let (x, y, z) = (m.sample(&mut rng), m.sample(&mut rng), m.sample(&mut rng));
        unit_law = unit_law
            .max(m.distance(&m.mult(&unit, &x)?, &x))
            .max(m.distance(&m.mult(&x, &unit)?, &x));
        let left = m.mult(&m.mult(&x, &y)?, &z)?;
        let right = m.mult(&x, &m.mult(&y, &z)?)?;
        assoc = assoc.max(m.distance(&left, &right));
        let lambda: f64 = rng.random();
        let xy = m.combine(lambda, &x, &y)?;
        let in_first = m.distance(
            &m.mult(&xy, &z)?,
            &m.combine(lambda, &m.mult(&x, &z)?, &m.mult(&y, &z)?)?,
        );
        let in_second = m.distance(
            &m.mult(&z, &xy)?,
            &m.combine(lambda, &m.mult(&z, &x)?, &m.mult(&z, &y)?)?,
        );
        affine = affine.max(in_first).max(in_second);
    }
    Ok(vec![
        Witness::new("unit_law", unit_law),
        Witness::new("associativity", assoc),
        Witness::new("affine_in_each_argument", affine),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IrrepAction {
    /// Group irrep `i` of the catalog extended affinely: `Σ p_g ρᵢ(g)`.
    Extended(usize),
    /// `ρ_g(σ) = σ(δ_g)`.
    Evaluation(usize),
}

/// A linear representation of a convex monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidIrrep {
    dim: usize,
    action: IrrepAction,
}

impl MonoidIrrep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The catalog irrep this extends, if any.
    pub fn extended_from(&self) -> Option<usize> {
        match self.action {
            IrrepAction::Extended(i) => Some(i),
            IrrepAction::Evaluation(_) => None,
        }
    }

    /// The group element this evaluates at, if any.
    pub fn evaluation_at(&self) -> Option<usize> {
        match self.action {
            IrrepAction::Evaluation(g) => Some(g),
            IrrepAction::Extended(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self.action {
            IrrepAction::Extended(i) => format!("V{i}"),
            IrrepAction::Evaluation(g) => format!("ev{g}"),
        }
    }

    pub fn act(&self, m: &ConvexMonoid, x: &MonoidPoint) -> Result<CMatrix> {
        let cat = m.catalog();
        match (self.action, x) {
            (IrrepAction::Extended(i), MonoidPoint::Distribution(p)) => {
                Ok(extend(cat, i, p.weights()))
            }
            (IrrepAction::Extended(i), MonoidPoint::Coproduct(t))
                if m.kind == MonoidKind::EvaluationCoproduct =>
            {
                Ok(extend(cat, i, t.weights()))
            }
            (IrrepAction::Evaluation(g), MonoidPoint::State(s)) => {
                Ok(CMatrix::from_element(1, 1, s.value(g)))
            }
            (IrrepAction::Evaluation(g), MonoidPoint::Coproduct(t))
                if m.kind == MonoidKind::DensityCoproduct =>
            {
                Ok(CMatrix::from_element(1, 1, phi(t, cat)?.value(g)))
            }
            _ => Err(wrong_point(m.kind)),
        }
    }
}

fn extend(cat: &IrrepCatalog, i: usize, weights: &[f64]) -> CMatrix {
    let rep = cat.irrep(i);
    let mut out = CMatrix::zeros(rep.dim(), rep.dim());
    for (g, &w) in weights.iter().enumerate() {
        if w != 0.0 {
            out += rep.matrix(g).scale(w);
        }
    }
    out
}

/// The irreducible linear representations of a recognized monoid: group
/// irreps extended affinely for `D(G)`, evaluations `ρ_g` for `St(C[G])`.
pub fn monoid_irreps(m: &ConvexMonoid) -> Vec<MonoidIrrep> {
    match m.kind {
        MonoidKind::Distributions | MonoidKind::EvaluationCoproduct => m
            .catalog
            .dims()
            .into_iter()
            .enumerate()
            .map(|(i, dim)| MonoidIrrep {
                dim,
                action: IrrepAction::Extended(i),
            })
            .collect(),
        MonoidKind::GroupStates | MonoidKind::DensityCoproduct => m
            .group()
            .elements()
            .map(|g| MonoidIrrep {
                dim: 1,
                action: IrrepAction::Evaluation(g),
            })
            .collect(),
    }
}

/// `action(unit) = I`, multiplicativity and affineness on samples, plus
/// irreducibility and pairwise distinctness of the whole list.
pub fn irrep_witnesses(
    m: &ConvexMonoid,
    irreps: &[MonoidIrrep],
    cfg: &SampleConfig,
) -> Result<Vec<Witness>> {
    let mut rng = cfg.rng(31);
    let unit = m.unit();
    let (mut unit_res, mut mult_res, mut affine_res) = (0.0f64, 0.0f64, 0.0f64);
    for r in irreps {
        unit_res = unit_res.max(linalg::max_abs_diff(
            &r.act(m, &unit)?,
            &linalg::identity(r.dim),
        ));
    }
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let (x, y) = (m.sample(&mut rng), m.sample(&mut rng));
        let lambda: f64 = rng.random();
        let xy = m.mult(&x, &y)?;
        let mix = m.combine(lambda, &x, &y)?;
        for r in irreps {
            let (ax, ay) = (r.act(m, &x)?, r.act(m, &y)?);
            mult_res = mult_res.max(linalg::max_abs_diff(&r.act(m, &xy)?, &(&ax * &ay)));
            let affine = ax.scale(lambda) + ay.scale(1.0 - lambda);
            affine_res = affine_res.max(linalg::max_abs_diff(&r.act(m, &mix)?, &affine));
        }
    }

    let cat = m.catalog();
    let n = m.group().order();
    let dims: Vec<usize> = irreps.iter().map(MonoidIrrep::dim).collect();
    let (irreducible, distinct, count_ok) = match m.kind {
        MonoidKind::Distributions | MonoidKind::EvaluationCoproduct => {
            let irreducible = cat.irreps().iter().all(|r| r.commutant_dim() == 1);
            let chars = cat
                .irreps()
                .iter()
                .map(|r| r.character())
                .collect::<Vec<_>>();
            let mut distinct = true;
            for a in 0..chars.len() {
                for b in 0..a {
                    distinct &= character_inner(&chars[a], &chars[b]).norm() < 1e-6;
                }
            }
            let sum_sq: usize = dims.iter().map(|d| d * d).sum();
            (
                irreducible,
                distinct,
                sum_sq == n && dims.len() == cat.classes().len(),
            )
        }
        MonoidKind::GroupStates | MonoidKind::DensityCoproduct => {
            let mut gs: Vec<usize> = irreps
                .iter()
                .filter_map(MonoidIrrep::evaluation_at)
                .collect();
            gs.sort_unstable();
            gs.dedup();
            (
                true,
                gs.len() == irreps.len(),
                irreps.len() == n && dims.iter().all(|&d| d == 1),
            )
        }
    };
    Ok(vec![
        Witness::new("irrep_unit", unit_res),
        Witness::new("irrep_multiplicative", mult_res),
        Witness::new("irrep_affine", affine_res),
        Witness::flag("irreducible", irreducible),
        Witness::flag("pairwise_distinct", distinct),
        Witness::flag("count_and_dims", count_ok).with_detail(format!("{dims:?}")),
    ])
}

/// Sampled completeness for the evaluation characters of `St(C[G])`.
///
/// An affine functional `ρ` on states is `σ ↦ σ(a)` for some `a ∈ C[G]`
/// once sampled states span `ℂ^G`. Candidates `a` with `Σ a_g = 1` are drawn
/// (random, near-Dirac, and signed Dirac combinations) and tested for
/// `σ(a)τ(a) = (στ)(a)`; apart from the Dirac elements themselves none may
/// pass.
pub fn completeness_witnesses(group: &FiniteGroup, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let n = group.order();
    let mut rng = cfg.rng(41);
    let pairs: Vec<(AlgebraState, AlgebraState)> = (0..n.max(8) * 2)
        .map(|_| {
            (
                AlgebraState::random(group, AlgebraKind::Group, &mut rng),
                AlgebraState::random(group, AlgebraKind::Group, &mut rng),
            )
        })
        .collect();
    let span = CMatrix::from_fn(pairs.len(), n, |r, g| pairs[r].0.value(g));
    let spanning = linalg::null_space_dim(&span, 1e-10) == 0;

    let residual = |a: &[C64]| -> f64 {
        let eval = |s: &AlgebraState| -> C64 { s.values().iter().zip(a).map(|(v, c)| v * c).sum() };
        pairs
            .iter()
            .map(|(s, t)| {
                let st = state_mult_group(s, t).expect("same group");
                (eval(&st) - eval(s) * eval(t)).norm()
            })
            .fold(0.0, f64::max)
    };

    let mut dirac_worst = 0.0f64;
    for g in group.elements() {
        let mut a = vec![linalg::ZERO; n];
        a[g] = linalg::ONE;
        dirac_worst = dirac_worst.max(residual(&a));
    }

    let mut spurious = 0usize;
    let mut closest = f64::INFINITY;
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let a = candidate(n, i, &mut rng);
        // signed combinations can cancel down to a Dirac element
        if is_dirac(&a) {
            continue;
        }
        let r = residual(&a);
        if r <= cfg.tol.max(1e-8) {
            spurious += 1;
        }
        closest = closest.min(r);
    }
    Ok(vec![
        Witness::flag("states_span", spanning),
        Witness::new("evaluations_multiplicative", dirac_worst),
        Witness::flag("no_other_multiplicative_functionals", spurious == 0).with_detail(format!(
            "{} candidates, {spurious} multiplicative, smallest residual {closest:e}",
            cfg.samples
        )),
    ])
}

fn candidate<R: Rng + ?Sized>(n: usize, i: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let a = raw_candidate(n, i, rng);
        let total: C64 = a.iter().sum();
        // normalise so that ρ(unit) = 1
        if total.norm() > 1e-6 {
            return a.iter().map(|z| z / total).collect();
        }
    }
}

fn is_dirac(a: &[C64]) -> bool {
    let big = a.iter().filter(|z| z.norm() > 1e-9).count();
    big == 1 && a.iter().any(|z| (z - linalg::ONE).norm() < 1e-9)
}

fn raw_candidate<R: Rng + ?Sized>(n: usize, i: usize, rng: &mut R) -> Vec<C64> {
    let gauss = |rng: &mut R| -> C64 {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    };
    match i % 3 {
        0 => (0..n).map(|_| gauss(rng)).collect(),
        1 => {
            let mut a: Vec<C64> = (0..n).map(|_| gauss(rng) * 1e-3).collect();
            a[rng.random_range(0..n)] += linalg::ONE;
            a
        }
        _ => {
            let mut a = vec![linalg::ZERO; n];
            for _ in 0..3 {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                a[rng.random_range(0..n)] += C64::new(sign, 0.0);
            }
            a
        }
    }
}

/// `X ↦ DM(V₁) + ⋯ + DM(V_k)` over the irreps of `X`, with the induced
/// multiplication.
pub fn pontryagin_construct(m: &ConvexMonoid) -> ConvexMonoid {
    let kind = match m.kind {
        MonoidKind::Distributions | MonoidKind::EvaluationCoproduct => MonoidKind::DensityCoproduct,
        MonoidKind::GroupStates | MonoidKind::DensityCoproduct => MonoidKind::EvaluationCoproduct,
    };
    ConvexMonoid::new(kind, m.catalog.clone())
}

pub type PointMap<'a> = Box<dyn Fn(&MonoidPoint) -> Result<MonoidPoint> + 'a>;

/// A candidate isomorphism between two monoids with its claimed inverse.
pub struct MonoidMap<'a> {
    pub forward: PointMap<'a>,
    pub inverse: PointMap<'a>,
}

impl<'a> MonoidMap<'a> {
    pub fn new(
        forward: impl Fn(&MonoidPoint) -> Result<MonoidPoint> + 'a,
        inverse: impl Fn(&MonoidPoint) -> Result<MonoidPoint> + 'a,
    ) -> Self {
        MonoidMap {
            forward: Box::new(forward),
            inverse: Box::new(inverse),
        }
    }

    pub fn identity() -> Self {
        MonoidMap::new(|x| Ok(x.clone()), |x| Ok(x.clone()))
    }
}

/// Residuals for affineness, multiplicativity, unit preservation and both
/// roundtrips of `map: a → b`.
pub fn verify_affine_monoid_iso(
    a: &ConvexMonoid,
    b: &ConvexMonoid,
    map: &MonoidMap<'_>,
    cfg: &SampleConfig,
) -> Result<Vec<Witness>> {
    let mut rng = cfg.rng(51);
    let f = &map.forward;
    let unit = b.distance(&f(&a.unit())?, &b.unit());
    let (mut affine, mut mult, mut there_back, mut back_there) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let (x, y) = (a.sample(&mut rng), a.sample(&mut rng));
        let lambda: f64 = rng.random();
        let (fx, fy) = (f(&x)?, f(&y)?);
        affine = affine.max(b.distance(
            &f(&a.combine(lambda, &x, &y)?)?,
            &b.combine(lambda, &fx, &fy)?,
        ));
        mult = mult.max(b.distance(&f(&a.mult(&x, &y)?)?, &b.mult(&fx, &fy)?));
        there_back = there_back.max(a.distance(&(map.inverse)(&fx)?, &x));
        let z = b.sample(&mut rng);
        back_there = back_there.max(b.distance(&f(&(map.inverse)(&z)?)?, &z));
    }
    Ok(vec![
        Witness::new("affine", affine),
        Witness::new("multiplicative", mult),
        Witness::new("unit_preserved", unit),
        Witness::new("inverse_after_map", there_back),
        Witness::new("map_after_inverse", back_there),
    ])
}
