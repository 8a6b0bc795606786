//! The named verification checks. Each turns a group, its irrep catalog and
//! a sampling configuration into a list of witnesses.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::certificate::{SampleConfig, Witness};
use crate::convex::{ConvexPoint, CoproductPoint, DensityMatrix, Part};
use crate::effect::{effect_module_law_witnesses, BlockEffect, PartialSum};
use crate::error::{Error, Result};
use crate::fourier::{fourier, fourier_inverse};
use crate::group::FiniteGroup;
use crate::group_algebra::{
    block_sqrt, effect_in_algebra_to_operator, function_coassociativity_residual,
    group_coassociativity_residual, hilbert_algebra_witnesses, operator_to_effect_in_algebra,
    random_intertwining_effect, EffectBlockIso, GroupAlgebraElement,
};
use crate::irreps::{IrrepCatalog, CHARACTER_TOL};
use crate::linalg::{self, C64};
use crate::monoid::{
    completeness_witnesses, irrep_witnesses, monoid_irreps, monoid_law_witnesses,
    pontryagin_construct, verify_affine_monoid_iso, ConvexMonoid, MonoidKind, MonoidMap,
    MonoidPoint,
};
use crate::state::{
    dm_coproduct_mult, dm_space, phi, phi_inverse, state_mult_group, AlgebraKind, AlgebraState,
};
use crate::tensor_case::tensor_case_witnesses;

/// Residual a negative control must exceed to count as detected.
pub const CONTROL_GAP: f64 = 0.1;

const EXERCISED: &str = "definedness_exercised";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Group,
    Hilbert,
    EffectAxioms,
    Blocks,
    Fourier,
    Phi,
    Monoids,
    Pontryagin,
    Double,
    Tensor,
}

impl Check {
    /// Dependency order.
    pub const ALL: [Check; 10] = [
        Check::Group,
        Check::Hilbert,
        Check::EffectAxioms,
        Check::Blocks,
        Check::Fourier,
        Check::Phi,
        Check::Monoids,
        Check::Pontryagin,
        Check::Double,
        Check::Tensor,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Group => "group",
            Check::Hilbert => "hilbert",
            Check::EffectAxioms => "effect-axioms",
            Check::Blocks => "blocks",
            Check::Fourier => "fourier",
            Check::Phi => "phi",
            Check::Monoids => "monoids",
            Check::Pontryagin => "pontryagin",
            Check::Double => "double",
            Check::Tensor => "tensor",
        }
    }

    /// Parse `all` or a comma-separated list; result is deduplicated and in
    /// dependency order.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        if s.trim() == "all" {
            return Ok(Check::ALL.to_vec());
        }
        let mut out = s
            .split(',')
            .map(|item| item.trim().parse())
            .collect::<Result<Vec<Check>>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::InvalidSpec("no checks requested".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

pub fn run_check(
    check: Check,
    catalog: &Arc<IrrepCatalog>,
    cfg: &SampleConfig,
) -> Result<Vec<Witness>> {
    match check {
        Check::Group => group_check(catalog),
        Check::Hilbert => hilbert_check(catalog.group(), cfg),
        Check::EffectAxioms => {
            let mut rng = cfg.rng(71);
            let mut out = Vec::new();
            let mut exercised = false;
            let mut done = 0;
            while done < cfg.samples {
                cfg.checkpoint(done)?;
                let size = crate::certificate::BATCH.min(cfg.samples - done);
                let mut ws = effect_module_law_witnesses(&catalog.dims(), size, &mut rng);
                // exercised if any batch saw a defined sum
                ws.retain(|w| {
                    if w.label == EXERCISED {
                        exercised |= w.residual == 0.0;
                    }
                    w.label != EXERCISED
                });
                merge_max(&mut out, ws);
                done += size;
            }
            out.push(Witness::flag(EXERCISED, exercised));
            Ok(out)
        }
        Check::Blocks => blocks_check(catalog, cfg),
        Check::Fourier => fourier_check(catalog, cfg),
        Check::Phi => phi_check(catalog, cfg),
        Check::Monoids => monoids_check(catalog, cfg),
        Check::Pontryagin => pontryagin_check(catalog, cfg),
        Check::Double => double_check(catalog, cfg),
        Check::Tensor => tensor_case_witnesses(catalog, cfg),
    }
}

/// Fold `more` into `acc`, keeping the worst residual per label.
fn merge_max(acc: &mut Vec<Witness>, more: Vec<Witness>) {
    for w in more {
        match acc.iter_mut().find(|a| a.label == w.label) {
            Some(a) if w.residual > a.residual => *a = w,
            Some(_) => {}
            None => acc.push(w),
        }
    }
}

fn group_check(catalog: &IrrepCatalog) -> Result<Vec<Witness>> {
    let g = catalog.group();
    let rescan = FiniteGroup::from_table(g.name(), &g.to_table().table).is_ok();
    let classes = catalog.classes();
    let mut seen = vec![false; g.order()];
    let mut partition = true;
    for class in classes.classes() {
        for &x in class {
            partition &= !std::mem::replace(&mut seen[x], true);
        }
    }
    partition &= seen.iter().all(|&s| s);
    let dims = catalog.dims();
    let sum_sq: usize = dims.iter().map(|d| d * d).sum();
    let unitarity = catalog
        .irreps()
        .iter()
        .map(|r| r.unitarity_residual())
        .fold(0.0, f64::max);
    let homomorphism = catalog
        .irreps()
        .iter()
        .map(|r| r.homomorphism_residual())
        .fold(0.0, f64::max);
    let irreducible = catalog.irreps().iter().all(|r| r.commutant_dim() == 1);
    let multiplicity = catalog
        .block_layout()
        .iter()
        .zip(&dims)
        .all(|(copies, &d)| copies.len() == d && copies.iter().all(|r| r.len() == d));
    let class_fn = catalog
        .irreps()
        .iter()
        .map(|r| r.class_function_residual(classes))
        .fold(0.0, f64::max);
    Ok(vec![
        Witness::flag("table_valid", rescan),
        Witness::flag("classes_partition", partition),
        Witness::flag("sum_of_squares", sum_sq == g.order()).with_detail(format!("dims {dims:?}")),
        Witness::flag("irreps_match_classes", dims.len() == classes.len()),
        Witness::flag("irreducible", irreducible),
        Witness::flag("multiplicity_equals_dim", multiplicity),
        Witness::new("unitarity", unitarity),
        Witness::new("homomorphism", homomorphism),
        Witness::new("character_class_function", class_fn),
        Witness::new(
            "schur_orthogonality",
            catalog.schur_orthogonality_residual(),
        ),
        Witness::new("block_diagonal", catalog.block_diagonal_residual()),
    ])
}

fn hilbert_check(group: &FiniteGroup, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let mut out = hilbert_algebra_witnesses(group, cfg)?;
    let mut rng = cfg.rng(12);
    let (mut coassoc_fn, mut coassoc_grp, mut to_op, mut from_op) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let a = GroupAlgebraElement::random(group, &mut rng);
        coassoc_fn = coassoc_fn.max(function_coassociativity_residual(group, a.coeffs()));
        coassoc_grp = coassoc_grp.max(group_coassociativity_residual(&a));
        // intertwining effect ε → ε(1) → (x ↦ x ε(1)) must give back ε
        let eps = random_intertwining_effect(group, &mut rng);
        let e1 = operator_to_effect_in_algebra(group, &eps, 1e-9)?;
        let back = effect_in_algebra_to_operator(&e1, 1e-9)?;
        to_op = to_op.max(linalg::max_abs_diff(&back, &eps));
        from_op = from_op.max(operator_to_effect_in_algebra(group, &back, 1e-9)?.max_abs_diff(&e1));
    }
    out.extend([
        Witness::new("function_coassociativity", coassoc_fn),
        Witness::new("group_coassociativity", coassoc_grp),
        Witness::new("effect_to_operator_roundtrip", to_op),
        Witness::new("operator_to_effect_roundtrip", from_op),
    ]);
    Ok(out)
}

fn blocks_check(catalog: &IrrepCatalog, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let iso = EffectBlockIso::new(catalog);
    let layout = iso.layout();
    let mut rng = cfg.rng(81);
    let group = catalog.group();
    let (mut rt_blocks, mut rt_algebra, mut block_form) = (0.0f64, 0.0f64, 0.0f64);
    let (mut sum, mut definedness, mut perp, mut scalar, mut root) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let one = GroupAlgebraElement::unit(group);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let x = BlockEffect::random(&layout, &mut rng);
        let a = iso.from_blocks(&x)?;
        rt_blocks = rt_blocks.max(iso.to_blocks(&a, 1e-9)?.max_abs_diff(&x));
        rt_algebra = rt_algebra.max(iso.from_blocks(&iso.to_blocks(&a, 1e-9)?)?.max_abs_diff(&a));
        block_form = block_form.max(iso.block_form_residual(&a)?);

        let y = BlockEffect::random(&layout, &mut rng).scalar_mul(rng.random())?;
        let b = iso.from_blocks(&y)?;
        let ab = a.add(&b)?;
        match x.partial_add(&y)? {
            PartialSum::Defined(s) => {
                definedness = definedness.max(if ab.is_effect(1e-9) { 0.0 } else { 1.0 });
                sum = sum.max(iso.to_blocks(&ab, 1e-9)?.max_abs_diff(&s));
            }
            PartialSum::Undefined => {
                // undefined in blocks iff a + b leaves [0, 1] in C[G]
                definedness = definedness.max(if ab.is_effect(1e-9) { 1.0 } else { 0.0 });
            }
        }
        let a_perp = one.add(&a.scale(C64::new(-1.0, 0.0)))?;
        perp = perp.max(
            iso.to_blocks(&a_perp, 1e-9)?
                .max_abs_diff(&x.orthocomplement()),
        );
        let r: f64 = rng.random();
        scalar = scalar.max(
            iso.to_blocks(&a.scale(C64::new(r, 0.0)), 1e-9)?
                .max_abs_diff(&x.scalar_mul(r)?),
        );
        let s = iso.from_blocks(&block_sqrt(&x))?;
        root = root.max(s.convolve(&s)?.max_abs_diff(&a));
    }
    let zero = iso
        .to_blocks(&GroupAlgebraElement::zero(group), 1e-9)?
        .max_abs_diff(&BlockEffect::zero(&layout));
    let unit = iso
        .to_blocks(&one, 1e-9)?
        .max_abs_diff(&BlockEffect::one(&layout));
    Ok(vec![
        Witness::flag("layout_matches_irreps", layout == catalog.dims())
            .with_detail(format!("{layout:?}")),
        Witness::new("to_blocks_after_from_blocks", rt_blocks),
        Witness::new("from_blocks_after_to_blocks", rt_algebra),
        Witness::new("block_form", block_form),
        Witness::new("preserves_sum", sum),
        Witness::new("preserves_definedness", definedness),
        Witness::new("preserves_orthocomplement", perp),
        Witness::new("preserves_scalar", scalar),
        Witness::new("preserves_zero", zero),
        Witness::new("preserves_one", unit),
        Witness::new("square_root_at_unit", root),
    ])
}

fn fourier_check(catalog: &IrrepCatalog, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let group = catalog.group();
    let space = dm_space(catalog);
    let mut rng = cfg.rng(91);
    let (mut roundtrip, mut mult, mut linear, mut compat) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let unit_blocks = fourier(&GroupAlgebraElement::unit(group), catalog)?;
    let unit = unit_blocks
        .blocks()
        .iter()
        .map(|b| linalg::max_abs_diff(b, &linalg::identity(b.nrows())))
        .fold(0.0, f64::max);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let a = GroupAlgebraElement::random(group, &mut rng);
        let b = GroupAlgebraElement::random(group, &mut rng);
        let (fa, fb) = (fourier(&a, catalog)?, fourier(&b, catalog)?);
        // scale by the operand size so the residual is relative
        let scale = (a.norm() * b.norm()).max(1.0);
        roundtrip =
            roundtrip.max(fourier_inverse(&fa, catalog)?.max_abs_diff(&a) / a.norm().max(1.0));
        mult = mult.max(fourier(&a.convolve(&b)?, catalog)?.max_abs_diff(&fa.mul(&fb)?) / scale);
        let z = C64::new(rng.random(), rng.random());
        let combo = fourier(&a.add(&b.scale(z))?, catalog)?;
        let expected = crate::fourier::FourierBlocks::new(
            fa.blocks()
                .iter()
                .zip(fb.blocks())
                .map(|(x, y)| x + y * z)
                .collect(),
        );
        linear = linear.max(combo.max_abs_diff(&expected) / a.norm().max(1.0));

        // Φ(T)(δ_g) against Σ rᵢ tr(Tᵢ Ψ(δ_g)ᵢ)
        let t = space.sample(&mut rng);
        let direct = phi(&t, catalog)?;
        for g in group.elements() {
            let psi = fourier(&GroupAlgebraElement::dirac(group, g), catalog)?;
            let mut paired = linalg::ZERO;
            for (k, block) in psi.blocks().iter().enumerate() {
                if let Some(Part::Density(rho)) = t.part(k) {
                    paired += linalg::trace(&(rho.matrix() * block)) * t.weights()[k];
                }
            }
            compat = compat.max((paired - direct.value(g)).norm());
        }
    }
    Ok(vec![
        Witness::new("unit_to_identities", unit),
        Witness::new("roundtrip", roundtrip),
        Witness::new("multiplicative", mult),
        Witness::new("linear", linear),
        Witness::new("phi_is_states_of_psi", compat),
    ])
}

fn phi_check(catalog: &IrrepCatalog, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let group = catalog.group();
    let space = dm_space(catalog);
    let mut rng = cfg.rng(101);
    let (mut point_rt, mut state_rt, mut image_pos, mut random_pos) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let t = space.sample(&mut rng);
        let s = phi(&t, catalog)?;
        image_pos = image_pos
            .max(s.positivity_residual())
            .max(s.normalization_residual());
        point_rt = point_rt.max(phi_inverse(&s, catalog, 1e-8)?.part_distance(&t));
        let sigma = AlgebraState::random(group, AlgebraKind::Group, &mut rng);
        random_pos = random_pos.max(sigma.positivity_residual());
        state_rt =
            state_rt.max(phi(&phi_inverse(&sigma, catalog, 1e-8)?, catalog)?.max_abs_diff(&sigma));
    }
    let unit = phi(&space.vertex(catalog.trivial_index()), catalog)?
        .max_abs_diff(&AlgebraState::unit(group, AlgebraKind::Group));
    Ok(vec![
        Witness::new("phi_inverse_after_phi", point_rt),
        Witness::new("phi_after_phi_inverse", state_rt),
        Witness::new("image_is_state", image_pos),
        Witness::new("sampled_states_positive", random_pos),
        Witness::new("trivial_component_to_unit_state", unit),
        Witness::flag("non_psd_rejected", non_psd_control(catalog)),
    ])
}

/// A normalised functional that is not positive must fail the certificate.
pub fn non_psd_control(catalog: &IrrepCatalog) -> bool {
    let group = catalog.group();
    if group.order() == 1 {
        // σ(δ_e) = 1 is forced: the only normalised functional is a state
        return true;
    }
    let values: Vec<C64> = group
        .elements()
        .map(|g| {
            if g == group.identity() {
                linalg::ONE
            } else {
                C64::new(2.0, 0.0)
            }
        })
        .collect();
    let bad = AlgebraState::new(group, AlgebraKind::Group, values.clone(), 1e-8);
    let rejected_by_new = matches!(bad, Err(Error::NotAState(_)));
    let probe = crate::state::AlgebraState::unit(group, AlgebraKind::Group);
    let rejected_by_inverse = phi_inverse(&with_values(&probe, values), catalog, 1e-8).is_err();
    rejected_by_new && rejected_by_inverse
}

fn with_values(s: &AlgebraState, values: Vec<C64>) -> AlgebraState {
    AlgebraState::unchecked(s.group(), s.kind(), values)
}

fn monoids_check(catalog: &Arc<IrrepCatalog>, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for kind in MonoidKind::ALL {
        let m = ConvexMonoid::new(kind, catalog.clone());
        for w in monoid_law_witnesses(&m, cfg)? {
            out.push(Witness {
                label: format!("{kind}.{}", w.label),
                ..w
            });
        }
    }
    let samples = cfg.with_samples(cfg.samples.min(50));
    for kind in [MonoidKind::Distributions, MonoidKind::GroupStates] {
        let m = ConvexMonoid::new(kind, catalog.clone());
        let irreps = monoid_irreps(&m);
        for w in irrep_witnesses(&m, &irreps, &samples)? {
            out.push(Witness {
                label: format!("{kind}.{}", w.label),
                ..w
            });
        }
    }
    out.extend(completeness_witnesses(catalog.group(), cfg)?);

    // conjugation form of the product: Φ(T·S) = Φ(T)Φ(S)
    let space = dm_space(catalog);
    let mut rng = cfg.rng(111);
    let mut conj = 0.0f64;
    for i in 0..cfg.samples {
        cfg.checkpoint(i)?;
        let (t, s) = (space.sample(&mut rng), space.sample(&mut rng));
        let lhs = phi(&dm_coproduct_mult(&t, &s, catalog)?, catalog)?;
        let rhs = state_mult_group(&phi(&t, catalog)?, &phi(&s, catalog)?)?;
        conj = conj.max(lhs.max_abs_diff(&rhs));
    }
    out.push(Witness::new("phi_conjugates_products", conj));
    if catalog.group().is_abelian() {
        out.push(dual_group_witness(catalog)?);
    }
    Ok(out)
}

/// For abelian `G`: `vertex(χᵢ)·vertex(χⱼ) = vertex(χᵢχⱼ)`.
pub fn dual_group_witness(catalog: &IrrepCatalog) -> Result<Witness> {
    let space = dm_space(catalog);
    let chars = catalog.characters();
    let k = catalog.len();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let prod: Vec<C64> = (0..chars[i].len())
                .map(|c| chars[i][c] * chars[j][c])
                .collect();
            let target = (0..k)
                .find(|&t| {
                    chars[t]
                        .iter()
                        .zip(&prod)
                        .all(|(a, b)| (a - b).norm() < CHARACTER_TOL)
                })
                .ok_or_else(|| {
                    Error::CatalogMismatch("character product is not a character".into())
                })?;
            let m = dm_coproduct_mult(&space.vertex(i), &space.vertex(j), catalog)?;
            worst = worst.max(m.distance(&space.vertex(target)));
        }
    }
    Ok(Witness::new("dual_group_table", worst))
}

fn phi_map(catalog: &IrrepCatalog) -> MonoidMap<'_> {
    MonoidMap::new(
        move |x| match x {
            MonoidPoint::Coproduct(t) => Ok(MonoidPoint::State(phi(t, catalog)?)),
            _ => Err(Error::SpaceMismatch),
        },
        move |x| match x {
            MonoidPoint::State(s) => Ok(MonoidPoint::Coproduct(phi_inverse(s, catalog, 1e-8)?)),
            _ => Err(Error::SpaceMismatch),
        },
    )
}

/// `Φ` precomposed with a swap of components `a` and `b`; an isomorphism of
/// convex spaces, but not of monoids unless the swap is a symmetry of the
/// dual.
pub fn swapped_phi_map(catalog: &IrrepCatalog, a: usize, b: usize) -> MonoidMap<'_> {
    let swap = move |t: &CoproductPoint| -> Result<CoproductPoint> {
        let mut weights = t.weights().to_vec();
        let mut parts = t.parts().to_vec();
        weights.swap(a, b);
        parts.swap(a, b);
        CoproductPoint::new(t.space().clone(), weights, parts, 1e-9)
    };
    MonoidMap::new(
        move |x| match x {
            MonoidPoint::Coproduct(t) => Ok(MonoidPoint::State(phi(&swap(t)?, catalog)?)),
            _ => Err(Error::SpaceMismatch),
        },
        move |x| match x {
            MonoidPoint::State(s) => Ok(MonoidPoint::Coproduct(swap(&phi_inverse(
                s, catalog, 1e-8,
            )?)?)),
            _ => Err(Error::SpaceMismatch),
        },
    )
}

/// Multiplicativity residual of the swapped map, for components of equal
/// dimension. `None` if the catalog has no such pair involving the
/// trivial irrep.
pub fn swap_control_residual(
    catalog: &Arc<IrrepCatalog>,
    cfg: &SampleConfig,
) -> Result<Option<f64>> {
    let dims = catalog.dims();
    let t = catalog.trivial_index();
    let Some(other) = (0..dims.len()).find(|&i| i != t && dims[i] == dims[t]) else {
        return Ok(None);
    };
    let dm = ConvexMonoid::new(MonoidKind::DensityCoproduct, catalog.clone());
    let st = ConvexMonoid::new(MonoidKind::GroupStates, catalog.clone());
    let ws = verify_affine_monoid_iso(&dm, &st, &swapped_phi_map(catalog, t, other), cfg)?;
    Ok(ws
        .iter()
        .find(|w| w.label == "multiplicative")
        .map(|w| w.residual))
}

fn pontryagin_check(catalog: &Arc<IrrepCatalog>, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let d = ConvexMonoid::new(MonoidKind::Distributions, catalog.clone());
    let st = ConvexMonoid::new(MonoidKind::GroupStates, catalog.clone());
    let built = pontryagin_construct(&d);
    let mut out: Vec<Witness> = verify_affine_monoid_iso(&built, &st, &phi_map(catalog), cfg)?
        .into_iter()
        .map(|w| Witness {
            label: format!("phi.{}", w.label),
            ..w
        })
        .collect();
    let dual = pontryagin_construct(&st);
    let space = dual.coproduct_space().expect("coproduct carrier");
    out.push(
        Witness::flag(
            "dual_of_states_is_simplex",
            space.len() == catalog.group().order()
                && space.components().iter().all(|c| c.is_one_point()),
        )
        .with_detail(format!("{} one-point components", space.len())),
    );
    let control = swap_control_residual(catalog, &cfg.with_samples(cfg.samples.min(50)))?;
    out.push(match control {
        Some(r) => Witness::flag("swap_control_detected", r > CONTROL_GAP)
            .with_detail(format!("multiplicativity {r:e}")),
        None => Witness::flag("swap_control_detected", true)
            .with_detail("no component of trivial dimension to swap"),
    });
    Ok(out)
}

fn double_check(catalog: &Arc<IrrepCatalog>, cfg: &SampleConfig) -> Result<Vec<Witness>> {
    let d = ConvexMonoid::new(MonoidKind::Distributions, catalog.clone());
    let twice = pontryagin_construct(&pontryagin_construct(&d));
    let group = catalog.group();
    let space = twice.coproduct_space().expect("coproduct carrier");
    let to_d = MonoidMap::new(
        |x| match x {
            MonoidPoint::Coproduct(t) => Ok(MonoidPoint::Distribution(
                crate::convex::SimplexPoint::from_coproduct(t)?,
            )),
            _ => Err(Error::SpaceMismatch),
        },
        |x| match x {
            MonoidPoint::Distribution(p) => Ok(MonoidPoint::Coproduct(p.to_coproduct())),
            _ => Err(Error::SpaceMismatch),
        },
    );
    let mut out: Vec<Witness> = verify_affine_monoid_iso(&twice, &d, &to_d, cfg)?;
    let mut vertex_table = 0.0f64;
    for x in group.elements() {
        for y in group.elements() {
            let prod = twice.mult(
                &MonoidPoint::Coproduct(space.vertex(x)),
                &MonoidPoint::Coproduct(space.vertex(y)),
            )?;
            vertex_table = vertex_table.max(twice.distance(
                &prod,
                &MonoidPoint::Coproduct(space.vertex(group.mul(x, y))),
            ));
        }
    }
    out.push(
        Witness::flag(
            "one_point_components",
            space.len() == group.order() && space.components().iter().all(|c| c.is_one_point()),
        )
        .with_detail(format!("{} components", space.len())),
    );
    out.push(Witness::new(
        "vertices_multiply_by_group_table",
        vertex_table,
    ));
    Ok(out)
}

/// A density-matrix point on component `i` with a random state.
pub fn random_component_point<R: Rng + ?Sized>(
    catalog: &IrrepCatalog,
    i: usize,
    rng: &mut R,
) -> CoproductPoint {
    dm_space(catalog)
        .inject(
            i,
            Part::Density(DensityMatrix::random(catalog.dims()[i], rng)),
        )
        .expect("component exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreps::{decompose_irreps, DEFAULT_TOL};

    #[test]
    fn check_lists() {
        assert_eq!(Check::parse_list("all").unwrap().len(), 10);
        assert_eq!(
            Check::parse_list("tensor, group,tensor").unwrap(),
            vec![Check::Group, Check::Tensor]
        );
        assert!(matches!(
            Check::parse_list("group,bogus"),
            Err(Error::UnknownCheck(_))
        ));
        assert!(Check::parse_list("").is_err());
    }

    #[test]
    fn every_check_passes_on_s3() {
        let cat = Arc::new(
            decompose_irreps(&FiniteGroup::symmetric(3).unwrap(), 7, DEFAULT_TOL).unwrap(),
        );
        let cfg = SampleConfig::new(20, 7, 1e-8);
        for check in Check::ALL {
            let ws = run_check(check, &cat, &cfg).unwrap();
            for w in &ws {
                assert!(
                    w.residual <= 1e-8,
                    "{check}: {} = {} ({:?})",
                    w.label,
                    w.residual,
                    w.detail
                );
            }
        }
    }

    #[test]
    fn swap_on_z3_breaks_multiplicativity() {
        let cat =
            Arc::new(decompose_irreps(&FiniteGroup::cyclic(3).unwrap(), 1, DEFAULT_TOL).unwrap());
        let r = swap_control_residual(&cat, &SampleConfig::new(50, 1, 1e-8))
            .unwrap()
            .unwrap();
        assert!(r > CONTROL_GAP, "{r}");
    }
}
