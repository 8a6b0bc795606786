//! Acceptance criteria over the desk-scale test groups. Prints one line per
//! criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use pontryagin_core::certificate::{SampleConfig, Witness};
use pontryagin_core::checks::{non_psd_control, run_check, swap_control_residual, Check};
use pontryagin_core::convex::ConvexPoint;
use pontryagin_core::group::FiniteGroup;
use pontryagin_core::irreps::{decompose_irreps, IrrepCatalog, DEFAULT_TOL};
use pontryagin_core::monoid::completeness_witnesses;
use pontryagin_core::state::{dm_coproduct_mult, dm_space};
use pontryagin_core::verify::{run, RunSpec};

const GROUPS: [&str; 6] = [
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "symmetric:3",
    "dihedral:4",
    "quaternion8",
];
const SEED: u64 = 20;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(note.into());
        }
    }

    /// Every witness whose label passes `select` must be at most `bound`.
    fn bound(
        &mut self,
        group: &str,
        ws: &[Witness],
        select: impl Fn(&str) -> bool,
        bound: f64,
    ) -> f64 {
        let mut worst = 0.0f64;
        for w in ws.iter().filter(|w| select(&w.label)) {
            worst = worst.max(w.residual);
            self.require(
                w.residual <= bound,
                format!("{group}: {} = {:.3e} > {bound:e}", w.label, w.residual),
            );
        }
        worst
    }
}

fn label(ws: &[Witness], name: &str) -> f64 {
    ws.iter()
        .find(|w| w.label == name)
        .unwrap_or_else(|| panic!("no witness {name}"))
        .residual
}

fn catalog(desc: &str, seed: u64) -> Arc<IrrepCatalog> {
    let g = FiniteGroup::build(&desc.parse().unwrap()).unwrap();
    Arc::new(decompose_irreps(&g, seed, DEFAULT_TOL).unwrap())
}

fn cfg(samples: usize, tol: f64) -> SampleConfig {
    SampleConfig::new(samples, SEED, tol)
}

// ---- independent oracles: brute force over the multiplication table ----

fn oracle_classes(g: &FiniteGroup) -> usize {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut k = 0;
    for x in 0..n {
        if seen[x] {
            continue;
        }
        k += 1;
        for h in 0..n {
            let inv = (0..n).find(|&y| g.mul(h, y) == g.identity()).unwrap();
            seen[g.mul(g.mul(h, x), inv)] = true;
        }
    }
    k
}

fn oracle_commutator_order(g: &FiniteGroup) -> usize {
    let n = g.order();
    let inv = |x: usize| (0..n).find(|&y| g.mul(x, y) == g.identity()).unwrap();
    let mut sub = vec![false; n];
    for x in 0..n {
        for y in 0..n {
            sub[g.mul(g.mul(x, y), g.mul(inv(x), inv(y)))] = true;
        }
    }
    loop {
        let members: Vec<usize> = (0..n).filter(|&x| sub[x]).collect();
        let mut grew = false;
        for &a in &members {
            for &b in &members {
                grew |= !std::mem::replace(&mut sub[g.mul(a, b)], true);
            }
        }
        if !grew {
            return members.len();
        }
    }
}

/// All multisets of dimensions compatible with the character-table
/// constraints: k entries, each dividing |G|, squares summing to |G|, and
/// exactly |G : [G,G]| of them equal to 1.
fn oracle_dims(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let k = oracle_classes(g);
    let linear = n / oracle_commutator_order(g);
    let mut out = Vec::new();
    fn extend(prefix: &mut Vec<usize>, k: usize, left: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let lo = prefix.last().copied().unwrap_or(1);
        for d in lo..=n {
            if d * d > left {
                break;
            }
            if n.is_multiple_of(d) {
                prefix.push(d);
                extend(prefix, k, left - d * d, n, out);
                prefix.pop();
            }
        }
    }
    extend(&mut Vec::new(), k, n, n, &mut out);
    out.retain(|dims| dims.iter().filter(|&&d| d == 1).count() == linear);
    out
}

/// Homomorphisms `G → μ_|G|` by exhaustive search over all maps.
fn oracle_abelian_characters(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut homs = Vec::new();
    let mut f = vec![0usize; n];
    loop {
        let hom = (0..n).all(|x| (0..n).all(|y| f[g.mul(x, y)] == (f[x] + f[y]) % n));
        if hom {
            homs.push(f.clone());
        }
        let mut i = 0;
        while i < n {
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == n {
            return homs;
        }
    }
}

fn root(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

// ---- criteria ----

fn representation_integrity() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let g = cat.group();
        let dims = cat.dims();
        let candidates = oracle_dims(g);
        o.require(
            candidates.len() == 1,
            format!("{desc}: oracle not unique {candidates:?}"),
        );
        let mut sorted = dims.clone();
        sorted.sort();
        o.require(
            candidates.first() == Some(&sorted),
            format!("{desc}: dims {dims:?} vs oracle {candidates:?}"),
        );
        o.require(
            dims.iter().map(|d| d * d).sum::<usize>() == g.order(),
            format!("{desc}: sum of squares"),
        );
        o.require(
            dims.len() == oracle_classes(g),
            format!("{desc}: irrep count vs classes"),
        );
        let unit = cat
            .irreps()
            .iter()
            .map(|r| r.unitarity_residual().max(r.homomorphism_residual()))
            .fold(0.0, f64::max);
        o.require(
            unit <= 1e-9,
            format!("{desc}: unitarity/homomorphism {unit:e}"),
        );
        let ws = run_check(Check::Group, &cat, &cfg(1, 1e-9)).unwrap();
        o.bound(desc, &ws, |_| true, 1e-9);
    }
    o.require(catalog("symmetric:3", SEED).dims() == [1, 1, 2], "S3 dims");
    o.require(
        catalog("quaternion8", SEED).dims() == [1, 1, 1, 1, 2],
        "Q8 dims",
    );
    o
}

fn effect_axioms() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let ws = run_check(Check::EffectAxioms, &cat, &cfg(200, 1e-10)).unwrap();
        o.bound(desc, &ws, |_| true, 1e-10);
        o.require(
            label(&ws, "orthocomplement_unique") == 0.0,
            format!("{desc}: orthocomplement not unique"),
        );
        let blocks = run_check(Check::Blocks, &cat, &cfg(200, 1e-10)).unwrap();
        o.require(
            label(&blocks, "preserves_definedness") == 0.0,
            format!("{desc}: definedness bookkeeping"),
        );
    }
    o
}

fn hilbert_algebra() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let ws = run_check(Check::Hilbert, &cat, &cfg(100, 1e-9)).unwrap();
        o.bound(desc, &ws, |l| !l.ends_with("roundtrip"), 1e-10);
        o.bound(desc, &ws, |l| l.ends_with("roundtrip"), 1e-9);
        o.require(
            ws.iter().any(|w| w.label == "adjoint_at_unit"),
            "adjoint witness missing",
        );
    }
    o
}

fn block_isomorphism() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let ws = run_check(Check::Blocks, &cat, &cfg(200, 1e-9)).unwrap();
        o.bound(desc, &ws, |_| true, 1e-9);
        o.require(
            label(&ws, "layout_matches_irreps") == 0.0,
            format!("{desc}: layout"),
        );
    }
    o
}

fn fourier_and_phi() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let f = run_check(Check::Fourier, &cat, &cfg(200, 1e-10)).unwrap();
        o.bound(
            desc,
            &f,
            |l| l == "roundtrip" || l == "multiplicative",
            1e-10,
        );
        let p = run_check(Check::Phi, &cat, &cfg(200, 1e-9)).unwrap();
        o.bound(desc, &p, |l| l.starts_with("phi_"), 1e-9);
    }
    o
}

fn conjugation_form() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let ws = run_check(Check::Monoids, &cat, &cfg(200, 1e-8)).unwrap();
        o.bound(desc, &ws, |l| l == "phi_conjugates_products", 1e-8);
        o.bound(desc, &ws, |l| l.starts_with("density-coproduct."), 1e-8);
        if !cat.group().is_abelian() {
            continue;
        }
        // dual-group table against brute-force characters
        let g = cat.group();
        let n = g.order();
        let homs = oracle_abelian_characters(g);
        o.require(
            homs.len() == n,
            format!("{desc}: {} characters", homs.len()),
        );
        let which = |i: usize| -> usize {
            let chars = &cat.characters()[i];
            homs.iter()
                .position(|h| {
                    g.elements()
                        .all(|x| (chars[cat.classes().class_of(x)] - root(n, h[x])).norm() < 1e-6)
                })
                .expect("catalog character is a homomorphism")
        };
        let space = dm_space(&cat);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&homs[which(i)], &homs[which(j)]);
                let prod: Vec<usize> = (0..n).map(|x| (a[x] + b[x]) % n).collect();
                let k = (0..n).find(|&k| homs[which(k)] == prod).unwrap();
                let m = dm_coproduct_mult(&space.vertex(i), &space.vertex(j), &cat).unwrap();
                worst = worst.max(m.distance(&space.vertex(k)));
            }
        }
        o.require(
            worst <= 1e-12,
            format!("{desc}: dual table residual {worst:e}"),
        );
    }
    o
}

fn double_construction() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let p = run_check(Check::Pontryagin, &cat, &cfg(200, 1e-8)).unwrap();
        o.require(
            label(&p, "dual_of_states_is_simplex") == 0.0,
            format!("{desc}: dual of states"),
        );
        let d = run_check(Check::Double, &cat, &cfg(200, 1e-8)).unwrap();
        o.bound(desc, &d, |_| true, 1e-8);
        let c = completeness_witnesses(cat.group(), &cfg(500, 1e-8)).unwrap();
        o.bound(desc, &c, |_| true, 1e-8);
    }
    o
}

fn tensor_case() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let cat = catalog(desc, SEED);
        let ws = run_check(Check::Tensor, &cat, &cfg(200, 1e-8)).unwrap();
        o.bound(desc, &ws, |_| true, 1e-8);
        if desc == "cyclic:2" {
            o.require(
                label(&ws, "reduces_to_simplex") == 0.0,
                "Z2 does not reduce to D(4)",
            );
        }
    }
    o
}

fn negative_controls() -> Outcome {
    let mut o = Outcome::new();
    let z3 = catalog("cyclic:3", SEED);
    let r = swap_control_residual(&z3, &cfg(50, 1e-8)).unwrap();
    o.require(
        matches!(r, Some(r) if r > 0.1),
        format!("Z3 swap multiplicativity {r:?}"),
    );
    o.notes.push(format!(
        "Z3 swap multiplicativity {:.3}",
        r.unwrap_or(f64::NAN)
    ));
    for desc in GROUPS {
        o.require(
            non_psd_control(&catalog(desc, SEED)),
            format!("{desc}: non-PSD state accepted"),
        );
    }
    o
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    for desc in GROUPS {
        let spec = |seed| RunSpec::new(desc, "all", 1e-8, seed, 30, None).unwrap();
        let bits = |seed| -> Vec<(String, u64)> {
            run(&spec(seed))
                .unwrap()
                .checks
                .into_iter()
                .flat_map(|c| {
                    c.certificate
                        .witnesses
                        .into_iter()
                        .map(move |w| (format!("{}.{}", c.name, w.label), w.residual.to_bits()))
                })
                .collect()
        };
        o.require(
            bits(5) == bits(5),
            format!("{desc}: residuals differ across identical runs"),
        );

        let (a, b) = (catalog(desc, 1), catalog(desc, 99));
        o.require(a.dims() == b.dims(), format!("{desc}: dims depend on seed"));
        let chars = a
            .characters()
            .iter()
            .flatten()
            .zip(b.characters().iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        o.require(
            chars <= 1e-6,
            format!("{desc}: characters differ by {chars:e}"),
        );
    }
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("representation integrity", representation_integrity),
        ("effect-algebra axioms", effect_axioms),
        ("hilbert algebra and intertwining effects", hilbert_algebra),
        ("block isomorphism", block_isomorphism),
        ("fourier and phi roundtrips", fourier_and_phi),
        ("conjugation form of the product", conjugation_form),
        ("double construction and completeness", double_construction),
        ("tensor case", tensor_case),
        ("negative controls", negative_controls),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut all = true;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = criterion();
        all &= o.pass;
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {name} ({} ms)",
            i + 1,
            t0.elapsed().as_millis()
        );
        for note in &o.notes {
            println!("    {note}");
        }
    }
    println!("acceptance total {} ms", start.elapsed().as_millis());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
