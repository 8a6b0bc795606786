//! Numerical decomposition of the regular representation into irreducibles.
//!
//! A random Hermitian matrix averaged over the group action lands in the
//! commutant of the representation; its eigenspaces are invariant subspaces.
//! Splitting recursively until every piece has a one-dimensional commutant
//! yields irreducible pieces, which are then grouped into isomorphism classes
//! by character and aligned with explicit unitary intertwiners.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ConjugacyClasses, FiniteGroup};
use crate::linalg::{self, CMatrix, C64};
use crate::rep::{character_inner, UnitaryRep};

/// Residual bound for unitarity and homomorphism checks.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Tolerance for `|⟨χ_a, χ_b⟩ − 1|` when matching isomorphic copies.
pub const CHARACTER_TOL: f64 = 1e-6;
/// Relative gap below which two eigenvalues are considered equal.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Largest order for which the regular representation is decomposed; cost
/// grows roughly as the fourth power of the order.
pub const MAX_DECOMPOSE_ORDER: usize = 128;

const MAX_RETRIES: usize = 16;

#[derive(Clone, Debug)]
pub struct IrrepCatalog {
    group: FiniteGroup,
    classes: ConjugacyClasses,
    irreps: Vec<UnitaryRep>,
    characters: Vec<Vec<C64>>,
    basis_change: CMatrix,
    block_layout: Vec<Vec<Range<usize>>>,
    seed: u64,
}

/// JSON view of a catalog: dimensions, class characters and block layout.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CatalogSummary {
    pub group: String,
    pub dims: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub characters: Vec<Vec<[f64; 2]>>,
    pub block_layout: Vec<Vec<[usize; 2]>>,
}

impl IrrepCatalog {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    pub fn irreps(&self) -> &[UnitaryRep] {
        &self.irreps
    }

    pub fn irrep(&self, i: usize) -> &UnitaryRep {
        &self.irreps[i]
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(UnitaryRep::dim).collect()
    }

    /// Characters per irrep, one value per conjugacy class.
    pub fn characters(&self) -> &[Vec<C64>] {
        &self.characters
    }

    /// Unitary whose columns are adapted to the isotypic decomposition.
    pub fn basis_change(&self) -> &CMatrix {
        &self.basis_change
    }

    /// For irrep `i`, the row ranges of its `dim V_i` copies.
    pub fn block_layout(&self) -> &[Vec<Range<usize>>] {
        &self.block_layout
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the trivial representation.
    pub fn trivial_index(&self) -> usize {
        self.characters
            .iter()
            .position(|chi| chi.iter().all(|z| (z - linalg::ONE).norm() < CHARACTER_TOL))
            .expect("every catalog contains the trivial representation")
    }

    /// Worst residual of `B* ρ_reg(g) B` against the block-diagonal matrix
    /// built from the catalog irreps.
    pub fn block_diagonal_residual(&self) -> f64 {
        let reg = UnitaryRep::regular(&self.group);
        let b = &self.basis_change;
        let bh = b.adjoint();
        let mut worst = 0.0f64;
        for g in self.group.elements() {
            let conj = &bh * reg.matrix(g) * b;
            let mut expected = CMatrix::zeros(b.ncols(), b.ncols());
            for (i, copies) in self.block_layout.iter().enumerate() {
                for r in copies {
                    expected
                        .view_mut((r.start, r.start), (r.len(), r.len()))
                        .copy_from(self.irreps[i].matrix(g));
                }
            }
            worst = worst.max(linalg::max_abs_diff(&conj, &expected));
        }
        worst
    }

    /// Largest deviation of the Gram matrix of characters from the identity.
    pub fn schur_orthogonality_residual(&self) -> f64 {
        let chars: Vec<Vec<C64>> = self.irreps.iter().map(UnitaryRep::character).collect();
        let mut worst = 0.0f64;
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((character_inner(a, b) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn summary(&self) -> CatalogSummary {
        CatalogSummary {
            group: self.group.name().to_string(),
            dims: self.dims(),
            class_sizes: self.classes.sizes(),
            characters: self
                .characters
                .iter()
                .map(|chi| chi.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            block_layout: self
                .block_layout
                .iter()
                .map(|copies| copies.iter().map(|r| [r.start, r.end]).collect())
                .collect(),
        }
    }
}

/// Decompose the regular representation of `group`.
///
/// Deterministic for a given `seed`. `tol` bounds the unitarity,
/// homomorphism and block-diagonalisation residuals of the result.
pub fn decompose_irreps(group: &FiniteGroup, seed: u64, tol: f64) -> Result<IrrepCatalog> {
    if group.order() > MAX_DECOMPOSE_ORDER {
        return Err(Error::TooLarge {
            order: group.order(),
            max: MAX_DECOMPOSE_ORDER,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regular = UnitaryRep::regular(group);
    let n = group.order();

    let mut pieces: Vec<CMatrix> = Vec::new();
    let mut stack = vec![(linalg::identity(n), 0usize)];
    while let Some((basis, attempts)) = stack.pop() {
        let sub = regular.restrict(&basis);
        let m = sub.dim();
        if m == 1 {
            pieces.push(basis);
            continue;
        }
        let h = linalg::random_hermitian(m, &mut rng);
        let avg = sub.average_intertwiner(&sub, &h);
        let (values, vectors) = linalg::hermitian_eigen(&avg);
        let clusters = cluster(&values);
        if clusters.len() > 1 {
            for range in clusters {
                stack.push((&basis * linalg::columns(&vectors, range), 0));
            }
        } else if sub.commutant_dim() == 1 {
            pieces.push(basis);
        } else if attempts + 1 < MAX_RETRIES {
            stack.push((basis, attempts + 1));
        } else {
            return Err(Error::DecompositionFailed(format!(
                "a block of dimension {m} did not split after {MAX_RETRIES} attempts"
            )));
        }
    }

    // Group the pieces into isomorphism classes by character.
    let reps: Vec<UnitaryRep> = pieces.iter().map(|q| regular.restrict(q)).collect();
    let chars: Vec<Vec<C64>> = reps.iter().map(UnitaryRep::character).collect();
    let mut families: Vec<Vec<usize>> = Vec::new();
    for p in 0..pieces.len() {
        let home = families.iter_mut().find(|fam| {
            (character_inner(&chars[fam[0]], &chars[p]) - linalg::ONE).norm() <= CHARACTER_TOL
        });
        match home {
            Some(fam) => fam.push(p),
            None => families.push(vec![p]),
        }
    }

    let classes = group.conjugacy_classes();
    struct Family {
        rep: UnitaryRep,
        key: Vec<(i64, i64)>,
        bases: Vec<CMatrix>,
    }
    let mut fams = Vec::with_capacity(families.len());
    for fam in families {
        let lead = fam[0];
        let rep = reps[lead].clone();
        let d = rep.dim();
        if fam.len() != d {
            return Err(Error::DecompositionFailed(format!(
                "irrep of dimension {d} appears {} times in the regular representation",
                fam.len()
            )));
        }
        if rep.commutant_dim() != 1 {
            return Err(Error::DecompositionFailed(format!(
                "piece of dimension {d} is not irreducible"
            )));
        }
        let mut bases = vec![pieces[lead].clone()];
        for &p in &fam[1..] {
            let w = unitary_intertwiner(&rep, &reps[p], &mut rng)?;
            // Q' = Q W* satisfies Q'* ρ Q' = W ρ_p W* = ρ_lead
            bases.push(&pieces[p] * w.adjoint());
        }
        let key = rep
            .class_character(&classes)
            .iter()
            .flat_map(|z| [round6(z.re), round6(z.im)])
            .collect::<Vec<_>>()
            .chunks(2)
            .map(|c| (c[0], c[1]))
            .collect();
        fams.push(Family { rep, key, bases });
    }

    // dimension ascending, then characters descending so the trivial
    // representation leads
    fams.sort_by(|a, b| {
        a.rep
            .dim()
            .cmp(&b.rep.dim())
            .then_with(|| b.key.cmp(&a.key))
    });

    let mut basis_change = CMatrix::zeros(n, n);
    let mut block_layout = Vec::with_capacity(fams.len());
    let mut col = 0;
    for fam in &fams {
        let d = fam.rep.dim();
        let mut copies = Vec::with_capacity(d);
        for q in &fam.bases {
            basis_change.view_mut((0, col), (n, d)).copy_from(q);
            copies.push(col..col + d);
            col += d;
        }
        block_layout.push(copies);
    }

    let irreps: Vec<UnitaryRep> = fams.into_iter().map(|f| f.rep).collect();
    let characters = irreps.iter().map(|r| r.class_character(&classes)).collect();
    let catalog = IrrepCatalog {
        group: group.clone(),
        classes,
        irreps,
        characters,
        basis_change,
        block_layout,
        seed,
    };

    let sum_sq: usize = catalog.dims().iter().map(|d| d * d).sum();
    if sum_sq != n {
        return Err(Error::DecompositionFailed(format!(
            "Σ d² = {sum_sq} ≠ |G| = {n}"
        )));
    }
    if catalog.len() != catalog.classes.len() {
        return Err(Error::DecompositionFailed(format!(
            "{} irreps but {} conjugacy classes",
            catalog.len(),
            catalog.classes.len()
        )));
    }
    for rep in &catalog.irreps {
        let res = rep.unitarity_residual().max(rep.homomorphism_residual());
        if res > tol {
            return Err(Error::DecompositionFailed(format!(
                "irrep residual {res:e} exceeds {tol:e}"
            )));
        }
    }
    let schur = catalog.schur_orthogonality_residual();
    if schur > CHARACTER_TOL {
        return Err(Error::DecompositionFailed(format!(
            "Schur orthogonality residual {schur:e}"
        )));
    }
    let block = catalog.block_diagonal_residual();
    if block > 10.0 * tol {
        return Err(Error::DecompositionFailed(format!(
            "block-diagonal residual {block:e}"
        )));
    }
    Ok(catalog)
}

fn round6(x: f64) -> i64 {
    let r = (x * 1e6).round() as i64;
    if r == 0 {
        0
    } else {
        r
    }
}

/// Split sorted eigenvalues into runs whose consecutive gaps are below the
/// relative clustering tolerance.
fn cluster(values: &[f64]) -> Vec<Range<usize>> {
    let scale = values.iter().map(|v| v.abs()).fold(1e-300, f64::max);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > CLUSTER_TOL * scale {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Unitary `W` with `W b(g) = a(g) W`, for isomorphic irreducibles `a`, `b`.
fn unitary_intertwiner(a: &UnitaryRep, b: &UnitaryRep, rng: &mut ChaCha8Rng) -> Result<CMatrix> {
    let d = a.dim();
    for _ in 0..MAX_RETRIES {
        let x = linalg::random_complex(d, d, rng);
        let t = a.average_intertwiner(b, &x);
        // Schur: T = c·W with W unitary, so T T* = |c|² I
        let c2 = linalg::trace(&(&t * t.adjoint())).re / d as f64;
        if c2 > 1e-6 {
            return Ok(t.unscale(c2.sqrt()));
        }
    }
    Err(Error::DecompositionFailed(
        "could not align isomorphic copies".into(),
    ))
}
