//! Finite groups as validated multiplication tables.
//!
//! Elements are the dense indices `0..order`. Built-in constructors always
//! put the identity at index 0; explicit tables may place it anywhere.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by any constructor.
pub const MAX_ORDER: usize = 1024;

const MAX_DESCRIPTOR_DEPTH: usize = 16;

#[derive(Debug)]
struct GroupData {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

/// A finite group. Cloning is cheap; the table is shared.
#[derive(Clone, Debug)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.table == other.0.table
    }
}

impl Eq for FiniteGroup {}

/// On-disk form of an explicit multiplication table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validate `rows` as a group table: Latin square, identity, associativity.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::table("empty table", None));
        }
        if n > MAX_ORDER {
            return Err(Error::TooLarge {
                order: n,
                max: MAX_ORDER,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::table(
                    format!("row {a} has {} entries, expected {n}", row.len()),
                    None,
                ));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::table(
                        format!("entry {c} out of range"),
                        Some((a, b, c)),
                    ));
                }
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(name.into(), n, table)
    }

    fn from_flat(name: String, n: usize, table: Vec<usize>) -> Result<Self> {
        let at = |a: usize, b: usize| table[a * n + b];

        // Latin square: every row and column is a permutation.
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                let c = at(a, b);
                if seen[c] == a {
                    return Err(Error::table("row repeats an element", Some((a, b, c))));
                }
                seen[c] = a;
            }
        }
        seen.fill(usize::MAX);
        for b in 0..n {
            for a in 0..n {
                let c = at(a, b);
                if seen[c] == b {
                    return Err(Error::table("column repeats an element", Some((a, b, c))));
                }
                seen[c] = b;
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| Error::table("no two-sided identity", None))?;

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::table("associativity fails", Some((a, b, c))));
                    }
                }
            }
        }

        // Latin rows guarantee a unique right inverse, which is also a left inverse.
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| at(g, h) == identity).expect("latin row"))
            .collect();

        Ok(FiniteGroup(Arc::new(GroupData {
            name,
            order: n,
            table,
            identity,
            inverse,
        })))
    }

    fn from_fn(name: String, n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::TooLarge {
                order: n,
                max: MAX_ORDER,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(mul(a, b));
            }
        }
        Self::from_flat(name, n, table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::table("cyclic group needs n >= 1", None));
        }
        Self::from_fn(format!("cyclic:{n}"), n, |a, b| (a + b) % n)
    }

    /// Dihedral group of order `2n`; element `k + n*s` is `r^k s^s`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::table("dihedral group needs n >= 3", None));
        }
        Self::from_fn(format!("dihedral:{n}"), 2 * n, |a, b| {
            let (ka, sa) = (a % n, a / n);
            let (kb, sb) = (b % n, b / n);
            let k = if sa == 0 {
                (ka + kb) % n
            } else {
                (ka + n - kb) % n
            };
            k + n * ((sa + sb) % 2)
        })
    }

    /// Symmetric group on `n <= 4` letters, permutations in lexicographic
    /// order, composed right to left: `(gh)(x) = g(h(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::table(
                "symmetric group supported for 1 <= n <= 4",
                None,
            ));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| {
            perms
                .iter()
                .position(|q| q.as_slice() == p)
                .expect("closed")
        };
        Self::from_fn(format!("symmetric:{n}"), perms.len(), |a, b| {
            let (g, h) = (&perms[a], &perms[b]);
            let gh: Vec<usize> = (0..n).map(|x| g[h[x]]).collect();
            index(&gh)
        })
    }

    /// Quaternion group; index `2u + s` is `(-1)^s` times unit `u` of `1, i, j, k`.
    pub fn quaternion8() -> Result<Self> {
        // unit products (unit, negated) for the basis 1, i, j, k
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        Self::from_fn("quaternion8".into(), 8, |a, b| {
            let (u, neg) = UNIT[a / 2][b / 2];
            let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
            2 * u + sign
        })
    }

    /// Direct product; element `(a, b)` has index `a * |B| + b`.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let (n, m) = (a.order(), b.order());
        let order = n
            .checked_mul(m)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(Error::TooLarge {
                order: n.saturating_mul(m),
                max: MAX_ORDER,
            })?;
        Self::from_fn(
            format!("product({},{})", a.name(), b.name()),
            order,
            |x, y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m),
        )
    }

    pub fn from_table_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let parsed: GroupTable = serde_json::from_str(json)?;
        if parsed.order != parsed.table.len() {
            return Err(Error::table(
                format!("order {} but {} rows", parsed.order, parsed.table.len()),
                None,
            ));
        }
        Self::from_table(name, &parsed.table)
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_table_json(format!("table:{}", path.display()), &text)
    }

    pub fn build(desc: &GroupDescriptor) -> Result<Self> {
        desc.validate()?;
        match desc {
            GroupDescriptor::Cyclic(n) => Self::cyclic(*n),
            GroupDescriptor::Dihedral(n) => Self::dihedral(*n),
            GroupDescriptor::Symmetric(n) => Self::symmetric(*n),
            GroupDescriptor::Quaternion8 => Self::quaternion8(),
            GroupDescriptor::Product(a, b) => Self::product(&Self::build(a)?, &Self::build(b)?),
            GroupDescriptor::Table(path) => Self::from_table_file(path),
        }
    }

    pub fn to_table(&self) -> GroupTable {
        GroupTable {
            order: self.order(),
            table: self
                .0
                .table
                .chunks(self.order())
                .map(<[usize]>::to_vec)
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b]
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.0.inverse[g]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// First pair `(g, h)` with `gh != hg`, if any.
    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        self.elements()
            .flat_map(|g| self.elements().map(move |h| (g, h)))
            .find(|&(g, h)| self.mul(g, h) != self.mul(h, g))
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }

    pub fn conjugate(&self, x: usize, h: usize) -> usize {
        self.mul(self.mul(x, h), self.inverse(x))
    }

    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for h in self.elements() {
            if class_of[h] != usize::MAX {
                continue;
            }
            let mut orbit: Vec<usize> = self.elements().map(|x| self.conjugate(x, h)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &k in &orbit {
                class_of[k] = classes.len();
            }
            classes.push(orbit);
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        for (i, c) in classes.iter().enumerate() {
            for &k in c {
                class_of[k] = i;
            }
        }
        ConjugacyClasses { classes, class_of }
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = vec![false; self.order()];
        member[self.identity()] = true;
        for g in self.elements() {
            if member[g] {
                continue;
            }
            gens.push(g);
            // closure of the subgroup generated so far
            let mut frontier: Vec<usize> = (0..self.order()).filter(|&x| member[x]).collect();
            while let Some(x) = frontier.pop() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !member[y] {
                        member[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Conjugacy classes sorted by `(size, least element)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClasses {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// Parsed form of the group descriptor grammar:
/// `cyclic:N`, `dihedral:N`, `symmetric:N`, `quaternion8`, `product(A,B)`,
/// `table:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion8,
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    Table(PathBuf),
}

impl GroupDescriptor {
    /// Order of the described group, without building it. `None` for tables
    /// or out-of-range parameters.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupDescriptor::Cyclic(n) => Some(*n).filter(|&n| n >= 1),
            GroupDescriptor::Dihedral(n) => {
                Some(*n).filter(|&n| n >= 3).and_then(|n| n.checked_mul(2))
            }
            GroupDescriptor::Symmetric(n) => (1..=4).contains(n).then(|| (1..=*n).product()),
            GroupDescriptor::Quaternion8 => Some(8),
            GroupDescriptor::Product(a, b) => a.order()?.checked_mul(b.order()?),
            GroupDescriptor::Table(_) => None,
        }
    }

    /// Reject parameters that no constructor accepts, without building.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::Descriptor {
            input: self.to_string(),
            reason: reason.to_string(),
        };
        match self {
            GroupDescriptor::Cyclic(0) => Err(invalid("cyclic group needs n >= 1")),
            GroupDescriptor::Dihedral(n) if *n < 3 => Err(invalid("dihedral group needs n >= 3")),
            GroupDescriptor::Symmetric(n) if !(1..=4).contains(n) => {
                Err(invalid("symmetric group supported for 1 <= n <= 4"))
            }
            GroupDescriptor::Product(a, b) => {
                a.validate()?;
                b.validate()?;
                match (a.order(), b.order()) {
                    (Some(x), Some(y)) if x.saturating_mul(y) > MAX_ORDER => Err(Error::TooLarge {
                        order: x.saturating_mul(y),
                        max: MAX_ORDER,
                    }),
                    _ => Ok(()),
                }
            }
            _ => match self.order() {
                Some(n) if n > MAX_ORDER => Err(Error::TooLarge {
                    order: n,
                    max: MAX_ORDER,
                }),
                _ => Ok(()),
            },
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupDescriptor::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupDescriptor::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupDescriptor::Quaternion8 => write!(f, "quaternion8"),
            GroupDescriptor::Product(a, b) => write!(f, "product({a},{b})"),
            GroupDescriptor::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Descriptor {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut parser = DescriptorParser {
            rest: input.trim(),
            depth: 0,
        };
        let desc = parser.parse().map_err(|r| fail(&r))?;
        if !parser.rest.trim().is_empty() {
            return Err(fail(&format!("trailing input `{}`", parser.rest)));
        }
        Ok(desc)
    }
}

struct DescriptorParser<'a> {
    rest: &'a str,
    depth: usize,
}

impl DescriptorParser<'_> {
    fn parse(&mut self) -> std::result::Result<GroupDescriptor, String> {
        self.rest = self.rest.trim_start();
        if let Some(path) = self.rest.strip_prefix("table:") {
            // a path runs to the end of the descriptor, or to a closing
            // delimiter when nested inside product(...)
            let end = if self.depth == 0 {
                path.len()
            } else {
                path.find([',', ')']).unwrap_or(path.len())
            };
            let p = path[..end].trim();
            if p.is_empty() {
                return Err("empty table path".into());
            }
            self.rest = &path[end..];
            return Ok(GroupDescriptor::Table(PathBuf::from(p)));
        }
        if let Some(rest) = self.rest.strip_prefix("product") {
            self.depth += 1;
            if self.depth > MAX_DESCRIPTOR_DEPTH {
                return Err("product nesting too deep".into());
            }
            self.rest = rest
                .trim_start()
                .strip_prefix('(')
                .ok_or("expected `(` after product")?;
            let a = self.parse()?;
            self.rest = self
                .rest
                .trim_start()
                .strip_prefix(',')
                .ok_or("expected `,` in product")?;
            let b = self.parse()?;
            self.rest = self
                .rest
                .trim_start()
                .strip_prefix(')')
                .ok_or("expected `)` closing product")?;
            self.depth -= 1;
            return Ok(GroupDescriptor::Product(Box::new(a), Box::new(b)));
        }
        if let Some(rest) = self.rest.strip_prefix("quaternion8") {
            self.rest = rest;
            return Ok(GroupDescriptor::Quaternion8);
        }
        for (kw, make) in [
            (
                "cyclic:",
                GroupDescriptor::Cyclic as fn(usize) -> GroupDescriptor,
            ),
            ("dihedral:", GroupDescriptor::Dihedral),
            ("symmetric:", GroupDescriptor::Symmetric),
        ] {
            if let Some(rest) = self.rest.strip_prefix(kw) {
                let digits = rest
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(rest.len());
                if digits == 0 {
                    return Err(format!("expected a number after `{kw}`"));
                }
                let n: usize = rest[..digits]
                    .parse()
                    .map_err(|_| "number out of range".to_string())?;
                self.rest = &rest[digits..];
                return Ok(make(n));
            }
        }
        Err("unknown group family".into())
    }
}
