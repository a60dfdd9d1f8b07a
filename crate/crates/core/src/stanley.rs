//! Stanley spaces `uK[Z]` and Stanley decompositions of `I/J` over `S_f`.
//!
//! A space is stored as its root `u` together with one [`Dir`] per variable:
//! `Up` when `x_i ∈ Z`, `Down` when `x_i^{-1} ∈ Z` (only for inverted `i`) and
//! `Fixed` otherwise. Its monomials are then exactly the lattice points of the
//! axis-aligned region returned by [`StanleySpace::region`].
//!
//! Since every multigraded component of `I/J` has dimension at most one, a
//! family of spaces is a direct sum iff the regions are pairwise disjoint, so
//! verification reduces to counting lattice points.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{var_name, Monomial, MonomialIdeal, RingContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Fixed,
    Up,
    Down,
}

/// Constraint on one exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Bound {
    Fixed(i64),
    AtLeast(i64),
    AtMost(i64),
}

impl Bound {
    pub fn admits(self, e: i64) -> bool {
        match self {
            Bound::Fixed(c) => e == c,
            Bound::AtLeast(c) => e >= c,
            Bound::AtMost(c) => e <= c,
        }
    }
}

/// Lattice-geometry view of a Stanley space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region(pub Vec<Bound>);

impl Region {
    pub fn admits(&self, m: &[i64]) -> bool {
        self.0.iter().zip(m).all(|(b, &e)| b.admits(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct StanleySpace {
    root: Monomial,
    dirs: Vec<Dir>,
}

/// JSON form with 1-based variable indices.
#[derive(Serialize, Deserialize)]
struct SpaceJson {
    root: Vec<i64>,
    zplus: Vec<usize>,
    zminus: Vec<usize>,
}

impl TryFrom<SpaceJson> for StanleySpace {
    type Error = Error;

    fn try_from(json: SpaceJson) -> Result<Self> {
        let n = json.root.len();
        let to_zero_based = |v: &[usize]| {
            v.iter()
                .map(|&i| match i.checked_sub(1) {
                    Some(i) if i < n => Ok(i),
                    _ => Err(Error::Malformed(format!("variable index {i} out of range"))),
                })
                .collect::<Result<BTreeSet<_>>>()
        };
        let plus = to_zero_based(&json.zplus)?;
        let minus = to_zero_based(&json.zminus)?;
        StanleySpace::from_sets(Monomial::new(json.root), &plus, &minus)
    }
}

impl From<StanleySpace> for SpaceJson {
    fn from(s: StanleySpace) -> Self {
        SpaceJson {
            zplus: s.z_plus().iter().map(|i| i + 1).collect(),
            zminus: s.z_minus().iter().map(|i| i + 1).collect(),
            root: s.root.exponents().to_vec(),
        }
    }
}

impl StanleySpace {
    /// Space with root `u` and the given directions; checked against `ctx`.
    pub fn new(ctx: &RingContext, root: Monomial, dirs: Vec<Dir>) -> Result<Self> {
        ctx.check_monomial(&root)?;
        if dirs.len() != ctx.n() {
            return Err(Error::ContextMismatch(format!(
                "space has {} directions, ring has {} variables",
                dirs.len(),
                ctx.n()
            )));
        }
        if let Some(i) = (0..ctx.n()).find(|&i| dirs[i] == Dir::Down && !ctx.is_inverted(i)) {
            return Err(Error::Malformed(format!(
                "x{}^-1 used in a space but x{} is not inverted",
                i + 1,
                i + 1
            )));
        }
        Ok(StanleySpace { root, dirs })
    }

    /// Builds from `Z_plus`/`Z_minus`; rejects `x_j` and `x_j^{-1}` together.
    pub fn from_sets(
        root: Monomial,
        plus: &BTreeSet<usize>,
        minus: &BTreeSet<usize>,
    ) -> Result<Self> {
        if let Some(i) = plus.intersection(minus).next() {
            return Err(Error::Malformed(format!(
                "x{0} and x{0}^-1 both in Z",
                i + 1
            )));
        }
        let n = root.len();
        if let Some(&i) = plus.iter().chain(minus).find(|&&i| i >= n) {
            return Err(Error::Malformed(format!(
                "variable index {} out of range",
                i + 1
            )));
        }
        let dirs = (0..n)
            .map(|i| {
                if plus.contains(&i) {
                    Dir::Up
                } else if minus.contains(&i) {
                    Dir::Down
                } else {
                    Dir::Fixed
                }
            })
            .collect();
        Ok(StanleySpace { root, dirs })
    }

    pub fn root(&self) -> &Monomial {
        &self.root
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.dirs
    }

    pub fn z_plus(&self) -> BTreeSet<usize> {
        self.indices(Dir::Up)
    }

    pub fn z_minus(&self) -> BTreeSet<usize> {
        self.indices(Dir::Down)
    }

    fn indices(&self, d: Dir) -> BTreeSet<usize> {
        (0..self.dirs.len())
            .filter(|&i| self.dirs[i] == d)
            .collect()
    }

    /// `|Z|`.
    pub fn dim(&self) -> usize {
        self.dirs.iter().filter(|&&d| d != Dir::Fixed).count()
    }

    pub fn region(&self) -> Region {
        Region(
            self.root
                .exponents()
                .iter()
                .zip(&self.dirs)
                .map(|(&u, d)| match d {
                    Dir::Fixed => Bound::Fixed(u),
                    Dir::Up => Bound::AtLeast(u),
                    Dir::Down => Bound::AtMost(u),
                })
                .collect(),
        )
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.len() == self.dirs.len() && self.contains_exponents(m.exponents())
    }

    pub fn contains_exponents(&self, m: &[i64]) -> bool {
        self.root
            .exponents()
            .iter()
            .zip(&self.dirs)
            .zip(m)
            .all(|((&u, d), &a)| match d {
                Dir::Fixed => a == u,
                Dir::Up => a >= u,
                Dir::Down => a <= u,
            })
    }

    /// Splits off the root along a free direction `i`:
    /// `uK[Z] = uK[Z \ {x_i^{±1}}] ⊕ u·x_i^{±1}K[Z]`.
    pub fn split(&self, i: usize) -> Option<(StanleySpace, StanleySpace)> {
        let step = match self.dirs[i] {
            Dir::Fixed => return None,
            Dir::Up => 1,
            Dir::Down => -1,
        };
        let mut dirs = self.dirs.clone();
        dirs[i] = Dir::Fixed;
        let fixed = StanleySpace {
            root: self.root.clone(),
            dirs,
        };
        let moved = StanleySpace {
            root: self.root.shifted(i, step).ok()?,
            dirs: self.dirs.clone(),
        };
        Some((fixed, moved))
    }

    fn insert_var(&self, pos: usize, exp: i64, dir: Dir) -> StanleySpace {
        let mut dirs = self.dirs.clone();
        dirs.insert(pos, dir);
        StanleySpace {
            root: self.root.insert_var(pos, exp),
            dirs,
        }
    }
}

impl fmt::Display for StanleySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dirs.len();
        write!(f, "{} * K[", self.root)?;
        let mut first = true;
        for (i, d) in self.dirs.iter().enumerate() {
            let g = match d {
                Dir::Fixed => continue,
                Dir::Up => var_name(n, i),
                Dir::Down => format!("{}^-1", var_name(n, i)),
            };
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StanleyDecomposition {
    ring: RingContext,
    spaces: Vec<StanleySpace>,
}

impl StanleyDecomposition {
    pub fn new(ctx: &RingContext, spaces: Vec<StanleySpace>) -> Result<Self> {
        for s in &spaces {
            StanleySpace::new(ctx, s.root.clone(), s.dirs.clone())?;
        }
        Ok(StanleyDecomposition {
            ring: ctx.clone(),
            spaces,
        })
    }

    pub fn context(&self) -> &RingContext {
        &self.ring
    }

    pub fn spaces(&self) -> &[StanleySpace] {
        &self.spaces
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    /// `min |Z_i|`.
    pub fn sdepth(&self) -> Result<usize> {
        self.spaces
            .iter()
            .map(StanleySpace::dim)
            .min()
            .ok_or(Error::EmptyDecomposition)
    }

    /// Equality of the spaces as multisets.
    pub fn same_spaces(&self, other: &StanleyDecomposition) -> bool {
        let mut a = self.spaces.clone();
        let mut b = other.spaces.clone();
        a.sort();
        b.sort();
        self.ring == other.ring && a == b
    }

    /// Adjoins a new last variable `t`; see [`insert_variable`](Self::insert_variable).
    pub fn adjoin_variable(&self, laurent: bool) -> StanleyDecomposition {
        self.insert_variable(self.ring.n(), laurent)
    }

    /// Adjoins a variable at index `pos`. Each `vK[Z]` becomes `vK[Z, t]`,
    /// and for a Laurent variable additionally `v t^{-1} K[Z, t^{-1}]`.
    pub fn insert_variable(&self, pos: usize, laurent: bool) -> StanleyDecomposition {
        assert!(pos <= self.ring.n());
        let inverted = self
            .ring
            .inverted()
            .iter()
            .map(|&i| if i >= pos { i + 1 } else { i })
            .chain(laurent.then_some(pos));
        let ring = RingContext::new(self.ring.n() + 1, inverted).expect("indices shifted in range");
        let mut spaces = Vec::with_capacity(self.spaces.len() * (1 + laurent as usize));
        for s in &self.spaces {
            spaces.push(s.insert_var(pos, 0, Dir::Up));
            if laurent {
                spaces.push(s.insert_var(pos, -1, Dir::Down));
            }
        }
        StanleyDecomposition { ring, spaces }
    }
}

impl fmt::Display for StanleyDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spaces.is_empty() {
            return write!(f, "0");
        }
        for (k, s) in self.spaces.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// `S_f = ⊕_{L ⊆ A} f_L^{-1} K[Z_L]`, with the subsets `L` in binary order
/// over the sorted inverted indices.
pub fn canonical_sf_decomposition(ctx: &RingContext) -> StanleyDecomposition {
    let inv: Vec<usize> = ctx.inverted().iter().copied().collect();
    let spaces = subsets(&inv)
        .map(|l| {
            let mut root = vec![0; ctx.n()];
            let mut dirs = vec![Dir::Up; ctx.n()];
            for &i in &l {
                root[i] = -1;
                dirs[i] = Dir::Down;
            }
            StanleySpace {
                root: Monomial::new(root),
                dirs,
            }
        })
        .collect();
    StanleyDecomposition {
        ring: ctx.clone(),
        spaces,
    }
}

fn subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &i)| i)
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DefectKind {
    /// Lattice point in two spaces (indices into the decomposition).
    Overlap { first: usize, second: usize },
    /// Monomial of `I \ J` in no space.
    Uncovered,
    /// Monomial of a space outside `I \ J`.
    Outside { space: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    #[serde(flatten)]
    pub kind: DefectKind,
    pub witness: Monomial,
}

/// Outcome of [`verify_decomposition`].
///
/// All membership predicates involved are threshold comparisons with
/// thresholds of absolute value below `bound`, so clamping a lattice point
/// into `[-bound, bound]` (`[0, bound]` off the inverted set) preserves every
/// predicate. A verdict on the clamp box therefore holds on all of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub bound: i64,
    pub points_checked: u64,
    pub defect: Option<Defect>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.defect.is_none()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.defect {
            None => write!(
                f,
                "valid (clamp box bound {}, {} lattice points checked)",
                self.bound, self.points_checked
            ),
            Some(d) => {
                write!(f, "invalid: ")?;
                match d.kind {
                    DefectKind::Overlap { first, second } => write!(
                        f,
                        "{} lies in spaces #{} and #{}",
                        d.witness,
                        first + 1,
                        second + 1
                    )?,
                    DefectKind::Uncovered => {
                        write!(f, "{} lies in I \\ J but in no space", d.witness)?
                    }
                    DefectKind::Outside { space } => {
                        write!(f, "{} in space #{} is not in I \\ J", d.witness, space + 1)?
                    }
                }
                write!(f, " (clamp box bound {})", self.bound)
            }
        }
    }
}

/// The bound `B = 1 + max |exponent|` over `G(I)`, `G(J)` and the roots of `D`.
pub fn clamp_bound(d: &StanleyDecomposition, i: &MonomialIdeal, j: &MonomialIdeal) -> i64 {
    let roots = d
        .spaces
        .iter()
        .flat_map(|s| s.root.exponents().iter())
        .map(|e| e.abs())
        .max()
        .unwrap_or(0);
    1 + roots.max(i.max_abs_exponent()).max(j.max_abs_exponent())
}

/// Lattice points of the clamp box `∏ [lo_i, bound]`, indexed in
/// lexicographic order.
pub(crate) struct ClampBox {
    lows: Vec<i64>,
    widths: Vec<u64>,
    total: u64,
}

impl ClampBox {
    pub(crate) fn new(ctx: &RingContext, bound: i64) -> Result<Self> {
        let lows: Vec<i64> = (0..ctx.n())
            .map(|i| if ctx.is_inverted(i) { -bound } else { 0 })
            .collect();
        let widths: Vec<u64> = lows.iter().map(|&lo| (bound - lo + 1) as u64).collect();
        let total = widths
            .iter()
            .try_fold(1u64, |acc, &w| acc.checked_mul(w))
            .ok_or(Error::Overflow("clamp box size"))?;
        Ok(ClampBox {
            lows,
            widths,
            total,
        })
    }

    pub(crate) fn total(&self) -> u64 {
        self.total
    }

    pub(crate) fn point(&self, mut idx: u64) -> Vec<i64> {
        let mut p = vec![0; self.lows.len()];
        for k in (0..self.lows.len()).rev() {
            p[k] = self.lows[k] + (idx % self.widths[k]) as i64;
            idx /= self.widths[k];
        }
        p
    }
}

/// Checks that `D` is a Stanley decomposition of `I/J`: pairwise disjoint
/// spaces, every space inside `I \ J`, every monomial of `I \ J` covered.
///
/// `box_bound` overrides the computed clamp bound; smaller values are
/// rejected. Precondition failures (contexts, `J ⊄ I`, roots outside `I \ J`)
/// are errors, not invalid reports.
pub fn verify_decomposition(
    d: &StanleyDecomposition,
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    box_bound: Option<i64>,
) -> Result<VerificationReport> {
    d.ring.ensure_same(i.context())?;
    j.ensure_subset_of(i)?;
    for (k, s) in d.spaces.iter().enumerate() {
        let r = s.root.exponents();
        if !i.contains_exponents(r) || j.contains_exponents(r) {
            return Err(Error::RootOutside {
                index: k,
                root: s.root.to_string(),
            });
        }
    }
    let required = clamp_bound(d, i, j);
    let bound = match box_bound {
        Some(b) if b < required => return Err(Error::BoxBoundTooSmall { given: b, required }),
        Some(b) => b,
        None => required,
    };
    let cbox = ClampBox::new(&d.ring, bound)?;
    let defect = (0..cbox.total()).into_par_iter().find_map_first(|idx| {
        let p = cbox.point(idx);
        let inside = i.contains_exponents(&p) && !j.contains_exponents(&p);
        let mut hits = d
            .spaces
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains_exponents(&p))
            .map(|(k, _)| k);
        let kind = match (hits.next(), hits.next()) {
            (Some(first), Some(second)) => DefectKind::Overlap { first, second },
            (Some(space), None) if !inside => DefectKind::Outside { space },
            (None, None) if inside => DefectKind::Uncovered,
            _ => return None,
        };
        Some(Defect {
            kind,
            witness: Monomial::new(p),
        })
    });
    Ok(VerificationReport {
        bound,
        points_checked: cbox.total(),
        defect,
    })
}

/// Result of [`localize_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Localization {
    pub decomposition: StanleyDecomposition,
    /// Spaces of the input whose `Z` misses some `x_l`, `l ∈ A`; they vanish
    /// after inverting `f`.
    pub dropped: Vec<usize>,
}

/// Localizes a decomposition of `I/J ⊂ S` at `f = ∏_{l ∈ A} x_l`: every space
/// `u_i K[Z_i]` with `{x_l : l ∈ A} ⊆ Z_i` contributes `u_i f_L^{-1} K[Z_i^L]`
/// for each `L ⊆ A`, where `Z_i^L` trades `x_l` for `x_l^{-1}` when `l ∈ L`.
pub fn localize_decomposition(
    d: &StanleyDecomposition,
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    a: &BTreeSet<usize>,
) -> Result<Localization> {
    if !d.ring.is_polynomial() {
        return Err(Error::ContextMismatch(format!(
            "localization expects a decomposition over the polynomial ring, got {}",
            d.ring
        )));
    }
    let report = verify_decomposition(d, i, j, None)?;
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report.to_string()));
    }
    let ring = d.ring.with_inverted(a.iter().copied())?;
    let a: Vec<usize> = a.iter().copied().collect();
    let mut spaces = Vec::new();
    let mut dropped = Vec::new();
    for (k, s) in d.spaces.iter().enumerate() {
        if a.iter().any(|&l| s.dirs[l] != Dir::Up) {
            dropped.push(k);
            continue;
        }
        for l in subsets(&a) {
            let mut root = s.root.exponents().to_vec();
            let mut dirs = s.dirs.clone();
            for &x in &l {
                root[x] -= 1;
                dirs[x] = Dir::Down;
            }
            spaces.push(StanleySpace {
                root: Monomial::new(root),
                dirs,
            });
        }
    }
    Ok(Localization {
        decomposition: StanleyDecomposition { ring, spaces },
        dropped,
    })
}

/// Intersects a decomposition of `(I/J)[t^{±1}]` (or `(I/J)[t]`) with the
/// base ring: spaces meeting `t`-degree 0 keep their root and `Z` with `t`
/// removed, the others vanish.
#[cfg(test)]
pub(crate) fn intersect_with_base(
    d: &StanleyDecomposition,
    base: &RingContext,
) -> StanleyDecomposition {
    let t = d.ring.n() - 1;
    let spaces = d
        .spaces
        .iter()
        .filter(|s| s.region().0[t].admits(0))
        .map(|s| {
            let mut root = s.root.exponents().to_vec();
            let mut dirs = s.dirs.clone();
            root.remove(t);
            dirs.remove(t);
            StanleySpace {
                root: Monomial::new(root),
                dirs,
            }
        })
        .collect();
    StanleyDecomposition {
        ring: base.clone(),
        spaces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax;

    fn ctx(n: usize, inv: &[usize]) -> RingContext {
        RingContext::new(n, inv.iter().map(|i| i - 1)).unwrap()
    }

    fn ideal(c: &RingContext, s: &str) -> MonomialIdeal {
        syntax::parse_ideal(s, c).unwrap()
    }

    fn dec(c: &RingContext, s: &str) -> StanleyDecomposition {
        syntax::parse_decomposition(s, c).unwrap()
    }

    fn space(c: &RingContext, s: &str) -> StanleySpace {
        dec(c, s).spaces[0].clone()
    }

    #[test]
    fn regions() {
        let c = ctx(2, &[]);
        assert_eq!(
            space(&c, "x * K[x, y]").region(),
            Region(vec![Bound::AtLeast(1), Bound::AtLeast(0)])
        );
        let c = ctx(3, &[3]);
        assert_eq!(
            space(&c, "x*z^-1 * K[y]").region(),
            Region(vec![Bound::Fixed(1), Bound::AtLeast(0), Bound::Fixed(-1)])
        );
        let c = ctx(3, &[2, 3]);
        assert_eq!(
            space(&c, "y^-1 * K[x, y^-1, z]").region(),
            Region(vec![
                Bound::AtLeast(0),
                Bound::AtMost(-1),
                Bound::AtLeast(0)
            ])
        );
    }

    #[test]
    fn containment() {
        let c = ctx(3, &[]);
        let s = space(&c, "y * K[y]");
        assert!(s.contains(&Monomial::new(vec![0, 4, 0])));
        assert!(!s.contains(&Monomial::new(vec![1, 1, 0])));
        let c = ctx(3, &[2]);
        let s = space(&c, "1 * K[y^-1]");
        assert!(s.contains(&Monomial::new(vec![0, -3, 0])));
    }

    #[test]
    fn region_matches_product_enumeration() {
        // u·v for v ∈ Mon(K[Z]) with bounded exponents, versus the region test
        let c = ctx(3, &[2, 3]);
        let s = space(&c, "x*y^2*z^-1 * K[x, y^-1]");
        let mut products = BTreeSet::new();
        for a in 0..4 {
            for b in 0..5 {
                products.insert(vec![1 + a, 2 - b, -1]);
            }
        }
        for x in 0..4 {
            for y in -2..=2 {
                for z in -2..=2 {
                    let p = vec![x, y, z];
                    assert_eq!(s.contains_exponents(&p), products.contains(&p), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn canonical_decomposition_of_sf() {
        let c = ctx(3, &[2, 3]);
        let d = canonical_sf_decomposition(&c);
        let expected = dec(
            &c,
            "1 * K[x, y, z] + y^-1 * K[x, y^-1, z] + z^-1 * K[x, y, z^-1] + y^-1*z^-1 * K[x, y^-1, z^-1]",
        );
        assert!(d.same_spaces(&expected));
        assert_eq!(d.sdepth().unwrap(), 3);
        let unit = MonomialIdeal::unit(&c);
        let zero = MonomialIdeal::zero(&c);
        assert!(verify_decomposition(&d, &unit, &zero, None)
            .unwrap()
            .is_valid());

        let c1 = ctx(1, &[]);
        assert_eq!(canonical_sf_decomposition(&c1).to_string(), "1 * K[x]");

        let c2 = ctx(2, &[1]);
        let d2 = canonical_sf_decomposition(&c2);
        assert!(d2.same_spaces(&dec(&c2, "1 * K[x, y] + x^-1 * K[x^-1, y]")));
        let r = verify_decomposition(
            &d2,
            &MonomialIdeal::unit(&c2),
            &MonomialIdeal::zero(&c2),
            None,
        )
        .unwrap();
        assert!(r.is_valid());
    }

    #[test]
    fn verify_examples() {
        let c = ctx(3, &[]);
        let i = ideal(&c, "(y)");
        let j = ideal(&c, "(x*y, y*z)");
        let d = dec(&c, "y * K[y]");
        assert!(verify_decomposition(&d, &i, &j, None).unwrap().is_valid());

        let c1 = ctx(1, &[]);
        let d = dec(&c1, "1 * K[x] + x * K[x]");
        let r = verify_decomposition(
            &d,
            &MonomialIdeal::unit(&c1),
            &MonomialIdeal::zero(&c1),
            None,
        )
        .unwrap();
        assert_eq!(
            r.defect,
            Some(Defect {
                kind: DefectKind::Overlap {
                    first: 0,
                    second: 1
                },
                witness: Monomial::new(vec![1]),
            })
        );
    }

    #[test]
    fn verify_reports_uncovered_and_outside() {
        let c = ctx(2, &[]);
        let i = ideal(&c, "(x)");
        let zero = MonomialIdeal::zero(&c);
        let r = verify_decomposition(&dec(&c, "x * K[x]"), &i, &zero, None).unwrap();
        assert_eq!(r.defect.unwrap().kind, DefectKind::Uncovered);
        let r = verify_decomposition(
            &dec(&c, "x * K[x, y]"),
            &ideal(&c, "(x)"),
            &ideal(&c, "(x*y^2)"),
            None,
        )
        .unwrap();
        assert_eq!(r.defect.unwrap().kind, DefectKind::Outside { space: 0 });
    }

    #[test]
    fn verify_precondition_errors() {
        let c = ctx(2, &[]);
        let i = ideal(&c, "(x)");
        let j = ideal(&c, "(y)");
        let d = dec(&c, "x * K[x]");
        assert!(matches!(
            verify_decomposition(&d, &i, &j, None),
            Err(Error::NotContained(_))
        ));
        let d = dec(&c, "y * K[y]");
        assert!(matches!(
            verify_decomposition(&d, &i, &MonomialIdeal::zero(&c), None),
            Err(Error::RootOutside { index: 0, .. })
        ));
        let d = dec(&c, "x * K[x, y]");
        assert!(matches!(
            verify_decomposition(&d, &i, &MonomialIdeal::zero(&c), Some(1)),
            Err(Error::BoxBoundTooSmall {
                given: 1,
                required: 2
            })
        ));
    }

    #[test]
    fn localize_maximal_ideal_at_x() {
        let c = ctx(3, &[]);
        let i = ideal(&c, "(x, y, z)");
        let zero = MonomialIdeal::zero(&c);
        let d = dec(
            &c,
            "x * K[x, y] + y * K[y, z] + z * K[x, z] + x*y*z * K[x, y, z]",
        );
        assert_eq!(d.sdepth().unwrap(), 2);
        let loc = localize_decomposition(&d, &i, &zero, &BTreeSet::from([0])).unwrap();
        let cf = ctx(3, &[1]);
        let expected = dec(
            &cf,
            "x * K[x, y] + 1 * K[x^-1, y] + z * K[x, z] + x^-1*z * K[x^-1, z] + x*y*z * K[x, y, z] + y*z * K[x^-1, y, z]",
        );
        assert_eq!(loc.decomposition, expected);
        assert_eq!(loc.dropped, vec![1]);
        assert_eq!(loc.decomposition.sdepth().unwrap(), 2);
        let r = verify_decomposition(
            &loc.decomposition,
            &i.extend(&cf).unwrap(),
            &zero.extend(&cf).unwrap(),
            None,
        )
        .unwrap();
        assert!(r.is_valid());
    }

    #[test]
    fn localize_first_examples() {
        let c = ctx(3, &[]);
        let i = ideal(&c, "(y)");
        let j = ideal(&c, "(x*y, y*z)");
        let loc =
            localize_decomposition(&dec(&c, "y * K[y]"), &i, &j, &BTreeSet::from([1])).unwrap();
        let cf = ctx(3, &[2]);
        assert_eq!(loc.decomposition, dec(&cf, "y * K[y] + 1 * K[y^-1]"));
        assert_eq!(loc.decomposition.sdepth().unwrap(), 1);

        let c = ctx(2, &[]);
        let i = ideal(&c, "(x^2, x*y)");
        let j = ideal(&c, "(x^3*y, x^2*y^2)");
        let d = dec(&c, "x*y * K[y] + x^2 * K[x] + x^2*y * K[]");
        assert_eq!(d.sdepth().unwrap(), 0);
        let loc = localize_decomposition(&d, &i, &j, &BTreeSet::from([0])).unwrap();
        let cf = ctx(2, &[1]);
        assert_eq!(loc.decomposition, dec(&cf, "x^2 * K[x] + x * K[x^-1]"));
        assert_eq!(loc.dropped, vec![0, 2]);
        assert_eq!(loc.decomposition.sdepth().unwrap(), 1);
    }

    #[test]
    fn localize_rejects_invalid_input() {
        let c = ctx(1, &[]);
        let d = dec(&c, "1 * K[x] + x * K[x]");
        let err = localize_decomposition(
            &d,
            &MonomialIdeal::unit(&c),
            &MonomialIdeal::zero(&c),
            &BTreeSet::from([0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidDecomposition(_)));
    }

    #[test]
    fn adjoin_variable_examples() {
        let c = ctx(1, &[]);
        let d = dec(&c, "1 * K[x]");
        let poly = d.adjoin_variable(false);
        assert_eq!(poly, dec(&ctx(2, &[]), "1 * K[x, y]"));
        let laurent = d.adjoin_variable(true);
        assert_eq!(
            laurent,
            dec(&ctx(2, &[2]), "1 * K[x, y] + y^-1 * K[x, y^-1]")
        );
        assert_eq!(laurent.sdepth().unwrap(), 2);
    }

    #[test]
    fn adjoin_then_intersect_recovers_base() {
        let c = ctx(2, &[]);
        let i = ideal(&c, "(x^2, x*y)");
        let j = ideal(&c, "(x^3*y, x^2*y^2)");
        let d = dec(&c, "x*y * K[y] + x^2 * K[x] + x^2*y * K[]");
        for laurent in [false, true] {
            let up = d.adjoin_variable(laurent);
            let up_ctx = up.context().clone();
            let r = verify_decomposition(&up, &i.insert_for(&up_ctx), &j.insert_for(&up_ctx), None)
                .unwrap();
            assert!(r.is_valid());
            assert_eq!(up.sdepth().unwrap(), d.sdepth().unwrap() + 1);
            let down = intersect_with_base(&up, &c);
            assert!(down.same_spaces(&d));
        }
    }

    #[test]
    fn sdepth_of_empty_is_error() {
        let d = StanleyDecomposition::new(&ctx(1, &[]), vec![]).unwrap();
        assert_eq!(d.sdepth(), Err(Error::EmptyDecomposition));
    }

    #[test]
    fn split_is_refinement() {
        let c = ctx(2, &[2]);
        let s = space(&c, "x * K[x, y^-1]");
        let (a, b) = s.split(1).unwrap();
        assert_eq!(a.to_string(), "x * K[x]");
        assert_eq!(b.to_string(), "x*y^-1 * K[x, y^-1]");
        assert!(space(&c, "x * K[x]").split(1).is_none());
    }

    impl MonomialIdeal {
        /// Same generators with a zero exponent appended for the new last variable.
        fn insert_for(&self, target: &RingContext) -> MonomialIdeal {
            let gens = self
                .generators()
                .iter()
                .map(|g| g.insert_var(target.n() - 1, 0));
            MonomialIdeal::new(target, gens).unwrap()
        }
    }
}
