//! Exact Stanley depth.
//!
//! Over `S_f` the problem reduces to the polynomial ring `S' = K[x_i : i ∉ A]`:
//! `I/J` is `I'/J'[x_i^{±1} : i ∈ A]`, and each adjoined Laurent variable raises
//! the Stanley depth by exactly one, so `sdepth I/J = sdepth I'/J' + |A|`.
//!
//! For `I'/J'` we use the characteristic poset: with `g` the componentwise
//! maximum of the generator exponents, it is the set of `e ≤ g` with
//! `x^e ∈ I' \ J'`. For a partition of the poset into intervals `[b, c]`, let
//! `ρ(c) = #{j : c_j = g_j}`; the Stanley depth is the largest `k` such that
//! some partition has all `ρ(c) ≥ k`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Monomial, MonomialIdeal, RingContext};
use crate::stanley::{Dir, StanleyDecomposition, StanleySpace};

/// `I'`, `J'` in the polynomial ring on the non-inverted variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub i: MonomialIdeal,
    pub j: MonomialIdeal,
    /// Original indices of the variables of `S'`, ascending.
    pub kept: Vec<usize>,
    /// `|A|`.
    pub offset: usize,
}

pub fn reduce_to_polynomial(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<Reduction> {
    j.ensure_subset_of(i)?;
    let ctx = i.context();
    let kept = ctx.free_indices();
    let sub = RingContext::polynomial(kept.len());
    let project = |ideal: &MonomialIdeal| {
        MonomialIdeal::new(&sub, ideal.generators().iter().map(|g| g.project(&kept)))
    };
    Ok(Reduction {
        i: project(i)?,
        j: project(j)?,
        offset: ctx.inverted().len(),
        kept,
    })
}

/// Lattice points `e ≤ g` with `x^e ∈ I' \ J'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicPoset {
    bound: Vec<i64>,
    /// Elements in lexicographic order.
    elements: Vec<Vec<i64>>,
    member: Vec<bool>,
    strides: Vec<usize>,
}

impl CharacteristicPoset {
    pub fn bound(&self) -> &[i64] {
        &self.bound
    }

    pub fn elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        e.len() == self.bound.len()
            && e.iter().zip(&self.bound).all(|(&a, &g)| 0 <= a && a <= g)
            && self.member[self.index(e)]
    }

    /// Position of `e` in the box `[0, g]`; lexicographic.
    fn index(&self, e: &[i64]) -> usize {
        e.iter()
            .zip(&self.strides)
            .map(|(&a, &s)| a as usize * s)
            .sum()
    }

    /// `ρ(c) = #{j : c_j = g_j}`.
    pub fn rho(&self, c: &[i64]) -> usize {
        c.iter().zip(&self.bound).filter(|(a, g)| a == g).count()
    }
}

pub fn build_characteristic_poset(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
) -> Result<CharacteristicPoset> {
    if !i.context().is_polynomial() {
        return Err(Error::ContextMismatch(
            "the characteristic poset lives in a polynomial ring".into(),
        ));
    }
    j.ensure_subset_of(i)?;
    let n = i.context().n();
    let mut bound = vec![0i64; n];
    for g in i.generators().iter().chain(j.generators()) {
        for (b, &e) in bound.iter_mut().zip(g.exponents()) {
            *b = (*b).max(e);
        }
    }
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1]
            .checked_mul(bound[k + 1] as usize + 1)
            .ok_or(Error::Overflow("poset size"))?;
    }
    let size = match n {
        0 => 1,
        _ => strides[0]
            .checked_mul(bound[0] as usize + 1)
            .ok_or(Error::Overflow("poset size"))?,
    };
    let mut member = vec![false; size];
    let mut elements = Vec::new();
    let mut e = vec![0i64; n];
    for slot in member.iter_mut() {
        if i.contains_exponents(&e) && !j.contains_exponents(&e) {
            *slot = true;
            elements.push(e.clone());
        }
        // next point in lexicographic order
        for k in (0..n).rev() {
            if e[k] < bound[k] {
                e[k] += 1;
                break;
            }
            e[k] = 0;
        }
    }
    Ok(CharacteristicPoset {
        bound,
        elements,
        member,
        strides,
    })
}

/// Intervals `[b, c]` partitioning a characteristic poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPartition {
    pub intervals: Vec<(Vec<i64>, Vec<i64>)>,
}

impl IntervalPartition {
    /// Checks that the intervals lie in the poset and cover it exactly once.
    pub fn is_partition_of(&self, poset: &CharacteristicPoset) -> bool {
        let mut seen = vec![false; poset.member.len()];
        for (b, c) in &self.intervals {
            if b.len() != poset.bound.len() || b.iter().zip(c).any(|(x, y)| x > y) {
                return false;
            }
            for p in box_points(b, c) {
                if !poset.contains(&p) {
                    return false;
                }
                let k = poset.index(&p);
                if std::mem::replace(&mut seen[k], true) {
                    return false;
                }
            }
        }
        seen == poset.member
    }
}

/// All lattice points of `[b, c]` in lexicographic order.
fn box_points(b: &[i64], c: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(b.len())];
    for (&lo, &hi) in b.iter().zip(c) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

struct Search<'a> {
    poset: &'a CharacteristicPoset,
    k: usize,
    covered: Vec<bool>,
    chosen: Vec<(Vec<i64>, Vec<i64>)>,
    failed: HashSet<Vec<bool>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, next: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let poset = self.poset;
        let Some(pos) =
            (next..poset.elements.len()).find(|&p| !self.covered[poset.index(&poset.elements[p])])
        else {
            return Ok(true);
        };
        if self.failed.contains(&self.covered) {
            return Ok(false);
        }
        // The least uncovered element is the bottom of its interval.
        let e = &poset.elements[pos];
        for c in self.tops(e) {
            let points = box_points(e, &c);
            let fits = points
                .iter()
                .all(|p| poset.member[poset.index(p)] && !self.covered[poset.index(p)]);
            if !fits {
                continue;
            }
            for p in &points {
                self.covered[poset.index(p)] = true;
            }
            self.chosen.push((e.clone(), c));
            if self.run(pos + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
            for p in &points {
                self.covered[poset.index(p)] = false;
            }
        }
        self.failed.insert(self.covered.clone());
        Ok(false)
    }

    /// Tops `c ≥ e` with each `c_j ∈ {e_j, g_j}` and `ρ(c) ≥ k`, ascending.
    fn tops(&self, e: &[i64]) -> Vec<Vec<i64>> {
        let g = &self.poset.bound;
        let free: Vec<usize> = (0..e.len()).filter(|&j| e[j] < g[j]).collect();
        let base = e.len() - free.len();
        let mut tops: Vec<Vec<i64>> = (0u64..1 << free.len())
            .filter(|mask| base + mask.count_ones() as usize >= self.k)
            .map(|mask| {
                let mut c = e.to_vec();
                for (t, &j) in free.iter().enumerate() {
                    if mask >> t & 1 == 1 {
                        c[j] = g[j];
                    }
                }
                c
            })
            .collect();
        tops.sort();
        tops
    }
}

/// Is there a partition with every `ρ(c) ≥ k`? Returns the lexicographically
/// first one found.
pub fn find_partition(
    poset: &CharacteristicPoset,
    k: usize,
    budget: u64,
) -> Result<Option<IntervalPartition>> {
    let mut search = Search {
        poset,
        k,
        covered: vec![false; poset.member.len()],
        chosen: Vec::new(),
        failed: HashSet::new(),
        nodes: 0,
        budget,
    };
    Ok(search.run(0)?.then_some(IntervalPartition {
        intervals: search.chosen,
    }))
}

/// Largest `k` and a partition attaining it; `k = sdepth I'/J'`.
pub fn max_interval_partition(
    poset: &CharacteristicPoset,
    budget: u64,
) -> Result<(usize, IntervalPartition)> {
    if poset.is_empty() {
        return Err(Error::ZeroModule);
    }
    for k in (0..=poset.bound.len()).rev() {
        if let Some(p) = find_partition(poset, k, budget)? {
            return Ok((k, p));
        }
    }
    unreachable!("singleton intervals always give a partition with k = 0")
}

/// Maps each interval `[b, c]` to the spaces `x^{b'} K[Z_c]`, `Z_c = {x_j : c_j = g_j}`,
/// where `b'` agrees with `b` on `Z_c` and ranges over `[b_j, c_j]` elsewhere.
pub fn partition_to_decomposition(
    poset: &CharacteristicPoset,
    partition: &IntervalPartition,
) -> StanleyDecomposition {
    let n = poset.bound.len();
    let ctx = RingContext::polynomial(n);
    let mut spaces = Vec::new();
    for (b, c) in &partition.intervals {
        let dirs: Vec<Dir> = (0..n)
            .map(|j| {
                if c[j] == poset.bound[j] {
                    Dir::Up
                } else {
                    Dir::Fixed
                }
            })
            .collect();
        let top: Vec<i64> = (0..n)
            .map(|j| if dirs[j] == Dir::Up { b[j] } else { c[j] })
            .collect();
        for root in box_points(b, &top) {
            spaces.push(
                StanleySpace::new(&ctx, Monomial::new(root), dirs.clone())
                    .expect("poset points are valid monomials"),
            );
        }
    }
    StanleyDecomposition::new(&ctx, spaces).expect("spaces built in context")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdepthResult {
    pub value: usize,
    pub witness: StanleyDecomposition,
}

/// `sdepth I/J` with a decomposition attaining it.
pub fn sdepth(i: &MonomialIdeal, j: &MonomialIdeal, budget: u64) -> Result<SdepthResult> {
    let red = reduce_to_polynomial(i, j)?;
    if red.i == red.j {
        return Err(Error::ZeroModule);
    }
    let poset = build_characteristic_poset(&red.i, &red.j)?;
    let (k, partition) = max_interval_partition(&poset, budget)?;
    let mut witness = partition_to_decomposition(&poset, &partition);
    for &a in i.context().inverted() {
        witness = witness.insert_variable(a, true);
    }
    debug_assert_eq!(witness.context(), i.context());
    Ok(SdepthResult {
        value: k + red.offset,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stanley::verify_decomposition;
    use crate::syntax::{parse_decomposition, parse_ideal};
    use crate::DEFAULT_BUDGET;

    fn ctx(n: usize, inv: &[usize]) -> RingContext {
        RingContext::new(n, inv.iter().map(|i| i - 1)).unwrap()
    }

    fn ideal(c: &RingContext, s: &str) -> MonomialIdeal {
        parse_ideal(s, c).unwrap()
    }

    /// Independent cover enumerator: tries every interval (any `c ≥ b`, not
    /// only the `{b_j, g_j}` shapes) for the least uncovered element and
    /// returns the best min-ρ over all complete partitions.
    fn naive_best(poset: &CharacteristicPoset) -> usize {
        fn go(
            poset: &CharacteristicPoset,
            left: &mut Vec<Vec<i64>>,
            worst: usize,
        ) -> Option<usize> {
            let Some(e) = left.first().cloned() else {
                return Some(worst);
            };
            let mut best = None;
            for c in left.clone() {
                if e.iter().zip(&c).any(|(a, b)| a > b) {
                    continue;
                }
                let pts = box_points(&e, &c);
                if !pts.iter().all(|p| left.contains(p)) {
                    continue;
                }
                let saved = left.clone();
                left.retain(|p| !pts.contains(p));
                let r = go(poset, left, worst.min(poset.rho(&c)));
                *left = saved;
                best = best.max(r);
            }
            best
        }
        let mut left = poset.elements().to_vec();
        go(poset, &mut left, poset.bound().len()).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let c = ctx(3, &[3]);
        let r = reduce_to_polynomial(&ideal(&c, "(x, y^2)"), &ideal(&c, "(x^2)")).unwrap();
        let c2 = RingContext::polynomial(2);
        assert_eq!(r.i, ideal(&c2, "(x, y^2)"));
        assert_eq!(r.j, ideal(&c2, "(x^2)"));
        assert_eq!((r.offset, r.kept.as_slice()), (1, &[0, 1][..]));

        let all = ctx(2, &[1, 2]);
        let r =
            reduce_to_polynomial(&MonomialIdeal::unit(&all), &MonomialIdeal::zero(&all)).unwrap();
        assert!(r.i.is_unit() && r.j.is_zero());
        assert_eq!((r.i.context().n(), r.offset), (0, 2));

        let p = ctx(2, &[]);
        let i = ideal(&p, "(x, y)");
        let r = reduce_to_polynomial(&i, &MonomialIdeal::zero(&p)).unwrap();
        assert_eq!((r.i, r.offset), (i, 0));
    }

    #[test]
    fn poset_examples() {
        let c2 = RingContext::polynomial(2);
        let p = build_characteristic_poset(&ideal(&c2, "(x, y^2)"), &ideal(&c2, "(x^2)")).unwrap();
        assert_eq!(p.bound(), &[2, 2]);
        // oracle: scan (0..=2)^2 against membership
        let mut expected = Vec::new();
        for a in 0..=2 {
            for b in 0..=2 {
                let in_i = a >= 1 || b >= 2;
                let in_j = a >= 2;
                if in_i && !in_j {
                    expected.push(vec![a, b]);
                }
            }
        }
        assert_eq!(p.elements(), expected.as_slice());
        assert_eq!(
            expected,
            vec![vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]
        );

        let c1 = RingContext::polynomial(1);
        let p = build_characteristic_poset(&ideal(&c1, "(x)"), &MonomialIdeal::zero(&c1)).unwrap();
        assert_eq!((p.bound(), p.elements()), (&[1][..], &[vec![1]][..]));
        let p = build_characteristic_poset(&MonomialIdeal::unit(&c1), &MonomialIdeal::zero(&c1))
            .unwrap();
        assert_eq!((p.bound(), p.elements()), (&[0][..], &[vec![0]][..]));
        let i = ideal(&c1, "(x)");
        assert!(build_characteristic_poset(&i, &i).unwrap().is_empty());
    }

    #[test]
    fn max_partition_examples() {
        let c3 = RingContext::polynomial(3);
        let p = build_characteristic_poset(&ideal(&c3, "(x, y, z)"), &MonomialIdeal::zero(&c3))
            .unwrap();
        let (k, part) = max_interval_partition(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!(k, 2);
        assert!(part.is_partition_of(&p));

        let c1 = RingContext::polynomial(1);
        let p = build_characteristic_poset(&MonomialIdeal::unit(&c1), &MonomialIdeal::zero(&c1))
            .unwrap();
        assert_eq!(max_interval_partition(&p, DEFAULT_BUDGET).unwrap().0, 1);

        let c2 = RingContext::polynomial(2);
        let p =
            build_characteristic_poset(&ideal(&c2, "(x^2, x*y)"), &ideal(&c2, "(x^3*y, x^2*y^2)"))
                .unwrap();
        assert_eq!(naive_best(&p), 0);
        assert_eq!(max_interval_partition(&p, DEFAULT_BUDGET).unwrap().0, 0);
    }

    #[test]
    fn interval_maps_to_space() {
        let c3 = RingContext::polynomial(3);
        let p = build_characteristic_poset(&ideal(&c3, "(x, y, z)"), &MonomialIdeal::zero(&c3))
            .unwrap();
        let part = IntervalPartition {
            intervals: vec![(vec![1, 1, 1], vec![1, 1, 1])],
        };
        let d = partition_to_decomposition(&p, &part);
        assert_eq!(d, parse_decomposition("x*y*z * K[x, y, z]", &c3).unwrap());

        // a non-shaped interval expands coordinate-wise
        let c1 = RingContext::polynomial(1);
        let p = build_characteristic_poset(&ideal(&c1, "(1)"), &ideal(&c1, "(x^3)")).unwrap();
        let part = IntervalPartition {
            intervals: vec![(vec![0], vec![2])],
        };
        let d = partition_to_decomposition(&p, &part);
        assert_eq!(d.to_string(), "1 * K[] + x * K[] + x^2 * K[]");
    }

    #[test]
    fn full_pipeline_on_maximal_ideal() {
        let c3 = RingContext::polynomial(3);
        let i = ideal(&c3, "(x, y, z)");
        let zero = MonomialIdeal::zero(&c3);
        let r = sdepth(&i, &zero, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.witness.len(), 4);
        assert_eq!(r.witness.sdepth().unwrap(), 2);
        assert!(verify_decomposition(&r.witness, &i, &zero, None)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn sdepth_examples() {
        let c = ctx(2, &[1]);
        let r = sdepth(
            &MonomialIdeal::unit(&c),
            &MonomialIdeal::zero(&c),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(r.value, 2);
        assert!(verify_decomposition(
            &r.witness,
            &MonomialIdeal::unit(&c),
            &MonomialIdeal::zero(&c),
            None
        )
        .unwrap()
        .is_valid());

        let cf = ctx(3, &[1]);
        let i = ideal(&cf, "(x, y, z)");
        assert_eq!(
            sdepth(&i, &MonomialIdeal::zero(&cf), DEFAULT_BUDGET)
                .unwrap()
                .value,
            3
        );

        let c = ctx(3, &[3]);
        let i = ideal(&c, "(x, y^2)");
        let j = ideal(&c, "(x^2)");
        let r = sdepth(&i, &j, DEFAULT_BUDGET).unwrap();
        assert!(verify_decomposition(&r.witness, &i, &j, None)
            .unwrap()
            .is_valid());
        assert_eq!(r.witness.sdepth().unwrap(), r.value);
    }

    #[test]
    fn zero_module_and_budget() {
        let c = ctx(2, &[]);
        let i = ideal(&c, "(x)");
        assert_eq!(sdepth(&i, &i, DEFAULT_BUDGET), Err(Error::ZeroModule));
        // (y) and (x*y) agree once x is inverted
        let cf = ctx(2, &[1]);
        assert_eq!(
            sdepth(&ideal(&cf, "(y)"), &ideal(&cf, "(x*y)"), DEFAULT_BUDGET),
            Err(Error::ZeroModule)
        );
        let c3 = RingContext::polynomial(3);
        let err = sdepth(&ideal(&c3, "(x, y, z)"), &MonomialIdeal::zero(&c3), 2).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded(2));
    }

    #[test]
    fn solver_matches_naive_enumerator() {
        let c2 = RingContext::polynomial(2);
        let c3 = RingContext::polynomial(3);
        let cases = [
            (&c2, "(x, y^2)", "(x^2)"),
            (&c2, "(x^2, y)", "(x^2*y^2)"),
            (&c2, "(1)", "(x^2, y^3)"),
            (&c3, "(x*y, y*z)", "(0)"),
            (&c3, "(x, y)", "(x*y*z)"),
            (&c3, "(x, y, z)", "(x*y, z^2)"),
        ];
        for (c, i, j) in cases {
            let p = build_characteristic_poset(&ideal(c, i), &ideal(c, j)).unwrap();
            let (k, part) = max_interval_partition(&p, DEFAULT_BUDGET).unwrap();
            assert_eq!(k, naive_best(&p), "{i} / {j}");
            assert!(part.is_partition_of(&p));
        }
    }
}
