//! Hilbert series for the absolute degree `|a| = Σ |a_i|`.
//!
//! `H(M, d)` counts the monomials of `M` with `|a| = d`. Unlike the usual
//! grading, these pieces are not multiplicative: `(S_f)_{d1} (S_f)_{d2}` need
//! not land in `(S_f)_{d1+d2}`, so nothing here multiplies degree components.
//! Series are still additive over direct sums, which is all the Stanley
//! decomposition machinery needs.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Monomial, MonomialIdeal};
use crate::stanley::{Dir, StanleyDecomposition, StanleySpace};

/// `P(t) / (1 - t)^d`, stored with `P` not divisible by `1 - t` (unless `P = 0`,
/// in which case `d = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct HilbertSeries {
    numerator: Vec<i64>,
    pole: usize,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    num: Vec<(i64, usize)>,
    pole: usize,
}

impl TryFrom<SeriesJson> for HilbertSeries {
    type Error = Error;

    fn try_from(json: SeriesJson) -> Result<Self> {
        let len = json.num.iter().map(|&(_, p)| p + 1).max().unwrap_or(0);
        let mut numerator = vec![0i64; len];
        for (c, p) in json.num {
            numerator[p] = numerator[p]
                .checked_add(c)
                .ok_or(Error::Overflow("series numerator"))?;
        }
        HilbertSeries::new(numerator, json.pole)
    }
}

impl From<HilbertSeries> for SeriesJson {
    fn from(s: HilbertSeries) -> Self {
        SeriesJson {
            num: s.terms().collect(),
            pole: s.pole,
        }
    }
}

impl HilbertSeries {
    /// Canonicalizes `numerator / (1 - t)^pole`.
    pub fn new(mut numerator: Vec<i64>, mut pole: usize) -> Result<Self> {
        trim(&mut numerator);
        while pole > 0 && !numerator.is_empty() && sum(&numerator)? == 0 {
            numerator = divide_one_minus_t(&numerator)?;
            pole -= 1;
        }
        if numerator.is_empty() {
            pole = 0;
        }
        Ok(HilbertSeries { numerator, pole })
    }

    pub fn zero() -> Self {
        HilbertSeries {
            numerator: Vec::new(),
            pole: 0,
        }
    }

    /// Dense coefficients of `P`, ascending.
    pub fn numerator(&self) -> &[i64] {
        &self.numerator
    }

    pub fn pole(&self) -> usize {
        self.pole
    }

    /// Nonzero `(coefficient, power)` pairs of `P`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.numerator
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(p, &c)| (c, p))
    }

    /// `P(1)`: the number of Stanley spaces of maximal dimension in any Stanley
    /// decomposition of the module.
    pub fn maximal_spaces(&self) -> Result<i64> {
        sum(&self.numerator)
    }

    /// Coefficients of `t^0 … t^{d_max}`.
    pub fn expand(&self, d_max: usize) -> Result<Vec<i64>> {
        let mut c = vec![0i64; d_max + 1];
        for (k, &v) in self.numerator.iter().take(d_max + 1).enumerate() {
            c[k] = v;
        }
        // multiply by 1/(1 - t) `pole` times: prefix sums
        for _ in 0..self.pole {
            for k in 1..c.len() {
                c[k] = c[k]
                    .checked_add(c[k - 1])
                    .ok_or(Error::Overflow("series expansion"))?;
            }
        }
        Ok(c)
    }

    /// Sum of series, over the common denominator.
    pub fn add(&self, other: &HilbertSeries) -> Result<HilbertSeries> {
        let pole = self.pole.max(other.pole);
        let a = mul_one_minus_t_pow(&self.numerator, pole - self.pole)?;
        let b = mul_one_minus_t_pow(&other.numerator, pole - other.pole)?;
        HilbertSeries::new(add_polys(&a, &b)?, pole)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (c, p) in self.terms() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            let coeff = if mag == 1 && p > 0 {
                String::new()
            } else {
                mag.to_string()
            };
            let var = match p {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{p}"),
            };
            write!(f, "{sign}{coeff}{var}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")/(1-t)^{}", self.pole)
    }
}

fn trim(p: &mut Vec<i64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn sum(p: &[i64]) -> Result<i64> {
    p.iter()
        .try_fold(0i64, |acc, &c| acc.checked_add(c))
        .ok_or(Error::Overflow("P(1)"))
}

fn add_polys(a: &[i64], b: &[i64]) -> Result<Vec<i64>> {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (k, slot) in out.iter_mut().enumerate() {
        let x = a.get(k).copied().unwrap_or(0);
        let y = b.get(k).copied().unwrap_or(0);
        *slot = x.checked_add(y).ok_or(Error::Overflow("polynomial sum"))?;
    }
    trim(&mut out);
    Ok(out)
}

fn mul_one_minus_t(p: &[i64]) -> Result<Vec<i64>> {
    let mut out = vec![0i64; p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k] = out[k]
            .checked_add(c)
            .ok_or(Error::Overflow("polynomial product"))?;
        out[k + 1] = out[k + 1]
            .checked_sub(c)
            .ok_or(Error::Overflow("polynomial product"))?;
    }
    trim(&mut out);
    Ok(out)
}

fn mul_one_minus_t_pow(p: &[i64], k: usize) -> Result<Vec<i64>> {
    (0..k).try_fold(p.to_vec(), |acc, _| mul_one_minus_t(&acc))
}

/// `P / (1 - t)`, assuming `P(1) = 0`.
fn divide_one_minus_t(p: &[i64]) -> Result<Vec<i64>> {
    let mut q = Vec::with_capacity(p.len());
    let mut acc = 0i64;
    for &c in &p[..p.len() - 1] {
        acc = acc
            .checked_add(c)
            .ok_or(Error::Overflow("polynomial division"))?;
        q.push(acc);
    }
    trim(&mut q);
    Ok(q)
}

fn monomial_poly(power: usize) -> Vec<i64> {
    let mut p = vec![0i64; power + 1];
    p[power] = 1;
    p
}

/// Numerator `Q` of `H_{uK[Z]} = Q / (1 - t)^{|Z|}`, built by splitting off
/// conflicting directions until `|v|` and `K[Z̄]` line up.
///
/// A direction conflicts when the root points against it (`u_i > 0` with
/// `x_i^{-1} ∈ Z`, or `u_i < 0` with `x_i ∈ Z`); the lowest such index is
/// split first via `uK[Z] = uK[Z \ {x_i^{∓1}}] ⊕ vK[Z]`, where `v` moves `u_i`
/// one step toward zero. Without conflicts `|·|` is additive on the space, so
/// `H = t^{|deg u|} / (1 - t)^{|Z|}`. Always `Q(1) = 1`.
pub fn space_numerator(s: &StanleySpace) -> Result<Vec<i64>> {
    let mut root = s.root().exponents().to_vec();
    let mut dirs = s.dirs().to_vec();
    split_numerator(&mut root, &mut dirs)
}

fn split_numerator(root: &mut [i64], dirs: &mut [Dir]) -> Result<Vec<i64>> {
    let conflict = (0..root.len())
        .find(|&i| (root[i] > 0 && dirs[i] == Dir::Down) || (root[i] < 0 && dirs[i] == Dir::Up));
    let Some(i) = conflict else {
        let deg = Monomial::new(root.to_vec()).abs_degree()?;
        let deg = usize::try_from(deg).map_err(|_| Error::Overflow("degree"))?;
        return Ok(monomial_poly(deg));
    };
    let dir = std::mem::replace(&mut dirs[i], Dir::Fixed);
    let fixed = split_numerator(root, dirs)?;
    dirs[i] = dir;
    let step = root[i].signum();
    root[i] -= step;
    let moved = split_numerator(root, dirs)?;
    root[i] += step;
    add_polys(&mul_one_minus_t(&fixed)?, &moved)
}

pub fn series_of_space(s: &StanleySpace) -> Result<HilbertSeries> {
    HilbertSeries::new(space_numerator(s)?, s.dim())
}

/// `H_{uT_A} = t^{|deg u'|} (1 + t)^{|A|} / (1 - t)^{|A| + extra}` for
/// `T_A = K[x_i^{±1} : i ∈ A, extra further variables]`, where `u'` drops the
/// unit factor of `u`.
pub fn series_of_laurent_ring(
    u: &Monomial,
    inverted: &BTreeSet<usize>,
    extra_vars: usize,
) -> Result<HilbertSeries> {
    if let Some(i) = (0..u.len()).find(|&i| u.exponents()[i] < 0 && !inverted.contains(&i)) {
        return Err(Error::Malformed(format!(
            "negative exponent on x{}, which is not inverted",
            i + 1
        )));
    }
    let deg: i64 = (0..u.len())
        .filter(|i| !inverted.contains(i))
        .map(|i| u.exponents()[i])
        .try_fold(0i64, |acc, e| acc.checked_add(e))
        .ok_or(Error::Overflow("degree"))?;
    let mut num = monomial_poly(usize::try_from(deg).map_err(|_| Error::Overflow("degree"))?);
    for _ in 0..inverted.len() {
        // times (1 + t)
        let mut next = vec![0i64; num.len() + 1];
        for (k, &c) in num.iter().enumerate() {
            next[k] += c;
            next[k + 1] = next[k + 1]
                .checked_add(c)
                .ok_or(Error::Overflow("binomial"))?;
        }
        num = next;
    }
    HilbertSeries::new(num, inverted.len() + extra_vars)
}

/// `Σ Q_i (1 - t)^{d - |Z_i|} / (1 - t)^d` with `d = max |Z_i|`.
pub fn series_of_decomposition(d: &StanleyDecomposition) -> Result<HilbertSeries> {
    let pole = d.spaces().iter().map(StanleySpace::dim).max().unwrap_or(0);
    let mut num = Vec::new();
    for s in d.spaces() {
        let q = space_numerator(s)?;
        num = add_polys(&num, &mul_one_minus_t_pow(&q, pole - s.dim())?)?;
    }
    HilbertSeries::new(num, pole)
}

/// Number of spaces of maximal dimension, read off as `P(1)`.
pub fn count_maximal_spaces(d: &StanleyDecomposition) -> Result<i64> {
    series_of_decomposition(d)?.maximal_spaces()
}

/// `#{a : |a| = d, x^a ∈ I \ J}` by walking the diamond `|a| = d` directly.
pub fn hilbert_count(i: &MonomialIdeal, j: &MonomialIdeal, d: usize) -> Result<u64> {
    j.ensure_subset_of(i)?;
    let ctx = i.context();
    let d = i64::try_from(d).map_err(|_| Error::Overflow("degree"))?;
    let mut point = vec![0i64; ctx.n()];
    let mut count = 0u64;
    walk_diamond(
        0,
        d,
        &mut point,
        &mut |p| {
            if i.contains_exponents(p) && !j.contains_exponents(p) {
                count += 1;
            }
        },
        &|k| ctx.is_inverted(k),
    );
    Ok(count)
}

fn walk_diamond(
    k: usize,
    left: i64,
    point: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]),
    inverted: &impl Fn(usize) -> bool,
) {
    if k == point.len() {
        if left == 0 {
            visit(point);
        }
        return;
    }
    let last = k + 1 == point.len();
    let mags: Vec<i64> = if last {
        vec![left]
    } else {
        (0..=left).collect()
    };
    for m in mags {
        let signs: &[i64] = if m > 0 && inverted(k) { &[1, -1] } else { &[1] };
        for &s in signs {
            point[k] = s * m;
            walk_diamond(k + 1, left - m, point, visit, inverted);
        }
    }
    point[k] = 0;
}
