//! The ambient ring `S_f`, monomials with signed exponents and monomial ideals.
//!
//! Variable indices are 0-based in the API. Text and JSON forms use the
//! 1-based numbering `x1, …, xn`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `S_f` with `f` the product of the variables indexed by `inverted`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RingJson", into = "RingJson")]
pub struct RingContext {
    n: usize,
    inverted: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    n: usize,
    invert: Vec<usize>,
}

impl TryFrom<RingJson> for RingContext {
    type Error = Error;

    fn try_from(json: RingJson) -> Result<Self> {
        let inverted = json
            .invert
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::Malformed("variable indices start at 1".into()))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        RingContext::new(json.n, inverted)
    }
}

impl From<RingContext> for RingJson {
    fn from(ctx: RingContext) -> Self {
        RingJson {
            n: ctx.n,
            invert: ctx.inverted.iter().map(|i| i + 1).collect(),
        }
    }
}

impl RingContext {
    /// `n = 0` is allowed and denotes the field K itself.
    pub fn new(n: usize, inverted: impl IntoIterator<Item = usize>) -> Result<Self> {
        let inverted: BTreeSet<usize> = inverted.into_iter().collect();
        if let Some(&bad) = inverted.iter().find(|&&i| i >= n) {
            return Err(Error::Malformed(format!(
                "inverted index {} outside 1..{}",
                bad + 1,
                n
            )));
        }
        Ok(RingContext { n, inverted })
    }

    /// The polynomial ring `K[x_1, …, x_n]`.
    pub fn polynomial(n: usize) -> Self {
        RingContext {
            n,
            inverted: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inverted(&self) -> &BTreeSet<usize> {
        &self.inverted
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.inverted.contains(&i)
    }

    pub fn is_polynomial(&self) -> bool {
        self.inverted.is_empty()
    }

    /// Indices of the variables that are not units.
    pub fn free_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.inverted.contains(i)).collect()
    }

    /// Same number of variables, different inverted set.
    pub fn with_inverted(&self, inverted: impl IntoIterator<Item = usize>) -> Result<Self> {
        RingContext::new(self.n, inverted)
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.len() != self.n {
            return Err(Error::ContextMismatch(format!(
                "monomial has {} exponents, ring has {} variables",
                m.len(),
                self.n
            )));
        }
        if let Some(i) = (0..self.n).find(|&i| m.0[i] < 0 && !self.is_inverted(i)) {
            return Err(Error::Malformed(format!(
                "negative exponent on x{}, which is not inverted",
                i + 1
            )));
        }
        Ok(())
    }

    pub(crate) fn ensure_same(&self, other: &RingContext) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch(format!("{self} vs {other}")));
        }
        Ok(())
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ring n={} invert={{", self.n)?;
        for (k, i) in self.inverted.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// A monomial `x^a`, stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<i64>);

/// Support, positive support and negative support of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Supports {
    pub all: BTreeSet<usize>,
    pub plus: BTreeSet<usize>,
    pub minus: BTreeSet<usize>,
}

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// `x_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn signed_supports(&self) -> Supports {
        let mut s = Supports::default();
        for (i, &e) in self.0.iter().enumerate() {
            if e != 0 {
                s.all.insert(i);
            }
            if e > 0 {
                s.plus.insert(i);
            }
            if e < 0 {
                s.minus.insert(i);
            }
        }
        s
    }

    /// `|deg u| = Σ |a_i|`.
    pub fn abs_degree(&self) -> Result<i64> {
        self.0.iter().try_fold(0i64, |acc, &e| {
            acc.checked_add(e.checked_abs().ok_or(Error::Overflow("|deg|"))?)
                .ok_or(Error::Overflow("|deg|"))
        })
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("monomial product")))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// Adds `delta` to the exponent of `x_i`.
    pub fn shifted(&self, i: usize, delta: i64) -> Result<Monomial> {
        let mut e = self.0.clone();
        e[i] = e[i]
            .checked_add(delta)
            .ok_or(Error::Overflow("monomial shift"))?;
        Ok(Monomial(e))
    }

    /// Zeroes the exponents of the inverted variables (removes the unit factor).
    pub fn strip_units(&self, ctx: &RingContext) -> Monomial {
        let mut e = self.0.clone();
        for &i in ctx.inverted() {
            e[i] = 0;
        }
        Monomial(e)
    }

    /// Exponents at the given positions, in order.
    pub fn project(&self, keep: &[usize]) -> Monomial {
        Monomial(keep.iter().map(|&i| self.0[i]).collect())
    }

    /// Inserts a zero exponent at `pos`.
    pub fn insert_var(&self, pos: usize, exp: i64) -> Monomial {
        let mut e = self.0.clone();
        e.insert(pos, exp);
        Monomial(e)
    }

    /// Whether `self` divides `m` in the ring: componentwise `≤` off the
    /// inverted set.
    pub fn divides_in(&self, m: &[i64], ctx: &RingContext) -> bool {
        self.0
            .iter()
            .zip(m)
            .enumerate()
            .all(|(i, (g, a))| ctx.is_inverted(i) || a >= g)
    }
}

const ALIASES: [&str; 4] = ["x", "y", "z", "w"];

/// Display name of variable `i` in a ring with `n` variables.
pub fn var_name(n: usize, i: usize) -> String {
    if n <= ALIASES.len() {
        ALIASES[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", var_name(n, i))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A monomial ideal of `S_f` in normal form: generators carry no unit factor
/// and are pairwise incomparable. The zero ideal has no generators and the
/// unit ideal has the single generator `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IdealJson", into = "IdealJson")]
pub struct MonomialIdeal {
    ctx: RingContext,
    gens: Vec<Monomial>,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    ring: RingContext,
    gens: Vec<Monomial>,
}

impl TryFrom<IdealJson> for MonomialIdeal {
    type Error = Error;

    fn try_from(json: IdealJson) -> Result<Self> {
        MonomialIdeal::new(&json.ring, json.gens)
    }
}

impl From<MonomialIdeal> for IdealJson {
    fn from(ideal: MonomialIdeal) -> Self {
        IdealJson {
            ring: ideal.ctx,
            gens: ideal.gens,
        }
    }
}

impl MonomialIdeal {
    /// Normalizes raw generators: strips unit factors, then keeps the
    /// divisibility-minimal ones.
    pub fn new(ctx: &RingContext, raw: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut gens = Vec::new();
        for g in raw {
            ctx.check_monomial(&g)?;
            gens.push(g.strip_units(ctx));
        }
        Ok(MonomialIdeal {
            ctx: ctx.clone(),
            gens: minimalize(gens),
        })
    }

    pub fn zero(ctx: &RingContext) -> Self {
        MonomialIdeal {
            ctx: ctx.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ctx: &RingContext) -> Self {
        MonomialIdeal {
            ctx: ctx.clone(),
            gens: vec![Monomial::one(ctx.n())],
        }
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        self.ctx.check_monomial(m)?;
        Ok(self.contains_exponents(m.exponents()))
    }

    /// Membership test on a raw exponent vector assumed valid in the context.
    pub fn contains_exponents(&self, m: &[i64]) -> bool {
        self.gens.iter().any(|g| g.divides_in(m, &self.ctx))
    }

    /// `self ⊆ other`; contexts must agree.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> Result<bool> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok(self
            .gens
            .iter()
            .all(|g| other.contains_exponents(g.exponents())))
    }

    /// Errors with [`Error::NotContained`] unless `self ⊆ other`.
    pub fn ensure_subset_of(&self, other: &MonomialIdeal) -> Result<()> {
        self.ctx.ensure_same(&other.ctx)?;
        match self
            .gens
            .iter()
            .find(|g| !other.contains_exponents(g.exponents()))
        {
            Some(g) => Err(Error::NotContained(g.to_string())),
            None => Ok(()),
        }
    }

    /// `I ∩ S`: the same generators read in the polynomial ring.
    pub fn contraction(&self) -> MonomialIdeal {
        MonomialIdeal {
            ctx: RingContext::polynomial(self.ctx.n()),
            gens: self.gens.clone(),
        }
    }

    /// `I·S_g` for a context with the same variables; the new inverted set
    /// must contain the current one.
    pub fn extend(&self, target: &RingContext) -> Result<MonomialIdeal> {
        if target.n() != self.ctx.n() || !self.ctx.inverted().is_subset(target.inverted()) {
            return Err(Error::ContextMismatch(format!(
                "cannot extend an ideal of {} to {}",
                self.ctx, target
            )));
        }
        MonomialIdeal::new(target, self.gens.iter().cloned())
    }

    /// `I + (u)`.
    pub fn add_generator(&self, u: &Monomial) -> Result<MonomialIdeal> {
        MonomialIdeal::new(&self.ctx, self.gens.iter().cloned().chain([u.clone()]))
    }

    /// `(I : u)`, generated by `g / gcd(g, u)` for `g ∈ G(I)`.
    pub fn colon(&self, u: &Monomial) -> Result<MonomialIdeal> {
        self.ctx.check_monomial(u)?;
        let u = u.strip_units(&self.ctx);
        let gens = self
            .gens
            .iter()
            .map(|g| Monomial(g.0.iter().zip(&u.0).map(|(&a, &b)| a - a.min(b)).collect()));
        MonomialIdeal::new(&self.ctx, gens)
    }

    /// Indices `P` when the ideal is the monomial prime `(x_i : i ∈ P)`.
    /// The zero ideal is the prime with `P = ∅`.
    pub fn as_monomial_prime(&self) -> Option<BTreeSet<usize>> {
        let mut vars = BTreeSet::new();
        for g in &self.gens {
            let supp = g.signed_supports();
            if supp.all.len() != 1 {
                return None;
            }
            let i = *supp.all.first()?;
            if g.0[i] != 1 {
                return None;
            }
            vars.insert(i);
        }
        Some(vars)
    }

    /// Largest generator exponent in absolute value.
    pub fn max_abs_exponent(&self) -> i64 {
        self.gens
            .iter()
            .flat_map(|g| g.0.iter())
            .map(|e| e.abs())
            .max()
            .unwrap_or(0)
    }
}

/// `true` iff `m ∈ I \ J`; checks `J ⊆ I` first.
pub fn in_quotient(i: &MonomialIdeal, j: &MonomialIdeal, m: &Monomial) -> Result<bool> {
    j.ensure_subset_of(i)?;
    Ok(i.contains(m)? && !j.contains(m)?)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = gens
        .iter()
        .enumerate()
        .map(|(k, g)| {
            !gens
                .iter()
                .enumerate()
                .any(|(l, h)| l != k && h.0.iter().zip(&g.0).all(|(a, b)| a <= b))
        })
        .collect();
    gens.into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect()
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}
