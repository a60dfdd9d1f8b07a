//! Prime filtrations `J = J_0 ⊂ J_1 ⊂ … ⊂ J_r = I` with
//! `J_k / J_{k-1} ≅ S/P_k(-a_k)`, and fdepth.
//!
//! Each step adds one monomial: `J_k = J_{k-1} + (u_k)`, and the quotient is
//! cyclic with annihilator `(J_{k-1} : u_k)`, which must be generated by
//! variables. The shift `a_k` is the multidegree of `u_k`.
//!
//! Searches only use candidates `u = x^a` with `a ≤ g`, the componentwise
//! maximum of the generator exponents of `I` and `J`. That always reaches `I`
//! (a maximal remaining point of the box has a prime colon ideal), but a
//! filtration needing larger monomials is never seen.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{var_name, Monomial, MonomialIdeal, RingContext};
use crate::solver::reduce_to_polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub u: Monomial,
    #[serde(with = "one_based")]
    pub prime: BTreeSet<usize>,
    pub shift: Vec<i64>,
}

mod one_based {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(set: &BTreeSet<usize>, s: S) -> Result<S::Ok, S::Error> {
        set.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<usize>, D::Error> {
        Vec::<usize>::deserialize(d)?
            .into_iter()
            .map(|i| {
                i.checked_sub(1)
                    .ok_or_else(|| serde::de::Error::custom("variable indices start at 1"))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeFiltration {
    ring: RingContext,
    chain: Vec<MonomialIdeal>,
    steps: Vec<Step>,
}

impl PrimeFiltration {
    /// Unchecked assembly; see [`verify_filtration`].
    pub fn new(ring: RingContext, chain: Vec<MonomialIdeal>, steps: Vec<Step>) -> Self {
        PrimeFiltration { ring, chain, steps }
    }

    /// Builds the filtration that starts at `j` and adds `us` in order,
    /// computing each prime; fails if some colon ideal is not prime.
    pub fn from_monomials(j: &MonomialIdeal, us: &[Monomial]) -> Result<Self> {
        let mut chain = vec![j.clone()];
        let mut steps = Vec::with_capacity(us.len());
        for u in us {
            let last = chain.last().expect("nonempty");
            let colon = last.colon(u)?;
            let prime = colon.as_monomial_prime().ok_or_else(|| {
                Error::Malformed(format!("({last} : {u}) = {colon} is not a monomial prime"))
            })?;
            let next = last.add_generator(u)?;
            steps.push(Step {
                u: u.clone(),
                prime,
                shift: u.exponents().to_vec(),
            });
            chain.push(next);
        }
        Ok(PrimeFiltration {
            ring: j.context().clone(),
            chain,
            steps,
        })
    }

    pub fn context(&self) -> &RingContext {
        &self.ring
    }

    pub fn chain(&self) -> &[MonomialIdeal] {
        &self.chain
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `Supp(F)`.
    pub fn support(&self) -> BTreeSet<BTreeSet<usize>> {
        self.steps.iter().map(|s| s.prime.clone()).collect()
    }
}

impl fmt::Display for PrimeFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ring.n();
        if let Some(first) = self.chain.first() {
            write!(f, "{first}")?;
        }
        for (s, ideal) in self.steps.iter().zip(self.chain.iter().skip(1)) {
            let prime: Vec<String> = s.prime.iter().map(|&i| var_name(n, i)).collect();
            let shift: Vec<String> = s.shift.iter().map(i64::to_string).collect();
            write!(
                f,
                "\n  u = {}, P = ({}), a = ({}) -> {}",
                s.u,
                prime.join(", "),
                shift.join(", "),
                ideal
            )?;
        }
        Ok(())
    }
}

/// First defect found by [`verify_filtration`]; `step` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationDefect {
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for FiltrationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(k) => write!(f, "step {}: {}", k + 1, self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

/// Checks endpoints, strict steps `J_k = J_{k-1} + (u_k)`, that
/// `(J_{k-1} : u_k)` is the prime on `P_k`, and that `a_k = deg u_k`.
pub fn verify_filtration(
    f: &PrimeFiltration,
    i: &MonomialIdeal,
    j: &MonomialIdeal,
) -> std::result::Result<(), FiltrationDefect> {
    let whole = |reason: String| FiltrationDefect { step: None, reason };
    if f.chain.len() != f.steps.len() + 1 {
        return Err(whole(format!(
            "{} ideals for {} steps",
            f.chain.len(),
            f.steps.len()
        )));
    }
    if let Some(bad) = f.chain.iter().find(|c| c.context() != &f.ring) {
        return Err(whole(format!("ideal {bad} lives in {}", bad.context())));
    }
    if &f.chain[0] != j {
        return Err(whole(format!(
            "chain starts at {}, expected {j}",
            f.chain[0]
        )));
    }
    if f.chain.last() != Some(i) {
        return Err(whole(format!(
            "chain ends at {}, expected {i}",
            f.chain.last().expect("nonempty")
        )));
    }
    for (k, s) in f.steps.iter().enumerate() {
        let at = |reason: String| FiltrationDefect {
            step: Some(k),
            reason,
        };
        let prev = &f.chain[k];
        let next = &f.chain[k + 1];
        if let Err(e) = f.ring.check_monomial(&s.u) {
            return Err(at(e.to_string()));
        }
        if prev.contains_exponents(s.u.exponents()) {
            return Err(at(format!("{} already lies in {prev}", s.u)));
        }
        match prev.add_generator(&s.u) {
            Ok(sum) if &sum == next => {}
            Ok(sum) => return Err(at(format!("{prev} + ({}) = {sum}, not {next}", s.u))),
            Err(e) => return Err(at(e.to_string())),
        }
        let colon = prev.colon(&s.u).map_err(|e| at(e.to_string()))?;
        match colon.as_monomial_prime() {
            None => {
                return Err(at(format!(
                    "({prev} : {}) = {colon} is not a monomial prime",
                    s.u
                )))
            }
            Some(p) if p != s.prime => {
                return Err(at(format!(
                    "({prev} : {}) = {colon} does not match the recorded prime",
                    s.u
                )))
            }
            Some(_) => {}
        }
        if s.shift != s.u.exponents() {
            return Err(at(format!(
                "shift {:?} is not the degree of {}",
                s.shift, s.u
            )));
        }
    }
    Ok(())
}

/// `min dim S_f/P_k S_f = min (n - |P_k|)`.
pub fn fdepth_of(f: &PrimeFiltration) -> Result<usize> {
    let n = f.ring.n();
    f.steps
        .iter()
        .map(|s| n - s.prime.len())
        .min()
        .ok_or(Error::ZeroModule)
}

/// Candidate monomials `x^a`, `a ≤ g`, in lexicographic order.
fn box_candidates(i: &MonomialIdeal, j: &MonomialIdeal) -> Vec<Monomial> {
    let n = i.context().n();
    let mut g = vec![0i64; n];
    for gen in i.generators().iter().chain(j.generators()) {
        for (b, &e) in g.iter_mut().zip(gen.exponents()) {
            *b = (*b).max(e);
        }
    }
    let mut out = vec![Vec::with_capacity(n)];
    for &hi in &g {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.into_iter()
        .filter(|a| i.contains_exponents(a))
        .map(Monomial::new)
        .collect()
}

/// Valid next steps from `current`: `(u, P)` with `u ∉ current` and
/// `(current : u)` prime.
fn next_steps(
    current: &MonomialIdeal,
    candidates: &[Monomial],
) -> Vec<(Monomial, BTreeSet<usize>)> {
    candidates
        .iter()
        .filter(|u| !current.contains_exponents(u.exponents()))
        .filter_map(|u| {
            let colon = current.colon(u).ok()?;
            colon.as_monomial_prime().map(|p| (u.clone(), p))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub filtrations: Vec<PrimeFiltration>,
    /// False when the node budget ran out first.
    pub complete: bool,
}

/// Lists prime filtrations of `I'/J'` over a polynomial ring, depth first,
/// with step candidates from the bounding box.
pub fn enumerate_prime_filtrations(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    budget: u64,
) -> Result<Enumeration> {
    if !i.context().is_polynomial() {
        return Err(Error::ContextMismatch(
            "prime filtrations are enumerated over the polynomial ring".into(),
        ));
    }
    j.ensure_subset_of(i)?;
    if i == j {
        return Err(Error::ZeroModule);
    }
    let candidates = box_candidates(i, j);
    let mut out = Enumeration {
        filtrations: Vec::new(),
        complete: true,
    };
    let mut nodes = 0u64;
    let mut path = Vec::new();
    enumerate_from(
        i,
        j,
        &candidates,
        &mut path,
        &mut nodes,
        budget,
        j,
        &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_from(
    target: &MonomialIdeal,
    current: &MonomialIdeal,
    candidates: &[Monomial],
    path: &mut Vec<Monomial>,
    nodes: &mut u64,
    budget: u64,
    start: &MonomialIdeal,
    out: &mut Enumeration,
) -> Result<()> {
    if !out.complete {
        return Ok(());
    }
    *nodes += 1;
    if *nodes > budget {
        out.complete = false;
        return Ok(());
    }
    if current == target {
        out.filtrations
            .push(PrimeFiltration::from_monomials(start, path)?);
        return Ok(());
    }
    for (u, _) in next_steps(current, candidates) {
        let next = current.add_generator(&u)?;
        path.push(u);
        enumerate_from(target, &next, candidates, path, nodes, budget, start, out)?;
        path.pop();
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdepthResult {
    pub value: usize,
    pub witness: PrimeFiltration,
    /// False when the budget ran out and `value` is only a lower bound
    /// (the fdepth of `witness`).
    pub complete: bool,
}

struct FdepthSearch<'a> {
    target: &'a MonomialIdeal,
    candidates: Vec<Monomial>,
    n: usize,
    memo: HashMap<MonomialIdeal, (usize, Option<Monomial>)>,
    nodes: u64,
    budget: u64,
}

impl FdepthSearch<'_> {
    /// Best min `(n - |P|)` over filtrations from `current` to the target.
    fn best(&mut self, current: &MonomialIdeal) -> Result<usize> {
        if current == self.target {
            return Ok(self.n);
        }
        if let Some(&(v, _)) = self.memo.get(current) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let mut best: Option<(usize, Monomial)> = None;
        for (u, p) in next_steps(current, &self.candidates) {
            let here = self.n - p.len();
            if best.as_ref().is_some_and(|(b, _)| *b >= here) {
                continue;
            }
            let next = current.add_generator(&u)?;
            let v = here.min(self.best(&next)?);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, u));
            }
        }
        let (v, u) = best.expect("a maximal box point always has a prime colon");
        self.memo.insert(current.clone(), (v, Some(u)));
        Ok(v)
    }

    fn path(&self, start: &MonomialIdeal) -> Result<Vec<Monomial>> {
        let mut path = Vec::new();
        let mut current = start.clone();
        while &current != self.target {
            let (_, Some(u)) = &self.memo[&current] else {
                unreachable!("memo entries below the target carry a step")
            };
            current = current.add_generator(u)?;
            path.push(u.clone());
        }
        Ok(path)
    }
}

/// Greedy filtration: always add the lexicographically largest remaining
/// box point, which is maximal and so has a prime colon ideal.
fn greedy_path(
    i: &MonomialIdeal,
    j: &MonomialIdeal,
    candidates: &[Monomial],
) -> Result<Vec<Monomial>> {
    let mut current = j.clone();
    let mut path = Vec::new();
    while &current != i {
        let u = candidates
            .iter()
            .rev()
            .find(|u| !current.contains_exponents(u.exponents()))
            .expect("I \\ J_k meets the box until J_k = I")
            .clone();
        current = current.add_generator(&u)?;
        path.push(u);
    }
    Ok(path)
}

/// fdepth of `I/J` over `S_f`, computed on `I'/J'` over the non-inverted
/// variables; each inverted variable adds one to every `dim S_f/P S_f`.
pub fn fdepth(i: &MonomialIdeal, j: &MonomialIdeal, budget: u64) -> Result<FdepthResult> {
    let red = reduce_to_polynomial(i, j)?;
    if red.i == red.j {
        return Err(Error::ZeroModule);
    }
    let mut search = FdepthSearch {
        target: &red.i,
        candidates: box_candidates(&red.i, &red.j),
        n: red.i.context().n(),
        memo: HashMap::new(),
        nodes: 0,
        budget,
    };
    let (path, complete) = match search.best(&red.j) {
        Ok(_) => (search.path(&red.j)?, true),
        Err(Error::BudgetExceeded(_)) => (greedy_path(&red.i, &red.j, &search.candidates)?, false),
        Err(e) => return Err(e),
    };
    // back to the n original variables, zero exponents on A
    let ctx = i.context();
    let embedded: Vec<Monomial> = path
        .iter()
        .map(|u| {
            let mut e = vec![0i64; ctx.n()];
            for (&k, &v) in red.kept.iter().zip(u.exponents()) {
                e[k] = v;
            }
            Monomial::new(e)
        })
        .collect();
    let witness = PrimeFiltration::from_monomials(j, &embedded)?;
    Ok(FdepthResult {
        value: fdepth_of(&witness)?,
        witness,
        complete,
    })
}

/// Extends a filtration over `S` to `S_f`, `f = ∏_{l ∈ A} x_l`, dropping the
/// steps whose prime contains some `x_l` (those factors vanish).
pub fn localize_filtration(f: &PrimeFiltration, a: &BTreeSet<usize>) -> Result<PrimeFiltration> {
    if !f.ring.is_polynomial() {
        return Err(Error::ContextMismatch(format!(
            "localization expects a filtration over the polynomial ring, got {}",
            f.ring
        )));
    }
    let ctx = f.ring.with_inverted(a.iter().copied())?;
    let start = f
        .chain
        .first()
        .ok_or_else(|| Error::Malformed("empty chain".into()))?
        .extend(&ctx)?;
    let kept: Vec<Monomial> = f
        .steps
        .iter()
        .filter(|s| s.prime.is_disjoint(a))
        .map(|s| s.u.clone())
        .collect();
    PrimeFiltration::from_monomials(&start, &kept)
}
