//! A single request, independent of how it arrived (flags or a JSON line),
//! and the report it produces.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use stanley_core::filtration::fdepth;
use stanley_core::hilbert::{hilbert_count, series_of_decomposition};
use stanley_core::solver::sdepth;
use stanley_core::stanley::{localize_decomposition, verify_decomposition};
use stanley_core::syntax::{parse_decomposition, parse_ideal, parse_index_set, parse_ring};
use stanley_core::{
    HilbertSeries, MonomialIdeal, RingContext, StanleyDecomposition, DEFAULT_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Normalize,
    Sdepth,
    Decompose,
    Localize,
    Hilbert,
    Verify,
    Fdepth,
}

fn default_max_degree() -> usize {
    10
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: Command,
    pub ring: String,
    #[serde(rename = "I", default)]
    pub i: Option<String>,
    #[serde(rename = "J", default)]
    pub j: Option<String>,
    #[serde(rename = "D", default)]
    pub d: Option<String>,
    #[serde(rename = "A", default)]
    pub a: Option<String>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub witness: bool,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default)]
    pub box_bound: Option<i64>,
}

pub struct Report {
    pub text: String,
    pub json: Value,
}

struct Input {
    ring: RingContext,
    i: MonomialIdeal,
    j: MonomialIdeal,
}

impl Request {
    fn ring(&self) -> Result<RingContext> {
        parse_ring(&self.ring).context("--ring")
    }

    fn ideals(&self) -> Result<Input> {
        let ring = self.ring()?;
        let Some(i) = &self.i else {
            bail!(usage("--I is required"));
        };
        let i = parse_ideal(i, &ring).context("--I")?;
        let j = match &self.j {
            Some(j) => parse_ideal(j, &ring).context("--J")?,
            None => MonomialIdeal::zero(&ring),
        };
        j.ensure_subset_of(&i)?;
        Ok(Input { ring, i, j })
    }

    fn decomposition(&self, ring: &RingContext) -> Result<StanleyDecomposition> {
        let Some(d) = &self.d else {
            bail!(usage("--D is required"));
        };
        parse_decomposition(d, ring).context("--D")
    }

    fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }
}

/// Missing or inconsistent arguments; exits like a parse error.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: &str) -> Usage {
    Usage(msg.to_string())
}

pub fn run(req: &Request) -> Result<Report> {
    match req.command {
        Command::Normalize => normalize(req),
        Command::Sdepth => run_sdepth(req, false),
        Command::Decompose => run_sdepth(req, true),
        Command::Localize => localize(req),
        Command::Hilbert => hilbert(req),
        Command::Verify => verify(req),
        Command::Fdepth => run_fdepth(req),
    }
}

fn normalize(req: &Request) -> Result<Report> {
    let input = req.ideals()?;
    let mut text = format!("I = {}", input.i);
    let mut json = json!({ "command": "normalize", "I": input.i });
    if req.j.is_some() {
        text.push_str(&format!("\nJ = {}", input.j));
        json["J"] = json!(input.j);
    }
    Ok(Report { text, json })
}

fn run_sdepth(req: &Request, decompose: bool) -> Result<Report> {
    let input = req.ideals()?;
    let r = sdepth(&input.i, &input.j, req.budget())?;
    let command = if decompose { "decompose" } else { "sdepth" };
    let mut json = json!({ "command": command, "sdepth": r.value });
    let mut text = format!("sdepth = {}", r.value);
    if decompose || req.witness {
        json["witness"] = json!(r.witness);
        text = if decompose {
            format!("{}\n{text}", r.witness)
        } else {
            format!("{text}\nwitness: {}", r.witness)
        };
    }
    Ok(Report { text, json })
}

fn localize(req: &Request) -> Result<Report> {
    let input = req.ideals()?;
    let d = req.decomposition(&input.ring)?;
    let Some(a) = &req.a else {
        bail!(usage("--A is required"));
    };
    let a = parse_index_set(a).context("--A")?;
    let loc = localize_decomposition(&d, &input.i, &input.j, &a)?;
    let dropped: Vec<usize> = loc.dropped.iter().map(|k| k + 1).collect();
    let sd = loc.decomposition.sdepth().ok();
    let mut text = format!("{}", loc.decomposition);
    match sd {
        Some(s) => text.push_str(&format!("\nsdepth = {s}")),
        None => text.push_str("\nzero module; sdepth/fdepth undefined"),
    }
    if !dropped.is_empty() {
        let list: Vec<String> = dropped.iter().map(usize::to_string).collect();
        text.push_str(&format!("\ndropped spaces: {}", list.join(", ")));
    }
    let json = json!({
        "command": "localize",
        "decomposition": loc.decomposition,
        "dropped": dropped,
        "sdepth": sd,
    });
    Ok(Report { text, json })
}

fn hilbert(req: &Request) -> Result<Report> {
    let input = req.ideals()?;
    let series = if req.d.is_some() {
        let d = req.decomposition(&input.ring)?;
        let report = verify_decomposition(&d, &input.i, &input.j, req.box_bound)?;
        if !report.is_valid() {
            return Err(stanley_core::Error::InvalidDecomposition(report.to_string()).into());
        }
        series_of_decomposition(&d)?
    } else if input.i == input.j {
        HilbertSeries::zero()
    } else {
        series_of_decomposition(&sdepth(&input.i, &input.j, req.budget())?.witness)?
    };
    let coefficients = series.expand(req.max_degree)?;
    for (deg, &c) in coefficients.iter().enumerate() {
        let direct = hilbert_count(&input.i, &input.j, deg)?;
        if i64::try_from(direct).ok() != Some(c) {
            bail!(
                "series coefficient {c} in degree {deg} disagrees with the direct count {direct}"
            );
        }
    }
    let maximal = series.maximal_spaces()?;
    let list: Vec<String> = coefficients.iter().map(i64::to_string).collect();
    let text = format!(
        "H(t) = {series}\nmaximal spaces = {maximal}\nH(M, d) for d = 0..{}: {}",
        req.max_degree,
        list.join(", ")
    );
    let json = json!({
        "command": "hilbert",
        "series": series,
        "maximal_spaces": maximal,
        "coefficients": coefficients,
    });
    Ok(Report { text, json })
}

fn verify(req: &Request) -> Result<Report> {
    let input = req.ideals()?;
    let d = req.decomposition(&input.ring)?;
    let report = verify_decomposition(&d, &input.i, &input.j, req.box_bound)?;
    Ok(Report {
        text: report.to_string(),
        json: json!({ "command": "verify", "valid": report.is_valid(), "report": report }),
    })
}

fn run_fdepth(req: &Request) -> Result<Report> {
    let input = req.ideals()?;
    let r = fdepth(&input.i, &input.j, req.budget())?;
    let mut text = format!("fdepth = {}", r.value);
    if !r.complete {
        text.push_str(" (search budget exhausted; lower bound)");
    }
    let mut json = json!({ "command": "fdepth", "fdepth": r.value, "complete": r.complete });
    if req.witness {
        text.push_str(&format!("\nwitness:\n{}", r.witness));
        json["witness"] = json!(r.witness);
    }
    Ok(Report { text, json })
}
