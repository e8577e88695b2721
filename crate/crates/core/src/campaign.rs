//! Bundled verification runs and their reports.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{abelianization, formula_check, theorem_case};
use crate::coset::{verify_corollary, EnumOptions};
use crate::decompose::{decompose_to_abu, rewrite_abu_to_xy};
use crate::error::{Error, Result};
use crate::fp::{make_hm, Word};
use crate::matgroups::{verify_lemma_identities, verify_rewrite, Assignment, REWRITE_MODULI};

/// One named pass/fail outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub passed: bool,
    /// Set when the check stopped on a resource limit instead of finishing.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub limit_hit: bool,
    pub details: String,
}

impl Check {
    pub fn new(name: impl Into<String>, params: impl Into<String>, passed: bool, details: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            params: params.into(),
            passed,
            limit_hit: false,
            details: details.into(),
        }
    }

    pub fn limited(name: impl Into<String>, params: impl Into<String>, details: impl Into<String>) -> Self {
        Check {
            limit_hit: true,
            ..Check::new(name, params, false, details)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Pass,
    Fail,
    /// No failures, but at least one check ran out of resources.
    Limit,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub checks: Vec<Check>,
    pub overall: Overall,
    /// Wall-clock time per section; never serialized.
    #[serde(skip)]
    pub timing: Vec<(String, Duration)>,
}

impl CampaignReport {
    pub fn from_checks(checks: Vec<Check>, timing: Vec<(String, Duration)>) -> Self {
        let overall = if checks.iter().any(|c| !c.passed && !c.limit_hit) {
            Overall::Fail
        } else if checks.iter().any(|c| c.limit_hit) {
            Overall::Limit
        } else {
            Overall::Pass
        };
        CampaignReport {
            checks,
            overall,
            timing,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Parameters of [`verify_paper`].
#[derive(Clone, Debug)]
pub struct PaperConfig {
    pub m_values: Vec<u64>,
    pub r_values: Vec<u64>,
    pub seed: u64,
    /// Random words per `m` in the decomposition round-trip.
    pub samples_per_m: usize,
    pub max_word_len: usize,
    pub enum_options: EnumOptions,
}

impl Default for PaperConfig {
    fn default() -> Self {
        PaperConfig {
            m_values: (1..=50).collect(),
            r_values: vec![3, 5, 7],
            seed: 0,
            samples_per_m: 20,
            max_word_len: 40,
            enum_options: EnumOptions::default(),
        }
    }
}

/// Reduced word of length at most `max_len` over `num_gens` generators.
pub fn random_word<R: Rng>(rng: &mut R, num_gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::identity();
    for _ in 0..len {
        let g = rng.gen_range(0..num_gens);
        w.push(g, if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    w
}

/// Independent stream per `m`, so parallel runs draw the same words.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Evaluates random `{x, y}` words under `φ_m`, decomposes, rewrites and
/// re-evaluates. Fails on the first mismatch or non-decreasing step.
pub fn decomposition_roundtrip(m: u64, samples: usize, max_len: usize, seed: u64) -> Result<Check> {
    let phi = Assignment::phi(m)?;
    let mut rng = rng_for(seed, m);
    let mut steps = 0usize;
    let mut syllables = 0usize;
    for i in 0..samples {
        let w = random_word(&mut rng, 2, max_len);
        let mat = phi.evaluate(&w)?;
        let d = decompose_to_abu(&mat)?;
        if let Some(s) = d.steps.iter().find(|s| !s.decreases()) {
            return Ok(Check::new(
                "decomposition-roundtrip",
                format!("m={m}"),
                false,
                format!("sample {i}: norm {} did not drop ({:?})", s.norm_before, s.norm_after),
            ));
        }
        let xy = rewrite_abu_to_xy(&d.word)?;
        if phi.evaluate(&xy.word)? != mat {
            return Ok(Check::new(
                "decomposition-roundtrip",
                format!("m={m}"),
                false,
                format!("sample {i}: {} re-evaluates to a different matrix", xy),
            ));
        }
        steps += d.steps.len();
        syllables += xy.word.num_syllables();
    }
    Ok(Check::new(
        "decomposition-roundtrip",
        format!("m={m}"),
        true,
        format!("{samples} words, {steps} Euclidean steps, {syllables} syllables after rewriting"),
    ))
}

fn lemma_check(m: u64) -> Result<Check> {
    let checks = verify_lemma_identities(m)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    Ok(Check::new(
        "lemma-identities",
        format!("m={m}"),
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} identity groups hold exactly", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    ))
}

fn theorem_checks(m: u64) -> Result<Vec<Check>> {
    let got = abelianization(&make_hm(m)?);
    let want = theorem_case(m)?;
    let mut out = vec![Check::new(
        "theorem-abelianization",
        format!("m={m}"),
        got == want,
        format!("H_m^ab = {got}, expected {want}"),
    )];
    let f = formula_check(m)?;
    out.push(Check::new(
        "invariant-factor-formula",
        format!("m={m}"),
        f.consistent(),
        format!(
            "snf {}, minors {}, gcd(m^2-1, 12) = {}; printed gcd(m^2+1, 12m, 4m^2+8) = {}{}",
            f.snf_factor,
            f.minors_factor,
            f.corrected,
            f.printed,
            if f.printed_agrees { "" } else { " (disagrees)" }
        ),
    ));
    if m == 1 {
        out.push(Check::new(
            "sl2z-abelianization-z12",
            "m=1",
            got.to_string() == "Z/12",
            format!("SL2(Z)^ab = {got}"),
        ));
    }
    Ok(out)
}

fn corollary_check(r: u64, opts: &EnumOptions) -> Result<Check> {
    let rep = verify_corollary(r, opts)?;
    let details = format!(
        "coset index {}, BFS order {}, det-1 count {}, relators {}",
        rep.enumeration.index.map_or("-".to_string(), |i| i.to_string()),
        rep.bfs_order,
        rep.det_one_count,
        if rep.relators_hold { "hold" } else { "fail" }
    );
    if rep.limit_exceeded() {
        Ok(Check::limited("corollary", format!("r={r}"), details))
    } else {
        Ok(Check::new("corollary", format!("r={r}"), rep.passed, details))
    }
}

fn timed<T>(label: &str, timing: &mut Vec<(String, Duration)>, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timing.push((label.to_string(), start.elapsed()));
    out
}

/// Lemma identities, theorem case split, rewrite checks, the `r` family and
/// a decomposition sample, in that order.
pub fn verify_paper(cfg: &PaperConfig) -> Result<CampaignReport> {
    if cfg.m_values.is_empty() {
        return Err(Error::InvalidParameter("no values of m given".into()));
    }
    if let Some(&m) = cfg.m_values.iter().find(|&&m| m == 0) {
        return Err(Error::InvalidParameter(format!("m must be positive, got {m}")));
    }
    if let Some(&r) = cfg.r_values.iter().find(|&&r| r < 3 || r % 2 == 0) {
        return Err(Error::InvalidParameter(format!("r must be odd and at least 3, got {r}")));
    }
    let mut timing = Vec::new();
    let mut checks = Vec::new();

    let lemma: Result<Vec<Check>> = timed("lemma", &mut timing, || cfg.m_values.par_iter().map(|&m| lemma_check(m)).collect());
    checks.extend(lemma?);

    let theorem: Result<Vec<Vec<Check>>> =
        timed("theorem", &mut timing, || cfg.m_values.par_iter().map(|&m| theorem_checks(m)).collect());
    checks.extend(theorem?.into_iter().flatten());

    checks.extend(timed("rewrite", &mut timing, || verify_rewrite(&REWRITE_MODULI))?);

    let corollary: Result<Vec<Check>> = timed("corollary", &mut timing, || {
        cfg.r_values.par_iter().map(|&r| corollary_check(r, &cfg.enum_options)).collect()
    });
    checks.extend(corollary?);

    let decomposition: Result<Vec<Check>> = timed("decomposition", &mut timing, || {
        cfg.m_values
            .par_iter()
            .map(|&m| decomposition_roundtrip(m, cfg.samples_per_m, cfg.max_word_len, cfg.seed))
            .collect()
    });
    checks.extend(decomposition?);

    Ok(CampaignReport::from_checks(checks, timing))
}
