use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sl2kit::abelian::{abelianization, invariant_factors_from_minors, relation_matrix, smith_normal_form};
use sl2kit::campaign::{verify_paper as run_campaign, CampaignReport, Overall, PaperConfig};
use sl2kit::coset::{self, todd_coxeter, EnumLimits, EnumOptions, EnumOutcome, EnumStatus, Strategy};
use sl2kit::decompose::{decompose_to_abu, rewrite_abu_to_xy};
use sl2kit::exact::{mat_a, mat_b, mat_q, reduce_mod_r};
use sl2kit::fp::{make_hm, parse_presentation, parse_word_list};
use sl2kit::matgroups::{
    self, bfs_group_order, det_one_count, parse_assignment_file, verify_lemma_identities, Assignment,
    ParsedAssignment, RelationReport, Ring, DEFAULT_ELEMENT_CAP,
};
use sl2kit::{Mat2M, Presentation, ResidueMat2};

use crate::report::{mark, CliError, Output, EXIT_FAIL, EXIT_LIMIT, EXIT_PASS};

pub struct Context {
    pub seed: u64,
    pub max_cosets: usize,
}

impl Context {
    fn enum_options(&self, strategy: Strategy) -> EnumOptions {
        EnumOptions {
            strategy,
            limits: EnumLimits::with_max_cosets(self.max_cosets),
            debug_checks: false,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    parse_presentation(&read(path)?).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn parse_u64(s: &str, what: &str) -> Result<u64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::config(format!("{what}: `{}` is not a non-negative integer", s.trim())))
}

/// `A..B` and `A..=B` are inclusive; otherwise a comma list.
fn parse_values(s: &str, what: &str) -> Result<Vec<u64>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (parse_u64(lo, what)?, parse_u64(hi, what)?);
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| parse_u64(t, what)).collect()
}

fn section(name: &str) -> &'static str {
    match name {
        "lemma-identities" => "Lemma",
        "theorem-abelianization" | "invariant-factor-formula" | "sl2z-abelianization-z12" => "Theorem",
        "corollary" => "Corollary",
        "decomposition-roundtrip" => "Decomposition",
        _ => "Rewrite",
    }
}

fn campaign_output(rep: &CampaignReport) -> Output {
    let mut text = String::new();
    let mut current = "";
    for c in &rep.checks {
        let s = section(&c.name);
        if s != current {
            let _ = writeln!(text, "== {s}");
            current = s;
        }
        let tag = if c.limit_hit { "LIMIT" } else { mark(c.passed) };
        let _ = writeln!(text, "{tag} {} {}: {}", c.name, c.params, c.details);
    }
    let failed = rep.checks.iter().filter(|c| !c.passed).count();
    let (word, code) = match rep.overall {
        Overall::Pass => ("pass", EXIT_PASS),
        Overall::Fail => ("fail", EXIT_FAIL),
        Overall::Limit => ("limit", EXIT_LIMIT),
    };
    let _ = writeln!(text, "overall: {word} ({} checks, {failed} not passed)", rep.checks.len());
    let json = serde_json::to_value(rep).expect("serializable");
    Output::new(text, json, code)
}

pub fn verify_paper(ctx: &Context, m_range: &str, r: &str, samples: usize) -> Result<Output, CliError> {
    let cfg = PaperConfig {
        m_values: parse_values(m_range, "--m-range")?,
        r_values: parse_values(r, "--r")?,
        seed: ctx.seed,
        samples_per_m: samples,
        max_word_len: 40,
        enum_options: ctx.enum_options(Strategy::Hlt),
    };
    Ok(campaign_output(&run_campaign(&cfg)?))
}

pub fn abelianize(path: Option<&Path>, hm: Option<u64>, verbose: bool) -> Result<Output, CliError> {
    let p = match (path, hm) {
        (Some(path), _) => load_presentation(path)?,
        (None, Some(m)) => make_hm(m)?,
        (None, None) => return Err(CliError::config("give --presentation FILE or --hm M")),
    };
    let group = abelianization(&p);
    let mut text = format!("{group}\n");
    let mut json = json!({
        "group": group.to_string(),
        "free_rank": group.free_rank,
        "torsion": group.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "primary_parts": group.primary_parts().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    });
    if verbose {
        let mat = relation_matrix(&p);
        let snf = smith_normal_form(&mat);
        let factors: Vec<String> = snf.diagonal.iter().map(|d| d.to_string()).collect();
        let minors: Vec<String> = invariant_factors_from_minors(&mat).iter().map(|d| d.to_string()).collect();
        let _ = writeln!(text, "relation matrix: {mat}");
        let _ = writeln!(text, "invariant factors: [{}]", factors.join(", "));
        let _ = writeln!(text, "from minors: [{}]", minors.join(", "));
        json["relation_matrix"] = serde_json::to_value(&mat).expect("serializable");
        json["invariant_factors"] = json!(factors);
        json["minors_factors"] = json!(minors);
    }
    Ok(Output::new(text, json, EXIT_PASS))
}

fn status_text(out: &EnumOutcome) -> String {
    match out.status {
        EnumStatus::Completed => "completed".into(),
        EnumStatus::LimitExceeded { limit } => format!("limit exceeded ({limit:?})"),
    }
}

pub fn coset_enum(
    ctx: &Context,
    path: &Path,
    subgroup: &str,
    strategy: Strategy,
    show_table: bool,
) -> Result<Output, CliError> {
    let p = load_presentation(path)?;
    let h = parse_word_list(subgroup, p.generators()).map_err(|e| CliError::config(format!("--subgroup: {e}")))?;
    let out = todd_coxeter(&p, &h, &ctx.enum_options(strategy));
    let s = out.stats;
    let mut text = format!(
        "status: {}\nindex: {}\ndefined: {}, coincidences: {}, deductions: {}, max live: {}, compactions: {}, lookaheads: {}\n",
        status_text(&out),
        out.index.map_or("-".to_string(), |i| i.to_string()),
        s.defined,
        s.coincidences,
        s.deductions,
        s.max_live,
        s.compactions,
        s.lookaheads
    );
    let mut json = serde_json::to_value(&out).expect("serializable");
    json["strategy"] = json!(format!("{strategy:?}").to_lowercase());
    if let (true, Some(table)) = (show_table, out.table.as_ref()) {
        let mut perms = serde_json::Map::new();
        for (g, gen) in p.generators().iter().enumerate() {
            let perm: Vec<usize> = table.permutation(g).iter().map(|c| c + 1).collect();
            let line: Vec<String> = perm.iter().map(usize::to_string).collect();
            let _ = writeln!(text, "{}: {}", gen.name(), line.join(" "));
            perms.insert(gen.name().to_string(), json!(perm));
        }
        json["table"] = Value::Object(perms);
    }
    let code = if out.is_complete() { EXIT_PASS } else { EXIT_LIMIT };
    Ok(Output::new(text, json, code))
}

pub fn verify_corollary(ctx: &Context, r: u64, strategy: Strategy) -> Result<Output, CliError> {
    let rep = coset::verify_corollary(r, &ctx.enum_options(strategy))?;
    let verdict = if rep.limit_exceeded() { "LIMIT" } else { mark(rep.passed) };
    let text = format!(
        "Corollary r={r}: {verdict}\ncoset index: {}\nBFS order of <A, Q_2> mod {r}: {}\ndeterminant-1 count mod {r}: {}\nrelators hold mod {r}: {}\n",
        rep.enumeration.index.map_or("-".to_string(), |i| i.to_string()),
        rep.bfs_order,
        rep.det_one_count,
        rep.relators_hold
    );
    let json = serde_json::to_value(&rep).expect("serializable");
    let code = if rep.limit_exceeded() {
        EXIT_LIMIT
    } else if rep.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Ok(Output::new(text, json, code))
}

pub fn decompose(m: u64, matrix: &str, xy: bool) -> Result<Output, CliError> {
    if m == 0 {
        return Err(CliError::config("--m must be positive"));
    }
    let mat = Mat2M::parse(matrix, m).map_err(|e| CliError::config(format!("--matrix: {e}")))?;
    let d = decompose_to_abu(&mat)?;
    let (word, image) = if xy {
        let w = rewrite_abu_to_xy(&d.word)?;
        let image = Assignment::phi(m)?.evaluate(&w.word)?;
        (w.to_string(), image)
    } else {
        (d.word.to_string(), Assignment::abu(m)?.evaluate(&d.word.word)?)
    };
    let verified = image == mat;
    let alphabet = if xy { "xy" } else { "abu" };
    let text = format!(
        "{word}\nverified: {}, re-evaluation {} {mat} ({} Euclidean steps)\n",
        mark(verified),
        if verified { "matches" } else { "differs from" },
        d.steps.len()
    );
    let json = json!({
        "m": m,
        "alphabet": alphabet,
        "matrix": mat.to_string(),
        "word": word,
        "verified": verified,
        "steps": serde_json::to_value(&d.steps).expect("serializable"),
    });
    Ok(Output::new(text, json, if verified { EXIT_PASS } else { EXIT_FAIL }))
}

pub fn verify_lemma(m: u64) -> Result<Output, CliError> {
    let checks = verify_lemma_identities(m)?;
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(text, "{} {} {}: {}", mark(c.passed), c.name, c.params, c.details);
    }
    let passed = checks.iter().all(|c| c.passed);
    let _ = writeln!(text, "Lemma m={m}: {}", mark(passed));
    let json = json!({ "m": m, "passed": passed, "checks": checks });
    Ok(Output::new(text, json, if passed { EXIT_PASS } else { EXIT_FAIL }))
}

fn relation_output(ring: String, rep: &RelationReport) -> Output {
    let mut text = String::new();
    for c in &rep.relators {
        let _ = writeln!(text, "{} relator {}: {} -> {}", mark(c.passed), c.index + 1, c.relator, c.image);
    }
    let failed = rep.failures().count();
    let _ = writeln!(text, "{}: {failed} of {} relators fail over {ring}", mark(rep.passed), rep.relators.len());
    let json = json!({ "ring": ring, "passed": rep.passed, "relators": rep.relators });
    Output::new(text, json, if rep.passed { EXIT_PASS } else { EXIT_FAIL })
}

pub fn check_relations(
    presentation: &Path,
    assign: &Path,
    m: Option<u64>,
    modulus: Option<u64>,
) -> Result<Output, CliError> {
    let p = load_presentation(presentation)?;
    let ring = match (m, modulus) {
        (Some(0), _) => return Err(CliError::config("--m must be positive")),
        (Some(m), _) => Some(Ring::Exact(m)),
        (None, Some(r)) if r < 2 => return Err(CliError::config("--mod must be at least 2")),
        (None, Some(r)) => Some(Ring::Residue(r)),
        (None, None) => None,
    };
    let parsed =
        parse_assignment_file(&read(assign)?, ring).map_err(|e| CliError::config(format!("{}: {e}", assign.display())))?;
    match parsed {
        ParsedAssignment::Exact { m, images } => {
            let a = Assignment::for_presentation(&p, images, Mat2M::identity(m))?;
            Ok(relation_output(format!("Z[1/{m}]"), &matgroups::check_relations(&p, &a)?))
        }
        ParsedAssignment::Residue { r, images } => {
            let a = Assignment::for_presentation(&p, images, ResidueMat2::identity(r)?)?;
            Ok(relation_output(format!("Z/{r}Z"), &matgroups::check_relations(&p, &a)?))
        }
    }
}

pub fn sl2_order(r: u64) -> Result<Output, CliError> {
    if r < 2 {
        return Err(CliError::config("--r must be at least 2"));
    }
    let count = det_one_count(r)?;
    let ab = [reduce_mod_r(&mat_a(1), r)?, reduce_mod_r(&mat_b(1), r)?];
    let bfs_ab = bfs_group_order(&ab, r, DEFAULT_ELEMENT_CAP)?.order() as u64;
    let mut text = format!("determinant-1 count mod {r}: {count}\nBFS order of <A, B> mod {r}: {bfs_ab}\n");
    let mut json = json!({ "r": r, "det_one_count": count, "bfs_order_a_b": bfs_ab });
    let mut passed = bfs_ab == count;
    if r % 2 == 1 {
        let aq = [reduce_mod_r(&mat_a(2), r)?, reduce_mod_r(&mat_q(2), r)?];
        let bfs_aq = bfs_group_order(&aq, r, DEFAULT_ELEMENT_CAP)?.order() as u64;
        let _ = writeln!(text, "BFS order of <A, Q_2> mod {r}: {bfs_aq}");
        json["bfs_order_a_q2"] = json!(bfs_aq);
        passed &= bfs_aq == count;
    }
    let _ = writeln!(text, "{}", mark(passed));
    json["passed"] = json!(passed);
    Ok(Output::new(text, json, if passed { EXIT_PASS } else { EXIT_FAIL }))
}
