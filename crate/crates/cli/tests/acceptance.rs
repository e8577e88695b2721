//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line under a plain `cargo test`.

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2kit::abelian::{
    abelianization, formula_check, invariant_factors_from_minors, smith_normal_form, theorem_case, IntMat,
};
use sl2kit::campaign::decomposition_roundtrip;
use sl2kit::coset::{todd_coxeter, verify_corollary, EnumOptions, Strategy};
use sl2kit::fp::{make_hm, parse_presentation, Presentation};
use sl2kit::matgroups::{
    bfs_group_order, check_relations, verify_lemma_identities, verify_rewrite, Assignment, DEFAULT_ELEMENT_CAP,
    REWRITE_MODULI,
};
use sl2kit::ResidueMat2;

// Pinned tolerances. Arithmetic is exact everywhere; only wall-clock
// budgets and sample sizes are tunable.
const M_MAX: u64 = 200;
const LEMMA_BUDGET: Duration = Duration::from_secs(1);
const THEOREM_BUDGET: Duration = Duration::from_secs(1);
const COROLLARY_BUDGET: Duration = Duration::from_secs(60);
const DECOMPOSITION_BUDGET: Duration = Duration::from_secs(30);
const COROLLARY_ORDERS: [(u64, usize); 7] =
    [(3, 24), (5, 120), (7, 336), (9, 648), (11, 1320), (13, 2184), (15, 2880)];
const SNF_SAMPLES: usize = 1000;
const SNF_MAX_ROWS: usize = 4;
const SNF_MAX_COLS: usize = 5;
const SNF_ENTRY: i64 = 10;
const DECOMPOSITION_MS: [u64; 6] = [1, 2, 3, 5, 6, 10];
const DECOMPOSITION_SAMPLES: usize = 500;
const DECOMPOSITION_WORD_LEN: usize = 40;
const SEED: u64 = 20_240_601;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn within(v: Verdict, elapsed: Duration, budget: Duration) -> Verdict {
    let detail = format!("{}; {:.2?} of {:.0?} budget", v.detail, elapsed, budget);
    verdict(v.passed && elapsed <= budget, detail)
}

fn timed(budget: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    within(v, start.elapsed(), budget)
}

fn lemma_suite() -> Verdict {
    timed(LEMMA_BUDGET, || {
        let mut bad = Vec::new();
        for m in 1..=M_MAX {
            let checks = verify_lemma_identities(m).expect("m >= 1");
            if checks.len() != 5 || checks.iter().any(|c| !c.passed) {
                bad.push(m);
            }
        }
        verdict(bad.is_empty(), format!("5 identity groups for m = 1..{M_MAX}, failures at {bad:?}"))
    })
}

fn theorem_reproduction() -> Verdict {
    timed(THEOREM_BUDGET, || {
        let mut bad = Vec::new();
        for m in 1..=M_MAX {
            let got = abelianization(&make_hm(m).expect("m >= 1"));
            if got != theorem_case(m).expect("m >= 1") {
                bad.push(m);
            }
        }
        let spots = [(1, "Z/12"), (2, "Z/3"), (3, "Z/4"), (6, "trivial"), (35, "Z/12")];
        let spot_ok = spots
            .iter()
            .all(|&(m, want)| abelianization(&make_hm(m).expect("m >= 1")).to_string() == want);
        verdict(
            bad.is_empty() && spot_ok,
            format!("case split matches for m = 1..{M_MAX} (mismatches {bad:?}); spot values ok: {spot_ok}"),
        )
    })
}

fn formula_crosscheck() -> Verdict {
    let mut inconsistent = Vec::new();
    let mut printed_disagrees = Vec::new();
    for m in 1..=M_MAX {
        let f = formula_check(m).expect("m >= 1");
        if !f.consistent() {
            inconsistent.push(m);
        }
        if !f.printed_agrees {
            printed_disagrees.push(m);
        }
    }
    let shown: Vec<String> = printed_disagrees.iter().take(8).map(u64::to_string).collect();
    verdict(
        inconsistent.is_empty() && printed_disagrees.contains(&1),
        format!(
            "SNF = minors = gcd(m^2-1, 12) for m = 1..{M_MAX} (inconsistent {inconsistent:?}); \
             printed gcd(m^2+1, 12m, 4m^2+8) differs at {} values of m: {}, ...",
            printed_disagrees.len(),
            shown.join(", ")
        ),
    )
}

fn corollary_family() -> Verdict {
    timed(COROLLARY_BUDGET, || {
        let mut parts = Vec::new();
        let mut ok = true;
        for (r, order) in COROLLARY_ORDERS {
            let rep = verify_corollary(r, &EnumOptions::default()).expect("odd r >= 3");
            let good = rep.passed && rep.bfs_order == order && rep.det_one_count == order as u64;
            ok &= good;
            parts.push(format!("{r}:{}", rep.enumeration.index.map_or("-".into(), |i| i.to_string())));
        }
        verdict(ok, format!("index = BFS = det-1 count, r:index {}", parts.join(" ")))
    })
}

fn both_strategies(p: &Presentation) -> (Option<usize>, Option<usize>) {
    let run = |strategy| {
        let opts = EnumOptions {
            strategy,
            ..EnumOptions::default()
        };
        let out = todd_coxeter(p, &[], &opts);
        if let Some(t) = &out.table {
            t.verify(p, &[]).expect("closed table");
        }
        out.index
    };
    (run(Strategy::Hlt), run(Strategy::Felsch))
}

fn perm_compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    // Left-to-right: first a, then b.
    a.iter().map(|&i| b[i as usize]).collect()
}

fn perm_inverse(a: &[u8]) -> Vec<u8> {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j as usize] = i as u8;
    }
    inv
}

/// Order of the permutation group generated by `gens` after checking that
/// they satisfy the relators of `p`.
fn permutation_order(p: &Presentation, gens: &[Vec<u8>]) -> Option<usize> {
    let id: Vec<u8> = (0..gens[0].len() as u8).collect();
    for r in p.relators() {
        let mut acc = id.clone();
        for (g, inv) in r.letters() {
            let step = if inv { perm_inverse(&gens[g]) } else { gens[g].clone() };
            acc = perm_compose(&acc, &step);
        }
        if acc != id {
            return None;
        }
    }
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            for s in [g.clone(), perm_inverse(g)] {
                let n = perm_compose(&e, &s);
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
    }
    Some(seen.len())
}

fn matrix_order(p: &Presentation, images: &[[[i64; 2]; 2]], r: u64) -> Option<usize> {
    let images: Vec<ResidueMat2> = images.iter().map(|&m| ResidueMat2::new(m, r).expect("r >= 2")).collect();
    let a = Assignment::new(p.generators().to_vec(), images, ResidueMat2::identity(r).expect("r >= 2")).ok()?;
    if !check_relations(p, &a).ok()?.passed {
        return None;
    }
    Some(bfs_group_order(a.images(), r, DEFAULT_ELEMENT_CAP).ok()?.order())
}

fn presentation(gens: &str, rels: &[&str]) -> Presentation {
    let mut text = format!("gens: {gens}\n");
    for r in rels {
        text.push_str(&format!("rel: {r}\n"));
    }
    parse_presentation(&text).expect("valid fixture")
}

fn strategy_agreement() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, _) in COROLLARY_ORDERS {
        let p = sl2kit::fp::make_corollary(r).expect("odd r");
        let (h, f) = both_strategies(&p);
        ok &= h.is_some() && h == f;
    }
    parts.push(format!("{} corollary fixtures", COROLLARY_ORDERS.len()));

    let cyclic = presentation("x", &["x^5"]);
    let s3 = presentation("x y", &["x^2", "y^3", "(x*y)^2"]);
    let q8 = presentation("x y", &["x^4", "x^2*y^-2", "y^-1*x*y*x"]);
    let a4 = presentation("x y", &["x^2", "y^3", "(x*y)^3"]);
    let sl23 = presentation("s t", &["s^3*t^-3", "s^3*(s*t)^-2"]);
    let corpus: [(&str, &Presentation, Option<usize>); 5] = [
        ("cyclic-5", &cyclic, matrix_order(&cyclic, &[[[1, 1], [0, 1]]], 5)),
        ("sym-3", &s3, matrix_order(&s3, &[[[0, 1], [1, 0]], [[1, 1], [1, 0]]], 2)),
        ("quaternion-8", &q8, matrix_order(&q8, &[[[0, 1], [2, 0]], [[1, 1], [1, 2]]], 3)),
        ("alt-4", &a4, permutation_order(&a4, &[vec![1, 0, 3, 2], vec![0, 2, 3, 1]])),
        ("sl2-3", &sl23, matrix_order(&sl23, &[[[2, 2], [0, 2]], [[2, 0], [2, 2]]], 3)),
    ];
    let expected = [5, 6, 8, 12, 24];
    for ((name, p, oracle), want) in corpus.iter().zip(expected) {
        let (h, f) = both_strategies(p);
        let good = oracle.is_some() && h == *oracle && f == *oracle && *oracle == Some(want);
        ok &= good;
        parts.push(format!("{name}={}", h.map_or("-".into(), |i| i.to_string())));
    }
    verdict(ok, format!("HLT = Felsch = brute force on {}", parts.join(", ")))
}

fn snf_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for _ in 0..SNF_SAMPLES {
        let rows = rng.gen_range(1..=SNF_MAX_ROWS);
        let cols = rng.gen_range(1..=SNF_MAX_COLS);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-SNF_ENTRY..=SNF_ENTRY)).collect())
            .collect();
        let m = IntMat::from_rows(&data);
        let snf = smith_normal_form(&m);
        if !snf.verify(&m) || snf.diagonal != invariant_factors_from_minors(&m) {
            bad += 1;
        }
    }
    verdict(
        bad == 0,
        format!("{SNF_SAMPLES} matrices up to {SNF_MAX_ROWS}x{SNF_MAX_COLS}, entries in [-{SNF_ENTRY}, {SNF_ENTRY}]: {bad} failures"),
    )
}

fn decomposition_suite() -> Verdict {
    timed(DECOMPOSITION_BUDGET, || {
        let mut bad = Vec::new();
        for m in DECOMPOSITION_MS {
            let c = decomposition_roundtrip(m, DECOMPOSITION_SAMPLES, DECOMPOSITION_WORD_LEN, SEED).expect("m >= 1");
            if !c.passed {
                bad.push(format!("m={m}: {}", c.details));
            }
        }
        verdict(
            bad.is_empty(),
            format!(
                "{DECOMPOSITION_SAMPLES} words per m in {DECOMPOSITION_MS:?}, exact round-trip with strict norm descent; failures {bad:?}"
            ),
        )
    })
}

fn rewrite_suite() -> Verdict {
    let checks = verify_rewrite(&REWRITE_MODULI).expect("valid moduli");
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{} {}", c.name, c.params)).collect();
    let residue = checks.iter().filter(|c| c.name == "rewritten-relators-residue").count();
    verdict(
        failed.is_empty() && residue == REWRITE_MODULI.len(),
        format!("{} checks over Z[1/2] and mod {REWRITE_MODULI:?}; failed {failed:?}", checks.len()),
    )
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn sl2kit(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_sl2kit")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_contract() -> Verdict {
    let h2 = fixture("h2.txt");
    let h1 = fixture("h1.txt");
    let malformed = fixture("malformed.txt");
    let phi2 = fixture("phi2.txt");
    let wrong = fixture("wrong.txt");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["abelianize", "--presentation", &h2], 0),
        (vec!["verify-corollary", "--r", "5"], 0),
        (vec!["check-relations", "--presentation", &h2, "--assign", &phi2], 0),
        (vec!["check-relations", "--presentation", &h2, "--assign", &wrong], 1),
        (vec!["abelianize", "--presentation", &malformed], 2),
        (vec!["verify-paper", "--m-range", ""], 2),
        (vec!["coset-enum", "--presentation", &h1, "--max-cosets", "100"], 3),
        (vec!["verify-corollary", "--r", "15", "--max-cosets", "50"], 3),
    ];
    let mut bad = Vec::new();
    for (args, want) in &cases {
        let (code, _) = sl2kit(args);
        if code != *want {
            bad.push(format!("{} -> {code} (want {want})", args[0]));
        }
    }
    let campaign = ["verify-paper", "--m-range", "1..6", "--r", "3,5", "--samples", "10", "--seed", "11", "--format", "json"];
    let decompose = ["decompose", "--m", "6", "--matrix", "[[5, 12], [2, 5]]", "--format", "json"];
    let mut stable = true;
    for args in [&campaign[..], &decompose[..]] {
        let (c1, a) = sl2kit(args);
        let (c2, b) = sl2kit(args);
        stable &= c1 == 0 && c2 == 0 && a == b && !a.is_empty();
    }
    verdict(
        bad.is_empty() && stable,
        format!("{} exit-code fixtures (mismatches {bad:?}); JSON byte-stable across runs: {stable}", cases.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("Lemma identity suite", lemma_suite),
        ("Theorem reproduction", theorem_reproduction),
        ("Invariant-factor formula cross-check", formula_crosscheck),
        ("Corollary verification", corollary_family),
        ("Coset-enumeration cross-validation", strategy_agreement),
        ("SNF property suite", snf_suite),
        ("Decomposition round-trip", decomposition_suite),
        ("Rewriting checks", rewrite_suite),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.passed {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {}", if v.passed { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
