use num_integer::Integer;
use serde::Serialize;

use super::assignment::{check_relations, Assignment, RelationReport};
use crate::campaign::Check;
use crate::error::{Error, Result};
use crate::exact::{mat_a, mat_b, mat_q, mat_u, MFraction, Mat2M};
use crate::fp::{generators, serre_to_h2_rewrite, Presentation, Word};

fn pw(x: &Mat2M, e: i64) -> Mat2M {
    x.pow(e).expect("unimodular")
}

fn compare(name: &str, m: u64, lhs: &[(&str, Mat2M)], want: Option<&Mat2M>) -> Check {
    let first = &lhs[0].1;
    let mut passed = lhs.iter().all(|(_, x)| x == first);
    if let Some(w) = want {
        passed &= first == w;
    }
    let mut details = lhs
        .iter()
        .map(|(label, x)| format!("{label} = {x}"))
        .collect::<Vec<_>>()
        .join("; ");
    if let Some(w) = want {
        details.push_str(&format!("; expected {w}"));
    }
    Check::new(name, format!("m={m}"), passed, details)
}

/// The five matrix identities relating `A`, `Q_m`, `B` and `U_m`.
pub fn verify_lemma_identities(m: u64) -> Result<Vec<Check>> {
    if m == 0 {
        return Err(Error::ZeroM);
    }
    let mi = m as i64;
    let (a, q, b, u) = (mat_a(m), mat_q(m), mat_b(m), mat_u(m));
    let id = Mat2M::identity(m);

    let am = pw(&a, mi);
    let qm = pw(&q, mi);
    let w1 = Mat2M::new(
        MFraction::zero(m),
        -MFraction::new(1, 1, m)?,
        MFraction::int(mi, m),
        MFraction::zero(m),
    )?;
    let w2 = Mat2M::from_ints([[0, -1], [1, 0]], m);
    let c = &pw(&a, 2) * &qm;

    let c2 = pw(&c, 2);
    let c4 = pw(&c, 4);
    let order_check = Check::new(
        "a2qm-order-4",
        format!("m={m}"),
        c == Mat2M::from_ints([[1, -1], [2, -1]], m) && c4 == id && !c2.is_identity(),
        format!("A^2 Q^m = {c}; (A^2 Q^m)^2 = {c2}; (A^2 Q^m)^4 = {c4}"),
    );

    Ok(vec![
        compare(
            "am-q-am",
            m,
            &[("A^m Q A^m", &(&am * &q) * &am), ("Q A^m Q", &(&q * &am) * &q)],
            Some(&w1),
        ),
        compare(
            "qm-a-qm",
            m,
            &[("Q^m A Q^m", &(&qm * &a) * &qm), ("A Q^m A", &(&a * &qm) * &a)],
            Some(&w2),
        ),
        order_check,
        compare(
            "b-from-a-q",
            m,
            &[("A^-1 Q^-m A^-1", &(&pw(&a, -1) * &pw(&q, -mi)) * &pw(&a, -1)), ("B", b.clone())],
            None,
        ),
        compare(
            "u-from-b-a-q",
            m,
            &[
                (
                    "B^-1 Q^-1 A^-m Q^-1",
                    &(&(&pw(&b, -1) * &pw(&q, -1)) * &pw(&a, -mi)) * &pw(&q, -1),
                ),
                ("U", u),
            ],
            None,
        ),
    ])
}

/// Relator checks of one assignment after reduction modulo `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusCheck {
    pub modulus: u64,
    pub report: RelationReport,
}

/// Reduces `a` modulo each `r` and evaluates the relators of `p` there.
/// Every modulus is validated before any work is done.
pub fn residue_campaign(p: &Presentation, a: &Assignment<Mat2M>, moduli: &[u64]) -> Result<Vec<ModulusCheck>> {
    let m = a.m();
    for &r in moduli {
        if r < 2 {
            return Err(Error::BadModulus(r));
        }
        if r.gcd(&m) != 1 {
            return Err(Error::NotCoprime { r, m });
        }
    }
    moduli
        .iter()
        .map(|&r| {
            let reduced = a.reduce_mod(r)?;
            Ok(ModulusCheck {
                modulus: r,
                report: check_relations(p, &reduced)?,
            })
        })
        .collect()
}

/// Moduli used for the residue side of the rewrite checks.
pub const REWRITE_MODULI: [u64; 5] = [3, 5, 7, 11, 13];

/// Exact and residue checks that the Serre–Behr–Mennicke relators, pushed
/// through the elimination of `b` and `u`, hold for `a ↦ A`, `q ↦ Q₂`.
pub fn verify_rewrite(moduli: &[u64]) -> Result<Vec<Check>> {
    let rw = serre_to_h2_rewrite();
    let aq = Assignment::new(generators(&["a", "q"]), vec![mat_a(2), mat_q(2)], Mat2M::identity(2))?;
    let mut checks = Vec::new();

    let sbm = check_relations(&rw.source, &Assignment::serre_behr_mennicke())?;
    checks.push(Check::new(
        "sbm-relators-exact",
        "m=2",
        sbm.passed,
        format!("{} relators under a->A, b->B, u->U", sbm.relators.len()),
    ));

    let h2 = check_relations(&rw.target, &aq)?;
    checks.push(Check::new(
        "h2-relators-exact",
        "m=2",
        h2.passed,
        format!("{} relators under a->A, q->Q", h2.relators.len()),
    ));

    let b_img = aq.evaluate(rw.substitution.image(1).expect("total"))?;
    let u_img = aq.evaluate(rw.substitution.image(2).expect("total"))?;
    checks.push(Check::new(
        "substitution-images",
        "m=2",
        b_img == mat_b(2) && u_img == mat_u(2),
        format!("b -> {b_img}; u -> {u_img}"),
    ));

    let mut words: Vec<Word> = rw.rewritten.clone();
    words.push(rw.q_definition.clone());
    let combined = Presentation::new(rw.target.generators().to_vec(), words)?;
    let exact = check_relations(&combined, &aq)?;
    let failed: Vec<String> = exact.failures().map(|c| c.relator.clone()).collect();
    checks.push(Check::new(
        "rewritten-relators-exact",
        "m=2",
        exact.passed,
        if failed.is_empty() {
            format!("{} rewritten words trivial over Z[1/2]", exact.relators.len())
        } else {
            format!("nontrivial: {}", failed.join(", "))
        },
    ));

    let all = Presentation::new(
        rw.target.generators().to_vec(),
        rw.target.relators().iter().chain(combined.relators()).cloned().collect(),
    )?;
    for mc in residue_campaign(&all, &aq, moduli)? {
        checks.push(Check::new(
            "rewritten-relators-residue",
            format!("r={}", mc.modulus),
            mc.report.passed,
            format!("{} words checked mod {}", mc.report.relators.len(), mc.modulus),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::make_hm;

    #[test]
    fn lemma_holds() {
        for m in 1..=12 {
            let checks = verify_lemma_identities(m).unwrap();
            assert_eq!(checks.len(), 5);
            for c in checks {
                assert!(c.passed, "{} failed for m = {m}: {}", c.name, c.details);
            }
        }
        assert_eq!(verify_lemma_identities(0), Err(Error::ZeroM));
    }

    #[test]
    fn rewrite_holds() {
        let checks = verify_rewrite(&REWRITE_MODULI).unwrap();
        assert_eq!(checks.len(), 4 + REWRITE_MODULI.len());
        for c in checks {
            assert!(c.passed, "{} {}: {}", c.name, c.params, c.details);
        }
    }

    #[test]
    fn campaign_validation() {
        let p = make_hm(2).unwrap();
        let phi = Assignment::phi(2).unwrap();
        assert_eq!(residue_campaign(&p, &phi, &[3, 1]), Err(Error::BadModulus(1)));
        assert_eq!(residue_campaign(&p, &phi, &[3, 6]), Err(Error::NotCoprime { r: 6, m: 2 }));
        let ok = residue_campaign(&p, &phi, &[3, 5, 9]).unwrap();
        assert!(ok.iter().all(|c| c.report.passed));
        // m = 1 reduces modulo every r.
        let one = residue_campaign(&make_hm(1).unwrap(), &Assignment::phi(1).unwrap(), &[2, 4, 6]).unwrap();
        assert!(one.iter().all(|c| c.report.passed));
    }
}
