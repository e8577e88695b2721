use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{mat_a, mat_b, mat_q, mat_u, reduce_mod_r, Mat2M, ResidueMat2};
use crate::fp::{generators, Generator, Presentation, Word};

/// Matrices that can serve as images of free generators.
pub trait GroupElem: Clone + PartialEq + fmt::Display {
    fn compose(&self, other: &Self) -> Self;
    /// Only called on elements already known to be invertible.
    fn invert(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn is_group_element(&self) -> bool;
    /// Identity of the same ring.
    fn one_like(&self) -> Self;

    fn power(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        acc
    }
}

impl GroupElem for Mat2M {
    fn compose(&self, other: &Self) -> Self {
        self * other
    }
    fn invert(&self) -> Self {
        self.inverse().expect("unimodular image")
    }
    fn is_identity(&self) -> bool {
        Mat2M::is_identity(self)
    }
    fn is_group_element(&self) -> bool {
        self.is_unimodular()
    }
    fn one_like(&self) -> Self {
        Mat2M::identity(self.m())
    }
}

impl GroupElem for ResidueMat2 {
    fn compose(&self, other: &Self) -> Self {
        *self * *other
    }
    fn invert(&self) -> Self {
        self.inverse().expect("unimodular image")
    }
    fn is_identity(&self) -> bool {
        ResidueMat2::is_identity(self)
    }
    fn is_group_element(&self) -> bool {
        self.is_unimodular()
    }
    fn one_like(&self) -> Self {
        ResidueMat2::identity(self.modulus()).expect("modulus already validated")
    }
}

/// Images of the generators of a free group in a matrix group.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment<T> {
    names: Vec<Generator>,
    images: Vec<T>,
    inverses: Vec<T>,
    identity: T,
}

impl<T: GroupElem> Assignment<T> {
    /// Every image must be unimodular and share the ring of `identity`.
    pub fn new(names: Vec<Generator>, images: Vec<T>, identity: T) -> Result<Self> {
        if names.len() != images.len() {
            return Err(Error::InvalidParameter(format!(
                "{} generators but {} images",
                names.len(),
                images.len()
            )));
        }
        for (n, img) in names.iter().zip(&images) {
            if !img.is_group_element() {
                return Err(Error::NotUnimodular(format!("image of `{n}` is {img}")));
            }
            if img.one_like() != identity {
                return Err(Error::InvalidParameter(format!("image of `{n}` lives in a different ring")));
            }
        }
        let inverses = images.iter().map(GroupElem::invert).collect();
        Ok(Assignment {
            names,
            images,
            inverses,
            identity,
        })
    }

    /// Orders `pairs` by the generators of `p`; every generator needs an
    /// image, unused extra names are rejected.
    pub fn for_presentation(p: &Presentation, pairs: Vec<(String, T)>, identity: T) -> Result<Self> {
        for (name, _) in &pairs {
            if p.generator_index(name).is_none() {
                return Err(Error::InvalidParameter(format!("`{name}` is not a generator of the presentation")));
            }
        }
        let mut images = Vec::with_capacity(p.num_generators());
        for g in p.generators() {
            let img = pairs
                .iter()
                .find(|(n, _)| n == g.name())
                .map(|(_, m)| m.clone())
                .ok_or_else(|| Error::MissingGenerator(g.name().to_string()))?;
            images.push(img);
        }
        Self::new(p.generators().to_vec(), images, identity)
    }

    pub fn names(&self) -> &[Generator] {
        &self.names
    }

    pub fn images(&self) -> &[T] {
        &self.images
    }

    pub fn identity(&self) -> &T {
        &self.identity
    }

    /// Image of `w`; the empty word maps to the identity.
    pub fn evaluate(&self, w: &Word) -> Result<T> {
        let mut acc = self.identity.clone();
        for &(g, e) in w.syllables() {
            let base = if e > 0 { self.images.get(g) } else { self.inverses.get(g) };
            let base = base.ok_or_else(|| Error::MissingGenerator(format!("#{g}")))?;
            acc = acc.compose(&base.power(e.unsigned_abs()));
        }
        Ok(acc)
    }
}

impl Assignment<Mat2M> {
    /// `x ↦ A`, `y ↦ Q_m`.
    pub fn phi(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroM);
        }
        Self::new(generators(&["x", "y"]), vec![mat_a(m), mat_q(m)], Mat2M::identity(m))
    }

    /// `a ↦ A`, `b ↦ B`, `u ↦ U₂`.
    pub fn serre_behr_mennicke() -> Self {
        Self::new(generators(&["a", "b", "u"]), vec![mat_a(2), mat_b(2), mat_u(2)], Mat2M::identity(2))
            .expect("built-in images are unimodular")
    }

    /// `A ↦ A`, `B ↦ B`, `U ↦ U_m`.
    pub fn abu(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroM);
        }
        Self::new(generators(&["A", "B", "U"]), vec![mat_a(m), mat_b(m), mat_u(m)], Mat2M::identity(m))
    }

    pub fn m(&self) -> u64 {
        self.identity.m()
    }

    /// The same assignment followed by reduction modulo `r`.
    pub fn reduce_mod(&self, r: u64) -> Result<Assignment<ResidueMat2>> {
        let images = self.images.iter().map(|x| reduce_mod_r(x, r)).collect::<Result<Vec<_>>>()?;
        Assignment::new(self.names.clone(), images, ResidueMat2::identity(r)?)
    }
}

/// Outcome for one relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorCheck {
    pub index: usize,
    pub relator: String,
    pub passed: bool,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub passed: bool,
    pub relators: Vec<RelatorCheck>,
}

impl RelationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RelatorCheck> {
        self.relators.iter().filter(|c| !c.passed)
    }
}

/// Evaluates every relator of `p`; passes iff all map to the identity.
pub fn check_relations<T: GroupElem>(p: &Presentation, a: &Assignment<T>) -> Result<RelationReport> {
    if a.names().len() < p.num_generators() {
        return Err(Error::MissingGenerator(
            p.generators()[a.names().len()].name().to_string(),
        ));
    }
    let mut relators = Vec::with_capacity(p.relators().len());
    for (index, r) in p.relators().iter().enumerate() {
        let img = a.evaluate(r)?;
        relators.push(RelatorCheck {
            index,
            relator: p.format_word(r),
            passed: img.is_identity(),
            image: img.to_string(),
        });
    }
    Ok(RelationReport {
        passed: relators.iter().all(|c| c.passed),
        relators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::MFraction;
    use crate::fp::{make_hm, make_serre_behr_mennicke, parse_word};

    #[test]
    fn phi_images() {
        let m = 4;
        let phi = Assignment::phi(m).unwrap();
        let g = make_hm(m).unwrap().generators().to_vec();
        assert_eq!(phi.evaluate(&parse_word("x", &g).unwrap()).unwrap(), mat_a(m));
        let w = parse_word("x^4*y*x^4", &g).unwrap();
        let expect = Mat2M::new(
            MFraction::zero(m),
            -MFraction::new(1, 1, m).unwrap(),
            MFraction::int(4, m),
            MFraction::zero(m),
        )
        .unwrap();
        assert_eq!(phi.evaluate(&w).unwrap(), expect);
        let w = parse_word("y^4*x*y^4", &g).unwrap();
        assert_eq!(phi.evaluate(&w).unwrap(), Mat2M::from_ints([[0, -1], [1, 0]], m));
        assert!(phi.evaluate(&Word::identity()).unwrap().is_identity());
        assert!(matches!(phi.evaluate(&Word::gen(5)), Err(Error::MissingGenerator(_))));
    }

    #[test]
    fn relation_checks() {
        for m in [1, 2, 3, 10] {
            let report = check_relations(&make_hm(m).unwrap(), &Assignment::phi(m).unwrap()).unwrap();
            assert!(report.passed, "m = {m}");
        }
        let report = check_relations(&make_serre_behr_mennicke(), &Assignment::serre_behr_mennicke()).unwrap();
        assert!(report.passed);

        let bad = Assignment::new(generators(&["x", "y"]), vec![mat_a(2), mat_a(2)], Mat2M::identity(2)).unwrap();
        let report = check_relations(&make_hm(2).unwrap(), &bad).unwrap();
        assert!(!report.passed);
        assert!(!report.relators[0].passed);
        assert_eq!(report.failures().next().unwrap().index, 0);
    }

    #[test]
    fn rejects_bad_images() {
        let sing = Mat2M::from_ints([[2, 0], [0, 1]], 3);
        assert!(matches!(
            Assignment::new(generators(&["x"]), vec![sing], Mat2M::identity(3)),
            Err(Error::NotUnimodular(_))
        ));
        assert!(Assignment::new(generators(&["x"]), vec![mat_a(2)], Mat2M::identity(3)).is_err());
        assert!(Assignment::phi(2).unwrap().reduce_mod(4).is_err());
    }

    #[test]
    fn named_assignment() {
        let p = make_hm(2).unwrap();
        let a = Assignment::for_presentation(
            &p,
            vec![("y".into(), mat_q(2)), ("x".into(), mat_a(2))],
            Mat2M::identity(2),
        )
        .unwrap();
        assert_eq!(a.images(), &[mat_a(2), mat_q(2)]);
        let missing = Assignment::for_presentation(&p, vec![("x".into(), mat_a(2))], Mat2M::identity(2));
        assert!(matches!(missing, Err(Error::MissingGenerator(n)) if n == "y"));
    }
}
