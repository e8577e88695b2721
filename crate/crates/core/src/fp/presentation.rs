use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::error::{Error, Result};
use crate::text::{is_ident_continue, is_ident_start};

/// A generator name matching `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator(String);

impl Generator {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue);
        if ok {
            Ok(Generator(name))
        } else {
            Err(Error::BadGeneratorName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn generators(names: &[&str]) -> Vec<Generator> {
    names.iter().map(|n| Generator::new(*n).expect("valid built-in name")).collect()
}

/// Renders a word in the text grammar, e.g. `x^2*y*x^-2`; the identity is `1`.
pub fn format_word(w: &Word, gens: &[Generator]) -> String {
    if w.is_identity() {
        return "1".to_string();
    }
    let parts: Vec<String> = w
        .syllables()
        .iter()
        .map(|&(g, e)| {
            let name = gens.get(g).map(|g| g.name().to_string()).unwrap_or_else(|| format!("g{g}"));
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Generators plus relator words over them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Checks name uniqueness and that relators only use known generators.
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::DuplicateGenerator(g.name().to_string()));
            }
        }
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(Error::GeneratorOutOfRange(g));
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name() == name)
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word(w, &self.generators)
    }

    /// Copy with one extra relator.
    pub fn with_relator(&self, w: Word) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.push(w);
        Self::new(self.generators.clone(), relators)
    }

    /// Copy with generators renamed positionally.
    pub fn renamed(&self, names: &[&str]) -> Result<Self> {
        if names.len() != self.generators.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} names, got {}",
                self.generators.len(),
                names.len()
            )));
        }
        let gens = names.iter().map(|n| Generator::new(*n)).collect::<Result<Vec<_>>>()?;
        Self::new(gens, self.relators.clone())
    }
}

/// Writes the presentation file format.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.generators.iter().map(|g| g.name()).collect();
        writeln!(f, "gens: {}", names.join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel: {}", self.format_word(r))?;
        }
        Ok(())
    }
}

/// A homomorphism between free groups, given by the images of the source
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    source: Vec<Generator>,
    target: Vec<Generator>,
    images: BTreeMap<usize, Word>,
}

impl Substitution {
    pub fn new(source: Vec<Generator>, target: Vec<Generator>) -> Self {
        Substitution {
            source,
            target,
            images: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &[Generator] {
        &self.source
    }

    pub fn target(&self) -> &[Generator] {
        &self.target
    }

    /// Sets the image of source generator `g`, checking it is a word over
    /// the target alphabet.
    pub fn set(&mut self, g: usize, image: Word) -> Result<()> {
        if g >= self.source.len() {
            return Err(Error::GeneratorOutOfRange(g));
        }
        if let Some(h) = image.max_generator() {
            if h >= self.target.len() {
                return Err(Error::GeneratorOutOfRange(h));
            }
        }
        self.images.insert(g, image);
        Ok(())
    }

    /// Sets the image of the named source generator from text.
    pub fn set_text(&mut self, name: &str, image: &str) -> Result<()> {
        let g = self
            .source
            .iter()
            .position(|s| s.name() == name)
            .ok_or_else(|| Error::MissingGenerator(name.to_string()))?;
        let w = super::parse::parse_word(image, &self.target)?;
        self.set(g, w)
    }

    pub fn image(&self, g: usize) -> Option<&Word> {
        self.images.get(&g)
    }

    pub fn is_total(&self) -> bool {
        (0..self.source.len()).all(|g| self.images.contains_key(&g))
    }

    /// Homomorphic image of `w`, freely reduced.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Word::identity();
        for &(g, e) in w.syllables() {
            let img = self.images.get(&g).ok_or_else(|| {
                let name = self.source.get(g).map(|s| s.name().to_string()).unwrap_or_else(|| format!("#{g}"));
                Error::MissingGenerator(name)
            })?;
            out = out.concat(&img.pow(e));
        }
        Ok(out)
    }

    /// `self` followed by `next` (i.e. `next ∘ self`).
    pub fn then(&self, next: &Substitution) -> Result<Substitution> {
        let mut out = Substitution::new(self.source.clone(), next.target.clone());
        for (&g, w) in &self.images {
            out.set(g, next.apply(w)?)?;
        }
        Ok(out)
    }
}

/// Relator form `lhs · rhs⁻¹` of the equation `lhs = rhs`.
pub fn equation(lhs: &Word, rhs: &Word) -> Word {
    lhs.concat(&rhs.inverse())
}

fn syl(s: &[(usize, i64)]) -> Word {
    Word::from_syllables(s.iter().copied())
}

/// The two-generator, three-relator group
/// `⟨x, y | xᵐyxᵐ = yxᵐy, yᵐxyᵐ = xyᵐx, (x²yᵐ)⁴ = 1⟩`.
pub fn make_hm(m: u64) -> Result<Presentation> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let m = i64::try_from(m).map_err(|_| Error::ExponentOverflow)?;
    let (x, y) = (0, 1);
    let rels = vec![
        equation(&syl(&[(x, m), (y, 1), (x, m)]), &syl(&[(y, 1), (x, m), (y, 1)])),
        equation(&syl(&[(y, m), (x, 1), (y, m)]), &syl(&[(x, 1), (y, m), (x, 1)])),
        syl(&[(x, 2), (y, m)]).pow(4),
    ];
    Presentation::new(generators(&["x", "y"]), rels)
}

/// `⟨a, b, u | b⁴ = 1, b² = (bu)² = (ba)³ = (bua²)³, u⁻¹au = a⁴⟩`, with the
/// chained equality anchored at `b²`.
pub fn make_serre_behr_mennicke() -> Presentation {
    let (a, b, u) = (0, 1, 2);
    let b2 = Word::power_of(b, 2);
    let rels = vec![
        Word::power_of(b, 4),
        equation(&b2, &syl(&[(b, 1), (u, 1)]).pow(2)),
        equation(&b2, &syl(&[(b, 1), (a, 1)]).pow(3)),
        equation(&b2, &syl(&[(b, 1), (u, 1), (a, 2)]).pow(3)),
        equation(&syl(&[(u, -1), (a, 1), (u, 1)]), &Word::power_of(a, 4)),
    ];
    Presentation::new(generators(&["a", "b", "u"]), rels).expect("valid built-in presentation")
}

/// `H₂` with the extra relator `xʳ`, for odd `r ≥ 3`.
pub fn make_corollary(r: u64) -> Result<Presentation> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("r must be odd and at least 3, got {r}")));
    }
    let r = i64::try_from(r).map_err(|_| Error::ExponentOverflow)?;
    make_hm(2)?.with_relator(Word::power_of(0, r))
}

/// The elimination of `b` and `u` from the Serre–Behr–Mennicke
/// presentation in favour of `q = bua²u⁻¹b⁻¹`.
#[derive(Clone, Debug)]
pub struct PresentationRewrite {
    /// Over `{a, b, u}`.
    pub source: Presentation,
    /// `H₂` over `{a, q}`.
    pub target: Presentation,
    /// `a ↦ a`, `b ↦ a⁻¹q⁻²a⁻¹`, `u ↦ b⁻¹q⁻¹a⁻²q⁻¹` with `b` already replaced.
    pub substitution: Substitution,
    /// Each source relator pushed through the substitution.
    pub rewritten: Vec<Word>,
    /// `q = bua²u⁻¹b⁻¹` rewritten over `{a, q}`.
    pub q_definition: Word,
}

pub fn serre_to_h2_rewrite() -> PresentationRewrite {
    let source = make_serre_behr_mennicke();
    let target = make_hm(2).and_then(|p| p.renamed(&["a", "q"])).expect("valid built-in presentation");
    let aq = generators(&["a", "q"]);

    let mut b_only = Substitution::new(generators(&["a", "b", "u"]), generators(&["a", "b", "q"]));
    b_only.set_text("a", "a").expect("built-in");
    b_only.set_text("b", "b").expect("built-in");
    b_only.set_text("u", "b^-1*q^-1*a^-2*q^-1").expect("built-in");
    let mut eliminate_b = Substitution::new(generators(&["a", "b", "q"]), aq.clone());
    eliminate_b.set_text("a", "a").expect("built-in");
    eliminate_b.set_text("b", "a^-1*q^-2*a^-1").expect("built-in");
    eliminate_b.set_text("q", "q").expect("built-in");
    let substitution = b_only.then(&eliminate_b).expect("composable");

    let rewritten = source
        .relators()
        .iter()
        .map(|r| substitution.apply(r).expect("total substitution"))
        .collect();

    // q · (b u a² u⁻¹ b⁻¹)⁻¹ over {a, b, u, q}, then eliminate b and u.
    let mut with_q = Substitution::new(generators(&["a", "b", "u", "q"]), aq.clone());
    for i in 0..3 {
        with_q.set(i, substitution.image(i).expect("total").clone()).expect("in range");
    }
    with_q.set(3, Word::gen(1)).expect("in range");
    let (a, b, u, q) = (0, 1, 2, 3);
    let q_rel = equation(&Word::gen(q), &syl(&[(b, 1), (u, 1), (a, 2), (u, -1), (b, -1)]));
    let q_definition = with_q.apply(&q_rel).expect("total substitution");

    PresentationRewrite {
        source,
        target,
        substitution,
        rewritten,
        q_definition,
    }
}
