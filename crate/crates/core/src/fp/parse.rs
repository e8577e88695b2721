//! Presentation file format:
//!
//! ```text
//! # comment
//! gens: x y
//! rel: x^2*y*x^2 = y*x^2*y
//! rel: (x^2*y^2)^4
//! ```
//!
//! Words are `term ('*' term)*` with `term = gen ('^' int)? | '(' word ')' ('^' int)?`;
//! `1` denotes the identity. An equation `L = R` is stored as the relator `L·R⁻¹`.

use super::presentation::{equation, Generator, Presentation};
use super::word::Word;
use crate::text::{Cursor, ParseError, ParseErrorKind};

struct WordParser<'g> {
    gens: &'g [Generator],
}

impl WordParser<'_> {
    fn word(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let mut w = self.term(cur)?;
        while cur.peek() == Some('*') {
            cur.bump();
            let t = self.term(cur)?;
            w = w.checked_concat(&t).ok_or_else(|| cur.error(ParseErrorKind::MalformedExponent("overflow".into())))?;
        }
        Ok(w)
    }

    fn term(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let base = match cur.peek() {
            Some('(') => {
                cur.bump();
                let w = self.word(cur)?;
                cur.expect(')')?;
                w
            }
            Some('1') => {
                cur.bump();
                Word::identity()
            }
            Some(c) if crate::text::is_ident_start(c) => {
                let start = cur.pos();
                let name = cur.ident().expect("identifier start checked");
                match self.gens.iter().position(|g| g.name() == name) {
                    Some(i) => Word::gen(i),
                    None => return Err(cur.error_at(start, ParseErrorKind::UnknownGenerator(name))),
                }
            }
            _ => return Err(cur.unexpected("generator, `1` or `(`")),
        };
        if cur.peek() != Some('^') {
            return Ok(base);
        }
        cur.bump();
        let pos = {
            cur.skip_ws();
            cur.pos()
        };
        let exp = match cur.signed_digits() {
            Some((_, digits)) => digits.parse::<i64>().ok(),
            None => None,
        };
        let malformed = |cur: &mut Cursor<'_>| {
            let tok = cur.junk_token();
            cur.error_at(pos, ParseErrorKind::MalformedExponent(tok))
        };
        let Some(exp) = exp else {
            return Err(malformed(cur));
        };
        base.checked_pow(exp)
            .ok_or_else(|| cur.error_at(pos, ParseErrorKind::MalformedExponent(exp.to_string())))
    }

    /// `word` or `word = word`.
    fn relator(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let lhs = self.word(cur)?;
        let w = if cur.peek() == Some('=') {
            cur.bump();
            let rhs = self.word(cur)?;
            equation(&lhs, &rhs)
        } else {
            lhs
        };
        cur.expect_end()?;
        Ok(w)
    }
}

/// Parses a word over `generators` (single line).
pub fn parse_word(text: &str, generators: &[Generator]) -> Result<Word, ParseError> {
    let mut cur = Cursor::new(text, 1, 0);
    let w = WordParser { gens: generators }.word(&mut cur)?;
    cur.expect_end()?;
    Ok(w)
}

/// Parses a comma-separated list of words (used for subgroup generators).
pub fn parse_word_list(text: &str, generators: &[Generator]) -> Result<Vec<Word>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let mut cur = Cursor::new(piece, 1, offset);
        offset += piece.chars().count() + 1;
        if cur.at_end() {
            continue;
        }
        let w = WordParser { gens: generators }.word(&mut cur)?;
        cur.expect_end()?;
        out.push(w);
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Splits `key: rest` and returns the key, the rest and the rest's column offset.
fn directive(line: &str) -> Option<(&str, &str, usize)> {
    let colon = line.find(':')?;
    let key = line[..colon].trim();
    let rest = &line[colon + 1..];
    Some((key, rest, line[..colon + 1].chars().count()))
}

/// Parses the presentation file format.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut gens: Option<Vec<Generator>> = None;
    let mut relators = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let first_col = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
        let Some((key, rest, offset)) = directive(line) else {
            return Err(ParseError::new(
                line_no,
                first_col,
                ParseErrorKind::UnknownDirective(line.trim().to_string()),
            ));
        };
        match key {
            "gens" => {
                if gens.is_some() {
                    return Err(ParseError::new(
                        line_no,
                        first_col,
                        ParseErrorKind::Invalid("duplicate `gens:` line".into()),
                    ));
                }
                let mut list: Vec<Generator> = Vec::new();
                let mut col = offset;
                for tok in rest.split_inclusive(char::is_whitespace) {
                    let name = tok.trim();
                    let here = col + tok.chars().take_while(|c| c.is_whitespace()).count() + 1;
                    col += tok.chars().count();
                    if name.is_empty() {
                        continue;
                    }
                    let g = Generator::new(name).map_err(|_| {
                        ParseError::new(line_no, here, ParseErrorKind::BadGeneratorName(name.to_string()))
                    })?;
                    if list.contains(&g) {
                        return Err(ParseError::new(
                            line_no,
                            here,
                            ParseErrorKind::DuplicateGenerator(name.to_string()),
                        ));
                    }
                    list.push(g);
                }
                if list.is_empty() {
                    return Err(ParseError::new(line_no, offset + 1, ParseErrorKind::EmptyGeneratorList));
                }
                gens = Some(list);
            }
            "rel" => {
                let Some(g) = gens.as_deref() else {
                    return Err(ParseError::new(line_no, first_col, ParseErrorKind::MissingGenerators));
                };
                let mut cur = Cursor::new(rest, line_no, offset);
                let w = WordParser { gens: g }.relator(&mut cur)?;
                if w.is_identity() {
                    return Err(ParseError::new(line_no, offset + 1, ParseErrorKind::EmptyRelator));
                }
                relators.push(w);
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    first_col,
                    ParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }
    let gens = gens.ok_or_else(|| ParseError::new(1, 1, ParseErrorKind::EmptyGeneratorList))?;
    Ok(Presentation::new(gens, relators).expect("parser only emits known generators"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::make_hm;
    use crate::text::Severity;

    #[test]
    fn h2_first_relator() {
        let p = parse_presentation("gens: x y\nrel: x^2*y*x^2 = y*x^2*y\n").unwrap();
        assert_eq!(p.relators()[0], make_hm(2).unwrap().relators()[0]);
    }

    #[test]
    fn empty_relator_is_a_warning() {
        let err = parse_presentation("gens: x y\nrel: x*x^-1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyRelator);
        assert_eq!(err.severity(), Severity::Warning);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn power_of_parenthesised_word() {
        let p = parse_presentation("gens: x y\nrel: (x^2*y^2)^4").unwrap();
        let r = &p.relators()[0];
        assert_eq!(r.num_syllables(), 8);
        assert_eq!(r.len(), 16);
    }

    #[test]
    fn error_positions() {
        let err = parse_presentation("gens: x y\nrel: x*z").unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
        assert_eq!(err.kind, ParseErrorKind::UnknownGenerator("z".into()));

        let err = parse_presentation("gens: x y\n\nrel: x^a").unwrap_err();
        assert_eq!((err.line, err.column), (3, 8));
        assert!(matches!(err.kind, ParseErrorKind::MalformedExponent(_)));

        let err = parse_presentation("gens:   \nrel: x").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyGeneratorList);
        assert_eq!(err.line, 1);

        let err = parse_presentation("rel: x\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingGenerators);

        let err = parse_presentation("gens: x 2y").unwrap_err();
        assert_eq!((err.column, err.kind.clone()), (9, ParseErrorKind::BadGeneratorName("2y".into())));

        let err = parse_presentation("gens: x\nrel: x^99999999999999999999").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MalformedExponent(_)));
    }

    #[test]
    fn comments_whitespace_and_identity() {
        let text = "# H_1\n  gens:x   y # two\nrel:  x * y*x =y*x * y\n\nrel: x^4 = 1\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[1], Word::power_of(0, 4));
    }

    #[test]
    fn word_lists() {
        let g = make_hm(1).unwrap().generators().to_vec();
        let ws = parse_word_list("x, y^2 ,x*y", &g).unwrap();
        assert_eq!(ws.len(), 3);
        let err = parse_word_list("x, q", &g).unwrap_err();
        assert_eq!(err.column, 4);
        assert!(parse_word_list("", &g).unwrap().is_empty());
    }
}
