//! Assignment files: one `gen = [[p, q], [r, s]]` line per generator, with
//! the ring fixed by an `m: M` or `mod: R` line (or by the caller).
//!
//! ```text
//! # phi_2 reduced mod 5
//! mod: 5
//! x = [[1, 0], [1, 1]]
//! y = [[1, 2], [0, 1]]
//! ```

use crate::exact::{reduce_mod_r, Mat2M, ResidueMat2};
use crate::fp::Generator;
use crate::text::{Cursor, ParseError, ParseErrorKind};

/// The ring the matrices live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    /// ℤ[1/m].
    Exact(u64),
    /// ℤ/rℤ.
    Residue(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedAssignment {
    Exact { m: u64, images: Vec<(String, Mat2M)> },
    Residue { r: u64, images: Vec<(String, ResidueMat2)> },
}

impl ParsedAssignment {
    pub fn ring(&self) -> Ring {
        match self {
            ParsedAssignment::Exact { m, .. } => Ring::Exact(*m),
            ParsedAssignment::Residue { r, .. } => Ring::Residue(*r),
        }
    }
}

fn ring_directive(key: &str, value: &str, line: usize, col: usize) -> Result<Ring, ParseError> {
    let n: u64 = value
        .trim()
        .parse()
        .map_err(|_| ParseError::new(line, col, ParseErrorKind::MalformedInteger(value.trim().to_string())))?;
    match key {
        "m" if n >= 1 => Ok(Ring::Exact(n)),
        "mod" if n >= 2 => Ok(Ring::Residue(n)),
        _ => Err(ParseError::new(
            line,
            col,
            ParseErrorKind::Invalid(format!("`{key}: {n}` is not a usable ring")),
        )),
    }
}

/// Parses an assignment file. `ring` overrides any directive in the text.
pub fn parse_assignment_file(text: &str, ring: Option<Ring>) -> Result<ParsedAssignment, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let mut declared = None;
    for &(no, line) in &lines {
        if let Some((key, value)) = line.split_once(':') {
            let key = key.trim();
            let col = line[..line.find(':').expect("split at colon") + 1].chars().count() + 1;
            if key != "m" && key != "mod" {
                return Err(ParseError::new(no, 1, ParseErrorKind::UnknownDirective(key.to_string())));
            }
            if declared.is_some() {
                return Err(ParseError::new(no, 1, ParseErrorKind::Invalid("ring declared twice".into())));
            }
            declared = Some(ring_directive(key, value, no, col)?);
        }
    }
    let ring = ring.or(declared).ok_or_else(|| {
        ParseError::new(
            1,
            1,
            ParseErrorKind::Invalid("no ring given; add an `m: M` or `mod: R` line".into()),
        )
    })?;
    let parse_m = match ring {
        Ring::Exact(m) => m,
        Ring::Residue(_) => 1,
    };

    let mut exact: Vec<(String, Mat2M)> = Vec::new();
    for &(no, line) in &lines {
        if line.contains(':') {
            continue;
        }
        let Some(eq) = line.find('=') else {
            let col = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
            return Err(ParseError::new(
                no,
                col,
                ParseErrorKind::Unexpected {
                    found: line.trim().to_string(),
                    expected: "`name = [[..], [..]]`".into(),
                },
            ));
        };
        let name = line[..eq].trim();
        let name_col = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
        Generator::new(name)
            .map_err(|_| ParseError::new(no, name_col, ParseErrorKind::BadGeneratorName(name.to_string())))?;
        if exact.iter().any(|(n, _)| n == name) {
            return Err(ParseError::new(no, name_col, ParseErrorKind::DuplicateGenerator(name.to_string())));
        }
        let offset = line[..eq + 1].chars().count();
        let mut cur = Cursor::new(&line[eq + 1..], no, offset);
        let mat = Mat2M::parse_cursor(&mut cur, parse_m)?;
        cur.expect_end()?;
        exact.push((name.to_string(), mat));
    }

    Ok(match ring {
        Ring::Exact(m) => ParsedAssignment::Exact { m, images: exact },
        Ring::Residue(r) => ParsedAssignment::Residue {
            r,
            images: exact
                .into_iter()
                .map(|(n, x)| (n, reduce_mod_r(&x, r).expect("integer matrices reduce modulo any r")))
                .collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{mat_a, mat_q};

    #[test]
    fn exact_file() {
        let text = "m: 2\nx = [[1, 0], [1, 1]]\ny = [[1, -1/2], [0, 1]]  # Q_2\n";
        let parsed = parse_assignment_file(text, None).unwrap();
        assert_eq!(
            parsed,
            ParsedAssignment::Exact {
                m: 2,
                images: vec![("x".into(), mat_a(2)), ("y".into(), mat_q(2))]
            }
        );
    }

    #[test]
    fn residue_file_and_override() {
        let text = "x = [[1, 0], [1, 1]]\ny = [[1, 2], [0, 1]]\n";
        let parsed = parse_assignment_file(text, Some(Ring::Residue(5))).unwrap();
        let ParsedAssignment::Residue { r, images } = parsed else {
            panic!("expected residue ring");
        };
        assert_eq!(r, 5);
        assert_eq!(images[1].1, ResidueMat2::new([[1, 2], [0, 1]], 5).unwrap());
        let text = "mod: 7\nx = [[1, -1], [0, 1]]\n";
        let parsed = parse_assignment_file(text, None).unwrap();
        assert_eq!(parsed.ring(), Ring::Residue(7));
        assert_eq!(parse_assignment_file(text, Some(Ring::Exact(3))).unwrap().ring(), Ring::Exact(3));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_assignment_file("m: 2\nx = [[1, 0], [1 1]]\n", None).unwrap_err();
        assert_eq!((err.line, err.column), (2, 17));
        let err = parse_assignment_file("x = [[1, 0], [0, 1]]\n", None).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Invalid(_)));
        let err = parse_assignment_file("m: 2\nx = [[1, 0], [0, 1]]\nx = [[1, 0], [0, 1]]\n", None).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(matches!(err.kind, ParseErrorKind::DuplicateGenerator(_)));
        let err = parse_assignment_file("mod: 1\n", None).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Invalid(_)));
        let err = parse_assignment_file("m: 3\nx = [[1, 1/2], [0, 1]]\n", None).unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_assignment_file("ring: 3\n", None).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownDirective(_)));
    }
}
