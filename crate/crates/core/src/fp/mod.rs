//! Free-group words, finite presentations and the presentation families
//! `H_m`, Serre–Behr–Mennicke and the `SL₂(ℤ/rℤ)` family.

mod parse;
mod presentation;
mod word;

pub use parse::{parse_presentation, parse_word, parse_word_list};
pub use presentation::{
    equation, format_word, make_corollary, make_hm, make_serre_behr_mennicke, serre_to_h2_rewrite,
    Generator, Presentation, PresentationRewrite, Substitution,
};
pub use word::Word;

pub(crate) use presentation::generators;
