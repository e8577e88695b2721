//! Matrix images of presentations: relator checks over ℤ[1/m] and ℤ/rℤ,
//! finite group orders by breadth-first search, and the identity suite.

mod assignment;
mod file;
mod finite;
mod identities;

pub use assignment::{check_relations, Assignment, GroupElem, RelationReport, RelatorCheck};
pub use finite::{
    abelianization_order, bfs_group_order, derived_subgroup, det_one_count, det_one_count_brute,
    det_one_count_prime_power, GroupEnumeration, DEFAULT_ELEMENT_CAP,
};
pub use file::{parse_assignment_file, ParsedAssignment, Ring};
pub use identities::{residue_campaign, verify_lemma_identities, verify_rewrite, ModulusCheck, REWRITE_MODULI};
