use serde::Serialize;

use super::enumerate::{todd_coxeter, EnumOptions, EnumOutcome};
use crate::error::Result;
use crate::matgroups::{bfs_group_order, check_relations, det_one_count, Assignment, DEFAULT_ELEMENT_CAP};
use crate::fp::make_corollary;

/// Three independent counts of `|SL₂(ℤ/rℤ)|` for the presentation
/// `H₂ ∪ {xʳ}`.
#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub r: u64,
    /// Index of the trivial subgroup.
    pub enumeration: EnumOutcome,
    /// `x ↦ A`, `y ↦ Q₂` reduced mod `r` kills every relator.
    pub relators_hold: bool,
    /// Order of `⟨A, Q₂⟩ mod r`.
    pub bfs_order: usize,
    pub det_one_count: u64,
    pub passed: bool,
}

impl CorollaryReport {
    pub fn limit_exceeded(&self) -> bool {
        !self.enumeration.is_complete()
    }
}

/// Runs coset enumeration, the relator check and the BFS for odd `r ≥ 3`.
pub fn verify_corollary(r: u64, opts: &EnumOptions) -> Result<CorollaryReport> {
    let p = make_corollary(r)?;
    let enumeration = todd_coxeter(&p, &[], opts);
    let reduced = Assignment::phi(2)?.reduce_mod(r)?;
    let relators_hold = check_relations(&p, &reduced)?.passed;
    let group = bfs_group_order(reduced.images(), r, DEFAULT_ELEMENT_CAP)?;
    let det_one_count = det_one_count(r)?;
    let bfs_order = group.order();
    let passed = relators_hold
        && bfs_order as u64 == det_one_count
        && enumeration.index == Some(bfs_order);
    Ok(CorollaryReport {
        r,
        enumeration,
        relators_hold,
        bfs_order,
        det_one_count,
        passed,
    })
}
