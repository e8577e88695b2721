use serde::Serialize;

use crate::fp::{Presentation, Word};

/// Column of generator `g` (`inverse = false`) or of `g⁻¹`.
pub(crate) fn column(g: usize, inverse: bool) -> usize {
    2 * g + usize::from(inverse)
}

pub(crate) fn inverse_column(c: usize) -> usize {
    c ^ 1
}

pub(crate) fn word_columns(w: &Word) -> Vec<u32> {
    w.letters().map(|(g, inv)| column(g, inv) as u32).collect()
}

/// A closed coset table: the action of the generators and their inverses
/// on the cosets of a subgroup. Coset 0 is the subgroup itself (reported
/// as coset 1 in human-readable output).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    num_gens: usize,
    rows: usize,
    data: Vec<u32>,
}

impl CosetTable {
    pub(crate) fn from_raw(num_gens: usize, rows: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * 2 * num_gens);
        CosetTable { num_gens, rows, data }
    }

    pub fn index(&self) -> usize {
        self.rows
    }

    pub fn num_generators(&self) -> usize {
        self.num_gens
    }

    /// Image of `coset` under generator `g` (or `g⁻¹`).
    pub fn act(&self, coset: usize, g: usize, inverse: bool) -> usize {
        self.data[coset * 2 * self.num_gens + column(g, inverse)] as usize
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().fold(coset, |c, (g, inv)| self.act(c, g, inv))
    }

    /// Permutation of the cosets induced by generator `g`.
    pub fn permutation(&self, g: usize) -> Vec<usize> {
        (0..self.rows).map(|c| self.act(c, g, false)).collect()
    }

    /// Full closure check: inverse consistency, every relator fixes every
    /// coset, every subgroup generator fixes coset 0, and the action is
    /// transitive.
    pub fn verify(&self, p: &Presentation, subgroup: &[Word]) -> Result<(), String> {
        if p.num_generators() != self.num_gens {
            return Err("generator count mismatch".into());
        }
        if self.rows == 0 {
            return Err("empty table".into());
        }
        for c in 0..self.rows {
            for g in 0..self.num_gens {
                let d = self.act(c, g, false);
                if d >= self.rows {
                    return Err(format!("entry ({c}, {g}) out of range"));
                }
                if self.act(d, g, true) != c {
                    return Err(format!("inverse inconsistency at coset {c}, generator {g}"));
                }
            }
        }
        for (i, r) in p.relators().iter().enumerate() {
            for c in 0..self.rows {
                if self.trace(c, r) != c {
                    return Err(format!("relator {i} does not fix coset {c}"));
                }
            }
        }
        for (i, w) in subgroup.iter().enumerate() {
            if self.trace(0, w) != 0 {
                return Err(format!("subgroup generator {i} moves coset 0"));
            }
        }
        let mut seen = vec![false; self.rows];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for col in 0..2 * self.num_gens {
                let d = self.data[c * 2 * self.num_gens + col] as usize;
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err("action is not transitive".into());
        }
        Ok(())
    }
}
