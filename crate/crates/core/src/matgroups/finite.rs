use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ResidueMat2;

/// Default ceiling on the number of elements a BFS may visit.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// Largest modulus whose `r⁴` codes fit a bitmap comfortably.
const BITMAP_LIMIT: u64 = 90;

enum Seen {
    Bits(Vec<u64>),
    Set(HashSet<u64>),
}

impl Seen {
    fn new(r: u64) -> Self {
        if r <= BITMAP_LIMIT {
            let n = r.pow(4) as usize;
            Seen::Bits(vec![0; n.div_ceil(64)])
        } else {
            Seen::Set(HashSet::new())
        }
    }

    /// True if `code` was absent.
    fn insert(&mut self, code: u64) -> bool {
        match self {
            Seen::Bits(bits) => {
                let (w, b) = ((code / 64) as usize, code % 64);
                let fresh = bits[w] >> b & 1 == 0;
                bits[w] |= 1 << b;
                fresh
            }
            Seen::Set(s) => s.insert(code),
        }
    }
}

/// A finite matrix group listed element by element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupEnumeration {
    pub modulus: u64,
    pub generators: Vec<ResidueMat2>,
    /// In breadth-first order from the identity.
    #[serde(skip)]
    pub elements: Vec<ResidueMat2>,
    #[serde(skip)]
    sorted_codes: Vec<u64>,
}

impl GroupEnumeration {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &ResidueMat2) -> bool {
        g.modulus() == self.modulus && self.sorted_codes.binary_search(&g.code()).is_ok()
    }
}

/// Subgroup of `SL₂(ℤ/rℤ)` generated by `gens`, by breadth-first search
/// over left multiplication by the generators and their inverses.
pub fn bfs_group_order(gens: &[ResidueMat2], r: u64, cap: usize) -> Result<GroupEnumeration> {
    if r < 2 || r > u16::MAX as u64 {
        return Err(Error::BadModulus(r));
    }
    let mut steps = Vec::with_capacity(2 * gens.len());
    for g in gens {
        if g.modulus() != r {
            return Err(Error::RingMismatch(g.modulus(), r));
        }
        steps.push(*g);
        steps.push(g.inverse()?);
    }
    let id = ResidueMat2::identity(r)?;
    let mut seen = Seen::new(r);
    seen.insert(id.code());
    let mut elements = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for s in &steps {
            let n = *s * e;
            if seen.insert(n.code()) {
                if elements.len() >= cap {
                    return Err(Error::ElementCapExceeded(cap));
                }
                elements.push(n);
                queue.push_back(n);
            }
        }
    }
    let mut sorted_codes: Vec<u64> = elements.iter().map(ResidueMat2::code).collect();
    sorted_codes.sort_unstable();
    Ok(GroupEnumeration {
        modulus: r,
        generators: gens.to_vec(),
        elements,
        sorted_codes,
    })
}

/// `|SL₂(ℤ/rℤ)|` by counting solutions of `ad − bc ≡ 1`.
pub fn det_one_count_brute(r: u64) -> Result<u64> {
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    // For each (a, d) count pairs (b, c) with bc ≡ ad − 1.
    let mut products = vec![0u64; r as usize];
    for b in 0..r {
        for c in 0..r {
            products[((b * c) % r) as usize] += 1;
        }
    }
    let mut total = 0;
    for a in 0..r {
        for d in 0..r {
            total += products[((a * d + r - 1) % r) as usize];
        }
    }
    Ok(total)
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `|SL₂(ℤ/p^kℤ)| = p^{3k−2}(p² − 1)`.
pub fn det_one_count_prime_power(p: u64, k: u32) -> u64 {
    p.pow(3 * k - 2) * (p * p - 1)
}

/// `|SL₂(ℤ/rℤ)|`: direct count for small `r`, otherwise multiplicative over
/// prime powers.
pub fn det_one_count(r: u64) -> Result<u64> {
    if r < 2 {
        return Err(Error::BadModulus(r));
    }
    if r <= 7 {
        return det_one_count_brute(r);
    }
    let mut total: u64 = 1;
    for (p, k) in factor(r) {
        total = total
            .checked_mul(det_one_count_prime_power(p, k))
            .ok_or_else(|| Error::InvalidParameter(format!("|SL2(Z/{r})| overflows u64")))?;
    }
    Ok(total)
}

/// Commutator subgroup, as the normal closure of the commutators of the
/// generators.
pub fn derived_subgroup(g: &GroupEnumeration) -> Result<GroupEnumeration> {
    let r = g.modulus;
    let gens = &g.generators;
    let mut dgens = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let c = *x * *y * x.inverse()? * y.inverse()?;
            if !c.is_identity() {
                dgens.push(c);
            }
        }
    }
    let mut d = bfs_group_order(&dgens, r, g.order())?;
    loop {
        let mut grew = false;
        for s in dgens.clone() {
            for x in gens {
                let conj = *x * s * x.inverse()?;
                if !d.contains(&conj) {
                    dgens.push(conj);
                    d = bfs_group_order(&dgens, r, g.order())?;
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(d);
        }
    }
}

/// `|G / [G, G]|`.
pub fn abelianization_order(g: &GroupEnumeration) -> Result<usize> {
    let d = derived_subgroup(g)?;
    debug_assert!(g.order().is_multiple_of(d.order()));
    Ok(g.order() / d.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(rows: [[i64; 2]; 2], r: u64) -> ResidueMat2 {
        ResidueMat2::new(rows, r).unwrap()
    }

    #[test]
    fn counts_agree() {
        for r in 2..=30 {
            assert_eq!(det_one_count(r).unwrap(), det_one_count_brute(r).unwrap(), "r = {r}");
        }
        for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let r = p.pow(k);
            assert_eq!(det_one_count_prime_power(p, k), det_one_count_brute(r).unwrap());
        }
        assert_eq!(det_one_count(2).unwrap(), 6);
        assert_eq!(det_one_count(15).unwrap(), 2880);
        assert!(det_one_count(1).is_err());
    }

    #[test]
    fn bfs_full_group() {
        for r in [2, 3, 4, 5, 6, 9, 12] {
            let a = res([[1, 0], [1, 1]], r);
            let b = res([[1, 1], [0, 1]], r);
            let g = bfs_group_order(&[a, b], r, DEFAULT_ELEMENT_CAP).unwrap();
            assert_eq!(g.order() as u64, det_one_count(r).unwrap(), "r = {r}");
            assert!(g.contains(&res([[0, -1], [1, 0]], r)));
        }
    }

    #[test]
    fn bfs_cyclic_and_cap() {
        let t = res([[1, 1], [0, 1]], 7);
        let g = bfs_group_order(&[t], 7, 100).unwrap();
        assert_eq!(g.order(), 7);
        assert!(!g.contains(&res([[1, 0], [1, 1]], 7)));
        assert!(bfs_group_order(&[], 5, 10).unwrap().order() == 1);
        let a = res([[1, 0], [1, 1]], 7);
        assert_eq!(bfs_group_order(&[a, t], 7, 100), Err(Error::ElementCapExceeded(100)));
        assert_eq!(bfs_group_order(&[t], 5, 100), Err(Error::RingMismatch(7, 5)));
    }

    #[test]
    fn abelianizations() {
        let gen = |r| {
            let a = res([[1, 0], [1, 1]], r);
            let b = res([[1, 1], [0, 1]], r);
            bfs_group_order(&[a, b], r, DEFAULT_ELEMENT_CAP).unwrap()
        };
        // SL₂(ℤ/2) ≅ S₃, SL₂(ℤ/3), SL₂(ℤ/4), SL₂(ℤ/5) perfect.
        assert_eq!(abelianization_order(&gen(2)).unwrap(), 2);
        assert_eq!(abelianization_order(&gen(3)).unwrap(), 3);
        assert_eq!(abelianization_order(&gen(4)).unwrap(), 4);
        assert_eq!(abelianization_order(&gen(5)).unwrap(), 1);
        assert_eq!(abelianization_order(&gen(12)).unwrap(), 12);
    }
}
