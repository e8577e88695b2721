use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::intmat::IntMat;
use crate::error::{Error, Result};

/// Smith normal form `L·M·R = D` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    /// `d₁ | d₂ | … `, length `min(rows, cols)`, all non-negative.
    #[serde(serialize_with = "ser_bigints")]
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    /// Unimodular, `rows × rows`.
    pub left: IntMat,
    /// Unimodular, `cols × cols`.
    pub right: IntMat,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl SnfResult {
    /// Invariant factors other than 1 among the nonzero diagonal entries.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.diagonal[..self.rank]
            .iter()
            .filter(|d| !num_traits::One::is_one(*d))
            .cloned()
            .collect()
    }

    /// The diagonal as a `rows × cols` matrix.
    pub fn diagonal_matrix(&self) -> IntMat {
        let mut d = IntMat::zeros(self.left.rows(), self.right.rows());
        for (k, v) in self.diagonal.iter().enumerate() {
            d[(k, k)] = v.clone();
        }
        d
    }

    /// Checks `L·M·R = D`, unit determinants and the divisibility chain.
    pub fn verify(&self, m: &IntMat) -> bool {
        let unit = |x: &BigInt| x.abs() == BigInt::from(1);
        let chain = self.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        chain
            && self.diagonal.iter().all(|d| !d.is_negative())
            && unit(&self.left.det())
            && unit(&self.right.det())
            && self.left.mul(m).mul(&self.right) == self.diagonal_matrix()
    }
}

fn min_nonzero(a: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((i, j), v));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form with transforms.
///
/// Pivot: smallest nonzero absolute value in the active block. Row then
/// column elimination by truncated division; nonzero remainders force a
/// new pivot. Once row and column are clear, an entry not divisible by the
/// pivot is folded into the pivot row, which shrinks the pivot next round.
pub fn smith_normal_form(m: &IntMat) -> SnfResult {
    let (nr, nc) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMat::identity(nr);
    let mut right = IntMat::identity(nc);
    let mut rank = 0;

    'outer: for k in 0..nr.min(nc) {
        loop {
            let Some((pi, pj)) = min_nonzero(&a, k) else {
                break 'outer;
            };
            a.swap_rows(k, pi);
            left.swap_rows(k, pi);
            a.swap_cols(k, pj);
            right.swap_cols(k, pj);

            let pivot = a[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..nr {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, k)] / &pivot);
                a.add_row_multiple(i, k, &q);
                left.add_row_multiple(i, k, &q);
                dirty |= !a[(i, k)].is_zero();
            }
            for j in k + 1..nc {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(k, j)] / &pivot);
                a.add_col_multiple(j, k, &q);
                right.add_col_multiple(j, k, &q);
                dirty |= !a[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (k + 1..nr).find(|&i| (k + 1..nc).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let one = BigInt::from(1);
                a.add_row_multiple(k, i, &one);
                left.add_row_multiple(k, i, &one);
                continue;
            }
            break;
        }
        if a[(k, k)].is_negative() {
            a.negate_row(k);
            left.negate_row(k);
        }
        rank += 1;
    }

    let diagonal = (0..nr.min(nc)).map(|k| a[(k, k)].clone()).collect();
    SnfResult {
        diagonal,
        rank,
        left,
        right,
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    // Heap's algorithm, tracking parity.
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut odd = false;
    out.push((p.clone(), odd));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            odd = !odd;
            out.push((p.clone(), odd));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Leibniz expansion; exponential, meant for tiny minors only.
fn leibniz_det(m: &IntMat, rows: &[usize], cols: &[usize]) -> BigInt {
    let k = rows.len();
    let mut total = BigInt::zero();
    for (perm, odd) in permutations(k) {
        let mut term = BigInt::from(1);
        for (r, &c) in rows.iter().zip(&perm) {
            term *= &m[(*r, cols[c])];
            if term.is_zero() {
                break;
            }
        }
        if odd {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// gcd of all `i × i` minors (0 when all vanish).
///
/// Kept independent of the elimination code above: subsets are enumerated
/// and each minor is expanded by permutations.
pub fn gcd_of_minors(m: &IntMat, i: usize) -> Result<BigInt> {
    if i == 0 || i > m.rows().min(m.cols()) {
        return Err(Error::InvalidParameter(format!(
            "minor size {i} outside 1..={}",
            m.rows().min(m.cols())
        )));
    }
    let mut g = BigInt::zero();
    let row_sets = combinations(m.rows(), i);
    let col_sets = combinations(m.cols(), i);
    for rs in &row_sets {
        for cs in &col_sets {
            g = g.gcd(&leibniz_det(m, rs, cs));
        }
    }
    Ok(g)
}

/// `Δᵢ / Δᵢ₋₁` for `i = 1..=min(rows, cols)`, with `Δ₀ = 1`; entries after
/// the first vanishing `Δᵢ` are 0.
pub fn invariant_factors_from_minors(m: &IntMat) -> Vec<BigInt> {
    let n = m.rows().min(m.cols());
    let mut out = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for i in 1..=n {
        let d = gcd_of_minors(m, i).expect("size in range");
        if d.is_zero() || prev.is_zero() {
            out.push(BigInt::zero());
            prev = BigInt::zero();
        } else {
            out.push(&d / &prev);
            prev = d;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn h1_and_h2_matrices() {
        let h1 = IntMat::from_rows(&[vec![1, -1, 8], vec![-1, 1, 4]]);
        let snf = smith_normal_form(&h1);
        assert_eq!(snf.diagonal, ints(&[1, 12]));
        assert!(snf.verify(&h1));
        let h2 = IntMat::from_rows(&[vec![2, -1, 8], vec![-1, 2, 8]]);
        let snf = smith_normal_form(&h2);
        assert_eq!(snf.diagonal, ints(&[1, 3]));
        assert!(snf.verify(&h2));
    }

    #[test]
    fn zero_and_empty() {
        let z = IntMat::zeros(2, 3);
        let snf = smith_normal_form(&z);
        assert_eq!(snf.diagonal, ints(&[0, 0]));
        assert_eq!(snf.rank, 0);
        let empty = IntMat::zeros(2, 0);
        let snf = smith_normal_form(&empty);
        assert!(snf.diagonal.is_empty());
        assert!(snf.verify(&empty));
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is not in Smith form; the answer is (1, 6).
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, ints(&[1, 6]));
        assert!(snf.verify(&m));
    }

    #[test]
    fn minors_examples() {
        let h1 = IntMat::from_rows(&[vec![1, -1, 8], vec![-1, 1, 4]]);
        assert_eq!(gcd_of_minors(&h1, 1).unwrap(), BigInt::from(1));
        assert_eq!(gcd_of_minors(&h1, 2).unwrap(), BigInt::from(12));
        assert_eq!(gcd_of_minors(&IntMat::identity(2), 2).unwrap(), BigInt::from(1));
        assert!(gcd_of_minors(&h1, 3).is_err());
        assert!(gcd_of_minors(&h1, 0).is_err());
        assert_eq!(invariant_factors_from_minors(&h1), ints(&[1, 12]));
    }

    #[test]
    fn permutation_parity() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().filter(|(_, odd)| *odd).count(), 12);
    }
}
