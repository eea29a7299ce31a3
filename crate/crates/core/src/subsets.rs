//! Sorted k-subsets of `[0, n)`: lexicographic enumeration and ranking.

use itertools::Itertools;

/// Pascal table of `C(a, b)` for `a, b ≤ n`.
#[derive(Clone, Debug)]
pub struct Binomials {
    n: usize,
    table: Vec<usize>,
}

impl Binomials {
    pub fn new(n: usize) -> Self {
        let w = n + 1;
        let mut table = vec![0usize; w * w];
        for a in 0..=n {
            table[a * w] = 1;
            for b in 1..=a {
                table[a * w + b] = table[(a - 1) * w + b - 1].saturating_add(table[(a - 1) * w + b]);
            }
        }
        Binomials { n, table }
    }

    pub fn get(&self, a: usize, b: usize) -> usize {
        if b > a || a > self.n {
            0
        } else {
            self.table[a * (self.n + 1) + b]
        }
    }

    /// Position of the sorted subset `s ⊆ [0, n)` in lexicographic order
    /// among all `|s|`-subsets.
    pub fn rank(&self, s: &[usize]) -> usize {
        let k = s.len();
        let total = self.get(self.n, k);
        let tail: usize = s
            .iter()
            .enumerate()
            .map(|(i, &c)| self.get(self.n - 1 - c, k - i))
            .sum();
        total - 1 - tail
    }
}

/// All sorted `k`-subsets of `[0, n)` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(k)
}

/// Sorts `tuple` by insertion, returning the sorted copy and whether the
/// sorting permutation is odd; `None` if an index repeats.
pub fn sort_with_parity(tuple: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = tuple.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_enumeration() {
        for n in 1..9 {
            let b = Binomials::new(n);
            for k in 0..=n {
                for (pos, s) in combinations(n, k).enumerate() {
                    assert_eq!(b.rank(&s), pos, "n={n} s={s:?}");
                }
                assert_eq!(combinations(n, k).count(), b.get(n, k));
            }
        }
    }

    #[test]
    fn parity() {
        assert_eq!(sort_with_parity(&[1, 0, 2]), Some((vec![0, 1, 2], true)));
        assert_eq!(sort_with_parity(&[2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_with_parity(&[0, 0, 2]), None);
        assert_eq!(sort_with_parity(&[2, 1, 2]), None);
        assert_eq!(sort_with_parity(&[]), Some((vec![], false)));
    }
}
