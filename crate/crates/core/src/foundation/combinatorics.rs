//! Ordered multi-indices, unshuffles and Koszul signs.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A strictly increasing set of basis indices, stored as a bitmask.
///
/// Indices are zero-based internally; [`fmt::Display`] and the file formats
/// use one-based labels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u64);

pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("index {index} outside 1..={dim}")]
    OutOfRange { index: usize, dim: usize },
    #[error("indices not strictly increasing: {0:?}")]
    NotIncreasing(Vec<usize>),
}

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_DIM);
        IndexSet(1 << i)
    }

    /// From zero-based indices in any order; duplicates collapse.
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        IndexSet(it.into_iter().fold(0u64, |m, i| m | (1 << i)))
    }

    /// From one-based, strictly increasing labels drawn from `1..=dim`.
    pub fn from_labels(labels: &[usize], dim: usize) -> Result<Self, IndexError> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(IndexError::NotIncreasing(labels.to_vec()));
        }
        for &l in labels {
            if l == 0 || l > dim {
                return Err(IndexError::OutOfRange { index: l, dim });
            }
        }
        Ok(Self::from_indices(labels.iter().map(|l| l - 1)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_DIM && self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        IndexSet(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest element plus one (0 for the empty set).
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Zero-based indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// One-based labels.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Number of elements strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }

    /// Position (zero-based) of `i` in the increasing enumeration.
    pub fn position(self, i: usize) -> Option<usize> {
        self.contains(i).then(|| self.count_below(i))
    }

    /// Sign of `e_self ∧ e_other` relative to `e_{self ∪ other}`; zero when
    /// the sets intersect.
    pub fn wedge_sign(self, other: Self) -> i8 {
        if !self.is_disjoint(other) {
            return 0;
        }
        let mut inversions = 0usize;
        for j in other.iter() {
            inversions += (self.0 >> (j + 1)).count_ones() as usize;
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sign of `e_i ∧ e_self` relative to `e_{self ∪ {i}}`; zero if `i ∈ self`.
    pub fn insert_sign(self, i: usize) -> i8 {
        if self.contains(i) {
            0
        } else if self.count_below(i).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{}", labels.join(","))
    }
}

/// All `k`-subsets of `0..dim` in lexicographic order of their increasing
/// enumerations.
pub fn subsets(dim: usize, k: usize) -> Vec<IndexSet> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if cur.len() == k {
            out.push(IndexSet::from_indices(cur.iter().copied()));
            return;
        }
        let need = k - cur.len();
        for i in start..=dim.saturating_sub(need) {
            if i >= dim {
                break;
            }
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= dim {
        rec(0, dim, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Canonical ordered basis of `Λ^k` of a `dim`-dimensional space.
#[derive(Debug, Clone)]
pub struct SubsetBasis {
    dim: usize,
    degree: usize,
    sets: Vec<IndexSet>,
    lookup: HashMap<IndexSet, usize>,
}

impl SubsetBasis {
    pub fn new(dim: usize, degree: usize) -> Self {
        let sets = subsets(dim, degree);
        let lookup = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Self {
            dim,
            degree,
            sets,
            lookup,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.sets
    }

    pub fn get(&self, i: usize) -> IndexSet {
        self.sets[i]
    }

    pub fn index_of(&self, s: IndexSet) -> Option<usize> {
        self.lookup.get(&s).copied()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The `(i, j)`-unshuffles of `{0, …, i+j-1}` as image sequences
/// `[σ(0), …, σ(i+j-1)]`: increasing on the first `i` and on the last `j`
/// slots. Ordered lexicographically by the first block.
pub fn unshuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    let n = i + j;
    subsets(n, i)
        .into_iter()
        .map(|first| {
            let mut images: Vec<usize> = first.iter().collect();
            images.extend((0..n).filter(|x| !first.contains(*x)));
            images
        })
        .collect()
}

/// Parity of a permutation given by its images.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inv = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Koszul sign of moving the element in slot `a` to slot `perm[a]`, where the
/// element originally in slot `a` has degree `degrees[a]`: the product over
/// inversions `a < b`, `perm[a] > perm[b]` of `(-1)^(deg_a · deg_b)`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> i8 {
    assert_eq!(perm.len(), degrees.len(), "permutation/degree length mismatch");
    let mut odd = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && (degrees[a] * degrees[b]).rem_euclid(2) == 1 {
                odd += 1;
            }
        }
    }
    if odd.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (a, &p) in perm.iter().enumerate() {
        inv[p] = a;
    }
    inv
}

/// `ε(σ; x_1, …, x_n)` for the rearranged sequence `x_{σ(1)}, …, x_{σ(n)}`
/// (the convention of unshuffle sums), where `images[a] = σ(a)`.
pub fn rearrangement_sign(images: &[usize], degrees: &[i64]) -> i8 {
    koszul_sign(&inverse_permutation(images), degrees)
}

/// Sorting sign of a sequence of distinct indices (0 if any repeat).
pub fn sort_sign(seq: &[usize]) -> i8 {
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] == seq[b] {
                return 0;
            }
        }
    }
    permutation_sign(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    #[test]
    fn unshuffles_small_cases() {
        assert_eq!(unshuffles(1, 1), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(unshuffles(0, 3), vec![vec![0, 1, 2]]);
        // brute force: filter all of S_3 by monotonicity on the blocks
        let brute: Vec<Vec<usize>> = all_perms(3).into_iter().filter(|p| p[0] < p[1]).collect();
        let mut got = unshuffles(2, 1);
        got.sort();
        let mut want = brute;
        want.sort();
        assert_eq!(got, want);
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn unshuffle_counts_are_binomial() {
        for i in 0..=6 {
            for j in 0..=6 {
                assert_eq!(unshuffles(i, j).len(), binomial(i + j, i), "({i},{j})");
            }
        }
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[1, 0], &[0, 0]), 1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), -1);
        // the element in slot 1 moves to slot 3: (1 2 3) -> (3 1 2), degrees (1,1,0)
        assert_eq!(koszul_sign(&[2, 0, 1], &[1, 1, 0]), -1);
        assert_eq!(koszul_sign(&[2, 0, 1], &[2, 4, 6]), 1);
    }

    #[test]
    fn koszul_composition_rule() {
        let degrees = [1i64, 0, 3, 2];
        for s in all_perms(4) {
            for t in all_perms(4) {
                let composite: Vec<usize> = (0..4).map(|a| s[t[a]]).collect();
                let mut moved = [0i64; 4];
                for a in 0..4 {
                    moved[t[a]] = degrees[a];
                }
                assert_eq!(
                    koszul_sign(&composite, &degrees),
                    koszul_sign(&s, &moved) * koszul_sign(&t, &degrees)
                );
            }
        }
    }

    #[test]
    fn subsets_lexicographic() {
        let s: Vec<Vec<usize>> = subsets(4, 2).iter().map(|s| s.labels()).collect();
        assert_eq!(
            s,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        assert_eq!(subsets(3, 0), vec![IndexSet::EMPTY]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn wedge_signs() {
        let a = IndexSet::from_indices([1]);
        let b = IndexSet::from_indices([0]);
        assert_eq!(a.wedge_sign(b), -1);
        assert_eq!(b.wedge_sign(a), 1);
        assert_eq!(a.wedge_sign(a), 0);
        let ab = IndexSet::from_indices([0, 2]);
        assert_eq!(ab.insert_sign(1), -1);
        assert_eq!(IndexSet::from_labels(&[1, 3], 3).unwrap().labels(), vec![1, 3]);
        assert!(IndexSet::from_labels(&[3, 1], 3).is_err());
        assert!(IndexSet::from_labels(&[4], 3).is_err());
    }

    #[test]
    fn sort_sign_matches_permutation_sign() {
        assert_eq!(sort_sign(&[2, 0, 1]), 1);
        assert_eq!(sort_sign(&[1, 0]), -1);
        assert_eq!(sort_sign(&[1, 1]), 0);
    }
}
