//! Permutations, inversion counts and Heap's enumeration.

use crate::error::{Error, Result};

/// A bijection on `{0, …, n−1}`, stored as its one-line form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    /// Number of pairs `i < j` with `p[i] > p[j]`, which is also the
    /// minimum number of adjacent transpositions taking `p` to the identity.
    pub fn inversion_count(&self) -> usize {
        inversions(&self.0)
    }
}

/// Inversion count of a sequence of distinct values: number of pairs
/// `i < j` with `p[i] > p[j]`.
pub fn inversions(p: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                count += 1;
            }
        }
    }
    count
}

/// Validates and counts inversions in one step.
pub fn inversion_count(mapping: &[usize]) -> Result<usize> {
    Ok(Permutation::new(mapping.to_vec())?.inversion_count())
}

/// Change in inversion count caused by swapping positions `a < b` of `p`
/// (computed before the swap).
fn swap_delta(p: &[usize], a: usize, b: usize) -> isize {
    let (lo, hi) = if p[a] < p[b] { (p[a], p[b]) } else { (p[b], p[a]) };
    let between = p[a + 1..b]
        .iter()
        .filter(|&&v| v > lo && v < hi)
        .count() as isize;
    let d = 2 * between + 1;
    if p[a] < p[b] {
        d
    } else {
        -d
    }
}

/// Heap's algorithm over `{0, …, n−1}` that also tracks the inversion count
/// of the current arrangement.
///
/// Heap's swaps are generally not adjacent, so each step changes the
/// inversion count by an odd amount computed from the values lying between
/// the swapped positions.
pub struct HeapPermutations {
    perm: Vec<usize>,
    counters: Vec<usize>,
    i: usize,
    inversions: usize,
    started: bool,
}

impl HeapPermutations {
    pub fn new(n: usize) -> Self {
        HeapPermutations {
            perm: (0..n).collect(),
            counters: vec![0; n],
            i: 1,
            inversions: 0,
            started: false,
        }
    }

    /// Advances to the next arrangement, returning it together with its
    /// inversion count. The first call yields the identity.
    pub fn next_perm(&mut self) -> Option<(&[usize], usize)> {
        if !self.started {
            self.started = true;
            return Some((&self.perm, 0));
        }
        let n = self.perm.len();
        while self.i < n {
            if self.counters[self.i] < self.i {
                let j = if self.i % 2 == 0 { 0 } else { self.counters[self.i] };
                let d = swap_delta(&self.perm, j, self.i);
                self.inversions = (self.inversions as isize + d) as usize;
                self.perm.swap(j, self.i);
                self.counters[self.i] += 1;
                self.i = 1;
                return Some((&self.perm, self.inversions));
            }
            self.counters[self.i] = 0;
            self.i += 1;
        }
        None
    }

    /// Calls `f(perm, inversion_count)` for every arrangement.
    pub fn for_each(n: usize, mut f: impl FnMut(&[usize], usize)) {
        let mut it = HeapPermutations::new(n);
        while let Some((p, inv)) = it.next_perm() {
            f(p, inv);
        }
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
