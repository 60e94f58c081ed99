use std::collections::HashMap;

/// `n choose k`, exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Multi-indices `i ∈ N^d` with `|i| ≤ p`, in graded order: by total degree,
/// then by decreasing first component, then recursively on the rest.
///
/// Because the order is graded, the indices with `|i| ≤ p0` are exactly the
/// first [`MultiIndexSet::truncated_len`]`(p0)` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexSet {
    dim: usize,
    degree: usize,
    indices: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

fn compositions(n: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(n);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=n).rev() {
        prefix.push(first);
        compositions(n - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl MultiIndexSet {
    /// All multi-indices of total degree at most `p` in `d` variables.
    ///
    /// # Panics
    ///
    /// Panics if `d == 0`.
    pub fn total_degree(d: usize, p: usize) -> Self {
        assert!(d >= 1, "multi-index dimension must be positive");
        let mut indices = Vec::with_capacity(binomial(d + p, d));
        for n in 0..=p {
            compositions(n, d, &mut Vec::with_capacity(d), &mut indices);
        }
        let lookup = indices.iter().enumerate().map(|(k, i)| (i.clone(), k)).collect();
        Self {
            dim: d,
            degree: p,
            indices,
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
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn get(&self, k: usize) -> &[usize] {
        &self.indices[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.indices.iter().map(Vec::as_slice)
    }

    pub fn position(&self, index: &[usize]) -> Option<usize> {
        self.lookup.get(index).copied()
    }

    /// Total degree `|i|` of the `k`-th index.
    pub fn order(&self, k: usize) -> usize {
        self.indices[k].iter().sum()
    }

    /// Number of leading entries with total degree at most `p0`.
    pub fn truncated_len(&self, p0: usize) -> usize {
        binomial(self.dim + p0.min(self.degree), self.dim)
    }

    /// Position of the univariate index `n·e_i`, if present.
    pub fn univariate(&self, i: usize, n: usize) -> Option<usize> {
        let mut idx = vec![0; self.dim];
        idx[i] = n;
        self.position(&idx)
    }
}
