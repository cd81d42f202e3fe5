use std::fmt;

/// Maximum number of divisor components supported by [`ComponentSet`].
pub const MAX_COMPONENTS: usize = 63;

/// A subset of the components `{0, …, m-1}`, stored as a bit mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentSet(u64);

impl ComponentSet {
    pub fn empty() -> Self {
        ComponentSet(0)
    }

    /// `{0, …, m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_COMPONENTS);
        ComponentSet((1u64 << m) - 1)
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_COMPONENTS);
        ComponentSet(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        indices.into_iter().fold(ComponentSet(0), |acc, i| {
            acc.union(ComponentSet::singleton(i))
        })
    }

    /// Support `{i : n_i ≠ 0}` of a multi-index.
    pub fn support(n: &[u32]) -> Self {
        Self::from_indices(
            n.iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, _)| i),
        )
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ComponentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ComponentSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ComponentSet(self.0 & !other.0)
    }

    pub fn is_subset(&self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest index plus one (0 for the empty set).
    pub fn span(&self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..64).filter(move |i| bits & (1u64 << i) != 0)
    }

    /// All subsets, starting with the empty set.
    pub fn subsets(&self) -> impl Iterator<Item = ComponentSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(ComponentSet(cur))
        })
    }

    /// Characteristic vector of length `m`.
    pub fn indicator(&self, m: usize) -> Vec<u32> {
        (0..m).map(|i| u32::from(self.contains(i))).collect()
    }
}

impl fmt::Display for ComponentSet {
    /// One-based, e.g. `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All `n ∈ N^m` with `|n| ≤ bound`, in lexicographic order.
pub fn multi_indices(m: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, bound, &mut cur, &mut out);
    out
}
