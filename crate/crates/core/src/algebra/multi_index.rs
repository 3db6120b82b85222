use std::fmt;

/// Symmetric multi-index over base directions `1..=n`.
///
/// Stored as a sorted list of directions, so `(1,2)` and `(2,1)` are the same
/// value and the derived ordering is lexicographic on the sorted lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(direction: u8) -> Self {
        MultiIndex(vec![direction])
    }

    pub fn from_directions<I: IntoIterator<Item = u8>>(directions: I) -> Self {
        let mut v: Vec<u8> = directions.into_iter().collect();
        v.sort_unstable();
        MultiIndex(v)
    }

    /// Builds a multi-index from per-direction multiplicities, `counts[0]`
    /// being the multiplicity of direction 1.
    pub fn from_counts(counts: &[u32]) -> Self {
        let mut v = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                v.push((i + 1) as u8);
            }
        }
        MultiIndex(v)
    }

    /// `|Λ|`.
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn directions(&self) -> &[u8] {
        &self.0
    }

    pub fn multiplicity(&self, direction: u8) -> u32 {
        self.0.iter().filter(|&&d| d == direction).count() as u32
    }

    /// Multiplicities for directions `1..=n`.
    pub fn counts(&self, n: usize) -> Vec<u32> {
        let mut c = vec![0u32; n];
        for &d in &self.0 {
            c[(d - 1) as usize] += 1;
        }
        c
    }

    pub fn max_direction(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `λ + Λ`.
    pub fn raised(&self, direction: u8) -> Self {
        let pos = self.0.partition_point(|&d| d <= direction);
        let mut v = self.0.clone();
        v.insert(pos, direction);
        MultiIndex(v)
    }

    /// `Λ + Σ`.
    pub fn joined(&self, other: &MultiIndex) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_insensitive() {
        let a = MultiIndex::from_directions([2, 1, 2]);
        let b = MultiIndex::from_directions([2, 2, 1]);
        assert_eq!(a, b);
        assert_eq!(a.order(), 3);
        assert_eq!(a.counts(3), vec![1, 2, 0]);
        assert_eq!(MultiIndex::from_counts(&[1, 2, 0]), a);
    }

    #[test]
    fn raise_keeps_sorted() {
        let a = MultiIndex::from_directions([1, 3]);
        assert_eq!(a.raised(2).directions(), &[1, 2, 3]);
        assert_eq!(a.raised(1).directions(), &[1, 1, 3]);
        assert_eq!(a.to_string(), "[1,3]");
        assert_eq!(MultiIndex::empty().to_string(), "[]");
    }
}
