//! Sparse exact linear algebra over `Q`.
//!
//! Vectors are sorted maps from a column key to a nonzero rational. Used by
//! the brute-force syzygy oracle, the boundary search of the triviality check,
//! and kernel sampling in tests; independent of the Gröbner code.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `a += s * b`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(a: &mut SparseVec<K>, s: &Rational, b: &SparseVec<K>) {
    for (k, v) in b {
        let entry = a.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += s * v;
        if entry.is_zero() {
            a.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    entries: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Incrementally built row-echelon basis. Each row's pivot is its smallest
/// key; rows remember which inserted vectors (by tag) they combine.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_row(&self, v: &mut SparseVec<K>, combo: &mut SparseVec<usize>) {
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let mut it: Box<dyn Iterator<Item = (&K, &Rational)>> = match &cursor {
                    None => Box::new(v.iter()),
                    Some(c) => Box::new(v.range(c.clone()..)),
                };
                it.find(|(k, _)| self.rows.contains_key(*k))
                    .map(|(k, c)| (k.clone(), c.clone()))
            };
            let Some((k, coeff)) = next else { break };
            let row = &self.rows[&k];
            let s = -(coeff / &row.entries[&k]);
            axpy(v, &s, &row.entries);
            axpy(combo, &s, &row.combo);
            cursor = Some(k);
        }
    }

    /// Inserts `v` tagged `tag`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: SparseVec<K>, tag: usize) -> bool {
        let mut v = v;
        let mut combo = SparseVec::new();
        combo.insert(tag, Rational::from_integer(1.into()));
        self.reduce_row(&mut v, &mut combo);
        match v.keys().next().cloned() {
            None => false,
            Some(p) => {
                self.rows.insert(
                    p,
                    Row {
                        entries: v,
                        combo,
                    },
                );
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.solve(v).is_some()
    }

    /// Coefficients (by tag) of a combination of inserted vectors equal to
    /// `target`, if one exists.
    pub fn solve(&self, target: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let mut v = target.clone();
        let mut combo = SparseVec::new();
        self.reduce_row(&mut v, &mut combo);
        if v.is_empty() {
            // v_target - Σ s_i inserted_i = 0 with combo = -Σ s_i
            Some(combo.into_iter().map(|(k, c)| (k, -c)).collect())
        } else {
            None
        }
    }
}

/// Basis of `{x : A x = 0}` for sparse equation rows over `ncols` unknowns.
pub fn nullspace(rows: &[SparseVec<usize>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech: Echelon<usize> = Echelon::new();
    for (i, r) in rows.iter().enumerate() {
        ech.insert(r.clone(), i);
    }
    let pivots: Vec<usize> = ech.rows.keys().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if ech.rows.contains_key(&free) {
            continue;
        }
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::from_integer(1.into());
        for &p in pivots.iter().rev() {
            let row = &ech.rows[&p].entries;
            let mut s = Rational::zero();
            for (k, c) in row.range(p + 1..) {
                s += c * &x[*k];
            }
            x[p] = -(s / &row[&p]);
        }
        basis.push(x);
    }
    basis
}
