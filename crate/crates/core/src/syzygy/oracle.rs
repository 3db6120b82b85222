//! Brute-force syzygy oracle: all `σ` with `σᵀ M = 0` whose entries have
//! degree at most `D`, found as the nullspace of the coefficient equations.
//! Shares no code with the Gröbner engine beyond the polynomial type.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::dpoly::{DPoly, DSymbolMatrix, Exponent};
use crate::linalg::{nullspace, SparseVec};

/// Basis of the degree-bounded syzygy space of `m`.
pub fn oracle_syzygies(m: &DSymbolMatrix, max_degree: u32) -> Vec<Vec<DPoly>> {
    let n = m.nvars();
    let monos = Exponent::all_up_to(n, max_degree);
    let unknown = |a: usize, e: usize| a * monos.len() + e;
    let ncols = m.nrows() * monos.len();

    // one equation per (column, output monomial)
    let mut eqs: BTreeMap<(usize, Exponent), SparseVec<usize>> = BTreeMap::new();
    for a in 0..m.nrows() {
        for (ei, e) in monos.iter().enumerate() {
            for i in 0..m.ncols() {
                for (f, c) in m.entry(a, i).terms() {
                    let row = eqs.entry((i, e.add(f))).or_default();
                    let slot = row.entry(unknown(a, ei)).or_insert_with(Zero::zero);
                    *slot += c;
                }
            }
        }
    }
    let rows: Vec<SparseVec<usize>> = eqs
        .into_values()
        .map(|mut r| {
            r.retain(|_, c| !c.is_zero());
            r
        })
        .collect();

    nullspace(&rows, ncols)
        .into_iter()
        .map(|x| {
            (0..m.nrows())
                .map(|a| {
                    let mut p = DPoly::zero(n);
                    for (ei, e) in monos.iter().enumerate() {
                        p.add_term(e.clone(), x[unknown(a, ei)].clone());
                    }
                    p
                })
                .collect()
        })
        .collect()
}
