//! Syzygy modules over the ring of total-derivative symbols.
//!
//! A linear operator with constant coefficients `E^a = Σ M[a][i](D) φ^i` is
//! presented by its symbol matrix `M`; Noether identities with constant
//! coefficients are exactly the row vectors `σ` with `σᵀ M = 0`.

mod dpoly;
mod groebner;
mod oracle;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use dpoly::{DPoly, DSymbolMatrix, Exponent};
pub use groebner::{schreyer_syzygies, ModMono, ModuleBasis, ModuleOrder};
pub use oracle::oracle_syzygies;

use crate::algebra::Rational;

/// Gröbner basis of the row module of `m`.
pub fn groebner(m: &DSymbolMatrix, order: ModuleOrder) -> ModuleBasis {
    ModuleBasis::new(m.rows(), m.ncols(), m.nvars(), order)
}

/// Gröbner basis of the submodule of `Q[D]^rank` generated by `gens`.
pub fn groebner_basis(gens: &[Vec<DPoly>], rank: usize, nvars: usize) -> ModuleBasis {
    ModuleBasis::new(gens, rank, nvars, ModuleOrder::default())
}

/// Generating set of `{σ : σᵀ M = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyBasis {
    pub generators: Vec<Vec<DPoly>>,
    /// The generators span the whole syzygy module.
    pub certified_complete: bool,
    /// No generator lies in the module spanned by the others. Guaranteed
    /// only when `M` is homogeneous.
    pub minimal: bool,
}

impl SyzygyBasis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Syzygies of `m` via Schreyer's construction, pruned greedily by degree so
/// that each kept generator is outside the span of the earlier ones, and
/// normalized to primitive integer vectors with positive leading coefficient.
pub fn syzygies(m: &DSymbolMatrix) -> SyzygyBasis {
    let n = m.nvars();
    let r = m.nrows();
    let mut candidates: Vec<Vec<DPoly>> = schreyer_syzygies(m.rows(), n)
        .into_iter()
        .map(|v| normalize(&v))
        .collect();
    for c in &candidates {
        assert!(m.annihilated_by(c), "Schreyer produced a non-syzygy");
    }
    let degrees = m.row_degrees();
    candidates.sort_by(|a, b| {
        shifted_degree(a, &degrees)
            .cmp(&shifted_degree(b, &degrees))
            .then_with(|| leading_cmp(b, a))
    });
    candidates.dedup();

    let mut kept: Vec<Vec<DPoly>> = Vec::new();
    let mut span: Option<ModuleBasis> = None;
    for c in candidates {
        let redundant = span.as_ref().map(|b| b.contains(&c)).unwrap_or(false);
        if !redundant {
            kept.push(c);
            span = Some(groebner_basis(&kept, r, n));
        }
    }
    kept.sort_by(|a, b| {
        shifted_degree(a, &degrees)
            .cmp(&shifted_degree(b, &degrees))
            .then_with(|| leading_cmp(b, a))
    });
    SyzygyBasis {
        generators: kept,
        certified_complete: true,
        minimal: m.is_homogeneous(),
    }
}

/// `max_a deg σ_a + deg M[a]`; zero rows of `M` count as degree 0.
pub fn shifted_degree(v: &[DPoly], row_degrees: &[Option<u32>]) -> u32 {
    v.iter()
        .zip(row_degrees)
        .filter_map(|(p, d)| p.degree().map(|k| k + d.unwrap_or(0)))
        .max()
        .unwrap_or(0)
}

fn leading(v: &[DPoly]) -> Option<(ModMono, Rational)> {
    let mut best: Option<(ModMono, Rational)> = None;
    for (comp, p) in v.iter().enumerate() {
        for (e, c) in p.terms() {
            let m = ModMono {
                comp,
                exp: e.clone(),
            };
            if best.as_ref().map(|(b, _)| m > *b).unwrap_or(true) {
                best = Some((m, c.clone()));
            }
        }
    }
    best
}

fn leading_cmp(a: &[DPoly], b: &[DPoly]) -> Ordering {
    let la = leading(a).map(|x| x.0);
    let lb = leading(b).map(|x| x.0);
    la.cmp(&lb).then_with(|| {
        // deterministic tie-break on the full term lists
        let ta: Vec<_> = a.iter().map(DPoly::render).collect();
        let tb: Vec<_> = b.iter().map(DPoly::render).collect();
        ta.cmp(&tb)
    })
}

/// Scales `v` to a primitive integer vector with positive leading coefficient.
pub fn normalize(v: &[DPoly]) -> Vec<DPoly> {
    let Some((_, lc)) = leading(v) else {
        return v.to_vec();
    };
    let mut den = BigInt::one();
    for p in v {
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
    }
    let mut g = BigInt::zero();
    for p in v {
        for (_, c) in p.terms() {
            let k = (c * Rational::from_integer(den.clone())).to_integer();
            g = g.gcd(&k);
        }
    }
    let mut s = Rational::new(den, g);
    if lc.is_negative() {
        s = -s;
    }
    v.iter().map(|p| p.scale(&s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn d(n: usize, i: usize) -> DPoly {
        DPoly::var(n, i)
    }

    fn gradient(n: usize) -> DSymbolMatrix {
        DSymbolMatrix::from_rows(n, 1, (1..=n).map(|i| vec![d(n, i)]).collect())
    }

    #[test]
    fn gradient_three_has_three_curls() {
        let m = gradient(3);
        let s = syzygies(&m);
        assert!(s.certified_complete && s.minimal);
        let z = DPoly::zero(3);
        let expected = [
            vec![d(3, 2), -&d(3, 1), z.clone()],
            vec![d(3, 3), z.clone(), -&d(3, 1)],
            vec![z.clone(), d(3, 3), -&d(3, 2)],
        ];
        assert_eq!(s.generators, expected.to_vec());
    }

    #[test]
    fn gradient_counts_are_binomial() {
        for (n, want) in [(2, 1), (3, 3), (4, 6)] {
            assert_eq!(syzygies(&gradient(n)).len(), want);
        }
    }

    #[test]
    fn divergence_has_no_identities() {
        let m = DSymbolMatrix::from_rows(3, 3, vec![(1..=3).map(|i| d(3, i)).collect()]);
        assert!(syzygies(&m).is_empty());
        assert!(oracle_syzygies(&m, 4).is_empty());
    }

    #[test]
    fn zero_matrix_is_annihilated_by_everything() {
        let m = DSymbolMatrix::zeros(2, 1, 1);
        let s = syzygies(&m);
        assert_eq!(s.generators, vec![vec![DPoly::one(2)]]);
    }

    #[test]
    fn principal_has_no_syzygies() {
        let m = DSymbolMatrix::from_rows(1, 1, vec![vec![d(1, 1)]]);
        assert!(syzygies(&m).is_empty());
        assert!(groebner(&m, ModuleOrder::default()).contains(&[d(1, 1)]));
    }

    #[test]
    fn normalize_clears_denominators() {
        let v = vec![
            DPoly::var(2, 1).scale(&Rational::new((-2).into(), 3.into())),
            DPoly::var(2, 2).scale(&Rational::new(4.into(), 9.into())),
        ];
        let w = normalize(&v);
        assert_eq!(w, vec![DPoly::var(2, 1).scale(&rat(3)), DPoly::var(2, 2).scale(&rat(-2))]);
    }

    #[test]
    fn schreyer_matches_oracle_for_two_rows() {
        let m = DSymbolMatrix::from_rows(
            2,
            2,
            vec![vec![d(2, 1), d(2, 2)], vec![d(2, 2), d(2, 1)]],
        );
        // the rows are independent over Q[D]
        assert!(syzygies(&m).is_empty());
        assert!(oracle_syzygies(&m, 3).is_empty());
    }
}
