use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

/// Exponent vector over `D_1..D_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient(&self, other: &Exponent) -> Exponent {
        Exponent(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// `self - other` when every entry stays non-negative.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        if other.divides(self) {
            Some(other.quotient(self))
        } else {
            None
        }
    }

    /// Degree reverse lexicographic comparison with `D_1 > D_2 > ... > D_n`.
    pub fn cmp_degrevlex(&self, other: &Exponent) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }

    /// All exponents of total degree at most `max_degree`, in graded order.
    pub fn all_up_to(n: usize, max_degree: u32) -> Vec<Exponent> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut cur = vec![0u32; n];
            fill(&mut out, &mut cur, 0, d);
        }
        out
    }
}

fn fill(out: &mut Vec<Exponent>, cur: &mut Vec<u32>, i: usize, remaining: u32) {
    let n = cur.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Exponent(Vec::new()));
        }
        return;
    }
    if i == n - 1 {
        cur[i] = remaining;
        out.push(Exponent(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, remaining - e);
    }
    cur[i] = 0;
}

/// Polynomial in the total-derivative symbols `D_1..D_n` with rational
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl DPoly {
    pub fn zero(nvars: usize) -> Self {
        DPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = DPoly::zero(nvars);
        p.add_term(Exponent::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        DPoly::constant(nvars, Rational::one())
    }

    /// `D_i`, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        DPoly::monomial(Exponent::unit(nvars, i - 1), Rational::one())
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut p = DPoly::zero(e.nvars());
        p.add_term(e, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        debug_assert_eq!(e.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Highest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Exponent::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> DPoly {
        let mut out = DPoly::zero(self.nvars);
        for (e, k) in &self.terms {
            out.add_term(e.clone(), k * c);
        }
        out
    }

    pub fn mul_term(&self, e: &Exponent, c: &Rational) -> DPoly {
        let mut out = DPoly::zero(self.nvars);
        for (f, k) in &self.terms {
            out.add_term(f.add(e), k * c);
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut sorted: Vec<(&Exponent, &Rational)> = self.terms.iter().collect();
        sorted.sort_by(|a, b| b.0.cmp_degrevlex(a.0));
        let mut out = String::new();
        for (i, (e, c)) in sorted.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("D{}", j + 1)
                    } else {
                        format!("D{}^{}", j + 1, k)
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{abs}*{}", factors.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn add(self, rhs: &DPoly) -> DPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn sub(self, rhs: &DPoly) -> DPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        self.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a DPoly> for &'a DPoly {
    type Output = DPoly;
    fn mul(self, rhs: &DPoly) -> DPoly {
        let mut out = DPoly::zero(self.nvars);
        for (e, c) in &rhs.terms {
            for (f, k) in &self.terms {
                out.add_term(f.add(e), k * c);
            }
        }
        out
    }
}

/// Matrix over `Q[D_1..D_n]`. Row `a` is the `a`-th module generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSymbolMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<DPoly>>,
}

impl DSymbolMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        DSymbolMatrix {
            nvars,
            rows,
            cols,
            entries: vec![vec![DPoly::zero(nvars); cols]; rows],
        }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(nvars: usize, cols: usize, rows: Vec<Vec<DPoly>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        DSymbolMatrix {
            nvars,
            rows: rows.len(),
            cols,
            entries: rows,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &DPoly {
        &self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: DPoly) {
        self.entries[r][c] = p;
    }

    pub fn row(&self, r: usize) -> &[DPoly] {
        &self.entries[r]
    }

    pub fn rows(&self) -> &[Vec<DPoly>] {
        &self.entries
    }

    /// `vᵀ M`.
    pub fn left_mul(&self, v: &[DPoly]) -> Vec<DPoly> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![DPoly::zero(self.nvars); self.cols];
        for (a, va) in v.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = &*o + &(va * &self.entries[a][i]);
            }
        }
        out
    }

    /// Whether `vᵀ M = 0`.
    pub fn annihilated_by(&self, v: &[DPoly]) -> bool {
        self.left_mul(v).iter().all(DPoly::is_zero)
    }

    /// Degree of each row (highest entry degree), `None` for zero rows.
    pub fn row_degrees(&self) -> Vec<Option<u32>> {
        self.entries
            .iter()
            .map(|r| r.iter().filter_map(DPoly::degree).max())
            .collect()
    }

    /// Every row is homogeneous of a single degree across its entries.
    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().all(|r| {
            let mut d = None;
            r.iter().all(|p| {
                if !p.is_homogeneous() {
                    return false;
                }
                match (d, p.degree()) {
                    (_, None) => true,
                    (None, Some(k)) => {
                        d = Some(k);
                        true
                    }
                    (Some(a), Some(b)) => a == b,
                }
            })
        })
    }
}

impl fmt::Display for DSymbolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.entries {
            let cells: Vec<String> = r.iter().map(DPoly::render).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn degrevlex_order() {
        let d1sq = Exponent(vec![2, 0]);
        let d2sq = Exponent(vec![0, 2]);
        let d1d2 = Exponent(vec![1, 1]);
        assert_eq!(d1sq.cmp_degrevlex(&d1d2), Ordering::Greater);
        assert_eq!(d1d2.cmp_degrevlex(&d2sq), Ordering::Greater);
        assert_eq!(Exponent(vec![0, 0, 1]).cmp_degrevlex(&Exponent(vec![1, 0, 0])), Ordering::Less);
        // x1 x3 vs x2^2 in degrevlex: x2^2 > x1 x3
        assert_eq!(Exponent(vec![1, 0, 1]).cmp_degrevlex(&Exponent(vec![0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn enumerate_exponents() {
        assert_eq!(Exponent::all_up_to(3, 2).len(), 10);
        assert_eq!(Exponent::all_up_to(4, 3).len(), 35);
    }

    #[test]
    fn arithmetic_and_render() {
        let d1 = DPoly::var(2, 1);
        let d2 = DPoly::var(2, 2);
        let p = &(&d1 * &d1) - &(&d2 * &d2);
        assert_eq!(p.render(), "D1^2 - D2^2");
        assert_eq!(DPoly::constant(2, rat(-3)).render(), "-3");
        let m = DSymbolMatrix::from_rows(2, 1, vec![vec![d1.clone()], vec![d2.clone()]]);
        assert!(m.annihilated_by(&[d2.clone(), -&d1]));
        assert!(m.is_homogeneous());
    }
}
