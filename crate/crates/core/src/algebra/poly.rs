use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{DefaultNames, FieldNames, MultiIndex, Parity, Rational, Var};
use crate::error::AlgebraError;

/// Variable part of a term: even factors with exponents, odd factors as a
/// strictly increasing list in the canonical variable order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    even: Vec<(Var, u32)>,
    odd: Vec<Var>,
}

/// Sorts `odd` in place and returns the sign of the permutation, or `None`
/// when a variable repeats.
fn sort_odd(odd: &mut [Var]) -> Option<bool> {
    let mut negative = false;
    for i in 1..odd.len() {
        let mut j = i;
        while j > 0 && odd[j - 1] > odd[j] {
            odd.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if odd.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        if v.is_odd() {
            Monomial {
                even: Vec::new(),
                odd: vec![v],
            }
        } else {
            Monomial {
                even: vec![(v, 1)],
                odd: Vec::new(),
            }
        }
    }

    /// Canonicalizes an arbitrary factor list. Returns the monomial and
    /// whether the reordering introduced a minus sign, or `None` if an odd
    /// variable repeats.
    pub fn from_factors<I: IntoIterator<Item = Var>>(factors: I) -> Option<(Monomial, bool)> {
        let mut even: BTreeMap<Var, u32> = BTreeMap::new();
        let mut odd = Vec::new();
        for v in factors {
            if v.is_odd() {
                odd.push(v);
            } else {
                *even.entry(v).or_insert(0) += 1;
            }
        }
        let negative = sort_odd(&mut odd)?;
        Some((
            Monomial {
                even: even.into_iter().collect(),
                odd,
            },
            negative,
        ))
    }

    pub fn is_one(&self) -> bool {
        self.even.is_empty() && self.odd.is_empty()
    }

    pub fn even_factors(&self) -> &[(Var, u32)] {
        &self.even
    }

    pub fn odd_factors(&self) -> &[Var] {
        &self.odd
    }

    /// Every variable with multiplicity, even block first.
    pub fn factors(&self) -> impl Iterator<Item = &Var> {
        self.even
            .iter()
            .flat_map(|(v, e)| std::iter::repeat(v).take(*e as usize))
            .chain(self.odd.iter())
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.even.iter().map(|(v, _)| v).chain(self.odd.iter())
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().map(|(_, e)| *e).sum::<u32>() + self.odd.len() as u32
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        if v.is_odd() {
            self.odd.contains(v) as u32
        } else {
            self.even
                .iter()
                .find(|(w, _)| w == v)
                .map(|(_, e)| *e)
                .unwrap_or(0)
        }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.len() as u32)
    }

    pub fn antifield_number(&self) -> u32 {
        self.factors().map(Var::antifield_number).sum()
    }

    /// Graded-commutative product `self * other`; `Some((m, negative))`.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut even = Vec::with_capacity(self.even.len() + other.even.len());
        let (mut i, mut j) = (0, 0);
        while i < self.even.len() && j < other.even.len() {
            match self.even[i].0.cmp(&other.even[j].0) {
                std::cmp::Ordering::Less => {
                    even.push(self.even[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    even.push(other.even[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    even.push((self.even[i].0.clone(), self.even[i].1 + other.even[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        even.extend_from_slice(&self.even[i..]);
        even.extend_from_slice(&other.even[j..]);

        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < self.odd.len() && j < other.odd.len() {
            match self.odd[i].cmp(&other.odd[j]) {
                std::cmp::Ordering::Less => {
                    odd.push(self.odd[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // other.odd[j] jumps over the remaining factors of self
                    if (self.odd.len() - i) % 2 == 1 {
                        negative = !negative;
                    }
                    odd.push(other.odd[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        odd.extend_from_slice(&self.odd[i..]);
        odd.extend_from_slice(&other.odd[j..]);
        Some((Monomial { even, odd }, negative))
    }

    /// The monomial with one power of the even variable `v` removed.
    fn without_even(&self, idx: usize) -> Monomial {
        let mut even = self.even.clone();
        if even[idx].1 == 1 {
            even.remove(idx);
        } else {
            even[idx].1 -= 1;
        }
        Monomial {
            even,
            odd: self.odd.clone(),
        }
    }

    /// Splits off the even block and the odd factors before/after position `j`.
    pub(crate) fn odd_split(&self, j: usize) -> (Monomial, Monomial) {
        let prefix = Monomial {
            even: self.even.clone(),
            odd: self.odd[..j].to_vec(),
        };
        let suffix = Monomial {
            even: Vec::new(),
            odd: self.odd[j + 1..].to_vec(),
        };
        (prefix, suffix)
    }

    pub(crate) fn odd_only(&self) -> Monomial {
        Monomial {
            even: Vec::new(),
            odd: self.odd.clone(),
        }
    }

    pub(crate) fn even_only_without(&self, idx: usize) -> Monomial {
        let mut m = self.without_even(idx);
        m.odd.clear();
        m
    }

    /// `d_λ` applied to this monomial (coefficient 1).
    pub fn total_derivative(&self, direction: u8) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (idx, (v, e)) in self.even.iter().enumerate() {
            let rest = self.without_even(idx);
            let coeff = Rational::from_integer((*e).into());
            match v {
                Var::Base(l) => {
                    if *l == direction {
                        out.add_term(rest, coeff);
                    }
                }
                _ => {
                    let raised = v.raised(direction).expect("jet variable");
                    let (m, neg) = rest.mul(&Monomial::var(raised)).expect("even factor");
                    out.add_term(m, if neg { -coeff } else { coeff });
                }
            }
        }
        for j in 0..self.odd.len() {
            let mut odd = self.odd.clone();
            odd[j] = odd[j].raised(direction).expect("odd variables are antifields");
            if let Some(negative) = sort_odd(&mut odd) {
                let m = Monomial {
                    even: self.even.clone(),
                    odd,
                };
                let c = Rational::one();
                out.add_term(m, if negative { -c } else { c });
            }
        }
        out
    }

    pub fn render(&self, names: &dyn FieldNames) -> String {
        let even: Vec<String> = self
            .even
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.render(names)
                } else {
                    format!("{}^{e}", v.render(names))
                }
            })
            .collect();
        let mut parts = Vec::new();
        if !even.is_empty() {
            parts.push(even.join("*"));
        }
        parts.extend(self.odd.iter().map(|v| v.render(names)));
        parts.join(" * ")
    }
}

/// Homogeneity report of a graded quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity<T> {
    Pure(T),
    Mixed,
}

impl<T: Copy> Homogeneity<T> {
    pub fn pure(self) -> Option<T> {
        match self {
            Homogeneity::Pure(t) => Some(t),
            Homogeneity::Mixed => None,
        }
    }
}

/// Parity and antifield number of a polynomial, with mixed flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grade {
    pub parity: Homogeneity<Parity>,
    pub antifield_number: Homogeneity<u32>,
}

/// Exact-coefficient polynomial in base coordinates, jets and antifields.
///
/// Terms are kept in a sorted map keyed by their canonical [`Monomial`], so
/// equal polynomials have identical term maps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(m, c);
        p
    }

    /// Product of factors in the given order, with Koszul signs.
    pub fn product<I: IntoIterator<Item = Var>>(c: Rational, factors: I) -> Self {
        match Monomial::from_factors(factors) {
            Some((m, neg)) => Self::term(m, if neg { -c } else { c }),
            None => GradedPoly::zero(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiplies every term by the monomial `m` on the right.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (t, k) in &self.terms {
            if let Some((prod, neg)) = t.mul(m) {
                let v = k * c;
                out.add_term(prod, if neg { -v } else { v });
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut acc = GradedPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Total derivative `d_λ`.
    pub fn total_derivative(&self, direction: u8) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            for (dm, dc) in m.total_derivative(direction).terms {
                out.add_term(dm, dc * c);
            }
        }
        out
    }

    /// `d_Λ = d_{λ1} ∘ ... ∘ d_{λk}`.
    pub fn total_derivative_multi(&self, index: &MultiIndex) -> GradedPoly {
        index
            .directions()
            .iter()
            .fold(self.clone(), |p, &d| p.total_derivative(d))
    }

    pub fn grade(&self) -> Grade {
        let mut parity = None;
        let mut ant = None;
        let mut parity_mixed = false;
        let mut ant_mixed = false;
        for m in self.terms.keys() {
            let p = m.parity();
            let a = m.antifield_number();
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => parity_mixed = true,
                _ => {}
            }
            match ant {
                None => ant = Some(a),
                Some(b) if b != a => ant_mixed = true,
                _ => {}
            }
        }
        Grade {
            parity: if parity_mixed {
                Homogeneity::Mixed
            } else {
                Homogeneity::Pure(parity.unwrap_or(Parity::Even))
            },
            antifield_number: if ant_mixed {
                Homogeneity::Mixed
            } else {
                Homogeneity::Pure(ant.unwrap_or(0))
            },
        }
    }

    /// Parity if homogeneous (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        self.grade().parity.pure()
    }

    pub fn antifield_number(&self) -> Option<u32> {
        self.grade().antifield_number.pure()
    }

    pub fn parity_component(&self, p: Parity) -> GradedPoly {
        self.filter_terms(|m| m.parity() == p)
    }

    pub fn antifield_component(&self, n: u32) -> GradedPoly {
        self.filter_terms(|m| m.antifield_number() == n)
    }

    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.terms.keys().flat_map(|m| m.vars())
    }

    pub fn has_antifields(&self) -> bool {
        self.vars().any(|v| matches!(v, Var::Antifield { .. }))
    }

    /// Evaluates an antifield-free polynomial at a point given by `value`.
    pub fn evaluate<F: Fn(&Var) -> Option<Rational>>(&self, value: F) -> Result<Rational, AlgebraError> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            if let Some(v) = m.odd_factors().first() {
                return Err(AlgebraError::OddEvaluation(v.to_string()));
            }
            let mut t = c.clone();
            for (v, e) in m.even_factors() {
                if matches!(v, Var::Antifield { .. }) {
                    return Err(AlgebraError::OddEvaluation(v.to_string()));
                }
                let x = value(v).ok_or_else(|| AlgebraError::Unassigned(v.to_string()))?;
                for _ in 0..*e {
                    t *= &x;
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Canonical rendering, terms in descending canonical monomial order.
    pub fn render(&self, names: &dyn FieldNames) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let body = m.render(names);
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&body);
            } else {
                out.push_str(&format!("{abs}*{body}"));
            }
        }
        out
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&DefaultNames))
    }
}

impl From<Var> for GradedPoly {
    fn from(v: Var) -> Self {
        GradedPoly::var(v)
    }
}

impl<'a> Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        &self - &rhs
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

impl<'a> Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        &self * &rhs
    }
}
