//! Buchberger's algorithm for submodules of `Q[D_1..D_n]^r` and Schreyer's
//! syzygy construction.
//!
//! Module monomials are ordered position-over-term: a lower component index
//! is larger, and degrevlex breaks ties inside one component. Critical pairs
//! are selected by the normal strategy (smallest lcm degree, then first in
//! first out) and Buchberger's chain criterion drops redundant pairs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_traits::One;

use super::dpoly::{DPoly, Exponent};
use crate::algebra::Rational;
use crate::linalg::axpy;

/// A monomial `D^exp e_comp` of the free module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMono {
    pub comp: usize,
    pub exp: Exponent,
}

impl Ord for ModMono {
    fn cmp(&self, other: &Self) -> Ordering {
        match other.comp.cmp(&self.comp) {
            Ordering::Equal => self.exp.cmp_degrevlex(&other.exp),
            o => o,
        }
    }
}

impl PartialOrd for ModMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ModMono {
    fn divides(&self, other: &ModMono) -> bool {
        self.comp == other.comp && self.exp.divides(&other.exp)
    }
}

/// Sparse module element; the last entry is the leading term.
pub type ModVec = BTreeMap<ModMono, Rational>;

/// Supported module monomial orders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Position over term, lower index first, degrevlex within a component.
    #[default]
    PotDegRevLex,
}

pub fn to_modvec(v: &[DPoly]) -> ModVec {
    let mut out = ModVec::new();
    for (comp, p) in v.iter().enumerate() {
        for (e, c) in p.terms() {
            out.insert(
                ModMono {
                    comp,
                    exp: e.clone(),
                },
                c.clone(),
            );
        }
    }
    out
}

pub fn from_modvec(v: &ModVec, rank: usize, nvars: usize) -> Vec<DPoly> {
    let mut out = vec![DPoly::zero(nvars); rank];
    for (m, c) in v {
        out[m.comp].add_term(m.exp.clone(), c.clone());
    }
    out
}

fn lead(v: &ModVec) -> Option<(&ModMono, &Rational)> {
    v.last_key_value()
}

fn mul_term(v: &ModVec, e: &Exponent, c: &Rational) -> ModVec {
    v.iter()
        .map(|(m, k)| {
            (
                ModMono {
                    comp: m.comp,
                    exp: m.exp.add(e),
                },
                k * c,
            )
        })
        .collect()
}

fn rep_axpy(acc: &mut [DPoly], e: &Exponent, c: &Rational, rep: &[DPoly]) {
    for (a, r) in acc.iter_mut().zip(rep) {
        if !r.is_zero() {
            *a = &*a + &r.mul_term(e, c);
        }
    }
}

#[derive(Clone, Debug)]
struct Element {
    v: ModVec,
    /// Coordinates over the input generators.
    rep: Vec<DPoly>,
}

/// One quotient term of a division: `c * D^exp` times basis element `index`.
struct QuotientTerm {
    index: usize,
    exp: Exponent,
    coeff: Rational,
}

fn reduce(v: &ModVec, basis: &[&ModVec]) -> (ModVec, Vec<QuotientTerm>) {
    let mut p = v.clone();
    let mut rem = ModVec::new();
    let mut quotient = Vec::new();
    while let Some((lm, lc)) = p.last_key_value() {
        let lm = lm.clone();
        let lc = lc.clone();
        let divisor = basis.iter().enumerate().find(|(_, g)| {
            lead(g)
                .map(|(gm, _)| gm.divides(&lm))
                .unwrap_or(false)
        });
        match divisor {
            Some((index, g)) => {
                let (gm, gc) = lead(g).expect("nonzero basis element");
                let exp = gm.exp.quotient(&lm.exp);
                let coeff = &lc / gc;
                let shifted = mul_term(g, &exp, &coeff);
                axpy(&mut p, &-Rational::one(), &shifted);
                quotient.push(QuotientTerm { index, exp, coeff });
            }
            None => {
                p.remove(&lm);
                rem.insert(lm, lc);
            }
        }
    }
    (rem, quotient)
}

fn make_monic(el: &mut Element) {
    if let Some((_, c)) = lead(&el.v) {
        let inv = Rational::one() / c.clone();
        for k in el.v.values_mut() {
            *k *= &inv;
        }
        for r in el.rep.iter_mut() {
            *r = r.scale(&inv);
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: ModMono,
    seq: usize,
}

/// S-vector of basis elements `i` and `j` together with its cofactors.
fn s_vector(a: &Element, b: &Element, lcm: &Exponent, nvars: usize) -> (ModVec, Vec<DPoly>, [(Exponent, Rational); 2]) {
    let (am, ac) = lead(&a.v).expect("nonzero");
    let (bm, bc) = lead(&b.v).expect("nonzero");
    let ea = am.exp.quotient(lcm);
    let eb = bm.exp.quotient(lcm);
    let ca = Rational::one() / ac.clone();
    let cb = -(Rational::one() / bc.clone());
    let mut s = mul_term(&a.v, &ea, &ca);
    axpy(&mut s, &Rational::one(), &mul_term(&b.v, &eb, &cb));
    let mut rep = vec![DPoly::zero(nvars); a.rep.len()];
    rep_axpy(&mut rep, &ea, &ca, &a.rep);
    rep_axpy(&mut rep, &eb, &cb, &b.rep);
    (s, rep, [(ea, ca), (eb, cb)])
}

/// Runs Buchberger's algorithm on the given generators (each of length
/// `rank`), tracking cofactors over the input.
fn buchberger(gens: &[Vec<DPoly>], nvars: usize) -> Vec<Element> {
    let s = gens.len();
    let mut basis: Vec<Element> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut seq = 0usize;

    let mut push = |el: Element, basis: &mut Vec<Element>, pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>| {
        let j = basis.len();
        let (jm, _) = lead(&el.v).expect("nonzero").clone();
        let jm = jm.clone();
        for (i, g) in basis.iter().enumerate() {
            let (im, _) = lead(&g.v).expect("nonzero");
            if im.comp == jm.comp {
                pairs.push(Pair {
                    i,
                    j,
                    lcm: ModMono {
                        comp: jm.comp,
                        exp: im.exp.lcm(&jm.exp),
                    },
                    seq,
                });
                pending.insert((i, j));
                seq += 1;
            }
        }
        basis.push(el);
    };

    for (i, g) in gens.iter().enumerate() {
        let v = to_modvec(g);
        if v.is_empty() {
            continue;
        }
        let mut rep = vec![DPoly::zero(nvars); s];
        rep[i] = DPoly::one(nvars);
        let mut el = Element { v, rep };
        make_monic(&mut el);
        push(el, &mut basis, &mut pairs, &mut pending);
    }

    while !pairs.is_empty() {
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.lcm
                    .exp
                    .degree()
                    .cmp(&b.lcm.exp.degree())
                    .then(a.seq.cmp(&b.seq))
            })
            .map(|(k, _)| k)
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));

        let chain = (0..basis.len()).any(|k| {
            if k == pair.i || k == pair.j {
                return false;
            }
            let (km, _) = lead(&basis[k].v).expect("nonzero");
            km.divides(&pair.lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }

        let (sv, srep, _) = s_vector(&basis[pair.i], &basis[pair.j], &pair.lcm.exp, nvars);
        let refs: Vec<&ModVec> = basis.iter().map(|e| &e.v).collect();
        let (rem, quotient) = reduce(&sv, &refs);
        if rem.is_empty() {
            continue;
        }
        let mut rep = srep;
        for q in &quotient {
            let c = -q.coeff.clone();
            rep_axpy(&mut rep, &q.exp, &c, &basis[q.index].rep);
        }
        let mut el = Element { v: rem, rep };
        make_monic(&mut el);
        push(el, &mut basis, &mut pairs, &mut pending);
    }
    basis
}

/// A reduced Gröbner basis of a submodule of `Q[D]^rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleBasis {
    rank: usize,
    nvars: usize,
    elements: Vec<ModVec>,
}

impl ModuleBasis {
    /// Gröbner basis of the submodule generated by `gens`.
    pub fn new(gens: &[Vec<DPoly>], rank: usize, nvars: usize, _order: ModuleOrder) -> Self {
        assert!(gens.iter().all(|g| g.len() == rank), "generator length mismatch");
        let raw: Vec<ModVec> = buchberger(gens, nvars).into_iter().map(|e| e.v).collect();
        // drop elements whose lead is divisible by another lead
        let mut keep: Vec<ModVec> = Vec::new();
        for (i, g) in raw.iter().enumerate() {
            let gm = lead(g).expect("nonzero").0;
            let redundant = raw.iter().enumerate().any(|(j, h)| {
                if i == j {
                    return false;
                }
                let hm = lead(h).expect("nonzero").0;
                hm.divides(gm) && (hm != gm || j < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        let mut reduced = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<&ModVec> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g)
                .collect();
            let (mut r, _) = reduce(&keep[i], &others);
            let c = lead(&r).expect("lead survives").1.clone();
            let inv = Rational::one() / c;
            for k in r.values_mut() {
                *k *= &inv;
            }
            reduced.push(r);
        }
        reduced.sort_by(|a, b| lead(a).unwrap().0.cmp(lead(b).unwrap().0));
        ModuleBasis {
            rank,
            nvars,
            elements: reduced,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> Vec<Vec<DPoly>> {
        self.elements
            .iter()
            .map(|v| from_modvec(v, self.rank, self.nvars))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<ModMono> {
        self.elements
            .iter()
            .map(|v| lead(v).unwrap().0.clone())
            .collect()
    }

    pub fn normal_form(&self, v: &[DPoly]) -> Vec<DPoly> {
        let refs: Vec<&ModVec> = self.elements.iter().collect();
        let (rem, _) = reduce(&to_modvec(v), &refs);
        from_modvec(&rem, self.rank, self.nvars)
    }

    pub fn contains(&self, v: &[DPoly]) -> bool {
        let refs: Vec<&ModVec> = self.elements.iter().collect();
        reduce(&to_modvec(v), &refs).0.is_empty()
    }

    /// Mutual containment of the generated submodules.
    pub fn same_module(&self, other: &ModuleBasis) -> bool {
        self.elements().iter().all(|g| other.contains(g))
            && other.elements().iter().all(|g| self.contains(g))
    }
}

/// Generating set of `{σ : Σ σ_a gens[a] = 0}` by Schreyer's construction:
/// one syzygy per critical pair of the Gröbner basis, lifted to the input
/// generators, plus the relations expressing each input through the basis.
pub fn schreyer_syzygies(gens: &[Vec<DPoly>], nvars: usize) -> Vec<Vec<DPoly>> {
    let s = gens.len();
    let basis = buchberger(gens, nvars);
    let refs: Vec<&ModVec> = basis.iter().map(|e| &e.v).collect();
    let mut out = Vec::new();

    let lift = |coords: &[(usize, Exponent, Rational)]| -> Vec<DPoly> {
        let mut acc = vec![DPoly::zero(nvars); s];
        for (idx, e, c) in coords {
            rep_axpy(&mut acc, e, c, &basis[*idx].rep);
        }
        acc
    };

    for j in 0..basis.len() {
        for i in 0..j {
            let (im, _) = lead(&basis[i].v).unwrap();
            let (jm, _) = lead(&basis[j].v).unwrap();
            if im.comp != jm.comp {
                continue;
            }
            let l = im.exp.lcm(&jm.exp);
            let (sv, _, [(ea, ca), (eb, cb)]) = s_vector(&basis[i], &basis[j], &l, nvars);
            let (rem, quotient) = reduce(&sv, &refs);
            debug_assert!(rem.is_empty(), "basis is not a Gröbner basis");
            let mut coords = vec![(i, ea, ca), (j, eb, cb)];
            coords.extend(quotient.into_iter().map(|q| (q.index, q.exp, -q.coeff)));
            out.push(lift(&coords));
        }
    }

    for (i, g) in gens.iter().enumerate() {
        let (rem, quotient) = reduce(&to_modvec(g), &refs);
        debug_assert!(rem.is_empty());
        let coords: Vec<_> = quotient
            .into_iter()
            .map(|q| (q.index, q.exp, -q.coeff))
            .collect();
        let mut v = lift(&coords);
        v[i] = &v[i] + &DPoly::one(nvars);
        out.push(v);
    }
    out.retain(|v| v.iter().any(|p| !p.is_zero()));
    out
}
