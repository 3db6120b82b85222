#![allow(dead_code)]

use std::collections::BTreeMap;

use koszul_tate::algebra::{rat, GradedPoly, MultiIndex, Rational, Var};
use koszul_tate::derivation::Derivation;
use koszul_tate::dsl;
use koszul_tate::linalg::{nullspace, Echelon, SparseVec};
use koszul_tate::resolver::OperatorSpec;
use koszul_tate::syzygy::{DPoly, DSymbolMatrix, Exponent};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn spec_of(ast: &dsl::SpecAst) -> OperatorSpec {
    dsl::lower(ast).expect("corpus operators lower")
}

pub fn multi_indices(n: usize, max_order: usize) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::empty()];
    let mut frontier = vec![MultiIndex::empty()];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for m in &frontier {
            for d in m.max_direction().unwrap_or(1)..=n as u8 {
                next.push(m.raised(d));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Jets, base coordinates and the antifields a derivation knows about.
pub fn variable_pool(n: usize, fields: usize, diff: &Derivation, max_order: usize) -> Vec<Var> {
    let mut pool: Vec<Var> = (1..=n as u8).map(Var::Base).collect();
    for f in 0..fields as u32 {
        for d in multi_indices(n, max_order) {
            pool.push(Var::jet(f, d));
        }
    }
    for stage in -1..=diff.top_stage() {
        for r in 1..=diff.stage_size(stage) as u32 {
            for d in multi_indices(n, max_order.min(1)) {
                pool.push(Var::antifield(stage, r, d));
            }
        }
    }
    pool
}

pub fn build_poly(pool: &[Var], terms: &[(i64, Vec<usize>)]) -> GradedPoly {
    let mut p = GradedPoly::zero();
    for (c, idx) in terms {
        let factors: Vec<Var> = idx.iter().map(|&i| pool[i].clone()).collect();
        p = &p + &GradedPoly::product(rat(*c), factors);
    }
    p
}

pub fn random_poly<R: Rng>(rng: &mut R, pool: &[Var], max_terms: usize, max_factors: usize) -> GradedPoly {
    let nterms = rng.gen_range(1..=max_terms);
    let terms: Vec<(i64, Vec<usize>)> = (0..nterms)
        .map(|_| {
            let c = loop {
                let c = rng.gen_range(-4i64..=4);
                if c != 0 {
                    break c;
                }
            };
            let k = rng.gen_range(0..=max_factors);
            (c, (0..k).map(|_| rng.gen_range(0..pool.len())).collect())
        })
        .collect();
    build_poly(pool, &terms)
}

pub fn poly_strategy(pool: Vec<Var>, max_terms: usize, max_factors: usize) -> impl Strategy<Value = GradedPoly> {
    let len = pool.len();
    prop::collection::vec(
        (-3i64..=3, prop::collection::vec(0..len, 0..=max_factors)),
        0..=max_terms,
    )
    .prop_map(move |terms| build_poly(&pool, &terms))
}

/// `Q`-span of `{D^e s : s in gens, deg(D^e s) <= d}`; for homogeneous
/// syzygy modules this is the degree-`<= d` part of the module.
pub struct TruncatedModule {
    ech: Echelon<(usize, Exponent)>,
}

fn flatten(v: &[DPoly]) -> SparseVec<(usize, Exponent)> {
    let mut out = SparseVec::new();
    for (i, p) in v.iter().enumerate() {
        for (e, c) in p.terms() {
            out.insert((i, e.clone()), c.clone());
        }
    }
    out
}

fn vec_degree(v: &[DPoly]) -> u32 {
    v.iter().filter_map(DPoly::degree).max().unwrap_or(0)
}

impl TruncatedModule {
    pub fn new(gens: &[Vec<DPoly>], nvars: usize, d: u32) -> Self {
        let mut ech = Echelon::new();
        let mut tag = 0;
        for g in gens {
            let dg = vec_degree(g);
            if dg > d {
                continue;
            }
            for e in Exponent::all_up_to(nvars, d - dg) {
                let shifted: Vec<DPoly> = g.iter().map(|p| p.mul_term(&e, &Rational::one())).collect();
                ech.insert(flatten(&shifted), tag);
                tag += 1;
            }
        }
        TruncatedModule { ech }
    }

    pub fn contains(&self, v: &[DPoly]) -> bool {
        self.ech.contains(&flatten(v))
    }
}

/// Polynomial in the base coordinates, exponent vector to coefficient.
pub type XPoly = BTreeMap<Vec<u32>, Rational>;

fn x_derivative(p: &XPoly, dir: usize) -> XPoly {
    let mut out = XPoly::new();
    for (e, c) in p {
        if e[dir] == 0 {
            continue;
        }
        let mut f = e.clone();
        f[dir] -= 1;
        *out.entry(f).or_insert_with(Rational::zero) += c * rat(e[dir] as i64);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn x_partial(p: &XPoly, deriv: &MultiIndex) -> XPoly {
    let mut q = p.clone();
    for &d in deriv.directions() {
        q = x_derivative(&q, d as usize - 1);
    }
    q
}

pub fn x_eval(p: &XPoly, x: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (e, c) in p {
        let mut t = c.clone();
        for (xi, k) in x.iter().zip(e) {
            for _ in 0..*k {
                t *= xi;
            }
        }
        s += t;
    }
    s
}

fn x_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    Exponent::all_up_to(n, d).into_iter().map(|e| e.0).collect()
}

/// Basis of polynomial solutions `u` (one `XPoly` per field) of a linear
/// constant-coefficient operator with entries of degree `<= d`. Solved by
/// plain linear algebra on the coefficients.
pub fn polynomial_kernel(m: &DSymbolMatrix, d: u32) -> Vec<Vec<XPoly>> {
    let n = m.nvars();
    let monos = x_monomials(n, d);
    let fields = m.ncols();
    let unknown = |i: usize, j: usize| i * monos.len() + j;
    let mut eqs: BTreeMap<(usize, Vec<u32>), SparseVec<usize>> = BTreeMap::new();
    for a in 0..m.nrows() {
        for i in 0..fields {
            for (e, c) in m.entry(a, i).terms() {
                let deriv = MultiIndex::from_counts(&e.0);
                for (j, mono) in monos.iter().enumerate() {
                    let single: XPoly = [(mono.clone(), Rational::one())].into_iter().collect();
                    for (f, k) in x_partial(&single, &deriv) {
                        let row = eqs.entry((a, f)).or_default();
                        *row.entry(unknown(i, j)).or_insert_with(Rational::zero) += c * k;
                    }
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
    nullspace(&rows, fields * monos.len())
        .into_iter()
        .map(|x| {
            (0..fields)
                .map(|i| {
                    let mut p = XPoly::new();
                    for (j, mono) in monos.iter().enumerate() {
                        let c = &x[unknown(i, j)];
                        if !c.is_zero() {
                            p.insert(mono.clone(), c.clone());
                        }
                    }
                    p
                })
                .collect()
        })
        .collect()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
}

/// Assigns `x = x0` and `y^i_Λ = ∂^Λ u^i (x0)`.
pub fn jet_point<'a>(u: &'a [XPoly], x0: &[Rational]) -> impl Fn(&Var) -> Option<Rational> + 'a {
    let x0 = x0.to_vec();
    move |v: &Var| match v {
        Var::Base(l) => Some(x0[*l as usize - 1].clone()),
        Var::Jet { field, deriv } => Some(x_eval(&x_partial(&u[*field as usize], deriv), &x0)),
        Var::Antifield { .. } => None,
    }
}

