mod common;

use common::*;
use koszul_tate::algebra::{rat, GradedPoly, MultiIndex};
use koszul_tate::corpus;
use koszul_tate::derivation::antifield;
use koszul_tate::dsl::{self, Equation, Expr, Ident, SpecAst, Span};
use koszul_tate::resolver::{build_tower, is_trivial_identity, verify_stage, Triviality};
use koszul_tate::syzygy::{oracle_syzygies, syzygies, DPoly, DSymbolMatrix, Exponent};
use num_bigint::BigUint;
use num_traits::Signed;
use proptest::prelude::*;

fn atom() -> impl Strategy<Value = Expr> {
    let s = Span::default();
    prop_oneof![
        (0u32..20, prop::option::of(1u32..7)).prop_map(move |(n, d)| Expr::Num {
            num: BigUint::from(n),
            den: d.map(BigUint::from),
            span: s,
        }),
        (1u32..=2).prop_map(move |index| Expr::Base { index, span: s }),
        prop::sample::select(vec!["phi", "psi"]).prop_map(Expr::field),
        (prop::sample::select(vec!["phi", "psi"]), prop::collection::vec(1u32..=2, 0..3))
            .prop_map(|(f, ds)| Expr::jet(f, ds)),
        (-1i64..2, 1u32..4).prop_map(|(k, r)| Expr::antifield(k, r)),
        (-1i64..2, 1u32..4, prop::collection::vec(1u32..=2, 0..3))
            .prop_map(|(k, r, ds)| Expr::jet_antifield(k, r, ds)),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    atom().prop_recursive(4, 24, 2, |inner| {
        let s = Span::default();
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), 0u32..4).prop_map(move |(a, k)| Expr::Pow(Box::new(a), k, s)),
            (1u32..=2, inner).prop_map(|(i, a)| Expr::d(i, a)),
        ]
    })
}

fn document(exprs: Vec<Expr>) -> SpecAst {
    let id = |n: &str| Ident {
        name: n.into(),
        span: Span::default(),
    };
    SpecAst {
        base: 2,
        fields: vec![id("phi"), id("psi")],
        operator: id("o"),
        equations: exprs
            .into_iter()
            .enumerate()
            .map(|(i, expr)| Equation {
                name: format!("E{}", i + 1),
                expr,
                span: Span::default(),
            })
            .collect(),
        stages: Vec::new(),
    }
}

/// Homogeneous linear entries in two variables.
fn linear_matrix() -> impl Strategy<Value = DSymbolMatrix> {
    (2usize..=3, 1usize..=2).prop_flat_map(|(rows, cols)| {
        prop::collection::vec((-2i64..=2, -2i64..=2), rows * cols).prop_map(move |cs| {
            let entries: Vec<DPoly> = cs
                .iter()
                .map(|&(a, b)| {
                    let mut p = DPoly::zero(2);
                    p.add_term(Exponent::unit(2, 0), rat(a));
                    p.add_term(Exponent::unit(2, 1), rat(b));
                    p
                })
                .collect();
            DSymbolMatrix::from_rows(2, cols, entries.chunks(cols).map(<[DPoly]>::to_vec).collect())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn render_then_parse_is_identity(exprs in prop::collection::vec(expr(), 0..4)) {
        let ast = document(exprs);
        let text = dsl::render(&ast);
        let back = dsl::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &ast);
        prop_assert_eq!(dsl::render(&back), text);
    }

    #[test]
    fn syzygies_are_sound_normalized_and_complete(m in linear_matrix()) {
        let basis = syzygies(&m);
        for s in &basis.generators {
            prop_assert!(m.annihilated_by(s));
            let lead = s.iter().find(|p| !p.is_zero()).unwrap();
            let top = lead.terms().max_by(|a, b| a.0.cmp_degrevlex(b.0)).unwrap();
            prop_assert!(top.1.is_positive());
            prop_assert!(s.iter().flat_map(DPoly::terms).all(|(_, c)| c.is_integer()));
        }
        let ours = TruncatedModule::new(&basis.generators, 2, 2);
        for s in oracle_syzygies(&m, 2) {
            prop_assert!(ours.contains(&s));
        }
    }

    #[test]
    fn curl_candidate_accepted_iff_nilpotent(a in -2i64..=2, b in -2i64..=2) {
        let spec = spec_of(&corpus::gradient(2));
        let op = &antifield(-1, 2, MultiIndex::single(1)).scale(&rat(a))
            + &antifield(-1, 1, MultiIndex::single(2)).scale(&rat(b));
        let tower = build_tower(&spec, &[(vec![op], vec![GradedPoly::zero()])]).unwrap();
        let accepted = verify_stage(&spec, &tower, 0).unwrap().accepted;
        prop_assert_eq!(accepted, tower[0].differential.is_nilpotent().nilpotent);
        prop_assert_eq!(accepted, a + b == 0);
    }

    #[test]
    fn boundaries_are_trivial_with_checked_witness(
        terms in prop::collection::vec((1i64..=3, 0usize..3, 0usize..4, 0usize..3, 0usize..4), 1..4)
    ) {
        let spec = spec_of(&corpus::gradient(3));
        let delta = spec.kt_differential();
        let lambdas = multi_indices(3, 1);
        let psi = terms.iter().fold(GradedPoly::zero(), |acc, &(c, a, l, b, s)| {
            let pair = &antifield(-1, a as u32 + 1, lambdas[l].clone())
                * &antifield(-1, b as u32 + 1, lambdas[s].clone());
            &acc + &pair.scale(&rat(c))
        });
        let phi = delta.prolong_apply(&psi).unwrap();
        match is_trivial_identity(&spec, &[], &phi, 0).unwrap() {
            Triviality::Trivial { witness } => prop_assert_eq!(delta.prolong_apply(&witness).unwrap(), phi),
            other => prop_assert!(false, "{phi} classified {other:?}"),
        }
    }
}
