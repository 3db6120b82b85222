//! Generators for the example operators shipped in `corpus/`.
//!
//! Index-heavy operators (Maxwell, the 2-form gauge field) are expanded here
//! rather than by the DSL, which has no summation syntax.

use crate::dsl::{render, Equation, Expr, Ident, SpecAst, Span, StageBlock, StageItem};

/// One corpus file.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub file_name: String,
    pub comments: Vec<String>,
    pub ast: SpecAst,
}

impl CorpusEntry {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&render(&self.ast));
        out
    }
}

fn ident(name: &str) -> Ident {
    Ident {
        name: name.into(),
        span: Span::default(),
    }
}

fn eq(name: &str, expr: Expr) -> Equation {
    Equation {
        name: name.into(),
        expr,
        span: Span::default(),
    }
}

fn spec(base: u32, fields: &[&str], name: &str, equations: Vec<Equation>) -> SpecAst {
    SpecAst {
        base,
        fields: fields.iter().map(|f| ident(f)).collect(),
        operator: ident(name),
        equations,
        stages: Vec::new(),
    }
}

fn stage(k: u32, items: Vec<StageItem>) -> StageBlock {
    StageBlock {
        stage: k,
        items,
        span: Span::default(),
    }
}

/// `E^i = d_i φ` for `i = 1..n`.
pub fn gradient(n: u32) -> SpecAst {
    let eqs = (1..=n)
        .map(|i| eq(&format!("E{i}"), Expr::d(i, Expr::field("phi"))))
        .collect();
    spec(n, &["phi"], &format!("gradient{n}"), eqs)
}

/// `E = Σ_i d_i u^i`.
pub fn divergence(n: u32) -> SpecAst {
    let names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    let terms = (1..=n)
        .map(|i| (false, Expr::d(i, Expr::field(&names[i as usize - 1]))))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    spec(n, &refs, &format!("divergence{n}"), vec![eq("E", Expr::signed_sum(terms).unwrap())])
}

/// `E^ν = Σ_μ d_μ (A^ν_(μ) - A^μ_(ν))` in four dimensions.
pub fn maxwell() -> SpecAst {
    let names = ["A1", "A2", "A3", "A4"];
    let eqs = (1..=4u32)
        .map(|nu| {
            let terms = (1..=4u32)
                .filter(|&mu| mu != nu)
                .map(|mu| {
                    let f = Expr::sub(
                        Expr::jet(names[nu as usize - 1], vec![mu]),
                        Expr::jet(names[mu as usize - 1], vec![nu]),
                    );
                    (false, Expr::d(mu, f))
                })
                .collect();
            eq(&format!("E{nu}"), Expr::signed_sum(terms).unwrap())
        })
        .collect();
    spec(4, &names, "maxwell4", eqs)
}

fn pairs4() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for a in 1..=4 {
        for b in a + 1..=4 {
            out.push((a, b));
        }
    }
    out
}

/// `B_{αβ}` for `α < β`, with `B_{βα} = -B_{αβ}` as a signed jet.
fn b_jet(a: u32, b: u32, direction: u32) -> (bool, Expr) {
    let (lo, hi, neg) = if a < b { (a, b, false) } else { (b, a, true) };
    (neg, Expr::jet(&format!("B{lo}{hi}"), vec![direction]))
}

/// `E^{νλ} = Σ_μ d_μ H^{μνλ}`, `H^{μνλ} = d_μ B_{νλ} + d_ν B_{λμ} + d_λ B_{μν}`.
pub fn two_form() -> SpecAst {
    let fields: Vec<String> = pairs4().iter().map(|(a, b)| format!("B{a}{b}")).collect();
    let eqs = pairs4()
        .into_iter()
        .map(|(nu, la)| {
            let terms = (1..=4u32)
                .filter(|&mu| mu != nu && mu != la)
                .map(|mu| {
                    let h = Expr::signed_sum(vec![b_jet(nu, la, mu), b_jet(la, mu, nu), b_jet(mu, nu, la)])
                        .unwrap();
                    (false, Expr::d(mu, h))
                })
                .collect();
            eq(&format!("E{nu}{la}"), Expr::signed_sum(terms).unwrap())
        })
        .collect();
    let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
    spec(4, &refs, "two_form4", eqs)
}

pub fn identity() -> SpecAst {
    spec(1, &["phi"], "identity", vec![eq("E", Expr::field("phi"))])
}

pub fn zero() -> SpecAst {
    spec(2, &["phi"], "zero", vec![eq("E", Expr::int(0))])
}

pub fn empty() -> SpecAst {
    spec(2, &["phi"], "empty", Vec::new())
}

pub fn kdv() -> SpecAst {
    let u = || Expr::field("u");
    let e = Expr::add(
        Expr::d(1, Expr::d(1, Expr::d(1, u()))),
        Expr::mul(Expr::mul(Expr::int(6), u()), Expr::d(1, u())),
    );
    spec(1, &["u"], "kdv", vec![eq("E", e)])
}

pub fn x_coefficient() -> SpecAst {
    let e = Expr::mul(
        Expr::Base {
            index: 1,
            span: Span::default(),
        },
        Expr::d(1, Expr::field("phi")),
    );
    spec(1, &["phi"], "x_coefficient", vec![eq("E", e)])
}

/// `c^k_(j) - c^j_(k)` for `j < k`.
fn curl(j: u32, k: u32) -> Expr {
    Expr::sub(Expr::jet_antifield(-1, k, vec![j]), Expr::jet_antifield(-1, j, vec![k]))
}

/// The gradient in three dimensions with its curls and the divergence of
/// the curls as a two-stage tower.
pub fn gradient_verify() -> SpecAst {
    let mut s = gradient(3);
    s.operator = ident("gradient3_tower");
    let curls = [(1, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(j, k)| StageItem::Operator(eq(&format!("D{j}{k}"), curl(j, k))))
        .collect();
    let div = Expr::signed_sum(vec![
        (false, Expr::jet_antifield(0, 1, vec![3])),
        (true, Expr::jet_antifield(0, 2, vec![2])),
        (false, Expr::jet_antifield(0, 3, vec![1])),
    ])
    .unwrap();
    s.stages = vec![stage(0, curls), stage(1, vec![StageItem::Operator(eq("R", div))])];
    s
}

/// One curl with a flipped sign; its residual is `2 φ_(1,2)`.
pub fn gradient_corrupted() -> SpecAst {
    let mut s = gradient(2);
    s.operator = ident("gradient2_corrupted");
    let bad = Expr::add(Expr::jet_antifield(-1, 2, vec![1]), Expr::jet_antifield(-1, 1, vec![2]));
    s.stages = vec![stage(0, vec![StageItem::Operator(eq("D12", bad))])];
    s
}

pub fn maxwell_verify() -> SpecAst {
    let mut s = maxwell();
    s.operator = ident("maxwell4_identity");
    let terms = (1..=4).map(|nu| (false, Expr::jet_antifield(-1, nu, vec![nu]))).collect();
    s.stages = vec![stage(
        0,
        vec![StageItem::Operator(eq("D", Expr::signed_sum(terms).unwrap()))],
    )];
    s
}

/// `E^i = d_i (u v)`: nonlinear, with the curl identity.
pub fn product_gradient_verify() -> SpecAst {
    let uv = || Expr::mul(Expr::field("u"), Expr::field("v"));
    let mut s = spec(
        2,
        &["u", "v"],
        "product_gradient",
        vec![eq("E1", Expr::d(1, uv())), eq("E2", Expr::d(2, uv()))],
    );
    s.stages = vec![stage(0, vec![StageItem::Operator(eq("D", curl(1, 2)))])];
    s
}

/// A first-stage operator that closes only with a `δ`-exact correction.
pub fn correction_verify() -> SpecAst {
    let mut s = gradient(2);
    s.operator = ident("gradient2_corrected");
    let phi = || Expr::field("phi");
    let koszul = Expr::sub(
        Expr::mul(Expr::jet("phi", vec![2]), Expr::antifield(-1, 1)),
        Expr::mul(Expr::jet("phi", vec![1]), Expr::antifield(-1, 2)),
    );
    let g = Expr::mul(phi(), Expr::antifield(0, 1));
    let h = Expr::neg(Expr::mul(Expr::mul(phi(), Expr::antifield(-1, 1)), Expr::antifield(-1, 2)));
    s.stages = vec![
        stage(0, vec![StageItem::Operator(eq("K", koszul))]),
        stage(
            1,
            vec![
                StageItem::Operator(eq("R", g)),
                StageItem::Correction(eq("R", h)),
            ],
        ),
    ];
    s
}

fn entry(file: &str, comments: &[&str], ast: SpecAst) -> CorpusEntry {
    CorpusEntry {
        file_name: file.into(),
        comments: comments.iter().map(|c| c.to_string()).collect(),
        ast,
    }
}

/// Every corpus file, in a fixed order.
pub fn entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push(entry(
            &format!("gradient{n}.kt-op"),
            &[&format!("gradient of one scalar in {n} dimensions")],
            gradient(n),
        ));
    }
    for n in 2..=3 {
        out.push(entry(
            &format!("divergence{n}.kt-op"),
            &[&format!("divergence of a vector field in {n} dimensions")],
            divergence(n),
        ));
    }
    out.push(entry(
        "maxwell4.kt-op",
        &[
            "source-free Maxwell operator d_mu F^{mu nu}, F = dA",
            "indices raised with the Euclidean metric",
        ],
        maxwell(),
    ));
    out.push(entry(
        "two_form4.kt-op",
        &[
            "2-form gauge field: E^{nu la} = d_mu H^{mu nu la}, H = dB",
            "fields B_ab with a < b; B_ba = -B_ab; Euclidean metric",
        ],
        two_form(),
    ));
    out.push(entry("identity.kt-op", &["E = phi"], identity()));
    out.push(entry("zero.kt-op", &["the zero operator"], zero()));
    out.push(entry("empty.kt-op", &["an operator without components"], empty()));
    out.push(entry("kdv.kt-op", &["Korteweg-de Vries, nonlinear"], kdv()));
    out.push(entry("x_coefficient.kt-op", &["non-constant coefficient"], x_coefficient()));
    out.push(entry(
        "gradient3_verify.kt-op",
        &["gradient tower: curls, then the divergence of the curls"],
        gradient_verify(),
    ));
    out.push(entry(
        "gradient2_corrupted.kt-op",
        &["curl with a flipped sign; check exits 2"],
        gradient_corrupted(),
    ));
    out.push(entry(
        "maxwell4_verify.kt-op",
        &["Maxwell identity d_nu d_mu F^{mu nu} = 0", "indices raised with the Euclidean metric"],
        maxwell_verify(),
    ));
    out.push(entry(
        "product_gradient_verify.kt-op",
        &["nonlinear operator d_i(u v) with its curl identity"],
        product_gradient_verify(),
    ));
    out.push(entry(
        "correction_verify.kt-op",
        &["first-stage operator phi c{0,1} closed by the correction -phi c{-1,1} c{-1,2}"],
        correction_verify(),
    ));
    out
}

/// The linear constant-coefficient operators of the corpus.
pub fn linear_operators() -> Vec<SpecAst> {
    vec![
        gradient(2),
        gradient(3),
        gradient(4),
        divergence(2),
        divergence(3),
        maxwell(),
        two_form(),
    ]
}
