use std::fmt;

use num_bigint::BigUint;

/// Source position, 1-based. Positions never take part in equality so that
/// re-parsing a rendered tree gives an equal tree.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative rational literal `num` or `num/den`.
    Num {
        num: BigUint,
        den: Option<BigUint>,
        span: Span,
    },
    /// Base coordinate `x<i>`.
    Base { index: u32, span: Span },
    /// Undifferentiated field.
    Field { name: String, span: Span },
    /// `d(i, e)`.
    Deriv {
        direction: u32,
        expr: Box<Expr>,
        span: Span,
    },
    /// `jet(field, [i,...])`.
    Jet {
        field: String,
        directions: Vec<u32>,
        span: Span,
    },
    /// `c{stage,r}`.
    Antifield { stage: i64, r: u32, span: Span },
    /// `jet_c(stage,r,[i,...])`.
    JetAntifield {
        stage: i64,
        r: u32,
        directions: Vec<u32>,
        span: Span,
    },
    Neg(Box<Expr>, Span),
    Add(Box<Expr>, Box<Expr>, Span),
    Sub(Box<Expr>, Box<Expr>, Span),
    Mul(Box<Expr>, Box<Expr>, Span),
    Pow(Box<Expr>, u32, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Num { span, .. }
            | Expr::Base { span, .. }
            | Expr::Field { span, .. }
            | Expr::Deriv { span, .. }
            | Expr::Jet { span, .. }
            | Expr::Antifield { span, .. }
            | Expr::JetAntifield { span, .. } => *span,
            Expr::Neg(_, s) | Expr::Add(_, _, s) | Expr::Sub(_, _, s) | Expr::Mul(_, _, s) => *s,
            Expr::Pow(_, _, s) => *s,
        }
    }

    pub fn int(n: u64) -> Expr {
        Expr::Num {
            num: n.into(),
            den: None,
            span: Span::default(),
        }
    }

    pub fn field(name: &str) -> Expr {
        Expr::Field {
            name: name.into(),
            span: Span::default(),
        }
    }

    pub fn jet(field: &str, directions: Vec<u32>) -> Expr {
        Expr::Jet {
            field: field.into(),
            directions,
            span: Span::default(),
        }
    }

    pub fn d(direction: u32, e: Expr) -> Expr {
        Expr::Deriv {
            direction,
            expr: Box::new(e),
            span: Span::default(),
        }
    }

    pub fn antifield(stage: i64, r: u32) -> Expr {
        Expr::Antifield {
            stage,
            r,
            span: Span::default(),
        }
    }

    pub fn jet_antifield(stage: i64, r: u32, directions: Vec<u32>) -> Expr {
        Expr::JetAntifield {
            stage,
            r,
            directions,
            span: Span::default(),
        }
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e), Span::default())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b), Span::default())
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b), Span::default())
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b), Span::default())
    }

    /// Left-nested sum of signed terms; `None` for an empty list.
    pub fn signed_sum(terms: Vec<(bool, Expr)>) -> Option<Expr> {
        let mut it = terms.into_iter();
        let (neg, first) = it.next()?;
        let mut acc = if neg { Expr::neg(first) } else { first };
        for (neg, t) in it {
            acc = if neg { Expr::sub(acc, t) } else { Expr::add(acc, t) };
        }
        Some(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub expr: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageItem {
    Operator(Equation),
    /// `correction NAME = expr`: added to the operator of the same name.
    Correction(Equation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageBlock {
    pub stage: u32,
    pub items: Vec<StageItem>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

/// A parsed `.kt-op` document: an operator and, for verification bundles,
/// candidate stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecAst {
    pub base: u32,
    pub fields: Vec<Ident>,
    pub operator: Ident,
    pub equations: Vec<Equation>,
    pub stages: Vec<StageBlock>,
}

impl SpecAst {
    pub fn is_bundle(&self) -> bool {
        !self.stages.is_empty()
    }
}

// binding strength: sums 1, products 2, unary minus 3, powers 4, atoms 5
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn wrap(out: &mut String, e: &Expr, paren: bool) {
    if paren {
        out.push('(');
        render_expr_into(out, e);
        out.push(')');
    } else {
        render_expr_into(out, e);
    }
}

fn directions(ds: &[u32]) -> String {
    let v: Vec<String> = ds.iter().map(u32::to_string).collect();
    format!("[{}]", v.join(","))
}

fn render_expr_into(out: &mut String, e: &Expr) {
    match e {
        Expr::Num { num, den, .. } => {
            out.push_str(&num.to_string());
            if let Some(d) = den {
                out.push('/');
                out.push_str(&d.to_string());
            }
        }
        Expr::Base { index, .. } => out.push_str(&format!("x{index}")),
        Expr::Field { name, .. } => out.push_str(name),
        Expr::Deriv { direction, expr, .. } => {
            out.push_str(&format!("d({direction}, "));
            render_expr_into(out, expr);
            out.push(')');
        }
        Expr::Jet {
            field, directions: ds, ..
        } => out.push_str(&format!("jet({field}, {})", directions(ds))),
        Expr::Antifield { stage, r, .. } => out.push_str(&format!("c{{{stage},{r}}}")),
        Expr::JetAntifield {
            stage,
            r,
            directions: ds,
            ..
        } => out.push_str(&format!("jet_c({stage}, {r}, {})", directions(ds))),
        // a leading minus only parses at the start of a sum
        Expr::Neg(inner, _) => {
            out.push('-');
            wrap(out, inner, level(inner) < 2 || level(inner) == 3);
        }
        Expr::Add(a, b, _) | Expr::Sub(a, b, _) => {
            render_expr_into(out, a);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            wrap(out, b, level(b) <= 1 || level(b) == 3);
        }
        Expr::Mul(a, b, _) => {
            wrap(out, a, level(a) < 2 || level(a) == 3);
            out.push('*');
            wrap(out, b, level(b) <= 3);
        }
        Expr::Pow(base, k, _) => {
            wrap(out, base, level(base) < 5);
            out.push_str(&format!("^{k}"));
        }
    }
}

pub fn render_expr(e: &Expr) -> String {
    let mut s = String::new();
    render_expr_into(&mut s, e);
    s
}

/// Canonical pretty-printer; its output re-parses to an equal tree.
pub fn render(ast: &SpecAst) -> String {
    let mut out = format!("base {}\n", ast.base);
    for f in &ast.fields {
        out.push_str(&format!("field {}\n", f.name));
    }
    out.push_str(&format!("operator {} {{\n", ast.operator.name));
    for eq in &ast.equations {
        out.push_str(&format!("  {} = {}\n", eq.name, render_expr(&eq.expr)));
    }
    out.push_str("}\n");
    for st in &ast.stages {
        out.push_str(&format!("stage {} {{\n", st.stage));
        for item in &st.items {
            match item {
                StageItem::Operator(eq) => {
                    out.push_str(&format!("  {} = {}\n", eq.name, render_expr(&eq.expr)))
                }
                StageItem::Correction(eq) => out.push_str(&format!(
                    "  correction {} = {}\n",
                    eq.name,
                    render_expr(&eq.expr)
                )),
            }
        }
        out.push_str("}\n");
    }
    out
}
