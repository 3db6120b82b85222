//! Expansion of parsed documents into canonical polynomials.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::ast::{Equation, Expr, SpecAst, Span, StageItem};
use super::DslError;
use crate::algebra::{GradedPoly, MultiIndex, Rational, Var};
use crate::derivation::check_stage_operator;
use crate::resolver::OperatorSpec;

/// An operator together with candidate stages for verify mode.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyBundle {
    pub spec: OperatorSpec,
    /// Per stage: operator names and source positions.
    pub names: Vec<Vec<(String, Span)>>,
    /// Per stage: full operators `G + h` and the corrections `h`.
    pub stages: Vec<(Vec<GradedPoly>, Vec<GradedPoly>)>,
}

struct Scope<'a> {
    base: u32,
    fields: &'a HashMap<String, u32>,
    /// `None` in operator components; otherwise the current stage and the
    /// number of generators of each lower stage, indexed by `stage + 1`.
    antifields: Option<(i64, &'a [usize])>,
    component: &'a str,
}

impl Scope<'_> {
    fn direction(&self, d: u32, span: Span) -> Result<u8, DslError> {
        if d == 0 || d > self.base {
            let message = if d == 0 {
                "direction 0 is invalid; directions start at 1".to_string()
            } else {
                format!("direction {d} exceeds base {}", self.base)
            };
            return Err(DslError::Semantic { span, message });
        }
        Ok(d as u8)
    }

    fn field(&self, name: &str, span: Span) -> Result<u32, DslError> {
        self.fields.get(name).copied().ok_or_else(|| DslError::Semantic {
            span,
            message: format!("undeclared field `{name}`"),
        })
    }

    fn antifield(&self, stage: i64, r: u32, span: Span) -> Result<(), DslError> {
        let Some((current, counts)) = self.antifields else {
            return Err(DslError::OddAtomInOperator {
                span,
                component: self.component.to_string(),
            });
        };
        if stage < -1 || stage >= current {
            return Err(DslError::Semantic {
                span,
                message: format!(
                    "antifield of stage {stage} cannot appear in a stage-{current} operator"
                ),
            });
        }
        let available = counts[(stage + 1) as usize];
        if r == 0 || r as usize > available {
            return Err(DslError::Semantic {
                span,
                message: format!("c{{{stage},{r}}} does not exist: stage {stage} has {available} generators"),
            });
        }
        Ok(())
    }

    fn lower(&self, e: &Expr) -> Result<GradedPoly, DslError> {
        Ok(match e {
            Expr::Num { num, den, .. } => {
                let n = BigInt::from(num.clone());
                let d = den.clone().map(BigInt::from).unwrap_or_else(|| 1.into());
                GradedPoly::constant(Rational::new(n, d))
            }
            Expr::Base { index, span } => {
                let d = self.direction(*index, *span)?;
                GradedPoly::var(Var::Base(d))
            }
            Expr::Field { name, span } => {
                GradedPoly::var(Var::jet(self.field(name, *span)?, MultiIndex::empty()))
            }
            Expr::Deriv {
                direction,
                expr,
                span,
            } => {
                let d = self.direction(*direction, *span)?;
                self.lower(expr)?.total_derivative(d)
            }
            Expr::Jet {
                field,
                directions,
                span,
            } => {
                let f = self.field(field, *span)?;
                GradedPoly::var(Var::jet(f, self.multi_index(directions, *span)?))
            }
            Expr::Antifield { stage, r, span } => {
                self.antifield(*stage, *r, *span)?;
                GradedPoly::var(Var::antifield(*stage as i32, *r, MultiIndex::empty()))
            }
            Expr::JetAntifield {
                stage,
                r,
                directions,
                span,
            } => {
                self.antifield(*stage, *r, *span)?;
                let m = self.multi_index(directions, *span)?;
                GradedPoly::var(Var::antifield(*stage as i32, *r, m))
            }
            Expr::Neg(a, _) => -&self.lower(a)?,
            Expr::Add(a, b, _) => &self.lower(a)? + &self.lower(b)?,
            Expr::Sub(a, b, _) => &self.lower(a)? - &self.lower(b)?,
            Expr::Mul(a, b, _) => &self.lower(a)? * &self.lower(b)?,
            Expr::Pow(a, k, _) => self.lower(a)?.pow(*k),
        })
    }

    fn multi_index(&self, ds: &[u32], span: Span) -> Result<MultiIndex, DslError> {
        let dirs = ds
            .iter()
            .map(|&d| self.direction(d, span))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MultiIndex::from_directions(dirs))
    }
}

fn field_table(ast: &SpecAst) -> Result<HashMap<String, u32>, DslError> {
    let mut fields = HashMap::new();
    for (i, f) in ast.fields.iter().enumerate() {
        if fields.insert(f.name.clone(), i as u32).is_some() {
            return Err(DslError::Semantic {
                span: f.span,
                message: format!("field `{}` declared twice", f.name),
            });
        }
    }
    Ok(fields)
}

fn check_unique<'a>(eqs: impl Iterator<Item = &'a Equation>, what: &str) -> Result<(), DslError> {
    let mut seen = HashMap::new();
    for eq in eqs {
        if seen.insert(eq.name.clone(), ()).is_some() {
            return Err(DslError::Semantic {
                span: eq.span,
                message: format!("{what} `{}` defined twice", eq.name),
            });
        }
    }
    Ok(())
}

/// Expands the operator components. Stage blocks are ignored.
pub fn lower(ast: &SpecAst) -> Result<OperatorSpec, DslError> {
    let fields = field_table(ast)?;
    check_unique(ast.equations.iter(), "component")?;
    let mut components = Vec::with_capacity(ast.equations.len());
    for eq in &ast.equations {
        let scope = Scope {
            base: ast.base,
            fields: &fields,
            antifields: None,
            component: &eq.name,
        };
        components.push(scope.lower(&eq.expr)?);
    }
    OperatorSpec::new(
        ast.operator.name.clone(),
        ast.base as usize,
        ast.fields.iter().map(|f| f.name.clone()).collect(),
        ast.equations.iter().map(|e| e.name.clone()).collect(),
        components,
    )
    .map_err(|e| DslError::Semantic {
        span: ast.operator.span,
        message: e.to_string(),
    })
}

/// Expands the operator and every stage block.
pub fn lower_bundle(ast: &SpecAst) -> Result<VerifyBundle, DslError> {
    let spec = lower(ast)?;
    let fields = field_table(ast)?;
    let mut counts = vec![spec.components.len()];
    let mut names = Vec::new();
    let mut stages = Vec::new();
    for (k, block) in ast.stages.iter().enumerate() {
        if block.stage as usize != k {
            return Err(DslError::Semantic {
                span: block.span,
                message: format!("expected stage {k}, found stage {}", block.stage),
            });
        }
        let ops: Vec<&Equation> = block
            .items
            .iter()
            .filter_map(|i| match i {
                StageItem::Operator(e) => Some(e),
                StageItem::Correction(_) => None,
            })
            .collect();
        let corrs: Vec<&Equation> = block
            .items
            .iter()
            .filter_map(|i| match i {
                StageItem::Correction(e) => Some(e),
                StageItem::Operator(_) => None,
            })
            .collect();
        check_unique(ops.iter().copied(), "operator")?;
        check_unique(corrs.iter().copied(), "correction")?;

        let mut operators = Vec::with_capacity(ops.len());
        let mut corrections = vec![GradedPoly::zero(); ops.len()];
        for eq in &ops {
            let scope = Scope {
                base: ast.base,
                fields: &fields,
                antifields: Some((k as i64, &counts)),
                component: &eq.name,
            };
            operators.push(scope.lower(&eq.expr)?);
        }
        for eq in &corrs {
            let Some(idx) = ops.iter().position(|o| o.name == eq.name) else {
                return Err(DslError::Semantic {
                    span: eq.span,
                    message: format!("correction for unknown operator `{}`", eq.name),
                });
            };
            let scope = Scope {
                base: ast.base,
                fields: &fields,
                antifields: Some((k as i64, &counts)),
                component: &eq.name,
            };
            let h = scope.lower(&eq.expr)?;
            operators[idx] = &operators[idx] + &h;
            corrections[idx] = h;
        }
        for (i, (eq, d)) in ops.iter().zip(&operators).enumerate() {
            check_stage_operator(k as i32, i + 1, d).map_err(|message| DslError::Semantic {
                span: eq.span,
                message,
            })?;
        }
        counts.push(operators.len());
        names.push(ops.iter().map(|e| (e.name.clone(), e.span)).collect());
        stages.push((operators, corrections));
    }
    Ok(VerifyBundle {
        spec,
        names,
        stages,
    })
}
