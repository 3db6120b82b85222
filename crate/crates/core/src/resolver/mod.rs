//! Stage-by-stage Koszul–Tate towers.
//!
//! Compute mode handles linear operators with constant coefficients: the
//! identities of each stage are the syzygies of the symbol matrix of the
//! previous stage, and the corrections `h` are zero. Verify mode checks a
//! user-supplied tower for an arbitrary operator.

mod trivial;
mod verify;

use crate::algebra::{
    stage_antifield_number, FieldNames, GradedPoly, Monomial, MultiIndex, Var,
};
use crate::derivation::{build_kt_differential, extend_differential, Derivation};
use crate::error::ResolveError;
use crate::syzygy::{
    groebner_basis, oracle_syzygies, syzygies, DPoly, DSymbolMatrix, Exponent,
};

pub use trivial::{is_trivial_identity, Triviality};
pub use verify::{build_tower, verify_stage, verify_tower, VerificationResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearityClass {
    LinearConstantCoeff,
    General,
}

impl LinearityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            LinearityClass::LinearConstantCoeff => "linear_constant_coeff",
            LinearityClass::General => "general",
        }
    }
}

/// A differential operator `E^a` on `fields.len()` even fields over an
/// `n`-dimensional base.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub name: String,
    pub base_dim: usize,
    pub fields: Vec<String>,
    pub component_names: Vec<String>,
    pub components: Vec<GradedPoly>,
    linearity: LinearityClass,
}

impl OperatorSpec {
    /// Fails if a component contains antifields or is not even.
    pub fn new(
        name: impl Into<String>,
        base_dim: usize,
        fields: Vec<String>,
        component_names: Vec<String>,
        components: Vec<GradedPoly>,
    ) -> Result<Self, ResolveError> {
        assert_eq!(component_names.len(), components.len());
        // validates grades
        build_kt_differential(fields.len(), &components)?;
        let linearity = classify(&components);
        Ok(OperatorSpec {
            name: name.into(),
            base_dim,
            fields,
            component_names,
            components,
            linearity,
        })
    }

    pub fn linearity_class(&self) -> LinearityClass {
        self.linearity
    }

    pub fn is_linear_constant_coeff(&self) -> bool {
        self.linearity == LinearityClass::LinearConstantCoeff
    }

    /// `δ` with `δ c^a = E^a`.
    pub fn kt_differential(&self) -> Derivation {
        build_kt_differential(self.fields.len(), &self.components)
            .expect("components validated on construction")
    }

    pub fn names(&self) -> &dyn FieldNames {
        &self.fields
    }
}

/// Linear with constant coefficients iff every term is a single jet to the
/// first power with a rational coefficient.
pub fn classify(components: &[GradedPoly]) -> LinearityClass {
    let ok = components.iter().all(|e| {
        e.terms().all(|(m, _)| match (m.even_factors(), m.odd_factors()) {
            ([(Var::Jet { .. }, 1)], []) => true,
            _ => false,
        })
    });
    if ok {
        LinearityClass::LinearConstantCoeff
    } else {
        LinearityClass::General
    }
}

/// Symbol matrix of polynomials that are linear with constant coefficients in
/// jets of the variables selected by `column`.
fn symbol_matrix<F>(
    polys: &[GradedPoly],
    nvars: usize,
    ncols: usize,
    column: F,
) -> Result<DSymbolMatrix, ResolveError>
where
    F: Fn(&Var) -> Option<usize>,
{
    let mut m = DSymbolMatrix::zeros(nvars, polys.len(), ncols);
    for (a, p) in polys.iter().enumerate() {
        let mut row = vec![DPoly::zero(nvars); ncols];
        for (mono, c) in p.terms() {
            let v = single_var(mono).ok_or(ResolveError::NotLinearConstantCoeff)?;
            let i = column(v).ok_or(ResolveError::NotLinearConstantCoeff)?;
            let deriv = v.deriv().expect("jet or antifield");
            row[i].add_term(Exponent(deriv.counts(nvars)), c.clone());
        }
        for (i, e) in row.into_iter().enumerate() {
            m.set(a, i, e);
        }
    }
    Ok(m)
}

fn single_var(m: &Monomial) -> Option<&Var> {
    match (m.even_factors(), m.odd_factors()) {
        ([(v, 1)], []) => Some(v),
        ([], [v]) => Some(v),
        _ => None,
    }
}

/// `(a, i)` entry is the symbol acting on field `i` in `E^a`.
pub fn to_dsymbol_matrix(spec: &OperatorSpec) -> Result<DSymbolMatrix, ResolveError> {
    if !spec.is_linear_constant_coeff() {
        return Err(ResolveError::NotLinearConstantCoeff);
    }
    symbol_matrix(&spec.components, spec.base_dim, spec.fields.len(), |v| match v {
        Var::Jet { field, .. } => Some(*field as usize),
        _ => None,
    })
}

/// `Σ_i row[i](D) s^i` with `s^i = var(i, Λ)` the jets of the column generators.
pub fn expand_row<F>(row: &[DPoly], var: F) -> GradedPoly
where
    F: Fn(usize, MultiIndex) -> Var,
{
    let mut out = GradedPoly::zero();
    for (i, p) in row.iter().enumerate() {
        for (e, c) in p.terms() {
            let v = var(i, MultiIndex::from_counts(&e.0));
            out.add_term(Monomial::var(v), c.clone());
        }
    }
    out
}

/// Operator `Σ σ_r^Λ c^{stage, r}_Λ` built from a syzygy of the stage-`stage`
/// presentation.
pub fn operator_from_syzygy(sigma: &[DPoly], stage: i32) -> GradedPoly {
    expand_row(sigma, |r, deriv| Var::antifield(stage, r as u32 + 1, deriv))
}

/// One stage of a tower: the images `Δ^{r_k}` of the stage-`k` antifields.
#[derive(Clone, Debug, PartialEq)]
pub struct StageData {
    pub stage: i32,
    pub base_dim: usize,
    /// Full operators `Δ^{r_k} = G^{r_k} + h^{r_k}`.
    pub operators: Vec<GradedPoly>,
    /// The `h` parts; zero in compute mode.
    pub corrections: Vec<GradedPoly>,
    /// `δ_k`, the differential extended through this stage.
    pub differential: Derivation,
    /// Coefficient vectors of the operators over the previous presentation
    /// (compute mode only).
    pub syzygies: Vec<Vec<DPoly>>,
}

impl StageData {
    pub fn count(&self) -> usize {
        self.operators.len()
    }

    /// `G^{r_k}`: the terms containing a stage-`(k-1)` antifield.
    pub fn principal_parts(&self) -> Vec<GradedPoly> {
        let lower = self.stage - 1;
        self.operators
            .iter()
            .map(|d| {
                d.filter_terms(|m| {
                    m.vars()
                        .any(|v| matches!(v, Var::Antifield { stage, .. } if *stage == lower))
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    /// `H_1(δ) = 0`.
    NotDegenerate,
    /// The stage-`n_max` identities have no further relations.
    Irreducible,
    StageLimitReached,
    /// Every `E^a` vanishes; the tower stops after the tautological stage 0.
    FreeModuleDegenerate,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::NotDegenerate => "not degenerate",
            Termination::Irreducible => "irreducible at N_max",
            Termination::StageLimitReached => "stage-limit reached",
            Termination::FreeModuleDegenerate => "free-module degenerate case",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    /// Every stage's generators annihilate the previous presentation and each
    /// `δ_k` is nilpotent.
    pub exactness: bool,
    pub oracle_degree: Option<u32>,
    /// Outcome of the degree-bounded oracle comparison, if requested.
    pub oracle_passed: Option<bool>,
    /// Generator sets are minimal (homogeneous presentations only).
    pub minimal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionReport {
    pub operator: String,
    pub base_dim: usize,
    pub fields: Vec<String>,
    pub degenerate: bool,
    pub stages: Vec<StageData>,
    pub n_max: Option<usize>,
    pub termination: Termination,
    pub certificates: Certificates,
}

impl ResolutionReport {
    pub fn counts(&self) -> Vec<usize> {
        self.stages.iter().map(StageData::count).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolveOptions {
    pub max_stage: usize,
    pub oracle_degree: Option<u32>,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            max_stage: 10,
            oracle_degree: None,
        }
    }
}

/// Symbol matrix of `stage`'s operators over the antifields one stage below.
pub fn stage_presentation(stage: &StageData) -> DSymbolMatrix {
    let lower = stage.stage - 1;
    let ncols = stage.differential.stage_size(lower);
    symbol_matrix(&stage.operators, stage.base_dim, ncols, |v| match v {
        Var::Antifield { stage, r, .. } if *stage == lower => Some(*r as usize - 1),
        _ => None,
    })
    .expect("compute-mode operators are linear with constant coefficients")
}

/// The complete stage-0 identities `Δ^r = Σ Δ_a^{Λr} c^a_Λ`.
pub fn noether_identities(spec: &OperatorSpec) -> Result<StageData, ResolveError> {
    let m = to_dsymbol_matrix(spec)?;
    let syz = syzygies(&m);
    make_stage(&spec.kt_differential(), syz.generators, 0, spec.base_dim)
}

fn make_stage(
    prev: &Derivation,
    syz: Vec<Vec<DPoly>>,
    stage: i32,
    base_dim: usize,
) -> Result<StageData, ResolveError> {
    let operators: Vec<GradedPoly> = syz
        .iter()
        .map(|s| operator_from_syzygy(s, stage - 1))
        .collect();
    let differential = extend_differential(prev, &operators, stage)?;
    let check = differential.is_nilpotent();
    if let Some((_, residual)) = check.witness {
        return Err(ResolveError::NilpotencyViolated { stage, residual });
    }
    Ok(StageData {
        stage,
        base_dim,
        corrections: vec![GradedPoly::zero(); operators.len()],
        operators,
        differential,
        syzygies: syz,
    })
}

/// The stage after `prev`: syzygies of the presentation of `prev`'s
/// operators, with zero corrections.
pub fn next_stage(prev: &StageData) -> Result<StageData, ResolveError> {
    let syz = syzygies(&stage_presentation(prev));
    make_stage(&prev.differential, syz.generators, prev.stage + 1, prev.base_dim)
}

pub fn resolve(spec: &OperatorSpec, max_stage: usize) -> Result<ResolutionReport, ResolveError> {
    resolve_with(
        spec,
        ResolveOptions {
            max_stage,
            oracle_degree: None,
        },
    )
}

pub fn resolve_with(
    spec: &OperatorSpec,
    options: ResolveOptions,
) -> Result<ResolutionReport, ResolveError> {
    if !spec.is_linear_constant_coeff() {
        return Err(ResolveError::NotLinearConstantCoeff);
    }
    let mut certificates = Certificates {
        exactness: true,
        oracle_degree: options.oracle_degree,
        oracle_passed: None,
        minimal: true,
    };
    let mut report = ResolutionReport {
        operator: spec.name.clone(),
        base_dim: spec.base_dim,
        fields: spec.fields.clone(),
        degenerate: false,
        stages: Vec::new(),
        n_max: None,
        termination: Termination::NotDegenerate,
        certificates: certificates.clone(),
    };

    let m0 = to_dsymbol_matrix(spec)?;
    let all_zero = !spec.components.is_empty()
        && spec.components.iter().all(GradedPoly::is_zero);

    let mut stages: Vec<StageData> = Vec::new();
    let mut matrices: Vec<DSymbolMatrix> = vec![m0];
    let mut prev_diff = spec.kt_differential();
    loop {
        let k = stages.len();
        let m = &matrices[k];
        let syz = syzygies(m);
        certificates.minimal &= syz.minimal;
        if syz.generators.iter().any(|s| !m.annihilated_by(s)) {
            certificates.exactness = false;
        }
        if let Some(d) = options.oracle_degree {
            let ok = oracle_agrees(m, &syz.generators, d);
            certificates.oracle_passed = Some(certificates.oracle_passed.unwrap_or(true) && ok);
        }
        if syz.is_empty() {
            report.n_max = k.checked_sub(1);
            report.termination = if k == 0 {
                Termination::NotDegenerate
            } else {
                Termination::Irreducible
            };
            break;
        }
        if k > options.max_stage {
            report.termination = Termination::StageLimitReached;
            break;
        }
        let stage = make_stage(&prev_diff, syz.generators, k as i32, spec.base_dim)?;
        prev_diff = stage.differential.clone();
        if all_zero {
            stages.push(stage);
            report.n_max = Some(0);
            report.termination = Termination::FreeModuleDegenerate;
            break;
        }
        matrices.push(stage_presentation(&stage));
        stages.push(stage);
    }
    report.degenerate = !stages.is_empty();
    report.stages = stages;
    report.certificates = certificates;
    Ok(report)
}

/// Every oracle syzygy of degree `<= d` lies in the module of `computed`, and
/// every computed syzygy of degree `<= d` lies in the module of the oracle's.
pub fn oracle_agrees(m: &DSymbolMatrix, computed: &[Vec<DPoly>], d: u32) -> bool {
    let oracle = oracle_syzygies(m, d);
    let n = m.nvars();
    let r = m.nrows();
    let ours = groebner_basis(computed, r, n);
    if !oracle.iter().all(|s| ours.contains(s)) {
        return false;
    }
    let theirs = groebner_basis(&oracle, r, n);
    computed
        .iter()
        .filter(|s| s.iter().filter_map(DPoly::degree).max().unwrap_or(0) <= d)
        .all(|s| theirs.contains(s))
}

/// Ant of the stage-`k` operators, `k + 1`.
pub fn operator_antifield_number(stage: i32) -> u32 {
    stage_antifield_number(stage) - 1
}
