//! Verify mode: checks a supplied tower `Δ^{r_k} = G^{r_k} + h^{r_k}` for an
//! arbitrary operator by expanding `δ_{k-1} Δ^{r_k}`.
//!
//! For `k = 0` the residual is `Σ Δ_a^{Λr} d_Λ E^a`; for `k ≥ 1` it is
//! `Σ Δ^{Λr_k}_{r_{k-1}} d_Λ Δ^{r_{k-1}} + δ_{k-2} h^{r_k}` (with `δ_{-1} = δ`),
//! up to the signs of the right action. A tower is accepted through stage `k`
//! iff `δ_k` is nilpotent.

use super::{OperatorSpec, StageData};
use crate::algebra::{GradedPoly, Var};
use crate::derivation::check_stage_operator;
use crate::error::ResolveError;

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationResult {
    pub stage: i32,
    /// Every residual is the zero polynomial.
    pub accepted: bool,
    /// `δ_{k-1} Δ^{r_k}` for each operator.
    pub residuals: Vec<GradedPoly>,
    /// Some `Δ^{r_k}` is zero, so the identity it states is empty.
    pub trivial_candidate: bool,
    /// The homology regularity condition is assumed in verify mode.
    pub regularity: &'static str,
}

/// Assembles a tower from per-stage operators (already including their
/// corrections) and corrections, checking grades and references but not
/// nilpotency.
pub fn build_tower(
    spec: &OperatorSpec,
    stages: &[(Vec<GradedPoly>, Vec<GradedPoly>)],
) -> Result<Vec<StageData>, ResolveError> {
    let mut diff = spec.kt_differential();
    let mut out = Vec::with_capacity(stages.len());
    for (k, (operators, corrections)) in stages.iter().enumerate() {
        let stage = k as i32;
        for (i, d) in operators.iter().enumerate() {
            check_stage_operator(stage, i + 1, d).map_err(ResolveError::GradeMismatch)?;
            for v in d.vars() {
                match v {
                    Var::Jet { field, .. } if *field as usize >= spec.fields.len() => {
                        return Err(ResolveError::GradeMismatch(format!(
                            "stage-{stage} operator {} uses undeclared field {}",
                            i + 1,
                            field + 1
                        )));
                    }
                    Var::Antifield { stage: s, r, .. } => {
                        if *s >= stage {
                            return Err(ResolveError::GradeMismatch(format!(
                                "stage-{stage} operator {} uses stage-{s} antifield",
                                i + 1
                            )));
                        }
                        if *r == 0 || *r as usize > diff.stage_size(*s) {
                            return Err(ResolveError::MissingLowerStage(format!(
                                "stage-{stage} operator {} uses c{{{s},{r}}} which no lower stage supplies",
                                i + 1
                            )));
                        }
                    }
                    _ => {}
                }
            }
        }
        diff = diff.extended_unchecked(stage, operators);
        let mut corrections = corrections.clone();
        corrections.resize(operators.len(), GradedPoly::zero());
        out.push(StageData {
            stage,
            base_dim: spec.base_dim,
            operators: operators.clone(),
            corrections,
            differential: diff.clone(),
            syzygies: Vec::new(),
        });
    }
    Ok(out)
}

/// Expands the stage-`k` identities of `tower` against `spec`.
pub fn verify_stage(
    spec: &OperatorSpec,
    tower: &[StageData],
    k: usize,
) -> Result<VerificationResult, ResolveError> {
    let data = tower.get(k).ok_or_else(|| {
        ResolveError::MissingLowerStage(format!("tower has {} stages, stage {k} requested", tower.len()))
    })?;
    if data.stage != k as i32 {
        return Err(ResolveError::MissingLowerStage(format!(
            "tower position {k} holds stage {}",
            data.stage
        )));
    }
    let lower = if k == 0 {
        spec.kt_differential()
    } else {
        tower[k - 1].differential.clone()
    };
    let mut residuals = Vec::with_capacity(data.count());
    for (i, d) in data.operators.iter().enumerate() {
        check_stage_operator(k as i32, i + 1, d).map_err(ResolveError::GradeMismatch)?;
        let r = lower.prolong_apply(d).map_err(|e| match e {
            crate::DerivationError::UnknownGenerator(g) => {
                ResolveError::MissingLowerStage(format!("generator {g} is not supplied below stage {k}"))
            }
            other => other.into(),
        })?;
        residuals.push(r);
    }
    Ok(VerificationResult {
        stage: k as i32,
        accepted: residuals.iter().all(GradedPoly::is_zero),
        trivial_candidate: data.operators.iter().any(GradedPoly::is_zero),
        residuals,
        regularity: "not checked",
    })
}

/// [`verify_stage`] for every stage of the tower.
pub fn verify_tower(
    spec: &OperatorSpec,
    tower: &[StageData],
) -> Result<Vec<VerificationResult>, ResolveError> {
    (0..tower.len()).map(|k| verify_stage(spec, tower, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, MultiIndex};
    use crate::derivation::antifield;

    fn jet(field: u32, dirs: &[u8]) -> GradedPoly {
        GradedPoly::var(Var::jet(field, MultiIndex::from_directions(dirs.iter().copied())))
    }

    fn c(stage: i32, r: u32, dirs: &[u8]) -> GradedPoly {
        antifield(stage, r, MultiIndex::from_directions(dirs.iter().copied()))
    }

    fn gradient2() -> OperatorSpec {
        OperatorSpec::new(
            "grad",
            2,
            vec!["phi".into()],
            vec!["E1".into(), "E2".into()],
            vec![jet(0, &[1]), jet(0, &[2])],
        )
        .unwrap()
    }

    #[test]
    fn curl_verifies_and_flipped_curl_does_not() {
        let spec = gradient2();
        let good = &c(-1, 2, &[1]) - &c(-1, 1, &[2]);
        let tower = build_tower(&spec, &[(vec![good], vec![])]).unwrap();
        let res = verify_stage(&spec, &tower, 0).unwrap();
        assert!(res.accepted);
        assert_eq!(res.regularity, "not checked");

        let bad = &c(-1, 2, &[1]) + &c(-1, 1, &[2]);
        let tower = build_tower(&spec, &[(vec![bad], vec![])]).unwrap();
        let res = verify_stage(&spec, &tower, 0).unwrap();
        assert!(!res.accepted);
        assert_eq!(res.residuals[0], jet(0, &[1, 2]).scale(&rat(2)));
    }

    #[test]
    fn correction_closes_first_stage() {
        let spec = gradient2();
        let e1 = jet(0, &[1]);
        let e2 = jet(0, &[2]);
        let d0 = &(&e2 * &c(-1, 1, &[])) - &(&e1 * &c(-1, 2, &[]));
        let phi = jet(0, &[]);
        let g = &phi * &c(0, 1, &[]);
        let h = -&(&phi * &(&c(-1, 1, &[]) * &c(-1, 2, &[])));
        let d1 = &g + &h;
        let tower = build_tower(&spec, &[(vec![d0], vec![]), (vec![d1], vec![h.clone()])]).unwrap();
        let all = verify_tower(&spec, &tower).unwrap();
        assert!(all.iter().all(|r| r.accepted));
        assert!(tower[1].differential.is_nilpotent().nilpotent);
        assert_eq!(tower[1].principal_parts(), vec![g.clone()]);

        // without h the stage-1 residual is nonzero
        let tower = build_tower(&spec, &[(tower[0].operators.clone(), vec![]), (vec![g], vec![])]).unwrap();
        assert!(!verify_stage(&spec, &tower, 1).unwrap().accepted);
    }

    #[test]
    fn zero_operator_is_trivial_candidate() {
        let spec = gradient2();
        let tower = build_tower(&spec, &[(vec![GradedPoly::zero()], vec![])]).unwrap();
        let res = verify_stage(&spec, &tower, 0).unwrap();
        assert!(res.accepted && res.trivial_candidate);
    }

    #[test]
    fn errors() {
        let spec = gradient2();
        assert!(matches!(
            verify_stage(&spec, &[], 0),
            Err(ResolveError::MissingLowerStage(_))
        ));
        // an even stage-0 operator
        let r = build_tower(&spec, &[(vec![jet(0, &[1])], vec![])]);
        assert!(matches!(r, Err(ResolveError::GradeMismatch(_))));
        // reference to a stage-0 antifield that does not exist
        let r = build_tower(&spec, &[(vec![c(-1, 1, &[])], vec![]), (vec![c(0, 2, &[])], vec![])]);
        assert!(matches!(r, Err(ResolveError::MissingLowerStage(_))));
    }
}
