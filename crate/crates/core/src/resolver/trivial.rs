//! Deciding whether a cycle `Φ` of antifield number `k + 1` is a boundary
//! `δ_{k-1} Ψ`.
//!
//! When the operator and the tower below stage `k` are linear with constant
//! coefficients and weight-homogeneous, `δ_{k-1}` preserves three gradings:
//! the `x`-monomial, the weight `w` (`w(y_Λ) = |Λ|`,
//! `w(c^a_Λ) = |Λ| + ord E^a`, `w(c^{r_j}_Λ) = |Λ| + w(Δ^{r_j})`) and the
//! count `u` of jet and antifield factors. Each graded piece of `Φ` then has a
//! finite candidate space for `Ψ` and exact linear algebra decides the
//! question. Otherwise only a bounded candidate space is searched and a
//! failed search is reported as unknown.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use super::{OperatorSpec, StageData};
use crate::algebra::{
    stage_antifield_number, Generator, GradedPoly, Monomial, MultiIndex, Parity, Rational, Var,
};
use crate::derivation::Derivation;
use crate::error::{DerivationError, ResolveError};
use crate::linalg::{Echelon, SparseVec};

/// Candidate spaces larger than this are not searched.
const CANDIDATE_CAP: usize = 5000;

#[derive(Clone, Debug, PartialEq)]
pub enum Triviality {
    /// `Φ = δ_{k-1} witness`.
    Trivial { witness: GradedPoly },
    /// No preimage exists (graded mode only).
    Nontrivial,
    /// The bounded search found no preimage.
    Unknown,
}

impl Triviality {
    pub fn is_trivial(&self) -> Option<bool> {
        match self {
            Triviality::Trivial { .. } => Some(true),
            Triviality::Nontrivial => Some(false),
            Triviality::Unknown => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Atom {
    var: Var,
    weight: u32,
    ant: u32,
    odd: bool,
}

struct Search {
    atoms: Vec<Atom>,
    ant: u32,
    parity: Parity,
    /// Exact `(weight, u)` in graded mode; otherwise `u <= max_u`.
    exact: Option<(u32, u32)>,
    max_u: u32,
}

impl Search {
    /// All monomials satisfying the constraints, or `None` past the cap.
    fn run(&self) -> Option<Vec<Monomial>> {
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        if self.dfs(0, &mut chosen, 0, 0, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    fn dfs(
        &self,
        start: usize,
        chosen: &mut Vec<usize>,
        weight: u32,
        ant: u32,
        out: &mut Vec<Monomial>,
    ) -> bool {
        let u = chosen.len() as u32;
        let parity_ok = Parity::from_bit(chosen.iter().filter(|&&i| self.atoms[i].odd).count() as u32)
            == self.parity;
        let done = match self.exact {
            Some((w, uu)) => weight == w && u == uu,
            None => u >= 1,
        };
        if done && ant == self.ant && parity_ok {
            let vars = chosen.iter().map(|&i| self.atoms[i].var.clone());
            if let Some((m, _)) = Monomial::from_factors(vars) {
                out.push(m);
                if out.len() > CANDIDATE_CAP {
                    return false;
                }
            }
        }
        let u_limit = self.exact.map(|(_, uu)| uu).unwrap_or(self.max_u);
        if u >= u_limit {
            return true;
        }
        for i in start..self.atoms.len() {
            let a = &self.atoms[i];
            if ant + a.ant > self.ant {
                continue;
            }
            if let Some((w, _)) = self.exact {
                if weight + a.weight > w {
                    continue;
                }
            }
            // odd atoms appear at most once
            let next = if a.odd { i + 1 } else { i };
            chosen.push(i);
            let ok = self.dfs(next, chosen, weight + a.weight, ant + a.ant, out);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Weights of generators; `None` if some component or operator is not
/// weight-homogeneous or not linear with constant coefficients.
fn generator_weights(spec: &OperatorSpec, tower: &[StageData], k: usize) -> Option<HashMap<Generator, u32>> {
    if !spec.is_linear_constant_coeff() {
        return None;
    }
    let mut w: HashMap<Generator, u32> = HashMap::new();
    for i in 0..spec.fields.len() {
        w.insert(Generator::Field(i as u32), 0);
    }
    fn assign(w: &mut HashMap<Generator, u32>, g: Generator, image: &GradedPoly) -> Option<()> {
        let mut weight = None;
        for (m, _) in image.terms() {
            let mut total = 0;
            let mut factors = 0;
            for v in m.factors() {
                let gv = v.generator()?;
                total += w.get(&gv)? + v.deriv().map(MultiIndex::order).unwrap_or(0) as u32;
                factors += 1;
            }
            if factors != 1 {
                return None;
            }
            match weight {
                None => weight = Some(total),
                Some(x) if x == total => {}
                Some(_) => return None,
            }
        }
        w.insert(g, weight.unwrap_or(0));
        Some(())
    }
    for (a, e) in spec.components.iter().enumerate() {
        assign(&mut w, Generator::Antifield { stage: -1, r: a as u32 + 1 }, e)?;
    }
    for stage in tower.iter().take(k) {
        for (r, d) in stage.operators.iter().enumerate() {
            assign(
                &mut w,
                Generator::Antifield {
                    stage: stage.stage,
                    r: r as u32 + 1,
                },
                d,
            )?;
        }
    }
    Some(w)
}

fn var_weight(v: &Var, weights: &HashMap<Generator, u32>) -> u32 {
    match v.generator() {
        None => 0,
        Some(g) => weights[&g] + v.deriv().map(MultiIndex::order).unwrap_or(0) as u32,
    }
}

/// Splits a monomial into its base-coordinate part and the rest.
fn split_x(m: &Monomial) -> (Monomial, Monomial) {
    let mut xs = Vec::new();
    let mut rest = Vec::new();
    for v in m.factors() {
        if matches!(v, Var::Base(_)) {
            xs.push(v.clone());
        } else {
            rest.push(v.clone());
        }
    }
    let x = Monomial::from_factors(xs).expect("even factors").0;
    let r = Monomial::from_factors(rest).expect("factors of a monomial").0;
    (x, r)
}

fn apply(diff: &Derivation, p: &GradedPoly, k: usize) -> Result<GradedPoly, ResolveError> {
    diff.prolong_apply(p).map_err(|e| match e {
        DerivationError::UnknownGenerator(g) => ResolveError::MissingLowerStage(format!(
            "generator {g} is not supplied below stage {k}"
        )),
        other => other.into(),
    })
}

fn to_sparse(p: &GradedPoly) -> SparseVec<Monomial> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Finds `Ψ` in the span of `candidates` with `δ Ψ = target`.
fn solve(
    diff: &Derivation,
    candidates: &[GradedPoly],
    target: &GradedPoly,
    k: usize,
) -> Result<Option<GradedPoly>, ResolveError> {
    let mut ech: Echelon<Monomial> = Echelon::new();
    for (j, c) in candidates.iter().enumerate() {
        ech.insert(to_sparse(&apply(diff, c, k)?), j);
    }
    Ok(ech.solve(&to_sparse(target)).map(|combo| {
        let mut w = GradedPoly::zero();
        for (j, c) in combo {
            w = &w + &candidates[j].scale(&c);
        }
        w
    }))
}

fn atoms_for(
    spec: &OperatorSpec,
    lower: &Derivation,
    k: usize,
    max_jet_order: usize,
    max_antifield_order: usize,
    weight_of: &dyn Fn(&Var) -> Option<u32>,
    max_weight: Option<u32>,
) -> Vec<Atom> {
    let n = spec.base_dim;
    let mut atoms = Vec::new();
    let mut push = |v: Var| {
        let weight = weight_of(&v).unwrap_or(0);
        if max_weight.map(|w| weight > w).unwrap_or(false) {
            return;
        }
        atoms.push(Atom {
            weight,
            ant: v.antifield_number(),
            odd: v.is_odd(),
            var: v,
        });
    };
    for field in 0..spec.fields.len() as u32 {
        for d in multi_indices(n, max_jet_order) {
            push(Var::jet(field, d));
        }
    }
    for stage in -1..k as i32 {
        if stage_antifield_number(stage) > k as u32 + 2 {
            break;
        }
        for r in 1..=lower.stage_size(stage) as u32 {
            for d in multi_indices(n, max_antifield_order) {
                push(Var::antifield(stage, r, d));
            }
        }
    }
    atoms
}

fn multi_indices(n: usize, max_order: usize) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::empty()];
    let mut frontier = vec![MultiIndex::empty()];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for m in &frontier {
            let from = m.max_direction().unwrap_or(1);
            for d in from..=n as u8 {
                next.push(m.raised(d));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Decides whether the stage-`k` cycle `Φ` (antifield number `k + 1`) is a
/// `δ_{k-1}` boundary. `tower` must supply stages `0..k`.
pub fn is_trivial_identity(
    spec: &OperatorSpec,
    tower: &[StageData],
    phi: &GradedPoly,
    k: usize,
) -> Result<Triviality, ResolveError> {
    if tower.len() < k {
        return Err(ResolveError::MissingLowerStage(format!(
            "stage {k} needs stages 0..{k}, tower has {}",
            tower.len()
        )));
    }
    let lower = if k == 0 {
        spec.kt_differential()
    } else {
        tower[k - 1].differential.clone()
    };
    if phi.is_zero() {
        return Ok(Triviality::Trivial {
            witness: GradedPoly::zero(),
        });
    }
    let grade = phi.grade();
    let (Some(ant), Some(parity)) = (grade.antifield_number.pure(), grade.parity.pure()) else {
        return Err(ResolveError::GradeMismatch(format!("chain {phi} is not homogeneous")));
    };
    if ant != k as u32 + 1 {
        return Err(ResolveError::GradeMismatch(format!(
            "stage-{k} chain must have antifield number {}: {phi}",
            k + 1
        )));
    }
    let boundary = apply(&lower, phi, k)?;
    if !boundary.is_zero() {
        return Err(ResolveError::NotACycle(format!("{boundary}")));
    }
    let psi_parity = parity.plus(Parity::Odd);
    let psi_ant = k as u32 + 2;

    if let Some(weights) = generator_weights(spec, tower, k) {
        // group Φ by (x-part, weight, u)
        let mut pieces: BTreeMap<(Monomial, u32, u32), GradedPoly> = BTreeMap::new();
        for (m, c) in phi.terms() {
            let (x, rest) = split_x(m);
            let w: u32 = rest.factors().map(|v| var_weight(v, &weights)).sum();
            let u = rest.degree();
            pieces
                .entry((x, w, u))
                .or_insert_with(GradedPoly::zero)
                .add_term(m.clone(), c.clone());
        }
        let mut witness = GradedPoly::zero();
        for ((x, w, u), piece) in pieces {
            let max_order = w as usize;
            let weight_of = |v: &Var| Some(var_weight(v, &weights));
            let atoms = atoms_for(spec, &lower, k, max_order, max_order, &weight_of, Some(w));
            let search = Search {
                atoms,
                ant: psi_ant,
                parity: psi_parity,
                exact: Some((w, u)),
                max_u: u,
            };
            let Some(monos) = search.run() else {
                return Ok(Triviality::Unknown);
            };
            let candidates: Vec<GradedPoly> = monos
                .iter()
                .filter_map(|m| x.mul(m).map(|(xm, _)| GradedPoly::term(xm, Rational::one())))
                .collect();
            match solve(&lower, &candidates, &piece, k)? {
                Some(p) => witness = &witness + &p,
                None => return Ok(Triviality::Nontrivial),
            }
        }
        return Ok(Triviality::Trivial { witness });
    }

    // bounded search
    let mut max_jet = 0;
    let mut max_anti = 0;
    let mut max_u = 0;
    let mut xs: Vec<Monomial> = vec![Monomial::one()];
    for (m, _) in phi.terms() {
        let (x, rest) = split_x(m);
        if !xs.contains(&x) {
            xs.push(x);
        }
        max_u = max_u.max(rest.degree());
        for v in rest.factors() {
            let o = v.deriv().map(MultiIndex::order).unwrap_or(0);
            match v {
                Var::Jet { .. } => max_jet = max_jet.max(o),
                _ => max_anti = max_anti.max(o),
            }
        }
    }
    let atoms = atoms_for(spec, &lower, k, max_jet, max_anti, &|_| None, None);
    let search = Search {
        atoms,
        ant: psi_ant,
        parity: psi_parity,
        exact: None,
        max_u: max_u + 1,
    };
    let Some(monos) = search.run() else {
        return Ok(Triviality::Unknown);
    };
    let mut candidates = Vec::new();
    for x in &xs {
        for m in &monos {
            if let Some((xm, _)) = x.mul(m) {
                candidates.push(GradedPoly::term(xm, Rational::one()));
            }
            if candidates.len() > CANDIDATE_CAP {
                return Ok(Triviality::Unknown);
            }
        }
    }
    Ok(match solve(&lower, &candidates, phi, k)? {
        Some(witness) => Triviality::Trivial { witness },
        None => Triviality::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::derivation::antifield;
    use crate::resolver::{noether_identities, resolve};

    fn jet(field: u32, dirs: &[u8]) -> GradedPoly {
        GradedPoly::var(Var::jet(field, MultiIndex::from_directions(dirs.iter().copied())))
    }

    fn c(stage: i32, r: u32, dirs: &[u8]) -> GradedPoly {
        antifield(stage, r, MultiIndex::from_directions(dirs.iter().copied()))
    }

    fn gradient(n: usize) -> OperatorSpec {
        OperatorSpec::new(
            "grad",
            n,
            vec!["phi".into()],
            (1..=n).map(|i| format!("E{i}")).collect(),
            (1..=n as u8).map(|i| jet(0, &[i])).collect(),
        )
        .unwrap()
    }

    #[test]
    fn antisymmetric_pair_is_trivial() {
        let spec = gradient(2);
        // T^{12} = -T^{21} = 1: Φ = E^2_(2)... written as d_Σ E^b c^a_Λ pairs
        let phi = &(&jet(0, &[2]) * &c(-1, 1, &[])) - &(&jet(0, &[1]) * &c(-1, 2, &[]));
        match is_trivial_identity(&spec, &[], &phi, 0).unwrap() {
            Triviality::Trivial { witness } => {
                let d = spec.kt_differential().prolong_apply(&witness).unwrap();
                assert_eq!(d, phi);
            }
            other => panic!("expected trivial, got {other:?}"),
        }
    }

    #[test]
    fn curl_is_nontrivial() {
        let spec = gradient(3);
        let stage = noether_identities(&spec).unwrap();
        for d in &stage.operators {
            assert_eq!(is_trivial_identity(&spec, &[], d, 0).unwrap(), Triviality::Nontrivial);
        }
    }

    #[test]
    fn second_stage_generator_is_nontrivial() {
        let spec = gradient(3);
        let report = resolve(&spec, 5).unwrap();
        let phi = &report.stages[1].operators[0];
        let t = is_trivial_identity(&spec, &report.stages, phi, 1).unwrap();
        assert_eq!(t, Triviality::Nontrivial);
    }

    #[test]
    fn zero_is_trivial_and_non_cycles_are_rejected() {
        let spec = gradient(2);
        assert!(matches!(
            is_trivial_identity(&spec, &[], &GradedPoly::zero(), 0).unwrap(),
            Triviality::Trivial { .. }
        ));
        let not_cycle = c(-1, 1, &[]);
        assert!(matches!(
            is_trivial_identity(&spec, &[], &not_cycle, 0),
            Err(ResolveError::NotACycle(_))
        ));
    }

    #[test]
    fn nonlinear_operator_uses_bounded_search() {
        // E1 = phi * phi_(1): the Koszul pair E^1 c^2 - E^2 c^1 is a boundary
        let e1 = &jet(0, &[]) * &jet(0, &[1]);
        let e2 = jet(0, &[2]);
        let spec = OperatorSpec::new(
            "nl",
            2,
            vec!["phi".into()],
            vec!["E1".into(), "E2".into()],
            vec![e1.clone(), e2.clone()],
        )
        .unwrap();
        let phi = &(&e2 * &c(-1, 1, &[])) - &(&e1 * &c(-1, 2, &[]));
        let t = is_trivial_identity(&spec, &[], &phi, 0).unwrap();
        assert_eq!(t.is_trivial(), Some(true));
        let phi = c(-1, 1, &[]).scale(&rat(0));
        assert_eq!(is_trivial_identity(&spec, &[], &phi, 0).unwrap().is_trivial(), Some(true));
    }
}
