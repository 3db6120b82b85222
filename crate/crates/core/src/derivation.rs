//! Vertical contact graded derivations and Koszul–Tate differentials.
//!
//! A [`Derivation`] is stored by its values `υ^A` on the generators `s^A`;
//! its action on a jet `s^A_Λ` is `d_Λ υ^A`. Koszul–Tate differentials act
//! from the right:
//!
//! ```text
//! δ(f f') = (-1)^{[δ][f']} δ(f) f' + f δ(f')
//! ```

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::algebra::{
    rat, stage_antifield_number, stage_parity, Generator, GradedPoly, MultiIndex, Parity, Rational,
    Var,
};
use crate::error::DerivationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    values: BTreeMap<Generator, GradedPoly>,
    parity: Parity,
    antifield_shift: i32,
    side: Side,
}

/// Outcome of [`Derivation::is_nilpotent`].
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotencyCheck {
    pub nilpotent: bool,
    /// Even derivations are never nilpotent.
    pub parity_obstruction: bool,
    /// First generator `A` with `υ(υ^A) != 0`, and that residual.
    pub witness: Option<(Generator, GradedPoly)>,
}

impl Derivation {
    /// Builds a derivation from its generator values. Generators absent from
    /// `values` are outside the universe; list them with a zero value to have
    /// the derivation annihilate them.
    pub fn new(
        values: BTreeMap<Generator, GradedPoly>,
        parity: Parity,
        antifield_shift: i32,
        side: Side,
    ) -> Result<Self, DerivationError> {
        for (g, v) in &values {
            if v.is_zero() {
                continue;
            }
            let expected = g.parity().plus(parity);
            if v.parity() != Some(expected) {
                return Err(DerivationError::GradeMismatch(format!(
                    "value on {g} is not of parity {expected}: {v}"
                )));
            }
        }
        Ok(Derivation {
            values,
            parity,
            antifield_shift,
            side,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn antifield_shift(&self) -> i32 {
        self.antifield_shift
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.values.keys()
    }

    pub fn value(&self, g: &Generator) -> Option<&GradedPoly> {
        self.values.get(g)
    }

    pub fn values(&self) -> &BTreeMap<Generator, GradedPoly> {
        &self.values
    }

    /// Highest antifield stage in the universe, `-2` if there is none.
    pub fn top_stage(&self) -> i32 {
        self.values
            .keys()
            .filter_map(|g| match g {
                Generator::Antifield { stage, .. } => Some(*stage),
                _ => None,
            })
            .max()
            .unwrap_or(-2)
    }

    /// Number of generators of a given antifield stage.
    pub fn stage_size(&self, stage: i32) -> usize {
        self.values
            .keys()
            .filter(|g| matches!(g, Generator::Antifield { stage: s, .. } if *s == stage))
            .count()
    }

    fn var_value(
        &self,
        v: &Var,
        cache: &mut HashMap<Var, GradedPoly>,
    ) -> Result<GradedPoly, DerivationError> {
        let g = match v.generator() {
            None => return Ok(GradedPoly::zero()),
            Some(g) => g,
        };
        if let Some(p) = cache.get(v) {
            return Ok(p.clone());
        }
        let base = self
            .values
            .get(&g)
            .ok_or(DerivationError::UnknownGenerator(g))?;
        let deriv = v.deriv().cloned().unwrap_or_default();
        let p = base.total_derivative_multi(&deriv);
        cache.insert(v.clone(), p.clone());
        Ok(p)
    }

    /// Applies the contact prolongation `Σ d_Λ υ^A ∂_A^Λ` to `f`.
    pub fn prolong_apply(&self, f: &GradedPoly) -> Result<GradedPoly, DerivationError> {
        let mut cache = HashMap::new();
        self.apply_cached(f, &mut cache)
    }

    fn apply_cached(
        &self,
        f: &GradedPoly,
        cache: &mut HashMap<Var, GradedPoly>,
    ) -> Result<GradedPoly, DerivationError> {
        let odd_derivation = self.parity.is_odd();
        let mut out = GradedPoly::zero();
        for (m, k) in f.terms() {
            let n_odd = m.odd_factors().len();
            for (idx, (v, e)) in m.even_factors().iter().enumerate() {
                let val = self.var_value(v, cache)?;
                if val.is_zero() {
                    continue;
                }
                let mut coeff = k * rat(i64::from(*e));
                if self.side == Side::Right && odd_derivation && n_odd % 2 == 1 {
                    coeff = -coeff;
                }
                let prefix = GradedPoly::term(m.even_only_without(idx), coeff);
                let piece = (&prefix * &val).mul_monomial(&m.odd_only(), &Rational::one());
                out = out + piece;
            }
            for (j, v) in m.odd_factors().iter().enumerate() {
                let val = self.var_value(v, cache)?;
                if val.is_zero() {
                    continue;
                }
                let swaps = match self.side {
                    Side::Right => n_odd - j - 1,
                    Side::Left => j,
                };
                let mut coeff = k.clone();
                if odd_derivation && swaps % 2 == 1 {
                    coeff = -coeff;
                }
                let (prefix, suffix) = m.odd_split(j);
                let piece = (&GradedPoly::term(prefix, coeff) * &val)
                    .mul_monomial(&suffix, &Rational::one());
                out = out + piece;
            }
        }
        Ok(out)
    }

    /// Checks `υ(υ^A) = 0` for every generator; even derivations fail outright.
    pub fn is_nilpotent(&self) -> NilpotencyCheck {
        if !self.parity.is_odd() {
            return NilpotencyCheck {
                nilpotent: false,
                parity_obstruction: true,
                witness: None,
            };
        }
        let mut cache = HashMap::new();
        for (g, v) in &self.values {
            let residual = match self.apply_cached(v, &mut cache) {
                Ok(r) => r,
                Err(DerivationError::UnknownGenerator(_)) => {
                    // a value outside the universe cannot be closed
                    return NilpotencyCheck {
                        nilpotent: false,
                        parity_obstruction: false,
                        witness: Some((*g, v.clone())),
                    };
                }
                Err(_) => unreachable!("application only fails on unknown generators"),
            };
            if !residual.is_zero() {
                return NilpotencyCheck {
                    nilpotent: false,
                    parity_obstruction: false,
                    witness: Some((*g, residual)),
                };
            }
        }
        NilpotencyCheck {
            nilpotent: true,
            parity_obstruction: false,
            witness: None,
        }
    }

    /// Adds stage-`stage` generators `c^{r}` with `δ(c^r) = deltas[r-1]`
    /// without any grade or nilpotency checks.
    pub fn extended_unchecked(&self, stage: i32, deltas: &[GradedPoly]) -> Derivation {
        let mut out = self.clone();
        for (i, d) in deltas.iter().enumerate() {
            out.values.insert(
                Generator::Antifield {
                    stage,
                    r: i as u32 + 1,
                },
                d.clone(),
            );
        }
        out
    }
}

/// The Koszul–Tate differential `δ = ←∂_a E^a` on the ring with `n_fields`
/// fields and one stage-`-1` antifield per component.
pub fn build_kt_differential(
    n_fields: usize,
    components: &[GradedPoly],
) -> Result<Derivation, DerivationError> {
    let mut values = BTreeMap::new();
    for i in 0..n_fields {
        values.insert(Generator::Field(i as u32), GradedPoly::zero());
    }
    for (a, e) in components.iter().enumerate() {
        if e.parity() != Some(Parity::Even) {
            return Err(DerivationError::OddComponent {
                index: a + 1,
                poly: e.clone(),
            });
        }
        if e.has_antifields() {
            return Err(DerivationError::GradeMismatch(format!(
                "operator component {} contains antifields",
                a + 1
            )));
        }
        values.insert(
            Generator::Antifield {
                stage: -1,
                r: a as u32 + 1,
            },
            e.clone(),
        );
    }
    Derivation::new(values, Parity::Odd, -1, Side::Right)
}

/// Checks that `delta` can be the image of a stage-`stage` antifield.
pub(crate) fn check_stage_operator(
    stage: i32,
    r: usize,
    delta: &GradedPoly,
) -> Result<(), String> {
    if delta.is_zero() {
        return Ok(());
    }
    let ant = stage_antifield_number(stage) - 1;
    let parity = stage_parity(stage).plus(Parity::Odd);
    let g = delta.grade();
    if g.antifield_number.pure() != Some(ant) || g.parity.pure() != Some(parity) {
        return Err(format!(
            "stage-{stage} operator {r} must have antifield number {ant} and parity {parity}: {delta}"
        ));
    }
    Ok(())
}

/// Extends a nilpotent right-acting differential by stage-`stage` generators
/// `c^{r_k} ↦ Δ^{r_k}`.
pub fn extend_differential(
    prev: &Derivation,
    deltas: &[GradedPoly],
    stage: i32,
) -> Result<Derivation, DerivationError> {
    if prev.side != Side::Right || !prev.parity.is_odd() {
        return Err(DerivationError::GradeMismatch(
            "only odd right-acting differentials can be extended".into(),
        ));
    }
    if prev.stage_size(stage) > 0 {
        return Err(DerivationError::GradeMismatch(format!(
            "stage {stage} generators already present"
        )));
    }
    for (i, d) in deltas.iter().enumerate() {
        check_stage_operator(stage, i + 1, d).map_err(DerivationError::GradeMismatch)?;
        for v in d.vars() {
            if let Some(g) = v.generator() {
                if prev.value(&g).is_none() {
                    return Err(DerivationError::UnknownGenerator(g));
                }
            }
        }
    }
    let check = prev.is_nilpotent();
    if let Some((generator, residual)) = check.witness {
        return Err(DerivationError::NotNilpotentInput {
            generator,
            residual,
        });
    }
    Ok(prev.extended_unchecked(stage, deltas))
}

/// `c^{r_k}_Λ` as a polynomial.
pub fn antifield(stage: i32, r: u32, deriv: MultiIndex) -> GradedPoly {
    GradedPoly::var(Var::antifield(stage, r, deriv))
}
