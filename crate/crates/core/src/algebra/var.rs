use std::fmt;

use super::MultiIndex;

/// Grassmann parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Self {
        if bit % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// Parity of the stage-`k` antifields `c^{r_k}`; stage `-1` holds the `c^a`.
pub fn stage_parity(stage: i32) -> Parity {
    Parity::from_bit(stage.rem_euclid(2) as u32)
}

/// Antifield number of the stage-`k` antifields.
pub fn stage_antifield_number(stage: i32) -> u32 {
    if stage < 0 {
        1
    } else {
        stage as u32 + 2
    }
}

/// A generating variable of the jet/antifield ring in the single chart.
///
/// The derived order (base coordinates, then jets, then antifields by
/// `(stage, r, Λ)`) is the canonical order used to sort odd factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Base coordinate `x^λ`, `λ` in `1..=n`.
    Base(u8),
    /// Jet coordinate `y^i_Λ`; `field` is the 0-based field index.
    Jet { field: u32, deriv: MultiIndex },
    /// Antifield `c^{r_k}_Λ`; stage `-1` are the `c^a`, `r` is 1-based.
    Antifield { stage: i32, r: u32, deriv: MultiIndex },
}

impl Var {
    pub fn jet(field: u32, deriv: MultiIndex) -> Self {
        Var::Jet { field, deriv }
    }

    pub fn antifield(stage: i32, r: u32, deriv: MultiIndex) -> Self {
        Var::Antifield { stage, r, deriv }
    }

    pub fn parity(&self) -> Parity {
        match self {
            Var::Base(_) | Var::Jet { .. } => Parity::Even,
            Var::Antifield { stage, .. } => stage_parity(*stage),
        }
    }

    pub fn antifield_number(&self) -> u32 {
        match self {
            Var::Base(_) | Var::Jet { .. } => 0,
            Var::Antifield { stage, .. } => stage_antifield_number(*stage),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity().is_odd()
    }

    /// The jet multi-index, if this is a jet or antifield.
    pub fn deriv(&self) -> Option<&MultiIndex> {
        match self {
            Var::Base(_) => None,
            Var::Jet { deriv, .. } | Var::Antifield { deriv, .. } => Some(deriv),
        }
    }

    /// The generator `s^A` this variable is a jet of.
    pub fn generator(&self) -> Option<Generator> {
        match self {
            Var::Base(_) => None,
            Var::Jet { field, .. } => Some(Generator::Field(*field)),
            Var::Antifield { stage, r, .. } => Some(Generator::Antifield {
                stage: *stage,
                r: *r,
            }),
        }
    }

    /// `s^A_{λ+Λ}` for a jet or antifield; `None` for base coordinates.
    pub fn raised(&self, direction: u8) -> Option<Var> {
        match self {
            Var::Base(_) => None,
            Var::Jet { field, deriv } => Some(Var::Jet {
                field: *field,
                deriv: deriv.raised(direction),
            }),
            Var::Antifield { stage, r, deriv } => Some(Var::Antifield {
                stage: *stage,
                r: *r,
                deriv: deriv.raised(direction),
            }),
        }
    }

    pub fn render(&self, names: &dyn FieldNames) -> String {
        match self {
            Var::Base(l) => format!("x{l}"),
            Var::Jet { field, deriv } => {
                let name = names.field_name(*field);
                if deriv.is_empty() {
                    name
                } else {
                    format!("{name}_{deriv}")
                }
            }
            Var::Antifield { stage, r, deriv } => format!("c{{{stage},{r}}}_{deriv}"),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&DefaultNames))
    }
}

/// A local basis element `s^A` with empty multi-index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Field(u32),
    Antifield { stage: i32, r: u32 },
}

impl Generator {
    pub fn var(&self, deriv: MultiIndex) -> Var {
        match *self {
            Generator::Field(field) => Var::Jet { field, deriv },
            Generator::Antifield { stage, r } => Var::Antifield { stage, r, deriv },
        }
    }

    pub fn parity(&self) -> Parity {
        self.var(MultiIndex::empty()).parity()
    }

    pub fn antifield_number(&self) -> u32 {
        self.var(MultiIndex::empty()).antifield_number()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Field(i) => write!(f, "y{}", i + 1),
            Generator::Antifield { stage, r } => write!(f, "c{{{stage},{r}}}"),
        }
    }
}

/// Supplies display names for field indices.
pub trait FieldNames {
    fn field_name(&self, field: u32) -> String;
}

/// Fields render as `y1, y2, ...`.
pub struct DefaultNames;

impl FieldNames for DefaultNames {
    fn field_name(&self, field: u32) -> String {
        format!("y{}", field + 1)
    }
}

impl<S: AsRef<str>> FieldNames for [S] {
    fn field_name(&self, field: u32) -> String {
        self.get(field as usize)
            .map(|s| s.as_ref().to_string())
            .unwrap_or_else(|| DefaultNames.field_name(field))
    }
}

impl<S: AsRef<str>> FieldNames for Vec<S> {
    fn field_name(&self, field: u32) -> String {
        self.as_slice().field_name(field)
    }
}
