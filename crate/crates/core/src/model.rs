//! Potential families, the unit convention and per-state dimensionless frames.
//!
//! Every quantity in the crate is expressed with `hbar = m = 1` and unit
//! coupling, so the Hamiltonian is `-1/2 d²/dx² + |x|^b` (or a hard-walled
//! box). Dimensionless observables do not depend on these constants.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Fixed unit system shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitsConvention {
    pub hbar: f64,
    pub mass: f64,
    pub coupling: f64,
}

pub const UNITS: UnitsConvention = UnitsConvention {
    hbar: 1.0,
    mass: 1.0,
    coupling: 1.0,
};

/// Value reported for `x < 0` on hard-walled families. The eigensolver never
/// samples it: the wall is imposed as a Dirichlet boundary at `x = 0`.
pub const HARD_WALL: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `U = |x|^b` on the whole line.
    SymmetricPower,
    /// `U = x^b` for `x >= 0`, infinite wall for `x < 0`.
    HalfLinePower,
    /// `U = 0` on `[-A, A]`, infinite outside.
    SymmetricBox,
    /// `U = 0` on `[0, A]`, infinite outside.
    HalfLineBox,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::SymmetricPower,
        Family::HalfLinePower,
        Family::SymmetricBox,
        Family::HalfLineBox,
    ];

    pub fn is_power(self) -> bool {
        matches!(self, Family::SymmetricPower | Family::HalfLinePower)
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, Family::SymmetricPower | Family::SymmetricBox)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SymmetricPower => "symmetric-power",
            Family::HalfLinePower => "half-line-power",
            Family::SymmetricBox => "symmetric-box",
            Family::HalfLineBox => "half-line-box",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    family: Family,
    exponent: u32,
    half_width: f64,
}

/// Builds a power-law or box potential. `b` is ignored for box families.
pub fn make_potential(family: Family, b: i64) -> Result<PotentialSpec> {
    PotentialSpec::new(family, b)
}

impl PotentialSpec {
    pub fn new(family: Family, b: i64) -> Result<Self> {
        if family.is_power() {
            if b < 1 || b > u32::MAX as i64 {
                return Err(Error::InvalidExponent(b));
            }
            Ok(Self {
                family,
                exponent: b as u32,
                half_width: 1.0,
            })
        } else {
            Ok(Self {
                family,
                exponent: 0,
                half_width: 1.0,
            })
        }
    }

    pub fn symmetric_power(b: u32) -> Result<Self> {
        Self::new(Family::SymmetricPower, b as i64)
    }

    pub fn half_line_power(b: u32) -> Result<Self> {
        Self::new(Family::HalfLinePower, b as i64)
    }

    pub fn symmetric_box(half_width: f64) -> Result<Self> {
        Self::new(Family::SymmetricBox, 0)?.with_half_width(half_width)
    }

    pub fn half_line_box(width: f64) -> Result<Self> {
        Self::new(Family::HalfLineBox, 0)?.with_half_width(width)
    }

    /// Sets the wall position `A` of a box family.
    pub fn with_half_width(mut self, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidWidth(half_width));
        }
        self.half_width = half_width;
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Power-law exponent; `None` for box families.
    pub fn exponent(&self) -> Option<u32> {
        self.family.is_power().then_some(self.exponent)
    }

    /// Wall position for box families (`1` by default).
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn is_symmetric(&self) -> bool {
        self.family.is_symmetric()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match self.family {
            Family::SymmetricPower => powi(x.abs(), self.exponent),
            Family::HalfLinePower if x < 0.0 => HARD_WALL,
            Family::HalfLinePower => powi(x, self.exponent),
            Family::SymmetricBox if x.abs() <= self.half_width => 0.0,
            Family::HalfLineBox if (0.0..=self.half_width).contains(&x) => 0.0,
            Family::SymmetricBox | Family::HalfLineBox => HARD_WALL,
        }
    }

    /// Short label used in reports, e.g. `symmetric-power(b=3)`.
    pub fn label(&self) -> String {
        match self.exponent() {
            Some(b) => format!("{}(b={b})", self.family),
            None => format!("{}(A={})", self.family, self.half_width),
        }
    }
}

fn powi(x: f64, b: u32) -> f64 {
    if b <= i32::MAX as u32 {
        x.powi(b as i32)
    } else {
        x.powf(b as f64)
    }
}

fn check_energy(energy: f64) -> Result<()> {
    if energy > 0.0 && energy.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveEnergy(energy))
    }
}

/// Classical return point: `U(x_max) = E`, or the wall for box families.
pub fn turning_point(spec: &PotentialSpec, energy: f64) -> Result<f64> {
    check_energy(energy)?;
    Ok(match spec.exponent() {
        Some(1) => energy,
        Some(2) => energy.sqrt(),
        Some(b) => energy.powf(1.0 / b as f64),
        None => spec.half_width(),
    })
}

/// Scale factors that make position and momentum dimensionless for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub x_max: f64,
    pub p_max: f64,
    pub energy: f64,
}

impl Frame {
    /// Frame for a state whose kinetic energy peaks at `kinetic_max`.
    pub fn new(x_max: f64, kinetic_max: f64, energy: f64) -> Self {
        Frame {
            x_max,
            p_max: (2.0 * UNITS.mass * kinetic_max).sqrt(),
            energy,
        }
    }
}

pub fn dimensionless_frame(spec: &PotentialSpec, energy: f64) -> Result<Frame> {
    let x_max = turning_point(spec, energy)?;
    Ok(Frame::new(x_max, energy, energy))
}
