//! Slope `mu`, tilt slope `nu`, and the trichotomy for the tilted heart.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::charges::z_threefold;
use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionModel};
use crate::rational::{fmt_q, Q};

/// A rational slope or `+inf`; `+inf` is larger than every rational.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedSlope {
    Finite(Q),
    Infinite,
}

impl ExtendedSlope {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedSlope::Infinite)
    }
}

impl fmt::Display for ExtendedSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedSlope::Finite(x) => f.write_str(&fmt_q(x)),
            ExtendedSlope::Infinite => f.write_str("+inf"),
        }
    }
}

/// `ch1 . f*w^{dim-1}`, the degree of `ch1` against the polarisation.
pub fn ch1_degree(model: &ContractionModel, v: &ChernVector) -> Q {
    let fw = model.fw();
    model.triple(&v.ch1, &fw, &fw)
}

pub fn mu(model: &ContractionModel, v: &ChernVector) -> Result<ExtendedSlope> {
    model.check(v)?;
    if v.ch0.is_negative() {
        return Err(Error::RankPrecondition("nonnegative for mu"));
    }
    if v.ch0.is_zero() {
        return Ok(ExtendedSlope::Infinite);
    }
    Ok(ExtendedSlope::Finite(ch1_degree(model, v) / &v.ch0))
}

/// Tilt slope together with the imaginary part of the charge, which is kept
/// when the slope is infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiltSlope {
    pub slope: ExtendedSlope,
    pub im: Q,
}

pub fn nu(model: &ContractionModel, b: &Q, v: &ChernVector) -> Result<TiltSlope> {
    model.require_threefold()?;
    let denom = ch1_degree(model, v);
    if denom.is_negative() {
        return Err(Error::NegativeTiltDenominator(fmt_q(&denom)));
    }
    let im = z_threefold(model, b, v)?.im;
    let slope = if denom.is_zero() {
        ExtendedSlope::Infinite
    } else {
        ExtendedSlope::Finite(&im / &denom)
    };
    Ok(TiltSlope { slope, im })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trichotomy {
    /// `ch1 . (f*w)^2 > 0`
    CaseA,
    /// `ch1 . (f*w)^2 = 0` and `Im Z > 0`
    CaseB,
    /// both vanish and `Re Z < 0`
    CaseC,
    /// not the class of a nonzero object of the tilted heart
    Violation,
}

impl Trichotomy {
    pub fn label(self) -> &'static str {
        match self {
            Trichotomy::CaseA => "CaseA",
            Trichotomy::CaseB => "CaseB",
            Trichotomy::CaseC => "CaseC",
            Trichotomy::Violation => "Violation",
        }
    }
}

pub fn trichotomy(model: &ContractionModel, b: &Q, v: &ChernVector) -> Result<Trichotomy> {
    model.require_threefold()?;
    let deg = ch1_degree(model, v);
    if deg.is_positive() {
        return Ok(Trichotomy::CaseA);
    }
    if deg.is_negative() {
        return Ok(Trichotomy::Violation);
    }
    let z = z_threefold(model, b, v)?;
    Ok(if z.im.is_positive() {
        Trichotomy::CaseB
    } else if z.im.is_zero() && z.re.is_negative() {
        Trichotomy::CaseC
    } else {
        Trichotomy::Violation
    })
}
