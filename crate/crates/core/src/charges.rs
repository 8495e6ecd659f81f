//! Central charges and exact phase comparison.
//!
//! Phases live in `(0, 2]` and are never computed as real numbers: a charge
//! is placed in one of four sectors (open upper half plane, negative real
//! axis, open lower half plane, positive real axis) and two charges in the
//! same open sector are ordered by the sign of their cross product.

use std::cmp::Ordering;
use std::ops::Add;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::chern::twist;
use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionModel};
use crate::rational::{fmt_q, q, sign, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChargeValue {
    pub re: Q,
    pub im: Q,
}

impl ChargeValue {
    pub fn new(re: Q, im: Q) -> Self {
        ChargeValue { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_json(&self) -> Value {
        json!({"re": fmt_q(&self.re), "im": fmt_q(&self.im)})
    }

    pub fn phase_key(&self) -> Result<PhaseKey> {
        PhaseKey::new(self.clone())
    }
}

impl Add for ChargeValue {
    type Output = ChargeValue;
    fn add(self, rhs: ChargeValue) -> ChargeValue {
        ChargeValue {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

/// Values that can be compared exactly by sign: plain rationals and formal
/// series in a positive infinitesimal.
pub trait ExactScalar: Clone {
    fn sign(&self) -> i8;
    /// `a_re * b_im - a_im * b_re`
    fn cross(a_re: &Self, a_im: &Self, b_re: &Self, b_im: &Self) -> Self;
}

impl ExactScalar for Q {
    fn sign(&self) -> i8 {
        sign(self)
    }

    fn cross(a_re: &Q, a_im: &Q, b_re: &Q, b_im: &Q) -> Q {
        a_re * b_im - a_im * b_re
    }
}

/// Sector index of a nonzero charge: 0 for phases in (0,1), 1 for phase 1,
/// 2 for (1,2), 3 for phase 2.
pub fn sector<T: ExactScalar>(re: &T, im: &T) -> Result<u8> {
    match (im.sign(), re.sign()) {
        (1, _) => Ok(0),
        (0, -1) => Ok(1),
        (-1, _) => Ok(2),
        (0, 1) => Ok(3),
        _ => Err(Error::ZeroCharge),
    }
}

/// Orders the continuous phases of two charges given by their components.
pub fn compare_phase_parts<T: ExactScalar>(
    re1: &T,
    im1: &T,
    re2: &T,
    im2: &T,
) -> Result<Ordering> {
    let s1 = sector(re1, im1)?;
    let s2 = sector(re2, im2)?;
    if s1 != s2 {
        return Ok(s1.cmp(&s2));
    }
    if s1 == 1 || s1 == 3 {
        return Ok(Ordering::Equal);
    }
    // z2 counterclockwise of z1 <=> larger phase
    Ok(match T::cross(re1, im1, re2, im2).sign() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    })
}

pub fn compare_phase(z1: &ChargeValue, z2: &ChargeValue) -> Result<Ordering> {
    compare_phase_parts(&z1.re, &z1.im, &z2.re, &z2.im)
}

/// Totally ordered handle on the phase of a nonzero charge.
#[derive(Debug, Clone)]
pub struct PhaseKey {
    sector: u8,
    charge: ChargeValue,
}

impl PhaseKey {
    pub fn new(charge: ChargeValue) -> Result<Self> {
        let sector = sector(&charge.re, &charge.im)?;
        Ok(PhaseKey { sector, charge })
    }

    pub fn charge(&self) -> &ChargeValue {
        &self.charge
    }

    /// Exact phase when it is a multiple of 1/2, if any.
    pub fn exact_phase(&self) -> Option<Q> {
        let c = &self.charge;
        match self.sector {
            1 => Some(q(1)),
            3 => Some(q(2)),
            0 if c.re.is_zero() => Some(Q::new(1.into(), 2.into())),
            2 if c.re.is_zero() => Some(Q::new(3.into(), 2.into())),
            _ => None,
        }
    }
}

impl PartialEq for PhaseKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PhaseKey {}

impl PartialOrd for PhaseKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PhaseKey {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_phase(&self.charge, &other.charge).expect("phase keys hold nonzero charges")
    }
}

/// `Z_{f*w}(v) = (-ch2 + w/2 ch0) + i ch1.f*w` on the surface model.
pub fn z_surface(model: &ContractionModel, v: &ChernVector) -> Result<ChargeValue> {
    model.require_surface()?;
    model.check(v)?;
    let re = -&v.ch2[0] + model.w() * &v.ch0 / q(2);
    let im = model.triple(&v.ch1, &model.fw(), &[]);
    Ok(ChargeValue { re, im })
}

/// `Z_{bD, f*w}(v) = (-ch3^B + (f*w)^2.ch1 / 2) + i (f*w.ch2^B - w/6 ch0)`.
pub fn z_threefold(model: &ContractionModel, b: &Q, v: &ChernVector) -> Result<ChargeValue> {
    model.require_threefold()?;
    let tw = twist(model, v, b)?;
    let fw = model.fw();
    let re = -tw.ch3.as_ref().expect("3-fold class") + model.triple(&fw, &fw, &v.ch1) / q(2);
    let im = model.divisor_dot_ch2(&fw, &tw.ch2) - model.w() * &v.ch0 / q(6);
    Ok(ChargeValue { re, im })
}

/// Dispatches to the surface or 3-fold charge; `b` is ignored on the surface.
pub fn central_charge(model: &ContractionModel, b: &Q, v: &ChernVector) -> Result<ChargeValue> {
    if model.is_surface() {
        z_surface(model, v)
    } else {
        z_threefold(model, b, v)
    }
}
