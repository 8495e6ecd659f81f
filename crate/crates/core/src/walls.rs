//! Wall-crossing along the surface family `omega_t = f*w + eps t C`.
//!
//! `eps` is a formal positive infinitesimal, so "for sufficiently small eps"
//! becomes an exact lexicographic comparison of coefficient lists. Charges
//! are polynomials in `s = eps t`; evaluating at a fixed `t` turns them into
//! series in `eps` alone ([`EpsSeries`]), which plug straight into the
//! generic phase comparison of [`crate::charges`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::catalog::{simples, SimpleClass};
use crate::charges::{compare_phase_parts, ExactScalar};
use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionModel};
use crate::rational::{fmt_q, q, sign, Q};
use crate::sequiv::MultiplicityVector;

/// `a0 + a1 s + a2 s^2` with `s = eps t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpsPolynomial {
    pub a0: Q,
    pub a1: Q,
    pub a2: Q,
}

impl EpsPolynomial {
    pub fn new(a0: Q, a1: Q, a2: Q) -> Self {
        EpsPolynomial { a0, a1, a2 }
    }

    pub fn constant(a0: Q) -> Self {
        Self::new(a0, Q::zero(), Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero() && self.a2.is_zero()
    }

    /// Substitutes a value of `t`: coefficients of `1, eps, eps^2`.
    pub fn at(&self, t: &Q) -> EpsSeries {
        EpsSeries::new(vec![self.a0.clone(), &self.a1 * t, &self.a2 * t * t])
    }

    pub fn to_json(&self) -> Value {
        json!({"a0": fmt_q(&self.a0), "a1": fmt_q(&self.a1), "a2": fmt_q(&self.a2)})
    }
}

/// Finite series `sum c_k eps^k` in a positive infinitesimal `eps`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpsSeries(Vec<Q>);

impl EpsSeries {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        EpsSeries(coeffs)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    /// Lowest power of `eps` with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    fn mul(&self, other: &EpsSeries) -> EpsSeries {
        if self.0.is_empty() || other.0.is_empty() {
            return EpsSeries(vec![]);
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EpsSeries::new(out)
    }

    fn sub(&self, other: &EpsSeries) -> EpsSeries {
        let n = self.0.len().max(other.0.len());
        let z = Q::zero();
        EpsSeries::new(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) - other.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }
}

impl ExactScalar for EpsSeries {
    fn sign(&self) -> i8 {
        self.order().map_or(0, |k| sign(&self.0[k]))
    }

    fn cross(a_re: &Self, a_im: &Self, b_re: &Self, b_im: &Self) -> Self {
        a_re.mul(b_im).sub(&a_im.mul(b_re))
    }
}

impl fmt::Display for EpsSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_q(c),
                1 => format!("{}*eps", fmt_q(c)),
                _ => format!("{}*eps^{k}", fmt_q(c)),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `Z_{f*w + eps t C}(v)` as polynomials in `s = eps t`.
pub fn family_charge(model: &ContractionModel, v: &ChernVector) -> Result<(EpsPolynomial, EpsPolynomial)> {
    model.require_surface()?;
    model.check(v)?;
    let (fw, c) = (model.fw(), model.exc());
    let c_sq = model.triple(&c, &c, &[]);
    // f*w.C = 0, so the square of the polarisation is w + s^2 C^2
    let re = EpsPolynomial::new(
        -&v.ch2[0] + model.w() * &v.ch0 / q(2),
        Q::zero(),
        &c_sq * &v.ch0 / q(2),
    );
    let im = EpsPolynomial::new(model.triple(&v.ch1, &fw, &[]), model.triple(&v.ch1, &c, &[]), Q::zero());
    Ok((re, im))
}

/// Family charge evaluated at a fixed `t`.
pub fn family_charge_at(model: &ContractionModel, v: &ChernVector, t: &Q) -> Result<(EpsSeries, EpsSeries)> {
    let (re, im) = family_charge(model, v)?;
    Ok((re.at(t), im.at(t)))
}

/// Compares the phases of `va` and `vb` in `sigma_t`.
pub fn phase_order_family(model: &ContractionModel, va: &ChernVector, vb: &ChernVector, t: &Q) -> Result<Ordering> {
    let (ra, ia) = family_charge_at(model, va, t)?;
    let (rb, ib) = family_charge_at(model, vb, t)?;
    compare_phase_parts(&ra, &ia, &rb, &ib)
}

/// `Re_A Im_B - Im_A Re_B` as a polynomial in `s = eps t` (degree <= 4).
pub fn wall_function(model: &ContractionModel, va: &ChernVector, vb: &ChernVector) -> Result<Vec<Q>> {
    let (ra, ia) = family_charge(model, va)?;
    let (rb, ib) = family_charge(model, vb)?;
    // a polynomial in s is a series in eps at t = 1
    let one = q(1);
    let w = EpsSeries::cross(&ra.at(&one), &ia.at(&one), &rb.at(&one), &ib.at(&one));
    let mut coeffs = w.coeffs().to_vec();
    coeffs.resize(5, Q::zero());
    Ok(coeffs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallSolution {
    /// The wall function vanishes identically.
    AlwaysAligned,
    Roots(Vec<Q>),
}

impl WallSolution {
    pub fn to_json(&self) -> Value {
        match self {
            WallSolution::AlwaysAligned => json!({"always_aligned": true, "roots": []}),
            WallSolution::Roots(r) => json!({
                "always_aligned": false,
                "roots": r.iter().map(fmt_q).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Values of `t` where the two phases align at leading order in `eps`.
///
/// If the lowest nonzero coefficient of the wall function sits at `s^k`,
/// the leading term is `c_k eps^k t^k`: with `k = 0` it never vanishes,
/// with `k >= 1` it vanishes exactly at `t = 0`.
pub fn solve_wall_param(model: &ContractionModel, va: &ChernVector, vb: &ChernVector) -> Result<WallSolution> {
    let w = wall_function(model, va, vb)?;
    Ok(match w.iter().position(|c| !c.is_zero()) {
        None => WallSolution::AlwaysAligned,
        Some(0) => WallSolution::Roots(vec![]),
        Some(_) => WallSolution::Roots(vec![Q::zero()]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuliName {
    /// `O_x` for a point `x` on the curve: `O_C -> O_x -> O_C(-1)[1]`.
    OxOnC,
    /// `Lf^* O_0`: `O_C(-1)[1] -> Lf^*O_0 -> O_C`.
    LfO0,
    /// The split object `O_C + O_C(-1)[1]`.
    OcPlusOcm1,
}

impl ModuliName {
    pub const ALL: [ModuliName; 3] = [ModuliName::OxOnC, ModuliName::LfO0, ModuliName::OcPlusOcm1];

    pub fn label(self) -> &'static str {
        match self {
            ModuliName::OxOnC => "O_x_on_C",
            ModuliName::LfO0 => "Lf_O_0",
            ModuliName::OcPlusOcm1 => "OC_plus_OCm1",
        }
    }
}

impl fmt::Display for ModuliName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModuliName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModuliName::ALL
            .into_iter()
            .find(|n| n.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown moduli object {s:?} (expected O_x_on_C, Lf_O_0 or OC_plus_OCm1)")))
    }
}

/// A point-class object of the surface presented as an extension of two
/// catalog simples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliObject {
    pub name: ModuliName,
    pub sub: SimpleClass,
    pub quotient: SimpleClass,
    pub split: bool,
}

impl ModuliObject {
    pub fn build(model: &ContractionModel, name: ModuliName) -> Result<Self> {
        model.require_surface()?;
        let catalog = simples(model)?;
        let find = |n: &str| catalog.iter().find(|s| s.name == n).cloned().expect("surface catalog entry");
        let (oc, ocm1) = (find("O_C"), find("O_C(-1)[1]"));
        Ok(match name {
            ModuliName::OxOnC => ModuliObject { name, sub: oc, quotient: ocm1, split: false },
            ModuliName::LfO0 => ModuliObject { name, sub: ocm1, quotient: oc, split: false },
            ModuliName::OcPlusOcm1 => ModuliObject { name, sub: oc, quotient: ocm1, split: true },
        })
    }

    pub fn all(model: &ContractionModel) -> Result<Vec<Self>> {
        ModuliName::ALL.into_iter().map(|n| Self::build(model, n)).collect()
    }

    pub fn class(&self) -> ChernVector {
        &self.sub.shifted() + &self.quotient.shifted()
    }

    /// Jordan-Holder factors when the object is semistable at `t`.
    pub fn jordan_holder(&self, model: &ContractionModel, t: &Q) -> Result<Option<MultiplicityVector>> {
        Ok(match stability_verdict(model, self, t)? {
            Verdict::Stable => Some(MultiplicityVector::from_pairs([(crate::catalog::POINT, 1)])),
            Verdict::StrictlySemistable => Some(MultiplicityVector::from_pairs([
                (self.sub.name.as_str(), 1),
                (self.quotient.name.as_str(), 1),
            ])),
            Verdict::Unstable => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Stable => "Stable",
            Verdict::StrictlySemistable => "StrictlySemistable",
            Verdict::Unstable => "Unstable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Two-factor argument: with stable factors `A -> E -> B`, a non-split `E`
/// is stable iff `phi(A) < phi(B)`; a split `E` is semistable only when the
/// phases coincide.
pub fn stability_verdict(model: &ContractionModel, obj: &ModuliObject, t: &Q) -> Result<Verdict> {
    let ord = phase_order_family(model, &obj.sub.shifted(), &obj.quotient.shifted(), t)?;
    Ok(match (obj.split, ord) {
        (_, Ordering::Equal) => Verdict::StrictlySemistable,
        (true, _) => Verdict::Unstable,
        (false, Ordering::Less) => Verdict::Stable,
        (false, Ordering::Greater) => Verdict::Unstable,
    })
}
