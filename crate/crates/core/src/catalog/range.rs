//! Quadratic constraints in `b` and finite unions of open intervals with
//! quadratic-surd endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::surd::QuadExtNumber;
use crate::rational::{fmt_q, q, Q};

/// `q2 b^2 + q1 b + q0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadPoly {
    pub q2: Q,
    pub q1: Q,
    pub q0: Q,
}

impl QuadPoly {
    pub fn new(q2: Q, q1: Q, q0: Q) -> Self {
        QuadPoly { q2, q1, q0 }
    }

    pub fn constant(c: Q) -> Self {
        QuadPoly::new(Q::zero(), Q::zero(), c)
    }

    pub fn eval(&self, b: &Q) -> Q {
        (&self.q2 * b + &self.q1) * b + &self.q0
    }

    /// Substitutes `b = a + s c` (coefficients of the polynomial in `c`).
    pub fn substitute_affine(&self, a: &Q, s: &Q) -> QuadPoly {
        QuadPoly {
            q2: &self.q2 * s * s,
            q1: (q(2) * &self.q2 * a + &self.q1) * s,
            q0: self.eval(a),
        }
    }

    /// Sign of the value at a surd point.
    pub fn sign_at(&self, x: &QuadExtNumber) -> i8 {
        // (p + r sqrt d)^2 = p^2 + r^2 d + 2 p r sqrt d
        let (p, r) = (x.p(), x.q());
        let d = Q::from_integer(x.d().clone());
        let rat = &self.q2 * (p * p + r * r * &d) + &self.q1 * p + &self.q0;
        let irr = &self.q2 * q(2) * p * r + &self.q1 * r;
        QuadExtNumber::with_sqrt_of(rat, irr, d).sign()
    }

    pub fn discriminant(&self) -> Q {
        &self.q1 * &self.q1 - q(4) * &self.q2 * &self.q0
    }

    /// Real roots in increasing order.
    pub fn roots(&self) -> Vec<QuadExtNumber> {
        if self.q2.is_zero() {
            if self.q1.is_zero() {
                return vec![];
            }
            return vec![QuadExtNumber::rational(-&self.q0 / &self.q1)];
        }
        let disc = self.discriminant();
        if disc.is_negative() {
            return vec![];
        }
        let centre = -&self.q1 / (q(2) * &self.q2);
        if disc.is_zero() {
            return vec![QuadExtNumber::rational(centre)];
        }
        let half_width = Q::from_integer(1.into()) / (q(2) * self.q2.abs());
        vec![
            QuadExtNumber::with_sqrt_of(centre.clone(), -half_width.clone(), disc.clone()),
            QuadExtNumber::with_sqrt_of(centre, half_width, disc),
        ]
    }

    /// `{b : q(b) > 0}`.
    pub fn positive_set(&self) -> BRange {
        let roots = self.roots();
        let lead = if self.q2.is_zero() { &self.q1 } else { &self.q2 };
        if lead.is_zero() {
            return if self.q0.is_positive() { BRange::everything() } else { BRange::empty() };
        }
        use Endpoint::*;
        let iv = |lo, hi| Interval { lo, hi };
        let mut out = match (self.q2.is_zero(), lead.is_positive(), roots.as_slice()) {
            (true, true, [r]) => vec![iv(Finite(r.clone()), PosInf)],
            (true, false, [r]) => vec![iv(NegInf, Finite(r.clone()))],
            (false, true, []) => vec![iv(NegInf, PosInf)],
            (false, true, [r]) => vec![iv(NegInf, Finite(r.clone())), iv(Finite(r.clone()), PosInf)],
            (false, true, [r1, r2]) => {
                vec![iv(NegInf, Finite(r1.clone())), iv(Finite(r2.clone()), PosInf)]
            }
            (false, false, [r1, r2]) => vec![iv(Finite(r1.clone()), Finite(r2.clone()))],
            _ => vec![],
        };
        out.retain(|i| i.lo < i.hi);
        BRange { intervals: out }
    }

    pub fn to_json(&self) -> Value {
        json!({"b2": fmt_q(&self.q2), "b1": fmt_q(&self.q1), "b0": fmt_q(&self.q0)})
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})b^2 + ({})b + ({})", fmt_q(&self.q2), fmt_q(&self.q1), fmt_q(&self.q0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInf,
    Finite(QuadExtNumber),
    PosInf,
}

impl Ord for Endpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        use Endpoint::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Endpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Endpoint {
    fn cmp_rational(&self, x: &Q) -> Ordering {
        match self {
            Endpoint::NegInf => Ordering::Less,
            Endpoint::PosInf => Ordering::Greater,
            Endpoint::Finite(e) => e.cmp_rational(x),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Endpoint::NegInf => Value::String("-inf".into()),
            Endpoint::PosInf => Value::String("+inf".into()),
            Endpoint::Finite(x) => x.to_json(),
        }
    }

    fn approx(&self) -> f64 {
        match self {
            Endpoint::NegInf => f64::NEG_INFINITY,
            Endpoint::PosInf => f64::INFINITY,
            Endpoint::Finite(x) => x.to_f64(),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::PosInf => f.write_str("+inf"),
            Endpoint::Finite(x) => x.fmt(f),
        }
    }
}

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Interval {
    pub fn finite(lo: QuadExtNumber, hi: QuadExtNumber) -> Self {
        Interval {
            lo: Endpoint::Finite(lo),
            hi: Endpoint::Finite(hi),
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lo.cmp_rational(x) == Ordering::Less && self.hi.cmp_rational(x) == Ordering::Greater
    }

    pub fn to_json(&self) -> Value {
        json!({"lo": self.lo.to_json(), "hi": self.hi.to_json()})
    }
}

/// Sorted, disjoint union of nonempty open intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BRange {
    intervals: Vec<Interval>,
}

impl BRange {
    pub fn empty() -> Self {
        BRange { intervals: vec![] }
    }

    pub fn everything() -> Self {
        BRange {
            intervals: vec![Interval {
                lo: Endpoint::NegInf,
                hi: Endpoint::PosInf,
            }],
        }
    }

    /// Builds a range from arbitrary open intervals, dropping empty ones.
    /// Overlapping intervals are not merged, so callers pass disjoint pieces.
    pub fn from_intervals(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|i| i.lo < i.hi);
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        debug_assert!(intervals.windows(2).all(|w| w[0].hi <= w[1].lo));
        BRange { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn intersect(&self, other: &BRange) -> BRange {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let lo = a.lo.clone().max(b.lo.clone());
                let hi = a.hi.clone().min(b.hi.clone());
                if lo < hi {
                    out.push(Interval { lo, hi });
                }
            }
        }
        BRange::from_intervals(out)
    }

    /// Finite endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<QuadExtNumber> {
        self.intervals
            .iter()
            .flat_map(|i| [&i.lo, &i.hi])
            .filter_map(|e| match e {
                Endpoint::Finite(x) => Some(x.clone()),
                _ => None,
            })
            .collect()
    }

    /// Up to `per_interval` rational points strictly inside each interval,
    /// found by bisecting toward dyadic rationals.
    pub fn sample_rationals(&self, per_interval: usize) -> Vec<Q> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            let (mut lo, mut hi) = (iv.lo.approx(), iv.hi.approx());
            if lo.is_infinite() && hi.is_infinite() {
                lo = -4.0;
                hi = 4.0;
            } else if lo.is_infinite() {
                lo = hi - 4.0;
            } else if hi.is_infinite() {
                hi = lo + 4.0;
            }
            let tol = (hi - lo) / (2 * (per_interval + 1)) as f64;
            for k in 1..=per_interval {
                let target = lo + (hi - lo) * k as f64 / (per_interval + 1) as f64;
                if let Some(x) = Self::dyadic_near(target, tol, iv) {
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    /// Dyadic rational with the smallest denominator within `tol` of `target`.
    fn dyadic_near(target: f64, tol: f64, iv: &Interval) -> Option<Q> {
        (0..48).find_map(|k| {
            let denom = 1i64 << k;
            let x = Q::new(((target * denom as f64).round() as i64).into(), denom.into());
            let close = (crate::rational::to_f64(&x) - target).abs() <= tol;
            (close && iv.contains(&x)).then_some(x)
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.intervals.iter().map(Interval::to_json).collect())
    }
}

impl fmt::Display for BRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|i| format!("({}, {})", i.lo, i.hi))
            .collect();
        f.write_str(&parts.join(" U "))
    }
}
