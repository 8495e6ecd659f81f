//! Simple objects of the perverse heart supported on fibres, their twisted
//! `ch3` polynomials, and the set of `b` making every one of them positive.
//!
//! Types I-IV are produced through the pushforward oracles of
//! [`crate::chern`]. Type V lives on the singular quadric cone, so its
//! vectors are taken as published and cross-checked against the twist oracle.

mod range;
mod surd;

pub use range::{BRange, Endpoint, Interval, QuadPoly};
pub use surd::QuadExtNumber;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::chern::{
    grr_push_divisor, grr_push_exceptional_curve, grr_push_fiber_line, twist, DivisorSheafData,
    ExceptionalSurface,
};
use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionKind, ContractionModel};
use crate::rational::{q, qf, Q};

pub const POINT: &str = "point";

/// Class of a simple object: `chern` is the unshifted Chern vector and the
/// heart object is `(sheaf)[shift]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleClass {
    pub name: String,
    pub kind: ContractionKind,
    pub chern: ChernVector,
    pub shift: u32,
}

impl SimpleClass {
    fn new(name: &str, kind: ContractionKind, chern: ChernVector, shift: u32) -> Self {
        SimpleClass {
            name: name.to_string(),
            kind,
            chern,
            shift,
        }
    }

    /// Class of the heart object, i.e. with the shift applied.
    pub fn shifted(&self) -> ChernVector {
        self.chern.shift(self.shift as i64)
    }

    pub fn is_point(&self) -> bool {
        self.name == POINT
    }

    pub fn to_json(&self, model: &ContractionModel) -> Value {
        json!({
            "name": self.name,
            "shift": self.shift,
            "chern": model.class_to_json(&self.chern),
            "class": model.class_to_json(&self.shifted()),
        })
    }
}

fn divisor_class(model: &ContractionModel, d: Q, ch2: Vec<Q>, ch3: Q) -> ChernVector {
    let mut v = model.zero_class();
    v.ch1[crate::lattice::EXC] = d;
    v.ch2 = ch2;
    v.ch3 = Some(ch3);
    v
}

/// Printed X-level vectors on the quadric cone:
/// `ch(i_*O_D(-1))`, `ch(i_*S_5)`, `ch(i_*O_D(-C))`.
pub fn type_v_base_vectors(model: &ContractionModel) -> Result<[ChernVector; 3]> {
    if model.kind() != ContractionKind::TV {
        return Err(Error::ModelMismatch {
            expected: "a type V model",
            got: model.kind(),
        });
    }
    Ok([
        divisor_class(model, q(1), vec![q(-1), q(0)], qf(1, 3)),
        divisor_class(model, q(3), vec![q(-1), q(0)], q(-1)),
        divisor_class(model, q(1), vec![q(0), q(0)], qf(-1, 6)),
    ])
}

/// The finite catalog of simple classes, followed by the point class.
pub fn simples(model: &ContractionModel) -> Result<Vec<SimpleClass>> {
    use ContractionKind::*;
    let kind = model.kind();
    let mut out = Vec::new();
    match kind {
        SurfaceBlowdown => {
            out.push(SimpleClass::new("O_C", kind, grr_push_exceptional_curve(model, 0)?, 0));
            out.push(SimpleClass::new("O_C(-1)[1]", kind, grr_push_exceptional_curve(model, -1)?, 1));
        }
        TI => {
            out.push(SimpleClass::new("O_L(-2)[1]", kind, grr_push_fiber_line(model, -2)?, 1));
            out.push(SimpleClass::new("O_L(-1)", kind, grr_push_fiber_line(model, -1)?, 0));
        }
        TII | TIV => {
            let s = ExceptionalSurface::of(model)?;
            let o = DivisorSheafData::structure_sheaf(&s);
            let line = |a: i64| DivisorSheafData::line_bundle(&s, vec![q(a)]);
            // Euler sequence: 0 -> Omega -> O(-1)^3 -> O -> 0
            let omega = line(-1).combine(3, &o, -1);
            let omega_m1 = omega.tensor_line(&s, &[q(-1)]);
            out.push(SimpleClass::new("O_P2(-3)[2]", kind, grr_push_divisor(model, &line(-3))?, 2));
            if kind == TII {
                out.push(SimpleClass::new("Omega_P2(-1)[1]", kind, grr_push_divisor(model, &omega_m1)?, 1));
                out.push(SimpleClass::new("O_P2(-2)", kind, grr_push_divisor(model, &line(-2))?, 0));
            } else {
                // 0 -> S_4 -> Omega^3 -> O(-1) -> 0
                let s4 = omega.combine(3, &line(-1), -1);
                let s4_m1 = s4.tensor_line(&s, &[q(-1)]);
                out.push(SimpleClass::new("S_4(-1)[1]", kind, grr_push_divisor(model, &s4_m1)?, 1));
                out.push(SimpleClass::new("Omega_P2(-1)", kind, grr_push_divisor(model, &omega_m1)?, 0));
            }
        }
        TIII => {
            let s = ExceptionalSurface::of(model)?;
            let o = DivisorSheafData::structure_sheaf(&s);
            let line = |a: i64, b: i64| DivisorSheafData::line_bundle(&s, vec![q(a), q(b)]);
            // 0 -> S_3 -> O(-1,0)^2 + O(0,-1)^2 -> O -> 0
            let s3 = line(-1, 0).combine(2, &line(0, -1), 2).combine(1, &o, -1);
            let s3_twisted = s3.tensor_line(&s, &[q(-1), q(-1)]);
            out.push(SimpleClass::new("O(-2,-2)[2]", kind, grr_push_divisor(model, &line(-2, -2))?, 2));
            out.push(SimpleClass::new("S_3(-1,-1)[1]", kind, grr_push_divisor(model, &s3_twisted)?, 1));
            out.push(SimpleClass::new("O(-1,-2)", kind, grr_push_divisor(model, &line(-1, -2))?, 0));
            out.push(SimpleClass::new("O(-2,-1)", kind, grr_push_divisor(model, &line(-2, -1))?, 0));
        }
        TV => {
            out.push(SimpleClass::new("O_D(-2)[2]", kind, divisor_class(model, q(1), vec![q(-3), q(0)], qf(7, 3)), 2));
            out.push(SimpleClass::new("S_5(-1)[1]", kind, divisor_class(model, q(3), vec![q(-7), q(0)], q(3)), 1));
            out.push(SimpleClass::new("O_D(-3C)", kind, divisor_class(model, q(1), vec![q(-2), q(0)], qf(5, 6)), 0));
        }
    }
    out.push(SimpleClass::new(POINT, kind, model.point_class(), 0));
    Ok(out)
}

/// `(-1)^shift ch3^{bD}` of a catalog entry as a polynomial in `b`.
pub fn twisted_ch3_poly(model: &ContractionModel, s: &SimpleClass) -> Result<QuadPoly> {
    model.require_threefold()?;
    let v = s.shifted();
    if !v.ch0.is_zero() {
        return Err(Error::RankPrecondition("zero for catalog classes"));
    }
    let d = model.exc();
    let top = v.ch3.clone().expect("3-fold class");
    let lin = -model.divisor_dot_ch2(&d, &v.ch2);
    let quad = model.triple(&d, &d, &v.ch1) / q(2);
    Ok(QuadPoly::new(quad, lin, top))
}

/// Top-degree positivity constraints for every non-point catalog entry.
pub fn constraints(model: &ContractionModel) -> Result<Vec<(SimpleClass, QuadPoly)>> {
    simples(model)?
        .into_iter()
        .filter(|s| !s.is_point())
        .map(|s| twisted_ch3_poly(model, &s).map(|p| (s, p)))
        .collect()
}

/// `{b : ch3^{bD}(s) > 0 for every simple s}`.
pub fn solve_b_range(model: &ContractionModel) -> Result<BRange> {
    model.require_threefold()?;
    Ok(constraints(model)?
        .iter()
        .fold(BRange::everything(), |acc, (_, p)| acc.intersect(&p.positive_set())))
}

/// Twisted top degree of a class at `b` (untwisted `ch2` on the surface).
pub fn twisted_top(model: &ContractionModel, v: &ChernVector, b: &Q) -> Result<Q> {
    Ok(twist(model, v, b)?.top().clone())
}

fn surd(p: Q, q_: Q, d: i64) -> QuadExtNumber {
    QuadExtNumber::new(p, q_, d)
}

/// Literature values of the valid `b`-ranges.
pub fn published_b_range(kind: ContractionKind) -> Option<BRange> {
    use ContractionKind::*;
    let iv = |lo: QuadExtNumber, hi: QuadExtNumber| Interval::finite(lo, hi);
    let ranges = match kind {
        SurfaceBlowdown => return None,
        TI => vec![iv(QuadExtNumber::rational(qf(1, 2)), QuadExtNumber::rational(qf(3, 2)))],
        TII => vec![iv(surd(q(2), qf(-1, 3), 6), surd(q(2), qf(1, 3), 6))],
        TIII | TV => vec![
            iv(surd(qf(7, 6), qf(-1, 6), 13), surd(q(1), qf(-1, 6), 6)),
            iv(surd(q(1), qf(1, 6), 6), surd(qf(7, 6), qf(1, 6), 13)),
        ],
        TIV => vec![iv(surd(qf(3, 4), qf(1, 12), 15), surd(qf(4, 5), qf(1, 6), 6))],
    };
    Some(BRange::from_intervals(ranges))
}

/// Derived range next to the literature value, with any disagreement spelled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BRangeReport {
    pub kind: ContractionKind,
    pub derived: BRange,
    pub published: Option<BRange>,
    pub constraints: Vec<(String, QuadPoly)>,
    pub discrepancies: Vec<String>,
}

impl BRangeReport {
    pub fn has_discrepancy(&self) -> bool {
        !self.discrepancies.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let constraints: Vec<Value> = self
            .constraints
            .iter()
            .map(|(name, p)| json!({"simple": name, "poly": p.to_json(), "positive_on": p.positive_set().to_json()}))
            .collect();
        json!({
            "kind": self.kind.label(),
            "intervals": self.derived.to_json(),
            "published": self.published.as_ref().map(BRange::to_json),
            "constraints": constraints,
            "discrepancy": !self.discrepancies.is_empty(),
            "notes": self.discrepancies,
        })
    }
}

pub fn b_range_report(model: &ContractionModel) -> Result<BRangeReport> {
    let derived = solve_b_range(model)?;
    let published = published_b_range(model.kind());
    let constraints = constraints(model)?
        .into_iter()
        .map(|(s, p)| (s.name, p))
        .collect();
    let mut discrepancies = Vec::new();
    if let Some(pubr) = &published {
        if &derived != pubr {
            for p_iv in pubr.intervals() {
                let matching = derived
                    .intervals()
                    .iter()
                    .find(|d| d.lo == p_iv.lo || d.hi == p_iv.hi);
                match matching {
                    Some(d) => {
                        if d.lo != p_iv.lo {
                            discrepancies.push(format!(
                                "lower endpoint: derived {} (~{}), published {} (~{})",
                                d.lo,
                                approx(&d.lo),
                                p_iv.lo,
                                approx(&p_iv.lo)
                            ));
                        }
                        if d.hi != p_iv.hi {
                            discrepancies.push(format!(
                                "upper endpoint: derived {} (~{}), published {} (~{})",
                                d.hi,
                                approx(&d.hi),
                                p_iv.hi,
                                approx(&p_iv.hi)
                            ));
                        }
                    }
                    None => discrepancies.push(format!(
                        "published interval ({}, {}) has no matching derived interval",
                        p_iv.lo, p_iv.hi
                    )),
                }
            }
            for d in derived.intervals() {
                if !pubr.intervals().iter().any(|p| p.lo == d.lo || p.hi == d.hi) {
                    discrepancies.push(format!(
                        "derived interval ({}, {}) (~({}, {})) is not among the published ones",
                        d.lo,
                        d.hi,
                        approx(&d.lo),
                        approx(&d.hi)
                    ));
                }
            }
        }
    }
    Ok(BRangeReport {
        kind: model.kind(),
        derived,
        published,
        constraints,
        discrepancies,
    })
}

fn approx(e: &Endpoint) -> String {
    match e {
        Endpoint::Finite(x) => crate::rational::approx_decimal(x.to_f64(), 12),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_model;

    fn model(kind: ContractionKind) -> ContractionModel {
        make_model(kind, q(1)).unwrap()
    }

    fn names(kind: ContractionKind) -> Vec<String> {
        simples(&model(kind)).unwrap().into_iter().map(|s| s.name).collect()
    }

    #[test]
    fn type_v_catalog_matches_twisted_base_vectors() {
        let m = model(ContractionKind::TV);
        let cat = simples(&m).unwrap();
        let base = type_v_base_vectors(&m).unwrap();
        // O_D(-2) = O_D(-1)(D), S_5(-1) = S_5(D), O_D(-3C) = O_D(-C)(D): all e^{D}
        for (s, b) in cat.iter().zip(base.iter()) {
            assert_eq!(twist(&m, b, &q(-1)).unwrap(), s.chern, "{}", s.name);
        }
        assert_eq!(cat[0].shift, 2);
        assert_eq!(cat[1].shift, 1);
        assert_eq!(cat[2].shift, 0);
        assert!(cat[3].is_point());
    }

    #[test]
    fn catalog_names() {
        assert_eq!(names(ContractionKind::SurfaceBlowdown), ["O_C", "O_C(-1)[1]", "point"]);
        assert_eq!(names(ContractionKind::TI), ["O_L(-2)[1]", "O_L(-1)", "point"]);
        assert_eq!(names(ContractionKind::TIII).len(), 5);
    }

    #[test]
    fn type_i_and_surface_vectors() {
        let m = model(ContractionKind::TI);
        let cat = simples(&m).unwrap();
        assert_eq!(cat[0].chern.ch3, Some(qf(-3, 2)));
        assert_eq!(cat[1].chern.ch3, Some(qf(-1, 2)));
        let s = model(ContractionKind::SurfaceBlowdown);
        let cat = simples(&s).unwrap();
        assert_eq!(cat[0].chern.ch2, vec![qf(1, 2)]);
        assert_eq!(cat[1].chern.ch2, vec![qf(-1, 2)]);
        assert_eq!(&cat[0].shifted() + &cat[1].shifted(), s.point_class());
    }

    #[test]
    fn type_v_polynomials() {
        let m = model(ContractionKind::TV);
        let cat = simples(&m).unwrap();
        let polys: Vec<_> = cat[..3].iter().map(|s| twisted_ch3_poly(&m, s).unwrap()).collect();
        assert_eq!(polys[0], QuadPoly::new(q(1), q(-3), qf(7, 3)));
        assert_eq!(polys[1], QuadPoly::new(q(-3), q(7), q(-3)));
        assert_eq!(polys[2], QuadPoly::new(q(1), q(-2), qf(5, 6)));
        assert_eq!(twisted_ch3_poly(&m, &cat[3]).unwrap(), QuadPoly::constant(q(1)));
    }

    #[test]
    fn type_ii_polynomial() {
        let m = model(ContractionKind::TII);
        let cat = simples(&m).unwrap();
        let p = twisted_ch3_poly(&m, &cat[1]).unwrap();
        assert_eq!(p, QuadPoly::new(q(-1), q(4), qf(-10, 3)));
        assert_eq!(
            p.roots(),
            vec![QuadExtNumber::new(q(2), qf(-1, 3), 6), QuadExtNumber::new(q(2), qf(1, 3), 6)]
        );
    }

    #[test]
    fn ranges_match_published_except_type_iv() {
        for kind in [ContractionKind::TI, ContractionKind::TII, ContractionKind::TIII, ContractionKind::TV] {
            let r = b_range_report(&model(kind)).unwrap();
            assert!(!r.has_discrepancy(), "{kind}: {:?}", r.discrepancies);
            assert_eq!(Some(r.derived), published_b_range(kind));
        }
        let r = b_range_report(&model(ContractionKind::TIV)).unwrap();
        assert!(r.has_discrepancy());
        assert_eq!(r.derived.intervals().len(), 2);
        let upper = &r.derived.intervals()[1];
        assert_eq!(upper.lo, Endpoint::Finite(QuadExtNumber::new(qf(3, 4), qf(1, 12), 15)));
        assert_eq!(upper.hi, Endpoint::Finite(QuadExtNumber::new(qf(4, 5), qf(1, 30), 141)));
        assert!(r.discrepancies.iter().any(|n| n.starts_with("upper endpoint")));
    }

    #[test]
    fn b_range_independent_of_weight() {
        for kind in ContractionKind::THREEFOLDS {
            let a = solve_b_range(&model(kind)).unwrap();
            let b = solve_b_range(&make_model(kind, qf(7, 2)).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn surface_has_no_b_range() {
        assert!(solve_b_range(&model(ContractionKind::SurfaceBlowdown)).is_err());
        assert!(published_b_range(ContractionKind::SurfaceBlowdown).is_none());
    }

    #[test]
    fn positivity_inside_and_zero_at_endpoints() {
        for kind in ContractionKind::THREEFOLDS {
            let m = model(kind);
            let cons = constraints(&m).unwrap();
            let range = solve_b_range(&m).unwrap();
            for b in range.sample_rationals(6) {
                for (s, p) in &cons {
                    assert!(p.eval(&b) > Q::zero(), "{kind} {} at {b}", s.name);
                    assert_eq!(twisted_top(&m, &s.shifted(), &b).unwrap(), p.eval(&b));
                }
            }
            for e in range.endpoints() {
                assert!(cons.iter().any(|(_, p)| p.sign_at(&e) == 0), "{kind} endpoint {e}");
                assert!(cons.iter().all(|(_, p)| p.sign_at(&e) >= 0), "{kind} endpoint {e}");
            }
        }
    }
}
