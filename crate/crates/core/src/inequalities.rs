//! Bogomolov-Gieseker type inequalities and the support-property norm.
//!
//! Every margin is `LHS - RHS` (minus the threshold where one applies), so a
//! report holds exactly when its margin is nonnegative.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::chern::twist;
use crate::charges::z_surface;
use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionModel, EXC, FW};
use crate::rational::{fmt_q, q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BGReport {
    pub margin: Q,
    pub holds: bool,
}

impl BGReport {
    fn from_margin(margin: Q) -> Self {
        let holds = !margin.is_negative();
        BGReport { margin, holds }
    }

    pub fn to_json(&self) -> Value {
        json!({"margin": fmt_q(&self.margin), "holds": self.holds})
    }
}

/// `ch1^2 - 2 ch0 ch2` on the surface, `(ch1^2 - 2 ch0 ch2) . f*w` on a 3-fold.
pub fn bg_discriminant(model: &ContractionModel, v: &ChernVector) -> Result<BGReport> {
    model.check(v)?;
    let fw = model.fw();
    let margin = if model.is_surface() {
        model.triple(&v.ch1, &v.ch1, &[]) - q(2) * &v.ch0 * &v.ch2[0]
    } else {
        model.triple(&v.ch1, &v.ch1, &fw) - q(2) * &v.ch0 * model.divisor_dot_ch2(&fw, &v.ch2)
    };
    Ok(BGReport::from_margin(margin))
}

/// `(ch1 . f*w)^2 - 2 w ch0 ch2`.
pub fn bg_weak_surface(model: &ContractionModel, v: &ChernVector) -> Result<BGReport> {
    model.require_surface()?;
    model.check(v)?;
    let deg = model.triple(&v.ch1, &model.fw(), &[]);
    let margin = &deg * &deg - q(2) * model.w() * &v.ch0 * &v.ch2[0];
    Ok(BGReport::from_margin(margin))
}

/// `ch1^2 - 2 ch0 ch2 + c_omega (ch1 . f*w)^2 / w - threshold`.
pub fn bg_strong_margin(
    model: &ContractionModel,
    v: &ChernVector,
    c_omega: &Q,
    threshold: &Q,
) -> Result<BGReport> {
    model.require_surface()?;
    let disc = bg_discriminant(model, v)?.margin;
    let deg = model.triple(&v.ch1, &model.fw(), &[]);
    let margin = disc + c_omega * &deg * &deg / model.w() - threshold;
    Ok(BGReport::from_margin(margin))
}

/// `(ch1 . (f*w)^2)^2 - 2 w ch0 (ch2^{bD} . f*w)`, for `ch0 > 0`.
pub fn bg_threefold_margin(model: &ContractionModel, b: &Q, v: &ChernVector) -> Result<BGReport> {
    model.require_threefold()?;
    if !v.ch0.is_positive() {
        return Err(Error::RankPrecondition("positive for the 3-fold BG margin"));
    }
    let fw = model.fw();
    let deg = model.triple(&v.ch1, &fw, &fw);
    let tw = twist(model, v, b)?;
    let margin = &deg * &deg - q(2) * model.w() * &v.ch0 * model.divisor_dot_ch2(&fw, &tw.ch2);
    Ok(BGReport::from_margin(margin))
}

/// `max{|r|, |n|, |beta_+ . f*w|, sqrt(-beta_-^2)}` for `ch1 = x f*w + a C`,
/// where `sqrt(-beta_-^2) = |a|`.
pub fn support_norm(model: &ContractionModel, v: &ChernVector) -> Result<Q> {
    model.require_surface()?;
    model.check(v)?;
    let plus = (&v.ch1[FW] * model.w()).abs();
    let minus = v.ch1[EXC].abs();
    Ok([v.ch0.abs(), v.ch2[0].abs(), plus, minus]
        .into_iter()
        .max()
        .unwrap_or_else(Q::zero))
}

/// `||v||^2 / |Z(v)|^2`.
pub fn support_ratio_sq(model: &ContractionModel, v: &ChernVector) -> Result<Q> {
    let z = z_surface(model, v)?;
    if z.is_zero() {
        return Err(Error::ZeroCharge);
    }
    let n = support_norm(model, v)?;
    Ok(&n * &n / z.norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_model, ContractionKind};
    use crate::rational::qf;
    use proptest::prelude::*;

    fn surf(w: i64) -> ContractionModel {
        make_model(ContractionKind::SurfaceBlowdown, q(w)).unwrap()
    }

    fn sv(m: &ContractionModel, r: Q, x: Q, a: Q, n: Q) -> ChernVector {
        m.class(r, vec![x, a], vec![n], None).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        let s = surf(1);
        let r = bg_discriminant(&s, &sv(&s, q(1), q(0), q(0), q(0))).unwrap();
        assert_eq!(r, BGReport { margin: q(0), holds: true });
        let r = bg_discriminant(&s, &sv(&s, q(1), q(0), q(1), q(0))).unwrap();
        assert_eq!(r, BGReport { margin: q(-1), holds: false });
        let s4 = surf(4);
        let r = bg_discriminant(&s4, &sv(&s4, q(2), q(1), q(0), q(0))).unwrap();
        assert_eq!(r, BGReport { margin: q(4), holds: true });
    }

    #[test]
    fn weak_examples() {
        let s = surf(1);
        assert_eq!(bg_weak_surface(&s, &sv(&s, q(1), q(1), q(0), q(0))).unwrap().margin, q(1));
        let s2 = surf(2);
        let r = bg_weak_surface(&s2, &sv(&s2, q(1), q(0), q(0), q(1))).unwrap();
        assert_eq!(r, BGReport { margin: q(-4), holds: false });
        assert_eq!(bg_weak_surface(&s, &sv(&s, q(0), q(0), q(1), qf(1, 2))).unwrap().margin, q(0));
    }

    #[test]
    fn strong_examples() {
        let s = surf(1);
        let oc = sv(&s, q(0), q(0), q(1), qf(1, 2));
        let ocm1 = sv(&s, q(0), q(0), q(-1), qf(1, 2));
        for c in [q(0), qf(1, 3), q(7)] {
            assert_eq!(bg_strong_margin(&s, &oc, &c, &q(-1)).unwrap().margin, q(0));
            assert_eq!(bg_strong_margin(&s, &ocm1, &c, &q(-1)).unwrap().margin, q(0));
        }
        let r = bg_strong_margin(&s, &s.point_class(), &q(1), &q(-1)).unwrap();
        assert_eq!(r, BGReport { margin: q(1), holds: true });
        assert_eq!(bg_strong_margin(&s, &oc, &q(1), &q(0)).unwrap().holds, false);
    }

    #[test]
    fn threefold_examples() {
        let m = make_model(ContractionKind::TV, q(1)).unwrap();
        let o = m.class(q(1), vec![q(0), q(0)], vec![q(0), q(0)], Some(q(0))).unwrap();
        for b in [q(0), qf(3, 2)] {
            assert_eq!(bg_threefold_margin(&m, &b, &o).unwrap(), BGReport { margin: q(0), holds: true });
        }
        let v = m.class(q(1), vec![q(1), q(0)], vec![q(0), q(0)], Some(q(0))).unwrap();
        assert_eq!(bg_threefold_margin(&m, &q(0), &v).unwrap().margin, q(1));
        let v = m.class(q(2), vec![q(0), q(0)], vec![q(0), q(1)], Some(q(0))).unwrap();
        assert_eq!(bg_threefold_margin(&m, &q(0), &v).unwrap(), BGReport { margin: q(-4), holds: false });
        assert!(bg_threefold_margin(&m, &q(0), &m.point_class()).is_err());
    }

    #[test]
    fn threefold_discriminant_uses_polarisation() {
        let m = make_model(ContractionKind::TV, q(3)).unwrap();
        // ch1 = f*w: (f*w)^2 . f*w = 3
        let v = m.class(q(1), vec![q(1), q(0)], vec![q(0), q(1)], Some(q(0))).unwrap();
        assert_eq!(bg_discriminant(&m, &v).unwrap().margin, q(1));
    }

    #[test]
    fn norm_examples() {
        let s = surf(1);
        assert_eq!(support_norm(&s, &sv(&s, q(0), q(0), q(2), q(3))).unwrap(), q(3));
        assert_eq!(support_norm(&s, &sv(&s, q(1), q(1), q(0), q(0))).unwrap(), q(1));
        assert_eq!(support_norm(&s, &s.zero_class()).unwrap(), q(0));
    }

    #[test]
    fn ratio_examples() {
        let s = surf(1);
        assert_eq!(support_ratio_sq(&s, &s.point_class()).unwrap(), q(1));
        assert_eq!(support_ratio_sq(&s, &sv(&s, q(0), q(0), q(1), qf(1, 2))).unwrap(), q(4));
        assert_eq!(support_ratio_sq(&s, &sv(&s, q(0), q(0), q(-1), qf(1, 2))).unwrap(), q(4));
        assert_eq!(support_ratio_sq(&s, &s.zero_class()), Err(Error::ZeroCharge));
    }

    proptest! {
        #[test]
        fn discriminant_implies_weak(r in 1i64..6, x in -6i64..6, a in -6i64..6, n in -12i64..12, d in 1i64..4, w in 1i64..5) {
            let s = surf(w);
            let v = sv(&s, q(r), q(x), q(a), qf(n, d));
            if bg_discriminant(&s, &v).unwrap().holds {
                prop_assert!(bg_weak_surface(&s, &v).unwrap().holds);
            }
        }

        #[test]
        fn ratio_is_scale_invariant(r in -4i64..4, x in -4i64..4, a in -4i64..4, n in -8i64..8, k in 1i64..9) {
            let s = surf(2);
            let v = sv(&s, q(r), q(x), q(a), qf(n, 2));
            prop_assume!(!z_surface(&s, &v).unwrap().is_zero());
            prop_assert_eq!(support_ratio_sq(&s, &v.scale(&q(k))).unwrap(), support_ratio_sq(&s, &v).unwrap());
        }
    }
}
