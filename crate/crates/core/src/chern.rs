//! Twisted Chern characters, the Grothendieck-Riemann-Roch pushforward from
//! the exceptional locus, and the Riemann-Roch pairing on the surface.
//!
//! Conventions: `twist(v, b) = e^{-bD} . v`. For a sheaf `F` on the
//! exceptional divisor, `ch(i_* F) = i_*(ch(F) . td(N)^{-1})` with
//! `N = O_D(D)` and `td(N)^{-1} = 1 - n/2 + n^2/6`. These reproduce the
//! printed type V vectors and every printed b-range, which is how the ch3
//! normalisation is pinned.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionKind, ContractionModel, EXC, FW};
use crate::rational::{dot, fmt_q, q, qf, Q};

/// `e^{-bD} . v` truncated at top degree.
pub fn twist(model: &ContractionModel, v: &ChernVector, b: &Q) -> Result<ChernVector> {
    model.check(v)?;
    if model.is_surface() {
        if b.is_zero() {
            return Ok(v.clone());
        }
        return Err(Error::SurfaceTwist(fmt_q(b)));
    }
    if b.is_zero() {
        return Ok(v.clone());
    }
    let d = model.exc();
    let b2 = b * b / q(2);
    let b3 = b * b * b / q(6);

    let mut ch1 = v.ch1.clone();
    ch1[EXC] -= b * &v.ch0;

    let d_ch1 = model.divisor_product(&d, &v.ch1);
    let ch2 = v
        .ch2
        .iter()
        .zip(&d_ch1)
        .zip(model.dsq_curve())
        .map(|((c, dc), dd)| c - b * dc + &b2 * &v.ch0 * dd)
        .collect();

    let ch3 = v.ch3.as_ref().expect("3-fold class")
        - b * model.divisor_dot_ch2(&d, &v.ch2)
        + &b2 * model.triple(&d, &d, &v.ch1)
        - &b3 * &v.ch0 * model.d_cube();

    Ok(ChernVector {
        ch0: v.ch0.clone(),
        ch1,
        ch2,
        ch3: Some(ch3),
    })
}

/// Intersection data of the exceptional divisor itself (smooth-D types plus
/// the quadric cone with Q-valued intersections).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSurface {
    pub kind: ContractionKind,
    /// Labels of the chosen generators of `Pic(D) (x) Q`.
    pub generators: Vec<&'static str>,
    /// Intersection form on the generators.
    pub form: Vec<Vec<Q>>,
    /// `c1(O_D(D))` in generator coordinates.
    pub normal: Vec<Q>,
    /// Image of each generator in the curve basis of the 3-fold model.
    pub push: Vec<Vec<Q>>,
}

impl ExceptionalSurface {
    pub fn of(model: &ContractionModel) -> Result<Self> {
        use ContractionKind::*;
        let kind = model.kind();
        let m_len = model.curve_basis().len();
        let curve = |idx: usize| {
            let mut c = vec![Q::zero(); m_len];
            c[idx] = q(1);
            c
        };
        let surface = match kind {
            TII => ExceptionalSurface {
                kind,
                generators: vec!["H"],
                form: vec![vec![q(1)]],
                normal: vec![q(-1)],
                push: vec![curve(0)],
            },
            TIII => ExceptionalSurface {
                kind,
                generators: vec!["H1", "H2"],
                form: vec![vec![q(0), q(1)], vec![q(1), q(0)]],
                normal: vec![q(-1), q(-1)],
                push: vec![curve(0), curve(1)],
            },
            TIV => ExceptionalSurface {
                kind,
                generators: vec!["H"],
                form: vec![vec![q(1)]],
                normal: vec![q(-2)],
                push: vec![curve(0)],
            },
            // ruling C with C^2 = 1/2 and hyperplane h = 2C
            TV => ExceptionalSurface {
                kind,
                generators: vec!["C"],
                form: vec![vec![qf(1, 2)]],
                normal: vec![q(-2)],
                push: vec![curve(0)],
            },
            SurfaceBlowdown | TI => {
                return Err(Error::ModelMismatch {
                    expected: "a divisor-to-point contraction (TII-TV)",
                    got: kind,
                })
            }
        };
        Ok(surface)
    }

    pub fn intersect(&self, a: &[Q], b: &[Q]) -> Q {
        a.iter()
            .zip(&self.form)
            .fold(Q::zero(), |acc, (ai, row)| acc + ai * dot(row, b))
    }

    fn push_curve(&self, c: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.push[0].len()];
        for (ci, img) in c.iter().zip(&self.push) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += ci * x;
            }
        }
        out
    }
}

/// Chern character `(rank, c1, ch2)` of a sheaf on the exceptional divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSheafData {
    pub kind: ContractionKind,
    pub rank: Q,
    pub c1: Vec<Q>,
    pub ch2: Q,
}

impl DivisorSheafData {
    pub fn structure_sheaf(surface: &ExceptionalSurface) -> Self {
        DivisorSheafData {
            kind: surface.kind,
            rank: q(1),
            c1: vec![Q::zero(); surface.generators.len()],
            ch2: Q::zero(),
        }
    }

    /// Line bundle with first Chern class `c1`.
    pub fn line_bundle(surface: &ExceptionalSurface, c1: Vec<Q>) -> Self {
        let ch2 = surface.intersect(&c1, &c1) / q(2);
        DivisorSheafData {
            kind: surface.kind,
            rank: q(1),
            c1,
            ch2,
        }
    }

    /// `self (x) L` where `c1(L) = l`.
    pub fn tensor_line(&self, surface: &ExceptionalSurface, l: &[Q]) -> Self {
        let c1_l = surface.intersect(&self.c1, l);
        let l2 = surface.intersect(l, l);
        DivisorSheafData {
            kind: self.kind,
            rank: self.rank.clone(),
            c1: self.c1.iter().zip(l).map(|(c, x)| c + &self.rank * x).collect(),
            ch2: &self.ch2 + c1_l + &self.rank * l2 / q(2),
        }
    }

    /// Integer combination in K-theory, e.g. kernels of surjections.
    pub fn combine(&self, k: i64, other: &DivisorSheafData, l: i64) -> Self {
        let (k, l) = (q(k), q(l));
        DivisorSheafData {
            kind: self.kind,
            rank: &k * &self.rank + &l * &other.rank,
            c1: self
                .c1
                .iter()
                .zip(&other.c1)
                .map(|(a, b)| &k * a + &l * b)
                .collect(),
            ch2: &k * &self.ch2 + &l * &other.ch2,
        }
    }
}

/// One step of a pushforward derivation, for audit output.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: &'static str,
    pub value: Value,
}

fn surface_ch_json(s: &ExceptionalSurface, rank: &Q, c1: &[Q], ch2: &Q) -> Value {
    let c1: serde_json::Map<String, Value> = s
        .generators
        .iter()
        .zip(c1)
        .map(|(g, x)| (g.to_string(), Value::String(fmt_q(x))))
        .collect();
    json!({"rank": fmt_q(rank), "c1": c1, "ch2": fmt_q(ch2)})
}

/// `ch(i_* F)` for a sheaf `F` on the exceptional divisor of a point
/// contraction, with the intermediate products.
pub fn grr_push_divisor_traced(
    model: &ContractionModel,
    fd: &DivisorSheafData,
) -> Result<(ChernVector, Vec<TraceStep>)> {
    let s = ExceptionalSurface::of(model)?;
    if fd.kind != model.kind() {
        return Err(Error::ModelMismatch {
            expected: "a sheaf on this model's exceptional divisor",
            got: model.kind(),
        });
    }
    if fd.c1.len() != s.generators.len() {
        return Err(Error::BasisMismatch(format!(
            "c1 has {} coordinates, Pic(D) generators are {:?}",
            fd.c1.len(),
            s.generators
        )));
    }
    let n = &s.normal;
    let n2 = s.intersect(n, n);
    let half_n: Vec<Q> = n.iter().map(|x| -x / q(2)).collect();
    let mut trace = vec![
        TraceStep {
            step: "ch(F)",
            value: surface_ch_json(&s, &fd.rank, &fd.c1, &fd.ch2),
        },
        TraceStep {
            step: "td(N)^-1",
            value: surface_ch_json(&s, &q(1), &half_n, &(&n2 / q(6))),
        },
    ];

    let deg1: Vec<Q> = fd.c1.iter().zip(&half_n).map(|(c, h)| c + &fd.rank * h).collect();
    let deg2 = &fd.ch2 - s.intersect(&fd.c1, n) / q(2) + &fd.rank * &n2 / q(6);
    trace.push(TraceStep {
        step: "ch(F).td(N)^-1",
        value: surface_ch_json(&s, &fd.rank, &deg1, &deg2),
    });

    let mut ch1 = vec![Q::zero(); 2];
    ch1[EXC] = fd.rank.clone();
    let out = ChernVector {
        ch0: Q::zero(),
        ch1,
        ch2: s.push_curve(&deg1),
        ch3: Some(deg2),
    };
    trace.push(TraceStep {
        step: "i_*",
        value: model.class_to_json(&out),
    });
    Ok((out, trace))
}

pub fn grr_push_divisor(model: &ContractionModel, fd: &DivisorSheafData) -> Result<ChernVector> {
    grr_push_divisor_traced(model, fd).map(|(v, _)| v)
}

/// `ch(i_* O_L(k))` for a fibre `L ~ P^1` of a type I contraction, where
/// `N_{L/X} = O + O(-1)`.
pub fn grr_push_fiber_line(model: &ContractionModel, k: i64) -> Result<ChernVector> {
    if model.kind() != ContractionKind::TI {
        return Err(Error::ModelMismatch {
            expected: "a type I model",
            got: model.kind(),
        });
    }
    let mut v = model.zero_class();
    v.ch2[0] = q(1);
    v.ch3 = Some(q(k) + qf(1, 2));
    Ok(v)
}

/// `ch(i_* O_C(k))` for the (-1)-curve of the surface model.
pub fn grr_push_exceptional_curve(model: &ContractionModel, k: i64) -> Result<ChernVector> {
    model.require_surface()?;
    let mut v = model.zero_class();
    v.ch1[EXC] = q(1);
    v.ch2[0] = q(k) + qf(1, 2);
    Ok(v)
}

/// `chi(v, w) = int ch(v)^dual . ch(w) . td(X)` on the surface model, with
/// `td(X) = (1, -K_X/2, chi(O_X))` and `K_X = f*K_Y + C`.
pub fn euler_pairing_surface(
    model: &ContractionModel,
    v: &ChernVector,
    w: &ChernVector,
) -> Result<Q> {
    model.require_surface()?;
    model.check(v)?;
    model.check(w)?;
    let (r1, r2) = (&v.ch0, &w.ch0);
    let c1c2 = model.triple(&v.ch1, &w.ch1, &[]);
    let deg2 = r1 * &w.ch2[0] + r2 * &v.ch2[0] - c1c2;
    // degree-one part of ch(v)^dual . ch(w)
    let mixed: Vec<Q> = v
        .ch1
        .iter()
        .zip(&w.ch1)
        .map(|(a, b)| r1 * b - r2 * a)
        .collect();
    let rr = r1 * r2;
    // K_X . (x f*w + a C) = x (K_Y.w) - a
    let kx_mixed_local = -&mixed[EXC];
    let canonical_needed = !mixed[FW].is_zero() || !rr.is_zero();
    let (kx_global, chi_term) = if canonical_needed {
        let data = model.canonical().ok_or_else(|| {
            Error::MissingCanonicalData(
                "the pairing has a nonzero f*w or rank contribution".into(),
            )
        })?;
        (&mixed[FW] * &data.ky_omega, &rr * &data.chi_ox)
    } else {
        (Q::zero(), Q::zero())
    };
    Ok(deg2 - (kx_mixed_local + kx_global) / q(2) + chi_term)
}
