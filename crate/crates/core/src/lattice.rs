//! Numerical Grothendieck group and intersection theory of the six built-in
//! contraction geometries.
//!
//! A 3-fold model works in the span of two divisor classes `{f*w, D}` and a
//! curve lattice made of the exceptional curves plus one horizontal class `M`,
//! normalised by `f*w . M = 1` and `D . M = 0`. On the surface model curves
//! are divisors, so the curve basis coincides with the divisor basis
//! `{f*w, C}` and `ch2` is a single rational.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::{dot, fmt_q, parse_q, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContractionKind {
    /// Contraction of a (-1)-curve on a smooth surface.
    SurfaceBlowdown,
    /// Blow-up of a smooth 3-fold along a smooth curve.
    TI,
    /// Blow-up of a smooth point; `D = P^2`, `O_D(D) = O(-1)`.
    TII,
    /// Blow-up of an ordinary double point; `D = P^1 x P^1`, `O_D(D) = O(-1,-1)`.
    TIII,
    /// Blow-up of `C^3/(Z/2)`; `D = P^2`, `O_D(D) = O(-2)`.
    TIV,
    /// Blow-up of a cA2 point; `D` the quadric cone, `O_D(D) = O_D(-1)`.
    TV,
}

impl ContractionKind {
    pub const ALL: [ContractionKind; 6] = [
        Self::SurfaceBlowdown,
        Self::TI,
        Self::TII,
        Self::TIII,
        Self::TIV,
        Self::TV,
    ];

    pub const THREEFOLDS: [ContractionKind; 5] =
        [Self::TI, Self::TII, Self::TIII, Self::TIV, Self::TV];

    pub fn dimension(self) -> usize {
        match self {
            Self::SurfaceBlowdown => 2,
            _ => 3,
        }
    }

    pub fn is_surface(self) -> bool {
        self == Self::SurfaceBlowdown
    }

    /// True when the exceptional locus is contracted to a point.
    pub fn contracts_to_point(self) -> bool {
        matches!(self, Self::SurfaceBlowdown | Self::TII | Self::TIII | Self::TIV | Self::TV)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::SurfaceBlowdown => "surface",
            Self::TI => "TI",
            Self::TII => "TII",
            Self::TIII => "TIII",
            Self::TIV => "TIV",
            Self::TV => "TV",
        }
    }
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ContractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "surface" | "SurfaceBlowdown" => Ok(Self::SurfaceBlowdown),
            "TI" | "I" => Ok(Self::TI),
            "TII" | "II" => Ok(Self::TII),
            "TIII" | "III" => Ok(Self::TIII),
            "TIV" | "IV" => Ok(Self::TIV),
            "TV" | "V" => Ok(Self::TV),
            other => Err(Error::Parse(format!("unknown contraction kind {other:?}"))),
        }
    }
}

/// Global intersection numbers of a type I contraction that depend on the
/// blown-up curve. None of them enter the fibre-local b-range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiParams {
    /// `f*w . D^2`
    pub fw_dsq: Q,
    /// `(f*w)^2 . D`
    pub fw2_d: Q,
    /// `D^3`
    pub d_cube: Q,
}

impl Default for TiParams {
    fn default() -> Self {
        TiParams {
            fw_dsq: Q::zero(),
            fw2_d: Q::zero(),
            d_cube: Q::zero(),
        }
    }
}

/// Pairings needed by the Riemann-Roch form on the surface model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalData {
    /// `K_Y . w`
    pub ky_omega: Q,
    /// `chi(O_X)`
    pub chi_ox: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionModel {
    kind: ContractionKind,
    w: Q,
    divisor_basis: Vec<&'static str>,
    curve_basis: Vec<&'static str>,
    /// `divisor_curve[i][j]` = divisor i . curve j.
    divisor_curve: Vec<Vec<Q>>,
    /// `products[i][j]` = divisor i . divisor j as a `ch2` coordinate vector.
    products: Vec<Vec<Vec<Q>>>,
    d_cube: Q,
    canonical: Option<CanonicalData>,
}

/// Divisor index of `f*w` in every model.
pub const FW: usize = 0;
/// Divisor index of the exceptional divisor (`C` on the surface, `D` on 3-folds).
pub const EXC: usize = 1;

pub fn make_model(kind: ContractionKind, w: Q) -> Result<ContractionModel> {
    ContractionModel::new(kind, w)
}

impl ContractionModel {
    pub fn new(kind: ContractionKind, w: Q) -> Result<Self> {
        Self::build(kind, w, TiParams::default())
    }

    /// Type I model with explicit global intersection numbers.
    pub fn type_i(w: Q, params: TiParams) -> Result<Self> {
        Self::build(ContractionKind::TI, w, params)
    }

    fn build(kind: ContractionKind, w: Q, ti: TiParams) -> Result<Self> {
        if !w.is_positive() {
            return Err(Error::NonPositiveWeight(fmt_q(&w)));
        }
        let z = Q::zero;
        use ContractionKind::*;
        let model = match kind {
            SurfaceBlowdown => ContractionModel {
                kind,
                divisor_basis: vec!["fw", "C"],
                curve_basis: vec!["fw", "C"],
                divisor_curve: vec![vec![w.clone(), z()], vec![z(), q(-1)]],
                products: vec![
                    vec![vec![w.clone()], vec![z()]],
                    vec![vec![z()], vec![q(-1)]],
                ],
                d_cube: q(-1),
                canonical: None,
                w,
            },
            TI => {
                // curve basis {L, M}; D.L = -1, f*w.L = 0, D.M = 0, f*w.M = 1
                let fw_fw = vec![-ti.fw2_d.clone(), w.clone()];
                let fw_d = vec![-ti.fw_dsq.clone(), ti.fw2_d.clone()];
                let d_d = vec![-ti.d_cube.clone(), ti.fw_dsq.clone()];
                ContractionModel {
                    kind,
                    divisor_basis: vec!["fw", "D"],
                    curve_basis: vec!["L", "M"],
                    divisor_curve: vec![vec![z(), q(1)], vec![q(-1), z()]],
                    products: vec![vec![fw_fw, fw_d.clone()], vec![fw_d, d_d]],
                    d_cube: ti.d_cube,
                    canonical: None,
                    w,
                }
            }
            TII | TIII | TIV | TV => {
                let (curves, d_dot, dsq, d_cube): (Vec<&'static str>, Vec<Q>, Vec<Q>, Q) =
                    match kind {
                        TII => (vec!["l"], vec![q(-1)], vec![q(-1)], q(1)),
                        TIII => (
                            vec!["C1", "C2"],
                            vec![q(-1), q(-1)],
                            vec![q(-1), q(-1)],
                            q(2),
                        ),
                        TIV => (vec!["l"], vec![q(-2)], vec![q(-2)], q(4)),
                        _ => (vec!["C"], vec![q(-1)], vec![q(-2)], q(2)),
                    };
                let n = curves.len();
                let mut curve_basis = curves;
                curve_basis.push("M");
                let mut fw_row = vec![z(); n];
                fw_row.push(q(1));
                let mut d_row = d_dot;
                d_row.push(z());
                let mut fw_fw = vec![z(); n];
                fw_fw.push(w.clone());
                let mut d_d = dsq;
                d_d.push(z());
                let zero_curve = vec![z(); n + 1];
                ContractionModel {
                    kind,
                    divisor_basis: vec!["fw", "D"],
                    curve_basis,
                    divisor_curve: vec![fw_row, d_row],
                    products: vec![
                        vec![fw_fw, zero_curve.clone()],
                        vec![zero_curve, d_d],
                    ],
                    d_cube,
                    canonical: None,
                    w,
                }
            }
        };
        Ok(model)
    }

    pub fn with_canonical(mut self, data: CanonicalData) -> Self {
        self.canonical = Some(data);
        self
    }

    pub fn kind(&self) -> ContractionKind {
        self.kind
    }

    pub fn w(&self) -> &Q {
        &self.w
    }

    pub fn is_surface(&self) -> bool {
        self.kind.is_surface()
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    pub fn divisor_basis(&self) -> &[&'static str] {
        &self.divisor_basis
    }

    pub fn curve_basis(&self) -> &[&'static str] {
        &self.curve_basis
    }

    /// Labels of the `ch2` coordinates: the curve basis on 3-folds, the point
    /// class on the surface.
    pub fn ch2_basis(&self) -> Vec<&'static str> {
        if self.is_surface() {
            vec!["pt"]
        } else {
            self.curve_basis.clone()
        }
    }

    pub fn ch2_len(&self) -> usize {
        if self.is_surface() {
            1
        } else {
            self.curve_basis.len()
        }
    }

    /// Number of exceptional curve coordinates (the 3-fold curve basis minus `M`).
    pub fn exceptional_curve_count(&self) -> usize {
        if self.is_surface() {
            1
        } else {
            self.curve_basis.len() - 1
        }
    }

    pub fn d_cube(&self) -> &Q {
        &self.d_cube
    }

    pub fn canonical(&self) -> Option<&CanonicalData> {
        self.canonical.as_ref()
    }

    /// `D^2` (3-folds) or `C^2` as a `ch2` coordinate vector.
    pub fn dsq_curve(&self) -> &[Q] {
        &self.products[EXC][EXC]
    }

    pub fn divisor_curve_table(&self) -> &[Vec<Q>] {
        &self.divisor_curve
    }

    /// Bilinear pairing of divisor coordinates with curve coordinates.
    pub fn pair_curve_divisor(&self, d: &[Q], c: &[Q]) -> Result<Q> {
        if d.len() != self.divisor_basis.len() {
            return Err(Error::BasisMismatch(format!(
                "divisor has {} coordinates, basis {:?} has {}",
                d.len(),
                self.divisor_basis,
                self.divisor_basis.len()
            )));
        }
        if c.len() != self.curve_basis.len() {
            return Err(Error::BasisMismatch(format!(
                "curve has {} coordinates, basis {:?} has {}",
                c.len(),
                self.curve_basis,
                self.curve_basis.len()
            )));
        }
        Ok(self.pair_unchecked(d, c))
    }

    fn pair_unchecked(&self, d: &[Q], c: &[Q]) -> Q {
        d.iter()
            .zip(&self.divisor_curve)
            .fold(Q::zero(), |acc, (di, row)| acc + di * dot(row, c))
    }

    /// Intersection of two divisor classes, in `ch2` coordinates.
    pub fn divisor_product(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.ch2_len()];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if ai.is_zero() || bj.is_zero() {
                    continue;
                }
                let coeff = ai * bj;
                for (o, p) in out.iter_mut().zip(&self.products[i][j]) {
                    *o += &coeff * p;
                }
            }
        }
        out
    }

    /// Degree of `divisor . (ch2 class)`. On the surface `ch2` is already a
    /// number and this is undefined.
    pub fn divisor_dot_ch2(&self, d: &[Q], ch2: &[Q]) -> Q {
        debug_assert!(!self.is_surface());
        self.pair_unchecked(d, ch2)
    }

    /// Degree of `a . b . c` for three divisor classes (3-folds), or `a . b`
    /// ignoring `c` on the surface.
    pub fn triple(&self, a: &[Q], b: &[Q], c: &[Q]) -> Q {
        let ab = self.divisor_product(a, b);
        if self.is_surface() {
            ab[0].clone()
        } else {
            self.pair_unchecked(c, &ab)
        }
    }

    pub fn unit_divisor(&self, idx: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.divisor_basis.len()];
        v[idx] = q(1);
        v
    }

    pub fn fw(&self) -> Vec<Q> {
        self.unit_divisor(FW)
    }

    pub fn exc(&self) -> Vec<Q> {
        self.unit_divisor(EXC)
    }

    pub fn zero_class(&self) -> ChernVector {
        ChernVector {
            ch0: Q::zero(),
            ch1: vec![Q::zero(); 2],
            ch2: vec![Q::zero(); self.ch2_len()],
            ch3: if self.is_surface() { None } else { Some(Q::zero()) },
        }
    }

    /// Class of a skyscraper sheaf of a point.
    pub fn point_class(&self) -> ChernVector {
        let mut v = self.zero_class();
        match v.ch3.as_mut() {
            Some(top) => *top = q(1),
            None => v.ch2[0] = q(1),
        }
        v
    }

    /// Builds a class from raw coordinates, checking the shape.
    pub fn class(&self, ch0: Q, ch1: Vec<Q>, ch2: Vec<Q>, ch3: Option<Q>) -> Result<ChernVector> {
        let v = ChernVector { ch0, ch1, ch2, ch3 };
        self.check(&v)?;
        Ok(v)
    }

    /// Verifies that `v` has the graded shape of this model.
    pub fn check(&self, v: &ChernVector) -> Result<()> {
        if v.ch1.len() != self.divisor_basis.len() {
            return Err(Error::BasisMismatch(format!(
                "ch1 has {} coordinates, expected {} ({:?})",
                v.ch1.len(),
                self.divisor_basis.len(),
                self.divisor_basis
            )));
        }
        if v.ch2.len() != self.ch2_len() {
            return Err(Error::BasisMismatch(format!(
                "ch2 has {} coordinates, expected {} ({:?})",
                v.ch2.len(),
                self.ch2_len(),
                self.ch2_basis()
            )));
        }
        if v.ch3.is_some() == self.is_surface() {
            return Err(Error::BasisMismatch(format!(
                "a {}-dimensional model needs {} graded pieces",
                self.dimension(),
                self.dimension() + 1
            )));
        }
        Ok(())
    }

    pub fn require_surface(&self) -> Result<()> {
        if self.is_surface() {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                expected: "the surface model",
                got: self.kind,
            })
        }
    }

    pub fn require_threefold(&self) -> Result<()> {
        if self.is_surface() {
            Err(Error::ModelMismatch {
                expected: "a 3-fold model",
                got: self.kind,
            })
        } else {
            Ok(())
        }
    }

    pub fn to_json(&self) -> Value {
        let mut pairings = Map::new();
        for (i, d) in self.divisor_basis.iter().enumerate() {
            for (j, c) in self.curve_basis.iter().enumerate() {
                pairings.insert(
                    format!("{d}.{c}"),
                    Value::String(fmt_q(&self.divisor_curve[i][j])),
                );
            }
        }
        let dsq: Map<String, Value> = self
            .ch2_basis()
            .iter()
            .zip(self.dsq_curve())
            .map(|(l, x)| (l.to_string(), Value::String(fmt_q(x))))
            .collect();
        json!({
            "kind": self.kind.label(),
            "w": fmt_q(&self.w),
            "divisor_basis": self.divisor_basis,
            "curve_basis": self.curve_basis,
            "pairings": pairings,
            "d_cube": fmt_q(&self.d_cube),
            "dsq_curve": dsq,
        })
    }

    /// Serialises a class as `{"ch0", "ch1": {label: r}, "ch2": ..., "ch3"}`.
    /// On the surface `ch2` is a plain rational string.
    pub fn class_to_json(&self, v: &ChernVector) -> Value {
        let labelled = |labels: &[&str], xs: &[Q]| -> Value {
            Value::Object(
                labels
                    .iter()
                    .zip(xs)
                    .map(|(l, x)| (l.to_string(), Value::String(fmt_q(x))))
                    .collect(),
            )
        };
        let mut m = Map::new();
        m.insert("ch0".into(), Value::String(fmt_q(&v.ch0)));
        m.insert("ch1".into(), labelled(&self.divisor_basis, &v.ch1));
        if self.is_surface() {
            m.insert("ch2".into(), Value::String(fmt_q(&v.ch2[0])));
        } else {
            m.insert("ch2".into(), labelled(&self.curve_basis, &v.ch2));
        }
        if let Some(top) = &v.ch3 {
            m.insert("ch3".into(), Value::String(fmt_q(top)));
        }
        Value::Object(m)
    }

    /// Inverse of [`class_to_json`](Self::class_to_json). Missing keys are
    /// zero; unknown labels are rejected. `ch1`/`ch2` may also be given as
    /// arrays in basis order.
    pub fn class_from_json(&self, value: &Value) -> Result<ChernVector> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("class must be a JSON object".into()))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "ch0" | "ch1" | "ch2" | "ch3") {
                return Err(Error::Parse(format!("unknown class key {key:?}")));
            }
        }
        let scalar = |v: Option<&Value>, what: &str| -> Result<Q> {
            match v {
                None | Some(Value::Null) => Ok(Q::zero()),
                Some(x) => json_rational(x)
                    .map_err(|e| Error::Parse(format!("{what}: {e}"))),
            }
        };
        let coords = |v: Option<&Value>, labels: &[&str], what: &str| -> Result<Vec<Q>> {
            let mut out = vec![Q::zero(); labels.len()];
            match v {
                None | Some(Value::Null) => {}
                Some(Value::Object(m)) => {
                    for (k, x) in m {
                        let idx = labels.iter().position(|l| l == k).ok_or_else(|| {
                            Error::BasisMismatch(format!(
                                "{what}: unknown label {k:?}, basis is {labels:?}"
                            ))
                        })?;
                        out[idx] = json_rational(x)
                            .map_err(|e| Error::Parse(format!("{what}.{k}: {e}")))?;
                    }
                }
                Some(Value::Array(xs)) => {
                    if xs.len() != labels.len() {
                        return Err(Error::BasisMismatch(format!(
                            "{what}: {} coordinates given, basis is {labels:?}",
                            xs.len()
                        )));
                    }
                    for (o, x) in out.iter_mut().zip(xs) {
                        *o = json_rational(x)?;
                    }
                }
                Some(other) => {
                    return Err(Error::Parse(format!("{what}: unexpected value {other}")))
                }
            }
            Ok(out)
        };
        let ch0 = scalar(obj.get("ch0"), "ch0")?;
        let ch1 = coords(obj.get("ch1"), &self.divisor_basis, "ch1")?;
        let ch2 = if self.is_surface() {
            match obj.get("ch2") {
                Some(Value::Object(_)) | Some(Value::Array(_)) => {
                    coords(obj.get("ch2"), &["pt"], "ch2")?
                }
                other => vec![scalar(other, "ch2")?],
            }
        } else {
            coords(obj.get("ch2"), &self.curve_basis, "ch2")?
        };
        let ch3 = if self.is_surface() {
            if obj.get("ch3").is_some_and(|v| !v.is_null()) {
                return Err(Error::BasisMismatch("surface classes have no ch3".into()));
            }
            None
        } else {
            Some(scalar(obj.get("ch3"), "ch3")?)
        };
        self.class(ch0, ch1, ch2, ch3)
    }
}

/// Accepts `"p/q"` strings and JSON integers.
pub fn json_rational(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(q(i)),
            None => parse_q(&n.to_string()),
        },
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

/// Graded class `(ch0, ch1, ch2[, ch3])` with exact coordinates in the
/// bases of its model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernVector {
    pub ch0: Q,
    pub ch1: Vec<Q>,
    pub ch2: Vec<Q>,
    pub ch3: Option<Q>,
}

impl ChernVector {
    /// Top-degree component (`ch2` on a surface, `ch3` on a 3-fold).
    pub fn top(&self) -> &Q {
        match &self.ch3 {
            Some(t) => t,
            None => &self.ch2[0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ch0.is_zero()
            && self.ch1.iter().all(Zero::is_zero)
            && self.ch2.iter().all(Zero::is_zero)
            && self.ch3.as_ref().is_none_or(Zero::is_zero)
    }

    pub fn scale(&self, k: &Q) -> ChernVector {
        self.map(|x| x * k)
    }

    /// Homological shift `[n]`: every component picks up `(-1)^n`.
    pub fn shift(&self, n: i64) -> ChernVector {
        if n.rem_euclid(2) == 0 {
            self.clone()
        } else {
            -self.clone()
        }
    }

    fn map(&self, f: impl Fn(&Q) -> Q) -> ChernVector {
        ChernVector {
            ch0: f(&self.ch0),
            ch1: self.ch1.iter().map(&f).collect(),
            ch2: self.ch2.iter().map(&f).collect(),
            ch3: self.ch3.as_ref().map(&f),
        }
    }

    fn zip(&self, other: &ChernVector, f: impl Fn(&Q, &Q) -> Q) -> ChernVector {
        assert_eq!(self.ch1.len(), other.ch1.len(), "ch1 length mismatch");
        assert_eq!(self.ch2.len(), other.ch2.len(), "ch2 length mismatch");
        assert_eq!(self.ch3.is_some(), other.ch3.is_some(), "dimension mismatch");
        ChernVector {
            ch0: f(&self.ch0, &other.ch0),
            ch1: self.ch1.iter().zip(&other.ch1).map(|(a, b)| f(a, b)).collect(),
            ch2: self.ch2.iter().zip(&other.ch2).map(|(a, b)| f(a, b)).collect(),
            ch3: match (&self.ch3, &other.ch3) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            },
        }
    }
}

/// Free-function form of [`ChernVector::shift`].
pub fn cv_shift(v: &ChernVector, n: i64) -> ChernVector {
    v.shift(n)
}

impl Add for ChernVector {
    type Output = ChernVector;
    fn add(self, rhs: ChernVector) -> ChernVector {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl<'a> Add<&'a ChernVector> for &'a ChernVector {
    type Output = ChernVector;
    fn add(self, rhs: &ChernVector) -> ChernVector {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for ChernVector {
    type Output = ChernVector;
    fn sub(self, rhs: ChernVector) -> ChernVector {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl<'a> Sub<&'a ChernVector> for &'a ChernVector {
    type Output = ChernVector;
    fn sub(self, rhs: &ChernVector) -> ChernVector {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for ChernVector {
    type Output = ChernVector;
    fn neg(self) -> ChernVector {
        self.map(|x| -x)
    }
}
