//! Exact numbers `p + q sqrt(d)` with rational `p, q` and squarefree `d`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::rational::{approx_decimal, fmt_q, sign, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExtNumber {
    p: Q,
    q: Q,
    d: BigInt,
}

/// Splits a positive integer as `k^2 * d` with `d` squarefree.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut rest = n.clone();
    let mut k = BigInt::one();
    let mut d = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        let f2 = &f * &f;
        while (&rest % &f2).is_zero() {
            rest /= &f2;
            k *= &f;
        }
        if (&rest % &f).is_zero() {
            rest /= &f;
            d *= &f;
        }
        f += 1;
    }
    (k, d * rest)
}

/// Sign of `r + s sqrt(e)` for rational `r, s` and a positive integer `e`.
fn sign_surd(r: &Q, s: &Q, e: &BigInt) -> i8 {
    let (sr, ss) = (sign(r), sign(s));
    if ss == 0 || e.is_zero() {
        return sr;
    }
    if sr == 0 || sr == ss {
        return ss;
    }
    let lhs = r * r;
    let rhs = s * s * Q::from_integer(e.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sr,
        Ordering::Less => ss,
        Ordering::Equal => 0,
    }
}

impl QuadExtNumber {
    pub fn rational(p: Q) -> Self {
        QuadExtNumber {
            p,
            q: Q::zero(),
            d: BigInt::one(),
        }
    }

    /// `p + q sqrt(d)` for a positive integer `d` (square factors are
    /// absorbed into `q`).
    pub fn new(p: Q, q: Q, d: impl Into<BigInt>) -> Self {
        Self::with_sqrt_of(p, q, Q::from_integer(d.into()))
    }

    /// `p + q sqrt(r)` for a nonnegative rational `r`.
    pub fn with_sqrt_of(p: Q, q: Q, r: Q) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        if r.is_zero() || q.is_zero() {
            return Self::rational(p);
        }
        // sqrt(n/m) = sqrt(n m) / m
        let nm = r.numer() * r.denom();
        let (k, d) = square_part(&nm);
        let q = q * Q::new(k, r.denom().clone());
        if d.is_one() {
            Self::rational(p + q)
        } else {
            QuadExtNumber { p, q, d }
        }
    }

    pub fn p(&self) -> &Q {
        &self.p
    }

    pub fn q(&self) -> &Q {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn sign(&self) -> i8 {
        sign_surd(&self.p, &self.q, &self.d)
    }

    /// Sign of `self - x` for a rational `x`.
    pub fn cmp_rational(&self, x: &Q) -> Ordering {
        match sign_surd(&(&self.p - x), &self.q, &self.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) + to_f64(&self.q) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": fmt_q(&self.p),
            "q": fmt_q(&self.q),
            "d": self.d.to_i64().map(Value::from).unwrap_or_else(|| Value::String(self.d.to_string())),
            "approx": approx_decimal(self.to_f64(), 12),
        })
    }
}

impl Ord for QuadExtNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        // sign of (p1 - p2) + q1 sqrt(d1) - q2 sqrt(d2)
        let a = &self.p - &other.p;
        let s = if self.d == other.d {
            sign_surd(&a, &(&self.q - &other.q), &self.d)
        } else {
            let (b, d1) = (&self.q, &self.d);
            let (c_owned, d2) = (-&other.q, &other.d);
            let c = &c_owned;
            // x = b sqrt(d1) + c sqrt(d2)
            let sx = match (sign(b), sign(c)) {
                (0, t) | (t, 0) => t,
                (u, t) if u == t => u,
                (u, t) => {
                    let lhs = b * b * Q::from_integer(d1.clone());
                    let rhs = c * c * Q::from_integer(d2.clone());
                    match lhs.cmp(&rhs) {
                        Ordering::Greater => u,
                        Ordering::Less => t,
                        Ordering::Equal => 0,
                    }
                }
            };
            let sa = sign(&a);
            if sx == 0 || sa == sx {
                if sx == 0 { sa } else { sx }
            } else if sa == 0 {
                sx
            } else {
                // compare a^2 with x^2 = b^2 d1 + c^2 d2 + 2bc sqrt(d1 d2)
                let x2_rat = b * b * Q::from_integer(d1.clone()) + c * c * Q::from_integer(d2.clone());
                let diff = sign_surd(&(&a * &a - x2_rat), &(-(Q::from_integer(2.into()) * b * c)), &(d1 * d2));
                match diff {
                    1 => sa,
                    -1 => sx,
                    _ => 0,
                }
            }
        };
        s.cmp(&0)
    }
}

impl PartialOrd for QuadExtNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadExtNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return f.write_str(&fmt_q(&self.p));
        }
        let mag = self.q.abs();
        let op = if self.q.is_negative() { "-" } else { "+" };
        let coeff = if mag.is_one() { String::new() } else { format!("({})*", fmt_q(&mag)) };
        if self.p.is_zero() {
            let lead = if self.q.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}sqrt({})", self.d)
        } else {
            write!(f, "{} {op} {coeff}sqrt({})", fmt_q(&self.p), self.d)
        }
    }
}
