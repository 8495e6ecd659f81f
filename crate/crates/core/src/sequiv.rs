//! S-equivalence at class level: all ways of writing a class as a
//! nonnegative integer combination of catalog simples.
//!
//! Every simple has strictly positive twisted top degree at an admissible
//! `b`, and the twisted top degree is additive, so multiplicities are bounded
//! by `top(target) / top(simple)` and the enumeration is finite.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::catalog::{simples, twisted_top, SimpleClass};
use crate::error::{Error, Result};
use crate::lattice::{ChernVector, ContractionModel};
use crate::rational::{fmt_q, q, Q};

/// Jordan-Holder multiplicities keyed by simple name; zero entries omitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiplicityVector(BTreeMap<String, u64>);

impl MultiplicityVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Self {
        let mut m = Self::new();
        for (name, k) in pairs {
            m.add(name, k);
        }
        m
    }

    pub fn add(&mut self, name: &str, k: u64) {
        if k > 0 {
            *self.0.entry(name.to_string()).or_insert(0) += k;
        }
    }

    pub fn get(&self, name: &str) -> u64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// `sum m_s * class(s)` over the given catalog.
    pub fn class(&self, model: &ContractionModel, catalog: &[SimpleClass]) -> ChernVector {
        catalog.iter().fold(model.zero_class(), |acc, s| {
            let k = self.get(&s.name);
            if k == 0 {
                acc
            } else {
                &acc + &s.shifted().scale(&q(k as i64))
            }
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect())
    }
}

/// Same Jordan-Holder multiset.
pub fn s_equivalent(m1: &MultiplicityVector, m2: &MultiplicityVector) -> bool {
    m1 == m2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyReason {
    /// Nonzero target whose twisted top degree is not positive.
    NonPositiveTop,
}

impl EmptyReason {
    pub fn code(self) -> &'static str {
        match self {
            EmptyReason::NonPositiveTop => "nonpositive_twisted_top",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub solutions: Vec<MultiplicityVector>,
    /// Per-simple multiplicity bounds used by the enumeration, in catalog order.
    pub bounds: Vec<(String, u64)>,
    pub reason: Option<EmptyReason>,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "solutions": self.solutions.iter().map(MultiplicityVector::to_json).collect::<Vec<_>>(),
            "bounds": Value::Object(self.bounds.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect()),
            "reason": self.reason.map(EmptyReason::code),
        })
    }
}

pub fn decompose(model: &ContractionModel, target: &ChernVector, b: &Q) -> Result<Decomposition> {
    decompose_with_bound_scale(model, target, b, 1)
}

/// As [`decompose`], with every multiplicity bound multiplied by `scale`.
pub fn decompose_with_bound_scale(
    model: &ContractionModel,
    target: &ChernVector,
    b: &Q,
    scale: u64,
) -> Result<Decomposition> {
    model.check(target)?;
    let catalog = simples(model)?;
    let mut weights = Vec::with_capacity(catalog.len());
    for s in &catalog {
        let wt = twisted_top(model, &s.shifted(), b)?;
        if !wt.is_positive() {
            return Err(Error::OutsideBRange {
                b: fmt_q(b),
                simple: s.name.clone(),
                value: fmt_q(&wt),
            });
        }
        weights.push(wt);
    }
    let total = twisted_top(model, target, b)?;
    if target.is_zero() {
        return Ok(Decomposition {
            solutions: vec![MultiplicityVector::new()],
            bounds: catalog.iter().map(|s| (s.name.clone(), 0)).collect(),
            reason: None,
        });
    }
    if !total.is_positive() {
        return Ok(Decomposition {
            solutions: vec![],
            bounds: catalog.iter().map(|s| (s.name.clone(), 0)).collect(),
            reason: Some(EmptyReason::NonPositiveTop),
        });
    }
    let bounds: Vec<u64> = weights
        .iter()
        .map(|wt| {
            let c: BigInt = (&total / wt).ceil().to_integer();
            c.to_u64().expect("multiplicity bound fits in u64") * scale
        })
        .collect();
    let classes: Vec<ChernVector> = catalog.iter().map(SimpleClass::shifted).collect();

    let columns: Vec<Vec<Q>> = classes.iter().map(flatten).collect();
    let search = Search {
        columns: &columns,
        weights: &weights,
        bounds: &bounds,
        target: flatten(target),
        total: &total,
        solve_from: independent_suffix(&columns),
    };
    let mut found: Vec<Vec<u64>> = Vec::new();
    let mut counts = vec![0u64; catalog.len()];
    let origin = vec![Q::zero(); search.target.len()];
    search.run(0, &origin, &Q::zero(), &mut counts, &mut found);
    found.sort();
    let solutions = found
        .into_iter()
        .map(|c| {
            MultiplicityVector::from_pairs(catalog.iter().zip(c).map(|(s, k)| (s.name.as_str(), k)))
        })
        .collect();
    Ok(Decomposition {
        solutions,
        bounds: catalog.iter().map(|s| s.name.clone()).zip(bounds).collect(),
        reason: None,
    })
}

fn flatten(v: &ChernVector) -> Vec<Q> {
    let mut out = vec![v.ch0.clone()];
    out.extend(v.ch1.iter().cloned());
    out.extend(v.ch2.iter().cloned());
    out.extend(v.ch3.iter().cloned());
    out
}

/// Solves `sum_j x_j columns[j] = rhs`; `None` if inconsistent or if the
/// columns are dependent.
fn solve_unique(columns: &[&Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = columns.len();
    let rows = rhs.len();
    let mut a: Vec<Vec<Q>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..n {
        let piv = (r..rows).find(|&i| !a[i][c].is_zero())?;
        a.swap(r, piv);
        let p = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &p;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some(a[..n].iter().map(|row| row[n].clone()).collect())
}

fn has_full_column_rank(columns: &[Vec<Q>]) -> bool {
    let refs: Vec<&Vec<Q>> = columns.iter().collect();
    let rows = columns.first().map_or(0, Vec::len);
    // a zero right-hand side is always consistent, so `Some` iff independent
    solve_unique(&refs, &vec![Q::zero(); rows]).is_some()
}

/// First index from which the remaining columns are linearly independent.
fn independent_suffix(columns: &[Vec<Q>]) -> usize {
    (0..=columns.len())
        .find(|&i| has_full_column_rank(&columns[i..]))
        .unwrap_or(columns.len())
}

struct Search<'a> {
    columns: &'a [Vec<Q>],
    weights: &'a [Q],
    bounds: &'a [u64],
    target: Vec<Q>,
    total: &'a Q,
    solve_from: usize,
}

impl Search<'_> {
    fn run(&self, idx: usize, partial: &[Q], used: &Q, counts: &mut Vec<u64>, found: &mut Vec<Vec<u64>>) {
        if idx == self.solve_from {
            // remaining multiplicities are determined by the residual class
            let rhs: Vec<Q> = self.target.iter().zip(partial).map(|(t, p)| t - p).collect();
            let cols: Vec<&Vec<Q>> = self.columns[idx..].iter().collect();
            let Some(xs) = solve_unique(&cols, &rhs) else {
                return;
            };
            for (j, x) in xs.iter().enumerate() {
                if !x.is_integer() || x.is_negative() {
                    return;
                }
                match x.to_integer().to_u64() {
                    Some(k) if k <= self.bounds[idx + j] => counts[idx + j] = k,
                    _ => return,
                }
            }
            found.push(counts.clone());
            counts[idx..].iter_mut().for_each(|k| *k = 0);
            return;
        }
        let mut acc = partial.to_vec();
        let mut spent = used.clone();
        for k in 0..=self.bounds[idx] {
            if &spent > self.total {
                break;
            }
            counts[idx] = k;
            self.run(idx + 1, &acc, &spent, counts, found);
            for (a, c) in acc.iter_mut().zip(&self.columns[idx]) {
                *a += c;
            }
            spent += &self.weights[idx];
        }
        counts[idx] = 0;
    }
}
