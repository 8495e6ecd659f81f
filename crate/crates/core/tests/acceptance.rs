//! Acceptance checks, one PASS/FAIL line per criterion. Every comparison is
//! exact. Derived values come from `fixtures/derived.json`, produced by the
//! independent oracle in `tools/derive_fixtures.py`.

use std::process::ExitCode;

use num_traits::Zero;
use perverse_stab::catalog::{
    b_range_report, published_b_range, simples, solve_b_range, twisted_ch3_poly, BRange, Endpoint, QuadExtNumber,
    QuadPoly,
};
use perverse_stab::charges::z_surface;
use perverse_stab::chern::{
    euler_pairing_surface, grr_push_divisor, grr_push_exceptional_curve, grr_push_fiber_line, twist,
    DivisorSheafData, ExceptionalSurface,
};
use perverse_stab::inequalities::{bg_discriminant, bg_strong_margin, bg_weak_surface};
use perverse_stab::rational::parse_q;
use perverse_stab::sequiv::{decompose, decompose_with_bound_scale, MultiplicityVector};
use perverse_stab::slopes::{trichotomy, Trichotomy};
use perverse_stab::walls::{solve_wall_param, stability_verdict, ModuliName, ModuliObject, Verdict, WallSolution};
use perverse_stab::{make_model, ChernVector, ContractionKind, ContractionModel, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;

const FIXTURE: &str = include_str!("fixtures/derived.json");

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn surd(p: Q, c: Q, d: i64) -> QuadExtNumber {
    QuadExtNumber::new(p, c, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(kind: ContractionKind) -> ContractionModel {
    make_model(kind, q(1)).expect("model")
}

fn surface_class(m: &ContractionModel, r: Q, x: Q, a: Q, n: Q) -> ChernVector {
    m.class(r, vec![x, a], vec![n], None).expect("surface class")
}

fn fixture() -> Value {
    serde_json::from_str(FIXTURE).expect("fixture JSON")
}

fn fixture_q(v: &Value) -> Q {
    parse_q(v.as_str().expect("rational string")).expect("rational")
}

fn fixture_endpoint(v: &Value) -> Endpoint {
    match v {
        Value::String(s) if s == "-inf" => Endpoint::NegInf,
        Value::String(s) if s == "+inf" => Endpoint::PosInf,
        Value::Object(o) => {
            Endpoint::Finite(surd(fixture_q(&o["p"]), fixture_q(&o["q"]), o["d"].as_i64().expect("d")))
        }
        other => panic!("bad endpoint {other}"),
    }
}

fn fixture_range(kind: &str) -> Vec<(Endpoint, Endpoint)> {
    fixture()[kind]["b_range"]
        .as_array()
        .expect("b_range")
        .iter()
        .map(|iv| (fixture_endpoint(&iv["lo"]), fixture_endpoint(&iv["hi"])))
        .collect()
}

fn pairs(r: &BRange) -> Vec<(Endpoint, Endpoint)> {
    r.intervals().iter().map(|iv| (iv.lo.clone(), iv.hi.clone())).collect()
}

fn fin(x: QuadExtNumber) -> Endpoint {
    Endpoint::Finite(x)
}

fn show(r: &[(Endpoint, Endpoint)]) -> String {
    let f = |e: &Endpoint| match e {
        Endpoint::Finite(x) => x.to_string(),
        Endpoint::NegInf => "-inf".into(),
        Endpoint::PosInf => "+inf".into(),
    };
    r.iter().map(|(a, b)| format!("({}, {})", f(a), f(b))).collect::<Vec<_>>().join(" U ")
}

/// 1. Surface charges of O_C, O_C(-1)[1] and a point.
fn criterion_1() -> Check {
    let s = model(ContractionKind::SurfaceBlowdown);
    let oc = grr_push_exceptional_curve(&s, 0).map_err(|e| e.to_string())?;
    let ocm1 = grr_push_exceptional_curve(&s, -1).map_err(|e| e.to_string())?.shift(1);
    let cases = [("O_C", oc, qf(-1, 2)), ("O_C(-1)[1]", ocm1, qf(-1, 2)), ("O_x", s.point_class(), q(-1))];
    for (name, v, expected) in &cases {
        let z = z_surface(&s, v).map_err(|e| e.to_string())?;
        ensure(&z.re == expected && z.im.is_zero(), || format!("Z({name}) = {} + {} i, expected {expected}", z.re, z.im))?;
    }
    Ok("Z(O_C) = Z(O_C(-1)[1]) = -1/2, Z(O_x) = -1".into())
}

/// 2. b-ranges of types I, II, III, V (published values), TIII = TV, and
/// agreement with the oracle fixture.
fn criterion_2() -> Check {
    use ContractionKind::*;
    let s6 = |sign: i64| surd(q(1), qf(sign, 6), 6);
    let s13 = |sign: i64| surd(qf(7, 6), qf(sign, 6), 13);
    let expected: Vec<(ContractionKind, Vec<(Endpoint, Endpoint)>)> = vec![
        (TI, vec![(fin(QuadExtNumber::rational(qf(1, 2))), fin(QuadExtNumber::rational(qf(3, 2))))]),
        (TII, vec![(fin(surd(q(2), qf(-1, 3), 6)), fin(surd(q(2), qf(1, 3), 6)))]),
        (TIII, vec![(fin(s13(-1)), fin(s6(-1))), (fin(s6(1)), fin(s13(1)))]),
        (TV, vec![(fin(s13(-1)), fin(s6(-1))), (fin(s6(1)), fin(s13(1)))]),
    ];
    for (kind, want) in &expected {
        let got = pairs(&solve_b_range(&model(*kind)).map_err(|e| e.to_string())?);
        ensure(&got == want, || format!("{kind}: derived {} expected {}", show(&got), show(want)))?;
        let oracle = fixture_range(kind.label());
        ensure(got == oracle, || format!("{kind}: derived {} oracle {}", show(&got), show(&oracle)))?;
    }
    let t3 = solve_b_range(&model(TIII)).map_err(|e| e.to_string())?;
    let t5 = solve_b_range(&model(TV)).map_err(|e| e.to_string())?;
    ensure(t3 == t5, || "TIII and TV ranges differ".into())?;
    Ok("TI, TII, TIII (via GRR), TV match published endpoints; TIII = TV".into())
}

/// 3. Type IV: lower endpoint exact, upper endpoint reported with the
/// published one, discrepancy flagged with exit code 2.
fn criterion_3() -> Check {
    let m = model(ContractionKind::TIV);
    let lower = surd(qf(3, 4), qf(1, 12), 15);
    let derived = solve_b_range(&m).map_err(|e| e.to_string())?;
    let iv = derived
        .intervals()
        .iter()
        .find(|iv| iv.lo == fin(lower.clone()))
        .ok_or_else(|| format!("no derived interval starts at {lower}: {derived}"))?;
    let oracle = fixture_range("TIV");
    ensure(pairs(&derived) == oracle, || format!("derived {derived} oracle {}", show(&oracle)))?;
    let published_hi = fin(surd(qf(4, 5), qf(1, 6), 6));
    let published = published_b_range(ContractionKind::TIV).ok_or("no published TIV range")?;
    ensure(published.intervals()[0].hi == published_hi, || "published TIV upper endpoint".into())?;
    let report = b_range_report(&m).map_err(|e| e.to_string())?;
    ensure(report.has_discrepancy(), || "discrepancy not flagged".into())?;
    let notes = report.discrepancies.join("; ");
    ensure(notes.contains("sqrt(141)") && notes.contains("sqrt(6)"), || format!("notes lack both endpoints: {notes}"))?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = perverse_stab::cli::run_with(["perverse-stab", "brange", "--kind", "TIV"], &mut out, &mut err);
    ensure(code == 2, || format!("CLI exit code {code}, expected 2"))?;
    let doc: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure(doc["discrepancy"] == Value::Bool(true) && doc["published"].is_array(), || "CLI JSON lacks discrepancy".into())?;
    let Endpoint::Finite(hi) = &iv.hi else { return Err("unbounded TIV range".into()) };
    Ok(format!("lower 3/4 + sqrt(15)/12 exact; derived upper {hi} vs published 4/5 + sqrt(6)/6 flagged, exit 2"))
}

/// 4. Type V twisted ch3 polynomials in c = 1 - b.
fn criterion_4() -> Check {
    let m = model(ContractionKind::TV);
    let want = [
        ("O_D(-2)[2]", QuadPoly::new(q(1), q(1), qf(1, 3))),
        ("S_5(-1)[1]", QuadPoly::new(q(-3), q(-1), q(1))),
        ("O_D(-3C)", QuadPoly::new(q(1), q(0), qf(-1, 6))),
    ];
    let catalog = simples(&m).map_err(|e| e.to_string())?;
    for (name, expected) in &want {
        let s = catalog.iter().find(|s| s.name == *name).ok_or_else(|| format!("{name} missing"))?;
        let in_b = twisted_ch3_poly(&m, s).map_err(|e| e.to_string())?;
        let in_c = in_b.substitute_affine(&q(1), &q(-1));
        ensure(&in_c == expected, || format!("{name}: {in_c} expected {expected}"))?;
        let oracle: Vec<Q> = fixture()["TV"]["simples"][*name]["poly"]
            .as_array()
            .expect("poly")
            .iter()
            .map(fixture_q)
            .collect();
        ensure(oracle == [in_b.q2.clone(), in_b.q1.clone(), in_b.q0.clone()], || format!("{name}: oracle disagrees"))?;
    }
    Ok("c^2 + c + 1/3, -3c^2 - c + 1, c^2 - 1/6".into())
}

fn mv(pairs: &[(&str, u64)]) -> MultiplicityVector {
    MultiplicityVector::from_pairs(pairs.iter().copied())
}

/// 5. S-equivalence systems for type V and the surface.
fn criterion_5() -> Check {
    let tv = model(ContractionKind::TV);
    let s = model(ContractionKind::SurfaceBlowdown);
    let cases = [
        (&tv, qf(3, 2), vec![mv(&[("point", 1)]), mv(&[("O_D(-2)[2]", 1), ("S_5(-1)[1]", 1), ("O_D(-3C)", 2)])]),
        (&s, q(0), vec![mv(&[("point", 1)]), mv(&[("O_C", 1), ("O_C(-1)[1]", 1)])]),
    ];
    for (m, b, want) in &cases {
        let d = decompose(m, &m.point_class(), b).map_err(|e| e.to_string())?;
        ensure(&d.solutions == want, || format!("{}: {:?}", m.kind(), d.solutions))?;
        let doubled = decompose_with_bound_scale(m, &m.point_class(), b, 2).map_err(|e| e.to_string())?;
        ensure(doubled.solutions == d.solutions, || format!("{}: doubled bounds changed the result", m.kind()))?;
    }
    // the type V answer does not depend on where in the range b sits
    for b in solve_b_range(&tv).map_err(|e| e.to_string())?.sample_rationals(3) {
        let d = decompose(&tv, &tv.point_class(), &b).map_err(|e| e.to_string())?;
        ensure(d.solutions == cases[0].2, || format!("TV at b = {b}: {:?}", d.solutions))?;
    }
    Ok("TV: {point}, (1,1,2); surface: {point}, {O_C, O_C(-1)[1]}; doubled bounds identical".into())
}

/// 6. Wall verdict table and wall location.
fn criterion_6() -> Check {
    use Verdict::*;
    let s = model(ContractionKind::SurfaceBlowdown);
    let table = [
        (ModuliName::OxOnC, [Stable, StrictlySemistable, Unstable]),
        (ModuliName::LfO0, [Unstable, StrictlySemistable, Stable]),
        (ModuliName::OcPlusOcm1, [Unstable, StrictlySemistable, Unstable]),
    ];
    for (name, row) in table {
        let obj = ModuliObject::build(&s, name).map_err(|e| e.to_string())?;
        for (t, want) in [q(-1), q(0), q(1)].iter().zip(row) {
            let got = stability_verdict(&s, &obj, t).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{name} at t = {t}: {got}, expected {want}"))?;
        }
    }
    let oc = grr_push_exceptional_curve(&s, 0).map_err(|e| e.to_string())?;
    let ocm1 = grr_push_exceptional_curve(&s, -1).map_err(|e| e.to_string())?.shift(1);
    let w = solve_wall_param(&s, &oc, &ocm1).map_err(|e| e.to_string())?;
    ensure(w == WallSolution::Roots(vec![q(0)]), || format!("wall {w:?}"))?;
    Ok("9/9 verdicts match; wall(O_C, O_C(-1)[1]) = {0}".into())
}

/// 7. Euler-pairing identities on random surface classes.
fn criterion_7() -> Check {
    let s = model(ContractionKind::SurfaceBlowdown);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let oc = surface_class(&s, q(0), q(0), q(1), qf(1, 2));
    let ox = surface_class(&s, q(1), q(0), q(0), q(0));
    for i in 0..200 {
        let (r, x, a) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let n = qf(rng.gen_range(-24..=24), rng.gen_range(1..=6));
        // C . (x f*w + a C) = -a
        let e = surface_class(&s, q(r), q(x), q(a), n.clone());
        let lhs = euler_pairing_surface(&s, &oc, &e).map_err(|e| e.to_string())?;
        ensure(lhs == q(a), || format!("case {i}: chi(O_C, E) = {lhs}, expected {a}"))?;
        // fibre-supported T: rank 0, ch1 in Q.C
        let t = surface_class(&s, q(0), q(0), q(a), n.clone());
        let lhs = euler_pairing_surface(&s, &ox, &t).map_err(|e| e.to_string())?;
        let rhs = &n + qf(a, 2);
        ensure(lhs == rhs, || format!("case {i}: chi(O_X, T) = {lhs}, expected {rhs}"))?;
    }
    Ok("200/200 for chi(O_C, E) = -C.ch1(E) and chi(O_X, T) = ch2(T) - C.ch1(T)/2".into())
}

/// 8. BG implications on random classes and the equality cases of the
/// strengthened inequality among catalog classes.
fn criterion_8() -> Check {
    let s = model(ContractionKind::SurfaceBlowdown);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut nonneg = 0;
    for i in 0..500 {
        let v = surface_class(
            &s,
            q(rng.gen_range(-5..=5)),
            q(rng.gen_range(-5..=5)),
            q(rng.gen_range(-5..=5)),
            qf(rng.gen_range(-30..=30), 2),
        );
        let disc = bg_discriminant(&s, &v).map_err(|e| e.to_string())?;
        let weak = bg_weak_surface(&s, &v).map_err(|e| e.to_string())?;
        if disc.holds {
            nonneg += 1;
            ensure(weak.holds, || format!("case {i}: discriminant {} >= 0 but weak margin {}", disc.margin, weak.margin))?;
        }
    }
    let catalog = simples(&s).map_err(|e| e.to_string())?;
    for c_omega in [q(0), qf(1, 2), q(3)] {
        for entry in &catalog {
            let v = entry.shifted();
            for (label, w) in [("+", v.clone()), ("-", v.shift(1))] {
                let margin = bg_strong_margin(&s, &w, &c_omega, &q(-1)).map_err(|e| e.to_string())?.margin;
                let oc_type = entry.name.starts_with("O_C");
                ensure(margin.is_zero() == oc_type, || {
                    format!("{label}{}: margin {margin} with C_omega = {c_omega}", entry.name)
                })?;
            }
        }
    }
    Ok(format!("implication held on {nonneg}/500 classes with nonnegative discriminant; equality exactly on +-O_C-type"))
}

/// 9. Twist group law and the projection formula on catalog building blocks.
fn criterion_9() -> Check {
    use ContractionKind::*;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rq = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| qf(rng.gen_range(lo..=hi), rng.gen_range(1..=6));
    for i in 0..100 {
        let kind = ContractionKind::THREEFOLDS[rng.gen_range(0..5)];
        let m = model(kind);
        let ch2: Vec<Q> = (0..m.ch2_len()).map(|_| rq(&mut rng, -12, 12)).collect();
        let v = m
            .class(rq(&mut rng, -6, 6), vec![rq(&mut rng, -6, 6), rq(&mut rng, -6, 6)], ch2, Some(rq(&mut rng, -12, 12)))
            .map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let (b1, b2) = (rq(&mut rng, -12, 12), rq(&mut rng, -12, 12));
            let lhs = twist(&m, &twist(&m, &v, &b2).map_err(|e| e.to_string())?, &b1).map_err(|e| e.to_string())?;
            let rhs = twist(&m, &v, &(&b1 + &b2)).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("class {i} ({kind}): group law fails at b1 = {b1}, b2 = {b2}"))?;
        }
    }
    let mut blocks = 0;
    for kind in [TII, TIII, TIV] {
        let m = model(kind);
        let s = ExceptionalSurface::of(&m).map_err(|e| e.to_string())?;
        let g = s.generators.len();
        let o = DivisorSheafData::structure_sheaf(&s);
        let unit = |i: usize, k: i64| -> Vec<Q> { (0..g).map(|j| if i == j { q(k) } else { q(0) }).collect() };
        let mut sheaves = vec![o.clone()];
        for i in 0..g {
            for k in -3..=1 {
                sheaves.push(DivisorSheafData::line_bundle(&s, unit(i, k)));
            }
        }
        if g == 1 {
            let omega = DivisorSheafData::line_bundle(&s, unit(0, -1)).combine(3, &o, -1);
            sheaves.push(omega.clone());
            sheaves.push(omega.combine(3, &DivisorSheafData::line_bundle(&s, unit(0, -1)), -1));
        } else {
            let l = |a, b| DivisorSheafData::line_bundle(&s, vec![q(a), q(b)]);
            sheaves.push(l(-1, 0).combine(2, &l(0, -1), 2).combine(1, &o, -1));
        }
        for f in &sheaves {
            let base = grr_push_divisor(&m, f).map_err(|e| e.to_string())?;
            for k in -2..=2 {
                let restricted: Vec<Q> = s.normal.iter().map(|x| x * q(k)).collect();
                let lhs = grr_push_divisor(&m, &f.tensor_line(&s, &restricted)).map_err(|e| e.to_string())?;
                let rhs = twist(&m, &base, &q(-k)).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("{kind}: projection formula fails for {f:?} with k = {k}"))?;
            }
            blocks += 1;
        }
    }
    // fibre of type I: D.L = -1
    let ti = model(TI);
    for j in -4..=4 {
        for k in -2..=2 {
            let lhs = grr_push_fiber_line(&ti, j - k).map_err(|e| e.to_string())?;
            let rhs = twist(&ti, &grr_push_fiber_line(&ti, j).map_err(|e| e.to_string())?, &q(-k))
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("TI: projection formula fails for O_L({j}) with k = {k}"))?;
        }
        blocks += 1;
    }
    // type V: the catalog entries are the printed vectors tensored with O_X(D)
    let tv = model(TV);
    let printed = perverse_stab::catalog::type_v_base_vectors(&tv).map_err(|e| e.to_string())?;
    let catalog = simples(&tv).map_err(|e| e.to_string())?;
    for (p, s) in printed.iter().zip(&catalog) {
        let rhs = twist(&tv, p, &q(-1)).map_err(|e| e.to_string())?;
        ensure(s.chern == rhs, || format!("TV: {} is not e^D times its printed vector", s.name))?;
        blocks += 1;
    }
    Ok(format!("2000/2000 group-law cases; projection formula on {blocks} building blocks"))
}

/// 10. Trichotomy on catalog classes and the two boundary examples.
fn criterion_10() -> Check {
    let mut n = 0;
    for kind in ContractionKind::THREEFOLDS {
        let m = model(kind);
        let range = solve_b_range(&m).map_err(|e| e.to_string())?;
        let catalog = simples(&m).map_err(|e| e.to_string())?;
        for b in range.sample_rationals(4) {
            for s in &catalog {
                let t = trichotomy(&m, &b, &s.shifted()).map_err(|e| e.to_string())?;
                ensure(t == Trichotomy::CaseC, || format!("{kind}: {} at b = {b} is {}", s.name, t.label()))?;
                n += 1;
            }
            let neg_rank = m.class(q(-1), vec![q(0), q(0)], vec![q(0); m.ch2_len()], Some(q(0))).map_err(|e| e.to_string())?;
            let t = trichotomy(&m, &b, &neg_rank).map_err(|e| e.to_string())?;
            ensure(t == Trichotomy::CaseB, || format!("{kind}: (-1,0,0,0) is {}", t.label()))?;
            let fw = m.class(q(0), m.fw(), vec![q(0); m.ch2_len()], Some(q(0))).map_err(|e| e.to_string())?;
            let t = trichotomy(&m, &b, &fw).map_err(|e| e.to_string())?;
            ensure(t == Trichotomy::CaseA, || format!("{kind}: (0,f*w,0,0) is {}", t.label()))?;
        }
    }
    Ok(format!("{n} catalog cases in CaseC; (-1,0,0,0) CaseB; (0,f*w,0,0) CaseA"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("surface charge values", criterion_1),
        ("b-range reproduction", criterion_2),
        ("type IV endpoints and discrepancy", criterion_3),
        ("type V twisted ch3 polynomials", criterion_4),
        ("S-equivalence systems", criterion_5),
        ("wall verdict table", criterion_6),
        ("Euler-pairing identities", criterion_7),
        ("BG suite properties", criterion_8),
        ("twist group law and projection formula", criterion_9),
        ("trichotomy", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS  {:>2}. {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {title}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
