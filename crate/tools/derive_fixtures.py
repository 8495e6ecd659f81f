"""Independent oracle for the catalog fixtures.

Computes, for every simple object of types I-V, the twisted top degree
(-1)^shift * ch3^{bD} as a polynomial in b, and the b-range on which all of
them are positive.  The route is deliberately different from the library:

* types II-IV work on the exceptional divisor itself,
  ch3^{bD}(i_*F) = int_D e^{-b n} ch(F) td(N)^{-1},  n = c1(O_D(D)),
  with ch(F) obtained from Chern classes / K-theory sequences in a
  truncated Chow ring of D;
* type I uses GRR on the fibre line L with N = O + O(-1);
* type V starts from the X-level vectors of i_*O_D(-1), i_*S_5, i_*O_D(-C)
  and twists them by O_X(D) on X.

Output: crates/core/tests/fixtures/derived.json (rationals as "p/q").

    python3 tools/derive_fixtures.py
"""

import json
import pathlib

import sympy as sp

b = sp.Symbol("b", real=True)


class Chow:
    """Q-valued Chow ring of a surface truncated above degree 2."""

    def __init__(self, gens, integral):
        self.gens = gens
        self.integral = integral  # dict: monomial (tuple of exponents) -> number

    def truncate(self, expr):
        poly = sp.Poly(sp.expand(expr), *self.gens)
        return sum(
            (c * sp.Mul(*[g**e for g, e in zip(self.gens, m)]) for m, c in poly.terms() if sum(m) <= 2),
            sp.Integer(0),
        )

    def mul(self, *xs):
        out = sp.Integer(1)
        for x in xs:
            out = self.truncate(out * x)
        return out

    def exp(self, x):
        return self.truncate(1 + x + x**2 / 2)

    def degree(self, expr, k):
        poly = sp.Poly(sp.expand(expr), *self.gens)
        return sum(
            (c * sp.Mul(*[g**e for g, e in zip(self.gens, m)]) for m, c in poly.terms() if sum(m) == k),
            sp.Integer(0),
        )

    def integrate(self, expr):
        poly = sp.Poly(sp.expand(self.degree(expr, 2)), *self.gens)
        return sum((c * self.integral[m] for m, c in poly.terms()), sp.Integer(0))


def ch_line(ring, c1):
    return ring.exp(c1)


def ch_bundle(ring, rank, c1, c2):
    return ring.truncate(rank + c1 + (c1**2 - 2 * c2) / 2)


def twisted_top_on_divisor(ring, ch_f, n, shift):
    td_inv = ring.truncate(1 - n / 2 + n**2 / 6)
    integrand = ring.mul(ring.exp(-b * n), ch_f, td_inv)
    return sp.expand((-1) ** shift * ring.integrate(integrand))


def pushed_vector(ring, ch_f, n):
    """(rank, degree-1 part, degree-2 number) of ch(F) td(N)^{-1}."""
    td_inv = ring.truncate(1 - n / 2 + n**2 / 6)
    prod = ring.mul(ch_f, td_inv)
    return ring.degree(prod, 0), ring.degree(prod, 1), ring.integrate(prod)


def p2_simples(kind):
    H = sp.Symbol("H")
    ring = Chow([H], {(2,): 1})
    n = -H if kind == "TII" else -2 * H
    # Omega_P2 from the Euler sequence: c(Omega) = (1 - H)^3
    omega = ch_bundle(ring, 2, -3 * H, 3 * H**2)
    omega_m1 = ring.mul(omega, ch_line(ring, -H))
    out = [("O_P2(-3)[2]", ch_line(ring, -3 * H), 2)]
    if kind == "TII":
        out += [("Omega_P2(-1)[1]", omega_m1, 1), ("O_P2(-2)", ch_line(ring, -2 * H), 0)]
    else:
        # 0 -> S_4 -> Omega^3 -> O(-1) -> 0
        s4 = ring.truncate(3 * omega - ch_line(ring, -H))
        out += [("S_4(-1)[1]", ring.mul(s4, ch_line(ring, -H)), 1), ("Omega_P2(-1)", omega_m1, 0)]
    return ring, n, out, {H: "l"}


def p1p1_simples():
    H1, H2 = sp.symbols("H1 H2")
    ring = Chow([H1, H2], {(1, 1): 1, (2, 0): 0, (0, 2): 0})
    n = -H1 - H2
    line = lambda x, y: ch_line(ring, x * H1 + y * H2)
    # 0 -> S_3 -> O(-1,0)^2 + O(0,-1)^2 -> O -> 0
    s3 = ring.truncate(2 * line(-1, 0) + 2 * line(0, -1) - line(0, 0))
    out = [
        ("O(-2,-2)[2]", line(-2, -2), 2),
        ("S_3(-1,-1)[1]", ring.mul(s3, line(-1, -1)), 1),
        ("O(-1,-2)", line(-1, -2), 0),
        ("O(-2,-1)", line(-2, -1), 0),
    ]
    return ring, n, out, {H1: "C1", H2: "C2"}


def type_i():
    # ch(i_*O_L(k)) = (0, 0, L, k + 1/2); D.L = -1
    rows = {}
    for name, k, shift in [("O_L(-2)[1]", -2, 1), ("O_L(-1)", -1, 0)]:
        ch3 = sp.Rational(2 * k + 1, 2)
        ch3_b = ch3 - b * (-1)
        rows[name] = {
            "shift": shift,
            "pushed": {"D": "0", "curve": {"L": "1"}, "ch3": str(ch3)},
            "poly": sp.expand((-1) ** shift * ch3_b),
        }
    return rows


def type_v():
    # ruling C of the quadric cone: D.C = -1, D^3 = (c1(O_D(-1)))^2 = 1/2 * 4 = 2
    d_dot_c, d_cube = -1, 2
    printed = {  # (D-multiple, C-multiple, ch3) of ch(i_* .)
        "O_D(-1)": (1, -1, sp.Rational(1, 3)),
        "S_5": (3, -1, -1),
        "O_D(-C)": (1, 0, sp.Rational(-1, 6)),
    }

    def twist_by(vec, t):
        """e^{tD} . (0, kD, cC, ch3)"""
        k, c, ch3 = vec
        t = sp.sympify(t)
        # D.(kD) = k D^2, and D^2 = -2C as a curve class since O_D(D) = O_D(-1) = O_D(-2C)
        c_new = c + t * k * (-2)
        ch3_new = ch3 + t * c * d_dot_c + t**2 / 2 * k * d_cube
        return (k, sp.expand(c_new), sp.expand(ch3_new))

    rows = {}
    for name, base, shift in [("O_D(-2)[2]", "O_D(-1)", 2), ("S_5(-1)[1]", "S_5", 1), ("O_D(-3C)", "O_D(-C)", 0)]:
        # (.)(-1) and (-2C) are both restrictions of O_X(D)
        k, c, ch3 = twist_by(printed[base], 1)
        twisted = twist_by((k, c, ch3), -b)
        rows[name] = {
            "shift": shift,
            "pushed": {"D": str(k), "curve": {"C": str(c)}, "ch3": str(ch3)},
            "poly": sp.expand((-1) ** shift * twisted[2]),
        }
    return rows


def divisor_rows(ring, n, simples, labels):
    rows = {}
    for name, ch_f, shift in simples:
        rank, deg1, deg2 = pushed_vector(ring, ch_f, n)
        curve = {labels[g]: str(sp.Poly(deg1, g).coeff_monomial(g)) for g in labels}
        rows[name] = {
            "shift": shift,
            "pushed": {"D": str(rank), "curve": curve, "ch3": str(deg2)},
            "poly": twisted_top_on_divisor(ring, ch_f, n, shift),
        }
    return rows


def surd(x):
    x = sp.radsimp(sp.nsimplify(x))
    if x.is_rational:
        return {"p": str(x), "q": "0", "d": 1}
    p, rest = x.as_coeff_Add()
    q, root = rest.as_coeff_Mul()
    d = sp.Integer(root**2)
    assert sp.simplify(p + q * sp.sqrt(d) - x) == 0 and d.is_integer
    return {"p": str(p), "q": str(q), "d": int(d)}


def endpoint(x):
    if x == -sp.oo:
        return "-inf"
    if x == sp.oo:
        return "+inf"
    return surd(x)


def b_range(polys):
    region = sp.S.Reals
    for poly in polys:
        region = region.intersect(sp.solveset(poly > 0, b, sp.S.Reals))
    parts = region.args if isinstance(region, sp.Union) else (region,)
    out = []
    for iv in sorted(parts, key=lambda s: float(s.inf)):
        assert isinstance(iv, sp.Interval) and iv.left_open and iv.right_open
        out.append({"lo": endpoint(iv.inf), "hi": endpoint(iv.sup)})
    return out


def main():
    kinds = {
        "TI": type_i(),
        "TII": divisor_rows(*p2_simples("TII")),
        "TIII": divisor_rows(*p1p1_simples()),
        "TIV": divisor_rows(*p2_simples("TIV")),
        "TV": type_v(),
    }
    doc = {}
    for kind, rows in kinds.items():
        polys = [r["poly"] for r in rows.values()]
        doc[kind] = {
            "simples": {
                name: {
                    "shift": r["shift"],
                    "pushed": r["pushed"],
                    "poly": [str(sp.Poly(r["poly"], b).coeff_monomial(b**k)) for k in (2, 1, 0)],
                }
                for name, r in rows.items()
            },
            "b_range": b_range(polys),
        }
    path = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/derived.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
