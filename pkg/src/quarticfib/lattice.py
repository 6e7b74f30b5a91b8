"""Intersection-number bookkeeping: Gram matrices of divisor classes on the
surfaces built from a fibration, and a small Schubert calculus engine on the
Grassmannian of lines G(1, n)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import sympy

__all__ = [
    "LatticeError",
    "GramMatrix",
    "SchubertClass",
    "quartic_gram",
    "general_gram",
    "general_gram_formula",
    "symbolic_quartic_det",
    "symbolic_general_det",
    "line_count_class",
    "fano_curve_degree",
    "cone_census_identity",
    "pushpull_check",
    "line_self_intersection",
    "schubert_mul",
]


class LatticeError(ValueError):
    pass


def _det(m):
    return sympy.Matrix(m).det()


@dataclass
class GramMatrix:
    labels: tuple
    entries: list
    determinant: object
    verdict: str
    constraints: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "labels": list(self.labels),
            "matrix": [[str(x) for x in row] for row in self.entries],
            "det": str(self.determinant),
            "independent": self.verdict == "independent",
            "constraints": self.constraints,
        }


def _exact(x):
    if isinstance(x, sympy.Basic):
        return x
    return sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)


def _gram_quartic(s):
    # rows and columns: gamma (pulled-back hyperplane), phi (fiber), sigma (section)
    return [[12, 3, 1], [3, 0, 1], [1, 1, s]]


def symbolic_quartic_det():
    s = sympy.Symbol("sigma2")
    return sympy.expand(_det(_gram_quartic(s))), s


def quartic_gram(sigma_sq):
    """Gram matrix on (gamma, phi, sigma) with sigma^2 given; det = -6 - 9 sigma^2."""
    s = _exact(sigma_sq)
    d = sympy.nsimplify(_det(_gram_quartic(s)))
    constraints = {"sigma_sq_lt_-2": bool(s < -2)}
    if not constraints["sigma_sq_lt_-2"]:
        constraints["violation"] = "sigma^2 must be < -2"
    return GramMatrix(
        ("gamma", "phi", "sigma"),
        _gram_quartic(s),
        d,
        "independent" if d != 0 else "dependent",
        constraints,
    )


def _gram_general(m, b, c):
    # rows and columns: phi (fiber), sigma (section), rho (second section class)
    return [[0, 1, m - 1], [1, -b - c, c], [m - 1, c, -(m - 1) * b - c]]


def general_gram_formula(m, b, c):
    """The five-term expansion of the general determinant."""
    return c * (m - 1) + (m - 1) * b + c + c * (m - 1) + (b + c) * (m - 1) ** 2


def symbolic_general_det(m):
    b, c = sympy.symbols("b c")
    return sympy.expand(_det(_gram_general(m, b, c))), (b, c)


def general_gram(m, b, c):
    if int(m) != m or m < 2:
        raise LatticeError("the base change degree m must be an integer >= 2")
    m = int(m)
    b, c = _exact(b), _exact(c)
    d = sympy.nsimplify(_det(_gram_general(m, b, c)))
    constraints = {"b_nonneg": bool(b >= 0), "c_pos": bool(c > 0)}
    positive = d > 0
    if constraints["b_nonneg"] and constraints["c_pos"] and not positive:
        raise LatticeError("determinant not positive under b >= 0, c > 0")
    return GramMatrix(
        ("phi", "sigma", "rho"),
        _gram_general(m, b, c),
        d,
        "independent" if d != 0 else "dependent",
        constraints | {"det_positive": bool(positive)},
    )


def line_self_intersection(genus=0, K_dot_L=0):
    """Adjunction: L^2 = 2g - 2 - K.L (K trivial on a K3)."""
    return 2 * genus - 2 - K_dot_L


def pushpull_check(cover_degree, base_self_int):
    """(nu^* C . nu^* C) = deg(nu) * C^2 for a finite map nu of degree cover_degree.

    With degree 1 this is the statement that the pushforward of a section
    meeting the pullback of L is L itself, so the value is (L . L).
    """
    return cover_degree * _exact(base_self_int)


# ---------------------------------------------------------------------------
# Schubert calculus on G(1, n) = lines in P^n; classes sigma_{a,b}, n-1 >= a >= b >= 0


@dataclass
class SchubertClass:
    n: int
    coeffs: dict

    def __post_init__(self):
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}
        for a, b in self.coeffs:
            if not (self.n - 1 >= a >= b >= 0):
                raise LatticeError(f"partition {(a, b)} outside the 2 x {self.n - 1} box")

    @property
    def codim(self):
        degs = {a + b for a, b in self.coeffs}
        if len(degs) > 1:
            raise LatticeError("class is not homogeneous")
        return degs.pop() if degs else None

    @property
    def dimension(self):
        return 2 * (self.n - 1) - self.codim

    def __mul__(self, other):
        return schubert_mul(self, other)

    def __eq__(self, other):
        return isinstance(other, SchubertClass) and self.n == other.n and self.coeffs == other.coeffs

    def to_json(self):
        return {f"{a},{b}": v for (a, b), v in sorted(self.coeffs.items(), reverse=True)}

    def __str__(self):
        return " + ".join(f"{v}*s{a}{b}" for (a, b), v in sorted(self.coeffs.items(), reverse=True)) or "0"


def _pieri1(n, cls):
    out = {}
    for (a, b), v in cls.items():
        if a + 1 <= n - 1:
            out[(a + 1, b)] = out.get((a + 1, b), 0) + v
        if b + 1 <= a:
            out[(a, b + 1)] = out.get((a, b + 1), 0) + v
    return out


def _pieri11(n, cls):
    out = {}
    for (a, b), v in cls.items():
        if a + 1 <= n - 1:
            out[(a + 1, b + 1)] = out.get((a + 1, b + 1), 0) + v
    return out


def _mul_e(n, e1, e2, cls):
    for _ in range(e1):
        cls = _pieri1(n, cls)
    for _ in range(e2):
        cls = _pieri11(n, cls)
    return cls


def _giambelli(a, b):
    """sigma_{a,b} as a polynomial in e1 = sigma_1 and e2 = sigma_{1,1}.

    sigma_{a,b} = det [[h_a, h_{a+1}], [h_{b-1}, h_b]] with h the complete
    symmetric polynomials in the Chern roots, h_k = sum_j (-1)^j C(k-j, j) e1^(k-2j) e2^j.
    """
    e1, e2 = sympy.symbols("e1 e2")

    def h(k):
        if k < 0:
            return sympy.Integer(0)
        return sum((-1) ** j * comb(k - j, j) * e1 ** (k - 2 * j) * e2 ** j for j in range(k // 2 + 1))

    return sympy.expand(h(a) * h(b) - h(a + 1) * h(b - 1)), (e1, e2)


def schubert_mul(x: SchubertClass, y: SchubertClass) -> SchubertClass:
    if x.n != y.n:
        raise LatticeError("classes on different Grassmannians")
    n = x.n
    out = {}
    for (a, b), v in y.coeffs.items():
        poly, (e1, e2) = _giambelli(a, b)
        for (p, q), c in sympy.Poly(poly, e1, e2).terms():
            part = _mul_e(n, p, q, dict(x.coeffs))
            for k, w in part.items():
                out[k] = out.get(k, 0) + int(c) * v * w
    return SchubertClass(n, out)


def _top_chern_in_e(d):
    """prod_{i=0..d} (i x1 + (d-i) x2) written in e1 = x1 + x2, e2 = x1 x2."""
    x1, x2, e1, e2 = sympy.symbols("x1 x2 e1 e2")
    prod = sympy.Integer(1)
    for i in range(d + 1):
        prod *= i * x1 + (d - i) * x2
    poly = sympy.Poly(sympy.expand(prod), x1, x2)
    result = sympy.Integer(0)
    # peel leading terms x1^a x2^b (a >= b) by e1^(a-b) e2^b
    while not poly.is_zero:
        (a, b), c = max(poly.terms(), key=lambda t: (t[0][0], -t[0][1]))
        if a < b:
            raise LatticeError("product is not symmetric")
        term = c * e1 ** (a - b) * e2 ** b
        result += term
        poly = poly - sympy.Poly(sympy.expand(c * (x1 + x2) ** (a - b) * (x1 * x2) ** b), x1, x2)
    return sympy.Poly(result, e1, e2)


def line_count_class(n, d) -> SchubertClass:
    """Top Chern class of Sym^d of the dual tautological subbundle on G(1, n)."""
    if not (3 <= n <= 6 and 1 <= d <= 7):
        raise LatticeError("desk range is 3 <= n <= 6 and 1 <= d <= 7")
    grass_dim = 2 * (n - 1)
    if d + 1 > grass_dim:
        return SchubertClass(n, {})
    poly = _top_chern_in_e(d)
    out = {}
    for (p, q), c in poly.terms():
        part = _mul_e(n, p, q, {(0, 0): 1})
        for k, w in part.items():
            out[k] = out.get(k, 0) + int(c) * w
    return SchubertClass(n, out)


def fano_curve_degree(n, d):
    """Plucker degree of the one-dimensional scheme of lines on a degree-d hypersurface in P^n."""
    cls = line_count_class(n, d)
    dim = 2 * (n - 1) - (d + 1)
    if dim != 1:
        raise LatticeError(f"the line class for (n, d) = ({n}, {d}) has dimension {dim}, not 1")
    prod = schubert_mul(cls, SchubertClass(n, {(1, 0): 1}))
    return prod.coeffs.get((n - 1, n - 1), 0)


def cone_census_identity(sections=40, multiplicity=2, plane_quartic_degree=4):
    """Plucker degree accounted for by cone sections through exceptional lines."""
    return sections * multiplicity * plane_quartic_degree
