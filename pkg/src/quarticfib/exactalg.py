"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  On top of them this module provides
sparse multivariate polynomials (:class:`MPoly`), dense univariate polynomials
(:class:`UPoly`), rational functions in one variable (:class:`RatFunc`) and
simple ring extensions ``K[x]/(f)`` (:class:`ExtElement`).  Extensions may be
nested, since the base of an extension can be any exact field type here.

Groebner-basis work for zero-dimensional systems is delegated to sympy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import sympy

__all__ = [
    "AlgebraError",
    "NotDivisibleError",
    "NotInvertibleError",
    "DeskLimitError",
    "MPoly",
    "UPoly",
    "RatFunc",
    "ExtElement",
    "is_zero",
    "resultant",
    "discriminant",
    "factor_desk",
    "squarefree_decomposition",
    "det",
    "groebner",
    "quotient_dimension",
    "univariate_eliminant",
    "radical_zero_dim",
]

DESK_DEGREE = 12


class AlgebraError(ArithmeticError):
    pass


class NotDivisibleError(AlgebraError):
    pass


class NotInvertibleError(AlgebraError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class DeskLimitError(AlgebraError):
    pass


def is_zero(x):
    return x == 0


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"not a rational scalar: {c!r}")


# ---------------------------------------------------------------------------
# generic dense polynomials over an exact field, lists low -> high


def _fdiv(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return _ptrim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _ptrim(out)


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _pdivmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        c = _fdiv(r[-1], lead)
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        r = _ptrim(r[:-1]) if r[-1] == 0 else _ptrim(r)
    return _ptrim(q), r


def _pmonic(a):
    a = _ptrim(a)
    if not a:
        return a
    lead = a[-1]
    return [_fdiv(x, lead) for x in a]


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _pgcdex(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    if not r0:
        return [], [], []
    lead = r0[-1]
    return [_fdiv(x, lead) for x in r0], [_fdiv(x, lead) for x in s0], [_fdiv(x, lead) for x in t0]


def _pderiv(a):
    return _ptrim([a[i] * i for i in range(1, len(a))])


def _peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------


class UPoly:
    """Dense univariate polynomial over Q; ``coeffs`` low -> high."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var="x"):
        self.coeffs = tuple(_frac(c) for c in _ptrim([_frac(c) for c in coeffs]))
        self.var = var

    @classmethod
    def x(cls, var="x"):
        return cls([0, 1], var)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, UPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UPoly([other], self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UPoly(_padd(self.coeffs, other.coeffs), self.var)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UPoly(_psub(self.coeffs, other.coeffs), self.var)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UPoly(_pmul(self.coeffs, other.coeffs), self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = UPoly([1], self.var)
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        q, r = _pdivmod(self.coeffs, other.coeffs)
        return UPoly(q, self.var), UPoly(r, self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise NotDivisibleError(f"{other} does not divide {self}")
        return q

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        return _peval(self.coeffs, x)

    def deriv(self):
        return UPoly(_pderiv(self.coeffs), self.var)

    def monic(self):
        return UPoly(_pmonic(self.coeffs), self.var)

    def gcd(self, other):
        return UPoly(_pgcd(self.coeffs, other.coeffs), self.var)

    def content(self):
        """Positive rational c with self / c primitive integral."""
        if not self.coeffs:
            return Fraction(1)
        num = reduce(gcd, (c.numerator for c in self.coeffs))
        den = reduce(lcm, (c.denominator for c in self.coeffs))
        return Fraction(num, den)

    def primitive(self):
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lead < 0:
            c = -c
        return UPoly([x / c for x in self.coeffs], self.var)

    def to_mpoly(self, vars=None):
        vars = tuple(vars or (self.var,))
        k = vars.index(self.var)
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = [0] * len(vars)
                e[k] = i
                terms[tuple(e)] = c
        return MPoly(vars, terms)

    def __repr__(self):
        return f"UPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        return str(self.to_mpoly())


class RatFunc:
    """Element of Q(t): reduced quotient of UPolys with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, var=None):
        if not isinstance(num, UPoly):
            num = UPoly([num], var or "t")
        if den is None:
            den = UPoly([1], num.var)
        elif not isinstance(den, UPoly):
            den = UPoly([den], num.var)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den) if num else den.monic()
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.lead
        self.num = UPoly([c / lead for c in num.coeffs], num.var)
        self.den = UPoly([c / lead for c in den.coeffs], num.var)

    @classmethod
    def var(cls, name="t"):
        return cls(UPoly.x(name))

    @property
    def name(self):
        return self.num.var

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc(UPoly([other], self.name))
        if isinstance(other, UPoly):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


class ExtElement:
    """Element of ``K[x]/(f)`` for a monic squarefree ``f`` over an exact field K.

    ``modulus`` holds the coefficients of ``f`` low -> high (monic); ``coords``
    the coefficients of the representative of degree < deg f.
    """

    __slots__ = ("modulus", "coords", "name")

    def __init__(self, modulus, coords, name="x"):
        self.modulus = tuple(modulus)
        n = len(self.modulus) - 1
        coords = list(coords)
        if len(coords) > n:
            _, coords = _pdivmod(coords, list(self.modulus))
        coords = list(coords) + [0] * (n - len(coords))
        zero = self.modulus[-1] - self.modulus[-1]
        self.coords = tuple(c if c != 0 else zero for c in coords)
        self.name = name

    @classmethod
    def generator(cls, modulus, name="x", check=True):
        """The class of ``x`` in ``K[x]/(modulus)``; ``modulus`` low -> high."""
        modulus = [Fraction(c) if isinstance(c, int) else c for c in modulus]
        if len(modulus) < 2:
            raise AlgebraError("extension modulus must have degree >= 1")
        lead = modulus[-1]
        if lead != 1:
            modulus = [_fdiv(c, lead) for c in modulus]
        if check and len(_pgcd(modulus, _pderiv(modulus))) > 1:
            raise AlgebraError("extension modulus is not squarefree")
        if len(modulus) == 2:
            return -modulus[0]
        one = modulus[-1]
        zero = one - one
        return cls(modulus, [zero, one], name)

    @property
    def degree(self):
        return len(self.modulus) - 1

    def _lift(self, other):
        if isinstance(other, ExtElement) and other.modulus == self.modulus:
            return other.coords
        # anything else is a scalar of some subfield of the base
        return [other]

    def __add__(self, other):
        return ExtElement(self.modulus, _padd(self.coords, self._lift(other)) or [0], self.name)

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.modulus, [-c for c in self.coords], self.name)

    def __sub__(self, other):
        return ExtElement(self.modulus, _psub(self.coords, self._lift(other)) or [0], self.name)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        prod = _pmul(_ptrim(self.coords), _ptrim(self._lift(other)))
        if len(prod) > self.degree:
            prod = _pdivmod(prod, list(self.modulus))[1]
        return ExtElement(self.modulus, prod or [0], self.name)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = ExtElement(self.modulus, [self.modulus[-1]], self.name)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        a = _ptrim(self.coords)
        if not a:
            raise NotInvertibleError("inverse of zero in extension", witness=list(self.modulus))
        g, s, _ = _pgcdex(a, list(self.modulus))
        if len(g) != 1:
            raise NotInvertibleError(
                f"element shares the factor {g} with the modulus", witness=g
            )
        return ExtElement(self.modulus, s, self.name)

    def __truediv__(self, other):
        if isinstance(other, ExtElement) and other.modulus == self.modulus:
            return self * other.inverse()
        return ExtElement(self.modulus, [_fdiv(c, other) for c in self.coords], self.name)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, ExtElement):
            if other.modulus == self.modulus:
                return self.coords == other.coords
            if other.degree < self.degree or other.modulus != self.modulus:
                # other is a scalar of a subfield
                return all(c == 0 for c in self.coords[1:]) and self.coords[0] == other
        try:
            return all(c == 0 for c in self.coords[1:]) and self.coords[0] == other
        except TypeError:
            return False

    def __hash__(self):
        return hash((self.modulus, self.coords))

    def is_scalar(self):
        return all(c == 0 for c in self.coords[1:])

    def __repr__(self):
        return f"ExtElement({self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.name if i == 1 else f"{self.name}^{i}")
            cs = str(c)
            if mono and cs == "1":
                parts.append(mono)
            elif mono:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"({cs})")
        if len(parts) == 1 and parts[0].startswith("(") and not any(
            c != 0 for c in self.coords[1:]
        ):
            return str(self.coords[0])
        return " + ".join(parts) or "0"


# ---------------------------------------------------------------------------


class MPoly:
    """Sparse multivariate polynomial with rational coefficients.

    ``vars`` is the ordered variable list; ``terms`` maps exponent tuples to
    nonzero Fractions.  Term order for display and normalization is lex on the
    exponent tuples, largest first.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise AlgebraError(f"exponent {e} does not match variables {self.vars}")
            if any(k < 0 for k in e):
                raise AlgebraError(f"negative exponent {e}")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    # construction --------------------------------------------------------
    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, name):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def gens(cls, vars):
        return tuple(cls.var(vars, v) for v in vars)

    @classmethod
    def linear(cls, vars, coeffs):
        vars = tuple(vars)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * len(vars)
            e[i] = 1
            terms[tuple(e)] = c
        return cls(vars, terms)

    # basic protocol ------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                raise AlgebraError(f"incompatible variables {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms = dict(self.terms)
        for e, c in o.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        out = MPoly.__new__(MPoly)
        out.vars, out.terms = self.vars, terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MPoly.__new__(MPoly)
        out.vars, out.terms = self.vars, {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        out = MPoly.__new__(MPoly)
        out.vars, out.terms = self.vars, terms
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise AlgebraError("negative power of a polynomial")
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly(self.vars, {e: c / other for e, c in self.terms.items()})
        return self.exact_div(other)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * len(self.vars): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # inspection ----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def leading(self):
        """Lex-leading (exponent, coefficient)."""
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        k = self.vars.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def is_homogeneous(self, names=None):
        names = names or self.vars
        idx = [self.vars.index(n) for n in names]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        return len(degs) <= 1

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise AlgebraError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def variables_used(self):
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    # calculus and substitution ------------------------------------------
    def diff(self, name):
        k = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                terms[tuple(e2)] = c * e[k]
        return MPoly(self.vars, terms)

    def evaluate(self, values):
        """Evaluate at ``values`` (sequence aligned with ``vars`` or dict).

        Values may be any ring elements (Fractions, ExtElements, MPolys...).
        """
        if isinstance(values, dict):
            values = [values[v] for v in self.vars]
        values = list(values)
        powers = [dict() for _ in values]
        acc = 0
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = values[i] ** k
                        powers[i][k] = p
                    term = term * p
            acc = term + acc
        return acc

    def subs(self, mapping, vars=None):
        """Substitute polynomials/scalars for variables.

        ``mapping`` sends variable names to MPolys over the target variable
        list ``vars`` (default: unchanged) or to rational scalars.  Unmapped
        variables must exist in the target list and map to themselves.
        """
        target = tuple(vars or self.vars)
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, MPoly):
                    img = MPoly.const(target, img)
                elif img.vars != target:
                    img = img.with_vars(target)
            else:
                img = MPoly.var(target, v)
            images.append(img)
        result = self.evaluate(images)
        if not isinstance(result, MPoly):
            result = MPoly.const(target, result)
        return result

    def with_vars(self, vars):
        """Re-embed into a (super)list of variables."""
        vars = tuple(vars)
        idx = []
        for i, v in enumerate(self.vars):
            if v in vars:
                idx.append(vars.index(v))
            elif any(e[i] for e in self.terms):
                raise AlgebraError(f"variable {v} in use, missing from {vars}")
            else:
                idx.append(None)
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * len(vars)
            for i, k in enumerate(e):
                if idx[i] is not None:
                    e2[idx[i]] += k
            terms[tuple(e2)] = c
        return MPoly(vars, terms)

    def coefficients_in(self, names):
        """Collect by monomials in ``names``; coefficients are MPolys in the rest."""
        idx = [self.vars.index(n) for n in names]
        rest = tuple(v for v in self.vars if v not in names)
        ridx = [self.vars.index(v) for v in rest]
        out = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            sub = tuple(e[i] for i in ridx)
            d = out.setdefault(key, {})
            d[sub] = c
        return {k: MPoly(rest, d) for k, d in out.items()}

    def to_upoly(self, name=None):
        used = self.variables_used()
        if name is None:
            if len(used) > 1:
                raise AlgebraError(f"{self} is not univariate")
            name = used[0] if used else self.vars[0]
        elif any(v != name for v in used):
            raise AlgebraError(f"{self} is not univariate in {name}")
        k = self.vars.index(name)
        coeffs = [0] * (self.degree_in(name) + 1)
        for e, c in self.terms.items():
            coeffs[e[k]] = c
        return UPoly(coeffs, name)

    # division / normalization -------------------------------------------
    def exact_div(self, other):
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        q, r = self.divmod_lex(other)
        if r:
            raise NotDivisibleError(f"({other}) does not divide ({self})")
        return q

    def divmod_lex(self, other):
        lead_e, lead_c = other.leading()
        q = {}
        r = MPoly(self.vars, {})
        p = self
        while p:
            e, c = p.leading()
            if all(a >= b for a, b in zip(e, lead_e)):
                qe = tuple(a - b for a, b in zip(e, lead_e))
                qc = c / lead_c
                q[qe] = q.get(qe, 0) + qc
                p = p - other * MPoly(self.vars, {qe: qc})
            else:
                r = r + MPoly(self.vars, {e: c})
                p = p - MPoly(self.vars, {e: c})
        return MPoly(self.vars, q), r

    def content(self):
        if not self.terms:
            return Fraction(1)
        vals = list(self.terms.values())
        num = reduce(gcd, (c.numerator for c in vals))
        den = reduce(lcm, (c.denominator for c in vals))
        return Fraction(num, den)

    def primitive(self):
        """Integer-primitive form whose lex-first coefficient is positive."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return MPoly(self.vars, {e: v / c for e, v in self.terms.items()})

    # interop -------------------------------------------------------------
    def to_sympy(self, symbols=None):
        symbols = symbols or sympy.symbols(self.vars)
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(symbols, e):
                if k:
                    term *= s ** k
            expr += term
        return expr

    @classmethod
    def from_sympy(cls, expr, vars):
        vars = tuple(vars)
        poly = sympy.Poly(expr, *sympy.symbols(vars))
        terms = {}
        for e, c in poly.terms():
            c = sympy.Rational(c)
            terms[tuple(e)] = Fraction(int(c.p), int(c.q))
        return cls(vars, terms)

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# determinants, resultants, discriminants


def det(matrix):
    """Exact determinant of a square matrix over any commutative ring.

    Cofactor expansion for n <= 3, fraction-free Bareiss otherwise (needs an
    exact division: Fractions, MPoly.exact_div).
    """
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return m[0][0] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = _exact_quotient(num, prev)
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def _exact_quotient(a, b):
    if isinstance(b, int) and b == 1:
        return a
    if isinstance(a, MPoly):
        if isinstance(b, MPoly):
            if b.is_constant():
                return a / b.constant_value()
            return a.exact_div(b)
        return a / b
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise NotDivisibleError("Bareiss step not exact")
        return q
    return _fdiv(a, b)


def _coeff_list(f, name):
    """Coefficients of f in ``name`` (low -> high) as MPolys in the other variables."""
    if isinstance(f, UPoly):
        return list(f.coeffs), None
    coll = f.coefficients_in((name,))
    deg = f.degree_in(name)
    rest = tuple(v for v in f.vars if v != name)
    zero = MPoly(rest, {})
    return [coll.get((k,), zero) for k in range(deg + 1)], rest


def _simplify_scalar(x, rest):
    if rest is not None and isinstance(x, MPoly) and not rest:
        return x.constant_value()
    return x


def resultant(f, g, name=None):
    """Sylvester resultant of f and g with respect to ``name``."""
    if name is None:
        name = f.var if isinstance(f, UPoly) else f.variables_used()[0]
    a, rest = _coeff_list(f, name)
    b, _ = _coeff_list(g, name)
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        raise AlgebraError("resultant with the zero polynomial")
    size = m + n
    if size == 0:
        return 1
    zero = a[0] * 0
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return _simplify_scalar(det(rows), rest)


def discriminant(f, name=None):
    """Discriminant (-1)^(n(n-1)/2) Res(f, f') / lc(f) with respect to ``name``."""
    if isinstance(f, UPoly):
        if not f:
            raise AlgebraError("discriminant of the zero polynomial")
        if f.degree < 1:
            raise AlgebraError("discriminant needs degree >= 1")
        n = f.degree
        r = resultant(f, f.deriv())
        d = r / f.lead
        return d if (n * (n - 1) // 2) % 2 == 0 else -d
    if not f:
        raise AlgebraError("discriminant of the zero polynomial")
    if name is None:
        used = f.variables_used()
        if len(used) != 1:
            raise AlgebraError("name the variable for a multivariate discriminant")
        name = used[0]
    n = f.degree_in(name)
    if n < 1:
        raise AlgebraError("discriminant needs degree >= 1")
    coeffs, rest = _coeff_list(f, name)
    lead = coeffs[-1]
    r = resultant(f, f.diff(name), name)
    if isinstance(r, MPoly):
        lead_r = lead.with_vars(r.vars) if isinstance(lead, MPoly) else lead
        d = r / lead_r.constant_value() if lead_r.is_constant() else r.exact_div(lead_r)
    else:
        d = r / (lead.constant_value() if isinstance(lead, MPoly) else lead)
    d = _simplify_scalar(d, rest)
    return d if (n * (n - 1) // 2) % 2 == 0 else -d


# ---------------------------------------------------------------------------
# factorization at desk scale


def _as_upoly(f):
    if isinstance(f, UPoly):
        return f
    return f.to_upoly()


def squarefree_decomposition(f):
    """Yun's algorithm: list of (monic squarefree factor, multiplicity)."""
    f = _as_upoly(f)
    if f.degree < 1:
        return []
    out = []
    fp = f.deriv()
    a = f.gcd(fp)
    b = f // a
    c = fp // a
    d = c - b.deriv()
    i = 1
    while b.degree > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        d = c - b.deriv()
        if a.degree > 0:
            out.append((a.monic(), i))
        i += 1
    return out


def _rational_roots(f):
    """Rational roots of a squarefree-or-not UPoly via the rational root test."""
    f = f.primitive()
    roots = []
    coeffs = [int(c) for c in f.coeffs]
    while coeffs and coeffs[0] == 0:
        roots.append(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return sorted(set(roots))
    a0, an = abs(coeffs[0]), abs(coeffs[-1])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0] if n < 10 ** 6 else None

    p_div, q_div = divisors(a0), divisors(an)
    if p_div is None or q_div is None:
        return sorted(set(roots))
    g = UPoly(coeffs, f.var)
    for p in p_div:
        for q in q_div:
            for s in (1, -1):
                r = Fraction(s * p, q)
                if g(r) == 0:
                    roots.append(r)
    return sorted(set(roots))


def factor_desk(f, max_degree=DESK_DEGREE):
    """Factor a univariate polynomial over Q.

    Returns ``(unit, [(factor, multiplicity), ...])`` with primitive integer
    factors of positive leading coefficient, sorted by (degree, coefficients),
    such that ``unit * prod(factor**mult) == f``.  Linear factors are extracted
    by the rational root test; the remaining squarefree parts (degree at most
    ``max_degree`` each) are split with sympy's factorization over Q.
    """
    f = _as_upoly(f)
    if not f:
        raise AlgebraError("cannot factor the zero polynomial")
    if f.degree < 1:
        return f.lead, []
    factors = []
    for part, mult in squarefree_decomposition(f):
        part = part.primitive()
        for r in _rational_roots(part):
            lin = UPoly([-r, 1], f.var).primitive()
            factors.append((lin, mult))
            part = part.exact_div(lin)
        if part.degree < 1:
            continue
        if part.degree > max_degree:
            raise DeskLimitError(
                f"degree-{part.degree} factor exceeds the desk bound {max_degree}; "
                "factor it by hand or split the problem"
            )
        x = sympy.Symbol(f.var)
        _, flist = sympy.factor_list(part.to_mpoly().to_sympy([x]), x)
        for fac, k in flist:
            up = MPoly.from_sympy(fac, (f.var,)).to_upoly(f.var).primitive()
            factors.append((up, mult * k))
    factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs, fm[1]))
    prod = UPoly([1], f.var)
    for fac, k in factors:
        prod = prod * fac ** k
    unit = f.lead / prod.lead
    if prod * unit != f:
        raise AlgebraError("factorization failed to reproduce its input")
    return unit, factors


# ---------------------------------------------------------------------------
# zero-dimensional elimination (sympy backed)


def groebner(polys, vars, order="grevlex"):
    """Reduced Groebner basis over Q as a list of MPolys over ``vars``."""
    vars = tuple(vars)
    syms = sympy.symbols(vars)
    exprs = [p.with_vars(vars).to_sympy(syms) for p in polys if p]
    if not exprs:
        return []
    gb = sympy.groebner(exprs, *syms, order=order, domain="QQ")
    return [MPoly.from_sympy(g, vars) for g in gb.exprs]


def _standard_monomial_count(gb, nvars):
    if any(g.is_constant() and g for g in gb):
        return 0
    lead_exps = []
    for g in gb:
        poly = sympy.Poly(g.to_sympy(), *sympy.symbols(g.vars))
        lead_exps.append(sympy.polys.orderings.grevlex and poly.monoms(order="grevlex")[0])
    bounds = []
    for i in range(nvars):
        pure = [e[i] for e in lead_exps if all(e[j] == 0 for j in range(nvars) if j != i)]
        if not pure:
            raise AlgebraError("ideal is not zero-dimensional")
        bounds.append(min(pure))
    count = 0
    for e in itertools.product(*(range(b) for b in bounds)):
        if not any(all(e[j] >= le[j] for j in range(nvars)) for le in lead_exps):
            count += 1
    return count


def quotient_dimension(polys, vars):
    """dim_Q Q[vars]/(polys) for a zero-dimensional ideal (0 for the unit ideal)."""
    gb = groebner(polys, vars)
    return _standard_monomial_count(gb, len(tuple(vars)))


def univariate_eliminant(polys, vars, name):
    """Generator of the ideal intersected with Q[name], as a UPoly."""
    vars = tuple(vars)
    order_vars = tuple(v for v in vars if v != name) + (name,)
    gb = groebner(polys, order_vars, order="lex")
    for g in gb:
        if set(g.variables_used()) <= {name}:
            return g.with_vars(vars).to_upoly(name) if g.variables_used() else UPoly([1], name)
    raise AlgebraError(f"no eliminant in {name}: ideal is not zero-dimensional")


def radical_zero_dim(polys, vars):
    """Generators of the radical of a zero-dimensional ideal (Seidenberg)."""
    vars = tuple(vars)
    extra = []
    for v in vars:
        h = univariate_eliminant(polys, vars, v)
        if h.degree < 1:
            return [MPoly.const(vars, 1)]
        sf = h // h.gcd(h.deriv())
        extra.append(sf.to_mpoly((v,)).with_vars(vars))
    return list(polys) + extra
