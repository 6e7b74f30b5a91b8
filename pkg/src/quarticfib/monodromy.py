"""Local monodromy of Kodaira fibers acting on m-torsion, and the case
analysis that bounds singular fibers of a quartic fibered by the planes
through a line whose trisection differences have order m."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import gcd

from .cubiclaw import EULER

__all__ = [
    "MonodromyError",
    "MonodromyMatrix",
    "FixedTorsion",
    "CaseVerdict",
    "CUBIC_TYPES",
    "LINES_IN_FIBER",
    "CONTACT_ORDERS",
    "kodaira_matrix",
    "fixed_torsion",
    "euler_budget_solver",
    "min_singular_fibers",
    "case_analysis",
    "char_poly",
]

CUBIC_TYPES = ("I1", "I2", "I3", "II", "III", "IV")

# line components of each reduced plane-cubic fiber; each meets L in the plane
LINES_IN_FIBER = {"I1": 0, "I2": 1, "I3": 3, "II": 0, "III": 1, "IV": 3}

# intersection multiplicity of L with the fiber at a singular point of it,
# when that point is the multiple point of C_H . L
CONTACT_ORDERS = {"I1": {2, 3}, "I2": {2}, "I3": {2}, "II": {2, 3}, "III": {2}, "IV": {3}}


class MonodromyError(ValueError):
    pass


def _mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


IDENTITY = ((1, 0), (0, 1))


@dataclass(frozen=True)
class MonodromyMatrix:
    entries: tuple
    kodaira: str = ""

    def __post_init__(self):
        e = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", e)
        if self.det != 1:
            raise MonodromyError("monodromy matrices have determinant 1")

    @property
    def det(self):
        e = self.entries
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]

    @property
    def trace(self):
        return self.entries[0][0] + self.entries[1][1]

    def __matmul__(self, other):
        return MonodromyMatrix(_mul(self.entries, other.entries))

    def __pow__(self, n):
        if n < 0:
            raise MonodromyError("negative powers are not needed here")
        out = IDENTITY
        for _ in range(n):
            out = _mul(out, self.entries)
        return MonodromyMatrix(out)

    def __eq__(self, other):
        if isinstance(other, MonodromyMatrix):
            return self.entries == other.entries
        return self.entries == tuple(tuple(r) for r in other)

    def __hash__(self):
        return hash(self.entries)

    def is_identity(self):
        return self.entries == IDENTITY

    def is_minus_identity(self):
        return self.entries == ((-1, 0), (0, -1))

    def is_unipotent(self):
        return self.trace == 2

    def order(self, limit=12):
        """Multiplicative order if at most ``limit``, else None."""
        acc = self
        for n in range(1, limit + 1):
            if acc.is_identity():
                return n
            acc = acc @ self
        return None

    def act(self, v, m):
        e = self.entries
        return ((e[0][0] * v[0] + e[0][1] * v[1]) % m, (e[1][0] * v[0] + e[1][1] * v[1]) % m)

    def to_json(self):
        return [list(r) for r in self.entries]


def char_poly(M: MonodromyMatrix):
    """Coefficients (1, -trace, det) of lambda^2 - tr*lambda + det."""
    return (1, -M.trace, M.det)


def kodaira_matrix(kind) -> MonodromyMatrix:
    kind = str(kind).strip()
    m = re.fullmatch(r"I_?(\d+)", kind)
    if m:
        b = int(m.group(1))
        if b < 1:
            raise MonodromyError("I_b needs b >= 1")
        return MonodromyMatrix(((1, b), (0, 1)), f"I{b}")
    table = {
        "II": ((1, 1), (-1, 0)),
        "III": ((0, 1), (-1, 0)),
        "IV": ((0, 1), (-1, -1)),
    }
    if kind not in table:
        raise MonodromyError(f"unknown Kodaira type {kind!r}")
    return MonodromyMatrix(table[kind], kind)


@dataclass
class FixedTorsion:
    m: int
    elements: list
    generators: list
    primitive: list

    @property
    def order(self):
        return len(self.elements)

    def to_json(self):
        return {
            "m": self.m,
            "order": self.order,
            "generators": [list(g) for g in self.generators],
            "primitive_fixed": len(self.primitive),
        }


def _is_primitive(v, m):
    return gcd(gcd(v[0], v[1]), m) == 1


def _span(gens, m):
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = ((x[0] + g[0]) % m, (x[1] + g[1]) % m)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def fixed_torsion(M: MonodromyMatrix, m: int) -> FixedTorsion:
    """The subgroup {v in (Z/m)^2 : M v = v}, with generators and primitive members."""
    if m < 2:
        raise MonodromyError("torsion order must be at least 2")
    elems = [v for v in itertools.product(range(m), repeat=2) if M.act(v, m) == v]
    gens = []
    span = {(0, 0)}
    for v in sorted(elems, key=lambda v: (-_elem_order(v, m), v)):
        if v not in span:
            gens.append(v)
            span = _span(gens, m)
    prim = [v for v in elems if _is_primitive(v, m)]
    return FixedTorsion(m, elems, gens, prim)


def _elem_order(v, m):
    return m // gcd(gcd(v[0], v[1]), m)


# ---------------------------------------------------------------------------
# Euler budget


def euler_budget_solver(fixed=None, free=(), total=24, euler=EULER):
    """All count vectors with sum of Euler numbers equal to ``total``.

    ``fixed`` maps types to prescribed counts; ``free`` lists types whose
    counts range over the nonnegative integers.  Returns a list of dicts.
    """
    fixed = dict(fixed or {})
    base = sum(euler[k] * n for k, n in fixed.items())
    rest = total - base
    free = [k for k in free if k not in fixed]
    if rest < 0:
        return []
    sols = []

    def rec(i, left, acc):
        if i == len(free):
            if left == 0:
                out = dict(fixed)
                out.update({k: v for k, v in acc.items() if v})
                sols.append(out)
            return
        k = free[i]
        e = euler[k]
        if e <= 0:
            raise MonodromyError(f"type {k} has no Euler contribution")
        for n in range(left // e + 1):
            acc[k] = n
            rec(i + 1, left - n * e, acc)
        acc.pop(k, None)

    rec(0, rest, {})
    sols.sort(key=lambda d: sorted(d.items()))
    return sols


def min_singular_fibers(types=CUBIC_TYPES, total=24):
    sols = euler_budget_solver(free=types, total=total)
    return min(sum(s.values()) for s in sols)


# ---------------------------------------------------------------------------
# case analysis


@dataclass
class CaseVerdict:
    m: int
    allowed_transverse_types: set
    required_nontransverse_types: set
    min_I2_count: int | None
    min_lines_meeting_L: int
    euler_equation_solvable: bool
    branch_profiles: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "m": self.m,
            "allowed_transverse_types": sorted(self.allowed_transverse_types),
            "required_nontransverse_types": sorted(self.required_nontransverse_types),
            "min_I2_count": self.min_I2_count,
            "min_lines_meeting_L": self.min_lines_meeting_L,
            "euler_equation_solvable": self.euler_equation_solvable,
            "branch_profiles": self.branch_profiles,
            "notes": self.notes,
        }


def _nonzero_two_torsion():
    return [(1, 0), (0, 1), (1, 1)]


def _perm_type_mod2(M):
    """'trivial', 'transposition' or '3-cycle' on the nonzero 2-torsion points."""
    pts = _nonzero_two_torsion()
    fixed = sum(1 for v in pts if M.act(v, 2) == v)
    return {3: "trivial", 1: "transposition", 0: "3-cycle"}[fixed]


def _lines(solution):
    return sum(LINES_IN_FIBER[k] * n for k, n in solution.items())


def case_analysis(m: int) -> CaseVerdict:
    """Constraints on singular fibers when the differences p_i - p_j have order m.

    ``euler_equation_solvable`` refers to the full budget for m != 3; for
    m = 3 it is the verdict on the scenario where the differences span all
    of the 3-torsion, the one that needs an Euler count to exclude.
    """
    if m < 2:
        raise MonodromyError("m must be at least 2")
    mats = {k: kodaira_matrix(k) for k in CUBIC_TYPES}
    notes = []
    if m == 2:
        # the differences are the three points of order 2: transverse
        # monodromy must fix all of them
        transverse = {k for k, M in mats.items() if fixed_torsion(M, 2).order == 4}
        # branch fibers: simple branch point = transposition of the p_i,
        # triple point = 3-cycle; the action on 2-torsion must match
        at = {"double": set(), "triple": set()}
        for k, M in mats.items():
            if M.is_unipotent():
                continue
            perm = _perm_type_mod2(M)
            if perm == "transposition" and 2 in CONTACT_ORDERS[k]:
                at["double"].add(k)
            if perm == "3-cycle" and 3 in CONTACT_ORDERS[k]:
                at["triple"].add(k)
        profiles = [(d, t) for t in range(3) for d in range(5) if d + 2 * t == 4]
        best_i2, best_lines = None, None
        seen_profiles = []
        required = set()
        for d, t in profiles:
            for dtypes in itertools.combinations_with_replacement(sorted(at["double"]), d):
                for ttypes in itertools.combinations_with_replacement(sorted(at["triple"]), t):
                    fixed = {}
                    for k in dtypes + ttypes:
                        fixed[k] = fixed.get(k, 0) + 1
                    for sol in euler_budget_solver(fixed, free=sorted(transverse)):
                        i2 = sol.get("I2", 0) - fixed.get("I2", 0)
                        lines = _lines(sol)
                        best_i2 = i2 if best_i2 is None else min(best_i2, i2)
                        best_lines = lines if best_lines is None else min(best_lines, lines)
                        seen_profiles.append(
                            {"double": list(dtypes), "triple": list(ttypes), "I2": i2, "lines": lines}
                        )
                        required |= set(fixed)
        notes.append("non-transverse fibers of types " + ", ".join(sorted(required)) + " are possible")
        return CaseVerdict(
            m=2,
            allowed_transverse_types=transverse,
            required_nontransverse_types=required,
            min_I2_count=best_i2,
            min_lines_meeting_L=best_lines,
            euler_equation_solvable=best_i2 is not None,
            branch_profiles=seen_profiles,
            notes=notes,
        )

    # m >= 3: a transposition of the p_i would force 2*alpha = 0, so the two
    # branch fibers are triple points with cyclic monodromy on the p_i
    transverse = {k for k, M in mats.items() if fixed_torsion(M, m).primitive}
    nontransverse = set()
    for k, M in mats.items():
        if M.is_unipotent():
            continue  # an I_b fiber cannot be singular at a point of L
        if not fixed_torsion(M ** 3, m).primitive:
            continue
        if 3 not in CONTACT_ORDERS[k]:
            continue
        nontransverse.add(k)
    if not nontransverse:
        raise MonodromyError(f"no fiber type fits a triple branch point for m = {m}")
    best_lines = None
    solvable = False
    for pair in itertools.combinations_with_replacement(sorted(nontransverse), 2):
        fixed = {}
        for k in pair:
            fixed[k] = fixed.get(k, 0) + 1
        for sol in euler_budget_solver(fixed, free=sorted(transverse)):
            solvable = True
            lines = _lines(sol)
            best_lines = lines if best_lines is None else min(best_lines, lines)
    if m == 3:
        # non-cyclic differences: transverse monodromy must fix all 3-torsion
        full = sorted(k for k, M in mats.items() if fixed_torsion(M, 3).order == 9)
        sols = euler_budget_solver(_pair(nontransverse), free=full)
        notes.append(
            "non-cyclic scenario: transverse types " + ", ".join(full) + f"; solutions {len(sols)}"
        )
        solvable = bool(sols)
    return CaseVerdict(
        m=m,
        allowed_transverse_types=transverse,
        required_nontransverse_types=nontransverse,
        min_I2_count=None,
        min_lines_meeting_L=best_lines,
        euler_equation_solvable=solvable,
        branch_profiles=[{"triple": sorted(nontransverse) * 2}],
        notes=notes,
    )


def _pair(types):
    """Two fibers, of the unique allowed type."""
    (k,) = sorted(types)
    return {k: 2}
