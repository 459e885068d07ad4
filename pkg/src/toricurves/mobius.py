"""Local Moebius inversion for pattern sets of fans.

The indicator of "support contained in no cone" on 0/1-vectors is inverted
over the coordinatewise order; the resulting signed table drives both the
torsor class and, later, the Euler-product engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InternalCheckError
from .grothendieck import LaurentClass
from .toric import Fan, PatternSet, pattern_set, class_of_variety, picard_data

MAX_TABLE_VARS = 24


class IntPoly:
    """Sparse multivariate polynomial with integer coefficients."""

    __slots__ = ("nvars", "_c")

    def __init__(self, nvars: int, coeffs=()):
        self.nvars = nvars
        c = {}
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        for e, v in items:
            v = int(v)
            if not v:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError("exponent arity mismatch")
            c[e] = c.get(e, 0) + v
            if not c[e]:
                del c[e]
        self._c = c

    @classmethod
    def one(cls, nvars: int) -> "IntPoly":
        return cls(nvars, {(0,) * nvars: 1})

    @property
    def coeffs(self):
        return dict(self._c)

    def items(self):
        return self._c.items()

    def constant_term(self) -> int:
        return self._c.get((0,) * self.nvars, 0)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._c == other._c

    def __hash__(self):
        return hash((self.nvars, frozenset(self._c.items())))

    def __add__(self, other):
        assert self.nvars == other.nvars
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        return IntPoly(self.nvars, c)

    def __neg__(self):
        return IntPoly(self.nvars, {e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        assert self.nvars == other.nvars
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c[e] = c.get(e, 0) + v1 * v2
        return IntPoly(self.nvars, c)

    def evaluate_diagonal(self, x: LaurentClass) -> LaurentClass:
        """Substitute every variable by the same Laurent class x."""
        total = LaurentClass.zero()
        powers = {0: LaurentClass.one()}
        for e, v in self._c.items():
            k = sum(e)
            if k not in powers:
                powers[k] = x ** k
            total = total + powers[k] * v
        return total

    def total_degrees(self) -> set[int]:
        return {sum(e) for e in self._c}

    def to_json(self) -> dict:
        terms = [{"exp": list(e), "coeff": v}
                 for e, v in sorted(self._c.items(), key=lambda t: (sum(t[0]), t[0]))]
        return {"terms": terms}

    @classmethod
    def from_json(cls, doc: dict, nvars: int | None = None) -> "IntPoly":
        terms = doc["terms"]
        if nvars is None:
            if not terms:
                raise ValueError("cannot infer arity of an empty polynomial")
            nvars = len(terms[0]["exp"])
        return cls(nvars, {tuple(t["exp"]): t["coeff"] for t in terms})

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(f"t{i + 1}" if x == 1 else f"t{i + 1}^{x}"
                            for i, x in enumerate(e) if x)
            if not mono:
                body = str(abs(v))
            elif abs(v) == 1:
                body = mono
            else:
                body = f"{abs(v)}*{mono}"
            if not parts:
                parts.append(body if v > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if v > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"IntPoly({self.nvars}, {len(self._c)} terms)"


@dataclass(frozen=True)
class MobiusTable:
    nvars: int
    values: tuple[tuple[tuple[int, ...], int], ...]  # ((0/1 vector, mu), ...)

    def mu(self, n) -> int:
        n = tuple(int(x) for x in n)
        if len(n) != self.nvars or any(x not in (0, 1) for x in n):
            return 0
        return dict(self.values).get(n, 0)

    def nonzero(self):
        return [(n, v) for n, v in self.values if v]

    def to_json(self) -> list:
        return [{"n": list(n), "mu": v} for n, v in self.values]

    @classmethod
    def from_json(cls, doc: list) -> "MobiusTable":
        vals = tuple((tuple(item["n"]), int(item["mu"])) for item in doc)
        nv = len(vals[0][0]) if vals else 0
        return cls(nvars=nv, values=vals)


def mobius_table(patterns: PatternSet, max_vars: int = MAX_TABLE_VARS) -> MobiusTable:
    """Invert the not-above-the-pattern-set indicator on 0/1-vectors.

    Processing order is Hamming weight, then lexicographic; the cumulative
    sum over each lower set equals 1 on vectors lying above no pattern and
    0 otherwise.
    """
    nu = patterns.nvars
    if nu > max_vars:
        raise ValueError(f"{nu} variables exceed the table guard ({max_vars})")
    masks = sorted(range(1 << nu), key=lambda m: (m.bit_count(), _mask_bits(m, nu)))
    mu: dict[int, int] = {}
    for m in masks:
        bits = _mask_bits(m, nu)
        target = 0 if patterns.lies_above(bits) else 1
        acc = 0
        sub = (m - 1) & m
        while True:
            acc += mu.get(sub, 0)
            if sub == 0:
                break
            sub = (sub - 1) & m
        mu[m] = target - acc if m else target
    values = tuple((_mask_bits(m, nu), mu[m]) for m in masks)
    return MobiusTable(nvars=nu, values=values)


def _mask_bits(m: int, nu: int) -> tuple[int, ...]:
    return tuple((m >> i) & 1 for i in range(nu))


def generating_polynomial(table: MobiusTable) -> IntPoly:
    return IntPoly(table.nvars, {n: v for n, v in table.values if v})


def fan_mobius_polynomial(fan: Fan) -> IntPoly:
    return generating_polynomial(mobius_table(pattern_set(fan)))


def torsor_class(patterns: PatternSet) -> LaurentClass:
    """Class of the complement of the pattern coordinate subspaces in
    affine space, computed two independent ways and compared.

    Route one: inclusion-exclusion over unions of the minimal coordinate
    subspaces.  Route two: L^nvars times the diagonal value of the
    generating polynomial at L^-1.
    """
    nu = patterns.nvars
    route1 = LaurentClass.zero()
    minimal = patterns.minimal
    for k in range(len(minimal) + 1):
        for combo in itertools.combinations(minimal, k):
            union = frozenset().union(*combo) if combo else frozenset()
            route1 = route1 + LaurentClass({nu - len(union): (-1) ** k})
    table = mobius_table(patterns)
    poly = generating_polynomial(table)
    route2 = poly.evaluate_diagonal(LaurentClass.lefschetz(-1)).shift(nu)
    if route1 != route2:
        raise InternalCheckError(
            f"torsor class mismatch: inclusion-exclusion gives {route1}, "
            f"generating polynomial gives {route2}")
    return route1


def local_identity_sides(fan: Fan) -> tuple[LaurentClass, LaurentClass]:
    """Both sides of the one-point factor identity:
    P(L^-1, ..., L^-1)  vs  [V] * L^-n * (1 - L^-1)^rank."""
    poly = fan_mobius_polynomial(fan)
    lhs = poly.evaluate_diagonal(LaurentClass.lefschetz(-1))
    cls = class_of_variety(fan)
    r = picard_data(fan).rank
    one_minus = LaurentClass({0: 1, -1: -1})
    rhs = cls.shift(-fan.dim) * one_minus ** r
    return lhs, rhs


def local_identity_check(fan: Fan) -> bool:
    lhs, rhs = local_identity_sides(fan)
    return lhs == rhs


# ---------------------------------------------------------------------------
# grouping by induced subgraph shape


def nonintersection_graph(fan: Fan) -> set[frozenset[int]]:
    """Edges = ray pairs spanning no common cone (disjoint divisors)."""
    cone_sets = fan.cone_ray_sets()
    nu = fan.nrays
    edges = set()
    for i in range(nu):
        for j in range(i + 1, nu):
            if not any({i, j} <= c for c in cone_sets):
                edges.add(frozenset((i, j)))
    return edges


def _canonical_graph(vertices: tuple[int, ...], edges: set[frozenset[int]]):
    """Lexicographically smallest edge list over all relabelings."""
    k = len(vertices)
    best = None
    for perm in itertools.permutations(range(k)):
        relabel = {v: perm[i] for i, v in enumerate(vertices)}
        cand = tuple(sorted(tuple(sorted((relabel[a], relabel[b])))
                            for a, b in (tuple(e) for e in edges)))
        if best is None or cand < best:
            best = cand
    return k, best


def _is_connected(vertices: tuple[int, ...], edges: set[frozenset[int]]) -> bool:
    if not vertices:
        return True
    adj = {v: set() for v in vertices}
    for e in edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(vertices)


def mu_grouped_by_subgraph(fan: Fan, connected_only: bool = True) -> dict:
    """Group mu over supports by the shape of the induced subgraph of the
    non-intersection graph.

    Returns {(size, canonical_edges): sorted list of distinct mu values}.
    The empty support contributes {(0, ()): [1]}.
    """
    table = mobius_table(pattern_set(fan))
    edges = nonintersection_graph(fan)
    groups: dict[tuple, set[int]] = {}
    for n, v in table.values:
        support = tuple(i for i, x in enumerate(n) if x)
        sub_edges = {e for e in edges if e <= set(support)}
        if connected_only and not _is_connected(support, sub_edges):
            continue
        key = _canonical_graph(support, sub_edges)
        groups.setdefault(key, set()).add(v)
    return {key: sorted(vals) for key, vals in groups.items()}
