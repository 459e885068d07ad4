"""Fan ingestion and combinatorics for smooth complete split toric data.

A fan is given by its primitive ray vectors and its maximal cones (as ray
index sets).  Everything downstream keys off the ray order, which is never
permuted: ray i is variable t_i in every polynomial and series produced by
the other modules.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import FanValidationError, InternalCheckError
from .grothendieck import LaurentClass

MEMBERSHIP_SAMPLES = 256
MAX_RAYS = 24


@dataclass(frozen=True)
class Fan:
    """dim = ambient lattice rank n; rays = primitive integer vectors;
    max_cones = sorted tuples of ray indices."""

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def cone_ray_sets(self) -> list[frozenset[int]]:
        return [frozenset(c) for c in self.max_cones]

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays],
                "max_cones": [list(c) for c in self.max_cones]}


@dataclass(frozen=True)
class FanReport:
    smooth: bool
    complete: bool
    details: tuple[str, ...]

    def to_json(self) -> dict:
        return {"smooth": self.smooth, "complete": self.complete,
                "details": list(self.details)}


@dataclass(frozen=True)
class PatternSet:
    """The sets of rays contained in no cone, encoded by minimal members.

    A nonnegative vector m "lies above" the pattern set iff supp(m)
    contains some minimal member.
    """

    nvars: int
    minimal: tuple[frozenset[int], ...]

    def lies_above(self, m) -> bool:
        return any(all(m[i] > 0 for i in J) for J in self.minimal)

    def support_in_patterns(self, support: frozenset[int]) -> bool:
        return any(J <= support for J in self.minimal)

    def members(self) -> set[tuple[int, ...]]:
        """All 0/1-vectors lying above the minimal members (exponential)."""
        if self.nvars > 20:
            raise FanValidationError(
                f"materializing 2^{self.nvars} pattern vectors is refused")
        out = set()
        for bits in itertools.product((0, 1), repeat=self.nvars):
            if self.lies_above(bits):
                out.add(bits)
        return out


@dataclass(frozen=True)
class PicardData:
    rank: int
    projection: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"rank": self.rank,
                "projection": [list(r) for r in self.projection]}


# ---------------------------------------------------------------------------
# exact integer linear algebra


def det_int(rows: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination.

    Args:
        rows: n lists of n ints.

    Returns:
        The exact determinant.
    """
    n = len(rows)
    m = [list(r) for r in rows]
    assert all(len(r) == n for r in m)
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
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def solve_rational(matrix_cols: list[list[int]], target: list[int]):
    """Solve M x = target exactly, M given by columns.

    Returns the solution as a list of Fractions, or None if M is singular.
    """
    n = len(target)
    aug = [[Fraction(matrix_cols[j][i]) for j in range(len(matrix_cols))]
           + [Fraction(target[i])] for i in range(n)]
    cols = len(matrix_cols)
    if cols != n:
        return None
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            return None
        aug[k], aug[piv] = aug[piv], aug[k]
        pv = aug[k][k]
        aug[k] = [x / pv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[k])]
    return [aug[i][n] for i in range(n)]


def _smith_with_row_transform(mat: list[list[int]]):
    """Diagonalize an integer matrix by unimodular row and column ops.

    Only the row transform is tracked: returns (diag, U) with U * mat *
    (untracked V) = diag, U unimodular.  Pivoting is deterministic:
    smallest absolute value first, ties by row then column index.
    """
    a = [list(r) for r in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def addmul_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]

    def addmul_col(dst, src, f):
        for r in a:
            r[dst] += f * r[src]

    k = 0
    while k < min(rows, cols):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != k:
            swap_rows(k, bi)
        if bj != k:
            swap_cols(k, bj)
        dirty = False
        for i in range(k + 1, rows):
            if a[i][k]:
                q = a[i][k] // a[k][k]
                addmul_row(i, k, -q)
                if a[i][k]:
                    dirty = True
        for j in range(k + 1, cols):
            if a[k][j]:
                q = a[k][j] // a[k][k]
                addmul_col(j, k, -q)
                if a[k][j]:
                    dirty = True
        if dirty:
            continue
        k += 1
    return a, u


def _hermite_rows(mat: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form (positive pivots, reduced above)."""
    a = [list(r) for r in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        while True:
            nz = [i for i in range(r + 1, rows) if a[i][c] != 0]
            if not nz:
                break
            for i in nz:
                q = a[i][c] // a[r][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                if a[i][c] != 0:
                    a[r], a[i] = a[i], a[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return a


# ---------------------------------------------------------------------------
# parsing and validation


def parse_fan(document: dict) -> Fan:
    """Build a Fan from {"rays": [...], "max_cones": [...]}.

    Raises FanValidationError for malformed data, non-primitive or
    duplicate rays, and out-of-range cone indices.
    """
    if not isinstance(document, dict):
        raise FanValidationError("fan document must be a JSON object")
    for key in ("rays", "max_cones"):
        if key not in document:
            raise FanValidationError(f"fan document lacks the '{key}' field")
    rays_in = document["rays"]
    if not isinstance(rays_in, list) or not rays_in:
        raise FanValidationError("'rays' must be a nonempty list of integer vectors")
    rays = []
    dim = None
    for idx, vec in enumerate(rays_in):
        if not isinstance(vec, list) or not all(isinstance(x, int) for x in vec):
            raise FanValidationError(f"ray at index {idx} is not an integer vector")
        if dim is None:
            dim = len(vec)
            if dim == 0:
                raise FanValidationError("rays must have positive length")
        elif len(vec) != dim:
            raise FanValidationError(f"ray at index {idx} has length {len(vec)}, expected {dim}")
        g = math.gcd(*(abs(x) for x in vec)) if len(vec) > 1 else abs(vec[0])
        if g != 1:
            raise FanValidationError(f"non-primitive ray at index {idx} (gcd {g})")
        rays.append(tuple(vec))
    if len(set(rays)) != len(rays):
        dup = next(r for r in rays if rays.count(r) > 1)
        raise FanValidationError(f"duplicate ray {list(dup)}")
    if len(rays) > MAX_RAYS:
        raise FanValidationError(f"{len(rays)} rays exceed the supported maximum {MAX_RAYS}")
    cones_in = document["max_cones"]
    if not isinstance(cones_in, list) or not cones_in:
        raise FanValidationError("'max_cones' must be a nonempty list of index lists")
    cones = []
    for cdx, cone in enumerate(cones_in):
        if not isinstance(cone, list) or not all(isinstance(i, int) for i in cone):
            raise FanValidationError(f"cone at index {cdx} is not an index list")
        for i in cone:
            if not 0 <= i < len(rays):
                raise FanValidationError(f"cone at index {cdx} references ray {i}, "
                                         f"but there are {len(rays)} rays")
        if len(set(cone)) != len(cone):
            raise FanValidationError(f"cone at index {cdx} repeats a ray index")
        cones.append(tuple(sorted(cone)))
    return Fan(dim=dim, rays=tuple(rays), max_cones=tuple(cones))


@lru_cache(maxsize=None)
def validate(fan: Fan, seed: int = 0) -> FanReport:
    """Check smoothness and completeness.

    Smooth: every maximal cone has dim-many rays forming a matrix of
    determinant +-1.  Complete: every facet of a maximal cone is shared
    with exactly one other maximal cone, the wall-adjacency graph is
    connected, and each of MEMBERSHIP_SAMPLES seeded random directions
    lies in some maximal cone.
    """
    n = fan.dim
    details = []
    smooth = True
    for cdx, cone in enumerate(fan.max_cones):
        if len(cone) != n:
            smooth = False
            details.append(f"cone {cdx} has {len(cone)} rays, expected {n}")
            continue
        d = det_int([list(fan.rays[i]) for i in cone])
        if abs(d) != 1:
            smooth = False
            details.append(f"cone {cdx} has determinant {d}")

    complete = True
    facets: dict[frozenset, list[int]] = {}
    for cdx, cone in enumerate(fan.max_cones):
        for facet in itertools.combinations(cone, max(len(cone) - 1, 0)):
            facets.setdefault(frozenset(facet), []).append(cdx)
    for facet, owners in facets.items():
        if len(owners) != 2:
            complete = False
            details.append(f"facet {sorted(facet)} lies in {len(owners)} maximal cones")
    if complete and len(fan.max_cones) > 1:
        adjacency = {i: set() for i in range(len(fan.max_cones))}
        for owners in facets.values():
            if len(owners) == 2:
                adjacency[owners[0]].add(owners[1])
                adjacency[owners[1]].add(owners[0])
        seen = {0}
        stack = [0]
        while stack:
            for nb in adjacency[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(fan.max_cones):
            complete = False
            details.append("wall-adjacency graph is disconnected")
    if complete:
        rng = random.Random(seed)
        cone_cols = []
        for cone in fan.max_cones:
            if len(cone) == n:
                cone_cols.append([list(fan.rays[i]) for i in cone])
        misses = 0
        for _ in range(MEMBERSHIP_SAMPLES):
            v = [0] * n
            while all(x == 0 for x in v):
                v = [rng.randint(-99, 99) for _ in range(n)]
            hit = False
            for cols in cone_cols:
                sol = solve_rational(cols, v)
                if sol is not None and all(x >= 0 for x in sol):
                    hit = True
                    break
            if not hit:
                misses += 1
        if misses:
            complete = False
            details.append(f"{misses}/{MEMBERSHIP_SAMPLES} sampled directions "
                           "lie in no maximal cone")
    return FanReport(smooth=smooth, complete=complete, details=tuple(details))


def require_valid(fan: Fan, seed: int = 0) -> FanReport:
    report = validate(fan, seed)
    if not (report.smooth and report.complete):
        flaws = "; ".join(report.details) or "fan is not smooth and complete"
        raise FanValidationError(flaws)
    return report


# ---------------------------------------------------------------------------
# derived data


def enumerate_cones(fan: Fan) -> tuple[int, ...]:
    """f-vector (f_0, ..., f_n): numbers of cones of each dimension.

    Faces of a smooth (hence simplicial) cone are the subsets of its rays.
    """
    require_valid(fan)
    n = fan.dim
    levels = [set() for _ in range(n + 1)]
    levels[0].add(frozenset())
    for cone in fan.max_cones:
        for k in range(1, n + 1):
            for sub in itertools.combinations(cone, k):
                levels[k].add(frozenset(sub))
    return tuple(len(s) for s in levels)


def class_of_variety(fan: Fan) -> LaurentClass:
    """Sum over cones of (L-1)^(n - dim cone), via the f-vector."""
    fv = enumerate_cones(fan)
    n = fan.dim
    lm1 = LaurentClass({1: 1, 0: -1})
    total = LaurentClass.zero()
    for k, fk in enumerate(fv):
        total = total + lm1 ** (n - k) * fk
    return total


@lru_cache(maxsize=None)
def picard_data(fan: Fan) -> PicardData:
    """Cokernel of the character-to-divisor map, as an explicit projection.

    The matrix with row alpha equal to ray alpha is diagonalized by
    unimodular row/column operations; the rows of the row transform
    beyond the rank give a basis of the cokernel.  That basis is made
    canonical by Hermite reduction.  Raises if the cokernel has torsion,
    which cannot happen for smooth complete input.
    """
    require_valid(fan)
    nu, n = fan.nrays, fan.dim
    b = [list(r) for r in fan.rays]
    diag, u = _smith_with_row_transform(b)
    pivots = []
    for k in range(min(nu, n)):
        if diag[k][k] != 0:
            pivots.append(diag[k][k])
    if len(pivots) != n:
        raise FanValidationError("rays do not span the ambient lattice")
    if any(abs(p) != 1 for p in pivots):
        raise FanValidationError(f"divisor class group has torsion (invariants {pivots})")
    proj = _hermite_rows([u[i] for i in range(n, nu)])
    r = nu - n
    # exactness tripwire: projection composed with the ray matrix is zero
    for row in proj:
        for j in range(n):
            if sum(row[a] * fan.rays[a][j] for a in range(nu)) != 0:
                raise InternalCheckError("cokernel projection does not kill the ray matrix")
    sd, _ = _smith_with_row_transform([list(row) for row in proj])
    for k in range(r):
        if abs(sd[k][k]) != 1:
            raise InternalCheckError("cokernel projection is not surjective over Z")
    return PicardData(rank=r, projection=tuple(tuple(row) for row in proj))


@lru_cache(maxsize=None)
def pattern_set(fan: Fan) -> PatternSet:
    """Minimal ray sets contained in no maximal cone."""
    require_valid(fan)
    nu = fan.nrays
    cone_sets = fan.cone_ray_sets()
    minimal: list[frozenset[int]] = []
    for size in range(1, nu + 1):
        for combo in itertools.combinations(range(nu), size):
            s = frozenset(combo)
            if any(s <= c for c in cone_sets):
                continue
            if any(m <= s for m in minimal):
                continue
            minimal.append(s)
    minimal.sort(key=lambda s: (len(s), sorted(s)))
    return PatternSet(nvars=nu, minimal=tuple(minimal))


def eff_dual_contains(fan: Fan, d) -> bool:
    """Does the weighted ray sum vanish?  (Membership in the dual of the
    cone of effective divisor classes, for multidegrees of actual curves.)"""
    d = tuple(int(x) for x in d)
    if len(d) != fan.nrays:
        raise ValueError(f"degree vector needs {fan.nrays} entries")
    if any(x < 0 for x in d):
        return False
    return all(sum(d[a] * fan.rays[a][j] for a in range(fan.nrays)) == 0
               for j in range(fan.dim))


def eff_dual_enumerate(fan: Fan, bound: int) -> list[tuple[int, ...]]:
    """All nonnegative degree vectors with entry sum <= bound and vanishing
    weighted ray sum, in lexicographic order."""
    nu = fan.nrays
    out = []

    def rec(prefix, remaining):
        if len(prefix) == nu:
            if eff_dual_contains(fan, prefix):
                out.append(tuple(prefix))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v)

    rec([], bound)
    return out


def fan_product(f1: Fan, f2: Fan) -> Fan:
    """Fan of the product variety: block-embedded rays, pairwise unions of
    maximal cones."""
    require_valid(f1)
    require_valid(f2)
    n1, n2 = f1.dim, f2.dim
    rays = [r + (0,) * n2 for r in f1.rays]
    rays += [(0,) * n1 + r for r in f2.rays]
    off = f1.nrays
    cones = []
    for c1 in f1.max_cones:
        for c2 in f2.max_cones:
            cones.append(tuple(sorted(c1 + tuple(i + off for i in c2))))
    return Fan(dim=n1 + n2, rays=tuple(rays), max_cones=tuple(cones))
