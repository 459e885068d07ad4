"""Brute-force verification over small prime fields.

Every motivic class this package produces can be specialized by sending
L to a prime p; the result must equal an honest count of tuples of
binary forms over F_p.  This module performs those counts from scratch,
sharing no series code with the engine, so agreement is meaningful.

Normalized forms (first nonzero coefficient 1) biject with effective
divisors on the projective line; scaling orbits relate them to the raw
nonzero-form counts that the torsor quotient needs.  Counting walks the
rays depth-first with per-pair root-compatibility bitmasks, running gcd
states for larger patterns, and closed-form shortcuts once every
pattern is settled; a budget guard refuses enumerations that are too
large rather than sampling.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError, InternalCheckError
from .grothendieck import evaluate
from .toric import Fan, pattern_set, picard_data, require_valid
from .moduli import hom_class, pattern_config_class

ALLOWED_PRIMES = (2, 3, 5, 7)
DEFAULT_BUDGET = 10**8
BUDGET_ENV = "TORICURVES_BUDGET"

__all__ = [
    "ALLOWED_PRIMES",
    "DEFAULT_BUDGET",
    "FFForm",
    "JetSpec",
    "OracleReport",
    "enumerate_forms",
    "has_common_projective_root",
    "ff_pattern_count",
    "ff_hom_count",
    "ff_constrained_count",
    "oracle_compare",
    "reduce_point",
]


def _check_prime(p: int) -> None:
    if p not in ALLOWED_PRIMES:
        raise ValueError(f"prime must be one of {ALLOWED_PRIMES}, got {p}")


def _resolve_budget(budget: int | None) -> int:
    if budget is not None:
        return int(budget)
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


@dataclass(frozen=True)
class FFForm:
    """Normalized homogeneous binary form over F_p.

    ``coeffs[i]`` multiplies x^(degree-i) y^i; the first nonzero
    coefficient is 1, so forms biject with effective divisors of the
    given degree on P^1.
    """

    p: int
    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("field characteristic must be at least 2")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient count must be degree + 1")
        if any(not 0 <= c < self.p for c in self.coeffs):
            raise ValueError("coefficients must be reduced mod p")
        for c in self.coeffs:
            if c:
                if c != 1:
                    raise ValueError(
                        "first nonzero coefficient must be 1; "
                        "use FFForm.normalize"
                    )
                break
        else:
            raise ValueError("the zero form is not allowed")

    @classmethod
    def normalize(cls, p: int, degree: int, coeffs: Sequence[int]) -> "FFForm":
        reduced = [c % p for c in coeffs]
        lead = next((c for c in reduced if c), 0)
        if not lead:
            raise ValueError("the zero form is not allowed")
        inv = pow(lead, p - 2, p) if lead != 1 else 1
        return cls(p, degree, tuple((c * inv) % p for c in reduced))

    @property
    def dehomogenized(self) -> tuple[int, ...]:
        """Coefficients of f(1, t), ascending, high zeros trimmed."""
        return _trim(self.coeffs)

    @property
    def vanishes_at_infinity(self) -> bool:
        """Whether the form vanishes at [0:1]."""
        return self.coeffs[-1] == 0


def _trim(poly: Sequence[int]) -> tuple[int, ...]:
    t = tuple(poly)
    while t and t[-1] == 0:
        t = t[:-1]
    return t


def _poly_rem(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    inv_lead = pow(b[-1], p - 2, p)
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a.pop()
    return _trim(a)


def _poly_gcd(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    while b:
        a, b = b, _poly_rem(a, b, p)
    return a


def has_common_projective_root(forms: Sequence[FFForm]) -> bool:
    """Whether all forms vanish at a common point of P^1, extensions included.

    A common root exists iff the gcd of the dehomogenizations has
    positive degree, or every form vanishes at [0:1].
    """
    if not forms:
        raise ValueError("need at least one form")
    p = forms[0].p
    if any(f.p != p for f in forms):
        raise ValueError("forms must share one prime field")
    if all(f.vanishes_at_infinity for f in forms):
        return True
    g = forms[0].dehomogenized
    for f in forms[1:]:
        if len(g) == 1:
            break
        g = _poly_gcd(g, f.dehomogenized, p)
    return len(g) > 1


@functools.lru_cache(maxsize=None)
def _form_table(
    p: int, e: int
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...], tuple[bool, ...]]:
    """All normalized degree-e coefficient vectors over F_p, in lex order.

    Returns (coefficient vectors, dehomogenizations, vanishes-at-[0:1]
    flags), index-aligned.
    """
    forms = []
    for lead in range(e, -1, -1):
        prefix = (0,) * lead + (1,)
        for rest in itertools.product(range(p), repeat=e - lead):
            forms.append(prefix + rest)
    dehoms = tuple(_trim(f) for f in forms)
    infs = tuple(f[-1] == 0 for f in forms)
    return tuple(forms), dehoms, infs


def enumerate_forms(p: int, e: int) -> list[FFForm]:
    """The (p^(e+1)-1)/(p-1) normalized forms of degree e, in lex order."""
    _check_prime(p)
    if e < 0:
        raise ValueError("degree must be nonnegative")
    return [FFForm(p, e, c) for c in _form_table(p, e)[0]]


@functools.lru_cache(maxsize=None)
def _pair_masks(p: int, es: int, et: int) -> tuple[int, ...]:
    """Bitmask per degree-es form over degree-et forms with no common root."""
    _, deh_s, inf_s = _form_table(p, es)
    _, deh_t, inf_t = _form_table(p, et)
    out = []
    for ds, vs in zip(deh_s, inf_s):
        mask = 0
        bit = 1
        for dt, vt in zip(deh_t, inf_t):
            if not ((vs and vt) or len(_poly_gcd(ds, dt, p)) > 1):
                mask |= bit
            bit <<= 1
        out.append(mask)
    return tuple(out)


def _fold_root_state(
    state: tuple[tuple[int, ...] | None, bool],
    dehom: tuple[int, ...],
    inf: bool,
    p: int,
) -> tuple[tuple[int, ...] | None, bool]:
    g, all_inf = state
    g = dehom if g is None else (g if len(g) == 1 else _poly_gcd(g, dehom, p))
    return g, all_inf and inf


def _state_settled(state: tuple[tuple[int, ...] | None, bool]) -> bool:
    g, all_inf = state
    return g is not None and len(g) == 1 and not all_inf


def _count_tuples(
    p: int,
    degrees: tuple[int, ...],
    patterns: tuple[tuple[int, ...], ...],
    first_lo: int,
    first_hi: int,
    tables=None,
    leaf_fn=None,
):
    """Count ray-indexed form tuples avoiding all patterns, first ray sliced.

    ``tables`` defaults to the full normalized form tables per ray; a
    caller may pass filtered tables (e.g. unit-jet forms only).  With
    ``leaf_fn`` the count is the sum of leaf_fn(choices) over admissible
    tuples and no closed-form shortcuts are taken; otherwise each tuple
    counts 1 and settled branches are multiplied out.
    """
    nrays = len(degrees)
    if tables is None:
        tables = [_form_table(p, e) for e in degrees]
    sizes = [len(t[0]) for t in tables]
    if any(s == 0 for s in sizes):
        return 0
    dehoms = [t[1] for t in tables]
    infs = [t[2] for t in tables]

    pairs_into: list[list[tuple[int, list[int], int]]] = [[] for _ in range(nrays)]
    bigs_into: list[list[int]] = [[] for _ in range(nrays)]
    big_patterns: dict[int, tuple[int, ...]] = {}
    sat = [False] * len(patterns)
    unsat = 0
    for idx, pat in enumerate(patterns):
        if any(degrees[a] == 0 for a in pat):
            sat[idx] = True
            continue
        unsat += 1
        if len(pat) == 2:
            s, t = pat
            base = _pair_masks(p, degrees[s], degrees[t])
            rows = _select_rows(base, tables[s][0], p, degrees[s])
            masks = [_subset_mask(r, tables[t][0], p, degrees[t]) for r in rows]
            pairs_into[t].append((s, masks, idx))
        else:
            big_patterns[idx] = pat
            for a in pat:
                bigs_into[a].append(idx)

    big_stacks = {idx: [(None, True)] for idx in big_patterns}
    full_masks = [(1 << s) - 1 for s in sizes]
    choice = [0] * nrays
    count = 0

    def rec(t: int) -> None:
        nonlocal count, unsat
        if unsat == 0 and leaf_fn is None:
            prod = 1
            for u in range(t, nrays):
                prod *= sizes[u] if u else (first_hi - first_lo)
            count += prod
            return
        if t == nrays:
            if leaf_fn is None:
                raise InternalCheckError(
                    "pattern still unsettled with every ray assigned"
                )
            count += leaf_fn(choice)
            return
        allowed = full_masks[t]
        if t == 0:
            allowed &= ((1 << first_hi) - 1) & ~((1 << first_lo) - 1)
        newly = []
        for s, masks, idx in pairs_into[t]:
            if not sat[idx]:
                allowed &= masks[choice[s]]
                newly.append(idx)
        if not allowed:
            return
        live_bigs = [b for b in bigs_into[t] if not sat[b]]
        for idx in newly:
            sat[idx] = True
        unsat -= len(newly)
        try:
            if leaf_fn is None and t == nrays - 1 and not live_bigs:
                if unsat == 0:
                    count += allowed.bit_count()
                    return
            deh_t = dehoms[t]
            inf_t = infs[t]
            while allowed:
                low = allowed & -allowed
                j = low.bit_length() - 1
                allowed ^= low
                choice[t] = j
                pushed = []
                marked = []
                ok = True
                for b in live_bigs:
                    if sat[b]:
                        continue
                    state = _fold_root_state(
                        big_stacks[b][-1], deh_t[j], inf_t[j], p
                    )
                    big_stacks[b].append(state)
                    pushed.append(b)
                    if _state_settled(state):
                        sat[b] = True
                        marked.append(b)
                    elif big_patterns[b][-1] == t:
                        ok = False
                        break
                if ok:
                    if marked:
                        unsat_delta = len(marked)
                    else:
                        unsat_delta = 0
                    unsat -= unsat_delta
                    rec(t + 1)
                    unsat += unsat_delta
                for b in pushed:
                    big_stacks[b].pop()
                for b in marked:
                    sat[b] = False
        finally:
            for idx in newly:
                sat[idx] = False
            unsat += len(newly)

    rec(0)
    return count


def _select_rows(base, forms, p, e):
    full = _form_table(p, e)[0]
    if len(forms) == len(full):
        return base
    index = {f: i for i, f in enumerate(full)}
    return [base[index[f]] for f in forms]


def _subset_mask(row, forms, p, e):
    full = _form_table(p, e)[0]
    if len(forms) == len(full):
        return row
    index = {f: i for i, f in enumerate(full)}
    mask = 0
    for pos, f in enumerate(forms):
        if (row >> index[f]) & 1:
            mask |= 1 << pos
    return mask


def _chunk_ranges(size: int, jobs: int) -> list[tuple[int, int]]:
    parts = min(size, max(jobs * 3, 1))
    step = -(-size // parts)
    return [(lo, min(lo + step, size)) for lo in range(0, size, step)]


def _pattern_chunk(args) -> int:
    p, degrees, patterns, lo, hi = args
    return _count_tuples(p, degrees, patterns, lo, hi)


def _minimal_patterns(fan: Fan) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(sorted(j)) for j in pattern_set(fan).minimal
    )


def ff_pattern_count(
    p: int,
    fan: Fan,
    e: Sequence[int],
    budget: int | None = None,
    jobs: int = 1,
) -> int:
    """Number of divisor tuples of multidegree e avoiding all patterns.

    Tuples of normalized forms, one per ray, such that no minimal
    forbidden set of them has a common projective root.  Refuses to run
    when the product of the form-space sizes exceeds the budget.
    """
    _check_prime(p)
    require_valid(fan)
    e = tuple(int(x) for x in e)
    if len(e) != fan.nrays:
        raise ValueError(
            f"degree arity {len(e)} does not match ray count {fan.nrays}"
        )
    if any(x < 0 for x in e):
        raise ValueError("degrees must be nonnegative")
    limit = _resolve_budget(budget)
    required = 1
    for x in e:
        required *= (p ** (x + 1) - 1) // (p - 1)
    if required > limit:
        raise BudgetError(required, limit)
    patterns = _minimal_patterns(fan)
    size0 = (p ** (e[0] + 1) - 1) // (p - 1) if e else 1
    if jobs <= 1 or size0 < 2:
        return _count_tuples(p, e, patterns, 0, size0)
    total = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        work = [
            (p, e, patterns, lo, hi) for lo, hi in _chunk_ranges(size0, jobs)
        ]
        for part in pool.map(_pattern_chunk, work):
            total += part
    return total


def ff_hom_count(
    p: int,
    fan: Fan,
    d: Sequence[int],
    budget: int | None = None,
    jobs: int = 1,
) -> int:
    """Point count of the space of degree-d maps over F_p.

    Counts tuples of nonzero forms (all scalings of the normalized
    tuples) avoiding the patterns, then divides by the order of the
    Neron-Severi torus; the quotient must be exact.
    """
    cnt = ff_pattern_count(p, fan, d, budget=budget, jobs=jobs)
    raw = cnt * (p - 1) ** fan.nrays
    div = (p - 1) ** picard_data(fan).rank
    if raw % div:
        raise InternalCheckError(
            f"form-tuple count {raw} is not divisible by the torus order {div}"
        )
    return raw // div


def reduce_point(pt: Sequence[int], p: int) -> int | None:
    """Reduce a primitive (x0, x1) point of P^1(Q) modulo p.

    Returns the affine value x1/x0 in F_p, or None for the point at
    infinity [0:1].
    """
    x0, x1 = (int(x) % p for x in pt)
    if x0:
        return (x1 * pow(x0, p - 2, p)) % p
    if x1:
        return None
    raise ValueError(f"point {tuple(pt)} is not primitive modulo {p}")


@dataclass(frozen=True)
class JetSpec:
    """A jet target at one rational point of P^1 over F_p.

    ``point`` is an affine value (int) or None for infinity; ``target``
    gives, per ray, the m+1 coefficients of a unit truncated series in
    the local parameter at the point.
    """

    point: int | None
    order: int
    target: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(
        cls, nrays: int, point: int | None, order: int = 0
    ) -> "JetSpec":
        jet = (1,) + (0,) * order
        return cls(point, order, (jet,) * nrays)

    def validate_for(self, p: int, nrays: int) -> None:
        if self.order < 0:
            raise ValueError("jet order must be nonnegative")
        if self.point is not None and not 0 <= self.point < p:
            raise ValueError(f"point {self.point} is not reduced modulo {p}")
        if len(self.target) != nrays:
            raise ValueError(
                f"target arity {len(self.target)} does not match "
                f"ray count {nrays}"
            )
        for comp in self.target:
            if len(comp) != self.order + 1:
                raise ValueError("each target component needs order+1 entries")
            if comp[0] % p == 0:
                raise ValueError(
                    "target is not a torus jet (component with zero "
                    "constant term)"
                )


def _series_mul(a, b, p, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def _series_inv(a, p, n):
    inv0 = pow(a[0] % p, p - 2, p)
    out = [inv0] + [0] * (n - 1)
    for j in range(1, n):
        acc = 0
        for i in range(1, j + 1):
            if i < len(a):
                acc += a[i] * out[j - i]
        out[j] = (-inv0 * acc) % p
    return tuple(out)


def _series_pow(a, k, p, n):
    if k < 0:
        return _series_pow(_series_inv(a, p, n), -k, p, n)
    result = (1,) + (0,) * (n - 1)
    base = tuple(x % p for x in a[:n]) + (0,) * max(0, n - len(a))
    while k:
        if k & 1:
            result = _series_mul(result, base, p, n)
        base = _series_mul(base, base, p, n)
        k >>= 1
    return result


def _taylor_jet(coeffs: tuple[int, ...], point: int | None, m: int, p: int):
    """First m+1 Taylor coefficients of the dehomogenized form at the point."""
    e = len(coeffs) - 1
    if point is None:
        return tuple(coeffs[e - j] % p if e - j >= 0 else 0 for j in range(m + 1))
    out = []
    for j in range(m + 1):
        acc = 0
        for i in range(j, e + 1):
            acc += math.comb(i, j) * coeffs[i] * pow(point, i - j, p)
        out.append(acc % p)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _tns_image(p: int, rank: int, weights, m: int) -> frozenset:
    """Image of the torus of truncated units inside the ray-indexed units."""
    n = m + 1
    unit_space = [
        (c0,) + rest
        for c0 in range(1, p)
        for rest in itertools.product(range(p), repeat=m)
    ]
    nrays = len(weights[0])
    image = set()
    for units in itertools.product(unit_space, repeat=rank):
        vec = []
        for alpha in range(nrays):
            acc = (1,) + (0,) * m
            for j in range(rank):
                w = weights[j][alpha]
                if w:
                    acc = _series_mul(
                        acc, _series_pow(units[j], w, p, n), p, n
                    )
            vec.append(acc)
        image.add(tuple(vec))
    expected = ((p - 1) * p**m) ** rank
    if len(image) != expected:
        raise InternalCheckError(
            f"torus image has {len(image)} elements, expected {expected}"
        )
    return frozenset(image)


def _constrained_chunk(args) -> int:
    (p, degrees, patterns, lo, hi, point, order, target, weights, rank) = args
    return _constrained_core(
        p, degrees, patterns, lo, hi, point, order, target, weights, rank
    )


def _constrained_core(
    p, degrees, patterns, lo, hi, point, order, target, weights, rank
) -> int:
    n = order + 1
    filtered = []
    jets_per_ray = []
    for e in degrees:
        forms, dehoms, infs = _form_table(p, e)
        keep_f, keep_d, keep_i, jets = [], [], [], []
        for f, dh, iv in zip(forms, dehoms, infs):
            jet = _taylor_jet(f, point, order, p)
            if jet[0]:
                keep_f.append(f)
                keep_d.append(dh)
                keep_i.append(iv)
                jets.append(jet)
        filtered.append((tuple(keep_f), tuple(keep_d), tuple(keep_i)))
        jets_per_ray.append(jets)
    if any(not t[0] for t in filtered):
        return 0
    hi = min(hi, len(filtered[0][0]))
    if lo >= hi:
        return 0
    image = _tns_image(p, rank, weights, order)
    if order == 0:
        leaves = _count_tuples(
            p, degrees, patterns, lo, hi, tables=filtered
        )
        return leaves * len(image)
    target_inv = [_series_inv(t, p, n) for t in target]
    units = tuple(range(1, p))
    nrays = len(degrees)

    def leaf(choice):
        w = [
            _series_mul(jets_per_ray[a][choice[a]], target_inv[a], p, n)
            for a in range(nrays)
        ]
        hits = 0
        for lam in itertools.product(units, repeat=nrays):
            scaled = tuple(
                tuple((x * l) % p for x in wa) for l, wa in zip(lam, w)
            )
            if scaled in image:
                hits += 1
        return hits

    return _count_tuples(
        p, degrees, patterns, lo, hi, tables=filtered, leaf_fn=leaf
    )


def ff_constrained_count(
    p: int,
    fan: Fan,
    d: Sequence[int],
    jet: JetSpec,
    budget: int | None = None,
    jobs: int = 1,
) -> int:
    """Count degree-d maps whose jet at one point hits a torus-jet orbit.

    Tuples of nonzero forms avoiding the patterns whose truncated Taylor
    expansion at the marked point lies in the torus orbit of the target
    jet, divided by the order of the Neron-Severi torus (exactly).
    """
    _check_prime(p)
    require_valid(fan)
    d = tuple(int(x) for x in d)
    if len(d) != fan.nrays:
        raise ValueError(
            f"degree arity {len(d)} does not match ray count {fan.nrays}"
        )
    if any(x < 0 for x in d):
        raise ValueError("degrees must be nonnegative")
    jet.validate_for(p, fan.nrays)
    limit = _resolve_budget(budget)
    required = 1
    for x in d:
        required *= (p ** (x + 1) - 1) // (p - 1)
    if required > limit:
        raise BudgetError(required, limit)
    pd = picard_data(fan)
    target = tuple(tuple(c % p for c in comp) for comp in jet.target)
    patterns = _minimal_patterns(fan)
    args_common = (
        p, d, patterns, jet.point, jet.order, target, pd.projection, pd.rank,
    )
    forms0 = sum(
        1
        for f in _form_table(p, d[0])[0]
        if _taylor_jet(f, jet.point, jet.order, p)[0]
    ) if d else 1
    if jobs <= 1 or forms0 < 2:
        weighted = _constrained_core(
            p, d, patterns, 0, max(forms0, 1), jet.point, jet.order, target,
            pd.projection, pd.rank,
        )
    else:
        weighted = 0
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            work = [
                (p, d, patterns, lo, hi) + args_common[3:]
                for lo, hi in _chunk_ranges(forms0, jobs)
            ]
            for part in pool.map(_constrained_chunk, work):
                weighted += part
    div = (p - 1) ** pd.rank
    if weighted % div:
        raise InternalCheckError(
            f"constrained count {weighted} is not divisible by the torus "
            f"order {div}"
        )
    return weighted // div


@dataclass(frozen=True)
class OracleReport:
    """Outcome of one brute-force vs motivic comparison."""

    p: int
    kind: str
    vector: tuple[int, ...]
    brute: int
    predicted: int
    equal: bool
    elapsed_ms: int

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "e_or_d": list(self.vector),
            "brute": str(self.brute),
            "predicted": str(self.predicted),
            "equal": self.equal,
            "elapsed_ms": self.elapsed_ms,
        }


def oracle_compare(
    p: int,
    fan: Fan,
    e: Sequence[int] | None = None,
    d: Sequence[int] | None = None,
    budget: int | None = None,
    jobs: int = 1,
) -> OracleReport:
    """Compare a motivic class against its brute-force count at L = p.

    Pass ``e`` to compare the configuration class, ``d`` to compare the
    map-space class; exactly one of the two.
    """
    if (e is None) == (d is None):
        raise ValueError("pass exactly one of e (configurations) or d (maps)")
    start = time.perf_counter()
    if e is not None:
        vec = tuple(int(x) for x in e)
        brute = ff_pattern_count(p, fan, vec, budget=budget, jobs=jobs)
        cls = pattern_config_class(fan, vec, 0)
        kind = "config"
    else:
        vec = tuple(int(x) for x in d)
        brute = ff_hom_count(p, fan, vec, budget=budget, jobs=jobs)
        cls = hom_class(fan, vec)
        kind = "hom"
    value = evaluate(cls, p)
    if value.denominator != 1:
        raise InternalCheckError(
            f"motivic prediction {value} is not an integer at q={p}"
        )
    predicted = int(value)
    elapsed = int((time.perf_counter() - start) * 1000)
    return OracleReport(
        p, kind, vec, brute, predicted, brute == predicted, elapsed
    )
