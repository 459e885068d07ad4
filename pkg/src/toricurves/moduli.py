"""Classes of spaces of rational curves and their limiting constants.

Everything here combines the Euler-product engine with the toric data:
classes of tuples of divisors avoiding the forbidden patterns, classes
of degree-d maps from the projective line to the variety, the limiting
(Tamagawa) constant, truncation-aware convergence reports, and the
constrained variants where jets at marked rational points are fixed.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .grothendieck import (
    MINUS_INFINITY,
    ONE,
    ZERO,
    DimSeries,
    LaurentClass,
    MultiSeries,
    SeriesCap,
    dimser_mul,
    inverse_one_minus_Linv_pow,
)
from .toric import (
    Fan,
    class_of_variety,
    eff_dual_contains,
    picard_data,
    require_valid,
)
from .eulerprod import (
    euler_product_at_Linv,
    global_mobius,
    zeta_p1_coeffs,
)

log = logging.getLogger(__name__)

__all__ = [
    "DegreeVector",
    "JetCondition",
    "ErrorReport",
    "pattern_config_class",
    "pattern_config_series",
    "hom_class",
    "normalized_hom_class",
    "tamagawa",
    "convergence_report",
    "constrained_main_term",
    "expected_dimension_check",
]


@dataclass(frozen=True)
class DegreeVector:
    """Multidegree indexed by the rays of a fan."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if not all(isinstance(x, int) and x >= 0 for x in self.entries):
            raise ValueError("degree entries must be nonnegative integers")

    @classmethod
    def of(cls, d: "DegreeVector | Sequence[int]") -> "DegreeVector":
        if isinstance(d, DegreeVector):
            return d
        return cls(tuple(int(x) for x in d))

    @property
    def total(self) -> int:
        """The anticanonical degree: the sum of all entries."""
        return sum(self.entries)

    @property
    def minimum(self) -> int:
        return min(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _canonical_point(pt: Sequence[int]) -> tuple[int, int]:
    """Normalize homogeneous coordinates (x0, x1) of a point of P^1.

    The affine coordinate is x1/x0, so (1, a) is the affine point a and
    (0, 1) is the point at infinity.  Canonical form: coprime entries
    with the first nonzero one positive.
    """
    a, b = (int(x) for x in pt)
    if a == 0 and b == 0:
        raise ValueError("(0, 0) is not a point of the projective line")
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


@dataclass(frozen=True)
class JetCondition:
    """Jets fixed at finitely many distinct rational points of P^1.

    ``points`` pairs a point in primitive homogeneous coordinates with a
    jet order m >= 0 (order m means the map is constrained to m-th order,
    a length m+1 condition).  ``W_class`` is the class of the allowed
    locus inside the product of jet spaces and ``W_dim`` its dimension;
    the full jet space at each point imposes no condition at all.
    """

    points: tuple[tuple[tuple[int, int], int], ...]
    W_class: LaurentClass
    W_dim: int

    def __post_init__(self):
        canon = []
        for pt, order in self.points:
            if order < 0:
                raise ValueError("jet orders must be nonnegative")
            canon.append((_canonical_point(pt), int(order)))
        for i in range(len(canon)):
            for j in range(i + 1, len(canon)):
                if canon[i][0] == canon[j][0]:
                    raise ValueError(
                        f"jet points must be distinct; {canon[i][0]} repeats"
                    )
        object.__setattr__(self, "points", tuple(canon))
        if not isinstance(self.W_class, LaurentClass):
            raise ValueError("W_class must be a LaurentClass")

    @classmethod
    def empty(cls) -> "JetCondition":
        return cls((), ONE, 0)

    @classmethod
    def full_jets(
        cls, fan: Fan, specs: Sequence[tuple[Sequence[int], int]]
    ) -> "JetCondition":
        """No condition: the whole jet space at each marked point."""
        n = fan.dim
        cls_v = class_of_variety(fan)
        w = ONE
        total_jet = 0
        for _, order in specs:
            w = w * cls_v
            total_jet += order
        w = w.shift(total_jet * n)
        dim = sum((order + 1) * n for _, order in specs)
        return cls(tuple((tuple(pt), order) for pt, order in specs), w, dim)

    @classmethod
    def torus_point(
        cls, point: Sequence[int], order: int = 0
    ) -> "JetCondition":
        """A single prescribed jet (class 1, dimension 0) at one point."""
        return cls(((tuple(point), order),), ONE, 0)

    @property
    def npoints(self) -> int:
        return len(self.points)

    @property
    def length(self) -> int:
        """Total length of the condition scheme: sum of (m_p + 1)."""
        return sum(order + 1 for _, order in self.points)

    def validate_against(self, fan: Fan) -> None:
        bound = self.length * fan.dim
        if self.W_dim > bound:
            raise ValueError(
                f"W_dim {self.W_dim} exceeds the jet-space dimension {bound}"
            )

    def to_json(self) -> dict:
        return {
            "points": [
                {"point": list(pt), "order": order} for pt, order in self.points
            ],
            "W_class": self.W_class.to_json(),
            "W_dim": self.W_dim,
        }


@dataclass(frozen=True)
class ErrorReport:
    """Distance between a normalized class and the truncated constant.

    ``delta_dim`` is the virtual dimension of the known part of the
    difference, ``bound`` the convergence bound for this degree.  When
    the truncation floor sits above the bound nothing can be concluded
    and ``inconclusive`` is set instead of a verdict.
    """

    degree: tuple[int, ...]
    tau_trunc: DimSeries
    normalized: LaurentClass
    delta_dim: object
    bound: Fraction
    passed: bool
    inconclusive: bool

    @property
    def status(self) -> str:
        if self.inconclusive:
            return "inconclusive"
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        delta = self.delta_dim
        return {
            "degree": list(self.degree),
            "tau_truncated": self.tau_trunc.to_json(),
            "normalized": self.normalized.to_json(),
            "delta_dim": None if delta is MINUS_INFINITY else int(delta),
            "bound": str(self.bound),
            "status": self.status,
            "passed": self.passed,
        }


def pattern_config_class(
    fan: Fan, e: "DegreeVector | Sequence[int]", s: int = 0
) -> LaurentClass:
    """Class of ray-indexed divisor tuples of multidegree e avoiding B.

    Tuples of effective divisors on P^1 minus s rational points, one per
    ray, such that no point lies on a forbidden set of them.  Computed
    as the t^e coefficient of the Euler product times one punctured-line
    zeta factor per variable.
    """
    e = DegreeVector.of(e).entries
    require_valid(fan)
    if len(e) != fan.nrays:
        raise ValueError(
            f"degree arity {len(e)} does not match ray count {fan.nrays}"
        )
    if s < 0:
        raise ValueError("removed point count must be nonnegative")
    # A uniform box keyed by max(e) keeps the engine cache hot across
    # the degrees of one sweep instead of rerunning per exponent vector.
    top = max(e) if e else 0
    table = global_mobius(fan, s, SeriesCap.box_cap((top,) * len(e)))
    zeta = zeta_p1_coeffs(s, top)
    acc = ZERO
    for prior, mu in table.items():
        if any(a > b for a, b in zip(prior, e)):
            continue
        term = mu
        for a, b in zip(prior, e):
            term = term * zeta[b - a]
        acc = acc + term
    return acc


def pattern_config_series(fan: Fan, cap: SeriesCap, s: int = 0) -> MultiSeries:
    """The full generating series of pattern_config_class within a cap."""
    require_valid(fan)
    table = global_mobius(fan, s, cap)
    variables = tuple(f"t{i + 1}" for i in range(fan.nrays))
    series = MultiSeries(variables, cap, dict(table.items()))
    for alpha in range(fan.nrays):
        jmax = cap.box[alpha]
        unit = tuple(1 if i == alpha else 0 for i in range(fan.nrays))
        factor = MultiSeries(
            variables,
            cap,
            {
                tuple(j * u for u in unit): z
                for j, z in enumerate(zeta_p1_coeffs(s, jmax))
            },
        )
        series = series * factor
    return series


def open_curve_config_series(fan: Fan, cap: SeriesCap, s: int = 0) -> MultiSeries:
    """Tripwire route for the configuration series on the open curve.

    Instead of splitting off the zeta factors, feed the engine the
    truncated avoidance indicator itself (1 on exponents dominating no
    forbidden pattern, 0 elsewhere).  Agrees with pattern_config_series
    coefficientwise; the input here is dense, so this route is only
    meant for small caps.
    """
    import itertools

    from .mobius import IntPoly
    from .toric import pattern_set

    require_valid(fan)
    patterns = pattern_set(fan)
    coeffs = {}
    for e in itertools.product(*(range(b + 1) for b in cap.box)):
        if cap.admits(e) and not patterns.lies_above(e):
            coeffs[e] = 1
    from .eulerprod import euler_product_p1

    return euler_product_p1(IntPoly(fan.nrays, coeffs), s, cap)


@functools.lru_cache(maxsize=None)
def _hom_class_cached(fan: Fan, d: tuple[int, ...]) -> LaurentClass:
    if not eff_dual_contains(fan, d):
        log.warning(
            "degree %s is outside the dual effective cone; "
            "the space of maps is empty",
            d,
        )
        return ZERO
    n = fan.dim
    lm1 = LaurentClass({1: 1, 0: -1})
    return lm1**n * pattern_config_class(fan, d, 0)


def hom_class(fan: Fan, d: "DegreeVector | Sequence[int]") -> LaurentClass:
    """Class of degree-d maps from P^1 meeting the dense torus.

    Zero (with a logged diagnostic) when d lies outside the dual of the
    effective cone, where no such map exists.
    """
    require_valid(fan)
    return _hom_class_cached(fan, DegreeVector.of(d).entries)


def normalized_hom_class(
    fan: Fan, d: "DegreeVector | Sequence[int]"
) -> LaurentClass:
    """hom_class divided by L to the anticanonical degree."""
    dv = DegreeVector.of(d)
    return hom_class(fan, dv).shift(-dv.total)


def tamagawa(fan: Fan, E: int) -> DimSeries:
    """Truncated limiting constant of the fan's variety.

    L^n (1 - L^{-1})^{-rank Pic} times the Euler product evaluated at
    L^{-1} and truncated at total degree E, as a dimension-floored
    series.
    """
    require_valid(fan)
    ep = euler_product_at_Linv(fan, 0, E)
    rank = picard_data(fan).rank
    inv = inverse_one_minus_Linv_pow(rank, ep.floor)
    return dimser_mul(inv, ep).shift(fan.dim)


def convergence_report(
    fan: Fan, d: "DegreeVector | Sequence[int]", E: int
) -> ErrorReport:
    """Compare a normalized class against the truncated constant.

    The difference is judged on the degrees above the truncation floor
    against the bound -min(d)/4 + n; if the floor itself sits above the
    bound the comparison is inconclusive and reported as such.
    """
    dv = DegreeVector.of(d)
    require_valid(fan)
    if not eff_dual_contains(fan, dv.entries):
        raise ValueError(
            f"degree {dv.entries} is outside the dual effective cone"
        )
    tau = tamagawa(fan, E)
    normalized = normalized_hom_class(fan, dv)
    bound = Fraction(-dv.minimum, 4) + fan.dim
    delta = (tau.known - normalized).truncate_below(tau.floor)
    delta_dim = delta.virtual_dimension
    if tau.floor > bound:
        return ErrorReport(
            dv.entries, tau, normalized, delta_dim, bound, False, True
        )
    passed = delta_dim is MINUS_INFINITY or delta_dim <= bound
    return ErrorReport(
        dv.entries, tau, normalized, delta_dim, bound, passed, False
    )


def constrained_main_term(fan: Fan, jc: JetCondition, E: int) -> DimSeries:
    """Truncated limiting constant with jets fixed at marked points.

    Multiplies the punctured Euler product by the class of the allowed
    jet locus and one correction factor per marked point; with no points
    this is exactly the unconstrained constant.
    """
    require_valid(fan)
    jc.validate_against(fan)
    n = fan.dim
    rank = picard_data(fan).rank
    ep = euler_product_at_Linv(fan, jc.npoints, E)
    inv = inverse_one_minus_Linv_pow(rank, ep.floor)
    base = dimser_mul(inv, ep).shift(n)
    one_minus = (ONE - LaurentClass({-1: 1})) ** rank
    factor = jc.W_class
    for _, order in jc.points:
        factor = (factor * one_minus).shift(-(order + 1) * n)
    return dimser_mul(base, DimSeries.exact(factor))


def expected_dimension_check(
    fan: Fan,
    d: "DegreeVector | Sequence[int]",
    jc: JetCondition | None = None,
    primes: Sequence[int] = (2, 3, 5),
) -> bool:
    """Check that the computed dimension matches the expected one.

    Unconstrained: the class of maps has virtual dimension |d| + n
    exactly.  Constrained: only a point-counting trend is available; the
    counts over the given primes are compared against p^(expected dim)
    and must agree up to a factor of four across the primes.
    """
    dv = DegreeVector.of(d)
    require_valid(fan)
    if jc is None or not jc.points:
        cls = hom_class(fan, dv)
        return cls.virtual_dimension == dv.total + fan.dim
    if jc.npoints != 1 or jc.W_dim != 0 or jc.W_class != ONE:
        raise ValueError(
            "constrained dimension checks support a single point with a "
            "one-jet target (W_class 1, W_dim 0) only"
        )
    from . import oracle

    (pt, order), = jc.points
    expected = dv.total + fan.dim * (1 - jc.length) + jc.W_dim
    ratios = []
    for p in primes:
        jet = oracle.JetSpec.identity(
            fan.nrays, oracle.reduce_point(pt, p), order
        )
        count = oracle.ff_constrained_count(p, fan, dv.entries, jet)
        if count <= 0:
            return False
        ratios.append(Fraction(count) / Fraction(p) ** expected)
    return max(ratios) <= 4 * min(ratios)
