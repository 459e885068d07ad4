"""Exact arithmetic for Grothendieck-ring classes.

Three layers, all with arbitrary-precision integer (or exact rational)
coefficients and no floating point anywhere:

  * LaurentClass: an integer Laurent polynomial in the Lefschetz class L.
  * DimSeries: a Laurent series in L^-1 known exactly above a tracked
    precision floor (an element of the dimensional completion).
  * MultiSeries: a truncated multivariate power series in variables t_alpha
    whose coefficients live in some commutative ring (LaurentClass here,
    rational polynomials in an auxiliary variable inside the Euler engine).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class _MinusInfinity:
    """Sentinel for the virtual dimension of the zero class.

    Compares strictly below every integer and equal only to itself.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("MINUS_INFINITY")

    def __repr__(self):
        return "MINUS_INFINITY"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("minus infinity has no negation")


MINUS_INFINITY = _MinusInfinity()


def dim_sum(a, b):
    """a + b where either operand may be MINUS_INFINITY."""
    if a is MINUS_INFINITY or b is MINUS_INFINITY:
        return MINUS_INFINITY
    return a + b


class LaurentClass:
    """An element of Z[L, L^-1], stored sparsely as {exponent: coefficient}.

    Instances are immutable in practice: no public mutators, arithmetic
    returns fresh objects, and hashing is supported.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        c = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for e, v in items:
            v = int(v)
            if v:
                e = int(e)
                c[e] = c.get(e, 0) + v
                if not c[e]:
                    del c[e]
        self._c = c

    @classmethod
    def zero(cls) -> "LaurentClass":
        return cls()

    @classmethod
    def one(cls) -> "LaurentClass":
        return cls({0: 1})

    @classmethod
    def of_int(cls, n: int) -> "LaurentClass":
        return cls({0: n})

    @classmethod
    def lefschetz(cls, power: int = 1) -> "LaurentClass":
        return cls({power: 1})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def coefficient(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in descending exponent order."""
        return sorted(self._c.items(), reverse=True)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentClass.of_int(other)
        if not isinstance(other, LaurentClass):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __neg__(self) -> "LaurentClass":
        r = LaurentClass()
        r._c = {e: -v for e, v in self._c.items()}
        return r

    def __add__(self, other) -> "LaurentClass":
        if isinstance(other, int):
            other = LaurentClass.of_int(other)
        if not isinstance(other, LaurentClass):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        r = LaurentClass()
        r._c = c
        return r

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentClass":
        if isinstance(other, int):
            other = LaurentClass.of_int(other)
        if not isinstance(other, LaurentClass):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentClass":
        return (-self) + other

    def __mul__(self, other) -> "LaurentClass":
        if isinstance(other, int):
            r = LaurentClass()
            if other:
                r._c = {e: v * other for e, v in self._c.items()}
            return r
        if not isinstance(other, LaurentClass):
            return NotImplemented
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                w = c.get(e, 0) + v1 * v2
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        r = LaurentClass()
        r._c = c
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentClass":
        if n < 0:
            raise ValueError("negative powers are not defined in Z[L, L^-1] classes")
        result = LaurentClass.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentClass":
        """Multiply by L^k."""
        r = LaurentClass()
        r._c = {e + k: v for e, v in self._c.items()}
        return r

    @property
    def virtual_dimension(self):
        if not self._c:
            return MINUS_INFINITY
        return max(self._c)

    def min_exponent(self):
        if not self._c:
            return MINUS_INFINITY
        return min(self._c)

    def evaluate(self, q: int) -> Fraction:
        """Substitute L = q, exactly.  Requires q >= 2."""
        if q < 2:
            raise ValueError("evaluation point must be an integer >= 2")
        total = Fraction(0)
        for e, v in self._c.items():
            total += v * Fraction(q) ** e
        return total

    def truncate_below(self, floor: int) -> "LaurentClass":
        """Drop all terms of exponent strictly below floor."""
        r = LaurentClass()
        r._c = {e: v for e, v in self._c.items() if e >= floor}
        return r

    def to_json(self) -> dict:
        return {"coeffs": {str(e): str(v) for e, v in sorted(self._c.items())}}

    @classmethod
    def from_json(cls, doc: dict) -> "LaurentClass":
        return cls({int(e): int(v) for e, v in doc["coeffs"].items()})

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, v in self.terms():
            if e == 0:
                body = str(abs(v))
            else:
                lpow = "L" if e == 1 else f"L^{e}"
                body = lpow if abs(v) == 1 else f"{abs(v)}*{lpow}"
            if not parts:
                parts.append(body if v > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if v > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentClass({self._c!r})"


L = LaurentClass.lefschetz()
ONE = LaurentClass.one()
ZERO = LaurentClass.zero()


def virtual_dimension(x: LaurentClass):
    """Largest exponent carrying a nonzero coefficient; MINUS_INFINITY for 0."""
    return x.virtual_dimension


def evaluate(x: LaurentClass, q: int) -> Fraction:
    return x.evaluate(q)


class DimSeries:
    """A Laurent series in L^-1, exact on all degrees >= floor.

    floor is None for exact values (no unknown tail at all).  Construction
    truncates the known part so that every stored exponent is >= floor.
    """

    __slots__ = ("known", "floor")

    def __init__(self, known: LaurentClass, floor: int | None):
        if floor is not None:
            known = known.truncate_below(floor)
        self.known = known
        self.floor = floor

    @classmethod
    def exact(cls, value: LaurentClass | int) -> "DimSeries":
        if isinstance(value, int):
            value = LaurentClass.of_int(value)
        return cls(value, None)

    @classmethod
    def truncated(cls, value: LaurentClass, floor: int) -> "DimSeries":
        return cls(value, floor)

    @property
    def is_exact(self) -> bool:
        return self.floor is None

    def truncate(self, floor: int) -> "DimSeries":
        f = floor if self.floor is None else max(self.floor, floor)
        return DimSeries(self.known, f)

    def shift(self, k: int) -> "DimSeries":
        """Multiply by the exact monomial L^k."""
        f = None if self.floor is None else self.floor + k
        return DimSeries(self.known.shift(k), f)

    def __add__(self, other) -> "DimSeries":
        if isinstance(other, (LaurentClass, int)):
            other = DimSeries.exact(other)
        if not isinstance(other, DimSeries):
            return NotImplemented
        if self.floor is None:
            f = other.floor
        elif other.floor is None:
            f = self.floor
        else:
            f = max(self.floor, other.floor)
        return DimSeries(self.known + other.known, f)

    __radd__ = __add__

    def __neg__(self) -> "DimSeries":
        return DimSeries(-self.known, self.floor)

    def __sub__(self, other) -> "DimSeries":
        if isinstance(other, (LaurentClass, int)):
            other = DimSeries.exact(other)
        return self + (-other)

    def __rsub__(self, other) -> "DimSeries":
        return (-self) + other

    def __mul__(self, other) -> "DimSeries":
        if isinstance(other, (LaurentClass, int)):
            other = DimSeries.exact(other)
        if not isinstance(other, DimSeries):
            return NotImplemented
        # The unknown tail of one factor meets the full other factor; take
        # the worst (largest) degree any such cross term can reach.
        candidates = []
        if self.floor is not None:
            candidates.append(dim_sum(self.floor, other.known.virtual_dimension))
        if other.floor is not None:
            candidates.append(dim_sum(other.floor, self.known.virtual_dimension))
        if self.floor is not None and other.floor is not None:
            candidates.append(self.floor + other.floor)
        candidates = [c for c in candidates if c is not MINUS_INFINITY]
        f = max(candidates) if candidates else None
        return DimSeries(self.known * other.known, f)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DimSeries):
            return NotImplemented
        return self.floor == other.floor and self.known == other.known

    def __hash__(self):
        return hash((self.known, self.floor))

    def to_json(self) -> dict:
        doc = self.known.to_json()
        doc["floor"] = "exact" if self.floor is None else self.floor
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "DimSeries":
        floor = doc["floor"]
        return cls(LaurentClass.from_json(doc), None if floor == "exact" else int(floor))

    def __str__(self) -> str:
        tag = "exact" if self.floor is None else f"floor {self.floor}"
        return f"{self.known} ({tag})"

    def __repr__(self) -> str:
        return f"DimSeries({self.known!r}, floor={self.floor!r})"


def dimser_mul(a: DimSeries, b: DimSeries) -> DimSeries:
    return a * b


def dimser_add(a: DimSeries, b: DimSeries) -> DimSeries:
    return a + b


def inverse_one_minus_Linv_pow(r: int, floor: int) -> DimSeries:
    """(1 - L^-1)^-r expanded down to the given floor.

    The coefficient of L^-i is binomial(r - 1 + i, i).
    """
    if r < 1:
        raise ValueError("exponent r must be >= 1")
    if floor > 0:
        raise ValueError("floor must be <= 0")
    coeffs = {}
    binom = 1
    for i in range(-floor + 1):
        coeffs[-i] = binom
        binom = binom * (r + i) // (i + 1)
    return DimSeries(LaurentClass(coeffs), floor)


@dataclass(frozen=True)
class SeriesCap:
    """Truncation policy for MultiSeries: a per-variable box and/or a bound
    on the total degree.  At least one of the two must be present."""

    box: tuple[int, ...] | None = None
    total: int | None = None

    def __post_init__(self):
        if self.box is None and self.total is None:
            raise ValueError("a cap needs a box or a total-degree bound")
        if self.box is not None and any(b < 0 for b in self.box):
            raise ValueError("box entries must be nonnegative")
        if self.total is not None and self.total < 0:
            raise ValueError("total-degree bound must be nonnegative")

    def admits(self, expvec: tuple[int, ...]) -> bool:
        if self.box is not None:
            if len(expvec) != len(self.box):
                raise ValueError("exponent vector arity does not match the cap")
            if any(e > b for e, b in zip(expvec, self.box)):
                return False
        if self.total is not None and sum(expvec) > self.total:
            return False
        return True

    @classmethod
    def box_cap(cls, box: Iterable[int], total: int | None = None) -> "SeriesCap":
        box = tuple(int(b) for b in box)
        return cls(box=box, total=sum(box) if total is None else total)

    @classmethod
    def total_cap(cls, nvars: int, total: int) -> "SeriesCap":
        return cls(box=tuple([total] * nvars), total=total)


class MultiSeries:
    """Sparse truncated power series in named variables.

    Coefficients may be LaurentClass values or any other commutative-ring
    objects supporting +, *, unary -, and truth testing (zero is falsy).
    Multiplication discards exactly the monomials the cap rejects.
    """

    __slots__ = ("variables", "cap", "_c")

    def __init__(self, variables: Iterable[str], cap: SeriesCap,
                 coeffs: Mapping[tuple[int, ...], object] = ()):
        self.variables = tuple(variables)
        self.cap = cap
        c = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for e, v in items:
            e = tuple(int(x) for x in e)
            if len(e) != len(self.variables):
                raise ValueError("exponent vector arity does not match variables")
            if v and cap.admits(e):
                c[e] = v
        self._c = c

    @property
    def coeffs(self) -> dict[tuple[int, ...], object]:
        return dict(self._c)

    def coefficient(self, expvec: Iterable[int]):
        return self._c.get(tuple(int(x) for x in expvec), None)

    def items(self):
        return self._c.items()

    def _compatible(self, other: "MultiSeries"):
        if self.variables != other.variables:
            raise ValueError("variable lists differ")

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._compatible(other)
        c = dict(self._c)
        for e, v in other._c.items():
            if e in c:
                w = c[e] + v
                if w:
                    c[e] = w
                else:
                    del c[e]
            else:
                c[e] = v
        r = MultiSeries(self.variables, self.cap)
        r._c = c
        return r

    def __neg__(self) -> "MultiSeries":
        r = MultiSeries(self.variables, self.cap)
        r._c = {e: -v for e, v in self._c.items()}
        return r

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + (-other)

    def __mul__(self, other: "MultiSeries") -> "MultiSeries":
        self._compatible(other)
        cap = self.cap
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if not cap.admits(e):
                    continue
                w = v1 * v2
                if e in c:
                    w = c[e] + w
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        r = MultiSeries(self.variables, cap)
        r._c = c
        return r

    def scalar_mul(self, factor) -> "MultiSeries":
        r = MultiSeries(self.variables, self.cap)
        r._c = {}
        for e, v in self._c.items():
            w = v * factor
            if w:
                r._c[e] = w
        return r

    def substitute_power(self, d: int) -> "MultiSeries":
        """t_alpha -> t_alpha^d for every variable; out-of-cap terms drop."""
        if d < 1:
            raise ValueError("power must be >= 1")
        r = MultiSeries(self.variables, self.cap)
        for e, v in self._c.items():
            scaled = tuple(x * d for x in e)
            if self.cap.admits(scaled):
                r._c[scaled] = v
        return r

    def scale_vars(self, a: int) -> "MultiSeries":
        """t_alpha -> L^a * t_alpha simultaneously (LaurentClass coefficients)."""
        r = MultiSeries(self.variables, self.cap)
        for e, v in self._c.items():
            if not isinstance(v, LaurentClass):
                raise TypeError("scale_vars needs LaurentClass coefficients")
            r._c[e] = v.shift(a * sum(e))
        return r

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.variables == other.variables and self._c == other._c

    def __hash__(self):
        return hash((self.variables, frozenset(self._c.items())))

    def __repr__(self) -> str:
        return f"MultiSeries(vars={self.variables}, {len(self._c)} terms)"


def multiseries_scale_vars(F: MultiSeries, a: int) -> MultiSeries:
    return F.scale_vars(a)
