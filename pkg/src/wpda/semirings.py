"""Weight algebras and the matrix star closure used by unary removal.

A semiring is described by a :class:`SemiringDescriptor`: the two monoid
operations, their identities, an optional (possibly partial) star, and
capability flags that gate the transformations which need commutativity,
continuity, or star.  Five concrete instances are provided by
:func:`make_semiring`.

Weights are plain Python values (bool, int, float).  The log semiring works
in negative-log space: smaller is heavier, ``0.0`` is the multiplicative
identity and ``inf`` the additive one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Optional

from .errors import StarUndefinedError, ValidationError

SEMIRING_KINDS = ("boolean", "counting", "real", "tropical", "log")

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SemiringFlags:
    commutative: bool
    continuous: bool
    has_star: bool
    exact: bool


@dataclass(frozen=True)
class SemiringDescriptor:
    """An algebra (plus, times, zero, one, optional star) plus capability flags.

    Instances are immutable and safe to share across threads.
    """

    name: str
    zero: Any
    one: Any
    plus: Callable[[Any, Any], Any]
    times: Callable[[Any, Any], Any]
    star: Optional[Callable[[Any], Any]]
    flags: SemiringFlags
    approx_tolerance: float = DEFAULT_TOLERANCE
    parse_weight: Callable[[Any], Any] = field(default=lambda x: x, repr=False)

    def is_zero(self, value) -> bool:
        return self.eq(value, self.zero)

    def eq(self, a, b) -> bool:
        if self.flags.exact:
            return a == b
        if a == b:  # covers equal infinities
            return True
        try:
            return abs(a - b) <= self.approx_tolerance * max(1.0, abs(a), abs(b))
        except (TypeError, OverflowError):
            return False

    def sum(self, values) -> Any:
        total = self.zero
        for v in values:
            total = self.plus(total, v)
        return total

    def product(self, values) -> Any:
        total = self.one
        for v in values:
            total = self.times(total, v)
        return total

    def with_tolerance(self, tol: float) -> "SemiringDescriptor":
        return replace(self, approx_tolerance=tol)


def _log_plus(x: float, y: float) -> float:
    # negative-log space: -log(exp(-x) + exp(-y)), stable form
    if x == math.inf:
        return y
    if y == math.inf:
        return x
    m = min(x, y)
    return m - math.log1p(math.exp(-(abs(x - y))))


def _counting_star(a):
    if a == 0:
        return 1
    raise StarUndefinedError(f"counting star is undefined for {a!r} (only 0̄ has a star)")


def _real_star(a):
    if abs(a) < 1.0:
        return 1.0 / (1.0 - a)
    raise StarUndefinedError(f"real star diverges for |{a!r}| >= 1")


def _tropical_star(a):
    if a >= 0.0:
        return 0.0
    raise StarUndefinedError(f"tropical star diverges for negative {a!r}")


def _log_star(a):
    # sum of the geometric series in probability space needs exp(-a) < 1
    if a > 0.0:
        return math.log1p(-math.exp(-a))
    raise StarUndefinedError(f"log star diverges for {a!r} <= 0 (probability >= 1)")


def _parse_bool(x):
    if isinstance(x, bool):
        return x
    raise ValidationError(f"boolean semiring weights must be true/false, got {x!r}")


def _parse_count(x):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValidationError(f"counting semiring weights must be integers, got {x!r}")
    if x < 0:
        raise ValidationError(f"counting semiring weights must be nonnegative, got {x!r}")
    return x


def _parse_float(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"numeric weight expected, got {x!r}")
    return float(x)


def make_semiring(kind: str, tolerance: float = DEFAULT_TOLERANCE) -> SemiringDescriptor:
    """Build one of the five shipped semirings.

    Stars are partial: calling star on a value outside its domain raises
    :class:`StarUndefinedError` at that point rather than diverging.
    """
    if kind == "boolean":
        return SemiringDescriptor(
            name="boolean",
            zero=False,
            one=True,
            plus=lambda a, b: a or b,
            times=lambda a, b: a and b,
            star=lambda a: True,
            flags=SemiringFlags(commutative=True, continuous=True, has_star=True, exact=True),
            parse_weight=_parse_bool,
        )
    if kind == "counting":
        return SemiringDescriptor(
            name="counting",
            zero=0,
            one=1,
            plus=lambda a, b: a + b,
            times=lambda a, b: a * b,
            star=_counting_star,
            flags=SemiringFlags(commutative=True, continuous=False, has_star=True, exact=True),
            parse_weight=_parse_count,
        )
    if kind == "real":
        return SemiringDescriptor(
            name="real",
            zero=0.0,
            one=1.0,
            plus=lambda a, b: a + b,
            times=lambda a, b: a * b,
            star=_real_star,
            flags=SemiringFlags(commutative=True, continuous=True, has_star=True, exact=False),
            approx_tolerance=tolerance,
            parse_weight=_parse_float,
        )
    if kind == "tropical":
        return SemiringDescriptor(
            name="tropical",
            zero=math.inf,
            one=0.0,
            plus=min,
            times=lambda a, b: a + b,
            star=_tropical_star,
            flags=SemiringFlags(commutative=True, continuous=True, has_star=True, exact=True),
            parse_weight=_parse_float,
        )
    if kind == "log":
        return SemiringDescriptor(
            name="log",
            zero=math.inf,
            one=0.0,
            plus=_log_plus,
            times=lambda a, b: a + b,
            star=_log_star,
            flags=SemiringFlags(commutative=True, continuous=True, has_star=True, exact=False),
            approx_tolerance=tolerance,
            parse_weight=_parse_float,
        )
    raise ValidationError(f"unknown semiring kind {kind!r}; expected one of {SEMIRING_KINDS}")


class WeightMatrix:
    """Sparse matrix over a semiring; absent entries are the zero element.

    Row and column labels are arbitrary hashable values; their order fixes
    the (deterministic) pivot order used by the Lehmann closure.
    """

    def __init__(self, rows, cols=None):
        self.rows = tuple(rows)
        self.cols = tuple(cols) if cols is not None else self.rows
        self._row_set = set(self.rows)
        self._col_set = set(self.cols)
        self.entries: dict = {}

    def set(self, r, c, value, semiring: SemiringDescriptor):
        if r not in self._row_set or c not in self._col_set:
            raise ValidationError(f"index ({r!r}, {c!r}) outside the matrix label sets")
        if semiring.is_zero(value):
            self.entries.pop((r, c), None)
        else:
            self.entries[(r, c)] = value

    def add(self, r, c, value, semiring: SemiringDescriptor):
        old = self.entries.get((r, c))
        self.set(r, c, value if old is None else semiring.plus(old, value), semiring)

    def get(self, r, c, semiring: SemiringDescriptor):
        return self.entries.get((r, c), semiring.zero)

    def row(self, r):
        return [(c, v) for (rr, c), v in self.entries.items() if rr == r]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def equals(self, other: "WeightMatrix", semiring: SemiringDescriptor) -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(
            semiring.eq(self.entries.get(k, semiring.zero), other.entries.get(k, semiring.zero))
            for k in keys
        )

    @classmethod
    def identity(cls, labels, semiring: SemiringDescriptor) -> "WeightMatrix":
        m = cls(labels)
        for lab in m.rows:
            m.entries[(lab, lab)] = semiring.one
        return m


def mat_mul(a: WeightMatrix, b: WeightMatrix, semiring: SemiringDescriptor) -> WeightMatrix:
    """Sparse matrix product; a's column labels must be b's row labels."""
    out = WeightMatrix(a.rows, b.cols)
    by_row: dict = {}
    for (r, c), v in b.entries.items():
        by_row.setdefault(r, []).append((c, v))
    for (i, k), u in a.entries.items():
        for j, v in by_row.get(k, ()):
            out.add(i, j, semiring.times(u, v), semiring)
    return out


def matrix_star(m: WeightMatrix, semiring: SemiringDescriptor) -> WeightMatrix:
    """Lehmann's algebraic-path closure: returns M* with M* = I ⊕ M ⊗ M*.

    Pivots are processed in row-label order.  A pivot whose diagonal star is
    undefined raises :class:`StarUndefinedError` naming the index pair.
    """
    if not m.is_square():
        raise ValidationError("matrix_star requires a square matrix")
    if not semiring.flags.has_star:
        raise ValidationError(f"semiring {semiring.name} has no star operation")
    entries = dict(m.entries)
    for k in m.rows:
        col_k = [(i, v) for (i, kk), v in entries.items() if kk == k]
        row_k = [(j, v) for (kk, j), v in entries.items() if kk == k]
        if not col_k and not row_k:
            continue
        akk = entries.get((k, k), semiring.zero)
        try:
            skk = semiring.star(akk)
        except StarUndefinedError as e:
            raise StarUndefinedError(
                f"star undefined at pivot ({k!r}, {k!r}): {e}", index_pair=(k, k)
            ) from e
        for i, aik in col_k:
            left = semiring.times(aik, skk)
            for j, akj in row_k:
                key = (i, j)
                update = semiring.times(left, akj)
                old = entries.get(key)
                new = update if old is None else semiring.plus(old, update)
                if semiring.is_zero(new):
                    entries.pop(key, None)
                else:
                    entries[key] = new
    out = WeightMatrix(m.rows, m.cols)
    out.entries = entries
    for lab in m.rows:
        out.add(lab, lab, semiring.one, semiring)
    return out
