"""Exact-rational probability measures, conditioning, and independence checks.

Weights are :class:`fractions.Fraction` throughout; every comparison in this
module is an exact equality, never a tolerance. Conditioning on a
zero-measure event is a distinguished ``None`` result rather than an
exception, because the conditional-effect definitions consume "undefined"
as a verdict ingredient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import InvalidMeasureError, MissingNumericVariableError
from .space import Event, Outcome, Partition, ProductSpace, coordinate_subalgebra

ONE = Fraction(1)
ZERO = Fraction(0)


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Measure:
    """A probability measure on a finite product space, stored sparsely.

    Invariants (enforced at construction): every weight is nonnegative and
    the weights sum to exactly 1. Zero entries are dropped, so equality of
    measures is equality of the stored tables.
    """

    space: ProductSpace
    weights: Mapping[Outcome, Fraction]

    def __post_init__(self):
        table: dict[Outcome, Fraction] = {}
        total = ZERO
        for o, w in self.weights.items():
            o = tuple(o)
            if not self.space.contains(o):
                raise InvalidMeasureError(f"{o!r} is not an outcome of the space")
            w = _as_fraction(w)
            if w < 0:
                raise InvalidMeasureError(f"negative weight {w} at {o!r}")
            total += w
            if w:
                table[o] = w
        if total != ONE:
            raise InvalidMeasureError(f"weights sum to {total}, expected exactly 1")
        object.__setattr__(self, "weights", table)

    def __call__(self, a: Event) -> Fraction:
        return sum((w for o, w in self.weights.items() if o in a), ZERO)

    def of(self, omega: Outcome) -> Fraction:
        return self.weights.get(tuple(omega), ZERO)

    @property
    def support(self) -> Event:
        return frozenset(self.weights)

    def condition(self, g: Event) -> Optional["Measure"]:
        """See :func:`condition_on_event`."""
        return condition_on_event(self, g)


def delta(space: ProductSpace, omega: Outcome) -> Measure:
    """The point mass at an outcome."""
    return Measure(space, {space.check_outcome(omega): ONE})


def uniform(space: ProductSpace) -> Measure:
    n = len(space)
    return Measure(space, {o: Fraction(1, n) for o in space.outcomes})


def condition_on_event(p: Measure, g: Event) -> Optional[Measure]:
    """The conditional measure given an event, or None when the event is null.

    Returns the measure A -> P(G & A) / P(G) when P(G) > 0.
    """
    pg = p(g)
    if pg == 0:
        return None
    return Measure(p.space, {o: w / pg for o, w in p.weights.items() if o in g})


def condition_on_algebra(p: Measure, algebra: Partition, omega_tilde: Outcome, a: Event) -> Optional[Fraction]:
    """The conditional probability of `a` given a sigma-algebra, at one outcome.

    Evaluates the block of `omega_tilde` and returns P(A | block); None when
    the block is null under `p` (no version is chosen on null blocks).
    """
    block = algebra.block_of(tuple(omega_tilde))
    pb = p(block)
    if pb == 0:
        return None
    return p(block & a) / pb


def marginal(p: Measure, coords: Iterable[str]) -> Measure:
    """The pushforward of `p` under projection onto a coordinate subset."""
    coords = p.space.check_subset(coords)
    sub = p.space.subspace(coords)
    table: dict[Outcome, Fraction] = {}
    for o, w in p.weights.items():
        key = p.space.restrict(o, coords)
        table[key] = table.get(key, ZERO) + w
    return Measure(sub, table)


def mutually_abs_continuous_on(p: Measure, q: Measure, algebra: Partition) -> bool:
    """Whether two measures are mutually absolutely continuous on an algebra.

    True iff every block is null under both measures or positive under both.
    """
    if p.space != q.space:
        raise ValueError("measures live on different spaces")
    return all((p(b) == 0) == (q(b) == 0) for b in algebra.blocks)


def independent(p: Measure, a: Event, algebra: Partition) -> bool:
    """Whether `a` and the algebra are independent under `p`.

    P(A & B) = P(A) P(B) on every block; by additivity this extends to every
    union of blocks, hence to the whole generated sigma-algebra.
    """
    pa = p(a)
    return all(p(a & b) == pa * p(b) for b in algebra.blocks)


def cond_independent(
    p: Measure,
    a: Event,
    algebra: Partition,
    given: Union[Event, Partition],
) -> Optional[bool]:
    """Conditional independence of `a` and an algebra, given an event or algebra.

    Event form: None (undefined) when the conditioning event is null, else
    independence under the conditional measure. Partition form: the product
    identity must hold under conditioning on every positive-measure block.
    """
    if isinstance(given, Partition):
        for block in given.blocks:
            pb = condition_on_event(p, block)
            if pb is None:
                continue
            if not independent(pb, a, algebra):
                return False
        return True
    pg = condition_on_event(p, frozenset(given))
    if pg is None:
        return None
    return independent(pg, a, algebra)


@dataclass(frozen=True)
class RandomVariable:
    """An exact-rational evaluand on outcomes, measurable w.r.t. a partition."""

    space: ProductSpace
    values: Mapping[Outcome, Fraction]
    partition: Partition

    def __post_init__(self):
        table = {tuple(o): _as_fraction(v) for o, v in self.values.items()}
        if set(table) != set(self.space.outcomes):
            raise ValueError("random variable must assign a value to every outcome")
        for b in self.partition.blocks:
            if len({table[o] for o in b}) != 1:
                raise ValueError("random variable is not constant on a block of its partition")
        object.__setattr__(self, "values", table)

    def __call__(self, omega: Outcome) -> Fraction:
        return self.values[tuple(omega)]

    def measurable_wrt(self, algebra: Partition) -> bool:
        return all(len({self.values[o] for o in b}) == 1 for b in algebra.blocks)

    @classmethod
    def from_coordinate(cls, space: ProductSpace, cid: str) -> "RandomVariable":
        """The numeric value of one coordinate; requires that coordinate's values."""
        c = space.coordinate(cid)
        if c.values is None:
            raise MissingNumericVariableError(f"coordinate {cid!r} has no numeric label values")
        i = space.ids.index(cid)
        return cls(
            space,
            {o: c.value_of(o[i]) for o in space.outcomes},
            coordinate_subalgebra(space, {cid}),
        )


def mean_and_variance(p: Measure, x: RandomVariable) -> tuple[Fraction, Fraction]:
    """Exact expectation and population variance of `x` under `p`."""
    if x.space != p.space:
        raise ValueError("random variable and measure live on different spaces")
    mean = sum((w * x(o) for o, w in p.weights.items()), ZERO)
    second = sum((w * x(o) ** 2 for o, w in p.weights.items()), ZERO)
    return mean, second - mean * mean
