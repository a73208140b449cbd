import logging
from abc import ABC, abstractmethod
from itertools import product
from operator import gt, ne
from typing import Iterable, List, Sequence, Tuple

from .exceptions import TNormNotAttested
from .numeric import ONE, ZERO, UnitVal, as_unit
from .types import Axiom, Report, Witness

logger = logging.getLogger(__name__)


class BaseTNorm(ABC):
    slug = None  #: Value of the ``tnorm`` field in space files.
    display_name = None  #: The name of the t-norm for the ``choices``.
    continuous = False  #: Attests continuity and that rationals map to rationals.

    @abstractmethod
    def apply(self, a: UnitVal, b: UnitVal) -> UnitVal:  # pragma: no cover
        raise NotImplementedError

    def __call__(self, a: UnitVal, b: UnitVal) -> UnitVal:
        return self.apply(a, b)

    def residual_threshold(self, level: UnitVal, other_level: UnitVal) -> UnitVal:
        """
        The smallest ``e`` such that every level strictly above it is activated
        by the mixed triangle guard ``(1 - other_level) * (1 - level) > 1 - e``.
        """
        return ONE - self.apply(ONE - other_level, ONE - level)

    @classmethod
    def get_display_name(cls) -> str:
        return cls.display_name

    def __eq__(self, other):
        return isinstance(other, BaseTNorm) and other.slug == self.slug

    def __hash__(self):
        return hash(("tnorm", self.slug))

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.slug}>"


class MinimumTNorm(BaseTNorm):
    slug = "min"
    display_name = "minimum"
    continuous = True

    def apply(self, a, b):
        return min(a, b)


class ProductTNorm(BaseTNorm):
    slug = "product"
    display_name = "product"
    continuous = True

    def apply(self, a, b):
        return a * b


class LukasiewiczTNorm(BaseTNorm):
    slug = "lukasiewicz"
    display_name = "Łukasiewicz"
    continuous = True

    def apply(self, a, b):
        return max(a + b - ONE, ZERO)


def tnorm_apply(t: BaseTNorm, a: UnitVal, b: UnitVal) -> UnitVal:
    return t.apply(as_unit(a), as_unit(b))


def tnorm_residual_threshold(t: BaseTNorm, level: UnitVal, other: UnitVal) -> UnitVal:
    return t.residual_threshold(as_unit(level), as_unit(other))


def require_attested(t: BaseTNorm) -> BaseTNorm:
    if not t.continuous:
        raise TNormNotAttested(
            f"t-norm {t.slug!r} is not attested continuous and rational-preserving",
            context={"tnorm": t.slug},
        )
    return t


def _first(kind: Axiom, candidates, violated=ne) -> List[Witness]:
    for arguments, lhs, rhs in candidates:
        if violated(lhs, rhs):
            return [Witness(kind, (), arguments, lhs, rhs)]
    return []


def tnorm_laws_check(t: BaseTNorm, grid: Iterable[UnitVal]) -> Report:
    """
    Check the commutative monoid laws and monotonicity over every tuple of
    ``grid``. The first violating tuple of each law is kept as its witness.
    """
    values = sorted(set(as_unit(value) for value in grid))
    commutativity = [
        ((("a", a), ("b", b)), t(a, b), t(b, a))
        for a, b in product(values, repeat=2)
    ]
    associativity = (
        ((("a", a), ("b", b), ("c", c)), t(t(a, b), c), t(a, t(b, c)))
        for a, b, c in product(values, repeat=3)
    )
    unit = [((("a", a),), t(a, ONE), a) for a in values]
    monotonicity = (
        ((("a", a), ("b", b), ("a'", a2), ("b'", b2)), t(a, b), t(a2, b2))
        for a, b, a2, b2 in product(values, repeat=4)
        if a <= a2 and b <= b2
    )

    report = Report()
    report.record(Axiom.COMMUTATIVITY, _first(Axiom.COMMUTATIVITY, commutativity))
    report.record(Axiom.ASSOCIATIVITY, _first(Axiom.ASSOCIATIVITY, associativity))
    report.record(Axiom.UNIT, _first(Axiom.UNIT, unit))
    report.record(
        Axiom.MONOTONICITY, _first(Axiom.MONOTONICITY, monotonicity, violated=gt)
    )
    if not report.passed:
        logger.debug(
            "t-norm laws violated",
            extra={
                "tnorm": t.slug,
                "witnesses": [w.as_text() for w in report.witnesses],
            },
        )
    return report


def _approach(
    t: BaseTNorm, a: UnitVal, b: UnitVal, d: UnitVal
) -> Tuple[UnitVal, UnitVal]:
    """
    Levels ``(l, l')`` just above ``(1 - a, 1 - b)`` whose guard value
    ``(1 - l') * (1 - l)`` exceeds ``d``; they exist by continuity when ``d < a * b``.
    """
    step = min(a, b) / 2
    for _ in range(64):
        level, other = ONE - a + step, ONE - b + step
        if t(ONE - other, ONE - level) > d:
            return level, other
        step /= 2
    return ONE - a, ONE - b


def guard_bound_forms(
    t: BaseTNorm, a: UnitVal, b: UnitVal, d: UnitVal, grid: Sequence[UnitVal]
) -> Tuple[bool, bool, bool]:
    """
    Evaluate the three equivalent forms of ``d >= a * b``:

    1. ``d >= a * b``;
    2. for all levels ``l, l'``: ``a > 1 - l`` and ``b > 1 - l'`` imply
       ``d >= (1 - l') * (1 - l)``;
    3. for all levels ``r``: ``a * b > 1 - r`` implies ``d >= 1 - r``.

    The quantified forms range over ``grid`` together with the critical
    levels determined by ``a``, ``b`` and ``d``, which makes them decide the
    same question as the first form.
    """
    levels = {as_unit(value) for value in grid if value > 0}
    pair_levels = set(product(levels, repeat=2))
    if d < t(a, b):
        pair_levels.add(_approach(t, a, b, d))
        levels.add(ONE - (d + t(a, b)) / 2)
    first = d >= t(a, b)
    second = all(
        d >= t(ONE - other, ONE - level)
        for level, other in pair_levels
        if a > ONE - level and b > ONE - other
    )
    third = all(d >= ONE - level for level in levels if t(a, b) > ONE - level)
    return first, second, third


BUILTIN_TNORMS = (MinimumTNorm, ProductTNorm, LukasiewiczTNorm)
