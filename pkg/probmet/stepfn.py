"""
Step-function shapes everything else is built from.

A :class:`DistanceDistribution` is stored as its jumps ``(p_i, v_i)``: the
function is ``0`` on ``[0, p_1]``, ``v_i`` on ``(p_i, p_{i+1}]``, ``v_k`` on
``(p_k, inf)`` and ``1`` at ``inf``. A final value below ``1`` means the last
jump sits at infinity.

A :class:`LevelFunction` is stored as ``(a_i, w_i)`` pairs: ``d_l = w_i`` for
``l`` in ``(a_{i-1}, a_i]`` with ``a_0 = 0`` and the last ``a`` equal to ``1``.
Evaluating at a breakpoint returns the value of the interval it closes, which
is exactly left-continuity in the level.

Both are kept in canonical form (no zero-height jumps, no repeated values), so
equality of functions is equality of the stored tuples.
"""
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .exceptions import DomainError, EmptySource, StepFunctionError
from .numeric import INF, ONE, ZERO, ExtReal, UnitVal, format_ext

Jump = Tuple[Fraction, UnitVal]
Step = Tuple[UnitVal, ExtReal]


@dataclass(frozen=True)
class DistanceDistribution:
    jumps: Tuple[Jump, ...] = ()

    def __post_init__(self):
        previous_point, previous_value = None, ZERO
        for point, value in self.jumps:
            if point is INF or point < 0:
                raise StepFunctionError(
                    f"jump point {format_ext(point)} must be finite and nonnegative"
                )
            if previous_point is not None and point <= previous_point:
                raise StepFunctionError("jump points must be strictly increasing")
            if value <= previous_value or value > ONE:
                raise StepFunctionError(
                    "distribution values must be strictly increasing within (0, 1]"
                )
            previous_point, previous_value = point, value

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Fraction, UnitVal]]):
        """
        Canonicalize ``(jump point, value after the jump)`` pairs. Zero-height
        jumps are dropped, decreasing values are rejected.
        """
        jumps: List[Jump] = []
        previous_point, previous_value = None, ZERO
        for point, value in pairs:
            if previous_point is not None and point <= previous_point:
                raise StepFunctionError("jump points must be strictly increasing")
            if value < previous_value:
                raise StepFunctionError(
                    "distribution values must be nondecreasing (P1)"
                )
            previous_point = point
            if value == previous_value:
                continue
            jumps.append((point, value))
            previous_value = value
        return cls(tuple(jumps))

    @classmethod
    def epsilon_zero(cls) -> "DistanceDistribution":
        return cls(((ZERO, ONE),))

    @property
    def points(self) -> Tuple[Fraction, ...]:
        return tuple(point for point, _ in self.jumps)

    @property
    def values(self) -> Tuple[UnitVal, ...]:
        return tuple(value for _, value in self.jumps)

    @property
    def final_value(self) -> UnitVal:
        """
        The value on the unbounded last interval, i.e. the limit at infinity.
        """
        return self.jumps[-1][1] if self.jumps else ZERO

    def is_epsilon_zero(self) -> bool:
        return self.jumps == ((ZERO, ONE),)

    def __call__(self, gamma: ExtReal) -> UnitVal:
        if gamma is INF:
            return ONE
        index = bisect_left(self.points, gamma)
        return self.jumps[index - 1][1] if index else ZERO

    def right_limit(self, gamma: Fraction) -> UnitVal:
        """
        The value just right of ``gamma``.
        """
        index = bisect_right(self.points, gamma)
        return self.jumps[index - 1][1] if index else ZERO

    def next_jump_after(self, gamma: Fraction) -> Optional[Fraction]:
        index = bisect_right(self.points, gamma)
        return self.jumps[index][0] if index < len(self.jumps) else None


@dataclass(frozen=True)
class LevelFunction:
    steps: Tuple[Step, ...] = ((ONE, ZERO),)

    def __post_init__(self):
        if not self.steps:
            raise StepFunctionError("a level function needs at least one interval")
        previous_end, previous_value = ZERO, None
        for end, value in self.steps:
            if end is INF or end <= previous_end:
                raise StepFunctionError(
                    "level breakpoints must be strictly increasing within (0, 1]"
                )
            if previous_value is not None and value >= previous_value:
                raise StepFunctionError(
                    "level values must be strictly decreasing in canonical form (UD)"
                )
            previous_end, previous_value = end, value
        if previous_end != ONE:
            raise StepFunctionError("the last level breakpoint must be 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[UnitVal, ExtReal]]):
        """
        Canonicalize ``(right endpoint, value)`` pairs. Equal neighbours are
        merged, increasing values are rejected.
        """
        steps: List[Step] = []
        previous_end = ZERO
        for end, value in pairs:
            if end is INF or end <= previous_end or end > ONE:
                raise StepFunctionError(
                    "level breakpoints must be strictly increasing within (0, 1]"
                )
            previous_end = end
            if steps and value > steps[-1][1]:
                raise StepFunctionError(
                    "level values must be nonincreasing (UD canonical form)"
                )
            if steps and value == steps[-1][1]:
                steps[-1] = (end, value)
            else:
                steps.append((end, value))
        if previous_end != ONE:
            raise StepFunctionError("the last level breakpoint must be 1")
        return cls(tuple(steps))

    @classmethod
    def constant(cls, value: ExtReal) -> "LevelFunction":
        return cls(((ONE, value),))

    @classmethod
    def zero(cls) -> "LevelFunction":
        return cls.constant(ZERO)

    @property
    def ends(self) -> Tuple[UnitVal, ...]:
        return tuple(end for end, _ in self.steps)

    @property
    def values(self) -> Tuple[ExtReal, ...]:
        return tuple(value for _, value in self.steps)

    @property
    def sup_value(self) -> ExtReal:
        return self.steps[0][1]

    @property
    def top_value(self) -> ExtReal:
        return self.steps[-1][1]

    def is_zero(self) -> bool:
        return self.steps == ((ONE, ZERO),)

    def intervals(self) -> Iterator[Tuple[UnitVal, UnitVal, ExtReal]]:
        """
        Yield ``(a, b, value)`` for each constancy interval ``(a, b]``.
        """
        start = ZERO
        for end, value in self.steps:
            yield start, end, value
            start = end

    def __call__(self, level: UnitVal) -> ExtReal:
        if level <= 0 or level > ONE:
            raise DomainError(f"level {format_ext(level)} is outside (0, 1]")
        return self.steps[bisect_left(self.ends, level)][1]

    def right_limit(self, level: UnitVal) -> ExtReal:
        """
        Limit of ``d_e`` as ``e`` decreases to ``level``; ``level`` in ``[0, 1)``.
        """
        if level < 0 or level >= ONE:
            raise DomainError(f"no right limit at level {format_ext(level)}")
        return self.steps[bisect_right(self.ends, level)][1]

    def next_end_after(self, level: UnitVal) -> UnitVal:
        return self.steps[bisect_right(self.ends, level)][0]


def eval_ddf(phi: DistanceDistribution, gamma: ExtReal) -> UnitVal:
    return phi(gamma)


def eval_level(d: LevelFunction, level: UnitVal) -> ExtReal:
    return d(level)


def refine(functions: Iterable[LevelFunction]) -> List[UnitVal]:
    """
    The common breakpoint grid of several level functions.
    """
    return sorted({end for d in functions for end in d.ends})


def _combine(
    functions: Sequence[LevelFunction], pick: Callable[[Iterable[ExtReal]], ExtReal]
) -> LevelFunction:
    if not functions:
        raise EmptySource("cannot combine an empty list of level functions")
    if len(functions) == 1:
        return functions[0]
    return LevelFunction.from_pairs(
        (end, pick(d(end) for d in functions)) for end in refine(functions)
    )


def pointwise_sup(functions: Sequence[LevelFunction]) -> LevelFunction:
    """
    Levelwise maximum. The result of a finite sup of step functions is already
    left-continuous, so no regularization step is needed afterwards.
    """
    return _combine(functions, max)


def pointwise_min(functions: Sequence[LevelFunction]) -> LevelFunction:
    return _combine(functions, min)


def pointwise_add(functions: Sequence[LevelFunction]) -> LevelFunction:
    return _combine(functions, sum)
