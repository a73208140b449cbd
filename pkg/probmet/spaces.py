"""
Finite probabilistic metric spaces in both presentations, and their verifiers.

Symmetry and the diagonal are representational: each unordered pair of
distinct points is stored once, keyed in carrier order, and the diagonal is
never stored. What remains to be checked is the triangle axiom of each
presentation and, for separated spaces, separation.

The level verifier decides the mixed triangle inequality over the whole
continuum of levels. For a triple ``(x, y, z)`` and constancy intervals
``(a, b]`` of ``d(x, y)`` and ``(a', b']`` of ``d(y, z)``, the levels ``e``
activated by some ``l`` in ``(a, b]`` and ``l'`` in ``(a', b']`` form the
interval ``(r, 1]`` with ``r = 1 - (1 - a') * (1 - a)``: the guard is monotone
in both levels and continuous. ``d(x, z)`` is nonincreasing in the level, so
the worst activated value is its right limit at ``r``. Comparing that limit
with the sum of the two interval values is therefore exact, and the number of
comparisons is bounded by the number of interval pairs.
"""
import logging
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, islice, permutations
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .exceptions import (
    DomainError,
    InternalDisagreement,
    InvalidSpace,
    SchemaError,
    UnknownPoints,
)
from .numeric import ONE, ZERO, UnitVal
from .stepfn import DistanceDistribution, LevelFunction
from .tnorm import BaseTNorm, require_attested
from .types import Axiom, AxiomStatus, Form, Report, Witness
from .utils import get_setting

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]

#: Halvings tried when moving interval levels towards their open end.
MAX_REFINEMENTS = 256


@dataclass(frozen=True)
class FiniteTable:
    """
    A symmetric table over a finite ordered carrier with an implicit diagonal.
    """

    points: Tuple[str, ...]
    dist: Mapping[Pair, Any]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    diagonal = None

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, "points", points)
        if len(set(points)) != len(points):
            raise SchemaError("point ids must be unique", errors=["points: duplicates"])
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(points)})
        expected = set(combinations(points, 2))
        keys = set(self.dist)
        unknown = sorted({p for key in keys for p in key} - set(points))
        if unknown:
            raise UnknownPoints(f"unknown point ids: {', '.join(unknown)}")
        if keys != expected:
            missing = sorted(expected - keys, key=self.pair_order)
            misplaced = sorted(keys - expected)
            errors = [f"dist.{x}|{y}: missing pair" for x, y in missing]
            errors += [f"dist.{x}|{y}: not in point order" for x, y in misplaced]
            raise SchemaError(
                "distance table does not match the carrier", errors=errors
            )

    @classmethod
    def orient(
        cls, points: Iterable[str], entries: Mapping[Pair, Any]
    ) -> Dict[Pair, Any]:
        """
        Re-key ``entries`` so every pair follows carrier order. Both
        orientations of one pair may be given only if they agree.
        """
        index = {p: i for i, p in enumerate(points)}
        table: Dict[Pair, Any] = {}
        for (x, y), value in entries.items():
            if x not in index or y not in index:
                missing = sorted({x, y} - set(index))
                raise UnknownPoints(f"unknown point ids: {', '.join(missing)}")
            if x == y:
                raise SchemaError(
                    "the diagonal is implicit", errors=[f"dist.{x}|{y}: diagonal pair"]
                )
            key = (x, y) if index[x] < index[y] else (y, x)
            if key in table and table[key] != value:
                raise SchemaError(
                    "pair given twice with different values",
                    errors=[f"dist.{key[0]}|{key[1]}: conflicting entries"],
                )
            table[key] = value
        return table

    @classmethod
    def build(cls, points: Iterable[str], entries: Mapping[Pair, Any], **kwargs):
        points = tuple(points)
        return cls(points, cls.orient(points, entries), **kwargs)

    def pair_order(self, pair: Pair) -> Tuple[int, int]:
        return self._index[pair[0]], self._index[pair[1]]

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPoints(f"unknown point id: {point}")

    def check_subset(self, subset: Iterable[str]) -> List[str]:
        """
        Return ``subset`` in carrier order, rejecting unknown ids.
        """
        subset = set(subset)
        unknown = sorted(subset - set(self.points))
        if unknown:
            raise UnknownPoints(f"unknown point ids: {', '.join(unknown)}")
        return [p for p in self.points if p in subset]

    def pairs(self) -> Iterator[Pair]:
        return combinations(self.points, 2)

    def distance(self, x: str, y: str):
        if x == y:
            self.index(x)
            return self.diagonal
        key = (x, y) if self.index(x) < self.index(y) else (y, x)
        return self.dist[key]

    def replace(self, **changes):
        return replace(self, **changes)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class LevelSpace(FiniteTable):
    tnorm: BaseTNorm = None
    separated: bool = True

    form = Form.LEVELS
    diagonal = LevelFunction.zero()


@dataclass(frozen=True)
class DdfSpace(FiniteTable):
    tnorm: BaseTNorm = None
    separated: bool = True

    form = Form.DDF
    diagonal = DistanceDistribution.epsilon_zero()


def _triples(points: Tuple[str, ...]) -> Iterator[Tuple[str, str, str]]:
    """
    Ordered triples of distinct points. Triples with a repeated point satisfy
    both triangle axioms through the zero diagonal and monotonicity alone.
    """
    return permutations(points, 3)


def _approach_levels(
    t: BaseTNorm, a: UnitVal, b: UnitVal, a2: UnitVal, b2: UnitVal, epsilon: UnitVal
) -> Tuple[UnitVal, UnitVal]:
    level, other = b, b2
    for _ in range(MAX_REFINEMENTS):
        if t.residual_threshold(level, other) < epsilon:
            return level, other
        level, other = (a + level) / 2, (a2 + other) / 2
    raise InternalDisagreement(
        "could not instantiate a violating level pair; "
        f"t-norm {t.slug!r} behaves discontinuously"
    )


def _ut_violations(s: LevelSpace) -> Iterator[Witness]:
    t = s.tnorm
    thresholds: Dict[Tuple[UnitVal, UnitVal], UnitVal] = {}
    for x, y, z in _triples(s.points):
        dxy, dyz, dxz = s.distance(x, y), s.distance(y, z), s.distance(x, z)
        for a, b, w in dxy.intervals():
            for a2, b2, w2 in dyz.intervals():
                if (a, a2) not in thresholds:
                    thresholds[a, a2] = t.residual_threshold(a, a2)
                threshold = thresholds[a, a2]
                if threshold >= ONE:
                    continue
                worst = dxz.right_limit(threshold)
                if worst <= w + w2:
                    continue
                epsilon = dxz.next_end_after(threshold)
                level, other = _approach_levels(t, a, b, a2, b2, epsilon)
                yield Witness(
                    Axiom.UT,
                    (x, y, z),
                    (("epsilon", epsilon), ("lambda", level), ("lambda'", other)),
                    dxz(epsilon),
                    w + w2,
                )


def separation_violations(s: LevelSpace) -> Iterator[Witness]:
    for x, y in s.pairs():
        d = s.distance(x, y)
        if d.is_zero():
            yield Witness(Axiom.UH, (x, y), (), d.sup_value, ZERO)


def record_violations(
    report: Report, axiom: Axiom, violations: Iterable[Witness]
) -> None:
    witnesses = list(islice(violations, get_setting("WITNESS_LIMIT", 10)))
    for witness in witnesses:
        logger.debug("axiom violated", extra={"witness": witness.as_text()})
    report.record(axiom, witnesses)


def validate_level_space(s: LevelSpace) -> Report:
    """
    Decide (UT) exactly and, for separated spaces, (UH). (US) and (UD) hold
    by construction.
    """
    require_attested(s.tnorm)
    report = Report()
    report.statuses[Axiom.US] = AxiomStatus.STRUCTURAL
    report.statuses[Axiom.UD] = AxiomStatus.STRUCTURAL
    record_violations(report, Axiom.UT, _ut_violations(s))
    if s.separated:
        record_violations(report, Axiom.UH, separation_violations(s))
    else:
        report.statuses[Axiom.UH] = AxiomStatus.SKIPPED
    return report


def _p4_violations(s: DdfSpace) -> Iterator[Witness]:
    for x, y in s.pairs():
        alpha = s.distance(x, y)
        if alpha.is_epsilon_zero():
            yield Witness(Axiom.P4, (x, y), (("gamma", ZERO),), ONE, ONE)


def _gap(after: Fraction, following: Optional[Fraction]) -> Optional[Fraction]:
    return None if following is None else following - after


def _p5_violations(s: DdfSpace) -> Iterator[Witness]:
    t = s.tnorm
    for x, y, z in _triples(s.points):
        first, second, target = s.distance(y, z), s.distance(x, y), s.distance(x, z)
        for r0, v in first.jumps:
            for s0, u in second.jumps:
                bound = t(v, u)
                start = r0 + s0
                if target.right_limit(start) >= bound:
                    continue
                gaps = [
                    _gap(r0, first.next_jump_after(r0)),
                    _gap(s0, second.next_jump_after(s0)),
                ]
                target_gap = _gap(start, target.next_jump_after(start))
                if target_gap is not None:
                    gaps.append(target_gap / 2)
                delta = min((g for g in gaps if g is not None), default=ONE)
                r, s_ = r0 + delta, s0 + delta
                yield Witness(
                    Axiom.P5,
                    (x, y, z),
                    (("r", r), ("s", s_)),
                    target(r + s_),
                    t(first(r), second(s_)),
                )


def validate_ddf_space(s: DdfSpace) -> Report:
    """
    Check (P4) for separated spaces and decide (P5) exactly. For jumps
    ``(r0, v)`` of ``a(y, z)`` and ``(s0, u)`` of ``a(x, y)`` the binding
    constraint is ``a(x, z)`` just right of ``r0 + s0`` against ``v * u``.
    """
    require_attested(s.tnorm)
    report = Report()
    for axiom in (Axiom.P1, Axiom.P2, Axiom.P3):
        report.statuses[axiom] = AxiomStatus.STRUCTURAL
    if s.separated:
        record_violations(report, Axiom.P4, _p4_violations(s))
    else:
        report.statuses[Axiom.P4] = AxiomStatus.SKIPPED
    record_violations(report, Axiom.P5, _p5_violations(s))

    if get_setting("CROSS_VALIDATE", False):
        from .functors import delta

        transported = validate_level_space(delta(s))
        if transported.passed != report.passed:
            raise InternalDisagreement(
                "distribution and level verifiers disagree",
                context={"ddf": report.as_text(), "levels": transported.as_text()},
            )
    return report


def validate_space(s) -> Report:
    if isinstance(s, DdfSpace):
        return validate_ddf_space(s)
    return validate_level_space(s)


def ensure_valid(s, axioms: Optional[Iterable[Axiom]] = None):
    """
    Raise :class:`InvalidSpace` unless ``s`` passes, optionally looking only
    at some axioms.
    """
    report = validate_space(s)
    failing = report.witnesses
    if axioms is not None:
        axioms = set(axioms)
        failing = [w for w in failing if w.kind in axioms]
    if failing:
        kinds = ", ".join(sorted({w.kind.value for w in failing}))
        raise InvalidSpace(f"{s.form.value} space fails {kinds}", report=report)
    return s


def _leading(grid: List[UnitVal], d: LevelFunction) -> List[UnitVal]:
    """
    The first grid level of every run of equal values of ``d``.
    """
    leading, previous = [], None
    for level in grid:
        value = d(level)
        if value != previous:
            leading.append(level)
            previous = value
    return leading


def ut_oracle_levels(s: LevelSpace, levels: Iterable[UnitVal]) -> Report:
    """
    Check (UT) with every level restricted to ``levels``. For each pair of
    levels only the smallest activated ``e`` matters, since ``d_e`` is
    nonincreasing. Within a run of equal values only its first level matters,
    since the threshold grows with both levels.
    """
    grid = sorted({Fraction(level) for level in levels if 0 < level <= 1})
    t = s.tnorm
    activated: Dict[Tuple[UnitVal, UnitVal], Optional[UnitVal]] = {}

    def smallest_activated(level, other):
        if (level, other) not in activated:
            index = bisect_right(grid, t.residual_threshold(level, other))
            activated[level, other] = grid[index] if index < len(grid) else None
        return activated[level, other]

    def violations():
        for x, y, z in _triples(s.points):
            dxy, dyz, dxz = s.distance(x, y), s.distance(y, z), s.distance(x, z)
            for level in _leading(grid, dxy):
                for other in _leading(grid, dyz):
                    epsilon = smallest_activated(level, other)
                    if epsilon is None:
                        continue
                    lhs, rhs = dxz(epsilon), dxy(level) + dyz(other)
                    if lhs > rhs:
                        yield Witness(
                            Axiom.UT,
                            (x, y, z),
                            (
                                ("epsilon", epsilon),
                                ("lambda", level),
                                ("lambda'", other),
                            ),
                            lhs,
                            rhs,
                        )

    report = Report()
    record_violations(report, Axiom.UT, violations())
    return report


def ut_oracle_grid(s: LevelSpace, n: int) -> Report:
    if n < 2:
        raise DomainError(f"grid resolution must be at least 2, got {n}")
    return ut_oracle_levels(s, (Fraction(k, n) for k in range(1, n + 1)))


def replay_witness(s, witness: Witness) -> bool:
    """
    Re-evaluate ``witness`` against ``s``; true when it is a strict violation.
    """
    kind, points = witness.kind, witness.points
    t = s.tnorm
    if kind == Axiom.UT:
        x, y, z = points
        epsilon, level, other = (
            witness.argument(name) for name in ("epsilon", "lambda", "lambda'")
        )
        guard = t(ONE - other, ONE - level) > ONE - epsilon
        lhs = s.distance(x, z)(epsilon)
        rhs = s.distance(x, y)(level) + s.distance(y, z)(other)
        return guard and lhs > rhs and (lhs, rhs) == (witness.lhs, witness.rhs)
    if kind == Axiom.UH:
        x, y = points
        return x != y and s.distance(x, y).is_zero()
    if kind == Axiom.P4:
        x, y = points
        return x != y and s.distance(x, y).is_epsilon_zero()
    if kind == Axiom.P5:
        x, y, z = points
        r, s_ = witness.argument("r"), witness.argument("s")
        lhs = s.distance(x, z)(r + s_)
        rhs = t(s.distance(y, z)(r), s.distance(x, y)(s_))
        return lhs < rhs and (lhs, rhs) == (witness.lhs, witness.rhs)
    raise ValueError(f"cannot replay {kind.value} witnesses against a space")
