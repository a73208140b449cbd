"""
Strong uniformity, strong topology and the closure they induce.

On a finite carrier every quantifier over levels and radii reduces to a
finite grid: distances are step functions in the level, so the right ends of
their constancy intervals represent all levels, and a radius only matters
through which of the finitely many distance values it exceeds.
"""
import logging
from dataclasses import dataclass
from itertools import chain, combinations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple

from .constructions import PointMap, StructuredSource, initial_lift
from .exceptions import CospanDisagreement, DomainError, InternalDisagreement, NoWitness
from .functors import ensure_nonexpansive, is_nonexpansive
from .numeric import INF, ONE, ZERO, ExtReal, UnitVal, format_ext
from .spaces import LevelSpace, record_violations, separation_violations
from .stepfn import LevelFunction, pointwise_add, pointwise_min, refine
from .tnorm import BaseTNorm
from .types import Axiom, AxiomStatus, Report, Witness
from .utils import get_setting

logger = logging.getLogger(__name__)

Cospan = Tuple[LevelSpace, PointMap, PointMap]


@dataclass(frozen=True)
class Entourage:
    level: UnitVal
    radius: ExtReal

    def __post_init__(self):
        if not 0 < self.level <= ONE:
            raise DomainError(
                f"entourage level {format_ext(self.level)} is outside (0, 1]"
            )
        if self.radius is INF or self.radius <= 0:
            raise DomainError(
                f"entourage radius {format_ext(self.radius)} "
                "must be positive and finite"
            )

    def contains(self, s: LevelSpace, x: str, y: str) -> bool:
        return s.distance(x, y)(self.level) < self.radius

    def neighbourhood(self, s: LevelSpace, y: str) -> Set[str]:
        return {x for x in s.points if self.contains(s, x, y)}


def _radii(functions: Iterable[LevelFunction]) -> List[ExtReal]:
    """
    Radii deciding every "distance below radius" question about ``functions``.
    """
    values = {v for d in functions for v in d.values if v is not INF and v > 0}
    return sorted(values | {ONE})


def _entourages(functions: Sequence[LevelFunction]) -> Iterator[Entourage]:
    for level, radius in product(refine(functions), _radii(functions)):
        yield Entourage(level, radius)


def distance_to_set(s: LevelSpace, y: str, subset: Iterable[str]) -> LevelFunction:
    """
    ``d_l(y, A)``: the levelwise infimum over ``A``, infinite for empty ``A``.
    """
    subset = s.check_subset(subset)
    if not subset:
        return LevelFunction.constant(INF)
    return pointwise_min([s.distance(y, a) for a in subset])


def in_closure_by_neighbourhoods(
    s: LevelSpace, y: str, subset: Iterable[str]
) -> bool:
    """
    Every neighbourhood ``{x : d_l(x, y) < g}`` of ``y`` meets ``A``.
    """
    subset = s.check_subset(subset)
    functions = [s.distance(y, a) for a in subset] or [LevelFunction.zero()]
    return all(
        any(entourage.contains(s, a, y) for a in subset)
        for entourage in _entourages(functions)
    )


def in_closure_by_radii(s: LevelSpace, y: str, subset: Iterable[str]) -> bool:
    """
    ``d_l(y, A) < g`` for every level and every positive finite radius.
    """
    d = distance_to_set(s, y, subset)
    return all(d(level) < radius for level in d.ends for radius in _radii([d]))


def in_closure_by_levels(s: LevelSpace, y: str, subset: Iterable[str]) -> bool:
    """
    ``d_l(y, A) = 0`` for every level.
    """
    return distance_to_set(s, y, subset).is_zero()


def in_closure_by_diagonal_levels(
    s: LevelSpace, y: str, subset: Iterable[str]
) -> bool:
    """
    ``d_r(y, A) < r`` for every level ``r``. On ``(a, b]`` this holds for all
    ``r`` exactly when the interval value is at most ``a``.
    """
    d = distance_to_set(s, y, subset)
    return all(value <= start for start, _, value in d.intervals())


def closure(s: LevelSpace, subset: Iterable[str]) -> List[str]:
    subset = s.check_subset(subset)
    return [y for y in s.points if in_closure_by_levels(s, y, subset)]


def is_closed(s: LevelSpace, subset: Iterable[str]) -> bool:
    subset = s.check_subset(subset)
    return closure(s, subset) == subset


@dataclass(frozen=True)
class FiniteTopology:
    """
    A finite topology given by the smallest open neighbourhood of each point.
    """

    points: Tuple[str, ...]
    neighbourhoods: Dict[str, FrozenSet[str]]

    def is_open(self, subset: Iterable[str]) -> bool:
        subset = set(subset)
        return all(self.neighbourhoods[y] <= subset for y in subset)

    def closure(self, subset: Iterable[str]) -> List[str]:
        subset = set(subset)
        return [y for y in self.points if self.neighbourhoods[y] & subset]

    def opens(self) -> List[FrozenSet[str]]:
        """
        Every open set, as unions of minimal neighbourhoods. Exponential in
        the number of distinct neighbourhoods.
        """
        base = sorted(set(self.neighbourhoods.values()), key=sorted)
        found = {frozenset()}
        for size in range(1, len(base) + 1):
            for members in combinations(base, size):
                found.add(frozenset(chain.from_iterable(members)))
        return sorted(found, key=lambda u: (len(u), sorted(u)))

    def t0_violations(self) -> Iterator[Tuple[str, str]]:
        for x, y in combinations(self.points, 2):
            if x in self.neighbourhoods[y] and y in self.neighbourhoods[x]:
                yield x, y

    def is_t0(self) -> bool:
        return next(self.t0_violations(), None) is None

    def is_discrete(self) -> bool:
        return all(self.neighbourhoods[y] == {y} for y in self.points)

    def is_indiscrete(self) -> bool:
        return all(self.neighbourhoods[y] == set(self.points) for y in self.points)


def strong_topology(s: LevelSpace) -> FiniteTopology:
    """
    The topology generated by the neighbourhoods ``{x : d_l(x, y) < g}``.
    """
    neighbourhoods = {}
    for y in s.points:
        functions = [s.distance(x, y) for x in s.points]
        smallest = set(s.points)
        # neighbourhoods shrink with the radius
        radius = _radii(functions)[0]
        for level in refine(functions):
            smallest &= Entourage(level, radius).neighbourhood(s, y)
        neighbourhoods[y] = frozenset(smallest)
    return FiniteTopology(s.points, neighbourhoods)


def indiscrete_pair(t: BaseTNorm) -> LevelSpace:
    """
    Two points at distance zero on every level.
    """
    return LevelSpace(
        ("0", "1"), {("0", "1"): LevelFunction.zero()}, tnorm=t, separated=False
    )


def _t0_map_violations(s: LevelSpace) -> Iterator[Witness]:
    pair = indiscrete_pair(s.tnorm)
    for x, y in product(s.points, repeat=2):
        if x == y:
            continue
        f = PointMap(pair.points, s.points, {"0": x, "1": y})
        if is_nonexpansive(f, pair, s).passed:
            yield Witness(Axiom.T0_MAPS, (x, y), (), s.distance(x, y).sup_value, ZERO)


def _uniformity_violations(s: LevelSpace) -> Iterator[Witness]:
    for x, y in s.pairs():
        d = s.distance(x, y)
        if all(entourage.contains(s, x, y) for entourage in _entourages([d])):
            yield Witness(Axiom.T0_UNIFORMITY, (x, y), (), d.sup_value, ZERO)


def is_T0(s: LevelSpace) -> Report:
    """
    Evaluate four equivalent forms of being T0 and insist they agree: maps
    from the indiscrete pair are constant, (UH), the strong uniformity is T0,
    the strong topology is T0.
    """
    topology = strong_topology(s)
    report = Report()
    record_violations(report, Axiom.T0_MAPS, _t0_map_violations(s))
    record_violations(report, Axiom.UH, separation_violations(s))
    record_violations(report, Axiom.T0_UNIFORMITY, _uniformity_violations(s))
    record_violations(
        report,
        Axiom.T0_TOPOLOGY,
        (
            Witness(Axiom.T0_TOPOLOGY, (x, y), (), s.distance(x, y).sup_value, ZERO)
            for x, y in topology.t0_violations()
        ),
    )
    verdicts = {
        axiom: status == AxiomStatus.PASS for axiom, status in report.statuses.items()
    }
    if len(set(verdicts.values())) > 1:
        raise InternalDisagreement(
            "T0 characterisations disagree",
            context={axiom.value: verdict for axiom, verdict in verdicts.items()},
        )
    return report


@dataclass(frozen=True)
class Classification:
    epi: bool
    mono: bool
    regular_mono: bool

    def as_text(self) -> str:
        flags = (
            ("epi", self.epi),
            ("mono", self.mono),
            ("regular-mono", self.regular_mono),
        )
        return "".join(f"{name}: {str(flag).lower()}\n" for name, flag in flags)


def is_dense(f: PointMap, target: LevelSpace) -> bool:
    return closure(target, f.image()) == list(target.points)


def classify_morphism(
    f: PointMap, source: LevelSpace, target: LevelSpace
) -> Classification:
    """
    Epimorphisms are the dense maps, regular monomorphisms the injective
    initial maps with closed image.
    """
    ensure_nonexpansive(f, source, target)
    injective = f.is_injective()
    lifted = initial_lift(StructuredSource(source.points, ((f, target),)))
    regular = injective and lifted.dist == source.dist and is_closed(target, f.image())
    return Classification(epi=is_dense(f, target), mono=injective, regular_mono=regular)


def _apex(points: Sequence[str]) -> str:
    apex = get_setting("APEX_ID", "⊥")
    while apex in points:
        apex += "'"
    return apex


def cospan_witness(target: LevelSpace, subset: Iterable[str], y: str) -> Cospan:
    """
    Two non-expansive maps out of ``target`` that agree on the closure of
    ``subset`` and differ at ``y``. The closure ``B`` is collapsed to one added
    point at distance ``d(p, B)`` from each remaining point ``p``; remaining
    pairs keep ``d(p, q)`` unless the detour through ``B`` is shorter.
    """
    subset = target.check_subset(subset)
    target.index(y)
    closed = closure(target, subset)
    if y in closed:
        raise NoWitness(
            f"{y} lies in the closure of {{{', '.join(subset)}}}",
            context={"point": y, "closure": closed},
        )
    outside = [p for p in target.points if p not in closed]
    apex = _apex(target.points)
    to_closure = {p: distance_to_set(target, p, closed) for p in outside}
    dist = {
        (p, q): pointwise_min(
            [target.distance(p, q), pointwise_add([to_closure[p], to_closure[q]])]
        )
        for p, q in combinations(outside, 2)
    }
    dist.update({(p, apex): to_closure[p] for p in outside})
    space = LevelSpace(
        tuple(outside) + (apex,), dist, tnorm=target.tnorm, separated=target.separated
    )
    collapse = {p: apex if p in closed else p for p in target.points}
    u = PointMap(target.points, space.points, collapse)
    v = PointMap.constant(target.points, space.points, apex)
    logger.debug(
        "regular closure witness",
        extra={"point": y, "apex": apex, "points": len(space)},
    )
    return space, u, v


def witness_family(target: LevelSpace, subset: Iterable[str]) -> List[Cospan]:
    subset = target.check_subset(subset)
    closed = closure(target, subset)
    return [cospan_witness(target, subset, y) for y in target.points if y not in closed]


def reg_closure_sampled(
    target: LevelSpace, subset: Iterable[str], cospans: Iterable[Cospan]
) -> List[str]:
    """
    Points on which every supplied pair agreeing on ``subset`` agrees. This
    over-approximates the regular closure and equals it once the witness
    family of every point outside the closure is supplied.
    """
    subset = target.check_subset(subset)
    kept = list(target.points)
    for _, u, v in cospans:
        disagreeing = [a for a in subset if u(a) != v(a)]
        if disagreeing:
            raise CospanDisagreement(
                f"maps disagree on {', '.join(disagreeing)}",
                context={"points": disagreeing},
            )
        kept = [p for p in kept if u(p) == v(p)]
    return kept
