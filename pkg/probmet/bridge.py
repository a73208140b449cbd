import logging
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Dict, Iterator, Tuple

from .constructions import PointMap
from .exceptions import InternalDisagreement, InvalidSpace, UnknownPoints
from .numeric import ZERO, ExtReal
from .spaces import FiniteTable, LevelSpace, ensure_valid, record_violations
from .stepfn import LevelFunction
from .tnorm import BaseTNorm
from .types import Axiom, AxiomStatus, Form, Report, Witness
from .utils import UnionFind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MetricSpace(FiniteTable):
    """
    An extended (pseudo) metric: ``separated`` asks for distinct points to be
    at positive distance. The triangle inequality is checked, not assumed.
    """

    separated: bool = True

    form = Form.METRIC
    diagonal = ZERO


def _triangle_violations(m: MetricSpace) -> Iterator[Witness]:
    for x, y, z in permutations(m.points, 3):
        lhs = m.distance(x, z)
        rhs = m.distance(x, y) + m.distance(y, z)
        if lhs > rhs:
            yield Witness(Axiom.TRIANGLE, (x, y, z), (), lhs, rhs)


def _separation_violations(m: MetricSpace) -> Iterator[Witness]:
    for x, y in m.pairs():
        if m.distance(x, y) == ZERO:
            yield Witness(Axiom.SEPARATION, (x, y), (), ZERO, ZERO)


def validate_metric(m: MetricSpace) -> Report:
    report = Report()
    record_violations(report, Axiom.TRIANGLE, _triangle_violations(m))
    if m.separated:
        record_violations(report, Axiom.SEPARATION, _separation_violations(m))
    else:
        report.statuses[Axiom.SEPARATION] = AxiomStatus.SKIPPED
    return report


def ensure_valid_metric(m: MetricSpace) -> MetricSpace:
    report = validate_metric(m)
    if not report.passed:
        raise InvalidSpace("metric fails its axioms", report=report)
    return m


def is_metric_nonexpansive(
    f: PointMap, source: MetricSpace, target: MetricSpace
) -> Report:
    if f.source != source.points or f.target != target.points:
        raise UnknownPoints("map carriers do not match the metric spaces")

    def violations():
        for x, y in source.pairs():
            before, after = source.distance(x, y), target.distance(f(x), f(y))
            if after > before:
                yield Witness(Axiom.NONEXPANSIVE, (x, y), (), after, before)

    report = Report()
    record_violations(report, Axiom.NONEXPANSIVE, violations())
    return report


def embed_metric(m: MetricSpace, t: BaseTNorm) -> LevelSpace:
    """
    The constant level family ``d_l = d``.
    """
    ensure_valid_metric(m)
    return LevelSpace(
        m.points,
        {pair: LevelFunction.constant(value) for pair, value in m.dist.items()},
        tnorm=t,
        separated=m.separated,
    )


def coreflect(s: LevelSpace) -> Tuple[MetricSpace, PointMap]:
    """
    ``d = sup_l d_l``, the value on the first level interval. The returned
    identity map is the counit from the embedded metric back into ``s``.
    """
    ensure_valid(s)
    metric = MetricSpace(
        s.points,
        {pair: d.sup_value for pair, d in s.dist.items()},
        separated=s.separated,
    )
    return metric, PointMap.identity(s.points)


def path_metric(m: MetricSpace) -> MetricSpace:
    """
    The largest pseudometric below ``m``: shortest paths, computed by
    relaxation rounds until nothing changes.
    """
    dist: Dict[Tuple[str, str], ExtReal] = dict(m.dist)
    rounds = 0
    changed = True
    while changed and rounds < max(len(m), 1):
        changed = False
        rounds += 1
        for x, z in combinations(m.points, 2):
            for y in m.points:
                if y in (x, z):
                    continue
                through = _lookup(dist, x, y) + _lookup(dist, y, z)
                if through < dist[x, z]:
                    dist[x, z] = through
                    changed = True
    logger.debug("path completion", extra={"points": len(m), "rounds": rounds})
    separated = all(value > ZERO for value in dist.values())
    return MetricSpace(m.points, dist, separated=separated)


def _lookup(dist, x: str, y: str) -> ExtReal:
    return dist[x, y] if (x, y) in dist else dist[y, x]


def reflect(s: LevelSpace) -> Tuple[MetricSpace, PointMap]:
    """
    Take the distances at level 1, complete them to a pseudometric and
    identify points at distance zero. Each class is represented by its first
    point in carrier order.
    """
    ensure_valid(s, axioms=[Axiom.UT])
    top = MetricSpace(
        s.points, {pair: d.top_value for pair, d in s.dist.items()}, separated=False
    )
    completed = path_metric(top)
    classes = UnionFind(s.points)
    for x, y in completed.pairs():
        if completed.distance(x, y) == ZERO:
            classes.union(x, y)
    blocks = classes.blocks()
    representatives = tuple(block[0] for block in blocks)
    dist = {}
    for first, second in combinations(blocks, 2):
        values = {completed.distance(x, y) for x in first for y in second}
        if len(values) > 1:
            raise InternalDisagreement(
                "zero-distance quotient is not well defined",
                context={"blocks": [first[0], second[0]]},
            )
        dist[first[0], second[0]] = values.pop()
    quotient = PointMap(
        s.points, representatives, {x: block[0] for block in blocks for x in block}
    )
    return MetricSpace(representatives, dist, separated=True), quotient
