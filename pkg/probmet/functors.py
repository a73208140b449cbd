"""
The isomorphism between distance distributions and level families.

Jump points of a distribution become level values and jump heights become
breakpoints through ``l = 1 - v``:

=============================================  ===============================
distribution                                   level family
=============================================  ===============================
jump to ``v_i`` at ``p_i``                     ``d = p_i`` on ``(1 - v_i, 1 - v_(i-1)]``
final value ``v_k < 1`` (jump at infinity)     ``d = inf`` on ``(0, 1 - v_k]``
``e0`` (jump to 1 at 0)                        ``d = 0`` on ``(0, 1]``
no finite jump                                 ``d = inf`` on ``(0, 1]``
=============================================  ===============================
"""
import logging
from typing import Iterator, List, Tuple, Union

from .constructions import PointMap
from .exceptions import FormMismatch, NotNonExpansive, TNormMismatch, UnknownPoints
from .numeric import INF, ONE, ExtReal, UnitVal
from .spaces import DdfSpace, LevelSpace, record_violations
from .stepfn import DistanceDistribution, LevelFunction, refine
from .types import Axiom, Report, Witness

logger = logging.getLogger(__name__)

Space = Union[LevelSpace, DdfSpace]


def distribution_to_levels(phi: DistanceDistribution) -> LevelFunction:
    """
    ``d_l = inf {g < inf : phi(g) > 1 - l}``, empty infima being infinite.
    """
    pairs: List[Tuple[UnitVal, ExtReal]] = []
    if phi.final_value < ONE:
        pairs.append((ONE - phi.final_value, INF))
    previous = [v for _, v in phi.jumps[:-1]]
    for (point, _), below in zip(reversed(phi.jumps), reversed([0] + previous)):
        pairs.append((ONE - below, point))
    return LevelFunction.from_pairs(pairs)


def levels_to_distribution(d: LevelFunction) -> DistanceDistribution:
    """
    ``phi(g) = sup {1 - l : d_l < g}``; a finite value ``w_i`` on ``(a_(i-1), a_i]``
    becomes a jump to ``1 - a_(i-1)`` at ``w_i``.
    """
    pairs = []
    start = [0] + list(d.ends[:-1])
    for (_, value), below in zip(reversed(d.steps), reversed(start)):
        if value is not INF:
            pairs.append((value, ONE - below))
    return DistanceDistribution.from_pairs(pairs)


def delta(s: DdfSpace) -> LevelSpace:
    return LevelSpace(
        s.points,
        {pair: distribution_to_levels(phi) for pair, phi in s.dist.items()},
        tnorm=s.tnorm,
        separated=s.separated,
    )


def phi(s: LevelSpace) -> DdfSpace:
    return DdfSpace(
        s.points,
        {pair: levels_to_distribution(d) for pair, d in s.dist.items()},
        tnorm=s.tnorm,
        separated=s.separated,
    )


def convert(s: Space, form) -> Space:
    """
    Bring ``s`` into ``form``; a space already in that form is returned as is.
    """
    if s.form == form:
        return s
    return delta(s) if isinstance(s, DdfSpace) else phi(s)


def check_level_characterisation(
    phi_: DistanceDistribution, d: LevelFunction, level: UnitVal, gamma: ExtReal
) -> bool:
    """
    Whether ``d_l < g`` and ``phi(g) > 1 - l`` agree at ``(level, gamma)``.
    """
    return (d(level) < gamma) == (phi_(gamma) > ONE - level)


def _check_compatible(f: PointMap, source: Space, target: Space) -> None:
    if type(source) is not type(target):
        raise FormMismatch(
            f"cannot compare a {source.form.value} space with a "
            f"{target.form.value} space, convert one of them first"
        )
    if source.tnorm != target.tnorm:
        raise TNormMismatch(
            f"t-norms differ: {source.tnorm.slug} and {target.tnorm.slug}",
            context={"source": source.tnorm.slug, "target": target.tnorm.slug},
        )
    if f.source != source.points or f.target != target.points:
        raise UnknownPoints("map carriers do not match the spaces")


def _level_violations(f: PointMap, source: LevelSpace, target: LevelSpace):
    for x, y in source.pairs():
        before, after = source.distance(x, y), target.distance(f(x), f(y))
        for level in refine([before, after]):
            if after(level) > before(level):
                yield Witness(
                    Axiom.NONEXPANSIVE,
                    (x, y),
                    (("lambda", level),),
                    after(level),
                    before(level),
                )
                break


def _abscissae(*distributions: DistanceDistribution) -> Iterator[ExtReal]:
    points = sorted({p for phi_ in distributions for p in phi_.points})
    yield from points[1:]
    if points:
        yield points[-1] + 1


def _ddf_violations(f: PointMap, source: DdfSpace, target: DdfSpace):
    for x, y in source.pairs():
        before, after = source.distance(x, y), target.distance(f(x), f(y))
        for gamma in _abscissae(before, after):
            if before(gamma) > after(gamma):
                yield Witness(
                    Axiom.NONEXPANSIVE,
                    (x, y),
                    (("gamma", gamma),),
                    before(gamma),
                    after(gamma),
                )
                break


def is_nonexpansive(f: PointMap, source: Space, target: Space) -> Report:
    """
    Level form: ``d'_l(fx, fy) <= d_l(x, y)`` on every breakpoint of the common
    refinement. Distribution form: ``a(x, y, g) <= b(fx, fy, g)`` on every
    constancy interval of the two distributions.
    """
    _check_compatible(f, source, target)
    if isinstance(source, LevelSpace):
        violations = _level_violations(f, source, target)
    else:
        violations = _ddf_violations(f, source, target)
    report = Report()
    record_violations(report, Axiom.NONEXPANSIVE, violations)
    return report


def ensure_nonexpansive(f: PointMap, source: Space, target: Space) -> PointMap:
    report = is_nonexpansive(f, source, target)
    if not report.passed:
        logger.debug(
            "map is not non-expansive",
            extra={"witnesses": [w.as_text() for w in report.witnesses]},
        )
        raise NotNonExpansive("map is not non-expansive", report=report)
    return f
