import logging
from dataclasses import dataclass, field
from itertools import combinations
from itertools import product as cartesian
from math import prod
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exceptions import (
    CarrierMismatch,
    CarrierTooLarge,
    EmptySource,
    InvalidSpace,
    NotFactorizable,
    PointIdCollision,
    TNormMismatch,
    UnknownPoints,
)
from .spaces import LevelSpace
from .stepfn import pointwise_sup
from .tnorm import BaseTNorm
from .utils import UnionFind, get_setting

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointMap:
    source: Tuple[str, ...]
    target: Tuple[str, ...]
    mapping: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        unassigned = [x for x in self.source if x not in self.mapping]
        if unassigned:
            missing = ", ".join(unassigned)
            raise UnknownPoints(f"map is not total, unassigned: {missing}")
        extra = sorted(set(self.mapping) - set(self.source))
        if extra:
            unknown = ", ".join(extra)
            raise UnknownPoints(f"map assigns unknown source points: {unknown}")
        targets = set(self.target)
        outside = sorted({v for v in self.mapping.values() if v not in targets})
        if outside:
            raise UnknownPoints(f"map leaves the target carrier: {', '.join(outside)}")

    @classmethod
    def identity(cls, points: Iterable[str]) -> "PointMap":
        points = tuple(points)
        return cls(points, points, {p: p for p in points})

    @classmethod
    def constant(cls, source: Iterable[str], target: Iterable[str], value: str):
        source = tuple(source)
        return cls(source, tuple(target), {x: value for x in source})

    @classmethod
    def between(cls, source, target, mapping: Mapping[str, str]) -> "PointMap":
        """
        A map between the carriers of two spaces.
        """
        return cls(source.points, target.points, dict(mapping))

    def __call__(self, point: str) -> str:
        try:
            return self.mapping[point]
        except KeyError:
            raise UnknownPoints(f"unknown point id: {point}")

    def compose(self, first: "PointMap") -> "PointMap":
        """
        ``self`` after ``first``.
        """
        if first.target != self.source:
            raise CarrierMismatch("maps are not composable: carriers differ")
        return PointMap(
            first.source, self.target, {x: self(first(x)) for x in first.source}
        )

    def image(self) -> List[str]:
        values = set(self.mapping.values())
        return [y for y in self.target if y in values]

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.source)

    def is_surjective(self) -> bool:
        return len(self.image()) == len(self.target)

    def factor_through(self, quotient: "PointMap") -> "PointMap":
        """
        The unique ``g`` with ``g.compose(quotient) == self``, for a surjective
        ``quotient`` on the same source.
        """
        if quotient.source != self.source:
            raise CarrierMismatch("maps do not share a source carrier")
        if not quotient.is_surjective():
            raise NotFactorizable("the quotient map is not surjective")
        mapping: Dict[str, str] = {}
        for x in self.source:
            block = quotient(x)
            if mapping.setdefault(block, self(x)) != self(x):
                raise NotFactorizable(
                    f"map is not constant on the fibre over {block}",
                    context={"fibre": block},
                )
        return PointMap(quotient.target, self.target, mapping)


@dataclass(frozen=True)
class StructuredSource:
    domain: Tuple[str, ...]
    legs: Tuple[Tuple[PointMap, LevelSpace], ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "legs", tuple(self.legs))
        if not self.legs:
            raise EmptySource("a structured source needs at least one map")
        for f, space in self.legs:
            if f.source != self.domain or f.target != space.points:
                raise CarrierMismatch("source map carriers do not match its space")
        require_shared_tnorm(space for _, space in self.legs)

    @property
    def tnorm(self) -> BaseTNorm:
        return self.legs[0][1].tnorm


def require_shared_tnorm(spaces: Iterable) -> Optional[str]:
    slugs = []
    for space in spaces:
        if space.tnorm.slug not in slugs:
            slugs.append(space.tnorm.slug)
    if len(slugs) > 1:
        raise TNormMismatch(
            f"spaces use different t-norms: {', '.join(slugs)}",
            context={"tnorms": slugs},
        )
    return slugs[0] if slugs else None


def is_point_separating(src: StructuredSource) -> bool:
    seen = set()
    for x in src.domain:
        signature = tuple(f(x) for f, _ in src.legs)
        if signature in seen:
            return False
        seen.add(signature)
    return True


def initial_lift(src: StructuredSource) -> LevelSpace:
    """
    The coarsest level structure on ``src.domain`` making every map of the
    source non-expansive: the levelwise supremum of the pulled-back distances.
    Finite suprema of canonical step functions are already left-continuous,
    so no regularization follows.
    """
    dist = {
        (x, y): pointwise_sup([space.distance(f(x), f(y)) for f, space in src.legs])
        for x, y in combinations(src.domain, 2)
    }
    separated = is_point_separating(src) and all(s.separated for _, s in src.legs)
    logger.debug(
        "initial lift",
        extra={
            "points": len(src.domain),
            "legs": len(src.legs),
            "separated": separated,
        },
    )
    return LevelSpace(src.domain, dist, tnorm=src.tnorm, separated=separated)


def product_point_id(coordinates: Sequence[str]) -> str:
    joiner = get_setting("PRODUCT_ID_JOINER", ";")
    return get_setting("PRODUCT_ID_FORMAT", "({})").format(joiner.join(coordinates))


def product(spaces: Sequence[LevelSpace]) -> Tuple[LevelSpace, List[PointMap]]:
    """
    The product space with its projections, points ordered lexicographically
    by coordinate tuples.
    """
    if not spaces:
        raise EmptySource("cannot take the product of no spaces")
    require_shared_tnorm(spaces)
    size = prod(len(s) for s in spaces)
    limit = get_setting("PRODUCT_MAX_POINTS", 4096)
    if size > limit:
        raise CarrierTooLarge(
            f"product carrier would have {size} points, the limit is {limit}",
            context={"size": size, "limit": limit},
        )
    tuples = list(cartesian(*(s.points for s in spaces)))
    points = tuple(product_point_id(coordinates) for coordinates in tuples)
    named: Dict[str, Tuple[str, ...]] = {}
    for point, coordinates in zip(points, tuples):
        if point in named:
            first, second = (", ".join(c) for c in (named[point], coordinates))
            raise PointIdCollision(
                f"coordinates ({first}) and ({second}) both give the product "
                f"point id {point}; rename points or set PRODUCT_ID_JOINER",
                context={"point": point, "coordinates": [named[point], coordinates]},
            )
        named[point] = coordinates
    projections = [
        PointMap(
            points, s.points, {p: coords[i] for p, coords in zip(points, tuples)}
        )
        for i, s in enumerate(spaces)
    ]
    lifted = initial_lift(StructuredSource(points, tuple(zip(projections, spaces))))
    return lifted, projections


def subspace(s: LevelSpace, subset: Iterable[str]) -> LevelSpace:
    points = s.check_subset(subset)
    inclusion = PointMap(points, s.points, {p: p for p in points})
    return initial_lift(StructuredSource(points, ((inclusion, s),)))


def zero_distance_blocks(s: LevelSpace) -> List[List[str]]:
    classes = UnionFind(s.points)
    for x, y in s.pairs():
        if s.distance(x, y).is_zero():
            classes.union(x, y)
    return classes.blocks()


def t0_quotient(s: LevelSpace) -> Tuple[LevelSpace, PointMap]:
    """
    Identify points at distance zero on every level. Each class is
    represented by its first point in carrier order.
    """
    blocks = zero_distance_blocks(s)
    representatives = tuple(block[0] for block in blocks)
    quotient = PointMap(
        s.points, representatives, {x: block[0] for block in blocks for x in block}
    )
    dist = {}
    for i, first in enumerate(blocks):
        for second in blocks[i + 1 :]:
            values = {s.distance(x, y) for x in first for y in second}
            if len(values) > 1:
                raise InvalidSpace(
                    "zero-distance classes disagree on distances; "
                    "the space violates the mixed triangle inequality",
                    context={"blocks": [first[0], second[0]]},
                )
            dist[first[0], second[0]] = values.pop()
    logger.debug(
        "separation quotient", extra={"points": len(s), "classes": len(blocks)}
    )
    return LevelSpace(representatives, dist, tnorm=s.tnorm, separated=True), quotient
