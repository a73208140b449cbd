from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Dict, List, Optional, Tuple, Union

from django.utils.functional import classproperty
from django.utils.translation import pgettext_lazy
from typing_extensions import NotRequired, TypedDict

from .numeric import ExtReal, format_ext


class Form(str, Enum):
    LEVELS = "levels"
    DDF = "ddf"
    METRIC = "metric"

    @classproperty
    def choices(cls):
        return (
            (cls.LEVELS.value, pgettext_lazy("space form", "level family")),
            (cls.DDF.value, pgettext_lazy("space form", "distance distributions")),
            (cls.METRIC.value, pgettext_lazy("space form", "extended metric")),
        )

    @classproperty
    def space_choices(cls):
        """
        Forms a probabilistic metric space file may declare.
        """
        return cls.choices[:2]


class Axiom(str, Enum):
    """
    Everything a verifier can report on.
    """

    US = "US"
    UD = "UD"
    UT = "UT"
    UH = "UH"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    P5 = "P5"
    TRIANGLE = "triangle"
    SEPARATION = "separation"
    NONEXPANSIVE = "non-expansive"
    COMMUTATIVITY = "commutativity"
    ASSOCIATIVITY = "associativity"
    UNIT = "unit"
    MONOTONICITY = "monotonicity"
    T0_MAPS = "T0-maps"
    T0_UNIFORMITY = "T0-uniformity"
    T0_TOPOLOGY = "T0-topology"


class AxiomStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    STRUCTURAL = "by construction"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class Verb(str, Enum):
    VERIFY = "verify"
    CONVERT = "convert"
    CLOSURE = "closure"
    CLASSIFY = "classify"
    WITNESS = "witness"
    LIFT = "lift"
    PRODUCT = "product"
    COREFLECT = "coreflect"
    REFLECT = "reflect"
    QUOTIENT = "quotient"


class ExitStatus(IntEnum):
    OK = 0
    PROPERTY_FAILS = 1
    INPUT_ERROR = 2


Value = Union[ExtReal, str, None]


def _format_value(value: Value) -> str:
    if value is None:
        return "-"
    if isinstance(value, str):
        return value
    return format_ext(value)


@dataclass(frozen=True)
class Witness:
    """
    A concrete counterexample. ``arguments`` keeps the offending levels or
    abscissae in the order they were chosen; ``lhs`` and ``rhs`` are the two
    sides of the violated inequality.
    """

    kind: Axiom
    points: Tuple[str, ...]
    arguments: Tuple[Tuple[str, Any], ...] = ()
    lhs: Value = None
    rhs: Value = None

    def argument(self, name: str) -> Any:
        return dict(self.arguments)[name]

    def as_text(self) -> str:
        parts = [f"witness {self.kind.value}", ",".join(self.points)]
        parts += [f"{name}={_format_value(value)}" for name, value in self.arguments]
        parts += [f"lhs={_format_value(self.lhs)}", f"rhs={_format_value(self.rhs)}"]
        return " ".join(parts)


@dataclass
class Report:
    statuses: Dict[Axiom, AxiomStatus] = field(default_factory=dict)
    witnesses: List[Witness] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.passed else Verdict.FAIL

    def status(self, axiom: Axiom) -> Optional[AxiomStatus]:
        return self.statuses.get(axiom)

    def witnesses_for(self, axiom: Axiom) -> List[Witness]:
        return [w for w in self.witnesses if w.kind == axiom]

    def record(self, axiom: Axiom, witnesses: List[Witness]) -> None:
        self.statuses[axiom] = AxiomStatus.FAIL if witnesses else AxiomStatus.PASS
        self.witnesses.extend(witnesses)

    def extend(self, other: "Report") -> "Report":
        self.statuses.update(other.statuses)
        self.witnesses.extend(other.witnesses)
        return self

    def as_text(self) -> str:
        lines = [f"verdict: {self.verdict.value}"]
        lines += [
            f"axiom {axiom.value}: {status.value}"
            for axiom, status in self.statuses.items()
        ]
        if self.passed:
            lines.append("all axioms pass")
        else:
            lines.append("begin witnesses")
            lines += [w.as_text() for w in self.witnesses]
            lines.append("end witnesses")
        return "\n".join(lines) + "\n"


class SpaceFile(TypedDict):
    form: str
    tnorm: str
    separated: bool
    points: List[str]
    dist: Dict[str, List[List[str]]]


class MetricFile(TypedDict):
    form: str
    separated: NotRequired[bool]
    points: List[str]
    dist: Dict[str, str]


class MorphismFile(TypedDict):
    source: Union[str, SpaceFile]
    target: Union[str, SpaceFile]
    map: Dict[str, str]
