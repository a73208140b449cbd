"""
Verb dispatch for the ``probmet`` command.

:func:`run` turns a :class:`Command` into an :class:`Outcome` without touching
the terminal; the management command prints it and maps its status onto the
exit code. Verdicts come from the library unchanged.
"""
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .bridge import MetricSpace, coreflect as coreflect_space, reflect as reflect_space
from .bridge import validate_metric
from .constructions import StructuredSource, initial_lift, t0_quotient
from .constructions import product as product_of
from .exceptions import (
    FormMismatch,
    InputError,
    PropertyFailure,
    SchemaError,
    UsageError,
)
from .functors import convert as convert_space
from .spaces import ensure_valid, validate_space
from .topology import classify_morphism, closure as closure_of, cospan_witness
from .types import ExitStatus, Form, Verb

logger = logging.getLogger(__name__)

#: Options each verb accepts; ``out`` is accepted everywhere.
VERB_OPTIONS = {
    Verb.VERIFY: set(),
    Verb.CONVERT: {"to"},
    Verb.CLOSURE: {"subset"},
    Verb.CLASSIFY: {"maps"},
    Verb.WITNESS: {"subset", "point"},
    Verb.LIFT: {"maps"},
    Verb.PRODUCT: set(),
    Verb.COREFLECT: set(),
    Verb.REFLECT: set(),
    Verb.QUOTIENT: set(),
}

#: Smallest and largest number of input files; ``None`` is unbounded.
VERB_INPUTS = {
    Verb.CLASSIFY: (0, 0),
    Verb.LIFT: (0, 0),
    Verb.PRODUCT: (1, None),
}

OPTION_FLAGS = {"to": "--to", "subset": "--set", "point": "--point", "maps": "--map"}

WITNESS_FILES = ("space.json", "u.json", "v.json")


@dataclass
class Command:
    verb: Verb
    inputs: List[str] = field(default_factory=list)
    subset: Optional[str] = None
    point: Optional[str] = None
    maps: List[str] = field(default_factory=list)
    to: Optional[str] = None
    out: Optional[str] = None

    def __post_init__(self):
        try:
            self.verb = Verb(self.verb)
        except ValueError:
            raise UsageError(f"unknown verb {self.verb!r}")

    @property
    def set_points(self) -> List[str]:
        """
        ``--set a,b,c`` as a list; an empty value is the empty set.
        """
        return [p for p in (self.subset or "").split(",") if p]

    def validate(self) -> "Command":
        given = {name for name in OPTION_FLAGS if getattr(self, name)}
        if self.subset is not None:
            given.add("subset")
        allowed = VERB_OPTIONS[self.verb]
        for name in sorted(given - allowed):
            flag = OPTION_FLAGS[name]
            raise UsageError(f"{flag} is not valid for {self.verb.value}")
        for name in sorted(allowed - given):
            raise UsageError(f"{self.verb.value} requires {OPTION_FLAGS[name]}")
        if self.verb == Verb.CLASSIFY and len(self.maps) != 1:
            raise UsageError("classify takes exactly one --map")
        if self.to is not None and self.to not in (Form.LEVELS.value, Form.DDF.value):
            raise UsageError(f"--to expects levels or ddf, not {self.to!r}")
        low, high = VERB_INPUTS.get(self.verb, (1, 1))
        count = len(self.inputs)
        if count < low or (high is not None and count > high):
            expected = f"at least {low}" if high is None else str(low)
            raise UsageError(
                f"{self.verb.value} takes {expected} input file(s), got {count}"
            )
        return self


@dataclass
class Outcome:
    status: ExitStatus
    text: str = ""
    message: str = ""
    files: Dict[Path, str] = field(default_factory=dict)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")


def _load(path: str):
    from .serializers import load_space

    return load_space(_read(path), base_dir=Path(path).parent)


def _load_space(path: str):
    space = _load(path)
    if space.form == Form.METRIC:
        raise FormMismatch(f"{path}: expected a levels or ddf space, got a metric")
    return convert_space(ensure_valid(space), Form.LEVELS)


def _load_morphism(path: str):
    from .serializers import parse_morphism

    return parse_morphism(_read(path), base_dir=Path(path).parent)


def verify(cmd: Command) -> Outcome:
    space = _load(cmd.inputs[0])
    if isinstance(space, MetricSpace):
        report = validate_metric(space)
    else:
        report = validate_space(space)
    status = ExitStatus.OK if report.passed else ExitStatus.PROPERTY_FAILS
    message = "" if report.passed else f"{space.form.value} space fails its axioms"
    return Outcome(status, report.as_text(), message)


def convert(cmd: Command) -> Outcome:
    from .serializers import dump_space

    space = _load(cmd.inputs[0])
    if space.form == Form.METRIC:
        raise FormMismatch("metric files cannot be converted, embed them first")
    converted = convert_space(ensure_valid(space), Form(cmd.to))
    return Outcome(ExitStatus.OK, dump_space(converted))


def closure(cmd: Command) -> Outcome:
    space = _load_space(cmd.inputs[0])
    return Outcome(ExitStatus.OK, ",".join(closure_of(space, cmd.set_points)) + "\n")


def classify(cmd: Command) -> Outcome:
    f, source, target = _load_morphism(cmd.maps[0])
    source, target = (
        convert_space(ensure_valid(s), Form.LEVELS) for s in (source, target)
    )
    return Outcome(ExitStatus.OK, classify_morphism(f, source, target).as_text())


def witness(cmd: Command) -> Outcome:
    from .serializers import morphism_data, render, space_data

    space = _load_space(cmd.inputs[0])
    z, u, v = cospan_witness(space, cmd.set_points, cmd.point)
    documents = {
        "space": space_data(z),
        "u": morphism_data(u, space, z),
        "v": morphism_data(v, space, z),
    }
    if cmd.out:
        directory = Path(cmd.out)
        files = {
            directory / name: render(data)
            for name, data in zip(WITNESS_FILES, documents.values())
        }
        return Outcome(ExitStatus.OK, files=files)
    return Outcome(ExitStatus.OK, render(documents))


def lift(cmd: Command) -> Outcome:
    from .serializers import dump_space

    legs = []
    for path in cmd.maps:
        f, _, target = _load_morphism(path)
        legs.append((f, convert_space(ensure_valid(target), Form.LEVELS)))
    source = StructuredSource(legs[0][0].source, tuple(legs))
    return Outcome(ExitStatus.OK, dump_space(initial_lift(source)))


def product(cmd: Command) -> Outcome:
    from .serializers import dump_space

    space, _ = product_of([_load_space(path) for path in cmd.inputs])
    return Outcome(ExitStatus.OK, dump_space(space))


def coreflect(cmd: Command) -> Outcome:
    from .serializers import dump_space

    metric, _ = coreflect_space(_load_space(cmd.inputs[0]))
    return Outcome(ExitStatus.OK, dump_space(metric))


def reflect(cmd: Command) -> Outcome:
    from .serializers import dump_space

    metric, _ = reflect_space(_load_space(cmd.inputs[0]))
    return Outcome(ExitStatus.OK, dump_space(metric))


def quotient(cmd: Command) -> Outcome:
    from .serializers import dump_space

    space, _ = t0_quotient(_load_space(cmd.inputs[0]))
    return Outcome(ExitStatus.OK, dump_space(space))


HANDLERS: Dict[Verb, Callable[[Command], Outcome]] = {
    Verb.VERIFY: verify,
    Verb.CONVERT: convert,
    Verb.CLOSURE: closure,
    Verb.CLASSIFY: classify,
    Verb.WITNESS: witness,
    Verb.LIFT: lift,
    Verb.PRODUCT: product,
    Verb.COREFLECT: coreflect,
    Verb.REFLECT: reflect,
    Verb.QUOTIENT: quotient,
}


def describe(exc: InputError) -> str:
    lines = [str(exc)]
    if isinstance(exc, SchemaError):
        lines += [line for line in exc.errors if line != lines[0]]
    return "\n".join(lines)


def run(cmd: Command) -> Outcome:
    try:
        cmd.validate()
        logger.info("running %s", cmd.verb.value, extra={"inputs": cmd.inputs})
        outcome = HANDLERS[cmd.verb](cmd)
    except InputError as e:
        logger.warning(e, extra=e.context)
        return Outcome(ExitStatus.INPUT_ERROR, message=describe(e))
    except PropertyFailure as e:
        report = getattr(e, "report", None)
        text = report.as_text() if report is not None else f"verdict: fail\n{e}\n"
        return Outcome(ExitStatus.PROPERTY_FAILS, text, str(e))
    if cmd.out and not outcome.files:
        outcome.files = {Path(cmd.out): outcome.text}
        outcome.text = ""
    return outcome


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {"plain": {"format": "%(levelname)s %(name)s: %(message)s"}},
    "handlers": {"stderr": {"class": "logging.StreamHandler", "formatter": "plain"}},
    "loggers": {
        "probmet": {"handlers": ["stderr"], "level": "WARNING", "propagate": False}
    },
}


def configure() -> None:
    """
    Set up Django for use outside a project; a project's settings win.
    """
    import django
    from django.conf import settings

    if not settings.configured and not os.environ.get("DJANGO_SETTINGS_MODULE"):
        settings.configure(
            INSTALLED_APPS=["rest_framework", "probmet"],
            LOGGING=LOGGING,
            USE_I18N=False,
        )
    django.setup()


def main(argv: Optional[List[str]] = None) -> int:
    configure()
    from .management.commands.probmet import Command as ProbmetCommand

    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ProbmetCommand().run_from_argv(["probmet", "probmet", *argv])
    except SystemExit as e:
        return e.code or ExitStatus.OK
    return ExitStatus.OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
