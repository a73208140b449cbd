"""
File schemas for spaces, metrics and morphisms.

Numbers travel as strings in the grammar of :func:`probmet.numeric.parse_ext`
so that no tool between two runs can round them.
"""
import io
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Union

from django.utils.translation import gettext_lazy as _
from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .bridge import MetricSpace
from .constructions import PointMap
from .exceptions import InputError, NumberFormatError, SchemaError, StepFunctionError
from .numeric import INF, format_ext, parse_ext, parse_unit
from .spaces import DdfSpace, LevelSpace
from .stepfn import DistanceDistribution, LevelFunction
from .types import Form

Space = Union[LevelSpace, DdfSpace]
AnySpace = Union[LevelSpace, DdfSpace, MetricSpace]

PAIR_SEPARATOR = "|"


class Morphism(NamedTuple):
    map: PointMap
    source: Space
    target: Space


class ExtRealField(serializers.Field):
    default_error_messages = {
        "invalid": _("{message}"),
        "decimal": _("{value}: rationals only, no decimal forms"),
        "not_a_string": _('expected a string such as "5", "5/3" or "inf"'),
    }
    parse = staticmethod(parse_ext)

    def to_internal_value(self, data):
        if isinstance(data, float):
            self.fail("decimal", value=data)
        if not isinstance(data, str):
            self.fail("not_a_string")
        try:
            return self.parse(data)
        except NumberFormatError as e:
            self.fail("invalid", message=str(e))

    def to_representation(self, value):
        return format_ext(value)


class UnitValField(ExtRealField):
    parse = staticmethod(parse_unit)


class StepField(serializers.Field):
    """
    One ``[abscissa, value]`` pair, each side parsed by its own field.
    """

    default_error_messages = {"not_a_pair": _("expected a pair [abscissa, value]")}

    def __init__(self, abscissa=None, value=None, **kwargs):
        self.abscissa = abscissa or ExtRealField()
        self.value = value or ExtRealField()
        super().__init__(**kwargs)
        self.abscissa.bind(field_name="", parent=self)
        self.value.bind(field_name="", parent=self)

    def to_internal_value(self, data):
        if not isinstance(data, list) or len(data) != 2:
            self.fail("not_a_pair")
        parsed, errors = [], {}
        for i, (field, item) in enumerate(zip((self.abscissa, self.value), data)):
            try:
                parsed.append(field.run_validation(item))
            except serializers.ValidationError as e:
                errors[i] = e.detail
        if errors:
            raise serializers.ValidationError(errors)
        return tuple(parsed)


class StepListField(serializers.ListField):
    """
    A step function as a list of ``[abscissa, value]`` string pairs. Levels
    are unit values on the abscissa, probabilities on the value side.
    """

    def __init__(self, form=Form.LEVELS, **kwargs):
        if form == Form.LEVELS:
            step = StepField(abscissa=UnitValField())
        else:
            step = StepField(value=UnitValField())
        kwargs.setdefault("child", step)
        super().__init__(**kwargs)


def level_steps(pairs) -> LevelFunction:
    return LevelFunction.from_pairs(pairs)


def distribution_jumps(pairs) -> DistanceDistribution:
    if any(point is INF for point, _ in pairs):
        raise StepFunctionError("jump points must be finite")
    return DistanceDistribution.from_pairs(pairs)


class TableSerializer(serializers.Serializer):
    """
    Common handling of ``points`` and the ``"x|y"`` keyed ``dist`` table.
    """

    points = serializers.ListField(
        child=serializers.CharField(allow_blank=False, trim_whitespace=False)
    )

    space_class = None

    def validate_points(self, value):
        duplicates = sorted({p for p in value if value.count(p) > 1})
        if duplicates:
            raise serializers.ValidationError(
                _("duplicate point ids: {}").format(", ".join(duplicates))
            )
        bad = [p for p in value if PAIR_SEPARATOR in p]
        if bad:
            raise serializers.ValidationError(
                _("point ids may not contain '{}': {}").format(
                    PAIR_SEPARATOR, ", ".join(bad)
                )
            )
        return value

    def build_entry(self, attrs, value):
        return value

    def validate(self, attrs):
        points = attrs["points"]
        index = {p: i for i, p in enumerate(points)}
        errors: Dict[str, List[str]] = {}
        table = {}
        for key, value in attrs["dist"].items():
            ids = key.split(PAIR_SEPARATOR)
            if len(ids) != 2:
                errors[key] = [_("pair keys have the form x|y")]
                continue
            x, y = ids
            unknown = [p for p in ids if p not in index]
            if unknown:
                errors[key] = [_("unknown point id: {}").format(", ".join(unknown))]
            elif x == y:
                errors[key] = [_("the diagonal is implicit")]
            elif index[x] > index[y]:
                errors[key] = [_("ids not in point order, write {}|{}").format(y, x)]
            else:
                try:
                    table[x, y] = self.build_entry(attrs, value)
                except StepFunctionError as e:
                    errors[key] = [str(e)]
        for i, x in enumerate(points):
            for y in points[i + 1 :]:
                key = f"{x}{PAIR_SEPARATOR}{y}"
                if (x, y) not in table and key not in errors:
                    errors[key] = [_("missing pair")]
        if errors:
            raise serializers.ValidationError({"dist": errors})
        attrs["dist"] = table
        return attrs

    def create(self, validated_data):
        validated_data.pop("form", None)
        return self.space_class(**validated_data)

    def represent_entry(self, instance, value):
        return format_ext(value)

    def to_representation(self, instance):
        data = {"form": instance.form.value}
        data.update(self.header(instance))
        data["points"] = list(instance.points)
        data["dist"] = {
            f"{x}{PAIR_SEPARATOR}{y}": self.represent_entry(
                instance, instance.distance(x, y)
            )
            for x, y in instance.pairs()
        }
        return data

    def header(self, instance) -> Dict[str, Any]:
        return {"separated": instance.separated}


class SpaceSerializer(TableSerializer):
    form = serializers.ChoiceField(choices=Form.space_choices)
    separated = serializers.BooleanField()
    dist = serializers.DictField(child=StepListField())

    def __init__(self, *args, **kwargs):
        from .registry import registry

        super().__init__(*args, **kwargs)
        self.fields["tnorm"] = serializers.ChoiceField(choices=registry.get_choices())
        data = kwargs.get("data")
        form = data.get("form") if isinstance(data, dict) else None
        form = Form.DDF if form == Form.DDF.value else Form.LEVELS
        self.fields["dist"] = serializers.DictField(child=StepListField(form=form))

    def validate_tnorm(self, value):
        from .registry import registry

        return registry.get(value)

    def build_entry(self, attrs, value):
        if attrs["form"] == Form.LEVELS.value:
            return level_steps(value)
        return distribution_jumps(value)

    def create(self, validated_data):
        form = validated_data.pop("form")
        space_class = LevelSpace if form == Form.LEVELS.value else DdfSpace
        return space_class(**validated_data)

    def header(self, instance):
        return {"tnorm": instance.tnorm.slug, "separated": instance.separated}

    def represent_entry(self, instance, value):
        rows = value.steps if instance.form == Form.LEVELS else value.jumps
        return [[format_ext(a), format_ext(b)] for a, b in rows]


class MetricSerializer(TableSerializer):
    form = serializers.ChoiceField(choices=[Form.choices[2]])
    separated = serializers.BooleanField(default=True)
    dist = serializers.DictField(child=ExtRealField())

    space_class = MetricSpace


class SpaceReferenceField(serializers.Field):
    """
    A space given inline or as a path relative to the referring file.
    """

    default_error_messages = {
        "invalid": _("expected a file path or an inline space object"),
        "unreadable": _("cannot read {path}: {reason}"),
    }

    def to_internal_value(self, data):
        if isinstance(data, str):
            path = Path(self.context.get("base_dir") or ".") / data
            try:
                text = path.read_bytes()
            except OSError as e:
                self.fail("unreadable", path=path, reason=e.strerror)
            try:
                return load_space(text, base_dir=path.parent, forms=Form.space_choices)
            except SchemaError as e:
                raise serializers.ValidationError(e.errors or [str(e)])
        if not isinstance(data, dict):
            self.fail("invalid")
        serializer = SpaceSerializer(data=data, context=self.context)
        if not serializer.is_valid():
            raise serializers.ValidationError(serializer.errors)
        return serializer.save()

    def to_representation(self, value):
        return SpaceSerializer(value).data


class MorphismSerializer(serializers.Serializer):
    source = SpaceReferenceField()
    target = SpaceReferenceField()
    map = serializers.DictField(
        child=serializers.CharField(allow_blank=False, trim_whitespace=False)
    )

    def validate(self, attrs):
        try:
            attrs["map"] = PointMap.between(
                attrs["source"], attrs["target"], attrs["map"]
            )
        except InputError as e:
            raise serializers.ValidationError({"map": [str(e)]})
        return attrs

    def create(self, validated_data):
        return Morphism(
            validated_data["map"], validated_data["source"], validated_data["target"]
        )

    def to_representation(self, instance):
        f, source, target = instance
        return {
            "source": SpaceReferenceField().to_representation(source),
            "target": SpaceReferenceField().to_representation(target),
            "map": {x: f(x) for x in f.source},
        }


def flatten_errors(detail, path=()) -> List[str]:
    """
    Turn nested DRF error details into ``path.to.field: message`` lines.
    """
    if isinstance(detail, dict):
        lines = []
        for key, value in detail.items():
            lines += flatten_errors(value, path + (str(key),))
        return lines
    if isinstance(detail, list):
        lines = []
        for i, item in enumerate(detail):
            nested = isinstance(item, (dict, list))
            lines += flatten_errors(item, path + (str(i),) if nested else path)
        return lines
    return [f"{'.'.join(path) or 'file'}: {detail}"]


def load_document(text: Union[str, bytes]) -> Dict[str, Any]:
    if isinstance(text, str):
        text = text.encode("utf-8")
    try:
        data = JSONParser().parse(io.BytesIO(text))
    except ParseError as e:
        raise SchemaError(f"invalid JSON: {e.detail}", errors=[f"file: {e.detail}"])
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object", errors=["file: expected an object"])
    return data


def _save(serializer: serializers.Serializer):
    if not serializer.is_valid():
        errors = flatten_errors(serializer.errors)
        raise SchemaError(f"schema violation, {errors[0]}", errors=errors)
    return serializer.save()


def load_space(
    text: Union[str, bytes], base_dir: Optional[Path] = None, forms=Form.choices
) -> AnySpace:
    data = load_document(text)
    allowed = [value for value, _ in forms]
    if data.get("form") not in allowed:
        message = f"form: expected one of {', '.join(allowed)}"
        raise SchemaError(f"schema violation, {message}", errors=[message])
    context = {"base_dir": base_dir}
    if data["form"] == Form.METRIC.value:
        return _save(MetricSerializer(data=data, context=context))
    return _save(SpaceSerializer(data=data, context=context))


def parse_space(text: Union[str, bytes]) -> AnySpace:
    """
    Parse a levels, ddf or metric file into its canonical in-memory form.
    """
    return load_space(text)


def parse_morphism(
    text: Union[str, bytes], base_dir: Optional[Path] = None
) -> Morphism:
    serializer = MorphismSerializer(
        data=load_document(text), context={"base_dir": base_dir}
    )
    return _save(serializer)


def render(data) -> str:
    return JSONRenderer().render(data, renderer_context={"indent": 2}).decode() + "\n"


def space_data(space: AnySpace) -> Dict[str, Any]:
    if space.form == Form.METRIC:
        return MetricSerializer(space).data
    return SpaceSerializer(space).data


def morphism_data(f: PointMap, source: Space, target: Space) -> Dict[str, Any]:
    return MorphismSerializer(Morphism(f, source, target)).data


def dump_space(space: AnySpace) -> str:
    return render(space_data(space))


def dump_morphism(f: PointMap, source: Space, target: Space) -> str:
    return render(morphism_data(f, source, target))
