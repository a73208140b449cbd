from importlib import import_module
from typing import List, Tuple, Type

from probmet.exceptions import UnknownTNorm
from probmet.tnorm import BUILTIN_TNORMS, BaseTNorm


class TNormRegistry(object):
    def __init__(self):
        self._tnorms = {}

    def __contains__(self, item):
        return item in self._tnorms

    def __getitem__(self, item):
        return self._tnorms[item]

    def __iter__(self):
        return iter(self._tnorms)

    def register(self, class_or_path):
        """
        Register a BaseTNorm subclass, or the dotted path of one.
        """
        if isinstance(class_or_path, str):
            module_name, _, class_name = class_or_path.rpartition(".")
            class_or_path = getattr(import_module(module_name), class_name)
        if not (
            hasattr(class_or_path, "__base__") and issubclass(class_or_path, BaseTNorm)
        ):
            raise TypeError(f"{class_or_path!r} is not a BaseTNorm subclass")
        self._tnorms[class_or_path.slug] = class_or_path
        return class_or_path

    def get(self, slug: str) -> BaseTNorm:
        """
        Instantiate the t-norm named by the ``tnorm`` field of a file.
        """
        try:
            return self._tnorms[slug]()
        except KeyError:
            raise UnknownTNorm(
                f"unknown t-norm {slug!r}, expected one of {', '.join(self)}",
                context={"tnorm": slug},
            )

    def get_choices(self) -> List[Tuple[str, str]]:
        return [(slug, t.get_display_name()) for slug, t in self._tnorms.items()]

    def get_tnorms(self) -> List[Type[BaseTNorm]]:
        return list(self._tnorms.values())


registry = TNormRegistry()
for _tnorm in BUILTIN_TNORMS:
    registry.register(_tnorm)
