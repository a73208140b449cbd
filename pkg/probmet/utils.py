import collections.abc
from typing import Any, Dict, Hashable, Iterable, List, Optional

from django.conf import settings

DEFAULTS = {
    "PRODUCT_MAX_POINTS": 4096,
    "WITNESS_LIMIT": 10,
    "CROSS_VALIDATE": False,
    "APEX_ID": "⊥",
    "PRODUCT_ID_FORMAT": "({})",
    "PRODUCT_ID_JOINER": ";",
    "TNORMS": [],
}


def update(d, u):
    for k, v in u.items():
        if isinstance(v, collections.abc.Mapping):
            d[k] = update(d.get(k, {}), v)
        else:
            d[k] = v
    return d


def get_config() -> Dict[str, Any]:
    """
    The ``PROBMET`` settings dictionary merged over the defaults. Outside a
    configured project the defaults are returned unchanged.
    """
    config = dict(DEFAULTS)
    if settings.configured:
        update(config, getattr(settings, "PROBMET", {}))
    return config


def get_setting(name: str, default: Optional[Any] = None) -> Any:
    value = get_config().get(name, default)
    return default if value is None else value


class UnionFind:
    """
    Disjoint sets over a fixed ordered carrier. The representative of a
    block is always its earliest member in carrier order.
    """

    def __init__(self, items: Iterable[Hashable]):
        self._order = {item: index for index, item in enumerate(items)}
        self._parent = {item: item for item in self._order}

    def find(self, item):
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a, b) -> None:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return
        if self._order[root_b] < self._order[root_a]:
            root_a, root_b = root_b, root_a
        self._parent[root_b] = root_a

    def blocks(self) -> List[List[Hashable]]:
        grouped: Dict[Hashable, List[Hashable]] = {}
        for item in self._order:
            grouped.setdefault(self.find(item), []).append(item)
        return list(grouped.values())
