"""File formats and reproducible JSON serialization.

Graph files:     {"n": <int>, "edges": [[i, j, w], ...]}   (0-based, i < j)
Partition files: {"classes": [[v, ...], ...]}
Permutations:    {"perms": [[image of 0, image of 1, ...], ...]}
Model files:     {"A": 2.0, "K": 1.0, "h": 6.0, "tau": 1.0}

Canonical dumps sort object keys and print floats with 17 significant
digits, so identical inputs always produce byte-identical reports.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import is_dataclass, asdict

import numpy as np

from .errors import BadBundle
from .graphs import WeightedGraph, build_graph
from .partitions import Partition, make_partition

__all__ = [
    "to_jsonable",
    "dumps_canonical",
    "sha256_of",
    "graph_to_dict",
    "graph_from_dict",
    "load_graph",
    "save_graph",
    "partition_to_dict",
    "partition_from_dict",
    "load_partition",
    "save_partition",
    "load_perms",
]


def to_jsonable(obj):
    """Convert numpy containers and dataclasses into plain JSON types."""
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return obj


def _emit(obj, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif obj is True:
        parts.append("true")
    elif obj is False:
        parts.append("false")
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            raise BadBundle("cannot serialize non-finite numbers")
        parts.append(format(obj, ".17g"))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        parts.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                parts.append(",")
            parts.append(json.dumps(str(key), ensure_ascii=True))
            parts.append(":")
            _emit(obj[key], parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(obj):
            if i:
                parts.append(",")
            _emit(item, parts)
        parts.append("]")
    else:
        raise BadBundle(f"cannot serialize object of type {type(obj).__name__}")


def dumps_canonical(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    parts: list[str] = []
    _emit(to_jsonable(obj), parts)
    return "".join(parts)


def sha256_of(obj) -> str:
    return hashlib.sha256(dumps_canonical(obj).encode("ascii")).hexdigest()


# ---- graphs ----

def graph_to_dict(g: WeightedGraph) -> dict:
    return {"n": g.n, "edges": [[i, j, w] for i, j, w in g.edges]}


def graph_from_dict(data: dict) -> WeightedGraph:
    return build_graph(int(data["n"]), data["edges"])


def load_graph(path) -> WeightedGraph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


def save_graph(g: WeightedGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_canonical(graph_to_dict(g)))
        fh.write("\n")


# ---- partitions / permutations ----

def partition_to_dict(pi: Partition) -> dict:
    return {"classes": [list(cls) for cls in pi.classes]}


def partition_from_dict(data: dict, n: int) -> Partition:
    return make_partition(data["classes"], n)


def load_partition(path, n: int) -> Partition:
    with open(path) as fh:
        return partition_from_dict(json.load(fh), n)


def save_partition(pi: Partition, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_canonical(partition_to_dict(pi)))
        fh.write("\n")


def load_perms(path) -> list[list[int]]:
    with open(path) as fh:
        data = json.load(fh)
    return [[int(x) for x in perm] for perm in data["perms"]]
