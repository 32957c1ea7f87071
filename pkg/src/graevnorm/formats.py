"""JSON file formats for spaces, topologies, group tables and embedding
instances, with exact rational entries written as strings like "1/4"."""

from __future__ import annotations

import json
from fractions import Fraction

from .qpspace import QPM, validate_qpm
from .quniform import FiniteTopology, InvalidTopology, topology_from_opens
from .words import AbelianWord, Word, parse_word


class ParseError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    try:
        value = Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from exc
    return value


def format_rational(value: Fraction) -> str:
    return str(value)


def _check_labels(labels) -> list[str]:
    if not labels:
        raise ParseError("empty point list")
    out = [str(l) for l in labels]
    if len(set(out)) != len(out):
        raise ParseError("duplicate point labels")
    for label in out:
        if not label or label == "e" or label.endswith("^-1") or any(c.isspace() for c in label):
            raise ParseError(f"reserved or malformed label {label!r}")
    return out


def space_from_dict(data: dict) -> QPM:
    if "points" not in data or "matrix" not in data:
        raise ParseError("space file needs 'points' and 'matrix'")
    labels = _check_labels(data["points"])
    matrix = [[parse_rational(v) for v in row] for row in data["matrix"]]
    bound = parse_rational(data["bound"]) if "bound" in data else None
    return validate_qpm(labels, matrix, bound)


def space_to_dict(space: QPM) -> dict:
    data = {
        "points": space.labels,
        "matrix": [[format_rational(v) for v in row] for row in space.rows],
    }
    if space.bound is not None:
        data["bound"] = format_rational(space.bound)
    return data


def topology_from_dict(data: dict) -> FiniteTopology:
    if "points" not in data:
        raise ParseError("topology file needs 'points'")
    labels = _check_labels(data["points"])
    index = {label: i for i, label in enumerate(labels)}

    def resolve(members):
        try:
            return frozenset(index[str(m)] for m in members)
        except KeyError as exc:
            raise ParseError(f"unknown point {exc.args[0]!r}") from exc

    topo_opens = None
    topo_nbhd = None
    if "opens" in data:
        topo_opens = topology_from_opens(labels, [resolve(o) for o in data["opens"]])
    if "min_nbhd" in data:
        nbhd = data["min_nbhd"]
        if set(nbhd) != set(labels):
            raise ParseError("min_nbhd must name every point exactly once")
        topo_nbhd = FiniteTopology(labels, [resolve(nbhd[l]) for l in labels])
    if topo_opens is None and topo_nbhd is None:
        raise ParseError("topology file needs 'opens' or 'min_nbhd'")
    if topo_opens is not None and topo_nbhd is not None and topo_opens != topo_nbhd:
        raise InvalidTopology("'opens' and 'min_nbhd' describe different topologies")
    return topo_opens if topo_opens is not None else topo_nbhd


def topology_to_dict(space: FiniteTopology) -> dict:
    return {
        "points": list(space.labels),
        "min_nbhd": {
            space.labels[x]: sorted(space.labels[y] for y in space.min_nbhd[x])
            for x in range(space.size)
        },
    }


def group_from_dict(data: dict) -> tuple[list[list[int]], list[list[int]]]:
    if "order" not in data or "table" not in data:
        raise ParseError("group file needs 'order' and 'table'")
    order = int(data["order"])
    table = [[int(v) for v in row] for row in data["table"]]
    if len(table) != order or any(len(row) != order for row in table):
        raise ParseError("multiplication table does not match the order")
    subsets = [[int(v) for v in s] for s in data.get("subsets", [])]
    return table, subsets


def embedding_from_dict(data: dict):
    """Returns (space, subset ids, d, subset_space or None)."""
    for key in ("space", "subspace", "d"):
        if key not in data:
            raise ParseError(f"embedding instance needs {key!r}")
    space = topology_from_dict(data["space"])
    index = {label: i for i, label in enumerate(space.labels)}
    try:
        subset = sorted(index[str(l)] for l in data["subspace"])
    except KeyError as exc:
        raise ParseError(f"subspace point {exc.args[0]!r} not in the space") from exc
    d = space_from_dict(data["d"])
    expected = [space.labels[x] for x in subset]
    if d.labels != expected:
        raise ParseError(
            f"metric points {d.labels} must equal the sorted subspace {expected}"
        )
    subset_space = None
    if "subspace_topology" in data:
        sub = dict(data["subspace_topology"])
        sub.setdefault("points", expected)
        subset_space = topology_from_dict(sub)
        if list(subset_space.labels) != expected:
            raise ParseError("subspace topology must use the subspace points")
    return space, subset, d, subset_space


def load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return data


def parse_abelian(text: str, labels: list[str]) -> AbelianWord:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad coefficient map: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("coefficient map must be a JSON object")
    index = {label: i for i, label in enumerate(labels)}
    coeffs = {}
    for label, coeff in data.items():
        if label not in index:
            raise ParseError(f"unknown point {label!r}")
        if not isinstance(coeff, int):
            raise ParseError(f"coefficient of {label!r} must be an integer")
        coeffs[index[label]] = coeff
    return AbelianWord(coeffs)


def parse_group_word(text: str, labels: list[str]) -> Word:
    try:
        return parse_word(text, labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
