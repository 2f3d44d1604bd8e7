"""Expression trees over features and constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Union

BINARY_OPS = ("add", "mul", "sub", "max", "min")
NARY_OPS = ("add", "mul", "max", "min", "neg")


@dataclass(frozen=True, slots=True)
class Const:
    value: float


@dataclass(frozen=True, slots=True)
class Feat:
    name: str


@dataclass(frozen=True, slots=True)
class Op:
    op: str
    children: tuple


Node = Union[Const, Feat, Op]
Path = tuple[int, ...]


def node_count(node: Node) -> int:
    if isinstance(node, Op):
        return 1 + sum(node_count(c) for c in node.children)
    return 1


def depth(node: Node) -> int:
    if isinstance(node, Op):
        return 1 + max(depth(c) for c in node.children)
    return 0


def iter_paths(node: Node, prefix: Path = ()) -> Iterator[tuple[Path, Node]]:
    """Pre-order traversal yielding ``(path, subtree)``."""
    yield prefix, node
    if isinstance(node, Op):
        for i, child in enumerate(node.children):
            yield from iter_paths(child, prefix + (i,))


def subtree(node: Node, path: Path) -> Node:
    for i in path:
        node = node.children[i]
    return node


def replace_at(node: Node, path: Path, new: Node) -> Node:
    if not path:
        return new
    i = path[0]
    children = list(node.children)
    children[i] = replace_at(children[i], path[1:], new)
    return Op(node.op, tuple(children))


def check_tree(node: Node, features: dict[str, int], binary: bool,
               max_nodes: int | None = None) -> None:
    """Raise ValueError if ``node`` breaks the representation's invariants."""
    ops = BINARY_OPS if binary else NARY_OPS
    for _, n in iter_paths(node):
        if isinstance(n, Const):
            if not math.isfinite(n.value):
                raise ValueError(f"non-finite constant {n.value}")
        elif isinstance(n, Feat):
            if n.name not in features:
                raise ValueError(f"feature {n.name!r} not allowed in this tree")
        elif isinstance(n, Op):
            if n.op not in ops:
                raise ValueError(f"operator {n.op!r} not allowed")
            k = len(n.children)
            if binary and k != 2:
                raise ValueError(f"binary operator {n.op!r} has {k} children")
            if n.op == "neg" and k != 1:
                raise ValueError("neg takes exactly one child")
            if k == 0:
                raise ValueError(f"operator {n.op!r} has no children")
        else:
            raise ValueError(f"not a tree node: {n!r}")
    if max_nodes is not None and node_count(node) > max_nodes:
        raise ValueError(f"tree has {node_count(node)} nodes, cap is {max_nodes}")


_JOIN = {"add": " + ", "mul": " * "}


def to_source(node: Node, features: dict[str, int]) -> str:
    """Python expression over ``f`` (the feature tuple) computing the tree."""
    if isinstance(node, Const):
        return f"({node.value!r})"
    if isinstance(node, Feat):
        return f"f[{features[node.name]}]"
    parts = [to_source(c, features) for c in node.children]
    op = node.op
    if op == "neg":
        return f"(-{parts[0]})"
    if op == "sub":
        return f"({parts[0]} - {parts[1]})"
    if len(parts) == 1:
        return parts[0]
    if op in _JOIN:
        return "(" + _JOIN[op].join(parts) + ")"
    return f"{op}({', '.join(parts)})"


def compile_tree(node: Node, features: dict[str, int]) -> Callable[[tuple], float]:
    return eval(f"lambda f: {to_source(node, features)}", {"max": max, "min": min})
