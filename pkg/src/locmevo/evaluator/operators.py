"""Random initialization, mutation, crossover and Linear-to-tree translation."""

from __future__ import annotations

import random
from dataclasses import replace

from .features import CARD_FEATURES, N_STATE, STATE_FEATURES
from .genome import (
    TREE_CLASSES, BinaryTreeGenome, Genome, GenomeParams, LinearGenome, TreeGenome,
)
from .trees import (
    BINARY_OPS, NARY_OPS, Const, Feat, Node, Op, depth, iter_paths, node_count, replace_at,
    subtree,
)

# Bounded re-rolls for size-capped operators; after that the input is kept.
MAX_RETRIES = 20


def _leaf(rng: random.Random, params: GenomeParams, names: tuple[str, ...]) -> Node:
    if rng.random() < params.feature_leaf_probability:
        return Feat(rng.choice(names))
    return Const(rng.uniform(*params.constant_range))


def _grow(rng: random.Random, params: GenomeParams, names: tuple[str, ...], binary: bool,
          level: int, min_depth: int, max_depth: int) -> Node:
    if level >= max_depth or (level >= min_depth and rng.random() < 0.5):
        return _leaf(rng, params, names)
    if binary:
        op = rng.choice(BINARY_OPS)
        arity = 2
    else:
        op = rng.choice(NARY_OPS)
        arity = 1 if op == "neg" else rng.randint(1, params.max_arity)
    return Op(op, tuple(_grow(rng, params, names, binary, level + 1, min_depth, max_depth)
                        for _ in range(arity)))


def random_tree(rng: random.Random, params: GenomeParams, names: tuple[str, ...],
                binary: bool) -> Node:
    """Grow a tree whose depth lies in ``params.init_depth_range`` and whose
    size respects ``params.max_nodes`` (by rejection)."""
    lo, hi = params.init_depth_range
    while True:
        tree = _grow(rng, params, names, binary, 0, min(lo, 1), rng.randint(lo, hi))
        if lo <= depth(tree) <= hi and node_count(tree) <= params.max_nodes:
            return tree


def random_genome(representation: str, params: GenomeParams, rng: random.Random) -> Genome:
    if representation == "linear":
        lo, hi = params.linear_weight_range
        return LinearGenome(tuple(rng.uniform(lo, hi) for _ in range(N_STATE + len(CARD_FEATURES))))
    cls = TREE_CLASSES[representation]
    return cls(random_tree(rng, params, STATE_FEATURES, cls.binary),
               random_tree(rng, params, CARD_FEATURES, cls.binary))


def _small_tree(rng: random.Random, params: GenomeParams, names: tuple[str, ...],
                binary: bool) -> Node:
    return _grow(rng, params, names, binary, 0, 0, rng.randint(0, params.mutation_depth))


def mutate(g: Genome, params: GenomeParams, rng: random.Random) -> Genome:
    """Return a mutated copy of ``g``.

    Linear: each weight is resampled with probability ``mutation_rate``.
    Trees: nodes of the state tree then the card tree are visited in
    pre-order; the first node selected (probability ``mutation_rate`` each)
    is replaced by a fresh subtree of depth <= ``mutation_depth``, or, for a
    constant, perturbed with Gaussian noise half of the time.
    """
    rate = params.mutation_rate
    if isinstance(g, LinearGenome):
        lo, hi = params.linear_weight_range
        return replace(g, weights=tuple(rng.uniform(lo, hi) if rng.random() < rate else w
                                        for w in g.weights))
    for label, names in (("state_tree", STATE_FEATURES), ("card_tree", CARD_FEATURES)):
        tree = getattr(g, label)
        for path, node in iter_paths(tree):
            if rng.random() >= rate:
                continue
            base = node_count(tree) - node_count(node)
            for _ in range(MAX_RETRIES):
                if isinstance(node, Const) and rng.random() < 0.5:
                    new = Const(node.value + rng.gauss(0.0, params.constant_sigma))
                else:
                    new = _small_tree(rng, params, names, g.binary)
                if base + node_count(new) <= params.max_nodes:
                    return replace(g, **{label: replace_at(tree, path, new)})
            return g
    return g


def crossover(a: Genome, b: Genome, rng: random.Random,
              params: GenomeParams | None = None) -> Genome:
    """Child of ``a`` and ``b``: uniform per-gene for Linear, subtree swap for trees.

    Identical parents reproduce themselves.
    """
    if type(a) is not type(b):
        raise TypeError(f"cannot cross {a.representation} with {b.representation}")
    if isinstance(a, LinearGenome):
        return replace(a, weights=tuple(x if rng.random() < 0.5 else y
                                        for x, y in zip(a.weights, b.weights)))
    if a == b:
        return a
    cap = (params or GenomeParams()).max_nodes
    label = rng.choice(("state_tree", "card_tree"))
    ta, tb = getattr(a, label), getattr(b, label)
    paths_a = [p for p, _ in iter_paths(ta)]
    paths_b = [p for p, _ in iter_paths(tb)]
    for _ in range(MAX_RETRIES):
        pa = rng.choice(paths_a)
        donor = subtree(tb, rng.choice(paths_b))
        child = replace_at(ta, pa, donor)
        if node_count(child) <= cap:
            return replace(a, **{label: child})
    return a


def _linear_sum(weights: tuple[float, ...], names: tuple[str, ...]) -> list[Node]:
    return [Op("mul", (Const(w), Feat(n))) for w, n in zip(weights, names)]


def _right_fold_add(terms: list[Node]) -> Node:
    node = terms[-1]
    for t in reversed(terms[:-1]):
        node = Op("add", (t, node))
    return node


def translate_linear(g: LinearGenome, target: str) -> Genome:
    """Equivalent tree genome: a root Add over ``Mul(Const(w), Feat)`` terms.

    Binary targets fold the Add to the right.
    """
    if not isinstance(g, LinearGenome):
        raise TypeError("translate_linear expects a LinearGenome")
    if target == "linear":
        return g
    state_terms = _linear_sum(g.state_weights, STATE_FEATURES)
    card_terms = _linear_sum(g.card_weights, CARD_FEATURES)
    if target == "tree":
        return TreeGenome(Op("add", tuple(state_terms)), Op("add", tuple(card_terms)),
                          origin="from-linear", generation=g.generation)
    if target == "binary":
        return BinaryTreeGenome(_right_fold_add(state_terms), _right_fold_add(card_terms),
                                origin="from-linear", generation=g.generation)
    raise ValueError(f"unknown representation {target!r}")
