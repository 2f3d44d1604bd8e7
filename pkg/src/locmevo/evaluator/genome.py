"""Genome representations and the composite state evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, ClassVar, Union

from ..engine.match import AgentFailure
from ..engine.rules import Outcome, PlayerView
from .features import (
    CARD_FEATURES, CARD_INDEX, KEYWORD_FLAGS, N_CARD, N_STATE, STATE_FEATURES, STATE_INDEX,
)
from .trees import Node, check_tree, compile_tree

WIN_VALUE = math.inf
LOSS_VALUE = -math.inf

REPRESENTATIONS = ("linear", "binary", "tree")


class EvaluationError(AgentFailure):
    """A genome produced a non-finite value on finite inputs."""


@dataclass(frozen=True)
class GenomeParams:
    init_depth_range: tuple[int, int] = (2, 4)
    max_nodes: int = 64
    constant_range: tuple[float, float] = (-10.0, 10.0)
    feature_leaf_probability: float = 0.7
    linear_weight_range: tuple[float, float] = (-1.0, 1.0)
    mutation_rate: float = 0.05
    constant_sigma: float = 1.0
    max_arity: int = 3
    mutation_depth: int = 2

    def __post_init__(self):
        lo, hi = self.init_depth_range
        if not 0 <= lo <= hi:
            raise ValueError("init_depth_range must be a nonempty range")
        for name in ("constant_range", "linear_weight_range"):
            a, b = getattr(self, name)
            if not a <= b:
                raise ValueError(f"{name} must be a nonempty range")
        for name in ("feature_leaf_probability", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.max_nodes < 1 or self.max_arity < 1:
            raise ValueError("max_nodes and max_arity must be positive")


class _CompiledMixin:
    """Drops compiled closures when pickling; they are rebuilt lazily."""

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("state_fn", None)
        state.pop("card_fn", None)
        return state


@dataclass(frozen=True)
class LinearGenome(_CompiledMixin):
    weights: tuple[float, ...]
    origin: str = field(default="random", compare=False)
    generation: int = field(default=0, compare=False)

    representation: ClassVar[str] = "linear"

    def __post_init__(self):
        if len(self.weights) != N_STATE + N_CARD:
            raise ValueError(f"linear genome needs {N_STATE + N_CARD} weights, "
                             f"got {len(self.weights)}")
        if not all(math.isfinite(w) for w in self.weights):
            raise ValueError("linear weights must be finite")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def state_weights(self) -> tuple[float, ...]:
        return self.weights[:N_STATE]

    @property
    def card_weights(self) -> tuple[float, ...]:
        return self.weights[N_STATE:]

    @cached_property
    def state_fn(self) -> Callable[[tuple], float]:
        return _compile_dot(self.state_weights)

    @cached_property
    def card_fn(self) -> Callable[[tuple], float]:
        return _compile_dot(self.card_weights)


def _compile_dot(weights: tuple[float, ...]) -> Callable[[tuple], float]:
    terms = " + ".join(f"(({w!r}) * f[{i}])" for i, w in enumerate(weights))
    return eval(f"lambda f: ({terms})")


@dataclass(frozen=True)
class _TreePair(_CompiledMixin):
    state_tree: Node
    card_tree: Node
    origin: str = field(default="random", compare=False)
    generation: int = field(default=0, compare=False)

    binary: ClassVar[bool] = False

    @cached_property
    def state_fn(self) -> Callable[[tuple], float]:
        return compile_tree(self.state_tree, STATE_INDEX)

    @cached_property
    def card_fn(self) -> Callable[[tuple], float]:
        return compile_tree(self.card_tree, CARD_INDEX)

    def check(self, max_nodes: int | None = None) -> None:
        check_tree(self.state_tree, STATE_INDEX, self.binary, max_nodes)
        check_tree(self.card_tree, CARD_INDEX, self.binary, max_nodes)


@dataclass(frozen=True)
class BinaryTreeGenome(_TreePair):
    representation: ClassVar[str] = "binary"
    binary: ClassVar[bool] = True


@dataclass(frozen=True)
class TreeGenome(_TreePair):
    representation: ClassVar[str] = "tree"
    binary: ClassVar[bool] = False


Genome = Union[LinearGenome, BinaryTreeGenome, TreeGenome]
TREE_CLASSES = {"binary": BinaryTreeGenome, "tree": TreeGenome}


def check_genome(g: Genome, params: GenomeParams | None = None) -> None:
    """Raise ValueError if ``g`` violates its representation's invariants."""
    if isinstance(g, LinearGenome):
        if len(g.weights) != N_STATE + N_CARD or not all(map(math.isfinite, g.weights)):
            raise ValueError("invalid linear genome")
        return
    g.check(params.max_nodes if params else None)


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise EvaluationError(f"genome produced non-finite value {value}")
    return value


def eval_card(g: Genome, features: tuple[float, ...]) -> float:
    return _finite(float(g.card_fn(features)))


def eval_state_only(g: Genome, features: tuple[float, ...]) -> float:
    return _finite(float(g.state_fn(features)))


def evaluate(g: Genome, view: PlayerView) -> float:
    """State value from the viewing player's perspective.

    Finished games map to +/-inf (win/loss) and 0.0 (tie).
    """
    state = view.state
    if state.outcome is not None:
        if state.outcome == Outcome.TIE:
            return 0.0
        return WIN_VALUE if int(state.outcome) == view.player else LOSS_VALUE
    me = state.players[view.player]
    opp = state.players[1 - view.player]
    f = (float(me.mana), float(len(me.deck)), float(me.health), float(me.max_mana),
         float(me.draws), float(me.next_rune),
         float(opp.mana), float(len(opp.deck)), float(opp.health), float(opp.max_mana),
         float(opp.draws), float(opp.next_rune))
    value = g.state_fn(f)
    card_fn = g.card_fn
    flags = KEYWORD_FLAGS
    for c in me.board:
        value += card_fn((float(c.attack), float(c.defense)) + flags[c.keywords])
    for c in opp.board:
        value -= card_fn((float(c.attack), float(c.defense)) + flags[c.keywords])
    return _finite(float(value))


__all__ = [
    "BinaryTreeGenome", "CARD_FEATURES", "EvaluationError", "Genome", "GenomeParams",
    "LinearGenome", "REPRESENTATIONS", "STATE_FEATURES", "TreeGenome", "check_genome",
    "eval_card", "eval_state_only", "evaluate",
]
