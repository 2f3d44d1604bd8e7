"""Playing policies.

All agents are stateless: decisions depend only on the arguments, so one
agent object can serve any number of matches.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Sequence

from .cards import GUARD, Card, CardKind
from .engine.rules import (
    PASS, Action, ActionKind, FACE, BOARD_LIMIT, IllegalActionError, Outcome, PlayerView,
    RulesError, apply_action, apply_in_place, legal_actions, state_hash,
)
from .evaluator.features import KEYWORD_FLAGS, STATE_INDEX, CARD_INDEX
from .evaluator.genome import (
    LOSS_VALUE, WIN_VALUE, Genome, LinearGenome, eval_card, evaluate,
)
from .evaluator.text import parse_genome
from .evaluator.trees import Const, Feat, Node
from .seeding import derive_seed


class RandomAgent:
    """Uniform choices, seeded by the agent seed and the observed situation."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.label = f"random:{seed}"

    def pick(self, offer: Sequence[Card]) -> int:
        rng = random.Random(derive_seed("pick", self.seed, *(c.id for c in offer)))
        return rng.randrange(len(offer))

    def act(self, view: PlayerView) -> Action:
        rng = random.Random(derive_seed("act", self.seed, state_hash(view.state)))
        return rng.choice(legal_actions(view.state))


def weakop_pick(offer: Sequence[Card]) -> int:
    """Highest-attack creature (lowest index on ties), else the leftmost card."""
    best, best_attack = 0, None
    for i, card in enumerate(offer):
        if card.kind is CardKind.CREATURE and (best_attack is None or card.attack > best_attack):
            best, best_attack = i, card.attack
    return best


def weakop_act(view: PlayerView) -> Action:
    """One action per call: summon, then attack, then pass."""
    me, opp = view.own, view.opponent
    if len(me.board) < BOARD_LIMIT:
        summon, best_attack = None, None
        for i, card in enumerate(me.hand):
            if card.kind is CardKind.CREATURE and card.cost <= me.mana:
                if best_attack is None or card.attack > best_attack:
                    summon, best_attack = i, card.attack
        if summon is not None:
            return Action.summon(summon)
    attacker = None
    for c in me.board:
        if c.ready and (attacker is None or c.attack > attacker.attack):
            attacker = c
    if attacker is not None:
        guards = [c for c in opp.board if c.keywords & GUARD]
        if not guards:
            return Action.attack(attacker.instance_id, FACE)
        target = guards[0]
        for g in guards[1:]:
            if g.defense > target.defense:
                target = g
        return Action.attack(attacker.instance_id, target.instance_id)
    return PASS


class WeakOpAgent:
    label = "weakop"

    def pick(self, offer: Sequence[Card]) -> int:
        return weakop_pick(offer)

    def act(self, view: PlayerView) -> Action:
        return weakop_act(view)


def genome_pick(g: Genome, offer: Sequence[Card]) -> int:
    best, best_value = 0, None
    for i, card in enumerate(offer):
        value = eval_card(g, (float(card.attack), float(card.defense)) + KEYWORD_FLAGS[card.keywords])
        if best_value is None or value > best_value:
            best, best_value = i, value
    return best


def genome_act(g: Genome, view: PlayerView) -> Action:
    """Greedy one-ply choice: the legal action whose resulting state evaluates
    highest (first in :func:`legal_actions` order on ties).

    Passing is scored as the current state, since the turn boundary involves
    hidden information.
    """
    state = view.state
    player = view.player
    actions = legal_actions(state)
    best, best_value = PASS, None
    for action in actions:
        if action.kind == ActionKind.PASS:
            value = evaluate(g, view)
        else:
            s = state.copy()
            apply_in_place(s, action)
            value = evaluate(g, PlayerView(s, player))
        if best_value is None or value > best_value:
            best, best_value = action, value
    return best


class GenomeAgent:
    def __init__(self, genome: Genome, label: str | None = None):
        self.genome = genome
        self.label = label or f"genome:{genome.representation}"

    def pick(self, offer: Sequence[Card]) -> int:
        return genome_pick(self.genome, offer)

    def act(self, view: PlayerView) -> Action:
        return genome_act(self.genome, view)


# ---------------------------------------------------------------- test oracle
# A deliberately naive second implementation of the greedy policy. It shares
# only the engine's apply_action with the code above: candidate actions are
# found by trial application and trees are interpreted node by node.

def _naive_tree(node: Node, values: dict[str, float]) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Feat):
        return values[node.name]
    vals = [_naive_tree(c, values) for c in node.children]
    if node.op == "neg":
        return -vals[0]
    if node.op == "sub":
        return vals[0] - vals[1]
    if node.op == "max":
        return max(vals)
    if node.op == "min":
        return min(vals)
    acc = vals[0]
    for v in vals[1:]:
        acc = acc + v if node.op == "add" else acc * v
    return acc


def _naive_state_values(view: PlayerView) -> dict[str, float]:
    values = {}
    for side, p in (("self", view.own), ("opp", view.opponent)):
        values[f"{side}_current_mana"] = float(p.mana)
        values[f"{side}_deck_size"] = float(len(p.deck))
        values[f"{side}_health"] = float(p.health)
        values[f"{side}_max_mana"] = float(p.max_mana)
        values[f"{side}_draws"] = float(p.draws)
        values[f"{side}_next_rune"] = float(p.next_rune)
    return values


def _naive_card_values(c) -> dict[str, float]:
    values = {"attack": float(c.attack), "defense": float(c.defense)}
    for name, bit in zip(("breakthrough", "charge", "drain", "guard", "lethal", "ward"),
                         (1, 2, 4, 8, 16, 32)):
        values[name] = 1.0 if c.keywords & bit else 0.0
    return values


def oracle_evaluate(g: Genome, view: PlayerView) -> float:
    state = view.state
    if state.outcome is not None:
        if state.outcome == Outcome.TIE:
            return 0.0
        return WIN_VALUE if int(state.outcome) == view.player else LOSS_VALUE
    if isinstance(g, LinearGenome):
        sv = _naive_state_values(view)
        state_value = sum(w * sv[name] for w, name in zip(g.weights[:12], STATE_INDEX))

        def card_value(c):
            cv = _naive_card_values(c)
            return sum(w * cv[name] for w, name in zip(g.weights[12:], CARD_INDEX))
    else:
        state_value = _naive_tree(g.state_tree, _naive_state_values(view))

        def card_value(c):
            return _naive_tree(g.card_tree, _naive_card_values(c))
    total = state_value
    for c in view.own.board:
        total += card_value(c)
    for c in view.opponent.board:
        total -= card_value(c)
    return total


def oracle_candidates(view: PlayerView) -> list[Action]:
    """Every action the engine accepts, found by trying all combinations."""
    state = view.state
    me, opp = view.own, view.opponent
    ids = [c.instance_id for c in me.board] + [c.instance_id for c in opp.board]
    tries = [PASS]
    for i in range(len(me.hand)):
        tries.append(Action.summon(i))
        tries.extend(Action.use(i, t) for t in [FACE] + ids)
    for c in me.board:
        tries.extend(Action.attack(c.instance_id, t) for t in [FACE] + ids)
    found = []
    for a in tries:
        try:
            apply_action(state, a)
        except IllegalActionError:
            continue
        found.append(a)
    return found


def oracle_act(g: Genome, view: PlayerView) -> Action:
    best, best_value = PASS, oracle_evaluate(g, view)
    for a in oracle_candidates(view):
        if a == PASS:
            continue
        value = oracle_evaluate(g, PlayerView(apply_action(view.state, a), view.player))
        if value > best_value:
            best, best_value = a, value
    return best


# ---------------------------------------------------------------- descriptors

def parse_agent(descriptor: str):
    """Build an agent from ``random[:seed]``, ``weakop`` or ``genome:<path>``."""
    kind, _, arg = descriptor.partition(":")
    if kind == "random":
        return RandomAgent(int(arg) if arg else 0)
    if kind == "weakop" and not arg:
        return WeakOpAgent()
    if kind == "genome" and arg:
        genome = parse_genome(Path(arg).read_text(encoding="utf-8"))
        return GenomeAgent(genome, label=descriptor)
    raise ValueError(f"unknown agent descriptor {descriptor!r}")


__all__ = [
    "GenomeAgent", "RandomAgent", "RulesError", "WeakOpAgent", "genome_act", "genome_pick",
    "oracle_act", "oracle_candidates", "oracle_evaluate", "parse_agent", "weakop_act",
    "weakop_pick",
]
