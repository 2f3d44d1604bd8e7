"""Shared helpers for building hand-made game states."""

from __future__ import annotations

import pytest

from locmevo.cards import Card, CardKind, default_cardset, keywords_from_string
from locmevo.engine.rules import Creature, GameState, PlayerState


@pytest.fixture(scope="session")
def cards():
    return default_cardset()


def card(cid=900, kind=CardKind.CREATURE, cost=1, attack=1, defense=1, kw="------",
         php=0, ehp=0, draw=0, name="Test") -> Card:
    return Card(cid, name, kind, cost, attack, defense, keywords_from_string(kw), php, ehp, draw)


def creature(iid, attack, defense, kw="------", ready=True, card_id=0) -> Creature:
    return Creature(iid, card_id, attack, defense, keywords_from_string(kw), ready, False)


def make_state(board0=(), board1=(), hand0=(), mana=0, deck=5, active=0) -> GameState:
    """A live mid-game state with the given boards; player ``active`` to move."""
    filler = card(999, cost=12, attack=0, defense=1)
    players = [PlayerState([filler] * deck), PlayerState([filler] * deck)]
    players[0].board = list(board0)
    players[1].board = list(board1)
    players[active].hand = list(hand0)
    for p in players:
        p.max_mana = max(mana, 1)
        p.mana = mana if p is players[active] else 0
    s = GameState(players, 0)
    s.turn_number = 3
    s.active_player = active
    s.pending_start = False
    s.next_instance = 100
    return s


def sample_states(n: int, seed: int, cards_=None) -> list[GameState]:
    """Live states visited by random play, ``n`` of them, deterministic in ``seed``."""
    import random as _random

    from locmevo.engine import begin, generate_draft, init_battle, legal_actions, apply_in_place

    cards_ = cards_ or default_cardset()
    rng = _random.Random(seed)
    out: list[GameState] = []
    game = 0
    while len(out) < n:
        draft = generate_draft(seed * 1000 + game, cards_)
        decks = [[t[rng.randrange(3)] for t in draft.triples] for _ in range(2)]
        s = begin(init_battle(decks[0], decks[1], rng.getrandbits(32), cards_))
        while s.outcome is None and len(out) < n:
            if rng.random() < 0.3:
                out.append(s.copy())
            apply_in_place(s, rng.choice(legal_actions(s)))
        game += 1
    return out
