"""Arena draft: 30 shared three-card offers, picked secretly by each player."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from ..cards import Card, CardSet

DRAFT_TURNS = 30


class ContractError(Exception):
    """A caller-supplied function broke its contract (e.g. a pick out of range)."""


@dataclass(frozen=True)
class DraftSequence:
    seed: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.triples) != DRAFT_TURNS:
            raise ValueError(f"draft must have {DRAFT_TURNS} triples, got {len(self.triples)}")


def generate_draft(seed: int, cards: CardSet) -> DraftSequence:
    """Sample 30 offers of 3 distinct cards each; offers may repeat cards."""
    if len(cards) < 3:
        raise ValueError("need at least 3 cards to draft")
    rng = random.Random(seed)
    ids = cards.ids
    return DraftSequence(seed, tuple(tuple(rng.sample(ids, 3)) for _ in range(DRAFT_TURNS)))


def draft_deck(draft: DraftSequence, picker: Callable[[Sequence[Card]], int],
               cards: CardSet) -> list[int]:
    deck = []
    for triple in draft.triples:
        offer = [cards[cid] for cid in triple]
        choice = picker(offer)
        if choice not in (0, 1, 2):
            raise ContractError(f"pick must be 0, 1 or 2, got {choice!r}")
        deck.append(triple[choice])
    return deck
