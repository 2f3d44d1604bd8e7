"""The 12 state features and 8 card features seen by evaluation functions."""

from __future__ import annotations

from ..cards import KEYWORD_BITS, KEYWORD_NAMES, Card
from ..engine.rules import Creature, PlayerState, PlayerView

_PLAYER_FEATURES = ("current_mana", "deck_size", "health", "max_mana", "draws", "next_rune")

STATE_FEATURES: tuple[str, ...] = tuple(
    f"{side}_{name}" for side in ("self", "opp") for name in _PLAYER_FEATURES
)
CARD_FEATURES: tuple[str, ...] = ("attack", "defense") + KEYWORD_NAMES
ALL_FEATURES = STATE_FEATURES + CARD_FEATURES

STATE_INDEX = {name: i for i, name in enumerate(STATE_FEATURES)}
CARD_INDEX = {name: i for i, name in enumerate(CARD_FEATURES)}

N_STATE = len(STATE_FEATURES)
N_CARD = len(CARD_FEATURES)

# keyword bitmask -> six 0.0/1.0 flags
KEYWORD_FLAGS: tuple[tuple[float, ...], ...] = tuple(
    tuple(1.0 if mask & bit else 0.0 for bit in KEYWORD_BITS) for mask in range(64)
)


def player_features(p: PlayerState) -> tuple[float, ...]:
    return (float(p.mana), float(len(p.deck)), float(p.health), float(p.max_mana),
            float(p.draws), float(p.next_rune))


def extract_state_features(view: PlayerView) -> tuple[float, ...]:
    """Own six features followed by the opponent's six."""
    return player_features(view.own) + player_features(view.opponent)


def extract_card_features(c: Creature | Card) -> tuple[float, ...]:
    """``[attack, defense, B, C, D, G, L, W]``; works for board creatures and cards."""
    return (float(c.attack), float(c.defense)) + KEYWORD_FLAGS[c.keywords]
