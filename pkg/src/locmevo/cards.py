"""Card definitions and the card-list text format."""

from __future__ import annotations

import enum
import hashlib
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

# Keyword bits, in card-list column order B, C, D, G, L, W.
BREAKTHROUGH = 1 << 0
CHARGE = 1 << 1
DRAIN = 1 << 2
GUARD = 1 << 3
LETHAL = 1 << 4
WARD = 1 << 5

KEYWORD_LETTERS = "BCDGLW"
KEYWORD_BITS = (BREAKTHROUGH, CHARGE, DRAIN, GUARD, LETHAL, WARD)
KEYWORD_NAMES = ("breakthrough", "charge", "drain", "guard", "lethal", "ward")

CARDS_ENV_VAR = "LOCMEVO_CARDS"


class CardKind(enum.Enum):
    CREATURE = "creature"
    GREEN_ITEM = "itemGreen"
    RED_ITEM = "itemRed"
    BLUE_ITEM = "itemBlue"


_KIND_BY_NAME = {kind.value.lower(): kind for kind in CardKind}


class CardListError(ValueError):
    """Raised for malformed or inconsistent card lists."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Card:
    id: int
    name: str
    kind: CardKind
    cost: int
    attack: int
    defense: int
    keywords: int
    player_hp_delta: int
    enemy_hp_delta: int
    card_draw: int

    @property
    def is_creature(self) -> bool:
        return self.kind is CardKind.CREATURE

    def has(self, keyword: int) -> bool:
        return bool(self.keywords & keyword)

    def keyword_string(self) -> str:
        return keywords_to_string(self.keywords)


def keywords_from_string(text: str) -> int:
    if len(text) != 6:
        raise ValueError(f"keyword string must have 6 characters, got {text!r}")
    mask = 0
    for ch, letter, bit in zip(text, KEYWORD_LETTERS, KEYWORD_BITS):
        if ch == letter:
            mask |= bit
        elif ch != "-":
            raise ValueError(f"unexpected keyword character {ch!r} (expected {letter!r} or '-')")
    return mask


def keywords_to_string(mask: int) -> str:
    return "".join(
        letter if mask & bit else "-" for letter, bit in zip(KEYWORD_LETTERS, KEYWORD_BITS)
    )


class CardSet:
    """Ordered, id-indexed collection of cards."""

    def __init__(self, cards: list[Card]):
        self.cards = list(cards)
        self._by_id = {c.id: c for c in self.cards}

    def __len__(self) -> int:
        return len(self.cards)

    def __iter__(self):
        return iter(self.cards)

    def __getitem__(self, card_id: int) -> Card:
        return self._by_id[card_id]

    def __contains__(self, card_id: int) -> bool:
        return card_id in self._by_id

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.cards]

    def digest(self) -> str:
        """Stable hex digest of the card contents, used in run manifests."""
        h = hashlib.sha256()
        for c in self.cards:
            h.update(format_card(c).encode())
            h.update(b"\n")
        return h.hexdigest()


def _parse_line(line: str, lineno: int) -> Card:
    fields = [f.strip() for f in line.split(";")]
    if len(fields) != 10:
        raise CardListError(f"expected 10 fields, got {len(fields)}", lineno)
    try:
        card_id = int(fields[0])
        kind = _KIND_BY_NAME[fields[2].lower()]
        cost, attack, defense = int(fields[3]), int(fields[4]), int(fields[5])
        keywords = keywords_from_string(fields[6])
        php, ehp, draw = int(fields[7]), int(fields[8]), int(fields[9])
    except KeyError:
        raise CardListError(f"unknown card kind {fields[2]!r}", lineno) from None
    except ValueError as exc:
        raise CardListError(str(exc), lineno) from None
    if cost < 0:
        raise CardListError("cost must be non-negative", lineno)
    if kind is CardKind.CREATURE and defense < 1:
        raise CardListError("creature defense must be at least 1", lineno)
    return Card(card_id, fields[1], kind, cost, attack, defense, keywords, php, ehp, draw)


def load_cardset(text: str) -> CardSet:
    """Parse a card-list document.

    Blank lines and lines starting with ``#`` are skipped. Ids must be unique
    and strictly increasing.
    """
    cards: list[Card] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        card = _parse_line(line, lineno)
        if cards and card.id <= cards[-1].id:
            if any(c.id == card.id for c in cards):
                raise CardListError(f"duplicate card id {card.id}", lineno)
            raise CardListError(f"card ids must be increasing ({card.id} after {cards[-1].id})", lineno)
        cards.append(card)
    if not cards:
        raise CardListError("no cards")
    return CardSet(cards)


def format_card(card: Card) -> str:
    return " ; ".join(
        str(v)
        for v in (
            card.id, card.name, card.kind.value, card.cost, card.attack, card.defense,
            card.keyword_string(), card.player_hp_delta, card.enemy_hp_delta, card.card_draw,
        )
    )


def load_cardset_file(path: str | os.PathLike) -> CardSet:
    return load_cardset(Path(path).read_text(encoding="utf-8"))


def shipped_cardlist_text() -> str:
    return resources.files("locmevo.data").joinpath("cardlist.txt").read_text(encoding="utf-8")


_DEFAULTS: dict[str, CardSet] = {}


def default_cardset() -> CardSet:
    """The card set named by ``$LOCMEVO_CARDS``, or the shipped 160-card list."""
    path = os.environ.get(CARDS_ENV_VAR, "")
    if path not in _DEFAULTS:
        _DEFAULTS[path] = load_cardset_file(path) if path else load_cardset(shipped_cardlist_text())
    return _DEFAULTS[path]
