"""Battle-phase rules: state, actions, legality and transitions.

States are mutable internally but every public transition returns a fresh
copy, so callers may treat them as values.
"""

from __future__ import annotations

import enum
import hashlib
import random
from typing import NamedTuple, Sequence

from ..cards import (
    BREAKTHROUGH, CHARGE, DRAIN, GUARD, LETHAL, WARD,
    Card, CardKind, CardSet,
)

START_HEALTH = 30
DECK_SIZE = 30
MAX_MANA = 12
HAND_LIMIT = 8
BOARD_LIMIT = 6
TURN_LIMIT = 50  # turns per player
RUNE_STEP = 5
FIRST_RUNE = 25
OPENING_HAND = (4, 5)

FACE = -1


class RulesError(Exception):
    """Raised when the engine is driven outside its contract."""


class IllegalActionError(RulesError):
    pass


class Outcome(enum.IntEnum):
    P0_WIN = 0
    P1_WIN = 1
    TIE = 2


class ActionKind(enum.IntEnum):
    SUMMON = 0
    USE = 1
    ATTACK = 2
    PASS = 3


_KIND_WORDS = {"SUMMON": ActionKind.SUMMON, "USE": ActionKind.USE,
               "ATTACK": ActionKind.ATTACK, "PASS": ActionKind.PASS}


class Action(NamedTuple):
    """A battle action.

    ``index`` is a hand index for SUMMON/USE and an attacker instance id for
    ATTACK. ``target`` is a creature instance id or ``FACE``.
    """

    kind: ActionKind
    index: int = -1
    target: int = FACE

    @classmethod
    def summon(cls, hand_index: int) -> Action:
        return cls(ActionKind.SUMMON, hand_index, FACE)

    @classmethod
    def use(cls, hand_index: int, target: int) -> Action:
        return cls(ActionKind.USE, hand_index, target)

    @classmethod
    def attack(cls, attacker: int, target: int) -> Action:
        return cls(ActionKind.ATTACK, attacker, target)

    def __str__(self) -> str:
        if self.kind == ActionKind.PASS:
            return "PASS"
        if self.kind == ActionKind.SUMMON:
            return f"SUMMON {self.index}"
        return f"{self.kind.name} {self.index} {self.target}"

    @classmethod
    def parse(cls, text: str) -> Action:
        parts = text.split()
        if not parts or parts[0] not in _KIND_WORDS:
            raise ValueError(f"bad action {text!r}")
        kind = _KIND_WORDS[parts[0]]
        nums = [int(p) for p in parts[1:]]
        expected = {ActionKind.PASS: 0, ActionKind.SUMMON: 1}.get(kind, 2)
        if len(nums) != expected:
            raise ValueError(f"bad action {text!r}")
        return cls(kind, *nums)


PASS = Action(ActionKind.PASS)


class Creature:
    __slots__ = ("instance_id", "card_id", "attack", "defense", "keywords",
                 "can_attack", "has_attacked")

    def __init__(self, instance_id: int, card_id: int, attack: int, defense: int,
                 keywords: int, can_attack: bool = False, has_attacked: bool = False):
        self.instance_id = instance_id
        self.card_id = card_id
        self.attack = attack
        self.defense = defense
        self.keywords = keywords
        self.can_attack = can_attack
        self.has_attacked = has_attacked

    def copy(self) -> Creature:
        c = Creature.__new__(Creature)
        c.instance_id = self.instance_id
        c.card_id = self.card_id
        c.attack = self.attack
        c.defense = self.defense
        c.keywords = self.keywords
        c.can_attack = self.can_attack
        c.has_attacked = self.has_attacked
        return c

    @property
    def ready(self) -> bool:
        return self.can_attack and not self.has_attacked

    def key(self) -> tuple:
        return (self.instance_id, self.card_id, self.attack, self.defense, self.keywords,
                self.can_attack, self.has_attacked)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Creature) and self.key() == other.key()

    def __repr__(self) -> str:
        return (f"Creature(#{self.instance_id} card={self.card_id} {self.attack}/{self.defense} "
                f"kw={self.keywords:06b} ready={self.ready})")


class PlayerState:
    """One player's zones and counters.

    ``deck`` and ``hand`` hold :class:`Card` objects; in a :class:`PlayerView`
    hidden entries are ``None`` so only their counts remain observable.
    """

    __slots__ = ("health", "max_mana", "mana", "deck", "hand", "board", "next_rune",
                 "draws", "played", "burned")

    def __init__(self, deck: list):
        self.health = START_HEALTH
        self.max_mana = 0
        self.mana = 0
        self.deck = deck
        self.hand: list = []
        self.board: list[Creature] = []
        self.next_rune = FIRST_RUNE
        self.draws = 1
        self.played = 0
        self.burned = 0

    def copy(self) -> PlayerState:
        p = PlayerState.__new__(PlayerState)
        p.health = self.health
        p.max_mana = self.max_mana
        p.mana = self.mana
        p.deck = self.deck[:]
        p.hand = self.hand[:]
        p.board = [c.copy() for c in self.board]
        p.next_rune = self.next_rune
        p.draws = self.draws
        p.played = self.played
        p.burned = self.burned
        return p

    # short aliases
    @property
    def current_mana(self) -> int:
        return self.mana

    @property
    def draws_next_turn(self) -> int:
        return self.draws

    @property
    def deck_size(self) -> int:
        return len(self.deck)

    def creature(self, instance_id: int) -> Creature | None:
        for c in self.board:
            if c.instance_id == instance_id:
                return c
        return None

    def has_guard(self) -> bool:
        for c in self.board:
            if c.keywords & GUARD:
                return True
        return False

    def key(self) -> tuple:
        return (self.health, self.max_mana, self.mana, self.next_rune, self.draws,
                self.played, self.burned,
                tuple(-1 if c is None else c.id for c in self.deck),
                tuple(-1 if c is None else c.id for c in self.hand),
                tuple(c.key() for c in self.board))


class GameState:
    __slots__ = ("players", "turn_number", "active_player", "rng_seed", "outcome",
                 "next_instance", "pending_start")

    def __init__(self, players: list[PlayerState], rng_seed: int):
        self.players = players
        self.turn_number = 0
        self.active_player = 0
        self.rng_seed = rng_seed
        self.outcome: Outcome | None = None
        self.next_instance = 1
        self.pending_start = True

    def copy(self) -> GameState:
        s = GameState.__new__(GameState)
        s.players = [self.players[0].copy(), self.players[1].copy()]
        s.turn_number = self.turn_number
        s.active_player = self.active_player
        s.rng_seed = self.rng_seed
        s.outcome = self.outcome
        s.next_instance = self.next_instance
        s.pending_start = self.pending_start
        return s

    @property
    def finished(self) -> bool:
        return self.outcome is not None

    @property
    def active(self) -> PlayerState:
        return self.players[self.active_player]

    def key(self) -> tuple:
        return (self.turn_number, self.active_player, self.rng_seed,
                -1 if self.outcome is None else int(self.outcome), self.next_instance,
                self.pending_start, self.players[0].key(), self.players[1].key())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GameState) and self.key() == other.key()


def state_hash(state: GameState) -> int:
    """Stable 64-bit digest of the full state."""
    data = repr(state.key()).encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


class PlayerView:
    """What one player may observe: the state with the opponent's hand and
    both deck orderings replaced by ``None`` placeholders."""

    __slots__ = ("state", "player")

    def __init__(self, state: GameState, player: int):
        self.state = state
        self.player = player

    @property
    def which_player(self) -> int:
        return self.player

    @property
    def own(self) -> PlayerState:
        return self.state.players[self.player]

    @property
    def opponent(self) -> PlayerState:
        return self.state.players[1 - self.player]

    @property
    def turn_number(self) -> int:
        return self.state.turn_number


def view_of(state: GameState, player: int) -> PlayerView:
    s = state.copy()
    opp = s.players[1 - player]
    opp.hand = [None] * len(opp.hand)
    opp.deck = [None] * len(opp.deck)
    own = s.players[player]
    own.deck = [None] * len(own.deck)
    return PlayerView(s, player)


# ---------------------------------------------------------------- setup

def init_battle(deck0: Sequence[int], deck1: Sequence[int], shuffle_seed: int,
                cards: CardSet) -> GameState:
    """Shuffle both decks and deal opening hands; the first turn is pending."""
    decks = []
    for deck in (deck0, deck1):
        if len(deck) != DECK_SIZE:
            raise RulesError(f"deck must have {DECK_SIZE} cards, got {len(deck)}")
        try:
            decks.append([cards[cid] for cid in deck])
        except KeyError as exc:
            raise RulesError(f"unknown card id {exc.args[0]}") from None
    rng = random.Random(shuffle_seed)
    for deck in decks:
        rng.shuffle(deck)
    state = GameState([PlayerState(decks[0]), PlayerState(decks[1])], shuffle_seed)
    for p, n in zip(state.players, OPENING_HAND):
        p.hand = p.deck[:n]
        del p.deck[:n]
    return state


def begin(state: GameState) -> GameState:
    """Resolve the pending start of the first turn."""
    if not state.pending_start:
        raise RulesError("game already started")
    s = state.copy()
    s.pending_start = False
    s.turn_number = 1
    _start_turn(s)
    return s


# ---------------------------------------------------------------- legality

def _require_live(state: GameState) -> None:
    if state.outcome is not None:
        raise RulesError("game is finished")
    if state.pending_start:
        raise RulesError("first turn has not begun")


def legal_actions(state: GameState) -> list[Action]:
    """All applicable actions, in a fixed order; PASS is always last."""
    _require_live(state)
    me = state.players[state.active_player]
    opp = state.players[1 - state.active_player]
    mana = me.mana
    board_free = len(me.board) < BOARD_LIMIT
    actions: list[Action] = []
    for i, card in enumerate(me.hand):
        if card.cost > mana:
            continue
        kind = card.kind
        if kind is CardKind.CREATURE:
            if board_free:
                actions.append(Action(ActionKind.SUMMON, i, FACE))
        elif kind is CardKind.GREEN_ITEM:
            for c in me.board:
                actions.append(Action(ActionKind.USE, i, c.instance_id))
        elif kind is CardKind.RED_ITEM:
            for c in opp.board:
                actions.append(Action(ActionKind.USE, i, c.instance_id))
        else:
            for c in opp.board:
                actions.append(Action(ActionKind.USE, i, c.instance_id))
            actions.append(Action(ActionKind.USE, i, FACE))
    guards = [c.instance_id for c in opp.board if c.keywords & GUARD]
    targets = guards if guards else [FACE] + [c.instance_id for c in opp.board]
    for c in me.board:
        if c.can_attack and not c.has_attacked:
            for t in targets:
                actions.append(Action(ActionKind.ATTACK, c.instance_id, t))
    actions.append(PASS)
    return actions


def _validate(state: GameState, action: Action) -> None:
    """Raise IllegalActionError unless ``action`` is applicable; independent of
    :func:`legal_actions` so the two can cross-check each other."""
    me = state.players[state.active_player]
    opp = state.players[1 - state.active_player]
    kind = action.kind
    if kind == ActionKind.PASS:
        return
    if kind in (ActionKind.SUMMON, ActionKind.USE):
        if not 0 <= action.index < len(me.hand):
            raise IllegalActionError(f"{action}: no such hand index")
        card = me.hand[action.index]
        if card.cost > me.mana:
            raise IllegalActionError(f"{action}: not enough mana")
        if kind == ActionKind.SUMMON:
            if card.kind is not CardKind.CREATURE:
                raise IllegalActionError(f"{action}: not a creature")
            if len(me.board) >= BOARD_LIMIT or action.target != FACE:
                raise IllegalActionError(f"{action}: cannot summon")
            return
        if card.kind is CardKind.CREATURE:
            raise IllegalActionError(f"{action}: not an item")
        if card.kind is CardKind.GREEN_ITEM:
            ok = me.creature(action.target) is not None
        elif card.kind is CardKind.RED_ITEM:
            ok = opp.creature(action.target) is not None
        else:
            ok = action.target == FACE or opp.creature(action.target) is not None
        if not ok:
            raise IllegalActionError(f"{action}: bad item target")
        return
    if kind == ActionKind.ATTACK:
        attacker = me.creature(action.index)
        if attacker is None or not attacker.ready:
            raise IllegalActionError(f"{action}: attacker cannot attack")
        if action.target == FACE:
            if opp.has_guard():
                raise IllegalActionError(f"{action}: guard blocks the face")
            return
        defender = opp.creature(action.target)
        if defender is None:
            raise IllegalActionError(f"{action}: no such defender")
        if not defender.keywords & GUARD and opp.has_guard():
            raise IllegalActionError(f"{action}: must attack a guard")
        return
    raise IllegalActionError(f"unknown action {action!r}")


def is_legal(state: GameState, action: Action) -> bool:
    try:
        _require_live(state)
        _validate(state, action)
    except RulesError:
        return False
    return True


# ---------------------------------------------------------------- transitions

def apply_action(state: GameState, action: Action) -> GameState:
    """Return the state after ``action``; raises on illegal actions."""
    _require_live(state)
    _validate(state, action)
    s = state.copy()
    apply_in_place(s, action)
    return s


def apply_in_place(s: GameState, action: Action) -> None:
    """Apply an already-validated action to ``s``, mutating it."""
    kind = action.kind
    if kind == ActionKind.PASS:
        _end_turn(s)
        return
    me = s.players[s.active_player]
    opp = s.players[1 - s.active_player]
    if kind == ActionKind.ATTACK:
        _attack(me, opp, me.creature(action.index), action.target)
    else:
        card = me.hand.pop(action.index)
        me.mana -= card.cost
        me.played += 1
        if kind == ActionKind.SUMMON:
            me.board.append(Creature(s.next_instance, card.id, card.attack, card.defense,
                                     card.keywords, bool(card.keywords & CHARGE)))
            s.next_instance += 1
        else:
            _use_item(me, opp, card, action.target)
        me.health += card.player_hp_delta
        opp.health += card.enemy_hp_delta
        me.draws += card.card_draw
    _cleanup(s)


def _damage_creature(c: Creature, amount: int, lethal: bool) -> int:
    """Deal ``amount`` to ``c``; returns damage actually dealt (0 if warded)."""
    if amount <= 0:
        return 0
    if c.keywords & WARD:
        c.keywords &= ~WARD
        return 0
    c.defense -= amount
    if lethal and c.defense > 0:
        c.defense = 0
    return amount


def _attack(me: PlayerState, opp: PlayerState, attacker: Creature, target: int) -> None:
    attacker.has_attacked = True
    kw = attacker.keywords
    if target == FACE:
        dealt = attacker.attack
        opp.health -= dealt
    else:
        defender = opp.creature(target)
        before = defender.defense
        dealt = _damage_creature(defender, attacker.attack, bool(kw & LETHAL))
        _damage_creature(attacker, defender.attack, bool(defender.keywords & LETHAL))
        if kw & BREAKTHROUGH and dealt > 0 and defender.defense <= 0 and dealt > before:
            opp.health -= dealt - before
    if kw & DRAIN and dealt > 0:
        me.health += dealt


def _use_item(me: PlayerState, opp: PlayerState, card: Card, target: int) -> None:
    if card.kind is CardKind.GREEN_ITEM:
        c = me.creature(target)
        c.attack += card.attack
        c.defense += card.defense
        c.keywords |= card.keywords
        if card.keywords & CHARGE and not c.has_attacked:
            c.can_attack = True
        return
    if target == FACE:
        if card.defense < 0:
            opp.health += card.defense
        return
    c = opp.creature(target)
    c.keywords &= ~card.keywords
    if card.attack < 0:
        c.attack = max(0, c.attack + card.attack)
    if card.defense < 0:
        _damage_creature(c, -card.defense, False)


def _resolve_runes(p: PlayerState) -> None:
    while p.next_rune > 0 and p.health < p.next_rune:
        p.next_rune -= RUNE_STEP
        p.draws += 1


def _cleanup(s: GameState) -> None:
    for p in s.players:
        if any(c.defense <= 0 for c in p.board):
            p.board = [c for c in p.board if c.defense > 0]
        _resolve_runes(p)
    _check_health(s)


def _check_health(s: GameState) -> None:
    dead0 = s.players[0].health <= 0
    dead1 = s.players[1].health <= 0
    if dead0 and dead1:
        s.outcome = Outcome(s.active_player)
    elif dead0:
        s.outcome = Outcome.P1_WIN
    elif dead1:
        s.outcome = Outcome.P0_WIN


def _end_turn(s: GameState) -> None:
    if s.turn_number >= 2 * TURN_LIMIT:
        h0, h1 = s.players[0].health, s.players[1].health
        s.outcome = Outcome.P0_WIN if h0 > h1 else Outcome.P1_WIN if h1 > h0 else Outcome.TIE
        return
    s.turn_number += 1
    s.active_player = 1 - s.active_player
    _start_turn(s)


def _start_turn(s: GameState) -> None:
    p = s.players[s.active_player]
    p.max_mana = min(MAX_MANA, p.max_mana + 1)
    p.mana = p.max_mana
    n, p.draws = p.draws, 1
    fatigue = 0
    for _ in range(n):
        if not p.deck:
            fatigue += 1
        elif len(p.hand) >= HAND_LIMIT:
            p.deck.pop(0)
            p.burned += 1
        else:
            p.hand.append(p.deck.pop(0))
    for c in p.board:
        c.can_attack = True
        c.has_attacked = False
    if fatigue:
        p.health -= fatigue
        _resolve_runes(p)
        _check_health(s)
