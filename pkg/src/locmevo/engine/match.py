"""Running complete matches (draft + battle) between two agents."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

from ..cards import Card, CardSet, default_cardset
from .draft import ContractError, DraftSequence, draft_deck
from .rules import (
    Action, GameState, Outcome, RulesError, apply_action, apply_in_place, begin, init_battle,
    is_legal, state_hash, view_of, PlayerView,
)

# Agents never need this many actions; hitting it means a broken agent loop.
MAX_ACTIONS = 20_000


class Agent(Protocol):
    def pick(self, offer: Sequence[Card]) -> int: ...

    def act(self, view: PlayerView) -> Action: ...


class AgentFailure(Exception):
    """Raised by an agent that cannot produce a decision (e.g. degenerate genome).

    The match treats it as a forfeit by that agent.
    """


@dataclass(frozen=True)
class TranscriptEntry:
    turn: int
    player: int
    action: str
    state_hash: int

    def line(self) -> str:
        return f"{self.turn};{self.player};{self.action};{self.state_hash:016x}"


@dataclass
class MatchResult:
    outcome: Outcome
    turns: int
    decks: tuple[list[int], list[int]]
    shuffle_seed: int
    transcript: list[TranscriptEntry] = field(default_factory=list)
    forfeit: int | None = None

    @property
    def winner(self) -> int | None:
        """0 or 1, or None for a tie."""
        return None if self.outcome == Outcome.TIE else int(self.outcome)

    def score(self, player: int) -> float:
        if self.outcome == Outcome.TIE:
            return 0.5
        return 1.0 if int(self.outcome) == player else 0.0

    def transcript_text(self) -> str:
        return "".join(e.line() + "\n" for e in self.transcript)


def _forfeit(player: int) -> Outcome:
    return Outcome(1 - player)


def play_match(agent0: Agent, agent1: Agent, draft: DraftSequence, shuffle_seed: int,
               cards: CardSet | None = None, record: bool = True) -> MatchResult:
    """Draft both decks from ``draft`` and play the battle to completion.

    An agent that returns an illegal action, picks out of range, or raises
    :class:`AgentFailure` forfeits. With ``record`` the transcript carries a
    state hash after every action.
    """
    cards = cards or default_cardset()
    agents = (agent0, agent1)
    log: list[TranscriptEntry] = []
    decks = []
    for p, agent in enumerate(agents):
        try:
            decks.append(draft_deck(draft, agent.pick, cards))
        except (ContractError, AgentFailure) as exc:
            log.append(TranscriptEntry(0, p, f"FORFEIT draft: {exc}", 0))
            return MatchResult(_forfeit(p), 0, (decks + [[], []])[:2], shuffle_seed, log, p)

    state = begin(init_battle(decks[0], decks[1], shuffle_seed, cards))
    if record:
        log.append(TranscriptEntry(0, -1, "BEGIN", state_hash(state)))
    steps = 0
    while state.outcome is None:
        p = state.active_player
        try:
            action = agents[p].act(view_of(state, p))
            if not is_legal(state, action):
                raise ContractError(f"illegal action {action}")
        except (ContractError, AgentFailure) as exc:
            log.append(TranscriptEntry(state.turn_number, p, f"FORFEIT {exc}",
                                       state_hash(state)))
            return MatchResult(_forfeit(p), state.turn_number, tuple(decks), shuffle_seed, log, p)
        turn = state.turn_number
        apply_in_place(state, action)
        if record:
            log.append(TranscriptEntry(turn, p, str(action), state_hash(state)))
        steps += 1
        if steps > MAX_ACTIONS:
            raise RulesError("match exceeded the action bound")
    return MatchResult(state.outcome, state.turn_number, tuple(decks), shuffle_seed, log)


def replay(result: MatchResult, cards: CardSet | None = None) -> list[int]:
    """Re-apply a recorded transcript and return the recomputed state hashes."""
    cards = cards or default_cardset()
    state: GameState = begin(init_battle(result.decks[0], result.decks[1],
                                         result.shuffle_seed, cards))
    hashes = []
    for entry in result.transcript:
        if entry.action == "BEGIN":
            hashes.append(state_hash(state))
        elif entry.action.startswith("FORFEIT"):
            hashes.append(state_hash(state))
        else:
            state = apply_action(state, Action.parse(entry.action))
            hashes.append(state_hash(state))
    return hashes
