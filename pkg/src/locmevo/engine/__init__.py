"""Deterministic LoCM-style card game engine."""

from .draft import DRAFT_TURNS, ContractError, DraftSequence, draft_deck, generate_draft
from .match import Agent, AgentFailure, MatchResult, TranscriptEntry, play_match, replay
from .rules import (
    BOARD_LIMIT, DECK_SIZE, FACE, HAND_LIMIT, MAX_MANA, PASS, START_HEALTH, TURN_LIMIT,
    Action, ActionKind, Creature, GameState, IllegalActionError, Outcome, PlayerState,
    PlayerView, RulesError, apply_action, apply_in_place, begin, init_battle, is_legal,
    legal_actions, state_hash, view_of,
)

__all__ = [
    "BOARD_LIMIT", "DECK_SIZE", "DRAFT_TURNS", "FACE", "HAND_LIMIT", "MAX_MANA", "PASS",
    "START_HEALTH", "TURN_LIMIT", "Action", "ActionKind", "Agent", "AgentFailure",
    "ContractError", "Creature", "DraftSequence", "GameState", "IllegalActionError",
    "MatchResult", "Outcome", "PlayerState", "PlayerView", "RulesError", "TranscriptEntry",
    "apply_action", "apply_in_place", "begin", "draft_deck", "generate_draft", "init_battle",
    "is_legal", "legal_actions", "play_match", "replay", "state_hash", "view_of",
]
