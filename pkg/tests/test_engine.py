import random

import pytest

from conftest import card, creature, make_state
from locmevo.agents import RandomAgent
from locmevo.cards import CardKind, GUARD, WARD, load_cardset
from locmevo.engine import (
    FACE, PASS, Action, ActionKind, ContractError, IllegalActionError, Outcome, RulesError,
    apply_action, begin, draft_deck, generate_draft, init_battle, is_legal, legal_actions,
    play_match, replay, state_hash, view_of,
)
from locmevo.engine.rules import TURN_LIMIT


# ---------------------------------------------------------------- draft

def test_draft_deterministic(cards):
    assert generate_draft(7, cards) == generate_draft(7, cards)
    assert generate_draft(1, cards).triples != generate_draft(2, cards).triples


def test_draft_triples_distinct(cards):
    for t in generate_draft(3, cards).triples:
        assert len(set(t)) == 3


def test_draft_three_cards():
    cs = load_cardset("\n".join(
        f"{i} ; C{i} ; creature ; 1 ; 1 ; 1 ; ------ ; 0 ; 0 ; 0" for i in (1, 2, 3)))
    for t in generate_draft(11, cs).triples:
        assert sorted(t) == [1, 2, 3]


def test_draft_deck_picks(cards):
    d = generate_draft(5, cards)
    assert draft_deck(d, lambda offer: 0, cards) == [t[0] for t in d.triples]
    assert draft_deck(d, lambda offer: 2, cards) == [t[2] for t in d.triples]
    with pytest.raises(ContractError):
        draft_deck(d, lambda offer: 3, cards)


# ---------------------------------------------------------------- setup

def test_init_battle(cards):
    deck = cards.ids[:30]
    s = init_battle(deck, deck, 42, cards)
    assert len(s.players[0].hand) == 4 and len(s.players[1].hand) == 5
    assert [p.health for p in s.players] == [30, 30]
    assert [p.max_mana for p in s.players] == [0, 0]
    assert s.pending_start and s.turn_number == 0
    assert init_battle(deck, deck, 42, cards) == s
    with pytest.raises(RulesError):
        legal_actions(s)


def test_init_battle_errors(cards):
    with pytest.raises(RulesError):
        init_battle(cards.ids[:29], cards.ids[:30], 1, cards)
    with pytest.raises(RulesError, match="unknown card"):
        init_battle([10_000] * 30, cards.ids[:30], 1, cards)


def test_begin_draws_and_mana(cards):
    s = begin(init_battle(cards.ids[:30], cards.ids[:30], 1, cards))
    p = s.players[0]
    assert s.turn_number == 1 and s.active_player == 0
    assert p.max_mana == p.mana == 1
    assert len(p.hand) == 5 and len(p.deck) == 25


# ---------------------------------------------------------------- legality

def test_only_pass():
    assert legal_actions(make_state()) == [PASS]


def test_guard_restricts_targets():
    s = make_state(board0=[creature(1, 2, 2)],
                   board1=[creature(2, 1, 1, "---G--"), creature(3, 1, 1)])
    attacks = [a for a in legal_actions(s) if a.kind == ActionKind.ATTACK]
    assert {a.target for a in attacks} == {2}
    # brute-force the targeting rule against the validator
    for t in (FACE, 2, 3):
        assert is_legal(s, Action.attack(1, t)) == (t == 2)


def test_summoning_sickness_and_charge():
    hand = [card(1, attack=2, defense=2), card(2, attack=2, defense=2, kw="-C----")]
    s = make_state(hand0=hand, mana=2)
    plain = apply_action(s, Action.summon(0))
    assert not [a for a in legal_actions(plain) if a.kind == ActionKind.ATTACK]
    charged = apply_action(s, Action.summon(1))
    assert [a for a in legal_actions(charged) if a.kind == ActionKind.ATTACK]


def test_summon_needs_mana_and_space():
    s = make_state(hand0=[card(1, cost=3)], mana=2)
    assert legal_actions(s) == [PASS]
    full = make_state(board0=[creature(i, 1, 1, ready=False) for i in range(1, 7)],
                      hand0=[card(1, cost=0)], mana=5)
    assert legal_actions(full) == [PASS]


def test_item_targets():
    own, enemy = creature(1, 1, 1, ready=False), creature(2, 1, 1)
    hand = [card(10, CardKind.GREEN_ITEM, 0, 1, 1), card(11, CardKind.RED_ITEM, 0, 0, -1),
            card(12, CardKind.BLUE_ITEM, 0, 0, -1)]
    s = make_state(board0=[own], board1=[enemy], hand0=hand, mana=3)
    uses = {(a.index, a.target) for a in legal_actions(s) if a.kind == ActionKind.USE}
    assert uses == {(0, 1), (1, 2), (2, 2), (2, FACE)}


def test_illegal_action_raises():
    s = make_state(board0=[creature(1, 1, 1)])
    with pytest.raises(IllegalActionError):
        apply_action(s, Action.attack(5, FACE))
    with pytest.raises(IllegalActionError):
        apply_action(s, Action.summon(0))


def test_finished_game_rejects_queries():
    s = make_state()
    s.outcome = Outcome.P0_WIN
    with pytest.raises(RulesError):
        legal_actions(s)
    with pytest.raises(RulesError):
        apply_action(s, PASS)


# ---------------------------------------------------------------- combat

def test_trade_both_die():
    s = make_state(board0=[creature(1, 3, 2)], board1=[creature(2, 2, 3)])
    t = apply_action(s, Action.attack(1, 2))
    assert t.players[0].board == [] and t.players[1].board == []
    assert t.players[1].health == 30


def test_lethal_kills():
    s = make_state(board0=[creature(1, 1, 5, "----L-")], board1=[creature(2, 1, 6)])
    t = apply_action(s, Action.attack(1, 2))
    assert t.players[1].board == []
    assert t.players[0].board[0].defense == 4


def test_ward_absorbs():
    s = make_state(board0=[creature(1, 5, 5)], board1=[creature(2, 1, 4, "-----W")])
    t = apply_action(s, Action.attack(1, 2))
    d = t.players[1].board[0]
    assert d.defense == 4 and not d.keywords & WARD
    assert t.players[0].board[0].defense == 4


def test_ward_before_lethal():
    s = make_state(board0=[creature(1, 1, 5, "----L-")], board1=[creature(2, 0, 3, "-----W")])
    t = apply_action(s, Action.attack(1, 2))
    assert t.players[1].board[0].defense == 3


def test_breakthrough_and_drain():
    s = make_state(board0=[creature(1, 5, 5, "B-D---")], board1=[creature(2, 0, 2)])
    s.players[0].health = 20
    t = apply_action(s, Action.attack(1, 2))
    assert t.players[1].health == 27
    assert t.players[0].health == 25
    face = apply_action(make_state(board0=[creature(1, 4, 1, "--D---")]), Action.attack(1, FACE))
    assert face.players[1].health == 26 and face.players[0].health == 34


def test_green_item_buffs():
    s = make_state(board0=[creature(1, 1, 1, ready=False)],
                   hand0=[card(10, CardKind.GREEN_ITEM, 1, 2, 3, "-C-G--")], mana=1)
    t = apply_action(s, Action.use(0, 1))
    c = t.players[0].board[0]
    assert (c.attack, c.defense) == (3, 4)
    assert c.keywords & GUARD and c.ready
    assert t.players[0].mana == 0


def test_red_and_blue_items():
    enemy = creature(2, 2, 5, "---G-W")
    s = make_state(board1=[enemy], mana=5,
                   hand0=[card(11, CardKind.RED_ITEM, 1, -3, 0, "---G-W"),
                          card(12, CardKind.BLUE_ITEM, 1, 0, -2, ehp=-1)])
    t = apply_action(s, Action.use(0, 2))
    c = t.players[1].board[0]
    assert c.keywords == 0 and c.attack == 0 and c.defense == 5
    u = apply_action(t, Action.use(0, FACE))
    assert u.players[1].health == 27


def test_runes_grant_draws():
    s = make_state(board0=[creature(1, 11, 1)])
    t = apply_action(s, Action.attack(1, FACE))
    opp = t.players[1]
    assert opp.health == 19
    assert opp.next_rune == 15 and opp.draws == 3


def test_fatigue_and_win():
    s = make_state(deck=0)
    s.players[1].health = 1
    t = apply_action(s, PASS)
    assert t.outcome == Outcome.P0_WIN


def test_turn_limit_tie_break():
    s = make_state()
    s.turn_number = 2 * TURN_LIMIT
    s.active_player = 1
    assert apply_action(s, PASS).outcome == Outcome.TIE
    s.players[0].health = 29
    assert apply_action(s, PASS).outcome == Outcome.P1_WIN


def test_hand_overflow_burns():
    s = make_state(hand0=[card(1, cost=12)] * 8, active=1)
    s.players[0].hand = [card(1, cost=12)] * 8
    t = apply_action(s, PASS)
    assert len(t.players[0].hand) == 8 and t.players[0].burned == 1


# ---------------------------------------------------------------- hashing and views

def test_state_hash():
    s = make_state(board0=[creature(1, 2, 2)])
    assert state_hash(s) == state_hash(s.copy())
    t = s.copy()
    t.players[0].board[0].defense = 3
    assert state_hash(s) != state_hash(t)


def test_hash_collisions_sampled(cards):
    rng = random.Random(0)
    seen = {}
    for n in range(300):
        s = make_state(board0=[creature(1, rng.randint(0, 9), rng.randint(1, 9))],
                       board1=[creature(2, rng.randint(0, 9), rng.randint(1, 9))])
        seen.setdefault(state_hash(s), s.key())
        assert seen[state_hash(s)] == s.key()


def test_view_hides_private_zones(cards):
    s = begin(init_battle(cards.ids[:30], cards.ids[30:60], 3, cards))
    v = view_of(s, 0)
    assert all(c is None for c in v.opponent.hand)
    assert all(c is None for c in v.opponent.deck + v.own.deck)
    assert v.own.hand == s.players[0].hand
    assert len(v.opponent.hand) == len(s.players[1].hand)


# ---------------------------------------------------------------- matches

def test_match_deterministic_and_replayable(cards):
    d = generate_draft(9, cards)
    a = play_match(RandomAgent(1), RandomAgent(2), d, 77, cards)
    b = play_match(RandomAgent(1), RandomAgent(2), d, 77, cards)
    assert a.transcript_text() == b.transcript_text()
    assert replay(a, cards) == [e.state_hash for e in a.transcript]
    assert a.transcript[0].action == "BEGIN"


class _Cheater:
    label = "cheater"

    def pick(self, offer):
        return 0

    def act(self, view):
        return Action.attack(12345, FACE)


def test_illegal_action_forfeits(cards):
    d = generate_draft(1, cards)
    r = play_match(_Cheater(), RandomAgent(0), d, 5, cards)
    assert r.winner == 1 and r.forfeit == 0
    assert r.transcript[-1].action.startswith("FORFEIT")
    r = play_match(RandomAgent(0), _Cheater(), d, 5, cards)
    assert r.winner == 0 and r.forfeit == 1


def test_bad_pick_forfeits(cards):
    class BadPick(_Cheater):
        def pick(self, offer):
            return 7

    r = play_match(RandomAgent(0), BadPick(), generate_draft(1, cards), 5, cards)
    assert r.winner == 0 and r.forfeit == 1


def test_action_text_round_trip():
    for a in (PASS, Action.summon(3), Action.use(1, FACE), Action.attack(4, 9)):
        assert Action.parse(str(a)) == a
    with pytest.raises(ValueError):
        Action.parse("SUMMON")
