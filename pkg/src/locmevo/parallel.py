"""Running batches of independent seeded games, optionally in worker processes.

A job is ``(agent_a, agent_b, draft_index, shuffle_seed)`` with agent indices
into a shared agent list. Results come back in job order, so the worker count
can never change what callers compute.
"""

from __future__ import annotations

import multiprocessing as mp
from typing import Sequence

from .cards import CardSet, default_cardset
from .engine.draft import DraftSequence
from .engine.match import play_match
from .evaluator.text import serialize_genome

Job = tuple[int, int, int, int]

_CTX: dict = {}

# Games actually simulated by run_jobs in this process (after de-duplication).
games_played = 0


def agent_key(agent) -> str:
    """Identity used to share results between behaviourally identical agents."""
    genome = getattr(agent, "genome", None)
    if genome is not None:
        return "genome " + serialize_genome(genome)
    return getattr(agent, "label", None) or f"{type(agent).__name__}@{id(agent)}"


def _init(agents, drafts, cards) -> None:
    _CTX.update(agents=agents, drafts=drafts, cards=cards)


def _play(job: Job) -> float:
    a, b, d, seed = job
    agents = _CTX["agents"]
    result = play_match(agents[a], agents[b], _CTX["drafts"][d], seed, _CTX["cards"],
                        record=False)
    return result.score(0)


def run_jobs(agents: Sequence, drafts: Sequence[DraftSequence], jobs: Sequence[Job],
             workers: int = 1, cards: CardSet | None = None,
             dedup: bool = False) -> list[float]:
    """Player-0 scores (1, 0.5 or 0) for every job, in job order.

    With ``dedup``, jobs that are identical up to agent identity (see
    :func:`agent_key`) are played once.
    """
    global games_played
    cards = cards or default_cardset()
    keys = [agent_key(a) for a in agents] if dedup else list(range(len(agents)))
    unique: dict[tuple, int] = {}
    plan: list[int] = []
    todo: list[Job] = []
    for n, (a, b, d, seed) in enumerate(jobs):
        k = (keys[a], keys[b], d, seed) if dedup else n
        if k not in unique:
            unique[k] = len(todo)
            todo.append((a, b, d, seed))
        plan.append(unique[k])
    if workers <= 1 or len(todo) < 2:
        _init(list(agents), list(drafts), cards)
        try:
            scores = [_play(job) for job in todo]
        finally:
            _CTX.clear()
    else:
        ctx = mp.get_context("fork")
        chunk = max(1, len(todo) // (workers * 8))
        with ctx.Pool(workers, initializer=_init, initargs=(list(agents), list(drafts), cards)) as pool:
            scores = pool.map(_play, todo, chunksize=chunk)
    games_played += len(todo)
    return [scores[i] for i in plan]
