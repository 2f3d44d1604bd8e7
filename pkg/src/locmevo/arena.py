"""Tournament and self-play analysis: win matrices, heatmaps, progress curves."""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .agents import GenomeAgent
from .cards import CardSet, default_cardset
from .engine.draft import generate_draft
from .parallel import run_jobs
from .seeding import derive_seed


@dataclass(frozen=True)
class PairStat:
    mean: float
    std: float
    games: int


@dataclass
class WinMatrix:
    """Pairwise statistics; ``cells[(i, j)]`` describes agent i against agent j."""

    labels: list[str]
    cells: dict[tuple[int, int], PairStat]
    global_avg: list[float]
    global_std: list[float]

    def mean(self, i: int, j: int) -> float:
        return self.cells[(i, j)].mean


@dataclass
class HeatmapGrid:
    generations: list[int]
    values: list[list[float]]

    def lower_left_mean(self) -> float:
        """Mean over cells where the row generation is later than the column."""
        vals = [self.values[y][x] for y in range(len(self.values)) for x in range(y)]
        return sum(vals) / len(vals) if vals else 0.5

    def upper_right_mean(self) -> float:
        n = len(self.values)
        vals = [self.values[y][x] for y in range(n) for x in range(y + 1, n)]
        return sum(vals) / len(vals) if vals else 0.5


@dataclass
class ProgressCurve:
    generations: list[int]
    values: list[float]

    def improvement(self) -> float:
        """Last value minus first value."""
        return self.values[-1] - self.values[0]


@dataclass
class CumulativeTable:
    labels: list[str]
    rows: list[list[float]]  # rows[r][i]: agent i's win rate after round r + 1


# ---------------------------------------------------------------- games

def _tournament_scores(agents: Sequence, drafts: int, rounds: int, seed: int, workers: int,
                       cards: CardSet | None) -> dict[tuple[int, int, int, int], float]:
    """Score of agent i against j for (i, j, draft, round), both sides summed
    (0, 0.5, 1, 1.5 or 2); only i < j is stored."""
    cards = cards or default_cardset()
    draft_list = [generate_draft(derive_seed(seed, "draft", d), cards) for d in range(drafts)]
    keys = []
    jobs = []
    n = len(agents)
    for i in range(n):
        for j in range(i + 1, n):
            for d in range(drafts):
                for r in range(rounds):
                    s = derive_seed(seed, "game", d, r)
                    keys.append((i, j, d, r))
                    jobs.append((i, j, d, s))
                    jobs.append((j, i, d, s))
    scores = run_jobs(agents, draft_list, jobs, workers, cards, dedup=True)
    return {k: scores[2 * n_] + (1.0 - scores[2 * n_ + 1]) for n_, k in enumerate(keys)}


def _check_labels(agents: Sequence, labels: Sequence[str] | None) -> list[str]:
    labels = list(labels) if labels is not None else [getattr(a, "label", str(a)) for a in agents]
    if len(labels) != len(agents):
        raise ValueError("one label per agent required")
    if len(set(labels)) != len(labels):
        raise ValueError("agent labels must be unique")
    if len(agents) < 2:
        raise ValueError("need at least two agents")
    return labels


def _matrix(labels: list[str], scores: dict, drafts: int, rounds: int,
            max_round: int | None = None) -> WinMatrix:
    n = len(labels)
    cells = {}
    total = [0.0] * n
    games = [0] * n
    per_opponent: list[list[float]] = [[] for _ in range(n)]
    used_rounds = rounds if max_round is None else max_round
    for i in range(n):
        for j in range(i + 1, n):
            per_draft = []
            pair_total = 0.0
            for d in range(drafts):
                s = sum(scores[(i, j, d, r)] for r in range(used_rounds))
                per_draft.append(s / (2 * used_rounds))
                pair_total += s
            pair_games = 2 * drafts * used_rounds
            mean = pair_total / pair_games
            std = statistics.pstdev(per_draft) if drafts > 1 else 0.0
            cells[(i, j)] = PairStat(mean, std, pair_games)
            cells[(j, i)] = PairStat(1.0 - mean, std, pair_games)
            total[i] += pair_total
            total[j] += pair_games - pair_total
            games[i] += pair_games
            games[j] += pair_games
            per_opponent[i].append(mean)
            per_opponent[j].append(1.0 - mean)
    avg = [total[i] / games[i] for i in range(n)]
    std = [statistics.pstdev(v) if len(v) > 1 else 0.0 for v in per_opponent]
    return WinMatrix(labels, cells, avg, std)


def round_robin(agents: Sequence, drafts: int, rounds: int, seed: int,
                labels: Sequence[str] | None = None, workers: int = 1,
                cards: CardSet | None = None) -> WinMatrix:
    """Every pair plays ``rounds`` games per draft per side on ``drafts`` shared
    drafts. Standard deviations are taken over per-draft win rates."""
    labels = _check_labels(agents, labels)
    scores = _tournament_scores(agents, drafts, rounds, seed, workers, cards)
    return _matrix(labels, scores, drafts, rounds)


def cumulative_rounds(agents: Sequence, drafts: int, total_rounds: int, seed: int,
                      labels: Sequence[str] | None = None, workers: int = 1,
                      cards: CardSet | None = None) -> CumulativeTable:
    """Each agent's global win rate after every tournament round."""
    labels = _check_labels(agents, labels)
    scores = _tournament_scores(agents, drafts, total_rounds, seed, workers, cards)
    rows = [_matrix(labels, scores, drafts, total_rounds, max_round=r).global_avg
            for r in range(1, total_rounds + 1)]
    return CumulativeTable(labels, rows)


def _best_agents(archives: Sequence) -> list[GenomeAgent]:
    if not archives:
        raise ValueError("no archives")
    return [GenomeAgent(a.best, label=f"gen_{a.generation}") for a in archives]


def heatmap(archives: Sequence, drafts: int, rounds: int, seed: int, workers: int = 1,
            cards: CardSet | None = None) -> HeatmapGrid:
    """Best-of-generation y against best-of-generation x; the diagonal is 0.5."""
    agents = _best_agents(archives)
    gens = [a.generation for a in archives]
    n = len(agents)
    if n == 1:
        return HeatmapGrid(gens, [[0.5]])
    m = round_robin(agents, drafts, rounds, seed, workers=workers, cards=cards)
    grid = [[0.5 if y == x else m.mean(y, x) for x in range(n)] for y in range(n)]
    return HeatmapGrid(gens, grid)


def progress_from_heatmap(grid: HeatmapGrid) -> ProgressCurve:
    return ProgressCurve(list(grid.generations), [sum(row) / len(row) for row in grid.values])


def progress_curve(archives: Sequence, drafts: int, rounds: int, seed: int, workers: int = 1,
                   cards: CardSet | None = None) -> ProgressCurve:
    """Row means of :func:`heatmap` (diagonal included)."""
    return progress_from_heatmap(heatmap(archives, drafts, rounds, seed, workers, cards))


# ---------------------------------------------------------------- CSV

def export_csv(result, path: str | Path, gnuplot: bool = False) -> None:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if isinstance(result, WinMatrix):
            w.writerow(["a", "b", "mean", "std", "games"])
            for (i, j), c in sorted(result.cells.items()):
                w.writerow([result.labels[i], result.labels[j], repr(c.mean), repr(c.std), c.games])
        elif isinstance(result, HeatmapGrid):
            if gnuplot:
                for row in result.values:
                    fh.write(" ".join(repr(v) for v in row) + "\n")
                return
            w.writerow(["generation"] + result.generations)
            for g, row in zip(result.generations, result.values):
                w.writerow([g] + [repr(v) for v in row])
        elif isinstance(result, ProgressCurve):
            w.writerow(["generation", "value"])
            for g, v in zip(result.generations, result.values):
                w.writerow([g, repr(v)])
        elif isinstance(result, CumulativeTable):
            w.writerow(["round", "agent", "value"])
            for r, row in enumerate(result.rows, 1):
                for label, v in zip(result.labels, row):
                    w.writerow([r, label, repr(v)])
        else:
            raise TypeError(f"cannot export {type(result).__name__}")


def read_heatmap_csv(path: str | Path) -> HeatmapGrid:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    gens = [int(g) for g in rows[0][1:]]
    return HeatmapGrid(gens, [[float(v) for v in row[1:]] for row in rows[1:]])
