"""Generational GA over evaluation-function genomes.

Fitness schemes:

* ``progressive`` - in-population round robin; every ordered pair plays
  ``rounds`` games on each of ``drafts`` drafts.
* ``fixed`` - every individual plays ``population * rounds`` games per draft
  per side against a fixed opponent (``weakop`` or ``genome:<path>``).
* ``best_of_previous`` - like ``fixed`` with the previous generation's best as
  opponent (a random agent for generation 0).

Every game seed is a function of (master seed, generation, draft, round), and
both sides of a pairing replay the same seed, so results are independent of
scheduling and identical players score exactly 0.5.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import random
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Sequence

from .agents import GenomeAgent, RandomAgent, parse_agent
from .cards import CardSet, default_cardset
from .engine.draft import DraftSequence, generate_draft
from .evaluator.genome import REPRESENTATIONS, Genome, GenomeParams, LinearGenome
from .evaluator.operators import crossover, mutate, random_genome, translate_linear
from .evaluator.text import parse_genome, serialize_genome
from .parallel import run_jobs
from .seeding import derive_rng, derive_seed

log = logging.getLogger(__name__)

SCHEMES = ("progressive", "fixed", "best_of_previous")
_SCHEME_ALIASES = {"weak-op": ("fixed", "weakop"), "progressive": ("progressive", None),
                   "fixed": ("fixed", None), "strong-op": ("fixed", None),
                   "best_of_previous": ("best_of_previous", None)}


class ConfigError(ValueError):
    pass


@dataclass
class EvolutionConfig:
    representation: str = "linear"
    scheme: str = "progressive"
    opponent: str = "weakop"
    generations: int = 50
    population: int = 50
    elitism: int = 5
    drafts: int = 10
    rounds: int = 10
    seed: int = 0
    init: str = "random"
    init_path: str | None = None
    n_mutations: int = 5
    crossover: bool = True
    tournament_size: int = 3
    resample_drafts: bool = False
    params: GenomeParams = field(default_factory=GenomeParams)

    def validate(self) -> None:
        if self.representation not in REPRESENTATIONS:
            raise ConfigError(f"representation must be one of {REPRESENTATIONS}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if self.generations < 1 or self.population < 1:
            raise ConfigError("generations and population must be at least 1")
        if not 0 <= self.elitism < self.population:
            raise ConfigError("elitism must be smaller than population")
        if self.drafts < 1 or self.rounds < 1:
            raise ConfigError("drafts and rounds must be at least 1")
        if self.scheme == "progressive" and self.population < 2:
            raise ConfigError("progressive fitness needs a population of at least 2")
        if self.init not in ("random", "from_linear"):
            raise ConfigError("init must be 'random' or 'from_linear'")
        if self.init == "from_linear":
            if not self.init_path:
                raise ConfigError("from_linear init needs init_path")
            if not Path(self.init_path).is_file():
                raise ConfigError(f"cannot read init_path {self.init_path!r}")
        if self.n_mutations < 0 or self.tournament_size < 1:
            raise ConfigError("n_mutations must be >= 0 and tournament_size >= 1")
        if self.scheme == "fixed":
            try:
                parse_agent(self.opponent)
            except (ValueError, OSError) as exc:
                raise ConfigError(f"bad opponent: {exc}") from None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {k: list(v) if isinstance(v, tuple) else v for k, v in d["params"].items()}
        return d

    @classmethod
    def from_dict(cls, data: dict) -> EvolutionConfig:
        """Build a config; genome-parameter keys may be nested under
        ``params`` or given at top level."""
        data = dict(data)
        param_names = {f.name for f in fields(GenomeParams)}
        params = dict(data.pop("params", {}) or {})
        for key in list(data):
            if key in param_names:
                params[key] = data.pop(key)
        scheme = data.get("scheme")
        if scheme in _SCHEME_ALIASES:
            data["scheme"], opp = _SCHEME_ALIASES[scheme]
            if opp and "opponent" not in data:
                data["opponent"] = opp
        own = {f.name: f for f in fields(cls)}
        unknown = set(data) - set(own)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kwargs = {k: _coerce(v, own[k].type) for k, v in data.items()}
        p = {k: tuple(v) if isinstance(v, list) else v for k, v in params.items()}
        try:
            return cls(params=GenomeParams(**p), **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


def _coerce(value, type_name):
    if not isinstance(value, str):
        return value
    t = str(type_name)
    if t == "int":
        return int(value)
    if t == "bool":
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"bad boolean {value!r}")
    if value.lower() in ("none", "null", ""):
        return None
    return value


def _parse_scalar(text: str):
    text = text.strip()
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if "," in text:
        return [_parse_scalar(t) for t in text.split(",")]
    return text


def parse_config_text(text: str) -> dict:
    """JSON object, or flat ``key = value`` lines (``#`` comments allowed)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return json.loads(stripped)
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        data[key.strip()] = _parse_scalar(value)
    return data


def load_config(path: str | Path, overrides: dict | None = None) -> EvolutionConfig:
    data = parse_config_text(Path(path).read_text(encoding="utf-8"))
    data.update(overrides or {})
    return EvolutionConfig.from_dict(data)


# ---------------------------------------------------------------- records

@dataclass
class FitnessRecord:
    genome_id: int
    wins: float
    games: int

    @property
    def win_rate(self) -> float:
        return self.wins / self.games if self.games else 0.0


@dataclass
class GenerationArchive:
    generation: int
    genomes: list
    fitness: list[FitnessRecord]
    draft_seeds: list[int]
    games_simulated: int

    @property
    def best_id(self) -> int:
        return best_index(self.fitness)

    @property
    def best(self) -> Genome:
        return self.genomes[self.best_id]


def best_index(records: Sequence[FitnessRecord]) -> int:
    return min(range(len(records)), key=lambda i: (-records[i].win_rate, i))


# ---------------------------------------------------------------- game counts

def games_per_individual(cfg: EvolutionConfig) -> int:
    if cfg.scheme == "progressive":
        return 2 * (cfg.population - 1) * cfg.drafts * cfg.rounds
    return 2 * cfg.drafts * cfg.population * cfg.rounds


def games_per_generation(cfg: EvolutionConfig) -> int:
    if cfg.scheme == "progressive":
        # each game is credited to both participants
        return cfg.population * games_per_individual(cfg) // 2
    return cfg.population * games_per_individual(cfg)


def count_games(cfg: EvolutionConfig) -> int:
    """Total games simulated by :func:`evolve` for ``cfg``."""
    return cfg.generations * games_per_generation(cfg)


# ---------------------------------------------------------------- fitness

def draft_seeds_for(cfg: EvolutionConfig, generation: int) -> list[int]:
    if cfg.resample_drafts:
        return [derive_seed(cfg.seed, "draft", generation, d) for d in range(cfg.drafts)]
    return [derive_seed(cfg.seed, "draft", d) for d in range(cfg.drafts)]


def _game_seed(master: int, generation: int, draft: int, rnd: int) -> int:
    return derive_seed(master, "game", generation, draft, rnd)


def fitness_progressive(pop: Sequence[Genome], drafts: Sequence[DraftSequence], rounds: int,
                        master: int, generation: int = 0, workers: int = 1,
                        cards: CardSet | None = None) -> list[FitnessRecord]:
    n = len(pop)
    if n < 2:
        raise ValueError("progressive fitness needs at least two individuals")
    agents = [GenomeAgent(g) for g in pop]
    jobs = []
    for i in range(n):
        for j in range(i + 1, n):
            for d in range(len(drafts)):
                for r in range(rounds):
                    seed = _game_seed(master, generation, d, r)
                    jobs.append((i, j, d, seed))
                    jobs.append((j, i, d, seed))
    scores = run_jobs(agents, drafts, jobs, workers, cards)
    wins = [0.0] * n
    games = [0] * n
    for (a, b, _, _), s in zip(jobs, scores):
        wins[a] += s
        wins[b] += 1.0 - s
        games[a] += 1
        games[b] += 1
    return [FitnessRecord(i, wins[i], games[i]) for i in range(n)]


def fitness_fixed(pop: Sequence[Genome], opponent, drafts: Sequence[DraftSequence], rounds: int,
                  master: int, generation: int = 0, workers: int = 1,
                  cards: CardSet | None = None) -> list[FitnessRecord]:
    """Each individual plays ``len(pop) * rounds`` games per draft per side
    against ``opponent``."""
    n = len(pop)
    if n < 1:
        raise ValueError("empty population")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    agents = [GenomeAgent(g) for g in pop] + [opponent]
    opp = n
    jobs = []
    for i in range(n):
        for d in range(len(drafts)):
            for k in range(n * rounds):
                seed = _game_seed(master, generation, d, k)
                jobs.append((i, opp, d, seed))
                jobs.append((opp, i, d, seed))
    scores = run_jobs(agents, drafts, jobs, workers, cards)
    wins = [0.0] * n
    games = [0] * n
    for (a, b, _, _), s in zip(jobs, scores):
        if a == opp:
            wins[b] += 1.0 - s
            games[b] += 1
        else:
            wins[a] += s
            games[a] += 1
    return [FitnessRecord(i, wins[i], games[i]) for i in range(n)]


# ---------------------------------------------------------------- init

def load_genome(path: str | Path) -> Genome:
    return parse_genome(Path(path).read_text(encoding="utf-8"))


def init_from_linear(path: str | Path, target: str, n_mutations: int, rng: random.Random,
                     population: int, params: GenomeParams | None = None) -> list[Genome]:
    """Copies of a Linear genome (translated to ``target``), each mutated
    ``n_mutations`` times."""
    params = params or GenomeParams()
    base = load_genome(path)
    if not isinstance(base, LinearGenome):
        raise ValueError(f"{path}: expected a linear genome, found {base.representation}")
    translated = translate_linear(base, target)
    pop = []
    for _ in range(population):
        g = translated
        for _ in range(n_mutations):
            g = mutate(g, params, rng)
        pop.append(replace(g, origin="from-linear", generation=0))
    return pop


def initial_population(cfg: EvolutionConfig, rng: random.Random) -> list[Genome]:
    if cfg.init == "from_linear":
        return init_from_linear(cfg.init_path, cfg.representation, cfg.n_mutations, rng,
                                cfg.population, cfg.params)
    return [random_genome(cfg.representation, cfg.params, rng) for _ in range(cfg.population)]


# ---------------------------------------------------------------- archive IO

def write_manifest(out_dir: Path, cfg: EvolutionConfig, cards: CardSet) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": cfg.to_dict(),
        "draft_seeds": [draft_seeds_for(cfg, g) for g in range(cfg.generations)]
        if cfg.resample_drafts else draft_seeds_for(cfg, 0),
        "cardlist_sha256": cards.digest(),
        "total_games": count_games(cfg),
    }
    (out_dir / "run_manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_archive(out_dir: Path, archive: GenerationArchive) -> None:
    gen_dir = out_dir / f"gen_{archive.generation}"
    gen_dir.mkdir(parents=True, exist_ok=True)
    (gen_dir / "genomes.txt").write_text("".join(serialize_genome(g) + "\n" for g in archive.genomes))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "wins", "games", "win_rate"])
    for r in archive.fitness:
        writer.writerow([r.genome_id, repr(r.wins), r.games, repr(r.win_rate)])
    (gen_dir / "fitness.csv").write_text(buf.getvalue())


def load_run(run_dir: str | Path) -> list[GenerationArchive]:
    """Read back the archives written by :func:`evolve`."""
    run_dir = Path(run_dir)
    manifest = json.loads((run_dir / "run_manifest.json").read_text())
    seeds = manifest["draft_seeds"]
    archives = []
    k = 0
    while (run_dir / f"gen_{k}").is_dir():
        gen_dir = run_dir / f"gen_{k}"
        genomes = [parse_genome(line) for line in
                   (gen_dir / "genomes.txt").read_text().splitlines() if line.strip()]
        with open(gen_dir / "fitness.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        records = [FitnessRecord(int(r["id"]), float(r["wins"]), int(r["games"])) for r in rows]
        gen_seeds = seeds[k] if seeds and isinstance(seeds[0], list) else seeds
        games = sum(r.games for r in records)
        cfg = manifest["config"]
        if cfg["scheme"] == "progressive":
            games //= 2
        archives.append(GenerationArchive(k, genomes, records, list(gen_seeds), games))
        k += 1
    if not archives:
        raise FileNotFoundError(f"no generations found in {run_dir}")
    return archives


# ---------------------------------------------------------------- main loop

def generation_line(archive: GenerationArchive, wall: float) -> str:
    rates = [r.win_rate for r in archive.fitness]
    return (f"gen={archive.generation} best_id={archive.best_id} best={max(rates):.4f} "
            f"mean={sum(rates) / len(rates):.4f} games={archive.games_simulated} wall={wall:.3f}")


def _select(rng: random.Random, records: Sequence[FitnessRecord], size: int) -> int:
    contenders = [rng.randrange(len(records)) for _ in range(size)]
    return min(contenders, key=lambda i: (-records[i].win_rate, i))


def evolve(cfg: EvolutionConfig, out_dir: str | Path | None = None, workers: int = 1,
           cards: CardSet | None = None,
           progress: Callable[[str], None] | None = None) -> list[GenerationArchive]:
    """Run the GA described by ``cfg`` and return one archive per generation.

    When ``out_dir`` is given, the manifest and each generation are written
    as soon as they are available.
    """
    cfg.validate()
    cards = cards or default_cardset()
    emit = progress or (lambda line: log.info(line))
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        write_manifest(out, cfg, cards)
    fixed_opponent = parse_agent(cfg.opponent) if cfg.scheme == "fixed" else None
    rng = derive_rng(cfg.seed, "operators")
    pop = initial_population(cfg, rng)
    archives: list[GenerationArchive] = []
    total = 0
    for gen in range(cfg.generations):
        started = time.perf_counter()
        seeds = draft_seeds_for(cfg, gen)
        drafts = [generate_draft(s, cards) for s in seeds]
        if cfg.scheme == "progressive":
            records = fitness_progressive(pop, drafts, cfg.rounds, cfg.seed, gen, workers, cards)
            games = sum(r.games for r in records) // 2
        else:
            if cfg.scheme == "fixed":
                opponent = fixed_opponent
            elif archives:
                opponent = GenomeAgent(archives[-1].best, label="previous-best")
            else:
                opponent = RandomAgent(derive_seed(cfg.seed, "gen0-opponent"))
            records = fitness_fixed(pop, opponent, drafts, cfg.rounds, cfg.seed, gen, workers, cards)
            games = sum(r.games for r in records)
        archive = GenerationArchive(gen, list(pop), records, seeds, games)
        archives.append(archive)
        total += games
        if out is not None:
            write_archive(out, archive)
        emit(generation_line(archive, time.perf_counter() - started))
        if gen == cfg.generations - 1:
            break
        order = sorted(range(len(pop)), key=lambda i: (-records[i].win_rate, i))
        nxt = [pop[i] for i in order[:cfg.elitism]]
        while len(nxt) < cfg.population:
            a = pop[_select(rng, records, cfg.tournament_size)]
            if cfg.crossover:
                b = pop[_select(rng, records, cfg.tournament_size)]
                a = crossover(a, b, rng, cfg.params)
            child = mutate(a, cfg.params, rng)
            nxt.append(replace(child, generation=gen + 1))
        pop = nxt
    emit(f"done generations={len(archives)} total_games={total}")
    return archives
