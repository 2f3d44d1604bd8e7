import random

import pytest

from conftest import sample_states
from locmevo import parallel
from locmevo.agents import GenomeAgent, WeakOpAgent
from locmevo.engine import PlayerView, generate_draft
from locmevo.evaluator import (
    GenomeParams, LinearGenome, evaluate, random_genome, serialize_genome,
)
from locmevo.evolution import (
    ConfigError, EvolutionConfig, FitnessRecord, best_index, count_games, evolve,
    fitness_fixed, fitness_progressive, games_per_individual, init_from_linear, load_config,
    load_run, parse_config_text,
)


def small(**kw) -> EvolutionConfig:
    base = dict(representation="linear", generations=2, population=4, elitism=2, drafts=1,
                rounds=1, seed=3)
    base.update(kw)
    return EvolutionConfig(**base)


# ---------------------------------------------------------------- closed forms

def test_full_scale_formulas():
    prog = EvolutionConfig()
    assert games_per_individual(prog) == 9800
    assert count_games(prog) == 12_250_000
    assert games_per_individual(EvolutionConfig(scheme="fixed")) == 10_000
    assert count_games(EvolutionConfig(scheme="fixed", population=1, drafts=1, rounds=1,
                                       generations=1, elitism=0)) == 2


def test_reduced_formulas():
    assert games_per_individual(EvolutionConfig(population=6, drafts=2, rounds=2)) == 40
    assert games_per_individual(EvolutionConfig(scheme="fixed", population=6, drafts=2,
                                                rounds=2)) == 48


@pytest.mark.parametrize("scheme", ["progressive", "fixed", "best_of_previous"])
def test_executed_games_match_count(scheme):
    cfg = small(scheme=scheme, population=3, elitism=1)
    before = parallel.games_played
    archives = evolve(cfg, progress=lambda line: None)
    assert parallel.games_played - before == count_games(cfg)
    assert sum(a.games_simulated for a in archives) == count_games(cfg)
    for a in archives:
        assert all(r.games == games_per_individual(cfg) for r in a.fitness)


# ---------------------------------------------------------------- fitness

def test_progressive_two_individuals(cards):
    rng = random.Random(1)
    pop = [random_genome("linear", GenomeParams(), rng) for _ in range(2)]
    recs = fitness_progressive(pop, [generate_draft(1, cards)], 1, master=5)
    assert [r.games for r in recs] == [2, 2]
    assert recs[0].wins + recs[1].wins == 2.0


def test_progressive_identical_genomes(cards):
    g = random_genome("linear", GenomeParams(), random.Random(2))
    recs = fitness_progressive([g] * 4, [generate_draft(d, cards) for d in range(2)], 2, master=1)
    assert all(r.win_rate == 0.5 for r in recs)


def test_progressive_mean_is_half(cards):
    rng = random.Random(3)
    pop = [random_genome("linear", GenomeParams(), rng) for _ in range(5)]
    recs = fitness_progressive(pop, [generate_draft(0, cards)], 2, master=2)
    assert sum(r.win_rate for r in recs) / 5 == pytest.approx(0.5, abs=1e-12)
    assert all(0.0 <= r.win_rate <= 1.0 for r in recs)


def test_fixed_against_itself(cards):
    # WeakOp-like behaviour is not expressible as a genome, so compare a genome with itself
    g = random_genome("linear", GenomeParams(), random.Random(4))
    recs = fitness_fixed([g], GenomeAgent(g), [generate_draft(0, cards)], 3, master=0)
    assert recs[0].games == 6 and recs[0].win_rate == 0.5


def test_fixed_counts(cards):
    rng = random.Random(5)
    pop = [random_genome("linear", GenomeParams(), rng) for _ in range(3)]
    recs = fitness_fixed(pop, WeakOpAgent(), [generate_draft(0, cards)] * 2, 2, master=0)
    assert all(r.games == 2 * 2 * 3 * 2 for r in recs)


def test_best_index_ties():
    recs = [FitnessRecord(0, 1.0, 4), FitnessRecord(1, 3.0, 4), FitnessRecord(2, 3.0, 4)]
    assert best_index(recs) == 1


# ---------------------------------------------------------------- evolve

def test_single_generation():
    archives = evolve(small(generations=1), progress=lambda line: None)
    assert len(archives) == 1 and archives[0].generation == 0


def test_deterministic_and_elitist():
    cfg = small(generations=3, population=5, elitism=2)
    a = evolve(cfg, progress=lambda line: None)
    b = evolve(cfg, progress=lambda line: None)
    for x, y in zip(a, b):
        assert [serialize_genome(g) for g in x.genomes] == [serialize_genome(g) for g in y.genomes]
        assert [(r.wins, r.games) for r in x.fitness] == [(r.wins, r.games) for r in y.fitness]
    for prev, nxt in zip(a, a[1:]):
        order = sorted(range(5), key=lambda i: (-prev.fitness[i].win_rate, i))
        elites = [serialize_genome(prev.genomes[i]) for i in order[:2]]
        assert [serialize_genome(g) for g in nxt.genomes[:2]] == elites


def test_archive_round_trip(tmp_path):
    cfg = small(generations=2)
    lines = []
    archives = evolve(cfg, out_dir=tmp_path, progress=lines.append)
    assert lines[-1] == f"done generations=2 total_games={count_games(cfg)}"
    assert lines[0].startswith("gen=0 best_id=")
    assert (tmp_path / "run_manifest.json").is_file()
    assert (tmp_path / "gen_1" / "fitness.csv").read_text().startswith("id,wins,games,win_rate\n")
    loaded = load_run(tmp_path)
    assert len(loaded) == 2
    for x, y in zip(archives, loaded):
        assert x.genomes == y.genomes
        assert x.best_id == y.best_id
        assert x.games_simulated == y.games_simulated
        assert x.draft_seeds == y.draft_seeds


# ---------------------------------------------------------------- from-linear

def _base(tmp_path) -> tuple[LinearGenome, str]:
    g = random_genome("linear", GenomeParams(), random.Random(6))
    path = tmp_path / "base.txt"
    path.write_text(serialize_genome(g) + "\n")
    return g, str(path)


def test_from_linear_no_mutation(tmp_path):
    g, path = _base(tmp_path)
    pop = init_from_linear(path, "linear", 0, random.Random(0), 4)
    assert all(p == g for p in pop)
    trees = init_from_linear(path, "tree", 0, random.Random(0), 3)
    for s in sample_states(100, 7):
        v = PlayerView(s, s.active_player)
        for t in trees:
            assert abs(evaluate(t, v) - evaluate(g, v)) <= 1e-9


@pytest.mark.parametrize("target", ["linear", "binary", "tree"])
def test_from_linear_mutated_copies_differ(tmp_path, target):
    _, path = _base(tmp_path)
    pop = init_from_linear(path, target, 5, random.Random(1), 6,
                           GenomeParams(mutation_rate=0.2))
    texts = [serialize_genome(p) for p in pop]
    assert len(set(texts)) == len(texts)
    assert all(p.origin == "from-linear" for p in pop)


def test_from_linear_rejects_trees(tmp_path):
    g = random_genome("tree", GenomeParams(), random.Random(0))
    path = tmp_path / "tree.txt"
    path.write_text(serialize_genome(g))
    with pytest.raises(ValueError):
        init_from_linear(path, "tree", 1, random.Random(0), 2)


def test_missing_init_path_fails_early(tmp_path):
    before = parallel.games_played
    with pytest.raises(ConfigError):
        evolve(small(init="from_linear", init_path=str(tmp_path / "missing.txt")))
    assert parallel.games_played == before


# ---------------------------------------------------------------- config

def test_config_validation():
    for bad in (dict(elitism=4), dict(rounds=0), dict(drafts=0), dict(representation="cnn"),
                dict(scheme="tabu"), dict(population=1)):
        with pytest.raises(ConfigError):
            small(**bad).validate()


def test_config_text(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# desk run\nrepresentation = tree\npopulation = 8\nscheme = weak-op\n"
                    "mutation_rate = 0.1\ncrossover = false\n")
    cfg = load_config(path, {"generations": "3"})
    assert (cfg.representation, cfg.population, cfg.generations) == ("tree", 8, 3)
    assert (cfg.scheme, cfg.opponent) == ("fixed", "weakop")
    assert cfg.params.mutation_rate == 0.1 and cfg.crossover is False
    json_cfg = EvolutionConfig.from_dict(parse_config_text('{"population": 7, "seed": 2}'))
    assert json_cfg.population == 7
    assert EvolutionConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError):
        EvolutionConfig.from_dict({"populaton": 3})
