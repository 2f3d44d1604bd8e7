"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arena
from .agents import parse_agent
from .cards import CardListError, default_cardset, load_cardset_file
from .engine.draft import generate_draft
from .engine.match import play_match
from .evaluator.features import CARD_FEATURES, STATE_FEATURES
from .evaluator.genome import LinearGenome
from .evaluator.operators import translate_linear
from .evaluator.text import ParseError, parse_genome, serialize_genome
from .evolution import ConfigError, EvolutionConfig, count_games, evolve, load_config, load_run
from .seeding import derive_seed


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _overrides(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"override {item!r} must look like key=value")
        out[key.strip()] = value.strip()
    return out


def _cmd_evolve(args) -> int:
    overrides = _overrides(args.set or [])
    overrides["seed"] = str(args.seed)
    try:
        cfg = load_config(args.config, overrides)
        cfg.validate()
    except (ConfigError, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    emit = (lambda line: None) if args.quiet else (lambda line: print(line, file=sys.stderr, flush=True))
    evolve(cfg, out_dir=args.out, workers=args.workers, progress=emit)
    return 0


def _cmd_count(args) -> int:
    try:
        cfg = load_config(args.config, _overrides(args.set or []))
    except (ConfigError, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    print(count_games(cfg))
    return 0


def _agents(descriptors: list[str]) -> list:
    try:
        return [parse_agent(d) for d in descriptors]
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None


def _cmd_tournament(args) -> int:
    agents = _agents(args.agents)
    if len(set(args.agents)) != len(args.agents):
        raise UsageError("agent descriptors must be unique")
    m = arena.round_robin(agents, args.drafts, args.rounds, args.seed, labels=args.agents,
                          workers=args.workers)
    arena.export_csv(m, args.out)
    if args.cumulative:
        table = arena.cumulative_rounds(agents, args.drafts, args.rounds, args.seed,
                                        labels=args.agents, workers=args.workers)
        arena.export_csv(table, args.cumulative)
    for label, avg, std in zip(m.labels, m.global_avg, m.global_std):
        print(f"agent={label} win_rate={avg:.4f} std={std:.4f}")
    return 0


def _load_run(run_dir: str):
    try:
        return load_run(run_dir)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read run {run_dir}: {exc}") from None


def _cmd_heatmap(args) -> int:
    archives = _load_run(args.run)
    grid = arena.heatmap(archives, args.drafts, args.rounds, args.seed, workers=args.workers)
    arena.export_csv(grid, args.out, gnuplot=args.gnuplot)
    return 0


def _cmd_progress(args) -> int:
    archives = _load_run(args.run)
    curve = arena.progress_curve(archives, args.drafts, args.rounds, args.seed, workers=args.workers)
    arena.export_csv(curve, args.out)
    print(f"improvement={curve.improvement():.4f}")
    return 0


def _cmd_play(args) -> int:
    agents = _agents([args.agent0, args.agent1])
    cards = default_cardset()
    draft = generate_draft(derive_seed(args.seed, "draft"), cards)
    result = play_match(agents[0], agents[1], draft, derive_seed(args.seed, "shuffle"), cards)
    if args.transcript:
        if args.json:
            payload = {
                "winner": result.winner, "turns": result.turns, "forfeit": result.forfeit,
                "decks": list(result.decks), "shuffle_seed": result.shuffle_seed,
                "transcript": [e.__dict__ | {"state_hash": f"{e.state_hash:016x}"}
                               for e in result.transcript],
            }
            Path(args.transcript).write_text(json.dumps(payload, indent=1) + "\n")
        else:
            Path(args.transcript).write_text(result.transcript_text())
    winner = "tie" if result.winner is None else str(result.winner)
    print(f"winner={winner} turns={result.turns}")
    return 0


def _cmd_translate(args) -> int:
    try:
        g = parse_genome(Path(args.input).read_text(encoding="utf-8"))
    except (OSError, ParseError) as exc:
        raise UsageError(str(exc)) from None
    if not isinstance(g, LinearGenome):
        raise UsageError(f"{args.input} holds a {g.representation} genome, expected linear")
    Path(args.out).write_text(serialize_genome(translate_linear(g, args.repr)) + "\n")
    return 0


def _cmd_validate(args) -> int:
    try:
        cards = load_cardset_file(args.path)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except CardListError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{len(cards)} cards OK")
    return 0


def _cmd_features(args) -> int:
    for i, name in enumerate(STATE_FEATURES + CARD_FEATURES, 1):
        print(f"{i}\t{name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="locmevo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("evolve", help="run an evolution")
    e.add_argument("--config", required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--out", required=True, help="archive directory")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--quiet", action="store_true", help="suppress status lines")
    e.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    e.set_defaults(func=_cmd_evolve)

    c = sub.add_parser("count-games", help="closed-form game count of a run")
    c.add_argument("--config", required=True)
    c.add_argument("--set", action="append", metavar="KEY=VALUE")
    c.set_defaults(func=_cmd_count)

    t = sub.add_parser("tournament", help="round robin between agents")
    t.add_argument("agents", nargs="+", help="random[:seed], weakop, genome:<path>")
    t.add_argument("--drafts", type=int, default=10)
    t.add_argument("--rounds", type=int, default=10)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--cumulative", help="also write per-round cumulative win rates here")
    t.add_argument("--workers", type=int, default=1)
    t.set_defaults(func=_cmd_tournament)

    for name, func, text in (("heatmap", _cmd_heatmap, "self-play heatmap of a run"),
                             ("progress", _cmd_progress, "progress curve of a run")):
        h = sub.add_parser(name, help=text)
        h.add_argument("run", help="archive directory written by evolve")
        h.add_argument("--out", required=True)
        h.add_argument("--drafts", type=int, default=10)
        h.add_argument("--rounds", type=int, default=10)
        h.add_argument("--seed", type=int, default=0)
        h.add_argument("--workers", type=int, default=1)
        if name == "heatmap":
            h.add_argument("--gnuplot", action="store_true", help="bare whitespace matrix")
        h.set_defaults(func=func)

    pl = sub.add_parser("play", help="play a single match")
    pl.add_argument("agent0")
    pl.add_argument("agent1")
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--transcript")
    pl.add_argument("--json", action="store_true", help="write the transcript as JSON")
    pl.set_defaults(func=_cmd_play)

    tr = sub.add_parser("translate", help="convert a linear genome to a tree genome")
    tr.add_argument("--in", dest="input", required=True)
    tr.add_argument("--repr", choices=("linear", "binary", "tree"), required=True)
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=_cmd_translate)

    v = sub.add_parser("validate-cards", help="check a card-list file")
    v.add_argument("path")
    v.set_defaults(func=_cmd_validate)

    f = sub.add_parser("features", help="list feature names in gene order")
    f.set_defaults(func=_cmd_features)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report, don't trace
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
