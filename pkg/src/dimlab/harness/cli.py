"""Command-line interface.

Exit codes: 0 success, 1 when a verified inequality fails, 2 on usage or
input errors.  Output files are written atomically and only after the whole
computation succeeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..constructions import ClassRecipe
from ..core import CapExceeded, FunctionClass, LabeledTree, Metric, as_fraction, dumps, format_fraction
from ..games import DEFAULT_GRID, GameConfig, minimax_online_seq, minimax_transductive
from ..nonseq_cover import cover_greedy, cover_min_exact, packing_max_exact
from ..nonseq_dims import KINDS, dimension
from ..rademacher import (
    OffsetInstance,
    block_length,
    block_schedule_length,
    build_block_design_nonseq,
    build_block_tree_seq,
    offset_rad_exact,
    offset_rad_mc,
)
from ..sequential import GAPPED_REAL, SEQ_KINDS, SeqSolver, seq_cover_construct, seq_cover_min_bruteforce
from . import checkers, corpus as corpus_mod
from .report import FAIL, render, summary


class UsageError(Exception):
    pass


def write_atomic(path: str | None, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename; ``None`` or ``-`` means stdout."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from exc


def _load_class(path: str) -> FunctionClass:
    return FunctionClass.from_json(_read_json(path))


def _metric(path: str | None) -> Metric | None:
    return None if path is None else Metric.from_json(_read_json(path))


def _ints(text: str | None):
    if text is None:
        return None
    return tuple(int(t) for t in text.split(",") if t.strip())


def _fracs(text: str | None):
    if text is None:
        return None
    return tuple(as_fraction(t.strip()) for t in text.split(",") if t.strip())


def _emit(args, obj) -> None:
    write_atomic(args.out, dumps(obj) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_dims(args) -> int:
    cls = _load_class(args.input)
    d, cert = dimension(args.kind, cls, args.alpha, args.beta, _metric(args.metric))
    _emit(args, {"kind": args.kind, "d": d, "certificate": cert.to_json()})
    return 0


def cmd_seq(args) -> int:
    cls = _load_class(args.input)
    metric = _metric(args.metric)
    solver = SeqSolver(args.kind, cls, args.alpha, args.beta, metric)
    cert = solver.certificate()
    out = {"kind": args.kind, "d": cert.d, "certificate": cert.to_json()}
    if args.tree is not None:
        tree = LabeledTree.from_json(_read_json(args.tree))
        cover = seq_cover_construct(cls, metric, tree, args.alpha)
        out["cover"] = cover.to_json()
        if args.bruteforce:
            out["cover_min"] = seq_cover_min_bruteforce(cls, metric, tree, args.alpha)
    _emit(args, out)
    return 0


def cmd_cover(args) -> int:
    cls = _load_class(args.input)
    design = _ints(args.design) or tuple(range(cls.n_points))
    metric = _metric(args.metric)
    if args.method == "packing":
        size, subset = packing_max_exact(cls, design, metric, args.alpha)
        out = {"method": "packing", "size": size, "subset": list(subset)}
    else:
        fn = cover_min_exact if args.method == "exact" else cover_greedy
        size, cover = fn(cls, design, metric, args.alpha)
        out = {"method": args.method, "size": size, "cover": cover.to_json(cls.Q)}
    _emit(args, out)
    return 0


def cmd_rademacher(args) -> int:
    if args.block is None:
        inst = OffsetInstance.from_json(_read_json(args.input))
    else:
        cls = _load_class(args.input)
        if args.alpha is None or args.beta is None:
            raise UsageError("--block needs --alpha and --beta")
        if args.block == "nonseq":
            d, cert = dimension(GAPPED_REAL, cls, args.alpha, args.beta)
            n = args.n if args.n is not None else sum(block_length(w.gap) for w in cert.witnesses)
            inst = build_block_design_nonseq(cert, cls, n, args.C)
        else:
            cert = SeqSolver(GAPPED_REAL, cls, args.alpha, args.beta).certificate()
            n = args.n if args.n is not None else block_schedule_length(cert)
            inst = build_block_tree_seq(cert, cls, n, args.C)
    out = {"instance": inst.to_json()}
    if args.samples is not None:
        est, se = offset_rad_mc(inst, args.samples, args.seed, exhaustive=args.exhaustive)
        out.update({"mode": "mc", "estimate": format_fraction(est), "stderr": se, "samples": args.samples,
                    "seed": args.seed})
    else:
        out.update({"mode": "exact", "value": format_fraction(offset_rad_exact(inst))})
    _emit(args, out)
    return 0


def cmd_game(args) -> int:
    cls = _load_class(args.input)
    cfg = GameConfig(
        cls,
        args.n,
        _fracs(args.yhat_grid) or DEFAULT_GRID,
        _fracs(args.y_grid) or DEFAULT_GRID,
        _ints(args.design) if args.mode == "transductive" else None,
        _ints(args.contexts) if args.mode == "online" else None,
    )
    if args.mode == "transductive":
        if cfg.x_order is None:
            raise UsageError("the transductive game needs --design")
        value = minimax_transductive(cfg)
    else:
        value = minimax_online_seq(cfg)
    _emit(args, {"mode": args.mode, "value": format_fraction(value), "config": cfg.to_json()})
    return 0


def cmd_construct(args) -> int:
    if (args.recipe is None) == (args.recipe_json is None):
        raise UsageError("give exactly one of --recipe or --recipe-json")
    raw = _read_json(args.recipe) if args.recipe else json.loads(args.recipe_json)
    cls = ClassRecipe.from_json(raw).build()
    _emit(args, cls.to_json())
    return 0


_WORKER_CORPUS = None


def _init_worker(path):
    global _WORKER_CORPUS
    _WORKER_CORPUS = corpus_mod.load(path)


def _run_task(task):
    return checkers.run_target(_WORKER_CORPUS, *task)


def threads() -> int:
    raw = os.environ.get("DIMLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise UsageError(f"DIMLAB_THREADS must be an integer, got {raw!r}") from exc


def run_verify(ids, corpus_path=None):
    """Run the listed checkers over the corpus; reports come back in canonical order."""
    corpus = corpus_mod.load(corpus_path)
    tasks = [(tid, target) for tid in ids for target in checkers.REGISTRY[tid].targets(corpus)]
    n = threads()
    if n > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(n, initializer=_init_worker, initargs=(corpus_path,)) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [checkers.run_target(corpus, *t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def cmd_verify(args) -> int:
    if args.list:
        text = "".join(f"{tid}\t{c.title}\n" for tid, c in checkers.REGISTRY.items())
        write_atomic(args.out, text)
        return 0
    if args.all == bool(args.theorem):
        raise UsageError("give --all or at least one --theorem (or --list)")
    ids = list(checkers.REGISTRY) if args.all else args.theorem
    for tid in ids:
        if tid not in checkers.REGISTRY:
            raise UsageError(f"unknown theorem id {tid!r}; see `dimlab verify --list`")
    reports = run_verify(ids, args.corpus)
    write_atomic(args.out, render(reports, args.timings))
    counts = summary(reports)
    print(f"pass={counts['pass']} fail={counts['fail']} skipped={counts['skipped']}", file=sys.stderr)
    return 1 if counts[FAIL] else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--in", dest="input", required=True, help="class JSON file")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("dims", help="non-sequential dimension and certificate")
    common(sp)
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--alpha", type=as_fraction, required=True)
    sp.add_argument("--beta", type=as_fraction)
    sp.add_argument("--metric", help="metric JSON file")
    sp.set_defaults(func=cmd_dims)

    sp = sub.add_parser("seq", help="sequential dimension, tree certificate and optional cover")
    common(sp)
    sp.add_argument("--kind", choices=SEQ_KINDS, required=True)
    sp.add_argument("--alpha", type=as_fraction, required=True)
    sp.add_argument("--beta", type=as_fraction)
    sp.add_argument("--metric")
    sp.add_argument("--tree", help="x tree JSON file; emits the constructed cover on it")
    sp.add_argument("--bruteforce", action="store_true", help="also compute the exact minimum cover (tiny only)")
    sp.set_defaults(func=cmd_seq)

    sp = sub.add_parser("cover", help="non-sequential cover or packing")
    common(sp)
    sp.add_argument("--alpha", type=as_fraction, required=True)
    sp.add_argument("--design", help="comma-separated point indices (default: all)")
    sp.add_argument("--metric")
    sp.add_argument("--method", choices=("exact", "greedy", "packing"), default="exact")
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("rademacher", help="offset Rademacher complexity")
    common(sp)
    sp.add_argument("--block", choices=("nonseq", "seq"), help="build the block instance from a class file")
    sp.add_argument("--alpha", type=as_fraction)
    sp.add_argument("--beta", type=as_fraction)
    sp.add_argument("--n", type=int)
    sp.add_argument("--C", type=as_fraction, default=as_fraction(2))
    sp.add_argument("--samples", type=int, help="Monte Carlo draws instead of the exact value")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--exhaustive", action="store_true", help="with --samples: enumerate all paths")
    sp.set_defaults(func=cmd_rademacher)

    sp = sub.add_parser("game", help="grid minimax value of the square-loss game")
    common(sp)
    sp.add_argument("--mode", choices=("transductive", "online"), default="transductive")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--design", help="context order for the transductive game")
    sp.add_argument("--contexts", help="context menu for the online game (default: all points)")
    sp.add_argument("--yhat-grid", help="comma-separated learner actions")
    sp.add_argument("--y-grid", help="comma-separated adversary actions")
    sp.set_defaults(func=cmd_game)

    sp = sub.add_parser("construct", help="build a class from a recipe")
    common(sp, needs_input=False)
    sp.add_argument("--recipe", help="recipe JSON file")
    sp.add_argument("--recipe-json", help="recipe as an inline JSON string")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="run inequality checkers over a corpus")
    common(sp, needs_input=False)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--theorem", action="append", default=[])
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--corpus", help="corpus JSON file (default: shipped corpus)")
    sp.add_argument("--timings", action="store_true", help="include runtime_ms (breaks byte-identity)")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, IndexError, TypeError, CapExceeded, OSError) as exc:
        print(f"dimlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
