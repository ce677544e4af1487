"""Command-line interface: ``dkcalc <command> ...``.

Every command prints one JSON document (``search`` prints JSON lines) wrapped
in an envelope carrying the schema name, package version, command, seed and
a hash of the configuration.  Exit codes: 0 success, 1 verification failures,
2 usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from typing import Optional

import numpy as np

from . import __version__
from . import dkengine as dk
from . import explorer as ex
from .opcalc import (
    OperatorError,
    OperatorWord,
    map_to_word_delta,
    map_to_word_fin,
    verify_dichotomy,
    verify_presentations,
    verify_push_through,
    word_to_map,
)
from .orders import (
    EXHAUSTIVE_MAX_N,
    SIMPLICIAL,
    SYMMETRIC,
    VARIANTS,
    OrderError,
    TotalOrder,
    binary_order,
    is_order_reflecting,
    linear_extensions,
    random_total_order,
)
from .report import Report
from .sgroup import (
    GroupError,
    cyclic_complexes,
    make_instance,
    moore_roundtrip,
    verify_instance,
    verify_symmetric_chain_condition,
    verify_symmetric_invariance,
)

SEED_ENV = "DKCALC_SEED"
DEFAULT_INSTANCES = ("gamma", "exponential:3:S3")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


INPUT_ERRORS = (UsageError, OperatorError, OrderError, GroupError, dk.DecompositionError, ex.WitnessError,
                json.JSONDecodeError, OSError)


# -- input helpers -----------------------------------------------------------------


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_json(arg: str):
    text = _read_text(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _unwrap(data):
    """Accept either a bare payload or one of our own output envelopes."""
    if isinstance(data, dict) and "schema" in data and "result" in data:
        return data["result"]
    return data


def parse_word(arg: str, from_level: int) -> OperatorWord:
    text = _read_text(arg).strip()
    if text.startswith("["):
        items = json.loads(text)
        if isinstance(items, list) and all(isinstance(x, dict) for x in items):
            return OperatorWord.from_json(items, from_level)
        return OperatorWord.from_spec([tuple(x) if isinstance(x, list) else x for x in items], from_level)
    return OperatorWord.from_spec(text, from_level)


def resolve_orders(spec: str, n: int, variant: str, seed: int) -> list[TotalOrder]:
    """``binary``, ``extensions:<partial>[:<limit>]``, ``random:<count>``, ``bits:k0,k1,...`` or JSON."""
    if spec == "binary":
        return [binary_order(n, variant)]
    if spec.startswith("extensions:"):
        _, partial, *rest = spec.split(":")
        limit = int(rest[0]) if rest else None
        if n <= EXHAUSTIVE_MAX_N:
            return list(linear_extensions(n, variant, partial, limit=limit))
        return list(linear_extensions(n, variant, partial, limit=limit, seed=seed))
    if spec.startswith("random:"):
        rng = random.Random(seed)
        return [random_total_order(n, variant, rng) for _ in range(int(spec.split(":", 1)[1]))]
    if spec.startswith("bits:"):
        return [TotalOrder.from_bit_sequence([int(k) for k in spec[5:].split(",")], n, variant)]
    data = _unwrap(_load_json(spec))
    if isinstance(data, dict):
        order = TotalOrder.from_json({"n": n, "variant": variant, **data})
    else:
        order = TotalOrder.from_json({"n": n, "variant": variant, "positions": data})
    if order.n != n or order.variant != variant:
        raise UsageError(f"order is a {order.variant} order at n={order.n}, expected {variant} at n={n}")
    return [order]


def resolve_element(inst, arg: str, n: Optional[int], rng: np.random.Generator):
    if arg in ("identity", "random", "moore", "cycle"):
        if n is None:
            raise UsageError(f"--n is required with --element {arg}")
        return n, {
            "identity": lambda: inst.identity(n),
            "random": lambda: inst.sample(n, rng),
            "moore": lambda: inst.sample_moore(n, rng),
            "cycle": lambda: inst.sample_cycle(n, rng),
        }[arg]()
    data = _unwrap(_load_json(arg))
    if isinstance(data, dict) and "element" in data:
        data = data["element"]
    level, x = inst.decode(data)
    if n is not None and level != n:
        raise UsageError(f"element lives at level {level}, but --n is {n}")
    return level, x


def _instances(args, variant: Optional[str] = None) -> list[str]:
    if args.instance:
        specs = list(args.instance)
        if variant == SYMMETRIC:
            for spec in specs:
                if not make_instance(spec).is_symmetric:
                    raise UsageError(f"{spec} is not symmetric")
        return specs
    specs = list(DEFAULT_INSTANCES)
    if variant == SYMMETRIC:
        specs = [s for s in specs if make_instance(s).is_symmetric]
    return specs


def _one_instance(args):
    if not args.instance or len(args.instance) != 1:
        raise UsageError("exactly one --instance is required")
    return make_instance(args.instance[0])


def _sub_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


# -- commands ------------------------------------------------------------------------


def cmd_normalize(args) -> tuple[dict, bool]:
    w = parse_word(args.word, args.n)
    f = word_to_map(w)
    canon = _canonical(w, args.scheme)
    return {
        "word": w.to_json(),
        "from_level": w.from_level,
        "to_level": w.to_level,
        "map": f.to_json(),
        "canonical": canon.to_json(),
        "canonical_text": str(canon),
        "is_identity": f.is_identity,
    }, word_to_map(canon) == f


def _canonical(w: OperatorWord, scheme: str) -> OperatorWord:
    f = word_to_map(w)
    if scheme == "auto":
        scheme = "delta" if all(g.kind in ("d", "s") for g in w) else "fin"
    if scheme == "delta":
        if not f.is_monotone:
            raise UsageError("the word is not monotone; use --scheme fin")
        return map_to_word_delta(f)
    return map_to_word_fin(f)


def cmd_compose(args) -> tuple[dict, bool]:
    level = args.n
    words = []
    for text in reversed(args.words):
        w = parse_word(text, level)
        words.append(w)
        level = w.to_level
    total = OperatorWord.identity(args.n)
    for w in words:
        total = w @ total
    canon = _canonical(total, args.scheme)
    return {
        "word": total.to_json(),
        "from_level": total.from_level,
        "to_level": total.to_level,
        "map": word_to_map(total).to_json(),
        "canonical": canon.to_json(),
        "canonical_text": str(canon),
    }, word_to_map(canon) == word_to_map(total)


def cmd_act(args) -> tuple[dict, bool]:
    inst = _one_instance(args)
    rng = np.random.default_rng(args.seed)
    n, x = resolve_element(inst, args.element, args.n, rng)
    w = parse_word(args.word, n)
    y = inst.act_word(w, x)
    return {"word": w.to_json(), "input": inst.encode(n, x), "element": inst.encode(w.to_level, y)}, True


def cmd_decompose(args) -> tuple[dict, bool]:
    inst = _one_instance(args)
    rng = np.random.default_rng(args.seed)
    n, g = resolve_element(inst, args.element, args.n, rng)
    orders = resolve_orders(args.order, n, args.variant, args.seed)
    if len(orders) != 1:
        raise UsageError("decompose needs a single order")
    dec = dk.decompose(inst, n, g, orders[0], force=args.force)
    out = dec.to_json(inst)
    out["input"] = inst.encode(n, g)
    return out, dec.complete(inst)


def cmd_reconstruct(args) -> tuple[dict, bool]:
    data = _unwrap(_load_json(args.input))
    inst = make_instance(data["instance"]) if not args.instance else _one_instance(args)
    dec = dk.Decomposition.from_json(inst, data)
    return {"element": inst.encode(dec.n, dk.reconstruct(inst, dec))}, True


def _report_result(reports: list[Report]) -> tuple[dict, bool]:
    ok = all(r.ok for r in reports)
    return {"reports": [r.to_json() for r in reports], "failed": sum(r.failed for r in reports)}, ok


def cmd_verify(args) -> tuple[dict, bool]:
    scope = args.scope
    if scope == "presentations":
        rep = verify_presentations(args.n_max or 4)
        return rep.to_json(), rep.ok
    if scope == "pushthrough":
        return _report_result([verify_push_through(args.n_max or 6)])
    if scope == "dichotomy":
        return _report_result([verify_dichotomy(args.n_max or 5)])
    if scope == "moore":
        rep = Report("moore-roundtrip")
        for C in cyclic_complexes():
            rep.merge(moore_roundtrip(C))
        return _report_result([rep])
    if scope == "instance":
        reports = []
        for i, spec in enumerate(_instances(args)):
            rep = verify_instance(make_instance(spec), args.n_max or 3, args.trials, seed=_sub_seed(args.seed, i))
            rep.name = f"instance:{spec}"
            reports.append(rep)
        return _report_result(reports)
    if scope in ("symmetric", "replacement", "closed-forms"):
        return _verify_levelwise(args)
    if scope == "sdp":
        return _verify_sdp(args)
    raise UsageError(f"unknown scope {scope!r}")


def _verify_levelwise(args) -> tuple[dict, bool]:
    variant = SYMMETRIC if args.scope in ("symmetric", "replacement") else None
    reports = []
    for i, spec in enumerate(_instances(args, variant)):
        inst = make_instance(spec)
        for n in range(args.n + 1):
            seed = _sub_seed(args.seed, i, n)
            if args.scope == "symmetric":
                parts = [verify_symmetric_invariance(inst, n, args.trials, seed),
                         verify_symmetric_chain_condition(inst, n, args.trials, seed)]
            elif args.scope == "replacement":
                parts = [dk.verify_replacement_projections(inst, n, args.trials, seed)]
            else:
                parts = [dk.verify_closed_forms(inst, n, args.trials, seed)]
            for rep in parts:
                rep.name = f"{rep.name}:{spec}:n={n}"
                reports.append(rep)
    return _report_result(reports)


def _verify_sdp(args) -> tuple[dict, bool]:
    orders = resolve_orders(args.order, args.n, args.variant, args.seed)
    specs = _instances(args, args.variant)
    entries = []
    ok = True
    for oi, order in enumerate(orders):
        for ii, spec in enumerate(specs):
            inst = make_instance(spec)
            seed = _sub_seed(args.seed, oi, ii)
            rep = dk.verify_unique_factorization(inst, args.n, order, trials=args.trials, seed=seed, force=True)
            rep.merge(dk.verify_kernel_characterization(inst, args.n, order, trials=args.trials, seed=seed,
                                                        force=True))
            ok = ok and rep.ok
            entries.append({"order_index": oi, "instance": spec, "extends": is_order_reflecting(order),
                            "order": order.to_json(), "report": rep.to_json()})
    return {"orders": len(orders), "entries": entries,
            "failed_entries": sum(not e["report"]["ok"] for e in entries)}, ok


def cmd_replay(args) -> tuple[dict, bool]:
    text = _read_text(args.input).strip()
    if not text:
        witnesses = []
    elif text.startswith("["):
        witnesses = json.loads(text)
    else:
        witnesses = []
        for line in text.splitlines():
            if not line.strip():
                continue
            item = _unwrap(json.loads(line))
            if isinstance(item, dict) and "check" in item:
                witnesses.append(item)
            elif isinstance(item, dict) and item.get("witness"):
                witnesses.append(item["witness"])
    if not isinstance(witnesses, list):
        raise UsageError("expected a list of witnesses")
    rep = ex.replay_witness(witnesses)
    return {"witnesses": len(witnesses), "report": rep.to_json()}, rep.ok


# -- plumbing --------------------------------------------------------------------------

HASH_EXCLUDE = {"out", "jobs", "func"}


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in HASH_EXCLUDE}


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def envelope(args, result) -> dict:
    config = _config(args)
    return {
        "schema": f"dkcalc.{args.command}/1",
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "config_hash": config_hash(config),
        "config": config,
        "result": result,
    }


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _emit(args, lines: list[str]):
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_search(args) -> int:
    specs = _instances(args, args.variant)
    orders = resolve_orders(args.order, args.n, args.variant, args.seed) if args.order else None
    head = envelope(args, None)
    head.pop("result")
    head["type"] = "header"
    lines = [_dump(head)]
    summary = ex.SearchSummary()
    stream = ex.search_orders(specs, args.n, args.variant, args.mode, args.trials, args.seed,
                              args.limit, args.jobs, orders)
    try:
        for verdict in stream:
            summary.add(verdict)
            lines.append(_dump({"type": "verdict", "config_hash": head["config_hash"], **verdict.to_json()}))
    except ex.ImplementationContradiction as exc:
        lines.append(_dump({"type": "error", "config_hash": head["config_hash"], "error": str(exc)}))
        _emit(args, lines)
        return EXIT_FAIL
    lines.append(_dump({"type": "summary", "config_hash": head["config_hash"], **summary.to_json()}))
    _emit(args, lines)
    return EXIT_OK


COMMANDS = {
    "normalize": cmd_normalize,
    "compose": cmd_compose,
    "act": cmd_act,
    "decompose": cmd_decompose,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "replay": cmd_replay,
}

SCOPES = ("presentations", "pushthrough", "dichotomy", "moore", "instance", "symmetric", "replacement",
          "closed-forms", "sdp")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser(default_seed: int = 0) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed, help=f"master seed (default ${SEED_ENV} or 0)")
    common.add_argument("--out", help="write output here instead of stdout")

    inst = argparse.ArgumentParser(add_help=False)
    inst.add_argument("--instance", action="append",
                      help="instance spec: gamma[:<complex json>] or exponential:<m>:<group>; repeatable")

    def shape(trials: int) -> argparse.ArgumentParser:
        # built per command: argparse parents share their actions
        sh = argparse.ArgumentParser(add_help=False)
        sh.add_argument("--variant", choices=VARIANTS, default=SIMPLICIAL)
        sh.add_argument("--order", help="binary | extensions:<lp|incl>[:limit] | random:<count> | bits:k0,k1,.. | JSON")
        sh.add_argument("--trials", type=int, default=trials)
        return sh

    p = argparse.ArgumentParser(prog="dkcalc", description="Operator calculus and Dold-Kan decompositions.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="word -> map and canonical word")
    s.add_argument("word", help='"d0 u1", JSON list, @file or -')
    s.add_argument("--n", type=int, required=True, help="level the word acts on")
    s.add_argument("--scheme", choices=("auto", "delta", "fin"), default="auto")

    s = sub.add_parser("compose", parents=[common], help="compose words (the last one acts first)")
    s.add_argument("words", nargs="+")
    s.add_argument("--n", type=int, required=True, help="level the last word acts on")
    s.add_argument("--scheme", choices=("auto", "delta", "fin"), default="auto")

    s = sub.add_parser("act", parents=[common, inst], help="apply a word to an element")
    s.add_argument("--word", required=True)
    s.add_argument("--element", default="random", help="identity | random | moore | cycle | JSON | @file | -")
    s.add_argument("--n", type=int)

    s = sub.add_parser("decompose", parents=[common, inst], help="decompose an element along an order")
    s.add_argument("--element", default="random")
    s.add_argument("--n", type=int)
    s.add_argument("--variant", choices=VARIANTS, default=SIMPLICIAL)
    s.add_argument("--order", default="binary")
    s.add_argument("--force", action="store_true", help="accept orders that do not extend the partial order")

    s = sub.add_parser("reconstruct", parents=[common, inst], help="multiply decomposition components back")
    s.add_argument("--input", default="-", help="decomposition JSON, @file or - (stdin)")

    s = sub.add_parser("verify", parents=[common, inst, shape(20)], help="run a verification suite")
    s.add_argument("scope", choices=SCOPES)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--n-max", type=int)

    s = sub.add_parser("search", parents=[common, inst, shape(5)], help="classify total orders")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--mode", choices=(ex.EXHAUSTIVE, ex.SAMPLE), default=ex.SAMPLE)
    s.add_argument("--limit", type=int)
    s.add_argument("--jobs", type=int, default=1)

    s = sub.add_parser("replay", parents=[common], help="re-run recorded witnesses")
    s.add_argument("--input", default="-", help="witness list, verdict JSON lines, @file or -")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"dkcalc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "verify" and args.scope == "sdp" and args.order is None:
        args.order = "binary"
    try:
        if args.command == "search":
            return run_search(args)
        result, ok = COMMANDS[args.command](args)
    except INPUT_ERRORS as exc:
        print(f"dkcalc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError) as exc:
        print(f"dkcalc: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(args, [_dump(envelope(args, result))])
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
