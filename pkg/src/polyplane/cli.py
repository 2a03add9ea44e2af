"""Command-line front end.

Exit codes: 0 success / SAT / validates; 1 UNSAT / invalid / disagreement;
2 usage or syntax errors; 3 a frame is refuted; 4 a search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from math import ceil, log2

from . import axioms as ax
from . import geometry as geo
from . import kripke as kr
from . import mosaic as mo
from .crown import crown_sat_oracle, reduce_to_crown
from .errors import BudgetExceededError
from .formula import (And, Bottom, Box, Diamond, Formula, Iff, Implies, Not,
                      Or, ParseError, Var, parse, pretty)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _cmd_sat(args) -> int:
    theta = parse(args.formula)
    if args.oracle is not None:
        got = crown_sat_oracle(theta, args.oracle)
        if got is None:
            print(f"UNSAT (oracle, crowns up to {args.oracle})")
            return 1
        print(f"SAT on crown({got.n}) at world {got.world} (oracle)")
        if args.model_out:
            with open(args.model_out, "w", encoding="utf-8") as fh:
                fh.write(_dump_json(kr.model_to_dict(got.model)) + "\n")
        return 0
    res = mo.decide_sat(theta, strict_middle=args.strict_middle)
    if res.sat:
        print(f"SAT on crown({res.n}) at world {res.world}")
        if args.model_out:
            with open(args.model_out, "w", encoding="utf-8") as fh:
                fh.write(_dump_json(kr.model_to_dict(res.model)) + "\n")
        if args.trace:
            space = mo.LabelSpace.for_formula(theta)
            for t in res.mosaics:
                row = [sorted(map(pretty, space.label_formulas(lab)))
                       for lab in t]
                print("mosaic", json.dumps(row), file=sys.stderr)
        return 0
    print("UNSAT")
    return 1


def _cmd_valid(args) -> int:
    theta = parse(args.formula)
    res = mo.decide_sat(Not(theta))
    if res.sat:
        print(f"invalid: countermodel on crown({res.n}) at world {res.world}")
        if args.model_out:
            with open(args.model_out, "w", encoding="utf-8") as fh:
                fh.write(_dump_json(kr.model_to_dict(res.model)) + "\n")
        return 1
    print("valid")
    return 0


def _cmd_classify(args) -> int:
    frame = kr.frame_from_dict(_load_json(args.frame))
    verdict = ax.classify_frame(frame)
    if verdict.validates:
        print("validates")
        return 0
    print(f"refutes {verdict.refuted_id}; witness "
          f"{_dump_json({str(k): v for k, v in sorted(verdict.witness.mapping.items())})}")
    return 3


def _cmd_reduce(args) -> int:
    frame = kr.frame_from_dict(_load_json(args.frame))
    red = reduce_to_crown(frame)
    out = {"n": red.n,
           "map": {str(k): v for k, v in sorted(red.world_map.mapping.items())}}
    if red.embedded:
        out["embedding"] = {str(k): v for k, v in sorted(red.embedding.items())}
    print(_dump_json(out))
    return 0


def _cmd_jankov(args) -> int:
    frame = kr.frame_from_dict(_load_json(args.frame)).rooted()
    print(pretty(kr.jankov_fine(frame)))
    return 0


def _cmd_eval_scene(args) -> int:
    scene, val = geo.scene_from_dict(_load_json(args.scene))
    cell = tuple({"+": 1, "0": 0, "-": -1}[ch] for ch in args.cell)
    if len(cell) != len(scene.lines):
        raise ValueError("cell signature length does not match the line count")
    ok = geo.eval_scene(scene, val, cell, parse(args.formula))
    print("true" if ok else "false")
    return 0 if ok else 1


def _cmd_realize(args) -> int:
    model = kr.model_from_dict(_load_json(args.model))
    witness = args.world
    real = geo.realize_crown_model(model, witness)
    out = geo.scene_to_dict(real.scene, real.val)
    out["cell"] = "".join({1: "+", 0: "0", -1: "-"}[s] for s in real.cell)
    print(_dump_json(out))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(geo.scene_to_svg(real.scene, real.val) + "\n")
    return 0


def _cmd_axioms(_args) -> int:
    print("(I) ", pretty(ax.axiom_I()))
    print("(II)", pretty(ax.axiom_II()))
    print("xi  ", pretty(ax.xi()))
    return 0


def _random_formula(rng: random.Random, size: int, names: list[str]) -> Formula:
    if size <= 1:
        leaves = [Var(n) for n in names] + [Bottom()]
        return rng.choice(leaves)
    if size == 2 or rng.random() < 0.4:
        op = rng.choice([Not, Box, Diamond])
        return op(_random_formula(rng, size - 1, names))
    split = rng.randint(1, size - 2)
    op = rng.choice([And, Or, Implies, Iff])
    return op(_random_formula(rng, split, names),
              _random_formula(rng, size - 1 - split, names))


def _cmd_fuzz(args) -> int:
    rng = random.Random(args.seed)
    print(f"seed {args.seed}", file=sys.stderr)
    names = ["p", "q", "r"]
    bad = 0
    for i in range(args.count):
        f = _random_formula(rng, rng.randint(1, args.max_size), names)
        res = mo.decide_sat(f)
        got = crown_sat_oracle(f, args.max_crown)
        if res.sat != (got is not None):
            bad += 1
            print(f"disagreement on {pretty(f)}: solver "
                  f"{'SAT' if res.sat else 'UNSAT'}, oracle "
                  f"{'SAT' if got else 'UNSAT'}", file=sys.stderr)
            continue
        if res.sat and not kr.eval_formula(res.model, res.world, f):
            bad += 1
            print(f"bad model for {pretty(f)}", file=sys.stderr)
        if res.sat:
            # path checking agrees with plain reachability on the tile pool
            pool = list(res.mosaics)
            depth = ceil(log2(len(pool) + 1))
            for a in pool[:4]:
                reach = mo.glue_reachable(a, pool)
                for b in pool[:4]:
                    if mo.check_path(a, b, pool, depth) != (b in reach or a == b):
                        bad += 1
                        print(f"check_path mismatch on {pretty(f)}", file=sys.stderr)
    print(f"{args.count} formulas, {bad} disagreements")
    return 0 if bad == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyplane",
                                 description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sat", help="decide satisfiability of a formula")
    p.add_argument("formula")
    p.add_argument("--model-out", metavar="FILE")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--strict-middle", action="store_true")
    p.add_argument("--oracle", type=int, metavar="MAXN",
                   help="use the exhaustive crown search up to MAXN instead")
    p.set_defaults(fn=_cmd_sat)

    p = sub.add_parser("valid", help="decide validity of a formula")
    p.add_argument("formula")
    p.add_argument("--model-out", metavar="FILE",
                   help="write the countermodel when invalid")
    p.set_defaults(fn=_cmd_valid)

    p = sub.add_parser("classify-frame", help="validates / refutes for a frame")
    p.add_argument("frame")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("reduce", help="crown reduction of a validated frame")
    p.add_argument("frame")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("jankov", help="frame formula of a rooted frame")
    p.add_argument("frame")
    p.set_defaults(fn=_cmd_jankov)

    p = sub.add_parser("eval-scene", help="evaluate a formula at a cell")
    p.add_argument("scene")
    p.add_argument("formula")
    p.add_argument("--cell", required=True,
                   help="sign signature, e.g. +0- (one of +,0,- per line)")
    p.set_defaults(fn=_cmd_eval_scene)

    p = sub.add_parser("realize", help="realize a crown model in the plane")
    p.add_argument("--model", required=True)
    p.add_argument("--world", type=int, default=0)
    p.add_argument("--svg", metavar="FILE")
    p.set_defaults(fn=_cmd_realize)

    p = sub.add_parser("fuzz", help="differential test of solver vs oracle")
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--max-crown", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(fn=_cmd_fuzz)

    p = sub.add_parser("axioms", help="print the axioms")
    p.set_defaults(fn=_cmd_axioms)
    return ap


def run(argv: list[str]) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.fn(args)
    except ParseError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 4
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
