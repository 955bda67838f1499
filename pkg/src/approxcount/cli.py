"""Command-line surface: instance I/O, generation, counting, verification, benchmarks.

Instances travel as line-delimited JSON, one object per line, shaped as
{"problem": ..., "payload": {...}}. Numeric leaves are decimal strings so
values past 64 bits survive any JSON parser; plain JSON integers are also
accepted on input. Payload fields by problem:

    mtuples       {"sets": [["1","3","7"], ...], "bound": "17"}
    knapsack      {"weights": ["5","3"], "capacity": "10"}
    contingency2  {"row_sums": ["2","2"], "col_sums": ["2","1","1"]}

``count`` and ``verify`` emit one JSON result object per input line;
``bench`` emits RFC 4180 CSV. Epsilon is parsed to an exact rational
(accepts "0.25", "1/4", "7") and the verify sandwich check is exact
rational arithmetic, never floating point.

Exit codes: 0 success, 1 verification violation, 2 bad input or usage,
3 a resource cap tripped (see oracles for the caps).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from contextlib import nullcontext
from fractions import Fraction
from time import perf_counter

from .contingency import fptas_contingency2
from .errors import InvalidInput, MonotonicityViolation, TooLarge
from .knapsack import fptas_knapsack, strong_fptas_knapsack
from .mtuples import fptas_mtuples, strong_fptas_mtuples
from .oracles import (
    Contingency2Instance,
    KnapsackInstance,
    MTuplesInstance,
    brute_knapsack,
    brute_mtuples,
    dp_contingency_sum,
    dp_knapsack,
    dp_mtuples,
)

PROBLEMS = ("mtuples", "knapsack", "contingency2")
MODES = ("exact-dp", "exact-brute", "fptas", "strong-fptas")
APPROX_MODES = ("fptas", "strong-fptas")


def _as_int(value, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InvalidInput(f"{label}: expected an integer or decimal string, got {value!r}")
    try:
        return int(value)
    except ValueError as exc:
        raise InvalidInput(f"{label}: {value!r} is not a decimal integer") from exc


def _as_int_list(value, label: str) -> list[int]:
    if not isinstance(value, list):
        raise InvalidInput(f"{label}: expected a list")
    return [_as_int(v, label) for v in value]


def instance_from_payload(problem: str, payload) -> object:
    if not isinstance(payload, dict):
        raise InvalidInput("payload must be a JSON object")
    if problem == "mtuples":
        raw = payload.get("sets")
        if not isinstance(raw, list):
            raise InvalidInput("mtuples payload needs a 'sets' list")
        sets = tuple(tuple(_as_int_list(s, "sets")) for s in raw)
        return MTuplesInstance(sets=sets, bound=_as_int(payload.get("bound"), "bound"))
    if problem == "knapsack":
        weights = tuple(_as_int_list(payload.get("weights"), "weights"))
        return KnapsackInstance(weights=weights, capacity=_as_int(payload.get("capacity"), "capacity"))
    if problem == "contingency2":
        return Contingency2Instance(
            row_sums=tuple(_as_int_list(payload.get("row_sums"), "row_sums")),
            col_sums=tuple(_as_int_list(payload.get("col_sums"), "col_sums")),
        )
    raise InvalidInput(f"unknown problem {problem!r}")


def payload_from_instance(inst) -> dict:
    if isinstance(inst, MTuplesInstance):
        return {"sets": [[str(x) for x in s] for s in inst.sets], "bound": str(inst.bound)}
    if isinstance(inst, KnapsackInstance):
        return {"weights": [str(w) for w in inst.weights], "capacity": str(inst.capacity)}
    if isinstance(inst, Contingency2Instance):
        return {
            "row_sums": [str(r) for r in inst.row_sums],
            "col_sums": [str(s) for s in inst.col_sums],
        }
    raise TypeError(f"not an instance type: {type(inst)!r}")


def load_instances(path: str, problem_override: str | None):
    """Yield (problem, instance) pairs from a line-delimited JSON file."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"{path}:{lineno}: not valid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise InvalidInput(f"{path}:{lineno}: expected a JSON object")
            problem = obj.get("problem")
            if problem not in PROBLEMS:
                raise InvalidInput(f"{path}:{lineno}: unknown problem {problem!r}")
            if problem_override and problem != problem_override:
                raise InvalidInput(
                    f"{path}:{lineno}: instance is {problem!r} but --problem says {problem_override!r}"
                )
            yield problem, instance_from_payload(problem, obj.get("payload"))


def _parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"epsilon {text!r} is not a rational number") from exc
    if eps <= 0:
        raise InvalidInput("epsilon must be positive")
    return eps


def _exact_count(problem: str, inst) -> int:
    if problem == "mtuples":
        return dp_mtuples(inst)
    if problem == "knapsack":
        return dp_knapsack(inst)
    return dp_contingency_sum(inst)


def run_mode(problem: str, inst, mode: str, eps: Fraction | None):
    """Dispatch one count. Returns (count, oracle_calls, set_sizes, elapsed_s)."""
    if mode in APPROX_MODES and eps is None:
        raise InvalidInput(f"mode {mode} requires --epsilon")
    if mode == "exact-dp":
        t0 = perf_counter()
        return _exact_count(problem, inst), 0, [], perf_counter() - t0
    if mode == "exact-brute":
        if problem == "contingency2":
            raise InvalidInput("contingency2 has no brute-force mode; use exact-dp")
        t0 = perf_counter()
        count = brute_mtuples(inst) if problem == "mtuples" else brute_knapsack(inst)
        return count, 0, [], perf_counter() - t0
    if mode == "fptas":
        if problem == "mtuples":
            rep = fptas_mtuples(inst, eps)
        elif problem == "knapsack":
            rep = fptas_knapsack(inst, eps)
        else:
            rep = fptas_contingency2(inst, eps)
            sizes = [len(f.half.xs) for f in rep.compressed_functions]
            return rep.count, rep.oracle_calls, sizes, rep.elapsed
        return rep.count, rep.oracle_calls, list(rep.per_stage_set_sizes), rep.elapsed
    if mode == "strong-fptas":
        if problem == "mtuples":
            rep = strong_fptas_mtuples(inst, eps)
        elif problem == "knapsack":
            rep = strong_fptas_knapsack(inst, eps)
        else:
            raise InvalidInput("contingency2 has no strong-fptas mode; use fptas")
        return rep.count, rep.oracle_calls, list(rep.per_stage_set_sizes), rep.elapsed
    raise InvalidInput(f"unknown mode {mode!r}")


def _emit(out, record: dict) -> None:
    out.write(json.dumps(record, separators=(", ", ": ")))
    out.write("\n")


def _open_out(args):
    if args.out:
        return open(args.out, "w", newline="", encoding="utf-8")
    return nullcontext(sys.stdout)


def cmd_count(args) -> int:
    eps = _parse_epsilon(args.epsilon) if args.epsilon is not None else None
    if args.mode in APPROX_MODES and eps is None:
        raise InvalidInput(f"--epsilon is required for mode {args.mode}")
    with _open_out(args) as out:
        for problem, inst in load_instances(args.input, args.problem):
            count, calls, sizes, elapsed = run_mode(problem, inst, args.mode, eps)
            record = {"problem": problem, "mode": args.mode}
            if args.mode in APPROX_MODES:
                record["epsilon"] = str(eps)
            record.update(
                count=str(count),
                oracle_calls=calls,
                set_sizes=sizes,
                elapsed_ms=round(elapsed * 1000.0, 3),
            )
            _emit(out, record)
    return 0


def _generated(problem: str, rng: random.Random, args):
    if problem == "knapsack":
        weights = tuple(rng.randint(1, args.wmax) for _ in range(args.n))
        cap = args.cap if args.cap is not None else rng.randint(1, sum(weights))
        return KnapsackInstance(weights=weights, capacity=cap)
    if problem == "mtuples":
        sets = []
        for _ in range(args.m):
            size = rng.randint(1, min(args.setmax, args.valmax + 1))
            sets.append(tuple(sorted(rng.sample(range(args.valmax + 1), size))))
        bound = args.bound if args.bound is not None else rng.randint(0, sum(s[-1] for s in sets))
        return MTuplesInstance(sets=tuple(sets), bound=bound)
    # A random nonnegative 2 x n matrix always has consistent margins; bump a
    # zero column so every column sum is positive, as the instance type requires.
    cells = [[rng.randint(0, args.cellmax) for _ in range(args.n)] for _ in range(2)]
    for i in range(args.n):
        if cells[0][i] + cells[1][i] == 0:
            cells[0][i] = 1
    return Contingency2Instance(
        row_sums=(sum(cells[0]), sum(cells[1])),
        col_sums=tuple(cells[0][i] + cells[1][i] for i in range(args.n)),
    )


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    with _open_out(args) as out:
        for _ in range(args.trials):
            inst = _generated(args.problem, rng, args)
            _emit(out, {"problem": args.problem, "payload": payload_from_instance(inst)})
    return 0


def cmd_verify(args) -> int:
    eps = _parse_epsilon(args.epsilon)
    mode = args.mode
    if mode not in APPROX_MODES:
        raise InvalidInput("verify checks an approximate mode; use fptas or strong-fptas")
    if args.input:
        pairs = list(load_instances(args.input, args.problem))
    else:
        if not args.problem:
            raise InvalidInput("verify needs --input or --problem to generate instances")
        rng = random.Random(args.seed)
        pairs = [(args.problem, _generated(args.problem, rng, args)) for _ in range(args.trials)]

    violations = 0
    max_ratio = Fraction(0)
    bound = 1 + eps
    with _open_out(args) as out:
        for problem, inst in pairs:
            exact = _exact_count(problem, inst)
            count, calls, sizes, elapsed = run_mode(problem, inst, mode, eps)
            if exact == 0:
                ok = count == 0
            else:
                ratio = Fraction(count, exact)
                ok = exact <= count and ratio <= bound
                if ratio > max_ratio:
                    max_ratio = ratio
            record = {
                "problem": problem,
                "mode": mode,
                "epsilon": str(eps),
                "count": str(count),
                "exact": str(exact),
                "oracle_calls": calls,
                "set_sizes": sizes,
                "elapsed_ms": round(elapsed * 1000.0, 3),
                "ok": ok,
            }
            if exact > 0:
                record["ratio_vs_exact"] = str(Fraction(count, exact))
            if not ok:
                violations += 1
                record["payload"] = payload_from_instance(inst)
            _emit(out, record)
        _emit(
            out,
            {
                "summary": "verify",
                "trials": len(pairs),
                "violations": violations,
                "max_ratio": str(max_ratio),
                "bound": str(bound),
            },
        )
    return 1 if violations else 0


def _scaled(problem: str, inst, mult: int):
    if mult == 1:
        return inst
    if problem == "knapsack":
        return KnapsackInstance(
            weights=tuple(w * mult for w in inst.weights),
            capacity=inst.capacity * mult,
        )
    if problem == "mtuples":
        return MTuplesInstance(
            sets=tuple(tuple(x * mult for x in s) for s in inst.sets),
            bound=inst.bound * mult,
        )
    return Contingency2Instance(
        row_sums=tuple(r * mult for r in inst.row_sums),
        col_sums=tuple(s * mult for s in inst.col_sums),
    )


def cmd_bench(args) -> int:
    if args.epsilon:
        eps_list = [_parse_epsilon(tok) for tok in args.epsilon.split(",") if tok]
    else:
        eps_list = []
    scales = [int(tok) for tok in args.scales.split(",") if tok != ""]
    if any(k < 0 for k in scales):
        raise InvalidInput("scale exponents must be nonnegative")
    rng = random.Random(args.seed)
    base = _generated(args.problem, rng, args)
    size = args.m if args.problem == "mtuples" else args.n

    if eps_list:
        modes = ["fptas"] if args.problem == "contingency2" else ["fptas", "strong-fptas"]
        runs = [(m, e) for e in eps_list for m in modes]
    else:
        runs = [("exact-dp", None)]

    with _open_out(args) as out:
        writer = csv.writer(out)
        writer.writerow(
            ["algorithm", "size", "scale", "epsilon", "oracle_calls", "elapsed_ms", "set_size_max"]
        )
        for k in scales:
            inst = _scaled(args.problem, base, 10**k)
            for mode, eps in runs:
                count, calls, sizes, elapsed = run_mode(args.problem, inst, mode, eps)
                writer.writerow(
                    [
                        mode,
                        size,
                        10**k,
                        "" if eps is None else str(eps),
                        calls,
                        f"{elapsed * 1000.0:.3f}",
                        max(sizes, default=0),
                    ]
                )
    return 0


def _add_size_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=6, help="items (knapsack) or columns (contingency2)")
    parser.add_argument("--m", type=int, default=3, help="number of sets (mtuples)")
    parser.add_argument("--wmax", type=int, default=50, help="max item weight (knapsack)")
    parser.add_argument("--cap", type=int, default=None, help="knapsack capacity; random if omitted")
    parser.add_argument("--setmax", type=int, default=5, help="max elements per set (mtuples)")
    parser.add_argument("--valmax", type=int, default=30, help="max element value (mtuples)")
    parser.add_argument("--bound", type=int, default=None, help="mtuples sum bound; random if omitted")
    parser.add_argument("--cellmax", type=int, default=8, help="max cell value (contingency2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approxcount",
        description="Deterministic approximate counting with verifiable accuracy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="count instances from a file")
    p_count.add_argument("--input", required=True, help="line-delimited JSON instance file")
    p_count.add_argument("--problem", choices=PROBLEMS, help="require instances to match")
    p_count.add_argument("--mode", choices=MODES, default="fptas")
    p_count.add_argument("--epsilon", help="accuracy, e.g. 0.25 or 1/4")
    p_count.add_argument("--out", help="write results here instead of stdout")
    p_count.set_defaults(handler=cmd_count)

    p_verify = sub.add_parser("verify", help="check approximate counts against exact DP")
    p_verify.add_argument("--input", help="instance file; omit to generate instances")
    p_verify.add_argument("--problem", choices=PROBLEMS)
    p_verify.add_argument("--mode", choices=APPROX_MODES, default="fptas")
    p_verify.add_argument("--epsilon", required=True)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--out", help="write results here instead of stdout")
    _add_size_flags(p_verify)
    p_verify.set_defaults(handler=cmd_verify)

    p_gen = sub.add_parser("gen", help="generate random instances")
    p_gen.add_argument("--problem", choices=PROBLEMS, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--trials", type=int, default=1, help="how many instances")
    p_gen.add_argument("--out", help="write instances here instead of stdout")
    _add_size_flags(p_gen)
    p_gen.set_defaults(handler=cmd_gen)

    p_bench = sub.add_parser("bench", help="sweep magnitude scales, report oracle calls as CSV")
    p_bench.add_argument("--problem", choices=PROBLEMS, required=True)
    p_bench.add_argument("--epsilon", help="comma list, e.g. 0.25,1.0; empty runs exact-dp only")
    p_bench.add_argument("--scales", default="0,3,6", help="comma list of powers of ten")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", help="write CSV here instead of stdout")
    _add_size_flags(p_bench)
    p_bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidInput, MonotonicityViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
