"""Command-line entry point.  Each command parses documents, calls the library, prints JSON."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import documents, finite_approx, integer_oracle, leximax_lp, rounding, sampling
from .errors import LeximaxError, SchemaError, ValidationError
from .model import FiniteInstance, Instance, group_utilities, sorted_utilities

DEFINITIONS = ("exact", "elementwise", "tradeoff", "sig-tradeoff", "recursive", "significant",
               "function-slack")


class UsageError(LeximaxError):
    category = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _instance(path: str) -> Instance:
    inst = documents.parse_instance(_read(path))
    if not isinstance(inst, Instance):
        raise SchemaError(f"{path} holds a finite instance; a candidate instance is required")
    return inst


def _finite(path: str) -> FiniteInstance:
    inst = documents.parse_instance(_read(path))
    if not isinstance(inst, FiniteInstance):
        raise SchemaError(f"{path} holds a candidate instance; a finite instance is required")
    return inst


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def result_document(instance: Instance, result: leximax_lp.LeximaxResult) -> dict:
    y = group_utilities(instance, result.x)
    return {
        "mode": result.mode,
        "alpha": list(result.alpha),
        "candidates": list(instance.candidate_ids),
        "groups": list(instance.group_ids),
        "k": instance.k,
        "x": result.x.x.tolist(),
        "gamma": list(result.gamma.gammas),
        "cumulative": list(result.gamma.cumulative),
        "targets": list(result.targets),
        "group_utilities": y.tolist(),
        "sorted_utilities": list(sorted_utilities(y).entries),
        "stage_cuts": list(result.stage_cuts),
        "total_cuts": result.total_cuts,
    }


def cmd_solve(args) -> dict:
    inst = _instance(args.instance)
    if args.mode == "exact":
        if args.alpha is not None or args.epsilon is not None:
            raise UsageError("exact mode takes neither --alpha nor --epsilon")
        result = leximax_lp.leximax_marginals(inst)
    elif args.mode == "recursive":
        if args.alpha is None:
            raise UsageError("recursive mode needs --alpha")
        result = leximax_lp.approx_leximax_marginals(inst, _floats(args.alpha))
    else:
        if args.epsilon is None:
            raise UsageError("significant mode needs --epsilon")
        result = leximax_lp.significant_leximax_marginals(inst, args.epsilon)
    return result_document(inst, result)


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"this definition needs {flag}")
    return value


def check_table(inst: FiniteInstance, definition: str, epsilon=None, eps2=None, a1=None, a2=None):
    """Per-solution truth values of one definition, plus the parameters used."""
    fa = finite_approx
    ids = range(inst.num_solutions)
    if definition == "exact":
        members = fa.exact_leximax_set(inst)
        return {}, [s in members for s in ids]
    if definition == "significant":
        eps = _require(epsilon, "--epsilon")
        members = fa.significant_set(inst, eps)
        return {"epsilon": eps}, [s in members for s in ids]
    if definition == "elementwise":
        eps = _require(epsilon, "--epsilon")
        return {"epsilon": eps}, [fa.is_elementwise_approx(inst, s, eps) for s in ids]
    if definition == "tradeoff":
        eps = _require(epsilon, "--epsilon")
        return {"epsilon": eps}, [fa.is_tradeoff_approx(inst, s, eps) for s in ids]
    if definition == "recursive":
        eps = _require(epsilon, "--epsilon")
        return {"epsilon": eps}, [fa.is_recursive_approx(inst, s, eps) for s in ids]
    if definition == "sig-tradeoff":
        eps = _require(epsilon, "--epsilon")
        e2 = _require(eps2, "--eps2")
        return {"epsilon": eps, "eps2": e2}, [fa.is_sig_tradeoff(inst, s, eps, e2) for s in ids]
    if definition == "function-slack":
        lo = _require(a1, "--a1")
        hi = _require(a2, "--a2")
        return {"a1": lo, "a2": hi}, [fa.is_function_slack_significant(inst, s, lo, hi) for s in ids]
    raise UsageError(f"unknown definition {definition!r}")


def cmd_check(args) -> dict:
    inst = _finite(args.instance)
    params, flags = check_table(inst, args.definition, args.epsilon, args.eps2, args.a1, args.a2)
    return {
        "definition": args.definition,
        "parameters": params,
        "results": [{"solution": sid, "holds": bool(f)} for sid, f in zip(inst.solution_ids, flags)],
    }


def cmd_round(args) -> dict:
    text = _read(args.marginals)
    x = documents.parse_marginals(text)
    cohort = rounding.dependent_round(x, args.seed)
    out = {"seed": args.seed, "selected": list(cohort.selected), "indicator": cohort.indicator.tolist()}
    data = documents._load(text)
    if "candidates" in data:
        out["selected_candidates"] = [data["candidates"][i] for i in cohort.selected]
    return out


def cmd_sample(args) -> dict:
    inst = _instance(args.instance)
    x = documents.parse_marginals(_read(args.marginals))
    if len(x) != inst.n:
        raise ValidationError(f"marginals have length {len(x)}, instance has {inst.n} candidates")
    report = sampling.concentration_report(inst, x, args.delta, args.trials, args.seed)
    return {
        "delta": report.delta,
        "trials": report.trials,
        "seed": report.seed,
        "groups": [
            {
                "group": g.group,
                "expected_utility": g.expected_utility,
                "empirical_tail": g.empirical_tail,
                "bound": g.bound,
                "slack": g.slack,
                "within_bound": g.within_bound,
            }
            for g in report.groups
        ],
    }


def cmd_oracle(args) -> dict:
    inst = _instance(args.instance)
    alpha = _floats(args.alpha) if args.alpha is not None else None
    if alpha is None:
        lazy = leximax_lp.leximax_marginals(inst)
    else:
        lazy = leximax_lp.approx_leximax_marginals(inst, alpha)
    full = leximax_lp.full_enumeration_reference(inst, alpha)
    diff = np.abs(np.array(lazy.gamma.gammas) - np.array(full.gamma.gammas))
    return {
        "alpha": list(lazy.alpha),
        "lazy": list(lazy.gamma.gammas),
        "enumerated": list(full.gamma.gammas),
        "max_discrepancy": float(diff.max()),
        "lazy_cuts": lazy.total_cuts,
    }


def cmd_integer(args) -> dict:
    inst = _instance(args.instance)
    if args.maxmin:
        res = integer_oracle.integer_maxmin_bruteforce(inst, args.k)
        return {"k": args.k, "maxmin": res.value, "cohorts": [list(c) for c in res.cohorts]}
    res = integer_oracle.integer_leximax_bruteforce(inst, args.k)
    return {"k": args.k, "sorted_vector": list(res.sorted_vector),
            "cohorts": [list(c) for c in res.cohorts]}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leximax", description="Leximax cohort selection toolkit.")
    p.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="exact or slack-relaxed leximax marginals")
    s.add_argument("instance")
    s.add_argument("--mode", choices=("exact", "recursive", "significant"), default="exact")
    s.add_argument("--alpha", help="comma-separated slack per level")
    s.add_argument("--epsilon", type=float)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="evaluate a definition on every solution of a finite instance")
    c.add_argument("instance")
    c.add_argument("--definition", choices=DEFINITIONS, required=True)
    c.add_argument("--epsilon", type=float)
    c.add_argument("--eps2", type=float)
    c.add_argument("--a1", type=float)
    c.add_argument("--a2", type=float)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("round", help="dependent rounding to exactly k members")
    r.add_argument("marginals")
    r.add_argument("--seed", type=int, required=True)
    r.set_defaults(func=cmd_round)

    sm = sub.add_parser("sample", help="empirical lower-tail report for independent sampling")
    sm.add_argument("instance")
    sm.add_argument("marginals")
    sm.add_argument("--trials", type=int, required=True)
    sm.add_argument("--delta", type=float, required=True)
    sm.add_argument("--seed", type=int, required=True)
    sm.set_defaults(func=cmd_sample)

    o = sub.add_parser("oracle", help="lazy vs fully enumerated stage optima")
    o.add_argument("instance")
    o.add_argument("--alpha")
    o.set_defaults(func=cmd_oracle)

    i = sub.add_parser("integer", help="brute-force integer leximax or maxmin cohorts")
    i.add_argument("instance")
    i.add_argument("-k", type=int, required=True)
    i.add_argument("--maxmin", action="store_true")
    i.set_defaults(func=cmd_integer)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = documents.dumps(args.func(args))
    except LeximaxError as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {exc.category}: {msg}", file=sys.stderr)
        return 2 if isinstance(exc, UsageError) else 1
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
