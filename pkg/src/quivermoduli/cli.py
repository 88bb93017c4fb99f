"""Command-line front end.

One JSON document per invocation on stdout, a short human summary on
stderr.  Exit codes: 0 success, 1 verification failure, 2 usage error.
Identical invocations with identical seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .pipeline import (
    DEFAULT_SEED,
    identify_reference_fan,
    moduli_fan,
    run_verification,
)
from .quiver import Quiver, Weight, blowup_quiver, kronecker_quiver, validate
from .semiinvariants import hilbert_function
from .stability import Stability, classify_patterns, closed_form_stability

OUTPUT_DIR_ENV = "QUIVERMODULI_OUTPUT_DIR"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _parse_quiver_spec(spec) -> Quiver:
    """Builtin specs blowup:n,m and kronecker:n, or an inline JSON dict."""
    if isinstance(spec, dict):
        try:
            return Quiver.from_json_dict(spec)
        except (KeyError, TypeError, ValueError) as err:
            raise UsageError(f"bad inline quiver: {err}") from err
    try:
        name, _, params = spec.partition(":")
        values = [int(x) for x in params.split(",")] if params else []
        if name == "blowup" and len(values) == 2:
            return blowup_quiver(*values)
        if name == "kronecker" and len(values) == 1:
            return kronecker_quiver(*values)
    except ValueError as err:
        raise UsageError(f"bad quiver spec {spec!r}: {err}") from err
    raise UsageError(f"bad quiver spec {spec!r}; expected blowup:n,m or kronecker:n")


def _parse_weight(text, expected_length: int) -> Weight:
    try:
        if isinstance(text, (list, tuple)):
            entries = tuple(int(x) for x in text)
        else:
            entries = tuple(int(x) for x in text.split(","))
    except (TypeError, ValueError) as err:
        raise UsageError(f"bad weight {text!r}: {err}") from err
    if len(entries) != expected_length:
        raise UsageError(f"weight length {len(entries)} does not match {expected_length} vertices")
    try:
        return Weight(entries)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _emit(document: dict, args: argparse.Namespace, default_name: str) -> None:
    text = json.dumps(document, indent=2, sort_keys=True)
    print(text)
    path = getattr(args, "output", None)
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], default_name)
    if path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _cmd_quiver(args: argparse.Namespace) -> int:
    try:
        if args.family == "blowup":
            q = blowup_quiver(args.n, args.m)
        elif args.family == "kronecker":
            q = kronecker_quiver(args.n)
        else:  # inline
            if (args.json is None) == (args.file is None):
                raise UsageError("inline quivers need exactly one of --json or --file")
            raw = args.json if args.json is not None else open(args.file, encoding="utf-8").read()
            q = Quiver.from_json_dict(json.loads(raw))
    except (ValueError, OSError, json.JSONDecodeError) as err:
        raise UsageError(str(err)) from err
    report = validate(q)
    _emit({"quiver": q.to_json_dict(), "diagnostics": report}, args, "quiver-report.json")
    print(f"quiver: {len(q.arrows)} arrows, {len(report)} diagnostics", file=sys.stderr)
    return EXIT_OK if not report else EXIT_FAILURE


def _oracle_regime(q: Quiver, w: Weight) -> tuple[int, int, str]:
    """Recover (n, m, regime) when the weight has one of the closed-form shapes."""
    names = q.arrow_names
    if q.vertex_count != 3 or "e" not in names:
        raise UsageError("--check-oracle needs a blowup:n,m quiver")
    m = names.index("e") - 1
    n = len(names) - 2
    p = -w[0]
    if p <= 0:
        raise UsageError("oracle weights have a negative first entry")
    if w.entries == (-p, 0, p):
        return n, m, "wall"
    qv = w[2]
    if qv > p and w.entries == (-p, p - qv, qv):
        return n, m, "chamber"
    raise UsageError("oracle weights look like (-p,p-q,q) with 0<p<q or (-p,0,p)")


def _cmd_stability(args: argparse.Namespace) -> int:
    q = _parse_quiver_spec(args.quiver)
    w = _parse_weight(args.theta, q.vertex_count)
    try:
        classes = classify_patterns(q, w, bound=args.bound)
    except ValueError as err:
        raise UsageError(str(err)) from err
    counts = {s.value: 0 for s in Stability}
    for cls in classes.values():
        counts[cls.value] += 1
    document = {
        "quiver": q.to_json_dict(),
        "theta": list(w.entries),
        "arrow_order": list(q.arrow_names),
        "patterns": {p.to_string(): cls.value for p, cls in classes.items()},
        "counts": counts,
        "oracle_check": None,
    }
    exit_code = EXIT_OK
    if args.check_oracle:
        n, m, regime = _oracle_regime(q, w)
        mismatches = [
            p.to_string()
            for p, cls in classes.items()
            if closed_form_stability(n, m, p, regime) != cls
        ]
        document["oracle_check"] = {"regime": regime, "mismatches": mismatches}
        if mismatches:
            exit_code = EXIT_FAILURE
    _emit(document, args, "stability-report.json")
    print(
        "stability: " + ", ".join(f"{v} {k}" for k, v in sorted(counts.items())),
        file=sys.stderr,
    )
    return exit_code


def _cmd_moduli(args: argparse.Namespace) -> int:
    q = _parse_quiver_spec(args.quiver)
    w = _parse_weight(args.theta, q.vertex_count)
    result = moduli_fan(q, w)
    document = result.to_json_dict()
    document["hilbert"] = hilbert_function(q, w, args.r_max)
    document["identification"] = None
    if args.identify and result.fan is not None:
        name, witness = identify_reference_fan(result.fan)
        document["identification"] = {
            "match": name,
            "witness": [list(row) for row in witness] if witness else None,
        }
    _emit(document, args, "moduli-report.json")
    degenerate = result.fan is None
    summary = "degenerate/empty" if degenerate else f"fan with {len(result.fan.rays)} rays"
    if document["identification"]:
        summary += f", identified as {document['identification']['match']}"
    print(f"moduli: {summary}", file=sys.stderr)
    if degenerate and args.strict:
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    if not (0 < args.p < args.q):
        raise UsageError(f"need 0 < p < q, got p={args.p}, q={args.q}")
    try:
        blowup_quiver(args.n, args.m)
    except ValueError as err:
        raise UsageError(str(err)) from err
    document = run_verification(args.n, args.m, args.p, args.q,
                                samples=args.samples, seed=args.seed)
    _emit(document, args, f"verify-{args.n}-{args.m}-{args.p}-{args.q}.json")
    for stage in document["stages"]:
        mark = "ok" if stage["passed"] else "FAIL"
        print(f"verify[{stage['name']}]: {mark}", file=sys.stderr)
    return EXIT_OK if document["passed"] else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiver-moduli",
        description="Moduli of thin quiver representations as explicit toric varieties.",
    )
    parser.add_argument("--config", help="JobConfig JSON file supplying defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p_quiver = sub.add_parser("quiver", help="build and validate a quiver")
    fam = p_quiver.add_subparsers(dest="family", required=True)
    p_blowup = fam.add_parser("blowup")
    p_blowup.add_argument("--n", type=int, required=True)
    p_blowup.add_argument("--m", type=int, required=True)
    p_kron = fam.add_parser("kronecker")
    p_kron.add_argument("--n", type=int, required=True)
    p_inline = fam.add_parser("inline")
    p_inline.add_argument("--json")
    p_inline.add_argument("--file")
    for p in (p_blowup, p_kron, p_inline):
        p.add_argument("--output")
        p.set_defaults(func=_cmd_quiver)

    p_stab = sub.add_parser("stability", help="classify all zero patterns")
    p_stab.add_argument("--quiver", help="blowup:n,m or kronecker:n")
    p_stab.add_argument("--theta", help="comma-separated weight")
    p_stab.add_argument("--check-oracle", action="store_true",
                        help="cross-check the closed-form stability criteria")
    p_stab.add_argument("--bound", type=int, default=20)
    p_stab.add_argument("--output")
    p_stab.add_argument("--jobs", type=int, default=1, help="parallelism hint")
    p_stab.set_defaults(func=_cmd_stability)

    p_mod = sub.add_parser("moduli", help="build the moduli fan")
    p_mod.add_argument("--quiver")
    p_mod.add_argument("--theta")
    p_mod.add_argument("--r-max", type=int, default=None, dest="r_max")
    p_mod.add_argument("--identify", action="store_true")
    p_mod.add_argument("--strict", action="store_true")
    p_mod.add_argument("--output")
    p_mod.add_argument("--jobs", type=int, default=1, help="parallelism hint")
    p_mod.set_defaults(func=_cmd_moduli)

    p_ver = sub.add_parser("verify", help="run the full verification battery")
    p_ver.add_argument("--n", type=int, required=True)
    p_ver.add_argument("--m", type=int, required=True)
    p_ver.add_argument("--p", type=int, required=True)
    p_ver.add_argument("--q", type=int, required=True)
    p_ver.add_argument("--samples", type=int, default=None)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--output")
    p_ver.add_argument("--jobs", type=int, default=1, help="parallelism hint")
    p_ver.set_defaults(func=_cmd_verify)

    return parser


_FALLBACKS = {"samples": 100, "seed": DEFAULT_SEED, "r_max": 3}


def _apply_config(args: argparse.Namespace, config: dict) -> None:
    """Config fills options the command line left unset; flags win over config."""
    for key in ("quiver", "theta", "samples", "seed", "output", "r_max"):
        if key in config and getattr(args, key, None) is None:
            setattr(args, key, config[key])


def _apply_fallbacks(args: argparse.Namespace) -> None:
    for key, value in _FALLBACKS.items():
        if getattr(args, key, "absent") is None:
            setattr(args, key, value)
    for key in ("quiver", "theta"):
        if getattr(args, key, "absent") is None:
            raise UsageError(f"missing --{key} (and no config value)")


def _merge_negative_values(argv: Sequence[str]) -> list[str]:
    """Join flag/value pairs whose value starts with a minus sign.

    argparse treats "-1,-1,2" as an option string; writing --theta=-1,-1,2
    internally keeps the documented space-separated form working.
    """
    merged = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if (
            token in ("--theta",)
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
            and argv[i + 1][1:2].isdigit()
        ):
            merged.append(f"{token}={argv[i + 1]}")
            skip = True
        else:
            merged.append(token)
    return merged


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(argv))
    try:
        config = _load_config(args.config)
        if config:
            _apply_config(args, config)
        _apply_fallbacks(args)
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
