"""Command-line interface.

Every command writes either a text report or a JSON document of the form
``{"command", "seed", "signature", "result"}``.  File arguments accept both
bare module payloads and such documents (the ``result`` is unwrapped), so
``gen-fixture`` output feeds straight into the other commands.

Exit codes: 0 success or positive verdict, 1 verified negative, 2 input
error, 3 hypotheses inapplicable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable

from . import obstruction as ob
from .curvature import CovDerivTensor, SymmetryError, check_symmetries, random_symmetric_tensor, szabo_at, szabo_polymap
from .exactpoly import InadmissibleSignature, Signature, format_rational, parse_rational
from .polydep import (
    PolyMapFamily,
    dependence_degree,
    descent_chain,
    is_zero_ideal,
    minor_generators,
    random_family,
)
from .pseudolin import PreconditionError, cube_nilpotent_fixture, upoly_str
from .spectral import constant_profile_fixture, eqny_identity_check, jordan_ker_im_at, spec_profile
from .szaboclass import (
    HomPolyMap,
    generic_fixture,
    nullcone_nilpotent_fixture,
    pclass_check,
    pointwise_nilpotent_on_nullcone,
    rank_one_fixture_11,
    vanishing_order_on_nullcone,
)

__all__ = ["main", "build_parser", "RunConfig", "EXIT_OK", "EXIT_NEGATIVE", "EXIT_INPUT", "EXIT_INAPPLICABLE"]

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INAPPLICABLE = 0, 1, 2, 3
DEFAULT_SEED = 0


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...]
    seed: int
    format: str
    signature: tuple[int, int] | None


@dataclass
class Outcome:
    code: int
    result: object
    text: str


# ---------------------------------------------------------------------------
# input helpers


def _parse_signature(text: str) -> tuple[int, int]:
    try:
        p, q = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q got {text!r}")
    if p < 0 or q < 0:
        raise argparse.ArgumentTypeError("signature entries must be nonnegative")
    return p, q


def _parse_vector(text: str):
    try:
        return [parse_rational(t.strip()) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector {text!r}: {exc}")


def _load(path: str, cfg: RunConfig) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc.msg} (line {exc.lineno})")
    if isinstance(data, dict) and "result" in data and "command" in data:
        data = data["result"]
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if cfg.signature is not None:
        data = dict(data, signature=list(cfg.signature))
    return data


def _decode(kind: Callable, data: dict, what: str):
    try:
        return kind(data)
    except InadmissibleSignature:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid {what}: {exc}")


# ---------------------------------------------------------------------------
# commands


def cmd_check_symmetries(args, cfg) -> Outcome:
    T = _decode(CovDerivTensor.from_json, _load(args.file, cfg), "tensor")
    bad = check_symmetries(T, limit=args.limit)
    result = {"valid": not bad, "violations": [v.to_json() for v in bad]}
    if bad:
        lines = [f"{len(bad)} violation(s) (first {args.limit} listed)"]
        lines += [f"  {v.identity} at {list(v.index)}: residual {v.residual}" for v in bad]
        return Outcome(EXIT_NEGATIVE, result, "\n".join(lines))
    return Outcome(EXIT_OK, result, "all symmetry identities hold")


def cmd_szabo(args, cfg) -> Outcome:
    T = _decode(CovDerivTensor.from_json, _load(args.file, cfg), "tensor")
    try:
        if args.poly:
            S = szabo_polymap(T)
            return Outcome(EXIT_OK, S.to_json(), "\n".join(" | ".join(str(e) for e in row) for row in S.entries))
        if args.at is None:
            raise InputError("give --at v or --poly")
        M = szabo_at(T, _parse_vector(args.at))
    except SymmetryError as exc:
        raise InputError(str(exc))
    return Outcome(EXIT_OK, M.to_json(), "\n".join(" ".join(str(x) for x in r) for r in M.rows))


def _load_map(args, cfg) -> HomPolyMap:
    return _decode(HomPolyMap.from_json, _load(args.file, cfg), "polynomial map")


def cmd_pclass(args, cfg) -> Outcome:
    S = _load_map(args, cfg)
    rep = pclass_check(S)
    if rep.member:
        text = f"member of P_{rep.n} (degree {rep.degree})"
    else:
        text = "not a member:\n" + "\n".join(f"  {f['property']}" + (f" at {f.get('entry', f.get('row'))}" if "detail" not in f else f": {f['detail']}") for f in rep.failures)
    return Outcome(EXIT_OK if rep.member else EXIT_NEGATIVE, rep.to_json(), text)


def cmd_nilpotency(args, cfg) -> Outcome:
    S = _load_map(args, cfg)
    nil = pointwise_nilpotent_on_nullcone(S)
    order = vanishing_order_on_nullcone(S)
    cube_ok = order.order is not None and order.order <= 3
    result = {
        "nilpotent": nil.nilpotent,
        "first_trace_failure": nil.first_failure,
        "vanishing_order": order.order,
        "odd_below": order.odd_below,
        "order_at_most_3": cube_ok,
    }
    lines = [
        "pointwise nilpotent on the nullcone" if nil.nilpotent else f"not nilpotent on the nullcone (Tr S^{nil.first_failure} not divisible by q)",
        f"vanishing order: {order.order if order.order is not None else 'none'}",
        f"S^3 = 0 over the nullcone: {'yes' if cube_ok else 'no'}",
    ]
    return Outcome(EXIT_OK if nil.nilpotent else EXIT_NEGATIVE, result, "\n".join(lines))


def cmd_dependence(args, cfg) -> Outcome:
    fam = _decode(PolyMapFamily.from_json, _load(args.file, cfg), "family")
    ideal = minor_generators(fam)
    if is_zero_ideal(ideal):
        return Outcome(EXIT_NEGATIVE, {"status": "zero ideal", "k": None, "chain": []}, "zero ideal: the maps are dependent everywhere")
    k = dependence_degree(fam, ideal)
    chain = descent_chain(fam, seed=cfg.seed)
    steps = [
        {
            "k_before": st.k_before,
            "k_after": st.k_after,
            "identity_holds": st.identity_holds,
            "certificate": st.certificate.to_json(),
            "family": st.after.to_json(),
        }
        for st in chain
    ]
    result = {"status": "nonzero ideal", "k": k, "chain": steps}
    lines = [f"k = {k}"]
    for i, st in enumerate(chain, 1):
        c = st.certificate
        lines.append(f"  step {i}: replace column {c.pivot}; k {st.k_before} -> {st.k_after}; minors scale by q: {st.identity_holds}")
        lines.append("    coefficients: " + ", ".join(str(x) for x in c.coefficients))
        lines.append("    y: " + ", ".join(str(x) for x in c.y))
    ok = all(st.identity_holds for st in chain) and (not chain or chain[-1].k_after == 0)
    return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, result, "\n".join(lines))


def cmd_spectral(args, cfg) -> Outcome:
    S = _load_map(args, cfg)
    v0 = _parse_vector(args.source) if args.source else None
    profile = spec_profile(S, v0)
    rep = eqny_identity_check(S, profile)
    result = {
        "profile": profile.to_json() if profile else None,
        "identity_holds": rep.holds,
        "diagnosis": rep.diagnosis,
        "residual_entry": list(rep.residual_entry) if rep.residual_entry else None,
    }
    lines = [
        f"profile: l = {profile.l}, sigma = {[str(s) for s in profile.sigma]}, mu = {upoly_str(profile.mu_minus)}" if profile else "profile: none",
        "S A = 0 holds" if rep.holds else f"S A = 0 fails: {rep.diagnosis}",
    ]
    if args.at:
        ki = jordan_ker_im_at(S.evaluate(_parse_vector(args.at)))
        result["ker_im"] = {"holds": ki.holds, "mu": upoly_str(ki.mu), "image": [[format_rational(x) for x in v] for v in ki.image]}
        lines.append(f"Ker m(S(v)) = Im S(v): {ki.holds}")
    code = EXIT_OK if rep.holds and result.get("ker_im", {}).get("holds", True) else EXIT_NEGATIVE
    return Outcome(code, result, "\n".join(lines))


def _trace_outcome(trace: ob.ProofTrace, extra: dict | None = None) -> Outcome:
    result = dict(extra or {})
    result.update(trace.to_json())
    code = EXIT_OK if trace.verdict in (ob.INFEASIBLE, "consistent", "locally symmetric") else EXIT_NEGATIVE
    if trace.verdict == "vacuous":
        code = EXIT_INAPPLICABLE
    return Outcome(code, result, trace.render())


def cmd_obstruction(args, cfg) -> Outcome:
    if args.n is None or args.r is None:
        raise InputError("--n and --r are required")
    if args.case == 1:
        trace = ob.techn_case1(args.n, args.r)
    elif args.case == 2:
        trace = ob.techn_case2(args.n, args.r, args.rank_max)
    else:
        if args.k is None:
            raise InputError("--k is required for case 3")
        trace = ob.techn_case3(args.n, args.k, args.r)
    return _trace_outcome(trace)


def cmd_wolf(args, cfg) -> Outcome:
    if cfg.signature is None:
        raise InputError("--signature p,q is required")
    w = ob.wolf_verdict(*cfg.signature)
    out = _trace_outcome(w.trace, {"signature": [w.p, w.q]})
    out.text = f"({w.p},{w.q}): {w.verdict}\n" + "\n".join(out.text.splitlines()[1:])
    return out


FIXTURES = ("tensor", "szabo", "nilpotent", "generic", "rank-one-11", "constant-profile", "family", "cube-nilpotent")


def cmd_gen_fixture(args, cfg) -> Outcome:
    sig = Signature(*cfg.signature) if cfg.signature else None
    kind = args.kind
    if kind == "rank-one-11":
        obj = rank_one_fixture_11()
    elif kind == "constant-profile":
        obj = constant_profile_fixture(args.n)
    elif sig is None:
        raise InputError(f"fixture {kind!r} needs --signature")
    elif kind == "tensor":
        obj = random_symmetric_tensor(sig, cfg.seed)
    elif kind == "szabo":
        obj = szabo_polymap(random_symmetric_tensor(sig, cfg.seed))
    elif kind == "nilpotent":
        obj = nullcone_nilpotent_fixture(sig)
    elif kind == "generic":
        obj = generic_fixture(sig)
    elif kind == "family":
        obj = random_family(sig, args.w, args.r, args.k, cfg.seed)
    else:
        M = cube_nilpotent_fixture(sig, cfg.seed)
        return Outcome(EXIT_OK, {"signature": sig.to_json(), "matrix": M.to_json()}, "\n".join(" ".join(str(x) for x in r) for r in M.rows))
    data = obj.to_json()
    return Outcome(EXIT_OK, data, json.dumps(data, indent=2))


COMMANDS = {
    "check-symmetries": cmd_check_symmetries,
    "szabo": cmd_szabo,
    "pclass": cmd_pclass,
    "nilpotency": cmd_nilpotency,
    "dependence": cmd_dependence,
    "spectral": cmd_spectral,
    "obstruction": cmd_obstruction,
    "wolf": cmd_wolf,
    "gen-fixture": cmd_gen_fixture,
}


# ---------------------------------------------------------------------------
# parser and driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--signature", type=_parse_signature, default=None, help="p,q; overrides the file's signature")

    parser = argparse.ArgumentParser(prog="szabo", description="Szabo operators and rank obstructions, in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-symmetries", parents=[common], help="check the tensor identities")
    s.add_argument("file")
    s.add_argument("--limit", type=int, default=20)

    s = sub.add_parser("szabo", parents=[common], help="Szabo operator of a tensor")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--at", help="vector as comma-separated rationals")
    g.add_argument("--poly", action="store_true", help="emit the degree-3 polynomial map")

    for name, helptext in (("pclass", "membership in the class P_n"), ("nilpotency", "behaviour over the nullcone")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")

    s = sub.add_parser("dependence", parents=[common], help="dependence degree and descent chain")
    s.add_argument("file")

    s = sub.add_parser("spectral", parents=[common], help="spectral profile and the annihilation identity")
    s.add_argument("file")
    s.add_argument("--source", help="unit timelike vector for the profile (default e1)")
    s.add_argument("--at", help="also check Ker m(S(v)) = Im S(v) at this vector")

    s = sub.add_parser("obstruction", parents=[common], help="rank argument over RP^n")
    s.add_argument("--case", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--rank-max", type=int, default=None)

    sub.add_parser("wolf", parents=[common], help="verdict for a signature")

    s = sub.add_parser("gen-fixture", parents=[common], help="write a seeded fixture as JSON")
    s.add_argument("kind", choices=FIXTURES)
    s.add_argument("--n", type=int, default=1, help="power of q for constant-profile")
    s.add_argument("--w", type=int, default=3)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--k", type=int, default=1)
    return parser


def run(argv=None) -> tuple[int, str, str]:
    """Run a command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_OK), "", ""
    cfg = RunConfig(
        command=args.command,
        inputs=tuple(x for x in [getattr(args, "file", None)] if x),
        seed=args.seed,
        format=args.format,
        signature=args.signature,
    )
    try:
        out = COMMANDS[args.command](args, cfg)
    except (InadmissibleSignature, ob.InapplicableError) as exc:
        return EXIT_INAPPLICABLE, "", f"inapplicable: {exc}\n"
    except (InputError, PreconditionError, ValueError) as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    if cfg.format == "json":
        doc = {
            "command": cfg.command,
            "seed": cfg.seed,
            "signature": list(cfg.signature) if cfg.signature else None,
            "exit_code": out.code,
            "result": out.result,
        }
        return out.code, json.dumps(doc, indent=2) + "\n", ""
    return out.code, out.text + "\n", ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
