"""``mqt`` command-line front end.

Every command prints one JSON report (keys sorted, so runs diff cleanly).
Exit codes: 0 when the claim is verified or the object was constructed,
2 when the claim is refuted and the report carries the witness, 1 on usage
or precondition errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .clone_delete import (
    CloneTask,
    build_cloner,
    build_deleter,
    clone_problem,
    delete_problem,
    delete_with_record,
    exists_linear_map,
    no_clone_witness,
    no_delete_machine_witness,
)
from .distinguish import (
    StateSet,
    build_discriminator,
    find_dependency,
    lemma_two_copy,
    min_copies,
    n_copy_set,
)
from .errors import MQTError, PreconditionError
from .fixtures import list_fixtures, load_fixture
from .gf import FieldSpec, Polynomial, find_irreducible_quadratic
from .hiding import (
    AqtHidingInstance,
    HidingMapSpec,
    aqt_unhide_demo,
    build_hiding_map,
    product_state_locator,
    verify_hiding,
)
from .reproduce import reproduce_paper
from .states import ModalState

EXIT_OK, EXIT_ERROR, EXIT_REFUTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_json(text: str):
    """Inline JSON, or the path of a UTF-8 JSON file."""
    path = Path(text)
    if not text.lstrip().startswith(("[", "{")) and path.is_file():
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None


def _witness_json(w):
    if w is None:
        return None
    return w.to_json() if hasattr(w, "to_json") else w


# -- argument → object helpers -----------------------------------------


def _states(args) -> StateSet:
    if args.fixture:
        fx = load_fixture(args.fixture, args.fixtures_dir)
        if fx.get("kind") != "states":
            raise UsageError(f"fixture {args.fixture!r} does not describe a state set")
        return StateSet.from_json(fx)
    if args.states is None:
        raise UsageError("one of --states or --fixture is required")
    if args.p is None:
        raise UsageError("--p is required with --states")
    f = FieldSpec(args.p)
    if args.states == "all-rays":
        return StateSet.all_rays(f, args.dim)
    data = _load_json(args.states)
    if isinstance(data, dict):
        data = data["states"]
    return StateSet.of(f, data)


def _blank(args, s: StateSet):
    if getattr(args, "blank", None) is None:
        return None
    return ModalState.of(s.field, _load_json(args.blank))


def _hiding_spec(args) -> HidingMapSpec:
    if args.fixture:
        fx = load_fixture(args.fixture, args.fixtures_dir)
        if fx.get("kind") != "hiding":
            raise UsageError(f"fixture {args.fixture!r} does not describe a hiding map")
        return HidingMapSpec.from_json(fx)
    if args.spec is None:
        raise UsageError("one of --spec or --fixture is required")
    return HidingMapSpec.from_json(_load_json(args.spec))


def _complex_matrix(data):
    def cx(z):
        if isinstance(z, (list, tuple)):
            return complex(z[0], z[1])
        return complex(z)

    return np.array([[cx(z) for z in row] for row in data], dtype=complex)


# -- command handlers: each returns (exit_code, verdict, result) -------


def cmd_min_copies(args):
    a = min_copies(_states(args), args.strategy, args.cap)
    return EXIT_OK, "computed", a.to_json()


def cmd_distinguish_check(args):
    s = _states(args)
    dep = find_dependency(s)
    if dep is None:
        return EXIT_OK, "distinguishable", {"states": s.to_json()}
    return EXIT_REFUTED, "dependent", {"states": s.to_json(), "witness": dep.to_json(),
                                        "dependent_index": dep.dependent_index}


def cmd_discriminator(args):
    s = _states(args)
    d = build_discriminator(n_copy_set(s, args.copies))
    return EXIT_OK, "constructed", {
        "copies": args.copies,
        "basis": d.basis.to_json(),
        "decision": {str(k): v for k, v in sorted(d.decision.items())},
    }


def cmd_lemma(args):
    ok = lemma_two_copy(_states(args))
    return (EXIT_OK if ok else EXIT_REFUTED), ("holds" if ok else "violated"), {"two_copy_independent": ok}


def _copies(args, s):
    return args.copies if args.copies is not None else min_copies(s).M


def cmd_clone_build(args):
    s = _states(args)
    n = _copies(args, s)
    task = CloneTask(s, n, _blank(args, s))
    t = build_deleter(task) if args.command == "delete" else build_cloner(task)
    key = "deleter" if args.command == "delete" else "cloner"
    return EXIT_OK, "constructed", {"copies": n, key: t.to_json(), "blank": list(task.blank.coeffs)}


def cmd_feasibility(args):
    s = _states(args)
    n = _copies(args, s)
    build = delete_problem if args.command == "delete" else clone_problem
    prob = build(s, n, _blank(args, s), exact=args.exact, require_invertible=not args.allow_singular)
    r = exists_linear_map(prob)
    return (EXIT_OK if r.feasible else EXIT_REFUTED), r.status, {"copies": n, **r.to_json()}


def cmd_clone_witness(args):
    s = _states(args)
    n = args.copies if args.copies is not None else 1
    cloner = build_cloner(CloneTask(s, n, _blank(args, s)))
    span_states = s
    if args.superpose is not None:
        span_states = StateSet.of(s.field, _load_json(args.superpose))
    w = no_clone_witness(cloner, span_states, n, _blank(args, s))
    result = {"copies": n, "cloner": cloner.to_json(), "witness": _witness_json(w)}
    if w is None:
        return EXIT_OK, "no-witness", result
    return EXIT_REFUTED, "fails-to-clone", result


def cmd_delete_witness(args):
    s = _states(args)
    sigma = None if args.sigma is None else ModalState.of(s.field, _load_json(args.sigma))
    w = no_delete_machine_witness(s, _blank(args, s), args.ancilla_dim, sigma)
    if w.is_required_form:
        return EXIT_OK, "deleted", w.to_json()
    return EXIT_REFUTED, "leaks", w.to_json()


def cmd_delete_record(args):
    s = _states(args)
    m = _copies(args, s)
    d = delete_with_record(s, m)
    rows = []
    ok = True
    for i, psi in enumerate(s):
        rest, ident = d.delete(n_copy_set(StateSet((psi,)), m)[0])
        back = d.reconstruct(ident)
        ok &= back == psi and ident == i
        rows.append({"member": list(psi.coeffs), "identifier": ident,
                     "remaining": None if rest is None else list(rest.coeffs),
                     "reconstructed": list(back.coeffs)})
    return (EXIT_OK if ok else EXIT_REFUTED), ("round-trip" if ok else "mismatch"), {
        "copies": m, "procedure": d.to_json(), "members": rows}


def cmd_hide_construct(args):
    f = FieldSpec(args.p)
    q = Polynomial.from_coeffs(_load_json(args.poly), f) if args.poly else find_irreducible_quadratic(f)
    spec = build_hiding_map(f, q)
    return EXIT_OK, "constructed", {"poly": q.to_json(), "spec": spec.to_json()}


def cmd_hide_verify(args):
    rep = verify_hiding(_hiding_spec(args))
    return (EXIT_OK if rep.hides else EXIT_REFUTED), rep.verdict, rep.to_json()


def cmd_hide_locate(args):
    spec = _hiding_spec(args)
    ws = product_state_locator(spec)
    result = {"spec": spec.to_json(), "pencil": list(spec.pencil_coefficients()),
              "witnesses": [w.to_json() for w in ws]}
    return (EXIT_REFUTED if ws else EXIT_OK), ("fails" if ws else "hides"), result


def cmd_aqt_demo(args):
    if args.c is None:
        inst = AqtHidingInstance.random(np.random.default_rng(args.seed))
        if args.lam is not None:
            inst = AqtHidingInstance(args.lam, inst.C)
    else:
        if args.lam is None:
            raise UsageError("--lambda is required with --c")
        inst = AqtHidingInstance(args.lam, _complex_matrix(_load_json(args.c)))
    w = aqt_unhide_demo(inst)
    return EXIT_OK, "product-found", {"lambda": inst.lam, **w.to_json()}


def cmd_reproduce(args):
    only = None if not args.only else [x for part in args.only for x in part.split(",") if x]
    try:
        rep = reproduce_paper(only=only, fixtures_dir=args.fixtures_dir, seed=args.seed, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    timing = rep.pop("timing")
    code = EXIT_OK if rep["passed"] else EXIT_REFUTED
    return code, ("all-passed" if rep["passed"] else "failed: " + ", ".join(rep["failed"])), rep, timing


def cmd_fixtures(args):
    return EXIT_OK, "listed", {name: load_fixture(name, args.fixtures_dir) for name in list_fixtures(args.fixtures_dir)}


# -- parser --------------------------------------------------------------


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("MQT_WORKERS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: $MQT_WORKERS or 1)")
    common.add_argument("--fixtures-dir", default=None, help="load fixtures from this directory")

    states = _Parser(add_help=False)
    states.add_argument("--p", type=int)
    states.add_argument("--dim", type=int, default=2)
    states.add_argument("--states", help="'all-rays', inline JSON list of coefficient lists, or a JSON file")
    states.add_argument("--fixture")

    spec = _Parser(add_help=False)
    spec.add_argument("--spec", help="inline JSON or path: {\"p\":..,\"M0\":[[..]],\"M1\":[[..]]}")
    spec.add_argument("--fixture")

    parser = _Parser(prog="mqt", description="Modal quantum theory over prime fields.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(sub, name, handler, parents, **kw):
        p = sub.add_parser(name, parents=[common, *parents], **kw)
        p.set_defaults(handler=handler)
        return p

    dist = top.add_parser("distinguish").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(dist, "min-copies", cmd_min_copies, [states], help="least copy count making the set independent")
    p.add_argument("--strategy", choices=("increment", "double"), default="increment")
    p.add_argument("--cap", type=int, default=64)
    leaf(dist, "check", cmd_distinguish_check, [states], help="independence test with dependency witness")
    p = leaf(dist, "discriminator", cmd_discriminator, [states], help="basis identifying each member")
    p.add_argument("--copies", type=int, default=1)
    leaf(dist, "lemma", cmd_lemma, [states], help="two-copy independence of d+1 states spanning d dims")

    for group in ("clone", "delete"):
        sub = top.add_parser(group).add_subparsers(dest="action", required=True, parser_class=_Parser)
        p = leaf(sub, "build", cmd_clone_build, [states])
        p.add_argument("--copies", type=int, help="N (default: the set's minimum copy count)")
        p.add_argument("--blank", help="blank state coefficients (default |0>)")
        p = leaf(sub, "check", cmd_feasibility, [states], help="exact feasibility of a linear machine")
        p.add_argument("--copies", type=int)
        p.add_argument("--blank")
        p.add_argument("--exact", action="store_true", help="exact targets instead of rays")
        p.add_argument("--allow-singular", action="store_true", help="do not require invertibility")
        if group == "clone":
            p = leaf(sub, "witness", cmd_clone_witness, [states],
                     help="build a cloner for the set and find a superposition it fails on")
            p.add_argument("--copies", type=int)
            p.add_argument("--blank")
            p.add_argument("--superpose", help="superpose these states instead of the members")
        else:
            p = leaf(sub, "witness", cmd_delete_witness, [states],
                     help="deleter with a machine register applied to a dependent state")
            p.add_argument("--blank")
            p.add_argument("--sigma")
            p.add_argument("--ancilla-dim", type=int, default=2)
            p = leaf(sub, "with-record", cmd_delete_record, [states],
                     help="delete M -> M-1 copies keeping a classical identifier")
            p.add_argument("--copies", type=int)

    hide = top.add_parser("hide").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(hide, "construct", cmd_hide_construct, [])
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--poly", help="ascending coefficients of a monic quadratic, e.g. [1,0,1]")
    leaf(hide, "verify", cmd_hide_verify, [spec])
    leaf(hide, "locate", cmd_hide_locate, [spec])
    p = leaf(hide, "aqt-demo", cmd_aqt_demo, [])
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--c", help="2x2 JSON matrix; entries are numbers or [re, im] pairs")
    p.add_argument("--seed", type=int, default=0)

    p = top.add_parser("reproduce", parents=[common], help="run the full reproduction battery")
    p.set_defaults(handler=cmd_reproduce)
    p.add_argument("--only", action="append", help="restrict to groups or item names (comma separated)")
    p.add_argument("--seed", type=int, default=0)

    p = top.add_parser("fixtures", parents=[common], help="list shipped fixtures")
    p.set_defaults(handler=cmd_fixtures)
    return parser


def _text(report: dict) -> str:
    lines = [f"{' '.join(report['command'])}", f"verdict: {report['verdict']}"]
    result = report.get("result") or {}
    if "items" in result:
        for item in result["items"]:
            lines.append(f"  [{'PASS' if item['passed'] else 'FAIL'}] {item['group']}/{item['name']}")
    else:
        for k in sorted(result):
            lines.append(f"  {k}: {json.dumps(result[k], sort_keys=True)}")
    if "error" in report:
        lines.append(f"  error: {report['error']['message']}")
    return "\n".join(lines)


def _execute(argv) -> tuple[int, dict, str]:
    start = time.perf_counter()
    report = {"command": ["mqt", *argv], "version": __version__}
    fmt = "json"
    extra_timing = None
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if args.workers is None:
            args.workers = _default_workers()
        out = args.handler(args)
        code, verdict, result = out[:3]
        extra_timing = out[3] if len(out) > 3 else None
        report.update(verdict=verdict, result=result)
    except (UsageError, MQTError, KeyError, ValueError) as exc:
        code = EXIT_ERROR
        err = {"type": type(exc).__name__, "message": str(exc).strip("'\"")}
        if isinstance(exc, PreconditionError) and exc.witness is not None:
            err["witness"] = _witness_json(exc.witness)
        report.update(verdict="error", error=err)
    report["exit_code"] = code
    report["timing"] = {"total_seconds": round(time.perf_counter() - start, 4)}
    if extra_timing:
        report["timing"]["items"] = extra_timing
    return code, report, fmt


def run(argv=None) -> tuple[int, dict]:
    """Execute one command; returns the exit code and the report dict."""
    argv = list(sys.argv[1:] if argv is None else argv)
    code, report, _ = _execute(argv)
    return code, report


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "text":
        return _text(report)
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, report, fmt = _execute(argv)
    print(render(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
