"""Command-line front end.

Exit status: 0 when the checked property holds, 1 when it does not, 2 on
usage or model errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fixtures
from .composition import hide, parallel
from .conformance import inclusion_check, ioco_check
from .dot import to_dot
from .model import InterfaceSpec, ModelError, ResourceLimitError, load, serialize_iolts
from .onthefly import OnTheFlyTester, TestConfig, run_onthefly_test, sut_from_model
from .quotient import build_quotient, check_decomposable, check_quotient_valid
from .semantics import check_sa_valid, delta_transform


def _labels(text: str | None) -> list[str]:
    return [x for x in (text or "").split(",") if x]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _iface(spec, env, shared: str | None) -> InterfaceSpec:
    iface = InterfaceSpec.from_models(spec, env)
    if shared is not None:
        iface.check_shared(_labels(shared))
    return iface


def _word(sigma) -> str:
    return " ".join(sigma) if sigma else "ε"


def _verdict(v, what: str) -> int:
    if v.holds:
        print(f"{what}: holds")
        return 0
    sigma, x = v.counterexample
    print(f"{what}: fails")
    print(f"counterexample: after {_word(sigma)} output {x}")
    return 1


def cmd_delta(args) -> int:
    _emit(serialize_iolts(delta_transform(load(args.model))), args.output)
    return 0


def cmd_compose(args) -> int:
    m = parallel(load(args.left), load(args.right))
    m = hide(m, _labels(args.hide))
    _emit(serialize_iolts(m), args.output)
    return 0


def cmd_ioco(args) -> int:
    impl, spec = load(args.impl), load(args.spec)
    return _verdict(ioco_check(impl, spec), f"{impl.name} ioco {spec.name}")


def cmd_include(args) -> int:
    env, spec = load(args.env), load(args.spec)
    iface = _iface(spec, env, args.shared)
    return _verdict(inclusion_check(env, spec, iface), f"{env.name} included in {spec.name}")


def cmd_quotient(args) -> int:
    spec, env = load(args.spec), load(args.env)
    qa = build_quotient(spec, env, _iface(spec, env, args.shared))
    _emit(serialize_iolts(qa.automaton), args.output)
    return 0


def cmd_validate_sa(args) -> int:
    a = load(args.model)
    if not a.is_sa:
        raise ModelError(f"{a.name} is not a suspension automaton (missing 'kind sa')")
    if args.spec or args.env:
        if not (args.spec and args.env):
            raise ModelError("--spec and --env go together")
        report = check_quotient_valid(a, InterfaceSpec.from_models(load(args.spec), load(args.env)))
    else:
        report = check_sa_valid(a)
    if report.valid:
        print(f"{a.name}: valid")
        return 0
    print(f"{a.name}: invalid")
    for v in report.violations:
        print(f"{v.rule} {v.state}: {v.detail}")
    return 1


def cmd_decompose(args) -> int:
    spec, env = load(args.spec), load(args.env)
    verdict = check_decomposable(spec, env, _iface(spec, env, args.shared))
    if verdict:
        print(f"{spec.name} is decomposable with respect to {env.name}")
        if args.output:
            _emit(serialize_iolts(verdict.witness.automaton), args.output)
        return 0
    print(f"decomposability of {spec.name} with respect to {env.name} not established:")
    for reason in verdict.reasons:
        print(f"- {reason}")
    return 1


def cmd_mbtest(args) -> int:
    spec, env, comp = load(args.spec), load(args.env), load(args.sut)
    tester = OnTheFlyTester(spec, env, _iface(spec, env, args.shared))
    failed = 0
    seeds = range(args.seed, args.seed + args.seeds)
    for seed in seeds:
        cfg = TestConfig(seed=seed, max_steps=args.max_steps, stop_prob=args.stop_prob)
        verdict = run_onthefly_test(spec, env, sut_from_model(comp, seed), cfg=cfg, tester=tester)
        if args.quiet:
            print(verdict.log[-1])
        else:
            sys.stdout.write(verdict.text())
        failed += verdict.value == "Fail"
    if args.seeds > 1:
        print(f"summary fail {failed} of {args.seeds}")
    return 1 if failed else 0


def cmd_dot(args) -> int:
    _emit(to_dot(load(args.model)), args.output)
    return 0


def cmd_fixtures(args) -> int:
    target = Path(args.directory)
    target.mkdir(parents=True, exist_ok=True)
    for name in fixtures.NAMES:
        (target / f"{name}.im").write_text(fixtures.text(name), encoding="utf-8")
        print(target / f"{name}.im")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decompio", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="suspension automaton of a model")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("compose", help="parallel composition, optionally hiding outputs")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--hide", help="comma-separated outputs to hide")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("ioco", help="decide impl ioco spec")
    p.add_argument("impl")
    p.add_argument("spec")
    p.set_defaults(func=cmd_ioco)

    p = sub.add_parser("include", help="decide whether a platform's behaviour is included in a spec")
    p.add_argument("env")
    p.add_argument("spec")
    p.add_argument("--shared", help="expected hidden interface, comma-separated")
    p.set_defaults(func=cmd_include)

    p = sub.add_parser("quotient", help="quotient of a spec by a platform")
    p.add_argument("spec")
    p.add_argument("env")
    p.add_argument("--shared", help="expected hidden interface, comma-separated")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("validate-sa", help="check suspension automaton validity")
    p.add_argument("model")
    p.add_argument("--spec", help="with --env: also check strong non-blocking for a quotient")
    p.add_argument("--env")
    p.set_defaults(func=cmd_validate_sa)

    p = sub.add_parser("decompose", help="check the sufficient conditions for decomposability")
    p.add_argument("spec")
    p.add_argument("env")
    p.add_argument("--shared", help="expected hidden interface, comma-separated")
    p.add_argument("-o", "--output", help="write the witness quotient here")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("mbtest", help="on-the-fly test of a model-backed component")
    p.add_argument("spec")
    p.add_argument("env")
    p.add_argument("--sut", required=True, help="component model to test")
    p.add_argument("--shared", help="expected hidden interface, comma-separated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds to run")
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--stop-prob", type=float, default=0.0)
    p.add_argument("-q", "--quiet", action="store_true", help="print only the verdict lines")
    p.set_defaults(func=cmd_mbtest)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("fixtures", help="write the bundled example models")
    p.add_argument("directory", nargs="?", default="fixtures")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ModelError, ResourceLimitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
