"""Command-line front end: ``koszulpair check|dual|twist|hilbert``.

Exit codes: 0 when every check passes, 1 on a mathematical failure (the
report carries the witness), 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from contextlib import contextmanager

from . import __version__
from .bar import tor_table, ext_table
from .exceptions import InputError, KoszulError, PreKoszulError, TwistingError
from .graded import (PreKoszulPair, build_pair, check_prekoszul, free_presentation,
                     random_presentation, truncate_coring)
from .io import (REPORT_SCHEMA_VERSION, ProblemFile, dump_report, family_degree_matrices,
                 input_digest, load_problem, presentation_to_json)
from .koszul import ComplexFlavor, koszul_verdict
from .linalg import Field
from .twisting import (TwistingMatrixFamily, derive_tau_lambda, extend_sigma,
                       matrix_twisting_build, prekoszul_by_summand, twist_axiom_failures,
                       twisted_pair, verify_factorization)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_MAX_DEGREE = 5


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.timings = {}

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        if self.enabled:
            self.timings[name] = round(time.perf_counter() - t0, 6)


def _report(problem: ProblemFile, dims, table, verdicts, clock) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "input_digest": problem.digest,
        "dims": dims,
        "exactness_table": table,
        "verdicts": verdicts,
        "timings": clock.timings,
    }


def _base_verdicts(command: str, problem: ProblemFile, N: int) -> dict:
    return {"command": command, "field": problem.field.name, "max_degree": N,
            "presentation": problem.presentation.name or None}


def _pair(problem: ProblemFile, N: int, truncate: int | None) -> PreKoszulPair:
    pair = build_pair(problem.presentation, N)
    if truncate is not None:
        pair = PreKoszulPair(pair.algebra, truncate_coring(pair.coring, truncate), pair.theta,
                             presentation=pair.presentation, name=pair.name)
    return pair


def _exactness(verdict) -> dict:
    return {fl.value: list(verdict.table[fl]) for fl in ComplexFlavor}


def _koszul_fields(verdict) -> dict:
    w = verdict.witness_degree
    return {
        "koszul": verdict.koszul,
        "koszul_up_to": verdict.koszul_up_to,
        "witness_degree": w,
        "failing_flavors": [fl.value for fl in verdict.failing_flavors(w)] if w is not None else [],
        "flavors_agree": all(verdict.agreement()),
    }


def cmd_check(problem: ProblemFile, N: int, truncate: int | None = None,
              timings: bool = False) -> tuple[int, dict]:
    clock = _Clock(timings)
    verdicts = _base_verdicts("check", problem, N)
    with clock.stage("build"):
        pair = _pair(problem, N, truncate)
    if truncate is not None:
        verdicts["coring_truncate"] = truncate
    dims = {"A": list(pair.algebra.dims), "C": list(pair.coring.dims)}
    try:
        with clock.stage("koszul_verdict"):
            verdict = koszul_verdict(pair, N)
    except PreKoszulError as exc:
        verdicts.update({"prekoszul": False, "koszul": False, "error": str(exc)})
        return EXIT_FAIL, _report(problem, dims, {}, verdicts, clock)
    verdicts["prekoszul"] = True
    verdicts.update(_koszul_fields(verdict))
    code = EXIT_OK if verdict.koszul else EXIT_FAIL
    return code, _report(problem, dims, _exactness(verdict), verdicts, clock)


def cmd_dual(problem: ProblemFile, N: int, truncate: int | None = None,
             timings: bool = False) -> tuple[int, dict]:
    clock = _Clock(timings)
    verdicts = _base_verdicts("dual", problem, N)
    with clock.stage("build"):
        pair = _pair(problem, N, truncate)
    A, C = list(pair.algebra.dims), list(pair.coring.dims)
    with clock.stage("tor_table"):
        tor = tor_table(pair.algebra, N)
    with clock.stage("ext_table"):
        ext = ext_table(pair.coring, N)
    tor_d, ext_d = tor.diagonal(), ext.diagonal()
    tor_col = [t == c for t, c in zip(tor_d, C)]
    ext_col = [e == a for e, a in zip(ext_d, A)]
    dims = {"A": A, "C": C, "tor_diagonal": tor_d, "ext_diagonal": ext_d}
    table = {"tor = C dims": tor_col, "ext = A dims": ext_col}
    verdicts.update({
        "tor = C dims": all(tor_col),
        "ext = A dims": all(ext_col),
        "tor_off_diagonal_zero": tor.off_diagonal_vanishes(),
        "ext_off_diagonal_zero": ext.off_diagonal_vanishes(),
    })
    ok = all(tor_col) and all(ext_col)
    return (EXIT_OK if ok else EXIT_FAIL), _report(problem, dims, table, verdicts, clock)


def _convolution(a_dims, c_dims, N: int) -> list:
    return [sum((-1) ** k * c_dims[k] * a_dims[n - k] for k in range(n + 1))
            for n in range(1, N + 1)]


def _series(dims) -> str:
    terms = []
    for n, d in enumerate(dims):
        if d == 0:
            continue
        var = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
        coeff = str(d) if (d != 1 or n == 0) else ""
        terms.append(coeff + var)
    return " + ".join(terms) if terms else "0"


def cmd_hilbert(problem: ProblemFile, N: int, truncate: int | None = None,
                timings: bool = False) -> tuple[int, dict]:
    clock = _Clock(timings)
    verdicts = _base_verdicts("hilbert", problem, N)
    with clock.stage("build"):
        pair = _pair(problem, N, truncate)
    A, C = list(pair.algebra.dims), list(pair.coring.dims)
    with clock.stage("koszul_verdict"):
        verdict = koszul_verdict(pair, N)
    conv = _convolution(A, C, N)
    vanishes = all(x == 0 for x in conv)
    dims = {"A": A, "C": C, "convolution": conv}
    verdicts.update({
        "A_series": _series(A),
        "C_series": _series(C),
        "koszul": verdict.koszul,
        "convolution_vanishes": vanishes,
    })
    # exact slices force the alternating sums to vanish
    code = EXIT_FAIL if verdict.koszul and not vanishes else EXIT_OK
    return code, _report(problem, dims, _exactness(verdict), verdicts, clock)


def _tensor_dims(x, y, N: int) -> list:
    return [sum(x[p] * y[n - p] for p in range(n + 1)) for n in range(N + 1)]


def cmd_twist(problem: ProblemFile, N: int, truncate: int | None = None,
              timings: bool = False) -> tuple[int, dict]:
    clock = _Clock(timings)
    verdicts = _base_verdicts("twist", problem, N)
    tw = problem.twisting
    if tw is None:
        raise InputError("the twist command needs a 'twisting' block", path=problem.path)
    f = problem.field
    dims: dict = {}

    def fail(stage: str, exc: Exception):
        verdicts.update({"passed": False, "failed_stage": stage, "error": str(exc)})
        return EXIT_FAIL, _report(problem, dims, {}, verdicts, clock)

    with clock.stage("build"):
        pairA = build_pair(problem.presentation, N)
        pB = tw.presentation if tw.presentation is not None else free_presentation(
            f, tuple(f"e{i + 1}" for i in range(tw.family.n)))
        pairB = build_pair(pB, N)
    dims.update({"A": list(pairA.algebra.dims), "B": list(pairB.algebra.dims),
                 "C": list(pairA.coring.dims), "D": list(pairB.coring.dims)})
    verdicts["source"] = "sigma" if tw.sigma is not None else "family"

    with clock.stage("extend_sigma"):
        if tw.sigma is not None:
            try:
                sigma = extend_sigma(problem.presentation, pB, tw.sigma, N,
                                     (pairA.algebra, pairB.algebra))
            except TwistingError as exc:
                return fail("descent", exc)
        else:
            fam = TwistingMatrixFamily(
                f, tw.family.n, family_degree_matrices(f, tw.family, pairA.algebra, N), "sigma")
            try:
                sigma = matrix_twisting_build(pairA.algebra, fam, N)
            except TwistingError as exc:
                return fail("family_conditions", exc)
    verdicts["descent"] = True
    failures = twist_axiom_failures(sigma, (pairA.algebra, pairB.algebra), N)
    verdicts["twist_axioms"] = not failures
    if failures:
        return fail("twist_axioms", TwistingError(failures[0]))
    if not sigma.is_invertible():
        return fail("invertibility", TwistingError("sigma is not invertible"))
    sigma = sigma if sigma.inverses is not None else sigma.with_inverses()

    try:
        with clock.stage("derive_tau_lambda"):
            derived = derive_tau_lambda(pairA, pairB, sigma, N)
    except KoszulError as exc:
        return fail("derive_tau_lambda", exc)
    with clock.stage("twisted_pair"):
        pair = twisted_pair(pairA, pairB, sigma, N, derived=derived)
    summands = prekoszul_by_summand(pair)
    verdicts["prekoszul"] = check_prekoszul(pair)
    verdicts["prekoszul_by_summand"] = {f"C^{i}(x)D^{j}": ok for (i, j), ok in summands.items()}
    dims["product"] = list(pair.algebra.dims)
    dims["dual"] = list(pair.coring.dims)
    if not verdicts["prekoszul"]:
        return fail("prekoszul", PreKoszulError("twisted pair is not pre-Koszul"))

    with clock.stage("verify_factorization"):
        fact = verify_factorization(pairA, pairB, sigma, N, twisted=pair)
    verdicts["factorization"] = fact.ok
    if not fact.ok:
        n, m, block = fact.first_failure
        verdicts["factorization_first_failure"] = {"n": n, "m": m, "block": str(block)}
    with clock.stage("koszul_verdict"):
        verdict = koszul_verdict(pair, N)
    verdicts.update(_koszul_fields(verdict))
    with clock.stage("tor"):
        tor_product = tor_table(pair.algebra, N).diagonal()
        tor_a = tor_table(pairA.algebra, N).diagonal()
        tor_b = tor_table(pairB.algebra, N).diagonal()
    dims["tor_product"] = tor_product
    dims["tor_A (x) tor_B"] = _tensor_dims(tor_a, tor_b, N)
    verdicts["tor_product = dual dims"] = tor_product == dims["dual"]
    verdicts["tor_product = tor_A (x) tor_B"] = tor_product == dims["tor_A (x) tor_B"]
    ok = (fact.ok and verdict.koszul and verdicts["tor_product = dual dims"]
          and verdicts["tor_product = tor_A (x) tor_B"])
    verdicts["passed"] = ok
    return (EXIT_OK if ok else EXIT_FAIL), _report(problem, dims, _exactness(verdict),
                                                   verdicts, clock)


COMMANDS = {"check": cmd_check, "dual": cmd_dual, "twist": cmd_twist, "hilbert": cmd_hilbert}


def _nonneg(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _random_shape(s: str) -> tuple[int, int]:
    try:
        g, r = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected G,R (generators, relations)") from None
    if g < 1 or not 0 <= r <= g * g:
        raise argparse.ArgumentTypeError("need G >= 1 and 0 <= R <= G*G")
    return g, r


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="koszulpair",
        description="Koszulity checks, quadratic duals and twisted tensor products.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("check", "decide Koszulity up to the degree bound"),
            ("dual", "quadratic dual dimensions against Tor and Ext"),
            ("twist", "twisted tensor product and its dual"),
            ("hilbert", "dimension series and the alternating-sum check")):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", metavar="PATH", help="presentation file (JSON)")
        src.add_argument("--random", metavar="G,R", type=_random_shape,
                         help="random presentation with G generators and R relations")
        p.add_argument("--max-degree", type=_nonneg, default=DEFAULT_MAX_DEGREE, metavar="N")
        p.add_argument("--field", help="override the file's field: rational or gfP")
        p.add_argument("--report", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0, help="seed for --random")
        p.add_argument("--coring-truncate", type=_nonneg, metavar="D",
                       help="debugging: zero the dual coring above degree D")
        p.add_argument("--timings", action="store_true",
                       help="record wall-clock timings (makes reports non-reproducible)")
    return ap


def _random_problem(shape, seed: int, field_name: str | None) -> ProblemFile:
    f = Field.parse(field_name or "gf5")
    p = random_presentation(f, shape[0], shape[1], random.Random(seed))
    text = json.dumps(presentation_to_json(p), sort_keys=True)
    return ProblemFile(f, p, None, input_digest(text), None)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.random is not None:
            try:
                problem = _random_problem(args.random, args.seed, args.field)
            except ValueError as exc:
                raise InputError(str(exc)) from None
        else:
            problem = load_problem(args.input, args.field)
        code, report = COMMANDS[args.command](problem, args.max_degree, args.coring_truncate,
                                              args.timings)
    except InputError as exc:
        print(f"koszulpair: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(dump_report(report, args.report))
    return code


if __name__ == "__main__":
    sys.exit(main())
