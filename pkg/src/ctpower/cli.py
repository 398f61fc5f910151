"""Command-line frontend: analyze single states, sweep families, run
verification campaigns.

Exit codes: 0 success, 1 verification failure, 2 malformed input,
3 unsupported state class. Numbers are printed with 12 significant
digits; identical command + identical seed produces byte-identical
output. CTPOWER_THREADS caps worker threads for sweeps and
verification campaigns.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .control import (
    UnsupportedStateError,
    fct_three_qubit,
    ghz_closed_form,
    minimal_control_power,
    w_ntype_closed_form,
    wclass_closed_form,
)
from .measures import (
    fef_numeric,
    fidelity_from_T,
    fidelity_from_f,
    fully_entangled_fraction,
)
from .qlinalg import haar_state, random_density
from .simkit import ProtocolConfig, ct_fidelity_oracle, ct_fidelity_oracle_n
from .states import (
    Partition,
    PureState,
    StateError,
    load_state,
    make_ghz,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_INPUT = 2
EXIT_UNSUPPORTED = 3

SWEEP_HEADER = "family,n,p0,p1,p2,p3,minimal_P,meaningful"


class InputError(ValueError):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CTPOWER_THREADS", "1")))
    except ValueError:
        return 1


def _map_indexed(fn, items):
    """Apply fn over items, possibly in a thread pool; results keep the
    input order regardless of completion order."""
    nthreads = _threads()
    if nthreads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        return list(pool.map(fn, items))


def _fmt(x: float) -> str:
    """12 significant digits, locale-independent."""
    return format(float(x), ".12g")


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        items = [
            f'{inner}"{k}": {_to_json(v, indent + 1).lstrip()}'
            for k, v in obj.items()
        ]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [inner + _to_json(v, indent + 1).lstrip() for v in obj]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + _fmt(obj)
    return pad + '"' + str(obj) + '"'


def _parse_floats(text: str, expected: int = None):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}: {exc}") from exc
    if expected is not None and len(vals) != expected:
        raise InputError(f"expected {expected} comma-separated values, got {len(vals)}")
    return vals


def _seed_of(args) -> int:
    if args.seed is None:
        print("notice: --seed not given; using seed 0", file=sys.stderr)
        return 0
    return args.seed


def _family_report(args):
    if args.family == "ghz":
        if args.a2 is None:
            raise InputError("ghz family needs --a2")
        if not 0.0 <= args.a2 <= 1.0:
            raise InputError("--a2 must be in [0, 1]")
        return ghz_closed_form(args.n, np.sqrt(args.a2), np.sqrt(1.0 - args.a2))
    if args.family == "wclass":
        if args.l is None:
            raise InputError("wclass family needs --l l0,l1,l2,l3")
        return wclass_closed_form(*_parse_floats(args.l, 4))
    if args.family == "wntype":
        if args.alpha is None:
            raise InputError("wntype family needs --alpha a1,a2,...")
        return w_ntype_closed_form(_parse_floats(args.alpha))
    raise InputError(f"unknown family {args.family!r}")


def cmd_analyze(args) -> int:
    if (args.state is None) == (args.family is None):
        raise InputError("analyze needs exactly one of --state or --family")
    if args.state is not None:
        report = minimal_control_power(load_state(args.state))
    else:
        report = _family_report(args)
    text = _to_json(report.as_dict()) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _sweep_rows(args, seed):
    rows = []
    if args.family == "ghz":
        grid = np.arange(args.a2_start, args.a2_stop + args.a2_step / 2, args.a2_step)
        if args.a2_step <= 0 or grid.size == 0:
            raise InputError("empty a2 grid")
        for a2 in grid:
            a2 = min(max(float(a2), 0.0), 1.0)
            rep = ghz_closed_form(args.n, np.sqrt(a2), np.sqrt(1.0 - a2))
            rows.append(
                ("ghz", args.n, _fmt(a2), "", "", "", rep.minimal_P, rep.meaningful)
            )
    elif args.family == "wclass":
        if args.samples < 1:
            raise InputError("wclass sweep needs --samples >= 1")
        rng = np.random.default_rng(seed)
        print(
            "notice: wclass sweep renormalizes each sampled coefficient vector",
            file=sys.stderr,
        )
        for _ in range(args.samples):
            lam = np.abs(rng.standard_normal(4))
            lam /= np.linalg.norm(lam)
            rep = wclass_closed_form(*lam)
            rows.append(
                ("wclass", 3, *[_fmt(x) for x in lam], rep.minimal_P, rep.meaningful)
            )
    elif args.family == "wntype":
        if args.n_start < 3 or args.n_stop < args.n_start:
            raise InputError("wntype sweep needs 3 <= n-start <= n-stop")
        for n in range(args.n_start, args.n_stop + 1):
            rep = w_ntype_closed_form(np.full(n, 1.0 / np.sqrt(n)))
            rows.append(("wntype", n, "", "", "", "", rep.minimal_P, rep.meaningful))
    else:
        raise InputError(f"unknown family {args.family!r}")
    return rows


def cmd_sweep(args) -> int:
    seed = _seed_of(args)
    rows = _sweep_rows(args, seed)
    lines = [SWEEP_HEADER]
    for family, n, p0, p1, p2, p3, minimal_p, meaningful in rows:
        lines.append(
            f"{family},{n},{p0},{p1},{p2},{p3},{_fmt(minimal_p)},"
            f"{'true' if meaningful else 'false'}"
        )
    text = "\n".join(lines) + "\n"
    with open(args.output, "w") as fh:
        fh.write(text)
    return EXIT_OK


def _verify_three_qubit(samples, cfg):
    rng = np.random.default_rng(cfg.seed)
    states = [PureState(3, haar_state(3, rng)) for _ in range(samples)]

    def gap_of(psi):
        return max(
            abs(ct_fidelity_oracle(psi, j, cfg) - fct_three_qubit(psi, j))
            for j in (1, 2, 3)
        )

    max_gap = max(_map_indexed(gap_of, states))
    ok = max_gap <= 1e-5
    return ok, [f"three-qubit: max |oracle - (2+tau_kl)/3| = {_fmt(max_gap)} over "
                f"{samples} states x 3 controllers (tol 1e-05)"]


def _verify_nqubit(samples, cfg):
    rng = np.random.default_rng(cfg.seed)
    lines, max_gap = [], 0.0
    for n in (4, 5):
        partition = Partition(n, tuple(range(1, n - 1)), (n - 1, n))
        for _ in range(samples):
            a2 = rng.uniform(0.05, 0.95)
            a, b = np.sqrt(a2), np.sqrt(1.0 - a2)
            psi = make_ghz(n, a, b)
            target = 2.0 * (a * b + 1.0) / 3.0
            res = ct_fidelity_oracle_n(psi, partition, cfg)
            max_gap = max(max_gap, abs(res.value - target))
    ok = max_gap <= 1e-5
    lines.append(
        f"nqubit: max |oracle_n - 2(|a||b|+1)/3| = {_fmt(max_gap)} over GHZ "
        f"n=4,5 x {samples} points (tol 1e-05)"
    )
    return ok, lines


def _verify_prop1(samples, cfg):
    rng = np.random.default_rng(cfg.seed)
    max_p = 0.0
    for _ in range(samples):
        lam = np.abs(rng.standard_normal(4))
        lam /= np.linalg.norm(lam)
        max_p = max(max_p, wclass_closed_form(*lam).minimal_P)
    ok = max_p <= 2.0 / 9.0 + 1e-9
    return ok, [f"prop1: max minimal_P = {_fmt(max_p)} over {samples} simplex "
                f"samples (bound 2/9)"]


def _verify_fef(samples, cfg):
    rng = np.random.default_rng(cfg.seed)
    max_fef_gap, max_fid_gap = 0.0, 0.0
    for i in range(samples):
        rho = random_density(4, rng, rank=1 + i % 4)
        f = fully_entangled_fraction(rho)
        max_fef_gap = max(max_fef_gap, abs(f - fef_numeric(rho)))
        max_fid_gap = max(max_fid_gap, abs(fidelity_from_T(rho) - fidelity_from_f(f)))
    ok = max_fef_gap <= 1e-6 and max_fid_gap <= 1e-6
    return ok, [
        f"fef: magic-basis vs numeric FEF max gap = {_fmt(max_fef_gap)} (tol 1e-06)",
        f"fef: |fidelity_from_T - (2f+1)/3| max gap = {_fmt(max_fid_gap)} (tol 1e-06)",
    ]


_SUITES = {
    "three-qubit": (_verify_three_qubit, 200),
    "nqubit": (_verify_nqubit, 10),
    "prop1": (_verify_prop1, 10000),
    "fef": (_verify_fef, 1000),
}


def cmd_verify(args) -> int:
    seed = _seed_of(args)
    fn, default_samples = _SUITES[args.suite]
    samples = args.samples if args.samples is not None else default_samples
    if samples < 1:
        raise InputError("--samples must be >= 1")
    cfg = ProtocolConfig(
        mc_samples=args.mc_samples,
        grid_resolution=args.grid_resolution,
        seed=seed,
    )
    ok, lines = fn(samples, cfg)
    for line in lines:
        print(line)
    print(f"{args.suite}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctpower",
        description="Minimal control power of controlled quantum teleportation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze one state, emit JSON")
    p_analyze.add_argument("--state", help="state JSON file")
    p_analyze.add_argument("--family", choices=["ghz", "wclass", "wntype"])
    p_analyze.add_argument("--n", type=int, default=3, help="qubit count (ghz)")
    p_analyze.add_argument("--a2", type=float, help="|a|^2 for the ghz family")
    p_analyze.add_argument("--l", help="l0,l1,l2,l3 for the wclass family")
    p_analyze.add_argument("--alpha", help="a1,a2,... for the wntype family")
    p_analyze.add_argument("--output", help="write JSON here instead of stdout")
    p_analyze.set_defaults(func=cmd_analyze)

    p_sweep = sub.add_parser("sweep", help="sweep a family, emit CSV")
    p_sweep.add_argument("--family", required=True, choices=["ghz", "wclass", "wntype"])
    p_sweep.add_argument("--output", required=True)
    p_sweep.add_argument("--n", type=int, default=3, help="qubit count (ghz)")
    p_sweep.add_argument("--a2-start", type=float, default=0.0)
    p_sweep.add_argument("--a2-stop", type=float, default=1.0)
    p_sweep.add_argument("--a2-step", type=float, default=0.01)
    p_sweep.add_argument("--samples", type=int, default=100, help="wclass points")
    p_sweep.add_argument("--n-start", type=int, default=3, help="wntype range start")
    p_sweep.add_argument("--n-stop", type=int, default=8, help="wntype range end")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run a verification campaign")
    p_verify.add_argument("--suite", required=True, choices=sorted(_SUITES))
    p_verify.add_argument("--samples", type=int)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--mc-samples", type=int, default=20000)
    p_verify.add_argument("--grid-resolution", type=int, default=16)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (InputError, StateError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
