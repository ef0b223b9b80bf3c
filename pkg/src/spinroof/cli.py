"""Command-line front end.

Subcommands: ``sample-diagram`` (uncertainty-diagram datasets), ``verify``
(relation suite over random states), ``cs`` (two-axis variance floors),
``metrology`` (worst-case sensitivity reports), ``decompose`` (qubit chord
decompositions). Outputs are deterministic for fixed flags and seed.

Exit codes: 0 ok, 1 usage, 2 validation failure, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .spinops import Spin, Triad, direction_operator, normalized, random_triad, spin_operators
from .states import (
    DensityMatrix,
    GinibreMixed,
    RandomSpec,
    bloch_to_density,
    density_from_json,
    density_to_json,
    purity,
    random_state,
)
from .fluctuation import qfi, variance
from .roofs import (
    ChordDecomposition,
    eigendecomposition_gaps,
    maximal_decomposition,
    minimal_decomposition,
    parallel_axis_gaps,
)
from .relations import (
    check_angle_pair,
    check_angle_pair_qfi,
    check_robertson,
    check_robertson_qfi,
    check_robertson_tightening,
    check_sum2,
    check_sum2_qfi,
    check_sum3,
    check_sum3_qfi,
    compute_c,
    fit_loglog_slope,
    purity_band,
    qubit_equalities,
)
from .metrology import FullSphere, Plane, builtin_state, witness_entanglement

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NONCONVERGENCE = 3

DIAGRAM_SCHEMA = "spinroof.sample-diagram.v1"
CS_SCHEMA = "spinroof.cs.v1"
DECOMPOSITION_SCHEMA = "spinroof.decomposition.v1"

MODES = ("vvv", "vvq", "qqq")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def _diagram_coords(rho: DensityMatrix, ops, mode: str) -> tuple[float, float, float]:
    lx, ly, lz = ops
    if mode == "vvv":
        return variance(rho, lx), variance(rho, ly), variance(rho, lz)
    if mode == "vvq":
        return variance(rho, lx), variance(rho, ly), qfi(rho, lz) / 4
    return qfi(rho, lx) / 4, qfi(rho, ly) / 4, qfi(rho, lz) / 4


def diagram_rows(spin: Spin, mode: str, samples: int, seed: int):
    """Yield (sample_id, purity, c1, c2, c3) rows; ranks cycle 1..dim so pure
    and mixed states both populate the diagram."""
    ops = spin_operators(spin)
    dim = spin.dim
    for i in range(samples):
        rank = 1 + i % dim
        rho = random_state(dim, RandomSpec(seed, GinibreMixed(rank)), sample_index=i)
        c1, c2, c3 = _diagram_coords(rho, ops, mode)
        yield i, purity(rho), c1, c2, c3


def cmd_sample_diagram(args) -> int:
    spin = Spin(args.spin)
    header = f"# schema: {DIAGRAM_SCHEMA} spin={args.spin} mode={args.mode}"
    lines = [header]
    if args.format == "csv":
        lines.append("sample_id,purity,c1,c2,c3,mode")
        for i, pur, c1, c2, c3 in diagram_rows(spin, args.mode, args.samples, args.seed):
            lines.append(
                f"{i},{_fmt(pur)},{_fmt(c1)},{_fmt(c2)},{_fmt(c3)},{args.mode}"
            )
    else:
        for i, pur, c1, c2, c3 in diagram_rows(spin, args.mode, args.samples, args.seed):
            lines.append(
                json.dumps(
                    {
                        "sample_id": i,
                        "purity": pur,
                        "c1": c1,
                        "c2": c2,
                        "c3": c3,
                        "mode": args.mode,
                    },
                    sort_keys=True,
                )
            )
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def verify_reports(spin: Spin, samples: int, seed: int, c_of_s: float):
    """All relation checks over `samples` random states of one spin."""
    ops = spin_operators(spin)
    lx, ly, lz = ops
    dim = spin.dim
    for i in range(samples):
        rank = 1 + i % dim
        rho = random_state(dim, RandomSpec(seed, GinibreMixed(rank)), sample_index=i)
        triad_rng = np.random.default_rng([seed & (2**64 - 1), spin.two_s, i])
        triad = random_triad(triad_rng)
        l1 = direction_operator(ops, triad.n1)
        l2 = direction_operator(ops, triad.n2)
        reports = [
            check_robertson(rho, l1, l2),
            check_robertson_qfi(rho, l1, l2),
            check_robertson_tightening(rho, l1, l2),
            check_sum3(rho, triad, spin),
            check_sum3_qfi(rho, triad, spin),
            check_sum2(rho, triad.n1, triad.n2, spin, c_of_s),
            check_sum2_qfi(rho, triad.n1, triad.n2, spin, c_of_s),
        ]
        if dim == 2:
            reports.append(check_angle_pair(rho, triad.n1, triad.n2))
            reports.append(check_angle_pair_qfi(rho, triad.n1, triad.n2))
            reports.extend(qubit_equalities(rho, triad))
            reports.extend(purity_band(rho, triad.n1, triad.n2))
        for rep in reports:
            yield rho, rep


def cmd_verify(args) -> int:
    if args.state is not None:
        try:
            with open(args.state, "r", encoding="utf-8") as fh:
                density_from_json(json.load(fh))
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            print(f"state validation failed: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    spins = [Spin(two_s) for two_s in args.spins]
    failures = 0
    lines = []
    for spin in spins:
        cs = compute_c(spin, restarts=args.restarts, seed=args.seed)
        if not cs.converged:
            print(f"c(s) search did not converge for 2s={spin.two_s}", file=sys.stderr)
            return EXIT_NONCONVERGENCE
        for rho, rep in verify_reports(spin, args.samples, args.seed, cs.c):
            record = rep.to_json()
            record["two_s"] = spin.two_s
            if not rep.satisfied:
                failures += 1
                record["state"] = density_to_json(rho)
            lines.append(json.dumps(record, sort_keys=True))
    _write_text(args.out, "\n".join(lines) + "\n")
    print(f"{len(lines)} reports, {failures} failures", file=sys.stderr)
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


def cmd_cs(args) -> int:
    rows = []
    converged_all = True
    for two_s in range(1, args.smax + 1):
        res = compute_c(Spin(two_s), restarts=args.restarts, seed=args.seed)
        converged_all = converged_all and res.converged
        rows.append((two_s, two_s / 2, res.c, res.converged))
    upper = [r for r in rows if r[1] >= rows[-1][1] / 2]
    slope = fit_loglog_slope([r[1] for r in upper], [r[2] for r in upper])
    lines = [f"# schema: {CS_SCHEMA}", "two_s,s,c,converged"]
    for two_s, s, c, conv in rows:
        lines.append(f"{two_s},{_fmt(s)},{_fmt(c)},{str(conv).lower()}")
    non_monotonic = any(rows[i][2] > rows[i + 1][2] + 1e-9 for i in range(len(rows) - 1))
    if non_monotonic:
        lines.append("# warning: c(s) non-monotonic over the computed range")
    lines.append(f"# slope_upper_half: {_fmt(slope)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if converged_all else EXIT_NONCONVERGENCE


def cmd_metrology(args) -> int:
    axes = Plane() if args.axes == "plane" else FullSphere()
    try:
        if args.state.startswith("@"):
            with open(args.state[1:], "r", encoding="utf-8") as fh:
                rho = density_from_json(json.load(fh))
        else:
            rho = builtin_state(args.state, args.n)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"state validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if rho.dim != 2**args.n:
        print(
            f"state dimension {rho.dim} does not match {args.n} qubits",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    report = witness_entanglement(rho, axes)
    _write_text(args.out, json.dumps(report.to_json(), sort_keys=True) + "\n")
    return EXIT_OK


def _parse_vec3(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated reals, got {text!r}")
    return np.array([float(p) for p in parts])


def cmd_decompose(args) -> int:
    try:
        r = _parse_vec3(args.r)
        n = normalized(_parse_vec3(args.n))
        if np.linalg.norm(r) > 1 + 1e-12:
            raise ValueError(f"Bloch vector length {np.linalg.norm(r)} exceeds 1")
        if args.kind == "min":
            chord = minimal_decomposition(r, n)
        elif args.kind == "max":
            chord = maximal_decomposition(r, n)
        else:
            norm = np.linalg.norm(r)
            if norm <= 1e-10:
                raise ValueError("degenerate state: eigendecomposition is not unique")
            if norm >= 1 - 1e-10:
                raise ValueError("pure state: no mixed eigendecomposition")
            rhat = r / norm
            chord = ChordDecomposition((1 + norm) / 2, rhat, -rhat, r)
    except ValueError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    d = chord.to_decomposition()
    payload = {
        "schema": DECOMPOSITION_SCHEMA,
        "kind": args.kind,
        "target": [float(x) for x in chord.target],
        "axis": [float(x) for x in n],
        "degenerate": chord.degenerate,
        "endpoints": [[float(x) for x in chord.r1], [float(x) for x in chord.r2]],
        "weights": d.to_json()["weights"],
        "states": d.to_json()["states"],
    }
    if not chord.degenerate:
        qfi_gap, var_gap = parallel_axis_gaps(chord.target, d, n)
        payload["gaps"] = {"qfi_gap": qfi_gap, "var_gap": var_gap}
        if args.kind == "eigen":
            var_gap4, qfi_gap_c = eigendecomposition_gaps(bloch_to_density(r), n)
            payload["gaps"]["eigendecomposition"] = {
                "var_gap_x4": var_gap4,
                "qfi_gap": qfi_gap_c,
            }
    _write_text(args.out, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinroof", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-diagram", help="sample uncertainty-diagram datasets")
    p.add_argument("--spin", type=int, required=True, help="2s as a positive integer")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_sample_diagram)

    p = sub.add_parser("verify", help="run the relation suite on random states")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--spins",
        type=lambda s: [int(x) for x in s.split(",")],
        default=[1, 2, 3],
        help="comma-separated 2s values",
    )
    p.add_argument("--restarts", type=int, default=16, help="c(s) search restarts")
    p.add_argument("--state", default=None, help="optional state JSON to validate and include")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cs", help="tabulate the two-axis variance floor c(s)")
    p.add_argument("--smax", type=int, required=True, help="largest 2s")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_cs)

    p = sub.add_parser("metrology", help="worst-case sensitivity limits and witness")
    p.add_argument("--n", type=int, required=True, help="number of qubits")
    p.add_argument("--axes", choices=("plane", "sphere"), required=True)
    p.add_argument(
        "--state",
        required=True,
        help="built-in name (twin-fock, all-up, xyz-product, tetrad-product, "
        "tetrahedron, ghz) or @file.json",
    )
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_metrology)

    p = sub.add_parser("decompose", help="qubit chord decompositions and their gaps")
    p.add_argument("--r", required=True, help="target Bloch vector x,y,z")
    p.add_argument("--n", required=True, help="axis x,y,z (normalized)")
    p.add_argument("--kind", choices=("min", "max", "eigen"), required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
