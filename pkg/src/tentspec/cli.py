"""Command-line surface: per-n reports, identity verification, sweeps, and figures.

Exit codes: 0 success, 1 verification failure, 2 usage error.  JSON outputs
carry a top-level "schema": "tentspec/1"; reals serialize losslessly
(repr round-trip for JSON numbers, 17 significant digits for breakpoint
strings).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import exact, markov, plmap, poly, spectral, transfer

SCHEMA = "tentspec/1"


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from err
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _emit(payload: dict):
    payload = {"schema": SCHEMA, **payload}
    print(json.dumps(payload, indent=2))


def _cmd_kappa(args) -> int:
    sol = poly.solve_kappa(args.n)
    _emit(sol.to_dict())
    return 0


def _build(n: int, folded: bool):
    kind = "folded" if folded else "full"
    sol = poly.solve_kappa(n)
    part = markov.analytic_partition(n, kind, sol.kappa)
    pmap = plmap.make_folded_tent(sol.kappa) if folded else plmap.make_paired_tent(sol.kappa)
    return kind, sol, part, pmap


def _cmd_partition(args) -> int:
    kind, _, part, _ = _build(args.n, args.folded)
    _emit({"n": args.n, "kind": kind, **part.to_dict()})
    return 0


def _cmd_adjacency(args) -> int:
    kind, _, part, pmap = _build(args.n, args.folded)
    A = markov.adjacency_matrix(pmap, part)
    _emit({"n": args.n, "kind": kind, "size": A.rows, "rows": A.to_lists()})
    return 0


def _cmd_spectrum(args) -> int:
    report = spectral.spectral_report(args.n)
    _emit(report.to_dict())
    return 0


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------


def _paper_kernel_vectors_full(n: int):
    size = 2 * n + 4
    v1 = [0] * size
    for i in range(n):
        v1[i] = 1
    v1[n] = -1
    v1[n + 1] = -1
    jv1 = v1[::-1]
    return [tuple(v1), tuple(jv1)]


def _kernel_vectors_folded(n: int):
    size = n + 3

    def unit(i):
        v = [0] * size
        v[i] = 1
        return v

    if n == 1:
        # the n=1 partition shifts the split one piece outward
        a = [x - y for x, y in zip(unit(1), unit(2))]
        b = [x - y for x, y in zip(unit(0), unit(3))]
        return [tuple(a), tuple(b)]
    a = [x - y for x, y in zip(unit(2), unit(3))]
    b = unit(0)
    b[1] = 1
    for i in range(4, size):
        b[i] = -1
    return [tuple(a), tuple(b)]


def verification_checks(n: int) -> list[tuple[str, bool]]:
    """All exact identity checks for one n; returns (name, passed) pairs."""
    sol = poly.solve_kappa(n)
    part = markov.analytic_partition(n, "full", sol.kappa)
    tmap = plmap.make_paired_tent(sol.kappa)
    A = markov.adjacency_matrix(tmap, part)
    size = 2 * n + 4
    J = exact.flip_matrix(size)
    part_f = markov.analytic_partition(n, "folded", sol.kappa)
    fmap = plmap.make_folded_tent(sol.kappa)
    B = markov.adjacency_matrix(fmap, part_f)
    C = exact.symmetric_restriction(A, n)
    iota = exact.inclusion_iota(n)
    x = exact.IntPolynomial((0, 1))
    checks = [
        ("pair-identity", exact.verify_pair_identity(A, J, n)),
        ("commute", A.commutes_with(J)),
        ("involution", J @ J == exact.ExactMatrix.identity(size)),
        ("flip-conjugation", J @ A @ J == A),
        ("minpoly-A", exact.krylov_min_poly(A) == poly.min_poly(n)),
        ("minpoly-J", exact.krylov_min_poly(J) == exact.IntPolynomial((-1, 0, 1))),
        ("minpoly-B", exact.krylov_min_poly(B) == x * poly.f_poly(n)),
        ("minpoly-C", exact.krylov_min_poly(C) == x * poly.f_poly(n)),
        ("kernel-A", exact.same_span(exact.kernel_basis(A), _paper_kernel_vectors_full(n))),
        ("kernel-B", exact.same_span(exact.kernel_basis(B), _kernel_vectors_folded(n))),
        ("intertwine", exact.verify_intertwine(B, C, iota)),
        ("iota-rank", exact.rational_rank(iota) == n + 2),
        (
            "restricted-identity",
            (C @ (C ** (n + 1) - 2 * (C ** n) - 2 * exact.ExactMatrix.identity(n + 2))).is_zero(),
        ),
    ]
    return checks


def _cmd_verify(args) -> int:
    failures = 0
    for n in range(1, args.n_max + 1):
        for name, passed in verification_checks(n):
            status = "PASS" if passed else "FAIL"
            if not passed:
                failures += 1
            print(f"n={n:<3d} {name:<22s} {status}")
    print(f"{'ALL CHECKS PASS' if failures == 0 else f'{failures} CHECK(S) FAILED'}")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# sweep / roots / simulate
# ---------------------------------------------------------------------------


def _cmd_sweep(args) -> int:
    if args.start > args.stop:
        print("empty range: --from must be <= --to", file=sys.stderr)
        return 2
    rows = []
    for n in range(args.start, args.stop + 1):
        rep = spectral.spectral_report(n)
        rows.append(
            {
                "n": rep.n,
                "kappa_n": repr(rep.kappa_n),
                "r_n": "" if rep.r_n is None else repr(rep.r_n),
                "lambda2": repr(rep.second_modulus_M),
                "mixing_time_full": repr(rep.mixing_time_full),
                "mixing_ratio_pow2": repr(rep.mixing_time_full / 2.0 ** (rep.n - 1)),
                "folded_bound": ""
                if rep.second_modulus_bound_factor is None
                else repr(rep.second_modulus_bound_factor),
                "mixing_time_folded_bound": ""
                if rep.mixing_time_folded_bound is None
                else repr(rep.mixing_time_folded_bound),
            }
        )
    with open(args.csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


def render_root_plot(roots_f, roots_g, n: int, path: str):
    """Write a deterministic SVG of both root sets.

    Crosses mark roots of the f family, circles roots of the g family, an
    asterisk sits at the origin; the unit circle is solid, radius 2 dashed,
    and the radii 1 -+ 1/n dotted.
    """
    half = 3.0
    size = 600.0

    def sx(x: float) -> float:
        return (x + half) / (2 * half) * size

    def sy(y: float) -> float:
        return (half - y) / (2 * half) * size

    def scale(r: float) -> float:
        return r / (2 * half) * size

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:.0f}" '
        f'height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>',
    ]
    circles = [
        (1.0, "none"),
        (2.0, "8 4"),
        (1.0 - 1.0 / n, "2 3"),
        (1.0 + 1.0 / n, "2 3"),
    ]
    for radius, dash in circles:
        dash_attr = "" if dash == "none" else f' stroke-dasharray="{dash}"'
        lines.append(
            f'<circle cx="{sx(0):.3f}" cy="{sy(0):.3f}" r="{scale(radius):.3f}" '
            f'fill="none" stroke="black" stroke-width="1"{dash_attr}/>'
        )
    star = 5.0
    cx, cy = sx(0.0), sy(0.0)
    lines.append(
        f'<path class="origin" stroke="black" stroke-width="1" d="'
        f"M {cx - star:.3f} {cy:.3f} L {cx + star:.3f} {cy:.3f} "
        f"M {cx:.3f} {cy - star:.3f} L {cx:.3f} {cy + star:.3f} "
        f'M {cx - 0.7 * star:.3f} {cy - 0.7 * star:.3f} L {cx + 0.7 * star:.3f} {cy + 0.7 * star:.3f} '
        f'M {cx - 0.7 * star:.3f} {cy + 0.7 * star:.3f} L {cx + 0.7 * star:.3f} {cy - 0.7 * star:.3f}"/>'
    )
    arm = 4.0
    for z in roots_f.as_complex():
        x, y = sx(z.real), sy(z.imag)
        lines.append(
            f'<path class="root-f" stroke="black" stroke-width="1.2" d="'
            f"M {x - arm:.3f} {y - arm:.3f} L {x + arm:.3f} {y + arm:.3f} "
            f'M {x - arm:.3f} {y + arm:.3f} L {x + arm:.3f} {y - arm:.3f}"/>'
        )
    for z in roots_g.as_complex():
        lines.append(
            f'<circle class="root-g" cx="{sx(z.real):.3f}" cy="{sy(z.imag):.3f}" '
            f'r="{arm:.3f}" fill="none" stroke="black" stroke-width="1.2"/>'
        )
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_roots(args) -> int:
    roots_f = poly.aberth_roots(poly.f_poly(args.n))
    roots_g = poly.aberth_roots(poly.g_poly(args.n))
    render_root_plot(roots_f, roots_g, args.n, args.svg)
    print(f"wrote root plot for n={args.n} to {args.svg}")
    if args.csv is not None:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["family", "re", "im", "residual"])
            for name, rs in (("f", roots_f), ("g", roots_g)):
                for re_, im_, resid in rs.to_csv_rows():
                    writer.writerow([name, re_, im_, resid])
        print(f"wrote root table to {args.csv}")
    return 0


def _cmd_simulate(args) -> int:
    op = transfer.markov_operator(args.n, "full")
    target = transfer.invariant_density(args.n, "full")
    coeffs = [1.0 if hi <= 0.0 else 0.0 for _, hi in op.partition.intervals()]
    f0 = transfer.DensityVector(op.partition, coeffs)
    f0 = transfer.DensityVector(op.partition, f0.coefficients / f0.integral())
    trajectory = transfer.evolve_density(op, f0, args.steps)
    with open(args.csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["step"]
            + [f"c{i + 1}" for i in range(op.partition.size)]
            + ["L1_distance_to_invariant"]
        )
        for step, density in enumerate(trajectory):
            writer.writerow(
                [step]
                + [repr(float(c)) for c in density.coefficients]
                + [repr(float(density.l1_distance(target)))]
            )
    print(f"wrote {len(trajectory)} steps to {args.csv}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tentspec",
        description="Paired tent maps: Markov partitions, exact identities, spectra, mixing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kappa", help="solve (2+2k)^n k = 1")
    p.add_argument("--n", type=_positive_int, required=True)
    p.set_defaults(func=_cmd_kappa)

    p = sub.add_parser("partition", help="Markov partition breakpoints")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--folded", action="store_true")
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("adjacency", help="0/1 adjacency matrix")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--folded", action="store_true")
    p.set_defaults(func=_cmd_adjacency)

    p = sub.add_parser("verify", help="run the exact identity suite")
    p.add_argument("--n-max", type=_positive_int, default=10)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("spectrum", help="per-n spectral report")
    p.add_argument("--n", type=_positive_int, required=True)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("sweep", help="CSV table over a range of n")
    p.add_argument("--from", dest="start", type=_positive_int, required=True)
    p.add_argument("--to", dest="stop", type=_positive_int, required=True)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("roots", help="SVG scatter of both root families")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--svg", required=True)
    p.add_argument("--csv", help="also write a (family, re, im, residual) table")
    p.set_defaults(func=_cmd_roots)

    p = sub.add_parser("simulate", help="density evolution trajectory CSV")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--steps", type=_positive_int, default=200)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
