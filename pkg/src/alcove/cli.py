"""Command line interface.

Exit codes: 0 success, 2 input error, 3 incomplete coverage or uncovered
target, 4 internal tolerance failure.
"""

from __future__ import annotations

import csv
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from . import coverage as cov
from .approx import FidelityModel, approx_compile
from .circuits import leakiness_test, verify_library
from .gates import gate_matrix, load_matrix, matrix_to_json, parse_angle
from .polytope import PolytopeError
from .su4 import (DecompositionError, ValidationError, canonical_decompose, canonical_gate,
                  pi_invariant)

EXIT_INPUT = 2
EXIT_UNCOVERED = 3
EXIT_TOLERANCE = 4

_CAN_RE = re.compile(r"^\s*CAN\s*\((.*)\)\s*$", re.IGNORECASE)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(data) -> None:
    click.echo(json.dumps(data, indent=2))


def _fmt(x: float) -> float:
    x = float(x)
    return 0.0 if abs(x) < 1e-12 else float(f"{x:.12g}")


def _point(p) -> str:
    if p.is_exact:
        return str(p)
    return "(" + ",".join(f"{_fmt(x):.12g}" for x in p) + ")"


def load_target(spec: str) -> np.ndarray:
    """A unitary from a JSON matrix file, a gate name, or ``CAN(a,b,c)``."""
    path = Path(spec)
    if path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise ValidationError(f"no such matrix file: {spec}")
        return load_matrix(path)
    m = _CAN_RE.match(spec)
    if m:
        args = [a.strip() for a in m.group(1).split(",")]
        if len(args) != 3:
            raise ValidationError("CAN takes three angles")
        return canonical_gate([parse_angle(a).radians for a in args])
    return gate_matrix(spec)


def load_gate_set(text: str) -> cov.GateSet:
    """Gate names such as ``CZ,XY(3pi/4)``; ``*.json`` entries are matrix files."""
    items = []
    for name in cov.GateSet.split_names(text):
        if name.lower().endswith(".json"):
            items.append(cov.matrix_gate(Path(name).stem, load_matrix(name)))
        else:
            items.append(name)
    return cov.GateSet.of(*items)


def _run(fn, *args, **kwargs):
    """Call ``fn`` translating library errors into exit codes."""
    try:
        return fn(*args, **kwargs)
    except CliError:
        raise
    except cov.CoverageError as exc:
        raise CliError(str(exc), EXIT_UNCOVERED) from exc
    except (ValidationError, PolytopeError, ValueError, OSError) as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    except DecompositionError as exc:
        raise CliError(str(exc), EXIT_TOLERANCE) from exc


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CliError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exc.code)
        except click.UsageError as exc:
            exc.show()
            ctx.exit(EXIT_INPUT)


threads_option = click.option("--threads", type=click.IntRange(min=1), default=None,
                              help="Worker processes (default: $MONODROMY_THREADS or 1).")
gates_option = click.option("--gates", "gates", required=True,
                            help='Comma-separated gate names, e.g. "CZ,ISWAP" or "XY(3pi/4)".')


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Coverage polytopes, expected depths and approximate compilation for two-qubit gate sets."""


@main.command()
@gates_option
@click.option("--nmax", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "lrs"]), default="json",
              show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=None,
              help="Also estimate Haar-measure fractions with this many samples.")
@click.option("--seed", type=int, default=0, show_default=True)
@threads_option
def coverage(gates, nmax, fmt, samples, seed, threads):
    """Depth sets, volumes and expected depth of a gate set."""
    s = _run(load_gate_set, gates)
    report = _run(cov.depth_sets, s, nmax, threads)
    if fmt == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["depth", "parts", "cumulative_volume"])
        for n, (u, v) in enumerate(zip(report.depth_sets, report.volumes)):
            w.writerow([n, len(u), str(v)])
    else:
        data = cov.report_summary(report) if fmt == "json" else report.to_json(lrs=True)
        if samples is not None:
            data["haar_fractions"] = [
                _fmt(cov.haar_fraction(report, n, samples, seed))
                for n in range(report.max_depth_reached + 1)]
        _emit(data)
    if not report.complete:
        raise CliError(f"coverage incomplete at depth {report.max_depth_reached}", EXIT_UNCOVERED)


@main.command()
@click.argument("target")
@gates_option
@click.option("--nmax", type=click.IntRange(min=1), default=6, show_default=True)
@threads_option
def depth(target, gates, nmax, threads):
    """Minimal circuit depth of TARGET (matrix file, gate name or CAN(a,b,c))."""
    u = _run(load_target, target)
    s = _run(load_gate_set, gates)
    p = _run(pi_invariant, u)
    report = _run(cov.depth_sets, s, nmax, threads)
    n = _run(cov.min_depth, p, report)
    _emit({"alcove": _point(p), "depth": n, "gates": list(s.names)})


@main.command()
@click.argument("target")
@gates_option
@click.option("--fidelity", type=click.FloatRange(0, 1, min_open=True), default=0.99,
              show_default=True, help="Per-gate fidelity f; depth n is scored as F * f^n.")
@click.option("--nmax", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@threads_option
def approx(target, gates, fidelity, nmax, seed, threads):
    """Fidelity-weighted approximate compilation of TARGET."""
    u = _run(load_target, target)
    s = _run(load_gate_set, gates)
    plan = _run(approx_compile, u, s, FidelityModel.uniform(fidelity), nmax,
                threads=threads, seed=seed)
    _emit(plan.to_json())


@main.command("volume-curve")
@click.option("--family", type=click.Choice(["XY"], case_sensitive=False), default="XY",
              show_default=True)
@click.option("--steps", type=click.IntRange(min=2), default=20, show_default=True)
@click.option("--method", type=click.Choice(["slice", "general"]), default="slice",
              show_default=True)
def volume_curve(family, steps, method):
    """CSV of (t, vol Pi(P^2_{XY(t pi)})) at t = j / STEPS."""
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "volume", "formula"])
    for j in range(steps + 1):
        t = Fraction(j, steps)
        w.writerow([str(t), str(_run(cov.xy_slice_volume, t, method)),
                    str(cov.xy_volume_formula(t))])


@main.command()
@click.argument("target")
def leaky(target):
    """Leakiness verdict for TARGET."""
    u = _run(load_target, target)
    _emit(leakiness_test(u).to_json())


@main.command()
@click.argument("target")
def decompose(target):
    """Canonical decomposition TARGET ~ (A1 x B1) . CAN(a, b, c) . (A2 x B2)."""
    u = _run(load_target, target)
    l1, params, l2 = _run(canonical_decompose, u)
    _emit({
        "alcove": _point(pi_invariant(u)),
        "can": [_fmt(x) for x in params],
        "left": {"a": matrix_to_json(l1.a), "b": matrix_to_json(l1.b)},
        "right": {"a": matrix_to_json(l2.a), "b": matrix_to_json(l2.b)},
    })


@main.command("verify-circuits")
def verify_circuits():
    """Check every library circuit against its vertex."""
    rows = []
    ok_all = True
    for entry, got, ok in verify_library():
        ok_all &= ok
        rows.append({"gates": sorted(entry.gate_set), "depth": entry.depth,
                     "vertex": entry.vertex, "claimed": str(entry.point), "computed": _point(got),
                     "source": entry.source, "ok": ok})
    _emit({"ok": ok_all, "circuits": rows})
    if not ok_all:
        raise CliError("some library circuits do not verify", EXIT_TOLERANCE)


if __name__ == "__main__":  # pragma: no cover
    main()
