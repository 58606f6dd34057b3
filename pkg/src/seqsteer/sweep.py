"""Sharpness sweeps, violation-window search and the ``seqsteer`` command line."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence, Union

import numpy as np

from .measurement import SUPPORTED_N, MeasurementSet, format_set, load_set, platonic_set
from .steering import ANTICORRELATION, ScenarioResult, scenario

CSV_COLUMNS = ("eta_a", "eta_b", "n", "s11", "s12", "s21", "s22", "c_n", "violations")
MAX_POINTS = 100_000
DEFAULT_POINTS = 201
FIG6_ETA_B = 0.766

SetLike = Union[int, MeasurementSet]


class SweepIOError(OSError):
    pass


@dataclass
class SweepSpec:
    mode: Literal["symmetric", "fixed_b"] = "symmetric"
    n_list: Sequence[SetLike] = (3,)
    eta_start: float = 0.0
    eta_end: float = 1.0
    points: int = DEFAULT_POINTS
    eta_b_fixed: float = FIG6_ETA_B
    output_path: Optional[str] = None
    corr_sign: int = ANTICORRELATION

    def __post_init__(self):
        if self.mode not in ("symmetric", "fixed_b"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        if not 0.0 <= self.eta_start < self.eta_end <= 1.0:
            raise ValueError(f"need 0 <= eta_start < eta_end <= 1, got [{self.eta_start}, {self.eta_end}]")
        if not 2 <= self.points <= MAX_POINTS:
            raise ValueError(f"points must be in [2, {MAX_POINTS}], got {self.points}")
        if not 0.0 <= self.eta_b_fixed <= 1.0:
            raise ValueError(f"eta_b must lie in [0, 1], got {self.eta_b_fixed}")
        if not self.n_list:
            raise ValueError("n_list is empty")
        self.n_list = [_as_set(n) for n in self.n_list]

    def grid(self) -> np.ndarray:
        return np.linspace(self.eta_start, self.eta_end, self.points)


def _as_set(n: SetLike) -> MeasurementSet:
    return n if isinstance(n, MeasurementSet) else platonic_set(n)


@dataclass(frozen=True)
class SweepRow:
    eta_a: float
    eta_b: float
    n: int
    s11: float
    s12: float
    s21: float
    s22: float
    c_n: float
    violations: str = field(default="")

    def __post_init__(self):
        if not self.violations:
            object.__setattr__(self, "violations", violation_flags(self.values(), self.c_n))

    @classmethod
    def from_result(cls, r: ScenarioResult) -> "SweepRow":
        return cls(r.eta_a, r.eta_b, r.n, r.s11, r.s12, r.s21, r.s22, r.c_n)

    def values(self) -> tuple[float, float, float, float]:
        return (self.s11, self.s12, self.s21, self.s22)


def violation_flags(values, c_n: float) -> str:
    """``'1011'``-style flags in the order pair11, pair12, pair21, pair22."""
    return "".join("1" if s > c_n else "0" for s in values)


def run_symmetric_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Rows for ``eta_a = eta_b = eta`` over the grid, ordered by (n, eta)."""
    if spec.mode != "symmetric":
        raise ValueError("run_symmetric_sweep needs mode='symmetric'")
    rows = [SweepRow.from_result(scenario(eta, eta, mset, spec.corr_sign))
            for mset in spec.n_list for eta in spec.grid()]
    if spec.output_path:
        write_csv(rows, spec.output_path)
    return rows


def run_fixed_b_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Rows for a varying ``eta_a`` at fixed Bob sharpness ``spec.eta_b_fixed``."""
    if spec.mode != "fixed_b":
        raise ValueError("run_fixed_b_sweep needs mode='fixed_b'")
    rows = [SweepRow.from_result(scenario(eta, spec.eta_b_fixed, mset, spec.corr_sign))
            for mset in spec.n_list for eta in spec.grid()]
    if spec.output_path:
        write_csv(rows, spec.output_path)
    return rows


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    if spec.mode == "symmetric":
        return run_symmetric_sweep(spec)
    return run_fixed_b_sweep(spec)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{x:.12g}"


def format_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(rows: Sequence[SweepRow], path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(rows))
    except OSError as exc:
        raise SweepIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def parse_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        kw = {}
        for name, raw in rec.items():
            if name == "n":
                kw[name] = int(raw)
            elif name == "violations":
                kw[name] = raw
            else:
                kw[name] = float(raw)
        rows.append(SweepRow(**kw))
    return rows


def read_csv(path) -> list[SweepRow]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return parse_csv(fh.read())
    except OSError as exc:
        raise SweepIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _window_margin(eta: float, mset: MeasurementSet, corr_sign: int) -> float:
    r = scenario(eta, eta, mset, corr_sign)
    return min(r.values()) - r.c_n


def _bisect(f, inside: float, outside: float, tol: float) -> float:
    """Boundary between ``inside`` (f > 0) and ``outside`` (f <= 0)."""
    while abs(outside - inside) > tol:
        mid = 0.5 * (inside + outside)
        if f(mid) > 0:
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def find_violation_window(n: SetLike, tol: float = 1e-6, points: int = DEFAULT_POINTS,
                          corr_sign: int = ANTICORRELATION) -> Optional[tuple[float, float]]:
    """Symmetric-sharpness interval where all four pairs beat the LHS bound.

    A uniform scan over ``[0, 1]`` locates the first run of grid points with
    ``min(S11, S12, S21, S22) > C_n``; each edge is then bisected to ``tol``.
    Returns ``None`` when no grid point violates.
    """
    if tol < 1e-10:
        raise ValueError(f"tol must be >= 1e-10, got {tol}")
    if points < 2:
        raise ValueError("points must be >= 2")
    mset = _as_set(n)

    def f(eta):
        return _window_margin(eta, mset, corr_sign)

    grid = np.linspace(0.0, 1.0, points)
    inside = [f(eta) > 0 for eta in grid]
    if not any(inside):
        return None
    first = inside.index(True)
    last = first
    while last + 1 < len(grid) and inside[last + 1]:
        last += 1
    low = grid[first] if first == 0 else _bisect(f, grid[first], grid[first - 1], tol)
    high = grid[last] if last == len(grid) - 1 else _bisect(f, grid[last], grid[last + 1], tol)
    return float(low), float(high)


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="seqsteer",
                description="Steering parameters for two sequential observers on each side of a singlet.")
    p.add_argument("--mode", choices=("symmetric", "fixed-b"), default="symmetric",
                   help="symmetric: eta_A = eta_B = eta; fixed-b: sweep eta_A at fixed --eta-b")
    p.add_argument("--n", type=int, action="append", choices=SUPPORTED_N, dest="n_list",
                   help="measurement count (repeatable); default: all supported")
    p.add_argument("--eta-start", type=float, default=0.0)
    p.add_argument("--eta-end", type=float, default=1.0)
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--eta-b", type=float, default=FIG6_ETA_B, help="Bob_1 sharpness in fixed-b mode")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--window", action="store_true",
                   help="report the sharpness window where all four pairs violate")
    p.add_argument("--tol", type=float, default=1e-6, help="bisection tolerance for --window")
    p.add_argument("--set-file", help="custom measurement directions, one 'x y z' per line")
    p.add_argument("--dump-set", action="store_true", help="print the measurement set(s) and exit")
    p.add_argument("--no-corr-sign", action="store_true",
                   help="report raw correlators (negative on the singlet)")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _ArgumentError as exc:
        print(f"seqsteer: error: {exc}", file=sys.stderr)
        return 1

    corr_sign = 1 if args.no_corr_sign else ANTICORRELATION
    try:
        if args.set_file:
            msets = [load_set(args.set_file)]
            if not msets[0].is_two_design():
                print(f"seqsteer: warning: {args.set_file} is not a spherical 2-design; "
                      "results will depend on the set", file=sys.stderr)
        else:
            msets = [platonic_set(n) for n in (args.n_list or SUPPORTED_N)]
    except OSError as exc:
        print(f"seqsteer: error: cannot read {args.set_file}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"seqsteer: error: {exc}", file=sys.stderr)
        return 1

    if args.dump_set:
        for mset in msets:
            if len(msets) > 1:
                sys.stdout.write(f"# n={mset.n}\n")
            sys.stdout.write(format_set(mset))
        return 0

    if args.window:
        try:
            for mset in msets:
                win = find_violation_window(mset, args.tol, corr_sign=corr_sign)
                if win is None:
                    print(f"n={mset.n}: no simultaneous violation window")
                else:
                    print(f"n={mset.n}: all four pairs violate for eta in [{win[0]:.6f}, {win[1]:.6f}]")
        except ValueError as exc:
            print(f"seqsteer: error: {exc}", file=sys.stderr)
            return 1
        if not args.out:
            return 0

    try:
        spec = SweepSpec(
            mode="fixed_b" if args.mode == "fixed-b" else "symmetric",
            n_list=msets,
            eta_start=args.eta_start,
            eta_end=args.eta_end,
            points=args.points,
            eta_b_fixed=args.eta_b,
            output_path=args.out,
            corr_sign=corr_sign,
        )
    except ValueError as exc:
        print(f"seqsteer: error: {exc}", file=sys.stderr)
        return 1

    try:
        rows = run_sweep(spec)
    except SweepIOError as exc:
        print(f"seqsteer: error: {exc}", file=sys.stderr)
        return 2
    if not args.out:
        sys.stdout.write(format_csv(rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
