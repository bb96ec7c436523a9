"""Command-line front end: prepare states, run interferometer sweeps, run
verification suites, and emit machine-readable datasets.

Commands: ``prepare``, ``interfere``, ``verify``, ``figure9``. Flags may also
be supplied through a ``key = value`` config file (flags take precedence).
Exit codes: 0 success/pass, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .core import PureState
from .harness import (
    SweepSpec,
    family_sweep,
    records_csv,
    summarize,
    verify_equality,
    verify_inequality,
)
from .interferometer import (
    INDEPENDENT,
    LOCKED,
    PhaseGrid,
    general_basis_rotation,
    sweep_interferogram,
    sweep_interferogram_density,
)
from .measures import preferred_basis, table_basis
from .states import (
    FamilyParams,
    StateClassTag,
    family_state,
    pseudopure,
    random_pure_state,
)

INTERFEROGRAM_HEADER_LOCKED = (
    "# qcomplement interferogram v1\n"
    "phi,"
    "joint_00,joint_01,joint_02,joint_03,"
    "joint_10,joint_11,joint_12,joint_13,"
    "single_0,single_1,"
    "corrected_00,corrected_01,corrected_10,corrected_11"
)
INTERFEROGRAM_HEADER_INDEPENDENT = INTERFEROGRAM_HEADER_LOCKED.replace(
    "phi,", "phi1,phi2,")
FIGURE9_HEADER = "# qcomplement figure9 v1\nV2,S"

_ANGLE_NAMES = ("alpha1", "alpha2_0", "alpha2_1",
                "alpha3_00", "alpha3_01", "alpha3_10", "alpha3_11")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# Argument and config handling
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcomplement",
        description="Four-way interferometer simulation and complementarity "
                    "verification for three-qubit pure states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value config file; flags override")
        p.add_argument("--output", help="output file path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--phase-points", type=int, default=None)
        p.add_argument("--mode", choices=(LOCKED, INDEPENDENT), default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--degrees", action="store_true", default=None,
                       help="interpret all angle flags as degrees")

    def add_state(p):
        p.add_argument("--class", dest="state_class",
                       choices=("ghz", "w", "intermediate", "general"))
        for name in _ANGLE_NAMES:
            p.add_argument("--" + name.replace("_", "-"), dest=name,
                           type=float, default=None)
        p.add_argument("--random", action="store_true", default=None)
        p.add_argument("--state", help="amplitude file (one 're im' line per "
                                       "basis state, |000> first)")

    p = sub.add_parser("prepare", help="write a state amplitude file")
    add_common(p)
    add_state(p)

    p = sub.add_parser("interfere", help="run a phase sweep and emit the interferogram")
    add_common(p)
    add_state(p)
    p.add_argument("--basis", choices=("eigensolve", "table"), default=None)
    p.add_argument("--epsilon", type=float, default=None,
                   help="run on the pseudopure mixture of this polarization")

    p = sub.add_parser("verify", help="verify the complementarity relation")
    add_common(p)
    p.add_argument("--family", choices=("ghz", "w", "intermediate"))
    p.add_argument("--sweep", default=None, help="swept parameter name (default alpha1)")
    p.add_argument("--points", type=int, default=None, help="sweep grid size")
    for name in _ANGLE_NAMES:
        p.add_argument("--" + name.replace("_", "-"), dest=name,
                       type=float, default=None)
    p.add_argument("--random", action="store_true", default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--basis-coeffs", default=None,
                   help="4 comma-separated complex coefficients; switches to "
                        "the extended-basis inequality check")

    p = sub.add_parser("figure9", help="emit (V2, S) pairs for a family sweep")
    add_common(p)
    p.add_argument("--family", choices=("ghz", "w", "intermediate"), required=True)
    p.add_argument("--points", type=int, default=None)
    for name in _ANGLE_NAMES:
        p.add_argument("--" + name.replace("_", "-"), dest=name,
                       type=float, default=None)
    return parser


def _load_config(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    return values


_CONFIG_PARSERS = {
    "tolerance": float, "phase_points": int, "seed": int, "count": int,
    "points": int, "epsilon": float,
    "random": lambda v: v.lower() in ("1", "true", "yes"),
    "degrees": lambda v: v.lower() in ("1", "true", "yes"),
}
_CONFIG_PARSERS.update({name: float for name in _ANGLE_NAMES})


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        for key, raw in _load_config(args.config).items():
            if not hasattr(args, key):
                raise UsageError(f"unknown config key {key!r}")
            if getattr(args, key) is None:
                try:
                    value = _CONFIG_PARSERS.get(key, str)(raw)
                except ValueError as exc:
                    raise UsageError(f"bad config value for {key!r}: {raw}") from exc
                setattr(args, key, value)
    # Defaults applied after config merge so that config wins over defaults
    # but flags win over config.
    defaults = {"format": "csv", "tolerance": 1e-6, "phase_points": 360,
                "mode": LOCKED, "degrees": False}
    for key, val in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    return args


# ---------------------------------------------------------------------------
# State construction and I/O
# ---------------------------------------------------------------------------

def _angles(args) -> dict:
    scale = np.pi / 180.0 if args.degrees else 1.0
    out = {}
    for name in _ANGLE_NAMES:
        val = getattr(args, name, None)
        if val is not None:
            out[name] = float(val) * scale
    return out


def _family_params(tag: StateClassTag, angles: dict) -> FamilyParams:
    base = {name: 0.0 for name in _ANGLE_NAMES}
    if tag is StateClassTag.GHZ:
        base.update(alpha2_1=np.pi, alpha3_11=np.pi)
    elif tag is StateClassTag.W:
        base.update(alpha3_00=np.pi)
    base.update(angles)
    return FamilyParams(**base)


def read_state_file(path: str) -> PureState:
    amps = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise UsageError(f"{path}:{lineno}: expected 're im'")
                try:
                    amps.append(complex(float(parts[0]), float(parts[1])))
                except ValueError as exc:
                    raise UsageError(f"{path}:{lineno}: bad number") from exc
    except OSError as exc:
        raise UsageError(f"cannot read state file: {exc}") from exc
    if len(amps) != 8:
        raise UsageError(f"state file has {len(amps)} amplitudes, expected 8")
    arr = np.array(amps, dtype=np.complex128)
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > 1e-6:
        raise UsageError(f"state file norm {norm} is not 1")
    return PureState(arr / norm, 3)


def write_state_file(xi: PureState) -> str:
    lines = ["# qcomplement state v1: one 're im' amplitude per line, "
             "basis |000> ... |111>"]
    for a in xi.amplitudes:
        lines.append(f"{_fmt(a.real)} {_fmt(a.imag)}")
    return "\n".join(lines) + "\n"


def _state_from_args(args) -> tuple[PureState, StateClassTag | None, FamilyParams | None]:
    if getattr(args, "state", None):
        return read_state_file(args.state), None, None
    if getattr(args, "random", None):
        seed = args.seed if args.seed is not None else 0
        return random_pure_state(seed), None, None
    cls = getattr(args, "state_class", None)
    if cls is None:
        raise UsageError("specify --class, --random, or --state")
    tag = StateClassTag(cls)
    params = _family_params(tag, _angles(args))
    return family_state(tag, params), tag, params


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_prepare(args) -> int:
    xi, _, _ = _state_from_args(args)
    _emit(args, write_state_file(xi))
    return 0


def _interferogram_rows(ig, grid) -> list[str]:
    rows = []
    if grid.mode == LOCKED:
        for a, phi in enumerate(grid.phi1_values):
            vals = ([phi] + list(ig.joint[a].reshape(-1))
                    + list(ig.single_a[a]) + list(ig.corrected[a].reshape(-1)))
            rows.append(",".join(_fmt(v) for v in vals))
    else:
        for a, p1 in enumerate(grid.phi1_values):
            for b, p2 in enumerate(grid.phi2_values):
                vals = ([p1, p2] + list(ig.joint[a, b].reshape(-1))
                        + list(ig.single_a[a, b])
                        + list(ig.corrected[a, b].reshape(-1)))
                rows.append(",".join(_fmt(v) for v in vals))
    return rows


def cmd_interfere(args) -> int:
    xi, tag, params = _state_from_args(args)
    grid = PhaseGrid.uniform(args.phase_points, args.mode)
    basis_source = args.basis or ("table" if tag in (
        StateClassTag.GHZ, StateClassTag.W, StateClassTag.INTERMEDIATE) else "eigensolve")
    if basis_source == "table":
        if tag is None or tag is StateClassTag.GENERAL:
            raise UsageError("--basis table requires a named family")
        basis = table_basis(tag, params)
    else:
        basis = preferred_basis(xi)
    rotation = general_basis_rotation(basis)
    if getattr(args, "epsilon", None) is not None:
        ig = sweep_interferogram_density(pseudopure(xi, args.epsilon), rotation, grid)
    else:
        ig = sweep_interferogram(xi, rotation, grid)
    header = (INTERFEROGRAM_HEADER_LOCKED if grid.mode == LOCKED
              else INTERFEROGRAM_HEADER_INDEPENDENT)
    rows = _interferogram_rows(ig, grid)
    if args.format == "json":
        payload = {"columns": header.splitlines()[1].split(","),
                   "rows": [[float(v) for v in r.split(",")] for r in rows]}
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        _emit(args, header + "\n" + "\n".join(rows) + "\n")
    return 0


def _parse_coeffs(raw: str) -> np.ndarray:
    parts = raw.split(",")
    if len(parts) != 4:
        raise UsageError("--basis-coeffs expects 4 comma-separated values")
    try:
        vals = np.array([complex(p.strip().replace("i", "j")) for p in parts])
    except ValueError as exc:
        raise UsageError(f"bad coefficient in {raw!r}") from exc
    norm = np.linalg.norm(vals)
    if norm < 1e-12:
        raise UsageError("coefficients must not all vanish")
    return vals / norm


def cmd_verify(args) -> int:
    phase_points = args.phase_points
    coeffs = _parse_coeffs(args.basis_coeffs) if args.basis_coeffs else None
    records = []
    if args.random:
        count = args.count if args.count is not None else 50
        seed0 = args.seed if args.seed is not None else 0
        for k in range(count):
            xi = random_pure_state(seed0 + k)
            if coeffs is None:
                records.append(verify_equality(xi, phase_points, f"seed={seed0 + k}"))
            else:
                records.append(verify_inequality(xi, coeffs, phase_points,
                                                 f"seed={seed0 + k}"))
    elif args.family:
        tag = StateClassTag(args.family)
        points = args.points if args.points is not None else 33
        values = np.linspace(0.0, np.pi, points)
        parameter = args.sweep or "alpha1"
        fixed = {k: v for k, v in _angles(args).items() if k != parameter}
        if coeffs is None:
            spec = SweepSpec(family=tag, parameter=parameter, values=values,
                             fixed=fixed, phase_points=phase_points)
            records = family_sweep(spec)
        else:
            for value in values:
                params = _family_params(tag, {**fixed, parameter: float(value)})
                xi = family_state(tag, params)
                records.append(verify_inequality(
                    xi, coeffs, phase_points,
                    f"{tag.value}:{parameter}={value:.17g}"))
    else:
        raise UsageError("specify --family or --random")

    check = "equality" if coeffs is None else "inequality"
    tolerance = args.tolerance if check == "equality" else max(args.tolerance, 1e-8)
    summary = summarize(records, tolerance, check)
    csv_text = records_csv(records)
    if args.output:
        _emit(args, csv_text)
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    elif args.format == "json":
        sys.stdout.write(json.dumps({"summary": summary,
                                     "records_csv": csv_text}, indent=2) + "\n")
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0 if summary["pass"] else 1


def cmd_figure9(args) -> int:
    tag = StateClassTag(args.family)
    points = args.points if args.points is not None else 33
    phase_points = args.phase_points
    fixed = {k: v for k, v in _angles(args).items() if k != "alpha1"}
    spec = SweepSpec(family=tag, parameter="alpha1",
                     values=np.linspace(0.0, np.pi, points), fixed=fixed,
                     phase_points=phase_points)
    records = family_sweep(spec)
    lines = [FIGURE9_HEADER]
    for r in records:
        lines.append(f"{_fmt(r.v2)},{_fmt(r.s)}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args)
        handler = {"prepare": cmd_prepare, "interfere": cmd_interfere,
                   "verify": cmd_verify, "figure9": cmd_figure9}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
