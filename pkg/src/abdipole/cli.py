"""Command-line front end: ``abdipole {predict,sweep,fringes,validate}``.

Exit codes: 0 ok, 1 validation failure, 2 domain or schema error,
3 regime-guard violation, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

from . import model, oracle
from .config import DEFAULTS, ConfigError, RunConfig, load_config
from .errors import ConsistencyError, DomainError, QuadratureError, RegimeError, SamplingError
from .interferometry import (
    canonical_unit_field,
    deflection_angle,
    fringe_order_shift,
    fringe_profile,
    predict,
    unit_shift_field,
    unit_shift_field_closed_form,
)

EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN, EXIT_REGIME, EXIT_IO = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ("value", "p_total", "delta", "order_shift", "unit_shift_field", "ratio",
                 "pole_proximity", "status")


def fmt(x) -> str:
    """Fixed 17-significant-digit rendering used for every emitted float."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _q(value, unit, quantity):
    return {"value": value, "unit": unit, "quantity": quantity}


# ---------------------------------------------------------------- predict

def cmd_predict(cfg: RunConfig) -> dict:
    """Full breakdown and fringe prediction for one configuration."""
    coil = cfg.coil()
    kin = cfg.kinematics()
    beam = cfg.beam()
    bd, pred = predict(coil, beam, kin, cfg.consts, charges=cfg.charges)
    c = cfg.consts
    return {
        "command": "predict",
        "charges": cfg.charges,
        "side": beam.side.value,
        "solenoid": {
            "R": _q(coil.R, "m", "coil radius"),
            "n": _q(coil.n, "1/m", "winding density"),
            "Z": _q(coil.Z, "1", "mobile charges per winding"),
            "q_mag": _q(coil.q_mag, "C", "mobile charge magnitude"),
            "v_q": _q(coil.v_q, "m/s", "carrier drift speed"),
            "current": _q(coil.current, "A", "coil current from drifting negative carriers"),
            "area": _q(coil.area, "m^2", "cross-section pi R^2"),
            "B_i": _q(coil.field(c), "T", "interior flux density mu0 n I"),
        },
        "beam": {
            "b": _q(beam.b, "m", "impact parameter"),
            "kinetic_energy": _q(kin.kinetic_energy, "J", "electron kinetic energy"),
            "v_e": _q(kin.v_e, "m/s", "electron speed"),
            "gamma_e": _q(kin.gamma, "1", "electron Lorentz factor"),
            "p_e": _q(kin.p_e, "kg m/s", "electron momentum h/lambda_e"),
            "lambda_e": _q(kin.lambda_e, "m", "de Broglie wavelength"),
        },
        "breakdown": {
            "b_eff_minus": _q(bd.b_eff_minus, "m", "distance to co-moving semicircle centroid"),
            "b_eff_plus": _q(bd.b_eff_plus, "m", "distance to counter-moving semicircle centroid"),
            "mean_vqy": _q(bd.mean_vqy, "m/s", "semicircle-mean carrier speed along the beam"),
            "gamma": _q(bd.gamma, "1", "Lorentz factor of the beam relative to fixed charges"),
            "gamma_minus": _q(bd.gamma_minus, "1", "Lorentz factor relative to co-moving carriers"),
            "gamma_plus": _q(bd.gamma_plus, "1", "Lorentz factor relative to counter-moving carriers"),
            "dq_eff_minus": _q(bd.dq_eff_minus, "C", "per-turn effective charge, co-moving half"),
            "dq_eff_plus": _q(bd.dq_eff_plus, "C", "per-turn effective charge, counter-moving half"),
            "q_eff_minus": _q(bd.q_eff_minus, "C", "winding-integrated effective charge, co-moving half"),
            "q_eff_plus": _q(bd.q_eff_plus, "C", "winding-integrated effective charge, counter-moving half"),
            "p_minus": _q(bd.p_minus, "kg m/s", "x momentum from co-moving half"),
            "p_plus": _q(bd.p_plus, "kg m/s", "x momentum from counter-moving half"),
            "p_total": _q(bd.p_total, "kg m/s", "total x momentum, sum of halves"),
            "p_total_closed": _q(bd.p_total_closed, "kg m/s", "total x momentum, closed form -e S B_i / (2 b D)"),
            "pole_proximity": _q(bd.pole_proximity, "1", "(pi R)^2 / (16 b^2)"),
        },
        "prediction": {
            "delta": _q(pred.delta, "rad", "deflection angle atan(-P/p_e)"),
            "order_shift": _q(pred.order_shift, "1", "fringe shift 2 b sin(delta) / lambda_e"),
            "unit_shift_field": _q(pred.unit_shift_field, "T", "|B_i| for a one-order shift (pipeline inversion)"),
            "canonical_unit_field": _q(pred.canonical_unit_field, "T", "(h/e) / S"),
            "ratio": _q(pred.ratio, "1", "canonical / model one-order field"),
        },
    }


def _predict_csv(report: dict) -> str:
    out = io.StringIO()
    out.write("# abdipole predict\n")
    out.write(f"# charges={report['charges']} side={report['side']}\n")
    out.write("section,name,value,unit,quantity\n")
    for section in ("solenoid", "beam", "breakdown", "prediction"):
        for name, entry in report[section].items():
            out.write(f"{section},{name},{fmt(entry['value'])},{entry['unit']},\"{entry['quantity']}\"\n")
    return out.getvalue()


# ------------------------------------------------------------------ sweep

@dataclass(frozen=True)
class SweepRow:
    value: float
    p_total: float | None = None
    delta: float | None = None
    order_shift: float | None = None
    unit_shift_field: float | None = None
    ratio: float | None = None
    pole_proximity: float | None = None
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def sweep_row(cfg: RunConfig, parameter: str, value: float) -> SweepRow:
    try:
        point = cfg.with_value(parameter, float(value))
        coil = point.coil()
        kin = point.kinematics()
        beam = point.beam()
        bd, pred = predict(coil, beam, kin, point.consts, charges=point.charges)
    except (DomainError, RegimeError, ConsistencyError) as exc:
        return SweepRow(value=float(value), status=f"error: {type(exc).__name__}: {exc}")
    return SweepRow(float(value), bd.p_total, pred.delta, pred.order_shift, pred.unit_shift_field,
                    pred.ratio, bd.pole_proximity)


def cmd_sweep(cfg: RunConfig) -> list[SweepRow]:
    """One row per grid point, in grid order; failed points become error rows."""
    if cfg.sweep is None:
        raise ConfigError("sweep requires a sweep block (sweep.parameter, start, stop, points)")
    return [sweep_row(cfg, cfg.sweep.parameter, v) for v in cfg.sweep.grid()]


def _sweep_csv(cfg: RunConfig, rows) -> str:
    out = io.StringIO()
    sw = cfg.sweep
    out.write(f"# abdipole sweep parameter={sw.parameter} spacing={sw.spacing} points={sw.points}\n")
    out.write(",".join(SWEEP_COLUMNS) + "\n")
    for row in rows:
        cells = []
        for col in SWEEP_COLUMNS:
            v = getattr(row, col)
            cells.append("" if v is None else (f"\"{v}\"" if col == "status" and not row.ok else fmt(v)))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


# --------------------------------------------------------------- validate

def _check(name, value, reference, tolerance, relative=True):
    abs_err = abs(value - reference)
    scale = abs(reference)
    rel_err = abs_err / scale if scale > 0 else (0.0 if abs_err == 0 else math.inf)
    measure = rel_err if relative else abs_err
    return {
        "name": name,
        "value": value,
        "reference": reference,
        "abs_error": abs_err,
        "rel_error": rel_err,
        "tolerance": tolerance,
        "tolerance_kind": "relative" if relative else "absolute",
        "passed": bool(measure <= tolerance),
    }


def _failed(name, exc):
    return {"name": name, "value": None, "reference": None, "abs_error": None, "rel_error": None,
            "tolerance": None, "tolerance_kind": None, "passed": False,
            "error": f"{type(exc).__name__}: {exc}"}


def cmd_validate(cfg: RunConfig) -> list[dict]:
    """Run every oracle and identity check at the configured point."""
    c = cfg.consts
    coil = cfg.coil()
    checks = []

    def run(name, fn):
        try:
            result = fn()
        except (DomainError, RegimeError, QuadratureError, ConsistencyError) as exc:
            checks.append(_failed(name, exc))
            return
        checks.extend(result if isinstance(result, list) else [result])

    run("constants: eps0 mu0 c0^2 = 1",
        lambda: _check("constants: eps0 mu0 c0^2 = 1", c.eps0 * c.mu0 * c.c0**2, 1.0, 1e-9))

    vq = coil.v_q if coil.v_q != 0 else 1.0
    run("half-circle weight", lambda: _check(
        "half-circle weight", oracle.oracle_half_circle_weight(coil.R, vq).value, 2 * coil.R * vq, 1e-12))
    run("centroid offset", lambda: _check(
        "centroid offset", oracle.oracle_cg(coil.R).value, model.cg_offsets(coil.R)[0], 1e-12))

    def winding():
        dq = model.effective_charge_approx(coil, cfg.kinematics().v_e, c)[0] or 1.0
        closed = model.winding_integrated_charge(dq, coil.n, cfg.b)
        x = oracle.oracle_winding_integral(coil.n, cfg.b, dq)
        z = oracle.oracle_winding_integral(coil.n, cfg.b, dq, component="z")
        return [_check("winding integral", x.value, closed, 1e-9),
                _check("axial winding component / projected charge", abs(z.value) / abs(closed), 0.0, 1e-12,
                       relative=False)]
    run("winding integral", winding)

    def phi_resolved():
        v_e = cfg.kinematics().v_e
        rel_bound = 10 * abs(coil.v_q) / v_e
        approx = model.effective_charge_approx(coil, v_e, c)
        exact = model.effective_charge_exact(coil, v_e, c)
        expd = oracle.oracle_phi_resolved_charge(coil, v_e, c, lorentz="expanded")
        full = oracle.oracle_phi_resolved_charge(coil, v_e, c, lorentz="exact")
        out = []
        for label, i in (("co-moving", 0), ("counter-moving", 1)):
            if approx[i] == 0:
                out.append(_check(f"phi-resolved charge {label}, expanded gamma", expd[i].value, 0.0, 0.0,
                                  relative=False))
                continue
            out.append(_check(f"phi-resolved charge {label}, expanded gamma vs linearised charge",
                              expd[i].value, approx[i], rel_bound))
            out.append(_check(f"phi-resolved charge {label}, exact gamma vs mean-speed exact charge",
                              full[i].value, exact[i], rel_bound))
        return out
    run("phi-resolved charge", phi_resolved)

    def identity():
        beam = cfg.beam()
        bd = model.total_transverse_momentum(coil, beam, c, charges="approx")
        orient = beam.side.orientation
        p15_minus = orient * model.side_momentum_closed_form(coil, beam.b, bd.b_eff_minus, -1.0, c)
        p15_plus = orient * model.side_momentum_closed_form(coil, beam.b, bd.b_eff_plus, 1.0, c)
        if bd.p_total_closed == 0:
            return [_check("per-side sum vs closed-form total", bd.p_total, 0.0, 0.0, relative=False)]
        return [
            _check("kernel vs reduced per-side momentum (co-moving)", bd.p_minus, p15_minus, 1e-12),
            _check("kernel vs reduced per-side momentum (counter-moving)", bd.p_plus, p15_plus, 1e-12),
            _check("reduced per-side sum vs closed-form total", p15_minus + p15_plus, bd.p_total_closed, 1e-12),
            _check("kernel per-side sum vs closed-form total", bd.p_total, bd.p_total_closed, 1e-12),
        ]
    run("momentum identity", identity)

    def round_trip():
        kin = cfg.kinematics()
        beam = cfg.beam()
        field = unit_shift_field(coil, beam, kin, c)
        closed = unit_shift_field_closed_form(coil, beam.b, c)
        bd = model.total_transverse_momentum(model.solenoid_for_field(coil, field, c), beam, c)
        order = fringe_order_shift(deflection_angle(bd.p_total, kin.p_e), beam.b, kin.lambda_e)
        return [_check("one-order field: inversion vs closed form", field, closed, 1e-9),
                _check("round trip: order shift at one-order field", abs(order), 1.0, 1e-9)]
    run("round trip", round_trip)
    return checks


def _validate_csv(checks) -> str:
    out = io.StringIO()
    out.write("# abdipole validate\n")
    cols = ("name", "value", "reference", "abs_error", "rel_error", "tolerance", "tolerance_kind", "passed")
    out.write(",".join(cols) + "\n")
    for chk in checks:
        cells = []
        for col in cols:
            v = chk.get(col)
            if col == "name":
                cells.append(f"\"{v}\"")
            elif v is None:
                cells.append("")
            else:
                cells.append(fmt(v))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------- fringes

def cmd_fringes(cfg: RunConfig):
    """Fringe profile at the configured drive, plus its header values."""
    coil = cfg.coil()
    kin = cfg.kinematics()
    beam = cfg.beam()
    bd, pred = predict(coil, beam, kin, cfg.consts, charges=cfg.charges)
    profile = fringe_profile(pred.order_shift, cfg.n_periods, cfg.samples)
    header = {
        "shift_orders": pred.order_shift,
        "unit_shift_field_T": pred.unit_shift_field,
        "B_i_T": coil.field(cfg.consts),
        "canonical_unit_field_T": canonical_unit_field(coil.area, cfg.consts),
    }
    return profile, header


def fringes_csv(profile, header) -> str:
    out = io.StringIO()
    out.write("# abdipole fringes\n")
    for key, value in header.items():
        out.write(f"# {key} = {fmt(value)}\n")
    out.write("position_orders,intensity\n")
    for u, i in zip(profile.positions, profile.intensities):
        out.write(f"{fmt(float(u))},{fmt(float(i))}\n")
    return out.getvalue()


def read_fringes_csv(text: str):
    """Parse :func:`fringes_csv` output back into (header, positions, intensities)."""
    header, positions, intensities = {}, [], []
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                header[key.strip()] = float(value)
        elif line and not line.startswith("position_orders"):
            u, i = line.split(",")
            positions.append(float(u))
            intensities.append(float(i))
    return header, positions, intensities


# ------------------------------------------------------------------- main

def _emit(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abdipole", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("predict", "momentum breakdown and fringe prediction"),
                            ("sweep", "tabulate predictions over a parameter grid"),
                            ("fringes", "write a fringe-intensity profile as CSV"),
                            ("validate", "run the quadrature oracles and identity checks")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML configuration file (dotted keys)")
        p.add_argument("--output", help="output path (default: output.path or stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                       help="override one configuration key (repeatable)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            cfg = load_config(args.config, args.override, strict_constants=False,
                              defaults=None if args.config else DEFAULTS)
        else:
            if args.config is None and not args.override:
                raise ConfigError(f"{args.command} needs --config or --override values")
            cfg = load_config(args.config, args.override)
        out_path = args.output or cfg.output_path

        if args.command == "predict":
            report = cmd_predict(cfg)
            form = args.format or cfg.output_format or "json"
            _emit(_json(report) if form == "json" else _predict_csv(report), out_path)
            return EXIT_OK

        if args.command == "sweep":
            rows = cmd_sweep(cfg)
            form = args.format or cfg.output_format or "csv"
            if form == "json":
                text = _json({"command": "sweep", "parameter": cfg.sweep.parameter,
                              "rows": [asdict(r) for r in rows]})
            else:
                text = _sweep_csv(cfg, rows)
            _emit(text, out_path)
            if not any(r.ok for r in rows):
                print("abdipole: every sweep point is outside the valid domain", file=sys.stderr)
                return EXIT_DOMAIN
            return EXIT_OK

        if args.command == "fringes":
            profile, header = cmd_fringes(cfg)
            _emit(fringes_csv(profile, header), out_path)
            return EXIT_OK

        checks = cmd_validate(cfg)
        passed = all(chk["passed"] for chk in checks)
        form = args.format or cfg.output_format or "json"
        if form == "json":
            text = _json({"command": "validate", "passed": passed, "checks": checks})
        else:
            text = _validate_csv(checks)
        _emit(text, out_path)
        return EXIT_OK if passed else EXIT_VALIDATION

    except RegimeError as exc:
        print(f"abdipole: regime guard violated: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (ConfigError, DomainError, SamplingError, ConsistencyError) as exc:
        print(f"abdipole: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"abdipole: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
