"""Command-line surface: amplitudes, flows, solution families, fields, verify.

Every command renders a deterministic report (CSV with a header row or JSON
with stable key order; floats at 15 significant digits) so repeated runs with
the same configuration are byte-identical.  Physical preconditions are
re-validated at parse time and violations exit with status 1 and a
single-line machine-parseable diagnostic; numerical-invariant failures from
``verify`` exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import fields, kernel, singfree, transfer, verify
from .amplitudes import IncidentWave
from .errors import PointScatterError, ValidationError
from .kernel import CutoffSpec
from .singfree import FamilyParams
from .transfer import Coupling

ERROR_PREFIX = "pointscatter: error:"

FAR_FIELD_KR = (20.0, 50.0, 100.0)
FAR_FIELD_NTHETA = 120


def _sig15(value: float) -> str:
    return f"{value:.15g}"


def _json_float(value: float) -> float:
    # round-trip through the 15-significant-digit form so JSON and CSV agree
    return float(_sig15(value)) if math.isfinite(value) else value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"expected RE,IM complex pair, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ValidationError(f"bad complex pair {text!r}") from exc


def _parse_float_list(text: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise ValidationError(f"bad numeric list {text!r}") from exc
    if not values:
        raise ValidationError("empty numeric list")
    return values


def _parse_grid(text: str) -> fields.GridSpec:
    parts = text.split(",")
    if len(parts) != 6:
        raise ValidationError(f"expected X0,X1,NX,Y0,Y1,NY, got {text!r}")
    try:
        return fields.GridSpec(float(parts[0]), float(parts[1]), int(parts[2]),
                               float(parts[3]), float(parts[4]), int(parts[5]))
    except ValueError as exc:
        raise ValidationError(f"bad grid spec {text!r}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="pointscatter",
                     description="2D delta-function point scatterer, both treatments")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, need_z=True):
        p.add_argument("--k", type=float, default=1.0, help="wavenumber (>0)")
        p.add_argument("--theta0", type=float, default=math.pi,
                       help="incidence angle in radians, in (pi/2, 3pi/2)")
        if need_z:
            p.add_argument("--z", type=_parse_complex, default=complex(1.0, 0.0),
                           metavar="RE,IM", help="coupling constant")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, metavar="PATH",
                       help="output file (default: stdout)")

    p_amp = sub.add_parser("amplitude", help="scattering amplitude, both routes")
    add_common(p_amp)
    p_amp.add_argument("--theta-grid", type=int, default=8, metavar="N",
                       help="number of scattering angles")

    p_flow = sub.add_parser("flow", help="renormalization flow across cutoffs")
    add_common(p_flow)
    p_flow.add_argument("--lambda", dest="lam", type=_parse_float_list,
                        default=[1e2, 1e4, 1e6], metavar="L1,L2,...",
                        help="strictly increasing cutoffs, all > k")
    p_flow.add_argument("--mu", type=float, default=None,
                        help="renormalization scale (default: k)")

    p_fam = sub.add_parser("family", help="two-parameter solution family")
    add_common(p_fam)
    p_fam.add_argument("--lambda", dest="lam", type=_parse_float_list,
                       default=[2.0, 10.0, 100.0], metavar="L1,L2,...")
    p_fam.add_argument("--b-plus", type=_parse_complex, default=0j, metavar="RE,IM")
    p_fam.add_argument("--b-minus", type=_parse_complex, default=0j, metavar="RE,IM")

    p_field = sub.add_parser("field", help="wavefunction and current grids")
    add_common(p_field)
    p_field.add_argument("--grid", type=_parse_grid,
                         default=fields.GridSpec(-2.0, 2.0, 201, -2.0, 2.0, 201),
                         metavar="X0,X1,NX,Y0,Y1,NY")
    p_field.add_argument("--psi0-only", action="store_true",
                         help="emit the non-scattering solution psi0 instead")
    p_field.add_argument("--b-plus", type=_parse_complex, default=0j, metavar="RE,IM")
    p_field.add_argument("--b-minus", type=_parse_complex, default=0j, metavar="RE,IM")
    p_field.add_argument("--far-field", action="store_true",
                         help="also emit polar-circle samples with asymptotic residuals")

    p_verify = sub.add_parser("verify", help="run the numerical invariant suite")
    p_verify.add_argument("--json", action="store_true", dest="as_json")
    p_verify.add_argument("--inject-fault", action="store_true",
                          help="negative control: flip a sign in the solve oracle")
    p_verify.add_argument("--out", default=None, metavar="PATH")

    return parser


# ---------------------------------------------------------------------------
# Rendering helpers

def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else _sig15(cell)
                         for cell in row])
    return buf.getvalue().encode("utf-8")


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def _json_rows(header, rows):
    return [{name: (_json_float(cell) if not isinstance(cell, str) else cell)
             for name, cell in zip(header, row)} for row in rows]


def _incident(args) -> IncidentWave:
    return IncidentWave(args.k, args.theta0)


def _theta_values(w: IncidentWave, n: int) -> list[float]:
    if n < 1:
        raise ValidationError("--theta-grid must be at least 1")
    thetas = [-0.5 * math.pi + (j + 0.5) * 2.0 * math.pi / n for j in range(n)]
    for theta in thetas:
        if theta in (0.5 * math.pi, -0.5 * math.pi, 1.5 * math.pi) or theta == w.theta0:
            raise ValidationError(
                f"theta grid with N={n} hits an excluded angle ({theta!r}); "
                "choose a different --theta-grid")
    return thetas


def _increasing_cutoffs(lams, k: float) -> list[float]:
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValidationError("cutoff list must be strictly increasing")
    if any(not lam > k for lam in lams):
        raise ValidationError("all cutoffs must exceed the wavenumber")
    return [float(lam) for lam in lams]


# ---------------------------------------------------------------------------
# Commands.  Each returns [(suffix_or_None, payload_bytes), ...]

def cmd_amplitude(args):
    w = _incident(args)
    z = Coupling.finite(args.z)
    z_tilde = Coupling.renormalized(args.z, w.k)
    thetas = _theta_values(w, args.theta_grid)
    header = ["theta", "re_f_dfss", "im_f_dfss", "abs2_f_dfss",
              "re_f_renormalized", "im_f_renormalized", "abs2_f_renormalized",
              "abs_route_difference"]
    rows = []
    agree = True
    for theta in thetas:
        f1 = transfer.scattering_amplitude_dfss(w, z, theta)
        f2 = transfer.scattering_amplitude_renormalized(w, z_tilde)
        agree = agree and (f1 == f2)
        rows.append([theta, f1.real, f1.imag, abs(f1) ** 2,
                     f2.real, f2.imag, abs(f2) ** 2, abs(f1 - f2)])
    if args.format == "csv":
        return [(None, _csv_bytes(header, rows))]
    obj = {
        "command": "amplitude",
        "parameters": {"k": _json_float(w.k), "theta0": _json_float(w.theta0),
                       "z": [_json_float(args.z.real), _json_float(args.z.imag)]},
        "forward_direction": "excluded: carries -2*pi*delta(theta - theta0), symbolic only",
        "routes_agree": agree,
        "rows": _json_rows(header, rows),
    }
    return [(None, _json_bytes(obj))]


def cmd_flow(args):
    w = _incident(args)
    d = w.dispersion()
    mu = w.k if args.mu is None else float(args.mu)
    if not (math.isfinite(mu) and mu > 0):
        raise ValidationError("--mu must be positive")
    lams = _increasing_cutoffs(args.lam, w.k)
    z_tilde = args.z
    f_ren = transfer.scattering_amplitude_renormalized(
        w, Coupling.renormalized(z_tilde, mu))
    z_finite = Coupling.finite(z_tilde)
    header = ["lambda", "lambda_over_k", "re_z_bare", "im_z_bare",
              "re_green_cutoff_zero", "im_green_cutoff_zero",
              "re_f_bare", "im_f_bare", "re_f_renormalized", "im_f_renormalized",
              "abs_route_difference", "re_b_sum", "im_b_sum",
              "re_b_tilde", "im_b_tilde"]
    rows = []
    for lam in lams:
        z_bare = transfer.flow_bare_coupling(z_tilde, lam, mu)
        g0 = kernel.green_cutoff_zero(CutoffSpec(lam), d)
        f_bare = transfer.bare_amplitude_with_cutoff(w, z_bare, lam)
        b_sum = singfree.absorption_condition(z_finite, lam, d)
        b_tilde = singfree.renormalized_b(b_sum, lam, d)
        rows.append([lam, lam / w.k, z_bare.real, z_bare.imag, g0.real, g0.imag,
                     f_bare.real, f_bare.imag, f_ren.real, f_ren.imag,
                     abs(f_bare - f_ren), b_sum.real, b_sum.imag,
                     b_tilde.real, b_tilde.imag])
    if args.format == "csv":
        return [(None, _csv_bytes(header, rows))]
    obj = {
        "command": "flow",
        "parameters": {"k": _json_float(w.k), "theta0": _json_float(w.theta0),
                       "z_tilde": [_json_float(z_tilde.real), _json_float(z_tilde.imag)],
                       "mu": _json_float(mu)},
        "b_tilde_limit": [_json_float(singfree.renormalized_b_limit(z_finite).real),
                          _json_float(singfree.renormalized_b_limit(z_finite).imag)],
        "rows": _json_rows(header, rows),
    }
    return [(None, _json_bytes(obj))]


def cmd_family(args):
    w = _incident(args)
    d = w.dispersion()
    z = Coupling.finite(args.z)
    lams = _increasing_cutoffs(args.lam, w.k)
    params = FamilyParams(args.b_plus, args.b_minus)
    f_dfss = transfer.scattering_amplitude_dfss(
        w, z, _theta_values(w, 8)[0])
    header = ["lambda", "lambda_over_k", "re_h0_regularized", "im_h0_regularized",
              "re_c", "im_c", "re_f_family", "im_f_family",
              "re_b_sum_absorption", "im_b_sum_absorption",
              "re_f_absorbed", "im_f_absorbed", "abs_f_absorbed_minus_dfss",
              "re_b_tilde", "im_b_tilde"]
    rows = []
    for lam in lams:
        h_reg = kernel.regularized_h0_at_zero(CutoffSpec(lam), d)
        _, c = singfree.family_solution(w, z, params, lam)
        f_fam = singfree.family_amplitude(w, z, params, lam)
        b_sum = singfree.absorption_condition(z, lam, d)
        f_abs = singfree.family_amplitude(w, z, FamilyParams(b_sum, 0j), lam)
        b_tilde = singfree.renormalized_b(b_sum, lam, d)
        rows.append([lam, lam / w.k, h_reg.real, h_reg.imag, c.real, c.imag,
                     f_fam.real, f_fam.imag, b_sum.real, b_sum.imag,
                     f_abs.real, f_abs.imag, abs(f_abs - f_dfss),
                     b_tilde.real, b_tilde.imag])
    if args.format == "csv":
        return [(None, _csv_bytes(header, rows))]
    obj = {
        "command": "family",
        "parameters": {"k": _json_float(w.k), "theta0": _json_float(w.theta0),
                       "z": [_json_float(args.z.real), _json_float(args.z.imag)],
                       "b_plus": [_json_float(args.b_plus.real), _json_float(args.b_plus.imag)],
                       "b_minus": [_json_float(args.b_minus.real), _json_float(args.b_minus.imag)]},
        "rows": _json_rows(header, rows),
    }
    return [(None, _json_bytes(obj))]


def _field_rows(grid: fields.FieldGrid, current: fields.CurrentGrid):
    header = ["x", "y", "re_psi", "im_psi", "abs2_psi", "jx", "jy", "mask"]
    rows = []
    for i, xv in enumerate(grid.x):
        for j, yv in enumerate(grid.y):
            psi = grid.values[i, j]
            rows.append([float(xv), float(yv), psi.real, psi.imag,
                         abs(psi) ** 2, float(current.jx[i, j]),
                         float(current.jy[i, j]), float(grid.excluded_mask[i, j])])
    return header, rows


def cmd_field(args):
    w = _incident(args)
    if args.far_field and args.psi0_only:
        raise ValidationError("--far-field applies to the total field only")
    if args.far_field and args.out is None and args.format == "csv":
        raise ValidationError("--far-field with csv output requires --out")
    if args.psi0_only:
        grid = fields.psi0_field(FamilyParams(args.b_plus, args.b_minus),
                                 w.k, args.grid)
    else:
        grid = fields.total_field(w, Coupling.finite(args.z), args.grid)
    current = fields.current_density(grid, k=w.k)
    header, rows = _field_rows(grid, current)

    far = None
    if args.far_field:
        z = Coupling.finite(args.z)
        sol = transfer.solve_fundamental(w, z)
        f = transfer._closed_form_amplitude(z.value)
        far_header = ["kr", "theta", "re_psi", "im_psi", "re_psi_asymptotic",
                      "im_psi_asymptotic", "abs_residual", "relative_residual"]
        far_rows = []
        thetas = [-math.pi + (j + 0.5) * 2.0 * math.pi / FAR_FIELD_NTHETA
                  for j in range(FAR_FIELD_NTHETA)]
        for kr in FAR_FIELD_KR:
            r = kr / w.k
            scale = abs(f) / (2.0 * math.pi * math.sqrt(kr))
            for theta in thetas:
                xv, yv = r * math.cos(theta), r * math.sin(theta)
                psi = complex(fields.field_values_at(w, sol.c_prime, [xv], [yv])[0])
                scattered = np.sqrt(1j / kr) * np.exp(1j * kr) * f / (2.0 * math.pi)
                incident = np.exp(1j * (-w.varpi0 * xv + w.p0 * yv)) / (2.0 * math.pi)
                asym = complex(incident + scattered)
                far_rows.append([kr, theta, psi.real, psi.imag, asym.real,
                                 asym.imag, abs(psi - asym), abs(psi - asym) / scale])
        far = (far_header, far_rows)

    if args.format == "csv":
        outputs = [(None, _csv_bytes(header, rows))]
        if far is not None:
            outputs.append((".farfield.csv", _csv_bytes(*far)))
        return outputs
    obj = {
        "command": "field",
        "parameters": {"k": _json_float(w.k), "theta0": _json_float(w.theta0),
                       "psi0_only": bool(args.psi0_only)},
        "rows": _json_rows(header, rows),
    }
    if far is not None:
        obj["far_field"] = _json_rows(*far)
    return [(None, _json_bytes(obj))]


def render_command(argv) -> bytes:
    """Parse and execute a non-verify command, returning its primary payload."""
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        raise ValidationError("render_command does not run the verify suite")
    outputs = _DISPATCH[args.command](args)
    return outputs[0][1]


def _run_verify(args) -> int:
    results = verify.run_all(inject_fault=args.inject_fault)
    all_passed = all(r.passed for r in results)
    if args.as_json:
        obj = {
            "command": "verify",
            "seed": verify.resolve_seed(),
            "injected_fault": bool(args.inject_fault),
            "all_passed": all_passed,
            "checks": [{"name": r.name, "tolerance": _json_float(r.tolerance),
                        "measured": _json_float(r.measured), "passed": r.passed}
                       for r in results],
        }
        payload = _json_bytes(obj).decode("utf-8")
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    else:
        lines = [r.line() for r in results]
        lines.append("verify: " + ("all checks passed" if all_passed
                                   else "NUMERICAL INVARIANT FAILURE"))
        payload = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)
    return 0 if all_passed else 2


_DISPATCH = {
    "amplitude": cmd_amplitude,
    "flow": cmd_flow,
    "family": cmd_family,
    "field": cmd_field,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            return _run_verify(args)
        outputs = _DISPATCH[args.command](args)
        for suffix, payload in outputs:
            if args.out is None:
                sys.stdout.write(payload.decode("utf-8"))
            else:
                path = args.out if suffix is None else args.out + suffix
                with open(path, "wb") as fh:
                    fh.write(payload)
        return 0
    except PointScatterError as exc:
        message = str(exc).replace("\n", " ")
        print(f"{ERROR_PREFIX} {type(exc).__name__}: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
