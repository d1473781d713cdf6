"""Report assembly and serialisation: exact rationals stay exact in JSON.

Certified quantities are plain values; anything sampled or capped carries an
explicit ``certified: false`` marker with the method that produced it.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from fractions import Fraction

from .complexes import SimplicialComplex
from .errors import ExactnessUnavailable, RegularityError, SizeCapError
from .f2 import DEFAULT_CAP, F2Complex
from .models import SweepResult, derive_rng
from .spectral import (SPECTRAL_TOL, OperatorBundle, cheeger_constant,
                       check_cheeger_buser, garland_check, ramanujan_certify)


def rational_str(x) -> str | None:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)


def jsonable(x):
    """Recursively convert report values into JSON-safe primitives."""
    if isinstance(x, Fraction):
        return rational_str(x)
    if isinstance(x, float):
        return rational_str(x) if math.isinf(x) or math.isnan(x) else x
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return jsonable(dataclasses.asdict(x))
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):  # numpy scalars
        return jsonable(x.item())
    return x


def to_json(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True,
                      allow_nan=False) + "\n"


# ----------------------------------------------------------------------


def _f2_section(X: SimplicialComplex, cap: int, require_exact: bool,
                sample_count: int, seed: int) -> dict:
    f2 = F2Complex(X, cap=cap)
    coh = f2.betti()
    section: dict = {
        "betti": coh.betti,
        "dim_z": coh.dim_z,
        "dim_b": coh.dim_b,
        "homologically_connected": f2.homologically_connected(),
        "expansion": [],
    }
    for i in range(max(0, X.dim)):
        entry: dict = {"dim": i}
        try:
            entry["h"] = f2.coboundary_expansion(i)
            mu, nu = f2.cosystolic_constants(i)
            entry["mu"] = mu
            entry["nu"] = nu
            entry["certified"] = True
        except ExactnessUnavailable as exc:
            if require_exact:
                raise
            rng = derive_rng(seed, "h-estimate", i)
            est = f2.sampled_expansion_estimate(i, sample_count, rng)
            entry.update({
                "certified": False,
                "reason": str(exc),
                "estimate": est["value"],
                "samples": est["samples"],
                "method": est["method"],
            })
        section["expansion"].append(entry)
    return section


def _spectral_section(X: SimplicialComplex, tol: float, epsilon: float,
                      cheeger_cap: int) -> dict:
    try:
        bundle = OperatorBundle(X, tol)
    except ValueError as exc:
        return {"available": False, "reason": str(exc), "tolerance": tol}
    gaps = bundle.spectral_gaps()
    section: dict = {
        "available": True,
        "tolerance": tol,
        "gaps": gaps,
        "harmonic_dims": [bundle.harmonic_dim(i) for i in range(X.dim + 1)],
        "spectral_expander": {
            "epsilon": epsilon,
            "verdict": all(g >= epsilon - tol for g in gaps),
        },
    }
    graph = X if X.dim <= 1 else X.skeleton(1)
    gsec: dict = {"on_skeleton": X.dim > 1}
    try:
        gsec["cheeger"] = cheeger_constant(graph, cap=cheeger_cap)
    except (SizeCapError, ValueError) as exc:
        gsec["cheeger"] = None
        gsec["cheeger_note"] = str(exc)
    try:
        cb = check_cheeger_buser(graph, tol)
        gsec["k"] = cb.k
        gsec["lambda1"] = cb.lambda1
        gsec["cheeger_buser"] = cb
        gsec["ramanujan"] = ramanujan_certify(graph, tol)
    except (RegularityError, SizeCapError) as exc:
        gsec["regular"] = False
        gsec["note"] = str(exc)
    section["graph"] = gsec
    return section


def analyze_complex(X: SimplicialComplex, *, with_f2: bool = True,
                    with_spectral: bool = True, with_garland: bool = True,
                    cap: int = DEFAULT_CAP, require_exact: bool = False,
                    epsilon: float = 0.0, sample_count: int = 64,
                    seed: int = 0, tol: float = SPECTRAL_TOL) -> dict:
    """Full certification report for one complex.

    Raises ExactnessUnavailable (for the caller to map to its exit code) only
    when ``require_exact`` is set; otherwise capped quantities degrade to
    clearly-marked sampled estimates.
    """
    report: dict = {
        "complex": {
            "n_vertices": X.n_vertices,
            "dim": X.dim,
            "cells_per_dim": [X.n_cells(i) for i in range(X.dim + 1)],
            "pure": X.is_pure(),
            "degree_profile": list(X.degree_profile()),
        },
    }
    if with_f2:
        report["f2"] = _f2_section(X, cap, require_exact, sample_count, seed)
    if with_spectral:
        report["spectral"] = _spectral_section(X, tol, epsilon, cap)
    if with_garland and X.dim >= 2:
        report["garland"] = garland_check(X, tol)
    return report


def expansion_csv_row(report: dict) -> tuple[list[str], list[str]]:
    """Flat CSV row form of an analysis report, for sweep-style consumption."""
    header = ["n_vertices", "dim", "pure", "homologically_connected"]
    cx = report["complex"]
    row = [str(cx["n_vertices"]), str(cx["dim"]), str(cx["pure"]).lower(), ""]
    f2 = report.get("f2")
    if f2 is not None:
        row[3] = str(f2["homologically_connected"]).lower()
        for entry in f2["expansion"]:
            i = entry["dim"]
            for key in ("h", "mu", "nu"):
                header.append(f"{key}_{i}")
                if entry.get("certified"):
                    row.append(rational_str(entry[key]))
                else:
                    est = rational_str(entry.get("estimate"))
                    row.append(f"estimate:{est}" if key == "h" else "")
            header.append(f"certified_{i}")
            row.append(str(bool(entry.get("certified"))).lower())
    spectral = report.get("spectral")
    if spectral is not None and spectral.get("available"):
        for i, g in enumerate(spectral["gaps"]):
            header.append(f"lambda_{i}")
            row.append(repr(g))
    return header, row


# ----------------------------------------------------------------------
# sweep serialisation (wall-clock timings stay out of both forms so that
# reruns with the same seed are byte-identical)

SWEEP_CSV_HEADER = ["grid_value", "successes", "trials", "p_hat",
                    "ci_low", "ci_high"]


def sweep_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_CSV_HEADER)
    for pt in result.points:
        w.writerow([repr(pt.value), pt.successes, pt.trials,
                    repr(pt.p_hat), repr(pt.ci_low), repr(pt.ci_high)])
    return buf.getvalue()


def sweep_to_json(result: SweepResult) -> str:
    spec = result.spec
    payload = {
        "model": spec.template.model,
        "n": spec.template.n,
        "d": spec.template.d,
        "seed": spec.template.seed,
        "trials": spec.trials,
        "predicate": spec.predicate if isinstance(spec.predicate, str)
                     else "custom",
        "points": [{
            "value": pt.value,
            "successes": pt.successes,
            "trials": pt.trials,
            "p_hat": pt.p_hat,
            "ci_low": pt.ci_low,
            "ci_high": pt.ci_high,
            "failures": pt.failures,
        } for pt in result.points],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
