"""Command-line front end.

Subcommands: ``validate``, ``estimate``, ``fidelities``, ``simulate``,
``domain``, ``catalog``. Device specifications are JSON documents::

    {
      "dim": 2,
      "kraus": [ [[[re, im], ...d entries], ...d rows], ...n operators ],
      "labels": ["+", "-"],      # optional
      "tolerance": 1e-10         # optional completeness tolerance
    }

with matrices row-major and every complex number a ``[re, im]`` pair. State
files use ``{"dim": d, "amplitudes": [[re, im], ...]}``. Numbers are emitted
via shortest round-trip decimal rendering, so written specs parse back
bit-exactly.

Exit codes: 0 success, 1 parse/IO failure, 2 domain or validation error.
The env var ``QMETER_DEFAULT_TOLERANCE`` overrides the default completeness
tolerance; an explicit ``--tolerance`` flag or a ``tolerance`` field in the
file wins over it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import catalog, estimator, haar
from .errors import (
    DeviceSpecError,
    DimensionMismatch,
    IncompleteDevice,
    OutOfDomain,
    QmeterError,
)
from .matkernel import canonicalize_phase
from .measurement import DEFAULT_COMPLETENESS_TOL, Measurement, as_state

MC_AGREEMENT_ABS = 1e-3
MC_AGREEMENT_SIGMAS = 5.0


# ---------------------------------------------------------------------------
# serialization helpers


def _pairs_from_vector(v) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex)]


def _pairs_from_matrix(m) -> list:
    return [_pairs_from_vector(row) for row in np.asarray(m, dtype=complex)]


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DeviceSpecError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _complex_from_pair(x, where: str) -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise DeviceSpecError(f"{where}: expected an [re, im] pair, got {x!r}")
    return complex(_number(x[0], where), _number(x[1], where))


def _vector_from_pairs(raw, d: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != d:
        raise DeviceSpecError(f"{where}: expected {d} [re, im] pairs")
    return np.array([_complex_from_pair(x, where) for x in raw], dtype=np.complex128)


def _matrix_from_pairs(raw, d: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != d:
        raise DeviceSpecError(f"{where}: expected {d} rows")
    return np.array([_vector_from_pairs(row, d, f"{where}, row {i + 1}") for i, row in enumerate(raw)])


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DeviceSpecError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e


def default_tolerance() -> float:
    raw = os.environ.get("QMETER_DEFAULT_TOLERANCE")
    if raw is None:
        return DEFAULT_COMPLETENESS_TOL
    try:
        return float(raw)
    except ValueError as e:
        raise DeviceSpecError(f"QMETER_DEFAULT_TOLERANCE={raw!r} is not a number") from e


def load_device(path: str, tolerance: float | None = None) -> Measurement:
    """Parse and validate a device spec file.

    Tolerance precedence: explicit argument, then the file's ``tolerance``
    field, then ``QMETER_DEFAULT_TOLERANCE``, then the built-in default.
    """
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise DeviceSpecError(f"{path}: device spec must be a JSON object")
    if "dim" not in obj or "kraus" not in obj:
        raise DeviceSpecError(f"{path}: device spec needs 'dim' and 'kraus'")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise DeviceSpecError(f"{path}: 'dim' must be a positive integer")
    raw_kraus = obj["kraus"]
    if not isinstance(raw_kraus, list) or not raw_kraus:
        raise DeviceSpecError(f"{path}: 'kraus' must be a non-empty list of matrices")
    ops = [
        _matrix_from_pairs(k, dim, f"{path}: kraus operator {s + 1}")
        for s, k in enumerate(raw_kraus)
    ]
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(ops):
            raise DeviceSpecError(f"{path}: 'labels' must list one name per operator")
    if tolerance is None:
        tolerance = obj.get("tolerance")
        if tolerance is not None:
            tolerance = _number(tolerance, f"{path}: tolerance")
        else:
            tolerance = default_tolerance()
    return Measurement(ops, labels=labels, tolerance=tolerance)


def load_state(path: str, dim: int) -> np.ndarray:
    obj = _load_json(path)
    if not isinstance(obj, dict) or "amplitudes" not in obj:
        raise DeviceSpecError(f"{path}: state file needs an 'amplitudes' array")
    declared = obj.get("dim", dim)
    if declared != dim or len(obj["amplitudes"]) != dim:
        raise DimensionMismatch(
            f"{path}: state dimension {declared} does not match device dimension {dim}"
        )
    return _vector_from_pairs(obj["amplitudes"], dim, f"{path}: amplitudes")


def device_record(m: Measurement) -> dict:
    record = {"dim": m.dim, "kraus": [_pairs_from_matrix(k) for k in m.kraus]}
    if m.labels is not None:
        record["labels"] = list(m.labels)
    return record


def write_device(m: Measurement, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(device_record(m), fh, indent=1)
        fh.write("\n")


def _emit(record: dict, human_lines, as_json: bool) -> None:
    if as_json:
        print(json.dumps(record))
    else:
        for line in human_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    try:
        m = load_device(args.device, args.tolerance)
    except IncompleteDevice as e:
        record = {"command": "validate", "ok": False, "defect": e.defect}
        _emit(record, [f"INCOMPLETE: completeness defect {e.defect:.17g}"], args.json)
        return 2
    record = {
        "command": "validate",
        "ok": True,
        "dim": m.dim,
        "n_outcomes": m.n_outcomes,
        "defect": m.completeness_defect,
        "tolerance": m.tolerance,
    }
    lines = [
        f"OK: dim={m.dim} outcomes={m.n_outcomes} "
        f"defect={m.completeness_defect:.17g} tolerance={m.tolerance:g}"
    ]
    _emit(record, lines, args.json)
    return 0


def _outcome_record(m: Measurement, s: int) -> dict:
    pair = estimator.estimate_pair(m, s)
    rec = {
        "outcome": s,
        "a_max": pair.a_max,
        "degenerate": pair.degenerate,
        "chi_pre": _pairs_from_vector(pair.chi_pre),
        "chi_post": _pairs_from_vector(pair.chi_post),
    }
    if m.labels is not None:
        rec["label"] = m.labels[s - 1]
    return rec


def cmd_estimate(args) -> int:
    m = load_device(args.device)
    rec = _outcome_record(m, args.outcome)
    rec["command"] = "estimate"
    lines = [
        f"outcome {args.outcome}" + (f" ({rec['label']})" if "label" in rec else ""),
        f"a_max      = {rec['a_max']:.17g}",
        f"degenerate = {rec['degenerate']}",
        f"chi_pre    = {json.dumps(rec['chi_pre'])}",
        f"chi_post   = {json.dumps(rec['chi_post'])}",
    ]
    _emit(rec, lines, args.json)
    return 0


def _mc_block(m: Measurement, samples: int, seed: int, report) -> dict:
    post_guesses = [estimator.best_post_estimate(m, s) for s in range(1, m.n_outcomes + 1)]
    pre_guesses = [estimator.best_pre_estimate(m, s) for s in range(1, m.n_outcomes + 1)]
    results = {
        "g_post": (haar.mc_g_post(m, post_guesses, samples, seed), report.g_post),
        "g_pre": (haar.mc_g_pre(m, pre_guesses, samples, seed), report.g_pre),
        "f": (haar.mc_operation_fidelity(m, samples, seed), report.f_op),
    }
    block = {"samples": samples, "seed": seed}
    all_ok = True
    for name, (mc, analytic) in results.items():
        window = max(MC_AGREEMENT_SIGMAS * mc.std_error, MC_AGREEMENT_ABS)
        ok = abs(mc.mean - analytic) <= window
        all_ok &= ok
        block[name] = {
            "mean": mc.mean,
            "std_error": mc.std_error,
            "analytic": analytic,
            "agrees": ok,
        }
    block["agrees"] = all_ok
    return block


def cmd_fidelities(args) -> int:
    m = load_device(args.device)
    report = estimator.check_bound(m)
    rec = {
        "command": "fidelities",
        "dim": m.dim,
        "n_outcomes": m.n_outcomes,
        "g_post": report.g_post,
        "g_pre": report.g_pre,
        "f": report.f_op,
        "per_outcome_a_max": [float(x) for x in report.per_outcome_a_max],
        "bound_lhs": report.bound_lhs,
        "bound_rhs": report.bound_rhs,
        "bound_satisfied": report.bound_satisfied,
        "outcomes": [_outcome_record(m, s) for s in range(1, m.n_outcomes + 1)],
    }
    lines = [
        f"G_post = {report.g_post:.17g}",
        f"G_pre  = {report.g_pre:.17g}",
        f"F      = {report.f_op:.17g}",
        f"bound: lhs={report.bound_lhs:.17g} rhs={report.bound_rhs:.17g} "
        f"satisfied={report.bound_satisfied}",
        "a_max per outcome: " + " ".join(f"{x:.17g}" for x in report.per_outcome_a_max),
    ]
    if args.montecarlo is not None:
        block = _mc_block(m, args.montecarlo, args.seed, report)
        rec["montecarlo"] = block
        for name in ("g_post", "g_pre", "f"):
            b = block[name]
            lines.append(
                f"MC {name}: {b['mean']:.8f} +- {b['std_error']:.1e} "
                f"(analytic {b['analytic']:.8f}) {'agree' if b['agrees'] else 'DISAGREE'}"
            )
        lines.append(f"MC verdict: {'agree' if block['agrees'] else 'DISAGREE'}")
    _emit(rec, lines, args.json)
    return 0


def cmd_simulate(args) -> int:
    m = load_device(args.device)
    if args.state is not None:
        psi = as_state(load_state(args.state, m.dim), m.dim)
        source = {"source": "file", "path": args.state}
    else:
        psi = haar.haar_state(m.dim, haar.RngStream(args.seed, 0))
        source = {"source": "haar", "seed": args.seed}
    gen = haar.RngStream(args.seed, 1).generator()
    counts = np.zeros(m.n_outcomes, dtype=int)
    shots = []
    lines = []
    for shot in range(1, args.shots + 1):
        s, post = m.sample_outcome(psi, gen)
        counts[s - 1] += 1
        post = canonicalize_phase(post)
        pairs = _pairs_from_vector(post)
        shots.append({"shot": shot, "outcome": s, "post_state": pairs})
        lines.append(f"{shot},{s},{json.dumps(pairs)}")
    freqs = counts / args.shots
    rec = {
        "command": "simulate",
        "shots": shots,
        "counts": [int(c) for c in counts],
        "frequencies": [float(f) for f in freqs],
        "state": _pairs_from_vector(canonicalize_phase(psi)),
        **source,
    }
    for s in range(1, m.n_outcomes + 1):
        label = f" ({m.labels[s - 1]})" if m.labels is not None else ""
        lines.append(f"# outcome {s}{label}: {counts[s - 1]} shots, frequency {freqs[s - 1]:.6f}")
    _emit(rec, lines, args.json)
    return 0


def _parse_dims(raw: str) -> list:
    dims = []
    for token in raw.split(","):
        token = token.strip()
        if token == "inf":
            dims.append(math.inf)
            continue
        try:
            d = int(token)
        except ValueError:
            raise OutOfDomain(f"bad dimension token {token!r} (need an integer or 'inf')") from None
        dims.append(d)
    return dims


def cmd_domain(args) -> int:
    dims = _parse_dims(args.d)
    rows = ["d,g_post,max_f"]
    for d in dims:
        table = estimator.domain_boundary(d, args.steps)
        token = "inf" if isinstance(d, float) and math.isinf(d) else str(d)
        for g, f in table:
            rows.append(f"{token},{float(g)!r},{float(f)!r}")
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_catalog_device(args) -> Measurement:
    family = args.family
    if family == "projective":
        return catalog.projective(args.d)
    if family == "identity":
        return catalog.identity_device(args.d)
    if family == "unsharp":
        return catalog.unsharp_qubit(args.lam)
    if family == "random":
        return catalog.random_device(args.d, args.n, args.seed)
    if family == "tetrahedron":
        posts = None
        if args.post_seed is not None:
            posts = list(haar.haar_states(2, 4, args.post_seed))
        return catalog.tetrahedron_rank_one(posts)
    raise DeviceSpecError(f"unknown family {family!r}")


def cmd_catalog(args) -> int:
    m = _build_catalog_device(args)
    if args.kick_seed is not None:
        kicks = [
            haar.haar_isometry(m.dim, m.dim, haar.RngStream(args.kick_seed, s))
            for s in range(m.n_outcomes)
        ]
        m = catalog.with_kicks(m, kicks)
    write_device(m, args.out)
    print(f"wrote {args.family} device (dim={m.dim}, outcomes={m.n_outcomes}) to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmeter", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a device spec against the completeness relation")
    v.add_argument("device")
    v.add_argument("--tolerance", type=float, default=None)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("estimate", help="optimal pre/post state estimates for one outcome")
    e.add_argument("device")
    e.add_argument("--outcome", type=int, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_estimate)

    f = sub.add_parser("fidelities", help="mean fidelities, tradeoff bound, optional MC check")
    f.add_argument("device")
    f.add_argument("--montecarlo", type=int, nargs="?", const=haar.DEFAULT_SAMPLES, default=None)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_fidelities)

    s = sub.add_parser("simulate", help="sample outcomes and collapsed states shot by shot")
    s.add_argument("device")
    group = s.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", default=None, help="state spec file")
    group.add_argument("--haar", action="store_true", help="draw the input state at random")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--shots", type=int, default=1)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("domain", help="CSV table of the maximal-F boundary curves")
    d.add_argument("--d", default="2,4,8,16,inf", help="comma-separated dimensions, 'inf' allowed")
    d.add_argument("--steps", type=int, default=101)
    d.add_argument("--out", default=None)
    d.set_defaults(func=cmd_domain)

    c = sub.add_parser("catalog", help="write a named device family to a spec file")
    c.add_argument("family", choices=["projective", "identity", "unsharp", "random", "tetrahedron"])
    c.add_argument("--d", type=int, default=2)
    c.add_argument("--lambda", dest="lam", type=float, default=0.5)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--post-seed", type=int, default=None)
    c.add_argument("--kick-seed", type=int, default=None)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (DeviceSpecError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (QmeterError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
