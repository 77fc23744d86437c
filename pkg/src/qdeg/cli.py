"""Command-line front end.

Commands:
    classify    full classification of a channel description
    convert     translate between kraus / choi / bloch representations
    complement  print the complementary channel's Kraus operators
    sweep       tabulate margins over a parameter grid (CSV)
    oracle      run the symmetric-extension feasibility oracle

Channel descriptions are JSON (see README). Complex numbers are
serialized as two-element [re, im] arrays and matrices as row-major
nested arrays. Output is deterministic: no timestamps, shortest
round-trip float formatting.

Exit codes: 0 success, 1 unreadable or unparseable input, 2 input parsed
but is not a valid channel, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import channels as ch
from . import symext as se
from .classify import (
    antidegradable_test,
    classify,
    degradable_test,
    entanglement_breaking_test,
)
from .errors import (
    InvalidDimension,
    InvalidParameter,
    NotAChannel,
    NotCompletelyPositive,
    NotHermitian,
    NotPSD,
    NotTracePreserving,
    NumericalFailure,
    QdegError,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_A_CHANNEL = 2
EXIT_NUMERICAL = 3

_NOT_A_CHANNEL_ERRORS = (
    NotAChannel,
    NotCompletelyPositive,
    NotTracePreserving,
    NotHermitian,
    NotPSD,
    InvalidParameter,
    InvalidDimension,
)


class SpecError(Exception):
    """Structurally invalid input document."""


# ---------------------------------------------------------------------------
# JSON (de)serialization
# ---------------------------------------------------------------------------


def _parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise SpecError(f"expected [re, im] pair, got {v!r}")


def _parse_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise SpecError("matrix must be a non-empty nested list")
    return np.array([[_parse_complex(v) for v in row] for row in rows])


def _complex_out(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix_out(m: np.ndarray) -> list:
    return [[_complex_out(v) for v in row] for row in np.asarray(m)]


def _real_vector(v, name: str, n: int = 3) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise SpecError(f"{name} must be a list of {n} numbers")
    try:
        return np.array([float(x) for x in v])
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{name} must contain numbers") from exc


_NAMED_BUILDERS = {
    "identity": (ch.identity, ()),
    "completely_depolarizing": (ch.completely_depolarizing, ()),
    "completely_dephasing": (ch.completely_dephasing, ()),
    "depolarizing": (ch.depolarizing, ("p",)),
    "dephasing": (ch.dephasing, ("alpha",)),
    "amplitude_damping": (ch.amplitude_damping, ("alpha",)),
    "rank2": (ch.rank2, ("alpha", "beta")),
    "unital": (ch.unital, ("lambda",)),
}


def parse_channel_spec(doc: dict):
    """Build a channel object from a parsed ChannelSpec document."""
    if not isinstance(doc, dict):
        raise SpecError("channel spec must be a JSON object")
    kind = doc.get("kind")
    if kind == "kraus":
        ops = doc.get("operators")
        if not isinstance(ops, list) or not ops:
            raise SpecError("kraus spec needs a non-empty 'operators' list")
        return ch.KrausSet(tuple(_parse_matrix(op) for op in ops))
    if kind == "choi":
        return ch.ChoiMatrix(_parse_matrix(doc.get("matrix")))
    if kind == "bloch":
        t = _real_vector(doc.get("t"), "t")
        if "T" in doc:
            T = np.array(
                [[float(x) for x in row] for row in doc["T"]]
                if isinstance(doc["T"], list) and len(doc["T"]) == 3
                else _fail("T must be a 3x3 nested list")
            )
            if T.shape != (3, 3):
                raise SpecError("T must be a 3x3 nested list")
            return ch.PauliTransfer(t=t, T=T)
        lam = _real_vector(doc.get("lambda"), "lambda")
        return ch.BlochParams(t=t, lam=lam)
    if kind == "named":
        name = doc.get("name")
        if name not in _NAMED_BUILDERS:
            raise SpecError(f"unknown named channel {name!r}")
        fn, params = _NAMED_BUILDERS[name]
        args = []
        for p in params:
            if p not in doc:
                raise SpecError(f"named channel {name!r} needs parameter {p!r}")
            args.append(doc[p] if p != "lambda" else _real_vector(doc[p], "lambda"))
        return fn(*args)
    raise SpecError(f"unknown channel kind {kind!r}")


def _fail(msg: str):
    raise SpecError(msg)


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read input: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_kraus(channel) -> ch.KrausSet:
    if isinstance(channel, ch.KrausSet):
        return channel
    return ch.kraus_from_choi(_to_choi(channel))


def _to_choi(channel) -> ch.ChoiMatrix:
    if isinstance(channel, ch.ChoiMatrix):
        return channel
    if isinstance(channel, ch.KrausSet):
        return ch.choi_from_kraus(channel)
    if isinstance(channel, ch.BlochParams):
        return ch.choi_from_bloch(channel)
    if isinstance(channel, ch.PauliTransfer):
        return ch.choi_from_transfer(channel.t, channel.T)
    raise SpecError(f"unsupported channel object {type(channel)!r}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    channel = parse_channel_spec(_load_json(args.input))
    report = classify(channel, tol=args.tol)
    d = report.to_dict()
    if args.format == "csv":
        header = (
            "anti_state,anti_margin,deg_state,deg_margin,eb_state,eb_margin,"
            "unital,self_complementary,choi_rank,cp\n"
        )
        row = ",".join(
            [
                d["antidegradable"]["state"],
                repr(d["antidegradable"]["margin"]),
                d["degradable"]["state"],
                repr(d["degradable"]["margin"]),
                d["entanglement_breaking"]["state"],
                repr(d["entanglement_breaking"]["margin"]),
                str(d["unital"]).lower(),
                "na" if d["self_complementary"] is None else str(d["self_complementary"]).lower(),
                str(d["choi_rank"]),
                str(d["cp"]).lower(),
            ]
        )
        _emit(header + row + "\n", args.out)
    else:
        _emit(json.dumps(d, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_convert(args) -> int:
    channel = parse_channel_spec(_load_json(args.input))
    if args.to == "choi":
        doc = {"kind": "choi", "matrix": _matrix_out(_to_choi(channel).matrix)}
    elif args.to == "kraus":
        kraus = _to_kraus(channel)
        doc = {"kind": "kraus", "operators": [_matrix_out(op) for op in kraus.operators]}
    elif args.to == "bloch":
        r = ch.bloch_from_choi(_to_choi(channel))
        if isinstance(r, ch.BlochParams):
            doc = {"kind": "bloch", "t": list(r.t), "lambda": list(r.lam)}
        else:
            doc = {"kind": "bloch", "t": list(r.t), "T": [list(row) for row in r.T]}
    else:
        raise SpecError(f"unknown target representation {args.to!r}")
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_complement(args) -> int:
    channel = parse_channel_spec(_load_json(args.input))
    comp = ch.complement(_to_kraus(channel))
    doc = {
        "kind": "kraus",
        "output_dim": comp.out_dim,
        "operators": [_matrix_out(op) for op in comp.operators],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    channel = parse_channel_spec(_load_json(args.input))
    c = _to_choi(channel)
    analytic = antidegradable_test(c, tol=args.tol)
    result = se.oracle_extendible(c, tol=args.oracle_tol, max_iter=args.max_iter)
    doc = {
        "oracle": {
            "status": result.status.value,
            "residual": result.residual,
            "iterations": result.iterations,
        },
        "analytic": {"state": analytic.state.value, "margin": analytic.margin},
    }
    if args.out and result.witness is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            json.dump({"witness": _matrix_out(result.witness)}, fh, indent=2)
            fh.write("\n")
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


# --- sweep ------------------------------------------------------------------

_SWEEP_COLUMNS = (
    "anti_margin",
    "deg_margin",
    "eb_margin",
    "anti_state",
    "deg_state",
    "eb_state",
)


def _axis(doc, name: str) -> np.ndarray:
    spec = doc.get(name)
    if not isinstance(spec, dict):
        raise SpecError(f"sweep axis {name!r} missing or not an object")
    try:
        lo, hi, steps = float(spec["min"]), float(spec["max"]), int(spec["steps"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"axis {name!r} needs numeric min/max/steps") from exc
    if steps < 2:
        raise SpecError(f"axis {name!r} needs steps >= 2")
    if not lo < hi:
        raise SpecError(f"axis {name!r} needs min < max")
    return np.linspace(lo, hi, steps)


def _sweep_rows(doc):
    family = doc.get("family")
    if family == "rank2":
        alphas = _axis(doc, "alpha")
        betas = _axis(doc, "beta")
        for a in alphas:
            for b in betas:
                yield {"alpha": a, "beta": b}, ch.rank2(a, b)
    elif family == "depolarizing":
        for p in _axis(doc, "p"):
            yield {"p": p}, ch.depolarizing(min(max(p, 0.0), 1.0))
    elif family == "unital":
        direction = _real_vector(doc.get("direction"), "direction")
        for s in _axis(doc, "scale"):
            lam = s * direction
            yield {
                "scale": s,
                "lambda1": lam[0],
                "lambda2": lam[1],
                "lambda3": lam[2],
            }, ch.BlochParams(t=np.zeros(3), lam=lam)
    else:
        raise SpecError(f"unknown sweep family {family!r}")


def cmd_sweep(args) -> int:
    doc = _load_json(args.input)
    outputs = doc.get("outputs", list(_SWEEP_COLUMNS))
    if not isinstance(outputs, list) or any(c not in _SWEEP_COLUMNS for c in outputs):
        raise SpecError(f"outputs must be a subset of {_SWEEP_COLUMNS}")
    rows = []
    param_names = None
    for params, channel in _sweep_rows(doc):
        if param_names is None:
            param_names = list(params)
        c = _to_choi(channel)
        kraus = _to_kraus(channel)
        anti = antidegradable_test(c, tol=args.tol)
        deg = degradable_test(kraus, tol=args.tol)
        eb = entanglement_breaking_test(c, tol=args.tol)
        values = {
            "anti_margin": anti.margin,
            "deg_margin": deg.margin,
            "eb_margin": eb.margin,
            "anti_state": anti.state.value,
            "deg_state": deg.state.value,
            "eb_state": eb.state.value,
        }
        rows.append((params, values))
    if args.format == "json":
        payload = [
            {**{k: v for k, v in params.items()}, **{k: values[k] for k in outputs}}
            for params, values in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [",".join(list(param_names) + list(outputs))]
    for params, values in rows:
        cells = [repr(float(params[k])) for k in param_names]
        for k in outputs:
            v = values[k]
            cells.append(repr(float(v)) if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdeg", description="Qubit channel degradability toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="path to a JSON channel spec, or - for stdin")
        p.add_argument("--tol", type=float, default=1e-9, help="margin tolerance")
        p.add_argument("--out", default=None, help="write output to this path")

    p = sub.add_parser("classify", help="classify a channel")
    common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("convert", help="convert between representations")
    common(p)
    p.add_argument("--to", choices=("kraus", "choi", "bloch"), required=True)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("complement", help="complementary channel")
    common(p)
    p.set_defaults(fn=cmd_complement)

    p = sub.add_parser("oracle", help="symmetric-extension feasibility oracle")
    common(p)
    p.add_argument("--oracle-tol", type=float, default=se.ORACLE_TOL)
    p.add_argument("--max-iter", type=int, default=se.ORACLE_MAX_ITER)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("sweep", help="parameter sweep to CSV")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(fn=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotAChannel as exc:
        print(
            f"error: not a channel: {exc} "
            f"(min Choi eigenvalue {exc.min_choi_eig}, TP residual {exc.tp_residual})",
            file=sys.stderr,
        )
        return EXIT_NOT_A_CHANNEL
    except _NOT_A_CHANNEL_ERRORS as exc:
        print(f"error: not a channel: {exc}", file=sys.stderr)
        return EXIT_NOT_A_CHANNEL
    except NumericalFailure as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QdegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_A_CHANNEL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
