"""Command line front end.

Subcommands: bound, fef, prob, convert, compare, detect, oracle, verify.
Every command supports --format {table,json,csv} and --out; sweep-producing
commands (compare, detect --sweep) can additionally render a figure next to
the delimited output via --plot.  Exit codes: 0 success, 1 verification
failure, 2 invalid input, 3 infeasible request.  Seeds resolve from --seed,
then the QCB_SEED environment variable, then 0.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import bounds as bounds_mod
from . import convertibility as conv_mod
from . import detection as det_mod
from . import oracle as oracle_mod
from . import serialize
from .errors import InfeasibleError, ValidationError

_CLASS_ORDER = ("D", "R", "UE", "GE", "C")


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("QCB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"QCB_SEED must be an integer, got {env!r}") from None
    return 0


def _parse_classes(spec: str | None) -> tuple[str, ...]:
    if not spec or spec == "all":
        return _CLASS_ORDER
    tags = tuple(t.strip() for t in spec.split(",") if t.strip())
    for t in tags:
        if t not in _CLASS_ORDER:
            raise ValidationError(f"unknown channel class {t!r}")
    return tags


def _parse_family(spec: str) -> tuple[str, float]:
    name, sep, rhs = spec.partition("=")
    name = name.strip()
    rhs = rhs.strip()
    if not sep or name not in ("x", "y") or not rhs:
        raise ValidationError("family must look like 'x=<value>' or 'y=<value>'")
    compact = rhs.replace("(", "").replace(")", "").replace(" ", "").lower()
    if compact in ("1/sqrt2", "1/sqrt.2"):
        return name, 1.0 / math.sqrt(2.0)
    try:
        return name, float(rhs)
    except ValueError:
        raise ValidationError(f"cannot parse family value {rhs!r}") from None


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _table_text(lines) -> str:
    return "\n".join(lines) + "\n"


def _cmd_bound(args) -> int:
    tau = serialize.load_tau(args.tau)
    tags = _parse_classes(args.klass)
    reports = {tag: bounds_mod.bound_for_class(tau, tag) for tag in tags}
    if args.format == "csv":
        text = _csv_text(
            ("class", "value", "exact"),
            [(t, _fmt(r.value), str(r.exact).lower()) for t, r in reports.items()],
        )
    elif args.format == "json":
        text = _json_text(
            {
                "tau": args.tau,
                "bounds": {
                    t: {"value": r.value, "exact": r.exact} for t, r in reports.items()
                },
            }
        )
    else:
        lines = [f"{'class':<6}{'value':<22}exact"]
        for t, r in reports.items():
            lines.append(f"{t:<6}{_fmt(r.value):<22}{'yes' if r.exact else 'no'}")
        text = _table_text(lines)
    _emit(args, text)
    return 0


def _cmd_fef(args) -> int:
    tau = serialize.load_tau(args.tau)
    value = bounds_mod.fef(tau)
    if args.format == "csv":
        text = _csv_text(("fef",), [(_fmt(value),)])
    elif args.format == "json":
        text = _json_text({"tau": args.tau, "fef": value})
    else:
        text = _table_text([f"fef = {_fmt(value)}"])
    _emit(args, text)
    return 0


def _cmd_prob(args) -> int:
    channel = serialize.channel_from_dict(serialize.load_json(args.channel))
    ppovm = serialize.ppovm_from_dict(serialize.load_json(args.ppovm))
    probs = ppovm.probabilities(channel)
    total = sum(probs.values())
    if args.format == "csv":
        text = _csv_text(
            ("label", "probability"), [(k, _fmt(v)) for k, v in probs.items()]
        )
    elif args.format == "json":
        text = _json_text({"probabilities": probs, "total": total})
    else:
        lines = [f"{'label':<16}probability"]
        lines.extend(f"{k:<16}{_fmt(v)}" for k, v in probs.items())
        lines.append(f"{'total':<16}{_fmt(total)}")
        text = _table_text(lines)
    _emit(args, text)
    return 0


def _load_instance(args) -> conv_mod.ConversionInstance:
    if args.instance:
        return serialize.instance_from_dict(serialize.load_json(args.instance))
    if args.x is None or args.y is None:
        raise ValidationError("convert needs either --instance or both --x and --y")
    return conv_mod.from_overlaps(args.x, args.y)


def _cmd_convert(args) -> int:
    instance = _load_instance(args)
    assessment = conv_mod.assess_instance(instance)
    tags = _parse_classes(args.klass)
    achiever_payload = None
    if args.achiever:
        if args.achiever not in _CLASS_ORDER:
            raise ValidationError(f"unknown channel class {args.achiever!r}")
        channel = conv_mod.build_achiever(instance, args.achiever)
        achiever_payload = serialize.channel_to_dict(channel)
    if args.format == "csv":
        text = _csv_text(
            ("class", "value", "verdict"),
            [
                (t, _fmt(assessment.classes[t].value), assessment.classes[t].verdict)
                for t in tags
            ],
        )
    elif args.format == "json":
        payload = {
            "x": assessment.x,
            "y": assessment.y,
            "classes": {
                t: {
                    "value": assessment.classes[t].value,
                    "verdict": assessment.classes[t].verdict,
                }
                for t in tags
            },
        }
        if achiever_payload is not None:
            payload["achiever"] = {"class": args.achiever, "channel": achiever_payload}
        text = _json_text(payload)
    else:
        lines = [
            f"x = {_fmt(assessment.x)}   y = {_fmt(assessment.y)}",
            f"{'class':<6}{'value':<22}verdict",
        ]
        for t in tags:
            entry = assessment.classes[t]
            lines.append(f"{t:<6}{_fmt(entry.value):<22}{entry.verdict}")
        if achiever_payload is not None:
            lines.append(f"achiever[{args.achiever}]: use --format json to export")
        text = _table_text(lines)
    _emit(args, text)
    return 0


def _cmd_compare(args) -> int:
    pair = tuple(t.strip() for t in args.pair.split(","))
    if len(pair) != 2:
        raise ValidationError("pair must be two class tags, e.g. 'UE,D'")
    family = _parse_family(args.family)
    report = conv_mod.compare_classes(pair, family, n_grid=args.grid)
    if args.plot:
        _plot_compare(report, args.plot)
    if args.format == "csv":
        rows = [
            (_fmt(p), _fmt(d), str(int(s)))
            for p, d, s in zip(report.params, report.diffs, report.signs)
        ]
        text = _csv_text(("parameter", "diff", "sign"), rows)
    elif args.format == "json":
        text = _json_text(
            {
                "pair": list(report.pair),
                "family": {report.fixed_name: report.fixed_value},
                "sweep": report.sweep_name,
                "crossings": list(report.crossings),
                "endpoint_zeros": list(report.endpoint_zeros),
                "parameter": [float(v) for v in report.params],
                "diff": [float(v) for v in report.diffs],
                "sign": [int(v) for v in report.signs],
            }
        )
    else:
        lines = [
            f"diff = value({report.pair[0]}) - value({report.pair[1]}) "
            f"at {report.fixed_name} = {_fmt(report.fixed_value)}, sweeping {report.sweep_name}",
            f"grid points: {len(report.params)}",
            "crossings: " + (", ".join(_fmt(c) for c in report.crossings) or "none"),
            "endpoint zeros: "
            + (", ".join(_fmt(c) for c in report.endpoint_zeros) or "none"),
        ]
        text = _table_text(lines)
    _emit(args, text)
    return 0


def _cmd_detect(args) -> int:
    schemes = ("entangled", "ancilla-free") if args.scheme == "both" else (args.scheme,)
    if args.sweep is not None:
        rows = det_mod.threshold_sweep(args.sweep)
        if args.plot:
            _plot_detect(rows, args.plot)
        if args.format == "json":
            text = _json_text(
                [
                    {
                        "w": r.w,
                        "p_entangled": r.p_entangled,
                        "p_ancilla_free": r.p_ancilla_free,
                        "threshold_entangled": r.threshold_entangled,
                        "threshold_ancilla_free": r.threshold_ancilla_free,
                        "verdict_entangled": r.verdict_entangled,
                        "verdict_ancilla_free": r.verdict_ancilla_free,
                    }
                    for r in rows
                ]
            )
        else:
            csv_rows = [
                (
                    _fmt(r.w),
                    _fmt(r.p_entangled),
                    _fmt(r.p_ancilla_free),
                    _fmt(r.threshold_entangled),
                    _fmt(r.threshold_ancilla_free),
                    r.verdict_entangled,
                    r.verdict_ancilla_free,
                )
                for r in rows
            ]
            text = _csv_text(
                (
                    "w",
                    "p_entangled",
                    "p_ancilla_free",
                    "threshold_entangled",
                    "threshold_ancilla_free",
                    "verdict_entangled",
                    "verdict_ancilla_free",
                ),
                csv_rows,
            )
        _emit(args, text)
        return 0
    if args.w is None:
        raise ValidationError("detect needs --w or --sweep")
    results = []
    for scheme in schemes:
        if args.shots:
            results.append(
                det_mod.detect_not_eb_sampled(
                    args.w, scheme, shots=args.shots, seed=_resolve_seed(args)
                )
            )
        else:
            results.append(det_mod.detect_not_eb(args.w, scheme))
    if args.format == "csv":
        header = ["scheme", "w", "probability", "threshold", "verdict"]
        rows = [
            [r.scheme, _fmt(r.w), _fmt(r.probability), _fmt(r.threshold), r.verdict]
            for r in results
        ]
        if args.shots:
            header += ["p_hat", "wilson_low", "wilson_high"]
            for row, r in zip(rows, results):
                row += [_fmt(r.p_hat), _fmt(r.interval[0]), _fmt(r.interval[1])]
        text = _csv_text(header, rows)
    elif args.format == "json":
        payload = []
        for r in results:
            entry = {
                "scheme": r.scheme,
                "w": r.w,
                "probability": r.probability,
                "threshold": r.threshold,
                "verdict": r.verdict,
            }
            if r.shots:
                entry.update(
                    {"shots": r.shots, "p_hat": r.p_hat, "interval": list(r.interval)}
                )
            payload.append(entry)
        text = _json_text(payload)
    else:
        lines = [f"{'scheme':<16}{'probability':<22}{'threshold':<22}verdict"]
        for r in results:
            lines.append(
                f"{r.scheme:<16}{_fmt(r.probability):<22}{_fmt(r.threshold):<22}{r.verdict}"
            )
            if r.shots:
                lines.append(
                    f"  shots={r.shots} p_hat={_fmt(r.p_hat)} "
                    f"wilson=[{_fmt(r.interval[0])}, {_fmt(r.interval[1])}]"
                )
        text = _table_text(lines)
    _emit(args, text)
    return 0


def _cmd_oracle(args) -> int:
    tau = serialize.load_tau(args.tau)
    tags = _parse_classes(args.klass)
    if len(tags) != 1:
        raise ValidationError("oracle works on one class at a time, pass --class")
    tag = tags[0]
    config = oracle_mod.OracleConfig(
        n_starts=args.starts, refine_iters=args.refine, seed=_resolve_seed(args)
    )
    result = oracle_mod.maximize(tau, tag, config)
    bound = bounds_mod.bound_for_class(tau, tag)
    gap = bound.value - result.best_value
    if args.format == "csv":
        text = _csv_text(
            ("class", "oracle_max", "bound", "gap", "exact", "evaluations"),
            [
                (
                    tag,
                    _fmt(result.best_value),
                    _fmt(bound.value),
                    _fmt(gap),
                    str(bound.exact).lower(),
                    str(result.evaluations),
                )
            ],
        )
    elif args.format == "json":
        text = _json_text(
            {
                "class": tag,
                "oracle_max": result.best_value,
                "bound": bound.value,
                "gap": gap,
                "exact": bound.exact,
                "evaluations": result.evaluations,
                "start_index": result.start_index,
                "witness": serialize.channel_to_dict(result.witness),
            }
        )
    else:
        lines = [
            f"class        {tag}",
            f"oracle max   {_fmt(result.best_value)}",
            f"bound        {_fmt(bound.value)} ({'exact' if bound.exact else 'estimate'})",
            f"gap          {_fmt(gap)}",
            f"evaluations  {result.evaluations}",
        ]
        text = _table_text(lines)
    _emit(args, text)
    return 0


def _cmd_verify(args) -> int:
    tags = _parse_classes(args.classes)
    seed = _resolve_seed(args)
    reports = [
        oracle_mod.dominance_sweep(
            tag,
            n_tau=args.n_tau,
            n_channels=args.n_channels,
            seed=seed + i,
            tol=args.tol,
        )
        for i, tag in enumerate(tags)
    ]
    failed = any(r.n_violations > 0 for r in reports)
    if args.format == "csv":
        text = _csv_text(
            ("class", "pairs", "max_excess", "violations"),
            [
                (r.class_tag, str(r.n_pairs), _fmt(r.max_excess), str(r.n_violations))
                for r in reports
            ],
        )
    elif args.format == "json":
        text = _json_text(
            [
                {
                    "class": r.class_tag,
                    "pairs": r.n_pairs,
                    "max_excess": r.max_excess,
                    "violations": r.n_violations,
                }
                for r in reports
            ]
        )
    else:
        lines = [f"{'class':<6}{'pairs':<10}{'max_excess':<26}violations"]
        for r in reports:
            lines.append(
                f"{r.class_tag:<6}{r.n_pairs:<10}{_fmt(r.max_excess):<26}{r.n_violations}"
            )
        lines.append("FAIL: bound violated" if failed else "OK: no violations")
        text = _table_text(lines)
    _emit(args, text)
    return 1 if failed else 0


def _plot_compare(report, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(report.params, report.diffs, lw=1.5)
    ax.axhline(0.0, color="0.6", lw=0.8)
    for c in report.crossings:
        ax.axvline(c, color="tab:red", ls="--", lw=0.8)
    ax.set_xlabel(report.sweep_name)
    ax.set_ylabel(f"value({report.pair[0]}) - value({report.pair[1]})")
    ax.set_title(f"{report.fixed_name} = {report.fixed_value:.6g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_detect(rows, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ws = [r.w for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(ws, [r.p_entangled for r in rows], lw=1.5, label="entangled scheme")
    ax.plot(ws, [r.p_ancilla_free for r in rows], lw=1.5, label="ancilla-free scheme")
    ax.axhline(rows[0].threshold_entangled, color="tab:blue", ls="--", lw=0.8)
    ax.axhline(rows[0].threshold_ancilla_free, color="tab:orange", ls="--", lw=0.8)
    ax.axvline(1.0 / 3.0, color="0.6", ls=":", lw=0.8)
    ax.set_xlabel("w")
    ax.set_ylabel("outcome probability")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcb",
        description="Outcome-probability bounds for qubit-channel measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=False):
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out", help="write the result to this file instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, help="seed (default: QCB_SEED or 0)")

    p = sub.add_parser("bound", help="class bounds for a two-qubit state")
    p.add_argument("--tau", required=True, help="state JSON file or preset name")
    p.add_argument("--class", dest="klass", help="comma-separated class tags (default all)")
    add_common(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("fef", help="best maximally entangled overlap via output unitaries")
    p.add_argument("--tau", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_fef)

    p = sub.add_parser("prob", help="outcome probabilities of a tester on a channel")
    p.add_argument("--channel", required=True, help="channel JSON file")
    p.add_argument("--ppovm", required=True, help="process POVM JSON file")
    add_common(p)
    p.set_defaults(func=_cmd_prob)

    p = sub.add_parser("convert", help="pure-state pair convertibility by class")
    p.add_argument("--x", type=float, help="source overlap |<psi|phi>|")
    p.add_argument("--y", type=float, help="target overlap |<e|f>|")
    p.add_argument("--instance", help="instance JSON file")
    p.add_argument("--class", dest="klass", help="comma-separated class tags (default all)")
    p.add_argument("--achiever", help="also construct the attaining channel of this class")
    add_common(p)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("compare", help="difference curve between two class values")
    p.add_argument("--pair", required=True, help="two class tags, e.g. 'UE,D'")
    p.add_argument("--family", required=True, help="fixed overlap, e.g. 'x=1/sqrt2'")
    p.add_argument("--grid", type=int, default=1000, help="number of grid intervals")
    p.add_argument("--plot", help="also render the curve to this image file")
    add_common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("detect", help="entanglement-breaking detection for noisy identity")
    p.add_argument("--w", type=float, help="identity weight of the channel")
    p.add_argument("--sweep", type=int, help="sweep both schemes on this many grid points")
    p.add_argument(
        "--scheme",
        choices=("entangled", "ancilla-free", "both"),
        default="both",
    )
    p.add_argument("--shots", type=int, help="finite-sample mode with this many draws")
    p.add_argument("--plot", help="render sweep curves to this image file")
    add_common(p, seed=True)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("oracle", help="brute-force maximization over one class")
    p.add_argument("--tau", required=True)
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--starts", type=int, default=256)
    p.add_argument("--refine", type=int, default=400)
    add_common(p, seed=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("verify", help="dominance sweeps: oracle samples vs bounds")
    p.add_argument("--classes", help="comma-separated class tags (default all)")
    p.add_argument("--n-tau", type=int, default=100)
    p.add_argument("--n-channels", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    add_common(p, seed=True)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
