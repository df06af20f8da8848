"""Command-line front end; a thin client over the HTTP service.

By default the service app is driven in-process (no server needed); pass
--server to point at a running instance instead.
"""

import argparse
import math
import os
import sys
import warnings

import httpx

USAGE_EXIT = 2
FAILURE_EXIT = 1

_EVAL_QUANTITIES = (
    "pmf", "cdf", "sf", "hrf", "cond-pmf", "cond-cdf", "cond-cdf-eq",
    "cond-exp", "pgf", "stress-strength",
)
_MODELS = ("bdew", "bdge", "bdgr", "nbg")
_PARAM_KEYS = ("alpha", "p", "b1", "b2", "b3")


def fmt(value):
    """Render a float with 10 significant digits (stable for golden files)."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    if value == 0 or not math.isfinite(value):
        return f"{value:.9f}" if math.isfinite(value) else str(value)
    decimals = max(0, 9 - math.floor(math.log10(abs(value))))
    return f"{value:.{decimals}f}"


def _client(args):
    if args.server:
        return httpx.Client(base_url=args.server)
    # drive the service app in-process; no server required
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _load_params_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, raw = line.partition("=")
                values[key.strip()] = float(raw)
    except OSError as exc:
        print(f"error: cannot read params file: {exc}", file=sys.stderr)
        raise SystemExit(FAILURE_EXIT)
    return values


def _collect_params(args):
    values = {}
    if getattr(args, "params_file", None):
        values.update(_load_params_file(args.params_file))
    for key in _PARAM_KEYS:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            values[key] = flag  # explicit flags win over the file
    missing = [k for k in _PARAM_KEYS if k not in values]
    if missing:
        print(f"error: missing parameters: {', '.join(missing)}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)
    return {k: values[k] for k in _PARAM_KEYS}


def _data_payload(source):
    if source.startswith("builtin:"):
        return {"builtin": source.split(":", 1)[1]}
    if not os.path.exists(source):
        print(f"error: dataset file not found: {source}", file=sys.stderr)
        raise SystemExit(FAILURE_EXIT)
    with open(source, encoding="utf-8") as fh:
        return {"csv_text": fh.read()}


def _post(client, path, payload):
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        detail = resp.json().get("detail", resp.text)
        print(f"error: {path}: {detail}", file=sys.stderr)
        raise SystemExit(FAILURE_EXIT)
    return resp.json()


def _print_record(record, format_):
    keys = ("family", "alpha", "p", "b1", "b2", "b3", "negL", "aic", "bic",
            "caic", "hqic", "converged", "iterations")
    if format_ == "doc":
        for key in keys:
            print(f"{key}={fmt(record[key])}")
    else:
        width = max(len(k) for k in keys)
        for key in keys:
            print(f"{key:<{width}}  {fmt(record[key])}")


def cmd_eval(args, client):
    payload = {
        "quantity": args.quantity,
        "params": _collect_params(args),
        "tol": args.tol,
    }
    for key in ("x1", "x2", "u", "v"):
        val = getattr(args, key)
        if val is not None:
            payload[key] = val
    data = _post(client, "/eval", payload)
    print(fmt(data["value"]))


def cmd_fit(args, client):
    payload = {
        "data": _data_payload(args.data),
        "model": args.model,
        "options": {"starts": args.starts, "seed": args.seed},
    }
    record = _post(client, "/fit", payload)
    _print_record(record, args.format)


def cmd_sample(args, client):
    payload = {
        "params": _collect_params(args),
        "count": args.count,
        "seed": args.seed,
    }
    data = _post(client, "/sample", payload)
    for x1, x2 in data["pairs"]:
        print(f"{x1},{x2}")


def cmd_compare(args, client):
    payload = {
        "data": _data_payload(args.data),
        "models": args.models.split(","),
        "criterion": args.criterion,
        "options": {"starts": args.starts, "seed": args.seed},
    }
    data = _post(client, "/compare", payload)
    if args.format == "doc":
        for rank, record in enumerate(data["ranked"], start=1):
            print(f"rank={rank}")
            _print_record(record, "doc")
    else:
        print(f"ranked by {data['criterion']} (ascending):")
        for rank, record in enumerate(data["ranked"], start=1):
            print(
                f"  {rank}. {record['family']:<5} negL={fmt(record['negL'])} "
                f"{args.criterion}={fmt(record[args.criterion])}"
            )
    for failure in data["failures"]:
        print(f"failed: {failure}", file=sys.stderr)


def cmd_reproduce(args, client):
    payload = {"table": args.table, "options": {"seed": args.seed}}
    data = _post(client, "/reproduce", payload)
    print(f"{data['table']} ({data['dataset']} data)")
    for column in data["columns"]:
        print(f"model {column['family']}:")
        header = f"  {'statistic':<10} {'published':>14} {'fitted':>16} {'delta':>14}"
        if args.format == "human":
            print(header)
        for cell in column["cells"]:
            pub = "--" if cell["published"] is None else fmt(cell["published"])
            delta = "--" if cell["delta"] is None else fmt(cell["delta"])
            if args.format == "doc":
                print(f"{column['family']}.{cell['statistic']}={fmt(cell['fitted'])}")
            else:
                print(
                    f"  {cell['statistic']:<10} {pub:>14} "
                    f"{fmt(cell['fitted']):>16} {delta:>14}"
                )


_GLOBAL_DEFAULTS = {"server": None, "seed": 0, "tol": 1e-12, "format": "human"}


def build_parser():
    # global flags are accepted before or after the subcommand; SUPPRESS keeps
    # the subparser from clobbering a value parsed by the main parser
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", default=argparse.SUPPRESS,
                        help="URL of a running service; default runs in-process")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="pseudo-random stream seed")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="series tail tolerance")
    common.add_argument("--format", choices=("human", "doc"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="bdew",
        description="Bivariate discrete exponentiated Weibull toolkit",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=(
        lambda **kw: argparse.ArgumentParser(parents=[common], **kw)
    ))

    def add_param_flags(p):
        p.add_argument("--alpha", type=float)
        p.add_argument("--p", type=float)
        p.add_argument("--b1", type=float)
        p.add_argument("--b2", type=float)
        p.add_argument("--b3", type=float)
        p.add_argument("--params-file", help="key=value file; flags win on conflict")

    p_eval = sub.add_parser("eval", help="evaluate a distribution quantity")
    p_eval.add_argument("quantity", choices=_EVAL_QUANTITIES)
    add_param_flags(p_eval)
    p_eval.add_argument("--x1", type=int)
    p_eval.add_argument("--x2", type=int)
    p_eval.add_argument("--u", type=float)
    p_eval.add_argument("--v", type=float)
    p_eval.set_defaults(func=cmd_eval)

    p_fit = sub.add_parser("fit", help="maximum-likelihood fit")
    p_fit.add_argument("--data", required=True, help="builtin:<name> or CSV path")
    p_fit.add_argument("--model", choices=_MODELS, default="bdew")
    p_fit.add_argument("--starts", type=int, default=20)
    p_fit.set_defaults(func=cmd_fit)

    p_sample = sub.add_parser("sample", help="draw seeded pairs as CSV")
    add_param_flags(p_sample)
    p_sample.add_argument("--count", type=int, required=True)
    p_sample.set_defaults(func=cmd_sample)

    p_cmp = sub.add_parser("compare", help="fit several families and rank them")
    p_cmp.add_argument("--data", required=True)
    p_cmp.add_argument("--models", default="bdew,bdge,bdgr")
    p_cmp.add_argument("--criterion", choices=("aic", "bic", "caic", "hqic"), default="aic")
    p_cmp.add_argument("--starts", type=int, default=20)
    p_cmp.set_defaults(func=cmd_compare)

    p_rep = sub.add_parser("reproduce", help="refit a published table beside its values")
    p_rep.add_argument("table", choices=("table2", "table4"))
    p_rep.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    if getattr(args, "count", None) is not None and args.count < 1:
        parser.error("--count must be >= 1")
    try:
        with _client(args) as client:
            args.func(args, client)
    except SystemExit:
        raise
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
