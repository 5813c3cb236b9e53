"""Command-line entry point.

Subcommands: ``evaluate`` runs a config and writes CSV or JSON report files,
``validate`` checks a config without running it, ``constellations`` lists the
18 supported rule shapes, and ``serve`` starts the HTTP service.  Exit codes:
0 success (warnings go to stderr but do not fail the run), 2 invalid input,
3 compute failure.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import config, reporting
from .designs._parallel import default_workers
from .errors import GonogoError, ParseError, ValidationError
from .rules import enumerate_constellations

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_COMPUTE = 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gonogo",
        description="Go/No-Go decision cutoffs and operating characteristics")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="run a design config and write the "
                                         "report")
    ev.add_argument("--config", required=True, help="path to a JSON config")
    ev.add_argument("--out", help="output directory (default: JSON to stdout)")
    ev.add_argument("--format", choices=("json", "csv"), default="json")
    ev.add_argument("--seed", type=int, help="override compute.seed")
    ev.add_argument("--sims", type=int, help="override compute.n_sims")
    ev.add_argument("--workers", type=int, help="override compute.workers "
                    "(default from GONOGO_WORKERS)")

    va = sub.add_parser("validate", help="parse and validate a config")
    va.add_argument("--config", required=True)

    sub.add_parser("constellations", help="list the 18 rule constellations")

    se = sub.add_parser("serve", help="run the HTTP service")
    se.add_argument("--host", default="127.0.0.1")
    se.add_argument("--port", type=int, default=8000)
    se.add_argument("--budget-seconds", type=float, default=None)
    return p


def _load_document(path: str, args) -> bytes:
    raw = Path(path).read_bytes()
    overrides = {k: getattr(args, v) for k, v in
                 (("seed", "seed"), ("n_sims", "sims"),
                  ("workers", "workers"))
                 if getattr(args, v, None) is not None}
    if not overrides and os.environ.get("GONOGO_WORKERS") is None:
        return raw
    doc = json.loads(raw)
    compute = doc.setdefault("compute", {})
    if "workers" not in overrides and "workers" not in compute:
        overrides.setdefault("workers", default_workers())
    compute.update(overrides)
    return json.dumps(doc).encode()


def _cmd_evaluate(args) -> int:
    try:
        document = _load_document(args.config, args)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_INVALID
    try:
        cfg = config.parse_config(document)
    except (ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    try:
        report = config.dispatch(cfg)
    except GonogoError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.out is None and args.format == "json":
        sys.stdout.buffer.write(reporting.serialize_json(report))
        return EXIT_OK
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        (out_dir / "report.json").write_bytes(
            reporting.serialize_json(report))
        print(f"wrote {out_dir / 'report.json'}", file=sys.stderr)
    else:
        for name, data in reporting.csv_tables(report).items():
            (out_dir / name).write_bytes(data)
            print(f"wrote {out_dir / name}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        config.parse_config(Path(args.config).read_bytes())
    except OSError as e:
        print(f"error: cannot read config: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    print("OK")
    return EXIT_OK


def _cmd_constellations(_args) -> int:
    for c in enumerate_constellations():
        print(f"{c.direction.value}\tgo={c.go_shape}\tnogo={c.nogo_shape}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(budget_seconds=args.budget_seconds)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"evaluate": _cmd_evaluate, "validate": _cmd_validate,
               "constellations": _cmd_constellations,
               "serve": _cmd_serve}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
