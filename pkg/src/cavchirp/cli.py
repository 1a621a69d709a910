"""Command-line client of the simulation service.

Subcommands `pulse`, `magnus`, `optimum`, `simulate` and `scan` read one
YAML configuration, call the corresponding service endpoint and write the
returned artifacts under --out. By default the service app runs in-process
(no network); --server points the same client at a remote instance started
with `serve`. Physics parameters never appear on the command line, so a
written manifest fully determines a rerun.

The toolkit uses no randomness anywhere; --seedless is reserved to
document that and is rejected if set.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx
import yaml

from . import __version__
from .csvio import write_json, write_text

SUBCOMMANDS = ("pulse", "magnus", "optimum", "simulate", "scan")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavchirp",
        description="Chirped-pulse control of a single molecule in a cavity",
    )
    parser.add_argument("--version", action="version", version=f"cavchirp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_command(name: str, help_text: str) -> None:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, default=None,
                       help="YAML run configuration (defaults apply if omitted)")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory (default: current directory)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes for scan grid points")
        p.add_argument("--server", type=str, default=None,
                       help="base URL of a running service (default: in-process)")
        p.add_argument("--seedless", action="store_true",
                       help="reserved; the toolkit is deterministic by construction")

    add_run_command("pulse", "tabulate the two drive fields on a time grid")
    add_run_command("magnus", "first-order pulse areas, coefficients and phase residual")
    add_run_command("optimum", "amplitudes/phases solving the first-order optimum")
    add_run_command("simulate", "propagate the driven model and write the trajectory")
    add_run_command("scan", "sweep pulse parameters and write the landscape")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_config_dict(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(f"cavchirp: cannot read config: {exc}")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SystemExit(f"cavchirp: config is not valid YAML: {exc}")
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise SystemExit("cavchirp: top level of the config must be a mapping")
    return raw


def _request(server: str | None, endpoint: str, payload: dict, params: dict | None = None):
    """POST to a remote service, or drive the app in-process over ASGI."""
    if server:
        with httpx.Client(base_url=server.rstrip("/"), timeout=None) as client:
            return client.post(endpoint, json=payload, params=params)

    import asyncio

    from .service import app  # imported lazily; pulls in the solver stack

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://cavchirp.local", timeout=None
        ) as client:
            return await client.post(endpoint, json=payload, params=params)

    return asyncio.run(go())


def _post(server: str | None, endpoint: str, payload: dict, params: dict | None = None) -> dict:
    response = _request(server, endpoint, payload, params)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise SystemExit(f"cavchirp: {endpoint} failed ({response.status_code}): {detail}")
    return response.json()


def _run_command(args: argparse.Namespace) -> int:
    if args.seedless:
        print(
            "cavchirp: --seedless rejected: no randomness is used anywhere, "
            "so there is no seed to suppress",
            file=sys.stderr,
        )
        return 2

    payload = _load_config_dict(args.config)
    if args.threads is not None:
        if "scan" in payload and payload["scan"] is not None:
            payload["scan"]["workers"] = args.threads
        elif args.command == "scan":
            raise SystemExit("cavchirp: --threads given but the config has no scan block")

    out: Path = args.out
    params = {"progress": "true"} if args.command == "scan" and args.server is None else None
    body = _post(args.server, f"/{args.command}", payload, params=params)

    if args.command == "pulse":
        write_text(out / "pulse.csv", body["csv"])
        write_json(out / "pulse_manifest.json", body["manifest"])
        print(f"wrote {out / 'pulse.csv'}")
    elif args.command == "magnus":
        write_json(out / "magnus.json", body)
        print(json.dumps({k: v for k, v in body.items() if k != "manifest"}, indent=2))
    elif args.command == "optimum":
        write_json(out / "optimum.json", body)
        print(json.dumps({k: v for k, v in body.items() if k != "manifest"}, indent=2))
    elif args.command == "simulate":
        write_text(out / "trajectory.csv", body["csv"])
        write_json(out / "summary.json", body["summary"])
        print(f"wrote {out / 'trajectory.csv'}")
        print(f"post-pulse max orientation: {body['summary']['post_pulse_max_orientation']:.6f}")
    elif args.command == "scan":
        write_text(out / "scan.csv", body["csv"])
        write_json(out / "scan_manifest.json", body["manifest"])
        n_failed = len(body["manifest"].get("failures", []))
        print(f"wrote {out / 'scan.csv'} ({body['manifest']['n_points']} points, {n_failed} failed)")
        if body["manifest"].get("degraded"):
            print("warning: scan degraded (more than 5% of points failed)", file=sys.stderr)
            return 1
    for note in body.get("manifest", {}).get("warnings", []) if isinstance(body, dict) else []:
        print(f"warning: {note}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    return _run_command(args)


if __name__ == "__main__":
    sys.exit(main())
