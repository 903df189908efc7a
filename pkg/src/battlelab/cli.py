"""Command-line client for the workbench service.

Talks HTTP to a running server when --server is given; otherwise serves the
same app in-process, so every subcommand works standalone. Artifacts (CSV,
JSON-lines) are written client-side from the service's response payloads.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from .config import ExperimentConfig, parse_config_file

POLL_SECONDS = 0.25


def make_client(server: Optional[str]):
    """An httpx-compatible client: remote when `server` is set, else embedded."""
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _check(response) -> dict:
    if response.status_code >= 400:
        try:
            payload = response.json()
        except Exception:
            payload = {"error": response.text}
        detail = payload.get("error") or payload.get("detail") or response.text
        raise RuntimeError(f"HTTP {response.status_code}: {detail}")
    return response.json()


def _wait_for_job(client, job_id: str, quiet: bool) -> dict:
    last_line = ""
    while True:
        status = _check(client.get(f"/jobs/{job_id}"))
        if status["state"] in ("done", "failed"):
            break
        if not quiet and status.get("detail") and status["detail"] != last_line:
            last_line = status["detail"]
            print(f"progress: {100 * status['progress']:.1f}% ({last_line})",
                  file=sys.stderr)
        time.sleep(POLL_SECONDS)
    if status["state"] == "failed":
        raise RuntimeError(f"job {job_id} failed: {status.get('error')}")
    return _check(client.get(f"/jobs/{job_id}/result"))["result"]


def _write_text(path: Optional[str], text: str, default_stdout: bool = True) -> None:
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
    elif default_stdout:
        sys.stdout.write(text)


def _parse_genome(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(";", ",").split(",") if tok.strip() != ""]
    except ValueError:
        raise RuntimeError(f"malformed genome {text!r}; expected e.g. 0,1,4,2,3") from None


def _genomes_from_csv(path: str) -> list[list[int]]:
    lines = [l for l in Path(path).read_text().splitlines()
             if l.strip() and not l.startswith("#")]
    if not lines:
        raise RuntimeError(f"{path}: empty artifact")
    header = lines[0].split(",")
    gene_cols = [name for name in header if name.startswith("g") and name[1:].isdigit()]
    if not gene_cols:
        raise RuntimeError(f"{path}: no genome columns (g0..gN) in header")
    genomes = []
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        genomes.append([int(row[f"g{d}"]) for d in range(len(gene_cols))])
    return genomes


def _experiment_payload(args, defaults: ExperimentConfig) -> dict:
    """Resolve defaults < config file < CLI flags into a request payload."""
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {}
    for key in ("space", "p1", "p2", "algo", "resamples", "budget", "trials",
                "sweep_trials", "sample", "validate_games", "audit_games",
                "audit_every", "delta_mode", "seed", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "no_recoil", False):
        overrides["recoil"] = False
    from .config import config_from_sources

    base = {f: getattr(defaults, f) for f in
            ("space", "p1", "p2", "algo", "resamples", "budget", "trials",
             "sweep_trials", "sample", "validate_games", "audit_games",
             "audit_every", "delta_mode", "recoil", "seed", "jobs")}
    cfg = config_from_sources(file_values, {**{}, **overrides})
    payload = {f: getattr(cfg, f) for f in base}
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="battlelab",
        description="Tuning workbench for the two-player space-battle game.",
    )
    parser.add_argument("--server", help="base URL of a running service "
                        "(default: run the service in-process)")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--out", help="output path (subcommand-specific)")
    parser.add_argument("--seed", type=int, help="base seed (default 0)")
    parser.add_argument("--jobs", type=int, help="worker processes (default 1)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_agents(p):
        p.add_argument("--p1", help="player 1 agent spec (e.g. olmcts:350)")
        p.add_argument("--p2", help="player 2 agent spec (e.g. ras)")
        p.add_argument("--space", choices=["5d", "6d"], help="search space")

    p_play = sub.add_parser("play", help="play one game, optionally tracing it")
    add_agents(p_play)
    p_play.add_argument("--genome", required=True, help="value indices, e.g. 2,1,4,0,3")
    p_play.add_argument("--trace", action="store_true",
                        help="write a per-tick JSONL trace to --out")
    p_play.add_argument("--no-recoil", action="store_true", help="disable firing recoil")

    p_sweep = sub.add_parser("sweep", help="evaluate many parameter points")
    add_agents(p_sweep)
    p_sweep.add_argument("--sample", type=int, help="points to subsample (0 = full space)")
    p_sweep.add_argument("--trials", dest="sweep_trials", type=int,
                         help="games per point")
    p_sweep.add_argument("--no-recoil", action="store_true")

    p_marg = sub.add_parser("marginals", help="per-value win-rate profile of one dimension")
    p_marg.add_argument("--input", required=True, help="sweep CSV artifact")
    p_marg.add_argument("--dim", required=True, help="dimension name (e.g. missile_cost)")

    p_opt = sub.add_parser("optimize", help="run optimization trials and aggregate curves")
    add_agents(p_opt)
    p_opt.add_argument("--algo", choices=["rmhc", "mabrmhc"], help="optimizer")
    p_opt.add_argument("--r", dest="resamples", type=int, help="games per fitness call")
    p_opt.add_argument("--budget", type=int, help="game budget per trial")
    p_opt.add_argument("--trials", type=int, help="independent trials")
    p_opt.add_argument("--audit-games", dest="audit_games", type=int,
                       help="games per audited recommendation")
    p_opt.add_argument("--audit-every", dest="audit_every", type=int,
                       help="audit every k-th generation (0 = final only)")
    p_opt.add_argument("--delta-mode", dest="delta_mode",
                       choices=["signed", "magnitude"])
    p_opt.add_argument("--no-recoil", action="store_true")

    p_val = sub.add_parser("validate", help="re-play recommended genomes")
    add_agents(p_val)
    p_val.add_argument("--genomes", help="semicolon-separated genomes, e.g. 0,1,2,3,4;3,4,9,8,7")
    p_val.add_argument("--input", help="CSV artifact with g0..gN columns")
    p_val.add_argument("--n", dest="validate_games", type=int, help="games per genome")
    p_val.add_argument("--no-recoil", action="store_true")

    p_bench = sub.add_parser("bench", help="engine throughput benchmark")
    p_bench.add_argument("--ticks", type=int, default=200_000)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("battlelab.service:app", host=args.host, port=args.port)
        return 0

    defaults = ExperimentConfig()
    try:
        with make_client(args.server) as client:
            return _dispatch(args, client, defaults)
    except RuntimeError as exc:
        return _fail(str(exc))


def _dispatch(args, client, defaults: ExperimentConfig) -> int:
    quiet = args.quiet

    if args.command == "play":
        payload = _experiment_payload(args, defaults)
        body = {
            "space": payload["space"],
            "genome": _parse_genome(args.genome),
            "p1": payload["p1"],
            "p2": payload["p2"],
            "seed": payload["seed"],
            "recoil": payload["recoil"],
            "trace": args.trace,
        }
        result = _check(client.post("/play", json=body))
        print(f"value={result['value']} winner={result['winner']} "
              f"scores={result['scores'][0]},{result['scores'][1]}")
        if args.trace:
            lines = "".join(json.dumps(rec, sort_keys=True) + "\n"
                            for rec in result["trace"])
            _write_text(args.out, lines, default_stdout=False)
            if args.out and not quiet:
                print(f"trace written to {args.out}", file=sys.stderr)
        return 0

    if args.command == "sweep":
        submitted = _check(client.post("/jobs/sweep",
                                       json=_experiment_payload(args, defaults)))
        result = _wait_for_job(client, submitted["job_id"], quiet)
        _write_text(args.out, result["csv"])
        return 0

    if args.command == "marginals":
        body = {"dimension": args.dim, "sweep_csv": Path(args.input).read_text()}
        result = _check(client.post("/marginals", json=body))
        _write_text(args.out, result["csv"])
        return 0

    if args.command == "optimize":
        submitted = _check(client.post("/jobs/optimize",
                                       json=_experiment_payload(args, defaults)))
        result = _wait_for_job(client, submitted["job_id"], quiet)
        out_dir = Path(args.out or "battlelab_runs")
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "curves.csv").write_text(result["curves_csv"])
        (out_dir / "summary.csv").write_text(result["summary_csv"])
        (out_dir / "runs.jsonl").write_text(result["runs_jsonl"])
        print(f"generations={result['generations']} "
              f"final_audit_mean={result['final_audit_mean']} out={out_dir}")
        return 0

    if args.command == "validate":
        if not args.genomes and not args.input:
            return _fail("validate needs --genomes or --input")
        genomes: list[list[int]] = []
        if args.input:
            genomes += _genomes_from_csv(args.input)
        if args.genomes:
            genomes += [_parse_genome(part) for part in args.genomes.split(";") if part]
        payload = _experiment_payload(args, defaults)
        payload["genomes"] = genomes
        submitted = _check(client.post("/jobs/validate", json=payload))
        result = _wait_for_job(client, submitted["job_id"], quiet)
        _write_text(args.out, result["csv"], default_stdout=False)
        print(f"mean_winrate_pct={result['mean_winrate_pct']}")
        return 0

    if args.command == "bench":
        result = _check(client.post("/bench", json={"ticks": args.ticks,
                                                    "seed": args.seed or 0}))
        print(json.dumps(result, sort_keys=True))
        return 0

    return _fail(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
