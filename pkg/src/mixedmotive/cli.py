"""Command-line front end.

Subcommands: run (episodes to line-delimited traces), gap (policy vs reference
oracle), sweep (101-constant return table), audit (static/temporal), oracle
(solve and export a profile), registry (dump per-env config documents),
compare (tolerance comparison of two trace files), bridge (stdio protocol for
foreign-language adapters), bench (kernel backend benchmark).

Every numeric that reaches a file is finite or rendered as an explicit
non-finite marker; rerunning a manifest reproduces output bytes exactly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import backend_name
from .audit import (f_fin, static_audit, summarize_static, summarize_temporal,
                    temporal_audit)
from .envs.engine import TRACE_SCHEMA_VERSION, make
from .envs.registry import env_ids, export_configs, get_config
from .oracles import (OracleName, constant_sweep, export_profile, oracle_return,
                      reference_oracle, solve_oracle)
from .payoffs import RewardMode, gap_percent
from .policies import build_policy, parse_policy
from .rollout import mean_episode_return, run_episode

DRIFT_RTOL = 1.7e-7  # documented cross-machine reproduction band


def _json_line(obj) -> str:
    return json.dumps(_sanitize(obj), sort_keys=True, separators=(",", ":"))


def _sanitize(obj):
    """Render non-finite floats as explicit markers instead of bare NaN."""
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isnan(obj):
            return "__nan__"
        if math.isinf(obj):
            return "__inf__" if obj > 0 else "__-inf__"
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _fail(message: str, code: int = 1) -> int:
    sys.stderr.write(_json_line({"error": message}) + "\n")
    return code


def _mode(text: str) -> RewardMode:
    return RewardMode(text)


def _resolve_policies(specs, env):
    if len(specs) == 1 and env.n > 1:
        specs = specs * env.n
    if len(specs) != env.n:
        raise ValueError(f"expected 1 or {env.n} policies, got {len(specs)}")
    return [build_policy(s, env.config) for s in specs]


# -- run -----------------------------------------------------------------

def cmd_run(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    specs = [parse_policy(p) for p in args.policy]
    n_agents = get_config(args.env).n_agents
    if len(specs) == 1 and n_agents > 1:
        specs = specs * n_agents
    manifest = {
        "schema_version": TRACE_SCHEMA_VERSION,
        "engine_version": __version__,
        "env_id": args.env,
        "mode": args.mode,
        "policies": [s.label() for s in specs],
        "seeds": args.seed,
        "hide_dij": bool(args.hide_dij),
        "out": str(out_dir),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n")

    obs_config = None
    if args.hide_dij:
        from .envs.config import ObservationConfig
        obs_config = ObservationConfig(interdependence_visible=False)
    for seed in args.seed:
        env = make(args.env, _mode(args.mode), obs_config=obs_config, seed=seed)
        policies = _resolve_policies(specs, env)
        result = run_episode(env, policies, episode_seed=seed)
        path = out_dir / f"{args.env}_seed{seed}.jsonl"
        with path.open("w") as fh:
            reward_series = []
            for record in result.records:
                fh.write(_json_line(record.to_dict()) + "\n")
                reward_series.extend(record.rewards)
            summary = {
                "summary": True,
                "schema_version": TRACE_SCHEMA_VERSION,
                "env_id": args.env,
                "mode": args.mode,
                "seed": seed,
                "steps": result.steps,
                "returns": result.returns.tolist(),
                "f_fin": f_fin(reward_series),
            }
            fh.write(_json_line(summary) + "\n")
        print(f"wrote {path}")
    return 0


# -- gap -----------------------------------------------------------------

def cmd_gap(args) -> int:
    mode = _mode(args.mode)
    seeds = args.seed
    spec = parse_policy(args.policy)
    config = get_config(args.env)

    def env_factory(seed):
        return make(args.env, mode, seed=seed)

    def policies_factory(env):
        return _resolve_policies([spec], env)

    r_algo = mean_episode_return(env_factory, policies_factory, seeds)
    oracle = reference_oracle(args.env)
    r_oracle = oracle_return(args.env, oracle, mode, seeds)
    gap = gap_percent(r_algo, r_oracle)
    row = {
        "env": args.env, "policy": spec.label(), "mode": args.mode,
        "oracle": oracle.value, "R_A": r_algo, "R_O": r_oracle,
        "gap_percent": gap,
    }
    line = ",".join(["env", "policy", "mode", "R_A", "R_O", "gap_percent"])
    csv = f"{row['env']},{row['policy']},{row['mode']},{r_algo!r},{r_oracle!r},{gap!r}"
    if args.out:
        Path(args.out).write_text(line + "\n" + csv + "\n")
    print(line)
    print(csv)
    return 0


# -- sweep ---------------------------------------------------------------

def cmd_sweep(args) -> int:
    table = constant_sweep(args.env, _mode(args.mode), args.seed)
    if args.out:
        Path(args.out).write_text(json.dumps(_sanitize(table), sort_keys=True,
                                             indent=2) + "\n")
    print(f"env={args.env} rows={len(table['rows'])} "
          f"argmax=constant:{table['argmax_pct']}")
    return 0


# -- audit ---------------------------------------------------------------

def cmd_audit(args) -> int:
    envs = args.env if args.env else env_ids()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for env_id in envs:
        for seed in args.seed:
            if args.kind == "static":
                report = static_audit(env_id, _mode(args.mode), seed)
            else:
                report = temporal_audit(env_id, seed, _mode(args.mode))
            reports.append(report)
            path = out_dir / f"{args.kind}_{env_id}_seed{seed}.json"
            path.write_text(json.dumps(_sanitize(report), sort_keys=True,
                                       indent=2) + "\n")
    if args.kind == "static":
        summary = summarize_static(reports)
    else:
        summary = summarize_temporal(reports)
    summary_path = out_dir / f"{args.kind}_summary.json"
    summary_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(json.dumps(summary, sort_keys=True))
    return 0


# -- oracle / registry -----------------------------------------------------

def cmd_oracle(args) -> int:
    config = get_config(args.env)
    name = OracleName(args.oracle) if args.oracle else reference_oracle(args.env)
    profile = solve_oracle(name, config)
    snippet = export_profile(args.env, name, profile)
    text = json.dumps(snippet, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return 0


def cmd_registry(args) -> int:
    written = export_configs(args.out)
    print(f"wrote {len(written)} environment documents to {args.out}")
    return 0


# -- compare ---------------------------------------------------------------

def _numeric_close(a: float, b: float, rtol: float) -> bool:
    if a == b:
        return True
    return abs(a - b) <= rtol * max(abs(a), abs(b))


def _compare_values(a, b, rtol: float, path: str):
    if isinstance(a, float) or isinstance(b, float):
        if isinstance(a, (int, float)) and isinstance(b, (int, float)):
            if not _numeric_close(float(a), float(b), rtol):
                return f"{path}: {a!r} vs {b!r}"
            return None
        return f"{path}: type mismatch {a!r} vs {b!r}"
    if isinstance(a, dict) and isinstance(b, dict):
        if sorted(a) != sorted(b):
            return f"{path}: key sets differ"
        for k in a:
            bad = _compare_values(a[k], b[k], rtol, f"{path}.{k}")
            if bad:
                return bad
        return None
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return f"{path}: length {len(a)} vs {len(b)}"
        for idx, (x, y) in enumerate(zip(a, b)):
            bad = _compare_values(x, y, rtol, f"{path}[{idx}]")
            if bad:
                return bad
        return None
    if a != b:
        return f"{path}: {a!r} vs {b!r}"
    return None


def compare_traces(path_a, path_b, rtol: float = DRIFT_RTOL):
    """None if every numeric in the two trace files agrees within rtol,
    else a description of the first mismatch."""
    lines_a = Path(path_a).read_text().splitlines()
    lines_b = Path(path_b).read_text().splitlines()
    if len(lines_a) != len(lines_b):
        return f"line count {len(lines_a)} vs {len(lines_b)}"
    for k, (la, lb) in enumerate(zip(lines_a, lines_b)):
        bad = _compare_values(json.loads(la), json.loads(lb), rtol, f"line{k}")
        if bad:
            return bad
    return None


def cmd_compare(args) -> int:
    mismatch = compare_traces(args.trace_a, args.trace_b, args.rtol)
    if mismatch:
        return _fail(f"traces differ beyond rtol={args.rtol}: {mismatch}")
    print(f"traces agree within rtol={args.rtol}")
    return 0


# -- bridge ------------------------------------------------------------------

def cmd_bridge(args) -> int:
    """Line-delimited JSON protocol over stdio for foreign-language adapters.

    Requests: {"op": "make", "env_id", "mode", "seed"} -> {"ok", "handle",
    "n_agents", "agents"}; {"op": "reset"|"step", "handle", ...};
    {"op": "close", "handle"}; {"op": "version"}. Floats cross the boundary
    through shortest-round-trip JSON, so no precision is lost.
    """
    handles = {}
    next_handle = 1
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            op = req["op"]
            if op == "version":
                resp = {"ok": True, "version": __version__,
                        "schema_version": TRACE_SCHEMA_VERSION}
            elif op == "make":
                env = make(req["env_id"], _mode(req.get("mode", "integrated")),
                           seed=req.get("seed"))
                handle = next_handle
                next_handle += 1
                handles[handle] = env
                resp = {"ok": True, "handle": handle, "n_agents": env.n,
                        "agents": [f"agent_{i}" for i in range(env.n)],
                        "horizon": env.horizon,
                        "observation_length": env.observation_length()}
            elif op == "reset":
                env = handles[req["handle"]]
                obs, info = env.reset(req.get("seed"))
                resp = {"ok": True,
                        "observations": {f"agent_{i}": o.tolist()
                                         for i, o in enumerate(obs)}}
            elif op == "step":
                env = handles[req["handle"]]
                actions = [req["actions"][f"agent_{i}"] for i in range(env.n)]
                obs, rewards, term, trunc, info = env.step(np.asarray(actions))
                resp = {
                    "ok": True,
                    "observations": {f"agent_{i}": o.tolist()
                                     for i, o in enumerate(obs)},
                    "rewards": {f"agent_{i}": float(rewards[i])
                                for i in range(env.n)},
                    "terminations": {f"agent_{i}": term for i in range(env.n)},
                    "truncations": {f"agent_{i}": trunc for i in range(env.n)},
                    "infos": {f"agent_{i}": {
                        "pi": float(info["pi"][i]),
                        "modifier": float(info["modifiers"][i]),
                    } for i in range(env.n)},
                    "record": info["record"].to_dict(),
                }
            elif op == "close":
                handles.pop(req["handle"], None)
                resp = {"ok": True}
            else:
                resp = {"ok": False, "error": f"unknown op {op!r}"}
        except Exception as exc:  # protocol surface: report, don't crash
            resp = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
        sys.stdout.write(_json_line(resp) + "\n")
        sys.stdout.flush()
    return 0


# -- bench ---------------------------------------------------------------

def cmd_bench(args) -> int:
    from .benchmark import run_benchmark

    run_benchmark(repeats=args.repeats)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedmotive",
        description="Deterministic mixed-motive multi-agent game engine")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({backend_name()} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    modes = ["private", "integrated", "cooperative"]

    p = sub.add_parser("run", help="run episodes and write step traces")
    p.add_argument("--env", required=True)
    p.add_argument("--mode", choices=modes, default="integrated")
    p.add_argument("--policy", action="append", required=True,
                   help="per-agent policy (repeatable): constant:NN, random[:seed], "
                        "titfortat, oracle:Name")
    p.add_argument("--seed", type=int, action="append", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--hide-dij", action="store_true",
                   help="hide the coupling row from observations")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gap", help="policy return vs reference oracle")
    p.add_argument("--env", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--mode", choices=modes, default="integrated")
    p.add_argument("--seed", type=int, action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("sweep", help="101-constant return table")
    p.add_argument("--env", required=True)
    p.add_argument("--mode", choices=modes, default="integrated")
    p.add_argument("--seed", type=int, action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", help="behavioral audits")
    p.add_argument("kind", choices=["static", "temporal"])
    p.add_argument("--env", action="append",
                   help="repeatable; defaults to all registered environments")
    p.add_argument("--mode", choices=modes, default="integrated")
    p.add_argument("--seed", type=int, action="append", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("oracle", help="solve an oracle profile")
    p.add_argument("--env", required=True)
    p.add_argument("--oracle", choices=[o.value for o in OracleName])
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("registry", help="export per-environment config documents")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_registry)

    p = sub.add_parser("compare", help="tolerance-compare two trace files")
    p.add_argument("trace_a")
    p.add_argument("trace_b")
    p.add_argument("--rtol", type=float, default=DRIFT_RTOL)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bridge", help="stdio protocol for language adapters")
    p.set_defaults(func=cmd_bridge)

    p = sub.add_parser("bench", help="compare compiled and pure kernel backends")
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:
        return _fail(f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
