"""Command-line front end.

Verbs: ``run-sweep`` and ``run-topology`` execute experiment spec files,
``validate-config`` checks a config without running anything, and
``gamma`` prints the information-group number of a topology.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .comms import information_group_number, information_groups, parse_topology
from .experiments import (
    load_sweep_spec,
    load_topology_spec,
    run_sweep,
    run_topology_study,
)
from .world import ConfigError, ScenarioConfig


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--trials", type=int, default=None, help="override trial count")
    p.add_argument("--seed", type=int, default=None, help="override base seed")
    p.add_argument("--out", default=None, help="override output CSV path")
    p.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    p.add_argument(
        "--policies", default=None, help="comma-separated policy names to run"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hubfleet",
        description="Dynamic multi-robot task allocation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("run-sweep", help="run a parameter sweep spec file")
    p_sweep.add_argument("spec")
    _add_common(p_sweep)

    p_topo = sub.add_parser("run-topology", help="run the communication-graph study")
    p_topo.add_argument("spec")
    _add_common(p_topo)

    p_val = sub.add_parser("validate-config", help="check a config file")
    p_val.add_argument("file")

    p_gamma = sub.add_parser("gamma", help="print the information-group number")
    p_gamma.add_argument(
        "topology",
        help=(
            "topology spec: complete | empty | ring | star[:center] | "
            "edge-removal:a>b;... | edges:a>b;..."
        ),
    )
    p_gamma.add_argument("--hubs", type=int, default=5, help="number of hubs")
    p_gamma.add_argument(
        "--groups", action="store_true", help="also print the group partition"
    )
    return parser


def _cmd_run_sweep(args) -> int:
    spec = load_sweep_spec(args.spec)
    if args.trials is not None:
        spec.trials = args.trials
    if args.seed is not None:
        spec.base = replace(spec.base, seed=args.seed)
    if args.out is not None:
        spec.output_path = args.out
    if args.policies is not None:
        spec.policies = tuple(p.strip() for p in args.policies.split(",") if p.strip())
    records = run_sweep(spec.validate(), workers=args.workers)
    print(f"wrote {len(records)} rows to {spec.output_path}")
    return 0


def _cmd_run_topology(args) -> int:
    base, opts = load_topology_spec(args.spec)
    if args.trials is not None:
        opts["trials"] = args.trials
    if args.seed is not None:
        base = replace(base, seed=args.seed)
    if args.out is not None:
        opts["output_path"] = args.out
    if args.policies is not None:
        opts["policies"] = tuple(p.strip() for p in args.policies.split(",") if p.strip())
    records = run_topology_study(base, opts["trials"], output_path=opts["output_path"],
                                 policies=opts["policies"],
                                 include_undirected=opts["include_undirected"],
                                 workers=args.workers)
    print(f"wrote {len(records)} rows to {opts['output_path']}")
    return 0


def _cmd_validate(args) -> int:
    import configparser

    cp = configparser.ConfigParser()
    if not cp.read(args.file):
        raise ConfigError(f"cannot read config file {args.file}")
    if "sweep" in cp:
        spec = load_sweep_spec(args.file)
        print(
            f"ok: sweep over {spec.axis} x {len(spec.values)} values, "
            f"{spec.trials} trials, policies {', '.join(spec.policies)}"
        )
    elif "scenario" in cp:
        cfg = ScenarioConfig.from_section(cp["scenario"])
        print(
            f"ok: scenario with {cfg.n_depots} depots / {cfg.n_agents} agents, "
            f"horizon {cfg.horizon}, topology {cfg.topology}"
        )
    else:
        raise ConfigError(f"{args.file}: no [scenario] section found")
    return 0


def _cmd_gamma(args) -> int:
    g = parse_topology(args.topology, args.hubs)
    print(information_group_number(g))
    if args.groups:
        for group in information_groups(g):
            print(" ".join(str(h) for h in group))
    return 0


_COMMANDS = {
    "run-sweep": _cmd_run_sweep,
    "run-topology": _cmd_run_topology,
    "validate-config": _cmd_validate,
    "gamma": _cmd_gamma,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
