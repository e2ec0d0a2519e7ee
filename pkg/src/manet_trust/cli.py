"""``manet-trust`` command line: run a scenario and write its CSV outputs."""

from __future__ import annotations

import argparse
import csv
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from .metrics import write_metrics
from .scenario import PRESETS, ConfigError, Scenario, load_scenario, preset
from .simulator import SimulationResult, event_rows, run
from .trace import EVENT_HEADER, write_trace

log = logging.getLogger("manet_trust")

EXIT_OK = 0
EXIT_CONFIG = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="manet-trust", description="Run a reputation-based MANET trust simulation.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scenario", metavar="PATH", help="key=value scenario file")
    src.add_argument("--preset", metavar="NAME", help=f"built-in scenario: {', '.join(sorted(PRESETS))}")
    seeds = p.add_mutually_exclusive_group()
    seeds.add_argument("--seed", metavar="U64", help="root seed (overrides the scenario)")
    seeds.add_argument("--seeds", metavar="A..B", help="inclusive seed range; one subdirectory per seed")
    p.add_argument("--out", metavar="DIR", default=".", help="output directory (default: current)")
    p.add_argument("--duration", metavar="S", help="override the simulated duration in seconds")
    p.add_argument("--workers", type=int, default=None, help="threads for a --seeds sweep")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def write_outputs(result: SimulationResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trace(result.traces, out / "trace.csv")
    with open(out / "events.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EVENT_HEADER)
        w.writerows(event_rows(result))
    write_metrics(result.metrics, out / "metrics.csv")
    return out


def _parse_seed(raw: str, key: str) -> int:
    try:
        v = int(raw, 0)
    except ValueError:
        raise ConfigError(f"cannot parse {raw!r}", key=key) from None
    if not 0 <= v < 2 ** 64:
        raise ConfigError(f"must be a 64-bit unsigned integer, got {raw}", key=key)
    return v


def _parse_range(raw: str) -> List[int]:
    m = re.fullmatch(r"\s*(\w+)\s*\.\.\s*(\w+)\s*", raw)
    if not m:
        raise ConfigError(f"expected A..B, got {raw!r}", key="seeds")
    a, b = _parse_seed(m.group(1), "seeds"), _parse_seed(m.group(2), "seeds")
    if b < a:
        raise ConfigError(f"empty range {raw!r}", key="seeds")
    return list(range(a, b + 1))


def resolve_scenario(args) -> Scenario:
    if args.scenario is not None:
        sc = load_scenario(args.scenario)
    else:
        sc = preset(args.preset or "table1")
    if args.duration is not None:
        try:
            duration = float(args.duration)
        except ValueError:
            raise ConfigError(f"cannot parse {args.duration!r}", key="duration_s") from None
        sc = sc.replace(duration_s=duration)
    if args.seed is not None:
        sc = sc.replace(seed=_parse_seed(args.seed, "seed"))
    return sc


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        sc = resolve_scenario(args)
        seeds = _parse_range(args.seeds) if args.seeds is not None else None
    except ConfigError as e:
        print(f"manet-trust: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if seeds is None:
        write_outputs(run(sc), args.out)
        log.info("wrote %s", args.out)
        return EXIT_OK

    def one(seed: int):
        out = write_outputs(run(sc.replace(seed=seed)), Path(args.out) / f"seed_{seed}")
        log.info("wrote %s", out)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        list(pool.map(one, seeds))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
