# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Run configuration: defaults from config.json (or -j/--jsonfile), overridden by flags.
#

import json
import logging
import os
from typing import Any, Callable, Dict, List, NamedTuple, Optional

ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_CONFIG = os.path.join(ROOT_DIR, "config.json")

COMMANDS = ["quantity", "rates", "simulate", "sweep", "selftest"]
FORMATS = ["json", "csv", "pretty"]
UNITS = ["qubits", "cobits"]
MAX_SEED = 2 ** 64
GLOBAL_ARGS = {"command", "target", "states", "out", "seed", "format", "units", "budget", "allow_inf", "log_file",
               "verbose", "jsonfile"}

logger = logging.getLogger(__name__)


class RunConfig(NamedTuple):
    command: str
    target: Optional[str]
    inputs: List[str]
    output: Optional[str]
    seed: int
    format: str
    units: str
    amplitude_budget: int
    density_budget: int
    allow_inf: bool
    options: Dict[str, Any]


def load_defaults(path: Optional[str] = None) -> dict:
    path = DEFAULT_CONFIG if path is None else path
    logger.info(f"Loading {path}...")
    with open(path) as f:
        return json.load(f)


def parse_values(text: str, cast: Callable = float) -> List:
    """
    "1,2,4" or "1:4" (inclusive integer range) into a list.
    """
    text = text.strip()
    if ":" in text:
        start, stop = text.split(":", 1)
        values = list(range(int(start), int(stop) + 1))
    else:
        values = [cast(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError(f"Empty range {text!r}")
    return [cast(v) for v in values]


def _pick(flag, default):
    return default if flag is None else flag


def run_config(args, defaults: dict) -> RunConfig:
    """
    Merges parsed arguments over the defaults. Options start from the command's section of the defaults
    and take every command specific flag that was given.
    """
    seed = int(_pick(args.seed, defaults["seed"]))
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"Seed must be a 64-bit unsigned integer, got {seed}")
    fmt = _pick(args.format, defaults["format"])
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r}, expected one of {FORMATS}")
    units = _pick(args.units, defaults["units"])
    if units not in UNITS:
        raise ValueError(f"Unknown units {units!r}, expected one of {UNITS}")
    amplitude_budget = int(_pick(args.budget, defaults["amplitude_budget"]))
    density_budget = int(_pick(args.budget, defaults["density_budget"]))
    if amplitude_budget < 1 or density_budget < 1:
        raise ValueError(f"Budgets must be positive, got {amplitude_budget} and {density_budget}")

    options = dict(defaults.get(args.command, {}))
    options.update(workers=defaults["workers"], trials=defaults["selftest_trials"],
                   random_qubits=defaults["random_qubits"])
    for name, value in vars(args).items():
        if name not in GLOBAL_ARGS and value is not None:
            options[name] = value

    inputs = [path for path in getattr(args, "states", []) or [] if path is not None]
    return RunConfig(
        command=args.command,
        target=getattr(args, "target", None),
        inputs=inputs,
        output=args.out,
        seed=seed,
        format=fmt,
        units=units,
        amplitude_budget=amplitude_budget,
        density_budget=density_budget,
        allow_inf=bool(args.allow_inf),
        options=options,
    )
