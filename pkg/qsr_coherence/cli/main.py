# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Command line entry point.
#
#   qsr-coherence quantity cmi ghz.json --parts R,C,B
#   qsr-coherence rates --random-qubits 4 --seed 7 --format csv
#   qsr-coherence simulate coherence-creation --q 2 --e 1
#   qsr-coherence simulate convex-split rho_pq.json sigma_q.json --delta 0.1
#   qsr-coherence simulate qsr ghz.json --n-override 4
#   qsr-coherence sweep copies ghz.json --values 1:3 --workers 2
#   qsr-coherence sweep b ghz.json --values 1,2,4 --n-override 4
#   qsr-coherence selftest --trials 200
#
# Exit codes: 0 ok, 2 invalid input, 3 over budget, 4 bound or claim violated.
#

import argparse
import logging
import sys
from typing import List, Optional

from qsr_coherence.cli.commands import (COMMAND_HANDLERS, EXIT_BOUND, EXIT_BUDGET, EXIT_INPUT, PROTOCOLS,
                                        QUANTITIES)
from qsr_coherence.cli.config import DEFAULT_CONFIG, FORMATS, UNITS, load_defaults, run_config
from qsr_coherence.errors import BoundViolationError, BudgetExceededError, StateFileError
from qsr_coherence.sweeps import SWEEPS

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)-15s %(levelname)-8s %(message)s'


def setup_logging(verbose: bool = False, log_file: Optional[str] = None):
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, filename=log_file, filemode='a+', format=LOG_FORMAT, force=True)
    logging.captureWarnings(True)


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-j', '--jsonfile', dest='jsonfile', type=str, default=DEFAULT_CONFIG,
                        help='JSON file with the default parameters')
    common.add_argument('--seed', type=int, default=None, help='RNG seed, 64-bit unsigned')
    common.add_argument('--format', choices=FORMATS, default=None, help='Output format')
    common.add_argument('--units', choices=UNITS, default=None, help='Report qubit rates as qubits or cobits')
    common.add_argument('--budget', type=int, default=None, help='Largest amplitude vector / density dimension')
    common.add_argument('--allow-inf', dest='allow_inf', action='store_true',
                        help='Report infinite quantities instead of failing')
    common.add_argument('-o', '--out', type=str, default=None, help='Write output to this file')
    common.add_argument('--log-file', dest='log_file', type=str, default=None, help='Append logs to this file')
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog='qsr-coherence',
                                     description='Quantum state redistribution with local coherence')
    commands = parser.add_subparsers(dest='command', required=True)

    quantity = commands.add_parser('quantity', parents=[common], help='Evaluate one entropic quantity')
    quantity.add_argument('target', choices=QUANTITIES)
    quantity.add_argument('states', nargs='+', help='One or two state files')
    quantity.add_argument('--parts', type=str, default=None, help='Comma separated parts, e.g. R+A,C,B')
    quantity.add_argument('--eps', dest='dh_eps', type=float, default=None, help='Error for dh and df')

    rates = commands.add_parser('rates', parents=[common], help='Asymptotic rate report')
    rates.add_argument('states', nargs='?', default=None, help='Pure state file; random when omitted')
    rates.add_argument('--random-qubits', dest='random_qubits', type=int, default=None)
    rates.add_argument('--parts', type=str, default=None, help='R,A,B,C label groups, e.g. R1+R2,A1+A2,B1+B2,C1+C2')

    simulate = commands.add_parser('simulate', parents=[common], help='Run a protocol')
    simulate.add_argument('target', choices=PROTOCOLS)
    simulate.add_argument('states', nargs='*')
    simulate.add_argument('--q', type=int, default=None, help='Qubits sent')
    simulate.add_argument('--e', type=int, default=None, help='Ebits consumed')
    simulate.add_argument('--delta', type=float, default=None)
    simulate.add_argument('--smoothing', type=float, default=None)
    simulate.add_argument('--eps1', type=float, default=None)
    simulate.add_argument('--eps2', type=float, default=None)
    simulate.add_argument('--gamma', type=float, default=None)
    simulate.add_argument('--sigma', type=str, default=None, help='Incoherent sigma_C state file')
    simulate.add_argument('--n-override', dest='n_override', type=int, default=None)
    simulate.add_argument('--b-override', dest='b_override', type=int, default=None)

    sweep = commands.add_parser('sweep', parents=[common], help='Sweep one parameter')
    sweep.add_argument('target', choices=SWEEPS)
    sweep.add_argument('states', nargs='+')
    sweep.add_argument('--values', type=str, default=None, help='"1,2,4" or "1:4"')
    sweep.add_argument('--workers', type=int, default=None)
    sweep.add_argument('--eps1', type=float, default=None)
    sweep.add_argument('--eps2', type=float, default=None)
    sweep.add_argument('--gamma', type=float, default=None)
    sweep.add_argument('--n-override', dest='n_override', type=int, default=None, help='Copies for the b sweep')

    selftest = commands.add_parser('selftest', parents=[common], help='Randomized inequality battery')
    selftest.add_argument('--trials', type=int, default=None)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    states = getattr(args, "states", None)
    args.states = [states] if isinstance(states, str) else states
    setup_logging(args.verbose, args.log_file)

    try:
        config = run_config(args, load_defaults(args.jsonfile))
        logger.debug(f"Run configuration: {config}")
        return COMMAND_HANDLERS[config.command](config)
    except StateFileError as e:
        for error in e.errors:
            print(f"{e.path}: {error}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as e:
        logger.error(str(e))
        return EXIT_BUDGET
    except (BoundViolationError, ArithmeticError) as e:
        logger.error(str(e))
        return EXIT_BOUND
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
