"""solve: solve a standalone problem document."""

import argparse
import sys

from ...domain.services.ilp_solver import solve_problem_document
from ...infrastructure.files import read_json
from ...infrastructure.files.documents import dump_json


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser('solve', parents=parents, help="Solve a 0/1 problem JSON document")
    parser.add_argument('--problem', required=True, help="Problem JSON document")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    solution = solve_problem_document(read_json(args.problem))
    sys.stdout.write(dump_json(solution))
    # Infeasible still prints the solution document
    return 0 if solution.status == 'optimal' else 1
