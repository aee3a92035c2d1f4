"""validate: parse a model file and check its invariants."""

import argparse
import logging

from ...infrastructure.act_dsl import parse_model
from ...infrastructure.files import read_text

logger = logging.getLogger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser('validate', parents=parents, help="Check an ACT model file")
    parser.add_argument('--model', required=True, help="ACT model file")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    model = parse_model(read_text(args.model))
    logger.info(
        f"{args.model}: valid model '{model.name}' with {len(model.entities)} entities, "
        f"{len(model.task_names())} tasks, {len(model.flows)} flows"
    )
    return 0
