"""reconstruct: run the full pipeline and write the model and report."""

import argparse
import logging

from ...domain.services.reconstruction_service import ReconstructionService
from ...infrastructure.files import (
    load_added_properties, load_dictionary_overrides, read_text, write_json, write_text
)

logger = logging.getLogger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser('reconstruct', parents=parents, help="Reconstruct a model against requirements")
    parser.add_argument('--model', required=True, help="Input ACT model file")
    parser.add_argument('--requirements', required=True, help="Requirements file")
    parser.add_argument('--out', required=True, help="Output ACT model file")
    parser.add_argument('--report', required=True, help="Output JSON report")
    parser.add_argument('--dict', dest='dictionary', help="TSV dictionary rows merged over the default dictionary")
    parser.add_argument('--added-props', dest='added_props', help="TSV property values for added tasks")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    model_text = read_text(args.model)
    requirements_text = read_text(args.requirements)
    service = ReconstructionService(
        dictionary=load_dictionary_overrides(args.dictionary) if args.dictionary else None,
        added_properties=load_added_properties(args.added_props) if args.added_props else None,
    )

    text, report = service.reconstruct(model_text, requirements_text)
    write_json(args.report, report)
    if text is None:
        logger.error(f"No feasible selection; report written to {args.report}, no model written")
        return 1

    write_text(args.out, text)
    logger.info(f"Wrote {args.out} and {args.report}")
    return 0
