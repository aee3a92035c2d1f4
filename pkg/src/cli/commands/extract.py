"""extract: print the constraint set of a requirements file."""

import argparse
import sys

from ...domain.services.extraction_service import default_dictionary, describe_tokens, extract, tokenize
from ...infrastructure.files import load_dictionary_overrides, read_text
from ...infrastructure.files.documents import dump_json


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser('extract', parents=parents, help="Extract constraints from requirements")
    parser.add_argument('--requirements', required=True, help="Requirements file, one sentence per line")
    parser.add_argument('--dict', dest='dictionary', help="TSV dictionary rows merged over the default dictionary")
    parser.add_argument(
        '--show-tokens', action='store_true',
        help="Print the tagged tokens of each sentence instead of the constraint set"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    text = read_text(args.requirements)
    dictionary = load_dictionary_overrides(args.dictionary) if args.dictionary else default_dictionary()

    if args.show_tokens:
        for line_number, line in enumerate(text.splitlines(), start=1):
            sentence = line.strip()
            if sentence and not sentence.startswith('#'):
                sys.stdout.write(f"{line_number}: {describe_tokens(tokenize(sentence, dictionary))}\n")
        return 0

    sys.stdout.write(dump_json(extract(text, dictionary)))
    return 0
