#!/usr/bin/env python3
"""Write the seeded case-study model and requirements to disk."""
import sys
import argparse
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.infrastructure.act_dsl import serialize_model
from src.infrastructure.files import write_text
from tests.fixtures.case_study import REQUIREMENTS, SEED, build_case_study_model


def main():
    parser = argparse.ArgumentParser(description='Generate the case-study fixture files')
    parser.add_argument('--out-dir', default='tests/fixtures', help='Directory for case_study.act and requirements.txt')
    parser.add_argument('--seed', type=int, default=SEED, help='Random seed for property values and cross flows')
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    model = build_case_study_model(args.seed)
    write_text(out_dir / 'case_study.act', serialize_model(model))
    write_text(out_dir / 'requirements.txt', REQUIREMENTS)

    print(f"✅ Wrote {out_dir / 'case_study.act'} ({len(model.task_names())} tasks, {len(model.flows)} flows)")
    print(f"✅ Wrote {out_dir / 'requirements.txt'}")


if __name__ == "__main__":
    main()
