"""Run the full comparison on the bundled corpus and write results to a directory.

Usage: python3 scripts/run_fixture_experiment.py [out_dir]
"""

import sys

from impsum.cli import main
from impsum.corpus import fixture_corpus_path

if __name__ == "__main__":
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "fixture_results"
    sys.exit(main(["evaluate", "--corpus", str(fixture_corpus_path()), "--out", out_dir]))
