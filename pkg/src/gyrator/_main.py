"""Console entry point; applies the thread cap before NumPy loads its BLAS."""

import os
import sys


def main():
    threads = os.environ.get("GYRATOR_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    from .cli import main as cli_main

    sys.exit(cli_main())
