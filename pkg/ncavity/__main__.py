import sys

from ncavity.Benchmark import Benchmark

if __name__ == "__main__":
    sys.exit(Benchmark.main())
