import sys
import rainbow_transversal
from rainbow_transversal.cli import run


def main():
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        print(f"[MAIN] rainbow-transversal {rainbow_transversal.__version__} interrupted.")
        sys.exit(1)


if __name__ == "__main__":
    main()
