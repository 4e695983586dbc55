import sys

from su11sim.main import main

if __name__ == "__main__":
    sys.exit(main())
