import sys

from eil.cli import main

sys.exit(main())
