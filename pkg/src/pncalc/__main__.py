import sys

from pncalc.cli import main

sys.exit(main())
