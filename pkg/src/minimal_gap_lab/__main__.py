import sys

from minimal_gap_lab.cli import main

sys.exit(main())
