"""Allow ``python -m mixedness``."""

import sys

from mixedness.cli import main

sys.exit(main())
