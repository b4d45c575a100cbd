#!/usr/bin/env python3
"""
Figure reproduction runner.

Regenerates the data behind the timescale figures as CSV files.

Usage:
    python experiments_cli.py list
    python experiments_cli.py fig2 --out results/fig2.csv --emit-plot
    python experiments_cli.py fig3 --subsystem-sizes 2,5 --steps 100
    python experiments_cli.py custom --config example_config.json

Settings can also come from a .env file:
    MIXEDNESS_LOG_LEVEL=INFO
    MIXEDNESS_WORKERS=4
"""

import sys

from mixedness.cli import main

if __name__ == "__main__":
    sys.exit(main())
