#!/usr/bin/env python
"""
Entry point script to run the rate-region toolkit from a source checkout.
"""

import os
import sys

if __name__ == "__main__":
    # Make the package importable without installing it
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

    from rate_regions.cli import main

    main()
