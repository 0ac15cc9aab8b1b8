"""
Module entry point for the full_house package.

Author: Ron Webb
Since: 1.0.0
"""

import sys

from .app import main

if __name__ == "__main__":
    sys.exit(main())
