"""Allow ``python -m hplane``."""

import sys

from .cli import main

sys.exit(main())
