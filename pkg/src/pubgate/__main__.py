from __future__ import annotations

import sys

from pubgate.cli import main

sys.exit(main())
