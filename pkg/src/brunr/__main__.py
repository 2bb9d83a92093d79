import sys

from brunr.cli import main

sys.exit(main())
