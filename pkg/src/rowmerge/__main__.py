import sys

from rowmerge.cli import main

sys.exit(main())
