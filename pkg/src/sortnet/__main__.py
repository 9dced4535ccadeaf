import sys

from sortnet.cli import main

sys.exit(main())
