import sys

from boolcube.cli import main

sys.exit(main())
