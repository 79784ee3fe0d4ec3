import sys

from qrbf.cli import main

sys.exit(main())
