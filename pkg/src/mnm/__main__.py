import sys

from mnm.cli import main

sys.exit(main())
