import sys

from localvoting.cli import main

sys.exit(main())
