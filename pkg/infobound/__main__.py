import sys

from infobound.cli import main

sys.exit(main())
