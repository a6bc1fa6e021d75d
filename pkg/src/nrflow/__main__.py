import sys

from nrflow.cli import main

sys.exit(main())
