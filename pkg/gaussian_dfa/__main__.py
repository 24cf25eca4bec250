import sys

from gaussian_dfa.cli import main

sys.exit(main())
