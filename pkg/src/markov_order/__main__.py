import sys

from markov_order.cli import main

sys.exit(main())
