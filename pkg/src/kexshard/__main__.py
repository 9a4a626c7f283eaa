import sys

from kexshard.cli import main

sys.exit(main())
