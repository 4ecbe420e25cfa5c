"""Allow running kingbound as: python -m kingbound"""

from kingbound.cli import main

main()
