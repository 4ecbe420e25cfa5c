"""kingbound - explicit bounds and simulation-based verification for FCFS GI/GI/n queues."""

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("kingbound")
except PackageNotFoundError:
    __version__ = "0.0.0-dev"
