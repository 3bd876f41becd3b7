"""
fqcover_cli base module.

Package-wide constants: the distribution name, the installed version that
every report embeds, and the JSON report schema version.
"""

from importlib.metadata import PackageNotFoundError, version

NAME = "fqcover_cli"
SCHEMA_VERSION = 1

try:
    VERSION = version(NAME)
except PackageNotFoundError:
    VERSION = "unknown"
