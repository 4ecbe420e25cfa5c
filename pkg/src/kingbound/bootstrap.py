"""Bootstrap the kingbound check registry using SAF's desktop init."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from scitrera_app_framework import Variables, register_plugin, get_extensions
from scitrera_app_framework.util import find_types_in_modules

if TYPE_CHECKING:
    from kingbound.checks.base import CheckPlugin

logger = logging.getLogger(__name__)

EXT_CHECK = "kingbound.check"

# Module-level singleton for the kingbound Variables instance
_variables: Variables | None = None


def init_kingbound(v: Variables | None = None, log_level: str = "WARNING") -> Variables:
    """Initialize kingbound's check registry.

    Every ``CheckPlugin`` subclass found under ``kingbound.checks`` is
    registered as a multi-extension of ``kingbound.check``.

    Args:
        v: Optional pre-existing Variables instance to reuse.
        log_level: SAF log level (default WARNING to reduce verbosity).

    Returns:
        The initialized Variables instance.
    """
    global _variables

    if _variables is not None and v is None:
        return _variables

    if v is None:
        from scitrera_app_framework import init_framework_desktop
        v = init_framework_desktop("kingbound", log_level=log_level, fault_handler=False, shutdown_hooks=False,
                                   fixed_logger=logger)

        from kingbound.utils import suppress_noisy_loggers
        suppress_noisy_loggers()

    _variables = v

    # Import here to avoid circular imports
    from kingbound.checks.base import CheckPlugin

    for check_cls in find_types_in_modules("kingbound.checks", CheckPlugin):
        if not check_cls.check_name:
            continue
        try:
            register_plugin(check_cls, v=v)
            logger.debug("Registered check: %s", check_cls.__name__)
        except (ValueError, TypeError) as e:
            logger.debug("Skipping check %s: %s", check_cls.__name__, e)

    return v


def get_variables() -> Variables:
    """Get the kingbound Variables instance, initializing if needed."""
    global _variables
    if _variables is None:
        init_kingbound()
    return _variables


def get_check(name: str, v: Variables | None = None) -> CheckPlugin:
    """Get a check plugin by its step ``kind``.

    Raises:
        ValueError: If no check with that kind is registered
    """
    if v is None:
        v = get_variables()

    all_checks = get_extensions(EXT_CHECK, v=v)
    for _plugin_name, check in all_checks.items():
        if check.check_name == name:
            return check

    available = sorted(c.check_name for c in all_checks.values())
    raise ValueError("Unknown check: %r. Available: %s" % (name, available))


def list_checks(v: Variables | None = None) -> list[str]:
    """List all registered check kinds."""
    if v is None:
        v = get_variables()

    return sorted(c.check_name for c in get_extensions(EXT_CHECK, v=v).values())
