"""
Custom exceptions for the odqkd.io module.

Purpose
- Provide IO-layer error types distinct from the domain errors in odqkd.core.errors.

Boundaries
- odqkd.core.errors covers parameter, record and schema-version violations.
- odqkd.io raises Io* errors for configuration files and artifact reads/writes:
  - IoConfigError: unreadable, malformed or out-of-range configuration.
  - IoWriteError: atomic write path failed (tmp write/fsync/rename).
  - IoReadError: missing or corrupt input artifact.

Notes
- These exceptions do not perform any IO and are stdlib-only.
"""

from __future__ import annotations

__all__ = ["IoError", "IoConfigError", "IoWriteError", "IoReadError"]


class IoError(Exception):
    """
    Base class for IO-related errors in odqkd.io.

    Notes:
        The command line maps this family to exit status 3, except IoConfigError (status 2).
    """


class IoConfigError(IoError):
    """
    Raised when a configuration file or override is invalid.

    Examples:
        - Unknown section or key in the TOML file
        - detector.eta_d outside [0, 1]
    """


class IoWriteError(IoError):
    """
    Raised when an artifact write fails to complete atomically.

    Notes:
        The write path is tmp file → fsync → os.replace(tmp, final). Failures at any step
        surface as IoWriteError after best-effort cleanup of the tmp file.
    """


class IoReadError(IoError):
    """Raised when an input artifact is missing, truncated or not of the expected kind."""
