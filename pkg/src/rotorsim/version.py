# -*- coding: utf-8 -*-

"""Version stamp written into every output manifest.

Run with ``python -m rotorsim.version`` or ``rotorsim version``.
"""

import os
import subprocess  # noqa: S404

__all__ = [
    "VERSION",
    "get_version",
    "get_git_hash",
]

VERSION = "0.0.1-dev"


def get_git_hash() -> str:
    """Short hash of the checkout the package runs from, ``UNHASHED`` outside git."""
    try:
        completed = subprocess.run(  # noqa: S603,S607
            ["git", "rev-parse", "--short=8", "HEAD"],
            cwd=os.path.dirname(os.path.abspath(__file__)),
            capture_output=True,
            check=True,
            text=True,
        )
    except (subprocess.CalledProcessError, OSError):
        return "UNHASHED"
    return completed.stdout.strip() or "UNHASHED"


def get_version(with_git_hash: bool = False) -> str:
    """``VERSION``, with ``-<hash>`` appended on request."""
    return f"{VERSION}-{get_git_hash()}" if with_git_hash else VERSION


if __name__ == "__main__":
    print(get_version(with_git_hash=True))  # noqa:T201
