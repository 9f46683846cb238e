# -*- coding: utf-8 -*-

"""Output formatting shared by the file writers."""

import os
import time
from typing import Iterable

import numpy as np
import pandas as pd

__all__ = ["FLOAT_FORMAT", "format_number", "format_row", "write_csv", "ensure_parent", "make_outdir"]

# 9 significant digits, fixed scientific notation
FLOAT_FORMAT = "%.8e"


def format_number(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FORMAT % float(value)


def format_row(values: Iterable) -> str:
    return ",".join(format_number(v) for v in values)


def ensure_parent(path: str) -> str:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    return path


def write_csv(frame: pd.DataFrame, path: str, index: bool = False) -> str:
    """Write a frame with the fixed float format and Unix line endings."""
    frame.to_csv(ensure_parent(path), index=index, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def make_outdir(basename: str = "", root: str = "out") -> str:
    """Create a fresh timestamped directory below ``root``."""
    stamp = time.strftime("%Y%m%d_%H%M%S")
    path = os.path.join(root, f"{stamp}_{basename}" if basename else stamp)
    os.makedirs(path, exist_ok=True)
    return path
