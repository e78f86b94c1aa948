"""
Typing aliases shared by the quantum backend and the sifting rules.

This module contains no runtime logic and is zero-IO.

Examples:
    >>> from typing import get_args
    >>> from odqkd.core.typing import ParityBit
    >>> get_args(ParityBit)
    (0, 1)
"""

from __future__ import annotations

from typing import Literal

import numpy as np
import numpy.typing as npt

__all__ = [
    "ParityBit",
    "ComplexArray",
]

# 0 = even number of minus signs / no flip, 1 = odd / flip.
ParityBit = Literal[0, 1]

ComplexArray = npt.NDArray[np.complex128]
