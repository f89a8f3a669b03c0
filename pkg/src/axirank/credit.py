"""Axiomatic co-author credit shares (the a-index).

Shares are evaluated exactly, as integer numerators over the common
denominator ``lcm(1..n)``, and rounded to floats only at the boundary, so a
paper's shares normalize to 1 within a few ulps regardless of team size.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Tuple

if TYPE_CHECKING:
    from .corpus import PaperRecord


class AuthorshipMode(enum.Enum):
    PLAIN = "plain"
    LAST_IS_CORRESPONDING = "last_is_corresponding"


@dataclass(frozen=True)
class CreditVector:
    """Credit shares of one paper; ``shares[k - 1]`` belongs to the k-th author."""

    mode: AuthorshipMode
    shares: Tuple[float, ...]

    def __len__(self) -> int:
        return len(self.shares)


def _check_range(k: int, n: int, min_n: int = 1) -> None:
    if n < min_n:
        raise ValueError(f"team size n={n} must be >= {min_n}")
    if not 1 <= k <= n:
        raise ValueError(f"author position k={k} outside 1..{n}")


@lru_cache(maxsize=None)
def _numerators(n: int, mode: AuthorshipMode) -> Tuple[Tuple[int, ...], int]:
    """Integer numerators over one common denominator for a team of n."""
    lcm = math.lcm(*range(1, n + 1))
    if mode is AuthorshipMode.PLAIN:
        # c_k = (1/n) sum_{j=k..n} 1/j
        lo, hi, shift, scale = 1, n, 0, n
    else:
        # c_k = (1/(n-1)) sum_{j=k..n-1} 1/(j+1); c_n = c_1
        lo, hi, shift, scale = 1, n - 1, 1, n - 1
    tail = [0] * (hi + 2)
    for j in range(hi, lo - 1, -1):
        tail[j] = tail[j + 1] + lcm // (j + shift)
    nums = tail[1:n + 1]
    if mode is AuthorshipMode.LAST_IS_CORRESPONDING:
        nums[n - 1] = nums[0]
    return tuple(nums), scale * lcm


def exact_shares(n: int, mode: AuthorshipMode = AuthorshipMode.PLAIN) -> Tuple[Fraction, ...]:
    """Exact rational credit shares for a team of ``n`` under ``mode``."""
    _check_range(1, n, min_n=2 if mode is AuthorshipMode.LAST_IS_CORRESPONDING else 1)
    nums, den = _numerators(n, mode)
    return tuple(Fraction(x, den) for x in nums)


@lru_cache(maxsize=None)
def _float_shares(n: int, mode: AuthorshipMode) -> Tuple[float, ...]:
    nums, den = _numerators(n, mode)
    # int / int is correctly rounded
    return tuple(x / den for x in nums)


def credit_share_plain(k: int, n: int) -> float:
    """Credit of the k-th of n authors when no equal contribution is known.

    >>> credit_share_plain(1, 3) == 11 / 18
    True
    """
    _check_range(k, n)
    return _float_shares(n, AuthorshipMode.PLAIN)[k - 1]


def credit_share_corresponding(k: int, n: int) -> float:
    """Credit of the k-th of n authors when the last author corresponds.

    First and last author receive the same share; the interior authors follow
    the harmonic tail shifted by one.
    """
    _check_range(k, n, min_n=2)
    return _float_shares(n, AuthorshipMode.LAST_IS_CORRESPONDING)[k - 1]


def detect_mode(paper: "PaperRecord") -> AuthorshipMode:
    # Only a last-author email selects the corresponding-author formula.
    if len(paper.authors) >= 2 and paper.authors[-1].has_email:
        return AuthorshipMode.LAST_IS_CORRESPONDING
    return AuthorshipMode.PLAIN


def credit_vector(paper: "PaperRecord") -> CreditVector:
    mode = detect_mode(paper)
    return CreditVector(mode, _float_shares(len(paper.authors), mode))
