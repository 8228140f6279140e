"""Explicit values for the constants of the spanning recursion.

``K(m, k, N)`` bounds the m-measure of the span built at a node that still has
``N - k`` slicing directions to go.  The one-dimensional constant ``K(1, 0, N)``
is a convention (any positive value works because the output is a finite
set), fixed to :data:`K1_CONVENTION`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import PreconditionError

K1_CONVENTION = 1.0


def base_constant(m, N):
    """``2^(2m-1) sqrt(N)``, the cone constant on an N-cube of side L."""
    if m < 2:
        raise PreconditionError("base constant needs m >= 2")
    if N < m:
        raise PreconditionError("base constant needs N >= m")
    return 2.0 ** (2 * m - 1) * math.sqrt(N)


@lru_cache(maxsize=None)
def _K(m, k, N):
    if m == 1:
        return K1_CONVENTION
    if not 0 <= k <= N:
        raise PreconditionError(f"k={k} outside [0, {N}]")
    if k == N:
        return base_constant(m, N)
    return step_constant(m, k + 1, N)


def K(m, k, N):
    """Ledger entry ``K^m_k`` for ambient slice dimension ``N``."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    if m >= 2 and N < m:
        raise PreconditionError("need N >= m")
    return _K(m, k, N)


def script_L_factor(m, N):
    """``1 + 2 (2 K^(m-1)_0)^(1/(m-1))`` where the lower constant uses ``N - 1``."""
    if m < 2:
        raise PreconditionError("script_L needs m >= 2")
    k0 = K(m - 1, 0, N - 1)
    return 1.0 + 2.0 * (2.0 * k0) ** (1.0 / (m - 1))


def script_L(m, L, N=None):
    """Slab bound ``𝓛_m`` for a parent bound ``L``."""
    if not L > 0:
        raise PreconditionError("L must be positive")
    return script_L_factor(m, m if N is None else N) * L


def step_lower_bounds(m, k, N):
    """The two lower bounds on ``K^m_(k-1)`` given ``K^m_k``."""
    Kk = K(m, k, N)
    k0 = K(m - 1, 0, N - 1)
    f = script_L_factor(m, N)
    return Kk * f * 2.0 * (1.0 + 2.0 * k0), Kk * f + k0


def step_constant(m, k, N):
    """``K^m_(k-1)`` taken equal to the larger of its two lower bounds."""
    if not 1 <= k <= N:
        raise PreconditionError(f"k={k} outside [1, {N}]")
    return max(step_lower_bounds(m, k, N))


def final_constant(m, n):
    """``K^m_0`` with ``N = n``: the constant of the top-level node."""
    if not 2 <= m <= n:
        raise PreconditionError("need 2 <= m <= n")
    return K(m, 0, n)


def isoperimetric_constant(m, n):
    """Constant in ``H^m(span)^(m-1) <= C H^(m-1)(A)^m`` when ``L = 4 H^(m-1)(A)^(1/(m-1))``.

    From ``H^m <= K L H^(m-1)`` this is ``(4 K)^(m-1)``.
    """
    return (4.0 * final_constant(m, n)) ** (m - 1)


@dataclass
class ConstantLedger:
    """Table of ``K^m_k`` for all ``1 <= m <= m_max``, ``m <= N <= n``."""

    n: int
    m_max: int = None
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.m_max is None:
            self.m_max = self.n
        if not 1 <= self.m_max <= self.n:
            raise PreconditionError("need 1 <= m_max <= n")
        for m in range(1, self.m_max + 1):
            for N in range(max(m, 1), self.n + 1):
                for k in range(0, N + 1 if m >= 2 else 1):
                    self.table[(m, k, N)] = K(m, k, N)

    def script_L_multiplier(self, m):
        return script_L_factor(m, self.n)

    def rows(self):
        return [{"m": m, "k": k, "N": N, "K": v} for (m, k, N), v in sorted(self.table.items())]

    def to_json(self):
        mult = {str(m): script_L_factor(m, self.n) for m in range(2, self.m_max + 1)}
        out = {"K1_0_convention": K1_CONVENTION, "n": self.n, "table": self.rows(),
               "script_L_multiplier": mult}
        if self.m_max >= 2:
            out["final_constant"] = {str(m): final_constant(m, self.n)
                                     for m in range(2, self.m_max + 1)}
        return out

    def format_table(self):
        lines = [f"{'m':>2} {'N':>2} {'k':>2} {'K':>24}"]
        for (m, k, N), v in sorted(self.table.items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1])):
            lines.append(f"{m:>2} {N:>2} {k:>2} {v:>24.10g}")
        lines.append(f"K(1,0,N) = {K1_CONVENTION:g} by convention")
        return "\n".join(lines)
