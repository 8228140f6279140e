"""Spanning sets with controlled measure by recursive slicing and coning."""

__version__ = "0.1.0"

from .constants import ConstantLedger, final_constant
from .geometry import ClosedBall, DSlice
from .kernels import BACKEND
from .measure import hm, measure_covering, measure_simplicial
from .simplicial import SimplicialSet
from .span import SpanOptions, span

__all__ = ["BACKEND", "ClosedBall", "ConstantLedger", "DSlice", "SimplicialSet",
           "SpanOptions", "final_constant", "hm", "measure_covering",
           "measure_simplicial", "span"]
