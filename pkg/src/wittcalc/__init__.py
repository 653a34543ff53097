"""Exact computations with Witt vectors, differential forms in characteristic p,
truncated Cohen rings, Milnor symbols and cyclic p-power characters."""

from .errors import (ContextMismatch, DomainError, LevelTooLow, NotClosed, NotInGhostImage,
                     NotIntegral, ParameterError, ParseError, PrecisionLoss, Unsupported,
                     UsageError, WittcalcError)
from .ffield import GF, FunctionField, asw_order, asw_solve, is_pk_power, pth_power_decompose, trace
from .forms import DiffForm, b_membership, cartier, d, dlog, exact, graded_equal, wedge
from .padic import (cohen_ring, exp_series, frobenius_lift, lift, log_series, newton_polygon,
                    reduce, valuation)
from .rings import ZZ, Zmod
from .witt import (WittVector, frobenius, from_ghost, gen_witt_polynomials, ghost_map,
                   teichmuller, verschiebung)

__version__ = "0.1.0"
