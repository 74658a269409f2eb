"""
Exceptions raised by saalschutz_l.

None of these derive from ValueError, so they pass through pydantic
validators untouched instead of being folded into a ValidationError.
"""


class LFunctionError(Exception):
    """Base class for every error raised by this package"""


class UsageError(LFunctionError):
    """Bad input: the CLI exits with status 2 on these"""


class PoleError(LFunctionError):
    """Gamma evaluated at (or within tolerance of) a nonpositive integer"""


class SpecError(UsageError):
    """A hypergeometric series specification is malformed"""


class HyperplaneError(UsageError):
    """Parameters do not lie on e+f+g-a-b-c-d = 1"""


class DomainError(UsageError):
    """Parameters outside the region where an evaluation or identity is defined"""


class ContourError(UsageError):
    """No straight vertical contour separates the two families of poles"""


class UnknownLabel(UsageError):
    """Generator label or word not understood"""


class SamplerExhausted(UsageError):
    """Rejection sampling ran out of attempts"""


class NoConvergence(LFunctionError):
    """Series summation stopped before reaching its target"""


class QuadratureStall(LFunctionError):
    """Adaptive quadrature exceeded its node budget"""


class PresentationFailure(LFunctionError):
    """A Coxeter relation (a_i a_j)^m_ij = 1 does not hold"""

    def __init__(self, pair, order):
        self.pair = pair
        self.order = order
        super().__init__(f"Coxeter relation fails for pair {pair} with m={order}")


class PartitionError(LFunctionError):
    """Double coset decomposition does not have the expected shape"""


class CatalogIOError(LFunctionError):
    """Reading or writing a relation catalog failed"""


class ClosureOverflow(LFunctionError):
    """Group enumeration passed its element bound; a generator matrix is wrong"""
