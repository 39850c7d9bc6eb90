"""Exception hierarchy shared by all patternq modules."""


class PatternQError(Exception):
    """Base class for all errors raised by this package."""


# ---- graph construction / queries ----

class GraphError(PatternQError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class BadIndex(GraphError):
    pass


class NonpositiveWeight(GraphError):
    pass


class IsolatedVertex(GraphError):
    pass


class NotConnected(GraphError):
    pass


class BadLatticeSize(GraphError):
    pass


# ---- partitions ----

class PartitionMismatch(PatternQError):
    pass


class NotEquitable(PatternQError):
    pass


class NotPermutation(PatternQError):
    pass


class NotAutomorphism(PatternQError):
    pass


class SingularTransform(PatternQError):
    pass


class OrderingMismatch(PatternQError):
    pass


# ---- spectral machinery ----

class NotSymmetric(PatternQError):
    pass


class NoConvergence(PatternQError):
    pass


class DetailedBalanceViolated(PatternQError):
    pass


class Reducible(PatternQError):
    pass


# ---- cell model ----

class NegativeInput(PatternQError):
    pass


class NonpositiveOperatingPoint(PatternQError):
    pass


# ---- existence / patterns ----

class OnlyHomogeneousFound(PatternQError):
    """Both solver starts collapsed to the homogeneous state despite a
    certified eigenvalue condition; raised loudly, never silently accepted."""


class DimensionMismatch(PatternQError):
    pass


# ---- stability ----

class NotSteadyState(PatternQError):
    pass


# ---- simulation ----

class StateOutOfBox(PatternQError):
    pass


class BadOptions(PatternQError):
    pass


class NotConverged(PatternQError):
    pass


# ---- CLI / bundles ----

class BadBundle(PatternQError):
    pass
