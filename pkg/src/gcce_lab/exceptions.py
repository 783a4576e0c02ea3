"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates an operation precondition."""


class DegenerateGeometryError(ValueError):
    """Two sites coincide or the geometry leaves a quantity undefined."""


class CapacityError(ValueError):
    """Requested Hilbert space exceeds the configured dimension cap."""


class InconsistentPartitionError(ValueError):
    """Mean-field indices overlap the cluster they are supposed to complement."""


class IncompleteLatticeError(KeyError):
    """A subset-lattice computation is missing the value of some subcluster."""


class ScenarioValidationError(ValueError):
    """A scenario file violates the configuration schema."""
