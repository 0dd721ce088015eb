class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class InfeasibleError(ValueError):
    """A requested rate cannot be reached anywhere in the region."""


class IncompatibleFrontiersError(ValueError):
    """Two frontiers live in different rate planes and cannot be combined."""
