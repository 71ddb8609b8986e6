"""Exception types shared across the toolkit."""


class UsageError(ValueError):
    """Bad arguments: mismatched dimensions, bad moduli, unknown descriptors."""


class NotInvertible(ArithmeticError):
    def __init__(self, det, modulus=None):
        self.det = det
        self.modulus = modulus
        where = "" if modulus is None else f" mod {modulus}"
        super().__init__(f"matrix is not invertible: det = {det}{where}")


class ResourceLimit(RuntimeError):
    def __init__(self, message, reached=None):
        self.reached = reached
        super().__init__(message)


class InvalidAutomorphism(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"map is not an automorphism of the group: {report.summary()}")


class NonDescending(ValueError):
    """A character twist has no supplied factorization through reduction mod m."""


class NotASubgroup(ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotNormal(ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotInvariant(ValueError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
