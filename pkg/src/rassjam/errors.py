"""Exception hierarchy shared by all modules."""


class RassError(Exception):
    pass


class ConfigError(RassError, ValueError):
    """Scenario document or derived configuration is unusable."""


class SchemaError(ConfigError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid scenario document: " + "; ".join(self.problems))


class ValidationError(ConfigError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DimensionError(RassError, ValueError):
    pass


class NotHermitianError(RassError, ValueError):
    pass


class DegenerateSpectrumError(RassError, ArithmeticError):
    """First-order perturbation is undefined when eigenvalues (nearly) coincide."""


class DegenerateConfigurationError(RassError, ArithmeticError):
    pass
