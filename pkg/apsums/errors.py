"""Exception hierarchy shared by the library, the CLI and the HTTP handlers"""


class ApsumsError(Exception):
    """Base class for every error raised by apsums"""


class UsageError(Exception):
    """Mixin for errors caused by bad input rather than by the computation"""


class ConfigError(ApsumsError, UsageError):
    pass


class CoprimalityError(ApsumsError, UsageError):
    def __init__(self, k: int, l: int):
        self.k = k
        self.l = l
        super().__init__(f"gcd({k}, {l}) != 1: residue class is not reduced")


class BoundTooLarge(ApsumsError, UsageError):
    def __init__(self, x: float, cap: int):
        self.x = x
        self.cap = cap
        super().__init__(f"bound x={x:g} exceeds the sieve cap {cap} (set APSUMS_MAX_X to raise it)")


class ParseError(ApsumsError, UsageError):
    def __init__(self, offset: int, expected: set[str] | frozenset[str], message: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        wanted = ", ".join(sorted(self.expected)) or "nothing"
        detail = f": {message}" if message else ""
        super().__init__(f"parse error at offset {offset}{detail} (expected {wanted})")


class EvalError(ApsumsError):
    def __init__(self, t: float, reason: str):
        self.t = t
        self.reason = reason
        super().__init__(f"evaluation failed at t={t!r}: {reason}")


class NonFiniteIntegrand(ApsumsError):
    def __init__(self, t: float):
        self.t = t
        super().__init__(f"integrand is not finite at t={t!r}")


class MaxDepthExceeded(ApsumsError):
    def __init__(self, a: float, b: float, depth: int):
        self.a = a
        self.b = b
        self.depth = depth
        super().__init__(f"adaptive Simpson exceeded depth {depth} on [{a!r}, {b!r}]")


class UnknownKind(ApsumsError, UsageError):
    def __init__(self, kind: object):
        self.kind = kind
        super().__init__(f"no closed-form main term for kind {kind!s}")


class ZeroDenominator(ApsumsError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"partial sum B({n}) vanishes")


class InvalidArgument(ApsumsError, UsageError):
    """A flag or query parameter outside its allowed range"""
