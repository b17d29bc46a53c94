"""Gaussian weight with root-type Fisher-Hartwig factors.

    w(x; t) = exp(-x^2) * prod_j |x - t_j|^gamma_j

All arithmetic runs in binary floating point at ``precision_bits``.  The
default precision is a module-level setting so that every object built in
a session agrees on it.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from mpmath import mp, mpf

from .errors import BadConfig, DuplicateSingularity, ExponentOutOfRange, SingularEvaluation

DEFAULT_PRECISION = 256
DEFAULT_QUAD_TOL = "1e-30"

_default_precision = DEFAULT_PRECISION


def set_default_precision(bits):
    """Change the precision used by specs created without an explicit value."""
    global _default_precision
    if int(bits) < 64:
        raise BadConfig(f"precision_bits must be >= 64, got {bits}")
    _default_precision = int(bits)


def get_default_precision():
    return _default_precision


def to_mpf(value, prec):
    """Convert user input to an mpf at ``prec`` bits.

    Floats are read through their shortest decimal repr, so ``0.3`` means
    the decimal 0.3 rounded at ``prec`` bits rather than the nearest double.
    """
    with mp.workprec(prec):
        if isinstance(value, Fraction):
            return mpf(value.numerator) / value.denominator
        if isinstance(value, float):
            return mpf(repr(value))
        if isinstance(value, Decimal):
            return mpf(str(value))
        return mpf(value)


@dataclass(frozen=True)
class WeightSpec:
    """Parameters of w(x; t): positions ``ts``, exponents ``gammas``.

    Construction validates the parameters and converts them to mpf at
    ``precision_bits``; the instance is immutable and hashable.
    """

    ts: tuple
    gammas: tuple
    precision_bits: int = field(default=None)
    quad_tol: object = DEFAULT_QUAD_TOL

    def __post_init__(self):
        bits = _default_precision if self.precision_bits is None else self.precision_bits
        try:
            bits = int(bits)
        except (TypeError, ValueError):
            raise BadConfig(f"precision_bits must be an integer, got {bits!r}") from None
        if bits < 64:
            raise BadConfig(f"precision_bits must be >= 64, got {bits}")
        if len(self.ts) != len(self.gammas):
            raise BadConfig("ts and gammas must have the same length")
        if len(self.ts) < 1:
            raise BadConfig("at least one singularity is required")
        try:
            ts = tuple(to_mpf(t, bits) for t in self.ts)
            gammas = tuple(to_mpf(g, bits) for g in self.gammas)
            tol = to_mpf(self.quad_tol, bits)
        except (TypeError, ValueError) as exc:
            raise BadConfig(f"non-numeric weight parameter: {exc}") from None
        object.__setattr__(self, "precision_bits", bits)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "quad_tol", tol)
        validate(self)

    @property
    def N(self):
        return len(self.ts)

    @property
    def singularities(self):
        return list(zip(self.ts, self.gammas))

    def with_ts(self, ts):
        return WeightSpec(tuple(ts), self.gammas, self.precision_bits, self.quad_tol)

    def with_precision(self, bits):
        return WeightSpec(self.ts, self.gammas, bits, self.quad_tol)

    def with_tol(self, quad_tol):
        return WeightSpec(self.ts, self.gammas, self.precision_bits, quad_tol)

    def reflected(self):
        """The spec of w(-x): positions negated and reordered."""
        pairs = sorted((-t, g) for t, g in self.singularities)
        return WeightSpec(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs),
                          self.precision_bits, self.quad_tol)

    def is_symmetric(self):
        return self.reflected().singularities == self.singularities

    def describe(self):
        return {
            "ts": [mp.nstr(t, 20) for t in self.ts],
            "gammas": [mp.nstr(g, 20) for g in self.gammas],
            "precision_bits": self.precision_bits,
            "quad_tol": mp.nstr(self.quad_tol, 6),
        }


def validate(spec):
    """Raise on any violated constraint; return True otherwise."""
    for g in spec.gammas:
        if not g > -1:
            raise ExponentOutOfRange(f"exponent {g} must exceed -1")
    for a, b in zip(spec.ts, spec.ts[1:]):
        if not a < b:
            raise DuplicateSingularity(f"positions must be strictly increasing ({a} >= {b})")
    if not spec.quad_tol > 0:
        raise BadConfig("quad_tol must be positive")
    if spec.precision_bits < 64:
        raise BadConfig("precision_bits must be >= 64")
    return True


def log_weight(spec, x, skip=None):
    """-x^2 + sum_k gamma_k log|x - t_k|, omitting index ``skip``."""
    s = -x * x
    for k, (t, g) in enumerate(spec.singularities):
        if k == skip or not g:
            continue
        s += g * mp.log(abs(x - t))
    return s


def eval_weight(spec, x):
    with mp.workprec(spec.precision_bits):
        x = to_mpf(x, spec.precision_bits)
        for t, g in spec.singularities:
            if x == t and g:
                if g > 0:
                    return mp.zero
                raise SingularEvaluation(f"weight is unbounded at x = {t}")
        return mp.exp(log_weight(spec, x))
