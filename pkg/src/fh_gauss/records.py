"""Plain records passed between modules and serialised by the CLI."""

from dataclasses import dataclass, field

from mpmath import mp, mpf


@dataclass
class ResidualReport:
    """One identity check: which relation, where, how far off, and the verdict."""

    name: str
    anchor: str
    params: dict
    residual: object
    tolerance: object
    passed: bool
    note: str = ""

    def as_row(self, digits=6):
        return {
            "identity": self.name,
            "anchor": self.anchor,
            "params": {k: _fmt(v, 17) for k, v in sorted(self.params.items())},
            "residual": _fmt(self.residual, digits),
            "tolerance": _fmt(self.tolerance, digits),
            "pass": bool(self.passed),
            "note": self.note,
        }


def _fmt(v, digits):
    if isinstance(v, (mp.mpf, mp.mpc)):
        return mp.nstr(v, digits)
    if isinstance(v, (list, tuple)):
        return [_fmt(x, digits) for x in v]
    return v


def normalized(diff, *terms):
    """|diff| / max(1, |terms|...), the scale-aware residual used everywhere."""
    scale = max([mpf(1)] + [abs(t) for t in terms])
    return abs(diff) / scale


def report(name, anchor, params, diff, terms, tolerance, note=""):
    res = normalized(diff, *terms)
    return ResidualReport(name, anchor, dict(params), res, tolerance, bool(res <= tolerance), note)


@dataclass
class AuxQuantities:
    """R[n][j], r[n][j] for n = 0..n_max, plus the principal-value constants.

    ``source`` is "quadrature" or "iterated".  For iterated tables
    ``deviation`` may hold the per-n relative gap to a quadrature table.
    """

    R: list
    r: list
    pv: list = None
    source: str = "quadrature"
    deviation: list = field(default_factory=list)

    @property
    def n_max(self):
        return len(self.R) - 1

    @property
    def N(self):
        return len(self.R[0])
