"""Exact heat-trace coefficient tables for p-form Laplacians, p = 0..3.

On a compact solid in R^3 with smooth boundary, the Laplacian on p-forms
with relative boundary conditions (Dirichlet at p=0, perfect-conductor
pairs at p=1,2, Neumann at p=3) has a small-t heat-trace expansion
sum_n a_n^(p) t^((n-3)/2).  The coefficients a_0..a_5 are combinations
of eleven boundary/volume curvature moments with *exact rational*
constants; this module stores those constants and the derived
electromagnetic combination, and proves their mutual consistency in
pure rational arithmetic (no floating point anywhere).

Every value is represented as ``rational * (4*pi)**exponent`` with a
Fraction rational and a half-integer exponent, so table transcription
errors cannot hide behind rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FourPiMultiple",
    "MOMENT_SLOTS",
    "CoefficientTable",
    "TABLE",
    "form_exact",
    "em_exact",
    "em_topology_term",
    "harmonic_form_dims",
    "ConsistencyCheck",
    "consistency_report",
]

# Moment slot names, in the order they enter a_0..a_5.
MOMENT_SLOTS = {
    0: ("volume",),
    1: ("area",),
    2: ("trL",),
    3: ("trL2", "detL"),
    4: ("trL3", "trL_detL"),
    5: ("trL4", "trL2_detL", "detL2", "trL_lap_trL"),
}


@dataclass(frozen=True)
class FourPiMultiple:
    """Exact number of the form rational * (4*pi)**exponent."""

    rational: Fraction
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "exponent", Fraction(self.exponent))

    def __add__(self, other):
        if self.rational == 0:
            return other
        if other.rational == 0:
            return self
        if self.exponent != other.exponent:
            raise ValueError("cannot add different powers of 4*pi exactly")
        return FourPiMultiple(self.rational + other.rational, self.exponent)

    def __sub__(self, other):
        return self + FourPiMultiple(-other.rational, other.exponent)

    def __mul__(self, k):
        return FourPiMultiple(self.rational * Fraction(k), self.exponent)

    def __eq__(self, other):
        if self.rational == 0 and other.rational == 0:
            return True
        return self.rational == other.rational and self.exponent == other.exponent

    @property
    def is_zero(self):
        return self.rational == 0

    def __float__(self):
        import math
        return float(self.rational) * (4.0 * math.pi) ** float(self.exponent)

    def __repr__(self):
        return f"{self.rational}*(4pi)^{self.exponent}"


def _fpm(rational, exponent):
    return FourPiMultiple(Fraction(rational), Fraction(exponent))


ZERO = _fpm(0, 0)


@dataclass(frozen=True)
class CoefficientTable:
    """The integer c-constants per form degree, plus rational prefactors.

    ``a_n^(p) = prefactor_n * sum_slots c_n,slot^(p) * moment_slot`` with
    prefactors 1, 1/4, 1/3, 1/384, 1/315, 1/245760 carrying (4 pi)
    powers -3/2, -1, -3/2, -1, -3/2, -1 respectively.
    """

    c: dict

    def entry(self, row, p):
        return self.c[row][p]


# columns: p = 0, 1, 2, 3
TABLE = CoefficientTable(c={
    "c0":  (1, 3, 3, 1),
    "c1":  (-1, -1, 1, 1),
    "c2":  (1, -3, -3, 1),
    "c31": (3, 21, 33, 15),
    "c32": (-20, 148, -220, -4),
    "c41": (4, 36, 60, 28),
    "c42": (-18, -162, -186, -42),
    "c51": (555, 5145, 8625, 4035),
    "c52": (-2840, -27720, -35720, -10840),
    "c53": (2224, 29072, 29712, 2864),
    "c54": (120, 2520, 4680, 2280),
})

_PREFACTOR = {
    0: _fpm(1, Fraction(-3, 2)),
    1: _fpm(Fraction(1, 4), -1),
    2: _fpm(Fraction(1, 3), Fraction(-3, 2)),
    3: _fpm(Fraction(1, 384), -1),
    4: _fpm(Fraction(1, 315), Fraction(-3, 2)),
    5: _fpm(Fraction(1, 245760), -1),
}

_ROWS = {
    0: ("c0",),
    1: ("c1",),
    2: ("c2",),
    3: ("c31", "c32"),
    4: ("c41", "c42"),
    5: ("c51", "c52", "c53", "c54"),
}


def form_exact(p, table=TABLE):
    """Exact coefficient map for the degree-p Laplacian.

    Returns ``{n: {slot: FourPiMultiple}}`` so that
    a_n^(p) = sum_slot value[n][slot] * moment(slot).
    """
    if p not in (0, 1, 2, 3):
        raise ValueError("form degree must be 0..3")
    out = {}
    for n in range(6):
        pre = _PREFACTOR[n]
        out[n] = {
            slot: pre * table.entry(row, p)
            for slot, row in zip(MOMENT_SLOTS[n], _ROWS[n])
        }
    return out


# Electromagnetic coefficients: local curvature parts (exact), plus the
# topological constant in a_3 handled by em_topology_term().
EM_EXACT = {
    0: {"volume": _fpm(2, Fraction(-3, 2))},
    1: {"area": ZERO},
    2: {"trL": _fpm(Fraction(-4, 3), Fraction(-3, 2))},
    3: {"trL2": _fpm(Fraction(3, 64), -1), "detL": _fpm(Fraction(-1, 16), -1)},
    4: {"trL3": _fpm(Fraction(32, 315), Fraction(-3, 2)),
        "trL_detL": _fpm(Fraction(-144, 315), Fraction(-3, 2))},
    5: {"trL4": _fpm(Fraction(2295, 122880), -1),
        "trL2_detL": _fpm(Fraction(-12440, 122880), -1),
        "detL2": _fpm(Fraction(13424, 122880), -1),
        "trL_lap_trL": _fpm(Fraction(1200, 122880), -1)},
}


def em_exact():
    return EM_EXACT


def em_topology_term(topology):
    """The non-local constant in the electromagnetic a_3.

    For boundary components of genera g_1..g_n this is
    1 - (1/2) sum_i (1 + g_i), an exact rational.
    """
    return 1 - Fraction(1, 2) * sum(1 + g for g in topology.genera)


def harmonic_form_dims(topology):
    """Dimensions of the harmonic p-form spaces, p = 0..3.

    (0, n-1, sum of genera, 1) for n boundary components.
    """
    return (0, topology.components - 1, topology.total_genus, 1)


@dataclass(frozen=True)
class ConsistencyCheck:
    name: str
    ok: bool
    detail: str = ""


# The two pairing routes relating the electromagnetic coefficients to
# p-form differences, with the constant that accompanies a_3:
#   route 1:  a_k = a_k^(1) - a_k^(0),  a_3 extra = -(n - 1)
#   route 2:  a_k = a_k^(2) - a_k^(3),  a_3 extra = -(sum g_i - 1)
_ROUTES = {
    "p1-p0": (1, 0),
    "p2-p3": (2, 3),
}


def _route_a3_constant(route, topology):
    if route == "p1-p0":
        return -(topology.components - 1)
    return -(topology.total_genus - 1)


def _gauss_bonnet_transfer(route):
    # detL-slot mismatch between a p-form difference and the
    # electromagnetic a_3; converts to a topological constant through
    # the exact total-curvature identity
    # (1/2)(4 pi)^-1 * integral(det L) = (1/2) sum_i (1 - g_i).
    return Fraction(1, 2) if route == "p1-p0" else Fraction(-1, 2)


def consistency_report(topology, table=TABLE):
    """Exact cross-checks between the p-form table and the EM coefficients.

    All arithmetic is rational.  Returns a list of ConsistencyCheck; a
    failure indicates a transcribed-constant error, not roundoff.
    """
    checks = []

    def add(name, ok, detail=""):
        checks.append(ConsistencyCheck(name, bool(ok), detail))

    forms = {p: form_exact(p, table) for p in range(4)}

    for route, (hi, lo) in _ROUTES.items():
        # local slots must match verbatim for k != 3
        for n in (0, 1, 2, 4, 5):
            for slot in MOMENT_SLOTS[n]:
                diff = forms[hi][n][slot] - forms[lo][n][slot]
                want = EM_EXACT[n].get(slot, ZERO)
                add(f"a{n}[{slot}]:{route}", diff == want,
                    f"{diff} vs {want}")
        # a_3: the (tr L)^2 slot matches directly...
        diff_tr = forms[hi][3]["trL2"] - forms[lo][3]["trL2"]
        add(f"a3[trL2]:{route}", diff_tr == EM_EXACT[3]["trL2"],
            f"{diff_tr}")
        # ...while the det L slot differs by exactly +-(1/2)(4 pi)^-1,
        # which the total-curvature identity turns into the right
        # topological constant.
        diff_det = forms[hi][3]["detL"] - forms[lo][3]["detL"]
        transfer = diff_det - EM_EXACT[3]["detL"]
        want_transfer = _fpm(_gauss_bonnet_transfer(route), -1)
        add(f"a3[detL-transfer]:{route}", transfer == want_transfer,
            f"{transfer} vs {want_transfer}")
        euler = sum(1 - g for g in topology.genera)
        topo = Fraction(_route_a3_constant(route, topology)) \
            + _gauss_bonnet_transfer(route) * euler
        add(f"a3[topology]:{route}", topo == em_topology_term(topology),
            f"{topo} vs {em_topology_term(topology)}")

    # quoted combination lines: in units of (1/64)(4 pi)^-1 the two a_3
    # differences read 3 (tr L)^2 + 28 det L and 3 (tr L)^2 - 36 det L.
    unit = _fpm(Fraction(1, 64), -1)
    for route, want_det in (("p1-p0", 28), ("p2-p3", -36)):
        hi, lo = _ROUTES[route]
        d_tr = forms[hi][3]["trL2"] - forms[lo][3]["trL2"]
        d_det = forms[hi][3]["detL"] - forms[lo][3]["detL"]
        add(f"a3-combination:{route}",
            d_tr == unit * 3 and d_det == unit * want_det,
            f"({d_tr}, {d_det}) vs (3, {want_det}) x {unit}")

    # the electromagnetic a_1 vanishes because both c1 differences do
    for route, (hi, lo) in _ROUTES.items():
        diff = forms[hi][1]["area"] - forms[lo][1]["area"]
        add(f"a1-zero:{route}", diff.is_zero, f"{diff}")

    return checks
