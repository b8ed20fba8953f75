"""Fourier symbols of the interface transmission operators.

Per transverse mode s every operator reduces to a complex number λ(s)
(units 1/length).  This module evaluates all of them: the exact
Dirichlet-to-Neumann maps of a wall-backed strip (soft wall, hard wall,
and the overlap variant with a shortened length), the unbounded-domain
DtN, and the local approximations derived from those maps — the
zeroth-order cotangent constant, the truncated partial-fraction sum, the
pole/residue form of z·cot(z) rescaled to the strip, and the
rotated-branch rational square root.  A constant imaginary shift and a
convex combination with the unbounded approximant compose on top of any
real-valued cavity operator.

Everything here is a pure function of its arguments, safe to call from
any number of threads.  Evaluation at an analytic pole raises PoleHit
rather than returning an infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .rational import PadeCoefficients, pade_cot_coefficients

__all__ = [
    "PoleHit",
    "SymbolValue",
    "ModeFrequency",
    "OperatorSpec",
    "parse_operator",
    "alpha",
    "dtn_cavity_dirichlet",
    "dtn_cavity_neumann",
    "dtn_cavity_overlap",
    "dtn_unbounded",
    "oo0_cavity",
    "oo0_unbounded",
    "ml_symbol",
    "pade_cavity_symbol",
    "pade_unbounded_symbol",
    "apply_spec",
    "DEFAULT_ROTATION",
]

# |sin| (or |cos|) below this at the trigonometric argument counts as a
# pole hit; separates true analytic poles from benign near-resonance.
POLE_TOL = 1e-12
# relative tolerance deciding that a floating s equals the cutoff k
BRANCH_TOL = 1e-14
DEFAULT_ROTATION = math.pi / 4

SymbolValue = complex


class PoleHit(ArithmeticError):
    """Evaluation requested at (or within tolerance of) an analytic pole."""


@dataclass(frozen=True)
class ModeFrequency:
    """Transverse sine mode: index m >= 1, wavenumber s = m*pi/h."""

    m: int
    s: float

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("mode index m must be an integer >= 1")
        if not self.s > 0:
            raise ValueError("transverse wavenumber s must be positive")

    @classmethod
    def from_index(cls, m: int, height: float) -> "ModeFrequency":
        if not height > 0:
            raise ValueError("cavity height must be positive")
        return cls(m, m * math.pi / height)


def _at_cutoff(s: float, k: float) -> bool:
    return s == k or abs(s - k) <= BRANCH_TOL * max(abs(s), abs(k))


def _coth(x: float) -> float:
    """coth(x) for x > 0, exponentially scaled so huge x cannot overflow."""
    if x > 350.0:
        return 1.0
    return 1.0 + 2.0 / math.expm1(2.0 * x)


def alpha(s: float, k: float) -> complex:
    """Longitudinal decay/oscillation rate of mode s.

    -j*sqrt(k^2-s^2) for propagating modes, 0 at cutoff, sqrt(s^2-k^2)
    for evanescent modes.
    """
    if s < 0 or not k > 0:
        raise ValueError("need s >= 0 and k > 0")
    if _at_cutoff(s, k):
        return 0j
    if s < k:
        return -1j * math.sqrt((k - s) * (k + s))
    return complex(math.sqrt((s - k) * (s + k)))


def dtn_cavity_dirichlet(s: float, k: float, l_ji: float) -> SymbolValue:
    """Exact DtN symbol of a strip of length l_ji closed by a soft wall.

    sqrt(k^2-s^2)*cot(l*sqrt(k^2-s^2)) propagating, 1/l at cutoff,
    sqrt(s^2-k^2)*coth(l*sqrt(s^2-k^2)) evanescent.  Purely real.
    """
    if not l_ji > 0:
        raise ValueError("subdomain length must be positive")
    if _at_cutoff(s, k):
        return complex(1.0 / l_ji)
    if s < k:
        kx = math.sqrt((k - s) * (k + s))
        arg = kx * l_ji
        sn = math.sin(arg)
        if abs(sn) < POLE_TOL:
            raise PoleHit(
                f"interior resonance: sqrt(k^2-s^2)*l = {arg:.17g} is a "
                f"multiple of pi for s={s:g}, k={k:g}, l={l_ji:g}"
            )
        return complex(kx * math.cos(arg) / sn)
    a = math.sqrt((s - k) * (s + k))
    return complex(a * _coth(a * l_ji))


def dtn_cavity_neumann(s: float, k: float, l_ji: float) -> SymbolValue:
    """Exact DtN symbol of a strip closed by a hard wall.

    -sqrt(k^2-s^2)*tan(l*sqrt(k^2-s^2)) propagating, 0 at cutoff,
    sqrt(s^2-k^2)*tanh(l*sqrt(s^2-k^2)) evanescent.  Purely real.
    """
    if not l_ji > 0:
        raise ValueError("subdomain length must be positive")
    if _at_cutoff(s, k):
        return 0j
    if s < k:
        kx = math.sqrt((k - s) * (k + s))
        arg = kx * l_ji
        cs = math.cos(arg)
        if abs(cs) < POLE_TOL:
            raise PoleHit(
                f"interior resonance: sqrt(k^2-s^2)*l = {arg:.17g} is an "
                f"odd multiple of pi/2 for s={s:g}, k={k:g}, l={l_ji:g}"
            )
        return complex(-kx * math.sin(arg) / cs)
    a = math.sqrt((s - k) * (s + k))
    return complex(a * math.tanh(a * l_ji))


def dtn_cavity_overlap(s: float, k: float, l_ji_prime: float) -> SymbolValue:
    """Soft-wall DtN symbol with the overlap-shortened length l'_ji.

    Identical to dtn_cavity_dirichlet up to the length substitution; with
    zero overlap the two coincide.
    """
    return dtn_cavity_dirichlet(s, k, l_ji_prime)


def dtn_unbounded(s: float, k: float) -> SymbolValue:
    """DtN symbol of the unbounded half-plane: -j*k*sqrt(1-s^2/k^2).

    The branch makes the value purely negative-imaginary for propagating
    modes and purely real positive (decaying evanescent) above cutoff,
    which is exactly alpha(s).
    """
    return alpha(s, k)


def oo0_cavity(k: float, l_ji: float) -> SymbolValue:
    """Zeroth-order cavity operator: k*cot(k*l_ji), constant in s."""
    if not l_ji > 0:
        raise ValueError("subdomain length must be positive")
    arg = k * l_ji
    sn = math.sin(arg)
    if abs(sn) < POLE_TOL:
        raise PoleHit(f"k*l = {arg:.17g} is a multiple of pi")
    return complex(k * math.cos(arg) / sn)


def oo0_unbounded(k: float) -> SymbolValue:
    """Zeroth-order unbounded operator: -j*k, constant in s."""
    if not k > 0:
        raise ValueError("k must be positive")
    return complex(0.0, -k)


def ml_symbol(s: float, k: float, l_ji: float, n_terms: int) -> SymbolValue:
    """N-term truncated partial-fraction approximation of the soft-wall DtN.

    (1/l)*(1 + 2*sum_{n=1..N} (1-s^2/k^2)/(1-(n*pi/(k*l))^2-s^2/k^2)).
    Its poles coincide with true DtN poles by construction.  At s=k every
    summand's numerator vanishes and the value is exactly 1/l.
    """
    if not l_ji > 0:
        raise ValueError("subdomain length must be positive")
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")
    t = (s / k) ** 2
    num = 1.0 - t
    acc = 1.0
    for n in range(1, n_terms + 1):
        d = 1.0 - (n * math.pi / (k * l_ji)) ** 2 - t
        if abs(d) < POLE_TOL:
            raise PoleHit(
                f"term {n} denominator vanishes at s={s:g} (true DtN pole)"
            )
        acc += 2.0 * num / d
    return complex(acc / l_ji)


def pade_cavity_symbol(
    s: float, k: float, l_ji: float, coeffs: PadeCoefficients
) -> SymbolValue:
    """Pole/residue form of z*cot(z) rescaled to the strip.

    (1/l)*(C0 + sum_n A_n/((k*l)^2*(1-s^2/k^2) - B_n)); the variable
    w = (k*l)^2*(1-s^2/k^2) continues analytically through cutoff into
    the evanescent range.  Summed in the anchored form around the exact
    value 1 at w = 0 (see PadeCoefficients.evaluate) so the large
    constant C0 never enters the floating-point sum.
    """
    if not l_ji > 0:
        raise ValueError("subdomain length must be positive")
    w = (k * l_ji) ** 2 * (1.0 - (s / k) ** 2)
    guard = POLE_TOL * max(1.0, abs(w))
    terms = []
    for a_n, b_n in zip(coeffs.a, coeffs.b):
        d = w - b_n
        if abs(d) < guard:
            raise PoleHit(f"w = {w:.17g} hits decomposition pole {b_n:.17g}")
        terms.append(a_n * w / (d * b_n))
    return complex((1.0 + math.fsum(terms)) / l_ji)


def pade_unbounded_symbol(
    s: float, k: float, n_terms: int, rotation: float = DEFAULT_ROTATION
) -> SymbolValue:
    """Rotated-branch rational approximation of -j*k*sqrt(1-s^2/k^2).

    The N-term real-coefficient square-root approximant
    sqrt(1+Z) ~ 1 + sum_j A_j*Z/(1+B_j*Z) with
    A_j = 2/(2N+1)*sin^2(j*pi/(2N+1)), B_j = cos^2(j*pi/(2N+1)) is
    composed with a branch rotation by `rotation`; the rotation keeps the
    rational function's poles off the evanescent real axis.  Approximately
    pure-imaginary below cutoff and approximately real above.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if not 0.0 <= rotation <= math.pi / 2:
        raise ValueError("rotation must lie in [0, pi/2]")
    if s < 0 or not k > 0:
        raise ValueError("need s >= 0 and k > 0")
    x = -((s / k) ** 2)
    zr = cmath.exp(-1j * rotation) * (1.0 + x) - 1.0
    m = 2 * n_terms + 1
    acc = 1.0 + 0j
    for j in range(1, n_terms + 1):
        a_j = 2.0 / m * math.sin(j * math.pi / m) ** 2
        b_j = math.cos(j * math.pi / m) ** 2
        d = 1.0 + b_j * zr
        if d == 0:
            # only reachable with rotation=0 exactly on the branch cut
            raise PoleHit(f"rational term {j} pole at s={s:g} (rotation 0)")
        acc += a_j * zr / d
    return -1j * k * cmath.exp(1j * rotation / 2) * acc


# --- operator specs and the compact CLI notation ------------------------------

_KINDS = (
    "dtn-c",
    "dtn-c-neumann",
    "dtn-u",
    "oo0-c",
    "oo0-u",
    "ml-c",
    "pade-c",
    "pade-u",
)
_TERMED = ("ml-c", "pade-c", "pade-u")
_MIXABLE = ("oo0-c", "ml-c", "pade-c")


@dataclass(frozen=True)
class OperatorSpec:
    """A transmission operator choice: kind, term count, and the optional
    imaginary-shift (chi) and convex-mixing (epsilon, m_terms) layers."""

    kind: str
    n_terms: int = 0
    chi: float = 0.0
    epsilon: float | None = None
    m_terms: int | None = None
    branch_rotation: float = DEFAULT_ROTATION

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind in _TERMED:
            floor = 0 if self.kind == "ml-c" else 1
            if self.n_terms < floor:
                raise ValueError(f"{self.kind} needs n_terms >= {floor}")
        elif self.n_terms != 0:
            raise ValueError(f"{self.kind} takes no term count")
        if self.chi < 0:
            raise ValueError("chi must be >= 0")
        if (self.epsilon is None) != (self.m_terms is None):
            raise ValueError("mixing needs both epsilon and m_terms")
        if self.epsilon is not None:
            if self.kind not in _MIXABLE:
                raise ValueError(f"mixing is not defined for {self.kind}")
            if not 0.0 < self.epsilon < 1.0:
                raise ValueError("epsilon must lie strictly inside (0,1)")
            if self.m_terms < 1:
                raise ValueError("m_terms must be >= 1")
        if not 0.0 <= self.branch_rotation <= math.pi / 2:
            raise ValueError("branch_rotation must lie in [0, pi/2]")

    def label(self) -> str:
        """Canonical compact string, the inverse of parse_operator."""
        out = self.kind
        if self.kind in _TERMED:
            out += f":{self.n_terms}"
        if self.chi > 0:
            out += f"+r:{self.chi!r}"
        if self.epsilon is not None:
            out += f"+m:{self.epsilon!r}:{self.m_terms}"
        return out


def parse_operator(text: str) -> OperatorSpec:
    """Parse the compact notation: kind[:N][+r:chi][+m:epsilon:M].

    Examples: `dtn-c`, `pade-c:32`, `ml-c:64+m:0.5:4`, `oo0-c+r:0.1`.
    """
    parts = text.strip().split("+")
    head, sep, tail = parts[0].partition(":")
    if head not in _KINDS:
        raise ValueError(f"unknown operator kind {head!r} in {text!r}")
    if head in _TERMED:
        if not sep:
            raise ValueError(f"{head} requires a term count, e.g. {head}:32")
        try:
            n_terms = int(tail)
        except ValueError:
            raise ValueError(f"bad term count {tail!r} in {text!r}") from None
    else:
        if sep:
            raise ValueError(f"{head} takes no term count (got {text!r})")
        n_terms = 0
    chi = 0.0
    epsilon = None
    m_terms = None
    for suffix in parts[1:]:
        fields = suffix.split(":")
        try:
            if fields[0] == "r" and len(fields) == 2:
                chi = float(fields[1])
            elif fields[0] == "m" and len(fields) == 3:
                epsilon = float(fields[1])
                m_terms = int(fields[2])
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"bad operator suffix {suffix!r} in {text!r}") from None
    return OperatorSpec(
        kind=head, n_terms=n_terms, chi=chi, epsilon=epsilon, m_terms=m_terms
    )


def apply_spec(spec: OperatorSpec, s: float, k: float, l_ji: float) -> SymbolValue:
    """Evaluate an operator spec at mode s: kind dispatch, then the
    imaginary shift j*chi*k, then the convex combination with the
    rotated-branch unbounded approximant (in that order)."""
    kind = spec.kind
    if kind == "dtn-c":
        value = dtn_cavity_dirichlet(s, k, l_ji)
    elif kind == "dtn-c-neumann":
        value = dtn_cavity_neumann(s, k, l_ji)
    elif kind == "dtn-u":
        value = dtn_unbounded(s, k)
    elif kind == "oo0-c":
        value = oo0_cavity(k, l_ji)
    elif kind == "oo0-u":
        value = oo0_unbounded(k)
    elif kind == "ml-c":
        value = ml_symbol(s, k, l_ji, spec.n_terms)
    elif kind == "pade-c":
        value = pade_cavity_symbol(s, k, l_ji, pade_cot_coefficients(spec.n_terms))
    else:
        value = pade_unbounded_symbol(s, k, spec.n_terms, spec.branch_rotation)
    if spec.chi > 0.0:
        value = value + 1j * spec.chi * k
    if spec.epsilon is not None:
        value = spec.epsilon * value + (1.0 - spec.epsilon) * pade_unbounded_symbol(
            s, k, spec.m_terms, spec.branch_rotation
        )
    return value
