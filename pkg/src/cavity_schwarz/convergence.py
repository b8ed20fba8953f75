"""Per-mode convergence radius of the two-subdomain transmission iteration.

For a mode frequency s the iteration contracts like |rho(s)| per double sweep,
where rho^2 is a product of four factors built from the transmission symbols
lambda_01, lambda_10 and the exact cavity DtN maps of the two subdomain
widths.  The numerator factors compare each transmission symbol against the
DtN map of the *opposite* subdomain (the map it is trying to imitate), so
exact DtN operators give rho = 0.  The overlapping variant evaluates the
numerator maps at the shrunken widths l' = l - 2*delta and picks up an extra
damping ratio sin/sinh(alpha*l')/sin/sinh(alpha*l) per side.

Everything here is a pure function of floats; modes that land on a subdomain
resonance (a pole of the DtN map) or produce a vanishing denominator are
reported by raising IllPosed rather than returning garbage.
"""

import math
from dataclasses import dataclass

from .symbols import (
    POLE_TOL,
    PoleHit,
    _at_cutoff,
    dtn_cavity_dirichlet,
    dtn_cavity_overlap,
    dtn_unbounded,
)

# relative floor below which a denominator factor counts as a sign change
# through zero; the symbols span many orders of magnitude across modes, so
# an absolute floor would misfire on either end
DENOM_REL_TOL = 1e-14


class IllPosed(ArithmeticError):
    """The radius is undefined: a denominator factor vanishes, the mode sits
    on a subdomain resonance, or an overlap damping ratio hits a sine zero."""


@dataclass(frozen=True)
class RadiusResult:
    """One mode's convergence radius together with its four building blocks.

    numerator_parts is (n01, n10) = (lambda_01 - dtn_10, lambda_10 - dtn_01)
    and denominator_parts is (d01, d10) = (lambda_01 + dtn_01,
    lambda_10 + dtn_10), with the numerator maps taken at the primed widths
    in the overlapping case.
    """

    rho_squared: complex
    rho_abs: float
    numerator_parts: tuple
    denominator_parts: tuple


def _checked_denominator(value, lam, dtn, side):
    scale = abs(lam) + abs(dtn)
    if abs(value) < DENOM_REL_TOL * scale or value == 0:
        raise IllPosed(f"denominator d{side} = {value!r} vanishes "
                       f"(|lambda| + |dtn| = {scale!r})")
    return value


def _assemble(lam01, lam10, dtn01, dtn10, dtn01_num, dtn10_num, damping):
    n01 = lam01 - dtn10_num
    n10 = lam10 - dtn01_num
    d01 = _checked_denominator(lam01 + dtn01, lam01, dtn01, "01")
    d10 = _checked_denominator(lam10 + dtn10, lam10, dtn10, "10")
    rho2 = complex((n01 * n10) / (d01 * d10) * damping)
    return RadiusResult(
        rho_squared=rho2,
        rho_abs=math.sqrt(abs(rho2)),
        numerator_parts=(n01, n10),
        denominator_parts=(d01, d10),
    )


def radius_nonoverlap(lambda01, lambda10, s, k, l01, l10):
    """Convergence radius for touching subdomains of widths l01 and l10."""
    if l01 <= 0 or l10 <= 0:
        raise ValueError("subdomain widths must be positive")
    try:
        dtn01 = dtn_cavity_dirichlet(s, k, l01)
        dtn10 = dtn_cavity_dirichlet(s, k, l10)
    except PoleHit as exc:
        raise IllPosed(f"mode s={s!r} is a subdomain resonance: {exc}") from exc
    return _assemble(lambda01, lambda10, dtn01, dtn10, dtn01, dtn10, 1.0)


def _damping_factor(s, k, l, l_prime):
    # one side's ratio sin(alpha l')/sin(alpha l) (or the sinh / linear
    # analogue); exactly 1.0 when l' == l since both evaluations share floats
    if _at_cutoff(s, k):
        return l_prime / l
    if s < k:
        kx = math.sqrt((k - s) * (k + s))
        denom = math.sin(kx * l)
        if abs(denom) < POLE_TOL:
            raise IllPosed(f"overlap damping pole: sin({kx * l!r}) ~ 0")
        return math.sin(kx * l_prime) / denom
    a = math.sqrt((s - k) * (s + k))
    # sinh(a l')/sinh(a l) = exp(-a(l-l')) (1-exp(-2al'))/(1-exp(-2al)),
    # which neither overflows nor cancels for large a*l
    return (math.exp(-a * (l - l_prime))
            * math.expm1(-2.0 * a * l_prime) / math.expm1(-2.0 * a * l))


def radius_overlap(lambda01, lambda10, s, k, l01, l10, l01_prime, l10_prime):
    """Convergence radius when each subdomain keeps width l_ij but the
    opposing interface sits 2*delta inside it, at l_ij' = l_ij - 2*delta."""
    if not (l01 >= l01_prime > 0 and l10 >= l10_prime > 0):
        raise ValueError("widths must satisfy l_ij >= l_ij' > 0")
    try:
        dtn01 = dtn_cavity_dirichlet(s, k, l01)
        dtn10 = dtn_cavity_dirichlet(s, k, l10)
        dtn01p = dtn_cavity_overlap(s, k, l01_prime)
        dtn10p = dtn_cavity_overlap(s, k, l10_prime)
    except PoleHit as exc:
        raise IllPosed(f"mode s={s!r} is a subdomain resonance: {exc}") from exc
    damping = (_damping_factor(s, k, l10, l10_prime)
               * _damping_factor(s, k, l01, l01_prime))
    return _assemble(lambda01, lambda10, dtn01, dtn10, dtn01p, dtn10p, damping)


def n_min_pole(l_ij, lambda_w):
    """Minimum pole count for the rational symbol to resolve a subdomain of
    width l_ij at wavelength lambda_w: ceil(2 l_ij / lambda_w)."""
    if l_ij <= 0 or lambda_w <= 0:
        raise ValueError("length and wavelength must be positive")
    return math.ceil(2.0 * l_ij / lambda_w)


def symbol_gap(s, k, l_ji):
    """Difference between the cavity and unbounded DtN symbols.

    Above cutoff the direct subtraction loses all significant digits once
    the gap drops below machine precision times the symbols, so the closed
    form 2a/(exp(2 l a) - 1) with a = sqrt(s^2 - k^2) is used instead.
    """
    if _at_cutoff(s, k):
        return 1.0 / l_ji
    if s < k:
        return dtn_cavity_dirichlet(s, k, l_ji) - dtn_unbounded(s, k)
    a = math.sqrt((s - k) * (s + k))
    x = 2.0 * l_ji * a
    if x > 700.0:
        # expm1 would overflow; exp(-x) underflows gracefully toward 0
        return 2.0 * a * math.exp(-x)
    return 2.0 * a / math.expm1(x)
