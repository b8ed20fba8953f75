"""Pole/residue decomposition of z*cot(z) via its continued fraction.

The pipeline: run the three-term recurrence on continued-fraction
coefficients to build a rational approximant A_m/B_m with exact integer
coefficients in w = z^2, long-divide to split off the constant part,
locate the denominator roots with a simultaneous Ehrlich-Aberth iteration
at extended precision, and attach one residue per root.  The result is the
N-term form

    z*cot(z)  ~=  c0 + sum_i a_i / (w - b_i),      w = z^2,

which downstream code rescales into transmission-operator symbols.  The
same recurrence machinery covers the z*tan(z) continued fraction, and the
module also provides the truncated partial-fraction (Mittag-Leffler) term
data for both cot and tan.

Coefficient growth along the recurrence is factorial, so polynomials are
kept in exact rational arithmetic; floating point enters only at the
root-finding and residue stage, at a configurable binary precision.
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

__all__ = [
    "PrecisionExhausted",
    "RootFindingFailed",
    "DegeneratePole",
    "PolynomialW",
    "PadeCoefficients",
    "MittagLefflerTerms",
    "cot_rule",
    "tan_rule",
    "cfrac_rational",
    "poly_long_division",
    "poly_roots_aberth",
    "residues",
    "pade_cot_coefficients",
    "ml_cot_terms",
    "ml_tan_terms",
    "write_table_file",
    "read_table_file",
]

PRECISION_CAP_BITS = 16384


class PrecisionExhausted(ArithmeticError):
    """Escalation reached the precision cap without meeting the target."""


class RootFindingFailed(ArithmeticError):
    """Aberth iteration did not reach the residual target."""


class DegeneratePole(ArithmeticError):
    """Residue requested at a (numerically) repeated denominator root."""


def _as_exact(value):
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"exact rational coefficient expected, got {type(value)!r}")


@dataclass(frozen=True)
class PolynomialW:
    """Polynomial in w = z^2 with exact rational coefficients (ascending)."""

    coefficients: tuple
    precision_bits: int = 64

    def __post_init__(self):
        coeffs = [_as_exact(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        object.__setattr__(self, "coefficients", tuple(coeffs))
        if self.precision_bits < 1:
            raise ValueError("precision_bits must be positive")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coefficients[0] == 0

    def __call__(self, w):
        acc = 0 * w if not isinstance(w, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * w + c
        return acc

    def derivative(self) -> "PolynomialW":
        if self.degree == 0:
            return PolynomialW((Fraction(0),), self.precision_bits)
        d = tuple(i * c for i, c in enumerate(self.coefficients) if i > 0)
        return PolynomialW(d, self.precision_bits)

    def __add__(self, other: "PolynomialW") -> "PolynomialW":
        n = max(len(self.coefficients), len(other.coefficients))
        a = list(self.coefficients) + [Fraction(0)] * (n - len(self.coefficients))
        b = list(other.coefficients) + [Fraction(0)] * (n - len(other.coefficients))
        bits = max(self.precision_bits, other.precision_bits)
        return PolynomialW(tuple(x + y for x, y in zip(a, b)), bits)

    def __sub__(self, other: "PolynomialW") -> "PolynomialW":
        return self + other.scale(-1)

    def scale(self, factor) -> "PolynomialW":
        f = _as_exact(factor)
        return PolynomialW(tuple(f * c for c in self.coefficients), self.precision_bits)

    def __mul__(self, other: "PolynomialW") -> "PolynomialW":
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, ci in enumerate(self.coefficients):
            if ci == 0:
                continue
            for j, cj in enumerate(other.coefficients):
                out[i + j] += ci * cj
        bits = max(self.precision_bits, other.precision_bits)
        return PolynomialW(tuple(out), bits)

    def with_precision(self, bits: int) -> "PolynomialW":
        return PolynomialW(self.coefficients, bits)


def _poly(coeffs: Sequence, bits: int = 64) -> PolynomialW:
    return PolynomialW(tuple(coeffs), bits)


# --- continued-fraction coefficient rules -----------------------------------

def cot_rule():
    """b0 and the a_n/b_n rule for the z*cot(z) continued fraction.

    b0 = 1, a_n = -w, b_n = 2n+1, giving the classic
    z*cot(z) = 1 - w/(3 - w/(5 - w/(7 - ...))) with w = z^2.
    """
    b0 = _poly([1])

    def a(n: int) -> PolynomialW:
        return _poly([0, -1])

    def b(n: int) -> PolynomialW:
        return _poly([2 * n + 1])

    return b0, a, b


def tan_rule():
    """b0 and the a_n/b_n rule for the z*tan(z) continued fraction.

    b0 = 0, a_1 = +w, a_n = -w afterwards, b_n = 2n-1, giving
    z*tan(z) = w/(1 - w/(3 - w/(5 - ...))).
    """
    b0 = _poly([0])

    def a(n: int) -> PolynomialW:
        return _poly([0, 1]) if n == 1 else _poly([0, -1])

    def b(n: int) -> PolynomialW:
        return _poly([2 * n - 1])

    return b0, a, b


def cfrac_rational(
    b0: PolynomialW,
    a_seq: Callable[[int], PolynomialW],
    b_seq: Callable[[int], PolynomialW],
    depth: int,
) -> tuple[PolynomialW, PolynomialW]:
    """Numerator/denominator pair of a truncated continued fraction.

    Runs A_m = b_m*A_{m-1} + a_m*A_{m-2} (same for B) with seeds
    A_0 = b0, B_0 = 1, A_1 = b_1*b0 + a_1, B_1 = b_1, and returns
    (A_depth, B_depth).  Exact arithmetic; cannot lose precision, so
    PrecisionExhausted is unreachable on this path by construction.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    one = _poly([1], b0.precision_bits)
    a_prev2, b_prev2 = b0, one
    a_prev = b_seq(1) * b0 + a_seq(1)
    b_prev = b_seq(1)
    for m in range(2, depth + 1):
        am, bm = a_seq(m), b_seq(m)
        a_cur = bm * a_prev + am * a_prev2
        b_cur = bm * b_prev + am * b_prev2
        a_prev2, a_prev = a_prev, a_cur
        b_prev2, b_prev = b_prev, b_cur
    return a_prev, b_prev


def poly_long_division(
    numer: PolynomialW, denom: PolynomialW
) -> tuple[PolynomialW, PolynomialW]:
    """Exact division: numer = quotient*denom + remainder."""
    if denom.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if numer.degree < denom.degree:
        raise ValueError("numerator degree must be >= denominator degree")
    bits = max(numer.precision_bits, denom.precision_bits)
    rem = list(numer.coefficients)
    dc = denom.coefficients
    dn = denom.degree
    quot = [Fraction(0)] * (len(rem) - dn)
    for top in range(len(rem) - 1, dn - 1, -1):
        factor = rem[top] / dc[-1]
        quot[top - dn] = factor
        if factor != 0:
            for j in range(dn + 1):
                rem[top - dn + j] -= factor * dc[j]
    return _poly(quot, bits), _poly(rem[:dn] or [0], bits)


# --- root finding ------------------------------------------------------------

_ABERTH_SEED = 271828


def _to_mp(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator)
    return mpmath.mpmathify(value)


def _horner_pair(coeffs, z):
    """Evaluate p(z) and p'(z) in one sweep."""
    p = coeffs[-1]
    dp = mpmath.mpc(0)
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _start_angles(n):
    """Jittered circle angles, fixed seed so runs are reproducible."""
    rng = random.Random(_ABERTH_SEED)
    return [
        2 * math.pi * i / n + 0.4 + (rng.random() - 0.5) * math.pi / n
        for i in range(n)
    ]


def _to_extended(value):
    """mpmath scalar to numpy extended-precision complex, via strings so
    exponents beyond the double range survive the conversion."""
    re = np.longdouble(mpmath.nstr(mpmath.re(value), 25))
    im = np.longdouble(mpmath.nstr(mpmath.im(value), 25))
    return np.clongdouble(re + 1j * im)


def _newton_polygon_radii(logmags, n):
    """Per-root starting radii from the Newton polygon.

    The upper convex hull of the points (k, log|c_k|) splits the index
    range into segments; a segment of horizontal extent m contributes m
    roots whose moduli are all near exp(-slope).  Starting each point at
    its own magnitude class is what lets the simultaneous iteration cope
    with roots spread over many decades, where a single starting circle
    cycles essentially forever.  Returns n radii in ascending order.
    """
    pts = [(k, lm) for k, lm in enumerate(logmags) if lm is not None]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    radii = []
    for (k1, y1), (k2, y2) in zip(hull, hull[1:]):
        r = math.exp(min(max((y1 - y2) / (k2 - k1), -690.0), 690.0))
        radii.extend([r] * (k2 - k1))
    if len(radii) < n:
        radii.extend([radii[-1] if radii else 1.0] * (n - len(radii)))
    return radii[:n]


def _float_walk_in(coeffs_mp, n, bound):
    """Vectorized extended-precision Aberth pass in root-rescaled coordinates.

    Dividing out the leading coefficient and substituting w = bound * u
    turns the coefficients into elementary symmetric functions of the
    rescaled roots, which are bounded above by binomials.  Below they can
    still underflow doubles when the roots span many decades (the product
    of all rescaled roots), so the pass runs in numpy extended precision,
    whose exponent range covers that comfortably on x86.  Returns unscaled
    positions as mpmath numbers, or None when the scaled coefficients do
    not fit even there (caller falls back to the slow path).
    """
    lead = coeffs_mp[-1]
    scaled = []
    logmags = []
    for k, c in enumerate(coeffs_mp):
        val = mpmath.mpc(c) / (lead * bound ** (n - k))
        f = _to_extended(val)
        if not np.isfinite(f) or (f == 0 and val != 0):
            return None
        scaled.append(f)
        logmags.append(float(mpmath.log(abs(val))) if val != 0 else None)
    q = np.array(scaled, dtype=np.clongdouble)
    radii = np.array(_newton_polygon_radii(logmags, n), dtype=np.longdouble)
    z = radii * np.exp(1j * np.array(_start_angles(n))).astype(np.clongdouble)
    eps = np.longdouble("1e-16")
    floor = np.longdouble("1e-4000")
    for _ in range(800):
        pv = np.full(n, q[-1], dtype=np.clongdouble)
        dpv = np.zeros(n, dtype=np.clongdouble)
        for c in q[-2::-1]:
            dpv = dpv * z + pv
            pv = pv * z + c
        with np.errstate(all="ignore"):
            newton = np.where(dpv != 0, pv / dpv, 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = (1.0 / diff).sum(axis=1)
            denom = 1.0 - newton * repulsion
            step = np.where(denom != 0, newton / denom, newton)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if not np.all(np.isfinite(z)):
            return None
        if np.all(np.abs(step) <= eps * np.maximum(np.abs(z), floor)):
            break
    return [mpmath.mpc(complex(v)) * bound for v in z]


def _aberth_polish(coeffs, z, n, bits, max_sweeps):
    """Aberth sweeps at one precision level, settling on step size.

    Intermediate ladder stages only hand positions forward, so position
    convergence (steps down near the stage noise floor) is the right test;
    residuals of ill-conditioned polynomials cannot be pushed below the
    evaluation noise at this precision anyway.  A root whose best step has
    stopped halving while already small is pinned at that floor and stops
    iterating, so a stage costs a handful of sweeps after a good handoff
    while still allowing long migrations when the handoff was poor.
    """
    tiny = mpmath.mpf(2) ** (-bits)
    settle = mpmath.mpf(2) ** (8 - bits)
    half = mpmath.mpf("0.5")
    near = mpmath.mpf("1e-3")
    done = [False] * n
    best_step = [mpmath.inf] * n
    no_improve = [0] * n
    for _ in range(max_sweeps):
        for i in range(n):
            if done[i]:
                continue
            pv, dpv = _horner_pair(coeffs, z[i])
            if abs(dpv) == 0:
                z[i] = z[i] * (1 + tiny) + tiny
                continue
            newton = pv / dpv
            s = mpmath.mpc(0)
            for j in range(n):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = tiny * (1 + abs(z[i]))
                    s += 1 / diff
            denom = 1 - newton * s
            step = newton if denom == 0 else newton / denom
            z[i] = z[i] - step
            moved = abs(step)
            zscale = max(abs(z[i]), mpmath.mpf(1))
            if moved <= settle * zscale:
                done[i] = True
                continue
            if moved < half * best_step[i]:
                best_step[i] = moved
                no_improve[i] = 0
            else:
                if moved <= near * zscale:
                    no_improve[i] += 1
                    if no_improve[i] >= 4:
                        done[i] = True
                else:
                    no_improve[i] = 0
                best_step[i] = min(best_step[i], moved)
        if all(done):
            return


def _aberth_final(coeffs, z, n, target, max_iterations, bits):
    """Aberth sweeps at the final precision; returns True if all roots meet
    the residual target |p(z)| <= target * |p'(z)| * max(1, |z|), False on
    stagnation or sweep exhaustion.

    A converging root at least halves its step every sweep (Newton is
    quadratic); a root whose best step has stopped improving while already
    small relative to its position is pinned at the evaluation noise floor.
    Once every unsettled root is pinned no amount of further sweeping
    helps, so the stage reports failure early and lets the caller escalate
    precision.
    """
    tiny = mpmath.mpf(2) ** (-bits)
    half = mpmath.mpf("0.5")
    near = mpmath.mpf("1e-3")
    settled = [False] * n
    best_step = [mpmath.inf] * n
    no_improve = [0] * n
    for _ in range(max_iterations):
        for i in range(n):
            if settled[i]:
                continue
            pv, dpv = _horner_pair(coeffs, z[i])
            scale = abs(dpv) * max(abs(z[i]), mpmath.mpf(1))
            if abs(pv) <= target * scale:
                settled[i] = True
                continue
            if abs(dpv) == 0:
                z[i] = z[i] * (1 + tiny) + tiny
                continue
            newton = pv / dpv
            s = mpmath.mpc(0)
            for j in range(n):
                if j != i:
                    diff = z[i] - z[j]
                    if diff == 0:
                        diff = tiny * (1 + abs(z[i]))
                    s += 1 / diff
            denom = 1 - newton * s
            step = newton if denom == 0 else newton / denom
            z[i] = z[i] - step
            moved = abs(step)
            if moved < half * best_step[i]:
                best_step[i] = moved
                no_improve[i] = 0
            else:
                if moved <= near * max(abs(z[i]), mpmath.mpf(1)):
                    no_improve[i] += 1
                else:
                    no_improve[i] = 0
                best_step[i] = min(best_step[i], moved)
        if all(settled):
            return True
        if all(settled[i] or no_improve[i] >= 5 for i in range(n)):
            return False
    return False


def poly_roots_aberth(
    p: PolynomialW,
    residual_target: float = 1e-30,
    max_iterations: int = 1000,
) -> list:
    """All roots of p by simultaneous Ehrlich-Aberth iteration.

    Starts from a circle whose radius is the Fujiwara root bound, angles
    jittered by a fixed-seed PRNG so runs are reproducible.  The expensive
    walk-in runs vectorized in double precision on a root-rescaled copy of
    the polynomial; positions are then refined through a doubling precision
    ladder up to p.precision_bits, where a root counts as converged when
    |p(z)| <= residual_target * |p'(z)| * max(1, |z|).  Returns mpmath
    complex roots sorted by (real, imag).
    """
    n = p.degree
    if n < 1:
        raise ValueError("degree must be >= 1")
    if p.coefficients[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    with mpmath.workprec(128):
        coeffs128 = [_to_mp(c) for c in p.coefficients]
        lead = abs(coeffs128[-1])
        bound = 2 * max(
            mpmath.root(abs(coeffs128[n - k]) / lead, k)
            for k in range(1, n + 1)
        )
        bound = max(bound, mpmath.mpf(1))
        z = _float_walk_in(coeffs128, n, bound)
        if z is None:
            z = [
                bound * mpmath.exp(1j * mpmath.mpf(theta))
                for theta in _start_angles(n)
            ]
    ladder = [min(64, p.precision_bits)]
    while ladder[-1] < p.precision_bits:
        ladder.append(min(2 * ladder[-1], p.precision_bits))
    # Rungs refine what their precision can reach and hand the rest on; a
    # root whose local conditioning exceeds the rung's resolution cannot
    # improve there no matter how long it sweeps, so rungs get a short
    # fixed budget and the final stage absorbs any leftover migration.
    for bits in ladder[:-1]:
        with mpmath.workprec(bits):
            coeffs = [_to_mp(c) for c in p.coefficients]
            z = [mpmath.mpc(v) for v in z]
            _aberth_polish(coeffs, z, n, bits, 16)
    bits = ladder[-1]
    with mpmath.workprec(bits):
        coeffs = [_to_mp(c) for c in p.coefficients]
        z = [mpmath.mpc(v) for v in z]
        ok = _aberth_final(
            coeffs, z, n, mpmath.mpf(residual_target), max_iterations, bits
        )
        if not ok:
            raise RootFindingFailed(
                f"Aberth did not reach residual {residual_target:g} "
                f"for degree {n} at {p.precision_bits} bits"
            )
        return sorted(z, key=lambda r: (mpmath.re(r), mpmath.im(r)))


def residues(
    remainder: PolynomialW,
    denom: PolynomialW,
    poles: Sequence,
) -> list[float]:
    """Residues a_i = remainder(b_i)/denom'(b_i) at simple poles b_i."""
    bits = max(remainder.precision_bits, denom.precision_bits)
    dpoly = denom.derivative()
    out = []
    with mpmath.workprec(bits):
        rem_c = [_to_mp(c) for c in remainder.coefficients]
        der_c = [_to_mp(c) for c in dpoly.coefficients]
        for pole in poles:
            zp = _to_mp(pole)
            dval = rem_c[-1]
            for c in reversed(rem_c[:-1]):
                dval = dval * zp + c
            dder = der_c[-1]
            for c in reversed(der_c[:-1]):
                dder = dder * zp + c
            scale = sum(abs(c) * max(abs(zp), mpmath.mpf(1)) ** i
                        for i, c in enumerate(der_c))
            if abs(dder) <= mpmath.mpf(2) ** (-bits // 2) * max(scale, mpmath.mpf(1)):
                raise DegeneratePole(f"denominator derivative vanishes at {pole}")
            out.append(float(mpmath.re(dval / dder)))
    return out


# --- N-term decomposition of z*cot(z) ----------------------------------------

@dataclass(frozen=True)
class PadeCoefficients:
    """Constant + pole/residue data for the N-term z*cot(z) approximant."""

    n_terms: int
    c0: float
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        if len(self.a) != self.n_terms or len(self.b) != self.n_terms:
            raise ValueError("coefficient lists must have n_terms entries")
        if any(not math.isfinite(x) for x in (self.c0, *self.a, *self.b)):
            raise ValueError("coefficients must be finite")
        if any(x <= 0 for x in self.b):
            raise ValueError("pole locations must be positive")
        if any(y <= x for x, y in zip(self.b, self.b[1:])):
            raise ValueError("pole locations must be strictly increasing")

    def evaluate(self, w):
        """The decomposition value c0 + sum_i a_i/(w - b_i) at real or
        complex w, computed in the anchored form

            1 + sum_i a_i * w / ((w - b_i) * b_i).

        Both forms agree exactly for the underlying rational (it equals 1
        at w = 0, so c0 == 1 + sum_i a_i/b_i), but the anchored sum never
        touches the constant c0 = (N+1)(2N+1), whose rounding otherwise
        caps the accuracy near 1e-14 once N reaches 8 or so."""
        if isinstance(w, complex):
            acc = 1.0 + 0j
            for ai, bi in zip(self.a, self.b):
                acc = acc + ai * w / ((w - bi) * bi)
            return acc
        return 1.0 + math.fsum(
            ai * w / ((w - bi) * bi) for ai, bi in zip(self.a, self.b)
        )


def check_pole_brackets(coeffs: PadeCoefficients) -> None:
    """Location check for the decomposition poles.

    Every sqrt(b_i) sits at or above its limit (i+1)*pi and converges onto
    it from above as N grows, so the lower bound holds for all poles.  The
    upper bound (i+2)*pi only holds once a pole has converged; the slow
    tail (empirically i >~ 2N/3) overshoots it, so it is enforced for the
    front half only.
    """
    for i, bi in enumerate(coeffs.b):
        root = math.sqrt(bi)
        if root < (i + 1) * math.pi * (1 - 1e-12):
            raise RootFindingFailed(f"pole {i} at sqrt(b)={root:g} below (i+1)*pi")
        if 2 * i < coeffs.n_terms and root >= (i + 2) * math.pi:
            raise RootFindingFailed(f"pole {i} at sqrt(b)={root:g} above bracket")


_coeff_cache: dict[tuple[int, int], PadeCoefficients] = {}
_cache_lock = threading.Lock()


def _compute_pade_cot(n_terms: int, bits: int) -> PadeCoefficients:
    b0, a_seq, b_seq = cot_rule()
    numer, denom = cfrac_rational(
        b0.with_precision(bits), a_seq, b_seq, depth=2 * n_terms
    )
    if denom.degree != n_terms:
        raise ValueError(
            f"denominator degree {denom.degree} != {n_terms}; recurrence broken"
        )
    quot, rem = poly_long_division(numer, denom)
    if quot.degree != 0:
        raise ValueError("quotient of the cot pipeline must be constant")
    roots = poly_roots_aberth(denom.with_precision(bits))
    with mpmath.workprec(bits):
        real_tol = mpmath.mpf(10) ** (-25)
        for r in roots:
            if abs(mpmath.im(r)) > real_tol * max(abs(mpmath.re(r)), mpmath.mpf(1)):
                raise RootFindingFailed(f"non-real root {r} for the cot denominator")
        poles = [mpmath.re(r) for r in roots]
    res = residues(rem.with_precision(bits), denom.with_precision(bits), poles)
    coeffs = PadeCoefficients(
        n_terms=n_terms,
        c0=float(quot.coefficients[0]),
        a=tuple(res),
        b=tuple(float(p) for p in poles),
    )
    check_pole_brackets(coeffs)
    return coeffs


def pade_cot_coefficients(
    n_terms: int, precision_bits: int | None = None
) -> PadeCoefficients:
    """N-term pole/residue decomposition of z*cot(z), memoized per N.

    Working precision starts at max(64, 8*N) bits and doubles whenever the
    root finder misses its residual target, up to a 16384-bit cap.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    bits = precision_bits if precision_bits is not None else max(64, 8 * n_terms)
    if bits < 64:
        raise ValueError("precision_bits must be >= 64")
    key = (n_terms, bits)
    with _cache_lock:
        hit = _coeff_cache.get(key)
        if hit is not None:
            return hit
        current = bits
        while True:
            try:
                coeffs = _compute_pade_cot(n_terms, current)
                break
            except RootFindingFailed:
                if current >= PRECISION_CAP_BITS:
                    raise PrecisionExhausted(
                        f"no convergence for N={n_terms} at the "
                        f"{PRECISION_CAP_BITS}-bit cap"
                    )
                current = min(2 * current, PRECISION_CAP_BITS)
        _coeff_cache[key] = coeffs
        return coeffs


# --- truncated partial-fraction (Mittag-Leffler) term data -------------------

@dataclass(frozen=True)
class MittagLefflerTerms:
    """Shared prefactor and pole locations (in the x^2 = k^2-s^2 variable)."""

    kind: str
    prefactor: float
    poles: tuple[float, ...]


def ml_cot_terms(n_terms: int, length: float, k: float) -> MittagLefflerTerms:
    """Term data for the truncated x*cot(length*x) partial-fraction sum.

    Poles sit at x^2 = (n*pi/length)^2 for n = 1..N; prefactor 1/length.
    k is accepted for interface symmetry with the symbol evaluation and
    only validated, since pole locations do not depend on it.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")
    if length <= 0 or k <= 0:
        raise ValueError("length and k must be positive")
    poles = tuple((n * math.pi / length) ** 2 for n in range(1, n_terms + 1))
    return MittagLefflerTerms(kind="cot", prefactor=1.0 / length, poles=poles)


def ml_tan_terms(n_terms: int, length: float) -> MittagLefflerTerms:
    """Term data for the truncated x*tan(length*x) partial-fraction sum.

    Poles sit at x^2 = ((n+1/2)*pi/length)^2 for n = 0..N-1; the sum carries
    the prefactor -2/length.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")
    if length <= 0:
        raise ValueError("length must be positive")
    poles = tuple(
        ((n + 0.5) * math.pi / length) ** 2 for n in range(n_terms)
    )
    return MittagLefflerTerms(kind="tan", prefactor=-2.0 / length, poles=poles)


# --- plain-text coefficient table --------------------------------------------

def write_table_file(path, table: Sequence[PadeCoefficients]) -> None:
    """One line per N: `N c0 a_1..a_N b_1..b_N` at 17 significant digits."""
    lines = []
    for c in sorted(table, key=lambda t: t.n_terms):
        fields = [str(c.n_terms), f"{c.c0:.17g}"]
        fields += [f"{x:.17g}" for x in c.a]
        fields += [f"{x:.17g}" for x in c.b]
        lines.append(" ".join(fields))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_table_file(path) -> dict[int, PadeCoefficients]:
    out: dict[int, PadeCoefficients] = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            n = int(parts[0])
            vals = [float(x) for x in parts[1:]]
            if len(vals) != 1 + 2 * n:
                raise ValueError(f"malformed table row for N={n}")
            out[n] = PadeCoefficients(
                n_terms=n,
                c0=vals[0],
                a=tuple(vals[1 : 1 + n]),
                b=tuple(vals[1 + n :]),
            )
    return out
