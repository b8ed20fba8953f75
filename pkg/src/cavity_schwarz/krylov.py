"""GMRES over the interface system and spectra of the iteration operator.

The interface fixed point d = A d + b is solved as (I - A) d = b with
GMRES without restart, matrix-free: the only access to A is through
`schwarz.apply_A`.  Orthogonalization is selectable between classical and
modified Gram-Schmidt because the difference between the two is itself a
result we reproduce; neither variant reorthogonalizes.

The spectrum path exploits block diagonality over modes: applying A to a
vector that carries a unit entry in the same slot of every mode block
fills one column of every block at once, so a D-subdomain spectrum costs
2(D-1) operator applications regardless of the mode count.  Eigenvalues
of each dense block F = I - A_m come from our own Hessenberg + shifted
QR loop; blocks of size at most 4 can fall back to the characteristic
polynomial and the Aberth solver from `rational` if QR stalls.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .rational import _aberth_final, _start_angles
from .schwarz import CavityConfig, InterfaceState, Partition, apply_A, build_rhs, mode_set

__all__ = [
    "GmresReport",
    "MaxIterations",
    "QRNoConvergence",
    "SpectrumResult",
    "gmres",
    "interface_system",
    "spectrum",
]

_EPS = float(np.finfo(float).eps)
_ORTHO_KINDS = ("classical", "modified")


class QRNoConvergence(ArithmeticError):
    """The shifted QR sweep cap was reached before full deflation."""


class MaxIterations(RuntimeWarning):
    """Marker category: gmres hit max_iter; the best iterate is still returned."""


@dataclass
class GmresReport:
    """Outcome of one GMRES run."""

    iterations: int
    residual_history: list
    converged: bool
    ortho: str

    def __post_init__(self):
        if self.ortho not in _ORTHO_KINDS:
            raise ValueError(f"unknown orthogonalization {self.ortho!r}")
        if not self.residual_history or self.residual_history[0] != 1.0:
            raise ValueError("residual history must start at 1 (zero initial guess)")


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalues of F = I - A, all per-mode blocks concatenated in mode order."""

    eigenvalues: tuple
    block_size: int

    def mode_block(self, mode_index: int) -> tuple:
        lo = mode_index * self.block_size
        return self.eigenvalues[lo:lo + self.block_size]


def _givens(a: complex, b: complex):
    """Rotation (c real, s) with c*a + s*b real-positive-ish and -conj(s)*a + c*b = 0."""
    if b == 0:
        return 1.0, 0.0 + 0.0j
    if a == 0:
        return 0.0, complex(b.conjugate() / abs(b))
    r = math.hypot(abs(a), abs(b))
    c = abs(a) / r
    s = (a / abs(a)) * complex(b).conjugate() / r
    return c, s


def gmres(apply_op, b, tol: float = 1e-6, ortho: str = "modified",
          max_iter: int | None = None, basis_sink: list | None = None):
    """Solve (I - A) x = b from a zero initial guess, A applied via apply_op.

    Returns (solution, GmresReport).  Happy breakdown counts as convergence;
    when max_iter is exhausted the best available iterate is returned with
    converged = False.  basis_sink, when given, receives the Krylov basis
    vectors as they are produced (a diagnostics hook, not part of the math).
    """
    if ortho not in _ORTHO_KINDS:
        raise ValueError(f"unknown orthogonalization {ortho!r}")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie strictly between 0 and 1")
    rhs = np.asarray(b, dtype=complex)
    if rhs.ndim != 1:
        raise ValueError("right-hand side must be a vector")
    if not np.all(np.isfinite(rhs.view(float))):
        raise ValueError("right-hand side must be finite")
    beta = float(np.linalg.norm(rhs))
    if beta == 0.0:
        raise ValueError("zero right-hand side: the relative residual is undefined")
    n = rhs.shape[0]
    if max_iter is None:
        max_iter = n
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    basis = [rhs / beta]
    if basis_sink is not None:
        basis_sink.append(basis[0].copy())
    hess = np.zeros((max_iter + 1, max_iter), dtype=complex)
    rotations = []
    g = np.zeros(max_iter + 1, dtype=complex)
    g[0] = beta
    history = [1.0]
    converged = False
    steps = 0

    for j in range(max_iter):
        steps = j + 1
        w = basis[j] - apply_op(basis[j])
        w_scale = float(np.linalg.norm(w))
        if ortho == "classical":
            coeffs = np.array([np.vdot(v, w) for v in basis])
            for i, v in enumerate(basis):
                w = w - coeffs[i] * v
            hess[:j + 1, j] = coeffs
        else:
            for i, v in enumerate(basis):
                h = np.vdot(v, w)
                w = w - h * v
                hess[i, j] = h
        h_next = float(np.linalg.norm(w))
        hess[j + 1, j] = h_next

        for i, (c, s) in enumerate(rotations):
            hi, hj = hess[i, j], hess[i + 1, j]
            hess[i, j] = c * hi + s * hj
            hess[i + 1, j] = -s.conjugate() * hi + c * hj
        c, s = _givens(hess[j, j], hess[j + 1, j])
        rotations.append((c, s))
        hess[j, j] = c * hess[j, j] + s * hess[j + 1, j]
        hess[j + 1, j] = 0.0
        g[j + 1] = -s.conjugate() * g[j]
        g[j] = c * g[j]

        rel = abs(g[j + 1]) / beta
        history.append(float(rel))
        happy = h_next <= 1e-14 * max(w_scale, 1.0)
        if rel <= tol or happy:
            converged = True
            break
        basis.append(w / h_next)
        if basis_sink is not None:
            basis_sink.append(basis[-1].copy())

    if not converged:
        warnings.warn(
            f"gmres stopped at max_iter={max_iter} with relative residual "
            f"{history[-1]:.3e}; returning the best iterate", MaxIterations,
            stacklevel=2)
    y = np.zeros(steps, dtype=complex)
    for i in range(steps - 1, -1, -1):
        acc = g[i] - hess[i, i + 1:steps] @ y[i + 1:steps]
        y[i] = acc / hess[i, i]
    x = np.zeros_like(rhs)
    for i in range(steps):
        x = x + y[i] * basis[i]
    return x, GmresReport(iterations=steps, residual_history=history,
                          converged=converged, ortho=ortho)


def interface_system(cfg: CavityConfig, part: Partition, specs):
    """Vector-space view of the interface problem: (apply_op, b) for gmres."""
    rhs = build_rhs(cfg, part, specs)

    def apply_op(v):
        state = InterfaceState(np.array(v, dtype=complex),
                               rhs.n_modes, rhs.n_interfaces)
        return apply_A(state, cfg, part, specs).values

    return apply_op, rhs.values.copy()


# --- dense eigenvalues of the per-mode blocks --------------------------------------

def _hessenberg(mat: np.ndarray) -> np.ndarray:
    h = np.array(mat, dtype=complex)
    n = h.shape[0]
    for col in range(n - 2):
        x = h[col + 1:, col]
        nx = float(np.linalg.norm(x))
        if nx == 0.0:
            continue
        v = x.copy()
        phase = v[0] / abs(v[0]) if v[0] != 0 else 1.0
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        h[col + 1:, :] -= 2.0 * np.outer(v, v.conjugate() @ h[col + 1:, :])
        h[:, col + 1:] -= 2.0 * np.outer(h[:, col + 1:] @ v, v.conjugate())
        h[col + 2:, col] = 0.0
    return h


def _eig2(block: np.ndarray):
    a, bb = block[0, 0], block[0, 1]
    c, d = block[1, 0], block[1, 1]
    mid = (a + d) / 2.0
    disc = cmath.sqrt((a - d) * (a - d) / 4.0 + bb * c)
    return [mid + disc, mid - disc]


def _wilkinson_shift(block: np.ndarray) -> complex:
    lam1, lam2 = _eig2(block)
    d = block[1, 1]
    return lam1 if abs(lam1 - d) <= abs(lam2 - d) else lam2


def _qr_eigenvalues(hess: np.ndarray, sweep_cap: int) -> list:
    h = np.array(hess, dtype=complex)
    n = h.shape[0]
    out = []
    hi = n
    sweeps = 0
    while hi > 0:
        for i in range(1, hi):
            if abs(h[i, i - 1]) <= _EPS * (abs(h[i - 1, i - 1]) + abs(h[i, i])):
                h[i, i - 1] = 0.0
        if hi == 1 or h[hi - 1, hi - 2] == 0:
            out.append(complex(h[hi - 1, hi - 1]))
            hi -= 1
            continue
        if hi == 2 or h[hi - 2, hi - 3] == 0:
            out.extend(complex(v) for v in _eig2(h[hi - 2:hi, hi - 2:hi]))
            hi -= 2
            continue
        sweeps += 1
        if sweeps > sweep_cap:
            raise QRNoConvergence(
                f"no deflation after {sweep_cap} shifted QR sweeps (n={n})")
        lo = 0
        for i in range(hi - 1, 0, -1):
            if h[i, i - 1] == 0:
                lo = i
                break
        mu = _wilkinson_shift(h[hi - 2:hi, hi - 2:hi])
        for i in range(lo, hi):
            h[i, i] -= mu
        rots = []
        for i in range(lo, hi - 1):
            c, s = _givens(h[i, i], h[i + 1, i])
            rots.append((c, s))
            ri, rj = h[i, i:].copy(), h[i + 1, i:].copy()
            h[i, i:] = c * ri + s * rj
            h[i + 1, i:] = -s.conjugate() * ri + c * rj
        for idx, (c, s) in enumerate(rots):
            i = lo + idx
            ci, cj = h[:i + 2, i].copy(), h[:i + 2, i + 1].copy()
            h[:i + 2, i] = c * ci + s.conjugate() * cj
            h[:i + 2, i + 1] = -s * ci + c * cj
        for i in range(lo, hi):
            h[i, i] += mu
    return out


def _characteristic_coefficients(mat: np.ndarray) -> list:
    # Faddeev-LeVerrier; fine at these sizes, exact structure, no eigensolve
    n = mat.shape[0]
    coeffs = [1.0 + 0.0j]
    m = np.zeros_like(mat)
    for k in range(1, n + 1):
        m = mat @ (m + coeffs[-1] * np.eye(n))
        coeffs.append(complex(-np.trace(m) / k))
    return coeffs[::-1]  # ascending in lambda


def _aberth_eigenvalues(mat: np.ndarray) -> list:
    ascending = _characteristic_coefficients(mat)
    n = len(ascending) - 1
    with mpmath.workprec(128):
        coeffs = [mpmath.mpc(c) for c in ascending]
        bound = 1.0 + max(abs(c) for c in ascending[:-1])
        z = [bound * mpmath.exp(1j * mpmath.mpf(t)) for t in _start_angles(n)]
        ok = _aberth_final(coeffs, z, n, mpmath.mpf(1e-25), 500, 128)
        if not ok:
            raise QRNoConvergence(
                f"Aberth fallback stalled on a degree-{n} characteristic polynomial")
        return [complex(r) for r in z]


def _dense_eigenvalues(mat: np.ndarray) -> list:
    n = mat.shape[0]
    if n == 1:
        return [complex(mat[0, 0])]
    try:
        vals = _qr_eigenvalues(_hessenberg(mat), 30 * n)
    except QRNoConvergence:
        if n <= 4:
            vals = _aberth_eigenvalues(mat)
        else:
            raise
    return sorted(vals, key=lambda v: (v.real, v.imag))


def spectrum(cfg: CavityConfig, part: Partition, specs) -> SpectrumResult:
    """Eigenvalues of F = I - A, block by block over the mode set."""
    block = 2 * (part.subdomains - 1)
    if block == 0:
        raise ValueError("spectrum needs at least one interface")
    if block > 64:
        raise ValueError("per-mode blocks capped at 64 (too many subdomains)")
    modes = mode_set(cfg)
    columns = []
    for j in range(block):
        probe = InterfaceState.zero(cfg, part)
        probe.values[j::block] = 1.0
        columns.append(apply_A(probe, cfg, part, specs).values)
    eigenvalues = []
    for mi in range(len(modes)):
        a_block = np.empty((block, block), dtype=complex)
        for j in range(block):
            a_block[:, j] = columns[j][mi * block:(mi + 1) * block]
        eigenvalues.extend(_dense_eigenvalues(np.eye(block) - a_block))
    return SpectrumResult(eigenvalues=tuple(eigenvalues), block_size=block)
