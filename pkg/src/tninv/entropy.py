"""Entropies from spectra or invariant values, and spectrum recovery.

Natural logarithms throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import Tensor

CLAMP_TOL = 1e-12
SUM_TOL = 1e-9


@dataclass(eq=False)
class Spectrum:
    """Eigenvalue distribution of a density operator.

    Entries within ``-1e-12`` of zero are clamped; anything more negative,
    or a total off 1 by more than ``1e-9``, is rejected.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if p.size == 0:
            raise ValueError("empty spectrum")
        low = float(p.min())
        if low < -CLAMP_TOL:
            raise ValueError(f"negative probability {low:.3e} beyond clamp tolerance")
        p = np.where(p < 0.0, 0.0, p)
        total = float(p.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        self.probs = p

    @classmethod
    def from_density(cls, rho) -> "Spectrum":
        mat = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
        n = int(round(np.sqrt(mat.size)))
        mat = mat.reshape(n, n)
        return cls(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0))


def renyi(spectrum: Spectrum, alpha: float) -> float:
    """Renyi entropy of order alpha: ln(sum p^alpha) / (1 - alpha)."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if alpha == 1:
        raise ValueError("alpha = 1 is the von Neumann limit; use von_neumann()")
    return float(np.log(np.sum(spectrum.probs**alpha)) / (1.0 - alpha))


def von_neumann(spectrum: Spectrum) -> float:
    """-sum p ln p with 0 ln 0 = 0; the alpha -> 1 limit of renyi()."""
    p = spectrum.probs[spectrum.probs > 0.0]
    return float(-np.sum(p * np.log(p)))


def renyi_from_invariant(value: float, alpha: int) -> float:
    """Renyi entropy from an invariant equal to tr(rho^alpha).

    For a bipartition of a pure state, the degree-alpha invariant with a
    full cycle on one side and identity on the other equals tr of the
    reduced operator to the alpha-th power, so this is the entanglement
    Renyi entropy of that cut.
    """
    if int(alpha) != alpha or alpha < 2:
        raise ValueError(f"alpha must be an integer >= 2, got {alpha}")
    value = float(np.real(value))
    if value <= 0.0:
        raise ValueError(f"invariant value {value!r} is not positive")
    return float(np.log(value) / (1.0 - alpha))


@dataclass
class CharPolyCoeffs:
    """Trailing coefficients of the monic characteristic polynomial.

    ``coeffs[i]`` multiplies lambda**(dim - 1 - i); the leading 1 is
    implicit.
    """

    dim: int
    coeffs: np.ndarray


@dataclass
class CharPolyRelation:
    coeffs: CharPolyCoeffs
    residual: float        # entropy form, via exp(-(k-1) S_k)
    trace_residual: float  # trace form, via matrix powers


def char_poly_relation(rho) -> CharPolyRelation:
    """Characteristic-polynomial identity among the Renyi entropies.

    The traced Cayley-Hamilton identity
    ``tr(rho^d) + c1 tr(rho^(d-1)) + ... + c_{d-1} tr(rho) + d c_d = 0``
    becomes, after substituting tr(rho^k) = exp(-(k-1) S_k), a relation
    among the entropies; the constant folds c_{d-1} tr(rho) + d c_d.
    Returns the coefficients and both residuals (expected ~1e-8 or below
    for a valid reduced density operator).
    """
    mat = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
    n = int(round(np.sqrt(mat.size)))
    mat = mat.reshape(n, n)
    if n > 8:
        raise ValueError(f"dimension {n} too large; expected a reduced operator <= 8")
    herm = (mat + mat.conj().T) / 2.0
    evals = np.linalg.eigvalsh(herm)
    coeffs = np.real(np.poly(evals)[1:])  # c1..cd, monic leading 1 dropped
    tr = float(np.trace(herm).real)

    if n == 1:
        residual = abs(tr + float(coeffs[0]))
        return CharPolyRelation(CharPolyCoeffs(n, coeffs), residual, residual)

    spec = Spectrum(evals)
    total = coeffs[n - 2] * tr + n * coeffs[n - 1]
    for m in range(2, n + 1):
        c = 1.0 if m == n else coeffs[n - 1 - m]
        total += c * np.exp(-(m - 1) * renyi(spec, m))
    residual = abs(float(total))

    power = herm.copy()
    t_total = coeffs[n - 1] * n + coeffs[n - 2] * tr
    for m in range(2, n + 1):
        power = power @ herm
        c = 1.0 if m == n else coeffs[n - 1 - m]
        t_total += c * float(np.trace(power).real)
    trace_residual = abs(float(t_total))

    return CharPolyRelation(CharPolyCoeffs(n, coeffs), residual, trace_residual)


def schmidt_from_jk(jvals) -> np.ndarray:
    """Recover Schmidt coefficients from the power sums J_k = sum sigma^(2k).

    ``jvals`` lists J_1..J_d.  d = 2 uses the quadratic closed form
    sigma^2 = (J_1 +- sqrt(2 J_2 - J_1^2)) / 2; larger d converts power
    sums to elementary symmetric polynomials with Newton's identities and
    takes the roots of the resulting polynomial.  Output is sorted
    non-increasing.
    """
    j = np.asarray(jvals, dtype=float).reshape(-1)
    d = len(j)
    if d < 1 or d > 8:
        raise ValueError(f"need 1..8 power sums, got {d}")
    if d == 1:
        if j[0] < -CLAMP_TOL:
            raise ValueError(f"J_1 = {j[0]!r} is negative")
        return np.array([np.sqrt(max(j[0], 0.0))])
    if d == 2:
        j1, j2 = j
        if j2 > j1**2 + 1e-10 or j1**2 > 2 * j2 + 1e-10:
            raise ValueError(
                f"inconsistent power sums: need J2 <= J1^2 <= 2 J2, got {j1!r}, {j2!r}"
            )
        disc = 2 * j2 - j1**2
        if disc < 0.0:  # within tolerance by the check above
            disc = 0.0
        root = np.sqrt(disc)
        q = np.array([(j1 + root) / 2.0, (j1 - root) / 2.0])
        q = np.where(q < 0.0, 0.0, q)
        return np.sqrt(q)

    e = [1.0]
    for m in range(1, d + 1):
        total = 0.0
        for i in range(1, m + 1):
            total += (-1.0) ** (i - 1) * e[m - i] * j[i - 1]
        e.append(total / m)
    poly = [(-1.0) ** m * e[m] for m in range(d + 1)]
    roots = np.roots(poly)
    if np.max(np.abs(roots.imag)) > 1e-8:
        raise ValueError(f"inconsistent power sums: complex sigma^2 {roots!r}")
    q = roots.real
    if np.min(q) < -1e-10:
        raise ValueError(f"inconsistent power sums: negative sigma^2 {q!r}")
    q = np.where(q < 0.0, 0.0, q)
    return np.sqrt(np.sort(q)[::-1])
