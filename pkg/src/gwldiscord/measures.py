"""Closed-form entropies, concurrences, entanglement of formation and discord
for Werner-like states built from an arbitrary two-qubit pure state.

Every quantity is in bits. Functions taking ``psi`` accept either a
:class:`~gwldiscord.states.PureState` or directly its concurrence, since all
of them depend on the pure state only through that number.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .numkernel import SPIN_FLIP, herm_eigvals, psd_sqrt, singular_values
from .states import PureState, check_gwl_p, validate_density

CLAMP_TOL = 1e-12


def _xlog2x(x: float) -> float:
    return 0.0 if x <= 0.0 else x * np.log2(x)


def binary_entropy(z: float) -> float:
    """Shannon binary entropy ``-z log2 z - (1-z) log2 (1-z)``."""
    z = float(z)
    if not (-CLAMP_TOL <= z <= 1.0 + CLAMP_TOL):
        raise ValueError(f"binary entropy argument {z!r} outside [0, 1]")
    z = min(max(z, 0.0), 1.0)
    return 0.0 - _xlog2x(z) - _xlog2x(1.0 - z)


def von_neumann_entropy(rho) -> float:
    """``-tr(rho log2 rho)`` of a 2x2 or 4x4 density matrix."""
    return float(-sum(_xlog2x(lam) for lam in herm_eigvals(rho)))


def gwl_entropy(p: float) -> float:
    """Entropy of a Werner-like state; independent of the pure state."""
    p = check_gwl_p(p)
    return 2.0 - 0.75 * _xlog2x(1.0 - p) - 0.25 * _xlog2x(1.0 + 3.0 * p)


def pure_concurrence(psi: PureState) -> float:
    """``2 |z1 z4 - z2 z3|`` (twice the determinant of the amplitude matrix)."""
    z = psi.amplitudes
    return min(1.0, 2.0 * abs(z[0] * z[3] - z[1] * z[2]))


def _concurrence(psi) -> float:
    if isinstance(psi, PureState):
        return pure_concurrence(psi)
    c = float(psi)
    if not (-CLAMP_TOL <= c <= 1.0 + CLAMP_TOL):
        raise ValueError(f"concurrence {c!r} outside [0, 1]")
    return min(max(c, 0.0), 1.0)


def delta(c: float) -> float:
    """``sqrt(1 - C^2)``, the complement that controls the marginal spectra."""
    c = _concurrence(c)
    return float(np.sqrt(max(0.0, (1.0 - c) * (1.0 + c))))


def spin_flip_eigenvalues(psi, p: float):
    """The four eigenvalues of ``rho rho~`` for a Werner-like state, descending.

    For ``p >= 0`` the second eigenvalue comes from the product of the two
    nontrivial roots, which avoids cancellation as it approaches zero.
    """
    c = _concurrence(psi)
    p = check_gwl_p(p)
    d2 = (1.0 - c) * (1.0 + c)
    noise2 = ((1.0 - p) / 4.0) ** 2
    lin = p * (1.0 - p + 2.0 * p * c * c)
    split = abs(p) * c * np.sqrt(max(0.0, (1.0 + p) ** 2 - 4.0 * p * p * d2))
    lam1 = noise2 + (lin + split) / 4.0
    if p >= 0.0 and lam1 > 0.0:
        prod = noise2 * noise2 + noise2 * lin / 2.0 + p * p * (1.0 - p) ** 2 * d2 / 16.0
        lam2 = prod / lam1
    else:
        lam2 = noise2 + (lin - split) / 4.0
    return lam1, max(lam2, 0.0), noise2, noise2


def gwl_concurrence(psi, p: float) -> float:
    """Concurrence of the Werner-like state from its spin-flip spectrum."""
    lam1, lam2, _, _ = spin_flip_eigenvalues(psi, p)
    return max(0.0, float(np.sqrt(lam1) - np.sqrt(lam2) - (1.0 - p) / 2.0))


def wootters_concurrence(rho) -> float:
    """General two-qubit concurrence ``max(0, s1 - s2 - s3 - s4)``.

    The ``s_i`` are the square roots of the eigenvalues of ``rho rho~``,
    obtained as singular values of ``sqrt(rho) sqrt(rho~)``.
    """
    rho = validate_density(rho)
    root = psd_sqrt(rho)
    root_flipped = SPIN_FLIP @ np.conj(root) @ SPIN_FLIP
    s = singular_values(root @ root_flipped)
    return max(0.0, float(s[0] - s[1] - s[2] - s[3]))


def eof(rho_or_conc) -> float:
    """Entanglement of formation from a concurrence or a 4x4 density matrix."""
    if np.ndim(rho_or_conc) == 2:
        c = wootters_concurrence(rho_or_conc)
    else:
        c = _concurrence(rho_or_conc)
    return binary_entropy((1.0 + delta(c)) / 2.0)


def p_critical(psi) -> float:
    """Largest mixing parameter at which the Werner-like state is separable."""
    return 1.0 / (1.0 + 2.0 * _concurrence(psi))


def reduced_entropy(psi, p: float) -> float:
    """Entropy of either marginal, ``H2((1 + p Delta)/2)``."""
    p = check_gwl_p(p)
    return binary_entropy((1.0 + p * delta(psi)) / 2.0)


def optimal_mixing_parameters(psi, p: float):
    """Post-measurement mixing parameters ``(x0, x1)`` of the optimal measurement.

    ``x0`` belongs to the outcome whose pure-state probability is minimal,
    ``1/2 - A`` with oscillation amplitude ``A = Delta/2``.
    """
    p = check_gwl_p(p)
    amp = delta(psi) / 2.0
    x0 = p * (1.0 - 2.0 * amp) / (1.0 - 2.0 * p * amp)
    x1 = p * (1.0 + 2.0 * amp) / (1.0 + 2.0 * p * amp)
    return x0, x1


def branch_entropy(p: float, x: float) -> float:
    """``(1-p)/(2(1-x)) H2((1+x)/2)``; zero when the branch is pure (``x = 1``)."""
    if x >= 1.0:
        return 0.0
    return (1.0 - p) / (2.0 * (1.0 - x)) * binary_entropy((1.0 + x) / 2.0)


def conditional_entropy_analytic(psi, p: float) -> float:
    """Minimum over projective measurements on A of the entropy left on B.

    The same value holds for measurements on B.
    """
    x0, x1 = optimal_mixing_parameters(psi, p)
    return branch_entropy(p, x0) + branch_entropy(p, x1)


def discord_analytic(psi, p: float) -> float:
    """Exact quantum discord of the Werner-like state (symmetric in A and B)."""
    p = check_gwl_p(p)
    c = _concurrence(psi)
    d = delta(c)
    total = 0.0
    for sign in (-1.0, 1.0):
        weight = (1.0 + sign * p * d) / 2.0
        if weight <= 0.0:
            continue
        arg = (1.0 + p * (1.0 + sign * 2.0 * d)) / (4.0 * weight)
        total += weight * binary_entropy(arg)
    value = -gwl_entropy(p) + reduced_entropy(c, p) + total
    # nonnegative; only round-off can push it below zero
    return 0.0 if -CLAMP_TOL < value < 0.0 else value


@dataclass(frozen=True)
class CorrelationReport:
    p: float
    entropy_total: float
    entropy_marginal: float
    concurrence_pure: float
    concurrence_gwl: float
    eof: float
    discord_analytic: float
    p_critical: float
    discord_numeric: Optional[float] = None

    def as_dict(self) -> dict:
        d = asdict(self)
        if d["discord_numeric"] is None:
            del d["discord_numeric"]
        return d


def correlation_report(psi: PureState, p: float, discord_numeric=None) -> CorrelationReport:
    c = pure_concurrence(psi)
    cg = gwl_concurrence(c, p)
    return CorrelationReport(
        p=float(p),
        entropy_total=gwl_entropy(p),
        entropy_marginal=reduced_entropy(c, p),
        concurrence_pure=c,
        concurrence_gwl=cg,
        eof=eof(cg),
        discord_analytic=discord_analytic(c, p),
        p_critical=p_critical(c),
        discord_numeric=discord_numeric,
    )
