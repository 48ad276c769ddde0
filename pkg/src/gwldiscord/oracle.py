"""Numerical reference machinery, independent of the closed-form results.

Conditional entropies are minimized by brute force over projective
measurements on one qubit: a coarse grid on the Bloch-sphere angles followed
by Nelder-Mead refinement of the best cells. The same module finds the
EoF/discord crossing point and a CHSH violation threshold.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from . import measures
from .numkernel import I2, PAULIS, dagger, kron
from .states import PureState, partial_trace, random_pure_state, validate_density

PROB_FLOOR = 1e-14
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MeasurementDirection:
    """Bloch direction ``(sin 2t cos f, sin 2t sin f, cos 2t)``.

    ``theta`` lies in ``[0, pi/2]`` and ``phi`` in ``[0, 2 pi)``.
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi / 2):
            raise ValueError(f"theta={self.theta!r} outside [0, pi/2]")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError(f"phi={self.phi!r} outside [0, 2 pi)")

    @property
    def vector(self) -> np.ndarray:
        return _bloch(self.theta, self.phi)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "MeasurementDirection":
        """Canonical direction for arbitrary (unbounded) angles."""
        return cls.from_vector(_bloch(theta, phi))

    @classmethod
    def from_vector(cls, n) -> "MeasurementDirection":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        theta = 0.5 * math.acos(min(1.0, max(-1.0, n[2])))
        phi = math.atan2(n[1], n[0]) % TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        return cls(theta, phi)


def _bloch(theta, phi):
    s = np.sin(2.0 * theta)
    return np.array([s * np.cos(phi), s * np.sin(phi), np.cos(2.0 * theta)])


@dataclass(frozen=True)
class OptimizerConfig:
    grid_n: int = 64
    refine_iters: int = 4000
    tol: float = 1e-10
    refine_starts: int = 2
    seed: int = 0
    chsh_restarts: int = 16

    def __post_init__(self):
        if self.grid_n < 8:
            raise ValueError("grid_n must be at least 8")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.refine_iters < 1 or self.refine_starts < 1 or self.chsh_restarts < 1:
            raise ValueError("iteration and restart counts must be positive")


@dataclass(frozen=True)
class MeasuredEnsemble:
    """Outcome probabilities and Luders post-measurement states.

    A branch with probability below ``PROB_FLOOR`` keeps weight 0 and has
    ``None`` as its state.
    """

    partition: str
    probabilities: Tuple[float, float]
    states: Tuple[Optional[np.ndarray], Optional[np.ndarray]]

    def unmeasured_marginal(self, m: int) -> Optional[np.ndarray]:
        rho = self.states[m]
        if rho is None:
            return None
        return partial_trace(rho, "B" if self.partition == "A" else "A")


def _local_projectors(n):
    n = np.asarray(n, dtype=float)
    ns = sum(c * s for c, s in zip(n, PAULIS))
    return 0.5 * (I2 + ns), 0.5 * (I2 - ns)


def projector_pair(direction: MeasurementDirection, partition: str = "A"):
    """The two rank-2 projectors ``Pi_m x I`` (or ``I x Pi_m``) on 4-dim space."""
    p0, p1 = _local_projectors(direction.vector)
    if partition == "A":
        return kron(p0, I2), kron(p1, I2)
    if partition == "B":
        return kron(I2, p0), kron(I2, p1)
    raise ValueError(f"partition must be 'A' or 'B', got {partition!r}")


def outcome_probability(rho, proj) -> float:
    """``tr(Pi rho)``, clamped to [0, 1] against round-off."""
    val = float(np.real(np.trace(np.asarray(proj) @ np.asarray(rho))))
    return min(1.0, max(0.0, val))


def pure_outcome_probability(psi: PureState, direction: MeasurementDirection,
                             partition: str = "A", m: int = 0) -> float:
    """``tr(W^dag Pi_m W)`` (``W^T`` on partition B): outcome probability on the pure state."""
    w = psi.w_matrix if partition == "A" else psi.w_matrix.T
    proj = _local_projectors(direction.vector)[m]
    return float(np.real(np.trace(dagger(w) @ proj @ w)))


def luders_update(rho, direction: MeasurementDirection, partition: str = "A") -> MeasuredEnsemble:
    rho = validate_density(rho)
    probs, states = [], []
    for proj in projector_pair(direction, partition):
        pm = outcome_probability(rho, proj)
        if pm < PROB_FLOOR:
            probs.append(0.0)
            states.append(None)
            continue
        post = proj @ rho @ proj / pm
        probs.append(pm)
        states.append(0.5 * (post + dagger(post)))
    return MeasuredEnsemble(partition, tuple(probs), tuple(states))


def extract_mixing_parameter(marginal, sign: float) -> float:
    """Mixing parameter ``x`` of a marginal ``(1-x)/2 I + x P``.

    Its spectrum only fixes ``|x|``; ``sign`` supplies the sign (that of the
    parent mixing parameter).
    """
    lam = np.sort(np.linalg.eigvalsh(np.asarray(marginal)))
    return math.copysign(float(lam[1] - lam[0]), sign)


def measured_conditional_entropy(rho, direction: MeasurementDirection, partition: str = "A") -> float:
    """``sum_m p_m S(unmeasured marginal of the m-th post state)`` for one direction."""
    ens = luders_update(rho, direction, partition)
    total = 0.0
    for m in (0, 1):
        marg = ens.unmeasured_marginal(m)
        if marg is not None:
            total += ens.probabilities[m] * measures.von_neumann_entropy(marg)
    return total


def correlation_coefficients(rho):
    """Local Bloch vectors ``a``, ``b`` and correlation matrix ``T`` of ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    a = np.array([np.real(np.trace(kron(s, I2) @ rho)) for s in PAULIS])
    b = np.array([np.real(np.trace(kron(I2, s) @ rho)) for s in PAULIS])
    t = np.array([[np.real(np.trace(kron(si, sj) @ rho)) for sj in PAULIS] for si in PAULIS])
    return a, b, t


class _ConditionalEntropyObjective:
    """Vectorized ``sum_m p_m S(rho_{other|m})`` as a function of (theta, phi).

    Measuring ``n`` on one side leaves the other side in the unnormalized
    state ``((1 + s n.a) I + (b + s T^T n).sigma) / 4`` for ``s = +-1``.
    """

    def __init__(self, rho, partition):
        a, b, t = correlation_coefficients(rho)
        if partition == "B":
            a, b, t = b, a, t.T
        elif partition != "A":
            raise ValueError(f"partition must be 'A' or 'B', got {partition!r}")
        self.a, self.b, self.t = a, b, t

    def __call__(self, theta, phi):
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        s2 = np.sin(2.0 * theta)
        n = np.stack([s2 * np.cos(phi), s2 * np.sin(phi), np.cos(2.0 * theta)], axis=-1)
        na = n @ self.a
        tn = n @ self.t
        total = np.zeros(np.shape(na))
        for s in (1.0, -1.0):
            pm = 0.5 * (1.0 + s * na)
            r = 0.25 * np.linalg.norm(self.b + s * tn, axis=-1)
            for lam in (0.5 * pm + r, 0.5 * pm - r):
                lam = np.clip(lam, 0.0, None)
                safe_p = np.where(pm > PROB_FLOOR, pm, 1.0)
                ratio = np.where(lam > 0.0, lam / safe_p, 1.0)
                total = total - np.where(pm > PROB_FLOOR, lam * np.log2(ratio), 0.0)
        return total


def conditional_entropy_numeric(rho, partition: str = "A", cfg: OptimizerConfig = OptimizerConfig()):
    """Minimize the post-measurement conditional entropy over projective measurements.

    Returns ``(value, direction)``. ``partition`` is the measured qubit.
    """
    rho = validate_density(rho)
    obj = _ConditionalEntropyObjective(rho, partition)
    thetas = np.linspace(0.0, math.pi / 2, cfg.grid_n)
    phis = np.linspace(0.0, TWO_PI, cfg.grid_n, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    vals = obj(tg, pg)
    order = np.argsort(vals, axis=None)[: cfg.refine_starts]

    def scalar(x):
        return float(obj(x[0], x[1]))

    best_val, best_x = math.inf, None
    for k in order:
        i, j = np.unravel_index(k, vals.shape)
        x0 = np.array([thetas[i], phis[j]])
        res = minimize(
            scalar,
            x0,
            method="Nelder-Mead",
            options={
                "xatol": cfg.tol,
                "fatol": cfg.tol * 1e-3,
                "maxiter": cfg.refine_iters,
                "initial_simplex": [x0, x0 + [0.5 * math.pi / cfg.grid_n, 0.0],
                                    x0 + [0.0, TWO_PI / cfg.grid_n]],
            },
        )
        cand = (float(res.fun), res.x) if res.fun < vals[i, j] else (float(vals[i, j]), x0)
        if cand[0] < best_val:
            best_val, best_x = cand
    return best_val, MeasurementDirection.from_angles(*best_x)


_MEASURED_SIDE = {"A->B": "A", "B->A": "B"}


def discord_numeric(rho, direction: str = "A->B", cfg: OptimizerConfig = OptimizerConfig()) -> float:
    """Discord with the measurement on A (``"A->B"``) or on B (``"B->A"``).

    ``S(measured marginal) - S(rho) + min conditional entropy``.
    """
    try:
        measured = _MEASURED_SIDE[direction]
    except KeyError:
        raise ValueError(f"direction must be 'A->B' or 'B->A', got {direction!r}") from None
    rho = validate_density(rho)
    s_marg = measures.von_neumann_entropy(partial_trace(rho, measured))
    s_tot = measures.von_neumann_entropy(rho)
    cond, _ = conditional_entropy_numeric(rho, measured, cfg)
    return s_marg - s_tot + cond


def eof_discord_gap(psi, p: float) -> float:
    """``EoF - discord`` of the Werner-like state built from ``psi``."""
    return measures.eof(measures.gwl_concurrence(psi, p)) - measures.discord_analytic(psi, p)


def intersection_point(psi, cfg: OptimizerConfig = OptimizerConfig()) -> Optional[float]:
    """Mixing parameter in ``(p_c, 1)`` where EoF and discord cross.

    Bisection on ``EoF - discord`` over ``[p_c + 1e-6, 1 - 1e-9]``; returns
    ``None`` when the bracket holds no sign change.
    """
    c = measures._concurrence(psi)
    if c <= 0.0:
        return None
    lo, hi = measures.p_critical(c) + 1e-6, 1.0 - 1e-9
    f_lo, f_hi = eof_discord_gap(c, lo), eof_discord_gap(c, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = eof_discord_gap(c, mid)
        if abs(f_mid) < cfg.tol or hi - lo < 1e-15:
            return mid
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _chsh_value(t, angles):
    a, a2, b, b2 = (_bloch(angles[2 * k], angles[2 * k + 1]) for k in range(4))
    return a @ t @ (b + b2) + a2 @ t @ (b - b2)


def max_chsh(rho, cfg: OptimizerConfig = OptimizerConfig()) -> float:
    """Largest CHSH value over four measurement directions, by multistart search."""
    _, _, t = correlation_coefficients(validate_density(rho))
    rng = np.random.default_rng(cfg.seed)
    best = 0.0
    for _ in range(cfg.chsh_restarts):
        x0 = rng.uniform(0.0, TWO_PI, size=8)
        res = minimize(lambda x: -_chsh_value(t, x), x0, method="BFGS", options={"gtol": 1e-12})
        res = minimize(lambda x: -_chsh_value(t, x), res.x, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return best


def horodecki_chsh(rho) -> float:
    """Maximal CHSH value ``2 sqrt(t1^2 + t2^2)`` from the correlation matrix."""
    _, _, t = correlation_coefficients(validate_density(rho))
    sv = np.sort(np.linalg.eigvalsh(t.T @ t))[::-1]
    return 2.0 * math.sqrt(max(0.0, sv[0] + sv[1]))


def bell_threshold(psi: PureState, cfg: OptimizerConfig = OptimizerConfig()) -> Optional[float]:
    """Smallest ``p`` at which the Werner-like state violates the CHSH inequality.

    The CHSH operator is traceless, so for every setting its value on the
    mixture is ``p`` times its value on ``|psi><psi|``; the threshold is
    ``2 / max_chsh(|psi><psi|)``. Returns ``None`` when there is no violation.
    """
    s = max_chsh(psi.projector(), cfg)
    if s <= 2.0 + 1e-12:
        return None
    return 2.0 / s


def amplitude_check(psi: PureState, tol: float = 1e-12) -> float:
    """Oscillation amplitude ``A = 1/2 sqrt(sum_i tr(W^dag s_i W)^2)``.

    Raises ``ValueError`` unless ``A^2`` matches ``Delta^2/4`` and the value
    obtained from the transposed amplitude matrix, within ``tol``.
    """
    w = psi.w_matrix

    def amp(m):
        return 0.5 * math.sqrt(sum(np.real(np.trace(dagger(m) @ s @ m)) ** 2 for s in PAULIS))

    a_side, b_side = amp(w), amp(w.T)
    d = measures.delta(psi)
    err = max(abs(a_side**2 - d * d / 4.0), abs(a_side**2 - b_side**2))
    if err > tol:
        raise ValueError(f"oscillation amplitude mismatch: {err:.3e}")
    return a_side


def random_states(n: int, seed: int):
    rng = np.random.default_rng(seed)
    return [random_pure_state(rng) for _ in range(n)]
