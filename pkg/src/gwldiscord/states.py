"""Two-qubit pure states, Werner-like mixtures and related operations."""

import math

import numpy as np

from .numkernel import (
    I2,
    I4,
    SPIN_FLIP,
    as_matrix,
    check_hermitian,
    dagger,
    herm_eigvals,
)

NORM_TOL = 1e-12
DENSITY_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-12

GWL_P_RANGE = (-1.0 / 3.0, 1.0)
WERNER_P_RANGE = (-1.0, 1.0 / 3.0)


class PureState:
    """Normalized two-qubit pure state ``z1|00> + z2|01> + z3|10> + z4|11>``.

    Unnormalized amplitudes are rejected unless ``normalize=True``. The global
    phase is kept as given.
    """

    __slots__ = ("_z",)

    def __init__(self, amplitudes, normalize: bool = False):
        z = np.array(amplitudes, dtype=complex).reshape(-1)
        if z.shape != (4,):
            raise ValueError(f"a two-qubit pure state needs 4 amplitudes, got {z.size}")
        if not np.all(np.isfinite(z)):
            raise ValueError("amplitudes must be finite")
        norm2 = float(np.sum(np.abs(z) ** 2))
        if normalize:
            if norm2 == 0.0:
                raise ValueError("cannot normalize the zero vector")
            z = z / math.sqrt(norm2)
        elif abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"state is not normalized: sum |z_i|^2 = {norm2!r} "
                "(pass normalize=True to rescale)"
            )
        z.setflags(write=False)
        self._z = z

    @property
    def amplitudes(self) -> np.ndarray:
        return self._z

    @property
    def w_matrix(self) -> np.ndarray:
        """The 2x2 amplitude matrix ``[[z1, z2], [z3, z4]]``."""
        return self._z.reshape(2, 2).copy()

    def projector(self) -> np.ndarray:
        return np.outer(self._z, np.conj(self._z))

    def spin_flipped(self) -> "PureState":
        """``(sigma_y x sigma_y)`` applied to the complex conjugate."""
        return PureState(SPIN_FLIP @ np.conj(self._z), normalize=True)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return bool(np.array_equal(self._z, other._z))

    def __hash__(self):
        return hash(self._z.tobytes())

    def __repr__(self):
        return f"PureState({np.array2string(self._z, precision=6)})"


def validate_density(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check that ``rho`` is a 4x4 Hermitian, unit-trace, PSD operator."""
    m = as_matrix(rho, (4,))
    m = check_hermitian(m, tol)
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lo = herm_eigvals(m)[-1]
    if lo < -PSD_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return m


def _check_range(name, p, bounds):
    lo, hi = bounds
    if not np.isfinite(p):
        raise ValueError(f"{name} must be finite")
    if p < lo - 1e-15:
        raise ValueError(f"{name}={p!r} is below the lower bound {lo!r}")
    if p > hi + 1e-15:
        raise ValueError(f"{name}={p!r} is above the upper bound {hi!r}")


def check_gwl_p(p: float) -> float:
    _check_range("mixing parameter p", p, GWL_P_RANGE)
    return float(p)


def gwl(psi: PureState, p: float, unchecked: bool = False) -> np.ndarray:
    """Werner-like mixture ``(1-p)/4 I + p |psi><psi|`` with ``-1/3 <= p <= 1``."""
    p = check_gwl_p(p)
    rho = (1.0 - p) / 4.0 * I4 + p * psi.projector()
    if unchecked:
        return rho
    return validate_density(rho)


def werner(p: float) -> np.ndarray:
    """Werner state ``(1-p)/4 I + (p/2) SWAP`` for ``-1 <= p <= 1/3``."""
    _check_range("Werner parameter p", p, WERNER_P_RANGE)
    a, b, c = (1.0 + p) / 4.0, (1.0 - p) / 4.0, p / 2.0
    rho = np.array(
        [[a, 0, 0, 0], [0, b, c, 0], [0, c, b, 0], [0, 0, 0, a]], dtype=complex
    )
    return validate_density(rho)


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced operator on qubit ``keep`` ('A' or 'B') of a 4x4 operator."""
    t = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"partition must be 'A' or 'B', got {keep!r}")


def reduced(state, partition: str = "A") -> np.ndarray:
    """Reduced density matrix of a pure state or a 4x4 density matrix.

    For a pure state this is ``W W^dag`` on A and ``W^T (W^T)^dag`` on B.
    """
    if isinstance(state, PureState):
        w = state.w_matrix
        if partition == "A":
            return w @ dagger(w)
        if partition == "B":
            return w.T @ dagger(w.T)
        raise ValueError(f"partition must be 'A' or 'B', got {partition!r}")
    return partial_trace(validate_density(state), partition)


def reduced_gwl(psi: PureState, p: float, partition: str = "A") -> np.ndarray:
    """Closed form ``(1-p)/2 I + p * reduced(psi)`` of a Werner-like marginal."""
    p = check_gwl_p(p)
    return (1.0 - p) / 2.0 * I2 + p * reduced(psi, partition)


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y)``."""
    rho = validate_density(rho)
    return SPIN_FLIP @ np.conj(rho) @ SPIN_FLIP


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    u = as_matrix(u, (4,))
    err = float(np.max(np.abs(dagger(u) @ u - I4)))
    if err > tol:
        raise ValueError(f"operator is not unitary: |U^dag U - I|_max = {err:.3e}")
    return u


def apply_unitary(rho, u) -> np.ndarray:
    """``U rho U^dag``; a Werner-like state keeps its mixing parameter."""
    u = check_unitary(u)
    rho = validate_density(rho)
    return validate_density(u @ rho @ dagger(u))


def apply_unitary_to_state(psi: PureState, u) -> PureState:
    return PureState(check_unitary(u) @ psi.amplitudes, normalize=True)


# Bell states follow the labelling |Psi+-> = (|00> +- |11>)/sqrt2 and
# |Phi+-> = (|01> +- |10>)/sqrt2.
_R2 = 1.0 / math.sqrt(2.0)
_NAMED = {
    "psi1": (math.sqrt(7) / 8, 3 * math.sqrt(5) / 8, math.sqrt(5) / 8, math.sqrt(7) / 8),
    "psi2": (-0.5, -math.sqrt(2) / 2, math.sqrt(2) / 3, 1.0 / 6.0),
    "psi3": (math.sqrt(9 / 40), math.sqrt(3 / 20), math.sqrt(3 / 5), -math.sqrt(1 / 40)),
    "psi5": (0.0, -math.sqrt(2 + math.sqrt(3)) / 2, math.sqrt(2 - math.sqrt(3)) / 2, 0.0),
    "bell:psi+": (_R2, 0.0, 0.0, _R2),
    "bell:psi-": (_R2, 0.0, 0.0, -_R2),
    "bell:phi+": (0.0, _R2, _R2, 0.0),
    "bell:phi-": (0.0, _R2, -_R2, 0.0),
}
_PSI6_MODULI = (-math.sqrt(2) / 6, math.sqrt(2) / 3, math.sqrt(2) / 2, math.sqrt(2) / 3)

NAMED_STATES = tuple(_NAMED) + ("psi6",)


def named_state(name: str, phases=(0.0, 0.0, 0.0, 0.0)) -> PureState:
    """Named example states; ``phases`` only applies to ``psi6``."""
    key = name.lower()
    if key == "psi6":
        phases = tuple(float(f) for f in phases)
        if len(phases) != 4:
            raise ValueError("psi6 needs four phases")
        z = [m * np.exp(1j * f) for m, f in zip(_PSI6_MODULI, phases)]
        return PureState(z)
    try:
        return PureState(_NAMED[key])
    except KeyError:
        raise ValueError(
            f"unknown state {name!r}; valid names: {', '.join(NAMED_STATES)}"
        ) from None


def parse_state(text: str, phases=(0.0, 0.0, 0.0, 0.0), normalize: bool = False) -> PureState:
    """Parse ``named:<id>`` or eight comma-separated reals ``z1re,z1im,...,z4im``."""
    text = text.strip()
    if text.startswith("named:"):
        return named_state(text[len("named:"):], phases)
    tokens = text.split(",")
    if len(tokens) != 8:
        raise ValueError(
            f"expected 'named:<id>' or 8 comma-separated reals, got {len(tokens)} token(s) in {text!r}"
        )
    vals = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise ValueError(f"bad amplitude token {tok!r}") from None
        if not math.isfinite(v):
            raise ValueError(f"bad amplitude token {tok!r}")
        vals.append(v)
    z = [complex(vals[2 * k], vals[2 * k + 1]) for k in range(4)]
    return PureState(z, normalize=normalize)


def random_pure_state(rng: np.random.Generator) -> PureState:
    """Haar-random state from four complex standard normals."""
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return PureState(z, normalize=True)
