"""Small dense complex linear algebra for 2x2 and 4x4 operators.

Matrices are plain ``numpy`` arrays of dtype complex128. The basis of the
two-qubit space is ordered ``|00>, |01>, |10>, |11>`` everywhere, i.e. the
first tensor factor is qubit A.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# exchange operator: |ij> -> |ji>
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)

JACOBI_TOL = 1e-13
PSD_CLAMP_TOL = 1e-10


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not.

    ``index`` holds the (row, col) of the entry with the largest deviation.
    """

    def __init__(self, index, deviation):
        self.index = index
        self.deviation = deviation
        super().__init__(
            f"matrix is not Hermitian: |H - H^dag| = {deviation:.3e} at entry {index}"
        )


def as_matrix(a, dims=(2, 4)) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise ValueError(f"expected a square matrix of size {dims}, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 operators, ``a`` acting on qubit A."""
    return np.kron(as_matrix(a, (2,)), as_matrix(b, (2,)))


def check_hermitian(h, tol: float = 1e-12) -> np.ndarray:
    """Return the Hermitian part of ``h`` after checking ``|h - h^dag|_max <= tol``."""
    h = np.asarray(h, dtype=complex)
    dev = np.abs(h - dagger(h))
    k = int(np.argmax(dev))
    if dev.flat[k] > tol:
        raise NotHermitianError(np.unravel_index(k, dev.shape), float(dev.flat[k]))
    return 0.5 * (h + dagger(h))


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(h: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 64):
    """Cyclic complex Jacobi diagonalization of a Hermitian matrix.

    Each pivot ``(p, q)`` is first rotated by a phase so the off-diagonal
    element is real, then annihilated with a real Givens rotation.

    Returns ``(w, v)`` with ``h = v @ diag(w) @ v^dag``; ``w`` is unsorted.
    """
    a = np.array(h, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        if _off_norm(a) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = dagger(g) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.real(np.diag(a)).copy(), v


def herm_eigvals(h, tol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of a Hermitian 2x2 or 4x4 matrix, sorted descending."""
    h = check_hermitian(as_matrix(h), tol)
    w, _ = jacobi_eigh(h)
    return np.sort(w)[::-1]


def herm_eigh(h, tol: float = 1e-12):
    """Eigenpairs of a Hermitian matrix, eigenvalues descending."""
    h = check_hermitian(np.asarray(h, dtype=complex), tol)
    w, v = jacobi_eigh(h)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def psd_sqrt(h, tol: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero; anything more negative
    is rejected.
    """
    h = check_hermitian(as_matrix(h), 1e-12)
    w, v = jacobi_eigh(h)
    if w.min() < -tol:
        raise ValueError(f"matrix is not positive semidefinite: eigenvalue {w.min():.3e}")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)
    return 0.5 * (root + dagger(root))


def singular_values(b) -> np.ndarray:
    """Singular values of a square matrix, descending.

    Taken from the positive half of the spectrum of the Hermitian dilation
    ``[[0, b], [b^dag, 0]]`` so small singular values keep full absolute
    precision (no squaring).
    """
    b = np.asarray(b, dtype=complex)
    n = b.shape[0]
    dil = np.zeros((2 * n, 2 * n), dtype=complex)
    dil[:n, n:] = b
    dil[n:, :n] = dagger(b)
    w, _ = jacobi_eigh(dil)
    return np.clip(np.sort(w)[::-1][:n], 0.0, None)
