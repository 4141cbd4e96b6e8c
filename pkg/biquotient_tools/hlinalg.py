"""
Quaternionic linear algebra for sp(3) and Sp(3).

An n x n quaternionic matrix is stored as its 2n x 2n complex image. Writing a quaternion as
q = a + b*j with a = r + x*i and b = y + z*i complex, the entry q becomes the 2 x 2 block::

    [[ a,        b      ],
     [-conj(b),  conj(a)]]

This map is an injective algebra homomorphism, and the quaternionic conjugate transpose becomes the
ordinary complex conjugate transpose, so products, brackets and adjoints are plain numpy matrix
operations on the complex images.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.linalg import block_diag

# Complex (2n, 2n) image of an n x n quaternionic matrix.
HMatrix = np.ndarray

TOL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    """Quaternion r + i*1i + j*1j + k*1k with real components."""
    r: float = 0.0
    i: float = 0.0
    j: float = 0.0
    k: float = 0.0

    def __add__(self, other: 'Quaternion') -> 'Quaternion':
        return Quaternion(self.r + other.r, self.i + other.i, self.j + other.j, self.k + other.k)

    def __sub__(self, other: 'Quaternion') -> 'Quaternion':
        return Quaternion(self.r - other.r, self.i - other.i, self.j - other.j, self.k - other.k)

    def __neg__(self) -> 'Quaternion':
        return Quaternion(-self.r, -self.i, -self.j, -self.k)

    def __mul__(self, other: 'Quaternion | float') -> 'Quaternion':
        if not isinstance(other, Quaternion):
            return Quaternion(self.r*other, self.i*other, self.j*other, self.k*other)
        r1, i1, j1, k1 = self.components
        r2, i2, j2, k2 = other.components
        return Quaternion(
            r1*r2 - i1*i2 - j1*j2 - k1*k2,
            r1*i2 + i1*r2 + j1*k2 - k1*j2,
            r1*j2 - i1*k2 + j1*r2 + k1*i2,
            r1*k2 + i1*j2 - j1*i2 + k1*r2,
        )

    def __rmul__(self, other: float) -> 'Quaternion':
        return self * other

    @property
    def components(self) -> tuple[float, float, float, float]:
        return self.r, self.i, self.j, self.k

    def conjugate(self) -> 'Quaternion':
        return Quaternion(self.r, -self.i, -self.j, -self.k)

    def norm2(self) -> float:
        return self.r**2 + self.i**2 + self.j**2 + self.k**2

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def is_imaginary(self, tol: float = TOL) -> bool:
        return abs(self.r) < tol

    def as_block(self) -> np.ndarray:
        """Returns the 2 x 2 complex image of the quaternion."""
        a = complex(self.r, self.i)
        b = complex(self.j, self.k)
        return np.array([[a, b], [-b.conjugate(), a.conjugate()]], dtype=complex)

    @classmethod
    def from_block(cls, block: np.ndarray) -> 'Quaternion':
        a, b = block[0, 0], block[0, 1]
        return cls(float(a.real), float(a.imag), float(b.real), float(b.imag))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
UNITS = (I, J, K)


def _as_quaternion(value: 'Quaternion | float') -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    return Quaternion(float(value))


def hmatrix(entries: list[list['Quaternion | float']]) -> HMatrix:
    """Builds the complex image of a square quaternionic matrix given as nested lists."""
    n = len(entries)
    out = np.zeros((2*n, 2*n), dtype=complex)
    for a, row in enumerate(entries):
        if len(row) != n:
            raise ValueError(f"Quaternionic matrix must be square, row {a} has {len(row)} entries instead of {n}.")
        for b, value in enumerate(row):
            out[2*a:2*a+2, 2*b:2*b+2] = _as_quaternion(value).as_block()
    return out


def size(X: HMatrix) -> int:
    """Quaternionic size n of a (2n, 2n) image."""
    return X.shape[-1] // 2


def entry(X: HMatrix, a: int, b: int) -> Quaternion:
    """Quaternion in row a, column b (zero based)."""
    return Quaternion.from_block(X[2*a:2*a+2, 2*b:2*b+2])


def unit(a: int, b: int, q: 'Quaternion | float' = ONE, n: int = 3) -> HMatrix:
    """q times the matrix unit E_ab (zero based)."""
    out = np.zeros((2*n, 2*n), dtype=complex)
    out[2*a:2*a+2, 2*b:2*b+2] = _as_quaternion(q).as_block()
    return out


def diag(*values: 'Quaternion | float') -> HMatrix:
    return block_diag(*[_as_quaternion(v).as_block() for v in values])


def identity(n: int = 3) -> HMatrix:
    return np.eye(2*n, dtype=complex)


def adjoint(X: HMatrix) -> HMatrix:
    """Quaternionic conjugate transpose."""
    return np.swapaxes(X, -1, -2).conj()


def is_algebra(X: HMatrix, tol: float = TOL) -> bool:
    """True when X is quaternionic anti-Hermitian, i.e. X lies in sp(n)."""
    return bool(np.max(np.abs(adjoint(X) + X)) < tol)


def is_group(X: HMatrix, tol: float = TOL) -> bool:
    """True when X^H X = I, i.e. X lies in Sp(n)."""
    return bool(np.max(np.abs(adjoint(X) @ X - identity(size(X)))) < tol)


def g0(X: HMatrix, Y: HMatrix) -> float:
    """
    Bi-invariant inner product -Re Tr(XY) on sp(n).

    The complex trace of the image is twice the real part of the quaternionic trace.
    """
    return float(-np.real(np.trace(X @ Y)) / 2)


def norm(X: HMatrix) -> float:
    return math.sqrt(max(g0(X, X), 0.0))


def bracket(X: HMatrix, Y: HMatrix) -> HMatrix:
    return X @ Y - Y @ X


@dataclass(frozen=True)
class KpSplit:
    """Components of X in k = sp(1) + sp(2) and in its g0-orthogonal complement p."""
    k_part: HMatrix
    p_part: HMatrix


def _k_mask(n: int = 3) -> np.ndarray:
    blocks = np.zeros((n, n), dtype=bool)
    blocks[0, 0] = True
    blocks[1:, 1:] = True
    return np.kron(blocks, np.ones((2, 2), dtype=bool))


K_MASK = _k_mask()


def k_part(X: HMatrix) -> HMatrix:
    return np.where(K_MASK, X, 0)


def p_part(X: HMatrix) -> HMatrix:
    return np.where(K_MASK, 0, X)


def kp_split(X: HMatrix) -> KpSplit:
    """Splits X into its block diagonal (1 + 2) part and its off-block part."""
    return KpSplit(k_part=k_part(X), p_part=p_part(X))


def ad_p(p: HMatrix, X: HMatrix) -> HMatrix:
    """Adjoint action p X p^-1 of a group element; p^-1 = p^H on Sp(n)."""
    return p @ X @ adjoint(p)


def rotation_point(theta: float) -> HMatrix:
    """Real rotation by theta in the (1, 2)-plane, identity in slot 3."""
    c, s = math.cos(theta), math.sin(theta)
    rotation = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
    return np.kron(rotation, np.eye(2)).astype(complex)


def _sp_basis(n: int = 3) -> np.ndarray:
    # {i,j,k}E_aa, then for a < b: (E_ab - E_ba) and (E_ab + E_ba){i,j,k}, scaled to unit g0 norm.
    basis = []
    for a in range(n):
        for u in UNITS:
            basis.append(unit(a, a, u, n))
    scale = 1 / math.sqrt(2)
    for a in range(n):
        for b in range(a + 1, n):
            basis.append(scale * (unit(a, b, ONE, n) - unit(b, a, ONE, n)))
            for u in UNITS:
                basis.append(scale * (unit(a, b, u, n) + unit(b, a, u, n)))
    return np.array(basis)


SP3_BASIS = _sp_basis(3)


def coordinates(X: HMatrix) -> np.ndarray:
    """g0 coordinates of X (or of a stack of matrices) in the orthonormal basis SP3_BASIS."""
    return -np.real(np.einsum('...ij,mji->...m', X, SP3_BASIS)) / 2


def from_coordinates(c: np.ndarray) -> HMatrix:
    return np.einsum('...m,mij->...ij', np.asarray(c, dtype=float), SP3_BASIS)


def random_algebra(rng: np.random.Generator) -> HMatrix:
    return from_coordinates(rng.standard_normal(len(SP3_BASIS)))


def random_imaginary(rng: np.random.Generator) -> Quaternion:
    i, j, k = rng.standard_normal(3)
    return Quaternion(0.0, float(i), float(j), float(k))
