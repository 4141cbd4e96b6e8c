"""
Exact integer linear algebra: Smith normal form, 3 x 3 determinants, and the closed subgroup
{x in R^n/Z^n : M x in Z^m} cut out by an integer matrix M.

Integer matrices are numpy arrays with dtype=object holding python ints, so every entry is an
arbitrary precision integer and no step rounds.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import floor, gcd

import numpy as np

IntMatrix = np.ndarray
RationalVector = tuple[Fraction, ...]


def int_matrix(rows) -> IntMatrix:
    """Converts nested sequences (or an array) of integers to an object array of python ints."""
    array = np.array(rows, dtype=object)
    if array.ndim != 2:
        raise ValueError(f"Expected a 2-d integer matrix, got an array with {array.ndim} dimensions.")
    out = np.empty(array.shape, dtype=object)
    for index, value in np.ndenumerate(array):
        if int(value) != value:
            raise ValueError(f"Matrix entry {value!r} at {index} is not an integer.")
        out[index] = int(value)
    return out


def int_eye(n: int) -> IntMatrix:
    return int_matrix(np.eye(n, dtype=int)) if n else np.empty((0, 0), dtype=object)


@dataclass(frozen=True, eq=False)
class SnfResult:
    """
    Smith normal form U A V = D with U, V unimodular.

    U_inv and V_inv are tracked alongside U and V so that A = U_inv D V_inv can be rebuilt exactly.
    """
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def divisors(self) -> list[int]:
        """Diagonal entries d_1 | d_2 | ... of D."""
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]


class _SnfWorkspace:
    """Row and column operations applied to D while recording them in U, U^-1, V and V^-1."""

    def __init__(self, A: IntMatrix):
        m, n = A.shape
        self.D = A.copy()
        self.U = int_eye(m)
        self.U_inv = int_eye(m)
        self.V = int_eye(n)
        self.V_inv = int_eye(n)

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.D[[i, j]] = self.D[[j, i]]
        self.U[[i, j]] = self.U[[j, i]]
        self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def add_row(self, dst: int, src: int, q: int) -> None:
        # row dst += q row src
        self.D[dst] = self.D[dst] + q*self.D[src]
        self.U[dst] = self.U[dst] + q*self.U[src]
        self.U_inv[:, src] = self.U_inv[:, src] - q*self.U_inv[:, dst]

    def negate_row(self, i: int) -> None:
        self.D[i] = -self.D[i]
        self.U[i] = -self.U[i]
        self.U_inv[:, i] = -self.U_inv[:, i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        self.D[:, [i, j]] = self.D[:, [j, i]]
        self.V[:, [i, j]] = self.V[:, [j, i]]
        self.V_inv[[i, j]] = self.V_inv[[j, i]]

    def add_col(self, dst: int, src: int, q: int) -> None:
        # column dst += q column src
        self.D[:, dst] = self.D[:, dst] + q*self.D[:, src]
        self.V[:, dst] = self.V[:, dst] + q*self.V[:, src]
        self.V_inv[src] = self.V_inv[src] - q*self.V_inv[dst]

    def smallest_pivot(self, t: int) -> tuple[int, int] | None:
        """Position of the smallest nonzero |entry| in the lower right block, first in row-major order."""
        best = None
        m, n = self.D.shape
        for i in range(t, m):
            for j in range(t, n):
                value = abs(self.D[i, j])
                if value and (best is None or value < best[0]):
                    best = (value, i, j)
        return None if best is None else (best[1], best[2])


def snf(A) -> SnfResult:
    """
    Smith normal form of an integer matrix.

    Pivots are the smallest nonzero absolute value left in the working block, ties broken by the
    lowest row-major index. Each diagonal entry is made positive and divides the next one.

    Parameters
    ----------
    A : IntMatrix | nested list
        Integer matrix of any shape.

    Returns
    -------
    SnfResult
        U, D, V (and the inverses of U and V) with U A V = D.
    """
    work = _SnfWorkspace(int_matrix(A))
    m, n = work.D.shape
    for t in range(min(m, n)):
        while True:
            pivot = work.smallest_pivot(t)
            if pivot is None:
                return _result(work)
            work.swap_rows(t, pivot[0])
            work.swap_cols(t, pivot[1])
            d = work.D[t, t]
            dirty = False
            for i in range(t + 1, m):
                q = work.D[i, t] // d
                if q:
                    work.add_row(i, t, -q)
                dirty = dirty or work.D[i, t] != 0
            for j in range(t + 1, n):
                q = work.D[t, j] // d
                if q:
                    work.add_col(j, t, -q)
                dirty = dirty or work.D[t, j] != 0
            if dirty:
                continue
            # divisibility: fold an offending row into row t and reduce again
            offending = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if work.D[i, j] % d), None)
            if offending is None:
                break
            work.add_row(t, offending, 1)
        if work.D[t, t] < 0:
            work.negate_row(t)
    return _result(work)


def _result(work: _SnfWorkspace) -> SnfResult:
    return SnfResult(U=work.U, D=work.D, V=work.V, U_inv=work.U_inv, V_inv=work.V_inv)


def det3(A) -> int:
    """Exact determinant of a 3 x 3 integer matrix."""
    A = int_matrix(A)
    if A.shape != (3, 3):
        raise ValueError(f"det3 needs a 3 x 3 matrix, got shape {A.shape}.")
    return (A[0, 0]*(A[1, 1]*A[2, 2] - A[1, 2]*A[2, 1])
            - A[0, 1]*(A[1, 0]*A[2, 2] - A[1, 2]*A[2, 0])
            + A[0, 2]*(A[1, 0]*A[2, 1] - A[1, 1]*A[2, 0]))


def reduce_mod1(x) -> RationalVector:
    """Representative of x in [0, 1)^n."""
    return tuple(Fraction(v) - floor(Fraction(v)) for v in x)


def apply(M: IntMatrix, x) -> list[Fraction]:
    """Exact product M x for a rational vector x."""
    return [sum((Fraction(M[i, j])*Fraction(x[j]) for j in range(M.shape[1])), Fraction(0))
            for i in range(M.shape[0])]


def in_lattice(M: IntMatrix, x) -> bool:
    """True when M x has integer entries."""
    return all(v.denominator == 1 for v in apply(M, x))


def primitive(v) -> tuple[int, ...]:
    """Integer direction divided by its content, first nonzero entry positive."""
    ints = [int(a) for a in v]
    content = 0
    for a in ints:
        content = gcd(content, a)
    if content == 0:
        raise ValueError("A zero vector has no direction.")
    ints = [a // content for a in ints]
    lead = next(a for a in ints if a)
    return tuple(a if lead > 0 else -a for a in ints)


@dataclass(frozen=True)
class TorusSubgroup:
    """
    Closed subgroup {x : M x in Z^m} of R^n/Z^n.

    Attributes
    ----------
    free_directions : tuple
        Primitive integer vectors spanning the identity component.
    torsion_reps : tuple
        One rational point per component, reduced to [0, 1)^n and sorted.
    """
    free_directions: tuple[tuple[int, ...], ...]
    torsion_reps: tuple[RationalVector, ...]
    matrix: IntMatrix = field(compare=False, repr=False)

    def contains(self, x) -> bool:
        return in_lattice(self.matrix, x)


def solve_torus(M) -> TorusSubgroup:
    """
    Solves M x in Z^m over the torus R^n/Z^n.

    With U M V = D and x = V y, the condition becomes d_i y_i in Z. Coordinates with d_i = 0 are free
    and give the identity component; the others range over multiples of 1/d_i and give one torsion
    representative per component.
    """
    M = int_matrix(M)
    m, n = M.shape
    if m < 1:
        raise ValueError("solve_torus needs at least one row.")
    result = snf(M)
    divisors = [int(result.D[i, i]) if i < m else 0 for i in range(n)]
    V = result.V
    free = tuple(primitive(V[:, i]) for i in range(n) if divisors[i] == 0)
    reps = set()
    ranges = [range(d) if d else range(1) for d in divisors]
    for steps in product(*ranges):
        y = [Fraction(s, d) if d else Fraction(0) for s, d in zip(steps, divisors)]
        x = [sum((V[row, i]*y[i] for i in range(n)), Fraction(0)) for row in range(n)]
        reps.add(reduce_mod1(x))
    return TorusSubgroup(free_directions=free, torsion_reps=tuple(sorted(reps)), matrix=M)
