"""
Symplectic representations of Sp(1) and Sp(1)^2 in Sp(n), their maximal torus data, and biquotient
specs built from a pair of such representations.
"""
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations, product
import json
import logging
import math
import os
import re

import numpy as np

from .hlinalg import HMatrix, Quaternion, hmatrix, I, J, K
from .intlin import int_matrix, snf

logger = logging.getLogger(__name__)

SP1 = "Sp(1)"
SO3 = "SO(3)"
FACTOR_TYPES = (SP1, SO3)

LIBRARY_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "biquotient_library")
FAMILY_ORDER = "MNO"


@dataclass(frozen=True)
class Irrep:
    """
    Irreducible representation phi_i of Sp(1), or phi_ij = phi_i (x) phi_j of Sp(1)^2.

    phi_i has complex dimension i + 1 and is orthogonal for even i, symplectic for odd i. The tensor
    product of two orthogonal or two symplectic factors is orthogonal, a mixed product is symplectic.
    """
    left_index: int
    right_index: int | None = None

    @property
    def indices(self) -> tuple[int, ...]:
        if self.right_index is None:
            return (self.left_index,)
        return self.left_index, self.right_index

    @property
    def dimension(self) -> int:
        return math.prod(i + 1 for i in self.indices)

    @property
    def is_orthogonal(self) -> bool:
        return sum(self.indices) % 2 == 0

    @property
    def label(self) -> str:
        return "phi" + "".join(str(i) for i in self.indices)

    def weights(self) -> list[tuple[int, ...]]:
        """Weights i, i-2, ..., -i of each factor, combined over the tensor product."""
        return list(product(*[range(i, -i - 1, -2) for i in self.indices]))


@dataclass(frozen=True)
class RepDecomposition:
    """Multiset of irreducible representations, stored as sorted (Irrep, multiplicity) pairs."""
    parts: tuple[tuple[Irrep, int], ...] = ()

    def __post_init__(self):
        merged = Counter()
        for irrep, multiplicity in self.parts:
            if multiplicity < 0:
                raise ValueError(f"Negative multiplicity {multiplicity} for {irrep.label}.")
            merged[irrep] += multiplicity
        parts = tuple(sorted(((irrep, m) for irrep, m in merged.items() if m), key=lambda p: p[0].indices))
        object.__setattr__(self, "parts", parts)

    @property
    def dimension(self) -> int:
        return sum(irrep.dimension*m for irrep, m in self.parts)

    @property
    def hdim(self) -> int:
        return self.dimension // 2

    def is_symplectic(self) -> bool:
        """A sum of irreducibles is symplectic iff every orthogonal summand has even multiplicity."""
        return self.dimension % 2 == 0 and all(m % 2 == 0 for irrep, m in self.parts if irrep.is_orthogonal)

    def weights(self) -> Counter:
        out = Counter()
        for irrep, m in self.parts:
            for weight in irrep.weights():
                out[weight] += m
        return out

    @property
    def label(self) -> str:
        if not self.parts:
            return "0"
        return "+".join(f"{m if m > 1 else ''}{irrep.label}" for irrep, m in self.parts)

    @classmethod
    def parse(cls, label: str) -> 'RepDecomposition':
        """Reads labels such as '4phi0+phi1' or '2phi00+phi30'."""
        if label.strip() == "0":
            return cls()
        parts = []
        for term in label.replace(" ", "").split("+"):
            match = re.fullmatch(r"(\d*)phi(\d{1,2})", term)
            if match is None:
                raise ValueError(f"Cannot read representation term {term!r} in {label!r}.")
            multiplicity = int(match.group(1)) if match.group(1) else 1
            digits = match.group(2)
            irrep = Irrep(int(digits)) if len(digits) == 1 else Irrep(int(digits[0]), int(digits[1]))
            parts.append((irrep, multiplicity))
        return cls(tuple(parts))

    def sort_key(self) -> tuple:
        return tuple((irrep.indices, m) for irrep, m in self.parts)


def _sign_normal(row: tuple[int, ...]) -> tuple[int, ...]:
    lead = next((a for a in row if a), 0)
    return tuple(-a for a in row) if lead < 0 else tuple(row)


def _row_key(row: tuple[int, ...]) -> tuple:
    return tuple(abs(a) for a in row) + tuple(row)


@dataclass(frozen=True)
class TorusImage:
    """
    Restriction of a representation to the maximal torus.

    Row i = (a_i, b_i) means the diagonal entry z^a_i w^b_i (a single exponent for Sp(1)). Rows are
    meaningful up to per-row sign and row order, the Weyl group of Sp(n).
    """
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.rows)
        if len({len(row) for row in rows}) > 1:
            raise ValueError(f"Torus image rows have unequal lengths: {rows}.")
        object.__setattr__(self, "rows", rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for row in self.rows for a in row)

    def normalized(self) -> 'TorusImage':
        """Canonical Weyl representative: leading exponent nonnegative, rows sorted by (|a|, |b|, a, b)."""
        return TorusImage(tuple(sorted((_sign_normal(row) for row in self.rows), key=_row_key)))

    def weights(self) -> Counter:
        """Full weight multiset with the +- pairs restored."""
        out = Counter()
        for row in self.rows:
            out[row] += 1
            out[tuple(-a for a in row)] += 1
        return out

    def matrix(self):
        return int_matrix(self.rows)

    def angles(self, x) -> tuple[Fraction, ...]:
        """Diagonal angles (in turns, reduced to [0, 1)) at the torus point x."""
        values = []
        for row in self.rows:
            value = sum((a*Fraction(v) for a, v in zip(row, x)), Fraction(0))
            values.append(value - math.floor(value))
        return tuple(values)

    def transformed(self, columns: tuple[int, ...], signs: tuple[int, ...]) -> 'TorusImage':
        """New column c is old column columns[c] times signs[c]."""
        return TorusImage(tuple(tuple(s*row[c] for c, s in zip(columns, signs)) for row in self.rows))

    def permuted(self, order: tuple[int, ...], signs: tuple[int, ...]) -> 'TorusImage':
        """Weyl action: reorder rows and flip row signs."""
        return TorusImage(tuple(tuple(s*a for a in self.rows[i]) for i, s in zip(order, signs)))

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def infer_factor_types(left: TorusImage, right: TorusImage) -> tuple[str, ...]:
    """A coordinate is an SO(3) factor when it appears and all of its exponents are even."""
    types = []
    for c in range(left.ncols):
        column = [row[c] for row in left.rows + right.rows]
        if any(column) and all(a % 2 == 0 for a in column):
            types.append(SO3)
        else:
            types.append(SP1)
    return tuple(types)


@dataclass(frozen=True)
class BiquotientSpec:
    """
    Pair of torus images (f_1, f_2) for the action u * g = f_1(u) g f_2(u)^-1 on Sp(3).

    Attributes
    ----------
    name : str
        Library label (M1 ... O2) or a generated label.
    left, right : TorusImage
        Torus data of f_1 and f_2.
    factor_types : tuple
        Sp(1) or SO(3) for each coordinate (z first, then w).
    blocks : tuple | None
        Lie algebra block tokens of f_1 and f_2 ("1", "p", "q", "phi3(p)", "phi3(q)") in slot order,
        when the homomorphism is built from those blocks.
    embedding : tuple | None
        Printable images of f_1 and f_2 in terms of (p, q), e.g. ("diag(p,p,q)", "diag(q,q,1)").
    """
    name: str = field(compare=False)
    left: TorusImage
    right: TorusImage
    factor_types: tuple[str, ...] | None = None
    blocks: tuple[tuple[str, ...], tuple[str, ...]] | None = field(default=None, compare=False)
    embedding: tuple[str, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.left.ncols != self.right.ncols or len(self.left.rows) != len(self.right.rows):
            raise ValueError(f"Torus images of {self.name} have different shapes.")
        if self.factor_types is None:
            object.__setattr__(self, "factor_types", infer_factor_types(self.left, self.right))
        elif len(self.factor_types) != self.left.ncols or not set(self.factor_types) <= set(FACTOR_TYPES):
            raise ValueError(f"Invalid factor types {self.factor_types} for {self.name}.")
        for c, kind in enumerate(self.factor_types):
            # an SO(3) torus coordinate is the square of the Sp(1) one
            if kind == SO3 and any(row[c] % 2 for row in self.rows):
                raise ValueError(f"Coordinate {c} of {self.name} is tagged {SO3} but has odd exponents.")

    @property
    def ncols(self) -> int:
        return self.left.ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.left.rows + self.right.rows

    @property
    def is_homogeneous(self) -> bool:
        return self.left.is_trivial or self.right.is_trivial

    @property
    def rank(self) -> int:
        """Rank of the combined exponent matrix; both coordinates enter iff rank equals ncols."""
        return sum(1 for d in snf(self.rows).divisors if d)

    def key(self) -> tuple:
        return self.left.rows, self.right.rows, self.factor_types

    def normalized(self) -> 'BiquotientSpec':
        return replace(self, left=self.left.normalized(), right=self.right.normalized())

    def transformed(self, swap_sides: bool, columns: tuple[int, ...], signs: tuple[int, ...]) -> 'BiquotientSpec':
        left, right = (self.right, self.left) if swap_sides else (self.left, self.right)
        return BiquotientSpec(
            name=self.name,
            left=left.transformed(columns, signs),
            right=right.transformed(columns, signs),
            factor_types=tuple(self.factor_types[c] for c in columns),
        )

    def to_json(self) -> dict:
        out = {"name": self.name, "left": self.left.to_json(), "right": self.right.to_json(),
               "left_type": self.factor_types[0]}
        if self.ncols > 1:
            out["right_type"] = self.factor_types[1]
        if self.blocks is not None:
            out["blocks"] = {"left": list(self.blocks[0]), "right": list(self.blocks[1])}
        if self.embedding is not None:
            out["embedding"] = list(self.embedding)
        return out

    @classmethod
    def from_json(cls, data: dict) -> 'BiquotientSpec':
        try:
            types = tuple(data[key] for key in ("left_type", "right_type") if key in data)
            blocks = data.get("blocks")
            return cls(
                name=data["name"],
                left=TorusImage(tuple(map(tuple, data["left"]))),
                right=TorusImage(tuple(map(tuple, data["right"]))),
                factor_types=types or None,
                blocks=None if blocks is None else (tuple(blocks["left"]), tuple(blocks["right"])),
                embedding=tuple(data["embedding"]) if "embedding" in data else None,
            )
        except KeyError as error:
            raise KeyError(f"Missing {error} in biquotient spec {data.get('name', data)!r}.")


def _library_key(name: str) -> tuple[int, int]:
    return FAMILY_ORDER.index(name[0]), int(name[1:])


def load_library() -> dict[str, BiquotientSpec]:
    """Loads the named biquotients M1-M4, N1-N13 and O1-O2 shipped with the package."""
    specs = {}
    for filename in os.listdir(LIBRARY_PATH):
        if filename.split('.')[-1] != 'json':
            continue
        name = filename.split('.')[0]
        with open(os.path.join(LIBRARY_PATH, filename)) as file:
            specs[name] = BiquotientSpec.from_json(json.load(file)[name])
    return {name: specs[name] for name in sorted(specs, key=_library_key)}


def load_spec(name: str) -> BiquotientSpec:
    library = load_library()
    try:
        return library[name]
    except KeyError:
        raise KeyError(f"Missing biquotient {name!r}; known names are {', '.join(library)}.")


def _irreps(ncols: int, hdim: int) -> list[Irrep]:
    top = 2*hdim
    if ncols == 1:
        return [Irrep(i) for i in range(top)]
    return [Irrep(i, j) for i in range(top) for j in range(top) if (i + 1)*(j + 1) <= top]


def _multisets(irreps: list[Irrep], remaining: int, start: int = 0):
    if remaining == 0:
        yield ()
        return
    for index in range(start, len(irreps)):
        irrep = irreps[index]
        for multiplicity in range(1, remaining // irrep.dimension + 1):
            for rest in _multisets(irreps, remaining - multiplicity*irrep.dimension, index + 1):
                yield ((irrep, multiplicity),) + rest


def all_decompositions(ncols: int, hdim: int) -> list[RepDecomposition]:
    """Every multiset of irreducibles of complex dimension 2*hdim, symplectic or not."""
    if hdim < 0:
        raise ValueError(f"Quaternionic dimension must be nonnegative, got {hdim}.")
    found = {RepDecomposition(parts) for parts in _multisets(_irreps(ncols, hdim), 2*hdim)}
    return sorted(found, key=RepDecomposition.sort_key)


def enumerate_sp1(hdim: int) -> list[RepDecomposition]:
    """Symplectic representations of Sp(1) of quaternionic dimension hdim."""
    return [rep for rep in all_decompositions(1, hdim) if rep.is_symplectic()]


def enumerate_sp1xsp1(hdim: int) -> list[RepDecomposition]:
    """Symplectic representations of Sp(1)^2 of quaternionic dimension hdim."""
    return [rep for rep in all_decompositions(2, hdim) if rep.is_symplectic()]


def torus_image(rep: RepDecomposition) -> TorusImage:
    """
    Torus data of a symplectic representation: one row per quaternionic coordinate, taken from each
    +- weight pair with the nonnegative-leading representative, then normalized.
    """
    if not rep.is_symplectic():
        raise ValueError(f"{rep.label} is not a symplectic representation.")
    weights = rep.weights()
    if not weights:
        return TorusImage(())
    zero = tuple(0 for _ in next(iter(weights)))
    rows = [zero]*(weights[zero] // 2)
    for weight, count in sorted(weights.items()):
        if weight != zero and _sign_normal(weight) == weight:
            rows.extend([weight]*count)
    return TorusImage(tuple(rows)).normalized()


def decompose(image: TorusImage) -> RepDecomposition:
    """Recovers the representation from its torus data by peeling off highest weights."""
    remaining = image.weights()
    parts = []
    while +remaining:
        highest = max(weight for weight, count in remaining.items() if count > 0)
        irrep = Irrep(*highest)
        for weight in irrep.weights():
            if remaining[weight] <= 0:
                raise ValueError(f"Torus image {image.rows} is not the torus data of a representation.")
            remaining[weight] -= 1
        parts.append((irrep, 1))
    return RepDecomposition(tuple(parts))


def phi3_algebra(t: Quaternion) -> HMatrix:
    """
    Differential of the 4-dimensional irreducible representation Sp(1) -> Sp(2) at an imaginary t.

    With t = t_i i + t_j j + t_k k the image is::

        [[3 t_i i,                 sqrt(3)(t_j j + t_k k)],
         [sqrt(3)(t_j j + t_k k),  2(t_k k - t_j j) - t_i i]]
    """
    if not t.is_imaginary():
        raise ValueError(f"phi3_algebra needs an imaginary quaternion, got {t}.")
    root3 = math.sqrt(3)
    off = J*(root3*t.j) + K*(root3*t.k)
    return hmatrix([
        [I*(3*t.i), off],
        [off, K*(2*t.k) - J*(2*t.j) - I*t.i],
    ])


def canonicalize(spec: BiquotientSpec) -> BiquotientSpec:
    """
    Lexicographically smallest representative of the orbit of spec under factor swap, coordinate
    permutations, coordinate conjugation and the Weyl action on each side.
    """
    n = spec.ncols
    best = None
    for swap_sides in (False, True):
        for columns in permutations(range(n)):
            for signs in product((1, -1), repeat=n):
                candidate = spec.transformed(swap_sides, columns, signs).normalized()
                if best is None or candidate.key() < best.key():
                    best = candidate
    return replace(best, name=spec.name, blocks=None, embedding=None)


def restrict(spec: BiquotientSpec, weights: tuple[int, ...], label: str = "") -> BiquotientSpec:
    """Restriction to the circle t -> (t^weights[0], t^weights[1], ...)."""
    def collapse(image: TorusImage) -> TorusImage:
        return TorusImage(tuple((sum(a*c for a, c in zip(row, weights)),) for row in image.rows))
    return BiquotientSpec(name=f"{spec.name}|{label}" if label else spec.name,
                          left=collapse(spec.left), right=collapse(spec.right))


def random_symmetry(spec: BiquotientSpec, rng: np.random.Generator) -> BiquotientSpec:
    """Applies one random element of the equivalence group (without normalizing)."""
    n = spec.ncols
    columns = tuple(int(c) for c in rng.permutation(n))
    signs = tuple(int(s) for s in rng.choice((1, -1), size=n))
    moved = spec.transformed(bool(rng.integers(2)), columns, signs)

    def weyl(image: TorusImage) -> TorusImage:
        order = tuple(int(i) for i in rng.permutation(len(image.rows)))
        flips = tuple(int(s) for s in rng.choice((1, -1), size=len(image.rows)))
        return image.permuted(order, flips)
    return replace(moved, left=weyl(moved.left), right=weyl(moved.right))
