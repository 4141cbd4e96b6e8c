"""
Exact certification of free and effectively free biquotient actions on Sp(3).

Two torus elements are conjugate in Sp(3) iff their diagonal angles agree up to reordering and
complex conjugation, so f_1(x) ~ f_2(x) splits into 48 conjugacy patterns (sigma, eps), each a linear
condition M x in Z^3 on the torus. The action is effectively free iff every solution x has
f_1(x) = f_2(x) central, and free iff that central value is always the identity.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, count, permutations, product
import logging
import math

import numpy as np

from .intlin import RationalVector, reduce_mod1, solve_torus
from .reps import (BiquotientSpec, RepDecomposition, TorusImage, canonicalize, enumerate_sp1,
                   enumerate_sp1xsp1, load_library, restrict, torus_image)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
SUSPECT = "suspect non-free"
NO_VIOLATION = "no violation found"
MAX_SUSPECTS = 20

# circle restrictions z = 1, w = 1 and z = w as weights on (z, w)
RESTRICTIONS = {"z=1": (0, 1), "w=1": (1, 0), "z=w": (1, 1)}


class Status(Enum):
    FREE = "Free"
    EFFECTIVELY_FREE = "EffectivelyFree"
    NOT_FREE = "NotFree"


@dataclass(frozen=True)
class ConjugacyPattern:
    """Matching of left diagonal entry i with right entry sigma[i], conjugated when eps[i] = -1."""
    sigma: tuple[int, ...]
    eps: tuple[int, ...]

    def matrix(self, spec: BiquotientSpec) -> list[list[int]]:
        """Rows a_i - eps_i a'_sigma(i), b_i - eps_i b'_sigma(i)."""
        left, right = spec.left.rows, spec.right.rows
        return [[a - e*b for a, b in zip(left[i], right[s])] for i, (s, e) in enumerate(zip(self.sigma, self.eps))]


def patterns(n: int = 3) -> tuple[ConjugacyPattern, ...]:
    """All n! 2^n patterns; 48 for Sp(3)."""
    return tuple(ConjugacyPattern(sigma, eps)
                 for sigma in permutations(range(n)) for eps in product((1, -1), repeat=n))


def _fold(angle: Fraction) -> Fraction:
    # angle and -angle give conjugate entries
    return min(angle, 1 - angle) if angle else angle


def _dot(row, x) -> Fraction:
    return sum((a*Fraction(v) for a, v in zip(row, x)), Fraction(0))


def central_class(spec: BiquotientSpec, x) -> Fraction | None:
    """0 when f_1(x) = f_2(x) = I, 1/2 when both are -I, None otherwise."""
    values = {v - math.floor(v) for v in (_dot(row, x) for row in spec.rows)}
    if values == {0}:
        return Fraction(0)
    if values == {HALF}:
        return HALF
    return None


def is_conjugate(left: TorusImage, right: TorusImage, x) -> bool:
    return sorted(map(_fold, left.angles(x))) == sorted(map(_fold, right.angles(x)))


def is_violation(spec: BiquotientSpec, x) -> bool:
    """True when f_1(x) is conjugate to f_2(x) but the pair is not a single central element."""
    return is_conjugate(spec.left, spec.right, x) and central_class(spec, x) is None


@dataclass(frozen=True)
class Witness:
    """Torus point x (in turns) where the action has a non-central fixed point."""
    x: RationalVector
    left_eval: tuple[Fraction, ...]
    right_eval: tuple[Fraction, ...]

    @classmethod
    def at(cls, spec: BiquotientSpec, x) -> 'Witness':
        x = reduce_mod1(x)
        return cls(x=x, left_eval=spec.left.angles(x), right_eval=spec.right.angles(x))

    def to_json(self) -> dict:
        return {
            "x": [str(v) for v in self.x],
            "left_eval": [str(v) for v in self.left_eval],
            "right_eval": [str(v) for v in self.right_eval],
        }


@dataclass(frozen=True)
class FreenessVerdict:
    name: str
    status: Status
    witnesses: tuple[Witness, ...] = ()

    @property
    def is_effectively_free(self) -> bool:
        return self.status is not Status.NOT_FREE

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status.value,
                "witnesses": [w.to_json() for w in self.witnesses]}


def _line_point(spec: BiquotientSpec, base, direction) -> RationalVector:
    # some row moves along the line, so only finitely many of its points are central
    for k in count(2):
        x = reduce_mod1([Fraction(b) + Fraction(u, k) for b, u in zip(base, direction)])
        if central_class(spec, x) is None:
            return x


def certify(spec: BiquotientSpec) -> FreenessVerdict:
    """
    Decides whether spec defines a free, effectively free or non-free action.

    For each conjugacy pattern the solution set H = {x : M x in Z^3} is split into its identity
    component and torsion cosets. H lies in the central set iff every free direction is annihilated
    by all six exponent rows and every torsion representative is central.

    Parameters
    ----------
    spec : BiquotientSpec
        Pair of torus images, any number of coordinates.

    Returns
    -------
    FreenessVerdict
        Status plus, for NotFree, the smallest failing point of each failing pattern (deduplicated,
        sorted, so witnesses[0] is the lexicographically smallest).
    """
    failing = set()
    half_central = False
    for pattern in patterns(len(spec.left.rows)):
        group = solve_torus(pattern.matrix(spec))
        bad = []
        for direction in group.free_directions:
            if any(_dot(row, direction) for row in spec.rows):
                bad.append(_line_point(spec, group.torsion_reps[0], direction))
        for rep in group.torsion_reps:
            cls = central_class(spec, rep)
            if cls is None:
                bad.append(rep)
            elif cls == HALF:
                half_central = True
        if bad:
            failing.add(min(bad))
    if failing:
        witnesses = tuple(Witness.at(spec, x) for x in sorted(failing))
        logger.debug(f"{spec.name}: not free, {len(witnesses)} witnesses")
        return FreenessVerdict(spec.name, Status.NOT_FREE, witnesses)
    status = Status.EFFECTIVELY_FREE if half_central else Status.FREE
    return FreenessVerdict(spec.name, status)


@dataclass(frozen=True)
class Classification:
    """Effectively free class with its certificate."""
    spec: BiquotientSpec
    verdict: FreenessVerdict

    @property
    def homogeneous(self) -> bool:
        return self.spec.is_homogeneous


def candidate_pairs(hdim: int = 3) -> list[BiquotientSpec]:
    """
    Canonical forms of all ordered pairs of Sp(1)^2 images in which both coordinates enter (the
    combined exponent matrix has rank 2), deduplicated.
    """
    images = [torus_image(rep) for rep in enumerate_sp1xsp1(hdim)]
    found = {}
    for left, right in product(images, repeat=2):
        spec = BiquotientSpec(name="", left=left, right=right)
        if spec.rank < spec.ncols:
            continue
        canonical = canonicalize(spec)
        found.setdefault(canonical.key(), canonical)
    logger.info(f"{len(images)**2} ordered pairs reduce to {len(found)} candidate classes")
    return [found[key] for key in sorted(found)]


def _name_lookup() -> dict[tuple, str]:
    return {canonicalize(spec).key(): name for name, spec in load_library().items()}


def classify_all(hdim: int = 3) -> list[Classification]:
    """Effectively free classes among candidate_pairs, named after the library and in its order."""
    names = _name_lookup()
    order = list(names.values())
    found = []
    unnamed = count(1)
    for candidate in candidate_pairs(hdim):
        verdict = certify(candidate)
        if not verdict.is_effectively_free:
            continue
        name = names.get(candidate.key())
        if name is None:
            name = f"X{next(unnamed)}"
            logger.warning(f"Effectively free class {candidate.left.rows} / {candidate.right.rows} is not in the library")
        spec = BiquotientSpec(name=name, left=candidate.left, right=candidate.right,
                              factor_types=candidate.factor_types)
        found.append(Classification(spec, FreenessVerdict(name, verdict.status, verdict.witnesses)))
    found.sort(key=lambda c: (order.index(c.spec.name) if c.spec.name in order else len(order), c.spec.name))
    homogeneous = sum(c.homogeneous for c in found)
    logger.info(f"{len(found)} effectively free classes: {homogeneous} homogeneous, {len(found) - homogeneous} inhomogeneous")
    return found


def unclassified(classes: list[Classification]) -> list[FreenessVerdict]:
    """Verdicts, with witnesses, of the library biquotients that classify_all did not reproduce."""
    found = {c.spec.name for c in classes}
    return [certify(spec) for name, spec in load_library().items() if name not in found]


@dataclass(frozen=True)
class Sp1Pair:
    left: RepDecomposition
    right: RepDecomposition
    verdict: FreenessVerdict

    @property
    def labels(self) -> tuple[str, str]:
        return self.left.label, self.right.label


def sp1_pair_spec(left: RepDecomposition, right: RepDecomposition) -> BiquotientSpec:
    return BiquotientSpec(name=f"({left.label}, {right.label})", left=torus_image(left), right=torus_image(right))


def certify_sp1_pairs(hdim: int = 3, keep_rejected: bool = False) -> list[Sp1Pair]:
    """
    Certifies every unordered pair of distinct nontrivial Sp(1) representations.

    Returns the effectively free pairs, or every pair when keep_rejected is set.
    """
    reps = [rep for rep in enumerate_sp1(hdim) if not torus_image(rep).is_trivial]
    out = []
    for left, right in combinations(reps, 2):
        verdict = certify(sp1_pair_spec(left, right))
        if keep_rejected or verdict.is_effectively_free:
            out.append(Sp1Pair(left, right, verdict))
    return out


def counterexamples() -> list[BiquotientSpec]:
    """The three pairs of Sp(1)^2 images closest to the classification that fail to be effectively free."""
    return [
        BiquotientSpec(name="diag(z,1,1) / diag(zw^2,zw^-2,z)",
                       left=TorusImage(((1, 0), (0, 0), (0, 0))), right=TorusImage(((1, 2), (1, -2), (1, 0)))),
        BiquotientSpec(name="diag(z,z^3,1) / diag(w^2,w^-2,1)",
                       left=TorusImage(((1, 0), (3, 0), (0, 0))), right=TorusImage(((0, 2), (0, -2), (0, 0)))),
        BiquotientSpec(name="diag(z,z^3,1) / diag(zw^2,zw^-2,z)",
                       left=TorusImage(((1, 0), (3, 0), (0, 0))), right=TorusImage(((1, 2), (1, -2), (1, 0)))),
    ]


def restriction_verdicts(spec: BiquotientSpec) -> dict[str, FreenessVerdict]:
    """Verdicts of the circle actions z = 1, w = 1 and z = w obtained by restricting spec."""
    return {label: certify(restrict(spec, weights, label)) for label, weights in RESTRICTIONS.items()}


@dataclass(frozen=True)
class OracleVerdict:
    status: str
    suspects: tuple[RationalVector, ...] = field(default=())
    count: int = 0


def sample_oracle(spec: BiquotientSpec, grid_n: int = 720) -> OracleVerdict:
    """
    Numerical cross-check of certify on the grid x = k / grid_n.

    Angles are compared as integer residues mod grid_n, so the angular tolerance (a quarter of a
    grid step) amounts to exact equality of the folded residues.
    """
    if grid_n < 8:
        raise ValueError(f"grid_n must be at least 8, got {grid_n}.")
    grid = np.indices((grid_n,)*spec.ncols).reshape(spec.ncols, -1)

    def residues(image: TorusImage) -> np.ndarray:
        return np.mod(np.array(image.rows, dtype=np.int64) @ grid, grid_n)

    left, right = residues(spec.left), residues(spec.right)
    folded_left = np.sort(np.minimum(left, grid_n - left), axis=0)
    folded_right = np.sort(np.minimum(right, grid_n - right), axis=0)
    conjugate = np.all(folded_left == folded_right, axis=0)
    both = np.concatenate([left, right])
    central = np.all(both == 0, axis=0)
    if grid_n % 2 == 0:
        central |= np.all(both == grid_n // 2, axis=0)
    hits = np.flatnonzero(conjugate & ~central)
    if not len(hits):
        return OracleVerdict(NO_VIOLATION)
    suspects = tuple(tuple(Fraction(int(k), grid_n) for k in grid[:, i]) for i in hits[:MAX_SUSPECTS])
    return OracleVerdict(SUSPECT, suspects, int(len(hits)))


def confirmed_conflicts(spec: BiquotientSpec, verdict: FreenessVerdict, oracle: OracleVerdict) -> list[str]:
    """Disagreements between certify and the oracle that survive an exact re-check."""
    if verdict.status is Status.NOT_FREE:
        if oracle.status == NO_VIOLATION:
            return [f"{spec.name}: certified NotFree but no grid violation"]
        return []
    return [f"{spec.name}: exact violation at {tuple(map(str, x))}" for x in oracle.suspects if is_violation(spec, x)]

