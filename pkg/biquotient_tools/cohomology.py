"""
Low degree cohomology of Sp(3)//Sp(1)^2.

H*(BSp(1)^2) = Z[z^2, w^2] where z, w denote the degree 2 torus classes. The differentials
dx3 = Bf*(sigma_1 (x) 1 - 1 (x) sigma_1) and dx7 = Bf*(sigma_2 (x) 1 - 1 (x) sigma_2) give

    H^4 = Z^2 / <dx3>              (identified with Z by psi(s, t) = -beta s + alpha t)
    H^8 = Z^3 / <z^2 dx3, w^2 dx3, dx7>

and p_1 follows from the root formula 8 phi*(y_1^2 + y_2^2 + y_3^2) - phi*(sum of squared roots of U).
An SO(3) factor is handled through its own maximal torus: its exponents are halved and its root is w
instead of 2w.
"""
from dataclasses import dataclass
import logging
import math

import sympy

from .intlin import IntMatrix, det3, int_matrix, snf
from .reps import SO3, BiquotientSpec

logger = logging.getLogger(__name__)

Z_BAR, W_BAR = sympy.symbols('zbar wbar')

# A_f columns: z^4, w^4, z^2 w^2
A_F_COLUMNS = ((2, 0), (0, 2), (1, 1))


def _monomial(a: int, b: int) -> str:
    parts = [f"{v}^{2*e}" if e else "" for v, e in (("z", a), ("w", b))]
    return "".join(parts) or "1"


@dataclass(frozen=True)
class EvenPoly:
    """
    Integer polynomial in z^2 and w^2, stored as ((a, b), coefficient) pairs for the monomials
    z^(2a) w^(2b) with nonzero coefficients.
    """
    terms: tuple[tuple[tuple[int, int], int], ...] = ()

    @classmethod
    def from_dict(cls, coefficients: dict[tuple[int, int], int]) -> 'EvenPoly':
        return cls(tuple(sorted(((k, int(c)) for k, c in coefficients.items() if c), reverse=True)))

    @classmethod
    def from_expr(cls, expr) -> 'EvenPoly':
        """Reads an expanded sympy polynomial in zbar, wbar; odd exponents are rejected."""
        expr = sympy.expand(expr)
        if expr == 0:
            return cls()
        coefficients = {}
        for (ez, ew), c in sympy.Poly(expr, Z_BAR, W_BAR).terms():
            if ez % 2 or ew % 2:
                raise ValueError(f"{expr} has an odd power of z or w and is not Weyl invariant.")
            if c != int(c):
                raise ValueError(f"{expr} has a non-integer coefficient {c}.")
            coefficients[(ez // 2, ew // 2)] = int(c)
        return cls.from_dict(coefficients)

    @classmethod
    def from_json(cls, data: dict[str, int]) -> 'EvenPoly':
        names = {_monomial(a, b): (a, b) for a in range(3) for b in range(3)}
        try:
            return cls.from_dict({names[key]: c for key, c in data.items()})
        except KeyError as error:
            raise KeyError(f"Missing monomial {error} among {', '.join(names)}.")

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.terms)

    def coefficient(self, a: int, b: int) -> int:
        return self.as_dict().get((a, b), 0)

    def to_expr(self):
        return sum((c*Z_BAR**(2*a)*W_BAR**(2*b) for (a, b), c in self.terms), sympy.Integer(0))

    def __add__(self, other: 'EvenPoly') -> 'EvenPoly':
        out = self.as_dict()
        for k, c in other.terms:
            out[k] = out.get(k, 0) + c
        return EvenPoly.from_dict(out)

    def __neg__(self) -> 'EvenPoly':
        return EvenPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: 'EvenPoly') -> 'EvenPoly':
        return self + (-other)

    def __mul__(self, other: 'EvenPoly | int') -> 'EvenPoly':
        if isinstance(other, int):
            return EvenPoly.from_dict({k: other*c for k, c in self.terms})
        return EvenPoly.from_expr(self.to_expr()*other.to_expr())

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for (a, b), c in self.terms:
            sign = "-" if c < 0 else "+"
            size = abs(c)
            body = _monomial(a, b)
            text = body if size == 1 and body != "1" else f"{size}{'' if body == '1' else body}"
            out += f" {sign} {text}" if out else ("-" if c < 0 else "") + text
        return out

    def to_json(self) -> dict[str, int]:
        return {_monomial(a, b): c for (a, b), c in self.terms}


Z2 = EvenPoly.from_dict({(1, 0): 1})
W2 = EvenPoly.from_dict({(0, 1): 1})


def cohomology_rows(spec: BiquotientSpec) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Torus rows in terms of the generators of H^2 of each factor's own torus (SO(3) exponents halved)."""
    if spec.ncols != 2:
        raise ValueError(f"Cohomology needs an Sp(1)^2 spec, {spec.name} has {spec.ncols} coordinates.")
    scale = [2 if t == SO3 else 1 for t in spec.factor_types]

    def halve(rows):
        return [tuple(a // s for a, s in zip(row, scale)) for row in rows]
    return halve(spec.left.rows), halve(spec.right.rows)


def _squares(rows) -> list:
    return [sympy.expand((a*Z_BAR + b*W_BAR)**2) for a, b in rows]


def _sigma(rows, k: int):
    squares = _squares(rows)
    if k == 1:
        return sum(squares, sympy.Integer(0))
    if k == 2:
        return sum((squares[i]*squares[j] for i in range(len(squares)) for j in range(i + 1, len(squares))),
                   sympy.Integer(0))
    raise ValueError(f"Only sigma_1 and sigma_2 are used, got k={k}.")


def bf_diff(spec: BiquotientSpec, k: int) -> EvenPoly:
    """(Bf_1* - Bf_2*)(sigma_k(y^2)); k = 1 gives dx3 and k = 2 gives dx7."""
    left, right = cohomology_rows(spec)
    return EvenPoly.from_expr(_sigma(left, k) - _sigma(right, k))


def _alpha_beta(spec: BiquotientSpec) -> tuple[int, int]:
    dx3 = bf_diff(spec, 1)
    return dx3.coefficient(1, 0), dx3.coefficient(0, 1)


def h4_psi(spec: BiquotientSpec, cls: EvenPoly) -> int:
    """Image of s z^2 + t w^2 under psi(s, t) = -beta s + alpha t, where dx3 = alpha z^2 + beta w^2."""
    alpha, beta = _alpha_beta(spec)
    if math.gcd(alpha, beta) != 1:
        raise ValueError(f"{spec.name}: dx3 = {alpha}, {beta} is not primitive, so H^4 is not Z.")
    if any(a + b != 1 for (a, b), _ in cls.terms):
        raise ValueError(f"{cls} is not a degree 4 class.")
    return -beta*cls.coefficient(1, 0) + alpha*cls.coefficient(0, 1)


def a_f_matrix(spec: BiquotientSpec) -> IntMatrix:
    """Rows z^2 dx3, w^2 dx3 and dx7 in the columns z^4, w^4, z^2 w^2."""
    dx3, dx7 = bf_diff(spec, 1), bf_diff(spec, 2)
    rows = [Z2*dx3, W2*dx3, dx7]
    return int_matrix([[row.coefficient(*column) for column in A_F_COLUMNS] for row in rows])


def h8_order(spec: BiquotientSpec) -> int:
    """|H^8| = |det A_f|, for specs whose factors are both Sp(1)."""
    if SO3 in spec.factor_types:
        raise ValueError(f"{spec.name} has an SO(3) factor; |H^8| is only computed for Sp(1)^2.")
    order = abs(det3(a_f_matrix(spec)))
    if order == 0:
        raise ValueError(f"{spec.name}: det A_f = 0, H^8 is infinite.")
    return order


def pontryagin_class(spec: BiquotientSpec, side: str = "right") -> EvenPoly:
    """
    8 sum_i Bf*(y_i)^2 - rho_U before psi, with y_i pulled back through the left or right factor.
    rho_U is 4z^2 + 4w^2, with 4 replaced by 1 for an SO(3) coordinate.
    """
    left, right = cohomology_rows(spec)
    try:
        rows = {"left": left, "right": right}[side]
    except KeyError:
        raise KeyError(f"Missing side {side!r}; use 'left' or 'right'.")
    weights = [1 if t == SO3 else 4 for t in spec.factor_types]
    rho = weights[0]*Z_BAR**2 + weights[1]*W_BAR**2
    return EvenPoly.from_expr(8*_sigma(rows, 1) - rho)


def p1(spec: BiquotientSpec) -> int:
    """First Pontryagin class in H^4 = Z (the sign depends on the choice of generator)."""
    return h4_psi(spec, pontryagin_class(spec, "right"))


def pi2(spec: BiquotientSpec) -> str:
    """pi_2 = pi_1(U): Z/2 for each SO(3) factor."""
    count = sum(t == SO3 for t in spec.factor_types)
    return " + ".join(["Z/2"]*count) if count else "0"


@dataclass(frozen=True, eq=False)
class CohomologyReport:
    name: str
    dx3: EvenPoly
    dx7: EvenPoly
    alpha: int
    beta: int
    a_f: IntMatrix | None
    h8_order: int | None
    snf_divisors: tuple[int, ...] | None
    p1: int
    p1_left: int
    pi2: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dx3": self.dx3.to_json(),
            "dx7": self.dx7.to_json(),
            "alpha": self.alpha,
            "beta": self.beta,
            "a_f": None if self.a_f is None else [[int(v) for v in row] for row in self.a_f],
            "h8_order": self.h8_order,
            "snf_divisors": None if self.snf_divisors is None else list(self.snf_divisors),
            "p1": self.p1,
            "pi2": self.pi2,
        }


def report(spec: BiquotientSpec) -> CohomologyReport:
    dx3, dx7 = bf_diff(spec, 1), bf_diff(spec, 2)
    a_f = order = divisors = None
    if SO3 not in spec.factor_types:
        a_f = a_f_matrix(spec)
        order = h8_order(spec)
        divisors = tuple(snf(a_f).divisors)
    value = p1(spec)
    left_value = h4_psi(spec, pontryagin_class(spec, "left"))
    if left_value != value:
        logger.warning(f"{spec.name}: p1 from the left factor is {left_value}, from the right {value}")
    return CohomologyReport(
        name=spec.name, dx3=dx3, dx7=dx7, alpha=dx3.coefficient(1, 0), beta=dx3.coefficient(0, 1),
        a_f=a_f, h8_order=order, snf_divisors=divisors, p1=value, p1_left=left_value, pi2=pi2(spec))
