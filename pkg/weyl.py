"""Weyl classes - Kac coordinates, orders and characteristic polynomials of w_f."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import reduce

from sympy import Poly, Symbol, cyclotomic_poly, totient

from classical import ClassicalAlgebra
from errors import DomainError, VerificationError
from exceptional import irreducible
from normalform import Block, NormalForm, NormalFormComponent
from rootdata import SimpleType, build_root_system

logger = logging.getLogger(__name__)

x = Symbol("x")

PHI = "φ"


@dataclass(frozen=True)
class KacData:
    """The automorphism sigma_f read off a weighted Dynkin diagram.

    sigma_f multiplies e_(alpha_i) by eps^(s_i), eps a primitive m-th root of
    unity, with s_0 = 2 on the lowest root so that m = s_0 + sum a_i s_i.

    Attributes:
        type: The simple type
        labels: s_1..s_r, each 0, 1 or 2
        s0: Label of the extending node
        modulus: m
        even: Every label is 0 or 2
        order: Order of sigma_f, m/2 when even
        halved_labels: (1, s_1/2, ..., s_r/2) for even labels, else None
    """

    type: SimpleType
    labels: tuple[int, ...]
    s0: int
    modulus: int
    even: bool
    order: int
    halved_labels: tuple[int, ...] | None


def kac_data(t: SimpleType, labels: Sequence[int]) -> KacData:
    system = build_root_system(t)
    labels = tuple(labels)
    if len(labels) != t.rank:
        raise DomainError(f"{len(labels)} labels given for {t} of rank {t.rank}")
    if any(s not in (0, 1, 2) for s in labels):
        raise DomainError(f"Dynkin labels take the values 0, 1 or 2, got {labels}")
    s0 = 2
    modulus = s0 + sum(a * s for a, s in zip(system.marks, labels))
    even = all(s % 2 == 0 for s in labels)
    return KacData(
        type=t,
        labels=labels,
        s0=s0,
        modulus=modulus,
        even=even,
        order=modulus // 2 if even else modulus,
        halved_labels=(1, *(s // 2 for s in labels)) if even else None,
    )


def cyclotomic_factor(poly: Poly | object) -> tuple[tuple[int, int], ...]:
    """Write a product of cyclotomic polynomials as ((n, multiplicity), ...), largest n first."""
    p = poly if isinstance(poly, Poly) else Poly(poly, x)
    if p.is_zero or p.degree() < 1:
        raise VerificationError(f"{p.as_expr()} has no cyclotomic factorisation")
    coefficient, factors = p.factor_list()
    if abs(coefficient) != 1:
        raise VerificationError(f"{p.as_expr()} is not monic up to sign")
    found: dict[int, int] = {}
    for factor, multiplicity in factors:
        degree = factor.degree()
        n = next(
            (
                n
                for n in range(1, 2 * degree * degree + 3)
                if totient(n) == degree and _same_up_to_sign(factor, Poly(cyclotomic_poly(n, x), x))
            ),
            None,
        )
        if n is None:
            raise VerificationError(f"{factor.as_expr()} is not cyclotomic")
        found[n] = found.get(n, 0) + multiplicity
    return tuple(sorted(found.items(), reverse=True))


def _same_up_to_sign(a: Poly, b: Poly) -> bool:
    return a == b or -a == b


def phi_string(factors: Sequence[tuple[int, int]]) -> str:
    """Table typography, e.g. "φ_6^3φ_2"."""
    return "".join(f"{PHI}_{n}" + (f"^{m}" if m > 1 else "") for n, m in factors)


def coefficients(poly: Poly) -> list[int]:
    """Integer coefficients, leading first."""
    return [int(c) for c in poly.all_coeffs()]


@dataclass(frozen=True)
class ComponentClass:
    """Weyl class of one irreducible component in its own algebra."""

    component: NormalFormComponent
    weyl_diagram: tuple[int, ...]
    order: int
    charpoly: Poly

    @property
    def factors(self) -> tuple[tuple[int, int], ...]:
        return cyclotomic_factor(self.charpoly)

    @property
    def degree(self) -> int:
        return self.charpoly.degree()


def irreducible_class(component: NormalFormComponent) -> ComponentClass:
    row = irreducible(component)
    if row.charpoly.degree() != component.rank:
        raise VerificationError(f"charpoly of {component} has degree {row.charpoly.degree()}, rank is {component.rank}")
    return ComponentClass(component.unmarked(), row.weyl_diagram, row.order, row.charpoly)


@dataclass(frozen=True)
class WeylClassInvariant:
    """w_f as the product of the classes of the normal form components.

    Attributes:
        algebra: Label of g
        rank: Rank of g
        components: One class per component copy, in normal form order
        total_order: lcm of the component orders
        ambient_charpoly: Characteristic polynomial on the Cartan of g, classical g only
    """

    algebra: str
    rank: int
    components: tuple[ComponentClass, ...]
    total_order: int
    ambient_charpoly: Poly | None = None

    @property
    def component_product(self) -> Poly:
        return reduce(lambda a, b: a * b, (c.charpoly for c in self.components), Poly(1, x))

    @property
    def ambient_factors(self) -> tuple[tuple[int, int], ...] | None:
        return None if self.ambient_charpoly is None else cyclotomic_factor(self.ambient_charpoly)

    def failures(self) -> list[str]:
        """Violated consistency laws, empty when all hold."""
        found = [
            f"{c.component} charpoly has degree {c.degree}, rank {c.component.rank}"
            for c in self.components
            if c.degree != c.component.rank
        ]
        ambient = self.ambient_charpoly
        if ambient is None:
            return found
        if ambient.degree() != self.rank:
            found.append(f"ambient charpoly has degree {ambient.degree()}, rank is {self.rank}")
        if abs(ambient.eval(0)) != 1:
            found.append(f"ambient charpoly takes {ambient.eval(0)} at 0")
        if not ambient.rem(self.component_product).is_zero:
            found.append("ambient charpoly is not divisible by the component charpolys")
        return found

    def as_dict(self) -> dict[str, object]:
        ambient = self.ambient_charpoly
        return {
            "algebra": self.algebra,
            "total_order": self.total_order,
            "components": [
                {
                    "component": c.component.label,
                    "order": c.order,
                    "charpoly": phi_string(c.factors),
                    "coefficients": coefficients(c.charpoly),
                    "weyl_diagram": "".join(map(str, c.weyl_diagram)),
                }
                for c in self.components
            ],
            "ambient_charpoly": None if ambient is None else phi_string(self.ambient_factors or ()),
            "ambient_coefficients": None if ambient is None else coefficients(ambient),
        }


CLASSICAL_FROM_TYPE = {
    "A": lambda n: ClassicalAlgebra("sl", n + 1),
    "B": lambda n: ClassicalAlgebra("so", 2 * n + 1),
    "C": lambda n: ClassicalAlgebra("sp", 2 * n),
    "D": lambda n: ClassicalAlgebra("so", 2 * n),
}


def _block_cycles(series: str, block: Block) -> list[tuple[int, int]]:
    """Signed cycles (length, sign) one copy of a block contributes."""
    c = block.component
    if series == "sl":
        return [(block.size, 1)]
    if series == "sp":
        return [(c.rank, -1)] if c.family == "C" else [(c.rank + 1, 1)]
    match c.family:
        case "C" if block.summands == 2:
            return [(1, -1), (1, -1)]
        case "C" if block.parts == (3,):
            return [(1, -1)]
        case "C":
            return [(c.rank, -1), (c.rank, -1)]
        case "A":
            return [(c.rank + 1, 1)]
        case "D":
            return [(c.rank // 2, -1), (c.rank // 2, -1)]
        case "B":
            return [(c.rank, -1)]
        case "G":
            return [(3, -1)]
    raise DomainError(f"{c} does not occur in {series}")


def signed_cycles(algebra: ClassicalAlgebra, nf: NormalForm) -> list[tuple[int, int]]:
    """Cycle type of w_f as a (signed) permutation of the coordinates of the Cartan.

    sl_N permutes N coordinates, sp_N and so_N signed-permute N/2 of them.
    Coordinates no block touches are fixed; in so_2n one of them changes sign
    when the blocks alone would leave an odd number of negative cycles.
    """
    cycles = [
        cycle
        for block in nf.blocks
        for _ in range(block.copies)
        for cycle in _block_cycles(algebra.series, block)
    ]
    coordinates = algebra.n if algebra.series == "sl" else algebra.n // 2
    spare = coordinates - sum(length for length, _ in cycles)
    if spare < 0:
        raise VerificationError(f"blocks of {nf} overfill the Cartan of {algebra}")
    negative = sum(1 for _, sign in cycles if sign < 0)
    if algebra.series == "so" and algebra.n % 2 == 0 and negative % 2:
        if spare == 0:
            raise VerificationError(f"{nf} leaves no coordinate to balance the signs in {algebra}")
        cycles.append((1, -1))
        spare -= 1
    return cycles + [(1, 1)] * spare


def _ambient(algebra: ClassicalAlgebra, nf: NormalForm) -> Poly:
    product = reduce(
        lambda a, b: a * b,
        (Poly(x**length - sign, x) for length, sign in signed_cycles(algebra, nf)),
        Poly(1, x),
    )
    if algebra.series != "sl":
        return product
    quotient, remainder = product.div(Poly(x - 1, x))
    if not remainder.is_zero:
        raise VerificationError("permutation charpoly lacks the trivial factor")
    return quotient


def composite_invariant(g: SimpleType | ClassicalAlgebra, nf: NormalForm) -> WeylClassInvariant:
    """Invariants of w_f, the product of the w_(f[j]) over the normal form.

    The ambient charpoly is computed only for classical g whose normal form
    records its blocks; for exceptional g it is left out.
    """
    if not nf:
        raise DomainError("the zero orbit has no Weyl class invariant")
    if isinstance(g, SimpleType) and not g.is_exceptional:
        g = CLASSICAL_FROM_TYPE[g.family](g.rank)
    components = tuple(irreducible_class(c) for c in nf)
    total_order = math.lcm(*(c.order for c in components))
    ambient = None
    if isinstance(g, ClassicalAlgebra):
        if nf.blocks:
            ambient = _ambient(g, nf)
        else:
            logger.debug("%s in %s carries no blocks, ambient charpoly skipped", nf, g)
    invariant = WeylClassInvariant(
        algebra=g.label,
        rank=g.rank,
        components=components,
        total_order=total_order,
        ambient_charpoly=ambient,
    )
    for failure in invariant.failures():
        logger.warning("%s in %s: %s", nf, g, failure)
    return invariant
