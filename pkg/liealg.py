"""Chevalley algebras - exact brackets, sl2-triples and gradings."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from itertools import product
from typing import TYPE_CHECKING

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from errors import DomainError, VerificationError
from rootdata import Root, RootSystem, SimpleType, build_root_system, height, negate, to_dominant

if TYPE_CHECKING:
    from exceptional import OrbitRecord

logger = logging.getLogger(__name__)

MAX_RANK = 8


def solve_exact(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], unknowns: int) -> list[Fraction]:
    """One solution of rows @ x = rhs over the rationals, free variables set to 0.

    Raises VerificationError when the system is inconsistent.
    """
    if not rows:
        if any(rhs):
            raise VerificationError("inconsistent linear system")
        return [Fraction(0)] * unknowns
    augmented = DomainMatrix(
        [[QQ(x.numerator, x.denominator) for x in (*row, b)] for row, b in zip(rows, rhs)],
        (len(rows), unknowns + 1),
        QQ,
    )
    reduced, pivots = augmented.rref()
    if unknowns in pivots:
        raise VerificationError("inconsistent linear system")
    values = reduced.to_Matrix()
    solution = [Fraction(0)] * unknowns
    for r, c in enumerate(pivots):
        entry = values[r, unknowns]
        solution[c] = Fraction(int(entry.p), int(entry.q))
    return solution


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    return DomainMatrix([[QQ(x) for x in v] for v in vectors], (len(vectors), len(vectors[0])), QQ).rank()


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A sparse combination of Chevalley basis vectors with rational coefficients.

    Basis indices follow ChevalleyAlgebra: root vectors x_beta in the order of
    RootSystem.roots, then h_1..h_r. Zero coefficients are never stored.
    """

    algebra: "ChevalleyAlgebra"
    coefficients: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key in [k for k, v in self.coefficients.items() if not v]:
            del self.coefficients[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coefficients == other.coefficients

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def _combine(self, other: "AlgebraElement", sign: int) -> "AlgebraElement":
        self.algebra.require_same(other)
        merged = dict(self.coefficients)
        for k, v in other.coefficients.items():
            merged[k] = merged.get(k, Fraction(0)) + sign * v
        return AlgebraElement(self.algebra, merged)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, 1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._combine(other, -1)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {k: -v for k, v in self.coefficients.items()})

    def __mul__(self, scalar: int | Fraction) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {k: v * scalar for k, v in self.coefficients.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        names = self.algebra.basis_names
        body = " + ".join(f"{v}*{names[k]}" for k, v in sorted(self.coefficients.items()))
        return f"AlgebraElement({body or '0'})"


@dataclass(frozen=True)
class Sl2Triple:
    e: AlgebraElement
    h: AlgebraElement
    f: AlgebraElement


@dataclass(frozen=True)
class GradedDecomposition:
    """Dimensions of the ad h eigenspaces g_j."""

    eigen_dims: dict[int, int]

    @property
    def depth(self) -> int:
        """Largest j with g_j nonzero."""
        top = max(self.eigen_dims)
        if top <= 0:
            raise DomainError("the zero orbit has no depth")
        return top

    def dim(self, j: int) -> int:
        return self.eigen_dims.get(j, 0)

    @property
    def is_even(self) -> bool:
        return all(j % 2 == 0 for j in self.eigen_dims)


class ChevalleyAlgebra:
    """A simple Lie algebra in a Chevalley basis {x_beta, h_i}.

    Conventions: [h_i, x_beta] = beta(h_i) x_beta, [x_beta, x_-beta] = h_beta
    (the coroot), and [x_a, x_b] = N_ab x_(a+b) with N_ab = +(p+1) on
    extraspecial pairs, p the largest integer with b - p*a a root. All other
    constants follow from the standard cocycle relations.
    """

    def __init__(self, roots: RootSystem):
        self.roots = roots
        self._positions = {beta: i for i, beta in enumerate(roots.positive_roots)}
        self._constants: dict[tuple[Root, Root], int] = {}
        self._products: dict[tuple[int, int], dict[int, Fraction]] = {}
        self._extraspecial = self._extraspecial_pairs()

    @property
    def type(self) -> SimpleType:
        return self.roots.type

    @property
    def rank(self) -> int:
        return self.roots.rank

    @property
    def dimension(self) -> int:
        return self.rank + len(self.roots.roots)

    @property
    def cartan_offset(self) -> int:
        return len(self.roots.roots)

    @property
    def basis_names(self) -> list[str]:
        names = [
            ("e_" if height(beta) > 0 else "f_") + "".join(str(abs(c)) for c in beta)
            for beta in self.roots.roots
        ]
        return names + [f"h_{i + 1}" for i in range(self.rank)]

    def require_same(self, other: AlgebraElement) -> None:
        if other.algebra is not self:
            raise DomainError(f"elements of {self.type} and {other.algebra.type} cannot be combined")

    # --- basis vectors

    def element(self, coefficients: dict[int, Fraction | int] | None = None) -> AlgebraElement:
        return AlgebraElement(self, {k: Fraction(v) for k, v in (coefficients or {}).items()})

    def x(self, root: Sequence[int]) -> AlgebraElement:
        """Root vector for any root, positive or negative."""
        key = tuple(root)
        if key not in self.roots.index:
            raise DomainError(f"{key} is not a root of {self.type}")
        return self.element({self.roots.index[key]: 1})

    def e(self, root: Sequence[int]) -> AlgebraElement:
        return self.x(root)

    def f(self, root: Sequence[int]) -> AlgebraElement:
        """Root vector of the negative root -root."""
        return self.x(negate(root))

    def h(self, i: int) -> AlgebraElement:
        """Simple coroot h_(i+1), 0-based."""
        return self.element({self.cartan_offset + i: 1})

    def cartan_element(self, coordinates: Sequence[Fraction | int]) -> AlgebraElement:
        return self.element({self.cartan_offset + i: c for i, c in enumerate(coordinates) if c})

    def cartan_coordinates(self, x: AlgebraElement) -> tuple[Fraction, ...]:
        self.require_same(x)
        if any(k < self.cartan_offset for k in x.coefficients):
            raise DomainError("element is not in the Cartan subalgebra")
        return tuple(x.coefficients.get(self.cartan_offset + i, Fraction(0)) for i in range(self.rank))

    def root_of(self, index: int) -> Root:
        return self.roots.roots[index]

    # --- structure constants

    def _extraspecial_pairs(self) -> dict[Root, tuple[Root, Root]]:
        pairs: dict[Root, tuple[Root, Root]] = {}
        for xi in self.roots.positive_roots:
            if height(xi) == 1:
                continue
            for alpha in self.roots.positive_roots:
                rest = tuple(a - b for a, b in zip(xi, alpha))
                if rest in self._positions:
                    pairs[xi] = (alpha, rest)
                    break
        return pairs

    def _before(self, a: Root, b: Root) -> bool:
        return self._positions[a] < self._positions[b]

    def structure_constant(self, a: Sequence[int], b: Sequence[int]) -> int:
        """N_ab with [x_a, x_b] = N_ab x_(a+b); zero when a + b is not a root."""
        key = (tuple(a), tuple(b))
        if key not in self._constants:
            self._constants[key] = self._compute_constant(*key)
        return self._constants[key]

    def _compute_constant(self, a: Root, b: Root) -> int:
        total = tuple(x + y for x, y in zip(a, b))
        if not self.roots.is_root(total):
            return 0
        a_positive, b_positive = height(a) > 0, height(b) > 0
        if a_positive and b_positive:
            if self._before(b, a):
                return -self.structure_constant(b, a)
            return self._special(a, b, total)
        if not a_positive and not b_positive:
            return -self.structure_constant(negate(a), negate(b))
        # a + b + c = 0 with mixed signs: rotate onto a pair of equal sign
        c = negate(total)
        norm = self.roots.norm
        if (height(c) > 0) == b_positive:
            value = norm(c) / norm(a) * self.structure_constant(b, c)
        else:
            value = norm(c) / norm(b) * self.structure_constant(c, a)
        return _integral(value, a, b)

    def _special(self, zeta: Root, eta: Root, xi: Root) -> int:
        alpha, beta = self._extraspecial[xi]
        if (zeta, eta) == (alpha, beta):
            p = 0
            while self.roots.is_root(tuple(y - (p + 1) * x for x, y in zip(alpha, beta))):
                p += 1
            return p + 1
        norm = self.roots.norm
        total = Fraction(0)
        beta_zeta = tuple(x - y for x, y in zip(beta, zeta))
        if self.roots.is_root(beta_zeta):
            total += Fraction(
                self.structure_constant(beta, negate(zeta)) * self.structure_constant(alpha, negate(eta))
            ) / norm(beta_zeta)
        alpha_zeta = tuple(x - y for x, y in zip(alpha, zeta))
        if self.roots.is_root(alpha_zeta):
            total += Fraction(
                self.structure_constant(negate(zeta), alpha) * self.structure_constant(beta, negate(eta))
            ) / norm(alpha_zeta)
        return _integral(norm(xi) / self.structure_constant(alpha, beta) * total, zeta, eta)

    # --- brackets

    def basis_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """[b_i, b_j] for basis indices i, j."""
        key = (i, j)
        if key not in self._products:
            self._products[key] = self._basis_bracket(i, j)
        return self._products[key]

    def _basis_bracket(self, i: int, j: int) -> dict[int, Fraction]:
        offset = self.cartan_offset
        if i >= offset and j >= offset:
            return {}
        if i >= offset:
            gamma = self.root_of(j)
            value = sum(c * self.roots.cartan[k][i - offset] for k, c in enumerate(gamma))
            return {j: Fraction(value)} if value else {}
        if j >= offset:
            return {k: -v for k, v in self._basis_bracket(j, i).items()}
        a, b = self.root_of(i), self.root_of(j)
        total = tuple(x + y for x, y in zip(a, b))
        if not any(total):
            return {offset + k: c for k, c in enumerate(self.roots.coroot(a)) if c}
        n = self.structure_constant(a, b)
        return {self.roots.index[total]: Fraction(n)} if n else {}

    def bracket(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Bilinear, antisymmetric Lie bracket."""
        self.require_same(x)
        self.require_same(y)
        result: dict[int, Fraction] = {}
        for i, u in x.coefficients.items():
            for j, v in y.coefficients.items():
                for k, w in self.basis_bracket(i, j).items():
                    result[k] = result.get(k, Fraction(0)) + u * v * w
        return AlgebraElement(self, result)

    def basis(self) -> Iterable[AlgebraElement]:
        for i in range(self.dimension):
            yield self.element({i: 1})


def _integral(value: Fraction, a: Root, b: Root) -> int:
    if Fraction(value).denominator != 1:
        raise VerificationError(f"structure constant N{a},{b} = {value} is not an integer")
    return int(value)


@cache
def build_algebra(t: SimpleType) -> ChevalleyAlgebra:
    """The Chevalley algebra of a simple type of rank at most 8."""
    if t.rank > MAX_RANK:
        raise DomainError(f"{t} exceeds the supported rank {MAX_RANK}")
    return ChevalleyAlgebra(build_root_system(t))


def _negative_support(f: AlgebraElement) -> list[tuple[Root, Fraction]]:
    algebra = f.algebra
    support = []
    for k, c in sorted(f.coefficients.items()):
        if k >= algebra.cartan_offset or height(algebra.root_of(k)) > 0:
            raise DomainError("sl2 completion expects a combination of negative root vectors")
        support.append((negate(algebra.root_of(k)), c))
    return support


def sl2_complete(f: AlgebraElement) -> Sl2Triple:
    """Complete f to an sl2-triple (e, h, f).

    h is solved in the span of the coroots of the support of f with beta(h) = 2
    on every support root; e is then solved in all of g_2(h) from [e, f] = h.
    When h is not dominant, g_2(h) contains negative root spaces as well.
    """
    if not f:
        raise DomainError("cannot complete the zero element")
    algebra = f.algebra
    system = algebra.roots
    support = _negative_support(f)
    coroots = [system.coroot(beta) for beta, _ in support]
    rows = [[system.pairing(beta, h_gamma) for h_gamma in coroots] for beta, _ in support]
    weights = solve_exact(rows, [Fraction(2)] * len(support), len(support))
    h_coords = [sum((w * h_gamma[i] for w, h_gamma in zip(weights, coroots)), Fraction(0)) for i in range(algebra.rank)]
    if any(system.pairing(beta, h_coords) != 2 for beta, _ in support):
        raise VerificationError("no neutral element puts every support root in degree -2")
    h = algebra.cartan_element(h_coords)

    candidates = [gamma for gamma in system.roots if system.pairing(gamma, h_coords) == 2]
    images = [algebra.bracket(algebra.e(gamma), f) for gamma in candidates]
    keys = sorted(set(h.coefficients).union(*(image.coefficients for image in images)))
    matrix = [[image.coefficients.get(k, Fraction(0)) for image in images] for k in keys]
    target = [h.coefficients.get(k, Fraction(0)) for k in keys]
    try:
        solution = solve_exact(matrix, target, len(candidates))
    except VerificationError as e:
        raise VerificationError("[e, f] = h has no solution in g_2") from e
    e = algebra.element({algebra.roots.index[gamma]: c for gamma, c in zip(candidates, solution) if c})

    triple = Sl2Triple(e=e, h=h, f=f)
    if (
        algebra.bracket(e, f) != h
        or algebra.bracket(h, e) != 2 * e
        or algebra.bracket(h, f) != -2 * f
    ):
        raise VerificationError("sl2 relations fail for the completed triple")
    return triple


def grading(h: AlgebraElement) -> GradedDecomposition:
    """Eigenspace dimensions of ad h for h in the Cartan subalgebra."""
    algebra = h.algebra
    coords = algebra.cartan_coordinates(h)
    dims: dict[int, int] = {0: algebra.rank}
    for beta in algebra.roots.roots:
        value = algebra.roots.pairing(beta, coords)
        if value.denominator != 1:
            raise DomainError(f"ad h has the non-integer eigenvalue {value} on x_{beta}")
        dims[int(value)] = dims.get(int(value), 0) + 1
    return GradedDecomposition(eigen_dims=dict(sorted(dims.items())))


def dynkin_labels(h: AlgebraElement) -> tuple[int, ...]:
    """Weighted Dynkin diagram of h, after moving h to the dominant chamber."""
    algebra = h.algebra
    values = algebra.roots.labels(algebra.cartan_coordinates(h))
    dominant, _ = to_dominant(algebra.roots, values)
    if any(v not in (0, 1, 2) for v in dominant):
        raise VerificationError(f"Dynkin labels {tuple(str(v) for v in dominant)} fall outside 0, 1, 2")
    return tuple(int(v) for v in dominant)


def h_from_labels(algebra: ChevalleyAlgebra, labels: Sequence[int]) -> AlgebraElement:
    """The Cartan element with alpha_i(h) = labels[i]."""
    if len(labels) != algebra.rank:
        raise DomainError(f"{len(labels)} labels given for {algebra.type}")
    rows = [[Fraction(algebra.roots.cartan[i][j]) for j in range(algebra.rank)] for i in range(algebra.rank)]
    return algebra.cartan_element(solve_exact(rows, [Fraction(s) for s in labels], algebra.rank))


@dataclass(frozen=True)
class Realization:
    """A table representative made concrete in a Chevalley algebra."""

    label: str
    element: AlgebraElement
    triple: Sl2Triple
    grading: GradedDecomposition
    coefficients: tuple[int, ...]
    searched: bool = False

    @property
    def depth(self) -> int:
        return self.grading.depth


class SignSearch:
    """Find coefficients that turn a table representative into a genuine sl2 nilpotent.

    Printed coefficients are tried first. When the support is linearly
    dependent the torus cannot normalise every coefficient, so the ones on
    dependent roots are varied, round by round, over COEFFICIENT_ROUNDS.
    """

    COEFFICIENT_ROUNDS: tuple[tuple[int, ...], ...] = ((1, -1), (1, -1, 2, -2))

    def __init__(self, algebra: ChevalleyAlgebra):
        self.algebra = algebra

    def attempt(self, record: "OrbitRecord", coefficients: Sequence[int]) -> Realization | None:
        terms = record.terms
        f = self.algebra.element()
        for (root, _), c in zip(terms, coefficients):
            f = f + c * self.algebra.f(root)
        try:
            triple = sl2_complete(f)
            graded = grading(triple.h)
        except VerificationError:
            return None
        if graded.depth != record.depth:
            return None
        return Realization(record.label, f, triple, graded, tuple(coefficients))

    def realize(self, record: "OrbitRecord") -> Realization:
        terms = record.terms
        printed = tuple(c for _, c in terms)
        found = self.attempt(record, printed)
        if found is not None:
            return found

        extras = dependent_positions([root for root, _ in terms])
        if not extras:
            raise VerificationError(f"{record.type} {record.label}: printed representative does not reach depth {record.depth}")
        tried = {printed}
        for values in self.COEFFICIENT_ROUNDS:
            for choice in product(values, repeat=len(extras)):
                coefficients = list(printed)
                for position, value in zip(extras, choice):
                    coefficients[position] = value
                if tuple(coefficients) in tried:
                    continue
                tried.add(tuple(coefficients))
                found = self.attempt(record, coefficients)
                if found is not None:
                    logger.info("%s %s: coefficients %s", record.type, record.label, found.coefficients)
                    return Realization(found.label, found.element, found.triple, found.grading, found.coefficients, True)
        raise VerificationError(f"{record.type} {record.label}: no coefficient assignment reaches depth {record.depth}")


def dependent_positions(roots: Sequence[Sequence[int]]) -> list[int]:
    """Positions of roots lying in the span of the roots before them."""
    kept: list[Sequence[int]] = []
    positions = []
    for i, root in enumerate(roots):
        if integer_rank([*kept, root]) == len(kept):
            positions.append(i)
        else:
            kept.append(root)
    return positions


def realize_representative(record: "OrbitRecord", algebra: ChevalleyAlgebra) -> AlgebraElement:
    """The representative of a table row as an element of the algebra."""
    return SignSearch(algebra).realize(record).element
