"""Root data - simple types, their roots, and the highest root."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from collections.abc import Sequence

from errors import DomainError

Root = tuple[int, ...]

MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}
MAX_RANK = {"E": 8, "F": 4, "G": 2}

# Bourbaki numbering throughout. G_2 takes alpha_1 long, so that the highest
# root is 2a_1 + 3a_2 and f_13 names the long root a_1 + 3a_2.
NODE_NUMBERING = {
    "A": "chain 1-2-...-n",
    "B": "chain 1-2-...-n, alpha_n short",
    "C": "chain 1-2-...-n, alpha_n long",
    "D": "chain 1-...-(n-2), with n-1 and n both attached to n-2",
    "E": "chain 1-3-4-5-...-n, with 2 attached to 4",
    "F": "chain 1-2=>3-4, alpha_1 and alpha_2 long",
    "G": "1=>2, alpha_1 long",
}


@dataclass(frozen=True)
class SimpleType:
    """A Cartan-Killing type such as E_8 or D_16."""

    family: str
    rank: int

    def __post_init__(self) -> None:
        if self.family not in MIN_RANK:
            raise DomainError(f"unknown family {self.family!r}, expected one of {''.join(MIN_RANK)}")
        low = MIN_RANK[self.family]
        high = MAX_RANK.get(self.family)
        if self.rank < low or (high is not None and self.rank > high):
            allowed = f"{low}" if high == low else f"{low}..{high}" if high else f">= {low}"
            raise DomainError(f"{self.family}_{self.rank} is not a simple type (rank {allowed})")

    @classmethod
    def parse(cls, text: str) -> "SimpleType":
        """Read "E8", "E_8" or "e8"."""
        cleaned = text.strip().replace("_", "").replace("{", "").replace("}", "")
        if len(cleaned) < 2 or not cleaned[1:].isdigit():
            raise DomainError(f"cannot read a simple type from {text!r}")
        return cls(cleaned[0].upper(), int(cleaned[1:]))

    @property
    def label(self) -> str:
        return f"{self.family}_{self.rank}"

    @property
    def is_exceptional(self) -> bool:
        return self.family in "EFG"

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _dynkin(t: SimpleType) -> tuple[list[Fraction], list[tuple[int, int]]]:
    """Squared lengths of the simple roots (long roots have length 2) and the diagram edges."""
    n = t.rank
    chain = [(i, i + 1) for i in range(n - 1)]
    two, one = Fraction(2), Fraction(1)
    match t.family:
        case "A":
            return [two] * n, chain
        case "B":
            return [two] * (n - 1) + [one], chain
        case "C":
            return [one] * (n - 1) + [two], chain
        case "D":
            return [two] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        case "E":
            return [two] * n, [(0, 2)] + [(i, i + 1) for i in range(2, n - 1)] + [(1, 3)]
        case "F":
            return [two, two, one, one], chain
        case "G":
            return [two, Fraction(2, 3)], chain
    raise DomainError(f"no Dynkin diagram for {t}")


def simple_gram(t: SimpleType) -> tuple[tuple[Fraction, ...], ...]:
    """Inner products of simple roots, normalised so long roots have squared length 2."""
    norms, edges = _dynkin(t)
    gram = [[Fraction(0)] * t.rank for _ in range(t.rank)]
    for i, norm in enumerate(norms):
        gram[i][i] = norm
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(norms[i], norms[j]) / 2
    return tuple(tuple(row) for row in gram)


@dataclass(frozen=True)
class RootSystem:
    """Roots of a simple type in the simple-root basis.

    Attributes:
        type: The simple type
        cartan: cartan[i][j] = alpha_i(h_j) = 2(alpha_i, alpha_j)/(alpha_j, alpha_j)
        gram: Inner products of simple roots
        positive_roots: Ordered by height, then reverse-lexicographically
        marks: Coefficients a_1..a_r of the highest root
    """

    type: SimpleType
    cartan: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[Root, ...]
    marks: Root

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def node_numbering(self) -> str:
        return NODE_NUMBERING[self.type.family]

    @property
    def highest_root(self) -> Root:
        return self.marks

    @property
    def coxeter_number(self) -> int:
        return 1 + sum(self.marks)

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        """Positive roots followed by their negatives, in the same order."""
        return self.positive_roots + tuple(negate(beta) for beta in self.positive_roots)

    @cached_property
    def index(self) -> dict[Root, int]:
        return {beta: i for i, beta in enumerate(self.roots)}

    def is_root(self, vector: Sequence[int]) -> bool:
        return tuple(vector) in self.index

    def simple_root(self, i: int) -> Root:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def inner(self, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
        return sum(
            (a * b * self.gram[i][j] for i, a in enumerate(alpha) if a for j, b in enumerate(beta) if b),
            Fraction(0),
        )

    def norm(self, alpha: Sequence[int]) -> Fraction:
        return self.inner(alpha, alpha)

    def coroot(self, alpha: Sequence[int]) -> tuple[Fraction, ...]:
        """Coefficients of the coroot h_alpha over the simple coroots h_1..h_r."""
        length = self.norm(alpha)
        return tuple(c * self.gram[i][i] / length for i, c in enumerate(alpha))

    def pairing(self, alpha: Sequence[int], h: Sequence[Fraction | int]) -> Fraction:
        """alpha(h) for h given in simple-coroot coordinates."""
        return sum(
            (Fraction(c) * h[j] * self.cartan[i][j] for i, c in enumerate(alpha) if c for j in range(self.rank)),
            Fraction(0),
        )

    def labels(self, h: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        """The values alpha_i(h) on the simple roots."""
        return tuple(self.pairing(self.simple_root(i), h) for i in range(self.rank))


def negate(root: Sequence[int]) -> Root:
    return tuple(-c for c in root)


def height(root: Sequence[int]) -> int:
    return sum(root)


def _close(cartan: tuple[tuple[int, ...], ...]) -> list[Root]:
    """Positive roots by root-string closure from the simple roots."""
    rank = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    found = set(simple)
    layer = list(simple)
    while layer:
        next_layer: list[Root] = []
        for beta in layer:
            for i in range(rank):
                p = 0
                down = list(beta)
                down[i] -= 1
                while tuple(down) in found:
                    p += 1
                    down[i] -= 1
                q = p - sum(c * cartan[k][i] for k, c in enumerate(beta))
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    gamma = tuple(up)
                    if gamma not in found:
                        found.add(gamma)
                        next_layer.append(gamma)
        layer = next_layer
    return sorted(found, key=lambda beta: (height(beta), negate(beta)))


@cache
def build_root_system(t: SimpleType) -> RootSystem:
    """Cartan matrix, positive roots and marks for a simple type."""
    gram = simple_gram(t)
    cartan = tuple(
        tuple(int(2 * gram[i][j] / gram[j][j]) for j in range(t.rank))
        for i in range(t.rank)
    )
    positive = _close(cartan)
    top = max(height(beta) for beta in positive)
    highest = [beta for beta in positive if height(beta) == top]
    if len(highest) != 1:
        raise DomainError(f"{t} has {len(highest)} roots of maximal height")
    return RootSystem(
        type=t,
        cartan=cartan,
        gram=gram,
        positive_roots=tuple(positive),
        marks=highest[0],
    )


def reflect(system: RootSystem, weight: Sequence[Fraction | int], i: int) -> tuple[Fraction | int, ...]:
    """Apply the simple reflection s_i (0-based) to a vector of values alpha_j(h)."""
    value = weight[i]
    return tuple(w - value * system.cartan[j][i] for j, w in enumerate(weight))


def to_dominant(
    system: RootSystem, weight: Sequence[Fraction | int]
) -> tuple[tuple[Fraction | int, ...], list[int]]:
    """Move a vector of values alpha_i(h) into the dominant chamber.

    Returns the dominant vector and the word of simple reflections applied,
    1-based and in order of application.
    """
    if len(weight) != system.rank:
        raise DomainError(f"weight has {len(weight)} entries, {system.type} has rank {system.rank}")
    current = tuple(weight)
    word: list[int] = []
    while True:
        negative = next((i for i, w in enumerate(current) if w < 0), None)
        if negative is None:
            return current, word
        current = reflect(system, current, negative)
        word.append(negative + 1)
