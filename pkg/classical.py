"""Classical orbits - partitions, depth, type, bushes and normal forms in sl, sp and so."""

import logging
import re
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum

from sympy.utilities.iterables import partitions as integer_partitions

from errors import DomainError
from normalform import Block, NormalForm, NormalFormComponent

logger = logging.getLogger(__name__)

SERIES = ("sl", "sp", "so")


@dataclass(frozen=True)
class Partition:
    """A partition (p_1^(r_1), ..., p_s^(r_s)) with p_1 > ... > p_s >= 1.

    Attributes:
        parts: (part, multiplicity) pairs, parts strictly decreasing
    """

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        previous = None
        for part, multiplicity in self.parts:
            if part < 1 or multiplicity < 1:
                raise DomainError(f"parts and multiplicities must be positive, got {part}^{multiplicity}")
            if previous is not None and part >= previous:
                raise DomainError("parts must be strictly decreasing")
            previous = part

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        counts = Counter(parts)
        return cls(tuple(sorted(counts.items(), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read "24^3,23^4,1^5", "(3,2,2)", "[5 3 1]" or "5^(2),1^{3}"."""
        cleaned = text.strip().strip("[]()").replace("{", "").replace("}", "")
        parts: list[int] = []
        for token in re.split(r"[,\s]+", cleaned):
            if not token:
                continue
            match = re.fullmatch(r"(\d+)(?:\^\(?(\d+)\)?)?", token)
            if match is None:
                raise DomainError(f"cannot read partition entry {token!r} in {text!r}")
            multiplicity = int(match[2]) if match[2] else 1
            parts.extend([int(match[1])] * multiplicity)
        if not parts:
            raise DomainError(f"empty partition {text!r}")
        return cls.from_parts(parts)

    @property
    def size(self) -> int:
        return sum(p * r for p, r in self.parts)

    @property
    def is_zero(self) -> bool:
        return self.parts == ((1, self.size),)

    def expanded(self) -> tuple[int, ...]:
        return tuple(p for p, r in self.parts for _ in range(r))

    def multiplicity(self, part: int) -> int:
        return dict(self.parts).get(part, 0)

    @property
    def p1(self) -> int:
        return self.parts[0][0]

    @property
    def r1(self) -> int:
        return self.parts[0][1]

    @property
    def p2(self) -> int:
        return self.parts[1][0] if len(self.parts) > 1 else 0

    def __str__(self) -> str:
        return ",".join(f"{p}^{r}" if r > 1 else str(p) for p, r in self.parts)


@dataclass(frozen=True)
class ClassicalAlgebra:
    """sl_N, sp_N or so_N acting on its natural N-dimensional representation."""

    series: str
    n: int

    # so_3 = sp_2, so_4 = 2sp_2, so_5 = sp_4, so_6 = sl_4
    MIN_SO_N = 7

    def __post_init__(self) -> None:
        if self.series not in SERIES:
            raise DomainError(f"unknown series {self.series!r}, expected one of {', '.join(SERIES)}")
        if self.series == "sl" and self.n < 2:
            raise DomainError("sl_N needs N >= 2")
        if self.series == "sp" and (self.n < 2 or self.n % 2):
            raise DomainError(f"sp_N needs N even and >= 2, got {self.n}")
        if self.series == "so" and self.n < self.MIN_SO_N:
            raise DomainError(
                f"so_{self.n} is rejected: use so_3 = sp_2, so_4 = 2sp_2, so_5 = sp_4, so_6 = sl_4"
            )

    @classmethod
    def parse(cls, text: str) -> "ClassicalAlgebra":
        """Read "so_13", "so13" or "sp(8)"."""
        match = re.fullmatch(r"\s*(sl|sp|so)[_(]?(\d+)\)?\s*", text.lower())
        if match is None:
            raise DomainError(f"cannot read a classical algebra from {text!r}")
        return cls(match[1], int(match[2]))

    @classmethod
    def for_partition(cls, series: str, p: Partition) -> "ClassicalAlgebra":
        return cls(series, p.size)

    @property
    def rank(self) -> int:
        return self.n - 1 if self.series == "sl" else self.n // 2

    @property
    def label(self) -> str:
        return f"{self.series}_{self.n}"

    def __str__(self) -> str:
        return self.label


class NilpotentType(Enum):
    SEMISIMPLE = "semisimple"
    NILPOTENT = "nilpotent"
    MIXED = "mixed"

    def __str__(self) -> str:
        return self.value


def validate(algebra: ClassicalAlgebra, p: Partition) -> str | None:
    """None when p labels an orbit of the algebra, else a description of the violation."""
    if p.size != algebra.n:
        return f"partition {p} has size {p.size}, {algebra} needs {algebra.n}"
    for part, multiplicity in p.parts:
        if algebra.series == "sp" and part % 2 and multiplicity % 2:
            return f"odd part {part} has odd multiplicity {multiplicity} (sp needs odd parts in pairs)"
        if algebra.series == "so" and part % 2 == 0 and multiplicity % 2:
            return f"even part {part} has odd multiplicity {multiplicity} (so needs even parts in pairs)"
    return None


def require_valid(algebra: ClassicalAlgebra, p: Partition, allow_zero: bool = False) -> None:
    violation = validate(algebra, p)
    if violation is not None:
        raise DomainError(violation)
    if p.is_zero and not allow_zero:
        raise DomainError(f"{p} is the zero orbit")


def depth(algebra: ClassicalAlgebra, p: Partition) -> int:
    """Largest ad h eigenvalue d."""
    require_valid(algebra, p)
    if algebra.series != "so" or p.r1 >= 2:
        return 2 * p.p1 - 2
    return max(2 * p.p1 - 4, p.p1 + p.p2 - 2)


def _only_ones(parts: Iterable[tuple[int, int]]) -> bool:
    return all(part == 1 for part, _ in parts)


def _is_nilpotent_type(p: Partition) -> bool:
    return p.p1 % 2 == 1 and p.r1 == 1 and p.p2 == p.p1 - 1


def classify_type(algebra: ClassicalAlgebra, p: Partition) -> NilpotentType:
    """Semisimple, nilpotent or mixed; nilpotent exactly when the depth is odd."""
    require_valid(algebra, p)
    if algebra.series != "so":
        semisimple = _only_ones(p.parts[1:])
        return NilpotentType.SEMISIMPLE if semisimple else NilpotentType.MIXED
    if _is_nilpotent_type(p):
        return NilpotentType.NILPOTENT
    rest = p.parts[1:]
    if p.p1 % 2 and p.r1 == 1:
        if _only_ones(rest):
            return NilpotentType.SEMISIMPLE
        if p.p1 >= 5 and rest[0] == (p.p1 - 2, 1) and _only_ones(rest[1:]):
            return NilpotentType.SEMISIMPLE
    if p.r1 >= 2 and p.r1 % 2 == 0 and _only_ones(rest):
        return NilpotentType.SEMISIMPLE
    return NilpotentType.MIXED


def reduced_depth(algebra: ClassicalAlgebra, p: Partition) -> int:
    d = depth(algebra, p)
    return d - 1 if classify_type(algebra, p) is NilpotentType.NILPOTENT else d


def _pad(algebra: ClassicalAlgebra, parts: list[int]) -> Partition:
    return Partition.from_parts(parts + [1] * (algebra.n - sum(parts)))


def bush_leader(algebra: ClassicalAlgebra, p: Partition) -> Partition:
    """The semisimple-type partition heading the bush of p."""
    require_valid(algebra, p)
    if algebra.series != "so":
        return _pad(algebra, [p.p1] * p.r1)
    if _is_nilpotent_type(p):
        raise DomainError(f"{p} is of nilpotent type (p_1 odd, r_1 = 1, p_2 = p_1 - 1) and leads no bush")
    if p.p1 % 2 == 0:
        return _pad(algebra, [p.p1] * p.r1)
    if p.r1 >= 2:
        return _pad(algebra, [p.p1] * (p.r1 - p.r1 % 2))
    if p.p2 == p.p1 - 2:
        return _pad(algebra, [p.p1, p.p2])
    return _pad(algebra, [p.p1])


def _odd_irreducible(p: int) -> NormalFormComponent:
    """Component of a lone odd part p in so_p."""
    if p == 3:
        return NormalFormComponent("C", 1)
    if p == 7:
        return NormalFormComponent("G", 2)
    return NormalFormComponent("B", (p - 1) // 2)


def _orthogonal_blocks(p: Partition) -> Iterator[Block]:
    for part, multiplicity in p.parts:
        if part % 2 == 0:
            yield Block(NormalFormComponent("C", part // 2), (part, part), multiplicity // 2)

    odd = [[part, multiplicity] for part, multiplicity in p.parts if part % 2]
    for i, entry in enumerate(odd):
        part, multiplicity = entry
        if part == 1:
            break
        if multiplicity >= 2:
            yield Block(NormalFormComponent("A", part - 1), (part, part), multiplicity // 2)
        if multiplicity % 2 == 0:
            continue
        following = odd[i + 1] if i + 1 < len(odd) else None
        if following is not None and following[0] == part - 2:
            following[1] -= 1
            if part == 3:
                yield Block(NormalFormComponent("C", 1), (3, 1), 1, summands=2)
            else:
                yield Block(NormalFormComponent("D", part - 1, (part - 3) // 2), (part, part - 2))
        else:
            yield Block(_odd_irreducible(part), (part,))


def _blocks(algebra: ClassicalAlgebra, p: Partition) -> Iterator[Block]:
    if algebra.series == "so":
        yield from _orthogonal_blocks(p)
        return
    for part, multiplicity in p.parts:
        if part == 1:
            continue
        if part % 2 == 0:
            yield Block(NormalFormComponent("C", part // 2), (part,), multiplicity)
        elif algebra.series == "sl":
            yield Block(NormalFormComponent("A", part - 1), (part,), multiplicity)
        else:
            yield Block(NormalFormComponent("A", part - 1), (part, part), multiplicity // 2)


def normal_form(algebra: ClassicalAlgebra, p: Partition) -> NormalForm:
    """Decompose the orbit of p into irreducible components.

    so_N is boxed on the even and odd subpartitions separately: equal even
    parts pair into C_k, equal odd parts pair into A_(2k), and a leftover odd
    part p takes the next odd part p - 2 along into D_(p-1)(a_((p-3)/2)), or
    else stands alone as B_((p-1)/2), G_2 for p = 7, C_1 for p = 3.
    """
    require_valid(algebra, p, allow_zero=True)
    if p.is_zero:
        logger.warning("%s in %s is the zero orbit, normal form is empty", p, algebra)
        return NormalForm()
    blocks = [block for block in _blocks(algebra, p) if block.copies]
    return NormalForm.of(((b.component, b.copies * b.summands) for b in blocks), blocks)


def partitions(algebra: ClassicalAlgebra, include_zero: bool = False) -> Iterator[Partition]:
    """Every partition labelling an orbit of the algebra, largest parts first."""
    for counts in integer_partitions(algebra.n):
        p = Partition(tuple(sorted(counts.items(), reverse=True)))
        if validate(algebra, p) is None and (include_zero or not p.is_zero):
            yield p
