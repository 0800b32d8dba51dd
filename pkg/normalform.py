"""Normal forms - sums of irreducible nilpotents, in the notation of the tables."""

import re
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property

from errors import DomainError

TILDE = "̃"

# Depth of each exceptional irreducible, keyed by (family, rank, a-index)
EXCEPTIONAL_DEPTHS: dict[tuple[str, int, int | None], int] = {
    ("G", 2, None): 10,
    ("F", 4, None): 22,
    ("F", 4, 2): 10,
    ("E", 6, 1): 16,
    ("E", 7, None): 34,
    ("E", 7, 1): 26,
    ("E", 7, 5): 10,
    ("E", 8, None): 58,
    ("E", 8, 1): 46,
    ("E", 8, 2): 38,
    ("E", 8, 4): 28,
    ("E", 8, 5): 22,
    ("E", 8, 6): 18,
    ("E", 8, 7): 10,
}

# Presentation order of kinds sharing a depth
PRECEDENCE = {"C": 0, "A": 1, "B": 2, "D": 3, "G": 4, "E": 5, "F": 5}

MARKS = ("", "~", "'", "''")


@dataclass(frozen=True)
class NormalFormComponent:
    """One irreducible summand f[j], a row of the irreducible catalogue.

    Attributes:
        family: Cartan-Killing letter
        rank: Rank of the subalgebra g[j]
        a: The index k of a distinguished label X(a_k), None for principal kinds
        mark: Table decoration ("~", "'" or "''"); never changes depth or Weyl data
    """

    family: str
    rank: int
    a: int | None = None
    mark: str = ""

    def __post_init__(self) -> None:
        if self.mark not in MARKS:
            raise DomainError(f"unknown decoration {self.mark!r}")
        if not self._admissible():
            raise DomainError(f"{self.kind_label} is not an irreducible nilpotent")

    def _admissible(self) -> bool:
        family, rank, a = self.family, self.rank, self.a
        match family:
            case "A":
                return a is None and rank >= 2 and rank % 2 == 0
            case "C":
                return a is None and rank >= 1
            case "B":
                return a is None and rank >= 2 and rank != 3
            case "D":
                return a is not None and a >= 1 and rank == 2 * a + 2
        return (family, rank, a) in EXCEPTIONAL_DEPTHS

    @property
    def kind(self) -> tuple[str, int, int | None]:
        return (self.family, self.rank, self.a)

    @property
    def intrinsic_depth(self) -> int:
        """Depth of the component inside its own algebra g[j]."""
        match self.family:
            case "A":
                return 2 * self.rank
            case "B" | "C":
                return 4 * self.rank - 2
            case "D":
                return 2 * self.rank - 2
        return EXCEPTIONAL_DEPTHS[self.kind]

    @property
    def kind_label(self) -> str:
        text = f"{self.family}_{self.rank}"
        return text if self.a is None else f"{text}(a_{self.a})"

    @property
    def label(self) -> str:
        """Table notation, e.g. "D_16(a_7)", "C̃_1" or "C_1'"."""
        text = self.kind_label
        if self.mark == "~":
            return text[0] + TILDE + text[1:]
        return text + self.mark

    def unmarked(self) -> "NormalFormComponent":
        return NormalFormComponent(self.family, self.rank, self.a)

    def sort_key(self) -> tuple[int, int, int, int]:
        return (-self.intrinsic_depth, PRECEDENCE[self.family], -self.rank, -(self.a or 0))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Block:
    """Where a classical component comes from.

    Attributes:
        component: The component each copy contributes
        parts: Partition parts consumed by one copy
        copies: Number of copies
        summands: Components produced per copy (2 for the (3,1) box)
    """

    component: NormalFormComponent
    parts: tuple[int, ...]
    copies: int = 1
    summands: int = 1

    @property
    def size(self) -> int:
        return sum(self.parts)


@dataclass(frozen=True, eq=False)
class NormalForm:
    """f = sum of f[j], as (component, multiplicity) terms in canonical order.

    Equality is multiset equality of terms, so the order within a depth
    and the recorded blocks do not matter.
    """

    terms: tuple[tuple[NormalFormComponent, int], ...] = ()
    blocks: tuple[Block, ...] = field(default=(), repr=False)

    @classmethod
    def of(
        cls,
        components: Iterable[NormalFormComponent | tuple[NormalFormComponent, int]],
        blocks: Iterable[Block] = (),
    ) -> "NormalForm":
        """Merge repeated components and sort by depth, kind and rank."""
        counts: Counter[NormalFormComponent] = Counter()
        for item in components:
            component, multiplicity = item if isinstance(item, tuple) else (item, 1)
            if multiplicity < 1:
                raise DomainError(f"multiplicity {multiplicity} of {component} must be positive")
            counts[component] += multiplicity
        ordered = sorted(counts.items(), key=lambda term: term[0].sort_key())
        return cls(terms=tuple(ordered), blocks=tuple(blocks))

    @cached_property
    def _multiset(self) -> Counter[NormalFormComponent]:
        counts: Counter[NormalFormComponent] = Counter()
        for component, multiplicity in self.terms:
            counts[component] += multiplicity
        return counts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._multiset == other._multiset

    def __hash__(self) -> int:
        return hash(frozenset(self._multiset.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[NormalFormComponent]:
        """Components with repetition, in canonical order."""
        for component, multiplicity in self.terms:
            for _ in range(multiplicity):
                yield component

    def __len__(self) -> int:
        return sum(m for _, m in self.terms)

    @property
    def depth(self) -> int:
        """Largest intrinsic depth, 0 for the empty normal form."""
        return max((c.intrinsic_depth for c, _ in self.terms), default=0)

    @property
    def rank(self) -> int:
        return sum(c.rank * m for c, m in self.terms)

    def unmarked(self) -> "NormalForm":
        return NormalForm.of(((c.unmarked(), m) for c, m in self.terms), self.blocks)

    def plus(self, other: "NormalForm") -> "NormalForm":
        """Multiset sum, as for a bush member: leader + delta."""
        return NormalForm.of([*self.terms, *other.terms], [*self.blocks, *other.blocks])

    def __str__(self) -> str:
        return render(self)


def _render_term(component: NormalFormComponent, multiplicity: int) -> str:
    if multiplicity == 1:
        return component.label
    if component.mark in ("'", "''"):
        return f"({multiplicity}{component.unmarked().label}){component.mark}"
    return f"{multiplicity}{component.label}"


def render(nf: NormalForm) -> str:
    """Table notation; kinds sharing a depth are grouped in parentheses."""
    if not nf:
        return "0"
    pieces: list[str] = []
    by_depth: dict[int, list[tuple[NormalFormComponent, int]]] = {}
    for component, multiplicity in nf.terms:
        by_depth.setdefault(component.intrinsic_depth, []).append((component, multiplicity))
    for terms in by_depth.values():
        text = "+".join(_render_term(c, m) for c, m in terms)
        if len({c.kind for c, _ in terms}) > 1:
            text = f"({text})"
        pieces.append(text)
    return "+".join(pieces)


_COMPONENT = re.compile(
    r"""^(?P<count>\d*)
        (?P<pre>~?)
        (?P<family>[A-Ga-g])
        (?P<tilde>~|̃)?
        _?\{?(?P<rank>\d+)\}?
        (?:\(a_?\{?(?P<a>\d+)\}?\))?
        (?P<mark>'*)$""",
    re.VERBOSE,
)


def _normalize(text: str) -> str:
    return (
        text.replace("″", "''")
        .replace("′", "'")
        .replace("’", "'")
        .replace("−", "-")
        .replace(" ", "")
    )


def _split(text: str) -> list[str]:
    """Split on top-level '+'."""
    items, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DomainError(f"unbalanced parentheses in {text!r}")
        elif ch == "+" and depth == 0:
            items.append(text[start:i])
            start = i + 1
    if depth:
        raise DomainError(f"unbalanced parentheses in {text!r}")
    items.append(text[start:])
    return items


def parse_component(text: str, mark: str = "") -> tuple[NormalFormComponent, int]:
    """Read one term such as "4A_22", "D_16(a_7)", "C̃_1" or "C_1'"."""
    match = _COMPONENT.match(_normalize(text))
    if match is None:
        raise DomainError(f"cannot read a normal form component from {text!r}")
    family = match["family"].upper()
    rank = int(match["rank"])
    a = int(match["a"]) if match["a"] else None
    if family in "AB" and rank == 1 and a is None:
        family = "C"
    own_mark = "~" if match["pre"] or match["tilde"] else match["mark"]
    if match["mark"] and (match["pre"] or match["tilde"]):
        raise DomainError(f"{text!r} carries two decorations")
    count = int(match["count"]) if match["count"] else 1
    return NormalFormComponent(family, rank, a, mark or own_mark), count


def _parse_items(text: str, mark: str = "") -> list[tuple[NormalFormComponent, int]]:
    terms = []
    for item in _split(text):
        if not item:
            raise DomainError(f"empty summand in {text!r}")
        group = re.match(r"^(\d*)\((.*)\)('*)$", item)
        if group and not re.match(r"^\d*[A-Ga-g]", item):
            count = int(group[1]) if group[1] else 1
            inner = _parse_items(group[2], group[3] or mark)
            terms.extend((c, m * count) for c, m in inner)
        else:
            terms.append(parse_component(item, mark))
    return terms


def parse_normal_form(text: str) -> NormalForm:
    """Read table notation, e.g. "2C_10+2A_16+(2C_2+D_4(a_1))" or "(3C_1)''".

    "0" and the empty string read as the empty normal form.
    """
    cleaned = _normalize(text.strip())
    if cleaned in ("", "0"):
        return NormalForm()
    return NormalForm.of(_parse_items(cleaned))
