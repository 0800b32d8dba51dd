"""Exceptional orbits - the G_2, F_4, E_6, E_7 and E_8 tables as a queryable dataset."""

import csv
import difflib
import logging
import re
import sys
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cache
from pathlib import Path

from sympy import Poly, Symbol, cancel, cyclotomic_poly
from sympy.parsing.sympy_parser import parse_expr

from classical import NilpotentType
from errors import DomainError
from normalform import TILDE, NormalForm, NormalFormComponent, parse_component, parse_normal_form
from rootdata import Root, SimpleType, build_root_system

logger = logging.getLogger(__name__)

ORBITS_FILE = "exceptional_orbits.tsv"
IRREDUCIBLE_FILE = "irreducible_orbits.tsv"
EXCEPTIONAL_FAMILIES = "EFG"
EXCEPTIONAL_TYPES = ("G2", "F4", "E6", "E7", "E8")

_x = Symbol("x")
_k = Symbol("k")


def data_path(name: str) -> Path:
    """Locate a shipped table, next to the sources or under the install prefix."""
    for directory in (Path(__file__).parent / "data", Path(sys.prefix) / "data"):
        if (directory / name).is_file():
            return directory / name
    raise FileNotFoundError(f"dataset {name} not found")


def _rows(name: str) -> Iterator[dict[str, str]]:
    with data_path(name).open(encoding="utf-8", newline="") as handle:
        lines = (line for line in handle if not line.startswith("#"))
        yield from csv.DictReader(lines, delimiter="\t")


# --- representatives ---------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """One root vector f_beta of the representative, beta positive."""

    root: Root
    coefficient: int = 1

    def __str__(self) -> str:
        return "f_" + "".join(str(c) for c in self.root)


GROUP_KINDS = ("plain", "bracketed", "parenthesized", "principal")


@dataclass(frozen=True)
class TermGroup:
    """Terms grouped as printed.

    Square brackets hold one summand f[j] of the normal form, parentheses a
    single root vector of a non-regular subalgebra, and "principal" stands for
    f', the sum of all negative simple root vectors.
    """

    kind: str
    items: tuple["Term | TermGroup", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in GROUP_KINDS:
            raise DomainError(f"unknown grouping {self.kind!r}")

    @property
    def terms(self) -> list[Term]:
        flat: list[Term] = []
        for item in self.items:
            flat.extend(item.terms if isinstance(item, TermGroup) else [item])
        return flat

    def __str__(self) -> str:
        if self.kind == "principal":
            return "f'"
        text = ""
        for item in self.items:
            negative = isinstance(item, Term) and item.coefficient < 0
            if text or negative:
                text += "-" if negative else "+"
            text += str(item)
        match self.kind:
            case "bracketed":
                return f"[{text}]"
            case "parenthesized":
                return f"({text})"
        return text


_TOKEN = re.compile(r"\s*(f_\d+|f'|[\[\]()+\-])")


class RepresentativeParser:
    """Reads the representative column: f_0100, f', +, -, [...] and (...)."""

    CLOSING = {"[": "]", "(": ")"}
    KINDS = {"[": "bracketed", "(": "parenthesized"}

    def __init__(self, rank: int):
        self.rank = rank

    def tokenize(self, text: str) -> list[str]:
        tokens, position = [], 0
        text = text.replace("−", "-").rstrip()
        while position < len(text):
            match = _TOKEN.match(text, position)
            if match is None:
                raise DomainError(f"cannot read representative {text!r} at {text[position:]!r}")
            tokens.append(match[1])
            position = match.end()
        return tokens

    def parse(self, text: str) -> TermGroup:
        self.tokens = self.tokenize(text)
        self.position = 0
        items = self._sequence(None)
        if self.position != len(self.tokens):
            raise DomainError(f"unbalanced representative {text!r}")
        return TermGroup("plain", tuple(items))

    def _peek(self) -> str | None:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _take(self) -> str:
        token = self._peek()
        if token is None:
            raise DomainError("representative ends early")
        self.position += 1
        return token

    def _sequence(self, closing: str | None) -> list["Term | TermGroup"]:
        items: list[Term | TermGroup] = []
        sign, expecting = 1, True
        while (token := self._peek()) is not None and token != closing:
            if token in "+-":
                self._take()
                sign, expecting = (-1 if token == "-" else 1), True
                continue
            if not expecting:
                raise DomainError(f"missing '+' before {token!r}")
            items.append(self._item(sign))
            sign, expecting = 1, False
        if expecting and items:
            raise DomainError("representative ends with a sign")
        return items

    def _item(self, sign: int) -> "Term | TermGroup":
        token = self._take()
        if token in self.CLOSING:
            if sign < 0:
                raise DomainError("signs apply to root vectors, not to groups")
            inner = self._sequence(self.CLOSING[token])
            if self._take() != self.CLOSING[token]:
                raise DomainError(f"unclosed {token!r}")
            return TermGroup(self.KINDS[token], tuple(inner))
        if token == "f'":
            simple = (tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank))
            return TermGroup("principal", tuple(Term(root) for root in simple))
        if token.startswith("f_"):
            digits = token[2:]
            if len(digits) != self.rank:
                raise DomainError(f"{token} has {len(digits)} digits, rank is {self.rank}")
            return Term(tuple(int(c) for c in digits), sign)
        raise DomainError(f"unexpected {token!r}")


# --- orbit records -----------------------------------------------------------


def display_label(label: str) -> str:
    """"~A_2+A_1" as printed: "Ã_2+A_1"."""
    return re.sub(r"~([A-G])", lambda m: m[1] + TILDE, label)


def label_key(text: str) -> str:
    """Comparison key for labels: spacing, underscores, braces, prime and tilde variants ignored."""
    text = text.replace("″", "''").replace("′", "'").replace("’", "'").replace("\\tilde", "~")
    text = re.sub(r"([A-Ga-g])" + TILDE, r"~\1", text)
    return re.sub(r"[\s_{}]", "", text).lower()


@dataclass(frozen=True)
class OrbitRecord:
    """One row of an exceptional table, members already combined with their leader.

    Attributes:
        type: The exceptional type
        label: Bala-Carter label, "~" marking a tilde
        aliases: Other names printed for the orbit
        depth: Printed depth d
        representative: Full representative, leader terms first for members
        normal_form: Full normal form
        embedding_tags: Embedding notes, e.g. "regular", "folding of A_3", "IV_{B_4⊂E_7}"
        leader: Label of the bush leader, None when the row leads its bush
        delta: Components a member adds to its leader's normal form
        dependent: The support of the representative is linearly dependent
        position: Row number within the type's table
    """

    type: SimpleType
    label: str
    aliases: tuple[str, ...]
    depth: int
    representative: TermGroup
    normal_form: NormalForm
    embedding_tags: tuple[str, ...]
    leader: str | None = None
    delta: NormalForm | None = field(default=None, repr=False)
    dependent: bool = False
    position: int = 0

    @property
    def terms(self) -> list[tuple[Root, int]]:
        return [(term.root, term.coefficient) for term in self.representative.terms]

    @property
    def is_leader(self) -> bool:
        return self.leader is None

    @property
    def bush_role(self) -> str:
        return "leader" if self.is_leader else "member"

    @property
    def nilpotent_type(self) -> NilpotentType:
        if self.depth % 2:
            return NilpotentType.NILPOTENT
        return NilpotentType.SEMISIMPLE if self.is_leader else NilpotentType.MIXED

    @property
    def reduced_depth(self) -> int:
        return self.depth - self.depth % 2

    @property
    def display_label(self) -> str:
        return display_label(self.label)

    def __str__(self) -> str:
        return f"{self.type} {self.display_label}"


def _tags(text: str) -> list[str]:
    return [tag.strip() for tag in text.lstrip("+").split("+") if tag.strip()]


def _member_part(text: str, column: str, label: str) -> str:
    if not text.startswith("+"):
        raise DomainError(f"bush member {label}: {column} must start with '+', got {text!r}")
    return text[1:]


def _load_orbits() -> dict[SimpleType, tuple[OrbitRecord, ...]]:
    tables: dict[SimpleType, list[OrbitRecord]] = {}
    for row in _rows(ORBITS_FILE):
        t = SimpleType.parse(row["type"])
        system = build_root_system(t)
        parser = RepresentativeParser(t.rank)
        table = tables.setdefault(t, [])
        label = row["label"]
        aliases = tuple(a for a in row["aliases"].split(";") if a)
        tags = _tags(row["embedding"])

        if row["depth"]:
            representative = parser.parse(row["representative"])
            record = OrbitRecord(
                type=t,
                label=label,
                aliases=aliases,
                depth=int(row["depth"]),
                representative=representative,
                normal_form=parse_normal_form(row["normal_form"]),
                embedding_tags=tuple(tags),
                dependent=row["dependent"] == "yes",
                position=len(table),
            )
        else:
            leader = next((r for r in reversed(table) if r.is_leader), None)
            if leader is None:
                raise DomainError(f"{t} {label}: bush member before any leader")
            delta_terms = parser.parse(_member_part(row["representative"], "representative", label))
            delta = parse_normal_form(_member_part(row["normal_form"], "normal form", label))
            record = OrbitRecord(
                type=t,
                label=label,
                aliases=aliases,
                depth=leader.depth,
                representative=TermGroup("plain", leader.representative.items + delta_terms.items),
                normal_form=leader.normal_form.plus(delta),
                embedding_tags=tuple(dict.fromkeys([*leader.embedding_tags, *tags])),
                leader=leader.label,
                delta=delta,
                dependent=row["dependent"] == "yes",
                position=len(table),
            )

        for root, _ in record.terms:
            if not system.is_root(root) or sum(root) <= 0:
                raise DomainError(f"{record}: {root} is not a positive root of {t}")
        table.append(record)
    logger.debug("loaded %d exceptional orbits", sum(len(v) for v in tables.values()))
    return {t: tuple(rows) for t, rows in tables.items()}


@cache
def _orbits() -> dict[SimpleType, tuple[OrbitRecord, ...]]:
    return _load_orbits()


def exceptional_type(t: SimpleType | str) -> SimpleType:
    t = SimpleType.parse(t) if isinstance(t, str) else t
    if not t.is_exceptional:
        raise DomainError(f"{t} is classical; its orbits are labelled by partitions")
    return t


def records(t: SimpleType | str) -> list[OrbitRecord]:
    """All nonzero orbits of an exceptional type, by depth then table order."""
    rows = _orbits()[exceptional_type(t)]
    return sorted(rows, key=lambda r: (r.depth, r.position))


def lookup(t: SimpleType | str, label: str) -> OrbitRecord:
    """The record named by a label or one of its aliases.

    Labels match first; an alias is consulted only when no label does, so
    "A_5+A_1" in E_7 is the row of that name although E_6(a_3) carries
    "(A_5+A_1)'" as an alias.
    """
    t = exceptional_type(t)
    rows = _orbits()[t]
    key = label_key(label)
    for record in rows:
        if label_key(record.label) == key:
            return record
    for record in rows:
        if any(label_key(alias) == key for alias in record.aliases):
            return record

    names = {label_key(name): record.label for record in rows for name in (record.label, *record.aliases)}
    nearest = difflib.get_close_matches(key, names, n=3, cutoff=0.5)
    hint = f"; nearest: {', '.join(dict.fromkeys(names[k] for k in nearest))}" if nearest else ""
    raise DomainError(f"{t} has no orbit {label!r}{hint}")


def bush(t: SimpleType | str, label: str) -> list[OrbitRecord]:
    """The bush containing an orbit: its leader first, then members in table order."""
    record = lookup(t, label)
    leader = record.leader or record.label
    rows = _orbits()[record.type]
    return [r for r in rows if r.label == leader] + [r for r in rows if r.leader == leader]


# --- irreducible orbits ------------------------------------------------------


@dataclass(frozen=True)
class IrreducibleRecord:
    """An irreducible nilpotent kind with its weighted diagram and Weyl class data.

    Attributes:
        component: The kind, unmarked
        printed_diagram: Dynkin labels in the printed node order
        depth: Depth d
        dim_gd: Dimension of the top graded piece g_d
        zs_action: How Z(s) acts on g_d, e.g. "sigma_3+1"
        weyl_diagram: Kac coordinates of the Weyl element, as printed
        order: Order of the Weyl element
        charpoly: Characteristic polynomial of the Weyl element on the Cartan
    """

    component: NormalFormComponent
    printed_diagram: tuple[int, ...]
    depth: int
    dim_gd: int
    zs_action: str
    weyl_diagram: tuple[int, ...]
    order: int
    charpoly: Poly

    @property
    def labels(self) -> tuple[int, ...]:
        """Dynkin labels in Bourbaki order."""
        return diagram_labels(self.component.family, self.printed_diagram)


def diagram_labels(family: str, printed: Sequence[int]) -> tuple[int, ...]:
    """Printed diagram to Bourbaki order.

    The E and F diagrams are printed with alpha_2 first, so the first two
    entries trade places; every other family prints in Bourbaki order.
    """
    labels = tuple(printed)
    if family in "EF" and len(labels) >= 2:
        return (labels[1], labels[0], *labels[2:])
    return labels


def _parameterised_diagrams(family: str, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    match family:
        case "A":
            return (2,) * (2 * k), (1,) * (2 * k + 1)
        case "B" | "C":
            return (2,) * k, (1,) * (k + 1)
        case "D":
            return (2, 0) * k + (2, 2), (1, 1) + (0, 1) * (k - 1) + (0, 1, 1)
    raise DomainError(f"no parameterised diagram for family {family}")


def _parameter(component: NormalFormComponent) -> int:
    match component.family:
        case "A":
            return component.rank // 2
        case "D":
            return component.a or 0
    return component.rank


def _evaluate(text: str, k: int) -> object:
    phi = lambda n: cyclotomic_poly(n, _x)  # noqa: E731
    return parse_expr(text, local_dict={"x": _x, "k": _k, "phi": phi}).subs(_k, k)


@cache
def _irreducible_rows() -> dict[str, dict[str, str]]:
    rows = {}
    for row in _rows(IRREDUCIBLE_FILE):
        key = row["component"]
        if "k" in key:
            key = key[0]
        rows[key] = row
    return rows


def irreducible(component: NormalFormComponent | str) -> IrreducibleRecord:
    """The catalogue row of an irreducible kind, parameterised rows instantiated."""
    if isinstance(component, str):
        component, count = parse_component(component)
        if count != 1:
            raise DomainError("an irreducible kind takes no multiplicity")
    component = component.unmarked()
    rows = _irreducible_rows()
    if component.family in EXCEPTIONAL_FAMILIES:
        row = rows.get(component.kind_label)
        if row is None:
            raise DomainError(f"{component} is not in the irreducible catalogue")
        printed = tuple(int(c) for c in row["diagram"])
        weyl_diagram = tuple(int(c) for c in row["weyl_diagram"])
        k = 0
    else:
        row = rows[component.family]
        k = _parameter(component)
        printed, weyl_diagram = _parameterised_diagrams(component.family, k)
    return IrreducibleRecord(
        component=component,
        printed_diagram=printed,
        depth=int(_evaluate(row["depth"], k)),
        dim_gd=int(row["dim_gd"]),
        zs_action=row["zs_action"],
        weyl_diagram=weyl_diagram,
        order=int(_evaluate(row["order"], k)),
        charpoly=Poly(cancel(_evaluate(row["charpoly"], k)), _x),
    )


def exceptional_irreducibles() -> list[IrreducibleRecord]:
    """The fourteen exceptional rows of the catalogue."""
    kinds = [key for key in _irreducible_rows() if key[0] in EXCEPTIONAL_FAMILIES]
    return [irreducible(kind) for kind in kinds]


# --- embeddings --------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """How the subalgebra carrying a component sits in g."""

    code: str
    kind: str
    description: str


EMBEDDINGS = (
    Embedding("I", "regular", "regular subalgebra: simple roots are roots of g"),
    Embedding("II(1)_n", "folding", "B_n in A_2n as the fixed points of the diagram involution"),
    Embedding("II(2)_n", "folding", "C_n in A_(2n-1) as the fixed points of the diagram involution"),
    Embedding("II(3)_n", "folding", "B_n in D_(n+1) as the fixed points of the diagram involution"),
    Embedding("II(4)", "folding", "G_2 in D_4 as the fixed points of triality"),
    Embedding("II(5)", "folding", "F_4 in E_6 as the fixed points of the diagram involution"),
    Embedding("III(1)", "restriction", "G_2 in B_3: e_1 and e_2+e_3 are the root vectors of the simple roots of G_2"),
    Embedding("III(2)", "restriction", "so_n1 + ... + so_nt in so_(n1+...+nt)"),
    Embedding("III(3)_n", "restriction", "sl_n in sp_2n"),
    Embedding("III(4)_n", "restriction", "sl_n in so_2n"),
    Embedding("IV_{B_3⊂D_4}", "centralizer", "B_3 folded from D_4; its centralizer is C_1"),
    Embedding("IV_{B_4⊂E_7}", "centralizer", "B_4 folded from D_5 in E_7; centralizer C_1 + C_1', C_1 regular, C_1' not"),
    Embedding("IV_{F_4⊂E_7}", "centralizer", "F_4 folded from E_6 in E_7; centralizer C_1"),
    Embedding("IV_{B_4⊂E_8}", "centralizer", "B_4 folded from D_5 in E_8; centralizer B_3 holding B_2 and C_1+~C_1 as regular subalgebras"),
    Embedding("IV_{B_3⊂E_8}", "centralizer", "B_3 folded from D_4 in E_8; centralizer B_4"),
    Embedding("IV_{B_5⊂E_8}", "centralizer", "B_5 folded from D_6 in E_8; centralizer B_2 = C_2"),
    Embedding("IV_{F_4⊂E_8}", "centralizer", "F_4 folded from E_6 in E_8; centralizer G_2, whose own centralizer is F_4"),
)


def embedding_catalogue() -> dict[str, Embedding]:
    return {embedding.code: embedding for embedding in EMBEDDINGS}


def _folding_code(folded: str) -> str:
    match = re.fullmatch(r"([A-G])_(\d+)", folded)
    if match is None:
        raise DomainError(f"cannot read the folded algebra {folded!r}")
    family, rank = match[1], int(match[2])
    if family == "A":
        return f"II(1)_{rank // 2}" if rank % 2 == 0 else f"II(2)_{(rank + 1) // 2}"
    if (family, rank) == ("D", 4):
        return "II(4)"
    if family == "D":
        return f"II(3)_{rank - 1}"
    if (family, rank) == ("E", 6):
        return "II(5)"
    raise DomainError(f"no folding of {folded} is catalogued")


def resolve_embedding(tag: str) -> Embedding:
    """The catalogue entry behind an embedding tag of the tables."""
    catalogue = embedding_catalogue()
    if tag == "regular":
        return catalogue["I"]
    folding = re.fullmatch(r"(?:\d+ )?foldings? of (\S+)", tag)
    if folding:
        code = _folding_code(folding[1])
        template = re.sub(r"_\d+$", "_n", code)
        return Embedding(code, "folding", catalogue[template].description)
    if tag in catalogue:
        return catalogue[tag]
    raise DomainError(f"unknown embedding {tag!r}")
