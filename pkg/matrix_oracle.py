"""Matrix oracle - certify classical results with explicit exact matrices.

Every orbit is built inside a formed space V = sum of blocks, each block
either self-dual (one Jordan chain, antidiagonal form with alternating signs)
or a pair U + U* of isotropic chains. The oracle never consults the depth or
type formulas it is used to check.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from sympy import QQ, Rational, SparseMatrix
from sympy.polys.matrices import DomainMatrix

import classical
from classical import ClassicalAlgebra, Partition
from errors import DomainError, VerificationError
from normalform import Block, NormalForm, NormalFormComponent

logger = logging.getLogger(__name__)

ExactMatrix = SparseMatrix

FORM_KINDS = {"sl": "none", "so": "symmetric", "sp": "antisymmetric"}


@dataclass(frozen=True)
class FormedSpace:
    """An N-dimensional space with the form the algebra preserves.

    Attributes:
        dimension: N
        form_kind: "none" (sl), "symmetric" (so) or "antisymmetric" (sp)
        gram: Gram matrix of the form, None for sl
    """

    dimension: int
    form_kind: str
    gram: ExactMatrix | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.form_kind not in FORM_KINDS.values():
            raise DomainError(f"unknown form kind {self.form_kind!r}")
        if self.form_kind == "none":
            return
        if self.gram is None or self.gram.shape != (self.dimension, self.dimension):
            raise DomainError(f"a {self.form_kind} space needs a {self.dimension}x{self.dimension} gram matrix")
        sign = 1 if self.form_kind == "symmetric" else -1
        if self.gram.T != sign * self.gram:
            raise DomainError(f"gram matrix is not {self.form_kind}")
        if _rank(self.gram) != self.dimension:
            raise DomainError("gram matrix is degenerate")

    @property
    def series(self) -> str:
        return next(s for s, kind in FORM_KINDS.items() if kind == self.form_kind)

    @cached_property
    def gram_inverse(self) -> ExactMatrix:
        entries = {k: v for k, v in self.gram.todok().items() if v}
        rows = {i for i, _ in entries}
        columns = {j for _, j in entries}
        if len(entries) == len(rows) == len(columns) == self.dimension:
            # monomial: invert entry by entry
            return SparseMatrix(self.dimension, self.dimension, {(j, i): 1 / v for (i, j), v in entries.items()})
        return self.gram.inv()

    def contains(self, m: ExactMatrix) -> bool:
        """Membership in sl(V), so(V) or sp(V)."""
        if m.shape != (self.dimension, self.dimension):
            return False
        if self.form_kind == "none":
            return m.trace() == 0
        return (m.T * self.gram + self.gram * m).is_zero_matrix


def _rank(m: ExactMatrix) -> int:
    return DomainMatrix.from_Matrix(m).convert_to(QQ).rank()


def lower_shift(n: int) -> dict[tuple[int, int], Rational]:
    """J_n: v_i -> v_(i+1)."""
    return {(i + 1, i): Rational(1) for i in range(n - 1)}


def _self_dual_gram(n: int) -> dict[tuple[int, int], Rational]:
    return {(a, n - 1 - a): Rational((-1) ** a) for a in range(n)}


def _paired_gram(n: int, sign: int) -> dict[tuple[int, int], Rational]:
    entries = {(i, n + i): Rational(1) for i in range(n)}
    entries.update({(n + i, i): Rational(sign) for i in range(n)})
    return entries


def _paired_nilpotent(n: int) -> dict[tuple[int, int], Rational]:
    """diag(J_n, -J_n^T) on U + U*."""
    entries = dict(lower_shift(n))
    entries.update({(n + i, n + i + 1): Rational(-1) for i in range(n - 1)})
    return entries


@dataclass
class _Piece:
    """A block of V: its gram, and the component nilpotents living on it."""

    size: int
    gram: dict[tuple[int, int], Rational]
    matrices: list[dict[tuple[int, int], Rational]]
    component: NormalFormComponent | None = None


def _assemble(kind: str, pieces: Sequence[_Piece]) -> tuple[FormedSpace, list[tuple[int, _Piece]]]:
    total = sum(piece.size for piece in pieces)
    gram: dict[tuple[int, int], Rational] = {}
    placed = []
    offset = 0
    for piece in pieces:
        for (i, j), v in piece.gram.items():
            gram[(offset + i, offset + j)] = v
        placed.append((offset, piece))
        offset += piece.size
    matrix = None if kind == "none" else SparseMatrix(total, total, gram)
    return FormedSpace(total, kind, matrix), placed


def _shifted(entries: dict[tuple[int, int], Rational], offset: int, n: int) -> ExactMatrix:
    return SparseMatrix(n, n, {(i + offset, j + offset): v for (i, j), v in entries.items()})


def _self_dual_piece(n: int, kind: str) -> _Piece:
    return _Piece(n, {} if kind == "none" else _self_dual_gram(n), [lower_shift(n)])


def _paired_piece(n: int, sign: int) -> _Piece:
    return _Piece(2 * n, _paired_gram(n, sign), [_paired_nilpotent(n)])


def _trivial_pieces(algebra: ClassicalAlgebra, count: int) -> list[_Piece]:
    if algebra.series == "sp":
        return [_Piece(2, _self_dual_gram(2), []) for _ in range(count // 2)]
    kind = FORM_KINDS[algebra.series]
    return [_Piece(1, {} if kind == "none" else {(0, 0): Rational(1)}, []) for _ in range(count)]


def nilpotent_from_partition(algebra: ClassicalAlgebra, p: Partition) -> tuple[FormedSpace, ExactMatrix]:
    """A nilpotent of Jordan type p in the algebra, with its formed space."""
    classical.require_valid(algebra, p, allow_zero=True)
    kind = FORM_KINDS[algebra.series]
    pieces: list[_Piece] = []
    for part, multiplicity in p.parts:
        if algebra.series == "sl" or (algebra.series == "so") == (part % 2 == 1):
            pieces.extend(_self_dual_piece(part, kind) for _ in range(multiplicity))
        else:
            sign = 1 if algebra.series == "so" else -1
            pieces.extend(_paired_piece(part, sign) for _ in range(multiplicity // 2))
    space, placed = _assemble(kind, pieces)
    entries = {
        (i + offset, j + offset): v
        for offset, piece in placed
        for m in piece.matrices
        for (i, j), v in m.items()
    }
    return space, SparseMatrix(space.dimension, space.dimension, entries)


def jordan_type(m: ExactMatrix) -> Partition:
    """Jordan type of a nilpotent from the ranks of its powers."""
    n = m.shape[0]
    base = DomainMatrix.from_Matrix(m).convert_to(QQ)
    ranks = [n]
    power = base
    while ranks[-1]:
        if len(ranks) > n:
            raise DomainError("matrix is not nilpotent")
        ranks.append(power.rank())
        power = power * base
    # parts >= k number ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for k, count in enumerate(at_least, start=1):
        exact = count - (at_least[k] if k < len(at_least) else 0)
        parts.extend([k] * exact)
    return Partition.from_parts(parts)


def _chains(f: ExactMatrix) -> list[list[tuple[int, Rational]]]:
    """Jordan chains of a monomial nilpotent: [(v_0, c_0), (v_1, c_1), ...] with f v_i = c_i v_(i+1)."""
    n = f.shape[0]
    image: dict[int, tuple[int, Rational]] = {}
    has_source: set[int] = set()
    for (row, col), value in f.todok().items():
        if not value:
            continue
        if col in image or row in has_source:
            raise DomainError("sl2 completion needs a monomial nilpotent (one entry per row and column)")
        image[col] = (row, value)
        has_source.add(row)
    chains = []
    for start in range(n):
        if start in has_source:
            continue
        chain, v, seen = [], start, set()
        while True:
            if v in seen:
                raise DomainError("matrix is not nilpotent")
            seen.add(v)
            target = image.get(v)
            chain.append((v, target[1] if target else Rational(0)))
            if target is None:
                break
            v = target[0]
        chains.append(chain)
    if sum(len(c) for c in chains) != n:
        raise DomainError("matrix is not nilpotent")
    return chains


def sl2_complete_matrix(f: ExactMatrix, space: FormedSpace) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """(e, h, f) for a block-structured nilpotent, chain by chain.

    On a chain v_0 -> ... -> v_(n-1): h v_i = (n-1-2i) v_i and
    e v_(i+1) = (i+1)(n-1-i)/c_i v_i.
    """
    n = space.dimension
    h_entries: dict[tuple[int, int], Rational] = {}
    e_entries: dict[tuple[int, int], Rational] = {}
    for chain in _chains(f):
        length = len(chain)
        for i, (v, c) in enumerate(chain):
            if length - 1 - 2 * i:
                h_entries[(v, v)] = Rational(length - 1 - 2 * i)
            if i + 1 < length:
                e_entries[(v, chain[i + 1][0])] = Rational((i + 1) * (length - 1 - i)) / c
    e = SparseMatrix(n, n, e_entries)
    h = SparseMatrix(n, n, h_entries)
    if e * f - f * e != h or h * e - e * h != 2 * e or h * f - f * h != -2 * f:
        raise VerificationError("sl2 relations fail for the chain construction")
    if not (space.contains(e) and space.contains(h)):
        raise VerificationError(f"completed triple leaves {space.series}")
    return e, h, f


def _basis(space: FormedSpace) -> Iterable[dict[tuple[int, int], Rational]]:
    """A spanning set of the algebra by elementary matrices, projected onto it."""
    n = space.dimension
    if space.form_kind == "none":
        for i in range(n):
            for j in range(n):
                if i != j:
                    yield {(i, j): Rational(1)}
        for i in range(n - 1):
            yield {(i, i): Rational(1), (i + 1, i + 1): Rational(-1)}
        return
    inverse = space.gram_inverse.todok()
    gram = space.gram.todok()
    inverse_columns: dict[int, list[tuple[int, Rational]]] = {}
    for (a, j), v in inverse.items():
        inverse_columns.setdefault(j, []).append((a, v))
    gram_rows: dict[int, list[tuple[int, Rational]]] = {}
    for (i, b), v in gram.items():
        gram_rows.setdefault(i, []).append((b, v))
    for i in range(n):
        for j in range(n):
            # E_ij - G^-1 E_ji G
            entries = {(i, j): Rational(1)}
            for a, u in inverse_columns.get(j, []):
                for b, w in gram_rows.get(i, []):
                    entries[(a, b)] = entries.get((a, b), Rational(0)) - u * w
            entries = {k: v for k, v in entries.items() if v}
            if entries:
                yield entries


def ad_depth(space: FormedSpace, h: ExactMatrix) -> int:
    """Largest eigenvalue of ad h on the algebra of the space."""
    if any(i != j for (i, j), v in h.todok().items() if v):
        raise DomainError("ad_depth needs a diagonal h")
    values = [h[i, i] for i in range(space.dimension)]
    if any(not v.is_integer for v in values):
        raise DomainError("ad_depth needs integer eigenvalues")
    best = None
    for element in _basis(space):
        (i, j), _ = next(iter(element.items()))
        eigenvalue = values[i] - values[j]
        if any(values[a] - values[b] != eigenvalue for a, b in element):
            raise VerificationError(f"basis element at ({i}, {j}) is not an ad h eigenvector")
        best = eigenvalue if best is None else max(best, eigenvalue)
    return int(best or 0)


@dataclass(frozen=True)
class ComponentMatrix:
    """One normal form component, embedded in V and in its own block algebra.

    Attributes:
        component: The irreducible it realizes
        matrix: The nilpotent in the ambient algebra
        block: Formed space of its block
        local: The same nilpotent on the block alone
        offset: First coordinate of the block in V
    """

    component: NormalFormComponent
    matrix: ExactMatrix
    block: FormedSpace
    local: ExactMatrix
    offset: int


def _three_one_piece() -> _Piece:
    """The (3,1) box: two commuting C_1 nilpotents in so_4 on U + U*, U of dimension 2."""
    twisted = {(3, 0): Rational(-1), (2, 1): Rational(1)}
    return _Piece(4, _paired_gram(2, 1), [_paired_nilpotent(2), twisted], NormalFormComponent("C", 1))


def _block_pieces(algebra: ClassicalAlgebra, block: Block) -> list[_Piece]:
    kind = FORM_KINDS[algebra.series]
    pieces = []
    for _ in range(block.copies):
        if block.parts == (3, 1):
            piece = _three_one_piece()
        elif len(block.parts) == 1:
            piece = _self_dual_piece(block.parts[0], kind)
        elif block.parts[0] == block.parts[1]:
            piece = _paired_piece(block.parts[0], 1 if algebra.series == "so" else -1)
        else:
            # two self-dual chains p, p - 2 sharing one orthogonal algebra
            p, q = block.parts
            gram = dict(_self_dual_gram(p))
            gram.update({(p + i, p + j): v for (i, j), v in _self_dual_gram(q).items()})
            chain = dict(lower_shift(p))
            chain.update({(p + i, p + j): v for (i, j), v in lower_shift(q).items()})
            piece = _Piece(p + q, gram, [chain])
        piece.component = block.component
        pieces.append(piece)
    return pieces


def _realize(algebra: ClassicalAlgebra, p: Partition) -> tuple[FormedSpace, NormalForm, list[ComponentMatrix]]:
    nf = classical.normal_form(algebra, p)
    kind = FORM_KINDS[algebra.series]
    pieces = [piece for block in nf.blocks for piece in _block_pieces(algebra, block)]
    used = sum(piece.size for piece in pieces)
    pieces.extend(_trivial_pieces(algebra, algebra.n - used))
    space, placed = _assemble(kind, pieces)
    components = []
    for offset, piece in placed:
        if piece.component is None:
            continue
        block_space = FormedSpace(
            piece.size, kind, None if kind == "none" else SparseMatrix(piece.size, piece.size, piece.gram)
        )
        for entries in piece.matrices:
            components.append(
                ComponentMatrix(
                    component=piece.component,
                    matrix=_shifted(entries, offset, space.dimension),
                    block=block_space,
                    local=SparseMatrix(piece.size, piece.size, entries),
                    offset=offset,
                )
            )
    return space, nf, components


def realize_normal_form(algebra: ClassicalAlgebra, p: Partition) -> list[ComponentMatrix]:
    """One matrix per normal form component, on disjoint coordinate blocks of V."""
    return _realize(algebra, p)[2]


@dataclass
class OracleReport:
    """Outcome of certifying one classical normal form."""

    algebra: ClassicalAlgebra
    partition: Partition
    normal_form: NormalForm
    commute: bool = False
    in_algebra: bool = False
    jordan_type: bool = False
    depth: bool = False
    reduced_depth: bool = False
    component_depths: bool = False
    oracle_depth: int | None = None
    failures: list[str] = field(default_factory=list)

    FLAGS = ("commute", "in_algebra", "jordan_type", "depth", "reduced_depth", "component_depths")

    @property
    def ok(self) -> bool:
        return all(getattr(self, flag) for flag in self.FLAGS)

    def as_dict(self) -> dict[str, object]:
        return {
            "algebra": str(self.algebra),
            "partition": str(self.partition),
            "normal_form": str(self.normal_form),
            **{flag: getattr(self, flag) for flag in self.FLAGS},
            "oracle_depth": self.oracle_depth,
            "failures": list(self.failures),
        }


def oracle_depth(algebra: ClassicalAlgebra, p: Partition) -> int:
    space, f = nilpotent_from_partition(algebra, p)
    _, h, _ = sl2_complete_matrix(f, space)
    return ad_depth(space, h)


def _commute(matrices: Sequence[ExactMatrix]) -> bool:
    converted = [DomainMatrix.from_Matrix(m).convert_to(QQ) for m in matrices]
    return all((a * b - b * a).is_zero_matrix for a, b in combinations(converted, 2))


def verify_normal_form(algebra: ClassicalAlgebra, p: Partition) -> OracleReport:
    """Certify the normal form of p; failures land in the report, not in exceptions."""
    space, nf, components = _realize(algebra, p)
    report = OracleReport(algebra=algebra, partition=p, normal_form=nf)

    report.commute = _commute([c.matrix for c in components])
    if not report.commute:
        report.failures.append("components do not commute")

    report.in_algebra = all(space.contains(c.matrix) for c in components)
    if not report.in_algebra:
        report.failures.append(f"a component leaves {algebra}")

    total = SparseMatrix.zeros(space.dimension, space.dimension)
    for c in components:
        total += c.matrix
    found = jordan_type(total)
    report.jordan_type = found == p
    if not report.jordan_type:
        report.failures.append(f"sum has Jordan type {found}")

    report.oracle_depth = oracle_depth(algebra, p)
    expected = classical.depth(algebra, p)
    report.depth = report.oracle_depth == expected
    if not report.depth:
        report.failures.append(f"oracle depth {report.oracle_depth} differs from {expected}")

    reduced = classical.reduced_depth(algebra, p)
    report.reduced_depth = nf.depth == reduced
    if not report.reduced_depth:
        report.failures.append(f"normal form depth {nf.depth} differs from reduced depth {reduced}")

    report.component_depths = True
    for c in components:
        try:
            _, h, _ = sl2_complete_matrix(c.local, c.block)
            measured = ad_depth(c.block, h)
        except VerificationError as e:
            report.component_depths = False
            report.failures.append(f"{c.component}: {e}")
            continue
        if measured != c.component.intrinsic_depth:
            report.component_depths = False
            report.failures.append(f"{c.component} has depth {measured} in its block, expected {c.component.intrinsic_depth}")

    if not report.ok:
        logger.warning("%s %s: %s", algebra, p, "; ".join(report.failures))
    return report
