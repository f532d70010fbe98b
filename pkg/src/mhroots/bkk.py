"""Generic complex-root counts of multihomogeneous systems.

The generic number of complex roots equals the permanent of the
column-expanded degree matrix divided by the product of block-size
factorials.  Expanding that permanent along rows or columns gives exact
recursions that scale far past the 2^n permanent cap; both routes are exact
big-integer arithmetic and must agree everywhere.

States are memoized up to row permutations and block relabellings, both of
which leave the count invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import shape as shape_mod
from .permanent import MatrixTooLargeError, RYSER_CAP, permanent_exact
from .shape import ShapeSpec, expand_delta, validate

EXHAUSTIVE_SPLIT_K = 12

_BKK_MEMO: dict = {}
_REDUCIBLE_MEMO: dict = {}


@dataclass(frozen=True)
class BkkValue:
    count: int
    derivation: str  # "permanent" | "row_recursion" | "column_recursion"


@dataclass(frozen=True)
class ProductSplit:
    """A decomposition into two independent sub-shapes.

    ``first_blocks`` / ``first_rows`` are the 1-based indices (in the
    original shape) of the blocks and rows moved into ``first``.  The
    coupling degrees of the remaining rows within the first block group do
    not affect the root count and are discarded.
    """

    first: ShapeSpec
    second: ShapeSpec
    first_blocks: tuple[int, ...]
    first_rows: tuple[int, ...]


def _factorial_product(block_sizes) -> int:
    out = 1
    for nj in block_sizes:
        out *= math.factorial(nj)
    return out


def _canonical(blocks: tuple[int, ...], rows: tuple[tuple[int, ...], ...]):
    """Canonical representative under row permutation and block relabelling."""
    rows0 = sorted(rows)
    order = sorted(
        range(len(blocks)), key=lambda j: (blocks[j], tuple(r[j] for r in rows0))
    )
    blocks1 = tuple(blocks[j] for j in order)
    rows1 = tuple(sorted(tuple(r[j] for j in order) for r in rows0))
    return blocks1, rows1


def _bkk_state(blocks: tuple[int, ...], rows: tuple[tuple[int, ...], ...]) -> int:
    """Exact count for a canonical state; row expansion with min-branch pivot."""
    if not rows:
        return 1
    key = (blocks, rows)
    cached = _BKK_MEMO.get(key)
    if cached is not None:
        return cached
    best_idx = 0
    best_branches = None
    for idx, row in enumerate(rows):
        branches = sum(1 for j, nj in enumerate(blocks) if nj > 0 and row[j] > 0)
        if best_branches is None or branches < best_branches:
            best_branches, best_idx = branches, idx
            if branches == 0:
                break
    row = rows[best_idx]
    rest = rows[:best_idx] + rows[best_idx + 1 :]
    total = 0
    for j, nj in enumerate(blocks):
        if nj > 0 and row[j] > 0:
            sub_blocks = blocks[:j] + (nj - 1,) + blocks[j + 1 :]
            total += row[j] * _bkk_state(*_canonical(sub_blocks, rest))
    _BKK_MEMO[key] = total
    return total


def bkk_recursive(spec: ShapeSpec, pivot: tuple[str, int] | None = None) -> BkkValue:
    """Generic complex-root count by exact expansion recursion.

    ``pivot`` optionally forces the first expansion: ("row", i) expands along
    equation i, ("column", j) along block j (1-based; block j must have
    positive size).  The base case with no equations counts 1 (the null
    system has one root).  No size cap; values are big integers.
    """
    blocks = spec.block_sizes
    rows = spec.degrees
    if pivot is None:
        count = _bkk_state(*_canonical(blocks, rows))
        return BkkValue(count, "row_recursion")
    kind, index = pivot
    if kind == "row":
        if not 1 <= index <= spec.n:
            raise shape_mod.IndexOutOfRangeError(f"row index {index} outside 1..{spec.n}")
        row = rows[index - 1]
        rest = rows[: index - 1] + rows[index:]
        total = 0
        for j, nj in enumerate(blocks):
            if nj > 0 and row[j] > 0:
                sub_blocks = blocks[:j] + (nj - 1,) + blocks[j + 1 :]
                total += row[j] * _bkk_state(*_canonical(sub_blocks, rest))
        return BkkValue(total, "row_recursion")
    if kind == "column":
        j = index - 1
        if not 0 <= j < spec.k:
            raise shape_mod.IndexOutOfRangeError(f"block index {index} outside 1..{spec.k}")
        nj = blocks[j]
        if nj <= 0:
            raise ValueError(f"column recursion needs block {index} to have positive size")
        sub_blocks = blocks[:j] + (nj - 1,) + blocks[j + 1 :]
        total = 0
        for i, row in enumerate(rows):
            if row[j] > 0:
                rest = rows[:i] + rows[i + 1 :]
                total += row[j] * _bkk_state(*_canonical(sub_blocks, rest))
        assert total % nj == 0, "column expansion must divide evenly"
        return BkkValue(total // nj, "column_recursion")
    raise ValueError(f"pivot kind must be 'row' or 'column', got {kind!r}")


def bkk_permanent(spec: ShapeSpec) -> BkkValue:
    """Generic complex-root count as an exact scaled permanent.

    Computes the permanent of the column-expanded degree matrix and divides
    by the product of block-size factorials (asserted divisible).  Capped at
    n <= 34; use :func:`bkk_recursive` beyond that.
    """
    n = spec.n
    if n > RYSER_CAP:
        raise MatrixTooLargeError(
            f"permanent path capped at n={RYSER_CAP}, got n={n}; use bkk_recursive"
        )
    per = permanent_exact(expand_delta(spec, sqrt=False))
    divisor = _factorial_product(spec.block_sizes)
    assert per % divisor == 0, "expanded-degree permanent must divide by block factorials"
    return BkkValue(per // divisor, "permanent")


def bkk_count(spec: ShapeSpec) -> int:
    """Exact count via the uncapped recursion (plain integer convenience)."""
    return bkk_recursive(spec).count


def _subshape(spec: ShapeSpec, block_idx: list[int], row_idx: list[int]) -> ShapeSpec:
    sizes = [spec.block_sizes[j] for j in block_idx]
    rows = [tuple(spec.degrees[i][j] for j in block_idx) for i in row_idx]
    return validate(sizes, rows)


def _split_for_subset(spec: ShapeSpec, subset: list[int]) -> ProductSplit | None:
    """Try a block subset as the self-contained top group."""
    k = spec.k
    others = [j for j in range(k) if j not in subset]
    if not subset or not others:
        return None
    n_top = sum(spec.block_sizes[j] for j in subset)
    supported = [
        i
        for i, row in enumerate(spec.degrees)
        if all(row[j] == 0 for j in others)
    ]
    if len(supported) < n_top:
        return None
    top_rows = supported[:n_top]
    bottom_rows = [i for i in range(spec.n) if i not in set(top_rows)]
    first = _subshape(spec, subset, top_rows)
    second = _subshape(spec, others, bottom_rows)
    return ProductSplit(
        first,
        second,
        tuple(j + 1 for j in subset),
        tuple(i + 1 for i in top_rows),
    )


def _components(spec: ShapeSpec) -> list[list[int]]:
    """Connected components of the row/block incidence graph, as block lists."""
    k = spec.k
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for row in spec.degrees:
        touched = [j for j in range(k) if row[j] > 0]
        for j in touched[1:]:
            union(touched[0], j)
    groups: dict[int, list[int]] = {}
    for j in range(k):
        groups.setdefault(find(j), []).append(j)
    return list(groups.values())


def product_split(spec: ShapeSpec) -> ProductSplit | None:
    """Find a decomposition into two independent sub-shapes, if one exists.

    Searched up to simultaneous relabelling of blocks and equations.  For
    k <= 12 all proper block subsets are tried (smallest first), which covers
    every relabelled block-triangular pattern; for larger k only connected
    components of the row/block incidence graph are tried, so a None result
    is then not a proof that no split exists.
    """
    k = spec.k
    if k <= 1:
        return None
    if k <= EXHAUSTIVE_SPLIT_K:
        subsets = sorted(
            (s for s in range(1, 1 << k) if s != (1 << k) - 1),
            key=lambda s: (s.bit_count(), s),
        )
        for s in subsets:
            subset = [j for j in range(k) if s >> j & 1]
            found = _split_for_subset(spec, subset)
            if found is not None:
                return found
        return None
    comps = _components(spec)
    if len(comps) <= 1:
        return None
    for comp in comps:
        found = _split_for_subset(spec, sorted(comp))
        if found is not None:
            return found
    return None


def scale_shape(spec: ShapeSpec, d, e) -> ShapeSpec:
    """Shape with degrees d_i * e_j * delta_ij for nonnegative integer multipliers.

    The generic root count of the result equals
    prod(d_i) * prod(e_j ** n_j over positive blocks) times the original
    count; tests assert this law rather than assuming it.
    """
    d = [int(x) for x in d]
    e = [int(x) for x in e]
    if len(d) != spec.n:
        raise ValueError(f"need {spec.n} row multipliers, got {len(d)}")
    if len(e) != spec.k:
        raise ValueError(f"need {spec.k} column multipliers, got {len(e)}")
    if any(x < 0 for x in d) or any(x < 0 for x in e):
        raise ValueError("multipliers must be nonnegative")
    rows = [
        tuple(d[i] * e[j] * spec.degrees[i][j] for j in range(spec.k))
        for i in range(spec.n)
    ]
    return validate(spec.block_sizes, rows)


@dataclass(frozen=True)
class SimpleReducibility:
    reducible: bool
    # Witness steps (row, block) in 1-based indices of the *canonical*
    # (row-sorted, block-sorted) representation of each successive sub-shape;
    # block None marks a step whose expansion has no nonzero term at all.
    witness: tuple[tuple[int, int | None], ...] | None


def _simply_reducible_state(blocks, rows) -> tuple[bool, tuple | None]:
    if not rows:
        return True, ()
    key = (blocks, rows)
    cached = _REDUCIBLE_MEMO.get(key)
    if cached is not None:
        return cached
    result: tuple[bool, tuple | None] = (False, None)
    for idx, row in enumerate(rows):
        rest = rows[:idx] + rows[idx + 1 :]
        admissible = []
        for j, nj in enumerate(blocks):
            if nj > 0 and row[j] > 0:
                sub_blocks = blocks[:j] + (nj - 1,) + blocks[j + 1 :]
                if _bkk_state(*_canonical(sub_blocks, rest)) > 0:
                    admissible.append(j)
        if len(admissible) == 0:
            result = (True, ((idx + 1, None),))
            break
        if len(admissible) == 1:
            j = admissible[0]
            sub_blocks = blocks[:j] + (blocks[j] - 1,) + blocks[j + 1 :]
            ok, trace = _simply_reducible_state(*_canonical(sub_blocks, rest))
            if ok:
                result = (True, ((idx + 1, j + 1),) + trace)
                break
    _REDUCIBLE_MEMO[key] = result
    return result


def is_simply_reducible(spec: ShapeSpec) -> SimpleReducibility:
    """Whether the expansion recursion admits a single-branch reduction path.

    Inductive criterion: some equation has at most one block with positive
    size, positive degree, and positive sub-count, and the surviving
    sub-shape is again simply reducible.  Exactly these shapes make the
    two-sided root-count bounds tight.  Rows are scanned in order with
    backtracking, so the boolean is order-independent.
    """
    ok, trace = _simply_reducible_state(*_canonical(spec.block_sizes, spec.degrees))
    return SimpleReducibility(ok, trace if ok else None)
