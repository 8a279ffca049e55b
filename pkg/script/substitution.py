"""
Two-dimensional substitutions: labels mapped to rectangular blocks of labels.

Blocks are stored bottom row first, so ``block[j][i]`` sits at column i and
row j counted upward, the same convention as windows.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy

from script.coding import Window
from script.logger import logger
from script.quadfield import field as quad_field

Block = Tuple[Tuple[Hashable, ...], ...]


class RaggedBlockError(ValueError):
    """Blocks do not fit together into a rectangle."""


def _freeze(block: Iterable[Iterable[Hashable]]) -> Block:
    rows = tuple(tuple(row) for row in block)
    if not rows or not rows[0]:
        raise RaggedBlockError("empty block")
    if any(len(row) != len(rows[0]) for row in rows):
        raise RaggedBlockError("block rows have different lengths")
    return rows


def shape(block: Block) -> Tuple[int, int]:
    """(width, height)."""
    return len(block[0]), len(block)


def assemble(grid: Sequence[Sequence[Block]]) -> Block:
    """Glue a grid of blocks (bottom row first) into one block."""
    if not grid or not grid[0]:
        raise RaggedBlockError("nothing to assemble")
    widths = [shape(b)[0] for b in grid[0]]
    rows: List[Tuple[Hashable, ...]] = []
    for r, block_row in enumerate(grid):
        if len(block_row) != len(widths):
            raise RaggedBlockError(f"block row {r} has {len(block_row)} blocks, expected {len(widths)}")
        heights = {shape(b)[1] for b in block_row}
        if len(heights) != 1:
            raise RaggedBlockError(f"block row {r} mixes heights {sorted(heights)}")
        for c, block in enumerate(block_row):
            if shape(block)[0] != widths[c]:
                raise RaggedBlockError(f"block column {c} mixes widths {widths[c]} and {shape(block)[0]}")
        for k in range(heights.pop()):
            rows.append(tuple(label for block in block_row for label in block[k]))
    return tuple(rows)


@dataclass
class Substitution2d:
    """Map from labels to blocks. ``kind`` records how it was produced:
    "row", "column", "permutation" or "block"."""

    rules: Dict[Hashable, Block]
    kind: str = "block"

    def __post_init__(self) -> None:
        self.rules = {label: _freeze(block) for label, block in sorted(self.rules.items())}

    @classmethod
    def from_permutation(cls, mapping: Mapping[Hashable, Hashable]) -> "Substitution2d":
        return cls({a: ((b,),) for a, b in mapping.items()}, "permutation")

    @classmethod
    def identity(cls, labels: Iterable[Hashable]) -> "Substitution2d":
        return cls.from_permutation({a: a for a in labels})

    @classmethod
    def from_rows(cls, words: Mapping[Hashable, Sequence[Hashable]]) -> "Substitution2d":
        return cls({a: (tuple(w),) for a, w in words.items()}, "row")

    @classmethod
    def from_columns(cls, words: Mapping[Hashable, Sequence[Hashable]]) -> "Substitution2d":
        return cls({a: tuple((x,) for x in w) for a, w in words.items()}, "column")

    def __call__(self, label: Hashable) -> Block:
        return self.rules[label]

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, label: Hashable) -> bool:
        return label in self.rules

    def __mul__(self, other: "Substitution2d") -> "Substitution2d":
        return compose(self, other)

    def domain(self) -> List[Hashable]:
        return list(self.rules)

    def codomain(self) -> List[Hashable]:
        seen = {label for block in self.rules.values() for row in block for label in row}
        return sorted(seen)

    def shape(self, label: Hashable) -> Tuple[int, int]:
        return shape(self.rules[label])

    def shapes(self) -> Dict[Hashable, Tuple[int, int]]:
        return {label: shape(block) for label, block in self.rules.items()}

    def relabel(self, domain_map: Mapping[Hashable, Hashable],
                codomain_map: Optional[Mapping[Hashable, Hashable]] = None) -> "Substitution2d":
        codomain_map = domain_map if codomain_map is None else codomain_map
        return Substitution2d(
            {domain_map[a]: tuple(tuple(codomain_map[x] for x in row) for row in block)
             for a, block in self.rules.items()}, self.kind)


def compose(outer: Substitution2d, inner: Substitution2d) -> Substitution2d:
    """outer o inner: substitute every label of inner(a) by its outer block and glue."""
    rules = {}
    for label, block in inner.rules.items():
        missing = {x for row in block for x in row if x not in outer}
        if missing:
            raise RaggedBlockError(f"labels {sorted(missing)} of the image of {label!r} are not in the outer domain")
        try:
            rules[label] = assemble([[outer(x) for x in row] for row in block])
        except RaggedBlockError as e:
            raise RaggedBlockError(f"image of {label!r}: {e}") from e
    return Substitution2d(rules, "block")


def apply_substitution(s: Substitution2d, w: Window) -> Window:
    """Replace every cell of ``w`` by its block; the result starts at the origin."""
    grid = [[s(w.cell(i, j)) for i in range(w.width)] for j in range(w.height)]
    cells = assemble(grid)
    return Window(w.n, (0, 0), cells, w.tileset)


@dataclass(frozen=True)
class IncidenceMatrix:
    """Entry (t, u) counts the occurrences of label t in the image of label u."""

    labels: Tuple[Hashable, ...]
    matrix: sympy.Matrix

    def entry(self, t: Hashable, u: Hashable) -> int:
        return int(self.matrix[self.labels.index(t), self.labels.index(u)])

    def column_sums(self) -> List[int]:
        return [int(sum(self.matrix[:, j])) for j in range(self.matrix.cols)]


def incidence(s: Substitution2d) -> IncidenceMatrix:
    labels = tuple(s.domain())
    if set(s.codomain()) - set(labels):
        raise ValueError("incidence needs images inside the domain")
    position = {label: k for k, label in enumerate(labels)}
    size = len(labels)
    matrix = sympy.zeros(size, size)
    for label, block in s.rules.items():
        col = position[label]
        for row in block:
            for x in row:
                matrix[position[x], col] += 1
    return IncidenceMatrix(labels, matrix)


@dataclass
class SpectralReport:
    n: int
    charpoly: sympy.Poly
    divisible: bool
    quotient: sympy.Poly
    rational_roots: List[sympy.Rational]
    factor_degrees: List[int]
    perron_root: float
    expected_root: float
    tolerance: float = 1e-6

    @property
    def rational_roots_ok(self) -> bool:
        return all(r in (0, 1, -1) for r in self.rational_roots)

    @property
    def perron_ok(self) -> bool:
        return abs(self.perron_root - self.expected_root) < self.tolerance

    @property
    def holds(self) -> bool:
        return self.divisible and self.rational_roots_ok and self.perron_ok


def spectral_check(m: IncidenceMatrix, n: int) -> SpectralReport:
    """Exact characteristic polynomial against the minimal polynomial of beta^2."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(m.matrix.charpoly(x).as_expr(), x)
    target = sympy.Poly(x ** 2 - (n * n + 2) * x + 1, x)
    quotient, remainder = sympy.div(poly, target)
    _, factors = sympy.factor_list(poly)
    rational_roots = []
    degrees = []
    perron = float("-inf")
    for factor, _multiplicity in factors:
        factor = sympy.Poly(factor, x)
        degrees.append(factor.degree())
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            rational_roots.append(sympy.Rational(-b, a))
        for root in factor.real_roots():
            perron = max(perron, float(root.evalf(30)))
    beta_sq = quad_field(n).beta_float() ** 2
    report = SpectralReport(n, poly, remainder.is_zero, quotient, sorted(set(rational_roots)),
                            sorted(degrees), perron, beta_sq)
    logger.debug(f"spectral n={n}: degrees {report.factor_degrees}, perron {perron:.9f}")
    return report


def _signatures(s: Substitution2d) -> Dict[Hashable, Tuple]:
    occurrences: Dict[Hashable, int] = {label: 0 for label in s.rules}
    for block in s.rules.values():
        for row in block:
            for x in row:
                occurrences[x] = occurrences.get(x, 0) + 1
    return {label: (s.shape(label), occurrences.get(label, 0)) for label in s.rules}


def find_label_bijection(s: Substitution2d, t: Substitution2d) -> Optional[Dict[Hashable, Hashable]]:
    """A bijection phi with t(phi(a)) == phi(s(a)) for every label a, or None.

    Candidates are narrowed by block shape and occurrence count, then each
    guess is propagated through the blocks it forces; contradictions
    backtrack.
    """
    if len(s) != len(t):
        return None
    sig_s, sig_t = _signatures(s), _signatures(t)
    candidates = {a: [b for b in t.rules if sig_t[b] == sig_s[a]] for a in s.rules}
    if any(not c for c in candidates.values()):
        return None

    def propagate(mapping: Dict, used: set, a: Hashable, b: Hashable) -> bool:
        pending = [(a, b)]
        while pending:
            a, b = pending.pop()
            if a in mapping:
                if mapping[a] != b:
                    return False
                continue
            if b in used or b not in t.rules or a not in s.rules or sig_s[a] != sig_t[b]:
                return False
            mapping[a] = b
            used.add(b)
            for row_a, row_b in zip(s(a), t(b)):
                pending.extend(zip(row_a, row_b))
        return True

    def search(mapping: Dict, used: set) -> Optional[Dict]:
        free = [a for a in s.rules if a not in mapping]
        if not free:
            return mapping
        a = min(free, key=lambda label: len(candidates[label]))
        for b in candidates[a]:
            if b in used:
                continue
            trial, trial_used = dict(mapping), set(used)
            if propagate(trial, trial_used, a, b):
                found = search(trial, trial_used)
                if found is not None:
                    return found
        return None

    result = search({}, set())
    if result is None:
        logger.debug("no label bijection between the substitutions")
    return result


# Self-similarity of the n = 3 tiles as published, top row of each block first.
PRINTED_N3_TABLE: Dict[int, List[List[int]]] = {
    0: [[23, 29, 32, 35], [19, 28, 31, 34], [18, 27, 30, 33], [3, 6, 7, 15]],
    1: [[22, 29, 32, 35], [18, 28, 31, 34], [17, 27, 30, 33], [2, 6, 7, 15]],
    2: [[23, 29, 32, 35], [19, 28, 31, 34], [18, 27, 30, 33], [1, 5, 6, 13]],
    3: [[22, 29, 32, 35], [18, 28, 31, 34], [17, 27, 30, 33], [0, 5, 6, 13]],
    4: [[19, 29, 32, 35], [18, 28, 31, 34], [17, 27, 30, 33], [0, 5, 6, 13]],
    5: [[26, 32, 35], [25, 31, 34], [24, 30, 33], [4, 6, 13]],
    6: [[26, 32, 35], [25, 31, 34], [21, 27, 30], [3, 6, 13]],
    7: [[26, 32, 35], [22, 28, 31], [18, 27, 30], [3, 6, 13]],
    8: [[22, 29, 32, 35], [18, 28, 31, 34], [17, 27, 30, 33], [0, 5, 6, 7]],
    9: [[19, 29, 32, 35], [18, 28, 31, 34], [17, 27, 30, 33], [0, 5, 6, 7]],
    10: [[26, 32, 35], [25, 31, 34], [24, 30, 33], [4, 6, 7]],
    11: [[26, 32, 35], [25, 31, 34], [21, 27, 30], [3, 6, 7]],
    12: [[25, 32, 35], [24, 31, 34], [20, 27, 30], [2, 6, 7]],
    13: [[26, 32, 35], [22, 28, 31], [18, 27, 30], [3, 6, 7]],
    14: [[25, 32, 35], [21, 28, 31], [17, 27, 30], [2, 6, 7]],
    15: [[23, 29, 32], [19, 28, 31], [18, 27, 30], [3, 6, 7]],
    16: [[22, 29, 32], [18, 28, 31], [17, 27, 30], [2, 6, 7]],
    # printed with a stray row "17 27 30 33"; the block is 4x3, as shapes and spectrum require
    17: [[22, 29, 32, 35], [18, 28, 31, 34], [8, 12, 14, 16]],
    18: [[22, 28, 32, 35], [18, 27, 31, 34], [3, 11, 14, 16]],
    19: [[22, 28, 31, 35], [18, 27, 30, 34], [3, 6, 13, 16]],
    20: [[19, 29, 32, 35], [18, 28, 31, 34], [8, 12, 14, 16]],
    21: [[19, 28, 32, 35], [18, 27, 31, 34], [3, 11, 14, 16]],
    22: [[19, 28, 31, 35], [18, 27, 30, 34], [3, 6, 13, 16]],
    23: [[19, 28, 31, 34], [18, 27, 30, 33], [3, 6, 7, 15]],
    24: [[19, 28, 32, 35], [18, 27, 31, 34], [1, 10, 12, 14]],
    25: [[19, 28, 31, 35], [18, 27, 30, 34], [1, 5, 11, 14]],
    26: [[19, 28, 31, 34], [18, 27, 30, 33], [1, 5, 6, 13]],
    27: [[25, 32, 35], [24, 31, 34], [9, 12, 14]],
    28: [[25, 31, 35], [24, 30, 34], [4, 11, 14]],
    29: [[25, 31, 34], [24, 30, 33], [4, 6, 13]],
    30: [[25, 32, 35], [21, 28, 31], [8, 12, 14]],
    31: [[25, 31, 35], [21, 27, 31], [3, 11, 14]],
    32: [[25, 31, 34], [21, 27, 30], [3, 6, 13]],
    33: [[22, 29, 32], [18, 28, 31], [8, 12, 14]],
    34: [[22, 28, 32], [18, 27, 31], [3, 11, 14]],
    35: [[22, 28, 31], [18, 27, 30], [3, 6, 13]],
}


def printed_n3_substitution() -> Substitution2d:
    return Substitution2d({a: tuple(reversed([tuple(r) for r in rows]))
                           for a, rows in PRINTED_N3_TABLE.items()}, "block")
