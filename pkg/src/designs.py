"""
Crossover Designs and the Carry-Over Balance Oracle

Designs are n x p arrays of treatments. Everything here counts o_i(x, y)
directly from the rows, independently of the triangle module, so it serves
as the cross-check for every construction and search.
"""

import csv
import io
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from triangles import Arrangement, TupleFamily, roman_k


class DesignError(ValueError):
    """Malformed design or incompatible designs"""


class NonUniformDesignError(DesignError):
    pass


class DesignParseError(DesignError):
    pass


class Design:
    """An n x p treatment array with entries in 0..t-1"""

    def __init__(self, rows, t: Optional[int] = None):
        try:
            array = np.array(rows, dtype=np.int64)
        except (TypeError, ValueError) as e:
            raise DesignError(f"Rows do not form a rectangular integer array: {e}") from e
        if array.ndim != 2 or array.size == 0:
            raise DesignError(f"A design needs a non-empty 2-d array, got shape {array.shape}")

        self.n, self.p = array.shape
        self.t = int(t) if t is not None else self.p
        if array.min() < 0 or array.max() >= self.t:
            raise DesignError(f"Treatments must lie in 0..{self.t - 1}")

        array.setflags(write=False)
        self.rows = array

    def uniformity_problems(self) -> List[str]:
        """Empty when every treatment occurs equally often in every row and every column"""
        problems = []
        t = self.t
        row_counts = np.apply_along_axis(np.bincount, 1, self.rows, minlength=t)
        col_counts = np.apply_along_axis(np.bincount, 0, self.rows, minlength=t)
        if self.p % t or np.any(row_counts != self.p // t):
            problems.append("treatments are not equally frequent within every row")
        if self.n % t or np.any(col_counts != self.n // t):
            problems.append("treatments are not equally frequent within every column")
        return problems

    @property
    def is_uniform(self) -> bool:
        return not self.uniformity_problems()

    def sorted_rows(self) -> List[Tuple[int, ...]]:
        return sorted(tuple(row) for row in self.rows.tolist())

    def to_csv(self) -> str:
        return "".join(",".join(str(v) for v in row) + "\n" for row in self.rows.tolist())

    def to_dict(self, report: Optional['BalanceReport'] = None) -> Dict[str, Any]:
        return {
            'n': self.n,
            'p': self.p,
            't': self.t,
            'rows': self.rows.tolist(),
            'report': report.to_dict() if report else None,
        }

    def to_json(self, report: Optional['BalanceReport'] = None) -> str:
        return json.dumps(self.to_dict(report))

    def __eq__(self, other):
        if not isinstance(other, Design):
            return NotImplemented
        return self.t == other.t and np.array_equal(self.rows, other.rows)

    def __repr__(self):
        return f"Design(n={self.n}, p={self.p}, t={self.t})"


def parse_design_csv(text: str) -> Design:
    """
    Parse header-less CSV, one subject per line

    Raises:
        DesignParseError: empty input, non-integer cells or ragged rows
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in row)]
    if not rows:
        raise DesignParseError("Design file is empty")
    try:
        values = [[int(cell) for cell in row] for row in rows]
    except ValueError as e:
        raise DesignParseError(f"Non-integer cell: {e}") from e
    widths = {len(row) for row in values}
    if len(widths) != 1:
        raise DesignParseError(f"Rows have differing lengths: {sorted(widths)}")
    try:
        return Design(values)
    except DesignError as e:
        raise DesignParseError(str(e)) from e


def read_design_csv(path: Union[str, Path]) -> Design:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise DesignParseError(f"Cannot read {path}: {e}") from e
    return parse_design_csv(text)


@dataclass(frozen=True)
class BalanceReport:
    n: int
    t: int
    threshold: float
    maxima: Tuple[int, ...]
    max_k: int
    balanced: bool

    @property
    def roman(self) -> bool:
        return self.max_k >= 1

    @property
    def vatican(self) -> bool:
        return self.max_k == self.t - 1

    def meets(self, k: int) -> bool:
        return self.max_k >= k

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['maxima'] = list(self.maxima)
        data['roman'] = self.roman
        data['vatican'] = self.vatican
        return data


def carryover_counts(design: Design, i: int) -> np.ndarray:
    """t x t matrix of o_i(x, y): how often y follows x exactly i periods later"""
    t = design.t
    codes = design.rows[:, :-i] * t + design.rows[:, i:]
    return np.bincount(codes.ravel(), minlength=t * t).reshape(t, t)


def balance_report(design: Design) -> BalanceReport:
    """
    Count every o_i(x, y) and derive the Roman/Vatican properties

    Raises:
        DesignError: p != t
        NonUniformDesignError: design is not uniform
    """
    if design.p != design.t:
        raise DesignError(f"Only designs with p = t are supported (p={design.p}, t={design.t})")
    problems = design.uniformity_problems()
    if problems:
        raise NonUniformDesignError("; ".join(problems))

    t, n = design.t, design.n
    off_diagonal = ~np.eye(t, dtype=bool)
    threshold = n / t

    maxima = []
    balanced = True
    for i in range(1, t):
        counts = carryover_counts(design, i)
        if counts.sum() != n * (t - i) or counts[~off_diagonal].any():
            raise DesignError(f"Carry-over counts at distance {i} do not add up")
        pair_counts = counts[off_diagonal]
        maxima.append(int(pair_counts.max()))
        if i == 1:
            balanced = bool(np.all(pair_counts == pair_counts[0]))

    max_k = 0
    while max_k < len(maxima) and maxima[max_k] <= threshold:
        max_k += 1

    return BalanceReport(n=n, t=t, threshold=threshold, maxima=tuple(maxima),
                         max_k=max_k, balanced=balanced)


def latin_square_of(arrangement: Arrangement) -> Design:
    """L(a): row g is g*a, rows in element index order"""
    group = arrangement.group
    g = np.arange(group.order)
    return Design(group.multiply_many(g[:, None], arrangement.array[None, :]), t=group.order)


def design_from_tuple(family: TupleFamily) -> Design:
    """Stack L(a_1), ..., L(a_ell)"""
    return Design(np.vstack([latin_square_of(a).rows for a in family]), t=family.order)


def stack_designs(designs: Sequence[Design],
                  multiplicities: Optional[Sequence[int]] = None) -> Design:
    """
    Stack c_i copies of each design

    Raises:
        DesignError: no designs, mismatched t or p, bad multiplicities
    """
    if not designs:
        raise DesignError("Nothing to stack")
    if multiplicities is None:
        multiplicities = [1] * len(designs)
    if len(multiplicities) != len(designs):
        raise DesignError("One multiplicity per design is required")
    if any(c < 0 for c in multiplicities) or not any(multiplicities):
        raise DesignError("Multiplicities must be non-negative and not all zero")

    t, p = designs[0].t, designs[0].p
    for d in designs[1:]:
        if (d.t, d.p) != (t, p):
            raise DesignError(f"Cannot stack t={d.t}, p={d.p} onto t={t}, p={p}")

    blocks = [d.rows for d, c in zip(designs, multiplicities) for _ in range(c)]
    return Design(np.vstack(blocks), t=t)


def stack_plan(ell: int, available: Sequence[int] = (2, 3)) -> Optional[Dict[int, int]]:
    """
    Write ell as a non-negative combination of the available folds

    Prefers the fewest pieces; ties go to more of the larger folds. Returns
    None when no combination exists.
    """
    folds = sorted(set(f for f in available if f >= 1), reverse=True)
    best = None

    def search(i: int, remaining: int, chosen: Tuple[int, ...]):
        nonlocal best
        if remaining == 0:
            full = chosen + (0,) * (len(folds) - len(chosen))
            key = (sum(full), tuple(-c for c in full))
            if best is None or key < best[0]:
                best = (key, full)
            return
        if i == len(folds):
            return
        for count in range(remaining // folds[i], -1, -1):
            search(i + 1, remaining - count * folds[i], chosen + (count,))

    if ell < 1:
        return None
    search(0, ell, ())
    if best is None:
        return None
    return {fold: count for fold, count in zip(folds, best[1]) if count}


def cross_check(family: TupleFamily) -> bool:
    """Triangle-level k equals design-level k"""
    return roman_k(family) == balance_report(design_from_tuple(family)).max_k
