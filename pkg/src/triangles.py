"""
Quotient Triangles and Balance Checks

Arrangements of group elements, their quotient triangles, Roman-k checks
for families of arrangements, and pseudoterrace checks under an automorphism.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from groups import Automorphism, FiniteGroup, GroupError, inversion_automorphism


class ArrangementError(ValueError):
    """Sequence is not an ordering of all group elements, or groups do not match"""


class NotATerraceError(ValueError):
    pass


@dataclass(frozen=True)
class Arrangement:
    """An ordering (a_1, ..., a_t) of all elements of a group"""

    group: FiniteGroup
    elements: Tuple[int, ...]

    def __post_init__(self):
        elements = tuple(int(x) for x in self.elements)
        object.__setattr__(self, 'elements', elements)
        if sorted(elements) != list(range(self.group.order)):
            raise ArrangementError(
                f"Not an ordering of the {self.group.order} elements of {self.group.name}: "
                f"{self.group.format_sequence(x for x in elements if 0 <= x < self.group.order)}"
            )

    @classmethod
    def parse(cls, group: FiniteGroup, text: str) -> 'Arrangement':
        try:
            return cls(group, tuple(group.parse_sequence(text)))
        except GroupError as e:
            raise ArrangementError(str(e)) from e

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.elements, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def translate(self, g: int) -> 'Arrangement':
        """g*a, the left translate"""
        return Arrangement(self.group, tuple(self.group.multiply_many(g, self.array).tolist()))

    def apply(self, automorphism: Automorphism) -> 'Arrangement':
        _require_same_group(self.group, automorphism.group)
        return Arrangement(self.group, tuple(automorphism.apply_many(self.array).tolist()))

    def reversed(self) -> 'Arrangement':
        return Arrangement(self.group, self.elements[::-1])

    def inverted(self) -> 'Arrangement':
        """(a_1^-1, ..., a_t^-1); its quotients are the inverses of a_(i+j) a_i^-1"""
        return Arrangement(self.group, tuple(self.group.inverse_many(self.array).tolist()))

    def to_text(self) -> str:
        return self.group.format_sequence(self.elements)

    def __str__(self):
        return f"({self.to_text()})"


@dataclass(frozen=True)
class QuotientTriangle:
    """Lines T_1..T_{t-1}; T_j[i] = a_i^-1 a_{i+j}"""

    group: FiniteGroup
    lines: Tuple[Tuple[int, ...], ...]

    def line(self, j: int) -> Tuple[int, ...]:
        """Line j, 1-indexed"""
        return self.lines[j - 1]

    def to_text(self) -> str:
        return "\n".join(self.group.format_sequence(line) for line in self.lines)


def quotient_line(arrangement: Arrangement, j: int) -> np.ndarray:
    a = arrangement.array
    return arrangement.group.quotient_many(a[:-j], a[j:])


def quotient_triangle(arrangement: Arrangement) -> QuotientTriangle:
    lines = tuple(
        tuple(quotient_line(arrangement, j).tolist()) for j in range(1, len(arrangement))
    )
    return QuotientTriangle(arrangement.group, lines)


@dataclass(frozen=True)
class TupleFamily:
    """
    An ell-tuple of arrangements of one group

    U_j, the concatenation of the j-th quotient lines of the members, is the
    object the Roman-k condition counts over.
    """

    members: Tuple[Arrangement, ...]

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, 'members', members)
        if not members:
            raise ArrangementError("A family needs at least one arrangement")
        for member in members[1:]:
            _require_same_group(members[0].group, member.group)

    @property
    def group(self) -> FiniteGroup:
        return self.members[0].group

    @property
    def ell(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return self.group.order

    def line(self, j: int) -> np.ndarray:
        """U_j"""
        return np.concatenate([quotient_line(a, j) for a in self.members])

    def triangles(self) -> List[QuotientTriangle]:
        return [quotient_triangle(a) for a in self.members]

    def to_text(self) -> str:
        return "\n".join(str(a) for a in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Arrangement]:
        return iter(self.members)


def _require_same_group(g1: FiniteGroup, g2: FiniteGroup):
    if g1 != g2:
        raise ArrangementError(f"Group mismatch: {g1.name} vs {g2.name}")


def roman_k(family: TupleFamily) -> int:
    """
    Largest k such that every non-identity element occurs at most ell times
    in each of U_1..U_k (t-1 means a Vatican family)
    """
    t = family.order
    for j in range(1, t):
        counts = np.bincount(family.line(j), minlength=t)
        if counts[1:].max() > family.ell:
            return j - 1
    return max(t - 1, 0)


def pseudoterrace_k(arrangement: Arrangement, automorphism: Automorphism) -> int:
    """
    Largest k such that in each of T_1..T_k the members of every cycle occur
    at most (cycle size) times
    """
    _require_same_group(arrangement.group, automorphism.group)
    t = arrangement.group.order
    rep = automorphism.cycle_representatives
    size = automorphism.cycle_sizes
    for j in range(1, t):
        counts = np.bincount(rep[quotient_line(arrangement, j)], minlength=t)
        if np.any(counts > size):
            return j - 1
    return max(t - 1, 0)


def expand_pseudoterrace(arrangement: Arrangement, automorphism: Automorphism) -> TupleFamily:
    """Family (a, alpha(a), ..., alpha^(ell-1)(a))"""
    _require_same_group(arrangement.group, automorphism.group)
    members = [arrangement]
    for _ in range(automorphism.order - 1):
        members.append(members[-1].apply(automorphism))
    return TupleFamily(tuple(members))


def is_terrace(arrangement: Arrangement) -> bool:
    if not arrangement.group.is_abelian:
        return False
    return pseudoterrace_k(arrangement, inversion_automorphism(arrangement.group)) >= 1


def reverse_pair(arrangement: Arrangement) -> TupleFamily:
    """
    The pair (a, reverse of a), a Roman pair whenever a is a terrace

    Raises:
        NotATerraceError: a is not a terrace of an abelian group
    """
    if not is_terrace(arrangement):
        raise NotATerraceError(f"{arrangement} is not a terrace for {arrangement.group.name}")
    return TupleFamily((arrangement, arrangement.reversed()))


def singleton(arrangement: Arrangement) -> TupleFamily:
    return TupleFamily((arrangement,))


def parse_family(group: FiniteGroup, texts: Sequence[str]) -> TupleFamily:
    return TupleFamily(tuple(Arrangement.parse(group, text) for text in texts))
