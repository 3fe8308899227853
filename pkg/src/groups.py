"""
Finite Groups for the Vatican Designs Toolkit

Small finite groups (cyclic, direct products of cyclics, dihedral and the
quaternion group of order 8) with elements encoded as dense indices, plus
automorphisms and their cycles.

Element encoding:
    cyclic Z_n        x in 0..n-1, operation is addition mod n
    Z_n1 x ... x Z_nk mixed radix, first factor most significant
    dihedral D_2m     u^i -> i, u^i v -> m + i
    quaternion Q8     u^i -> i, u^i v -> 4 + i  (u^4 = e, v^2 = u^2)
Index 0 is always the identity.
"""

import math
import re
from collections import Counter
from functools import cached_property, lru_cache, reduce
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import totient

DEFAULT_MAX_ORDER = 10000
DEFAULT_TABLE_MAX_ORDER = 256
DEFAULT_AUTOMORPHISM_MAX_ORDER = 32
DEFAULT_AUTOMORPHISM_MAX_COUNT = 200_000

# Vectorised cycle representatives for x -> r*x are used while t * ell stays below this
_VECTOR_CYCLE_LIMIT = 4_000_000


class GroupError(ValueError):
    """Unsupported descriptor, malformed element token or oversized group"""


class AutomorphismError(ValueError):
    """A map that does not define an automorphism"""


class NotAHomomorphismError(AutomorphismError):
    pass


class NotBijectiveError(AutomorphismError):
    pass


class EnumerationLimitError(ValueError):
    """Exhaustive automorphism enumeration requested for a group that is too large"""


class GroupDescriptor:
    """Family and parameters of a supported group"""

    FAMILIES = ('cyclic', 'product', 'dihedral', 'quaternion')

    def __init__(self, family: str, moduli: Sequence[int]):
        if family not in self.FAMILIES:
            raise GroupError(f"Unsupported group family: {family}")
        self.family = family
        self.moduli = tuple(int(n) for n in moduli)

        if family == 'cyclic' and (len(self.moduli) != 1 or self.moduli[0] < 1):
            raise GroupError(f"Cyclic group needs one positive order, got {self.moduli}")
        if family == 'product' and (len(self.moduli) < 2 or min(self.moduli) < 2):
            raise GroupError(f"Direct product factors must have order >= 2, got {self.moduli}")
        if family == 'dihedral' and (len(self.moduli) != 1 or self.moduli[0] < 2):
            raise GroupError(f"Dihedral group needs m >= 2, got {self.moduli}")
        if family == 'quaternion' and self.moduli != (4,):
            raise GroupError("Only the quaternion group of order 8 is supported")

    @property
    def order(self) -> int:
        if self.family in ('cyclic', 'product'):
            return math.prod(self.moduli)
        return 2 * self.moduli[0]

    @property
    def name(self) -> str:
        if self.family == 'cyclic':
            return f"Z{self.moduli[0]}"
        if self.family == 'product':
            if len(set(self.moduli)) == 1:
                return f"Z{self.moduli[0]}^{len(self.moduli)}"
            return "x".join(f"Z{n}" for n in self.moduli)
        if self.family == 'dihedral':
            return f"D{2 * self.moduli[0]}"
        return "Q8"

    def __eq__(self, other):
        if not isinstance(other, GroupDescriptor):
            return NotImplemented
        return (self.family, self.moduli) == (other.family, other.moduli)

    def __hash__(self):
        return hash((self.family, self.moduli))

    def __repr__(self):
        return f"GroupDescriptor({self.name})"


_FACTOR_RE = re.compile(r'^Z(\d+)(?:\^(\d+))?$')
_DIHEDRAL_RE = re.compile(r'^D(\d+)$')


def parse_descriptor(text: str) -> GroupDescriptor:
    """
    Parse a descriptor such as Z6, Z4xZ2, Z2^3, D8 or Q8 (case-insensitive)

    Raises:
        GroupError: text names no supported group
    """
    cleaned = re.sub(r'\s+', '', str(text)).upper().replace('×', 'X')
    if not cleaned:
        raise GroupError("Empty group descriptor")

    if cleaned == 'Q8':
        return GroupDescriptor('quaternion', (4,))

    match = _DIHEDRAL_RE.match(cleaned)
    if match:
        order = int(match.group(1))
        if order < 4 or order % 2:
            raise GroupError(f"Dihedral order must be even and >= 4: {text}")
        return GroupDescriptor('dihedral', (order // 2,))

    moduli: List[int] = []
    for factor in cleaned.split('X'):
        match = _FACTOR_RE.match(factor)
        if not match:
            raise GroupError(f"Unsupported group descriptor: {text}")
        n = int(match.group(1))
        repeat = int(match.group(2)) if match.group(2) else 1
        if repeat < 1:
            raise GroupError(f"Bad exponent in descriptor: {text}")
        moduli.extend([n] * repeat)

    if len(moduli) == 1:
        return GroupDescriptor('cyclic', moduli)
    return GroupDescriptor('product', moduli)


class FiniteGroup:
    """
    A finite group on the indices 0..t-1

    Instances are immutable and cached per descriptor by make_group, so they
    can be compared by descriptor and shared across worker processes.
    """

    def __init__(self, descriptor: GroupDescriptor,
                 table_max_order: int = DEFAULT_TABLE_MAX_ORDER):
        self.descriptor = descriptor
        self.family = descriptor.family
        self.order = descriptor.order
        self.name = descriptor.name
        self.identity = 0

        moduli = descriptor.moduli
        self._weights = np.array(
            [math.prod(moduli[i + 1:]) for i in range(len(moduli))], dtype=np.int64
        )
        self._moduli = np.array(moduli, dtype=np.int64)

        elements = np.arange(self.order, dtype=np.int64)
        self._inverse = self._inverse_vec(elements)
        self._inverse.setflags(write=False)

        self._table: Optional[np.ndarray] = None
        if self.order <= table_max_order:
            table = self._multiply_vec(elements[:, None], elements[None, :])
            table.setflags(write=False)
            self._table = table

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _decode(self, xs: np.ndarray) -> np.ndarray:
        """Mixed-radix digits, stacked on a new last axis"""
        xs = np.asarray(xs, dtype=np.int64)
        return (xs[..., None] // self._weights) % self._moduli

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return (digits * self._weights).sum(axis=-1)

    def _multiply_vec(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.family == 'cyclic':
            return (xs + ys) % self.order
        if self.family == 'product':
            return self._encode((self._decode(xs) + self._decode(ys)) % self._moduli)

        m = self.descriptor.moduli[0]
        sx, ix = xs // m, xs % m
        sy, iy = ys // m, ys % m
        i = ix + np.where(sx == 1, -iy, iy)
        if self.family == 'quaternion':
            i = i + 2 * (sx & sy)
        return (sx ^ sy) * m + i % m

    def _inverse_vec(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if self.family == 'cyclic':
            return (-xs) % self.order
        if self.family == 'product':
            return self._encode((-self._decode(xs)) % self._moduli)

        m = self.descriptor.moduli[0]
        s, i = xs // m, xs % m
        if self.family == 'dihedral':
            return np.where(s == 1, xs, (-i) % m)
        return np.where(s == 1, m + (i + 2) % m, (-i) % m)

    def multiply_many(self, xs, ys) -> np.ndarray:
        """Elementwise products x*y with numpy broadcasting"""
        if self._table is not None:
            return self._table[np.asarray(xs), np.asarray(ys)]
        return self._multiply_vec(xs, ys)

    def quotient_many(self, xs, ys) -> np.ndarray:
        """Elementwise quotients x^-1 * y with numpy broadcasting"""
        if self.family == 'cyclic':
            return (np.asarray(ys, dtype=np.int64) - np.asarray(xs, dtype=np.int64)) % self.order
        return self.multiply_many(self._inverse[np.asarray(xs)], ys)

    def inverse_many(self, xs) -> np.ndarray:
        return self._inverse[np.asarray(xs)]

    def multiply(self, x: int, y: int) -> int:
        if self._table is not None:
            return int(self._table[x, y])
        return int(self._multiply_vec(x, y))

    def inverse(self, x: int) -> int:
        return int(self._inverse[x])

    def quotient(self, x: int, y: int) -> int:
        """x^-1 * y"""
        return self.multiply(self.inverse(x), y)

    def power(self, x: int, n: int) -> int:
        result = self.identity
        for _ in range(n):
            result = self.multiply(result, x)
        return result

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.multiply(y, x)
            n += 1
        return n

    def operation_table(self) -> np.ndarray:
        """Full t x t table (built on demand above the precompute threshold)"""
        if self._table is not None:
            return self._table
        elements = np.arange(self.order, dtype=np.int64)
        return self._multiply_vec(elements[:, None], elements[None, :])

    @cached_property
    def is_abelian(self) -> bool:
        if self.family in ('cyclic', 'product'):
            return True
        if self.family == 'dihedral':
            return self.descriptor.moduli[0] <= 2
        return False

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        """Generators in descriptor order: 1 for cyclic, unit vectors for products, u and v otherwise"""
        if self.family == 'cyclic':
            return (1,) if self.order > 1 else (0,)
        if self.family == 'product':
            return tuple(int(w) for w in self._weights)
        return (1, self.descriptor.moduli[0])

    # ------------------------------------------------------------------
    # Element notation
    # ------------------------------------------------------------------

    def format_element(self, x: int) -> str:
        x = int(x)
        if self.family == 'cyclic':
            return str(x)
        if self.family == 'product':
            digits = [str(int(d)) for d in self._decode(x)]
            sep = '' if max(self.descriptor.moduli) <= 10 else '.'
            return sep.join(digits)

        m = self.descriptor.moduli[0]
        s, i = divmod(x, m)
        if x == 0:
            return 'e'
        word = '' if i == 0 else ('u' if i == 1 else f'u{i}')
        return word + ('v' if s else '')

    def parse_element(self, token: str) -> int:
        """
        Parse one element token in the group's notation

        Raises:
            GroupError: token is not an element of this group
        """
        raw = str(token)
        cleaned = re.sub(r'[\s^{}]', '', raw)
        if not cleaned:
            raise GroupError(f"Empty element token for {self.name}")

        if self.family == 'cyclic':
            if not cleaned.isdigit() or int(cleaned) >= self.order:
                raise GroupError(f"{raw!r} is not an element of {self.name}")
            return int(cleaned)

        if self.family == 'product':
            k = len(self.descriptor.moduli)
            if '.' in cleaned:
                parts = cleaned.split('.')
            elif max(self.descriptor.moduli) <= 10 and len(cleaned) == k:
                parts = list(cleaned)
            else:
                raise GroupError(f"{raw!r} is not an element of {self.name}")
            if len(parts) != k or not all(p.isdigit() for p in parts):
                raise GroupError(f"{raw!r} is not an element of {self.name}")
            digits = [int(p) for p in parts]
            if any(d >= n for d, n in zip(digits, self.descriptor.moduli)):
                raise GroupError(f"{raw!r} is not an element of {self.name}")
            return int(self._encode(np.array(digits, dtype=np.int64)))

        m = self.descriptor.moduli[0]
        lowered = cleaned.lower()
        if lowered in ('e', '1'):
            return 0
        match = re.match(r'^(?:u(\d*))?(v?)$', lowered)
        if not match or lowered == '':
            raise GroupError(f"{raw!r} is not an element of {self.name}")
        has_u = lowered.startswith('u')
        i = (int(match.group(1)) if match.group(1) else 1) if has_u else 0
        return (m if match.group(2) else 0) + i % m

    def format_sequence(self, xs: Iterable[int]) -> str:
        return ",".join(self.format_element(x) for x in xs)

    def parse_sequence(self, text: str) -> List[int]:
        """Parse comma-separated tokens, optionally wrapped in parentheses"""
        body = str(text).strip().strip('()[]')
        if not body:
            raise GroupError("Empty element sequence")
        return [self.parse_element(tok) for tok in body.split(',')]

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __reduce__(self):
        return (make_group, (self.name,))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


@lru_cache(maxsize=None)
def _cached_group(descriptor: GroupDescriptor, table_max_order: int) -> FiniteGroup:
    return FiniteGroup(descriptor, table_max_order=table_max_order)


def make_group(descriptor: Union[str, GroupDescriptor],
               max_order: int = DEFAULT_MAX_ORDER,
               table_max_order: int = DEFAULT_TABLE_MAX_ORDER) -> FiniteGroup:
    """
    Build (or fetch the cached) group for a descriptor

    Args:
        descriptor: GroupDescriptor or text such as 'Z6', 'D8', 'Z3xZ3'
        max_order: largest order accepted
        table_max_order: precompute the operation table up to this order

    Raises:
        GroupError: unsupported descriptor or order above max_order
    """
    if not isinstance(descriptor, GroupDescriptor):
        descriptor = parse_descriptor(descriptor)
    if descriptor.order > max_order:
        raise GroupError(
            f"{descriptor.name} has order {descriptor.order}, above the limit {max_order}"
        )
    return _cached_group(descriptor, table_max_order)


def cyclic_group(n: int) -> FiniteGroup:
    return make_group(GroupDescriptor('cyclic', (n,)))


def verify_group_axioms(group: FiniteGroup) -> List[str]:
    """Exhaustive identity, inverse, Latin and associativity checks; returns problems found"""
    problems = []
    t = group.order
    table = group.operation_table()
    elements = np.arange(t)

    if not (np.array_equal(table[0], elements) and np.array_equal(table[:, 0], elements)):
        problems.append("index 0 is not a two-sided identity")

    inv = group.inverse_many(elements)
    if np.any(table[elements, inv] != 0) or np.any(table[inv, elements] != 0):
        problems.append("inverse is not two-sided")

    if any(len(set(row)) != t for row in table.tolist()) or \
            any(len(set(col)) != t for col in table.T.tolist()):
        problems.append("operation table is not a Latin square")

    left = table[table[:, :, None], elements[None, None, :]]
    right = table[elements[:, None, None], table[None, :, :]]
    if not np.array_equal(left, right):
        problems.append("operation is not associative")

    return problems


class Automorphism:
    """
    An automorphism stored as a full permutation of element indices

    The constructor checks bijectivity and fixing of the identity; pass
    check_homomorphism=True to also test every pair.
    """

    def __init__(self, group: FiniteGroup, perm: Sequence[int],
                 check_homomorphism: bool = False):
        perm = tuple(int(x) for x in perm)
        if len(perm) != group.order:
            raise NotBijectiveError(
                f"Permutation has {len(perm)} entries, {group.name} has {group.order} elements"
            )
        if len(set(perm)) != group.order or min(perm) < 0 or max(perm) >= group.order:
            raise NotBijectiveError("Map is not a bijection of the group elements")
        if perm[0] != 0:
            raise NotAHomomorphismError("Map does not fix the identity")

        self.group = group
        self.perm = perm

        if check_homomorphism:
            problem = _homomorphism_problem(group, perm)
            if problem:
                raise NotAHomomorphismError(problem)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.perm, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def cycles(self) -> List[Tuple[int, ...]]:
        """Disjoint cycles of the permutation, each starting at its smallest element"""
        seen = [False] * len(self.perm)
        result = []
        for x in range(len(self.perm)):
            if seen[x]:
                continue
            orbit = [x]
            seen[x] = True
            y = self.perm[x]
            while y != x:
                orbit.append(y)
                seen[y] = True
                y = self.perm[y]
            result.append(tuple(orbit))
        return result

    @cached_property
    def order(self) -> int:
        return reduce(lambda a, b: a * b // math.gcd(a, b), (len(c) for c in self.cycles), 1)

    @cached_property
    def cycle_representatives(self) -> np.ndarray:
        """rep[x] = smallest element in the cycle of x"""
        rep = np.empty(len(self.perm), dtype=np.int64)
        for cycle in self.cycles:
            rep[list(cycle)] = cycle[0]
        rep.setflags(write=False)
        return rep

    @cached_property
    def cycle_sizes(self) -> np.ndarray:
        """size[x] = number of elements in the cycle of x"""
        sizes = np.bincount(self.cycle_representatives, minlength=len(self.perm))
        result = sizes[self.cycle_representatives]
        result.setflags(write=False)
        return result

    def __call__(self, x: int) -> int:
        return self.perm[x]

    def apply_many(self, xs) -> np.ndarray:
        return self.array[np.asarray(xs)]

    def compose(self, other: 'Automorphism') -> 'Automorphism':
        """self after other"""
        return Automorphism(self.group, [self.perm[y] for y in other.perm])

    def power(self, n: int) -> 'Automorphism':
        n %= self.order
        perm = list(range(len(self.perm)))
        for _ in range(n):
            perm = [self.perm[y] for y in perm]
        return Automorphism(self.group, perm)

    def inverse(self) -> 'Automorphism':
        perm = [0] * len(self.perm)
        for x, y in enumerate(self.perm):
            perm[y] = x
        return Automorphism(self.group, perm)

    @property
    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.perm))

    def describe(self) -> str:
        """Generator images, e.g. 'u->u2, v->v'"""
        g = self.group
        return ", ".join(
            f"{g.format_element(x)}->{g.format_element(self.perm[x])}" for x in g.generators
        )

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.group == other.group and self.perm == other.perm

    def __hash__(self):
        return hash((self.group, self.perm))

    def __repr__(self):
        return f"Automorphism({self.group.name}: {self.describe()}, order={self.order})"


def _homomorphism_problem(group: FiniteGroup, perm: Sequence[int]) -> Optional[str]:
    arr = np.asarray(perm, dtype=np.int64)
    table = group.operation_table()
    lhs = arr[table]
    rhs = table[arr[:, None], arr[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y = (int(v) for v in bad[0])
        return (f"pi({group.format_element(x)}*{group.format_element(y)}) != "
                f"pi({group.format_element(x)})*pi({group.format_element(y)})")
    return None


def automorphism_from_generator_images(
        group: FiniteGroup,
        images: Mapping[Union[int, str], Union[int, str]],
        full_check_max_order: int = DEFAULT_TABLE_MAX_ORDER) -> Automorphism:
    """
    Extend generator images multiplicatively to an automorphism

    Args:
        group: the group
        images: generator -> image, as indices or element tokens
        full_check_max_order: check every pair when the order is at most this

    Raises:
        AutomorphismError: images missing or not on generators
        NotAHomomorphismError: extension is inconsistent
        NotBijectiveError: extension is a homomorphism but not a bijection
    """
    def as_index(value) -> int:
        return group.parse_element(value) if isinstance(value, str) else int(value)

    image_of = {as_index(k): as_index(v) for k, v in images.items()}
    gens = group.generators
    unknown = set(image_of) - set(gens)
    if unknown:
        names = ", ".join(group.format_element(x) for x in sorted(unknown))
        raise AutomorphismError(f"Not a generator of {group.name}: {names}")
    missing = [g for g in gens if g not in image_of]
    if missing:
        names = ", ".join(group.format_element(x) for x in missing)
        raise AutomorphismError(f"No image given for generator(s) {names}")

    t = group.order
    perm = [-1] * t
    perm[0] = 0
    stack = [0]
    while stack:
        x = stack.pop()
        for g in gens:
            y = group.multiply(x, g)
            target = group.multiply(perm[x], image_of[g])
            if perm[y] == -1:
                perm[y] = target
                stack.append(y)
            elif perm[y] != target:
                raise NotAHomomorphismError(
                    f"Images {_format_images(group, image_of)} do not extend to a homomorphism"
                )

    if len(set(perm)) != t:
        raise NotBijectiveError(
            f"Images {_format_images(group, image_of)} give a non-bijective endomorphism"
        )
    return Automorphism(group, perm, check_homomorphism=t <= full_check_max_order)


def _format_images(group: FiniteGroup, image_of: Dict[int, int]) -> str:
    return ", ".join(f"{group.format_element(k)}->{group.format_element(v)}"
                     for k, v in sorted(image_of.items()))


def parse_automorphism(group: FiniteGroup, text: str) -> Automorphism:
    """
    Parse '1->3', 'u->u3v, v->v', '10->11, 01->10' or 'id'

    Raises:
        AutomorphismError: malformed text or images that do not extend
    """
    cleaned = str(text).strip()
    if cleaned.lower() in ('id', 'identity'):
        return identity_automorphism(group)

    images: Dict[str, str] = {}
    for part in cleaned.split(','):
        part = part.strip().replace('↦', '->').replace('→', '->')
        if not part:
            continue
        if '->' not in part:
            raise AutomorphismError(f"Expected 'generator->image', got {part!r}")
        src, dst = (s.strip() for s in part.split('->', 1))
        images[src] = dst
    if not images:
        raise AutomorphismError(f"Empty automorphism spec: {text!r}")
    try:
        return automorphism_from_generator_images(group, images)
    except GroupError as e:
        raise AutomorphismError(str(e)) from e


def identity_automorphism(group: FiniteGroup) -> Automorphism:
    return Automorphism(group, range(group.order))


def inversion_automorphism(group: FiniteGroup) -> Automorphism:
    """x -> x^-1, an automorphism only for abelian groups"""
    if not group.is_abelian:
        raise NotAHomomorphismError(f"Inversion is not an automorphism of {group.name}")
    return Automorphism(group, group.inverse_many(np.arange(group.order)).tolist())


def multiplication_automorphism(group: FiniteGroup, r: int) -> Automorphism:
    """
    x -> r*x on a cyclic group

    Raises:
        AutomorphismError: group is not cyclic or r is not a unit
    """
    if group.family != 'cyclic':
        raise AutomorphismError(f"Multiplication maps need a cyclic group, got {group.name}")
    t = group.order
    r %= t
    if math.gcd(r, t) != 1:
        raise AutomorphismError(f"{r} is not a unit mod {t}")

    perm = (np.arange(t, dtype=np.int64) * r) % t
    aut = Automorphism(group, perm.tolist())

    # Multiplier order and cycle data straight from the subgroup <r>
    powers = [1 % t]
    y = r
    while y != powers[0]:
        powers.append(y)
        y = y * r % t
    aut.__dict__['order'] = len(powers)
    if t * len(powers) <= _VECTOR_CYCLE_LIMIT:
        orbits = (np.arange(t, dtype=np.int64)[:, None] * np.array(powers)[None, :]) % t
        rep = orbits.min(axis=1)
        rep.setflags(write=False)
        aut.__dict__['cycle_representatives'] = rep
    return aut


def cycle_of(automorphism: Automorphism, g: int) -> frozenset:
    """{alpha^r(g) : 1 <= r <= ell}"""
    orbit = {g}
    y = automorphism(g)
    while y != g:
        orbit.add(y)
        y = automorphism(y)
    return frozenset(orbit)


def _power_table(group: FiniteGroup, n: int) -> np.ndarray:
    """powers[x, c] = x^c for 0 <= c < n"""
    elements = np.arange(group.order, dtype=np.int64)
    powers = np.zeros((group.order, n), dtype=np.int64)
    for c in range(1, n):
        powers[:, c] = group.multiply_many(powers[:, c - 1], elements)
    return powers


def _product_partials(group: FiniteGroup,
                      depth: int) -> Iterator[Tuple[Tuple[int, ...], np.ndarray, np.ndarray]]:
    """
    Injective homomorphisms on <g_1, ..., g_depth> for a direct product

    Generator images are fixed one at a time. The image h of g_i must have
    the order of g_i and meet the image of <g_1, ..., g_(i-1)> only in the
    identity; together these are exactly the injective extensions. Yields
    (images, subgroup elements, their images) with matching layouts.
    """
    gens = group.generators
    gen_orders = [group.element_order(g) for g in gens]
    powers = _power_table(group, max(gen_orders))
    orders = [group.element_order(x) for x in range(group.order)]
    candidates = [[x for x in range(group.order) if orders[x] == n] for n in gen_orders]

    def extend(level, images, sub, sub_img):
        if level == depth:
            yield images, sub, sub_img
            return
        n = gen_orders[level]
        taken = np.zeros(group.order, dtype=bool)
        taken[sub_img] = True
        new_sub = group.multiply_many(sub[None, :], powers[gens[level], :n, None]).ravel()
        for h in candidates[level]:
            if taken[powers[h, 1:n]].any():
                continue
            new_img = group.multiply_many(sub_img[None, :], powers[h, :n, None]).ravel()
            yield from extend(level + 1, images + (h,), new_sub, new_img)

    identity = np.zeros(1, dtype=np.int64)
    yield from extend(0, (), identity, identity)


def _count_product_automorphisms(group: FiniteGroup, stop_above: Optional[int] = None) -> int:
    gens = group.generators
    n = group.element_order(gens[-1])
    powers = _power_table(group, n)
    last = np.array([x for x in range(group.order) if group.element_order(x) == n], dtype=np.int64)
    last_powers = powers[last, 1:n]

    total = 0
    for _, _, sub_img in _product_partials(group, len(gens) - 1):
        taken = np.zeros(group.order, dtype=bool)
        taken[sub_img] = True
        total += int((~taken[last_powers].any(axis=1)).sum())
        if stop_above is not None and total > stop_above:
            break
    return total


def count_automorphisms(group: FiniteGroup, stop_above: Optional[int] = None) -> int:
    """
    |Aut(G)| without building the automorphisms

    With stop_above, counting may stop early once the total exceeds it.
    """
    if group.family == 'cyclic':
        return int(totient(group.order)) if group.order > 1 else 1
    if group.family == 'product':
        return _count_product_automorphisms(group, stop_above)
    return len(enumerate_automorphisms(group))


def enumerate_automorphisms(group: FiniteGroup,
                            max_order: int = DEFAULT_AUTOMORPHISM_MAX_ORDER,
                            max_count: int = DEFAULT_AUTOMORPHISM_MAX_COUNT) -> List[Automorphism]:
    """
    All automorphisms, sorted by permutation

    Direct products extend generator images one generator at a time and
    prune non-injective prefixes; dihedral and quaternion groups check each
    pair of generator images of matching order.

    Raises:
        EnumerationLimitError: group order above max_order, or more than
            max_count automorphisms
    """
    if group.order > max_order:
        raise EnumerationLimitError(
            f"{group.name} has order {group.order}; exhaustive enumeration stops at {max_order}"
        )

    if group.family == 'cyclic':
        return [multiplication_automorphism(group, r)
                for r in range(1, max(group.order, 2)) if math.gcd(r, group.order) == 1]

    if group.family == 'product':
        count = _count_product_automorphisms(group, stop_above=max_count)
        if count > max_count:
            raise EnumerationLimitError(
                f"{group.name} has more than {max_count} automorphisms; use count_automorphisms"
            )
        gens = group.generators
        automorphisms = []
        for _, sub, sub_img in _product_partials(group, len(gens)):
            perm = np.empty(group.order, dtype=np.int64)
            perm[sub] = sub_img
            automorphisms.append(Automorphism(group, perm.tolist()))
        return sorted(automorphisms, key=lambda aut: aut.perm)

    gens = group.generators
    orders = [group.element_order(x) for x in range(group.order)]
    candidates = [[x for x in range(group.order) if orders[x] == orders[g]] for g in gens]

    found: Dict[Tuple[int, ...], Automorphism] = {}
    for images in product(*candidates):
        try:
            aut = automorphism_from_generator_images(group, dict(zip(gens, images)))
        except AutomorphismError:
            continue
        found.setdefault(aut.perm, aut)
    return [found[perm] for perm in sorted(found)]


def automorphism_group_orders(group: FiniteGroup,
                              max_order: int = DEFAULT_AUTOMORPHISM_MAX_ORDER) -> Counter:
    """Multiset of the orders of the elements of Aut(G)"""
    return Counter(aut.order for aut in enumerate_automorphisms(group, max_order))


def automorphisms_of_order(group: FiniteGroup, ell: int,
                           max_order: int = DEFAULT_AUTOMORPHISM_MAX_ORDER) -> List[Automorphism]:
    return [aut for aut in enumerate_automorphisms(group, max_order) if aut.order == ell]


def conjugacy_representatives(automorphisms: Sequence[Automorphism],
                              all_automorphisms: Sequence[Automorphism]) -> List[Automorphism]:
    """
    One automorphism per conjugacy class under Aut(G)

    The class of alpha is labelled by the smallest permutation among
    beta alpha beta^-1; the first member seen in input order is kept.
    """
    kept: Dict[Tuple[int, ...], Automorphism] = {}
    inverses = [(beta, beta.inverse()) for beta in all_automorphisms]
    for alpha in automorphisms:
        label = min(beta.compose(alpha).compose(beta_inv).perm for beta, beta_inv in inverses)
        kept.setdefault(label, alpha)
    return list(kept.values())
