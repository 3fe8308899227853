"""
Backtracking Searches and the Prime Sweep

Depth-first searches for pseudoterraces (under a given automorphism or any
automorphism of a given order) and for ell-tuples of arrangements, plus the
sweep of the primitive-root construction over ranges of primes.

Every search fixes a_1 = identity (quotient triangles are invariant under
left translation) and partitions the tree on a_2. Partitions run serially
or in a process pool and are merged in a fixed order with identical
truncation rules, so the witness stream never depends on the worker count.
"""

import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import divisors, isprime, primerange, primitive_root
from sympy.ntheory import is_primitive_root, n_order

from constructions import (ConstructionError, PrimitiveRootCertificate, multiplier_for,
                           primitive_root_arrangement, primitive_root_certificate)
from designs import BalanceReport, Design, balance_report, design_from_tuple
from groups import (AutomorphismError, Automorphism, FiniteGroup, conjugacy_representatives,
                    enumerate_automorphisms, make_group, multiplication_automorphism,
                    parse_automorphism)
from triangles import Arrangement, TupleFamily, expand_pseudoterrace, pseudoterrace_k, roman_k

MODE_GIVEN = 'given'
MODE_ANY = 'any'
MODE_TUPLE = 'tuple'
MODES = (MODE_GIVEN, MODE_ANY, MODE_TUPLE)

STATUS_COMPLETE = 'complete'
STATUS_WITNESS_LIMIT = 'witness_limit'
STATUS_BUDGET_EXHAUSTED = 'budget_exhausted'

DEFAULT_NODE_BUDGET = 20_000_000
DEFAULT_MAX_ORDER_PSEUDOTERRACE = 18
DEFAULT_MAX_ORDER_TUPLES = 12
DEFAULT_CONJUGACY_MAX_ORDER = 12
DEFAULT_P_MAX_LIMIT = 10000


class SearchError(ValueError):
    """Invalid search or sweep parameters"""


class SearchBudgetExhausted(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"Search budget exhausted after {nodes} nodes")
        self.nodes = nodes


@dataclass
class SearchSpec:
    """
    What to search for

    k=None targets Vatican balance (k = t-1). max_witnesses=None collects
    every witness.
    """

    group: FiniteGroup
    ell: int
    k: Optional[int] = None
    mode: str = MODE_GIVEN
    automorphism: Optional[Automorphism] = None
    fixed_members: Tuple[Arrangement, ...] = ()
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: Optional[float] = None
    max_witnesses: Optional[int] = 1
    max_order: Optional[int] = None
    conjugacy_max_order: int = DEFAULT_CONJUGACY_MAX_ORDER

    def __post_init__(self):
        t = self.group.order
        if self.k is None:
            self.k = t - 1
        if self.ell < 1:
            raise SearchError(f"Fold must be at least 1, got {self.ell}")
        if t < 2 or not 1 <= self.k <= t - 1:
            raise SearchError(f"Balance k must lie in 1..{t - 1}, got {self.k}")
        if self.mode not in MODES:
            raise SearchError(f"Unknown search mode {self.mode!r}; expected one of {MODES}")

        if self.mode == MODE_GIVEN:
            if self.automorphism is None:
                raise SearchError("Mode 'given' needs an automorphism")
            if self.automorphism.group != self.group:
                raise SearchError("Automorphism belongs to a different group")
            if self.automorphism.order != self.ell:
                raise SearchError(
                    f"Automorphism {self.automorphism.describe()} has order "
                    f"{self.automorphism.order}, not {self.ell}"
                )
        elif self.automorphism is not None:
            raise SearchError(f"Mode {self.mode!r} does not take an automorphism")

        self.fixed_members = tuple(self.fixed_members)
        if self.fixed_members:
            if self.mode != MODE_TUPLE:
                raise SearchError("Fixed members only apply to tuple searches")
            if len(self.fixed_members) >= self.ell:
                raise SearchError(f"At most {self.ell - 1} members can be fixed")
            for member in self.fixed_members:
                if member.group != self.group:
                    raise SearchError("Fixed member belongs to a different group")

        if self.node_budget < 1:
            raise SearchError("Node budget must be positive")
        if self.max_witnesses is not None and self.max_witnesses < 1:
            raise SearchError("max_witnesses must be positive (or None for all)")

        limit = self.max_order
        if limit is None:
            limit = DEFAULT_MAX_ORDER_TUPLES if self.mode == MODE_TUPLE \
                else DEFAULT_MAX_ORDER_PSEUDOTERRACE
        if t > limit:
            raise SearchError(f"{self.group.name} has order {t}; {self.mode} searches stop at {limit}")

    @property
    def vatican(self) -> bool:
        return self.k == self.group.order - 1


@dataclass(frozen=True)
class PseudoterraceWitness:
    arrangement: Arrangement
    automorphism: Automorphism

    @property
    def k(self) -> int:
        return pseudoterrace_k(self.arrangement, self.automorphism)

    def family(self) -> TupleFamily:
        return expand_pseudoterrace(self.arrangement, self.automorphism)


@dataclass
class SearchResult:
    spec: SearchSpec
    witnesses: list
    status: str
    nodes: int
    partitions: int
    warnings: List[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.status == STATUS_COMPLETE

    @property
    def exhausted(self) -> bool:
        return self.status == STATUS_BUDGET_EXHAUSTED

    @property
    def proves_nonexistence(self) -> bool:
        """Only a completed search with nothing found settles nonexistence"""
        return self.complete and not self.witnesses


# ---------------------------------------------------------------------------
# Backtracking engine
# ---------------------------------------------------------------------------

class _LineCounter:
    """
    Multiplicities per quotient line (distances 1..k), keyed by a label
    (cycle representative, or the element itself for tuples), each label
    with its own capacity
    """

    def __init__(self, quotients: List[List[int]], label: List[int],
                 capacity: List[int], k: int):
        self.q = quotients
        self.label = label
        self.capacity = capacity
        self.k = k
        self.counts = [[0] * len(label) for _ in range(k + 1)]

    def place(self, seq: List[int], x: int) -> Optional[List[Tuple[int, int]]]:
        """Count x appended to seq; None (and no change) on a violation"""
        m = len(seq)
        touched = []
        for d in range(1, min(self.k, m) + 1):
            c = self.label[self.q[seq[m - d]][x]]
            row = self.counts[d]
            row[c] += 1
            touched.append((d, c))
            if row[c] > self.capacity[c]:
                self.remove(touched)
                return None
        return touched

    def remove(self, touched: List[Tuple[int, int]]):
        for d, c in touched:
            self.counts[d][c] -= 1

    def load(self, sequence: Sequence[int]) -> bool:
        """Count a whole fixed sequence; False on a violation"""
        seq = [sequence[0]]
        for x in sequence[1:]:
            if self.place(seq, x) is None:
                return False
            seq.append(x)
        return True


class _Backtracker:
    def __init__(self, t: int, counter: _LineCounter, node_budget: int,
                 deadline: Optional[float] = None):
        self.t = t
        self.counter = counter
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchBudgetExhausted(self.nodes)
        if self.deadline is not None and self.nodes & 0xFFF == 0 and time.time() > self.deadline:
            raise SearchBudgetExhausted(self.nodes)

    def extend(self, seq: List[int], used: List[bool],
               lower: Optional[Tuple[int, ...]] = None, tight: bool = False) -> Iterator[Tuple[int, ...]]:
        """
        Complete seq to full arrangements in lexicographic order; while
        tight, the result must not fall below lower
        """
        m = len(seq)
        if m == self.t:
            yield tuple(seq)
            return
        floor = lower[m] if tight else 1
        for x in range(max(floor, 1), self.t):
            if used[x]:
                continue
            self._tick()
            touched = self.counter.place(seq, x)
            if touched is None:
                continue
            seq.append(x)
            used[x] = True
            yield from self.extend(seq, used, lower, tight and x == floor)
            seq.pop()
            used[x] = False
            self.counter.remove(touched)

    def from_prefix(self, a2: int, lower: Optional[Tuple[int, ...]] = None) -> Iterator[Tuple[int, ...]]:
        """Arrangements starting (identity, a2)"""
        if lower is not None and a2 < lower[1]:
            return
        self._tick()
        touched = self.counter.place([0], a2)
        if touched is None:
            return
        used = [False] * self.t
        used[0] = used[a2] = True
        yield from self.extend([0, a2], used, lower, lower is not None and a2 == lower[1])
        self.counter.remove(touched)

    def from_prefix_range(self, lower: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        """Arrangements lexicographically at or above lower"""
        for a2 in range(lower[1], self.t):
            yield from self.from_prefix(a2, lower)


def _quotient_lists(group: FiniteGroup) -> List[List[int]]:
    elements = np.arange(group.order)
    return group.quotient_many(elements[:, None], elements[None, :]).tolist()


def _tuple_stream(bt: _Backtracker, fixed: List[Tuple[int, ...]], ell: int,
                  a2: Optional[int]) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """
    Fill the free members one after another; the first free member starts
    (identity, a2) when a2 is given, later free members are lexicographically
    non-decreasing
    """
    n_fixed = len(fixed)

    def fill(members):
        if len(members) == ell:
            yield tuple(members)
            return
        if len(members) == n_fixed:
            if a2 is None:
                streams = (bt.from_prefix(x) for x in range(1, bt.t))
            else:
                streams = (bt.from_prefix(a2),)
            for stream in streams:
                for member in stream:
                    yield from fill(members + [member])
        else:
            for member in bt.from_prefix_range(members[-1]):
                yield from fill(members + [member])

    yield from fill(list(fixed))


@dataclass(frozen=True)
class _Partition:
    mode: str
    group_name: str
    perm: Optional[Tuple[int, ...]]
    ell: int
    k: int
    a2: int
    fixed: Tuple[Tuple[int, ...], ...]
    node_budget: int
    max_witnesses: Optional[int]
    deadline: Optional[float]


@dataclass
class _PartitionOutcome:
    witnesses: list
    status: str
    nodes: int


def _make_backtracker(group: FiniteGroup, part: _Partition) -> _Backtracker:
    t = group.order
    if part.mode == MODE_TUPLE:
        counter = _LineCounter(_quotient_lists(group), list(range(t)), [part.ell] * t, part.k)
    else:
        aut = Automorphism(group, part.perm)
        counter = _LineCounter(_quotient_lists(group), aut.cycle_representatives.tolist(),
                               aut.cycle_sizes.tolist(), part.k)
    return _Backtracker(t, counter, part.node_budget, part.deadline)


def _run_partition(part: _Partition) -> _PartitionOutcome:
    group = make_group(part.group_name)
    bt = _make_backtracker(group, part)

    if part.mode == MODE_TUPLE:
        feasible = all(bt.counter.load(member) for member in part.fixed)
        stream = _tuple_stream(bt, list(part.fixed), part.ell, part.a2) if feasible else iter(())
    else:
        stream = bt.from_prefix(part.a2)

    witnesses = []
    try:
        for witness in stream:
            witnesses.append(witness)
            if part.max_witnesses is not None and len(witnesses) >= part.max_witnesses:
                return _PartitionOutcome(witnesses, STATUS_WITNESS_LIMIT, bt.nodes)
    except SearchBudgetExhausted:
        return _PartitionOutcome(witnesses, STATUS_BUDGET_EXHAUSTED, bt.nodes)
    return _PartitionOutcome(witnesses, STATUS_COMPLETE, bt.nodes)


def candidate_automorphisms(spec: SearchSpec) -> List[Automorphism]:
    """Automorphisms to try: the given one, or all of order ell up to conjugacy on small groups"""
    if spec.mode == MODE_GIVEN:
        return [spec.automorphism]
    everything = enumerate_automorphisms(spec.group)
    of_order = [aut for aut in everything if aut.order == spec.ell]
    if spec.group.order <= spec.conjugacy_max_order:
        of_order = conjugacy_representatives(of_order, everything)
    return of_order


def _plan(spec: SearchSpec, deadline: Optional[float]) -> Tuple[list, List[Optional[Automorphism]]]:
    t = spec.group.order
    if spec.mode == MODE_TUPLE:
        automorphisms: List[Optional[Automorphism]] = [None]
    else:
        automorphisms = candidate_automorphisms(spec)

    slots = [(aut, a2) for aut in automorphisms for a2 in range(1, t)]
    per_partition = max(1, math.ceil(spec.node_budget / max(len(slots), 1)))
    fixed = tuple(member.elements for member in spec.fixed_members)

    partitions = [
        _Partition(
            mode=spec.mode,
            group_name=spec.group.name,
            perm=aut.perm if aut is not None else None,
            ell=spec.ell,
            k=spec.k,
            a2=a2,
            fixed=fixed,
            node_budget=per_partition,
            max_witnesses=spec.max_witnesses,
            deadline=deadline,
        )
        for aut, a2 in slots
    ]
    return partitions, [aut for aut, _ in slots]


def _execute(spec: SearchSpec, workers: int, verbose: bool) -> Tuple[list, str, int, int]:
    deadline = time.time() + spec.time_budget if spec.time_budget else None
    partitions, automorphisms = _plan(spec, deadline)

    if workers > 1 and len(partitions) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = pool.map(_run_partition, partitions)
            return _merge(spec, partitions, automorphisms, outcomes, verbose)
    return _merge(spec, partitions, automorphisms, map(_run_partition, partitions), verbose)


def _merge(spec, partitions, automorphisms, outcomes, verbose) -> Tuple[list, str, int, int]:
    """Merge partition outcomes in partition order; stops at the first limit reached"""
    found = []
    nodes = 0
    status = STATUS_COMPLETE
    for part, aut, outcome in zip(partitions, automorphisms, outcomes):
        nodes += outcome.nodes
        if verbose:
            label = f"{aut.describe()} " if aut is not None else ""
            print(f"  🔍 {label}a2={spec.group.format_element(part.a2)}: "
                  f"{len(outcome.witnesses)} witness(es), {outcome.nodes} nodes, {outcome.status}",
                  file=sys.stderr)
        found.extend((aut, w) for w in outcome.witnesses)
        if spec.max_witnesses is not None and len(found) >= spec.max_witnesses:
            found = found[:spec.max_witnesses]
            status = STATUS_WITNESS_LIMIT
            break
        if outcome.status == STATUS_BUDGET_EXHAUSTED:
            status = STATUS_BUDGET_EXHAUSTED
            break
    return found, status, nodes, len(partitions)


def checked_design(family: TupleFamily, k_min: Optional[int] = None) -> Tuple[Design, BalanceReport]:
    """
    Build the design of family and confirm the counting oracle agrees

    Raises:
        RuntimeError: the design-level k differs from roman_k, or falls below k_min
    """
    design = design_from_tuple(family)
    report = balance_report(design)
    k = roman_k(family)
    if report.max_k != k:
        raise RuntimeError(f"Design-level k = {report.max_k} disagrees with triangle-level k = {k}")
    if k_min is not None and report.max_k < k_min:
        raise RuntimeError(f"Design-level k = {report.max_k} is below the requested {k_min}")
    return design, report


def search_pseudoterraces(spec: SearchSpec, workers: int = 1, verbose: bool = False) -> SearchResult:
    """
    Collect pseudoterraces meeting spec (modes 'given' and 'any')

    Witnesses come in automorphism order, then lexicographic element order.
    Each witness is re-checked with pseudoterrace_k, and its expanded design
    with the counting oracle, before it is returned.
    """
    if spec.mode == MODE_TUPLE:
        raise SearchError("Use search_tuples for tuple searches")

    found, status, nodes, n_parts = _execute(spec, workers, verbose)
    witnesses = []
    for aut, elements in found:
        witness = PseudoterraceWitness(Arrangement(spec.group, elements), aut)
        if witness.k < spec.k:
            raise RuntimeError(f"Search emitted {witness.arrangement} with k={witness.k} < {spec.k}")
        checked_design(witness.family(), spec.k)
        witnesses.append(witness)

    result = SearchResult(spec, witnesses, status, nodes, n_parts)
    if spec.mode == MODE_ANY and n_parts == 0:
        result.warnings.append(f"{spec.group.name} has no automorphism of order {spec.ell}")
    return result


def search_tuples(spec: SearchSpec, workers: int = 1, verbose: bool = False) -> SearchResult:
    """Collect ell-tuples of arrangements with roman_k >= spec.k, each confirmed on its design"""
    if spec.mode != MODE_TUPLE:
        raise SearchError("search_tuples needs mode 'tuple'")

    found, status, nodes, n_parts = _execute(spec, workers, verbose)
    witnesses = []
    for _, members in found:
        family = TupleFamily(tuple(Arrangement(spec.group, m) for m in members))
        if roman_k(family) < spec.k:
            raise RuntimeError(f"Search emitted a family with roman_k < {spec.k}")
        checked_design(family, spec.k)
        witnesses.append(family)
    return SearchResult(spec, witnesses, status, nodes, n_parts)


def iter_pseudoterraces(spec: SearchSpec) -> Iterator[PseudoterraceWitness]:
    """
    Stream pseudoterraces under one shared node budget, serially

    Raises:
        SearchBudgetExhausted: the budget ran out before the tree was finished
    """
    if spec.mode == MODE_TUPLE:
        raise SearchError("Use iter_tuples for tuple searches")
    group = spec.group
    deadline = time.time() + spec.time_budget if spec.time_budget else None
    emitted = 0
    spent = 0
    for aut in candidate_automorphisms(spec):
        part = _Partition(spec.mode, group.name, aut.perm, spec.ell, spec.k, 1, (),
                          spec.node_budget - spent, None, deadline)
        bt = _make_backtracker(group, part)
        try:
            for a2 in range(1, group.order):
                for elements in bt.from_prefix(a2):
                    yield PseudoterraceWitness(Arrangement(group, elements), aut)
                    emitted += 1
                    if spec.max_witnesses is not None and emitted >= spec.max_witnesses:
                        return
        except SearchBudgetExhausted:
            raise SearchBudgetExhausted(spent + bt.nodes)
        spent += bt.nodes


def iter_tuples(spec: SearchSpec) -> Iterator[TupleFamily]:
    """
    Stream tuple witnesses serially under the node budget

    Raises:
        SearchBudgetExhausted: the budget ran out before the tree was finished
    """
    if spec.mode != MODE_TUPLE:
        raise SearchError("iter_tuples needs mode 'tuple'")
    group = spec.group
    deadline = time.time() + spec.time_budget if spec.time_budget else None
    fixed = [member.elements for member in spec.fixed_members]
    part = _Partition(MODE_TUPLE, group.name, None, spec.ell, spec.k, 1, tuple(fixed),
                      spec.node_budget, None, deadline)
    bt = _make_backtracker(group, part)
    if not all(bt.counter.load(member) for member in fixed):
        return
    emitted = 0
    for members in _tuple_stream(bt, fixed, spec.ell, None):
        yield TupleFamily(tuple(Arrangement(group, m) for m in members))
        emitted += 1
        if spec.max_witnesses is not None and emitted >= spec.max_witnesses:
            return


# ---------------------------------------------------------------------------
# Prime sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    """Best primitive-root result for one (p, ell); best_k None when no root gives this fold"""

    p: int
    ell: int
    best_k: Optional[int] = None
    rho: Optional[int] = None
    r: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.best_k is not None

    @property
    def vatican(self) -> bool:
        return self.best_k == self.p - 1

    def quadruple(self) -> str:
        if not self.found:
            return f"({self.ell})"
        return f"({self.ell},{self.best_k},{self.rho},{self.r})"

    def listing(self) -> str:
        if not self.found:
            return f"({self.p}; {self.ell})"
        return f"({self.p}; {self.ell}, {self.best_k}, {self.rho}, {self.r})"

    def to_dict(self) -> dict:
        data = {'p': self.p, 'ell': self.ell, 'best_k': self.best_k}
        if self.found:
            data['rho'] = self.rho
            data['r'] = self.r
        return data


def fold_multipliers(p: int, ell: int) -> List[int]:
    """The elements of order ell in the multiplicative group mod p, ascending"""
    g = primitive_root(p)
    base = pow(g, (p - 1) // ell, p)
    return sorted(pow(base, j, p) for j in range(1, ell + 1) if math.gcd(j, ell) == 1)


def sweep_prime(p: int, ell_max: Optional[int] = None) -> List[SweepRow]:
    """
    One row per non-trivial fold 2 <= ell < p-1 (capped by ell_max)

    Each multiplier r of order ell corresponds to exactly one rho = r/(r-1);
    only primitive rho count. The witness is the smallest rho reaching the
    best k.
    """
    rows = []
    for ell in divisors(p - 1):
        if ell < 2 or ell >= p - 1 or (ell_max is not None and ell > ell_max):
            continue
        best: Optional[PrimitiveRootCertificate] = None
        for r in fold_multipliers(p, ell):
            rho = multiplier_for(p, r)
            if not is_primitive_root(rho, p):
                continue
            certificate = primitive_root_certificate(p, rho)
            if best is None or (certificate.k, -certificate.rho) > (best.k, -best.rho):
                best = certificate
        if best is None:
            rows.append(SweepRow(p, ell))
        else:
            rows.append(SweepRow(p, ell, best.k, best.rho, best.r))
    return rows


def sweep_primes(p_min: int, p_max: int, ell_max: Optional[int] = None, k_min: int = 0,
                 workers: int = 1, verbose: bool = False,
                 p_max_limit: int = DEFAULT_P_MAX_LIMIT) -> List[SweepRow]:
    """
    Sweep the primitive-root construction over primes p_min <= p <= p_max

    Rows with best k below k_min are dropped (k_min <= 0 keeps the
    '(ell)' rows with no construction). Rows are ordered by p, then ell.

    Raises:
        SearchError: p_max above p_max_limit or an empty range
    """
    if p_max > p_max_limit:
        raise SearchError(f"p_max={p_max} is above the sweep limit {p_max_limit}")
    if p_min > p_max:
        raise SearchError(f"Empty prime range {p_min}..{p_max}")

    primes = list(primerange(max(p_min, 2), p_max + 1))
    if workers > 1 and len(primes) > 1:
        chunk = max(1, len(primes) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_prime = list(pool.map(sweep_prime, primes, repeat(ell_max), chunksize=chunk))
    else:
        per_prime = []
        for p in primes:
            per_prime.append(sweep_prime(p, ell_max))
            if verbose:
                print(f"  📊 p={p}: {len(per_prime[-1])} fold(s)", file=sys.stderr)

    return [row for rows in per_prime for row in rows if (row.best_k or 0) >= k_min]


# ---------------------------------------------------------------------------
# Witness verification
# ---------------------------------------------------------------------------

@dataclass
class WitnessCheck:
    ok: bool
    achieved_k: Optional[int]
    failures: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_prime_witness(p: int, ell: int, k: int, rho: int, r: int) -> WitnessCheck:
    """Check a published (p; ell, k, rho, r) entry component by component"""
    failures = []
    if not isprime(p):
        return WitnessCheck(False, None, [f"{p} is not prime"])
    if not 1 < rho < p or not is_primitive_root(rho, p):
        return WitnessCheck(False, None, [f"rho={rho} is not a primitive root mod {p}"])

    expected_r = multiplier_for(p, rho)
    if r % p != expected_r:
        failures.append(f"r={r} but rho/(rho-1) = {expected_r} mod {p}")
    order = int(n_order(expected_r, p))
    if order != ell:
        failures.append(f"order of r is {order}, not {ell}")

    try:
        achieved = primitive_root_certificate(p, rho).k
    except ConstructionError as e:
        return WitnessCheck(False, None, failures + [str(e)])
    if achieved < k:
        failures.append(f"pseudoterrace k = {achieved} < {k}")
    return WitnessCheck(not failures, achieved, failures)


def verify_group_witness(group: FiniteGroup, ell: int, k: int,
                         automorphism: Union[Automorphism, str],
                         arrangement: Union[Arrangement, str]) -> WitnessCheck:
    """Check a published pseudoterrace row: group, fold, balance, automorphism, sequence"""
    try:
        if isinstance(automorphism, str):
            automorphism = parse_automorphism(group, automorphism)
    except AutomorphismError as e:
        return WitnessCheck(False, None, [f"automorphism: {e}"])
    try:
        if isinstance(arrangement, str):
            arrangement = Arrangement.parse(group, arrangement)
    except ValueError as e:
        return WitnessCheck(False, None, [f"arrangement: {e}"])

    failures = []
    if automorphism.order != ell:
        failures.append(f"automorphism has order {automorphism.order}, not {ell}")
    achieved = pseudoterrace_k(arrangement, automorphism)
    if achieved < k:
        failures.append(f"pseudoterrace k = {achieved} < {k}")
    return WitnessCheck(not failures, achieved, failures)


def verify_table_witness(subject: Union[int, FiniteGroup], ell: int, k: int,
                         generator, witness) -> WitnessCheck:
    """
    verify_table_witness(p, ell, k, rho, r) for prime-table entries, or
    verify_table_witness(group, ell, k, automorphism, arrangement) for group rows
    """
    if isinstance(subject, FiniteGroup):
        return verify_group_witness(subject, ell, k, generator, witness)
    return verify_prime_witness(int(subject), ell, k, int(generator), int(witness))


def primitive_root_family(p: int, rho: int) -> TupleFamily:
    """The ell-tuple obtained by expanding the primitive-root arrangement under x -> r*x"""
    arrangement = primitive_root_arrangement(p, rho)
    return expand_pseudoterrace(arrangement,
                                multiplication_automorphism(arrangement.group, multiplier_for(p, rho)))
