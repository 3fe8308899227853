"""
Closed-Form Constructions

Walecki zigzag terraces, Prescott's Roman triples for odd orders and the
primitive-root construction (0, rho, rho^2, ..., rho^(p-1)) over Z_p.
"""

from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np
from sympy import isprime, mod_inverse, primitive_root
from sympy.ntheory import is_primitive_root, n_order

from groups import cyclic_group, multiplication_automorphism
from triangles import Arrangement, TupleFamily, pseudoterrace_k, quotient_line, roman_k


class ConstructionError(ValueError):
    """Parameters outside a construction's domain"""


class ConstructionIntegrityError(RuntimeError):
    """A construction produced output that fails its own self-check"""


@dataclass(frozen=True)
class PrimitiveRootCertificate:
    p: int
    rho: int
    r: int
    ell: int
    k: int

    @property
    def vatican(self) -> bool:
        return self.k == self.p - 1

    def quadruple(self) -> str:
        """Table notation (ell,k,rho,r)"""
        return f"({self.ell},{self.k},{self.rho},{self.r})"

    def listing(self) -> str:
        """List notation (p; ell, k, rho, r)"""
        return f"({self.p}; {self.ell}, {self.k}, {self.rho}, {self.r})"

    def to_dict(self) -> dict:
        data = asdict(self)
        data['vatican'] = self.vatican
        return data


@dataclass(frozen=True)
class NearRomanProfile:
    """Multiplicities of the non-identity elements in line T_1"""

    counts: tuple
    doubled: tuple
    missing: tuple

    @property
    def is_near_roman(self) -> bool:
        """Exactly one element twice, exactly one absent, the rest once"""
        return (len(self.doubled) == 1 and len(self.missing) == 1
                and max(self.counts) <= 2)


def near_roman_profile(arrangement: Arrangement) -> NearRomanProfile:
    t = arrangement.group.order
    counts = np.bincount(quotient_line(arrangement, 1), minlength=t)[1:]
    return NearRomanProfile(
        counts=tuple(int(c) for c in counts),
        doubled=tuple(int(g) + 1 for g in np.flatnonzero(counts == 2)),
        missing=tuple(int(g) + 1 for g in np.flatnonzero(counts == 0)),
    )


def walecki(t: int) -> Arrangement:
    """(0, t-1, 1, t-2, ...): position j holds j/2 for even j, t-(j+1)/2 for odd j"""
    if t < 2:
        raise ConstructionError(f"walecki needs t >= 2, got {t}")
    seq = [j // 2 if j % 2 == 0 else t - (j + 1) // 2 for j in range(t)]
    return Arrangement(cyclic_group(t), tuple(seq))


def prescott_triple(t: int) -> TupleFamily:
    """
    Three zigzag arrangements of Z_t forming a Roman triple (t odd, t >= 5)

    Each member is checked to be near-Roman and the triple to be Roman.

    Raises:
        ConstructionError: t even or below 5
        ConstructionIntegrityError: generated sequences fail the self-check
    """
    if t < 5 or t % 2 == 0:
        raise ConstructionError(f"Prescott triples need odd t >= 5, got {t}")

    s = -1 if (t // 2) % 2 else 1
    m = (t - 1) // 2
    h = (t - 3) // 2

    x = [j if j % 2 else t - j for j in range(1, m + 1)]
    y = [v + 1 for v in x]
    z = [t - j - 1 if j % 2 else j for j in range(1, h + 1)]
    w = [t - 2 - j if j % 2 else j - 1 for j in range(1, h + 1)]
    middle = (t - 2 - s) // 2

    endpoints = [
        (x[-1], (t + s) // 2, "first zigzag end"),
        (z[-1], (t - 1 + 2 * s) // 2, "third zigzag end"),
        (w[-1], (t - 3 + 2 * s) // 2, "fourth zigzag end"),
    ]
    for got, want, where in endpoints:
        if got != want:
            raise ConstructionIntegrityError(f"t={t}: {where} is {got}, expected {want}")

    group = cyclic_group(t)
    sequences = [
        [0] + x + y[::-1],
        [0] + y + x[::-1],
        [0, t - 1] + z + [middle] + w[::-1],
    ]
    members = []
    for seq in sequences:
        try:
            member = Arrangement(group, tuple(seq))
        except ValueError as e:
            raise ConstructionIntegrityError(f"t={t}: {e}") from e
        profile = near_roman_profile(member)
        if not profile.is_near_roman:
            raise ConstructionIntegrityError(
                f"t={t}: {member} is not near-Roman "
                f"(doubled {profile.doubled}, missing {profile.missing})"
            )
        members.append(member)

    family = TupleFamily(tuple(members))
    if roman_k(family) < 1:
        raise ConstructionIntegrityError(f"t={t}: generated triple is not Roman")
    return family


def _require_primitive(p: int, rho: int):
    if not isprime(p):
        raise ConstructionError(f"{p} is not prime")
    if p == 2:
        raise ConstructionError("p = 2 has no usable primitive root (rho - 1 = 0)")
    if not 1 < rho < p or not is_primitive_root(rho, p):
        raise ConstructionError(f"{rho} is not a primitive root mod {p}")


def primitive_root_arrangement(p: int, rho: int) -> Arrangement:
    """
    (0, rho, rho^2, ..., rho^(p-1)) over Z_p

    Raises:
        ConstructionError: p not prime or rho not primitive mod p
    """
    _require_primitive(p, rho)
    seq = [0]
    power = 1
    for _ in range(p - 1):
        power = power * rho % p
        seq.append(power)
    return Arrangement(cyclic_group(p), tuple(seq))


def multiplier_for(p: int, rho: int) -> int:
    """r = rho / (rho - 1) mod p"""
    return rho * int(mod_inverse(rho - 1, p)) % p


def primitive_root_certificate(p: int, rho: int) -> PrimitiveRootCertificate:
    """
    Evaluate the primitive-root construction under multiplication by rho/(rho-1)

    Raises:
        ConstructionError: p not prime or rho not primitive mod p
        ConstructionIntegrityError: the arrangement is not even a Roman pseudoterrace
    """
    arrangement = primitive_root_arrangement(p, rho)
    r = multiplier_for(p, rho)
    automorphism = multiplication_automorphism(arrangement.group, r)
    k = pseudoterrace_k(arrangement, automorphism)
    if k < 1:
        raise ConstructionIntegrityError(f"p={p}, rho={rho}: pseudoterrace k = 0")
    return PrimitiveRootCertificate(p=p, rho=rho, r=r, ell=int(n_order(r, p)), k=k)


def halving_terrace_check(p: int) -> Optional[PrimitiveRootCertificate]:
    """
    Certificate for rho = (p+1)/2 when that is a primitive root, else None

    Halving gives r = -1, so the arrangement is a terrace (ell = 2).
    """
    if p < 3 or not isprime(p):
        raise ConstructionError(f"Halving needs an odd prime, got {p}")
    rho = (p + 1) // 2
    if not is_primitive_root(rho, p):
        return None
    certificate = primitive_root_certificate(p, rho)
    if certificate.r != p - 1 or certificate.ell != 2:
        raise ConstructionIntegrityError(
            f"p={p}: halving gave r={certificate.r}, ell={certificate.ell}"
        )
    return certificate


def primitive_roots(p: int) -> List[int]:
    """All primitive roots mod p, ascending"""
    if not isprime(p):
        raise ConstructionError(f"{p} is not prime")
    return [g for g in range(1, p) if is_primitive_root(g, p)]


def vatican_singleton(t: int) -> Arrangement:
    """
    A Vatican arrangement of Z_t when t+1 is prime

    Position i holds the discrete log of i+1 to a primitive root of t+1, so
    the quotient lines are the logs of (i+j)/i, distinct along each line.

    Raises:
        ConstructionError: t+1 is not prime
    """
    p = t + 1
    if t < 1 or not isprime(p):
        raise ConstructionError(f"Vatican singletons from logarithms need t+1 prime, got t={t}")
    g = primitive_root(p)
    logs = [0] * p
    power = 1
    for e in range(t):
        logs[power] = e
        power = power * g % p
    return Arrangement(cyclic_group(t), tuple(logs[1:]))
