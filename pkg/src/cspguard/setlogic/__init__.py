"""Families of event sets and of event-set pairs, on two interchangeable backends."""

from .bdd import IMPLEMENTATION as BDD_IMPLEMENTATION
from .explicit import DEFAULT_CAP as EXPLICIT_CAP
from .explicit import ExplicitAlgebra
from .families import (
    PAIR,
    SET,
    AlphabetMismatch,
    Algebra,
    BackendMismatch,
    CapExceeded,
    Family,
    FamilyError,
    KindMismatch,
)
from .symbolic import SymbolicAlgebra

BACKENDS = ("explicit", "symbolic")


def make_algebra(alphabet, backend: str = "explicit") -> Algebra:
    if backend == "explicit":
        return ExplicitAlgebra(alphabet)
    if backend == "symbolic":
        return SymbolicAlgebra(alphabet)
    raise ValueError(f"unknown backend {backend!r}")


def backend_parity(f_explicit: Family, f_symbolic: Family, cap: int = EXPLICIT_CAP) -> bool:
    """Do two families from different backends denote the same members?"""
    a, b = f_explicit.algebra, f_symbolic.algebra
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("families range over different alphabets")
    if a.n > cap:
        raise CapExceeded(f"parity check limited to {cap} events")
    if f_explicit.kind != f_symbolic.kind:
        return False
    if f_explicit.count() != f_symbolic.count():
        return False
    return f_explicit.members(cap=1 << (2 * cap)) == f_symbolic.members(cap=1 << (2 * cap))


__all__ = [name for name in dir() if not name.startswith("_")]
