"""Open recursion over the lexicographic extension of a wellfounded relation.

A body sees a paired sequence alpha whose n-th entry is (u_n, k_n), where
k_n(v) is the recursive value at u|n * v when v_0 is strictly below u_n,
and the canonical zero of the output type otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .errors import FuelExhausted
from .orders import bool_lt, is_strict_prefix
from .seq_core import (
    ZERO_TAIL,
    Generator,
    InfSeq,
    PeriodicBlock,
    as_fuel,
    ext,
    run_deep,
    splice,
    spec,
)


@dataclass(frozen=True)
class OpenRecBody:
    """H computes the value; F (explicit recursor only) controls truncation.

    With ``reads_first_only`` set, F is handed the first component alone,
    an InfSeq, instead of the paired sequence.
    """

    H: Callable[["PairedSeq"], Any]
    F: Optional[Callable[[Any], int]] = None
    reads_first_only: bool = False
    lt: Callable[[Any, Any], bool] = is_strict_prefix
    zero_out: Any = 0


class PairedSeq:
    """alpha with alpha_0 = ``first`` and alpha_1(n)(v) = ``cont(n, v)``."""

    __slots__ = ("first", "_cont", "cutoff", "zero_out")

    def __init__(self, first: InfSeq, cont: Callable[[int, InfSeq], Any], cutoff: Optional[int] = None, zero_out: Any = 0):
        self.first = first
        self._cont = cont
        self.cutoff = cutoff
        self.zero_out = zero_out

    def cont(self, n: int, v: InfSeq):
        if self.cutoff is not None and n >= self.cutoff:
            return self.zero_out
        return self._cont(n, v)

    def __getitem__(self, n: int):
        return self.first[n], (lambda v: self.cont(n, v))


def _guarded(body: OpenRecBody, u: InfSeq, rec, fuel):
    lt, zero_out = body.lt, body.zero_out

    def cont(n: int, v: InfSeq):
        if not lt(v[0], u[n]):
            return zero_out
        fuel.enter(n)
        try:
            r = rec(splice(u, n, v))
        finally:
            fuel.leave()
        if callable(r):
            return _on_path(r, n, fuel)
        return r

    return cont


def _on_path(fn, label, fuel):
    # function-valued results recurse when applied, so re-enter the path then
    def applied(*args):
        fuel.enter(label)
        try:
            return fn(*args)
        finally:
            fuel.leave()

    return applied


def naive_orec(body: OpenRecBody, u: InfSeq, fuel=None):
    """orec(u) = H(u, n, v -> orec(u|n * v) if v_0 below u_n)."""
    fuel = as_fuel(fuel)

    def orec(u: InfSeq):
        fuel.spend()
        return body.H(PairedSeq(u, _guarded(body, u, orec, fuel), None, body.zero_out))

    return orec(u)


def _paired_infseq(u: InfSeq, cont, zero_out) -> InfSeq:
    zero_pair = (u.zero, lambda v: zero_out)
    return InfSeq((), Generator("paired", lambda n: (u[n], lambda v: cont(n, v))), zero_pair)


def _unpair(alpha_m: InfSeq, m: int, zero_first, zero_out) -> PairedSeq:
    pairs = alpha_m.prefix
    first = InfSeq(tuple(p[0] for p in pairs), ZERO_TAIL, zero_first)
    return PairedSeq(first, lambda n, v: pairs[n][1](v), m, zero_out)


def eorec(body: OpenRecBody, u: InfSeq, fuel=None):
    """Explicitly controlled recursion: H(spec(alpha, F)).

    Continuations on the truncated alpha call back into eorec, so recursion
    happens only where H asks for it.
    """
    if body.F is None:
        raise ValueError("eorec needs a control functional F")
    fuel = as_fuel(fuel)
    F, H, zero_out = body.F, body.H, body.zero_out

    def rec(u: InfSeq):
        fuel.spend()
        cont = _guarded(body, u, rec, fuel)
        alpha = _paired_infseq(u, cont, zero_out)
        if body.reads_first_only:
            probe = lambda a: F(InfSeq(tuple(p[0] for p in a.prefix), ZERO_TAIL, u.zero))
        else:
            probe = lambda a: F(_unpair(a, len(a.prefix), u.zero, zero_out))
        alpha_m, m = spec(alpha, probe, fuel)
        return H(_unpair(alpha_m, m, u.zero, zero_out))

    return rec(u)


# divergence demonstrations

ZERO_THEN_ONES = InfSeq((0,), PeriodicBlock((1,)), 0)
ALL_ONES = InfSeq((), PeriodicBlock((1,)), 0)
ALL_ZEROS = InfSeq((), ZERO_TAIL, 0)


def counterexample_nat(fuel=None) -> OpenRecBody:
    """H(u, f) = 1 + f(n)(0,1,1,...) for the least n with u_n = 1, else 0."""

    def H(alpha: PairedSeq):
        n = alpha.first.find(lambda x: x == 1, fuel)
        if n is None:
            return 0
        return 1 + alpha.cont(n, ZERO_THEN_ONES)

    return OpenRecBody(H, lt=bool_lt, zero_out=0)


def counterexample_fun() -> OpenRecBody:
    """Output type N -> N: G(u, f)(n) = 1 + f(n)(0,1,1,...)(n+1)."""

    def H(alpha: PairedSeq):
        return lambda n: 1 + alpha.cont(n, ZERO_THEN_ONES)(n + 1)

    return OpenRecBody(H, lt=bool_lt, zero_out=lambda n: 0)


@dataclass(frozen=True)
class DivergenceReport:
    exhausted: bool
    spent: int
    depth: int
    value: Any = None


def run_counterexample(which: str, u: InfSeq, budget: int) -> DivergenceReport:
    """Evaluate one of the divergent bodies naively under a fixed budget.

    ``which`` is "nat" or "fun"; the function-valued one is applied at 0.
    """
    fuel = as_fuel(budget)

    def go():
        if which == "nat":
            return naive_orec(counterexample_nat(fuel), u, fuel)
        if which == "fun":
            return naive_orec(counterexample_fun(), u, fuel)(0)
        raise ValueError(f"unknown counterexample {which!r}")

    try:
        value = run_deep(go)
    except FuelExhausted as exc:
        return DivergenceReport(True, fuel.spent, len(exc.deepest))
    return DivergenceReport(False, fuel.spent, len(fuel.deepest), value)
