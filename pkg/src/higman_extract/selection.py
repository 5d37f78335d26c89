"""Selection functions, the Sigma-2 excluded middle, and the boolean realizer."""

from __future__ import annotations

from typing import Callable, Tuple

from .seq_core import Fuel, as_fuel

NatFn = Callable[[int], int]
SelectionFn = Callable[[NatFn], int]
Omega = Callable[[NatFn], int]


def zero_fn(i: int) -> int:
    return 0


class Memo:
    """Memoized one-argument function."""

    __slots__ = ("fn", "cache")

    def __init__(self, fn: NatFn):
        self.fn = fn
        self.cache: dict = {}

    def __call__(self, i):
        cache = self.cache
        if i in cache:
            return cache[i]
        v = cache[i] = self.fn(i)
        return v


def _product(eps: SelectionFn, delta: SelectionFn, q: Callable[[int, int], int]):
    b = Memo(lambda i: delta(lambda j: q(i, j)))
    a = eps(lambda i: q(i, b(i)))
    return a, b


def sel_product(eps: SelectionFn, delta: SelectionFn, q: Callable[[int, int], int]) -> Tuple[int, int]:
    """Binary product: b[i] = delta(j -> q(i,j)), a = eps(i -> q(i, b[i])); returns (a, b[a])."""
    a, b = _product(eps, delta, q)
    return a, b(a)


def lem_sigma2(P: Callable[[int, int], bool], phi, psi):
    """Solve P(n, phi b n h) or_b not P(psi b n h, h(psi b n h)).

    phi and psi take (b, n, h). Returns (b, n, h).
    """
    h_r = Memo(lambda i: phi(0, i, zero_fn))
    n_l = psi(1, 0, h_r)
    if P(n_l, phi(0, n_l, zero_fn)):
        return 0, n_l, zero_fn
    return 1, 0, h_r


def check_lem(P, phi, psi, b, n, h) -> bool:
    if b == 0:
        return bool(P(n, phi(b, n, h)))
    m = psi(b, n, h)
    return not P(m, h(m))


class Monotone:
    """g(0) = f(0), g(n+1) = f(g(n)+1), memoized and evaluated iteratively.

    With an inflationary f (f(i) >= i) the result is strictly increasing,
    which callers may rely on through ``increasing``.
    """

    __slots__ = ("f", "values", "increasing")

    def __init__(self, f: NatFn, inflationary: bool = False):
        self.f = f
        self.values: list = []
        self.increasing = inflationary

    def __call__(self, n: int) -> int:
        vals = self.values
        f = self.f
        while len(vals) <= n:
            vals.append(f(vals[-1] + 1) if vals else f(0))
        return vals[n]


def monotone_from_pointwise(f: NatFn, inflationary: bool = False) -> Monotone:
    return Monotone(f, inflationary)


def eventually_constant_realizer(x, xi: Callable[[int, NatFn], int]):
    """Find (c, f) with f(xi c f) >= xi c f and x at f(xi c f) equal to c.

    The ``else`` branch uses i -> max(i, b[i]); the maximum is what makes
    f(xi c f) >= xi c f hold.
    """
    a, b = _product(lambda p: xi(1, p), lambda p: xi(0, p), max)
    if x[max(a, b(a))] == 0:
        return 0, lambda i: a if a > i else i
    return 1, lambda i: max(i, b(i))


def check_eventually_constant(x, xi, c: int, f: NatFn) -> bool:
    n = xi(c, f)
    m = f(n)
    return m >= n and x[m] == c


def make_bool_xi(x, omega: Omega, fuel: Fuel):
    """xi(c, f): first test point where f fails to land on colour c, else 0.

    Test points are 0, g(0)+1, ..., g(k-1)+1 for g built from f and
    k = omega(g). The scan is lazy and stops at the first failure.
    """

    def xi(c: int, f: NatFn) -> int:
        fuel.spend()
        f0 = f(0)
        if not (f0 >= 0 and x[f0] == c):
            return 0
        g = Monotone(f)
        k = omega(g)
        for r in range(1, k + 1):
            n = g(r - 1) + 1
            fn = f(n)
            if not (fn >= n and x[fn] == c):
                return n
        return 0

    return xi


def swqo_bool_realizer(x, omega: Omega, fuel=None) -> Monotone:
    """g with g(i) < g(j) and x_g(i) = x_g(j) for all i < j <= omega(g)."""
    fuel = as_fuel(fuel)
    xi = make_bool_xi(x, omega, fuel)
    _, f = eventually_constant_realizer(x, xi)
    return Monotone(f, inflationary=True)


def check_resseq(x, omega: Omega, g: NatFn, leq=lambda a, b: a == b) -> bool:
    k = omega(g)
    vals = [g(i) for i in range(k + 1)]
    for j in range(1, k + 1):
        for i in range(j):
            if not (vals[i] < vals[j] and leq(x[vals[i]], x[vals[j]])):
                return False
    return True
