"""The realizer for the functional interpretation of Zorn's lemma.

Psi^N(u) is the explicit recursor with H = F = (alpha -> N(alpha_0, alpha_1)).
Unfolding it, the threshold search probes phi(ext(u, m)) where
phi(v) = N(v, gamma_v), and the answer is the first probe value below m.
Every probe depends only on a finitely supported sequence, so values are
cached on its trimmed prefix, and the search itself walks a trie keyed by
the entries read so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from .errors import ContractViolation
from .learning import LearningParams, LearningTrace, learn_controlled
from .open_rec import OpenRecBody, eorec
from .orders import is_strict_prefix
from .seq_core import InfSeq, as_fuel, finite_seq, splice

_VAL = object()  # trie slot holding phi of the node's prefix


class GammaFn:
    """gamma_u(m, w) = Psi(u|m * w) when w_0 is strictly below u_m, else 0."""

    __slots__ = ("u", "psi", "lt")

    def __init__(self, u: InfSeq, psi: Callable[[InfSeq], int], lt=is_strict_prefix):
        self.u = u
        self.psi = psi
        self.lt = lt

    def __call__(self, m: int, w: InfSeq) -> int:
        if not self.lt(w[0], self.u[m]):
            return 0
        return self.psi(splice(self.u, m, w))


class PsiSolver:
    """Memoized Psi^N for one functional N.

    N takes (v, gamma) with v finitely supported. Caches persist across
    calls, so one solver can serve a whole corpus.
    """

    def __init__(self, N, fuel=None, lt=is_strict_prefix, zero: Any = ()):
        self.N = N
        self.fuel = as_fuel(fuel)
        self.lt = lt
        self.zero = zero
        self.root: dict = {}
        self.phi_cache: dict = {}
        self._gammas: dict = {}

    def gamma(self, u: InfSeq) -> GammaFn:
        if u.finite:
            key = u.trimmed()
            g = self._gammas.get(key)
            if g is None:
                g = self._gammas[key] = GammaFn(finite_seq(key, self.zero), self.psi, self.lt)
            return g
        return GammaFn(u, self.psi, self.lt)

    def phi(self, key: tuple) -> int:
        """N(v, gamma_v) for the finitely supported v with trimmed prefix ``key``."""
        r = self.phi_cache.get(key)
        if r is None:
            v = finite_seq(key, self.zero)
            r = self.phi_cache[key] = self.N(v, self.gamma(v))
        return r

    def phi_of(self, u: InfSeq) -> int:
        if u.finite:
            return self.phi(u.trimmed())
        return self.N(u, self.gamma(u))

    def psi(self, u: InfSeq) -> int:
        fuel = self.fuel
        zero = self.zero
        node = self.root
        pre: list = []
        last = 0
        m = 0
        while True:
            fuel.remaining -= 1
            if fuel.remaining < 0:
                fuel.exhausted()
            v = node.get(_VAL)
            if v is None:
                v = node[_VAL] = self.phi(tuple(pre[:last]))
            if v < m:
                return v
            if u.is_zero_from(m):
                # every later probe sees the same sequence, so m = v+1 is the hit
                fuel.spend(v + 1 - m)
                return v
            x = u[m]
            pre.append(x)
            m += 1
            if x != zero:
                last = m
            nxt = node.get(x)
            if nxt is None:
                nxt = node[x] = {}
            node = nxt


def psi_N(N, u: InfSeq, fuel=None, memo: bool = True, lt=is_strict_prefix, zero: Any = ()) -> int:
    """Psi^N(u). ``memo=False`` runs the explicit recursor literally."""
    if memo:
        return PsiSolver(N, fuel, lt, zero).psi(u)

    def tilde_N(alpha):
        return N(alpha.first, alpha.cont)

    return eorec(OpenRecBody(tilde_N, tilde_N, lt=lt, zero_out=0), u, fuel)


def make_gamma(u: InfSeq, N, fuel=None, solver: Optional[PsiSolver] = None, lt=is_strict_prefix, zero: Any = ()) -> GammaFn:
    if solver is None:
        solver = PsiSolver(N, fuel, lt, zero)
    return GammaFn(u, solver.psi, lt)


def P_bar(P, u: InfSeq, n: int) -> bool:
    return bool(P(u.take(n)))


def C(P, v: InfSeq, gamma, m: int, w: InfSeq, lt=is_strict_prefix) -> bool:
    """w_0 below v_m implies not P-bar(v|m * w, gamma(m, w))."""
    if not lt(w[0], v[m]):
        return True
    return not P_bar(P, splice(v, m, w), gamma(m, w))


@dataclass
class ZLInputs:
    u_bar: InfSeq
    N: Callable
    M: Callable
    W: Callable
    P: Callable[[tuple], bool]
    lt: Callable[[Any, Any], bool] = is_strict_prefix
    zero: Any = ()


@dataclass
class ZLCertificate:
    n: int
    v: InfSeq
    gamma: GammaFn
    trace: LearningTrace
    threshold: int

    def holds(self, inputs: ZLInputs) -> bool:
        P, v, g = inputs.P, self.v, self.gamma
        if not P_bar(P, inputs.u_bar, self.n):
            return True
        return P_bar(P, v, inputs.N(v, g)) and C(P, v, g, inputs.M(v, g), inputs.W(v, g), inputs.lt)


def zl_params(inputs: ZLInputs, solver: PsiSolver) -> LearningParams:
    N, M, W, P, lt = inputs.N, inputs.M, inputs.W, inputs.P, inputs.lt
    gamma = solver.gamma

    def C0(u):
        g = gamma(u)
        return C(P, u, g, M(u, g), W(u, g), lt)

    return LearningParams(
        C0=C0,
        P0=lambda u: P_bar(P, u, solver.psi(u)),
        phi=solver.phi_of,
        xi0=lambda u: M(u, gamma(u)),
        xi1=lambda u: W(u, gamma(u)),
        lt=lt,
    )


def zl_realizer(inputs: ZLInputs, fuel=None, solver: Optional[PsiSolver] = None, check: bool = True, path: str = "loop") -> ZLCertificate:
    """n = Psi^N(u_bar) and the limit v of the controlled learning procedure."""
    if solver is None:
        solver = PsiSolver(inputs.N, fuel, inputs.lt, inputs.zero)
    n = solver.psi(inputs.u_bar)
    trace = learn_controlled(zl_params(inputs, solver), inputs.u_bar, solver.fuel, path=path)
    v = trace.limit
    cert = ZLCertificate(n, v, solver.gamma(v), trace, trace.thresholds[-1])
    if check and not cert.holds(inputs):
        raise ContractViolation(f"certificate fails for n={n}, v={list(v.prefix)}")
    return cert
