"""Good pairs in sequences of words via the minimal-bad-sequence realizer."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Tuple

from .errors import ContractViolation, GuaranteeViolated
from .orders import BOOL_EQ, TRIVIAL, QuasiOrder, brute_embeds, decompose, embeds, is_bad, is_strict_prefix
from .selection import Monotone, swqo_bool_realizer
from .seq_core import Generator, InfSeq, as_fuel, run_deep, splice
from .zorn import PsiSolver, ZLCertificate, ZLInputs, zl_realizer


def trivial_realizer(x, omega, fuel=None) -> Monotone:
    """Identity subsequence; enough when the base order relates all letters."""
    return Monotone(lambda i: i, inflationary=True)


@dataclass(frozen=True)
class HigmanInstance:
    base: QuasiOrder
    G: Callable
    name: str = "custom"
    # marks the boolean equality + swqo_bool_realizer pair, which has a specialized solver
    boolean: bool = False


BOOL_INSTANCE = HigmanInstance(BOOL_EQ, swqo_bool_realizer, "bool", boolean=True)
ONE_LETTER_INSTANCE = HigmanInstance(TRIVIAL, trivial_realizer, "one_letter")


@dataclass
class GoodPair:
    i: int
    j: int
    witness: tuple
    bound: int
    certificate: Optional[ZLCertificate] = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "witness": list(self.witness), "bound": self.bound}


def tilde_seq(v: InfSeq) -> InfSeq:
    return v.map(lambda w: decompose(w)[0], ())


def bar_seq(v: InfSeq, zero: Any = 0) -> InfSeq:
    return v.map(lambda w: decompose(w, zero)[1], zero)


def compose_seq(seq: InfSeq, g) -> InfSeq:
    """n -> seq[g(n)], knowing the zero tail when g is strictly increasing."""
    zf = None
    if getattr(g, "increasing", False):
        zf = lambda n: seq.is_zero_from(g(n))
    return InfSeq((), Generator("compose", lambda n: seq[g(n)], zf), seq.zero)


def make_H(v: InfSeq, gamma, inst: HigmanInstance, fuel=None):
    """G applied to the last letters of v, against omega(g) = gamma(g(0), tilde v o g)."""
    tilde = tilde_seq(v)
    bar = bar_seq(v, inst.base.zero)
    return inst.G(bar, lambda g: gamma(g(0), compose_seq(tilde, g)), as_fuel(fuel))


def make_NMW(inst: HigmanInstance, fuel=None):
    """N v gamma = H(gamma(H(0), tilde v o H)) + 2, M v gamma = H(0), W v gamma = tilde v o H."""
    fuel = as_fuel(fuel)
    cache: dict = {}

    def H(v, gamma):
        if not v.finite:
            return make_H(v, gamma, inst, fuel)
        key = (v.trimmed(), gamma)
        h = cache.get(key)
        if h is None:
            h = cache[key] = make_H(v, gamma, inst, fuel)
        return h

    def N(v, gamma):
        h = H(v, gamma)
        return h(gamma(h(0), compose_seq(tilde_seq(v), h))) + 2

    def M(v, gamma):
        return H(v, gamma)(0)

    def W(v, gamma):
        return compose_seq(tilde_seq(v), H(v, gamma))

    return N, M, W


# trie slots; word ids are non-negative
_V, _K = -1, -2


class BoolSolver(PsiSolver):
    """Psi^N for the boolean instance with N inlined.

    Same values as PsiSolver over make_NMW(BOOL_INSTANCE). Differences are
    caching only: words are interned as small ints, inner threshold
    searches resume from the trie node of the shared prefix, searches whose
    argument is finitely supported are cached by value, and the scan in xi
    stops at the first failing test point.
    """

    def __init__(self, fuel=None):
        super().__init__(make_NMW(BOOL_INSTANCE, fuel)[0], fuel, is_strict_prefix, ())
        self.fin_cache: dict = {}
        self.root = {_K: ((), 0)}
        self._ids = {(): 0}
        self._tilde = [0]
        self._bar = [0]

    def intern(self, w: tuple) -> int:
        i = self._ids.get(w)
        if i is None:
            t = self.intern(w[:-1])
            i = self._ids[w] = len(self._tilde)
            self._tilde.append(t)
            self._bar.append(w[-1])
        return i

    def phi(self, key: tuple) -> int:
        return self._phi(tuple(self.intern(w) for w in key))

    def _value(self, node) -> int:
        v = node.get(_V)
        if v is None:
            v = node[_V] = self._phi(node[_K][0])
        return v

    @staticmethod
    def _child(node, x):
        nxt = node.get(x)
        if nxt is None:
            # key of the child: trimmed prefix plus the count of trailing zeros
            trim, z = node[_K]
            nxt = node[x] = {_K: (trim, z + 1) if x == 0 else (trim + (0,) * z + (x,), 0)}
        return nxt

    def psi(self, u: InfSeq) -> int:
        fuel = self.fuel
        node = self.root
        m = 0
        while True:
            fuel.remaining -= 1
            if fuel.remaining < 0:
                fuel.exhausted()
            v = self._value(node)
            if v < m:
                return v
            if u.is_zero_from(m):
                fuel.spend(v + 1 - m)
                return v
            node = self._child(node, self.intern(u[m]))
            m += 1

    def _walk(self, node, m, read):
        # continue a threshold search at position m; read(n) is None once the rest is zero
        fuel = self.fuel
        value = self._value
        child = self._child
        while True:
            fuel.remaining -= 1
            if fuel.remaining < 0:
                fuel.exhausted()
            v = node.get(_V)
            if v is None:
                v = value(node)
            if v < m:
                return v
            x = read(m)
            if x is None:
                fuel.spend(v + 1 - m)
                return v
            nxt = node.get(x)
            node = child(node, x) if nxt is None else nxt
            m += 1

    def _phi(self, s: tuple) -> int:
        r = self.phi_cache.get(s)
        if r is not None:
            return r
        fuel = self.fuel
        walk = self._walk
        value = self._value
        child = self._child
        fin = self.fin_cache
        L = len(s)
        tv = tuple(map(self._tilde.__getitem__, s))
        bv = tuple(map(self._bar.__getitem__, s))
        tv_len = L
        while tv_len and not tv[tv_len - 1]:
            tv_len -= 1

        # the threshold search along s itself, extended on demand:
        # path[j] is the trie node after reading s[:j]; ended is set once it stops
        path = [self.root]
        ended = None

        def prenode(m):
            nonlocal ended
            while len(path) <= m and ended is None:
                j = len(path) - 1
                fuel.remaining -= 1
                if fuel.remaining < 0:
                    fuel.exhausted()
                node = path[j]
                v = value(node)
                if v < j:
                    ended = v
                    break
                path.append(child(node, s[j]))
            return path[m] if m < len(path) else None

        def fin_psi(i):
            # Psi(s|i * (tilde s from i)), a finitely supported argument
            if i < tv_len:
                t = s[:i] + tv[i:tv_len]
            else:
                j = i
                while j and not s[j - 1]:
                    j -= 1
                t = s[:j]
            k = fin.get(t)
            if k is None:
                node = prenode(i)
                if node is None:
                    k = ended
                else:
                    k = walk(node, i, lambda n: tv[n] if n < tv_len else None)
                fin[t] = k
            return k

        bcache: dict = {}

        def b(i):
            # xi(0, j -> max(i, j)); its g is n -> i + n, so gamma is fin_psi(i)
            fuel.spend()
            r = 0
            if i < L and not bv[i] and s[i]:
                for j in range(i + 1, L):
                    if bv[j]:
                        if j <= i + fin_psi(i):
                            r = j
                        break
            bcache[i] = r
            return r

        gvals: list = []

        def G(n):
            # the monotone sequence built from F(i) = max(i, b(i))
            while len(gvals) <= n:
                i = gvals[-1] + 1 if gvals else 0
                if i >= L or bv[i] or not s[i]:
                    # b(i) is 0 here; charge the probe without the call
                    fuel.remaining -= 1
                    if fuel.remaining < 0:
                        fuel.exhausted()
                    gvals.append(i)
                    continue
                bi = bcache[i] if i in bcache else b(i)
                gvals.append(i if i > bi else bi)
            return gvals[n]

        def gam_G():
            m = G(0)
            if not (m < L and s[m]):
                return 0
            node = prenode(m)
            if node is None:
                return ended

            def read(n):
                k = n - m
                gk = gvals[k] if k < len(gvals) else G(k)
                return tv[gk] if gk < tv_len else None

            return walk(node, m, read)

        def x(n):
            return bv[n] if n < L else 0

        # a = xi(1, F): first test point where F misses colour 1, else 0
        fuel.spend()
        a = 0
        k_G = None
        if x(G(0)) == 1:
            k_G = gam_G()
            for r in range(1, k_G + 1):
                gr = gvals[r] if r < len(gvals) else G(r)
                if gr >= L or not bv[gr]:
                    a = gvals[r - 1] + 1
                    break
        ba = bcache[a] if a in bcache else b(a)
        if x(a if a > ba else ba) == 0:
            # H(n) = a + n
            k = fin_psi(a) if a < L and s[a] else 0
            r = a + k + 2
        else:
            if k_G is None:
                k_G = gam_G()
            r = G(k_G) + 2
        self.phi_cache[s] = r
        return r


def make_solver(inst: HigmanInstance, fuel=None) -> PsiSolver:
    fuel = as_fuel(fuel)
    if inst.boolean:
        return BoolSolver(fuel)
    return PsiSolver(make_NMW(inst, fuel)[0], fuel, is_strict_prefix, ())


_deep = threading.local()


def _in_deep(fn, *args):
    # run on a large stack once; nested calls reuse the current thread
    if getattr(_deep, "active", False):
        return fn(*args)

    def wrapped():
        _deep.active = True
        return fn(*args)

    return run_deep(wrapped)


def phi_bound(u: InfSeq, inst: HigmanInstance = BOOL_INSTANCE, fuel=None, solver: Optional[PsiSolver] = None) -> int:
    """Phi(u) = Psi^N(u): some i < j < Phi(u) has u_i embedding into u_j."""
    if solver is None:
        solver = make_solver(inst, fuel)
    return _in_deep(solver.psi, u)


def resolve_pair(v: InfSeq, g, k: int, inner: Optional[Tuple[int, int]], base: QuasiOrder = BOOL_EQ) -> Tuple[int, int]:
    """Turn a good pair of w = v|g(0) * (tilde v o g) into one of v below g(k)+2."""
    g0 = g(0)
    if not v[g0]:
        pair = (g0, g0 + 1)
    else:
        if inner is None:
            raise ContractViolation("need a good pair of w when v at g(0) is non-empty")
        i, j = inner
        if not i < j:
            raise ContractViolation(f"inner pair {inner} is not increasing")
        if j < g0:
            pair = (i, j)
        elif i < g0:
            gj = g(j - g0)
            pair = (gj, gj + 1) if not v[gj] else (i, gj)
        else:
            gi, gj = g(i - g0), g(j - g0)
            if not v[gi]:
                pair = (gi, gi + 1)
            elif not v[gj]:
                pair = (gj, gj + 1)
            else:
                pair = (gi, gj)
    a, b = pair
    if not (a < b < g(k) + 2):
        raise ContractViolation(f"pair {pair} not below g(k)+2 = {g(k) + 2}")
    if embeds(v[a], v[b], base) is None:
        raise ContractViolation(f"v[{a}] does not embed into v[{b}]")
    return pair


def scan_pairs(u: InfSeq, bound: int, base: QuasiOrder = BOOL_EQ):
    """First (i, j, witness) with i < j < bound in (j, i) order, else None."""
    words = u.take(bound)
    for j in range(bound):
        for i in range(j):
            w = embeds(words[i], words[j], base)
            if w is not None:
                return i, j, w
    return None


def higman_zl_inputs(u: InfSeq, inst: HigmanInstance, fuel=None) -> ZLInputs:
    N, M, W = make_NMW(inst, fuel)
    return ZLInputs(u, N, M, W, lambda s: is_bad(s, inst.base), is_strict_prefix, ())


def certify(u: InfSeq, inst: HigmanInstance, solver: PsiSolver) -> ZLCertificate:
    """Run the full realizer and replay the combinatorial step on its limit.

    Raises ContractViolation if any checkable link in the argument fails.
    """
    inputs = higman_zl_inputs(u, inst, solver.fuel)
    cert = zl_realizer(inputs, solver=solver)
    if is_bad(u.take(cert.n), inst.base):
        raise ContractViolation(f"no good pair below n={cert.n}")
    v, gamma = cert.v, cert.gamma
    h = make_H(v, gamma, inst, solver.fuel)
    tail = compose_seq(tilde_seq(v), h)
    w = splice(v, h(0), tail)
    k = gamma(h(0), tail)
    inner = None
    if is_strict_prefix(w[h(0)], v[h(0)]):
        hit = scan_pairs(w, k, inst.base)
        if hit is None:
            raise ContractViolation("w has no good pair below its bound")
        inner = hit[:2]
    resolve_pair(v, h, k, inner, inst.base)
    return cert


def find_good_pair(u: InfSeq, inst: HigmanInstance = BOOL_INSTANCE, fuel=None, solver: Optional[PsiSolver] = None, certified: bool = True) -> GoodPair:
    """Compute Phi(u) and return the first good pair below it in (j, i) order.

    With ``certified`` the full realizer runs as well and its certificate is
    checked; any failed link raises ContractViolation.
    """
    if solver is None:
        solver = make_solver(inst, fuel)

    def run():
        bound = solver.psi(u)
        hit = scan_pairs(u, bound, inst.base)
        if hit is None:
            raise GuaranteeViolated(f"no good pair below bound {bound}")
        i, j, w = hit
        if not brute_embeds(u[i], u[j], inst.base):
            raise ContractViolation(f"witness for ({i}, {j}) rejected by exhaustive check")
        cert = certify(u, inst, solver) if certified else None
        return GoodPair(i, j, w, bound, cert)

    return _in_deep(run)
