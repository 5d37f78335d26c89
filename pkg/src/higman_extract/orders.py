"""Quasi-orders on letters, word embedding, strict prefix and badness."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Optional, Sequence

Word = tuple


@dataclass(frozen=True)
class QuasiOrder:
    leq: Callable[[Any, Any], bool]
    name: str = "custom"
    zero: Any = 0

    def __call__(self, a, b) -> bool:
        return self.leq(a, b)


BOOL_EQ = QuasiOrder(lambda a, b: a == b, "bool_eq", 0)
# one-letter alphabet: every letter is below every other
TRIVIAL = QuasiOrder(lambda a, b: True, "one_letter", 0)


def embeds(a: Sequence, b: Sequence, base: QuasiOrder = BOOL_EQ) -> Optional[tuple]:
    """Leftmost embedding of a into b, as the tuple (f(0), ..., f(|a|-1)).

    Taking the earliest admissible position for each letter never hurts
    later letters, so greedy search finds a witness whenever one exists.
    """
    la = len(a)
    if la == 0:
        return ()
    if la > len(b):
        return None
    leq = base.leq
    out = []
    i = 0
    for pos, y in enumerate(b):
        if leq(a[i], y):
            out.append(pos)
            i += 1
            if i == la:
                return tuple(out)
    return None


def brute_embeds(a: Sequence, b: Sequence, base: QuasiOrder = BOOL_EQ) -> bool:
    """Reference semantics: try every strictly increasing map."""
    leq = base.leq
    return any(all(leq(a[i], b[p]) for i, p in enumerate(f)) for f in combinations(range(len(b)), len(a)))


def is_witness(a: Sequence, b: Sequence, f: Sequence[int], base: QuasiOrder = BOOL_EQ) -> bool:
    if len(f) != len(a):
        return False
    if any(not 0 <= p < len(b) for p in f):
        return False
    if any(f[k] >= f[k + 1] for k in range(len(f) - 1)):
        return False
    return all(base.leq(a[i], b[p]) for i, p in enumerate(f))


def is_strict_prefix(a: Sequence, b: Sequence) -> bool:
    return len(a) < len(b) and tuple(b[: len(a)]) == tuple(a)


def bool_lt(a, b) -> bool:
    """Strict order 0 < 1 on booleans, with 0 minimal."""
    return a == 0 and b == 1


def is_bad(s: Sequence[Sequence], base: QuasiOrder = BOOL_EQ) -> bool:
    """No i < j < |s| with s_i embedding into s_j."""
    return all(embeds(s[i], s[j], base) is None for j in range(len(s)) for i in range(j))


def decompose(w: Sequence, zero: Any = 0):
    """Split a word into (all but the last letter, last letter)."""
    if not w:
        return (), zero
    w = tuple(w)
    return w[:-1], w[-1]


def lex_less_witnessed(u, v, bound: int, lt: Callable[[Any, Any], bool] = is_strict_prefix) -> Optional[int]:
    """Least n < bound with u, v agreeing below n and u_n strictly below v_n."""
    for n in range(bound):
        if lt(u[n], v[n]):
            return n
        if u[n] != v[n]:
            return None
    return None
