"""Finitely described infinite sequences, fuel, and the ext/spec operators."""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .errors import FuelExhausted, SpecParseError

DEFAULT_FUEL = 10**9


class Fuel:
    """A mutable step budget shared by every recursor in one evaluation."""

    __slots__ = ("budget", "remaining", "_path", "deepest")

    def __init__(self, budget: int = DEFAULT_FUEL):
        if budget < 0:
            raise ValueError("fuel budget must be non-negative")
        self.budget = budget
        self.remaining = budget
        self._path: list = []
        self.deepest: tuple = ()

    @property
    def spent(self) -> int:
        return self.budget - max(self.remaining, 0)

    def spend(self, n: int = 1) -> None:
        self.remaining -= n
        if self.remaining < 0:
            self.exhausted()

    def refill(self, budget: Optional[int] = None) -> None:
        """Start a fresh budget, keeping the object (and whoever holds it)."""
        if budget is not None:
            self.budget = budget
        self.remaining = self.budget
        self._path = []
        self.deepest = ()

    def exhausted(self):
        self.remaining = -1
        raise FuelExhausted(self.budget, self.deepest if len(self.deepest) >= len(self._path) else self._path)

    def enter(self, label) -> None:
        path = self._path
        path.append(label)
        if len(path) > len(self.deepest):
            self.deepest = tuple(path)

    def leave(self) -> None:
        self._path.pop()

    def __repr__(self):
        return f"Fuel({self.remaining}/{self.budget})"


def as_fuel(fuel) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(int(fuel))


# tail rules

@dataclass(frozen=True)
class ConstantZero:
    pass


@dataclass(frozen=True)
class RepeatLast:
    pass


@dataclass(frozen=True)
class PeriodicBlock:
    block: tuple

    def __post_init__(self):
        if not self.block:
            raise ValueError("periodic block must be non-empty")


@dataclass(frozen=True)
class Generator:
    """Tail given by ``rule(n)`` at absolute index n.

    ``zero_from(n)``, when supplied, must return True only if every index
    from n on evaluates to the canonical zero.
    """

    name: str
    rule: Callable[[int], Any] = field(compare=False)
    zero_from: Optional[Callable[[int], bool]] = field(default=None, compare=False)


ZERO_TAIL = ConstantZero()


class InfSeq:
    """A total sequence: explicit prefix followed by a tail rule.

    Generator tails are memoized. The memo is only ever filled with the
    value the pure rule returns, so concurrent readers see a function.
    """

    __slots__ = ("prefix", "tail", "zero", "_n", "_memo")

    def __init__(self, prefix=(), tail=ZERO_TAIL, zero: Any = 0):
        self.prefix = tuple(prefix)
        self.tail = tail
        self.zero = zero
        self._n = len(self.prefix)
        self._memo: dict = {}

    def __getitem__(self, n: int):
        if n < self._n:
            if n < 0:
                raise IndexError("negative index")
            return self.prefix[n]
        tail = self.tail
        if type(tail) is ConstantZero:
            return self.zero
        if type(tail) is PeriodicBlock:
            b = tail.block
            return b[(n - self._n) % len(b)]
        if type(tail) is RepeatLast:
            return self.prefix[-1] if self._n else self.zero
        memo = self._memo
        try:
            return memo[n]
        except KeyError:
            v = memo[n] = tail.rule(n)
            return v

    def take(self, n: int) -> tuple:
        if n <= self._n:
            return self.prefix[:n]
        return self.prefix + tuple(self[i] for i in range(self._n, n))

    @property
    def finite(self) -> bool:
        """True when the tail is ConstantZero."""
        return type(self.tail) is ConstantZero

    @property
    def support_bound(self) -> Optional[int]:
        return self._n if self.finite else None

    def is_zero_from(self, n: int) -> bool:
        """Conservative test that every index >= n is the canonical zero."""
        z = self.zero
        if any(x != z for x in self.prefix[n:]):
            return False
        tail = self.tail
        if type(tail) is ConstantZero:
            return True
        if type(tail) is RepeatLast:
            return not self._n or self.prefix[-1] == z
        if type(tail) is PeriodicBlock:
            return all(x == z for x in tail.block)
        if tail.zero_from is not None:
            return tail.zero_from(max(n, self._n))
        return False

    def trimmed(self) -> tuple:
        """Prefix of a finitely supported sequence with trailing zeros removed."""
        if not self.finite:
            raise ValueError("trimmed() needs a ConstantZero tail")
        p, z = self.prefix, self.zero
        k = len(p)
        while k and p[k - 1] == z:
            k -= 1
        return p[:k]

    def find(self, pred: Callable[[Any], bool], fuel: Optional[Fuel] = None) -> Optional[int]:
        """Least n with pred(self[n]); None if the tail is zero and never matches."""
        n = 0
        while True:
            if fuel is not None:
                fuel.spend()
            if n >= self._n and self.is_zero_from(n) and not pred(self.zero):
                return None
            if pred(self[n]):
                return n
            n += 1

    def map(self, fn: Callable[[Any], Any], zero: Any = None) -> "InfSeq":
        """Pointwise image. ``zero`` is the canonical zero of the target type."""
        z = fn(self.zero) if zero is None else zero
        prefix = tuple(fn(x) for x in self.prefix)
        tail = self.tail
        if type(tail) is ConstantZero and fn(self.zero) == z:
            return InfSeq(prefix, ZERO_TAIL, z)
        if type(tail) is RepeatLast and self._n:
            return InfSeq(prefix, tail, z)
        if type(tail) is PeriodicBlock:
            return InfSeq(prefix, PeriodicBlock(tuple(fn(x) for x in tail.block)), z)
        src = self
        zf = None
        if fn(self.zero) == z:
            zf = src.is_zero_from
        return InfSeq(prefix, Generator(f"map({_tail_name(tail)})", lambda n: fn(src[n]), zf), z)

    def __repr__(self):
        return f"InfSeq({list(self.prefix)!r}, {_tail_name(self.tail)})"


def _tail_name(tail) -> str:
    if type(tail) is ConstantZero:
        return "zero"
    if type(tail) is RepeatLast:
        return "repeat_last"
    if type(tail) is PeriodicBlock:
        return f"periodic{list(tail.block)!r}"
    return f"generator:{tail.name}"


def finite_seq(items, zero: Any = 0) -> InfSeq:
    return InfSeq(tuple(items), ZERO_TAIL, zero)


def from_function(rule: Callable[[int], Any], zero: Any = 0, name: str = "fn") -> InfSeq:
    return InfSeq((), Generator(name, rule), zero)


def ext(alpha: InfSeq, m: int) -> InfSeq:
    """alpha up to m, canonical zero afterwards."""
    return InfSeq(alpha.take(m), ZERO_TAIL, alpha.zero)


def spec(alpha: InfSeq, F: Callable[[InfSeq], int], fuel=None):
    """Least m with F(ext(alpha, m)) < m, probing m = 0, 1, 2, ... in order.

    Returns (ext(alpha, m), m). One unit of fuel per probe.
    """
    fuel = as_fuel(fuel)
    m = 0
    while True:
        fuel.spend()
        cand = ext(alpha, m)
        if F(cand) < m:
            return cand, m
        m += 1


def splice(u: InfSeq, m: int, w: InfSeq) -> InfSeq:
    """u|m * w: the first m entries of u followed by all of w."""
    head = u.take(m)
    tail = w.tail
    if type(tail) is ConstantZero or type(tail) is PeriodicBlock:
        return InfSeq(head + w.prefix, tail, u.zero)
    if type(tail) is RepeatLast and w.prefix:
        return InfSeq(head + w.prefix, tail, u.zero)
    return InfSeq(head, Generator("splice", lambda n: w[n - m], lambda n: w.is_zero_from(n - m)), u.zero)


def seq_equal(a: InfSeq, b: InfSeq) -> bool:
    """Pointwise equality of two finitely supported sequences."""
    if not (a.finite and b.finite):
        raise ValueError("seq_equal is only defined for ConstantZero tails")
    n = max(a.support_bound, b.support_bound) + 1
    return all(a[i] == b[i] for i in range(n))


def run_deep(fn: Callable, *args, stack_mb: int = 512, recursion_limit: int = 1_000_000, **kwargs):
    """Run fn in a worker thread with a large C stack, re-raising its errors.

    Nested open recursion easily goes tens of thousands of frames deep.
    """
    box: dict = {}

    def target():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, recursion_limit))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        t = threading.Thread(target=target, daemon=True)
        t.start()
    finally:
        threading.stack_size(old_size)
    t.join()
    sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box["value"]


# sequence descriptions

def parse_sequence(desc, item: Callable[[Any], Any], zero: Any, generators: Optional[dict] = None) -> InfSeq:
    """Build an InfSeq from ``{"prefix": [...], "tail": ...}``.

    ``generators`` maps a name to a pure index rule.
    """
    if not isinstance(desc, dict):
        raise SpecParseError("sequence description must be an object")
    unknown = set(desc) - {"prefix", "tail"}
    if unknown:
        raise SpecParseError(f"unknown fields: {sorted(unknown)}")
    raw = desc.get("prefix", [])
    if not isinstance(raw, list):
        raise SpecParseError("prefix must be a list")
    try:
        prefix = tuple(item(x) for x in raw)
    except (TypeError, ValueError) as exc:
        raise SpecParseError(f"bad prefix element: {exc}") from exc
    t = desc.get("tail", "zero")
    if t == "zero":
        tail = ZERO_TAIL
    elif t == "repeat_last":
        tail = RepeatLast()
    elif isinstance(t, dict) and len(t) == 1 and "periodic" in t:
        block = t["periodic"]
        if not isinstance(block, list) or not block:
            raise SpecParseError("periodic block must be a non-empty list")
        try:
            tail = PeriodicBlock(tuple(item(x) for x in block))
        except (TypeError, ValueError) as exc:
            raise SpecParseError(f"bad periodic element: {exc}") from exc
    elif isinstance(t, dict) and len(t) == 1 and "generator" in t:
        name = t["generator"]
        if not generators or name not in generators:
            raise SpecParseError(f"unknown generator {name!r}")
        tail = Generator(name, generators[name])
    else:
        raise SpecParseError(f"bad tail rule {t!r}")
    return InfSeq(prefix, tail, zero)


def describe_sequence(seq: InfSeq, item: Callable[[Any], Any] = lambda x: x) -> dict:
    """Inverse of parse_sequence for the rules it understands."""
    tail = seq.tail
    if type(tail) is ConstantZero:
        t: Any = "zero"
    elif type(tail) is RepeatLast:
        t = "repeat_last"
    elif type(tail) is PeriodicBlock:
        t = {"periodic": [item(x) for x in tail.block]}
    else:
        t = {"generator": tail.name}
    return {"prefix": [item(x) for x in seq.prefix], "tail": t}
