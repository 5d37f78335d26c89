"""Learning procedures: plain wellfounded ones and controlled lexicographic ones."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional

from .errors import ContractViolation
from .open_rec import OpenRecBody, eorec
from .orders import is_strict_prefix
from .seq_core import InfSeq, as_fuel, run_deep, spec, splice


@dataclass
class LearningParams:
    """C0 is the stopping test.

    The wellfounded variant uses ``xi``. The controlled variant uses ``phi``
    together with the split step xi(u) = u|xi0(u) * xi1(u).
    """

    C0: Callable[[Any], bool]
    xi: Optional[Callable[[Any], Any]] = None
    P0: Optional[Callable[[Any], bool]] = None
    phi: Optional[Callable[[InfSeq], int]] = None
    xi0: Optional[Callable[[InfSeq], int]] = None
    xi1: Optional[Callable[[InfSeq], InfSeq]] = None
    lt: Callable[[Any, Any], bool] = is_strict_prefix

    def step(self, u: InfSeq) -> InfSeq:
        return splice(u, self.xi0(u), self.xi1(u))


@dataclass
class LearningTrace:
    states: List[Any]
    limit: Any
    # controlled variant only: spec(u_i, phi) and its threshold for each state
    specs: List[InfSeq] = field(default_factory=list)
    thresholds: List[int] = field(default_factory=list)

    def __len__(self):
        return len(self.states)


def learn_wf(params: LearningParams, x0, wf: Callable[[Any, Any], bool], fuel=None) -> LearningTrace:
    """x_{i+1} = xi(x_i) until C0 holds. ``wf(a, b)`` means b is strictly below a."""
    fuel = as_fuel(fuel)
    x = x0
    states = [x0]
    while not params.C0(x):
        fuel.spend()
        y = params.xi(x)
        if not wf(x, y):
            raise ContractViolation(f"step {len(states)} does not decrease: {x!r} -> {y!r}")
        states.append(y)
        x = y
    return LearningTrace(states, x)


def _checked_step(params: LearningParams, s: InfSeq) -> InfSeq:
    n = params.xi0(s)
    w = params.xi1(s)
    if not params.lt(w[0], s[n]):
        raise ContractViolation(f"improvement at {n} is not strictly below the current entry")
    return splice(s, n, w)


def learn_controlled(params: LearningParams, u0: InfSeq, fuel=None, path: str = "loop") -> LearningTrace:
    """Iterate u -> xi(spec(u, phi)) until C0(spec(u, phi)); the limit is that spec.

    ``path="eorec"`` computes the same trace through the explicit recursor.
    """
    fuel = as_fuel(fuel)
    if path == "eorec":
        return _learn_via_eorec(params, u0, fuel)
    if path != "loop":
        raise ValueError(f"unknown path {path!r}")
    u = u0
    states, specs, thresholds = [u0], [], []
    while True:
        s, m = spec(u, params.phi, fuel)
        specs.append(s)
        thresholds.append(m)
        if params.C0(s):
            return LearningTrace(states, s, specs, thresholds)
        fuel.spend()
        u = _checked_step(params, s)
        states.append(u)


def _learn_via_eorec(params: LearningParams, u0: InfSeq, fuel) -> LearningTrace:
    C0, xi0, xi1 = params.C0, params.xi0, params.xi1

    def H(alpha):
        s = alpha.first
        if C0(s):
            return [s]
        return [s] + alpha.cont(xi0(s), xi1(s))

    body = OpenRecBody(H, F=params.phi, reads_first_only=True, lt=params.lt, zero_out=[])
    # one recursion level per learning step
    specs = run_deep(eorec, body, u0, fuel)
    if not C0(specs[-1]):
        raise ContractViolation("improvement step was not strictly below the current entry")
    states = [u0] + [params.step(s) for s in specs[:-1]]
    return LearningTrace(states, specs[-1], specs, [s.support_bound for s in specs])
