import pytest
from hypothesis import assume, given, settings, strategies as st

from higman_extract.errors import ContractViolation, FuelExhausted
from higman_extract.harness import first_good_pair
from higman_extract.higman import (
    BOOL_INSTANCE,
    ONE_LETTER_INSTANCE,
    BoolSolver,
    GoodPair,
    bar_seq,
    compose_seq,
    find_good_pair,
    make_NMW,
    phi_bound,
    resolve_pair,
    scan_pairs,
    tilde_seq,
)
from higman_extract.orders import brute_embeds, embeds
from higman_extract.selection import Monotone
from higman_extract.seq_core import Fuel, Generator, InfSeq, PeriodicBlock, ZERO_TAIL, splice
from higman_extract.zorn import PsiSolver


def per(block, prefix=()):
    return InfSeq(tuple(prefix), PeriodicBlock(tuple(block)), ())


def binary_count():
    return InfSeq((), Generator("bc", lambda n: tuple(int(c) for c in bin(n)[2:])), ())


EMPTY = InfSeq((), ZERO_TAIL, ())
ALT = per([(1,), (0,)])
BADPRE = InfSeq(((1, 1), (0, 0, 0)), PeriodicBlock(((0, 0, 0),)), ())

FROZEN = [
    ("empty", EMPTY, 2),
    ("alternating", ALT, 6),
    ("bad_prefix", BADPRE, 12),
    ("period_four", per([(1, 1, 1, 1, 1), (0, 0, 0, 0), (1, 0, 1), (0, 1)]), 37),
    ("binary_count", binary_count(), 27),
]


@pytest.mark.parametrize("name,u,bound", FROZEN, ids=[f[0] for f in FROZEN])
def test_frozen_bounds(name, u, bound):
    assert phi_bound(u) == bound


@pytest.mark.parametrize("u", [EMPTY, ALT, BADPRE], ids=["empty", "alternating", "bad_prefix"])
def test_specialized_solver_matches_generic(u):
    generic = PsiSolver(make_NMW(BOOL_INSTANCE)[0])
    assert phi_bound(u, solver=generic) == phi_bound(u, solver=BoolSolver())


def test_one_then_zeros():
    u = InfSeq(((1,),), PeriodicBlock(((0,),)), ())
    gp = find_good_pair(u)
    assert (gp.i, gp.j, gp.witness) == (1, 2, (0,))
    assert gp.to_json() == {"i": 1, "j": 2, "witness": [0], "bound": gp.bound}


def test_empty_first_word():
    gp = find_good_pair(EMPTY)
    assert (gp.i, gp.j, gp.bound) == (0, 1, 2)


@pytest.mark.parametrize("u", [ALT, BADPRE, binary_count(), per([(0, 1), (1, 0)])])
def test_pair_matches_oracle(u):
    gp = find_good_pair(u)
    assert (gp.i, gp.j) == first_good_pair(u, gp.bound)
    assert gp.j < gp.bound and brute_embeds(u[gp.i], u[gp.j])


@pytest.mark.parametrize("u", [EMPTY, ALT, BADPRE, per([(0, 1), (1, 0)]), per([(1, 1), (0,), (1, 0)])])
def test_certified_mode(u):
    gp = find_good_pair(u)
    cert = gp.certificate
    assert cert is not None and cert.n == gp.bound
    assert scan_pairs(u, cert.n) is not None
    assert find_good_pair(u, certified=False).certificate is None


def test_fuel_exhaustion_reported():
    with pytest.raises(FuelExhausted):
        find_good_pair(per([(1, 1, 0, 0, 0), (1, 0, 1, 1, 1)]), fuel=Fuel(1000))


def test_shared_solver_is_consistent():
    s = BoolSolver()
    first = [find_good_pair(u, solver=s).bound for u in (ALT, BADPRE, ALT)]
    assert first[0] == first[2] == 6


def test_tilde_and_bar():
    v = InfSeq(((1, 0), (), (0,)), ZERO_TAIL, ())
    assert tilde_seq(v).take(4) == ((1,), (), (), ())
    assert bar_seq(v).take(4) == (0, 0, 0, 0)
    assert bar_seq(InfSeq(((0, 1),), ZERO_TAIL, ())).take(2) == (1, 0)


def test_compose_knows_zero_tail():
    v = InfSeq(((1,), (0,)), ZERO_TAIL, ())
    g = Monotone(lambda i: i, inflationary=True)
    assert compose_seq(v, g).is_zero_from(2)
    assert not compose_seq(v, Monotone(lambda i: i)).is_zero_from(2)


def test_one_letter_N_on_empty():
    N, M, W = make_NMW(ONE_LETTER_INSTANCE)
    solver = PsiSolver(N)
    gamma = solver.gamma(EMPTY)
    assert N(EMPTY, gamma) == 2 and M(EMPTY, gamma) == 0


# resolve_pair

def step(start):
    return Monotone(lambda i: max(i, start), inflationary=True)


def test_resolve_degenerate():
    v = InfSeq(((1,), ()), ZERO_TAIL, ())
    assert resolve_pair(v, step(1), 0, None) == (1, 2)


def test_resolve_inner_before_cut():
    v = InfSeq(((0,), (0, 1), (1,)), ZERO_TAIL, ())
    assert resolve_pair(v, step(2), 1, (0, 1)) == (0, 1)


def test_resolve_straddling():
    v = InfSeq(((0,), (1,), (0, 0), (1, 0)), ZERO_TAIL, ())
    # w = v|1 * (tilde v from 1) = (0), (), (0), (1), ...
    assert resolve_pair(v, step(1), 3, (0, 2)) == (0, 2)


def test_resolve_straddling_empty_target():
    v = InfSeq(((), (1,), (0,), ()), ZERO_TAIL, ())
    assert resolve_pair(v, step(1), 3, (0, 3)) == (3, 4)


def test_resolve_inside_tail():
    v = InfSeq(((1,), (0, 1), (0, 1, 1)), ZERO_TAIL, ())
    # tilde entries (0) and (0, 1) at positions 1, 2; both words end in 1
    assert resolve_pair(v, step(1), 2, (1, 2)) == (1, 2)


def test_resolve_rejects_missing_inner():
    v = InfSeq(((1,),), ZERO_TAIL, ())
    with pytest.raises(ContractViolation):
        resolve_pair(v, step(0), 2, None)


def test_resolve_rejects_bad_inner():
    v = InfSeq(((1,), (0,)), ZERO_TAIL, ())
    with pytest.raises(ContractViolation):
        resolve_pair(v, step(0), 3, (1, 0))


words = st.lists(st.integers(0, 1), max_size=4).map(tuple)


@settings(max_examples=300)
@given(st.lists(words, min_size=1, max_size=10), st.integers(0, 1), st.integers(0, 5), st.integers(1, 6), st.data())
def test_resolve_random(vs, c, start, k, data):
    # g runs through positions whose last letter is c, or whose word is empty
    v = InfSeq(tuple(vs), ZERO_TAIL, ())
    ok = [n for n in range(start, start + len(vs) + k + 2) if not v[n] or v[n][-1] == c]
    picks = sorted(data.draw(st.sets(st.sampled_from(ok), min_size=min(len(ok), k + 1), max_size=min(len(ok), k + 1))))
    assume(len(picks) == k + 1)
    g = Monotone(lambda i: picks[i] if i < len(picks) else picks[-1] + i, inflationary=True)
    g0 = g(0)
    inner = None
    if v[g0]:
        w = splice(v, g0, compose_seq(tilde_seq(v), g))
        hit = scan_pairs(w, g0 + k)
        assume(hit is not None)
        inner = hit[:2]
    a, b = resolve_pair(v, g, k, inner)
    assert a < b < g(k) + 2 and embeds(v[a], v[b]) is not None


# one-letter alphabet

ONE_LETTER_INPUTS = [EMPTY, ALT, BADPRE, per([(1, 1), (0,)]), per([(0,)], prefix=((0, 0, 0), (0,)))]


@pytest.mark.parametrize("u", ONE_LETTER_INPUTS)
def test_one_letter_pair_is_oracle(u):
    gp = find_good_pair(u, ONE_LETTER_INSTANCE)
    assert gp.bound >= 2
    assert (gp.i, gp.j) == first_good_pair(u, gp.bound, ONE_LETTER_INSTANCE.base)
    if len(u[0]) <= len(u[1]):
        assert (gp.i, gp.j) == (0, 1)


def test_one_letter_longer_first_word():
    u = per([(0,)], prefix=((0, 0, 0), (0,)))
    gp = find_good_pair(u, ONE_LETTER_INSTANCE)
    assert (gp.i, gp.j) == (1, 2)


def test_goodpair_json_shape():
    assert GoodPair(0, 1, (), 2).to_json() == {"i": 0, "j": 1, "witness": [], "bound": 2}
