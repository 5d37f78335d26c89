"""Sequence specs, brute-force oracles, corpus generators and the command line."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .errors import ContractViolation, FuelExhausted, GuaranteeViolated, SpecParseError
from .higman import BOOL_INSTANCE, HigmanInstance, find_good_pair, higman_zl_inputs, make_solver, phi_bound, _in_deep
from .orders import BOOL_EQ, QuasiOrder, brute_embeds, embeds, is_bad
from .seq_core import DEFAULT_FUEL, InfSeq, parse_sequence
from .zorn import zl_realizer


def _word(x) -> tuple:
    if not isinstance(x, list) or any(type(c) is not int or c not in (0, 1) for c in x):
        raise ValueError(f"word must be a list of 0/1 integers, got {x!r}")
    return tuple(x)


def _binary_count(n: int) -> tuple:
    return tuple(int(c) for c in bin(n)[2:])


GENERATORS = {
    "empty_words": lambda n: (),
    "alternating": lambda n: (1,) if n % 2 == 0 else (0,),
    "binary_count": _binary_count,
}


@dataclass(frozen=True)
class SequenceSpec:
    """A JSON sequence description over boolean words.

    Generators are evaluated at the absolute index. The generator
    ``periodic`` repeats the prefix forever.
    """

    desc: dict

    @classmethod
    def from_json(cls, text: str) -> "SequenceSpec":
        try:
            desc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc}") from exc
        spec = cls(desc)
        spec.to_seq()
        return spec

    def to_seq(self) -> InfSeq:
        desc = self.desc
        if isinstance(desc, dict) and desc.get("tail") == {"generator": "periodic"}:
            prefix = desc.get("prefix")
            if not isinstance(prefix, list) or not prefix:
                raise SpecParseError("periodic generator needs a non-empty prefix")
            return parse_sequence({"prefix": [], "tail": {"periodic": prefix}}, _word, ())
        return parse_sequence(desc, _word, (), GENERATORS)

    def to_json(self) -> str:
        return json.dumps(self.desc, sort_keys=True)


def first_good_pair(u: InfSeq, horizon: int, base: QuasiOrder = BOOL_EQ) -> Optional[Tuple[int, int]]:
    """Least (j, then i) with i < j < horizon and u_i embedding into u_j, by exhaustive check."""
    words = u.take(horizon)
    for j in range(horizon):
        for i in range(j):
            if brute_embeds(words[i], words[j], base):
                return i, j
    return None


# corpus

def all_words(max_len: int) -> List[tuple]:
    out = [()]
    for n in range(1, max_len + 1):
        out.extend(tuple((k >> (n - 1 - b)) & 1 for b in range(n)) for k in range(2**n))
    return out


def bad_prefixes(max_word: int = 3, max_len: int = 6) -> Iterator[tuple]:
    """Every bad finite sequence of boolean words of length <= max_word, up to max_len entries."""
    words = all_words(max_word)
    n = len(words)
    # above[a]: indices of words that word a does not embed into
    above = [frozenset(b for b in range(n) if embeds(words[a], words[b]) is None) for a in range(n)]

    def grow(s, allowed):
        yield tuple(words[a] for a in s)
        if len(s) == max_len:
            return
        for a in allowed:
            yield from grow(s + (a,), [b for b in allowed if b in above[a]])

    yield from grow((), list(range(n)))


def _rand_word(rng: random.Random, max_len: int) -> list:
    return [rng.randint(0, 1) for _ in range(rng.randint(0, max_len))]


def corpus(seed: int = 0, periodic: int = 200, eventually_constant: int = 120, generated: int = 20, bad: int = 180) -> List[SequenceSpec]:
    """Deterministic mixed corpus of sequence specs.

    The generator family is binary_count itself followed by alternating and
    empty_words behind short random prefixes.
    """
    rng = random.Random(seed)
    out: List[SequenceSpec] = []
    for _ in range(periodic):
        block = [_rand_word(rng, 5) for _ in range(rng.randint(1, 4))]
        out.append(SequenceSpec({"prefix": [], "tail": {"periodic": block}}))
    for _ in range(eventually_constant):
        prefix = [_rand_word(rng, 5) for _ in range(rng.randint(0, 4))]
        last = _rand_word(rng, 5)
        out.append(SequenceSpec({"prefix": prefix + [last], "tail": "repeat_last"}))
    if generated:
        out.append(SequenceSpec({"prefix": [], "tail": {"generator": "binary_count"}}))
    for k in range(1, generated):
        prefix = [_rand_word(rng, 3) for _ in range(k % 4)]
        name = ("alternating", "empty_words")[k % 2]
        out.append(SequenceSpec({"prefix": prefix, "tail": {"generator": name}}))
    pool = [s for s in bad_prefixes() if len(s) >= 2]
    pool.sort(key=lambda s: (-len(s), s))
    longest = [s for s in pool if len(s) == len(pool[0])]
    picks = longest[: bad // 2] + rng.sample(pool, min(len(pool), bad - min(len(longest), bad // 2)))
    tails = ["zero", "repeat_last", {"periodic": [[0], [1]]}, {"generator": "empty_words"}]
    for i, s in enumerate(picks):
        out.append(SequenceSpec({"prefix": [list(w) for w in s], "tail": tails[i % len(tails)]}))
    return out


# command line

EXIT_OK, EXIT_FUEL, EXIT_PARSE, EXIT_GUARANTEE, EXIT_CONTRACT = 0, 2, 3, 4, 5


def _load_spec(path: str) -> SequenceSpec:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise SpecParseError(str(exc)) from exc
    return SequenceSpec.from_json(text)


def _parse_bits(s: str) -> tuple:
    if any(c not in "01" for c in s):
        raise SpecParseError(f"word must be a string of 0/1, got {s!r}")
    return tuple(int(c) for c in s)


def _trace_json(u: InfSeq, inst: HigmanInstance, fuel: int) -> dict:
    solver = make_solver(inst, fuel)
    cert = _in_deep(zl_realizer, higman_zl_inputs(u, inst, solver.fuel), None, solver)
    word = lambda w: list(w)
    return {
        "n": cert.n,
        "threshold": cert.threshold,
        "states": [{"prefix": [word(w) for w in st.take(t)], "threshold": t} for st, t in zip(cert.trace.states, cert.trace.thresholds)],
        "limit": {"prefix": [word(w) for w in cert.v.prefix], "threshold": cert.threshold},
        "bad_below_n": is_bad(u.take(cert.n)),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="higman-extract", description="Find embedded pairs of boolean words with the extracted Higman realizer.")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="step budget (default %(default)s)")
    sub = p.add_subparsers(dest="cmd", required=True)
    fp = sub.add_parser("find-pair", help="print the first good pair below the bound")
    fp.add_argument("spec")
    fp.add_argument("--no-certify", action="store_true", help="skip running and checking the full realizer certificate")
    sub.add_parser("bound", help="print the bound only").add_argument("spec")
    sub.add_parser("trace", help="print the learning trace of the realizer").add_argument("spec")
    op = sub.add_parser("oracle", help="brute-force first good pair")
    op.add_argument("spec")
    op.add_argument("--horizon", type=int, required=True)
    ce = sub.add_parser("check-embed", help="embedding witness for two 0/1 words")
    ce.add_argument("a")
    ce.add_argument("b")
    return p


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "check-embed":
            w = embeds(_parse_bits(args.a), _parse_bits(args.b))
            print(json.dumps(None if w is None else {str(i): p for i, p in enumerate(w)}))
            return EXIT_OK
        u = _load_spec(args.spec).to_seq()
        if args.cmd == "find-pair":
            print(json.dumps(find_good_pair(u, BOOL_INSTANCE, args.fuel, certified=not args.no_certify).to_json()))
        elif args.cmd == "bound":
            print(phi_bound(u, BOOL_INSTANCE, args.fuel))
        elif args.cmd == "trace":
            print(json.dumps(_trace_json(u, BOOL_INSTANCE, args.fuel)))
        elif args.cmd == "oracle":
            hit = first_good_pair(u, args.horizon)
            print(json.dumps(None if hit is None else {"i": hit[0], "j": hit[1]}))
    except SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FuelExhausted as exc:
        print(f"fuel exhausted: {exc}", file=sys.stderr)
        return EXIT_FUEL
    except GuaranteeViolated as exc:
        print(f"guarantee violated: {exc}", file=sys.stderr)
        return EXIT_GUARANTEE
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())
