import json
import subprocess
import sys

import pytest

from higman_extract.errors import SpecParseError
from higman_extract.harness import (
    EXIT_FUEL,
    EXIT_OK,
    EXIT_PARSE,
    GENERATORS,
    SequenceSpec,
    all_words,
    bad_prefixes,
    cli_main,
    corpus,
    first_good_pair,
)
from higman_extract.orders import is_bad


def run(capsys, *argv):
    code = cli_main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


@pytest.fixture
def spec_file(tmp_path):
    def write(desc):
        p = tmp_path / "u.json"
        p.write_text(desc if isinstance(desc, str) else json.dumps(desc))
        return str(p)

    return write


def test_generators():
    assert [GENERATORS["binary_count"](n) for n in range(4)] == [(0,), (1,), (1, 0), (1, 1)]
    assert [GENERATORS["alternating"](n) for n in range(3)] == [(1,), (0,), (1,)]
    assert GENERATORS["empty_words"](9) == ()


def test_spec_tails():
    u = SequenceSpec({"prefix": [[1], [0, 1]], "tail": {"generator": "periodic"}}).to_seq()
    assert u.take(4) == ((1,), (0, 1), (1,), (0, 1))
    u = SequenceSpec({"prefix": [[1]], "tail": {"generator": "binary_count"}}).to_seq()
    assert u.take(3) == ((1,), (1,), (1, 0))
    u = SequenceSpec({"prefix": [[1]], "tail": "repeat_last"}).to_seq()
    assert u[5] == (1,)


@pytest.mark.parametrize("text", [
    "{",
    '{"prefix": [[2]]}',
    '{"prefix": [["0"]]}',
    '{"prefix": [], "tail": {"generator": "periodic"}}',
    '{"prefix": [], "tail": {"generator": "primes"}}',
    '{"prefix": [[true]]}',
])
def test_spec_parse_errors(text):
    with pytest.raises(SpecParseError):
        SequenceSpec.from_json(text)


def test_spec_json_roundtrip():
    s = SequenceSpec.from_json('{"prefix": [[0, 1]], "tail": "zero"}')
    assert SequenceSpec.from_json(s.to_json()) == s


def test_oracle_examples():
    u = SequenceSpec({"prefix": [[1], [0], [0]], "tail": "zero"}).to_seq()
    assert first_good_pair(u, 10) == (1, 2)
    assert first_good_pair(u, 2) is None
    empties = SequenceSpec({"prefix": [], "tail": {"generator": "empty_words"}}).to_seq()
    assert first_good_pair(empties, 2) == (0, 1)
    alt = SequenceSpec({"prefix": [], "tail": {"generator": "alternating"}}).to_seq()
    assert first_good_pair(alt, 5) == (0, 2)


def test_oracle_on_bad_prefix_then_repeat():
    for s in list(bad_prefixes(3, 5))[::997]:
        if not s:
            continue
        u = SequenceSpec({"prefix": [list(w) for w in s], "tail": "repeat_last"}).to_seq()
        i, j = first_good_pair(u, len(s) + 1)
        assert j == len(s)


def test_bound_on_empty_words(capsys, spec_file):
    code, out, _ = run(capsys, "bound", spec_file({"prefix": [], "tail": {"generator": "empty_words"}}))
    assert code == EXIT_OK and int(out) >= 2


def test_all_words():
    assert len(all_words(3)) == 15 and all_words(1) == [(), (0,), (1,)]


def test_bad_prefixes_are_bad_and_complete():
    pool = list(bad_prefixes(2, 4))
    assert all(is_bad(s) for s in pool)
    assert len(set(pool)) == len(pool)
    # brute force over all sequences of up to 3 words of length <= 2
    words = all_words(2)
    brute = {()}
    frontier = [()]
    for _ in range(3):
        frontier = [s + (w,) for s in frontier for w in words if is_bad(s + (w,))]
        brute.update(frontier)
    assert {s for s in pool if len(s) <= 3} == brute


def test_corpus_shape():
    c = corpus()
    assert len(c) == 520 and len({s.to_json() for s in c}) > 400
    assert c == corpus()
    for s in c:
        s.to_seq()


def test_check_embed(capsys):
    assert run(capsys, "check-embed", "01", "101")[:2] == (EXIT_OK, '{"0": 1, "1": 2}')
    assert run(capsys, "check-embed", "11", "10")[:2] == (EXIT_OK, "null")
    assert run(capsys, "check-embed", "12", "10")[0] == EXIT_PARSE


def test_find_pair(capsys, spec_file):
    code, out, _ = run(capsys, "find-pair", spec_file({"prefix": [[1], [0], [0]], "tail": "zero"}))
    assert code == EXIT_OK
    assert json.loads(out) == {"i": 1, "j": 2, "witness": [0], "bound": json.loads(out)["bound"]}


def test_find_pair_uncertified(capsys, spec_file):
    code, out, _ = run(capsys, "find-pair", "--no-certify", spec_file({"prefix": [[1], [0]], "tail": {"generator": "periodic"}}))
    assert code == EXIT_OK and json.loads(out)["j"] == 2


def test_bound_and_oracle(capsys, spec_file):
    path = spec_file({"prefix": [], "tail": {"generator": "alternating"}})
    code, out, _ = run(capsys, "bound", path)
    assert code == EXIT_OK and int(out) == 6
    code, out, _ = run(capsys, "oracle", path, "--horizon", "6")
    assert json.loads(out) == {"i": 0, "j": 2}


def test_trace(capsys, spec_file):
    code, out, _ = run(capsys, "trace", spec_file({"prefix": [[1, 1], [0, 0, 0]], "tail": {"periodic": [[0, 0, 0]]}}))
    t = json.loads(out)
    assert code == EXIT_OK and t["n"] == 12 and not t["bad_below_n"]
    assert len(t["states"]) >= 1 and t["limit"]["threshold"] == t["states"][-1]["threshold"]


def test_parse_error_exit(capsys, spec_file):
    code, _, err = run(capsys, "bound", spec_file("[1, 2"))
    assert code == EXIT_PARSE and "parse error" in err
    assert run(capsys, "bound", "/nonexistent/u.json")[0] == EXIT_PARSE


def test_fuel_exit(capsys, spec_file):
    code, _, err = run(capsys, "--fuel", "50", "find-pair", spec_file({"prefix": [], "tail": {"generator": "binary_count"}}))
    assert code == EXIT_FUEL and "fuel exhausted" in err


def test_module_entry_point(tmp_path):
    p = tmp_path / "u.json"
    p.write_text('{"prefix": [], "tail": "zero"}')
    r = subprocess.run([sys.executable, "-m", "higman_extract", "find-pair", str(p)], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout) == {"i": 0, "j": 1, "witness": [], "bound": 2}
