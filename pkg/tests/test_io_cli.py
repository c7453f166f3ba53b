import json

import pytest
from hypothesis import given, strategies as st

from nakajima import __version__, io
from nakajima.cli import main
from nakajima.quiver import AutoSpec, Configuration, DynkinQuiver, ZVertex


quivers = st.one_of(st.integers(1, 6).map(lambda n: f"A{n}"), st.integers(4, 6).map(lambda n: f"D{n}"),
                    st.sampled_from(["E6", "E7", "E8"]))


@given(quivers)
def test_quiver_canonical_round_trip(tag):
    q = DynkinQuiver.parse(tag)
    text = io.canonical(q.to_json())
    assert io.canonical(io.read_quiver(text).to_json()) == text


@given(st.integers(-3, 3), st.integers(-2, 2))
def test_auto_canonical_round_trip(t, s):
    a = AutoSpec(t, s, None)
    text = io.canonical(a.to_json())
    assert io.read_auto(text) == a
    assert io.canonicalize(text) == text


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(-4, 4)), max_size=3))
def test_config_canonical_round_trip(reps):
    c = Configuration(tuple(ZVertex(i, p) for i, p in reps))
    text = io.canonical(c.to_json())
    assert io.canonical(io.read_config(text).to_json()) == text
    assert io.read_config("all").is_all


def test_module_round_trip(a2, rng):
    from nakajima.reps import random_module
    for _ in range(5):
        M = random_module(a2.s, rng, 4)
        text = io.canonical(io.module_json(M))
        assert io.read_module(a2.s, text) == M
        assert io.canonical(io.module_json(io.read_module(a2.s, text))) == text


def test_module_field_mismatch(a2, a2_f2):
    from nakajima.reps import simple
    text = io.canonical(io.module_json(simple(a2_f2.s, 0)))
    with pytest.raises(io.InputError):
        io.read_module(a2.s, text)


def test_bad_json():
    with pytest.raises(io.InputError):
        io.load("{not json")


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_lists_suites(capsys):
    code, out, _ = _run(capsys, "check")
    assert code == 0 and "presentations" in out


def test_unknown_suite(capsys):
    code, _, err = _run(capsys, "check", "nonsense")
    assert code == 2 and "unknown suite" in err


def test_finite_order_rejected(capsys, tmp_path):
    code, _, err = _run(capsys, "build", "--quiver", "A3", "--auto", '{"tau": 2, "sigma_shift": 1}',
                        "--out", str(tmp_path))
    assert code == 2 and "finite order" in err


def test_non_dynkin_rejected(capsys):
    code, _, _ = _run(capsys, "dot", "--quiver", "B2")
    assert code == 2


def test_build_cluster(capsys, tmp_path):
    code, out, _ = _run(capsys, "build", "--auto", "cluster", "--max-degree", "8", "--out", str(tmp_path))
    assert code == 0
    body = json.loads(out)
    assert body["version"] == __version__ and body["seed"] == 0
    for name in ("R", "S", "P"):
        assert (tmp_path / f"{name}.json").exists()
    assert (tmp_path / "S.dot").read_text().count("shape=box") == 5


def test_kan_report(capsys):
    code, out, _ = _run(capsys, "kan", "--random", "--seed", "4", "--max-dim", "3")
    assert code == 0
    body = json.loads(out)
    assert body["seed"] == 4 and body["command"] == "kan"
    assert body["result"]["KK"] == body["result"]["KK_predicted"]


def test_size_guard_exit(capsys):
    code, _, err = _run(capsys, "grass", "count", "--field", "F2", "--simple", "0", "--dim", "[1, 0]",
                        "--guard", "0")
    assert code == 3 and "guard" in err


def test_grass_needs_finite_field(capsys):
    code, _, err = _run(capsys, "grass", "count", "--simple", "0", "--dim", "[1, 0]")
    assert code == 2 and "finite field" in err


def test_desing_refuses_infinite(capsys):
    code, _, err = _run(capsys, "desing", "--field", "F2", "--simple", "0", "--e", "[1, 0]")
    assert code == 2 and "self-injective" in err


def test_wrong_vector_length(capsys):
    code, _, err = _run(capsys, "grass", "count", "--field", "F2", "--simple", "0", "--dim", "[1, 0, 0]")
    assert code == 2 and "list of 2" in err
