"""The fifteen acceptance criteria at their stated tolerances and time limits.

Each test prints one PASS/FAIL line.  Criterion 15 asks for self-injectivity
of S with C = all, which is infinite-dimensional; that part is expected to
fail and is marked so.  The attainable parts are asserted separately.
"""

import pytest

from nakajima.suites import CRITERIA, selfinjective_table, SELFINJ_FINITE_S

SEED = 0


def _run(ident, capsys):
    out = CRITERIA[ident](SEED)
    with capsys.disabled():
        print("\n" + out.line())
    return out


@pytest.mark.parametrize("ident", [i for i in sorted(CRITERIA) if i != 15])
def test_criterion(ident, capsys):
    out = _run(ident, capsys)
    assert out.ok, out.detail
    assert out.seconds < out.limit, f"{out.seconds:.1f}s over the {out.limit}s limit"


@pytest.mark.xfail(strict=True, reason="S with C = all has nonzero morphisms in every degree, "
                                       "so it is not a finite-dimensional self-injective category")
def test_criterion_15_literal(capsys):
    out = _run(15, capsys)
    assert out.passed, out.detail.get("reason")


def test_criterion_15_attainable_parts():
    rows = selfinjective_table()
    for key in ("P A2 tau C=all", "P A3 tau C=all", "P A2 cluster C=all"):
        assert rows[key]["ok"], key
    for name in SELFINJ_FINITE_S:
        assert rows[f"S {name}"]["ok"], name
    assert not rows["control: path category A3"]["ok"]
    # the S(C=all) failures are the truncation refusal, not a wrong Nakayama map
    for key in ("S A2 tau C=all", "S A3 tau C=all", "S A2 cluster C=all"):
        assert "infinite-dimensional" in rows[key]["reason"]
