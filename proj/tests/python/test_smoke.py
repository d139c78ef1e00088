"""Smoke tests for the Python surface of the workbench.

Runs standalone (python3 test_smoke.py) and under pytest; only needs the
mwb package on the path.
"""

import sys

import mwb

NOT_TRANSFORM = "k=0 l=1\n0 -> 1\n1 -> 0\n"


def test_canonical_form():
    assert mwb.canonical_form("X = a ? S : D\n") == "X = a ? S : D\n"
    # Prefix sugar is kept when both branches agree.
    assert mwb.canonical_form("X = a ; X\n") == "X = a ; X\n"
    # The root equation moves to the front.
    text = "X2 = b ; S\nX1 = a ? X2 : D\n"
    assert mwb.canonical_form(text) == text


def test_parse_errors_are_mwb_errors():
    try:
        mwb.canonical_form("X = a ?\n")
    except mwb.Error as exc:
        assert "parse error" in str(exc)
    else:
        raise AssertionError("malformed spec was accepted")


def test_residual_count():
    assert mwb.residual_count("X = a ; X\n") == 1
    assert mwb.residual_count("X = a ? S : D\n") == 3


def test_bisimilar():
    one = "X = a ; X\n"
    two = "X = a ; Y\nY = a ; X\n"
    assert mwb.bisimilar(one, two)
    assert not mwb.bisimilar("X = tau ? S : D\n", "X = tau ; S\n")
    assert mwb.bisimilar("X = tau ? S : D\n", "X = tau ; S\n",
                         identify_tau=True)


def test_synthesize_apply_roundtrip():
    machine, thread = mwb.synthesize(NOT_TRANSFORM)
    assert mwb.validate_strictness(machine) == []

    run = mwb.apply_thread(machine, thread, "")
    assert run["outcome"] == "defined"
    assert run["steps"] == 9
    assert "data=1" in run["state"]

    back = mwb.apply_thread(machine, thread, "data=1")
    assert "data=0" in back["state"]

    short = mwb.apply_thread(machine, thread, "", max_steps=1)
    assert short["outcome"] == "truncated"
    assert short["state"] is None

    assert mwb.induced_transformation(machine, thread) == NOT_TRANSFORM


def test_verify_completeness():
    report = mwb.verify_completeness(0, 1)
    assert report["complete"]
    assert report["total"] == 4
    assert report["accepted"] == 4
    assert "result: COMPLETE" in report["text"]


def test_count_lemma1():
    even = mwb.count_lemma1(2)
    assert even["holds"]
    assert even["lhs"] == "64"
    assert even["rhs"] == "256"
    boundary = mwb.count_lemma1(1)
    assert not boundary["holds"]
    assert boundary["lhs"] is None


def test_thread_counts():
    assert mwb.thread_count_bound(1, 2, 2) == "196"
    assert int(mwb.exact_thread_count(3, 2)) <= 196


def test_classify():
    verdict = mwb.classify(k=1, l=1, m=4, d=5, e=8, f=False)
    assert verdict["verdict"] == "complete_mirror_ou"
    assert verdict["complete"]
    assert any(holds for _rule, _premise, holds in verdict["checklist"])


def main():
    failures = 0
    for name in sorted(globals()):
        if not name.startswith("test_"):
            continue
        try:
            globals()[name]()
            print(f"ok {name}")
        except Exception as exc:  # noqa: BLE001 - report and keep going
            failures += 1
            print(f"FAIL {name}: {exc}")
    return failures


if __name__ == "__main__":
    sys.exit(main())
