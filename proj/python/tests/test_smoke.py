from fractions import Fraction
import json

import pytest

import amqlab


def test_exact_values():
    assert amqlab.bloom_false_positive(2, 1, 1) == Fraction(1, 2)
    assert amqlab.bloom_false_positive(2, 2, 1) == Fraction(5, 8)
    assert amqlab.bloom_classic_bound(2, 2, 1) == Fraction(9, 16)
    assert amqlab.bloom_bit_set_prob(4, 2, 3) == 1 - Fraction(3, 4) ** 6
    assert amqlab.quotient_false_positive(1, 1, 2) == Fraction(7, 16)


def test_stirling_routes_agree():
    assert amqlab.stirling2(10, 3) == 9330
    assert amqlab.stirling2(30, 15) == amqlab.stirling2_recurrence(30, 15)
    assert isinstance(amqlab.stirling2(60, 20), int)


def test_float_mode_matches_exact():
    exact = amqlab.bloom_false_positive(64, 3, 10)
    assert amqlab.bloom_false_positive_float(64, 3, 10) == float(exact)
    with pytest.raises(amqlab.InfeasibleExact):
        amqlab.bloom_false_positive(10000, 3, 10)


@pytest.mark.parametrize(
    "structure, params",
    [
        ("bloom", dict(m=3, k=2)),
        ("counting", dict(m=3, k=2, bound=15)),
        ("quotient", dict(q=1, r=2)),
        ("blocked-bloom", dict(blocks=2, m=2, k=1)),
        ("blocked-quotient", dict(blocks=2, p=2)),
    ],
)
def test_oracle_matches_analytic(structure, params):
    for l in range(3):
        exact, value = amqlab.analytic_false_positive(structure, l, **params)
        assert amqlab.oracle_false_positive(structure, l, **params) == exact
        assert value == float(exact)


def test_oracle_guard():
    with pytest.raises(amqlab.EnumerationTooLarge):
        amqlab.oracle_false_positive("bloom", 4, m=8, k=4)


def test_estimate_report():
    report = amqlab.estimate_fp("bloom", 10, trials=20000, seed=42, m=64, k=3)
    assert report["structure"] == "bloom"
    assert report["params"] == {"m": 64, "k": 3}
    assert report["ci_low"] <= report["analytic_float"] <= report["ci_high"]
    assert Fraction(report["analytic_exact"]) == amqlab.bloom_false_positive(64, 3, 10)
    assert amqlab.estimate_fp("bloom", 10, trials=20000, seed=42, m=64, k=3) == report


def test_filter_round_trip():
    f = amqlab.Filter("bloom", seed=7, m=64, k=3)
    f.add_many(range(10))
    assert all(f.query(x) for x in range(10))
    assert f.structure == "bloom"
    assert f.params == {"m": 64, "k": 3}
    state = f.state_bytes()
    assert state[:5] == b"AMQB1"
    assert len(state) == 5 + 4 + 8


def test_counting_filter_remove():
    f = amqlab.Filter("counting", m=32, k=2, bound=3)
    f.add(1)
    f.add(2)
    f.remove(1)
    assert f.query(2)
    with pytest.raises(amqlab.CapacityExceeded):
        f.add_many([3, 4])
    with pytest.raises(TypeError):
        amqlab.Filter("bloom", m=8).remove(1)


def test_bad_parameters():
    with pytest.raises(ValueError):
        amqlab.Filter("bloom", m=0)
    with pytest.raises(ValueError):
        amqlab.Filter("quotient")
    with pytest.raises(TypeError):
        amqlab.Filter("bloom", m=8, width=3)


def test_no_false_negatives():
    for structure, params in [
        ("bloom", dict(m=32, k=3)),
        ("blocked-counting", dict(blocks=2, m=32, k=2, bound=63)),
        ("blocked-quotient", dict(blocks=4, q=2, r=3)),
    ]:
        result = amqlab.check_no_false_negatives(structure, 8, trials=500, seed=1, **params)
        assert result["status"] == "pass", result


def test_wilson():
    low, high = amqlab.wilson_interval(50, 100, 1.96)
    assert low == pytest.approx(0.40383, abs=1e-3)
    assert high == pytest.approx(0.59617, abs=1e-3)


def test_cli_in_process():
    code, out, _ = amqlab.run_cli(["analyze", "--structure", "bloom", "--m", "2", "--k", "2", "--l", "1"])
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert (row["exact"], row["classic_bound"]["exact"]) == ("5/8", "9/16")
    code, _, err = amqlab.run_cli(["analyze", "--structure", "bloom"])
    assert code == 2 and "--m" in err
