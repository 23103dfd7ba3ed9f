import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motivzeta.errors import InconsistentOracle, OracleUndefined
from motivzeta.motive import BrieskornSpec, MotClass
from motivzeta.recovery import (
    BrieskornOracle,
    CoefficientOracle,
    DumpOracle,
    RecoveryConfig,
    RecoveryState,
    bound_exponents,
    case_name,
    crt_index,
    recover_exponents,
    validate_recovery,
)
from motivzeta.scalars import ScalarValue
from strategies import brieskorn_specs


def spec(*terms) -> BrieskornSpec:
    return BrieskornSpec(list(terms))


def test_recover_cubes():
    assert recover_exponents(BrieskornOracle(spec((1, 3), (-1, 3))), 2) == [3, 3]


def test_recover_square():
    state = RecoveryState.for_bound(bound_exponents(BrieskornOracle(spec((1, 2))), 1))
    assert recover_exponents(BrieskornOracle(spec((1, 2))), 1, state=state) == [2]
    assert state.mult.get(1, 0) == 0
    assert sum(state.mult.values()) == 1


def test_bound_for_a_square():
    assert bound_exponents(BrieskornOracle(spec((1, 2))), 1) == 2


def test_bound_probes_past_a_prime_exponent():
    oracle = BrieskornOracle(spec((1, 11)))
    with pytest.raises(OracleUndefined):
        oracle.degF(11)
    # 11 and 12 both fit every sample below the first informative prime; K is only an upper bound
    assert bound_exponents(oracle, 1) >= 11
    assert recover_exponents(oracle, 1) == [11]


def test_bound_for_cubes_is_finite():
    assert 3 <= bound_exponents(BrieskornOracle(spec((1, 3), (-1, 3))), 2) <= 64


def test_degF_law():
    rng = random.Random(11)
    for _ in range(10):
        s = BrieskornSpec([(rng.choice([1, -1]), rng.randint(2, 8)) for _ in range(rng.randint(1, 3))])
        oracle = BrieskornOracle(s)
        checked = 0
        while checked < 50:
            n = rng.randint(1, 2000)
            if any(n % k == 0 for k in s.exponents):
                continue
            assert oracle.degF(n) == -sum(n // k for k in s.exponents) + 1
            checked += 1


def test_crt_indices_have_the_intended_divisors():
    state = RecoveryState.for_bound(8)
    for q in state.Q[1:]:
        n = crt_index(state, q, 5)
        assert n >= 5
        assert state.divisors_in_Q(n) == [r for r in state.Q if q % r == 0]
        if q % 6 == 0:
            # both neighbours avoid every element of Q other than 1
            assert state.divisors_in_Q(n - 1) == [1]
            assert state.divisors_in_Q(n + 1) == [1]


def test_padded_primes():
    state = RecoveryState.for_bound(3)
    assert state.gammas[2] >= 3 and state.gammas[3] >= 2 and state.gammas[5] >= 1 and state.gammas[7] >= 1
    assert state.Q[0] == 1
    assert case_name(12) == "multiple of 6" and case_name(2) == "mult 2" and case_name(35) == "prime to 6"


@pytest.mark.parametrize("terms", [[(1, 2), (1, 5)], [(-1, 2), (1, 2), (1, 3)], [(1, 2), (-1, 4)]])
def test_matched_pairs_in_the_mult_2_case(terms):
    s = BrieskornSpec(terms)
    oracle = BrieskornOracle(s)
    state = RecoveryState.for_bound(8)
    n = crt_index(state, 2, 5)
    seen = 0
    for j in range(1, 5):
        lo, hi = n - j, n + j
        try:
            oracle.degDiffPlus(lo, hi)
        except OracleUndefined:
            continue
        assert oracle.chiPlus(lo) in (1, -1)
        seen += 1
    assert seen


def test_round_trip_on_random_specs():
    rng = random.Random(1)
    for _ in range(30):
        d = rng.randint(1, 3)
        s = BrieskornSpec([(rng.choice([1, -1]), rng.randint(2, 8)) for _ in range(d)])
        assert recover_exponents(BrieskornOracle(s), d) == sorted(s.exponents), s


@settings(max_examples=8)
@given(brieskorn_specs(1, 2, 6))
def test_signs_are_not_needed(s):
    flipped = BrieskornSpec([(-e, k) for e, k in s.terms])
    assert recover_exponents(BrieskornOracle(flipped), s.d) == sorted(s.exponents)


def test_validate_recovery_reports():
    assert validate_recovery(spec((1, 3), (1, 3)), [3, 3]).passed
    assert validate_recovery(spec((-1, 3), (1, 3)), [3, 3]).passed
    report = validate_recovery(spec((1, 2), (1, 4)), [2, 2])
    assert not report.passed
    assert report.first_divergent is not None
    assert report.render().startswith("FAIL: expected exponents 2,4, recovered 2,2")


def test_dump_round_trip():
    s = spec((1, 2), (-1, 3))
    oracle = BrieskornOracle(s)
    assert recover_exponents(oracle, 2) == [2, 3]
    dumped = DumpOracle.from_json(oracle.dump())
    assert recover_exponents(dumped, 2) == [2, 3]
    with pytest.raises(OracleUndefined):
        dumped.degF(10**7)


def test_inconsistent_oracle():
    # every coefficient pure with s(n) = n: the reciprocal sum would be 1 with d = 1
    oracle = CoefficientOracle(lambda n: MotClass.unit().scale(-ScalarValue.L(-n)))
    with pytest.raises(InconsistentOracle):
        recover_exponents(oracle, 1)


@given(st.integers(7, 60))
def test_dimension_is_bounded(d):
    with pytest.raises(ValueError):
        bound_exponents(BrieskornOracle(spec((1, 2))), d, RecoveryConfig())
