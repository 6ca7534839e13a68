import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covspec.errors import AmbiguousPairingError, NotQuantumSpectrumError, ValidationError
from covspec.pairing import (classify_pairing, diagonal_representative, matched_pairs, mode_params_of_diag,
                             spectrum, tolerance_sensitive, valid_matchings)

from conftest import squeezed_pair


def _all_pairings(vals):
    """Every perfect matching of index set, as sorted value pairs (brute force)."""
    idx = list(range(len(vals)))

    def rec(left):
        if not left:
            yield ()
            return
        i = left[0]
        for j in left[1:]:
            rest = [x for x in left if x not in (i, j)]
            for tail in rec(rest):
                yield ((i, j),) + tail

    out = set()
    for m in rec(idx):
        if all(vals[i] * vals[j] >= 1 for i, j in m):
            out.add(tuple(sorted(tuple(sorted((vals[i], vals[j]), reverse=True)) for i, j in m)))
    return out


def test_spectrum_sorts_and_validates():
    assert spectrum([0.25, 4, 2, 0.5]).values == (4.0, 2.0, 0.5, 0.25)
    assert spectrum([1, 1]).values == (1.0, 1.0)
    with pytest.raises(ValidationError):
        spectrum([3])
    with pytest.raises(ValidationError):
        spectrum([1.0, -1.0])


def test_diagonal_representative_examples():
    np.testing.assert_array_equal(np.diag(diagonal_representative([4, 2, 0.5, 0.25])), [4, 0.25, 2, 0.5])
    np.testing.assert_array_equal(diagonal_representative([1, 1]), np.eye(2))
    e = math.e
    np.testing.assert_array_equal(np.diag(diagonal_representative([e**2, 1, 1, e**-2])), [e**2, e**-2, 1, 1])


def test_valid_matchings_unique_example():
    assert valid_matchings([4, 2, 0.5, 0.25]) == [((4.0, 0.25), (2.0, 0.5))]


def test_valid_matchings_agree_with_brute_force_on_ambiguous_example():
    vals = [3, 2, 1.5, 1]
    got = {tuple(sorted(m)) for m in valid_matchings(vals)}
    assert got == _all_pairings([float(v) for v in vals])
    assert len(got) == 3


def test_full_degeneracy_collapses_to_one_matching():
    assert valid_matchings([1, 1, 1, 1]) == [((1.0, 1.0), (1.0, 1.0))]


def test_no_matching_raises():
    with pytest.raises(NotQuantumSpectrumError):
        valid_matchings([0.5, 0.5])


def test_size_cap():
    with pytest.raises(ValidationError):
        valid_matchings([1.0] * 22)


@settings(max_examples=80)
@given(st.lists(st.sampled_from([0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 3.0, 4.0]), min_size=2, max_size=8)
       .filter(lambda v: len(v) % 2 == 0))
def test_matchings_match_brute_force(vals):
    expected = _all_pairings(sorted((float(v) for v in vals), reverse=True))
    try:
        got = {tuple(sorted(m)) for m in valid_matchings(vals)}
    except NotQuantumSpectrumError:
        got = set()
    assert got == expected


def test_classify_pairing_case1_example():
    pc = classify_pairing([4, 2, 0.5, 0.25])
    assert pc.unique and pc.pure_count == 2 and pc.case == "1"


def test_classify_pairing_not_unique_example():
    pc = classify_pairing([3, 2, 1.5, 1])
    assert not pc.unique and pc.pure_count is None and pc.case is None


def test_classify_pairing_impure_example():
    vals = squeezed_pair(1.2, 1.0) + squeezed_pair(1.1, 0.1)
    pc = classify_pairing(vals)
    assert pc.unique and pc.pure_count == 0 and pc.case is None


@pytest.mark.parametrize("nu, r1, r2, case", [
    (1.5, 0.1, 1.0, "2"),   # nu e^{2 r1 - 2 r2} <= 1
    (1.5, 1.2, 0.2, "3"),   # nu e^{-2 r1 + 2 r2} <= 1
])
def test_cases_two_and_three(nu, r1, r2, case):
    pc = classify_pairing(squeezed_pair(nu, r1) + squeezed_pair(1.0, r2))
    assert pc.unique and pc.pure_count == 1 and pc.case == case


def test_case_two_with_single_mode():
    pc = classify_pairing(squeezed_pair(2.0, 0.3))
    assert pc.case == "2" and pc.pure_count == 0


def test_mode_params_of_diag_examples():
    got = mode_params_of_diag([4, 2, 0.5, 0.25])
    np.testing.assert_allclose(got.pairs, [(1.0, math.log(2)), (1.0, 0.5 * math.log(2))], atol=1e-15)
    np.testing.assert_allclose(mode_params_of_diag([1, 1]).pairs, [(1.0, 0.0)])
    np.testing.assert_allclose(mode_params_of_diag(squeezed_pair(1.7, 0.6)).pairs, [(1.7, 0.6)], atol=1e-14)


def test_matched_pairs_ambiguous_lists_all_parameter_sets():
    with pytest.raises(AmbiguousPairingError) as info:
        matched_pairs([3, 2, 1.5, 1])
    assert len(info.value.parameter_sets) == 3


def test_tolerance_sensitivity_flag():
    assert not tolerance_sensitive([4, 2, 0.5, 0.25])
    # a pair product 1 + 1e-8 is within two orders of magnitude of the pure band
    assert tolerance_sensitive([2.0, 0.5 * (1 + 1e-8)])


def test_distinct_from_degeneracy_tolerance():
    near = [2.0, 2.0 * (1 + 1e-12), 0.5, 0.5]
    assert len(classify_pairing(near).matchings) == 1
