import math
import random

import numpy as np
import pytest

from halftimehash import analysis, variant
from halftimehash.analysis import (
    CodeDistanceError,
    SingularSubsetError,
    det_bareiss,
    ehc_bound,
    entropy_report,
    max_two_adic_valuation,
    two_adic_valuation,
    verify_min_distance,
)
from halftimehash.params import VARIANTS, ErasureCode, TransformMatrix

from halftimehash import gf16
import reference


def test_bareiss_matches_cofactor_oracle():
    rnd = random.Random(1)
    for _ in range(300):
        n = rnd.randint(1, 5)
        rows = [[rnd.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert det_bareiss(rows) == reference.det_cofactor(rows)


def test_two_adic_valuation():
    assert two_adic_valuation(1) == 0
    assert two_adic_valuation(-12) == 2
    assert two_adic_valuation(1 << 40) == 40
    with pytest.raises(ValueError):
        two_adic_valuation(0)


def test_identity_matrix_valuation_zero():
    ident = TransformMatrix(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert max_two_adic_valuation(ident, 3) == 0


@pytest.mark.parametrize(
    "width,expected", [(16, 2), (24, 2), (32, 3), (40, 3)]
)
def test_published_matrix_valuations(width, expected):
    p = variant(width)
    assert max_two_adic_valuation(p.matrix, p.output_words) == expected


def test_three_by_nine_valuation_at_least_one():
    # with 9 columns over 7 nonzero mod-2 patterns, two columns must agree
    # mod 2, so some determinant is even
    p = variant(24)
    assert max_two_adic_valuation(p.matrix, 3) >= 1


def test_singular_subset_detected():
    # duplicate a column to force a singular pair
    corrupt = TransformMatrix(((1, 1, 2), (2, 2, 1)))
    with pytest.raises(SingularSubsetError):
        max_two_adic_valuation(corrupt, 2)


def test_gf16_tables_match_direct_multiply_and_field_axioms():
    for a in range(16):
        for b in range(16):
            assert gf16.mul(a, b) == reference.gf16_mul_direct(a, b)
            for c in range(16):
                assert gf16.mul(a, gf16.mul(b, c)) == gf16.mul(gf16.mul(a, b), c)
                assert gf16.mul(a, b ^ c) == gf16.mul(a, b) ^ gf16.mul(a, c)
    for a in range(1, 16):
        assert gf16.mul(a, gf16.inv(a)) == 1


def test_gf16_lanewise_scale_matches_tables():
    rnd = random.Random(2)
    for _ in range(500):
        coeff = rnd.randrange(16)
        word = rnd.getrandbits(64)
        scaled = gf16.scale(coeff, word, 64, (1 << 64) - 1)
        # check every one of the 16 interleaved elements
        for lane in range(16):
            elem = sum(((word >> (lane + 16 * c)) & 1) << c for c in range(4))
            got = sum(((scaled >> (lane + 16 * c)) & 1) << c for c in range(4))
            assert got == gf16.mul(coeff, elem)


@pytest.mark.parametrize("width", sorted(VARIANTS))
def test_shipped_codes_reach_declared_distance(width):
    p = variant(width)
    measured = verify_min_distance(p.code, 4, trials=10**5)
    assert measured >= p.output_words


def test_xor_parity_distance_two():
    code = ErasureCode(2, 3, 2, "xor-parity", ((1, 1),))
    assert verify_min_distance(code, 4, trials=10**4) == 2


def test_repetition_code_distance_two():
    code = ErasureCode(1, 2, 2, "repo-defined-linear", ((1,),))
    assert verify_min_distance(code, 6, trials=10**4) == 2


def test_distance_deficient_code_rejected():
    # two equal coefficients make a weight-2 codeword invisible to one parity
    bad = ErasureCode(2, 3, 3, "repo-defined-linear", ((1, 1),))
    with pytest.raises(CodeDistanceError):
        verify_min_distance(bad, 4, trials=10**4)


def test_verify_min_distance_preconditions():
    code = variant(24).code
    with pytest.raises(ValueError):
        verify_min_distance(code, 9)
    with pytest.raises(ValueError):
        verify_min_distance(code, 5)  # GF(16) rows need a multiple of 4
    wide = ErasureCode(8, 9, 2, "xor-parity", ((1,) * 8,))
    with pytest.raises(ValueError):
        verify_min_distance(wide, 8)  # 8 * 8 bits > 28-bit enumeration cap


def test_entropy_report_pinned_formula_case():
    # k=3, p=2, h=4: eps * 2^96 = 2^6 + 4^3 + 1 = 129
    p = variant(24)
    r = entropy_report(p, 2**20)
    assert r.tree_height == 4
    assert math.isclose(r.epsilon_log2, 96 - math.log2(129), rel_tol=1e-12)


def test_entropy_report_exabyte_over_83_bits():
    p = variant(24)
    for n in (10**18, 2**60):
        r = entropy_report(p, n)
        assert r.epsilon_log2 > 83


def test_entropy_report_seed_sizes_match_quoted_figures():
    p = variant(24)
    mb = entropy_report(p, 2**20)
    assert abs(mb.seed_bytes - 8400) <= 0.15 * 8400
    eb = entropy_report(p, 2**60)
    assert abs(eb.seed_bytes - 34000) <= 0.15 * 34000


def test_entropy_report_floor_and_ceiling_exposed():
    p = variant(24)
    r = entropy_report(p, 2**20)
    assert (r.tree_height, r.tree_height_floor) == (4, 3)
    assert r.seed_words > r.seed_words_floor


def test_entropy_report_small_input_h_zero():
    r = entropy_report(variant(16), 1)
    assert r.tree_height == 0
    assert r.seed_words == r.seed_words_floor
    with pytest.raises(ValueError):
        entropy_report(variant(16), 0)


def test_entropy_report_monotone():
    p = variant(24)
    sizes = [1, 100, 10**4, 10**6, 10**9, 10**12, 10**15, 10**18]
    reports = [entropy_report(p, n) for n in sizes]
    for a, b in zip(reports, reports[1:]):
        assert b.seed_words >= a.seed_words
        assert b.epsilon_log2 <= a.epsilon_log2


def test_multiplication_fields_consistent():
    p = variant(24)
    r = entropy_report(p, 2**20)
    n_inst = (2**20 // 8) // p.instance_words
    assert r.multiplications == (p.entropy_words + p.output_words) * p.block_words * n_inst
    assert r.multiplications_exact == r.multiplications + r.multiplications_log_term
    assert 0 < r.multiplications_log_term < 10_000
    assert r.ehc_multiplications / r.multiplications_exact > 0.8


def test_ehc_bound_values():
    assert ehc_bound(variant(24), 32) == 3 * (32 - 2) == 90
    assert ehc_bound(variant(24), 4) == 3 * (4 - 2) == 6
    toy = variant(16)
    assert ehc_bound(toy, 32) == 2 * 30
    # degenerate single-output, p=0 case gives the plain width bound
    from halftimehash.params import HashParams

    single = HashParams(
        8, 1, 1, 1, 1, 1, 2, 0,
        TransformMatrix(((1,),)),
        ErasureCode(1, 1, 1, "repo-defined-linear", ()),
    )
    assert ehc_bound(single, 32) == 32


def test_csv_row_matches_header():
    r = entropy_report(variant(24), 4096)
    header = analysis.report_csv_header().split(",")
    row = analysis.report_csv_row(r).split(",")
    assert len(header) == len(row)
    assert header[0] == "output_bytes"
    table = analysis.report_table(r)
    for name in header:
        assert name in table
