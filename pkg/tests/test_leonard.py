from fractions import Fraction

import pytest

from dualpolar.exact import ExactScalar, q_pow
from dualpolar.leonard import (
    DqkParams,
    ParameterArray,
    d4_transform,
    dqk_array,
    dqk_ddown_params,
    dqk_intersection_closed_forms,
    dqk_td_aw_closed_forms,
    extract_from_realization,
    intersection_data,
    pa_from_json,
    pa_to_json,
    realize,
    td_aw_scalars,
    validate,
    verify_td_aw_matrix,
)


@pytest.fixture(scope="module")
def ref():
    """The q = 2, d = 3 reference family member."""
    return DqkParams(ExactScalar(2), 3, 0, 0, 1, 1, 3)


@pytest.fixture(scope="module")
def ref_pa(ref):
    return dqk_array(ref)


def test_dqk_eigenvalues(ref_pa):
    assert [x.as_fraction() for x in ref_pa.theta] == [
        Fraction(67, 8), Fraction(7, 2), Fraction(13, 2), Fraction(193, 8)]
    assert [x.as_fraction() for x in ref_pa.theta_star] == [
        8, 2, Fraction(1, 2), Fraction(1, 8)]
    assert ref_pa.phi[0] == ExactScalar(Fraction(-189, 4))


def test_validate_reference(ref_pa):
    v = validate(ref_pa)
    assert v.valid
    assert v.beta_plus_one == ExactScalar(Fraction(21, 4))


def test_pa1_fails_for_kappa_equals_upsilon():
    bad = DqkParams(ExactScalar(2), 3, 0, 0, 1, 1, 1)
    with pytest.raises(ValueError):
        bad.check()
    pa = dqk_array(bad, check=False)
    assert pa.theta[1] == pa.theta[2]
    v = validate(pa)
    assert not v.valid and v.failure[0] == "PA1"


def test_pa2_failure_reported_with_index(ref_pa):
    phi = list(ref_pa.phi)
    phi[1] = ExactScalar(0)
    broken = ParameterArray(ref_pa.theta, ref_pa.theta_star, phi, ref_pa.phi2)
    v = validate(broken)
    assert not v.valid
    assert v.failure == ("PA2", 2)


def test_d0_trivially_valid():
    pa = ParameterArray([5], [7], [], [])
    v = validate(pa)
    assert v.valid and v.beta_plus_one is None


def test_dual_eigenvalue_difference_identity(ref, ref_pa):
    # theta*_i - theta*_j = kappa* q^d (q^-i - q^-j)(q^-i + q^-j)
    q, d = ref.q, ref.d
    for i in range(d + 1):
        for j in range(d + 1):
            lhs = ref_pa.theta_star[i] - ref_pa.theta_star[j]
            rhs = ref.kappa_star * q_pow(q, d) \
                * (q_pow(q, -i) - q_pow(q, -j)) \
                * (q_pow(q, -i) + q_pow(q, -j))
            assert lhs == rhs


def test_d4_involutions_and_braid(ref_pa):
    for g in ("*", "down", "ddown"):
        t = d4_transform(ref_pa, g)
        assert validate(t).valid
        assert d4_transform(t, g) == ref_pa
    lhs = d4_transform(d4_transform(ref_pa, "*"), "ddown")
    rhs = d4_transform(d4_transform(ref_pa, "down"), "*")
    assert lhs == rhs
    dd = d4_transform(d4_transform(ref_pa, "down"), "ddown")
    assert dd == d4_transform(d4_transform(ref_pa, "ddown"), "down")


def test_ddown_swaps_kappa_upsilon(ref, ref_pa):
    swapped = dqk_array(dqk_ddown_params(ref))
    t = d4_transform(ref_pa, "ddown")
    assert t == swapped
    assert t.theta == tuple(reversed(ref_pa.theta))
    assert t.phi == ref_pa.phi2 and t.phi2 == ref_pa.phi


def test_realize_normalized_split(ref_pa):
    real = realize(ref_pa, "normalized-split")
    ths = ref_pa.theta_star
    want = [ths[3] - ths[0], ths[3] - ths[1], ths[3] - ths[2]]
    assert [real.Astar.entry(i, i + 1) for i in range(3)] == want
    assert want == [ExactScalar(Fraction(-63, 8)), ExactScalar(Fraction(-15, 8)),
                    ExactScalar(Fraction(-3, 8))]
    for i in range(4):
        s = ExactScalar(0)
        for j in range(4):
            s = s + real.Astar.entry(i, j)
        assert s == ths[3]  # constant row sum theta*_d = 1/8


def test_realize_standard_row_sums(ref_pa):
    real = realize(ref_pa, "standard")
    for i in range(4):
        s = ExactScalar(0)
        for j in range(4):
            s = s + real.A.entry(i, j)
        assert s == ref_pa.theta[0]  # a_i + b_i + c_i = theta_0 = 67/8


def test_intersection_reference_values(ref, ref_pa):
    c, a, b, cs, astar, bs = intersection_data(ref_pa)
    assert b[0] == ExactScalar(Fraction(63, 8))
    assert c[1] == ExactScalar(Fraction(-9, 8))
    assert a[0] == ExactScalar(Fraction(1, 2))
    for i in range(4):
        assert a[i] + b[i] + c[i] == ref_pa.theta[0]
    assert (c, a, b, cs, astar, bs) == dqk_intersection_closed_forms(ref)


def test_td_aw_scalars_reference(ref, ref_pa):
    s = td_aw_scalars(ref_pa)
    assert s.beta == ExactScalar(Fraction(17, 4))
    assert s.gamma == ExactScalar(0)
    assert s.gamma_star == ExactScalar(0)
    assert s.rho == ExactScalar(Fraction(-675, 16))
    assert s.rho_star == ExactScalar(0)
    assert s.omega == ExactScalar(-9)  # (beta-2)(2hh* - (kappa+upsilon)kappa*)
    closed = dqk_td_aw_closed_forms(ref)
    for attr in ("beta", "gamma", "gamma_star", "rho", "rho_star", "omega",
                 "eta", "eta_star"):
        assert getattr(s, attr) == getattr(closed, attr), attr
    assert s.unique


def test_td_aw_matrix_identities(ref_pa):
    s = td_aw_scalars(ref_pa)
    for basis in ("split", "normalized-split", "standard"):
        assert verify_td_aw_matrix(realize(ref_pa, basis), s)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("params", [
    (0, 0, 1, 1, 3),
    (2, -1, 1, 2, 5),
    (Fraction(1, 2), 3, Fraction(-2, 3), 1, Fraction(7, 2)),
])
def test_dqk_family_q2(d, params):
    h, hs, k, ks, u = params
    p = DqkParams(ExactScalar(2), d, h, hs, k, ks, u)
    pa = dqk_array(p)
    assert validate(pa).valid
    real = realize(pa, "split")
    assert extract_from_realization(real) == pa
    s = dqk_td_aw_closed_forms(p)
    assert verify_td_aw_matrix(real, s)
    if d >= 3:
        s2 = td_aw_scalars(pa)
        assert s2.beta == s.beta and s2.omega == s.omega
    if d >= 1:
        assert intersection_data(pa) == dqk_intersection_closed_forms(p)


def test_dqk_irrational_q():
    q = ExactScalar.sqrt(2)
    p = DqkParams(q, 3, 1, 0, ExactScalar(0, 1, 2), 1, ExactScalar(0, 2, 2))
    pa = dqk_array(p)
    assert validate(pa).valid
    real = realize(pa, "normalized-split")
    assert extract_from_realization(real) == pa
    assert verify_td_aw_matrix(real, dqk_td_aw_closed_forms(p))


def test_round_trip_all_d4_relatives(ref_pa):
    for g in ("*", "down", "ddown"):
        t = d4_transform(ref_pa, g)
        real = realize(t, "split")
        assert extract_from_realization(real) == t


def test_json_round_trip(ref, ref_pa):
    s = td_aw_scalars(ref_pa)
    data = pa_to_json(ref_pa, s)
    assert data["d"] == 3
    assert data["scalars"]["beta"] == "17/4"
    back = pa_from_json(data)
    assert back == ref_pa
    dqk_form = {"q": "2", "d": 3, "h": "0", "h_star": "0", "kappa": "1",
                "kappa_star": "1", "upsilon": "3"}
    assert pa_from_json(dqk_form) == ref_pa


def test_graph_module_leonard_bridge(graph_c32, bm_c32):
    from dualpolar.leonard import leonard_from_tmodule
    from dualpolar.terwilliger import (
        build_context, central_elements, decompose, extract_module)

    ctx = build_context(graph_c32, bm_c32, 0)
    cents = central_elements(ctx)
    comps = decompose(ctx, cents)
    primary = [c for c in comps if c.triple == (0, 0, 3)][0]
    rec = extract_module(ctx, primary)
    pa, params = leonard_from_tmodule(ctx, rec)
    assert params.h == ExactScalar(-1)
    assert params.h_star == ExactScalar(-10)
    assert params.kappa == ExactScalar(0, 4, 2)  # 4 sqrt(2) = q^5
    assert params.kappa_star == ExactScalar(0, Fraction(45, 4), 2)
    assert params.upsilon == ExactScalar(0, -2, 2)
    assert pa.phi[0] == ExactScalar(-315)
    # sanity: h + kappa q^d + upsilon q^-d = theta_0 = 14
    q = ctx.q
    assert params.h + params.kappa * q_pow(q, 3) \
        + params.upsilon * q_pow(q, -3) == ExactScalar(14)
    # the graph intersection numbers coincide with the system's for the
    # primary module
    c, a, b, *_ = intersection_data(pa)
    assert [x.as_fraction() for x in c] == [0, 1, 3, 7]
    assert [x.as_fraction() for x in b] == [14, 12, 8, 0]
