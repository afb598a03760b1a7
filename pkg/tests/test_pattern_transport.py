import pytest

from fullgroup_lab import (
    build_ball,
    diametral_geodesic,
    fit_line_chart,
    half_space,
    identity_element,
    local_pattern,
    make_element,
    pattern_match_points,
    repetition_radius,
    same_pattern,
    transport_halfspace,
)
from fullgroup_lab.errors import PatternMismatch, PreconditionNphi, RimContact
from fullgroup_lab.pattern_transport import end_strips, labeled_match
from oracles import int_to_point, point_to_int


@pytest.fixture(scope="module")
def lab(odometer, pair_swap):
    ball = build_ball(odometer, 200)
    chart = fit_line_chart(ball)
    return {
        "ball": ball,
        "chart": chart,
        "half": half_space(chart),
        "seg": diametral_geodesic(ball),
        "swap": pair_swap,
    }


def vertex(ball, n):
    return ball.vertex_of(int_to_point(n))


def test_identity_pattern_matches_everywhere(odometer, lab):
    ball = lab["ball"]
    F = [identity_element(odometer)]
    pattern = local_pattern(F, ball, ball.base, 2)
    assert all(words == ((),) for _v, words in pattern.table)
    for n in (-5, 3, 40):
        assert same_pattern(F, ball, ball.base, vertex(ball, n), 2)
    assert repetition_radius(F, 2, ball) == 0


def test_pair_swap_pattern_parity(lab):
    # oracle: the piece used at integer k is decided by k mod 2
    ball, F = lab["ball"], [lab["swap"]]
    assert same_pattern(F, ball, vertex(ball, 0), vertex(ball, 2), 2)
    assert same_pattern(F, ball, vertex(ball, 0), vertex(ball, -4), 2)
    assert not same_pattern(F, ball, vertex(ball, 0), vertex(ball, 1), 2)
    assert repetition_radius(F, 2, ball) == 1


def test_depth3_element_pattern_period(odometer, lab):
    # swaps 8k+1 <-> 8k+2, fixes everything else: depth-3 pieces
    ball = lab["ball"]
    gens = [("100", ("t",)), ("010", ("t_inv",))]
    rest = [(p, ()) for p in ("000", "110", "001", "101", "011", "111")]
    elem = make_element(odometer, gens + rest)
    # oracle: integer bookkeeping of the swap
    for k in (-16, 0, 8):
        from fullgroup_lab import apply_element

        assert point_to_int(apply_element(elem, int_to_point(k + 1))) == k + 2
        assert point_to_int(apply_element(elem, int_to_point(k + 2))) == k + 1
        assert point_to_int(apply_element(elem, int_to_point(k))) == k
    r = repetition_radius([elem], 3, ball)
    assert r <= 8
    # oracle: pieces key on the low three bits, so the pattern has period 8
    assert r == 4


def test_pattern_rim_contact(lab):
    ball = lab["ball"]
    far = vertex(ball, 195)
    with pytest.raises(RimContact):
        local_pattern([lab["swap"]], ball, far, 10)


def test_grigorchuk_pattern_repeats_for_depth2_element(grigorchuk):
    ball = build_ball(grigorchuk, 40)
    phi = make_element(grigorchuk, [("00", ("b",)), ("01", ("b",)), ("1", ())])
    anchor = [v for v in range(ball.n) if ball.dist[v] == 10][0]
    matches = [z for z in pattern_match_points([phi], ball, 2, anchor=anchor)
               if z != anchor]
    assert matches
    assert min(ball.d(anchor, z) for z in matches) <= 20


def test_labeled_match_respects_loops(grigorchuk):
    # the all-ones end carries b,c,d loops; no interior vertex matches it
    ball = build_ball(grigorchuk, 20)
    inner = [v for v in range(ball.n) if ball.dist[v] == 5][0]
    assert labeled_match(ball, ball.base, inner, 2) is None
    assert labeled_match(ball, ball.base, ball.base, 2) is not None


def test_transport_at_anchor_is_y_itself(odometer, lab):
    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    F = [lab["swap"]]
    result = transport_halfspace(F, ball.base, 10, half, seg)
    window = ball.certified(1)
    assert result.y_z & window == half.members & window
    assert all(result.checks.values())


def test_transport_translates_half_space(odometer, lab):
    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    F = [lab["swap"]]
    for shift in (2, 26, -40):
        z = vertex(ball, shift)
        result = transport_halfspace(F, z, 10, half, seg)
        values = sorted(point_to_int(ball.point(v)) for v in result.y_z)
        # oracle: integer bookkeeping, the transported set is a half line
        assert values[0] == shift
        assert values == list(range(shift, values[-1] + 1))
        assert all(result.checks.values())
        assert result.R == 1


def test_transport_guard_small_n(odometer, lab):
    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    with pytest.raises(PreconditionNphi):
        transport_halfspace([lab["swap"]], vertex(ball, 2), 5, half, seg)


def test_transport_requires_kernel_family(odometer, lab):
    from fullgroup_lab.errors import TransportFailure

    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    shift = make_element(odometer, [("", ("t",))])
    with pytest.raises(TransportFailure):
        transport_halfspace([shift], vertex(ball, 2), 10, half, seg)


def test_transport_pattern_mismatch(odometer, lab):
    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    with pytest.raises(PatternMismatch):
        transport_halfspace([lab["swap"]], vertex(ball, 3), 10, half, seg)


def test_transport_partition_and_boundaries(odometer, lab):
    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    F = [lab["swap"]]
    z = vertex(ball, -26)
    result = transport_halfspace(F, z, 10, half, seg)
    window = ball.certified(1)
    assert (result.a_plus | result.a_minus) >= window
    assert not result.a_plus & result.a_minus
    assert result.boundary == {vertex(ball, -26)}
    h = result.match_map
    assert {h[u] for u in half.boundary} == {vertex(ball, -26)}
    assert {h[u] for u in half.co_boundary} == {vertex(ball, -27)}


def test_transport_ends_and_invariance(odometer, lab):
    ball, half, seg = lab["ball"], lab["half"], lab["seg"]
    F = [lab["swap"]]
    result = transport_halfspace(F, vertex(ball, 52), 10, half, seg)
    strip_minus, strip_plus = end_strips(ball, seg, lab["chart"].m)
    assert strip_plus <= result.y_z
    assert not strip_minus & result.y_z
    assert strip_minus <= result.a_plus | result.a_minus
    # F-invariance spelled out on integers: Y_z is a union of swap pairs
    values = {point_to_int(ball.point(v)) for v in result.y_z}
    for k in sorted(values):
        if k % 2 == 0 and abs(k) <= 195:
            assert k + 1 in values
