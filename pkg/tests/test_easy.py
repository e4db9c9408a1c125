import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msc import UsageError
from msc.easy import CanonicalProgram, canonicalize, solve_easy, solve_fast, solve_reference
from msc.ilp import PmIlp
from msc.oracle import brute_force_easy


@st.composite
def canonical_programs(draw, max_n=6, max_d=20, span=30):
    n = draw(st.integers(1, max_n))
    parity = draw(st.integers(0, 1))
    same_parity = st.integers(-span, span).map(lambda v: 2 * v + parity)
    kp = draw(same_parity)
    ks = sorted(draw(st.lists(same_parity, min_size=n, max_size=n)))
    ds = draw(st.lists(st.integers(0, max_d), min_size=n, max_size=n))
    return CanonicalProgram(kp, ks, ds)


@st.composite
def easy_programs(draw, max_n=4, max_width=6):
    n = draw(st.integers(0, max_n))
    shapes = st.sampled_from(["all", "none"] + [j for j in range(n)])
    rows = draw(st.lists(shapes, min_size=1, max_size=7))
    coef = [[1 if r == "all" or r == j else -1 for j in range(n)] for r in rows]
    consts = draw(st.lists(st.integers(-25, 25), min_size=len(rows), max_size=len(rows)))
    lows = draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))
    widths = draw(st.lists(st.integers(0, max_width), min_size=n, max_size=n))
    return PmIlp.from_rows(coef, consts, [(lo, lo + w) for lo, w in zip(lows, widths)])


def both(c):
    return solve_reference(c)[0], solve_fast(c)[0]


def test_single_variable():
    assert both(CanonicalProgram(5, [3], [7])) == (5, 5)


def test_first_bulk_step_takes_two():
    trace = []
    value, y = solve_fast(CanonicalProgram(0, [0, 4], [3, 3]), trace)
    assert value == 2 == solve_reference(CanonicalProgram(0, [0, 4], [3, 3]))[0]
    assert trace == [(0, (0, 4), (3, 3))]
    assert y == (2, 0)


def test_zero_bound_variable_is_dropped():
    assert both(CanonicalProgram(0, [0, 2], [0, 5])) == (2, 2)


def test_loop_never_entered():
    assert both(CanonicalProgram(6, [0, 2], [4, 9])) == (6, 6)


def test_canonical_form_of_two_constraint_program():
    # x + 3 <= z, -x + 5 <= z with x in {2, 3, 4}
    P = PmIlp.from_rows([[1], [-1]], [3, 5], [(2, 4)])
    can = canonicalize(P)
    assert [(c.kp, c.ks) for c in can.programs] == [(6, (4, 6)), (5, (3, 5))]
    assert min(solve_fast(c)[0] for c in can.programs) == 5
    assert solve_easy(P) == (5, [2])
    assert brute_force_easy(P) == 5


def test_zero_variable_program():
    P = PmIlp.from_rows([[], [], []], [4, 7, 1], [])
    assert solve_easy(P) == (7, [])
    assert brute_force_easy(P) == 7


def test_one_constraint_program():
    P = PmIlp.from_rows([[1]], [9], [(0, 4)])
    assert solve_easy(P) == (9, [0])


def test_invalid_inputs():
    with pytest.raises(UsageError):
        solve_fast(CanonicalProgram(0, [1], [1]))
    with pytest.raises(UsageError):
        solve_fast(CanonicalProgram(0, [4, 2], [1, 1]))
    with pytest.raises(UsageError):
        solve_reference(CanonicalProgram(0, [0], [-1]))
    with pytest.raises(UsageError):
        # two +1 entries out of three variables: not easy
        solve_easy(PmIlp.from_rows([[1, 1, -1], [1, -1, 1]], [0, 0], [(0, 1)] * 3))
    with pytest.raises(UsageError):
        canonicalize(PmIlp.from_rows([], [], []))


@given(canonical_programs())
@settings(max_examples=300, deadline=None)
def test_fast_matches_reference_and_enumeration(c):
    trace = []
    fast, y = solve_fast(c, trace)
    ref, _ = solve_reference(c)
    assert fast == ref == brute_force_easy(c.to_pmilp())
    assert c.feasible(y) and c.evaluate(y) == fast
    assert len(trace) <= 3 * c.n


@given(canonical_programs())
@settings(deadline=None)
def test_trace_keeps_parity_and_order(c):
    trace = []
    solve_fast(c, trace)
    for kp, ks, ds in trace:
        assert all((k - kp) % 2 == 0 for k in ks)
        assert list(ks) == sorted(ks)
        assert all(d >= 0 for d in ds)


@given(easy_programs())
@settings(max_examples=300, deadline=None)
def test_easy_programs_match_enumeration(P):
    value, x = solve_easy(P)
    assert value == brute_force_easy(P)
    assert P.in_range(x) and P.objective(x) == value
