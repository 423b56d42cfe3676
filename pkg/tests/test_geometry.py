import re
from itertools import combinations

import numpy as np
import pytest

from _oracles import design_triples_exact, rank_lt_by_nullvector
from covarray import (GeometryError, MobiusPlane, build_difference_set,
                      build_full_plane, build_ovoid, build_truncated_planes,
                      check_anti_cocircular, circles_through_zero, dump_plane,
                      plane_from_row_zeros, run_lemma_suite, tower_for_q,
                      trace)


def test_difference_set_q3(tower3):
    ds = build_difference_set(tower3)
    assert ds.modulus == 40
    assert len(ds.members) == 13
    assert 0 not in ds.member_set
    assert ds.params == (40, 13, 4)


def test_difference_set_matches_element_trace(tower3):
    # oracle: recompute membership through the element-level trace map
    ds = build_difference_set(tower3)
    direct = {j for j in range(ds.modulus) if trace(tower3.from_exp(j)).is_zero}
    assert ds.member_set == direct


def test_center_exponent_in_members(tower3, tower5):
    for tower in (tower3, tower5):
        q = tower.q
        ds = build_difference_set(tower)
        assert (q * q + 1) * (q + 1) // 2 in ds.member_set


def test_difference_multiset_lambda(tower3, tower5):
    for tower in (tower3, tower5):
        ds = build_difference_set(tower)
        v = ds.modulus
        diffs = (ds.members[:, None] - ds.members[None, :]) % v
        counts = np.bincount(diffs.ravel(), minlength=v)
        assert counts[0] == len(ds.members)
        assert (counts[1:] == ds.q + 1).all()


def test_ovoid_q3_cap_property(tower3):
    ov = build_ovoid(tower3)
    assert ov.points.shape == (10, 4)
    assert ov.points[0].tolist() == [1, 0, 0, 0]
    # oracle: every 3-subset is independent (no nonzero null combination)
    for tri in combinations(range(10), 3):
        mat = ov.points[list(tri)].T
        assert not rank_lt_by_nullvector(tower3, mat, 3)


def test_ovoid_q7_figure_point(tower7_fig):
    ov = build_ovoid(tower7_fig)
    assert ov.points[1].tolist() == [4, 1, 5, 5]


def test_circles_through_zero(tower3, tower5):
    for tower in (tower3, tower5):
        q = tower.q
        ds = build_difference_set(tower)
        thru = circles_through_zero(ds)
        x0 = (q * q + 1) * (q + 1) // 2
        assert thru[x0] == (0,)
        rest = {c for x, c in thru.items() if x != x0}
        assert len(rest) == q * (q + 1)
        assert all(len(c) == q + 1 and 0 in c for c in rest)


def test_full_plane_q3(tower3, plane3):
    assert len(plane3.circles) == 30
    assert all(len(c) == 4 for c in plane3.circles)
    assert design_triples_exact(plane3.circles, 10)


def test_full_plane_counts(tower5, tower7):
    assert len(build_full_plane(tower5).circles) == 5 * 26
    assert len(build_full_plane(tower7).circles) == 7 * 50


def test_development_matches_row_zeros(tower3, tower5, tower7):
    for tower in (tower3, tower5, tower7):
        dev = build_full_plane(tower)
        rows = plane_from_row_zeros(tower)
        assert dev.circles == rows.circles


def test_truncated_point_sets(truncated3):
    m1, m2, mh = truncated3
    assert m1.points == m2.points == mh.points == (0, 2, 4, 6, 8)
    assert all(i % 2 == 0 for p in truncated3 for c in p.circles for i in c)


def test_truncated_circle_sizes(truncated3):
    m1, _, _ = truncated3
    assert max(len(c) for c in m1.circles) <= 4


def test_truncated_rejects_even_q():
    tower = tower_for_q(4, 4)
    plane = build_full_plane(tower)
    with pytest.raises(GeometryError):
        build_truncated_planes(plane)


def test_generator_correspondence(tower3, tower5):
    # the three truncated planes agree with the step-(q+1), 2(q+1), 4(q+1)
    # membership formulas on circles through zero
    for tower in (tower3, tower5):
        q = tower.q
        n = q * q + 1
        ds = build_difference_set(tower)
        v = ds.modulus
        thru = circles_through_zero(ds)
        m1, m2, mh = build_truncated_planes(build_full_plane(tower))
        half = lambda i: i // 2 if i % 4 == 0 else (i + n) // 2  # noqa: E731
        for x, cx in thru.items():
            evens = [i for i in cx if i % 2 == 0]
            c1 = tuple(evens)
            c2 = tuple(sorted(half(i) for i in evens))
            ch = tuple(sorted(2 * i % n for i in evens))
            assert c1 == tuple(i for i in range(0, n, 2)
                               if (x + (q + 1) * i) % v in ds.member_set)
            assert c2 == tuple(i for i in range(0, n, 2)
                               if (x + 2 * (q + 1) * i) % v in ds.member_set)
            # the step-(q+1) characterization needs the even halving preimage
            assert ch == tuple(i for i in range(0, n, 2)
                               if (x + (q + 1) * half(i)) % v in ds.member_set)
            assert c1 in set(m1.circles)
            assert c2 in set(m2.circles)
            assert ch in set(mh.circles)


def test_anti_cocircular_small(truncated3, tower5):
    m1, m2, mh = truncated3
    rep = check_anti_cocircular(m1, m2, mh)
    assert rep.passed and rep.max_intersection <= 3
    assert rep.witness is not None
    a, b, c = (set(w) for w in rep.witness)
    assert len(a & b & c) == rep.max_intersection
    t1, t2, th = build_truncated_planes(build_full_plane(tower5))
    rep5 = check_anti_cocircular(t1, t2, th)
    assert rep5.passed and rep5.max_intersection <= 3


def test_anti_cocircular_self_full_plane(plane3):
    # checker sanity: one plane against itself attains a full circle size
    rep = check_anti_cocircular(plane3, plane3, plane3)
    assert rep.max_intersection == 4  # q + 1
    assert not rep.passed


def test_anti_cocircular_self_truncated(truncated3):
    # for truncated planes the self-intersection peaks at the largest image
    m1, _, _ = truncated3
    rep = check_anti_cocircular(m1, m1, m1)
    assert rep.max_intersection == max(len(c) for c in m1.circles)


def test_anti_cocircular_detects_violation():
    shared = tuple(range(0, 10, 2))
    plane = MobiusPlane(3, "M1", shared, (shared,))
    rep = check_anti_cocircular(plane, plane, plane)
    assert rep.max_intersection == 5
    assert not rep.passed
    assert rep.witness == (shared, shared, shared)


def test_lemma_suite_q3(tower3):
    results = run_lemma_suite(tower3)
    assert all(r.passed for r in results), [r for r in results if not r.passed]
    names = [r.name for r in results]
    assert names == ["trace-zero-unique", "mirror-closure", "antipodal-symmetry",
                     "no-doubling", "no-antipodal-pairs", "no-double-orbit"]
    assert "[5]" in results[0].detail  # the unique solution x = (q^2+1)/2


def test_lemma_suite_q5(tower5):
    assert all(r.passed for r in run_lemma_suite(tower5))


def test_trace_zero_unique_oracle(tower3):
    # oracle for the unique-solution lemma, straight from the trace table
    q = tower3.q
    sols = [x for x in range(q * q + 1)
            if tower3.trace_exp((q + 1) * x) == 0]
    assert sols == [(q * q + 1) // 2] == [5]


def test_dump_plane_format(tmp_path, truncated3):
    m1, _, _ = truncated3
    path = tmp_path / "m1.mobius"
    dump_plane(m1, path)
    lines = path.read_text().splitlines()
    assert re.fullmatch(r"MOBIUS q=3 variant=M1 poly=[\d,]+", lines[0])
    body = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    assert body == [c for c in m1.circles if c]
    assert all(tuple(sorted(c)) == c for c in body)
