import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from covarray import (CoveringArray, Provenance, build_ca3_projective,  # noqa: E402
                      build_ca4_half, build_full_plane, build_tower,
                      build_truncated_planes, generator_matrix, span_array,
                      tower_for_q, verify_coverage, write_ca)

FIGURE_POLY = [3, 4, 5, 0, 1]  # x^4 + 5x^2 + 4x + 3 over GF(7)


@pytest.fixture(scope="session")
def tower3():
    return tower_for_q(3, 4)


@pytest.fixture(scope="session")
def tower5():
    return tower_for_q(5, 4)


@pytest.fixture(scope="session")
def tower7():
    return tower_for_q(7, 4)


@pytest.fixture(scope="session")
def tower9():
    return tower_for_q(9, 4)


@pytest.fixture(scope="session")
def tower7_fig():
    return build_tower(7, 1, 4, override_tower_poly=FIGURE_POLY)


@pytest.fixture(scope="session")
def half3(tower3):
    return build_ca4_half(tower3)


@pytest.fixture(scope="session")
def half5(tower5):
    return build_ca4_half(tower5)


@pytest.fixture(scope="session")
def ca3_q3():
    return build_ca3_projective(tower_for_q(3, 3))


@pytest.fixture(scope="session")
def ca3_q5():
    return build_ca3_projective(tower_for_q(5, 3))


@pytest.fixture(scope="session")
def plane3(tower3):
    return build_full_plane(tower3)


@pytest.fixture(scope="session")
def truncated3(plane3):
    return build_truncated_planes(plane3)


def make_truncated_ingredient(q: int) -> CoveringArray:
    """Test fixture: a verified CA(2q^3 - q; 3, (q^2+1)/2, q).

    Searches the stacked projective-pair spans for q-1 row pairs (one per
    block) that agree on at least (q^2+1)/2 common columns, keeps those
    columns, and drops the redundant copies.  The result is re-verified by
    brute force, so the construction of the fixture does not need to be
    trusted.
    """
    tower = tower_for_q(q, 3)
    c = q * q + q + 1
    h = (q * q + 1) // 2
    a1 = span_array(generator_matrix(tower, 1, c))
    a2 = span_array(generator_matrix(tower, -1, c))
    cands = []
    for u in range(1, a1.shape[0]):
        eq = a1[u][None, :] == a2
        sizes = eq.sum(axis=1)
        for w in np.nonzero(sizes >= h)[0]:
            if w:
                cands.append((int(sizes[w]), u, int(w), np.nonzero(eq[w])[0]))
    cands.sort(key=lambda x: (-x[0], x[1], x[2]))
    cands = cands[:48]

    from itertools import combinations
    chosen = None
    for combo in combinations(range(len(cands)), q - 1):
        ws = {cands[i][2] for i in combo}
        if len(ws) < q - 1:
            continue
        common = cands[combo[0]][3]
        for i in combo[1:]:
            common = np.intersect1d(common, cands[i][3])
            if len(common) < h:
                break
        if len(common) >= h:
            chosen = (combo, common)
            break
    assert chosen is not None, f"no duplicate-row structure found for q={q}"
    combo, common = chosen
    cols = common[:h]
    keep = np.ones(a2.shape[0], bool)
    keep[0] = False
    for i in combo:
        keep[cands[i][2]] = False
    rows = np.vstack([a1[:, cols], a2[keep][:, cols]])
    ca = CoveringArray(rows, 3, q, Provenance("imported", q, tower.poly_csv()))
    assert ca.N == 2 * q ** 3 - q
    assert verify_coverage(ca, 3).passed
    return ca


@pytest.fixture(scope="session")
def ingredient51():
    return make_truncated_ingredient(3)


@pytest.fixture(scope="session")
def ingredient245():
    return make_truncated_ingredient(5)


@pytest.fixture(scope="session")
def ingredient51_file(ingredient51, tmp_path_factory):
    path = tmp_path_factory.mktemp("ing") / "ca_51_3_5_3.txt"
    write_ca(ingredient51, path)
    return path


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
