"""Singer difference sets, ovoids, Mobius planes and their truncations.

Everything here lives on the index sets: ovoid point i stands for the
coordinate vector of alpha^(i(q+1)), and a circle is the sorted tuple of the
ovoid indices cut out by a secant plane.  The three truncated planes share
the even indices as points; their circles are images of full circles under
restriction, the even-half map, and doubling mod q^2+1.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ._backend import get_kernels
from .fields import FieldTower

VARIANTS = ("full", "M1", "M2", "Mhalf")


class GeometryError(ValueError):
    pass


@dataclass
class DifferenceSet:
    """Trace-zero exponents in Z_{(q^4-1)/(q-1)}."""

    q: int
    modulus: int
    members: np.ndarray
    member_set: frozenset = field(repr=False, default=None)

    def __post_init__(self):
        if self.member_set is None:
            self.member_set = frozenset(int(x) for x in self.members)

    @property
    def params(self) -> tuple[int, int, int]:
        q = self.q
        return (self.modulus, (q ** 3 - 1) // (q - 1), q + 1)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in self.member_set


@dataclass
class Ovoid:
    q: int
    points: np.ndarray  # (q^2+1, m) coordinate vectors over GF(q)


@dataclass
class MobiusPlane:
    q: int
    variant: str
    points: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]
    poly_csv: str = ""

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def proper_circles(self) -> tuple[tuple[int, ...], ...]:
        """Circles with at least 3 points; smaller images are degenerate."""
        return tuple(c for c in self.circles if len(c) >= 3)

    @property
    def degenerate_count(self) -> int:
        return sum(1 for c in self.circles if len(c) < 3)


@dataclass
class AntiCocircularReport:
    max_intersection: int
    witness: tuple | None
    passed: bool
    circle_counts: tuple[int, int, int]
    elapsed_ms: float


@dataclass
class LemmaResult:
    name: str
    passed: bool
    counterexample: tuple | None = None
    detail: str = ""


def build_difference_set(tower: FieldTower) -> DifferenceSet:
    """Zero positions of the trace LFSR, cross-checked against direct traces.

    The recurrence g_n = -(b_1 g_{n-1} + ... + b_4 g_{n-4}) is seeded with
    g_j = Tr(alpha^j); b_j is the coefficient of x^(4-j) in the tower
    polynomial.
    """
    if tower.m != 4:
        raise GeometryError("difference set requires a degree-4 tower")
    q = tower.q
    v = (q ** 4 - 1) // (q - 1)
    tr = tower.trace_syms()

    add = tower.add_q.tolist()
    mul = tower.mul_q.tolist()
    neg = tower.neg_q.tolist()
    b = [tower.tower_poly[4 - j] for j in range(1, 5)]  # b_1..b_4
    gamma = [int(tr[j]) for j in range(4)]
    for n in range(4, v):
        s = 0
        for j in range(1, 5):
            s = add[s][mul[b[j - 1]][gamma[n - j]]]
        gamma.append(neg[s])
    members = np.array([j for j in range(v) if gamma[j] == 0], np.int64)

    direct = np.nonzero(tr[:v] == 0)[0]
    if not np.array_equal(members, direct):  # pragma: no cover
        raise GeometryError("LFSR and direct trace evaluations disagree")
    return DifferenceSet(q, v, members)


def build_ovoid(tower: FieldTower) -> Ovoid:
    if tower.m != 4:
        raise GeometryError("ovoid requires a degree-4 tower")
    q = tower.q
    pts = np.stack([tower.decompose(i * (q + 1)) for i in range(q * q + 1)])
    return Ovoid(q, pts)


def circles_through_zero(dset: DifferenceSet) -> dict[int, tuple[int, ...]]:
    """C_x = { i < q^2+1 : x + (q+1) i in D } for each x in D."""
    q = dset.q
    n = q * q + 1
    v = dset.modulus
    out = {}
    for x in dset.members:
        x = int(x)
        out[x] = tuple(i for i in range(n) if (x + (q + 1) * i) % v in dset.member_set)
    return out


def build_full_plane(tower: FieldTower) -> MobiusPlane:
    """All circles, developed by translation from the circles through 0."""
    q = tower.q
    n = q * q + 1
    dset = build_difference_set(tower)
    x0 = n * (q + 1) // 2
    seen = set()
    for x, cx in circles_through_zero(dset).items():
        if x == x0:
            continue  # the singleton tangent at 0, not a circle
        for d in range(n):
            seen.add(tuple(sorted((i + d) % n for i in cx)))
    return MobiusPlane(q, "full", tuple(range(n)), tuple(sorted(seen)),
                       tower.poly_csv())


def plane_from_row_zeros(tower: FieldTower) -> MobiusPlane:
    """Independent route: circles as the (q+1)-point zero sets of span rows."""
    from .construct import generator_matrix, span_array

    q = tower.q
    n = q * q + 1
    arr = span_array(generator_matrix(tower, q + 1, n))
    seen = set()
    for r in range(1, arr.shape[0]):
        z = np.nonzero(arr[r] == 0)[0]
        if len(z) == q + 1:
            seen.add(tuple(int(i) for i in z))
    return MobiusPlane(q, "full", tuple(range(n)), tuple(sorted(seen)),
                       tower.poly_csv())


def _half_even(i: int, n: int) -> int:
    # the unique even residue h with 2h = i (mod n); needs i even, n = 2 mod 4
    return i // 2 if i % 4 == 0 else (i + n) // 2


def build_truncated_planes(plane: MobiusPlane) -> tuple[MobiusPlane, MobiusPlane, MobiusPlane]:
    """The three truncated planes (M1, M2, Mhalf) on the even points.

    M1 keeps circle intersections with the evens, M2 applies the even-half
    map, Mhalf doubles mod q^2+1.  Images of size < 3 are retained (they are
    flagged degenerate by the plane object).
    """
    q = plane.q
    if q % 2 == 0:
        raise GeometryError("truncated planes require odd q")
    if plane.variant != "full":
        raise GeometryError("expected the full Mobius plane")
    n = q * q + 1
    evens = tuple(range(0, n, 2))
    c1, c2, ch = set(), set(), set()
    for c in plane.circles:
        ce = [i for i in c if i % 2 == 0]
        c1.add(tuple(ce))
        c2.add(tuple(sorted(_half_even(i, n) for i in ce)))
        ch.add(tuple(sorted((2 * i) % n for i in ce)))
    mk = lambda variant, cs: MobiusPlane(q, variant, evens, tuple(sorted(cs)),  # noqa: E731
                                         plane.poly_csv)
    return mk("M1", c1), mk("M2", c2), mk("Mhalf", ch)


def _pack_bits(circles, point_to_bit, n_bits) -> np.ndarray:
    words = (n_bits + 63) // 64
    out = np.zeros((len(circles), words), np.uint64)
    for r, c in enumerate(circles):
        for i in c:
            b = point_to_bit[i]
            out[r, b >> 6] |= np.uint64(1) << np.uint64(b & 63)
    return out


def check_anti_cocircular(m1: MobiusPlane, m2: MobiusPlane,
                          mhalf: MobiusPlane) -> AntiCocircularReport:
    """Max size of c_h ∩ c_1 ∩ c_2 over all circle choices, one per plane.

    Scans Mhalf x M1 x M2 with pairwise pruning; stops early at the first
    intersection above three.  Degenerate circles take part in intersections
    but are not counted in the per-plane circle counts.
    """
    if not (m1.points == m2.points == mhalf.points):
        raise GeometryError("planes must share one point set")
    point_to_bit = {p: i for i, p in enumerate(m1.points)}
    nb = len(m1.points)
    order = (mhalf, m1, m2)
    packs = [_pack_bits([c for c in p.circles if c], point_to_bit, nb) for p in order]
    keeps = [[c for c in p.circles if c] for p in order]
    t0 = time.perf_counter()
    best, ia, ib, ic = get_kernels().triple_scan(*packs)
    elapsed = (time.perf_counter() - t0) * 1e3
    witness = None
    if ia >= 0:
        witness = (keeps[0][ia], keeps[1][ib], keeps[2][ic])
    return AntiCocircularReport(
        max_intersection=int(best), witness=witness, passed=best <= 3,
        circle_counts=(len(m1.proper_circles), len(m2.proper_circles),
                       len(mhalf.proper_circles)),
        elapsed_ms=elapsed)


def run_lemma_suite(tower: FieldTower) -> list[LemmaResult]:
    """Exhaustive checks of the circle lemmas behind the constructions."""
    q = tower.q
    if tower.m != 4 or q % 2 == 0:
        raise GeometryError("lemma suite requires a degree-4 tower with odd q")
    n = q * q + 1
    h = n // 2
    dset = build_difference_set(tower)
    thru0 = circles_through_zero(dset)
    plane = build_full_plane(tower)
    tr = tower.trace_syms()
    period = tower.period
    results = []

    sols = [x for x in range(n) if tr[((q + 1) * x) % period] == 0]
    results.append(LemmaResult(
        "trace-zero-unique", sols == [h],
        None if sols == [h] else tuple(sols),
        f"solutions of Tr(a^((q+1)x)) = 0 in [0, {n}): {sols}"))

    bad = None
    for x, c in thru0.items():
        s = set(c)
        for i in s:
            if i in (0, h) or (n - i) % n not in s:
                continue
            for j in s:
                if j in (0, h):
                    continue
                if (n - j) % n not in s:
                    bad = (x, i, j)
                    break
            if bad:
                break
        if bad:
            break
    results.append(LemmaResult(
        "mirror-closure", bad is None, bad,
        "0, i, -i, j in a circle forces -j in it (i, j not 0 or half)"))

    bad = None
    for x, c in thru0.items():
        s = set(c)
        if h in s:
            for i in s:
                if (n - i) % n not in s:
                    bad = (x, i)
                    break
        if bad:
            break
    results.append(LemmaResult(
        "antipodal-symmetry", bad is None, bad,
        "a circle through 0 and the half point is symmetric under negation"))

    bad = None
    for x, c in thru0.items():
        s = set(c)
        for i in s:
            if i in (0, h):
                continue
            if (n - i) % n in s and (2 * i) % n in s:
                bad = (x, i)
                break
        if bad:
            break
    results.append(LemmaResult(
        "no-doubling", bad is None, bad,
        "0, i, -i in a circle excludes 2i (i not 0 or half)"))

    bad = None
    for c in plane.circles:
        s = set(c)
        for i in c:
            for j in c:
                if i >= j:
                    continue
                fam = {i, j, (i + h) % n, (j + h) % n}
                if len(fam) == 4 and fam <= s:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad:
            break
    results.append(LemmaResult(
        "no-antipodal-pairs", bad is None, bad,
        "no circle contains i, j and both their half-shifts"))

    bad = None
    for x, c in thru0.items():
        s = set(c)
        for i in s:
            for j in s:
                fam = {0, i, j, (2 * i) % n, (2 * j) % n}
                if len(fam) == 5 and fam <= s:
                    bad = (x, i, j)
                    break
            if bad:
                break
        if bad:
            break
    results.append(LemmaResult(
        "no-double-orbit", bad is None, bad,
        "no circle through 0 contains distinct i, j, 2i, 2j"))

    return results


def dump_plane(plane: MobiusPlane, path) -> None:
    """Write the plane: a MOBIUS header then one sorted circle per line."""
    with open(path, "w") as fh:
        fh.write(f"MOBIUS q={plane.q} variant={plane.variant} poly={plane.poly_csv}\n")
        for c in plane.circles:
            if c:
                fh.write(" ".join(str(i) for i in c) + "\n")
