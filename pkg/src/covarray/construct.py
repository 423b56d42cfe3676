"""Generator matrices, span arrays, and the covering-array constructions.

Three builders: the strength-3 projective pair (two spans, one zero row
dropped), the strength-4 half-ovoid stack (three spans over the even ovoid
points, two zero rows dropped), and the recursive full-ovoid array that
doubles the columns using a strength-3 ingredient.  All outputs are
deterministic functions of (q, polynomials, ingredient).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fields import FieldTower, tower_for_q

SPAN_CHUNK = 1 << 16


class ConstructError(ValueError):
    pass


class CAFormatError(ValueError):
    """Malformed covering-array file."""


@dataclass
class GeneratorMatrix:
    """m x c matrix over GF(q); column i holds the coordinates of alpha^(l*i)."""

    tower: FieldTower
    step: int
    entries: np.ndarray  # (m, c) uint8

    @property
    def c(self) -> int:
        return self.entries.shape[1]

    def projectively_distinct(self) -> bool:
        """No zero columns, no two columns GF(q)-proportional."""
        t = self.tower
        pts = {(self.step * i) % t.subfield_step for i in range(self.c)}
        return len(pts) == self.c


def generator_matrix(tower: FieldTower, l: int, c: int) -> GeneratorMatrix:
    max_c = tower.subfield_step
    if not 0 < c <= max_c:
        raise ConstructError(f"column count must be in 1..{max_c}, got {c}")
    cols = [tower.decompose((l * i) % tower.period) for i in range(c)]
    return GeneratorMatrix(tower, l, np.stack(cols, axis=1))


def span_array(g: GeneratorMatrix) -> np.ndarray:
    """All GF(q)-combinations u . G, u enumerated with u_0 most significant.

    Row 0 (u = 0) is the unique all-zero row; the result is a q^m x c symbol
    matrix.
    """
    t = g.tower
    q, m = t.q, t.m
    n_rows = q ** m
    out = np.empty((n_rows, g.c), np.uint8)
    place = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for lo in range(0, n_rows, SPAN_CHUNK):
        hi = min(lo + SPAN_CHUNK, n_rows)
        u = (np.arange(lo, hi, dtype=np.int64)[:, None] // place) % q
        acc = t.mul_q[u[:, 0][:, None], g.entries[0][None, :]]
        for n in range(1, m):
            acc = t.add_q[acc, t.mul_q[u[:, n][:, None], g.entries[n][None, :]]]
        out[lo:hi] = acc
    return out


@dataclass
class Provenance:
    construction: str
    q: int
    poly: str
    ingredient: str = "none"

    def header_line(self) -> str:
        return (f"# provenance: {self.construction} q={self.q} "
                f"poly={self.poly} ingredient={self.ingredient}")


@dataclass
class CoveringArray:
    """N x k symbol matrix with its claimed (N, t, k, v) and provenance."""

    rows: np.ndarray  # (N, k) uint8
    t: int
    v: int
    provenance: Provenance

    @property
    def N(self) -> int:
        return self.rows.shape[0]

    @property
    def k(self) -> int:
        return self.rows.shape[1]

    def summary(self) -> str:
        return f"CA({self.N}; {self.t}, {self.k}, {self.v})"


def build_ca3_projective(tower: FieldTower) -> CoveringArray:
    """Stack the spans for steps 1 and -1; N = 2q^3 - 1, k = q^2 + q + 1."""
    if tower.m != 3:
        raise ConstructError("the projective pair needs a degree-3 tower")
    q = tower.q
    c = q * q + q + 1
    a1 = span_array(generator_matrix(tower, 1, c))
    a2 = span_array(generator_matrix(tower, -1, c))
    rows = np.vstack([a1, a2[1:]])  # second zero row dropped
    return CoveringArray(rows, 3, q,
                         Provenance("ca3", q, tower.poly_csv()))


def half_generators(tower: FieldTower) -> list[GeneratorMatrix]:
    """The three half-ovoid generators, steps (q+1), 2(q+1), 4(q+1)."""
    q = tower.q
    h = (q * q + 1) // 2
    return [generator_matrix(tower, n * (q + 1), h) for n in (1, 2, 4)]


def build_ca4_half(tower: FieldTower) -> CoveringArray:
    """Three stacked spans over half the ovoid; N = 3q^4 - 2, k = (q^2+1)/2.

    Of the three all-zero rows, the first block's is kept and the other two
    dropped (the choice is coverage-neutral).
    """
    q = tower.q
    if tower.m != 4:
        raise ConstructError("the half-ovoid stack needs a degree-4 tower")
    if q % 2 == 0:
        raise ConstructError("q must be an odd prime power")
    g1, g2, g4 = half_generators(tower)
    rows = np.vstack([span_array(g1), span_array(g2)[1:], span_array(g4)[1:]])
    return CoveringArray(rows, 4, q,
                         Provenance("ca4-half", q, tower.poly_csv()))


def default_ingredient(tower: FieldTower) -> CoveringArray:
    """Internal recursion ingredient: the projective pair cut to (q^2+1)/2
    columns, N = 2q^3 - 1."""
    q = tower.q
    return restrict_columns(build_ca3_projective(tower_for_q(q, 3)),
                            (q * q + 1) // 2)


def build_ca4_full(tower: FieldTower, ingredient: CoveringArray | None = None,
                   skip_ingredient_check: bool = False) -> CoveringArray:
    """Recursive array on all q^2+1 ovoid points; N = 3q^4 + N_R (q-2).

    Block rows: the full-ovoid span; [A2 | A2]; [A4 | A4 + 1]; then
    [R | R + e^r] for r = 1..q-2, where e is the canonical primitive element
    of GF(q) (the (q^4-1)/(q-1) power of alpha) and + is entrywise GF(q)
    addition.  The ingredient R must be a verified CA(N_R; 3, (q^2+1)/2, q).
    """
    q = tower.q
    if tower.m != 4:
        raise ConstructError("the recursive construction needs a degree-4 tower")
    if q % 2 == 0:
        raise ConstructError("q must be an odd prime power")
    h = (q * q + 1) // 2
    ing_name = "ca3-restricted"
    if ingredient is None:
        ingredient = default_ingredient(tower)
    else:
        ing_name = ingredient.provenance.ingredient
        if ing_name == "none":
            ing_name = ingredient.provenance.construction
    if ingredient.k != h or ingredient.v != q:
        raise ConstructError(
            f"ingredient must have k={h} columns over v={q} symbols, got "
            f"k={ingredient.k}, v={ingredient.v}; restrict_columns can trim wider arrays")
    if not skip_ingredient_check:
        from .verify import verify_coverage
        rep = verify_coverage(ingredient, 3)
        if not rep.passed:
            raise ConstructError(
                f"ingredient failed strength-3 verification: {rep.summary_line()}")

    a_full = span_array(generator_matrix(tower, q + 1, q * q + 1))
    _, g2, g4 = half_generators(tower)
    a2 = span_array(g2)
    a4 = span_array(g4)
    e = tower.e_symbol()
    blocks = [a_full, np.hstack([a2, a2]),
              np.hstack([a4, tower.add_q[a4, tower.gfq_pow(e, 0)]])]
    r_rows = ingredient.rows
    for r in range(1, q - 1):
        off = tower.gfq_pow(e, r)
        blocks.append(np.hstack([r_rows, tower.add_q[r_rows, off]]))
    rows = np.vstack(blocks)
    return CoveringArray(rows, 4, q,
                         Provenance("ca4-full", q, tower.poly_csv(), ing_name))


def restrict_columns(ca: CoveringArray, count: int) -> CoveringArray:
    """Keep the first ``count`` columns; column deletion preserves strength."""
    if not 0 < count <= ca.k:
        raise ConstructError(f"column count must be in 1..{ca.k}, got {count}")
    if count == ca.k:
        return ca
    return replace(ca, rows=ca.rows[:, :count].copy())


# -- file format ---------------------------------------------------------
#
#   CA N t k v
#   # provenance: <construction> q=<q> poly=<coeffs> ingredient=<name|none>
#   <N lines of k space-separated symbols>

def write_ca(ca: CoveringArray, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"CA {ca.N} {ca.t} {ca.k} {ca.v}\n")
        fh.write(ca.provenance.header_line() + "\n")
        for row in ca.rows.tolist():
            fh.write(" ".join(map(str, row)) + "\n")


def _parse_provenance(line: str) -> Provenance:
    fields = {}
    body = line[1:].strip()
    if not body.startswith("provenance:"):
        raise CAFormatError(f"bad provenance line: {line!r}")
    toks = body[len("provenance:"):].split()
    construction = toks[0] if toks else "unknown"
    for tok in toks[1:]:
        if "=" in tok:
            k, _, val = tok.partition("=")
            fields[k] = val
    return Provenance(construction, int(fields.get("q", 0)),
                      fields.get("poly", ""), fields.get("ingredient", "none"))


def read_ca(path) -> CoveringArray:
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 5 or head[0] != "CA":
            raise CAFormatError(f"{path}: expected header 'CA N t k v'")
        try:
            n, t, k, v = (int(x) for x in head[1:])
        except ValueError as exc:
            raise CAFormatError(f"{path}: non-integer header field") from exc
        pos = fh.tell()
        line = fh.readline()
        if line.startswith("#"):
            prov = _parse_provenance(line)
        else:
            prov = Provenance("unknown", 0, "")
            fh.seek(pos)
        data = fh.read().split()
    if len(data) != n * k:
        raise CAFormatError(f"{path}: expected {n * k} symbols, found {len(data)}")
    try:
        rows = np.array(data, np.int64).reshape(n, k)
    except ValueError as exc:
        raise CAFormatError(f"{path}: non-integer symbol") from exc
    if rows.min() < 0 or rows.max() >= v:
        raise CAFormatError(f"{path}: symbol out of range 0..{v - 1}")
    return CoveringArray(rows.astype(np.uint8), t, v, prov)


def read_rows_only(path, t: int, v: int) -> CoveringArray:
    """Headerless fallback: plain rows, strength and alphabet from flags."""
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CAFormatError(f"{path}: no rows")
    k = len(lines[0])
    if any(len(ln) != k for ln in lines):
        raise CAFormatError(f"{path}: ragged rows")
    try:
        rows = np.array(lines, np.int64)
    except ValueError as exc:
        raise CAFormatError(f"{path}: non-integer symbol") from exc
    if rows.min() < 0 or rows.max() >= v:
        raise CAFormatError(f"{path}: symbol out of range 0..{v - 1}")
    return CoveringArray(rows.astype(np.uint8), t, v, Provenance("unknown", 0, ""))


def rebuild_tower(prov: Provenance, m: int) -> FieldTower:
    """Reconstruct the tower recorded in a provenance header."""
    from .fields import is_prime_power

    pe = is_prime_power(prov.q)
    if pe is None or not prov.poly:
        raise ConstructError(f"provenance does not identify a tower: {prov}")
    poly = [int(c) for c in prov.poly.split(",")]
    return FieldTower.build(pe[0], pe[1], m, tower_poly=poly)
