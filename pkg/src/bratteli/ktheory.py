"""K-theoretic invariants: the ordered limit group presented by incidence
matrices, the circle-count invariant from stabilized minimal paths, and an
exact Smith-normal-form oracle for finite permutation systems.

All arithmetic is over Python integers, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .diagram import (DiagramError, OrderedBratteliDiagram, check_valid,
                      incidence_matrix, mat_mul, mat_vec)
from .paths import extremal_paths


# ---------------------------------------------------------------------------
# Exact integer linear algebra


@dataclass
class SNFResult:
    diagonal: List[int]          # elementary divisors d1 | d2 | ..., then 0s
    left: List[List[int]]        # U with U A V = diag
    right: List[List[int]]       # V

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(a: List[List[int]]) -> SNFResult:
    """U A V = diag(d1,...,dr,0,...) with di | d(i+1) and U, V unimodular.

    Elimination pivots on the minimum-absolute-value nonzero entry of the
    working submatrix, which keeps intermediate entries small.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):     # row dst += c * row src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(m, n):
        # Locate the smallest nonzero entry in the submatrix.
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0 and (pivot is None or
                                     abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if d[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, m):
            if d[i][t] % d[t][t] != 0:
                dirty = True
            add_row(t, i, -(d[i][t] // d[t][t]))
        for j in range(t + 1, n):
            if d[t][j] % d[t][t] != 0:
                dirty = True
            add_col(t, j, -(d[t][j] // d[t][t]))
        if dirty or any(d[i][t] for i in range(t + 1, m)) or \
                any(d[t][j] for j in range(t + 1, n)):
            continue  # remainders were introduced; redo this pivot
        # Enforce divisibility of later entries by folding offenders in.
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1
    diag = [d[i][i] for i in range(min(m, n))]
    return SNFResult(diag, u, v)


def _det(a):
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def verify_snf(a, res: SNFResult) -> bool:
    m, n = len(a), len(a[0])
    prod = mat_mul(mat_mul(res.left, a), res.right)
    for i in range(m):
        for j in range(n):
            expect = res.diagonal[i] if i == j and i < len(res.diagonal) else 0
            if prod[i][j] != expect:
                return False
    for i in range(len(res.diagonal) - 1):
        d1, d2 = res.diagonal[i], res.diagonal[i + 1]
        if d1 == 0 and d2 != 0:
            return False
        if d1 != 0 and d2 % d1 != 0:
            return False
    return abs(_det(res.left)) == 1 and abs(_det(res.right)) == 1


# ---------------------------------------------------------------------------
# Dimension-group presentation


@dataclass(frozen=True)
class DimensionGroupPresentation:
    """Sequence of free groups Z^sizes[i] joined by edge-count matrices.

    maps[i] sends level i+1 to level i+2 (1-based levels; level 1 is the
    first entry of sizes).  unit is the tower-height vector at level 1; an
    element is positive when some push-forward is entrywise non-negative.
    """

    sizes: tuple
    maps: tuple                  # tuple of matrices (tuples of tuples)
    unit: tuple

    @property
    def num_levels(self):
        return len(self.sizes)

    def push(self, level: int, vector, to_level: int):
        """Push a level-`level` vector forward to `to_level`."""
        if not 1 <= level <= to_level <= self.num_levels:
            raise DiagramError(
                f"cannot push level {level} to {to_level}")
        v = list(vector)
        if len(v) != self.sizes[level - 1]:
            raise DiagramError("vector length does not match level size")
        for i in range(level - 1, to_level - 1):
            v = mat_vec([list(r) for r in self.maps[i]], v)
        return v

    def heights(self, level: int):
        """Push-forward of the order unit to the given level."""
        return self.push(1, list(self.unit), level)


@dataclass(frozen=True)
class DimGroupElement:
    level: int
    vector: tuple


def k0_presentation(d: OrderedBratteliDiagram,
                    heights=None) -> DimensionGroupPresentation:
    """Present the ordered K0 group of the diagram's transformation.

    maps are the incidence matrices from level 2 on; the unit is the given
    level-1 height vector (tower sizes, default: root edge counts).
    """
    check_valid(d)
    if heights is None:
        heights = natural_heights(d)
    hs = tuple(int(h) for h in heights)
    if len(hs) != d.vertex_counts[1]:
        raise DiagramError(
            f"heights must have {d.vertex_counts[1]} entries, got {len(hs)}")
    if any(h < 1 for h in hs):
        raise DiagramError("heights must be strictly positive")
    maps = tuple(tuple(tuple(row) for row in incidence_matrix(d, n))
                 for n in range(2, d.num_levels + 1))
    return DimensionGroupPresentation(tuple(d.vertex_counts[1:]), maps, hs)


def natural_heights(d: OrderedBratteliDiagram):
    """Level-1 heights induced by the root edges (each root edge one floor)."""
    m1 = incidence_matrix(d, 1)
    return [row[0] for row in m1]


def _injective(matrix) -> bool:
    a = [list(r) for r in matrix]
    return smith_normal_form(a).rank == len(a[0])


def element_equal(g1: DimGroupElement, g2: DimGroupElement,
                  pres: DimensionGroupPresentation,
                  depth_budget: int = 16) -> str:
    """Budgeted equality in the limit: 'equal', 'not_equal' or 'unknown'.

    Pushes the difference forward; a nonzero difference plus injectivity of
    every remaining map certifies inequality.
    """
    lo, hi = sorted((g1.level, g2.level))
    top = min(pres.num_levels, hi + max(0, depth_budget))
    v1 = pres.push(g1.level, list(g1.vector), hi)
    v2 = pres.push(g2.level, list(g2.vector), hi)
    diff = [a - b for a, b in zip(v1, v2)]
    level = hi
    while True:
        if all(x == 0 for x in diff):
            return "equal"
        if level == top:
            break
        diff = pres.push(level, diff, level + 1)
        level += 1
    if all(_injective(pres.maps[i]) for i in range(hi - 1, pres.num_levels - 1)):
        return "not_equal"
    return "unknown"


def _stationary_matrix(pres: DimensionGroupPresentation):
    if not pres.maps:
        return None
    first = pres.maps[0]
    if all(m == first for m in pres.maps):
        return [list(r) for r in first]
    return None


def _primitive(m) -> bool:
    # Some power has all entries strictly positive.
    n = len(m)
    p = [row[:] for row in m]
    for _ in range(n * n):
        if all(all(x > 0 for x in row) for row in p):
            return True
        p = mat_mul(p, m)
    return False


def _perron_left(m):
    import numpy as np
    arr = np.array(m, dtype=float)
    vals, vecs = np.linalg.eig(arr.T)
    i = int(np.argmax(vals.real))
    vec = vecs[:, i].real
    if vec.sum() < 0:
        vec = -vec
    return vec


def element_positive(g: DimGroupElement, pres: DimensionGroupPresentation,
                     depth_budget: int = 16) -> str:
    """'positive', 'not_positive' or 'unknown'.

    Positivity is certified by an entrywise non-negative push-forward.
    Negative certificates exist only for stationary presentations with a
    primitive matrix, where the sign of the Perron pairing is eventual.
    """
    top = min(pres.num_levels, g.level + max(0, depth_budget))
    v = list(g.vector)
    level = g.level
    while True:
        if all(x >= 0 for x in v):
            return "positive"
        if level == top:
            break
        v = pres.push(level, v, level + 1)
        level += 1
    m = _stationary_matrix(pres)
    if m is not None and len(m) == len(m[0]) and _primitive(m):
        vec = _perron_left(m)
        dot = sum(float(x) * float(w) for x, w in zip(g.vector, vec))
        scale = max(abs(w) for w in vec) * max(
            1.0, max(abs(float(x)) for x in g.vector))
        if dot < -1e-9 * scale:
            return "not_positive"
    return "unknown"


def k1_rank(d: OrderedBratteliDiagram, depth: Optional[int] = None) -> dict:
    """Rank of the circle-valued invariant: stabilized minimal path count.

    The result is certified only when the minimal path count has stabilized
    by the requested depth.
    """
    if depth is None:
        depth = d.num_levels
    depth = min(depth, d.num_levels)
    mins = extremal_paths(d, depth, "min")
    return {"rank": len(mins.paths), "certified": mins.stabilized}


# ---------------------------------------------------------------------------
# Finite permutation systems and the exact-sequence oracle


@dataclass(frozen=True)
class FinitePermutationSystem:
    n_points: int
    permutation: tuple
    fiber_of: tuple


def make_permutation_system(perm, fiber) -> FinitePermutationSystem:
    perm = tuple(int(p) for p in perm)
    fiber = tuple(int(f) for f in fiber)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise DiagramError("permutation must be a bijection on 0..n-1")
    if len(fiber) != n:
        raise DiagramError("fiber_of must assign a label to every point")
    for i in range(n):
        if fiber[perm[i]] != fiber[i]:
            raise DiagramError(
                f"fiber label changes along the permutation at point {i}")
    # Each fiber must be a single cycle.
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        cycle = {i}
        j = perm[i]
        while j != i:
            cycle.add(j)
            j = perm[j]
        seen |= cycle
        members = {k for k in range(n) if fiber[k] == fiber[i]}
        if cycle != members:
            raise DiagramError(
                f"fiber {fiber[i]} is not a single cycle")
    return FinitePermutationSystem(n, perm, fiber)


def k_oracle_finite_system(s: FinitePermutationSystem) -> dict:
    """K-groups of the finite system via the six-term exact sequence:
    cokernel and kernel of (I - P^T) on Z^n, computed with exact SNF.

    unit_image is the sorted list of fiber totals of the all-ones vector,
    i.e. its evaluation against the canonical cycle-sum functionals that
    span the kernel of (I - P).
    """
    n = s.n_points
    p = [[0] * n for _ in range(n)]
    for i, j in enumerate(s.permutation):
        p[j][i] = 1   # P e_i = e_{perm(i)}
    a = [[(1 if i == j else 0) - p[j][i] for j in range(n)]
         for i in range(n)]   # I - P^T
    res = smith_normal_form(a)
    if not verify_snf(a, res):
        raise DiagramError("Smith normal form verification failed")
    torsion = [d for d in res.diagonal if d > 1]
    k0_rank = n - res.rank
    # kernel rank of I - P^T equals n - rank as well (square matrix).
    k1 = n - res.rank
    fibers = sorted(set(s.fiber_of))
    unit = sorted(sum(1 for f in s.fiber_of if f == z) for z in fibers)
    return {"k0_rank": k0_rank, "k0_torsion": torsion,
            "k1_rank": k1, "unit_image": unit}


_SYSTEM_KEYS = {"n", "perm", "fiber"}


def permutation_system_to_json(s: FinitePermutationSystem) -> dict:
    return {"n": s.n_points, "perm": list(s.permutation),
            "fiber": list(s.fiber_of)}


def permutation_system_from_json(obj: dict) -> FinitePermutationSystem:
    if not isinstance(obj, dict) or set(obj) != _SYSTEM_KEYS:
        raise DiagramError(
            "permutation system JSON must have exactly keys n, perm, fiber")
    s = make_permutation_system(obj["perm"], obj["fiber"])
    if s.n_points != int(obj["n"]):
        raise DiagramError(
            f"declared n = {obj['n']} but perm has {s.n_points} points")
    return s
