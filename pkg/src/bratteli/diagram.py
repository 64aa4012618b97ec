"""Ordered Bratteli diagrams: construction, validation, incidence, telescoping.

A diagram is a finite truncation with vertex levels 0..N (level 0 is the
single root) and edge levels 1..N.  Edges at each level are stored in a
canonical list sorted by range vertex; the position of an edge among the
edges sharing its range vertex is its place in the linear order, so two
edges are comparable exactly when they have the same range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence


class DiagramError(Exception):
    """Base class for all errors raised by this package."""


class MalformedDiagram(DiagramError):
    """Field data is structurally broken (indices out of range etc.)."""


class InvalidDiagram(DiagramError):
    """Diagram is well-formed but violates an ordered-diagram axiom."""


@dataclass(frozen=True)
class Violation:
    kind: str        # "malformed", "range-surjectivity", "source-surjectivity"
    level: int
    detail: str

    def __str__(self):
        return f"[{self.kind}] level {self.level}: {self.detail}"


@dataclass(frozen=True)
class OrderedBratteliDiagram:
    """Immutable ordered Bratteli diagram truncated at num_levels edge levels.

    edges[n-1] holds level-n edges as (source, range) pairs, canonically
    sorted by range with the relative order of same-range edges giving the
    edge order.  group_labels, when present, assigns an integer fiber label
    to every vertex at levels 1..num_levels.
    """

    num_levels: int
    vertex_counts: tuple
    edges: tuple            # tuple over levels 1..N of tuples of (s, r)
    group_labels: Optional[tuple] = None   # tuple over levels 1..N of tuples

    def level_edges(self, n: int) -> tuple:
        if not 1 <= n <= self.num_levels:
            raise DiagramError(f"edge level {n} out of range 1..{self.num_levels}")
        return self.edges[n - 1]

    def label_of(self, level: int, vertex: int) -> Optional[int]:
        if self.group_labels is None or level == 0:
            return None
        return self.group_labels[level - 1][vertex]


def make_diagram(num_levels: int,
                 vertex_counts: Sequence[int],
                 edges: Sequence[Sequence[tuple]],
                 group_labels: Optional[Sequence[Sequence[int]]] = None,
                 ) -> OrderedBratteliDiagram:
    """Build a diagram, canonicalizing edge lists (stable sort by range).

    The relative order of edges sharing a range vertex is preserved, so the
    caller's list position among same-range edges defines the edge order.
    Raises MalformedDiagram for broken field data; axiom violations are left
    to validate_diagram.
    """
    if num_levels < 1:
        raise MalformedDiagram("num_levels must be >= 1")
    vcs = tuple(int(c) for c in vertex_counts)
    if len(vcs) != num_levels + 1:
        raise MalformedDiagram(
            f"vertex_counts must have length {num_levels + 1}, got {len(vcs)}")
    if vcs[0] != 1:
        raise MalformedDiagram("level 0 must contain exactly the root vertex")
    if any(c < 1 for c in vcs):
        raise MalformedDiagram("vertex counts must be positive")
    if len(edges) != num_levels:
        raise MalformedDiagram(
            f"edges must have {num_levels} levels, got {len(edges)}")
    canon = []
    for n, level in enumerate(edges, start=1):
        pairs = []
        for e in level:
            s, r = int(e[0]), int(e[1])
            if not 0 <= s < vcs[n - 1]:
                raise MalformedDiagram(
                    f"level {n}: source {s} out of range 0..{vcs[n - 1] - 1}")
            if not 0 <= r < vcs[n]:
                raise MalformedDiagram(
                    f"level {n}: range {r} out of range 0..{vcs[n] - 1}")
            pairs.append((s, r))
        pairs.sort(key=lambda e: e[1])  # stable: keeps same-range order
        canon.append(tuple(pairs))
    labels = None
    if group_labels is not None:
        if len(group_labels) != num_levels:
            raise MalformedDiagram(
                f"group_labels must cover levels 1..{num_levels}")
        labels = []
        for n, level in enumerate(group_labels, start=1):
            if len(level) != vcs[n]:
                raise MalformedDiagram(
                    f"group_labels at level {n} must have {vcs[n]} entries")
            labels.append(tuple(int(t) for t in level))
        labels = tuple(labels)
    return OrderedBratteliDiagram(num_levels, vcs, tuple(canon), labels)


def validate_diagram(d: OrderedBratteliDiagram) -> list:
    """Return a list of Violation records; empty iff all axioms hold.

    Checks range-surjectivity for every vertex at levels >= 1 and
    source-surjectivity for every vertex at levels 0..N-1.  The root is
    exempt from range-surjectivity (no edges end at level 0).
    """
    report = []
    for n in range(1, d.num_levels + 1):
        level = d.level_edges(n)
        if not level:
            report.append(Violation("malformed", n, "empty edge level"))
            continue
        ranges = {r for _, r in level}
        for v in range(d.vertex_counts[n]):
            if v not in ranges:
                report.append(Violation(
                    "range-surjectivity", n,
                    f"vertex {v} at level {n} has no incoming edge"))
        sources = {s for s, _ in level}
        for v in range(d.vertex_counts[n - 1]):
            if v not in sources:
                report.append(Violation(
                    "source-surjectivity", n - 1,
                    f"vertex {v} at level {n - 1} has no outgoing edge"))
    return report


def check_valid(d: OrderedBratteliDiagram) -> None:
    report = validate_diagram(d)
    if report:
        raise InvalidDiagram("; ".join(str(v) for v in report))


@lru_cache(maxsize=None)
def in_edges(d: OrderedBratteliDiagram, n: int) -> tuple:
    """Per level-n vertex, the ordered tuple of incoming edge indices."""
    table = [[] for _ in range(d.vertex_counts[n])]
    for i, (_, r) in enumerate(d.level_edges(n)):
        table[r].append(i)
    return tuple(tuple(t) for t in table)


@lru_cache(maxsize=None)
def out_edges(d: OrderedBratteliDiagram, n: int) -> tuple:
    """Per level-(n-1) vertex, the tuple of outgoing level-n edge indices."""
    table = [[] for _ in range(d.vertex_counts[n - 1])]
    for i, (s, _) in enumerate(d.level_edges(n)):
        table[s].append(i)
    return tuple(tuple(t) for t in table)


def edge_order_index(d: OrderedBratteliDiagram, n: int, edge: int) -> int:
    """Position of an edge in the linear order on edges sharing its range."""
    _, r = d.level_edges(n)[edge]
    return in_edges(d, n)[r].index(edge)


def min_edges(d: OrderedBratteliDiagram, n: int) -> tuple:
    """Level-n edges minimal in the order (first into each range vertex)."""
    return tuple(t[0] for t in in_edges(d, n))


def max_edges(d: OrderedBratteliDiagram, n: int) -> tuple:
    return tuple(t[-1] for t in in_edges(d, n))


def min_vertices(d: OrderedBratteliDiagram, n: int) -> tuple:
    """Level-n vertices that are sources of minimal level-(n+1) edges."""
    level = d.level_edges(n + 1)
    return tuple(sorted({level[e][0] for e in min_edges(d, n + 1)}))


def max_vertices(d: OrderedBratteliDiagram, n: int) -> tuple:
    level = d.level_edges(n + 1)
    return tuple(sorted({level[e][0] for e in max_edges(d, n + 1)}))


def vertex_ranges(d: OrderedBratteliDiagram, n: int, v: int) -> tuple:
    """R(v): level-(n+1) vertices connected to level-n vertex v."""
    level = d.level_edges(n + 1)
    return tuple(sorted({r for s, r in level if s == v}))


def vertex_sources(d: OrderedBratteliDiagram, n: int, v: int) -> tuple:
    """S(v): level-(n-1) vertices connected to level-n vertex v."""
    level = d.level_edges(n)
    return tuple(sorted({s for s, r in level if r == v}))


def incidence_matrix(d: OrderedBratteliDiagram, n: int) -> list:
    """Edge-count matrix at level n: rows level-n vertices, columns level-(n-1).

    Entry (w, v) is the number of level-n edges from v to w.
    """
    rows, cols = d.vertex_counts[n], d.vertex_counts[n - 1]
    m = [[0] * cols for _ in range(rows)]
    for s, r in d.level_edges(n):
        m[r][s] += 1
    return m


def mat_mul(a: list, b: list) -> list:
    """Exact integer matrix product a @ b."""
    if not b or len(a[0]) != len(b):
        raise DiagramError("matrix dimension mismatch")
    cols = len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
             for j in range(cols)] for i in range(len(a))]


def mat_vec(a: list, v: list) -> list:
    if len(a[0]) != len(v):
        raise DiagramError("matrix/vector dimension mismatch")
    return [sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a))]


@dataclass(frozen=True)
class TelescopeMap:
    """Bijection data produced by telescope().

    cut_points includes the implicit 0; path_tables[m] maps each original
    edge-index path spanning levels cut_points[m]+1..cut_points[m+1] to its
    edge index in the telescoped diagram's level m+1.
    """

    cut_points: tuple
    path_tables: tuple   # tuple of dicts {orig edge tuple: new edge index}

    def new_edge(self, new_level: int, orig_path: tuple) -> int:
        return self.path_tables[new_level - 1][tuple(orig_path)]

    def orig_path(self, new_level: int, new_edge: int) -> tuple:
        table = self.path_tables[new_level - 1]
        for path, idx in table.items():
            if idx == new_edge:
                return path
        raise DiagramError(f"edge {new_edge} missing at level {new_level}")


def _enumerate_paths(d: OrderedBratteliDiagram, lo: int, hi: int):
    """All edge-index paths spanning edge levels lo..hi, with endpoints.

    Yields (start_vertex, end_vertex, path_tuple).
    """
    paths = [(s, r, (i,)) for i, (s, r) in enumerate(d.level_edges(lo))]
    for n in range(lo + 1, hi + 1):
        level = d.level_edges(n)
        nxt = []
        for start, end, path in paths:
            for i in out_edges(d, n)[end]:
                nxt.append((start, level[i][1], path + (i,)))
        paths = nxt
    return paths


def _path_order_key(d: OrderedBratteliDiagram, lo: int, path: tuple) -> tuple:
    # Deepest edge most significant: the induced order on telescoped edges.
    return tuple(edge_order_index(d, lo + j, path[j])
                 for j in reversed(range(len(path))))


def telescope(d: OrderedBratteliDiagram, cuts: Sequence[int]):
    """Collapse levels at the given cut points.

    cuts must be strictly increasing, start at >= 1 and end at num_levels.
    Returns (telescoped diagram, TelescopeMap).  New edges into a vertex are
    ordered by the deepest-edge-first comparison of their constituent paths,
    which makes the successor map commute with the path bijection.
    """
    cuts = tuple(int(c) for c in cuts)
    if not cuts or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise DiagramError("cut points must be strictly increasing")
    if cuts[0] < 1 or cuts[-1] != d.num_levels:
        raise DiagramError(
            f"cut points must lie in 1..{d.num_levels} and end at "
            f"{d.num_levels}")
    bounds = (0,) + cuts
    new_edges = []
    tables = []
    for m in range(len(cuts)):
        lo, hi = bounds[m] + 1, bounds[m + 1]
        paths = _enumerate_paths(d, lo, hi)
        paths.sort(key=lambda p: (p[1], _path_order_key(d, lo, p[2])))
        new_edges.append([(s, r) for s, r, _ in paths])
        tables.append({path: i for i, (_, _, path) in enumerate(paths)})
    labels = None
    if d.group_labels is not None:
        labels = [d.group_labels[c - 1] for c in cuts]
    td = make_diagram(len(cuts), [1] + [d.vertex_counts[c] for c in cuts],
                      new_edges, labels)
    return td, TelescopeMap((0,) + cuts, tuple(tables))


@dataclass(frozen=True)
class PropertyFailure:
    prop: str      # "b", "c" or "d"
    kind: str      # "min" or "max"
    level: int
    vertex: int
    m: Optional[int] = None

    def __str__(self):
        extra = f", m={self.m}" if self.m is not None else ""
        return (f"property ({self.prop}) fails for {self.kind} vertex "
                f"{self.vertex} at level {self.level}{extra}")


def check_fem_properties(d: OrderedBratteliDiagram, m_max: int = 4) -> list:
    """Structural checks satisfied by diagrams arising from tower sequences.

    For every extremal vertex v (source of a minimal, resp. maximal, edge):
      (b) some minimal (maximal) edge leaving v ends at an extremal vertex
          of the same kind;
      (c) every minimal (maximal) edge whose range lies in R(v) starts at v;
      (d) R^m(v) == (R^m . S^m . R^m)(v) for m up to m_max.
    Returns a list of PropertyFailure records, empty when all hold.
    """
    check_valid(d)
    failures = []
    for kind, extremal_edges, extremal_vertices in (
            ("min", min_edges, min_vertices),
            ("max", max_edges, max_vertices)):
        for n in range(d.num_levels):
            vmin_n = extremal_vertices(d, n)
            level_up = d.level_edges(n + 1)
            ext_up = set(extremal_edges(d, n + 1))
            for v in vmin_n:
                # (b): needs an extremal vertex at level n+1, so n+1 < N.
                if n + 1 < d.num_levels:
                    targets = set(extremal_vertices(d, n + 1))
                    ok = any(level_up[e][0] == v and level_up[e][1] in targets
                             for e in ext_up)
                    if not ok:
                        failures.append(PropertyFailure("b", kind, n, v))
                rv = set(vertex_ranges(d, n, v))
                for e in ext_up:
                    s, r = level_up[e]
                    if r in rv and s != v:
                        failures.append(PropertyFailure("c", kind, n, v))
                        break
                for m in range(1, m_max + 1):
                    if n + m > d.num_levels:
                        break
                    rm = _iterate_r(d, n, {v}, m)
                    sm = _iterate_s(d, n + m, rm, m)
                    rsr = _iterate_r(d, n, sm, m)
                    if rm != rsr:
                        failures.append(PropertyFailure("d", kind, n, v, m))
    return failures


def _iterate_r(d, n, vs, m):
    cur = set(vs)
    for i in range(m):
        cur = {r for s, r in d.level_edges(n + i + 1) if s in cur}
    return cur


def _iterate_s(d, n, vs, m):
    cur = set(vs)
    for i in range(m):
        cur = {s for s, r in d.level_edges(n - i) if r in cur}
    return cur


# ---------------------------------------------------------------------------
# JSON interchange and DOT export

_DIAGRAM_KEYS = {"num_levels", "vertex_counts", "group_labels", "edges"}


def diagram_to_json(d: OrderedBratteliDiagram) -> dict:
    return {
        "num_levels": d.num_levels,
        "vertex_counts": list(d.vertex_counts),
        "group_labels": (None if d.group_labels is None
                         else [list(l) for l in d.group_labels]),
        "edges": [[{"s": s, "r": r} for s, r in level] for level in d.edges],
    }


def diagram_from_json(obj: dict) -> OrderedBratteliDiagram:
    if not isinstance(obj, dict):
        raise MalformedDiagram("diagram JSON must be an object")
    unknown = set(obj) - _DIAGRAM_KEYS
    if unknown:
        raise MalformedDiagram(f"unknown keys: {sorted(unknown)}")
    missing = _DIAGRAM_KEYS - {"group_labels"} - set(obj)
    if missing:
        raise MalformedDiagram(f"missing keys: {sorted(missing)}")
    edges = []
    for level in obj["edges"]:
        pairs = []
        for e in level:
            if set(e) != {"s", "r"}:
                raise MalformedDiagram(f"edge record keys must be s,r: {e}")
            pairs.append((e["s"], e["r"]))
        edges.append(pairs)
    return make_diagram(obj["num_levels"], obj["vertex_counts"], edges,
                        obj.get("group_labels"))


def load_diagram(path: str) -> OrderedBratteliDiagram:
    with open(path) as f:
        return diagram_from_json(json.load(f))


def save_diagram(d: OrderedBratteliDiagram, path: str) -> None:
    with open(path, "w") as f:
        json.dump(diagram_to_json(d), f, indent=2)
        f.write("\n")


def diagram_to_dot(d: OrderedBratteliDiagram) -> str:
    """Plain graphviz text for the leveled multigraph."""
    lines = ["digraph bratteli {", "  rankdir=TB;"]
    for n in range(d.num_levels + 1):
        for v in range(d.vertex_counts[n]):
            label = f"{n},{v}"
            t = d.label_of(n, v)
            if t is not None:
                label += f" (t={t})"
            lines.append(f'  "v{n}_{v}" [label="{label}"];')
    for n in range(1, d.num_levels + 1):
        for i, (s, r) in enumerate(d.level_edges(n)):
            pos = edge_order_index(d, n, i)
            lines.append(f'  "v{n - 1}_{s}" -> "v{n}_{r}" [label="{pos}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
