"""Deterministic one-to-one alignment of reference and predicted annotations.

Among all maximum-cardinality matchings of the equivalence graph, the one
chosen maximizes the total number of overlapping characters, and among
those it has the lexicographically smallest pair sequence when pairs are
ordered by (reference position, prediction position).  Annotations are
positioned by (start, end, fragments, id), so the result never depends on
input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ._kernels import min_cost_assignment


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[str, str], ...]
    unmatched_ref: tuple[str, ...]
    unmatched_pred: tuple[str, ...]

    def __contains__(self, pair) -> bool:
        return pair in self._pair_set

    @property
    def _pair_set(self) -> frozenset:
        cached = self.__dict__.get("_cache")
        if cached is None:
            cached = frozenset(self.pairs)
            object.__setattr__(self, "_cache", cached)
        return cached

    def __len__(self) -> int:
        return len(self.pairs)


def _position(item) -> tuple:
    span = item.span
    return (span.start, span.end, span.fragments, item.id)


def _solve(rows: list[int], cols: list[int], weight: dict[tuple[int, int], int]):
    """Max-weight matching restricted to ``rows`` x ``cols``; returns (value, edges)."""
    if not rows or not cols:
        return 0, []
    transpose = len(rows) > len(cols)
    if transpose:
        rows, cols = cols, rows
    cost = []
    for r in rows:
        line = []
        for c in cols:
            w = weight.get((c, r) if transpose else (r, c))
            line.append(-w if w is not None else 0)
        cost.append(line)
    chosen = min_cost_assignment(cost)
    value, edges = 0, []
    for k, j in enumerate(chosen):
        key = (cols[j], rows[k]) if transpose else (rows[k], cols[j])
        w = weight.get(key)
        if w is not None:
            value += w
            edges.append(key)
    return value, edges


def _align_component(edges: list[tuple[int, int]], overlap: dict[tuple[int, int], int]) -> list[tuple[int, int]]:
    if len(edges) == 1:
        return edges
    big = sum(overlap[e] for e in edges) + 1
    weight = {e: big + overlap[e] for e in edges}
    rows = sorted({r for r, _ in edges})
    cols = sorted({c for _, c in edges})
    best, current = _solve(rows, cols, weight)
    target = len(current)
    current = set(current)

    fixed: list[tuple[int, int]] = []
    used_r: set[int] = set()
    used_c: set[int] = set()
    fixed_value = 0
    for e in sorted(edges):
        if len(fixed) == target:
            break
        r, c = e
        if r in used_r or c in used_c:
            continue
        if e not in current:
            rest_r = [x for x in rows if x not in used_r and x != r]
            rest_c = [x for x in cols if x not in used_c and x != c]
            value, rest = _solve(rest_r, rest_c, weight)
            if fixed_value + weight[e] + value != best:
                continue
            current = set(fixed) | {e} | set(rest)
        fixed.append(e)
        fixed_value += weight[e]
        used_r.add(r)
        used_c.add(c)
    return fixed


def align(refs: Sequence, preds: Sequence, equivalent: Callable[[object, object], bool]) -> Matching:
    """Pair ``refs`` with ``preds`` one-to-one where ``equivalent(ref, pred)``.

    Items need ``id`` and ``span`` attributes.
    """
    refs = sorted(refs, key=_position)
    preds = sorted(preds, key=_position)
    overlap: dict[tuple[int, int], int] = {}
    for i, r in enumerate(refs):
        for j, p in enumerate(preds):
            if equivalent(r, p):
                overlap[(i, j)] = r.span.overlap_size(p.span)

    # connected components of the bipartite graph solve independently
    parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in overlap:
        a, b = find(("r", i)), find(("p", j))
        if a != b:
            parent[a] = b
    components: dict[tuple[str, int], list[tuple[int, int]]] = {}
    for e in sorted(overlap):
        components.setdefault(find(("r", e[0])), []).append(e)

    chosen: list[tuple[int, int]] = []
    for comp in components.values():
        chosen.extend(_align_component(comp, overlap))
    chosen.sort()

    matched_r = {i for i, _ in chosen}
    matched_p = {j for _, j in chosen}
    return Matching(
        pairs=tuple((refs[i].id, preds[j].id) for i, j in chosen),
        unmatched_ref=tuple(r.id for i, r in enumerate(refs) if i not in matched_r),
        unmatched_pred=tuple(p.id for j, p in enumerate(preds) if j not in matched_p),
    )
