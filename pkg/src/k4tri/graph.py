"""Bitmask graphs: triangles, cliques, canonical forms and graph6 I/O.

A :class:`Graph` stores one integer per vertex; bit ``u`` of ``adj[v]`` is set
iff ``{u, v}`` is an edge.  Graphs are immutable and hashable, so they can be
used as dictionary keys and passed freely between processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import Graph6ParseError, K4TriError, UnsupportedSizeError

MAX_VERTICES = 64
CANON_MAX_VERTICES = 16


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise UnsupportedSizeError(f"n={self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise K4TriError("adjacency must have exactly n rows")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise K4TriError(f"row {v} has bits beyond n")
            if row >> v & 1:
                raise K4TriError(f"self-loop at {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise K4TriError(f"asymmetric adjacency at {{{u}, {v}}}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise K4TriError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise K4TriError(f"edge {(u, v)} out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def complete_multipartite(cls, sizes: Sequence[int]) -> Graph:
        """Complete multipartite graph; parts are contiguous label blocks."""
        n = sum(sizes)
        full = (1 << n) - 1
        rows = []
        start = 0
        for s in sizes:
            block = ((1 << s) - 1) << start
            rows.extend([full & ~block] * s)
            start += s
        return cls(n, tuple(rows))

    # -- basic queries ----------------------------------------------------

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise K4TriError("perm must be a permutation of range(n)")
        rows = [0] * self.n
        for v, row in enumerate(self.adj):
            pv = perm[v]
            for u in iter_bits(row):
                rows[pv] |= 1 << perm[u]
        return Graph(self.n, tuple(rows))

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = list(self.adj)
        for u, v in edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, tuple(rows))

    def remove_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = list(self.adj)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges}, g6={encode_graph6(self)!r})"


# -- triangles and cliques ------------------------------------------------


def triangle_count(g: Graph) -> int:
    adj = g.adj
    total = 0
    for i in range(g.n):
        for j in iter_bits(adj[i] >> (i + 1) << (i + 1)):
            total += (adj[i] & adj[j] >> (j + 1) << (j + 1)).bit_count()
    return total


def triangle_list(g: Graph) -> list[tuple[int, int, int]]:
    """All triangles as ``(i, j, k)`` with ``i < j < k``, in lexicographic order."""
    adj = g.adj
    out = []
    for i in range(g.n):
        for j in iter_bits(adj[i] >> (i + 1) << (i + 1)):
            for k in iter_bits(adj[i] & adj[j] >> (j + 1) << (j + 1)):
                out.append((i, j, k))
    return out


def iter_cliques(g: Graph, k: int, within: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every k-clique inside the vertex mask ``within``, lexicographically."""
    if within is None:
        within = (1 << g.n) - 1
    adj = g.adj

    def rec(prefix: tuple[int, ...], cand: int) -> Iterator[tuple[int, ...]]:
        need = k - len(prefix)
        if need == 0:
            yield prefix
            return
        if cand.bit_count() < need:
            return
        for v in iter_bits(cand):
            yield from rec(prefix + (v,), cand & adj[v] >> (v + 1) << (v + 1))

    if k <= 0:
        yield ()
        return
    yield from rec((), within)


def has_clique(g: Graph, k: int, within: int | None = None) -> bool:
    return next(iter_cliques(g, k, within), None) is not None


def clique_number(g: Graph, within: int | None = None) -> int:
    if within is None:
        within = (1 << g.n) - 1
    best = 0
    while has_clique(g, best + 1, within):
        best += 1
    return best


def is_kk_free(g: Graph, k: int) -> bool:
    if k < 2:
        raise K4TriError(f"k must be at least 2, got {k}")
    return not has_clique(g, k)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    verts = sorted(set(s))
    for v in verts:
        if not 0 <= v < g.n:
            raise K4TriError(f"vertex {v} not in graph on {g.n} vertices")
    index = {v: i for i, v in enumerate(verts)}
    rows = []
    for v in verts:
        row = 0
        for u in iter_bits(g.adj[v]):
            if u in index:
                row |= 1 << index[u]
        rows.append(row)
    return Graph(len(verts), tuple(rows))


# -- canonical form -------------------------------------------------------


def _refined_cells(g: Graph) -> list[list[int]]:
    """Colour refinement started from degrees; cells in canonical colour order."""
    colors = g.degrees()
    nbrs = [list(iter_bits(row)) for row in g.adj]
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in nbrs[v]))) for v in range(g.n)]
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if len(ranking) == len(set(colors)):
            break
        colors = new
    cells: dict[int, list[int]] = {}
    for v in range(g.n):
        cells.setdefault(colors[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


@lru_cache(maxsize=1 << 16)
def canonical_form(g: Graph) -> bytes:
    """Isomorphism-invariant encoding: equal bytes iff the graphs are isomorphic.

    The encoding is the lexicographically largest upper-triangle adjacency
    string over all vertex orders compatible with the refined degree
    partition.  Exhaustive, so limited to ``CANON_MAX_VERTICES`` vertices.
    """
    n = g.n
    if n > CANON_MAX_VERTICES:
        raise UnsupportedSizeError(f"canonical form supports n <= {CANON_MAX_VERTICES}, got {n}")
    adj = g.adj
    cells = _refined_cells(g)
    cell_at = [i for i, cell in enumerate(cells) for _ in cell]
    placed: list[int] = []
    used = 0
    cols: list[int] = []
    best: list[int] | None = None

    def rec(p: int) -> None:
        nonlocal used, best
        if p == n:
            if best is None or cols > best:
                best = cols.copy()
            return
        tried: list[int] = []
        for v in cells[cell_at[p]]:
            if used >> v & 1:
                continue
            # interchangeable twins give isomorphic subtrees
            if any((adj[u] & ~(1 << v)) == (adj[v] & ~(1 << u)) for u in tried):
                continue
            tried.append(v)
            col = 0
            for u in placed:
                col = col << 1 | (adj[u] >> v & 1)
            cols.append(col)
            if best is None or cols >= best[: p + 1]:
                placed.append(v)
                used |= 1 << v
                rec(p + 1)
                used &= ~(1 << v)
                placed.pop()
            cols.pop()

    rec(0)
    bits = 0
    for p, col in enumerate(best or []):
        bits = bits << p | col
    nbytes = (n * (n - 1) // 2 + 7) // 8
    return bytes([n]) + bits.to_bytes(nbytes, "big")


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    if triangle_count(g) != triangle_count(h):
        return False
    return canonical_form(g) == canonical_form(h)


# -- graph6 ---------------------------------------------------------------


def encode_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    else:
        head = "~" + "".join(chr((n >> s & 63) + 63) for s in (12, 6, 0))
    bits = [g.adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + (b[0] << 5 | b[1] << 4 | b[2] << 3 | b[3] << 2 | b[4] << 1 | b[5]))
        for b in (bits[i : i + 6] for i in range(0, len(bits), 6))
    )
    return head + body


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise Graph6ParseError("empty graph6 string")
    if any(not 63 <= ord(ch) <= 126 for ch in s):
        raise Graph6ParseError(f"invalid character in graph6 string {text!r}")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] != 63:
        n, body = vals[0], vals[1:]
    else:
        if len(vals) < 4 or vals[1] == 63:
            raise Graph6ParseError(f"unsupported or truncated size header in {text!r}")
        n = vals[1] << 12 | vals[2] << 6 | vals[3]
        body = vals[4:]
    if n > MAX_VERTICES:
        raise Graph6ParseError(f"graph6 string has n={n} > {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise Graph6ParseError(f"expected {(nbits + 5) // 6} data bytes for n={n}, got {len(body)}")
    bits = [v >> s & 1 for v in body for s in range(5, -1, -1)]
    if any(bits[nbits:]):
        raise Graph6ParseError("non-zero padding bits")
    rows = [0] * n
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            pos += 1
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, Graph]]:
    """Parse one graph per non-blank line; yields ``(line_number, graph)``."""
    for lineno, line in enumerate(lines, 1):
        if line.strip():
            yield lineno, parse_graph6(line)


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labelled graph on ``n`` vertices (2**C(n,2) of them)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for idx in iter_bits(mask):
            u, v = pairs[idx]
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        yield Graph(n, tuple(rows))


def nonisomorphic_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class on ``n`` vertices.

    Built by adding a vertex to every class on ``n - 1`` vertices in all
    possible ways and keeping one graph per canonical form.
    """
    if n == 0:
        return [Graph.empty(0)]
    classes: dict[bytes, Graph] = {}
    for h in nonisomorphic_graphs(n - 1):
        for nb in range(1 << (n - 1)):
            rows = list(h.adj) + [nb]
            for u in iter_bits(nb):
                rows[u] |= 1 << (n - 1)
            g = Graph(n, tuple(rows))
            classes.setdefault(canonical_form(g), g)
    return [classes[k] for k in sorted(classes)]
