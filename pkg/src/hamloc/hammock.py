"""Hammocks and width-bounded hammock localization.

A hammock is a commuting grid between two shared end objects: columns
are direction-homogeneous zigzag steps (backward steps and all vertical
maps are weak equivalences), rows are zigzag paths, and every square
and end triangle commutes.  Reduced hammocks (no all-identity column,
adjacent columns alternate) are the canonical forms; the k-simplices of
a mapping space are the reduced hammocks of height k.

Width is the one genuine approximation: enumeration is exhaustive up to
``w_max`` columns, faces and reduction only shrink width, and a
stabilization verdict (component partitions agree at w_max-1 and w_max)
is carried on every result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CompositionUnavailable, ConsistencyError, InputError
from .fincat import FiniteCategory
from .relcat import RelativeCategory
from .simplicial import BisimplicialSet, Partition, TruncatedSimplicialSet, diagonal
from . import scat as scat_mod


class Hammock:
    """Immutable hammock data; equality and hashing go through ``key``."""

    __slots__ = ("source", "sink", "directions", "rows", "verticals", "key", "name", "_hash")

    def __init__(self, source, sink, directions, rows, verticals):
        self.source = source
        self.sink = sink
        self.directions = tuple(directions)
        self.rows = tuple(tuple(r) for r in rows)
        self.verticals = tuple(tuple(v) for v in verticals)
        if not self.rows:
            raise InputError("a hammock has at least one row")
        if len(self.verticals) != len(self.rows) - 1:
            raise InputError("need one vertical layer between consecutive rows")
        width = len(self.directions)
        for row in self.rows:
            if len(row) != width:
                raise InputError("row width mismatch")
        for layer in self.verticals:
            if len(layer) != max(width - 1, 0):
                raise InputError("vertical layer width mismatch")
        self.key = (self.source, self.sink, self.directions, self.rows, self.verticals)
        self.name = repr((self.directions, self.rows, self.verticals))
        self._hash = hash(self.key)

    @property
    def width(self):
        return len(self.directions)

    @property
    def height(self):
        return len(self.rows) - 1

    def __eq__(self, other):
        return isinstance(other, Hammock) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Hammock({self.source}->{self.sink}, w={self.width}, h={self.height})"


def width_zero(x, height=0) -> Hammock:
    return Hammock(x, x, (), ((),) * (height + 1), ((),) * height)


def row_vertices(c: FiniteCategory, source, directions, row):
    """Vertex objects 0..width of one row; InputError if it typechecks badly."""
    vertices = [source]
    for d, m in zip(directions, row):
        at = vertices[-1]
        if d == "f":
            if c.dom[m] != at:
                raise InputError(f"forward entry {m} does not start at {at}")
            vertices.append(c.cod[m])
        else:
            if c.cod[m] != at:
                raise InputError(f"backward entry {m} does not end at {at}")
            vertices.append(c.dom[m])
    return tuple(vertices)


def validate_hammock(r: RelativeCategory, h: Hammock) -> list[str]:
    c = r.cat
    report = []
    if any(d not in ("f", "b") for d in h.directions):
        return [f"bad direction tuple {h.directions}"]
    grids = []
    for idx, row in enumerate(h.rows):
        try:
            vs = row_vertices(c, h.source, h.directions, row)
        except InputError as exc:
            report.append(f"row {idx}: {exc}")
            continue
        if vs[-1] != h.sink:
            report.append(f"row {idx}: ends at {vs[-1]}, not {h.sink}")
            continue
        grids.append(vs)
    if report or len(grids) != len(h.rows):
        return report
    for idx, row in enumerate(h.rows):
        for col, (d, m) in enumerate(zip(h.directions, row)):
            if d == "b" and m not in r.weq:
                report.append(f"row {idx} column {col}: backward entry {m} not a weq")
    width = h.width
    for layer_idx, layer in enumerate(h.verticals):
        upper, lower = grids[layer_idx], grids[layer_idx + 1]
        for j, v in enumerate(layer, start=1):
            if v not in r.weq:
                report.append(f"layer {layer_idx} vertex {j}: vertical {v} not a weq")
            elif c.dom[v] != upper[j] or c.cod[v] != lower[j]:
                report.append(f"layer {layer_idx} vertex {j}: vertical {v} mistyped")
    if report:
        return report

    def vert(layer, j):
        if j == 0:
            return c.identity[h.source]
        if j == width:
            return c.identity[h.sink]
        return h.verticals[layer][j - 1]

    for layer in range(len(h.verticals)):
        up, down = h.rows[layer], h.rows[layer + 1]
        for col in range(width):
            if h.directions[col] == "f":
                lhs = c.compose(vert(layer, col + 1), up[col])
                rhs = c.compose(down[col], vert(layer, col))
            else:
                lhs = c.compose(vert(layer, col), up[col])
                rhs = c.compose(down[col], vert(layer, col + 1))
            if lhs != rhs:
                report.append(f"square at layer {layer}, column {col} does not commute")
    return report


def _delete_column(c: FiniteCategory, h: Hammock, col) -> Hammock:
    width = h.width
    directions = h.directions[:col] + h.directions[col + 1:]
    rows = tuple(row[:col] + row[col + 1:] for row in h.rows)
    if width == 1:
        verticals = tuple(() for _ in h.verticals)
    elif col == 0:
        for layer in h.verticals:
            if not c.is_identity(layer[0]):
                raise ConsistencyError("boundary identity column with non-identity vertical")
        verticals = tuple(layer[1:] for layer in h.verticals)
    elif col == width - 1:
        for layer in h.verticals:
            if not c.is_identity(layer[-1]):
                raise ConsistencyError("boundary identity column with non-identity vertical")
        verticals = tuple(layer[:-1] for layer in h.verticals)
    else:
        for layer in h.verticals:
            if layer[col - 1] != layer[col]:
                raise ConsistencyError("identity column flanked by unequal verticals")
        verticals = tuple(layer[:col] + layer[col + 1:] for layer in h.verticals)
    source = h.source
    if width == 1:
        # the single remaining vertex line collapses onto the shared ends
        return Hammock(source, source, directions, rows, verticals)
    return Hammock(source, h.sink, directions, rows, verticals)


def _merge_columns(c: FiniteCategory, h: Hammock, col) -> Hammock:
    d = h.directions[col]
    directions = h.directions[:col] + (d,) + h.directions[col + 2:]
    rows = []
    for row in h.rows:
        if d == "f":
            merged = c.compose(row[col + 1], row[col])
        else:
            merged = c.compose(row[col], row[col + 1])
        rows.append(row[:col] + (merged,) + row[col + 2:])
    verticals = tuple(layer[:col] + layer[col + 1:] for layer in h.verticals)
    return Hammock(h.source, h.sink, directions, rows, verticals)


def reduce_hammock(r: RelativeCategory, h: Hammock, strategy: str = "leftmost") -> Hammock:
    """Normal form: delete all-identity columns and merge equal-direction
    neighbours until neither applies.  Move order is a strategy knob so
    confluence can be tested; the normal form does not depend on it."""
    c = r.cat
    if strategy not in ("leftmost", "rightmost"):
        raise InputError("strategy must be leftmost or rightmost")
    current = h
    while True:
        width = current.width
        moves = []
        for col in range(width):
            if all(c.is_identity(row[col]) for row in current.rows):
                moves.append((col, 0, "del"))
            if col + 1 < width and current.directions[col] == current.directions[col + 1]:
                moves.append((col, 1, "merge"))
        if not moves:
            return current
        col, _, kind = min(moves) if strategy == "leftmost" else max(moves)
        if kind == "del":
            current = _delete_column(c, current, col)
        else:
            current = _merge_columns(c, current, col)


def compose_hammocks(r: RelativeCategory, h2: Hammock, h1: Hammock) -> Hammock:
    """Widthwise concatenation (h1 then h2) followed by reduction."""
    if h1.sink != h2.source:
        raise InputError(f"hammocks not composable: {h1.sink} vs {h2.source}")
    if h1.height != h2.height:
        raise InputError("hammocks must have equal heights")
    if h1.width == 0:
        return reduce_hammock(r, h2)
    if h2.width == 0:
        return reduce_hammock(r, h1)
    junction = r.cat.identity[h1.sink]
    rows = tuple(a + b for a, b in zip(h1.rows, h2.rows))
    verticals = tuple(
        a + (junction,) + b for a, b in zip(h1.verticals, h2.verticals)
    )
    raw = Hammock(h1.source, h2.sink, h1.directions + h2.directions, rows, verticals)
    return reduce_hammock(r, raw)


def embed_morphism(r: RelativeCategory, m, height: int = 0) -> Hammock:
    """The width-<=1 forward hammock on a morphism, degenerately tall."""
    if r.cat.is_identity(m):
        return width_zero(r.cat.dom[m], height)
    return Hammock(
        r.cat.dom[m], r.cat.cod[m], ("f",),
        ((m,),) * (height + 1), ((),) * height,
    )


# --- enumeration -------------------------------------------------------------


class _Context:
    """Per-relative-category lookup tables for hammock enumeration."""

    def __init__(self, r: RelativeCategory):
        c = r.cat
        self.rc = r
        self.cat = c
        self.weq = set(r.weq)
        self.from_any = {x: tuple(c.from_object(x)) for x in c.objects}
        self.weq_into = {
            x: tuple(m for m in c.to_object(x) if m in r.weq) for x in c.objects
        }
        self.weq_from = {
            x: tuple(m for m in c.from_object(x) if m in r.weq) for x in c.objects
        }
        self.fwd_adj = {x: {c.cod[m] for m in self.from_any[x]} for x in c.objects}
        self.weq_src_adj = {x: {c.dom[m] for m in self.weq_into[x]} for x in c.objects}
        table = c.table
        right = {}
        for (g, f), h in table.items():
            right.setdefault((f, h), []).append(g)
        self.right_factor = {k: tuple(v) for k, v in right.items()}

    def paths(self, x, y, directions):
        """All rows (identity entries allowed) from x to y along the
        direction pattern."""
        width = len(directions)
        if width == 0:
            return [()] if x == y else []
        feasible = [set() for _ in range(width + 1)]
        feasible[width] = {y}
        for col in range(width - 1, -1, -1):
            if directions[col] == "f":
                feasible[col] = {
                    u for u in self.cat.objects if self.fwd_adj[u] & feasible[col + 1]
                }
            else:
                feasible[col] = {
                    u for u in self.cat.objects if self.weq_src_adj[u] & feasible[col + 1]
                }
        if x not in feasible[0]:
            return []
        cat = self.cat
        out = []

        def walk(col, at, row):
            if col == width:
                if at == y:
                    out.append(row)
                return
            if directions[col] == "f":
                for m in self.from_any[at]:
                    nxt = cat.cod[m]
                    if nxt in feasible[col + 1]:
                        walk(col + 1, nxt, row + (m,))
            else:
                for m in self.weq_into[at]:
                    nxt = cat.dom[m]
                    if nxt in feasible[col + 1]:
                        walk(col + 1, nxt, row + (m,))

        walk(0, x, ())
        return out

    def extensions(self, directions, row, vertices):
        """All (interior verticals, next row) pairs below ``row``."""
        width = len(directions)
        if width == 0:
            yield (), ()
            return
        cat = self.cat
        table = cat.table
        right = self.right_factor
        weq = self.weq
        id_end = cat.identity[vertices[width]]

        def rec(col, vprev, vacc, racc):
            if col == width:
                yield vacc, racc
                return
            if col + 1 == width:
                candidates = (id_end,)
            else:
                candidates = self.weq_from[vertices[col + 1]]
            h = row[col]
            forward = directions[col] == "f"
            for vnext in candidates:
                if forward:
                    target = table.get((vnext, h))
                    sols = right.get((vprev, target), ()) if target is not None else ()
                else:
                    target = table.get((vprev, h))
                    sols = tuple(
                        s for s in right.get((vnext, target), ()) if s in weq
                    ) if target is not None else ()
                if not sols:
                    continue
                vacc2 = vacc if col + 1 == width else vacc + (vnext,)
                for h2 in sols:
                    yield from rec(col + 1, vnext, vacc2, racc + (h2,))

        yield from rec(0, cat.identity[vertices[0]], (), ())

    def extension_rows(self, directions, row, vertices):
        """Distinct next rows below ``row`` (vertical witnesses dropped)."""
        width = len(directions)
        cat = self.cat
        table_get = cat.table.get
        right_get = self.right_factor.get
        weq = self.weq
        weq_from = self.weq_from
        out = set()
        row_local = row
        dirs_local = directions

        def rec(col, vprev, racc):
            if col == width:
                out.add(racc)
                return
            if col + 1 == width:
                candidates = (cat.identity[vertices[width]],)
            else:
                candidates = weq_from[vertices[col + 1]]
            h = row_local[col]
            forward = dirs_local[col] == "f"
            for vnext in candidates:
                if forward:
                    target = table_get((vnext, h))
                    if target is None:
                        continue
                    sols = right_get((vprev, target), ())
                else:
                    target = table_get((vprev, h))
                    if target is None:
                        continue
                    sols = [s for s in right_get((vnext, target), ()) if s in weq]
                for h2 in sols:
                    rec(col + 1, vnext, racc + (h2,))

        rec(0, cat.identity[vertices[0]], ())
        return out


def _alternating(width, start):
    return tuple(("f" if (start + i) % 2 == 0 else "b") for i in range(width))


def _patterns(w_max):
    pats = [()]
    for w in range(1, w_max + 1):
        pats.append(_alternating(w, 0))
        pats.append(_alternating(w, 1))
    return pats


def _is_reduced_grid(cat, rows, width):
    for col in range(width):
        if all(cat.is_identity(row[col]) for row in rows):
            return False
    return True


@dataclass
class MappingSpace:
    """Reduced hammocks from x to y as a truncated simplicial set.

    ``verdict`` is "stable" when the component partition is unchanged
    between width bounds w_max-1 and w_max, else "bound_limited".  In
    "pi0" detail mode only the vertices and their partition are kept.
    """

    x: str
    y: str
    truncation: int
    w_max: int
    verdict: str
    vertices: tuple
    partition: Partition
    sset: TruncatedSimplicialSet | None
    by_name: dict = field(repr=False)

    @property
    def stable(self):
        return self.verdict == "stable"


def _stability(partition, sub_names, sub_pairs):
    """Compare the partition against the one width bound lower."""
    sub_partition = Partition.from_pairs(sub_names, sub_pairs)
    full_sub_ok = partition.restricted_equals(sub_partition)
    sub_set = set(sub_names)
    coverage = all(cls & sub_set for cls in partition.classes)
    return "stable" if (full_sub_ok and coverage) else "bound_limited"


def mapping_space(r: RelativeCategory, x, y, truncation: int, w_max: int,
                  detail: str = "full") -> MappingSpace:
    """Exhaustive reduced-hammock enumeration with bound accounting."""
    if truncation < 1:
        raise InputError("truncation must be >= 1")
    if w_max < 1:
        raise InputError("width bound must be >= 1")
    if detail not in ("full", "pi0"):
        raise InputError("detail must be full or pi0")
    ctx = _Context(r)
    return _mapping_space(ctx, x, y, truncation, w_max, detail)


def _mapping_space(ctx: _Context, x, y, truncation, w_max, detail) -> MappingSpace:
    cat = ctx.cat
    vertices = []
    simplices = [dict() for _ in range(truncation + 1)] if detail == "full" else None

    def note_vertex(h):
        vertices.append(h)
        if detail == "full":
            simplices[0][h.name] = h

    def note_simplex(level, h):
        simplices[level][h.name] = h

    edge_pairs = []
    sub_edge_pairs = []
    for pattern in _patterns(w_max):
        width = len(pattern)
        if width == 0 and x != y:
            continue
        rows0 = ctx.paths(x, y, pattern)
        for row in rows0:
            if width == 0 or all(not cat.is_identity(m) for m in row):
                note_vertex(Hammock(x, y if width else x, pattern, (row,), ()))

        if detail == "pi0":
            _pi0_edges(ctx, x, y, pattern, rows0, edge_pairs, sub_edge_pairs, w_max)
        else:
            for row in rows0:
                vs = row_vertices(cat, x, pattern, row) if width else (x,)
                _grow(ctx, x, y, pattern, [row], [vs], [], truncation, note_simplex)

    vertices.sort(key=lambda h: (h.width, h.name))
    vertex_names = [h.name for h in vertices]
    sub_names = [h.name for h in vertices if h.width <= w_max - 1]

    if detail == "pi0":
        by_name = {h.name: h for h in vertices}
        partition = Partition.from_pairs(vertex_names, edge_pairs)
        verdict = _stability(partition, sub_names, sub_edge_pairs)
        return MappingSpace(x, y, truncation, w_max, verdict,
                            tuple(vertices), partition, None, by_name)

    # Keep only simplices all of whose iterated faces are representable:
    # over a partially represented ambient category a face can need a
    # composite outside the width bound, and such simplices cannot be
    # carried in the truncated data.
    kept = [dict(simplices[0])]
    face_cache = {}
    pruned = False
    for k in range(1, truncation + 1):
        level_kept = {}
        for name, h in simplices[k].items():
            images = []
            try:
                for i in range(k + 1):
                    images.append(_face(ctx, h, i))
            except CompositionUnavailable:
                pruned = True
                continue
            if all(img.name in kept[k - 1] for img in images):
                level_kept[name] = h
                for i, img in enumerate(images):
                    face_cache[(k, name, i)] = img.name
            else:
                pruned = True
        kept.append(level_kept)

    levels = [
        tuple(sorted(kept[k], key=lambda n: (kept[k][n].width, n)))
        for k in range(truncation + 1)
    ]
    degeneracies = {}
    for k in range(truncation):
        for name, h in kept[k].items():
            for i in range(k + 1):
                img = _degeneracy(ctx, h, i)
                if img.name not in kept[k + 1]:
                    raise ConsistencyError("degeneracy left the kept set")
                degeneracies[(k, name, i)] = img.name
    sset = TruncatedSimplicialSet(truncation, levels, face_cache, degeneracies)
    by_name = {h.name: h for level in kept for h in level.values()}

    partition = Partition.from_pairs(
        vertex_names,
        [(face_cache[(1, s, 1)], face_cache[(1, s, 0)]) for s in levels[1]],
    )
    sub_pairs = [
        (face_cache[(1, s, 1)], face_cache[(1, s, 0)])
        for s in levels[1] if by_name[s].width <= w_max - 1
    ]
    verdict = _stability(partition, sub_names, sub_pairs)
    if pruned:
        verdict = "bound_limited"
    return MappingSpace(x, y, truncation, w_max, verdict,
                        tuple(vertices), partition, sset, by_name)


def _reduced_pair_width(cat, directions, row0, row1):
    """Width of the reduced two-row grid; None when a composite is not
    representable.  Verticals never affect the reduced width."""
    cols = list(zip(directions, row0, row1))
    table = cat.table
    while True:
        move = None
        for idx, (d, a, b) in enumerate(cols):
            if cat.is_identity(a) and cat.is_identity(b):
                move = ("del", idx)
                break
            if idx + 1 < len(cols) and d == cols[idx + 1][0]:
                move = ("merge", idx)
                break
        if move is None:
            return len(cols)
        kind, idx = move
        if kind == "del":
            del cols[idx]
            continue
        d, a, b = cols[idx]
        _, a2, b2 = cols[idx + 1]
        if d == "f":
            fused = (table.get((a2, a)), table.get((b2, b)))
        else:
            fused = (table.get((a, a2)), table.get((b, b2)))
        if fused[0] is None or fused[1] is None:
            return None
        cols[idx:idx + 2] = [(d, fused[0], fused[1])]


def _pi0_edges(ctx, x, y, pattern, rows0, edge_pairs, sub_edge_pairs, w_max):
    """Component edges from all two-row grids, deduplicated per row pair.

    Only the vertex partition is needed, so vertical witnesses are not
    materialized; reduction of rows is cached.  Holes in a partially
    represented composition table drop the affected edge."""
    cat = ctx.cat
    rc = ctx.rc
    width = len(pattern)
    if width == 0:
        return
    sink = y
    red_cache = {}

    def reduced_of(row):
        got = red_cache.get(row)
        if got is None:
            try:
                got = reduce_hammock(rc, Hammock(x, sink, pattern, (row,), ()))
            except CompositionUnavailable:
                got = False
            red_cache[row] = got
        return got

    narrow = width <= w_max - 1
    for row in rows0:
        upper = reduced_of(row)
        if upper is False:
            continue
        vs = row_vertices(cat, x, pattern, row)
        for row2 in ctx.extension_rows(pattern, row, vs):
            lower = reduced_of(row2)
            if lower is False:
                continue
            edge_pairs.append((upper.name, lower.name))
            if narrow:
                sub_edge_pairs.append((upper.name, lower.name))
            elif not _is_reduced_grid(cat, (row, row2), width):
                reduced_width = _reduced_pair_width(cat, pattern, row, row2)
                if reduced_width is not None and reduced_width <= w_max - 1:
                    sub_edge_pairs.append((upper.name, lower.name))


def _grow(ctx, x, y, pattern, rows, grids, layers, truncation, note_simplex):
    """Extend the grid one row at a time, recording reduced simplices."""
    cat = ctx.cat
    width = len(pattern)
    height = len(rows) - 1
    if height >= 1 and _is_reduced_grid(cat, rows, width):
        note_simplex(height, Hammock(x, y if width else x, pattern, rows, layers))
    if height == truncation:
        return
    for vacc, row2 in ctx.extensions(pattern, rows[-1], grids[-1]):
        if width:
            grid2 = tuple(cat.cod[v] for v in _with_ends(ctx, grids[-1], vacc, width))
        else:
            grid2 = (x,)
        _grow(ctx, x, y, pattern, rows + [row2], grids + [grid2], layers + [vacc],
              truncation, note_simplex)


def _with_ends(ctx, grid, vacc, width):
    cat = ctx.cat
    return (cat.identity[grid[0]],) + tuple(vacc) + (cat.identity[grid[width]],)


def _face(ctx, h: Hammock, i) -> Hammock:
    cat = ctx.cat
    k = h.height
    rows = h.rows[:i] + h.rows[i + 1:]
    if i == 0:
        layers = h.verticals[1:]
    elif i == k:
        layers = h.verticals[:-1]
    else:
        fused = tuple(
            cat.compose(h.verticals[i][j], h.verticals[i - 1][j])
            for j in range(len(h.verticals[i]))
        )
        layers = h.verticals[:i - 1] + (fused,) + h.verticals[i + 1:]
    raw = Hammock(h.source, h.sink, h.directions, rows, layers)
    return reduce_hammock(ctx.rc, raw)


def _degeneracy(ctx, h: Hammock, i) -> Hammock:
    cat = ctx.cat
    rows = h.rows[:i + 1] + (h.rows[i],) + h.rows[i + 1:]
    vertices = row_vertices(cat, h.source, h.directions, h.rows[i]) if h.width else (h.source,)
    identity_layer = tuple(cat.identity[v] for v in vertices[1:-1]) if h.width else ()
    layers = h.verticals[:i] + (identity_layer,) + h.verticals[i:]
    return Hammock(h.source, h.sink, h.directions, rows, layers)


# --- localization ------------------------------------------------------------


class Localization:
    """Hammock localization data at a fixed truncation and width bound.

    Composition is materialized on demand (composites whose reduced form
    exceeds the width bound are recorded as overflows); the result's
    simplicial category is only total when no requested composite
    overflows.
    """

    def __init__(self, r: RelativeCategory, truncation, w_max, detail="full",
                 pair_filter=None, progress=None):
        if truncation < 1:
            raise InputError("truncation must be >= 1")
        if w_max < 1:
            raise InputError("width bound must be >= 1")
        self.relcat = r
        self.truncation = truncation
        self.w_max = w_max
        self.detail = detail
        self.context = _Context(r)
        self.pairs = {}
        for x in r.cat.objects:
            for y in r.cat.objects:
                if pair_filter is not None and (x, y) not in pair_filter:
                    continue
                self.pairs[(x, y)] = _mapping_space(
                    self.context, x, y, truncation, w_max, detail
                )
                if progress is not None:
                    progress(x, y, self.pairs[(x, y)])
        self.overflows = 0
        self._scat = None

    @property
    def verdict(self):
        return "stable" if all(p.stable for p in self.pairs.values()) else "bound_limited"

    def pair(self, x, y) -> MappingSpace:
        return self.pairs[(x, y)]

    def compose_simplices(self, x, y, z, level, g_name, f_name):
        """Name of the composite simplex, or None on width overflow."""
        f_h = self.pairs[(x, y)].by_name[f_name]
        g_h = self.pairs[(y, z)].by_name[g_name]
        try:
            composed = compose_hammocks(self.relcat, g_h, f_h)
        except CompositionUnavailable:
            self.overflows += 1
            return None
        if composed.width > self.w_max:
            self.overflows += 1
            return None
        target = self.pairs[(x, z)]
        if composed.name not in target.by_name:
            raise ConsistencyError("composite missing from enumeration")
        return composed.name

    def scat(self) -> scat_mod.TruncatedSimplicialCategory:
        if self.detail != "full":
            raise InputError("simplicial category needs detail='full'")
        if self._scat is None:
            identities = {
                x: width_zero(x).name for x in self.relcat.cat.objects
            }
            self._scat = scat_mod.TruncatedSimplicialCategory(
                self.relcat.cat.objects, self.truncation,
                {pair: ms.sset for pair, ms in self.pairs.items()},
                identities, composer=self.compose_simplices,
            )
        return self._scat

    def bounds_json(self):
        return {
            "truncation": self.truncation,
            "width": self.w_max,
            "verdict": self.verdict,
            "overflows": self.overflows,
        }

    def to_json(self, include_compose=True):
        """Simplicial-category JSON plus the bounds block.  Composites the
        width bound cannot represent are omitted and counted."""
        if self.detail != "full":
            raise InputError("serialization needs detail='full'")
        objects = [x for x in self.relcat.cat.objects]
        data = {
            "objects": objects,
            "truncation": self.truncation,
            "homs": {},
            "identities": {x: width_zero(x).name for x in objects
                           if (x, x) in self.pairs},
        }
        for (x, y), ms in sorted(self.pairs.items()):
            data["homs"][f"{x}|{y}"] = ms.sset.to_json()
            data["homs"][f"{x}|{y}"]["verdict"] = ms.verdict
        if include_compose:
            compose = {}
            for x in objects:
                for y in objects:
                    for z in objects:
                        if (x, y) not in self.pairs or (y, z) not in self.pairs \
                                or (x, z) not in self.pairs:
                            continue
                        for level in range(self.truncation + 1):
                            for g in self.pairs[(y, z)].sset.level(level):
                                for f in self.pairs[(x, y)].sset.level(level):
                                    h = self.compose_simplices(x, y, z, level, g, f)
                                    if h is None:
                                        continue
                                    compose.setdefault(f"{x}|{y}|{z}", {}).setdefault(
                                        str(level), []
                                    ).append([g, f, h])
            data["compose"] = compose
        data["bounds"] = self.bounds_json()
        return data


def hammock_localization(r: RelativeCategory, truncation: int, w_max: int,
                         detail: str = "full", pair_filter=None, progress=None) -> Localization:
    return Localization(r, truncation, w_max, detail, pair_filter, progress)


def homotopy_category_of_localization(loc: Localization, wellcheck_cap: int = 6):
    """Category of components of a localization, built from vertex
    partitions; class composites come from minimal-width representatives
    that stay inside the width bound."""
    r = loc.relcat
    objects = r.cat.objects
    parts = {pair: ms.partition for pair, ms in loc.pairs.items()}

    names, dom, cod, morphisms = {}, {}, {}, []
    for x in objects:
        for y in objects:
            for k in range(len(parts[(x, y)].classes)):
                name = f"{x}->{y}#{k}"
                names[(x, y, k)] = name
                morphisms.append(name)
                dom[name] = x
                cod[name] = y
    identity = {}
    for x in objects:
        ident_class = parts[(x, x)].class_of[width_zero(x).name]
        identity[x] = names[(x, x, ident_class)]

    def reps(x, y, k):
        ms = loc.pairs[(x, y)]
        chosen = [h for h in ms.vertices if parts[(x, y)].class_of[h.name] == k]
        return chosen[:wellcheck_cap]

    table = {}
    for x, y, z in itertools.product(objects, repeat=3):
        part_xz = parts[(x, z)]
        for k2 in range(len(parts[(y, z)].classes)):
            for k1 in range(len(parts[(x, y)].classes)):
                targets = set()
                for g in reps(y, z, k2):
                    for f in reps(x, y, k1):
                        try:
                            composed = compose_hammocks(r, g, f)
                        except CompositionUnavailable:
                            continue
                        if composed.width > loc.w_max:
                            continue
                        targets.add(part_xz.class_of[composed.name])
                if not targets:
                    loc.overflows += 1
                    raise CompositionUnavailable(
                        f"no representative composite within width {loc.w_max} "
                        f"at ({x},{y},{z})"
                    )
                if len(targets) > 1:
                    raise ConsistencyError(
                        f"component composition ill-defined at ({x},{y},{z})"
                    )
                table[(names[(y, z, k2)], names[(x, y, k1)])] = names[(x, z, targets.pop())]

    cat = FiniteCategory(objects, morphisms, dom, cod, identity, table)
    classmap = {
        (x, y, h.name): names[(x, y, parts[(x, y)].class_of[h.name])]
        for x in objects for y in objects for h in loc.pairs[(x, y)].vertices
    }
    return cat, classmap


def embed(r: RelativeCategory, loc: Localization) -> scat_mod.SimplicialFunctor:
    """The natural embedding of the underlying category into its
    localization: a morphism goes to its forward one-column hammock,
    degenerately in all levels.  Strictly functorial (columns merge)."""
    source = scat_mod.promote(r.cat, loc.truncation)
    target = loc.scat()
    smap = {}
    for x in r.cat.objects:
        for y in r.cat.objects:
            for level in range(loc.truncation + 1):
                for m in r.cat.hom(x, y):
                    smap[(x, y, level, m)] = embed_morphism(r, m, level).name
    return scat_mod.SimplicialFunctor(
        source, target, {x: x for x in r.cat.objects}, smap
    )


# --- localization of relative simplicial categories -------------------------


def _map_hammock(rel_target: RelativeCategory, morphism_map, h: Hammock) -> Hammock:
    rows = tuple(tuple(morphism_map[m] for m in row) for row in h.rows)
    verticals = tuple(tuple(morphism_map[v] for v in layer) for layer in h.verticals)
    raw = Hammock(h.source, h.sink, h.directions, rows, verticals)
    return reduce_hammock(rel_target, raw)


class RelscatLocalization:
    """Dimensionwise hammock localization of (ambient, sub), assembled as
    the diagonal of the level-by-level mapping spaces."""

    def __init__(self, rs, truncation, w_max):
        ambient = rs.ambient
        if ambient.truncation < truncation:
            raise InputError("ambient truncation too small")
        self.rs = rs
        self.truncation = truncation
        self.w_max = w_max
        self.overflows = 0

        self.level_rel = []
        for n in range(truncation + 1):
            level_cat = scat_mod.level_category(ambient, n)
            weq = set()
            for x in ambient.objects:
                for y in ambient.objects:
                    for s in rs.sub[(x, y)][n]:
                        weq.add(scat_mod.level_morphism_name(x, y, s))
            self.level_rel.append(RelativeCategory(level_cat, weq))
        self.level_ctx = [_Context(rel) for rel in self.level_rel]

        objects = ambient.objects
        self.row_spaces = {}
        for x in objects:
            for y in objects:
                for n in range(truncation + 1):
                    self.row_spaces[(x, y, n)] = _mapping_space(
                        self.level_ctx[n], x, y, truncation, w_max, "full"
                    )

        self.diag_homs = {}
        self.diag_names = {}
        for x in objects:
            for y in objects:
                rows = [self.row_spaces[(x, y, n)].sset for n in range(truncation + 1)]
                outer_faces = {}
                outer_degens = {}
                for n in range(1, truncation + 1):
                    maps = []
                    for i in range(n + 1):
                        maps.append(self._entrywise_map(x, y, n, n - 1, "d", i))
                    outer_faces[n] = maps
                for n in range(truncation):
                    maps = []
                    for i in range(n + 1):
                        maps.append(self._entrywise_map(x, y, n, n + 1, "s", i))
                    outer_degens[n] = maps
                bis = BisimplicialSet(truncation, rows, outer_faces, outer_degens)
                self.diag_homs[(x, y)] = diagonal(bis, truncation)

        self._scat = None

    def _entrywise_map(self, x, y, n_from, n_to, kind, i):
        ambient = self.rs.ambient
        functor = scat_mod.level_functor(ambient, n_from, kind, i)
        rel_to = self.level_rel[n_to]
        source_space = self.row_spaces[(x, y, n_from)]
        target_space = self.row_spaces[(x, y, n_to)]
        mapping = {}
        for level in range(self.truncation + 1):
            for name in source_space.sset.level(level):
                image = _map_hammock(rel_to, functor.morphism_map, source_space.by_name[name])
                if image.name not in target_space.by_name:
                    raise ConsistencyError("entrywise image missing from enumeration")
                mapping[(level, name)] = image.name
        return mapping

    @property
    def verdict(self):
        return ("stable"
                if all(ms.stable for ms in self.row_spaces.values())
                else "bound_limited")

    def compose_simplices(self, x, y, z, level, g_name, f_name):
        rel = self.level_rel[level]
        f_h = self.row_spaces[(x, y, level)].by_name[f_name]
        g_h = self.row_spaces[(y, z, level)].by_name[g_name]
        composed = compose_hammocks(rel, g_h, f_h)
        if composed.width > self.w_max:
            self.overflows += 1
            return None
        if composed.name not in self.row_spaces[(x, z, level)].by_name:
            raise ConsistencyError("composite missing from enumeration")
        return composed.name

    def scat(self) -> scat_mod.TruncatedSimplicialCategory:
        if self._scat is None:
            identities = {x: width_zero(x).name for x in self.rs.ambient.objects}
            self._scat = scat_mod.TruncatedSimplicialCategory(
                self.rs.ambient.objects, self.truncation, self.diag_homs,
                identities, composer=self.compose_simplices,
            )
        return self._scat

    def bounds_json(self):
        return {
            "truncation": self.truncation,
            "width": self.w_max,
            "verdict": self.verdict,
            "overflows": self.overflows,
        }


def hammock_localization_relscat(rs, truncation: int, w_max: int) -> RelscatLocalization:
    return RelscatLocalization(rs, truncation, w_max)


def embed_relscat(rs, rsloc: RelscatLocalization) -> scat_mod.SimplicialFunctor:
    """The natural comparison map into the dimensionwise localization."""
    ambient = rs.ambient
    smap = {}
    for x in ambient.objects:
        for y in ambient.objects:
            sset = ambient.homs[(x, y)]
            for level in range(rsloc.truncation + 1):
                rel = rsloc.level_rel[level]
                for s in sset.level(level):
                    name = scat_mod.level_morphism_name(x, y, s)
                    smap[(x, y, level, s)] = embed_morphism(rel, name, level).name
    return scat_mod.SimplicialFunctor(
        ambient, rsloc.scat(), {x: x for x in ambient.objects}, smap
    )
