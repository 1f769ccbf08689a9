"""Decorated point-hyperplane graphs and the Z2^t extrusion action.

Vertices carry a base identifier plus a word over ``{0, 1, *}``; a ``*``
marks a coordinate in which copies of a hyperplane vertex were contracted
(the hyperplane contains that extrusion direction).  The group Z2^t acts
by adding a 0/1 word to the vertex word, with ``* + 0 = * + 1 = *``.

Edge kinds:

* ``pp``        point-point distance constraint
* ``ph``        point-hyperplane distance constraint
* ``hh-angle``  angle constraint between non-parallel hyperplanes
* ``hh-par``    parallel constraint between hyperplanes in one class

Parallel classes are the connected components of the hyperplane vertices
under ``hh-par`` edges.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

STAR = "*"
_CHAR_ORDER = {"0": 0, "1": 1, STAR: 2}

NOT_FIXED = "not-fixed"
FIXED_SWAPPED = "fixed-swapped"
FIXED_POINTWISE = "fixed-pointwise"


@dataclass(frozen=True)
class Vertex:
    """A vertex of an extruded graph: base identifier plus 0/1/* word."""

    base: str
    word: str = ""

    def sort_key(self):
        return (self.base, tuple(_CHAR_ORDER[c] for c in self.word))

    @property
    def label(self) -> str:
        return self.base if not self.word else f"{self.base}|{self.word}"

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"Vertex({self.label!r})"


def parse_vertex(label: str) -> Vertex:
    """Inverse of :attr:`Vertex.label`."""
    if "|" in label:
        base, word = label.rsplit("|", 1)
        return Vertex(base, word)
    return Vertex(label)


def group_elements(t: int) -> list:
    """All elements of Z2^t in lexicographic order (identity first)."""
    return [tuple(g) for g in itertools.product((0, 1), repeat=t)]


def subgroup_elements(t: int, active) -> list:
    """Elements of Z2^t supported on the ``active`` coordinate positions."""
    active = tuple(active)
    out = []
    for bits in itertools.product((0, 1), repeat=len(active)):
        g = [0] * t
        for pos, b in zip(active, bits):
            g[pos] = b
        out.append(tuple(g))
    return out


def word_add(word: str, gamma) -> str:
    """Word addition mod 2 with star absorption."""
    if len(word) != len(gamma):
        raise ValueError(f"word {word!r} has length {len(word)}, group element has {len(gamma)}")
    return "".join(c if c == STAR else str((int(c) + g) % 2) for c, g in zip(word, gamma))


def _sorted_edge(u: Vertex, v: Vertex):
    return (u, v) if u.sort_key() <= v.sort_key() else (v, u)


@dataclass(frozen=True)
class PHGraph:
    """Decorated point-hyperplane graph, optionally with extrusion structure.

    ``fixed_sets[h]`` lists the base hyperplane identifiers whose copies were
    contracted along direction ``h`` (a ``*`` in word position ``h``).
    """

    points: tuple
    hyperplanes: tuple
    edges_pp: tuple = ()
    edges_ph: tuple = ()
    edges_hh_angle: tuple = ()
    edges_hh_par: tuple = ()
    extrusion_order: int = 0
    fixed_sets: tuple = ()
    _classes: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points, key=Vertex.sort_key)))
        object.__setattr__(self, "hyperplanes", tuple(sorted(self.hyperplanes, key=Vertex.sort_key)))
        object.__setattr__(self, "fixed_sets", tuple(frozenset(fs) for fs in self.fixed_sets))
        for name in ("edges_pp", "edges_ph", "edges_hh_angle", "edges_hh_par"):
            edges = getattr(self, name)
            if name == "edges_ph":
                # orientation fixed as (point, hyperplane)
                object.__setattr__(self, name, tuple(sorted(edges, key=lambda e: (e[0].sort_key(), e[1].sort_key()))))
            else:
                object.__setattr__(self, name, tuple(sorted((_sorted_edge(*e) for e in edges),
                                                            key=lambda e: (e[0].sort_key(), e[1].sort_key()))))
        self._validate()
        object.__setattr__(self, "_classes", self._compute_parallel_classes())
        if self.edges_hh_angle:
            cls_of = self.class_index
            for u, v in self.edges_hh_angle:
                if cls_of[u] == cls_of[v]:
                    raise ValueError(f"angle edge {u}-{v} joins hyperplanes in one parallel class")
        if self.extrusion_order >= 1:
            self._validate_action()

    # -- construction checks -------------------------------------------------

    def _validate(self):
        pts, hyps = set(self.points), set(self.hyperplanes)
        if pts & hyps:
            raise ValueError("a vertex cannot be both point and hyperplane")
        t = self.extrusion_order
        if len(self.fixed_sets) not in (0, t):
            raise ValueError("fixed_sets must have one entry per extrusion direction")
        for v in itertools.chain(pts, hyps):
            if len(v.word) != t:
                raise ValueError(f"vertex {v} word length differs from extrusion order {t}")
        seen = set()
        for kind, edges, ok in (
            ("pp", self.edges_pp, lambda u, v: u in pts and v in pts),
            ("ph", self.edges_ph, lambda u, v: u in pts and v in hyps),
            ("hh-angle", self.edges_hh_angle, lambda u, v: u in hyps and v in hyps),
            ("hh-par", self.edges_hh_par, lambda u, v: u in hyps and v in hyps),
        ):
            for u, v in edges:
                if u == v:
                    raise ValueError(f"self-loop at {u}")
                if not ok(u, v):
                    raise ValueError(f"edge {u}-{v} has endpoints inconsistent with kind {kind}")
                key = frozenset((u, v))
                if key in seen:
                    raise ValueError(f"duplicate edge {u}-{v}")
                seen.add(key)

    def _validate_action(self):
        verts = set(self.vertices)
        edge_sets = [set(map(frozenset, e)) for e in
                     (self.edges_pp, self.edges_ph, self.edges_hh_angle, self.edges_hh_par)]
        for h in range(self.extrusion_order):
            gamma = tuple(1 if i == h else 0 for i in range(self.extrusion_order))
            image = {self.act(gamma, v) for v in verts}
            if image != verts:
                raise ValueError(f"extrusion action for direction {h} does not permute the vertices")
            for edges in edge_sets:
                mapped = {frozenset((self.act(gamma, u), self.act(gamma, v))) for u, v in map(tuple, edges)}
                if mapped != edges:
                    raise ValueError(f"extrusion action for direction {h} does not preserve an edge set")

    # -- basic queries --------------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self.points + self.hyperplanes

    @property
    def edges(self) -> tuple:
        return self.edges_pp + self.edges_ph + self.edges_hh_angle + self.edges_hh_par

    def is_point(self, v: Vertex) -> bool:
        return v in set(self.points)

    def _compute_parallel_classes(self):
        adj = {v: set() for v in self.hyperplanes}
        for u, v in self.edges_hh_par:
            adj[u].add(v)
            adj[v].add(u)
        classes, seen = [], set()
        for v in self.hyperplanes:
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                w = stack.pop()
                comp.append(w)
                for x in adj[w]:
                    if x not in seen:
                        seen.add(x)
                        stack.append(x)
            classes.append(tuple(sorted(comp, key=Vertex.sort_key)))
        return tuple(sorted(classes, key=lambda c: c[0].sort_key()))

    @property
    def parallel_classes(self) -> tuple:
        """Partition of the hyperplane vertices into parallel classes."""
        return self._classes

    @property
    def class_index(self) -> dict:
        return {v: i for i, cls in enumerate(self._classes) for v in cls}

    # -- group action ----------------------------------------------------------

    def act(self, gamma, v: Vertex) -> Vertex:
        """Image of vertex ``v`` under the extrusion action of ``gamma``."""
        if v not in set(self.vertices):
            raise ValueError(f"vertex {v} not in graph")
        return Vertex(v.base, word_add(v.word, gamma))

    def act_edge(self, gamma, edge):
        u, v = edge
        return _sorted_edge(self.act(gamma, u), self.act(gamma, v))

    def classify_edge(self, gamma, edge) -> str:
        """How ``gamma`` moves an edge: not fixed, endpoints swapped, or both fixed."""
        u, v = edge
        iu, iv = self.act(gamma, u), self.act(gamma, v)
        if {iu, iv} != {u, v}:
            return NOT_FIXED
        return FIXED_POINTWISE if iu == u else FIXED_SWAPPED

    @staticmethod
    def extrusion_coordinate(edge):
        """Position in which the endpoint words of a copy-joining edge differ.

        Returns None for edges whose endpoints have distinct bases.
        """
        u, v = edge
        if u.base != v.base:
            return None
        diff = [h for h, (a, b) in enumerate(zip(u.word, v.word)) if a != b]
        if len(diff) != 1:
            raise ValueError(f"edge {u}-{v} joins copies differing in {len(diff)} coordinates")
        return diff[0]

    def edge_sign(self, gamma, edge) -> int:
        """Sign contributed by ``edge`` to the internal representation of ``gamma``.

        -1 exactly when the edge joins two copies of one base vertex and
        ``gamma`` flips the coordinate in which their words differ.
        """
        h = self.extrusion_coordinate(edge)
        if h is None:
            return 1
        return -1 if gamma[h] == 1 else 1


def extrusion_product(base: PHGraph, fixed_sets) -> PHGraph:
    """Iterated Cartesian product with K2, contracting hyperplane copies.

    ``fixed_sets[h]`` names the base hyperplane vertices contracted along
    direction ``h``; those vertices get a ``*`` in word position ``h``.
    Copy-joining edges between point copies go to ``pp``, those between
    hyperplane copies to ``hh-par`` (the copies share a normal).
    """
    if base.extrusion_order != 0:
        raise ValueError("extrusion_product expects a base graph without extrusion structure")
    fixed_sets = [frozenset(fs) for fs in fixed_sets]
    t = len(fixed_sets)
    hyper_bases = {v.base for v in base.hyperplanes}
    for h, fs in enumerate(fixed_sets):
        bad = fs - hyper_bases
        if bad:
            raise ValueError(f"fixed set {h} references non-hyperplane vertices: {sorted(bad)}")
    if t == 0:
        return base

    def mask(v: Vertex, bits) -> Vertex:
        word = "".join(STAR if v.base in fixed_sets[h] else str(bits[h]) for h in range(t))
        return Vertex(v.base, word)

    all_bits = list(itertools.product((0, 1), repeat=t))
    points = {mask(v, bits) for v in base.points for bits in all_bits}
    hyperplanes = {mask(v, bits) for v in base.hyperplanes for bits in all_bits}

    carried = {"pp": set(), "ph": set(), "hh-angle": set(), "hh-par": set()}
    for kind, edges in (("pp", base.edges_pp), ("ph", base.edges_ph),
                        ("hh-angle", base.edges_hh_angle), ("hh-par", base.edges_hh_par)):
        for u, v in edges:
            for bits in all_bits:
                mu, mv = mask(u, bits), mask(v, bits)
                carried[kind].add((mu, mv) if kind == "ph" else _sorted_edge(mu, mv))

    # copy-joining edges, skipping contracted coordinates
    for v in base.vertices:
        is_pt = v in set(base.points)
        starred = {h for h in range(t) if not is_pt and v.base in fixed_sets[h]}
        for h in range(t):
            if h in starred:
                continue
            for bits in all_bits:
                if bits[h] == 1:
                    continue
                flipped = tuple(b if i != h else 1 for i, b in enumerate(bits))
                e = _sorted_edge(mask(v, bits), mask(v, flipped))
                carried["pp" if is_pt else "hh-par"].add(e)

    return PHGraph(
        points=tuple(points),
        hyperplanes=tuple(hyperplanes),
        edges_pp=tuple(carried["pp"]),
        edges_ph=tuple(carried["ph"]),
        edges_hh_angle=tuple(carried["hh-angle"]),
        edges_hh_par=tuple(carried["hh-par"]),
        extrusion_order=t,
        fixed_sets=tuple(fixed_sets),
    )


def remove_edge(graph: PHGraph, u: Vertex, v: Vertex) -> PHGraph:
    """Copy of ``graph`` without the edge ``{u, v}`` (any kind)."""
    key = frozenset((u, v))
    found = False
    kwargs = {}
    for name in ("edges_pp", "edges_ph", "edges_hh_angle", "edges_hh_par"):
        edges = tuple(e for e in getattr(graph, name) if frozenset(e) != key)
        if len(edges) != len(getattr(graph, name)):
            found = True
        kwargs[name] = edges
    if not found:
        raise ValueError(f"edge {u}-{v} not in graph")
    return PHGraph(points=graph.points, hyperplanes=graph.hyperplanes,
                   extrusion_order=graph.extrusion_order, fixed_sets=graph.fixed_sets, **kwargs)


def complete_decorated(graph: PHGraph) -> PHGraph:
    """Complete decorated graph on the same vertices.

    All point pairs, all point-hyperplane pairs, and all hyperplane pairs are
    joined; hyperplane pairs inside one parallel class of ``graph`` become
    parallel edges, pairs across classes become angle edges.
    """
    cls = graph.class_index
    pp = [_sorted_edge(u, v) for u, v in itertools.combinations(graph.points, 2)]
    ph = [(p, w) for p in graph.points for w in graph.hyperplanes]
    angle, par = [], []
    for u, v in itertools.combinations(graph.hyperplanes, 2):
        (par if cls[u] == cls[v] else angle).append(_sorted_edge(u, v))
    return PHGraph(points=graph.points, hyperplanes=graph.hyperplanes,
                   edges_pp=tuple(pp), edges_ph=tuple(ph),
                   edges_hh_angle=tuple(angle), edges_hh_par=tuple(par),
                   extrusion_order=graph.extrusion_order, fixed_sets=graph.fixed_sets)
