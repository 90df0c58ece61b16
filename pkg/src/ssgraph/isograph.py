"""The supersingular isogeny multigraph and the model-walking construction."""
import json
from collections import Counter, deque
from functools import lru_cache

from .curves import (DEFAULT_SEED, j_invariant, minimal_torsion_field, quadratic_twist,
                     torsion_subgroups, two_isogeny_step, velu_quotient)
from .errors import OverfullVertex, ValidationError
from .fields import build_tower, check_prime, fp2, label_key
from .search import find_supersingular

SCHEMA_VERSION = 1


def aut_weight(j):
    """|Aut(E)|/2 for p > 3."""
    if j == 0:
        return 3
    if j == 1728:
        return 2
    return 1


class IsogenyGraph:
    def __init__(self, p, ell, vertices, edges):
        self.p = p
        self.ell = ell
        self.field = fp2(p)
        self.vertices = sorted(vertices, key=label_key)
        self.edges = {k: v for k, v in edges.items() if v}
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def __eq__(self, other):
        return (isinstance(other, IsogenyGraph) and (self.p, self.ell) == (other.p, other.ell)
                and self.vertices == other.vertices and self.edges == other.edges)

    def __repr__(self):
        return f"IsogenyGraph(p={self.p}, ell={self.ell}, |V|={len(self.vertices)})"

    def multiplicity(self, src, dst):
        return self.edges.get((src, dst), 0)

    def out_degree(self, v):
        return sum(m for (s, _), m in self.edges.items() if s == v)

    def edge_list(self):
        return sorted(((s, d, m) for (s, d), m in self.edges.items()),
                      key=lambda e: (label_key(e[0]), label_key(e[1])))

    def loops(self):
        return {v: self.multiplicity(v, v) for v in self.vertices}

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "p": self.p,
            "ell": self.ell,
            "nonresidue": self.field.n,
            "vertices": [str(v) for v in self.vertices],
            "edges": [[str(s), str(d), m] for s, d, m in self.edge_list()],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        p = int(data["p"])
        F = fp2(p)
        if int(data.get("nonresidue", F.n)) != F.n:
            raise ValidationError("graph uses a different quadratic extension model")
        verts = [F.parse(v) for v in data["vertices"]]
        edges = {(F.parse(s), F.parse(d)): int(m) for s, d, m in data["edges"]}
        return cls(p, int(data["ell"]), verts, edges)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dot(self):
        def name(v):
            s = str(v)
            return s if s.isdigit() else f'"{s}"'

        lines = [f"digraph gamma_{self.p}_{self.ell} {{"]
        lines += [f"  {name(v)};" for v in self.vertices]
        for s, d, m in self.edge_list():
            lines += [f"  {name(s)} -> {name(d)};"] * m
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_csv(self):
        return "".join(",".join(str(x) for x in row) + "\n" for row in adjacency_matrix(self)[0])


def adjacency_matrix(G):
    """(matrix, trace) in canonical vertex order."""
    n = len(G.vertices)
    M = [[0] * n for _ in range(n)]
    for (s, d), m in G.edges.items():
        M[G.index[s]][G.index[d]] += m
    return M, sum(M[i][i] for i in range(n))


def complete_self_loops(G):
    """Pad every vertex with loops up to out-degree ell + 1."""
    edges = dict(G.edges)
    target = G.ell + 1
    for v in G.vertices:
        deg = G.out_degree(v)
        if deg > target:
            raise OverfullVertex(f"vertex {v} already has out-degree {deg} > {target}")
        if deg < target:
            edges[(v, v)] = edges.get((v, v), 0) + target - deg
    return IsogenyGraph(G.p, G.ell, G.vertices, edges)


def structural_checks(G):
    if not G.vertices:
        raise ValidationError("empty graph")
    regular = all(G.out_degree(v) == G.ell + 1 for v in G.vertices)
    adj = {v: set() for v in G.vertices}
    for s, d in G.edges:
        adj[s].add(d)
        adj[d].add(s)
    seen = {G.vertices[0]}
    todo = [G.vertices[0]]
    while todo:
        for u in adj[todo.pop()]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    connected = len(seen) == len(G.vertices)
    vset = set(G.vertices)
    conj_closed = all(v.conj() in vset for v in G.vertices)
    conj_sym = conj_closed and all(G.multiplicity(s.conj(), d.conj()) == m
                                   for (s, d), m in G.edges.items())
    weights = all(G.multiplicity(s, d) * aut_weight(d) == G.multiplicity(d, s) * aut_weight(s)
                  for (s, d) in G.edges)
    return {"regular": regular, "connected": connected, "conjugation_symmetric": conj_sym,
            "aut_weight_symmetric": weights}


def _torsion_start(p, ell, cap):
    """A supersingular short model over F_{p^(2n)} whose group is (Z/N)^2 with ell | N."""
    n = minimal_torsion_field(p, ell)
    F = build_tower(p, n, cap)
    E = find_supersingular(p).model.to_short().lift(F)
    # Frobenius of F_{p^2n} acts as (-p)^n, so E(F_q) = (Z/N)^2 with N = p^n - (-1)^n
    N = p ** n + 1 if n % 2 else p ** n - 1
    if N % ell:
        E = quadratic_twist(E, F.nonsquare())
        N = p ** n - 1 if n % 2 else p ** n + 1
    assert N % ell == 0
    return F, E, N


def _label(F, x):
    base = F.to_base(x)
    if base is None:
        raise AssertionError("supersingular j-invariant outside F_{p^2}")
    return base


def graph_method(p, ell, seed=DEFAULT_SEED, cap=None):
    """Breadth-first walk over explicit models, one edge per kernel subgroup."""
    check_prime(p)
    check_prime(ell, minimum=2)
    if ell == 2:
        F = fp2(p)
        start = find_supersingular(p).model

        def neighbours(E):
            return two_isogeny_step(E)
    else:
        F, start, N = _torsion_start(p, ell, cap)

        def neighbours(E):
            return [velu_quotient(E, P, ell) for P in torsion_subgroups(E, ell, N, seed)]

    j0 = _label(F, j_invariant(start))
    models = {j0: start}
    edges = Counter()
    queue = deque([j0])
    while queue:
        j = queue.popleft()
        for E2 in neighbours(models[j]):
            j2 = _label(F, j_invariant(E2))
            edges[(j, j2)] += 1
            if j2 not in models:
                models[j2] = E2
                queue.append(j2)
    return IsogenyGraph(p, ell, list(models), edges)


@lru_cache(maxsize=None)
def _supersingular_set(p):
    return tuple(graph_method(p, 2).vertices)


def supersingular_set(p):
    """S_p as canonically ordered F_{p^2} labels."""
    return list(_supersingular_set(p))
