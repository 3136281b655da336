"""Exact discrete joint distributions: dense tables and tree-factored models.

The dense representation is the ground-truth oracle for everything else in
this package: projections, divergences, and the identities the estimators are
checked against all reduce to exact arithmetic on it.  All information
quantities are in nats.

Dense tables use mixed-radix indexing with variable 0 as the most significant
digit: the flat index of an assignment (x_0, ..., x_{n-1}) over an alphabet
of size k is sum_i x_i * k**(n - 1 - i).
"""

from __future__ import annotations

import heapq
import json
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .info import entropy, mutual_information

DENSE_CAP = 2**24  # largest dense table the oracle will materialize

__all__ = [
    "DENSE_CAP",
    "Alphabet",
    "DenseJoint",
    "UndirectedTree",
    "RootedTree",
    "TreeModel",
    "ProjectionReport",
    "KLDecomposition",
    "DistanceReport",
    "root_at",
    "validate_tree_model",
    "node_marginals",
    "to_dense",
    "reroot",
    "sample",
    "sample_dense",
    "pair_marginal",
    "exact_mi_matrix",
    "project_onto_tree",
    "kl_divergence",
    "kl_to_tree_projection",
    "kl_decomposition",
    "statistical_distances",
    "random_spanning_tree",
    "random_tree_model",
    "dense_joint_to_json",
    "dense_joint_from_json",
    "undirected_tree_to_json",
    "undirected_tree_from_json",
    "tree_model_to_json",
    "tree_model_from_json",
]


def _frozen(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Alphabet:
    """Symbol set {0, ..., size - 1} shared by every variable of a model."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 2:
            raise ValueError(f"alphabet size must be an int >= 2, got {self.size!r}")


@dataclass(frozen=True)
class DenseJoint:
    """Full probability table over alphabet**n assignments."""

    n: int
    alphabet: Alphabet
    probs: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one variable")
        size = self.alphabet.size**self.n
        if size > DENSE_CAP:
            raise ValueError(f"dense table of {size} entries exceeds cap {DENSE_CAP}")
        arr = np.array(self.probs, dtype=np.float64).reshape(-1)
        if arr.shape[0] != size:
            raise ValueError(f"expected {size} entries, got {arr.shape[0]}")
        if np.any(arr < 0):
            raise ValueError("negative entry in probability table")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @property
    def k(self) -> int:
        return self.alphabet.size

    def table(self) -> np.ndarray:
        """Read-only view shaped (k,) * n."""
        return self.probs.reshape((self.k,) * self.n)

    def marginal(self, variables) -> np.ndarray:
        """Marginal table over the given variables, axes in the given order."""
        vs = tuple(int(v) for v in variables)
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variables in {vs}")
        for v in vs:
            if not 0 <= v < self.n:
                raise ValueError(f"variable {v} out of range for n={self.n}")
        keep = set(vs)
        drop = tuple(i for i in range(self.n) if i not in keep)
        t = self.table().sum(axis=drop) if drop else np.array(self.table())
        ascending = sorted(keep)
        perm = tuple(ascending.index(v) for v in vs)
        return np.transpose(t, perm) if perm != tuple(range(len(vs))) else t


def _assert_connected_tree(n: int, edges) -> None:
    adjacency = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    seen = [False] * n
    queue = deque([0])
    seen[0] = True
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if not seen[y]:
                seen[y] = True
                queue.append(y)
    if not all(seen):
        raise ValueError("edges do not connect all nodes")


@dataclass(frozen=True)
class UndirectedTree:
    """Spanning tree on nodes 0..n-1; edges stored as (u, v) with u < v,
    sorted lexicographically."""

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one node")
        norm = []
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((min(u, v), max(u, v)))
        norm.sort()
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        if len(norm) != self.n - 1:
            raise ValueError(f"a spanning tree on {self.n} nodes has {self.n - 1} edges, got {len(norm)}")
        _assert_connected_tree(self.n, norm)
        object.__setattr__(self, "edges", tuple(norm))

    def adjacency(self) -> list:
        out = [[] for _ in range(self.n)]
        for u, v in self.edges:
            out[u].append(v)
            out[v].append(u)
        for row in out:
            row.sort()
        return out


def _bfs_parents(n: int, adjacency, root: int) -> tuple:
    parent = [-2] * n
    parent[root] = -1
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if parent[y] == -2:
                parent[y] = x
                queue.append(y)
    return tuple(parent)


@dataclass(frozen=True)
class RootedTree:
    """Rooted orientation of a spanning tree: parent[i] is i's parent, -1 at
    the root.  Cyclic or disconnected parent maps are rejected here, so a
    constructed instance is always a valid rooted tree."""

    n: int
    root: int
    parent: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one node")
        if not 0 <= self.root < self.n:
            raise ValueError(f"root {self.root} out of range")
        parent = tuple(int(p) for p in self.parent)
        if len(parent) != self.n:
            raise ValueError(f"parent map has length {len(parent)}, expected {self.n}")
        if parent[self.root] != -1:
            raise ValueError("parent of the root must be -1")
        for i, p in enumerate(parent):
            if i == self.root:
                continue
            if not 0 <= p < self.n:
                raise ValueError(f"parent of node {i} out of range: {p}")
            if p == i:
                raise ValueError(f"cycle: node {i} is its own parent")
        for i in range(self.n):
            x, hops = i, 0
            while x != self.root:
                x = parent[x]
                hops += 1
                if hops > self.n:
                    raise ValueError(f"cycle in parent map involving node {i}")
        object.__setattr__(self, "parent", parent)

    def children(self) -> list:
        out = [[] for _ in range(self.n)]
        for i, p in enumerate(self.parent):
            if p >= 0:
                out[p].append(i)
        return out

    def topological_order(self) -> list:
        """Root first; every node appears after its parent."""
        order = [self.root]
        kids = self.children()
        queue = deque([self.root])
        while queue:
            x = queue.popleft()
            for y in kids[x]:
                order.append(y)
                queue.append(y)
        return order

    def skeleton(self) -> UndirectedTree:
        edges = [(min(i, p), max(i, p)) for i, p in enumerate(self.parent) if p >= 0]
        return UndirectedTree(self.n, tuple(edges))

    def path(self, u: int, v: int) -> list:
        """Nodes along the unique path from u to v, inclusive."""
        for x in (u, v):
            if not 0 <= x < self.n:
                raise ValueError(f"node {x} out of range")
        up = [u]
        x = u
        while self.parent[x] != -1:
            x = self.parent[x]
            up.append(x)
        depth = {node: i for i, node in enumerate(up)}
        down = [v]
        y = v
        while y not in depth:
            y = self.parent[y]
            down.append(y)
        return up[: depth[y]] + down[::-1]


@dataclass(frozen=True)
class TreeModel:
    """Tree-factored distribution: a root marginal plus, for every non-root
    node, a k x k conditional table whose row r is the node's distribution
    given parent symbol r.

    `uniform_rows` records (node, parent_symbol) pairs where a zero-probability
    conditioning event forced a uniform row during projection or rerooting.
    """

    tree: RootedTree
    alphabet: Alphabet
    root_marginal: np.ndarray
    cpt: dict
    uniform_rows: tuple = ()

    def __post_init__(self):
        k = self.alphabet.size
        rm = _frozen(self.root_marginal)
        if rm.shape != (k,):
            raise ValueError(f"root marginal must have shape ({k},), got {rm.shape}")
        object.__setattr__(self, "root_marginal", rm)
        non_roots = {i for i in range(self.tree.n) if i != self.tree.root}
        if set(self.cpt) != non_roots:
            raise ValueError("cpt must have exactly one table per non-root node")
        tables = {}
        for node, rows in self.cpt.items():
            arr = _frozen(rows)
            if arr.shape != (k, k):
                raise ValueError(f"cpt of node {node} must be {k} x {k}, got {arr.shape}")
            tables[int(node)] = arr
        object.__setattr__(self, "cpt", tables)
        object.__setattr__(self, "uniform_rows", tuple(self.uniform_rows))

    @property
    def k(self) -> int:
        return self.alphabet.size

    @property
    def n(self) -> int:
        return self.tree.n


def root_at(t: UndirectedTree, root: int) -> RootedTree:
    """Orient an undirected tree away from the given root."""
    if not 0 <= root < t.n:
        raise ValueError(f"root {root} out of range")
    return RootedTree(t.n, root, _bfs_parents(t.n, t.adjacency(), root))


def validate_tree_model(m: TreeModel, tol: float = 1e-12) -> None:
    """Raise ValueError naming the first violated numeric invariant.

    Structural problems (cyclic parent maps, missing cpt entries) are already
    rejected when the RootedTree / TreeModel is constructed; this checks the
    probability content: no negative entries, root marginal summing to 1, and
    every conditional row summing to 1, all within `tol`.
    """
    rm = m.root_marginal
    if np.any(rm < 0):
        raise ValueError("negative entry in root marginal")
    total = float(rm.sum())
    if abs(total - 1.0) > tol:
        raise ValueError(f"root marginal row sum != 1: {total!r}")
    for node in sorted(m.cpt):
        rows = m.cpt[node]
        if np.any(rows < 0):
            raise ValueError(f"negative entry in cpt of node {node}")
        sums = rows.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > tol)[0]
        if bad.size:
            b = int(bad[0])
            raise ValueError(
                f"cpt row sum != 1 at node {node}, parent symbol {b}: {float(sums[b])!r}"
            )


def node_marginals(m: TreeModel) -> np.ndarray:
    """Exact marginal of every node, shape (n, k), by root-to-leaf propagation."""
    out = np.zeros((m.n, m.k))
    out[m.tree.root] = m.root_marginal
    for node in m.tree.topological_order():
        if node == m.tree.root:
            continue
        out[node] = out[m.tree.parent[node]] @ m.cpt[node]
    return out


def to_dense(m: TreeModel) -> DenseJoint:
    """Materialize the full joint table of a tree model."""
    k, n = m.k, m.n
    if k**n > DENSE_CAP:
        raise ValueError(f"dense table of {k**n} entries exceeds cap {DENSE_CAP}")
    shape = [1] * n
    shape[m.tree.root] = k
    joint = np.ones((k,) * n) * m.root_marginal.reshape(shape)
    for node in m.tree.topological_order():
        if node == m.tree.root:
            continue
        pa = m.tree.parent[node]
        factor = m.cpt[node] if pa < node else m.cpt[node].T
        lo, hi = min(pa, node), max(pa, node)
        shape = [1] * n
        shape[lo] = k
        shape[hi] = k
        joint = joint * factor.reshape(shape)
    return DenseJoint(n, m.alphabet, joint.reshape(-1))


def _flip_conditional(child_marginal, parent_marginal_unused, cond):
    """Reverse the orientation of one edge.

    `cond` holds P(other | this) with rows indexed by this node's symbol;
    returns P(this | other) rows indexed by the other node's symbol, together
    with the list of other-symbols whose marginal mass is zero (those rows are
    set to uniform).
    """
    k = cond.shape[0]
    joint = child_marginal[:, None] * cond  # axes (this, other)
    rows = np.empty((k, k))
    degenerate = []
    for b in range(k):
        mass = float(joint[:, b].sum())
        if mass <= 0.0:
            rows[b] = 1.0 / k
            degenerate.append(b)
        else:
            rows[b] = joint[:, b] / mass
    return rows, degenerate


def reroot(m: TreeModel, new_root: int) -> TreeModel:
    """Reorient the same distribution at a different root.

    Edge conditionals along the old-root-to-new-root path are recomputed from
    exact pair marginals; the represented joint is unchanged.
    """
    if not 0 <= new_root < m.n:
        raise ValueError(f"node {new_root} out of range")
    if new_root == m.tree.root:
        return m
    marginals = node_marginals(m)
    adjacency = m.tree.skeleton().adjacency()
    parent = _bfs_parents(m.n, adjacency, new_root)
    tree = RootedTree(m.n, new_root, parent)
    cpt = {}
    flags = []
    for node in range(m.n):
        if node == new_root:
            continue
        p = parent[node]
        if m.tree.parent[node] == p:
            cpt[node] = m.cpt[node]
        else:
            # The edge flips: previously node was the parent of p.
            rows, degenerate = _flip_conditional(marginals[node], marginals[p], m.cpt[p])
            cpt[node] = rows
            flags.extend((node, b) for b in degenerate)
    return TreeModel(tree, m.alphabet, marginals[new_root], cpt, tuple(flags))


def sample(m: TreeModel, count: int, seed: int):
    """Ancestral sampling: the root is drawn first, then each node in
    topological order given its parent's symbol.  The same (model, count,
    seed) always produces the identical sample set.
    """
    from .estimation import SampleSet  # estimation builds on model types

    if count < 0:
        raise ValueError("count must be >= 0")
    k, n = m.k, m.n
    rows = np.zeros((count, n), dtype=np.uint8)
    rng = np.random.default_rng(seed)
    for node in m.tree.topological_order():
        u = rng.random(count)
        if node == m.tree.root:
            cum = np.cumsum(m.root_marginal)
            idx = (cum[None, :] < u[:, None]).sum(axis=1)
        else:
            cum = np.cumsum(m.cpt[node], axis=1)
            parent_sym = rows[:, m.tree.parent[node]].astype(np.intp)
            idx = (cum[parent_sym] < u[:, None]).sum(axis=1)
        rows[:, node] = np.minimum(idx, k - 1)
    return SampleSet(m.alphabet, rows)


def sample_dense(p: DenseJoint, count: int, seed: int):
    """Draw iid assignments from a dense joint by inverse-CDF on the flat table."""
    from .estimation import SampleSet

    if count < 0:
        raise ValueError("count must be >= 0")
    if p.k > 256:
        raise ValueError("sample sets store one byte per symbol; alphabet too large")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(p.probs)
    flat = np.searchsorted(cum, rng.random(count), side="left")
    flat = np.minimum(flat, p.probs.shape[0] - 1)
    rows = np.empty((count, p.n), dtype=np.uint8)
    rem = flat.astype(np.int64)
    for j in range(p.n - 1, -1, -1):
        rows[:, j] = rem % p.k
        rem //= p.k
    return SampleSet(p.alphabet, rows)


def _step_matrix(m: TreeModel, marginals: np.ndarray, a: int, b: int) -> np.ndarray:
    """Transition P(X_b | X_a) for adjacent nodes a, b."""
    k = m.k
    if m.tree.parent[b] == a:
        return m.cpt[b]
    # a is the child of b: invert the stored conditional through the joint.
    joint = marginals[b][:, None] * m.cpt[a]  # axes (b, a)
    out = np.empty((k, k))
    for x in range(k):
        mass = float(joint[:, x].sum())
        # Zero-mass symbols never occur, so their outgoing row is irrelevant;
        # uniform keeps the matrix stochastic.
        out[x] = joint[:, x] / mass if mass > 0.0 else 1.0 / k
    return out


def pair_marginal(m: TreeModel, u: int, v: int) -> np.ndarray:
    """Exact joint table of (X_u, X_v) via transition composition along the
    tree path, without materializing the full joint."""
    if u == v:
        raise ValueError("need two distinct variables")
    for x in (u, v):
        if not 0 <= x < m.n:
            raise ValueError(f"node {x} out of range")
    marginals = node_marginals(m)
    path = m.tree.path(u, v)
    trans = np.eye(m.k)
    for a, b in zip(path, path[1:]):
        trans = trans @ _step_matrix(m, marginals, a, b)
    return marginals[u][:, None] * trans


def exact_mi_matrix(m: TreeModel) -> np.ndarray:
    """Pairwise mutual information of all variable pairs under the model."""
    w = np.zeros((m.n, m.n))
    for u in range(m.n):
        for v in range(u + 1, m.n):
            w[u, v] = w[v, u] = mutual_information(pair_marginal(m, u, v))
    return w


def project_onto_tree(p: DenseJoint, t: UndirectedTree, root: int) -> TreeModel:
    """Closest tree-factored distribution with skeleton t: the one whose root
    marginal and edge conditionals are read off p itself.

    Parent symbols with zero probability get uniform rows; those are recorded
    in the result's `uniform_rows`.
    """
    if p.n != t.n:
        raise ValueError(f"joint has {p.n} variables but tree has {t.n} nodes")
    if not 0 <= root < p.n:
        raise ValueError(f"root {root} out of range")
    parent = _bfs_parents(p.n, t.adjacency(), root)
    tree = RootedTree(p.n, root, parent)
    k = p.k
    cpt = {}
    flags = []
    for node in range(p.n):
        if node == root:
            continue
        pm = p.marginal((parent[node], node))
        rows = np.empty((k, k))
        for a in range(k):
            mass = float(pm[a].sum())
            if mass <= 0.0:
                rows[a] = 1.0 / k
                flags.append((node, a))
            else:
                rows[a] = pm[a] / mass
        cpt[node] = rows
    return TreeModel(tree, p.alphabet, p.marginal((root,)), cpt, tuple(flags))


def _kl_arrays(p, q) -> float:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    mask = p > 0
    if np.any(q[mask] == 0.0):
        return math.inf
    pm = p[mask]
    return float(np.sum(pm * np.log(pm / q[mask])))


def kl_divergence(p: DenseJoint, q: DenseJoint) -> float:
    """KL divergence D(p || q) in nats; +inf when q misses mass p carries."""
    if p.n != q.n or p.k != q.k:
        raise ValueError("distributions live on different spaces")
    return _kl_arrays(p.probs, q.probs)


@dataclass(frozen=True)
class ProjectionReport:
    """KL from p to its projection onto a tree, split into the tree-free part
    (total correlation) minus the tree weight."""

    total_correlation: float
    tree_weight: float
    kl: float


def kl_to_tree_projection(p: DenseJoint, t: UndirectedTree) -> ProjectionReport:
    """D(p || projection of p onto t) = total_correlation(p) - weight_p(t),
    where the weight is the sum of pairwise MI over the tree's edges."""
    if p.n != t.n:
        raise ValueError(f"joint has {p.n} variables but tree has {t.n} nodes")
    total_corr = sum(entropy(p.marginal((v,))) for v in range(p.n)) - entropy(p.probs)
    weight = sum(mutual_information(p.marginal(e)) for e in t.edges)
    return ProjectionReport(total_correlation=total_corr, tree_weight=weight, kl=total_corr - weight)


@dataclass(frozen=True)
class KLDecomposition:
    """D(p || m) split as base_term - weight_term + conditional_term, where
    base_term is the total correlation of p, weight_term is p's MI summed over
    m's edges, and conditional_term is the parent-averaged KL between the
    conditional rows of p and of m (zero exactly when m is p's projection)."""

    base_term: float
    weight_term: float
    conditional_term: float
    total: float


def kl_decomposition(p: DenseJoint, m: TreeModel) -> KLDecomposition:
    if p.n != m.n or p.k != m.k:
        raise ValueError("distributions live on different spaces")
    base = sum(entropy(p.marginal((v,))) for v in range(p.n)) - entropy(p.probs)
    weight = 0.0
    conditional = _kl_arrays(p.marginal((m.tree.root,)), m.root_marginal)
    for node in range(p.n):
        if node == m.tree.root:
            continue
        pa = m.tree.parent[node]
        pm = p.marginal((pa, node))
        weight += mutual_information(pm)
        pa_marginal = pm.sum(axis=1)
        for a in range(p.k):
            if pa_marginal[a] <= 0.0:
                continue
            term = _kl_arrays(pm[a] / pa_marginal[a], m.cpt[node][a])
            if math.isinf(term):
                conditional = math.inf
                break
            conditional += float(pa_marginal[a]) * term
        if math.isinf(conditional):
            break
    return KLDecomposition(
        base_term=base,
        weight_term=weight,
        conditional_term=conditional,
        total=base - weight + conditional,
    )


@dataclass(frozen=True)
class DistanceReport:
    tv: float
    hellinger_sq: float


def statistical_distances(p: DenseJoint, q: DenseJoint) -> DistanceReport:
    """Total variation and squared Hellinger distance between dense joints."""
    if p.n != q.n or p.k != q.k:
        raise ValueError("distributions live on different spaces")
    tv = 0.5 * float(np.abs(p.probs - q.probs).sum())
    hell = 0.5 * float(((np.sqrt(p.probs) - np.sqrt(q.probs)) ** 2).sum())
    clamp = lambda x: min(max(x, 0.0), 1.0)
    return DistanceReport(tv=clamp(tv), hellinger_sq=clamp(hell))


def random_spanning_tree(n: int, rng: np.random.Generator) -> UndirectedTree:
    """Uniform random labeled tree, built by decoding a random Pruefer sequence."""
    if n == 1:
        return UndirectedTree(1, ())
    if n == 2:
        return UndirectedTree(2, ((0, 1),))
    seq = rng.integers(0, n, size=n - 2)
    degree = np.ones(n, dtype=np.int64)
    for s in seq:
        degree[s] += 1
    edges = []
    leaves = sorted(i for i in range(n) if degree[i] == 1)
    heapq.heapify(leaves)
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, int(s)), max(leaf, int(s))))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, int(s))
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return UndirectedTree(n, tuple(edges))


def random_tree_model(n: int, k: int, seed: int, cpt_floor: float = 0.05) -> TreeModel:
    """Random ground-truth model: a uniform random tree rooted at node 0 with
    Dirichlet(1) rows rescaled so every probability is at least `cpt_floor`.
    The floor keeps all conditionals bounded away from zero, which the
    recovery experiments rely on."""
    if not 0.0 <= cpt_floor * k < 1.0:
        raise ValueError(f"cpt floor {cpt_floor} infeasible for alphabet size {k}")
    rng = np.random.default_rng(seed)
    skeleton = random_spanning_tree(n, rng)
    parent = _bfs_parents(n, skeleton.adjacency(), 0)
    tree = RootedTree(n, 0, parent)
    scale = 1.0 - k * cpt_floor

    def row():
        return cpt_floor + scale * rng.dirichlet(np.ones(k))

    root_marginal = row()
    cpt = {}
    for node in range(n):
        if node == 0:
            continue
        cpt[node] = np.stack([row() for _ in range(k)])
    return TreeModel(tree, Alphabet(k), root_marginal, cpt)


# -- JSON serialization -------------------------------------------------------
#
# Floats go through json.dumps, which emits repr() output, so every value
# round-trips exactly (shortest-repr is stronger than 17 significant digits).


def dense_joint_to_json(p: DenseJoint, indent=None) -> str:
    doc = {"n": p.n, "k": p.k, "probs": [float(x) for x in p.probs]}
    return json.dumps(doc, indent=indent)


def dense_joint_from_json(text: str) -> DenseJoint:
    doc = json.loads(text)
    return DenseJoint(int(doc["n"]), Alphabet(int(doc["k"])), np.array(doc["probs"], dtype=np.float64))


def undirected_tree_to_json(t: UndirectedTree, indent=None) -> str:
    doc = {"n": t.n, "edges": [[u, v] for u, v in t.edges]}
    return json.dumps(doc, indent=indent)


def undirected_tree_from_json(text: str) -> UndirectedTree:
    doc = json.loads(text)
    return UndirectedTree(int(doc["n"]), tuple((int(u), int(v)) for u, v in doc["edges"]))


def tree_model_to_json(m: TreeModel, indent=None) -> str:
    doc = {
        "n": m.n,
        "k": m.k,
        "root": m.tree.root,
        "parents": list(m.tree.parent),
        "root_marginal": [float(x) for x in m.root_marginal],
        "cpt": {str(node): [[float(x) for x in row] for row in m.cpt[node]] for node in sorted(m.cpt)},
    }
    return json.dumps(doc, indent=indent)


def tree_model_from_json(text: str) -> TreeModel:
    doc = json.loads(text)
    n = int(doc["n"])
    k = int(doc["k"])
    tree = RootedTree(n, int(doc["root"]), tuple(int(p) for p in doc["parents"]))
    cpt = {int(node): np.array(rows, dtype=np.float64) for node, rows in doc["cpt"].items()}
    return TreeModel(tree, Alphabet(k), np.array(doc["root_marginal"], dtype=np.float64), cpt)
