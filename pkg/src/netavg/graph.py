"""Node sets, DAGs and skeletons over a fixed, ordered set of variables."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


class CycleError(ValueError):
    """Raised when an edge set contains a directed cycle."""

    def __init__(self, cycle: Sequence[int], names: Sequence[str] | None = None):
        self.cycle = list(cycle)
        label = [names[i] for i in cycle] if names else [str(i) for i in cycle]
        super().__init__("directed cycle: " + " -> ".join(label + label[:1]))


@dataclass(frozen=True)
class NodeSet:
    names: tuple[str, ...]

    def __init__(self, names: Iterable[str]):
        names = tuple(str(n) for n in names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate node names in {list(names)}")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __getitem__(self, i: int) -> str:
        return self.names[i]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown node {name!r}") from None


def enumerate_possible_edges(nodes: NodeSet | int) -> list[Edge]:
    """All unordered pairs ``(i, j)`` with ``i < j``, lexicographic by index."""
    n = nodes if isinstance(nodes, int) else len(nodes)
    if n < 1:
        raise ValueError("need at least one node")
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def pair_index(i: int, j: int, n: int) -> int:
    """Position of the unordered pair {i, j} in ``enumerate_possible_edges``."""
    if i == j:
        raise ValueError("self-pair has no index")
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _find_cycle(n: int, children: Sequence[Iterable[int]]) -> list[int] | None:
    color = [0] * n
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(sorted(children[root])))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            for v in it:
                if color[v] == 0:
                    color[v] = 1
                    parent[v] = u
                    stack.append((v, iter(sorted(children[v]))))
                    break
                if color[v] == 1:
                    cycle = [u]
                    while cycle[-1] != v:
                        cycle.append(parent[cycle[-1]])
                    return cycle[::-1]
            else:
                color[u] = 2
                stack.pop()
    return None


@dataclass(frozen=True)
class Dag:
    """Immutable DAG. Mutators return validated copies."""

    nodes: NodeSet
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.nodes)
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} nodes")
            if u == v:
                raise ValueError(f"self-loop on {self.nodes[u]!r}")
        object.__setattr__(self, "edges", edges)
        cycle = _find_cycle(n, self.children_lists())
        if cycle is not None:
            raise CycleError(cycle, self.nodes.names)

    @classmethod
    def from_names(cls, names: Iterable[str], arcs: Iterable[tuple[str, str]] = ()) -> Dag:
        nodes = NodeSet(names)
        return cls(nodes, frozenset((nodes.index(a), nodes.index(b)) for a, b in arcs))

    @classmethod
    def from_parents(cls, nodes: NodeSet, parents: Sequence[Iterable[int]]) -> Dag:
        return cls(nodes, frozenset((p, c) for c, ps in enumerate(parents) for p in ps))

    def __len__(self) -> int:
        return len(self.nodes)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def parents(self, v: int) -> list[int]:
        return sorted(u for u, w in self.edges if w == v)

    def children(self, u: int) -> list[int]:
        return sorted(w for p, w in self.edges if p == u)

    def parent_lists(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(len(self.nodes))]
        for u, v in sorted(self.edges):
            out[v].append(u)
        return out

    def children_lists(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(len(self.nodes))]
        for u, v in sorted(self.edges):
            out[u].append(v)
        return out

    def has_path(self, src: int, dst: int) -> bool:
        ch = self.children_lists()
        seen, stack = {src}, [src]
        while stack:
            u = stack.pop()
            if u == dst:
                return True
            for v in ch[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    def add_edge(self, u: int, v: int) -> Dag:
        if (u, v) in self.edges or (v, u) in self.edges:
            raise ValueError(f"nodes {u} and {v} are already adjacent")
        if u != v and self.has_path(v, u):
            raise CycleError([u] + self._path(v, u)[:-1], self.nodes.names)
        return Dag(self.nodes, self.edges | {(u, v)})

    def remove_edge(self, u: int, v: int) -> Dag:
        if (u, v) not in self.edges:
            raise KeyError(f"no edge ({u}, {v})")
        return Dag(self.nodes, self.edges - {(u, v)})

    def reverse_edge(self, u: int, v: int) -> Dag:
        return self.remove_edge(u, v).add_edge(v, u)

    def _path(self, src: int, dst: int) -> list[int]:
        ch = self.children_lists()
        prev = {src: -1}
        stack = [src]
        while stack:
            u = stack.pop()
            if u == dst:
                break
            for w in ch[u]:
                if w not in prev:
                    prev[w] = u
                    stack.append(w)
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        return path[::-1]


@dataclass(frozen=True)
class Skeleton:
    nodes: NodeSet
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        n = len(self.nodes)
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loop in skeleton")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def named_edges(self) -> list[tuple[str, str]]:
        return [(self.nodes[u], self.nodes[v]) for u, v in self.sorted_edges()]


def skeleton_of(dag: Dag) -> Skeleton:
    return Skeleton(dag.nodes, frozenset(dag.edges))


def topological_sort(dag: Dag | tuple[NodeSet | int, Iterable[Edge]]) -> list[int]:
    """Kahn's algorithm; ties go to the lowest node index.

    Accepts a ``Dag`` or a raw ``(nodes, edges)`` pair so cyclic inputs can be
    reported instead of rejected at construction.
    """
    if isinstance(dag, Dag):
        n, edges, names = len(dag.nodes), dag.edges, dag.nodes.names
    else:
        nodes, edges = dag
        n = nodes if isinstance(nodes, int) else len(nodes)
        names = None if isinstance(nodes, int) else nodes.names
        edges = set(edges)
    children: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for u, v in edges:
        children[u].append(v)
        indeg[v] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in children[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) < n:
        cycle = _find_cycle(n, children)
        raise CycleError(cycle or [], names)
    return order
