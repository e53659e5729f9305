# hierarchy.py
import logging
from collections import deque
from typing import Dict, List, Literal, Optional, Set, Tuple

from pydantic import BaseModel

from .errors import InvalidInputError, StrictCycleError, UnknownNodeError

logger = logging.getLogger(__name__)

CANONICAL = ("=ω", "=2^ω", "E0", "E1", "EF2", "=+", "ESinf", "EG0", "EKsigma", "ESigma11")


class RelationNode(BaseModel):
    id: str
    kind: Literal["canonical", "derived"] = "canonical"


class ReducibilityEdge(BaseModel):
    source: str
    target: str
    strict: bool
    citation: str


def _finite_levels(levels: int) -> List[str]:
    return [f"={n}" for n in range(1, levels + 1)]


def seed_edges(levels: int = 3) -> List[Tuple[str, str, bool, str]]:
    """(source, target, strict, citation) for the cited reducibility chains."""
    cardinality = _finite_levels(levels) + ["=ω", "=2^ω"]
    edges = [(a, b, True, "cardinality-chain") for a, b in zip(cardinality, cardinality[1:])]
    edges += [
        ("=2^ω", "E0", True, "E0-above-equality"),
        ("E0", "EF2", True, "orbit-chain"),
        ("EF2", "ESinf", True, "orbit-chain"),
        ("ESinf", "EG0", True, "orbit-chain"),
        ("E1", "EKsigma", True, "E1-below-EKsigma"),
        ("EF2", "=+", True, "equality-jump"),
        ("=+", "ESinf", True, "equality-jump"),
        ("H0", "EKsigma", False, "H0-Ksigma-complete"),
        ("EKsigma", "H0", False, "H0-Ksigma-complete"),
        ("EG0", "ESigma11", False, "analytic-maximum"),
        ("EKsigma", "ESigma11", False, "analytic-maximum"),
    ]
    return edges


class ReducibilityRegistry:
    """Relations as nodes, cited Borel reductions as edges.

    Only positively cited facts are stored: incomparability is the absence of
    a path, never an explicit edge.
    """

    def __init__(self):
        self.nodes: Dict[str, RelationNode] = {}
        self.edges: Dict[Tuple[str, str], ReducibilityEdge] = {}
        self._out: Dict[str, Set[str]] = {}

    @classmethod
    def seeded(cls, levels: int = 3) -> "ReducibilityRegistry":
        if levels < 1:
            raise InvalidInputError(f"at least one finite equality level is needed, got {levels}")
        registry = cls()
        for node_id in _finite_levels(levels) + list(CANONICAL):
            registry.register(node_id)
        registry.register("H0", kind="derived")
        for source, target, strict, citation in seed_edges(levels):
            registry.add_edge(source, target, strict=strict, citation=citation)
        logger.debug(f"seeded registry: {len(registry.nodes)} nodes, {len(registry.edges)} edges")
        return registry

    def register(self, node_id: str, kind: str = "canonical") -> RelationNode:
        if not node_id:
            raise InvalidInputError("relation ids cannot be empty")
        if node_id in self.nodes:
            return self.nodes[node_id]
        node = RelationNode(id=node_id, kind=kind)
        self.nodes[node_id] = node
        self._out[node_id] = set()
        return node

    def register_product(self, a: str, b: str) -> RelationNode:
        """R (x) R' with the reductions x -> (x, y0) and y -> (x0, y) from each factor."""
        self._require(a, b)
        node = self.register(f"{a}⊗{b}", kind="derived")
        for factor in (a, b):
            if (factor, node.id) not in self.edges:
                self.add_edge(factor, node.id, strict=False, citation="product-factor")
        return node

    def _require(self, *node_ids: str) -> None:
        for node_id in node_ids:
            if node_id not in self.nodes:
                raise UnknownNodeError(f"unknown relation {node_id!r}")

    def _path_with_strict_edge(self, source: str, target: str) -> bool:
        # states are (node, has a strict edge been used)
        seen = {(source, False)}
        queue = deque(seen)
        while queue:
            node, used = queue.popleft()
            if node == target and used:
                return True
            for nxt in self._out[node]:
                state = (nxt, used or self.edges[(node, nxt)].strict)
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
        return False

    def add_edge(self, source: str, target: str, strict: bool, citation: str = "user") -> ReducibilityEdge:
        self._require(source, target)
        if source == target:
            raise InvalidInputError("self-loops carry no information; reachability is already reflexive")
        closes_strict_cycle = (strict and self.reachable(target, source)) or self._path_with_strict_edge(
            target, source
        )
        if closes_strict_cycle:
            raise StrictCycleError(f"{source} -> {target} would close a cycle through a strict reduction")
        edge = ReducibilityEdge(source=source, target=target, strict=strict, citation=citation)
        self.edges[(source, target)] = edge
        self._out[source].add(target)
        return edge

    def reachable(self, a: str, b: str) -> bool:
        """a <=_B b through the transitive closure of the stored edges."""
        self._require(a, b)
        seen = {a}
        queue = deque([a])
        while queue:
            node = queue.popleft()
            if node == b:
                return True
            for nxt in self._out[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return False

    def strictly_below(self, a: str, b: str) -> bool:
        return self.reachable(a, b) and not self.reachable(b, a)

    def bireducibility_classes(self) -> List[List[str]]:
        classes: List[List[str]] = []
        placed: Set[str] = set()
        for node_id in sorted(self.nodes):
            if node_id in placed:
                continue
            members = sorted(n for n in self.nodes if self.reachable(node_id, n) and self.reachable(n, node_id))
            placed.update(members)
            classes.append(members)
        return classes

    def strict_part_acyclic(self) -> bool:
        strict_out: Dict[str, List[str]] = {n: [] for n in self.nodes}
        indegree = {n: 0 for n in self.nodes}
        for (source, target), edge in self.edges.items():
            if edge.strict:
                strict_out[source].append(target)
                indegree[target] += 1
        queue = deque(n for n, d in indegree.items() if d == 0)
        visited = 0
        while queue:
            node = queue.popleft()
            visited += 1
            for nxt in strict_out[node]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    queue.append(nxt)
        return visited == len(self.nodes)

    def edge_set(self) -> Set[Tuple[str, str, bool]]:
        return {(e.source, e.target, e.strict) for e in self.edges.values()}

    def export_dot(self, name: str = "reducibility") -> str:
        """Deterministic DOT text: strict edges solid, other reductions dashed, bireducible pairs doubled."""
        lines = [f"digraph {name} {{"]
        for node_id in sorted(self.nodes):
            lines.append(f'  "{node_id}";')
        for source, target in sorted(self.edges):
            edge = self.edges[(source, target)]
            mutual = (target, source) in self.edges
            if mutual:
                if source < target:
                    lines.append(f'  "{source}" -> "{target}" [dir=both, color="black:black"];')
            elif edge.strict:
                lines.append(f'  "{source}" -> "{target}";')
            else:
                lines.append(f'  "{source}" -> "{target}" [style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "nodes": [self.nodes[n].model_dump() for n in sorted(self.nodes)],
            "edges": [self.edges[key].model_dump() for key in sorted(self.edges)],
        }


def seed_registry(levels: int = 3) -> ReducibilityRegistry:
    return ReducibilityRegistry.seeded(levels)


def reachable(graph: ReducibilityRegistry, a: str, b: str) -> bool:
    return graph.reachable(a, b)


def export_dot(graph: ReducibilityRegistry, name: Optional[str] = None) -> str:
    return graph.export_dot(name or "reducibility")
