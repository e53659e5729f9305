import pytest

from redlab.errors import InvalidInputError, StrictCycleError, UnknownNodeError
from redlab.hierarchy import ReducibilityRegistry, export_dot, reachable, seed_edges, seed_registry


@pytest.fixture
def registry():
    return seed_registry()


def test_seeded_edges_are_stored(registry):
    assert registry.edge_set() == {(a, b, strict) for a, b, strict, _ in seed_edges()}
    assert registry.nodes["H0"].kind == "derived"


@pytest.mark.parametrize(
    "source,target",
    [("=1", "=2^ω"), ("=2^ω", "E0"), ("E0", "EG0"), ("E1", "H0"), ("H0", "ESigma11"), ("EF2", "=+"), ("E0", "E0")],
)
def test_reachable(registry, source, target):
    assert reachable(registry, source, target)


@pytest.mark.parametrize("source,target", [("E0", "=2^ω"), ("E1", "E0"), ("ESigma11", "H0"), ("H0", "E1")])
def test_not_reachable(registry, source, target):
    assert not registry.reachable(source, target)


def test_strict_and_bireducible(registry):
    assert registry.strictly_below("E0", "ESinf")
    assert not registry.strictly_below("H0", "EKsigma")
    assert ["EKsigma", "H0"] in registry.bireducibility_classes()


def test_strict_part_is_acyclic(registry):
    assert registry.strict_part_acyclic()


def test_strict_cycle_is_refused(registry):
    with pytest.raises(StrictCycleError):
        registry.add_edge("EKsigma", "E1", strict=True)
    with pytest.raises(StrictCycleError):
        registry.add_edge("ESinf", "E0", strict=False)
    assert registry.strict_part_acyclic()


def test_non_strict_back_edge_between_non_strict_nodes(registry):
    registry.add_edge("ESigma11", "EG0", strict=False)
    assert registry.reachable("ESigma11", "EG0")


def test_unknown_and_self_edges(registry):
    with pytest.raises(UnknownNodeError):
        registry.reachable("E0", "E7")
    with pytest.raises(InvalidInputError):
        registry.add_edge("E0", "E0", strict=False)


def test_product_node(registry):
    node = registry.register_product("H0", "=+")
    assert node.id == "H0⊗=+"
    assert registry.reachable("E1", node.id)
    assert registry.reachable("=+", node.id)
    assert not registry.reachable(node.id, "H0")


def test_dot_export_is_deterministic(registry):
    text = export_dot(registry)
    assert text == ReducibilityRegistry.seeded().export_dot()
    assert text.startswith("digraph reducibility {")
    assert '  "E1" -> "EKsigma";' in text
    assert '  "EG0" -> "ESigma11" [style=dashed];' in text
    assert '  "EKsigma" -> "H0" [dir=both, color="black:black"];' in text
    assert '"H0" -> "EKsigma"' not in text


def test_levels(registry):
    assert "=5" in ReducibilityRegistry.seeded(levels=5).nodes
    with pytest.raises(InvalidInputError):
        ReducibilityRegistry.seeded(levels=0)


def test_json_export(registry):
    data = registry.to_json()
    assert {"id": "E0", "kind": "canonical"} in data["nodes"]
    assert {"source": "E1", "target": "EKsigma", "strict": True, "citation": "E1-below-EKsigma"} in data["edges"]
