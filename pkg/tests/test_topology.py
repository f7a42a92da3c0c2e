import json

import pytest

from graphregen.topology import Graph, GraphError, bfs_distances, build_repair_tree, running_example, select_helpers


def test_running_example_shape(graph):
    assert graph.n == 7
    assert graph.neighbors(0) == [1, 2]
    assert graph.neighbors(1) == [0, 3, 4]
    assert bfs_distances(graph, 0) == {0: 0, 1: 1, 2: 1, 3: 2, 4: 2, 5: 2, 6: 2}


def test_running_example_tree(tree):
    assert tree.helpers == (1, 2, 3, 4, 5, 6)
    assert tree.parent == {1: 0, 2: 0, 3: 1, 4: 1, 5: 2, 6: 2}
    assert tree.subtree_size == {1: 3, 2: 3, 3: 1, 4: 1, 5: 1, 6: 1}
    assert tree.postorder() == [3, 4, 5, 6, 1, 2]
    assert tree.subtree(1) == [1, 3, 4]
    assert tree.children(0) == [1, 2]


def test_helper_selection_ties_by_index(graph):
    # from node 3: 1 at distance 1; 0 and 4 at distance 2; 2 at 3
    assert select_helpers(graph, 3, 3) == (0, 1, 4)
    assert select_helpers(graph, 3, 4) == (0, 1, 2, 4)


def test_helper_selection_errors(graph):
    with pytest.raises(GraphError):
        select_helpers(graph, 0, 7)
    with pytest.raises(GraphError):
        select_helpers(graph, 9, 2)


def test_tree_rejects_unreachable_helpers(graph):
    # node 3 can reach 0 only through 1
    with pytest.raises(GraphError):
        build_repair_tree(graph, 0, [3])
    with pytest.raises(GraphError):
        build_repair_tree(graph, 0, [0, 1])


def test_parent_is_lowest_index_choice():
    g = Graph(4, ((0, 1), (0, 2), (1, 3), (2, 3)))
    t = build_repair_tree(g, 0, [1, 2, 3])
    assert t.parent[3] == 1
    assert t.subtree_size[1] == 2


def test_star_and_path_trees():
    star = Graph.star(5)
    t = build_repair_tree(star, 0, select_helpers(star, 0, 4))
    assert all(p == 0 for p in t.parent.values())
    path = Graph.path(4)
    t = build_repair_tree(path, 0, select_helpers(path, 0, 3))
    assert t.subtree_size == {1: 3, 2: 2, 3: 1}


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(3, ((0, 0),))
    with pytest.raises(GraphError):
        Graph(3, ((0, 1), (1, 0), (1, 2)))
    with pytest.raises(GraphError):
        Graph(3, ((0, 5),))
    with pytest.raises(GraphError):
        Graph(4, ((0, 1), (2, 3)))


def test_json_roundtrip(tmp_path):
    g = running_example()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g.to_json()))
    assert Graph.load(path) == g
    assert Graph.complete(4).edges == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
