import pytest

from andor.graph import AndOrGraph


def build(objective, root, nodes, edges):
    return AndOrGraph.from_records(
        objective=objective, root=root, nodes=nodes, edges=edges
    )


@pytest.fixture
def nested_tree():
    """Alternating tree with optimal cost 34 (deep OR-AND-OR nesting)."""
    return build(
        "min",
        "v1",
        nodes=[
            ("v1", "or", 2),
            ("v2", "and", 1),
            ("v3", "terminal", 40),
            ("v4", "or", 1),
            ("v5", "or", 2),
            ("v6", "terminal", 12),
            ("v7", "terminal", 15),
            ("v8", "terminal", 9),
            ("v9", "terminal", 11),
        ],
        edges=[
            ("e2", "v1", "v2", 3),
            ("e3", "v1", "v3", 2),
            ("e4", "v2", "v4", 1),
            ("e5", "v2", "v5", 2),
            ("e6", "v4", "v6", 1),
            ("e7", "v4", "v7", 2),
            ("e8", "v5", "v8", 0),
            ("e9", "v5", "v9", 3),
        ],
    )


@pytest.fixture
def marked_tree():
    """Three-branch alternating tree exercising every marking case.

    Optimal cost 11.  The aggregated-cost marks are e2:5, e3:1, e9:3,
    e11:4, e13:3, e14:6 and the optimal solution's swap list contains
    exactly the swaps on e2 and e9.  Nine solutions in total, all of
    distinct cost: 11, 14, 16, 17, 20, 21, 24, 26, 30.
    """
    return build(
        "min",
        "v1",
        nodes=[
            ("v1", "or", 1),
            ("v2", "and", 1),
            ("v3", "terminal", 13),
            ("v4", "and", 1),
            ("v5", "or", 1),
            ("v6", "terminal", 2),
            ("v7", "or", 1),
            ("v8", "or", 1),
            ("v9", "terminal", 2),
            ("v10", "terminal", 5),
            ("v11", "terminal", 3),
            ("v12", "terminal", 7),
            ("v13", "terminal", 2),
            ("v14", "terminal", 5),
            ("v15", "terminal", 11),
        ],
        edges=[
            ("e2", "v1", "v2", 1),
            ("e3", "v1", "v3", 2),
            ("e4", "v1", "v4", 4),
            ("e5", "v4", "v5", 1),
            ("e6", "v2", "v6", 1),
            ("e7", "v2", "v7", 1),
            ("e8", "v4", "v8", 1),
            ("e9", "v7", "v9", 1),
            ("e10", "v7", "v10", 1),
            ("e11", "v5", "v11", 1),
            ("e12", "v5", "v12", 1),
            ("e13", "v8", "v13", 1),
            ("e14", "v8", "v14", 1),
            ("e15", "v8", "v15", 1),
        ],
    )


@pytest.fixture
def shared_dag():
    """DAG with one shared AND subtree, optimal cost 89.

    v5 hangs below both OR nodes v2 and v3, so in the optimal solution its
    subtree participates twice (participation count 2 at v5 and v7).  The
    three swap options are v2: e25>e24 (delta 2), v3: e35>e36 (delta 7)
    and v7: e79>e710 (delta 3).  Seven solutions under one-choice-per-OR
    semantics: 89, 91, 94, 95, 96, 98, 99.
    """
    return build(
        "min",
        "v1",
        nodes=[
            ("v1", "and", 25),
            ("v2", "or", 4),
            ("v3", "or", 2),
            ("v4", "terminal", 28),
            ("v5", "and", 3),
            ("v6", "terminal", 31),
            ("v7", "or", 2),
            ("v8", "terminal", 14),
            ("v9", "terminal", 3),
            ("v10", "terminal", 7),
        ],
        edges=[
            ("e12", "v1", "v2", 3),
            ("e13", "v1", "v3", 2),
            ("e25", "v2", "v5", 2),
            ("e24", "v2", "v4", 1),
            ("e35", "v3", "v5", 1),
            ("e36", "v3", "v6", 2),
            ("e57", "v5", "v7", 1),
            ("e58", "v5", "v8", 1),
            ("e79", "v7", "v9", 1),
            ("e710", "v7", "v10", 0),
        ],
    )


@pytest.fixture
def pool_tree():
    """Small tree for the bottom-up descriptor checks.

    At the root the second-best solution is the AND child's second-best
    (cost 37); at the AND node the second-best combination uses the first
    child's second solution and the second child's first (cost 32).
    """
    return build(
        "min",
        "v1",
        nodes=[
            ("v1", "or", 3),
            ("v2", "and", 2),
            ("v3", "terminal", 35),
            ("v5", "or", 1),
            ("v6", "or", 2),
            ("t1", "terminal", 10),
            ("t2", "terminal", 16),
            ("t3", "terminal", 6),
            ("t4", "terminal", 13),
        ],
        edges=[
            ("e2", "v1", "v2", 2),
            ("e3", "v1", "v3", 3),
            ("e5", "v2", "v5", 1),
            ("e6", "v2", "v6", 1),
            ("f1", "v5", "t1", 1),
            ("f2", "v5", "t2", 2),
            ("f3", "v6", "t3", 1),
            ("f4", "v6", "t4", 2),
        ],
    )


@pytest.fixture
def diamond():
    """Five-node DAG whose terminal n is reachable over two paths."""
    return build(
        "min",
        "root",
        nodes=[
            ("root", "and", 0),
            ("a", "or", 0),
            ("b", "or", 0),
            ("n", "terminal", 3),
            ("m", "terminal", 5),
        ],
        edges=[
            ("ra", "root", "a", 0),
            ("rb", "root", "b", 0),
            ("an", "a", "n", 0),
            ("am", "a", "m", 0),
            ("bn", "b", "n", 0),
        ],
    )


@pytest.fixture
def single_terminal():
    return build("min", "t", nodes=[("t", "terminal", 7)], edges=[])
