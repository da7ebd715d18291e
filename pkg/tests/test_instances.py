"""Instance generators and graph input formats."""

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import networkx as nx

from levelq import (
    Graph,
    ParseError,
    WeightDistribution,
    assign_weights,
    encode_graph6,
    gen_regular,
    gen_sk,
    grid_graph,
    mix_seed,
    parse_edge_list,
    parse_graph6,
    parse_graph6_file,
    unit_instance,
)

FIXTURES = Path(__file__).parent / "fixtures"


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------

def test_mix_seed_is_deterministic_and_spreads():
    assert mix_seed(0, 0) == mix_seed(0, 0)
    derived = {mix_seed(12345, k) for k in range(1000)}
    assert len(derived) == 1000
    assert all(0 <= s < (1 << 64) for s in derived)
    assert mix_seed(1, 2) != mix_seed(2, 1)


# ---------------------------------------------------------------------------
# regular graphs
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n,d", [(8, 3), (10, 3), (9, 4), (12, 5)])
def test_gen_regular_degrees(n, d):
    g = gen_regular(n, d, seed=7)
    assert g.n == n
    assert g.degrees() == [d] * n
    assert all(a < b for a, b in g.edges)
    assert len(set(g.edges)) == len(g.edges)


def test_gen_regular_deterministic():
    assert gen_regular(10, 3, seed=5).edges == gen_regular(10, 3, seed=5).edges
    assert gen_regular(10, 3, seed=5).edges != gen_regular(10, 3, seed=6).edges


def test_gen_regular_rejects_impossible():
    with pytest.raises(ValueError):
        gen_regular(5, 3, seed=0)  # n*d odd
    with pytest.raises(ValueError):
        gen_regular(4, 4, seed=0)  # d >= n


def test_grid_graph_2x3():
    g = grid_graph(2, 3)
    assert g.n == 6
    assert len(g.edges) == 7
    assert (0, 1) in g.edges and (0, 3) in g.edges
    with pytest.raises(ValueError):
        grid_graph(0, 3)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def test_assign_weights_unit_and_pm1():
    g = grid_graph(2, 3)
    unit = assign_weights(g, WeightDistribution.unit(), seed=0)
    assert all(w == 1.0 for _, _, w in unit.couplings)
    assert unit.fields == ()
    pm1 = assign_weights(g, WeightDistribution.plus_minus_one(), seed=0)
    assert all(w in (-1.0, 1.0) for _, _, w in pm1.couplings)


def test_assign_weights_poisson_is_nonnegative_integers():
    g = gen_regular(12, 3, seed=3)
    inst = assign_weights(g, WeightDistribution.poisson(), seed=9)
    ws = [w for _, _, w in inst.couplings]
    assert all(w >= 0 and w == int(w) for w in ws)
    # lambda=1 keeps zero-weight edges with probability e^-1; expect some
    inst_many = assign_weights(gen_regular(40, 3, seed=1),
                               WeightDistribution.poisson(), seed=2)
    assert any(w == 0.0 for _, _, w in inst_many.couplings)


def test_assign_weights_deterministic():
    g = gen_regular(10, 3, seed=11)
    dist = WeightDistribution.normal()
    a = assign_weights(g, dist, seed=4)
    b = assign_weights(g, dist, seed=4)
    assert a == b


def test_unit_instance_is_field_free():
    inst = unit_instance(grid_graph(2, 2))
    assert not inst.has_fields()
    assert len(inst.couplings) == 4


# ---------------------------------------------------------------------------
# SK replicas
# ---------------------------------------------------------------------------

def test_gen_sk_structure():
    inst = gen_sk(6, 0.5, seed=1)
    assert len(inst.couplings) == 15  # complete graph
    assert all(w in (-1.0, 1.0) for _, _, w in inst.couplings)
    assert inst.fields == tuple((i, 0.5) for i in range(6))
    assert inst.has_fields()


def test_gen_sk_zero_field_is_field_free():
    inst = gen_sk(5, 0.0, seed=1)
    assert not inst.has_fields()


def test_gen_sk_deterministic():
    assert gen_sk(8, 1.0, seed=3) == gen_sk(8, 1.0, seed=3)
    assert gen_sk(8, 1.0, seed=3) != gen_sk(8, 1.0, seed=4)


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def test_encode_known_small_graphs():
    # path 0-1 on 2 vertices and triangle, checked against networkx
    p2 = Graph(2, ((0, 1),))
    tri = Graph(3, ((0, 1), (0, 2), (1, 2)))
    for g in (p2, tri):
        line = encode_graph6(g)
        gx = nx.from_graph6_bytes(line.encode())
        assert set(map(tuple, map(sorted, gx.edges()))) == set(g.edges)


def test_parse_accepts_optional_header():
    line = encode_graph6(grid_graph(2, 2))
    assert parse_graph6(">>graph6<<" + line).edges == grid_graph(2, 2).edges


def test_parse_rejects_long_form_and_bad_bytes():
    with pytest.raises(ParseError):
        parse_graph6("~??")  # long-form size prefix unsupported
    with pytest.raises(ParseError):
        parse_graph6("B" + chr(30))  # byte below printable range
    with pytest.raises(ParseError):
        parse_graph6("")


def test_parse_rejects_bad_padding():
    # triangle needs padding bits; corrupt them
    line = encode_graph6(Graph(3, ((0, 1),)))
    corrupted = line[:-1] + chr(((ord(line[-1]) - 63) | 1) + 63)
    with pytest.raises(ParseError):
        parse_graph6(corrupted)


def test_parse_file_reports_line_numbers():
    good = encode_graph6(grid_graph(2, 2))
    text = good + "\n" + "~bad\n"
    with pytest.raises(ParseError) as err:
        parse_graph6_file(text)
    assert "line 2" in str(err.value)


def test_parse_file_skips_blanks_and_header():
    g = grid_graph(2, 3)
    text = ">>graph6<<" + encode_graph6(g) + "\n\n" + encode_graph6(g) + "\n"
    graphs = parse_graph6_file(text)
    assert len(graphs) == 2
    assert graphs[0].edges == g.edges


@st.composite
def graphs(draw):
    n = draw(st.integers(min_value=1, max_value=20))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs),
                         max_size=len(pairs)))
    return Graph(n, tuple(p for p, keep in zip(pairs, mask) if keep))


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_graph6_round_trip_against_networkx(g):
    line = encode_graph6(g)
    assert parse_graph6(line).edges == g.edges
    gx = nx.from_graph6_bytes(line.encode())
    assert gx.number_of_nodes() == g.n
    assert set(map(tuple, map(sorted, gx.edges()))) == set(g.edges)
    # and our parser agrees with networkx's encoder
    theirs = nx.to_graph6_bytes(gx, header=False).decode().strip()
    assert parse_graph6(theirs).edges == g.edges


def test_fixture_holds_the_five_cubic_graphs_on_8_vertices():
    """The checked-in fixture must be exactly the connected cubic graphs
    on 8 vertices, one per isomorphism class. Re-derived from scratch."""
    text = (FIXTURES / "u3r_n8.g6").read_text()
    fixture_graphs = parse_graph6_file(text)
    assert len(fixture_graphs) == 5
    for g in fixture_graphs:
        assert g.n == 8
        assert g.degrees() == [3] * 8
        gx = nx.Graph(list(g.edges))
        gx.add_nodes_from(range(8))
        assert nx.is_connected(gx)
    # pairwise nonisomorphic
    as_nx = [nx.Graph(list(g.edges)) for g in fixture_graphs]
    for a in range(5):
        for b in range(a + 1, 5):
            assert not nx.is_isomorphic(as_nx[a], as_nx[b])
    # and the class count is exactly five: enumerate all connected cubic
    # graphs on 8 vertices by backtracking over the ordered pair list
    pairs = [(i, j) for i in range(8) for j in range(i + 1, 8)]
    found = []

    def backtrack(start, chosen, deg):
        if len(chosen) == 12:
            if all(d == 3 for d in deg):
                found.append(tuple(chosen))
            return
        for k in range(start, len(pairs)):
            i, j = pairs[k]
            if deg[i] < 3 and deg[j] < 3:
                deg[i] += 1
                deg[j] += 1
                chosen.append((i, j))
                backtrack(k + 1, chosen, deg)
                chosen.pop()
                deg[i] -= 1
                deg[j] -= 1

    backtrack(0, [], [0] * 8)
    classes = []
    for edges in found:
        gx = nx.Graph(list(edges))
        gx.add_nodes_from(range(8))
        if not nx.is_connected(gx):
            continue
        if not any(nx.is_isomorphic(gx, c) for c in classes):
            classes.append(gx)
    assert len(classes) == 5
    # every fixture graph matches one enumerated class and vice versa
    for g in as_nx:
        assert sum(nx.is_isomorphic(g, c) for c in classes) == 1


# ---------------------------------------------------------------------------
# edge lists
# ---------------------------------------------------------------------------

def test_edge_list_basic():
    text = """# weighted triangle with one field
    n 3
    0 1 1.0
    1 2 -2.5
    0 2 0.5
    1 1 0.75
    """
    inst = parse_edge_list(text)
    assert inst.n == 3
    assert (1, 2, -2.5) in inst.couplings
    assert inst.fields == ((1, 0.75),)


def test_edge_list_infers_size_without_directive():
    inst = parse_edge_list("0 4 1.0\n")
    assert inst.n == 5


def test_edge_list_duplicate_reports_both_lines():
    text = "0 1 1.0\n1 0 2.0\n"
    with pytest.raises(ParseError) as err:
        parse_edge_list(text)
    msg = str(err.value)
    assert "1" in msg and "2" in msg


def test_edge_list_rejects_out_of_range_and_garbage():
    with pytest.raises(ParseError):
        parse_edge_list("n 2\n0 5 1.0\n")
    with pytest.raises(ParseError):
        parse_edge_list("0 one 1.0\n")
    with pytest.raises(ParseError):
        parse_edge_list("0 1\n")
