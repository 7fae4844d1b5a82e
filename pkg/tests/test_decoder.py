import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compasscoh import (Coloring, build_code, build_matching_graph,
                        decode_bruteforce, decode_mwpm, family_rotated_surface,
                        family_x_shor, family_z_shor, family_z_stacked,
                        random_coloring, syndrome_of)
from compasscoh.decoder import syndrome_to_mask


def rep_code(l):
    return build_code(Coloring(1, l, ()))


class TestMatchingGraph:
    def test_repetition_chain(self):
        graph = build_matching_graph(rep_code(3))
        assert graph.num_checks == 2
        b = graph.boundary
        assert graph.edges == ((0, b), (0, 1), (1, b))
        assert graph.stabilizer_free == ()

    def test_z_shor_parallel_edges(self):
        graph = build_matching_graph(build_code(family_z_shor(3, 3)))
        assert graph.num_checks == 2
        pairs = [e for e in graph.edges if e == (0, 1)]
        assert len(pairs) == 3  # one edge per middle-column qubit
        # lowest-index witness qubit on the collapsed parallel bundle
        assert graph.path[0][1] == 1 << 1

    def test_x_shor_disjoint_rows(self):
        graph = build_matching_graph(build_code(family_x_shor(3, 3)))
        assert graph.num_checks == 6
        # checks 0 and 3 share qubit 1 (row 0); rows connect only via boundary
        assert graph.dist[0][3] == 1
        assert graph.dist[0][1] == graph.dist[0][graph.boundary] + graph.dist[1][graph.boundary]

    def test_distances_symmetric_triangle(self):
        graph = build_matching_graph(build_code(family_rotated_surface(5)))
        nodes = range(graph.num_checks + 1)
        for a in nodes:
            for b in nodes:
                assert graph.dist[a][b] == graph.dist[b][a]
                for c in nodes:
                    assert graph.dist[a][b] <= graph.dist[a][c] + graph.dist[c][b]

    def test_single_column_code_has_no_checks(self):
        graph = build_matching_graph(build_code(Coloring(4, 1, ())))
        assert graph.num_checks == 0
        assert len(graph.stabilizer_free) == 4


class TestDecodeExamples:
    def test_zero_syndrome_empty(self):
        graph = build_matching_graph(rep_code(5))
        assert decode_mwpm(graph, 0).mask == 0
        assert decode_bruteforce(rep_code(5), 0).mask == 0

    def test_repetition5_boundary_flag(self):
        graph = build_matching_graph(rep_code(5))
        corr = decode_mwpm(graph, "10000"[: graph.num_checks])
        assert corr.qubits == (0,)

    def test_repetition5_inner_pair(self):
        graph = build_matching_graph(rep_code(5))
        corr = decode_mwpm(graph, [0, 1, 1, 0])
        assert corr.qubits == (2,)

    def test_rsc3_corner_check(self):
        code = build_code(family_rotated_surface(3))
        corner = next(k for k, s in enumerate(code.x_stabilizers)
                      if s.weight == 2 and 0 in s.qubits)
        corr = decode_mwpm(build_matching_graph(code), 1 << corner)
        assert corr.qubits == (0,)

    def test_syndrome_string_and_sequence_agree(self):
        graph = build_matching_graph(rep_code(5))
        assert decode_mwpm(graph, "0110").mask == decode_mwpm(graph, [0, 1, 1, 0]).mask

    def test_bad_syndrome_rejected(self):
        graph = build_matching_graph(rep_code(5))
        with pytest.raises(ValueError):
            decode_mwpm(graph, "01")
        with pytest.raises(ValueError):
            decode_mwpm(graph, "01x0")

    def test_bruteforce_size_limit(self):
        code = build_code(family_z_shor(5, 5))
        with pytest.raises(ValueError):
            decode_bruteforce(code, 0)


def _all_syndrome_comparison(code):
    graph = build_matching_graph(code)
    num = 1 << graph.num_checks
    for s in range(num):
        mwpm = decode_mwpm(graph, s)
        brute = decode_bruteforce(code, s)
        assert syndrome_of(code, mwpm.mask) == s
        assert mwpm.weight == brute.weight, (code.coloring, s)
        assert mwpm.mask == brute.mask, (code.coloring, s)


@pytest.mark.parametrize("coloring", [
    family_z_shor(3, 3), family_x_shor(3, 3), family_rotated_surface(3),
    family_z_stacked(3, 2), Coloring(1, 7, ()),
])
def test_mwpm_matches_bruteforce_exhaustively(coloring):
    _all_syndrome_comparison(build_code(coloring))


@pytest.mark.parametrize("seed", range(6))
def test_mwpm_matches_bruteforce_random_3x5(seed):
    _all_syndrome_comparison(build_code(random_coloring(3, 5, 0.5, seed)))


def test_determinism_across_instances():
    code = build_code(random_coloring(3, 5, 0.4, 11))
    g1, g2 = build_matching_graph(code), build_matching_graph(code)
    for s in range(1 << g1.num_checks):
        assert decode_mwpm(g1, s).mask == decode_mwpm(g2, s).mask


@given(st.integers(1, 4), st.sampled_from([1, 3, 5]),
       st.floats(0, 1), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_weight_minimality_random(d_x, d_z, q, seed, syndrome_seed):
    code = build_code(random_coloring(d_x, d_z, q, seed))
    graph = build_matching_graph(code)
    s = syndrome_seed % (1 << graph.num_checks)
    corr = decode_mwpm(graph, s)
    brute = decode_bruteforce(code, s)
    assert syndrome_of(code, corr.mask) == s
    assert corr.weight == brute.weight <= code.n
    assert corr.mask == brute.mask


def test_syndrome_to_mask_bit_order():
    # check 0 is the leftmost character
    assert syndrome_to_mask("100", 3) == 0b001
    assert syndrome_to_mask("001", 3) == 0b100
