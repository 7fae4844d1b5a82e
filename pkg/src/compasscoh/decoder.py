"""Exact minimum-weight Z-error decoding from X syndromes.

Every qubit of a valid compass code touches at most two X checks, so
qubits are edges of a matching graph over the checks plus one boundary
node.  Decoding a syndrome is an exact minimum-weight perfect matching of
the flagged checks (each may also match to the boundary), solved by dynamic
programming over subsets of flagged nodes; greedy or approximate matching
is deliberately avoided because minimality is asserted against a brute
force.

Ties between equal-weight corrections are broken toward the support whose
ascending qubit-index tuple is lexicographically smallest, i.e. the
correction containing the lowest differing qubit wins.  Both decoders and
the shortest-path witnesses apply the same rule, so
``decode_mwpm`` and ``decode_bruteforce`` return identical supports.
"""

from __future__ import annotations

import numpy as np

from .codes import CompassCode, InvalidCodeError, PauliSupport

_INF = 10 ** 9


def _lex_less(a: int, b: int) -> bool:
    """Set order: a < b iff the smallest qubit where they differ is in a."""
    diff = a ^ b
    if diff == 0:
        return False
    low = diff & -diff
    return bool(a & low)


def syndrome_to_mask(syndrome, num_checks: int) -> int:
    """Normalize a syndrome (int mask, bit string, or 0/1 sequence; check 0 first)."""
    if isinstance(syndrome, (int, np.integer)):
        mask = int(syndrome)
    elif isinstance(syndrome, str):
        bits = [ch for ch in syndrome if not ch.isspace()]
        if len(bits) != num_checks or any(ch not in "01" for ch in bits):
            raise ValueError(f"syndrome string must be {num_checks} bits of 0/1")
        mask = sum(1 << i for i, ch in enumerate(bits) if ch == "1")
    else:
        bits = list(syndrome)
        if len(bits) != num_checks:
            raise ValueError(f"syndrome must have {num_checks} bits")
        mask = sum(1 << i for i, bit in enumerate(bits) if bit)
    if not 0 <= mask < (1 << num_checks):
        raise ValueError("syndrome out of range")
    return mask


def syndrome_of(code: CompassCode, z_mask: int) -> int:
    """X-syndrome of a Z support: bit k flips iff overlap with check k is odd."""
    s = 0
    for k, stab in enumerate(code.x_stabilizers):
        s |= ((z_mask & stab.mask).bit_count() & 1) << k
    return s


class MatchingGraph:
    """Checks-plus-boundary graph with all-pairs tie-broken shortest paths.

    Immutable after construction; decode results are memoized internally,
    which is safe to share across threads (idempotent cache writes).
    """

    def __init__(self, code: CompassCode):
        n = code.n
        num_checks = len(code.x_stabilizers)
        checks_of = [[] for _ in range(n)]
        for k, stab in enumerate(code.x_stabilizers):
            for q in stab.qubits:
                checks_of[q].append(k)

        boundary = num_checks
        edges: list[tuple[int, int] | None] = [None] * n
        free = []
        for q in range(n):
            cs = checks_of[q]
            if len(cs) > 2:
                raise InvalidCodeError(
                    f"qubit {q} lies in {len(cs)} X checks; not a compass code")
            if len(cs) == 2:
                edges[q] = (cs[0], cs[1])
            elif len(cs) == 1:
                edges[q] = (cs[0], boundary)
            else:
                free.append(q)

        num_nodes = num_checks + 1
        dist = [[_INF] * num_nodes for _ in range(num_nodes)]
        path = [[0] * num_nodes for _ in range(num_nodes)]
        for v in range(num_nodes):
            dist[v][v] = 0
        # parallel edges collapse to their lowest-index qubit for pathfinding
        step: dict[tuple[int, int], int] = {}
        for q in range(n):
            if edges[q] is None:
                continue
            u, v = edges[q]
            key = (min(u, v), max(u, v))
            if key not in step:  # qubit order is ascending, first wins
                step[key] = q
        adj = [[] for _ in range(num_nodes)]
        for (u, v), q in step.items():
            adj[u].append((v, q))
            adj[v].append((u, q))
        # Bellman-Ford fixpoint with (length, lex) tie-break; graphs are tiny
        for src in range(num_nodes):
            changed = True
            while changed:
                changed = False
                for u in range(num_nodes):
                    if dist[src][u] == _INF:
                        continue
                    for v, q in adj[u]:
                        cand_d = dist[src][u] + 1
                        cand_p = path[src][u] | (1 << q)
                        if cand_d < dist[src][v] or (
                                cand_d == dist[src][v]
                                and _lex_less(cand_p, path[src][v])):
                            dist[src][v] = cand_d
                            path[src][v] = cand_p
                            changed = True

        self.code = code
        self.n = n
        self.num_checks = num_checks
        self.boundary = boundary
        self.edges = tuple(edges)
        self.stabilizer_free = tuple(free)
        self.dist = dist
        self.path = path
        self._memo: dict[int, tuple[int, int]] = {0: (0, 0)}

    def match(self, flagged_mask: int) -> tuple[int, int]:
        """Minimum matching cost and tie-broken correction mask for a syndrome."""
        memo = self._memo
        hit = memo.get(flagged_mask)
        if hit is not None:
            return hit
        stack = [flagged_mask]
        while stack:
            s = stack[-1]
            if s in memo:
                stack.pop()
                continue
            i = (s & -s).bit_length() - 1
            rest_b = s & (s - 1)
            pending = False
            if rest_b not in memo:
                stack.append(rest_b)
                pending = True
            pairs = []
            r = rest_b
            while r:
                j = (r & -r).bit_length() - 1
                r &= r - 1
                rest_ij = rest_b & ~(1 << j)
                pairs.append((j, rest_ij))
                if rest_ij not in memo:
                    stack.append(rest_ij)
                    pending = True
            if pending:
                continue
            stack.pop()
            bd = self.dist[i][self.boundary]
            best: tuple[int, int] | None = None
            if bd < _INF:
                c, corr = memo[rest_b]
                best = (bd + c, self.path[i][self.boundary] | corr)
            for j, rest_ij in pairs:
                dij = self.dist[i][j]
                if dij >= _INF:
                    continue
                c, corr = memo[rest_ij]
                cand = (dij + c, self.path[i][j] | corr)
                if best is None or cand[0] < best[0] or (
                        cand[0] == best[0] and _lex_less(cand[1], best[1])):
                    best = cand
            if best is None:
                raise InvalidCodeError("syndrome not matchable; corrupt graph")
            memo[s] = best
        return memo[flagged_mask]


def build_matching_graph(code: CompassCode) -> MatchingGraph:
    return MatchingGraph(code)


def decode_mwpm(graph: MatchingGraph, syndrome) -> PauliSupport:
    """Exact min-weight Z correction reproducing the syndrome."""
    mask = syndrome_to_mask(syndrome, graph.num_checks)
    _, corr = graph.match(mask)
    return PauliSupport("Z", graph.n, corr)


# ---------------------------------------------------------------------------
# Brute-force oracle

def _brute_table(code: CompassCode) -> tuple[np.ndarray, np.ndarray]:
    """Per-syndrome (min weight, tie-broken correction) by full enumeration."""
    n = code.n
    r = len(code.x_stabilizers)
    v = np.arange(1 << n, dtype=np.uint64)
    w = np.bitwise_count(v).astype(np.int64)
    synd = np.zeros(1 << n, dtype=np.int64)
    for k, stab in enumerate(code.x_stabilizers):
        synd |= (np.bitwise_count(v & np.uint64(stab.mask)) & 1).astype(np.int64) << k
    rev = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        rev |= ((v >> np.uint64(i)) & np.uint64(1)).astype(np.int64) << (n - 1 - i)
    # minimize (weight, tuple-lex) == (weight, bit-reversed complement)
    key = (w << n) | ((1 << n) - 1 - rev)
    best = np.full(1 << r, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(best, synd, key)
    sel = key == best[synd]
    corr = np.zeros(1 << r, dtype=np.int64)
    corr[synd[sel]] = v[sel].astype(np.int64)
    weight = np.zeros(1 << r, dtype=np.int64)
    weight[synd[sel]] = w[sel]
    return weight, corr


_BRUTE_CACHE: dict[CompassCode, tuple[np.ndarray, np.ndarray]] = {}


def decode_bruteforce(code: CompassCode, syndrome) -> PauliSupport:
    """Exhaustive minimum-weight decoder; same tie-break as ``decode_mwpm``."""
    if code.n > 20:
        raise ValueError(f"brute-force decoding limited to n <= 20, got n={code.n}")
    table = _BRUTE_CACHE.get(code)
    if table is None:
        table = _brute_table(code)
        if len(_BRUTE_CACHE) > 8:
            _BRUTE_CACHE.clear()
        _BRUTE_CACHE[code] = table
    mask = syndrome_to_mask(syndrome, len(code.x_stabilizers))
    return PauliSupport("Z", code.n, int(table[1][mask]))
