"""
Maximum clique search on int-bitset adjacency.

The exact search is branch and bound with greedy-colouring upper bounds: the
vertices of a candidate set split into colour classes (independent sets), and
a clique takes at most one vertex per class. A first pass finds the clique
number, a second pass walks candidates in increasing order to return the
lexicographically smallest clique of that size.
"""

import logging
from dataclasses import dataclass

from aeq.config import CLIQUE_SEARCH_LIMIT
from aeq.errors import CliqueLimitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliqueResult:
    vertices: list
    optimal: bool
    nodes: int = 0

    @property
    def size(self):
        return len(self.vertices)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _colour_classes(cand, adj):
    """Greedy colouring of cand (lowest vertex first), as a list of bitsets."""
    classes = []
    uncoloured = cand
    while uncoloured:
        colour = 0
        available = uncoloured
        while available:
            v = (available & -available).bit_length() - 1
            colour |= 1 << v
            available &= ~adj[v] & ~(1 << v)
        classes.append(colour)
        uncoloured &= ~colour
    return classes


class _Search:
    def __init__(self, adj):
        self.adj = adj
        self.nodes = 0
        self.best = []

    def clique_number(self, cand, lower):
        """Largest clique size in cand, at least `lower` (a known clique size)."""
        self.best_size = lower
        self._expand(0, cand)
        return self.best_size

    def _expand(self, size, cand):
        self.nodes += 1
        # Vertices ordered by colour; the vertex of colour c bounds its branch by c
        ordered = []
        for colour, members in enumerate(_colour_classes(cand, self.adj), start=1):
            ordered.extend((v, colour) for v in _bits(members))

        for v, colour in reversed(ordered):
            if size + colour <= self.best_size:
                return
            new_cand = cand & self.adj[v]
            if new_cand:
                self._expand(size + 1, new_cand)
            elif size + 1 > self.best_size:
                self.best_size = size + 1
            cand &= ~(1 << v)

    def first_clique(self, target, clique, cand):
        """Lexicographically first clique of `target` vertices extending clique."""
        self.nodes += 1
        if len(clique) == target:
            return list(clique)
        if len(clique) + len(_colour_classes(cand, self.adj)) < target:
            return None
        for v in _bits(cand):
            later = cand >> (v + 1) << (v + 1)
            found = self.first_clique(target, clique + [v], later & self.adj[v])
            if found is not None:
                return found
        return None


def max_clique(g, limit=CLIQUE_SEARCH_LIMIT, heuristic=False):
    """
    Maximum clique of g, lexicographically smallest among the maximum ones.

    Args:
        g: UnitDistanceGraph
        limit: largest vertex count the exact search accepts
        heuristic: return a greedy maximal clique instead (flagged non-optimal)

    Raises:
        CliqueLimitError: g.n > limit without heuristic
    """
    if heuristic:
        return CliqueResult(greedy_clique(g), optimal=False)
    if g.n > limit:
        raise CliqueLimitError(g.n, limit)
    if g.n == 0:
        return CliqueResult([], optimal=True)

    search = _Search(g.neighbour_masks)
    everything = (1 << g.n) - 1
    omega = search.clique_number(everything, len(greedy_clique(g)))
    vertices = search.first_clique(omega, [], everything)
    logger.info("Maximum clique of size %d after %d search nodes", omega, search.nodes)
    return CliqueResult(vertices, optimal=True, nodes=search.nodes)


def greedy_clique(g):
    """
    Maximal clique by multi-start greedy: from every start vertex, repeatedly add
    the candidate with most neighbours among the candidates (lowest index on
    ties). The largest result wins, lexicographically smallest on ties.
    """
    adj = g.neighbour_masks
    best = []
    for start in range(g.n):
        clique = [start]
        cand = adj[start]
        while cand:
            v = max(_bits(cand), key=lambda u: ((cand & adj[u]).bit_count(), -u))
            clique.append(v)
            cand &= adj[v]
        clique.sort()
        if len(clique) > len(best) or (len(clique) == len(best) and clique < best):
            best = clique
    return best
