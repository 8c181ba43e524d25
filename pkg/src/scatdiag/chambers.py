"""Cluster chambers, green-to-red search and refined DT series.

A chamber node is the pullback of the positive chamber of a mutated seed
through the inverses of the piecewise-linear maps attached to the mutation
sequence; its generators are the g-vectors and its inward facet normals
the c-vectors.  All vectors live in root-seed coordinates, exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .lattice import mat_inverse, mutate_seed, pair, rational_primitive
from .torus import GradedElement, dilog_group_element
from .scattering import expose, to_carrier


@dataclass(frozen=True)
class ChamberNode:
    """A cluster chamber reached by a mutation sequence from the root."""

    sequence: tuple     # vertices, 1-based
    generators: tuple   # g-vectors aligned with vertices, root coordinates
    cvectors: tuple     # primitive inward facet normals aligned with vertices

    def key(self):
        return frozenset(self.generators)


def chamber_from_sequence(seed, sequence, signs=None):
    """C^+ of the end seed pulled back along the sequence.

    The resulting cone is independent of the choice of signs; the default
    mutates with all minus signs.
    """
    n = seed.rank
    sequence = tuple(sequence)
    signs = tuple(signs) if signs is not None else (-1,) * len(sequence)
    assert len(signs) == len(sequence)
    # seeds along the path, as basis matrices in root coordinates
    mats = [tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))]
    cur = seed
    for k, eps in zip(sequence, signs):
        cur, change = mutate_seed(cur, k, eps)
        prev = mats[-1]
        mats.append(tuple(tuple(sum(prev[i][t] * change[t][j] for t in range(n))
                                for j in range(n)) for i in range(n)))
    # generators of C+ of the end seed: columns of (S^T)^{-1}
    end = mats[-1]
    st = tuple(tuple(Fraction(end[i][j]) for i in range(n)) for j in range(n))
    inv = mat_inverse(st)
    gens = [tuple(inv[i][j] for i in range(n)) for j in range(n)]
    # pull back through the inverse of each T_k^eps, last step first
    for idx in range(len(sequence) - 1, -1, -1):
        k, eps = sequence[idx], signs[idx]
        sk = tuple(mats[idx][i][k - 1] for i in range(n))
        pk = tuple(Fraction(sum(sk[a] * seed.b[a][i] for a in range(n)))
                   for i in range(n))
        interior = tuple(sum(g[i] for g in gens) for i in range(n))
        side = pair(interior, sk)
        if side == 0:
            raise ValueError("chamber degenerates onto the mutation wall")
        if eps == -1 and side > 0:       # (T_k^-)^{-1} acts by T_k^{-1} there
            gens = [tuple(g[i] - pk[i] * pair(g, sk) for i in range(n))
                    for g in gens]
        elif eps == 1 and side < 0:      # (T_k^+)^{-1} acts by T_k there
            gens = [tuple(g[i] + pk[i] * pair(g, sk) for i in range(n))
                    for g in gens]
    gens = [rational_primitive(g) for g in gens]
    gmat_t = tuple(tuple(Fraction(gens[j][i]) for j in range(n)) for i in range(n))
    ginv = mat_inverse(gmat_t)
    if ginv is None:
        raise ValueError("degenerate chamber")
    cvecs = tuple(rational_primitive(tuple(ginv[i][j] for j in range(n)))
                  for i in range(n))
    return ChamberNode(sequence, tuple(gens), cvecs)


def enumerate_chambers(seed, max_depth):
    """Breadth-first walk of the mutation tree, deduplicating chambers by
    their generator sets; immediate backtracking is skipped."""
    n = seed.rank
    root = chamber_from_sequence(seed, ())
    seen = {root.key(): root}
    queue = deque([()])
    while queue:
        seq = queue.popleft()
        if len(seq) >= max_depth:
            continue
        for k in range(1, n + 1):
            if seq and seq[-1] == k:
                continue
            child_seq = seq + (k,)
            node = chamber_from_sequence(seed, child_seq)
            if node.key() not in seen:
                seen[node.key()] = node
                queue.append(child_seq)
    return list(seen.values())


def negative_chamber_key(seed):
    n = seed.rank
    return frozenset(tuple(-1 if j == i else 0 for j in range(n)) for i in range(n))


def find_green_to_red(seed, max_depth, green_restricted=True):
    """Shortest mutation sequence whose terminal chamber is C^-, or None."""
    found = enumerate_green_to_red(seed, max_depth, green_restricted,
                                   first_only=True)
    return found[0] if found else None


def enumerate_green_to_red(seed, max_depth, green_restricted=True,
                           first_only=False):
    """Green-to-red sequences up to the depth, in breadth-first order.

    The default restricts each mutation to a green vertex (positive
    c-vector); the unrestricted mode searches every sequence.
    """
    n = seed.rank
    target = negative_chamber_key(seed)
    out = []
    queue = deque([((), chamber_from_sequence(seed, ()))])
    while queue:
        seq, node = queue.popleft()
        if node.key() == target:
            out.append(seq)
            if first_only:
                return out
            continue
        if len(seq) >= max_depth:
            continue
        for k in range(1, n + 1):
            if seq and seq[-1] == k:
                continue
            if green_restricted:
                if not all(x >= 0 for x in node.cvectors[k - 1]):
                    continue
            child_seq = seq + (k,)
            queue.append((child_seq, chamber_from_sequence(seed, child_seq)))
    return out


def crossing_data(seed, sequence):
    """Per mutation step: (primitive positive facet normal, +1 for a green
    crossing, -1 for a red one)."""
    out = []
    for i, k in enumerate(sequence):
        node = chamber_from_sequence(seed, sequence[:i])
        c = node.cvectors[k - 1]
        if all(x >= 0 for x in c):
            out.append((c, 1))
        elif all(x <= 0 for x in c):
            out.append((tuple(-x for x in c), -1))
        else:
            raise AssertionError("c-vector is not sign-coherent: %r" % (c,))
    return out


def dt_series(seed, sequence, order, convention):
    """Ordered product of the dilogarithm wall functions crossed on the way
    from C^+ to C^-; equals phi(0) of the completed diagram."""
    result = None
    for n0, eps in crossing_data(seed, sequence):
        value = to_carrier(dilog_group_element(seed, n0, order, convention))
        if eps < 0:
            value = value.group_inverse()
        result = value if result is None else result.mul(value)
    if result is None:
        result = to_carrier(GradedElement.one(seed, order, convention))
    return expose(result, convention)
