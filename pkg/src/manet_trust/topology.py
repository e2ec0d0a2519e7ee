"""Range-based connectivity and minimum-hop source routes."""

from __future__ import annotations

from collections import deque
from typing import AbstractSet, Dict, List, Optional, Sequence, Tuple

import numpy as np

Adjacency = Tuple[Tuple[int, ...], ...]


def connectivity(positions, tx_range: float) -> Adjacency:
    """Unit-disk graph: ``u`` and ``v`` are linked iff their distance is at most ``tx_range``.

    Returns, for every node index, the sorted tuple of neighbor indices.
    """
    p = np.asarray(positions, dtype=float).reshape(-1, 2)
    diff = p[:, None, :] - p[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    linked = d2 <= tx_range * tx_range
    np.fill_diagonal(linked, False)
    return tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in linked)


def _hops_to(adjacency: Sequence[Sequence[int]], dst: int, blocked: AbstractSet[int]) -> Dict[int, int]:
    dist = {dst: 0}
    queue = deque([dst])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v not in dist and v not in blocked:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def route(adjacency: Sequence[Sequence[int]], src: int, dst: int,
          excluded: AbstractSet[int] = frozenset()) -> Optional[List[int]]:
    """Minimum-hop path from ``src`` to ``dst`` avoiding ``excluded`` relays.

    Among equally short paths the one taking the smallest next hop at every
    step wins. Returns ``None`` when no such path exists. ``src`` and ``dst``
    are never treated as excluded.
    """
    if src == dst:
        raise ValueError("source and destination must differ")
    blocked = set(excluded) - {src, dst}
    dist = _hops_to(adjacency, dst, blocked)
    if src not in dist:
        return None
    path = [src]
    u = src
    while u != dst:
        want = dist[u] - 1
        u = min(v for v in adjacency[u] if dist.get(v) == want and (v == dst or v not in blocked))
        path.append(u)
    return path


def path_valid(adjacency: Sequence[Sequence[int]], path: Sequence[int],
               excluded: AbstractSet[int] = frozenset()) -> bool:
    if any(v in excluded for v in path[1:-1]):
        return False
    return all(b in adjacency[a] for a, b in zip(path, path[1:]))
