"""Deterministic matching algorithms on small graphs.

Everything here processes vertices and adjacency lists in ascending index
order, so repeated runs on the same input produce identical results.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

INF = -1  # sentinel distance / unmatched marker


def hopcroft_karp(
    n_left: int, n_right: int, adj: Sequence[Sequence[int]]
) -> tuple[int, list[int], list[int]]:
    """Maximum matching of a bipartite graph.

    ``adj[u]`` lists the right-neighbours of left vertex ``u``.  Returns
    ``(size, match_left, match_right)`` with ``-1`` marking unmatched
    vertices.  The augmenting search is iterative, so left-side paths may
    be as long as the graph without hitting the recursion limit.
    """
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [INF] * n_left

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    ptr = [0] * n_left
    choice = [0] * n_left

    def dfs(root: int) -> bool:
        stack = [root]
        while stack:
            u = stack[-1]
            step = -1
            while ptr[u] < len(adj[u]):
                v = adj[u][ptr[u]]
                ptr[u] += 1
                w = match_r[v]
                if w == -1:
                    step = v
                    break
                if dist[w] == dist[u] + 1:
                    choice[u] = v
                    stack.append(w)
                    step = -2
                    break
            if step == -1:
                dist[u] = INF
                stack.pop()
            elif step >= 0:
                # free right vertex: flip the alternating path on the stack
                match_l[u] = step
                match_r[step] = u
                stack.pop()
                while stack:
                    uu = stack.pop()
                    vv = choice[uu]
                    match_l[uu] = vv
                    match_r[vv] = uu
                return True
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            ptr[u] = 0
        for u in range(n_left):
            if match_l[u] == -1 and dfs(u):
                size += 1
    return size, match_l, match_r


def deficiency_certificate(
    n_left: int,
    n_right: int,
    adj: Sequence[Sequence[int]],
    match_l: Sequence[int],
    match_r: Sequence[int],
) -> tuple[list[int], list[int]] | None:
    """Hall-condition violator extracted from a maximum matching.

    Alternating reachability from the unmatched left vertices yields a set
    ``A`` of left vertices whose joint neighbourhood is smaller than ``A``
    (Koenig duality).  Returns ``(A, N(A))``, or None when the matching
    saturates the left side.
    """
    free = [u for u in range(n_left) if match_l[u] == -1]
    if not free:
        return None
    seen_l = [False] * n_left
    seen_r = [False] * n_right
    queue: deque[int] = deque()
    for u in free:
        seen_l[u] = True
        queue.append(u)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if seen_r[v]:
                continue
            seen_r[v] = True
            w = match_r[v]
            # v is matched, else the matching was not maximum
            if w != -1 and not seen_l[w]:
                seen_l[w] = True
                queue.append(w)
    violator = [u for u in range(n_left) if seen_l[u]]
    image = [v for v in range(n_right) if seen_r[v]]
    return violator, image


def max_matching_general(n: int, adj: Sequence[Sequence[int]]) -> list[int]:
    """Maximum matching of an arbitrary undirected graph.

    Augmenting-path search with blossom contraction.  A greedy pass seeds
    the matching so the contraction phase only runs for the few remaining
    exposed vertices.  Returns the mate array (``-1`` = unmatched).
    """
    match = [-1] * n
    for v in range(n):
        if match[v] == -1:
            for to in adj[v]:
                if to != v and match[to] == -1:
                    match[v] = to
                    match[to] = v
                    break

    p = [-1] * n
    base = list(range(n))
    used = [False] * n

    def lca(a: int, b: int) -> int:
        on_path = [False] * n
        while True:
            a = base[a]
            on_path[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if on_path[b]:
                return b
            b = p[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root: int) -> int:
        for i in range(n):
            used[i] = False
            p[i] = -1
            base[i] = i
        used[root] = True
        queue: deque[int] = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    # odd cycle: contract the blossom to its base
                    cur_base = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur_base, to, blossom)
                    mark_path(to, cur_base, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur_base
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    for v in range(n):
        if match[v] != -1:
            continue
        end = find_path(v)
        while end != -1:
            prev = p[end]
            nxt = match[prev]
            match[end] = prev
            match[prev] = end
            end = nxt
    return match
