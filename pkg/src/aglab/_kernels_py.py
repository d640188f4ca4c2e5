"""Pure-Python search kernels.

Same algorithm and output order as the compiled ``_kernels`` extension; used
when the extension is not built or ``AGLAB_PURE=1`` is set.
"""
from __future__ import annotations

import itertools

_PERM_CACHE: dict[int, list[tuple[int, ...]]] = {}


def permutations(n):
    perms = _PERM_CACHE.get(n)
    if perms is None:
        perms = _PERM_CACHE[n] = list(itertools.permutations(range(n)))
    return perms


def canonical_form(flat, n):
    """Lexicographically least relabeled flattening over all n! relabelings."""
    best = list(flat)
    for sigma in permutations(n):
        inv = [0] * n
        for i, s in enumerate(sigma):
            inv[s] = i
        # compare lazily; bail out as soon as this relabeling is larger
        cand = None
        p = 0
        for r in range(n):
            base = inv[r] * n
            for c in range(n):
                v = sigma[flat[base + inv[c]]]
                if cand is None:
                    if v > best[p]:
                        break
                    if v < best[p]:
                        cand = best[:p]
                        cand.append(v)
                else:
                    cand.append(v)
                p += 1
            else:
                continue
            break
        if cand is not None:
            best = cand
    return tuple(best)


def is_canonical(flat, n):
    for sigma in permutations(n):
        inv = [0] * n
        for i, s in enumerate(sigma):
            inv[s] = i
        p = 0
        decided = False
        for r in range(n):
            base = inv[r] * n
            for c in range(n):
                v = sigma[flat[base + inv[c]]]
                if v != flat[p]:
                    if v < flat[p]:
                        return False
                    decided = True
                    break
                p += 1
            if decided:
                break
    return True


def _fill_cells(n, fill_order):
    if fill_order == "row":
        return [i * n + j for i in range(n) for j in range(n)]
    if fill_order == "column":
        return [i * n + j for j in range(n) for i in range(n)]
    raise ValueError(f"unknown fill order {fill_order!r}")


def _ag_ok(t, n, i, j):
    """Every determined instance of (ab)c = (cb)a that uses cell (i, j)."""
    # (a,b) = (i,j): any c
    a, b = i, j
    ab = t[a * n + b]
    for c in range(n):
        x = t[ab * n + c]
        if x < 0:
            continue
        cb = t[c * n + b]
        if cb < 0:
            continue
        y = t[cb * n + a]
        if y >= 0 and x != y:
            return False
    # (c,b) = (i,j): any a
    c, b = i, j
    cb = t[c * n + b]
    for a in range(n):
        y = t[cb * n + a]
        if y < 0:
            continue
        ab = t[a * n + b]
        if ab < 0:
            continue
        x = t[ab * n + c]
        if x >= 0 and x != y:
            return False
    # (ab, c) = (i, j) or (cb, a) = (i, j): the same pairs with roles swapped
    for a in range(n):
        for b in range(n):
            ab = t[a * n + b]
            if ab != i:
                continue
            c = j
            x = t[ab * n + c]
            cb = t[c * n + b]
            if cb >= 0:
                y = t[cb * n + a]
                if y >= 0 and x != y:
                    return False
    return True


def _star_ok(t, n, i, j):
    """Every determined instance of (ab)c = b(ac) that uses cell (i, j)."""
    # (a,b) = (i,j): any c
    a, b = i, j
    ab = t[a * n + b]
    for c in range(n):
        x = t[ab * n + c]
        if x < 0:
            continue
        ac = t[a * n + c]
        if ac < 0:
            continue
        y = t[b * n + ac]
        if y >= 0 and x != y:
            return False
    # (a,c) = (i,j): any b
    a, c = i, j
    ac = t[a * n + c]
    for b in range(n):
        y = t[b * n + ac]
        if y < 0:
            continue
        ab = t[a * n + b]
        if ab < 0:
            continue
        x = t[ab * n + c]
        if x >= 0 and x != y:
            return False
    # (ab, c) = (i, j): pairs (a,b) with ab = i
    c = j
    for a in range(n):
        ac = t[a * n + c]
        if ac < 0:
            continue
        for b in range(n):
            if t[a * n + b] != i:
                continue
            y = t[b * n + ac]
            if y >= 0 and t[i * n + c] != y:
                return False
    # (b, ac) = (i, j): b = i, pairs (a,c) with ac = j
    b = i
    for a in range(n):
        ab = t[a * n + b]
        if ab < 0:
            continue
        for c in range(n):
            if t[a * n + c] != j:
                continue
            x = t[ab * n + c]
            if x >= 0 and x != t[b * n + j]:
                return False
    return True


def _left_identity_viable(t, n):
    for e in range(n):
        base = e * n
        for x in range(n):
            v = t[base + x]
            if v >= 0 and v != x:
                break
        else:
            return True
    return False


def _full_check(t, n, ag, star, left_identity):
    r = range(n)
    if ag or star:
        for a in r:
            for b in r:
                ab = t[a * n + b]
                for c in r:
                    if t[ab * n + c] != t[t[c * n + b] * n + a]:
                        return False
    if star:
        for a in r:
            for b in r:
                ab = t[a * n + b]
                for c in r:
                    if t[ab * n + c] != t[b * n + t[a * n + c]]:
                        return False
    if left_identity and not _left_identity_viable(t, n):
        return False
    return True


def _first_row_rank(t, n):
    rank = 0
    for j in range(n):
        rank = rank * n + t[j]
    return rank


def search(n, ag=False, star=False, left_identity=False, up_to_iso=False,
           fill_order="row", worker=0, workers=1, prune=True):
    """Yield flat tables (tuples) of order ``n`` satisfying the constraints.

    With ``fill_order="row"`` the output is in lexicographic order of the
    flattening. Partitioning assigns a table to worker ``rank(row 0) % workers``.
    """
    cells = _fill_cells(n, fill_order)
    N = n * n
    t = [-1] * N
    ag = ag or star
    partitioned = workers > 1
    d = 0
    while d >= 0:
        k = cells[d]
        v = t[k] + 1
        if v == n:
            t[k] = -1
            d -= 1
            continue
        t[k] = v
        i, j = divmod(k, n)
        if prune:
            if ag and not _ag_ok(t, n, i, j):
                continue
            if star and not _star_ok(t, n, i, j):
                continue
            if left_identity and v != j and not _left_identity_viable(t, n):
                continue
        if partitioned and i == 0 and all(t[c] >= 0 for c in range(n)):
            if _first_row_rank(t, n) % workers != worker:
                continue
        if d == N - 1:
            if not prune and not _full_check(t, n, ag, star, left_identity):
                continue
            if up_to_iso and not is_canonical(t, n):
                continue
            yield tuple(t)
            continue
        d += 1


def count(n, ag=False, star=False, left_identity=False, up_to_iso=False,
          fill_order="row", worker=0, workers=1, prune=True):
    return sum(1 for _ in search(n, ag, star, left_identity, up_to_iso,
                                 fill_order, worker, workers, prune))
