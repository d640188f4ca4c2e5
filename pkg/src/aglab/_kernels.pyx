# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; mirrors ``_kernels_py`` exactly."""

from libc.stdlib cimport malloc, free

from ._kernels_py import permutations

cdef enum:
    MAXN = 8


cdef inline bint _ag_ok(int* t, int n, int i, int j) noexcept nogil:
    cdef int a, b, c, ab, cb, x, y
    a = i
    b = j
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
    for a in range(n):
        for b in range(n):
            if t[a * n + b] != i:
                continue
            c = j
            x = t[i * n + c]
            cb = t[c * n + b]
            if cb >= 0:
                y = t[cb * n + a]
                if y >= 0 and x != y:
                    return False
    return True


cdef inline bint _star_ok(int* t, int n, int i, int j) noexcept nogil:
    cdef int a, b, c, ab, ac, x, y
    a = i
    b = j
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
    a = i
    c = j
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


cdef inline bint _left_identity_viable(int* t, int n) noexcept nogil:
    cdef int e, x, v
    cdef bint ok
    for e in range(n):
        ok = True
        for x in range(n):
            v = t[e * n + x]
            if v >= 0 and v != x:
                ok = False
                break
        if ok:
            return True
    return False


cdef bint _full_check(int* t, int n, bint ag, bint star, bint left_identity) noexcept nogil:
    cdef int a, b, c, ab
    if ag or star:
        for a in range(n):
            for b in range(n):
                ab = t[a * n + b]
                for c in range(n):
                    if t[ab * n + c] != t[t[c * n + b] * n + a]:
                        return False
    if star:
        for a in range(n):
            for b in range(n):
                ab = t[a * n + b]
                for c in range(n):
                    if t[ab * n + c] != t[b * n + t[a * n + c]]:
                        return False
    if left_identity and not _left_identity_viable(t, n):
        return False
    return True


cdef class _Perms:
    """All permutations of 0..n-1 with their inverses, packed as C arrays."""
    cdef int n
    cdef int count
    cdef int* sigma
    cdef int* inv

    def __cinit__(self, int n):
        cdef int k, i
        perms = permutations(n)
        self.n = n
        self.count = len(perms)
        self.sigma = <int*> malloc(self.count * n * sizeof(int))
        self.inv = <int*> malloc(self.count * n * sizeof(int))
        for k, p in enumerate(perms):
            for i in range(n):
                self.sigma[k * n + i] = p[i]
                self.inv[k * n + <int> p[i]] = i

    def __dealloc__(self):
        free(self.sigma)
        free(self.inv)


cdef dict _perm_cache = {}


cdef _Perms _get_perms(int n):
    p = _perm_cache.get(n)
    if p is None:
        p = _perm_cache[n] = _Perms(n)
    return <_Perms> p


cdef bint _is_canonical(int* t, int n, _Perms perms) noexcept:
    cdef int k, r, c, p, v
    cdef int* sigma
    cdef int* inv
    cdef bint decided
    for k in range(perms.count):
        sigma = perms.sigma + k * n
        inv = perms.inv + k * n
        p = 0
        decided = False
        for r in range(n):
            for c in range(n):
                v = sigma[t[inv[r] * n + inv[c]]]
                if v != t[p]:
                    if v < t[p]:
                        return False
                    decided = True
                    break
                p += 1
            if decided:
                break
    return True


def is_canonical(flat, int n):
    cdef int t[MAXN * MAXN]
    cdef int i
    if n > MAXN:
        raise ValueError("order too large for the compiled kernel")
    for i in range(n * n):
        t[i] = flat[i]
    return _is_canonical(t, n, _get_perms(n))


def canonical_form(flat, int n):
    cdef int t[MAXN * MAXN]
    cdef int best[MAXN * MAXN]
    cdef int cand[MAXN * MAXN]
    cdef int i, k, p, v, r, c
    cdef int* sigma
    cdef int* inv
    cdef int state  # 0 equal so far, 1 smaller, 2 larger
    if n > MAXN:
        raise ValueError("order too large for the compiled kernel")
    for i in range(n * n):
        t[i] = flat[i]
        best[i] = t[i]
    perms = _get_perms(n)
    for k in range(perms.count):
        sigma = perms.sigma + k * n
        inv = perms.inv + k * n
        state = 0
        for p in range(n * n):
            r = p // n
            c = p % n
            v = sigma[t[inv[r] * n + inv[c]]]
            cand[p] = v
            if state == 0:
                if v > best[p]:
                    state = 2
                    break
                if v < best[p]:
                    state = 1
        if state == 1:
            for p in range(n * n):
                best[p] = cand[p]
    return tuple([best[i] for i in range(n * n)])


cdef class Search:
    """Backtracking enumerator as an iterator of flat tuples; see ``_kernels_py.search``."""
    cdef int n, N, d, worker, workers
    cdef bint ag, star, left_identity, up_to_iso, prune
    cdef int t[MAXN * MAXN]
    cdef int cells[MAXN * MAXN]
    cdef _Perms perms

    def __cinit__(self, int n, bint ag=False, bint star=False, bint left_identity=False,
                  bint up_to_iso=False, str fill_order="row", int worker=0, int workers=1,
                  bint prune=True):
        cdef int i, j, k
        if n < 1 or n > MAXN:
            raise ValueError("order out of range for the compiled kernel")
        self.n = n
        self.N = n * n
        self.ag = ag or star
        self.star = star
        self.left_identity = left_identity
        self.up_to_iso = up_to_iso
        self.prune = prune
        self.worker = worker
        self.workers = workers
        k = 0
        if fill_order == "row":
            for i in range(n):
                for j in range(n):
                    self.cells[k] = i * n + j
                    k += 1
        elif fill_order == "column":
            for j in range(n):
                for i in range(n):
                    self.cells[k] = i * n + j
                    k += 1
        else:
            raise ValueError(f"unknown fill order {fill_order!r}")
        for k in range(self.N):
            self.t[k] = -1
        self.d = 0
        self.perms = _get_perms(n) if up_to_iso else None

    def __iter__(self):
        return self

    cdef int _advance(self):
        """Move to the next emitted leaf; returns 1 if found, 0 when exhausted."""
        cdef int n = self.n
        cdef int* t = self.t
        cdef int k, v, i, j, c, rank
        cdef bint full
        while self.d >= 0:
            k = self.cells[self.d]
            v = t[k] + 1
            if v == n:
                t[k] = -1
                self.d -= 1
                continue
            t[k] = v
            i = k // n
            j = k % n
            if self.prune:
                if self.ag and not _ag_ok(t, n, i, j):
                    continue
                if self.star and not _star_ok(t, n, i, j):
                    continue
                if self.left_identity and v != j and not _left_identity_viable(t, n):
                    continue
            if self.workers > 1 and i == 0:
                full = True
                for c in range(n):
                    if t[c] < 0:
                        full = False
                        break
                if full:
                    rank = 0
                    for c in range(n):
                        rank = rank * n + t[c]
                    if rank % self.workers != self.worker:
                        continue
            if self.d == self.N - 1:
                if not self.prune and not _full_check(t, n, self.ag, self.star, self.left_identity):
                    continue
                if self.up_to_iso and not _is_canonical(t, n, self.perms):
                    continue
                return 1
            self.d += 1
        return 0

    def __next__(self):
        cdef int i
        if self.d < 0 or not self._advance():
            self.d = -1
            raise StopIteration
        return tuple([self.t[i] for i in range(self.N)])

    def count(self):
        """Exhaust the search and return the number of emitted tables."""
        cdef long total = 0
        while self.d >= 0 and self._advance():
            total += 1
        self.d = -1
        return total


def search(n, ag=False, star=False, left_identity=False, up_to_iso=False,
           fill_order="row", worker=0, workers=1, prune=True):
    return Search(n, ag, star, left_identity, up_to_iso, fill_order, worker, workers, prune)


def count(n, ag=False, star=False, left_identity=False, up_to_iso=False,
          fill_order="row", worker=0, workers=1, prune=True):
    return Search(n, ag, star, left_identity, up_to_iso, fill_order, worker, workers, prune).count()
