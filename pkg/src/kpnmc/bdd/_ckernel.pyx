# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled node store and recursive BDD algorithms.

Same interface and node-id conventions as ``_pykernel``. Nodes live in
parallel C arrays, the unique table is open-addressed and the operation
cache is a direct-mapped computed table that may overwrite older entries.
"""

from libc.stdlib cimport malloc, realloc, free, calloc
from libc.string cimport memset
from libc.stdint cimport uint64_t, int32_t, uint8_t

BACKEND = "cython"
# level, low, high (3 x int32), a unique-table slot and a share of the cache.
NODE_BYTES = 32

cdef enum:
    OP_AND = 1
    OP_OR = 2
    OP_DIFF = 3
    OP_XOR = 4
    OP_EXISTS = 5
    OP_RESTRICT = 6

cdef struct CacheEntry:
    int32_t op
    int32_t f
    int32_t g
    int32_t r


cdef inline uint64_t _hash3(uint64_t a, uint64_t b, uint64_t c) nogil:
    cdef uint64_t h = a * 0x9E3779B97F4A7C15ULL
    h ^= b + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2)
    h ^= c * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2)
    h ^= h >> 29
    return h


cdef class Kernel:
    cdef public int nlevels
    cdef public long peak
    cdef int32_t* lvl
    cdef int32_t* lo
    cdef int32_t* hi
    cdef long size          # slots in use (including freed ones)
    cdef long cap
    cdef int32_t* freelist
    cdef long nfree
    cdef int32_t* table     # unique table, -1 = empty
    cdef uint64_t tmask
    cdef CacheEntry* cache
    cdef uint64_t cmask

    def __cinit__(self, int nlevels):
        self.nlevels = nlevels
        self.cap = 1 << 16
        self.lvl = <int32_t*>malloc(self.cap * sizeof(int32_t))
        self.lo = <int32_t*>malloc(self.cap * sizeof(int32_t))
        self.hi = <int32_t*>malloc(self.cap * sizeof(int32_t))
        self.freelist = <int32_t*>malloc(self.cap * sizeof(int32_t))
        if not (self.lvl and self.lo and self.hi and self.freelist):
            raise MemoryError()
        self.lvl[0] = nlevels
        self.lvl[1] = nlevels
        self.lo[0] = 0
        self.hi[0] = 0
        self.lo[1] = 1
        self.hi[1] = 1
        self.size = 2
        self.nfree = 0
        self.peak = 2
        self._alloc_table(1 << 17)
        self._alloc_cache(1 << 16)

    def __dealloc__(self):
        free(self.lvl)
        free(self.lo)
        free(self.hi)
        free(self.freelist)
        free(self.table)
        free(self.cache)

    cdef void _alloc_table(self, uint64_t slots) except *:
        free(self.table)
        self.table = <int32_t*>malloc(slots * sizeof(int32_t))
        if not self.table:
            raise MemoryError()
        memset(self.table, 0xFF, slots * sizeof(int32_t))
        self.tmask = slots - 1

    cdef void _alloc_cache(self, uint64_t slots) except *:
        free(self.cache)
        self.cache = <CacheEntry*>calloc(slots, sizeof(CacheEntry))
        if not self.cache:
            raise MemoryError()
        self.cmask = slots - 1

    cdef void _insert(self, int32_t node) noexcept nogil:
        cdef uint64_t h = _hash3(self.lvl[node], self.lo[node], self.hi[node]) & self.tmask
        while self.table[h] >= 0:
            h = (h + 1) & self.tmask
        self.table[h] = node

    cdef void _rehash(self) except *:
        cdef long live = self.size - self.nfree
        cdef uint64_t slots = self.tmask + 1
        while <uint64_t>live * 2 >= slots:
            slots <<= 1
        self._alloc_table(slots)
        cdef long i
        for i in range(2, self.size):
            if self.lvl[i] >= 0:
                self._insert(<int32_t>i)
        # keep the computed table roughly proportional to the node store
        if (self.cmask + 1) < slots // 2:
            self._alloc_cache(slots // 2)

    cdef void _grow(self) except *:
        cdef long ncap = self.cap * 2
        if ncap > 0x7FFFFFFF:
            raise MemoryError("BDD node store exhausted")
        cdef int32_t* a = <int32_t*>realloc(self.lvl, ncap * sizeof(int32_t))
        if not a:
            raise MemoryError()
        self.lvl = a
        a = <int32_t*>realloc(self.lo, ncap * sizeof(int32_t))
        if not a:
            raise MemoryError()
        self.lo = a
        a = <int32_t*>realloc(self.hi, ncap * sizeof(int32_t))
        if not a:
            raise MemoryError()
        self.hi = a
        a = <int32_t*>realloc(self.freelist, ncap * sizeof(int32_t))
        if not a:
            raise MemoryError()
        self.freelist = a
        self.cap = ncap

    cdef int32_t _mk(self, int32_t l, int32_t a, int32_t b) except -1:
        if a == b:
            return a
        cdef uint64_t h = _hash3(l, a, b) & self.tmask
        cdef int32_t n
        while True:
            n = self.table[h]
            if n < 0:
                break
            if self.lvl[n] == l and self.lo[n] == a and self.hi[n] == b:
                return n
            h = (h + 1) & self.tmask
        if self.nfree:
            self.nfree -= 1
            n = self.freelist[self.nfree]
        else:
            if self.size == self.cap:
                self._grow()
            n = <int32_t>self.size
            self.size += 1
        self.lvl[n] = l
        self.lo[n] = a
        self.hi[n] = b
        self.table[h] = n
        cdef long live = self.size - self.nfree
        if live > self.peak:
            self.peak = live
        if <uint64_t>live * 2 > self.tmask + 1:
            self._rehash()
        return n

    # -- public node store --------------------------------------------------

    def mk(self, int lvl, int lo, int hi):
        return self._mk(lvl, lo, hi)

    def level(self, int f):
        return self.lvl[f]

    def low(self, int f):
        return self.lo[f]

    def high(self, int f):
        return self.hi[f]

    def live(self):
        return self.size - self.nfree

    def clear_cache(self):
        memset(self.cache, 0, (self.cmask + 1) * sizeof(CacheEntry))

    def collect(self, roots):
        """Free every node not reachable from ``roots``; returns the number freed."""
        cdef uint8_t* marked = <uint8_t*>calloc(self.size, 1)
        cdef int32_t* stack = <int32_t*>malloc(self.size * sizeof(int32_t))
        cdef long sp = 0
        cdef int32_t n
        cdef long i, freed = 0
        if not marked or not stack:
            free(marked)
            free(stack)
            raise MemoryError()
        marked[0] = 1
        marked[1] = 1
        for r in roots:
            n = r
            if not marked[n]:
                marked[n] = 1
                stack[sp] = n
                sp += 1
        while sp:
            sp -= 1
            n = stack[sp]
            if not marked[self.lo[n]]:
                marked[self.lo[n]] = 1
                stack[sp] = self.lo[n]
                sp += 1
            if not marked[self.hi[n]]:
                marked[self.hi[n]] = 1
                stack[sp] = self.hi[n]
                sp += 1
        for i in range(2, self.size):
            if not marked[i] and self.lvl[i] >= 0:
                self.lvl[i] = -1
                self.freelist[self.nfree] = <int32_t>i
                self.nfree += 1
                freed += 1
        free(marked)
        free(stack)
        self._alloc_table(self.tmask + 1)
        for i in range(2, self.size):
            if self.lvl[i] >= 0:
                self._insert(<int32_t>i)
        self.clear_cache()
        return freed

    # -- apply ----------------------------------------------------------------

    cdef int32_t _apply(self, int op, int32_t f, int32_t g) except -1:
        cdef int32_t t
        if op == OP_AND:
            if f == g:
                return f
            if f == 0 or g == 0:
                return 0
            if f == 1:
                return g
            if g == 1:
                return f
            if f > g:
                t = f; f = g; g = t
        elif op == OP_OR:
            if f == g:
                return f
            if f == 1 or g == 1:
                return 1
            if f == 0:
                return g
            if g == 0:
                return f
            if f > g:
                t = f; f = g; g = t
        elif op == OP_DIFF:
            if f == 0 or g == 1 or f == g:
                return 0
            if g == 0:
                return f
        else:
            if f == g:
                return 0
            if f == 0:
                return g
            if g == 0:
                return f
            if f == 1:
                return self._apply(OP_DIFF, 1, g)
            if g == 1:
                return self._apply(OP_DIFF, 1, f)
            if f > g:
                t = f; f = g; g = t
        cdef uint64_t h = _hash3(op, f, g) & self.cmask
        cdef CacheEntry* e = &self.cache[h]
        if e.op == op and e.f == f and e.g == g:
            return e.r
        cdef int32_t lf = self.lvl[f], lg = self.lvl[g], r, a, b
        if lf == lg:
            a = self._apply(op, self.lo[f], self.lo[g])
            b = self._apply(op, self.hi[f], self.hi[g])
            r = self._mk(lf, a, b)
        elif lf < lg:
            a = self._apply(op, self.lo[f], g)
            b = self._apply(op, self.hi[f], g)
            r = self._mk(lf, a, b)
        else:
            a = self._apply(op, f, self.lo[g])
            b = self._apply(op, f, self.hi[g])
            r = self._mk(lg, a, b)
        # the cache may have been reallocated by a rehash inside _mk
        e = &self.cache[_hash3(op, f, g) & self.cmask]
        e.op = op
        e.f = f
        e.g = g
        e.r = r
        return r

    def bdd_and(self, int f, int g):
        return self._apply(OP_AND, f, g)

    def bdd_or(self, int f, int g):
        return self._apply(OP_OR, f, g)

    def bdd_diff(self, int f, int g):
        return self._apply(OP_DIFF, f, g)

    def bdd_xor(self, int f, int g):
        return self._apply(OP_XOR, f, g)

    # -- quantification and cofactors --------------------------------------

    cdef int32_t _exists(self, int32_t f, int32_t cube) except -1:
        if f < 2 or cube == 1:
            return f
        cdef int32_t lf = self.lvl[f]
        while self.lvl[cube] < lf:
            cube = self.hi[cube]
            if cube == 1:
                return f
        cdef uint64_t h = _hash3(OP_EXISTS, f, cube) & self.cmask
        cdef CacheEntry* e = &self.cache[h]
        if e.op == OP_EXISTS and e.f == f and e.g == cube:
            return e.r
        cdef int32_t r, a, b, rest
        if self.lvl[cube] == lf:
            rest = self.hi[cube]
            a = self._exists(self.lo[f], rest)
            if a == 1:
                r = 1
            else:
                b = self._exists(self.hi[f], rest)
                r = self._apply(OP_OR, a, b)
        else:
            a = self._exists(self.lo[f], cube)
            b = self._exists(self.hi[f], cube)
            r = self._mk(lf, a, b)
        e = &self.cache[_hash3(OP_EXISTS, f, cube) & self.cmask]
        e.op = OP_EXISTS
        e.f = f
        e.g = cube
        e.r = r
        return r

    def exists(self, int f, int cube):
        return self._exists(f, cube)

    cdef int32_t _restrict(self, int32_t f, int32_t cube) except -1:
        if f < 2 or cube == 1:
            return f
        cdef int32_t lf = self.lvl[f]
        while self.lvl[cube] < lf:
            cube = self.hi[cube] if self.lo[cube] == 0 else self.lo[cube]
            if cube == 1:
                return f
        cdef uint64_t h = _hash3(OP_RESTRICT, f, cube) & self.cmask
        cdef CacheEntry* e = &self.cache[h]
        if e.op == OP_RESTRICT and e.f == f and e.g == cube:
            return e.r
        cdef int32_t r, a, b
        if self.lvl[cube] == lf:
            if self.lo[cube] == 0:
                r = self._restrict(self.hi[f], self.hi[cube])
            else:
                r = self._restrict(self.lo[f], self.lo[cube])
        else:
            a = self._restrict(self.lo[f], cube)
            b = self._restrict(self.hi[f], cube)
            r = self._mk(lf, a, b)
        e = &self.cache[_hash3(OP_RESTRICT, f, cube) & self.cmask]
        e.op = OP_RESTRICT
        e.f = f
        e.g = cube
        e.r = r
        return r

    def restrict(self, int f, int cube):
        return self._restrict(f, cube)

    # -- counting -------------------------------------------------------------

    cdef list _postorder(self, int32_t f):
        cdef uint8_t* seen = <uint8_t*>calloc(self.size, 1)
        if not seen:
            raise MemoryError()
        out = []
        stack = [(f, False)]
        cdef int32_t node
        seen[0] = 1
        seen[1] = 1
        try:
            while stack:
                node, done = stack.pop()
                if done:
                    out.append(node)
                    continue
                if seen[node]:
                    continue
                seen[node] = 1
                stack.append((node, True))
                stack.append((self.hi[node], False))
                stack.append((self.lo[node], False))
        finally:
            free(seen)
        return out

    def satcount(self, int f):
        """Number of satisfying assignments over all ``nlevels`` variables."""
        if f < 2:
            return f << self.nlevels
        count = {0: 0, 1: 1}
        cdef int32_t node, a, b, l
        for node in self._postorder(f):
            l = self.lvl[node]
            a = self.lo[node]
            b = self.hi[node]
            count[node] = (count[a] << (self.lvl[a] - l - 1)) + (count[b] << (self.lvl[b] - l - 1))
        return count[f] << self.lvl[f]

    def nodecount(self, int f):
        """Reachable nodes from ``f`` including the terminals reached."""
        if f < 2:
            return 1
        cdef uint8_t* seen = <uint8_t*>calloc(self.size, 1)
        cdef int32_t* stack = <int32_t*>malloc(self.size * sizeof(int32_t))
        cdef long sp = 0, total = 0
        cdef int32_t node
        if not seen or not stack:
            free(seen)
            free(stack)
            raise MemoryError()
        stack[0] = f
        sp = 1
        seen[f] = 1
        while sp:
            sp -= 1
            node = stack[sp]
            total += 1
            if node > 1:
                if not seen[self.lo[node]]:
                    seen[self.lo[node]] = 1
                    stack[sp] = self.lo[node]
                    sp += 1
                if not seen[self.hi[node]]:
                    seen[self.hi[node]] = 1
                    stack[sp] = self.hi[node]
                    sp += 1
        free(seen)
        free(stack)
        return total

    def pick_paths(self, int f):
        """Yield satisfying paths of ``f`` as dicts ``level -> bool``."""
        if f == 0:
            return
        stack = [(f, {})]
        cdef int32_t node
        while stack:
            node, path = stack.pop()
            if node == 1:
                yield path
                continue
            if node == 0:
                continue
            p1 = dict(path)
            p1[self.lvl[node]] = True
            stack.append((self.hi[node], p1))
            p0 = dict(path)
            p0[self.lvl[node]] = False
            stack.append((self.lo[node], p0))
