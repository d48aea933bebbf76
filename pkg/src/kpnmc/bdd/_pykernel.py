"""Pure-Python node store and recursive BDD algorithms.

This is the fallback used when the compiled ``_ckernel`` extension is not
available. Both backends expose the same ``Kernel`` interface and operate on
plain integer node ids, with ``0`` the false terminal and ``1`` the true
terminal. Levels are positions in the variable order; terminals sit at level
``nlevels``.
"""

import sys

FALSE = 0
TRUE = 1

_AND = 0
_OR = 1
_DIFF = 2
_XOR = 3
_EXISTS = 4
_RESTRICT = 5

# A node is three Python ints in parallel lists plus one unique-table entry.
NODE_BYTES = 96

BACKEND = "python"


class Kernel:
    """Hash-consed node table with memoised apply, quantification and counts."""

    def __init__(self, nlevels):
        self.nlevels = nlevels
        self._lvl = [nlevels, nlevels]
        self._lo = [0, 1]
        self._hi = [0, 1]
        self._unique = {}
        self._cache = {}
        self._free = []
        self.peak = 2
        limit = 4 * nlevels + 500
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)

    # -- node store -----------------------------------------------------

    def mk(self, lvl, lo, hi):
        if lo == hi:
            return lo
        key = (lvl, lo, hi)
        node = self._unique.get(key)
        if node is None:
            if self._free:
                node = self._free.pop()
                self._lvl[node] = lvl
                self._lo[node] = lo
                self._hi[node] = hi
            else:
                node = len(self._lvl)
                self._lvl.append(lvl)
                self._lo.append(lo)
                self._hi.append(hi)
            self._unique[key] = node
            live = len(self._lvl) - len(self._free)
            if live > self.peak:
                self.peak = live
        return node

    def level(self, f):
        return self._lvl[f]

    def low(self, f):
        return self._lo[f]

    def high(self, f):
        return self._hi[f]

    def live(self):
        return len(self._lvl) - len(self._free)

    def clear_cache(self):
        self._cache.clear()

    def collect(self, roots):
        """Free every node not reachable from ``roots``; returns the number freed.

        Freed ids are recycled by ``mk``. The operation cache is cleared.
        """
        lvl, lo, hi = self._lvl, self._lo, self._hi
        marked = bytearray(len(lvl))
        marked[0] = marked[1] = 1
        stack = [r for r in roots if r > 1]
        while stack:
            node = stack.pop()
            if marked[node]:
                continue
            marked[node] = 1
            stack.append(lo[node])
            stack.append(hi[node])
        freed = 0
        for node in range(2, len(lvl)):
            if not marked[node] and lvl[node] >= 0:
                del self._unique[(lvl[node], lo[node], hi[node])]
                lvl[node] = -1
                self._free.append(node)
                freed += 1
        self._cache.clear()
        return freed

    # -- apply ------------------------------------------------------------

    def bdd_and(self, f, g):
        if f == g:
            return f
        if f == 0 or g == 0:
            return 0
        if f == 1:
            return g
        if g == 1:
            return f
        if f > g:
            f, g = g, f
        key = (_AND, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        lvl = self._lvl
        lf, lg = lvl[f], lvl[g]
        if lf == lg:
            r = self.mk(lf, self.bdd_and(self._lo[f], self._lo[g]),
                        self.bdd_and(self._hi[f], self._hi[g]))
        elif lf < lg:
            r = self.mk(lf, self.bdd_and(self._lo[f], g), self.bdd_and(self._hi[f], g))
        else:
            r = self.mk(lg, self.bdd_and(f, self._lo[g]), self.bdd_and(f, self._hi[g]))
        self._cache[key] = r
        return r

    def bdd_or(self, f, g):
        if f == g:
            return f
        if f == 1 or g == 1:
            return 1
        if f == 0:
            return g
        if g == 0:
            return f
        if f > g:
            f, g = g, f
        key = (_OR, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        lvl = self._lvl
        lf, lg = lvl[f], lvl[g]
        if lf == lg:
            r = self.mk(lf, self.bdd_or(self._lo[f], self._lo[g]),
                        self.bdd_or(self._hi[f], self._hi[g]))
        elif lf < lg:
            r = self.mk(lf, self.bdd_or(self._lo[f], g), self.bdd_or(self._hi[f], g))
        else:
            r = self.mk(lg, self.bdd_or(f, self._lo[g]), self.bdd_or(f, self._hi[g]))
        self._cache[key] = r
        return r

    def bdd_diff(self, f, g):
        """f and not g."""
        if f == 0 or g == 1 or f == g:
            return 0
        if g == 0:
            return f
        key = (_DIFF, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        lvl = self._lvl
        lf, lg = lvl[f], lvl[g]
        if lf == lg:
            r = self.mk(lf, self.bdd_diff(self._lo[f], self._lo[g]),
                        self.bdd_diff(self._hi[f], self._hi[g]))
        elif lf < lg:
            r = self.mk(lf, self.bdd_diff(self._lo[f], g), self.bdd_diff(self._hi[f], g))
        else:
            r = self.mk(lg, self.bdd_diff(f, self._lo[g]), self.bdd_diff(f, self._hi[g]))
        self._cache[key] = r
        return r

    def bdd_xor(self, f, g):
        if f == g:
            return 0
        if f == 0:
            return g
        if g == 0:
            return f
        if f == 1:
            return self.bdd_diff(1, g)
        if g == 1:
            return self.bdd_diff(1, f)
        if f > g:
            f, g = g, f
        key = (_XOR, f, g)
        r = self._cache.get(key)
        if r is not None:
            return r
        lvl = self._lvl
        lf, lg = lvl[f], lvl[g]
        if lf == lg:
            r = self.mk(lf, self.bdd_xor(self._lo[f], self._lo[g]),
                        self.bdd_xor(self._hi[f], self._hi[g]))
        elif lf < lg:
            r = self.mk(lf, self.bdd_xor(self._lo[f], g), self.bdd_xor(self._hi[f], g))
        else:
            r = self.mk(lg, self.bdd_xor(f, self._lo[g]), self.bdd_xor(f, self._hi[g]))
        self._cache[key] = r
        return r

    # -- quantification and cofactors ----------------------------------

    def exists(self, f, cube):
        """Existentially quantify the levels of positive cube ``cube`` out of ``f``."""
        if f < 2 or cube == 1:
            return f
        lvl = self._lvl
        lf = lvl[f]
        while lvl[cube] < lf:
            cube = self._hi[cube]
            if cube == 1:
                return f
        key = (_EXISTS, f, cube)
        r = self._cache.get(key)
        if r is not None:
            return r
        if lvl[cube] == lf:
            rest = self._hi[cube]
            lo = self.exists(self._lo[f], rest)
            if lo == 1:
                r = 1
            else:
                r = self.bdd_or(lo, self.exists(self._hi[f], rest))
        else:
            r = self.mk(lf, self.exists(self._lo[f], cube), self.exists(self._hi[f], cube))
        self._cache[key] = r
        return r

    def restrict(self, f, cube):
        """Cofactor ``f`` by a conjunction of literals ``cube`` (a single-path BDD)."""
        if f < 2 or cube == 1:
            return f
        lvl = self._lvl
        lf = lvl[f]
        while lvl[cube] < lf:
            cube = self._hi[cube] if self._lo[cube] == 0 else self._lo[cube]
            if cube == 1:
                return f
        key = (_RESTRICT, f, cube)
        r = self._cache.get(key)
        if r is not None:
            return r
        if lvl[cube] == lf:
            if self._lo[cube] == 0:
                r = self.restrict(self._hi[f], self._hi[cube])
            else:
                r = self.restrict(self._lo[f], self._lo[cube])
        else:
            r = self.mk(lf, self.restrict(self._lo[f], cube), self.restrict(self._hi[f], cube))
        self._cache[key] = r
        return r

    # -- counting -------------------------------------------------------

    def _postorder(self, f):
        seen = {0, 1}
        out = []
        stack = [(f, False)]
        lo, hi = self._lo, self._hi
        while stack:
            node, done = stack.pop()
            if done:
                out.append(node)
                continue
            if node in seen:
                continue
            seen.add(node)
            stack.append((node, True))
            stack.append((hi[node], False))
            stack.append((lo[node], False))
        return out

    def satcount(self, f):
        """Number of satisfying assignments over all ``nlevels`` variables."""
        n = self.nlevels
        if f < 2:
            return f << n
        lvl, lo, hi = self._lvl, self._lo, self._hi
        count = {0: 0, 1: 1}
        for node in self._postorder(f):
            l = lvl[node]
            a, b = lo[node], hi[node]
            count[node] = (count[a] << (lvl[a] - l - 1)) + (count[b] << (lvl[b] - l - 1))
        return count[f] << lvl[f]

    def nodecount(self, f):
        """Reachable nodes from ``f`` including the terminals reached."""
        if f < 2:
            return 1
        seen = set()
        stack = [f]
        lo, hi = self._lo, self._hi
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            if node > 1:
                stack.append(lo[node])
                stack.append(hi[node])
        return len(seen)

    def pick_paths(self, f):
        """Yield satisfying paths of ``f`` as dicts ``level -> bool``."""
        if f == 0:
            return
        stack = [(f, {})]
        lvl, lo, hi = self._lvl, self._lo, self._hi
        while stack:
            node, path = stack.pop()
            if node == 1:
                yield path
                continue
            if node == 0:
                continue
            l = lvl[node]
            p1 = dict(path)
            p1[l] = True
            stack.append((hi[node], p1))
            p0 = dict(path)
            p0[l] = False
            stack.append((lo[node], p0))
