# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled countermodel search kernel; same contract as ``_search_py.search``."""

from libc.string cimport memset

cdef enum:
    MAXN = 8
    MAXNODES = 256
    MAXK = 12

cdef enum:
    VAR = 0
    BOT = 1
    IMP = 2
    RHD = 3


cdef bint _next_vectors(int *vecs, int n, int top):
    # next nondecreasing sequence over [0, top)
    cdef int i = n - 1, j
    while i >= 0 and vecs[i] == top - 1:
        i -= 1
    if i < 0:
        return False
    vecs[i] += 1
    for j in range(i + 1, n):
        vecs[j] = vecs[i]
    return True


def search(kinds, lhs, rhs, int root, int nvars, int n, bint det, bint universal):
    cdef int nn = len(kinds)
    if n > MAXN or nn > MAXNODES:
        raise ValueError("formula or world bound too large for the compiled kernel")
    cdef int kind[MAXNODES]
    cdef int left[MAXNODES]
    cdef int right[MAXNODES]
    cdef int rhd_nodes[MAXK]
    cdef int k = 0
    cdef int i, t, u, w, j, r, s
    for i in range(nn):
        kind[i] = kinds[i]
        left[i] = lhs[i]
        right[i] = rhs[i]
        if kind[i] == RHD:
            if k >= MAXK:
                raise ValueError("too many |>-subformulas for the compiled kernel")
            rhd_nodes[k] = i
            k += 1
    if nvars > 16:
        raise ValueError("too many variables for the compiled kernel")
    if n * k >= 62:
        raise ValueError("guess space too large")

    cdef unsigned int full = (1u << n) - 1
    cdef int nsets = 0
    cdef unsigned int sets[1 << MAXN]
    if det:
        for i in range(n):
            sets[nsets] = 1u << i
            nsets += 1
    else:
        for i in range(1, 1 << n):
            sets[nsets] = i
            nsets += 1

    cdef int vecs[MAXN]
    cdef unsigned int varmask[32]
    cdef unsigned int m[MAXNODES]
    cdef unsigned int atom_mask[MAXK]
    cdef unsigned int pm[MAXK]
    cdef unsigned int qm[MAXK]
    cdef unsigned int opts[MAXN][1 << MAXN]
    cdef int nopts[MAXN]
    cdef unsigned char reach[1 << MAXK]
    cdef unsigned char nxt[1 << MAXK]
    cdef unsigned long long guess, nguess = 1ull << (n * k)
    cdef unsigned int F, v, S, o
    cdef int size = 1 << k
    cdef bint ok, dup
    cdef int top = 1 << nvars

    for i in range(n):
        vecs[i] = 0
    while True:
        for j in range(nvars):
            varmask[j] = 0
            for w in range(n):
                if (vecs[w] >> j) & 1:
                    varmask[j] |= 1u << w
        guess = 0
        while guess < nguess:
            for t in range(k):
                atom_mask[t] = <unsigned int>((guess >> (t * n)) & full)
            t = 0
            for i in range(nn):
                if kind[i] == VAR:
                    m[i] = varmask[left[i]]
                elif kind[i] == BOT:
                    m[i] = 0
                elif kind[i] == IMP:
                    m[i] = (~m[left[i]] | m[right[i]]) & full
                else:
                    m[i] = atom_mask[t]
                    t += 1
            if m[root] != full:
                for t in range(k):
                    pm[t] = m[left[rhd_nodes[t]]]
                    qm[t] = m[right[rhd_nodes[t]]]
                for u in range(n):
                    opts[u][0] = 0
                    nopts[u] = 1
                    for s in range(nsets):
                        S = sets[s]
                        v = 0
                        for t in range(k):
                            if (pm[t] >> u) & 1:
                                if universal:
                                    if S & ~qm[t]:
                                        v |= 1u << t
                                elif not (S & qm[t]):
                                    v |= 1u << t
                        dup = False
                        for o in range(nopts[u]):
                            if opts[u][o] == v:
                                dup = True
                                break
                        if not dup:
                            opts[u][nopts[u]] = v
                            nopts[u] += 1
                ok = True
                for w in range(n):
                    F = 0
                    for t in range(k):
                        if not (atom_mask[t] >> w) & 1:
                            F |= 1u << t
                    memset(reach, 0, size)
                    reach[0] = 1
                    for u in range(n):
                        memset(nxt, 0, size)
                        for r in range(size):
                            if reach[r]:
                                for o in range(nopts[u]):
                                    if not (opts[u][o] & ~F):
                                        nxt[r | opts[u][o]] = 1
                        for r in range(size):
                            reach[r] = nxt[r]
                    if not reach[F]:
                        ok = False
                        break
                if ok:
                    return [vecs[i] for i in range(n)], guess
            guess += 1
        if not _next_vectors(vecs, n, top):
            break
    return None
