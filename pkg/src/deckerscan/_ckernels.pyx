# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""

from libc.stdint cimport uint64_t, uint32_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy, memset

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int clz64 "__builtin_clzll"(unsigned long long) nogil

cdef enum:
    MAX_RANK = 32
    MAX_WORDS = 8          # ceil(32*31/2 / 64)

cdef uint64_t EVEN = 0x5555555555555555ULL

cdef inline uint64_t swap_pairs64(uint64_t x) noexcept nogil:
    return ((x & EVEN) << 1) | ((x >> 1) & EVEN)

cdef inline int form32(uint32_t u, uint32_t v) noexcept nogil:
    return popcount64(<uint64_t>u & swap_pairs64(<uint64_t>v)) & 1


def disjoint_pairs(arc_masks, straight_masks):
    cdef Py_ssize_t n = len(arc_masks)
    cdef Py_ssize_t i, j
    cdef uint64_t *am
    cdef uint64_t *sm
    cdef uint64_t *sw
    cdef uint64_t ai, si
    if any(m >> 64 for m in arc_masks) or any(m >> 64 for m in straight_masks):
        raise OverflowError("mask wider than 64 bits")
    am = <uint64_t *> malloc(max(n, 1) * sizeof(uint64_t))
    sm = <uint64_t *> malloc(max(n, 1) * sizeof(uint64_t))
    sw = <uint64_t *> malloc(max(n, 1) * sizeof(uint64_t))
    out = []
    try:
        for i in range(n):
            am[i] = arc_masks[i]
            sm[i] = straight_masks[i]
            sw[i] = swap_pairs64(sm[i])
        for i in range(n):
            ai = am[i]
            si = sm[i]
            for j in range(i + 1, n):
                if ai & am[j]:
                    continue
                out.append((i, j, popcount64(si & sw[j]) & 1))
    finally:
        free(am)
        free(sm)
        free(sw)
    return out


cdef inline int top_bit(const uint64_t *w, int nw) noexcept nogil:
    cdef int k
    for k in range(nw - 1, -1, -1):
        if w[k]:
            return k * 64 + 63 - clz64(w[k])
    return -1


cdef inline void flip_bit(uint64_t *w, int bit) noexcept nogil:
    w[bit >> 6] ^= (<uint64_t>1) << (bit & 63)


cdef object words_to_int(const uint64_t *w, int nw):
    cdef int k
    v = 0
    for k in range(nw - 1, -1, -1):
        v = (v << 64) | w[k]
    return v


cdef void int_to_words(object v, uint64_t *w, int nw):
    cdef int k
    for k in range(nw):
        w[k] = <uint64_t>(v & 0xFFFFFFFFFFFFFFFF)
        v >>= 64


def reduce_bilinear(vectors, pairs):
    cdef int rank = 0
    cdef int nvars, nw, a, b, top, k
    cdef Py_ssize_t idx
    cdef uint32_t x, y, xa, yb
    cdef int rhs
    cdef uint64_t tmp[MAX_WORDS]
    cdef uint64_t *piv
    cdef int *piv_rhs
    cdef char *has
    for v in vectors:
        rank = max(rank, int(v).bit_length())
    if rank > MAX_RANK:
        raise OverflowError("rank too large for compiled kernel")
    nvars = rank * (rank - 1) // 2
    nw = max(1, (nvars + 63) // 64)
    piv = <uint64_t *> calloc(max(nvars, 1) * nw, sizeof(uint64_t))
    piv_rhs = <int *> calloc(max(nvars, 1), sizeof(int))
    has = <char *> calloc(max(nvars, 1), sizeof(char))
    seen = set()
    try:
        for i, j, p in pairs:
            x = vectors[i]
            y = vectors[j]
            key = (x, y, p)
            if key in seen:
                continue
            seen.add(key)
            memset(tmp, 0, sizeof(tmp))
            for a in range(rank):
                if not (x >> a) & 1:
                    continue
                for b in range(rank):
                    if a == b or not (y >> b) & 1:
                        continue
                    if a < b:
                        flip_bit(tmp, b * (b - 1) // 2 + a)
                    else:
                        flip_bit(tmp, a * (a - 1) // 2 + b)
            rhs = p
            while True:
                top = top_bit(tmp, nw)
                if top < 0:
                    if rhs:
                        return None
                    break
                if not has[top]:
                    has[top] = 1
                    memcpy(&piv[top * nw], tmp, nw * sizeof(uint64_t))
                    piv_rhs[top] = rhs
                    break
                for k in range(nw):
                    tmp[k] ^= piv[top * nw + k]
                rhs ^= piv_rhs[top]
        rows = []
        for idx in range(nvars):
            if has[idx]:
                rows.append((words_to_int(&piv[idx * nw], nw), piv_rhs[idx]))
        return rows
    finally:
        free(piv)
        free(piv_rhs)
        free(has)


cdef struct SearchCtx:
    int rank
    int nvec
    int nw
    int req_level
    uint32_t required
    uint64_t *rows          # nrows * nw
    int *rhs
    int *level_start        # rank + 1 entries
    uint32_t classes[MAX_RANK]
    uint64_t bvals[MAX_RANK + 1][MAX_WORDS]


cdef int rec(SearchCtx *ctx, int k, int any_nonzero) noexcept nogil:
    cdef int c, a, r, w, par, base, ncand
    cdef uint32_t img
    cdef uint64_t *nb
    if k == ctx.rank:
        return 1
    ncand = ctx.nvec if any_nonzero else (2 if ctx.nvec > 1 else 1)
    base = k * (k - 1) // 2
    nb = ctx.bvals[k + 1]
    for c in range(ncand):
        for w in range(ctx.nw):
            nb[w] = ctx.bvals[k][w]
        for a in range(k):
            if form32(ctx.classes[a], <uint32_t>c):
                flip_bit(nb, base + a)
        par = 1
        for r in range(ctx.level_start[k], ctx.level_start[k + 1]):
            w = 0
            for a in range(ctx.nw):
                w += popcount64(ctx.rows[r * ctx.nw + a] & nb[a])
            if (w & 1) != ctx.rhs[r]:
                par = 0
                break
        if not par:
            continue
        ctx.classes[k] = <uint32_t>c
        if k == ctx.req_level:
            img = 0
            for a in range(k + 1):
                if (ctx.required >> a) & 1:
                    img ^= ctx.classes[a]
            if img == 0:
                continue
        if rec(ctx, k + 1, any_nonzero or c != 0):
            return 1
    ctx.classes[k] = 0
    return 0


def search(int rank, int genus, rows, required):
    cdef SearchCtx *ctx
    cdef int nrows = len(rows)
    cdef int nvars, level, top, i, found
    if rank > MAX_RANK or 2 * genus > 30:
        raise OverflowError("problem too large for compiled kernel")
    if rank == 0:
        return [] if not required else None
    req_level = int(required).bit_length() - 1 if required else -1
    if required and req_level >= rank:
        raise ValueError("required vector beyond the rank")
    nvars = rank * (rank - 1) // 2
    ctx = <SearchCtx *> calloc(1, sizeof(SearchCtx))
    ctx.rank = rank
    ctx.nvec = 1 << (2 * genus)
    ctx.nw = max(1, (nvars + 63) // 64)
    ctx.req_level = req_level
    ctx.required = <uint32_t>(required or 0)
    ctx.rows = <uint64_t *> calloc(max(nrows, 1) * ctx.nw, sizeof(uint64_t))
    ctx.rhs = <int *> calloc(max(nrows, 1), sizeof(int))
    ctx.level_start = <int *> calloc(rank + 1, sizeof(int))
    try:
        leveled = []
        for coeff, rhs in rows:
            top = int(coeff).bit_length() - 1
            level = 1
            while level * (level + 1) // 2 <= top:
                level += 1
            if level >= rank:
                raise ValueError("equation refers to a basis index beyond the rank")
            leveled.append((level, coeff, rhs))
        leveled.sort(key=lambda t: t[0])
        counts = [0] * (rank + 1)
        for i in range(nrows):
            level, coeff, rhs = leveled[i]
            int_to_words(coeff, &ctx.rows[i * ctx.nw], ctx.nw)
            ctx.rhs[i] = rhs
            counts[level + 1] += 1
        ctx.level_start[0] = 0
        for i in range(rank):
            ctx.level_start[i + 1] = ctx.level_start[i] + counts[i + 1]
        with nogil:
            found = rec(ctx, 0, 0)
        if found:
            return [int(ctx.classes[i]) for i in range(rank)]
        return None
    finally:
        free(ctx.rows)
        free(ctx.rhs)
        free(ctx.level_start)
        free(ctx)
