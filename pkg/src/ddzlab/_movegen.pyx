# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled legal-move generation kernel.

Typed twin of ddzlab._movegen_py with the identical gen_moves contract:
moves travel as (category, main_rank, chain_len, counts15) tuples and the
output order matches the pure kernel element for element.
"""

cdef enum:
    PASS = 0
    SOLO = 1
    PAIR = 2
    TRIO = 3
    TRIO_SOLO = 4
    TRIO_PAIR = 5
    CHAIN_SOLO = 6
    CHAIN_PAIR = 7
    CHAIN_TRIO = 8
    PLANE_SOLO = 9
    PLANE_PAIR = 10
    QUAD_TWO_SOLO = 11
    QUAD_TWO_PAIR = 12
    BOMB = 13
    ROCKET = 14

cdef enum:
    NUM_RANKS = 15
    CHAIN_TOP = 11


cdef tuple _tuple15(int* c):
    return (c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7],
            c[8], c[9], c[10], c[11], c[12], c[13], c[14])


cdef inline void _zero(int* c):
    cdef int i
    for i in range(NUM_RANKS):
        c[i] = 0


cdef void _gen_solos(int* counts, int floor, list out):
    cdef int r
    cdef int c[15]
    for r in range(NUM_RANKS):
        if counts[r] >= 1 and r > floor:
            _zero(c)
            c[r] = 1
            out.append((SOLO, r, 0, _tuple15(c)))


cdef void _gen_pairs(int* counts, int floor, list out):
    cdef int r
    cdef int c[15]
    for r in range(13):
        if counts[r] >= 2 and r > floor:
            _zero(c)
            c[r] = 2
            out.append((PAIR, r, 0, _tuple15(c)))


cdef void _gen_trios(int* counts, int floor, list out):
    cdef int r
    cdef int c[15]
    for r in range(13):
        if counts[r] >= 3 and r > floor:
            _zero(c)
            c[r] = 3
            out.append((TRIO, r, 0, _tuple15(c)))


cdef void _gen_trio_kicked(int* counts, int floor, bint pair_kicker, list out):
    cdef int cat = TRIO_PAIR if pair_kicker else TRIO_SOLO
    cdef int need = 2 if pair_kicker else 1
    cdef int top = 13 if pair_kicker else NUM_RANKS
    cdef int r, k
    cdef int c[15]
    for r in range(13):
        if counts[r] < 3 or r <= floor:
            continue
        for k in range(top):
            if k != r and counts[k] >= need:
                _zero(c)
                c[r] = 3
                c[k] = need
                out.append((cat, r, 0, _tuple15(c)))


cdef void _gen_chains(int* counts, int mult, int cat, int min_len,
                      int fixed_len, int floor, list out):
    cdef int length, start, main, r
    cdef bint ok
    cdef int c[15]
    for length in range(min_len, CHAIN_TOP + 2):
        if fixed_len and length != fixed_len:
            continue
        for start in range(0, CHAIN_TOP - length + 2):
            main = start + length - 1
            if main <= floor:
                continue
            ok = True
            for r in range(start, start + length):
                if counts[r] < mult:
                    ok = False
                    break
            if not ok:
                continue
            _zero(c)
            for r in range(start, start + length):
                c[r] = mult
            out.append((cat, main, length, _tuple15(c)))


cdef void _emit_plane(int* counts, int cat, int need, int start, int length,
                      int main, int* kranks, int nk, list out):
    # choose `length` kickers from kranks in lexicographic order
    cdef int idx[15]
    cdef int i, j
    cdef int c[15]
    if nk < length:
        return
    for i in range(length):
        idx[i] = i
    while True:
        _zero(c)
        for j in range(start, start + length):
            c[j] = 3
        for i in range(length):
            c[kranks[idx[i]]] = need
        out.append((cat, main, length, _tuple15(c)))
        # advance combination indices
        i = length - 1
        while i >= 0 and idx[i] == nk - length + i:
            i -= 1
        if i < 0:
            return
        idx[i] += 1
        for j in range(i + 1, length):
            idx[j] = idx[j - 1] + 1


cdef void _gen_planes(int* counts, bint pair_kicker, int fixed_len, int floor, list out):
    cdef int cat = PLANE_PAIR if pair_kicker else PLANE_SOLO
    cdef int need = 2 if pair_kicker else 1
    cdef int ktop = 13 if pair_kicker else NUM_RANKS
    cdef int length, start, main, r, k, nk
    cdef bint ok
    cdef int kranks[15]
    for length in range(2, CHAIN_TOP + 2):
        if fixed_len and length != fixed_len:
            continue
        for start in range(0, CHAIN_TOP - length + 2):
            main = start + length - 1
            if main <= floor:
                continue
            ok = True
            for r in range(start, start + length):
                if counts[r] < 3:
                    ok = False
                    break
            if not ok:
                continue
            nk = 0
            for k in range(ktop):
                if (k < start or k >= start + length) and counts[k] >= need:
                    kranks[nk] = k
                    nk += 1
            _emit_plane(counts, cat, need, start, length, main, kranks, nk, out)


cdef void _gen_quads(int* counts, bint pair_kicker, int floor, list out):
    cdef int cat = QUAD_TWO_PAIR if pair_kicker else QUAD_TWO_SOLO
    cdef int need = 2 if pair_kicker else 1
    cdef int ktop = 13 if pair_kicker else NUM_RANKS
    cdef int r, k, i, j, nk
    cdef int kranks[15]
    cdef int c[15]
    for r in range(13):
        if counts[r] != 4 or r <= floor:
            continue
        nk = 0
        for k in range(ktop):
            if k != r and counts[k] >= need:
                kranks[nk] = k
                nk += 1
        for i in range(nk):
            for j in range(i + 1, nk):
                _zero(c)
                c[r] = 4
                c[kranks[i]] = need
                c[kranks[j]] = need
                out.append((cat, r, 0, _tuple15(c)))


cdef void _gen_bombs(int* counts, int floor, list out):
    cdef int r
    cdef int c[15]
    for r in range(13):
        if counts[r] == 4 and r > floor:
            _zero(c)
            c[r] = 4
            out.append((BOMB, r, 0, _tuple15(c)))


cdef void _gen_rocket(int* counts, list out):
    cdef int c[15]
    if counts[13] >= 1 and counts[14] >= 1:
        _zero(c)
        c[13] = 1
        c[14] = 1
        out.append((ROCKET, -1, 0, _tuple15(c)))


def gen_moves(counts, int inc_cat, int inc_main, int inc_len):
    """All non-Pass moves from `counts` beating the incumbent.

    inc_cat == PASS means the player is leading (everything goes, no Pass).
    Pass itself is appended by the caller when responding.
    """
    cdef int c[15]
    cdef int i
    for i in range(NUM_RANKS):
        c[i] = counts[i]
    cdef list out = []

    if inc_cat == PASS:
        _gen_solos(c, -1, out)
        _gen_pairs(c, -1, out)
        _gen_trios(c, -1, out)
        _gen_trio_kicked(c, -1, False, out)
        _gen_trio_kicked(c, -1, True, out)
        _gen_chains(c, 1, CHAIN_SOLO, 5, 0, -1, out)
        _gen_chains(c, 2, CHAIN_PAIR, 3, 0, -1, out)
        _gen_chains(c, 3, CHAIN_TRIO, 2, 0, -1, out)
        _gen_planes(c, False, 0, -1, out)
        _gen_planes(c, True, 0, -1, out)
        _gen_quads(c, False, -1, out)
        _gen_quads(c, True, -1, out)
        _gen_bombs(c, -1, out)
        _gen_rocket(c, out)
        return out

    if inc_cat == ROCKET:
        return out
    if inc_cat == BOMB:
        _gen_bombs(c, inc_main, out)
        _gen_rocket(c, out)
        return out

    if inc_cat == SOLO:
        _gen_solos(c, inc_main, out)
    elif inc_cat == PAIR:
        _gen_pairs(c, inc_main, out)
    elif inc_cat == TRIO:
        _gen_trios(c, inc_main, out)
    elif inc_cat == TRIO_SOLO:
        _gen_trio_kicked(c, inc_main, False, out)
    elif inc_cat == TRIO_PAIR:
        _gen_trio_kicked(c, inc_main, True, out)
    elif inc_cat == CHAIN_SOLO:
        _gen_chains(c, 1, CHAIN_SOLO, 5, inc_len, inc_main, out)
    elif inc_cat == CHAIN_PAIR:
        _gen_chains(c, 2, CHAIN_PAIR, 3, inc_len, inc_main, out)
    elif inc_cat == CHAIN_TRIO:
        _gen_chains(c, 3, CHAIN_TRIO, 2, inc_len, inc_main, out)
    elif inc_cat == PLANE_SOLO:
        _gen_planes(c, False, inc_len, inc_main, out)
    elif inc_cat == PLANE_PAIR:
        _gen_planes(c, True, inc_len, inc_main, out)
    elif inc_cat == QUAD_TWO_SOLO:
        _gen_quads(c, False, inc_main, out)
    elif inc_cat == QUAD_TWO_PAIR:
        _gen_quads(c, True, inc_main, out)
    _gen_bombs(c, -1, out)
    _gen_rocket(c, out)
    return out


IMPLEMENTATION = "compiled"
