"""Pure-Python legal-move generation kernel.

Hot path of every rollout step. A compiled twin (ddzlab._movegen) built from
_movegen.pyx implements the same contract; ddzlab.moves picks one at import.

Moves are transported as plain tuples (category, main_rank, chain_len,
counts15) to keep the kernel boundary cheap. Category codes must match
ddzlab.moves.MoveCategory.
"""

from itertools import combinations

# category codes (mirrors MoveCategory)
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

NUM_RANKS = 15
CHAIN_TOP = 11  # chains use ranks 3..A only


def _counts_of(pairs):
    c = [0] * NUM_RANKS
    for rank, n in pairs:
        c[rank] += n
    return tuple(c)


def _gen_solos(counts, floor, out):
    for r in range(NUM_RANKS):
        if counts[r] >= 1 and r > floor:
            out.append((SOLO, r, 0, _counts_of(((r, 1),))))


def _gen_pairs(counts, floor, out):
    for r in range(13):
        if counts[r] >= 2 and r > floor:
            out.append((PAIR, r, 0, _counts_of(((r, 2),))))


def _gen_trios(counts, floor, out):
    for r in range(13):
        if counts[r] >= 3 and r > floor:
            out.append((TRIO, r, 0, _counts_of(((r, 3),))))


def _gen_trio_kicked(counts, floor, pair_kicker, out):
    cat = TRIO_PAIR if pair_kicker else TRIO_SOLO
    need = 2 if pair_kicker else 1
    top = 13 if pair_kicker else NUM_RANKS
    for r in range(13):
        if counts[r] < 3 or r <= floor:
            continue
        for k in range(top):
            if k != r and counts[k] >= need:
                out.append((cat, r, 0, _counts_of(((r, 3), (k, need)))))


def _gen_chains(counts, mult, cat, min_len, fixed_len, floor, out):
    # fixed_len = 0 means all lengths >= min_len
    for length in range(min_len, CHAIN_TOP + 2):
        if fixed_len and length != fixed_len:
            continue
        for start in range(0, CHAIN_TOP - length + 2):
            main = start + length - 1
            if main <= floor:
                continue
            if all(counts[r] >= mult for r in range(start, start + length)):
                out.append(
                    (cat, main, length, _counts_of([(r, mult) for r in range(start, start + length)]))
                )


def _gen_planes(counts, pair_kicker, fixed_len, floor, out):
    cat = PLANE_PAIR if pair_kicker else PLANE_SOLO
    need = 2 if pair_kicker else 1
    ktop = 13 if pair_kicker else NUM_RANKS
    for length in range(2, CHAIN_TOP + 2):
        if fixed_len and length != fixed_len:
            continue
        for start in range(0, CHAIN_TOP - length + 2):
            main = start + length - 1
            if main <= floor:
                continue
            if not all(counts[r] >= 3 for r in range(start, start + length)):
                continue
            run = set(range(start, start + length))
            kranks = [k for k in range(ktop) if k not in run and counts[k] >= need]
            if len(kranks) < length:
                continue
            for kick in combinations(kranks, length):
                parts = [(r, 3) for r in run] + [(k, need) for k in kick]
                out.append((cat, main, length, _counts_of(parts)))


def _gen_quads(counts, pair_kicker, floor, out):
    cat = QUAD_TWO_PAIR if pair_kicker else QUAD_TWO_SOLO
    need = 2 if pair_kicker else 1
    ktop = 13 if pair_kicker else NUM_RANKS
    for r in range(13):
        if counts[r] != 4 or r <= floor:
            continue
        kranks = [k for k in range(ktop) if k != r and counts[k] >= need]
        for k1, k2 in combinations(kranks, 2):
            out.append((cat, r, 0, _counts_of(((r, 4), (k1, need), (k2, need)))))


def _gen_bombs(counts, floor, out):
    for r in range(13):
        if counts[r] == 4 and r > floor:
            out.append((BOMB, r, 0, _counts_of(((r, 4),))))


def _gen_rocket(counts, out):
    if counts[13] >= 1 and counts[14] >= 1:
        out.append((ROCKET, -1, 0, _counts_of(((13, 1), (14, 1)))))


def gen_moves(counts, inc_cat, inc_main, inc_len):
    """All non-Pass moves from `counts` beating the incumbent.

    inc_cat == PASS means the player is leading (everything goes, no Pass).
    Pass itself is appended by the caller when responding.
    """
    out = []
    if inc_cat == PASS:
        _gen_solos(counts, -1, out)
        _gen_pairs(counts, -1, out)
        _gen_trios(counts, -1, out)
        _gen_trio_kicked(counts, -1, False, out)
        _gen_trio_kicked(counts, -1, True, out)
        _gen_chains(counts, 1, CHAIN_SOLO, 5, 0, -1, out)
        _gen_chains(counts, 2, CHAIN_PAIR, 3, 0, -1, out)
        _gen_chains(counts, 3, CHAIN_TRIO, 2, 0, -1, out)
        _gen_planes(counts, False, 0, -1, out)
        _gen_planes(counts, True, 0, -1, out)
        _gen_quads(counts, False, -1, out)
        _gen_quads(counts, True, -1, out)
        _gen_bombs(counts, -1, out)
        _gen_rocket(counts, out)
        return out

    if inc_cat == ROCKET:
        return out
    if inc_cat == BOMB:
        _gen_bombs(counts, inc_main, out)
        _gen_rocket(counts, out)
        return out

    if inc_cat == SOLO:
        _gen_solos(counts, inc_main, out)
    elif inc_cat == PAIR:
        _gen_pairs(counts, inc_main, out)
    elif inc_cat == TRIO:
        _gen_trios(counts, inc_main, out)
    elif inc_cat == TRIO_SOLO:
        _gen_trio_kicked(counts, inc_main, False, out)
    elif inc_cat == TRIO_PAIR:
        _gen_trio_kicked(counts, inc_main, True, out)
    elif inc_cat == CHAIN_SOLO:
        _gen_chains(counts, 1, CHAIN_SOLO, 5, inc_len, inc_main, out)
    elif inc_cat == CHAIN_PAIR:
        _gen_chains(counts, 2, CHAIN_PAIR, 3, inc_len, inc_main, out)
    elif inc_cat == CHAIN_TRIO:
        _gen_chains(counts, 3, CHAIN_TRIO, 2, inc_len, inc_main, out)
    elif inc_cat == PLANE_SOLO:
        _gen_planes(counts, False, inc_len, inc_main, out)
    elif inc_cat == PLANE_PAIR:
        _gen_planes(counts, True, inc_len, inc_main, out)
    elif inc_cat == QUAD_TWO_SOLO:
        _gen_quads(counts, False, inc_main, out)
    elif inc_cat == QUAD_TWO_PAIR:
        _gen_quads(counts, True, inc_main, out)
    _gen_bombs(counts, -1, out)
    _gen_rocket(counts, out)
    return out


IMPLEMENTATION = "pure"
