"""Pure-Python kernels.  Semantics must match ``_ckernels.pyx`` exactly.

Bit conventions shared with the compiled kernels:

* symplectic vectors: bit ``2i`` is a_i, bit ``2i+1`` is b_i, so the form is
  ``popcount(u & swap_pairs(v)) mod 2``;
* straight-pass masks use the same layout, one bit per (vertex, strand);
* unknown ``B(a, b)`` for basis indices ``a < b`` sits at bit
  ``b*(b-1)//2 + a``, so higher basis indices own higher bits.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

_EVEN = int("01" * 64, 2)


def swap_pairs(x: int) -> int:
    even = x & _EVEN
    odd = (x >> 1) & _EVEN
    # _EVEN covers 128 bits, enough for every mask handled here
    return (even << 1) | odd


def form(u: int, v: int) -> int:
    return bin(u & swap_pairs(v)).count("1") & 1


def var_index(a: int, b: int) -> int:
    if a > b:
        a, b = b, a
    return b * (b - 1) // 2 + a


def disjoint_pairs(arc_masks: Sequence[int], straight_masks: Sequence[int]) -> List[Tuple[int, int, int]]:
    """All ``(i, j, parity)`` with ``i < j`` whose arc sets are disjoint."""
    out = []
    n = len(arc_masks)
    swapped = [swap_pairs(m) for m in straight_masks]
    for i in range(n):
        ai = arc_masks[i]
        si = straight_masks[i]
        for j in range(i + 1, n):
            if ai & arc_masks[j]:
                continue
            out.append((i, j, bin(si & swapped[j]).count("1") & 1))
    return out


def _bits(x: int) -> List[int]:
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def bilinear_coeff(x: int, y: int) -> int:
    """Coefficient mask of B(x, y) = sum over a in x, b in y of B(a, b), B alternating."""
    coeff = 0
    ybits = _bits(y)
    for a in _bits(x):
        for b in ybits:
            if a != b:
                coeff ^= 1 << var_index(a, b)
    return coeff


def reduce_bilinear(
    vectors: Sequence[int], pairs: Sequence[Tuple[int, int, int]]
) -> Optional[List[Tuple[int, int]]]:
    """Row-reduce the linear system on B implied by the pair constraints.

    Returns rows ``(coeff, rhs)`` with distinct leading (highest) bits, sorted
    by leading bit, or ``None`` when the system is inconsistent.
    """
    pivots = {}
    seen = set()
    for i, j, p in pairs:
        key = (vectors[i], vectors[j], p)
        if key in seen:
            continue
        seen.add(key)
        coeff = bilinear_coeff(vectors[i], vectors[j])
        rhs = p
        while coeff:
            top = coeff.bit_length() - 1
            row = pivots.get(top)
            if row is None:
                pivots[top] = (coeff, rhs)
                break
            coeff ^= row[0]
            rhs ^= row[1]
        else:
            if rhs:
                return None
    return [pivots[k] for k in sorted(pivots)]


def search(rank: int, genus: int, rows: Sequence[Tuple[int, int]], required: int) -> Optional[List[int]]:
    """Find classes ``c_0..c_{rank-1}`` in GF(2)^(2g) solving ``rows``.

    ``rows`` are reduced equations from :func:`reduce_bilinear`.  When
    ``required`` is nonzero, the class of that coordinate vector must be
    nonzero too.  Returns a witness or ``None``.
    """
    nvec = 1 << (2 * genus)
    by_level: List[List[Tuple[int, int]]] = [[] for _ in range(max(rank, 1))]
    for coeff, rhs in rows:
        top = coeff.bit_length() - 1
        level = 1
        while level * (level + 1) // 2 <= top:
            level += 1
        if level >= rank:
            raise ValueError("equation refers to a basis index beyond the rank")
        by_level[level].append((coeff, rhs))
    req_level = required.bit_length() - 1 if required else -1
    if required and req_level >= rank:
        raise ValueError("required vector beyond the rank")

    classes = [0] * rank

    def rec(k: int, bvals: int, any_nonzero: bool) -> bool:
        if k == rank:
            return True
        candidates = range(nvec) if any_nonzero else range(min(nvec, 2))
        for c in candidates:
            sc = swap_pairs(c)
            nb = bvals
            base = k * (k - 1) // 2
            for a in range(k):
                if bin(classes[a] & sc).count("1") & 1:
                    nb |= 1 << (base + a)
            ok = True
            for coeff, rhs in by_level[k]:
                if (bin(coeff & nb).count("1") & 1) != rhs:
                    ok = False
                    break
            if not ok:
                continue
            classes[k] = c
            if k == req_level:
                img = 0
                for a in _bits(required):
                    img ^= classes[a]
                if img == 0:
                    continue
            if rec(k + 1, nb, any_nonzero or c != 0):
                return True
        classes[k] = 0
        return False

    if rank == 0:
        return [] if not required else None
    if rec(0, 0, False):
        return list(classes)
    return None
