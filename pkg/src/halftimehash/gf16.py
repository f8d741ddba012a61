"""GF(16) arithmetic applied lane-wise across machine words.

A word of ``width`` bits is treated as ``width // 4`` independent field
elements: element ``j`` stores its coefficient for x^c at bit
``j + c * (width // 4)``.  Reduction is by x^4 + x + 1.  Every map is a
fixed sequence of shifts and XORs, so the identical code path serves 4-bit
verification symbols and full 64-bit words (where one word behaves as 16
parallel GF(16) elements).

Functions accept plain integers or numpy uint64 arrays; callers supply the
width mask.
"""

from __future__ import annotations


def xtime(value, width: int, mask: int):
    """Multiply every lane by x, reducing by x^4 + x + 1."""
    stride = width >> 2
    top = value >> (3 * stride)
    return ((value << stride) & mask) ^ top ^ (top << stride)


def scale(coeff: int, value, width: int, mask: int):
    """Multiply every lane by the constant field element ``coeff`` (0..15)."""
    acc = value & 0  # zero of the same type (int or ndarray)
    term = value
    for bit in range(4):
        if coeff >> bit & 1:
            acc = acc ^ term
        term = xtime(term, width, mask)
    return acc


def _build_tables() -> tuple[list[list[int]], list[int]]:
    mul = [[scale(a, b, 4, 0xF) for b in range(16)] for a in range(16)]
    inv = [0] * 16
    for a in range(1, 16):
        inv[a] = next(b for b in range(1, 16) if mul[a][b] == 1)
    return mul, inv


#: 16x16 multiplication table and multiplicative inverses for 4-bit symbols.
MUL, INV = _build_tables()


def mul(a: int, b: int) -> int:
    return MUL[a][b]


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(16)")
    return INV[a]
