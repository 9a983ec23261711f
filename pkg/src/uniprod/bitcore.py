"""Bitstrings, binary search trees and signature arithmetic.

Bitstrings are plain ``str`` values over the alphabet "01".  A node's
signature is the bitstring of left/right turns on the path from the root
(0 = left), so the root has the empty signature and ancestor-of equals
prefix-of.
"""

from __future__ import annotations

from itertools import accumulate
from typing import Iterable, Iterator, Mapping, Sequence


def check_bits(s: str) -> str:
    if not isinstance(s, str) or s.strip("01"):
        raise ValueError(f"not a bitstring: {s!r}")
    return s


def is_prefix(x: str, y: str) -> bool:
    """True iff x is a (not necessarily proper) prefix of y."""
    return y.startswith(x)


def compatible(x: str, y: str) -> bool:
    """True iff one of x, y is a prefix of the other."""
    return x.startswith(y) or y.startswith(x)


def lcp_len(x: str, y: str) -> int:
    n = min(len(x), len(y))
    i = 0
    while i < n and x[i] == y[i]:
        i += 1
    return i


def render(s: str) -> str:
    """Human-readable form for reports: the empty string prints as epsilon."""
    return s if s else "ε"


class Bst:
    """Immutable binary search tree over distinct integer keys."""

    __slots__ = ("root", "_left", "_right", "_depth", "_sig", "_keys")

    def __init__(self, root, left, right):
        self.root = root
        self._left = left
        self._right = right
        self._keys = sorted(left)
        self._depth = {}
        self._sig = {}
        if root is not None:
            stack = [(root, 0, "")]
            while stack:
                k, d, sig = stack.pop()
                self._depth[k] = d
                self._sig[k] = sig
                if left[k] is not None:
                    stack.append((left[k], d + 1, sig + "0"))
                if right[k] is not None:
                    stack.append((right[k], d + 1, sig + "1"))

    def __len__(self):
        return len(self._keys)

    def __contains__(self, key):
        return key in self._depth

    def keys(self):
        return self._keys

    def left(self, key):
        return self._left[key]

    def right(self, key):
        return self._right[key]

    def depth(self, key) -> int:
        return self._depth[key]

    @property
    def height(self) -> int:
        return max(self._depth.values()) if self._depth else 0

    def signature(self, key) -> str:
        return self._sig[key]

    def is_ancestor(self, a, b) -> bool:
        """True iff a is an ancestor of b (every node is its own ancestor)."""
        return self._sig[b].startswith(self._sig[a])

    def __eq__(self, other):
        return isinstance(other, Bst) and self._sig == other._sig

    def __hash__(self):
        return hash(frozenset(self._sig.items()))

    def __repr__(self):
        return f"Bst({len(self)} keys, root={self.root}, height={self.height})"


def signature(t: Bst, key) -> str:
    return t.signature(key)


def build_biased_bst(keys: Iterable[int], weights=None) -> Bst:
    """Build a BST by the half-weight rule.

    The root of each subtree is the smallest key whose cumulative weight
    (in key order) reaches half the subtree's total; both children then
    carry at most half the weight, so a key of weight w sits at depth at
    most log2(W/w).
    """
    ks = sorted(keys)
    if not ks:
        raise ValueError("empty key set")
    if len(set(ks)) != len(ks):
        raise ValueError("duplicate keys")
    if weights is None:
        ws = [1] * len(ks)
    elif isinstance(weights, Mapping):
        ws = [weights[k] for k in ks]
    else:
        ws = [weights[i] for i in range(len(ks))]
    if any(w <= 0 for w in ws):
        raise ValueError("weights must be positive")

    cum = [0] + list(accumulate(ws))  # cum[i] = weight of ks[:i]
    left: dict = {}
    right: dict = {}

    def build(lo, hi):  # keys ks[lo:hi], nonempty
        total = cum[hi] - cum[lo]
        # smallest m in (lo, hi] with 2*(cum[m]-cum[lo]) >= total; root is ks[m-1]
        a, b = lo + 1, hi
        while a < b:
            mid = (a + b) // 2
            if 2 * (cum[mid] - cum[lo]) >= total:
                b = mid
            else:
                a = mid + 1
        r = a - 1
        k = ks[r]
        left[k] = build(lo, r) if r > lo else None
        right[k] = build(r + 1, hi) if r + 1 < hi else None
        return k

    root = build(0, len(ks))
    return Bst(root, left, right)


def enumerate_bsts(keys: Sequence[int]) -> Iterator[Bst]:
    """Yield every BST shape over the given keys (Catalan many)."""
    ks = sorted(keys)

    def shapes(lo, hi):
        if lo >= hi:
            yield None, {}, {}
            return
        for r in range(lo, hi):
            for lroot, llft, lrgt in shapes(lo, r):
                for rroot, rlft, rrgt in shapes(r + 1, hi):
                    lft = dict(llft)
                    rgt = dict(lrgt)
                    lft.update(rlft)
                    rgt.update(rrgt)
                    lft[ks[r]] = lroot
                    rgt[ks[r]] = rroot
                    yield ks[r], lft, rgt

    for root, lft, rgt in shapes(0, len(ks)):
        if root is not None:
            yield Bst(root, lft, rgt)


def strip_successor(sigma: str) -> str | None:
    """Signature reached by dropping trailing 1s and one 0, or None.

    This is the successor's signature when the node has no right child;
    an all-ones (or empty) signature belongs to the tree maximum, which
    has no successor, so None is returned.
    """
    t = sigma.rstrip("1")
    if not t:
        return None
    return t[:-1]


def successor_set(sigma: str, h: int) -> set[str]:
    """All signatures the in-order successor can have in a tree of height <= h.

    Consecutive keys x < y in any BST satisfy either sig(y) = strip(sig(x))
    (x has no right child) or sig(y) = sig(x) + "1" + "0"*j with
    |sig(x)| + 1 + j <= h.  The set has at most h+1 elements.
    """
    check_bits(sigma)
    if len(sigma) > h:
        raise ValueError(f"|sigma| = {len(sigma)} exceeds height {h}")
    out = set()
    s = strip_successor(sigma)
    if s is not None:
        out.add(s)
    for j in range(h - len(sigma)):
        out.add(sigma + "1" + "0" * j)
    return out


def in_successor_set(sigma: str, tau: str, h: int) -> bool:
    """Membership test for successor_set without materialising it."""
    if len(sigma) > h or len(tau) > h:
        return False
    if tau == strip_successor(sigma):
        return True
    k = len(sigma)
    return len(tau) > k and tau[:k] == sigma and tau[k] == "1" and not tau[k + 1 :].strip("0")


class BitWriter:
    """Append-only bit buffer with the field encodings the label format uses."""

    def __init__(self):
        self._parts: list[str] = []

    def bits(self, s: str):
        self._parts.append(check_bits(s))

    def fixed(self, value: int, width: int):
        if value < 0 or value >= (1 << width):
            raise ValueError(f"{value} does not fit in {width} bits")
        self._parts.append(format(value, f"0{width}b") if width else "")

    def gamma(self, value: int):
        """Elias gamma; value >= 1."""
        if value < 1:
            raise ValueError("gamma codes positive integers")
        b = format(value, "b")
        self._parts.append("0" * (len(b) - 1) + b)

    def prefixed(self, s: str):
        """Length-prefixed bitstring (possibly empty)."""
        self.gamma(len(s) + 1)
        self.bits(s)

    def getvalue(self) -> str:
        return "".join(self._parts)


class BitReader:
    def __init__(self, data: str):
        self._data = check_bits(data)
        self._pos = 0

    def bits(self, n: int) -> str:
        if self._pos + n > len(self._data):
            raise ValueError("bit underrun")
        out = self._data[self._pos : self._pos + n]
        self._pos += n
        return out

    def fixed(self, width: int) -> int:
        return int(self.bits(width), 2) if width else 0

    def gamma(self) -> int:
        zeros = 0
        while self.bits(1) == "0":
            zeros += 1
        return int("1" + self.bits(zeros), 2) if zeros else 1

    def prefixed(self) -> str:
        return self.bits(self.gamma() - 1)

    def at_end(self) -> bool:
        return self._pos == len(self._data)
