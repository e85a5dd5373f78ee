"""Permutations of {0..k-1} as tuples in one-line notation.

``p[i]`` is the image of ``i``.  The text form used by labels and the CLI
is 1-based cycle notation, e.g. ``(123)`` for the 3-cycle and ``e`` for the
identity.
"""

from __future__ import annotations

import itertools
import re


def identity_perm(k: int) -> tuple[int, ...]:
    return tuple(range(k))


def compose(p, q) -> tuple[int, ...]:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[q[x]] for x in range(len(p)))


def inverse(p) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def conjugate(p, t) -> tuple[int, ...]:
    """t p t^{-1}, i.e. p with its points relabeled through t."""
    out = [0] * len(p)
    for i in range(len(p)):
        out[t[i]] = t[p[i]]
    return tuple(out)


def all_perms(k: int) -> list[tuple[int, ...]]:
    """All of S_k in lexicographic order of one-line notation."""
    return list(itertools.permutations(range(k)))


def cycles(p) -> list[tuple[int, ...]]:
    """Cycle decomposition; every cycle starts at its smallest point.

    Fixed points are omitted.  Cycles are sorted by decreasing length, ties
    by smallest point.
    """
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    out.sort(key=lambda c: (-len(c), c[0]))
    return out


def from_cycles(k: int, cycs) -> tuple[int, ...]:
    out = list(range(k))
    for cyc in cycs:
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"repeated point in cycle {cyc}")
        for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
            if not 0 <= a < k:
                raise ValueError(f"point {a} out of range for degree {k}")
            out[a] = b
    return tuple(out)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, k: int) -> tuple[int, ...]:
    """Parse 1-based cycle notation, or ``e`` for the identity.

    Points inside a cycle may be separated by spaces or commas; without
    separators each digit is one point (fine for k <= 9).
    """
    text = text.strip()
    if text == "e":
        return identity_perm(k)
    if not text or text.replace(" ", "").count("(") == 0:
        raise ValueError(f"cannot parse permutation {text!r}")
    rest = text
    cycs = []
    for m in _CYCLE_RE.finditer(text):
        body = m.group(1).strip()
        if re.search(r"[,\s]", body):
            points = [s for s in re.split(r"[,\s]+", body) if s]
        else:
            points = list(body)
        try:
            cyc = tuple(int(s) - 1 for s in points)
        except ValueError:
            raise ValueError(f"bad cycle {m.group(0)!r} in {text!r}") from None
        if any(x < 0 or x >= k for x in cyc):
            raise ValueError(f"point out of range 1..{k} in {m.group(0)!r}")
        cycs.append(cyc)
        rest = rest.replace(m.group(0), "", 1)
    if rest.strip():
        raise ValueError(f"trailing junk {rest.strip()!r} in permutation {text!r}")
    flat = [x for c in cycs for x in c]
    if len(set(flat)) != len(flat):
        raise ValueError(f"point repeated across cycles in {text!r}")
    return from_cycles(k, cycs)


def format_perm(p) -> str:
    """1-based cycle notation; ``e`` for the identity."""
    cycs = cycles(p)
    if not cycs:
        return "e"
    sep = "" if len(p) <= 9 else " "
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in cycs)
