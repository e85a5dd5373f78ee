"""Polynomial local-unitary invariants labeled by permutation tuples.

A degree-k invariant of an n-subsystem operator rho is the trace of k
copies of rho wired together by one permutation of the copies per
subsystem.  Tuples related by relabeling the identical copies (conjugating
every permutation by the same element) give the same number, so classes
are enumerated up to simultaneous conjugation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Callable, Sequence

import numpy as np

from . import perms
from .decompose import schmidt
from .tensor import Tensor, ShapeError, contract, self_trace, tensor_product, group_legs
from .states import apply_local_unitary, random_local_unitary

MAX_DEGREE = 6  # (k!)^n tuples; exhaustive conjugation stays cheap up to here


@dataclass(frozen=True)
class PermTuple:
    """Label of one invariant: degree k plus one permutation per subsystem."""

    k: int
    sigmas: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"degree must be >= 1, got {self.k}")
        if not self.sigmas:
            raise ValueError("need at least one subsystem permutation")
        norm = tuple(tuple(int(x) for x in s) for s in self.sigmas)
        object.__setattr__(self, "sigmas", norm)
        for s in norm:
            if sorted(s) != list(range(self.k)):
                raise ValueError(f"{s} is not a permutation of 0..{self.k - 1}")

    @property
    def n(self) -> int:
        return len(self.sigmas)

    def label(self) -> str:
        return format_label(self)


def parse_label(text: str) -> PermTuple:
    """Parse ``k; cycles | cycles | ...`` into a PermTuple.

    Cycle terms use 1-based parenthesized cycle notation with ``e`` for the
    identity; whitespace is insignificant.
    """
    head, sep, tail = text.partition(";")
    if not sep:
        raise ValueError(f"label {text!r} is missing the '; ' after the degree")
    try:
        k = int(head.strip())
    except ValueError:
        raise ValueError(f"bad degree {head.strip()!r} in label {text!r}") from None
    terms = tail.split("|")
    if not terms or not tail.strip():
        raise ValueError(f"label {text!r} has no permutation terms")
    sigmas = tuple(perms.parse_perm(term, k) for term in terms)
    return PermTuple(k, sigmas)


def format_label(t: PermTuple) -> str:
    return f"{t.k}; " + " | ".join(perms.format_perm(s) for s in t.sigmas)


def conjugate_tuple(t: PermTuple, tau) -> PermTuple:
    """Relabel the k copies through tau in every subsystem permutation."""
    return PermTuple(t.k, tuple(perms.conjugate(s, tau) for s in t.sigmas))


def canonicalize(t: PermTuple) -> PermTuple:
    """Lexicographically minimal tuple over all simultaneous conjugations.

    Two tuples canonicalize equal iff they label the same invariant diagram
    (up to reordering the identical copies of rho).
    """
    best = min(
        tuple(perms.conjugate(s, tau) for s in t.sigmas)
        for tau in itertools.permutations(range(t.k))
    )
    return PermTuple(t.k, best)


def connected_components(t: PermTuple) -> tuple[tuple[int, ...], ...]:
    """Partition of the k copies into the diagram's connected components."""
    parent = list(range(t.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in t.sigmas:
        for j in range(t.k):
            a, b = find(j), find(s[j])
            if a != b:
                parent[a] = b
    groups: dict[int, list[int]] = {}
    for j in range(t.k):
        groups.setdefault(find(j), []).append(j)
    return tuple(tuple(g) for g in sorted(groups.values()))


def component_subtuples(t: PermTuple) -> list[PermTuple]:
    """Restrict the tuple to each connected component of copies."""
    out = []
    for comp in connected_components(t):
        pos = {c: i for i, c in enumerate(comp)}
        sigmas = tuple(
            tuple(pos[s[c]] for c in comp) for s in t.sigmas
        )
        out.append(PermTuple(len(comp), sigmas))
    return out


def is_real_guaranteed(t: PermTuple) -> bool:
    """True iff some common relabeling inverts every permutation at once.

    Such tuples coincide with their complex conjugate label, so the
    invariant is real on every input.
    """
    inverses = tuple(perms.inverse(s) for s in t.sigmas)
    for tau in itertools.permutations(range(t.k)):
        if all(
            perms.conjugate(s, tau) == inv for s, inv in zip(t.sigmas, inverses)
        ):
            return True
    return False


@dataclass(frozen=True)
class CanonicalClass:
    """One simultaneous-conjugation orbit of permutation tuples."""

    representative: PermTuple
    orbit_size: int
    components: tuple[tuple[int, ...], ...]

    def label(self) -> str:
        return self.representative.label()


def enumerate_invariants(n: int, k: int) -> list[CanonicalClass]:
    """All degree-k invariant classes of an n-subsystem state.

    Returns exactly one representative per simultaneous-conjugation orbit
    of n-tuples over S_k, sorted by the lexicographic tuple encoding (the
    representative is the orbit minimum).
    """
    if n < 1:
        raise ValueError(f"need at least one subsystem, got n={n}")
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError(f"degree k={k} outside supported range 1..{MAX_DEGREE}")
    sk = perms.all_perms(k)
    radix = len(sk)
    index = {p: i for i, p in enumerate(sk)}
    total = radix**n
    seen = bytearray(total)
    classes = []
    for code in range(total):
        if seen[code]:
            continue
        digits = []
        tmp = code
        for _ in range(n):
            tmp, r = divmod(tmp, radix)
            digits.append(r)
        sigmas = tuple(sk[i] for i in reversed(digits))
        orbit = set()
        for tau in sk:
            conj_code = 0
            for s in sigmas:
                conj_code = conj_code * radix + index[perms.conjugate(s, tau)]
            seen[conj_code] = 1
            orbit.add(conj_code)
        rep = PermTuple(k, sigmas)
        classes.append(
            CanonicalClass(
                representative=rep,
                orbit_size=len(orbit),
                components=connected_components(rep),
            )
        )
    return classes


def _density_tensor(rho, dims) -> Tensor:
    arr = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
    d = prod(dims)
    if arr.size != d * d:
        raise ShapeError(f"operator of size {arr.size} does not fit dims {dims}")
    return Tensor._wrap(arr.reshape(d, d))


def permutation_operator(t: PermTuple, dims: Sequence[int]) -> np.ndarray:
    """Matrix permuting, per subsystem, the k copies of that subsystem.

    Acts on the k-fold product space ordered copy-major; copy c of
    subsystem s is sent to copy sigma_s(c).
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if n != t.n:
        raise ShapeError(f"{n} dims for an {t.n}-subsystem tuple")
    k = t.k
    full_dims = dims * k
    dk = prod(dims) ** k
    inv = [perms.inverse(s) for s in t.sigmas]
    digits = np.array(np.unravel_index(np.arange(dk), full_dims))
    src = [inv[s][c] * n + s for c in range(k) for s in range(n)]
    rows = np.ravel_multi_index(tuple(digits[src]), full_dims)
    op = np.zeros((dk, dk), dtype=np.complex128)
    op[rows, np.arange(dk)] = 1.0
    return op


def evaluate(t: PermTuple, rho, dims: Sequence[int]) -> complex:
    """Invariant value by explicit construction.

    Materializes the k-fold tensor power of rho and the permutation matrix
    and takes the trace of their product.  Exponential in k; intended as
    the reference route backing :func:`evaluate_fast`.
    """
    dims = tuple(int(d) for d in dims)
    rho_t = _density_tensor(rho, dims)
    power = rho_t
    for _ in range(t.k - 1):
        power = tensor_product(power, rho_t)
    rows = list(range(0, 2 * t.k, 2))
    cols = list(range(1, 2 * t.k, 2))
    mat = group_legs(power, (rows, cols)).data
    op = permutation_operator(t, dims)
    return complex(np.einsum("ij,ji->", op, mat))


def evaluate_fast(t: PermTuple, rho, dims: Sequence[int]) -> complex:
    """Invariant value by direct contraction, one copy of rho at a time.

    Each copy is wired into the running network with its row leg for
    subsystem s sent to copy sigma_s(c); loops closed along the way.  Never
    materializes the k-fold tensor power.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if n != t.n:
        raise ShapeError(f"{n} dims for an {t.n}-subsystem tuple")
    rho_legs = Tensor._wrap(_density_tensor(rho, dims).data.reshape(dims + dims))
    running = Tensor._wrap(np.ones((), dtype=np.complex128))
    open_labels: list[tuple[int, int]] = []
    for c in range(t.k):
        copy_labels = [(t.sigmas[s][c], s) for s in range(n)]
        copy_labels += [(c, s) for s in range(n)]
        copy_pos = {lab: j for j, lab in enumerate(copy_labels)}
        pairs = [
            (i, copy_pos[lab])
            for i, lab in enumerate(open_labels)
            if lab in copy_pos
        ]
        running = contract(running, rho_legs, pairs)
        matched = {j for _, j in pairs}
        merged = [lab for lab in open_labels if lab not in copy_pos]
        merged += [lab for j, lab in enumerate(copy_labels) if j not in matched]
        positions: dict[tuple[int, int], list[int]] = {}
        for i, lab in enumerate(merged):
            positions.setdefault(lab, []).append(i)
        dup_pairs = [tuple(v) for v in positions.values() if len(v) == 2]
        if dup_pairs:
            running = self_trace(running, dup_pairs)
        open_labels = [lab for lab in merged if len(positions[lab]) == 1]
    return running.item()


def pure_jk(state: Tensor, bipartition, k: int) -> float:
    """Power sum of squared Schmidt coefficients across a bipartition.

    Equals the invariant labeled by a full cycle on one side and the
    identity on the other, evaluated on the pure state's density operator.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    form = schmidt(state, bipartition)
    return float(np.sum(form.sigma ** (2 * k)))


def max_unitary_deviation(
    value_fn: Callable[[Tensor], complex],
    rho,
    dims: Sequence[int],
    trials: int = 20,
    seed=0,
) -> float:
    """Max relative change of ``value_fn`` under random local unitaries."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    dims = tuple(int(d) for d in dims)
    rho_t = _density_tensor(rho, dims)
    base = complex(value_fn(rho_t))
    scale = max(abs(base), 1e-300)
    children = np.random.SeedSequence(seed).spawn(trials)
    worst = 0.0
    for child in children:
        us = random_local_unitary(dims, seed=child)
        rotated = apply_local_unitary(rho_t, dims, us)
        dev = abs(complex(value_fn(rotated)) - base) / scale
        worst = max(worst, dev)
    return worst


def verify_invariance(
    t: PermTuple, rho, dims: Sequence[int], trials: int = 20, seed=0
) -> float:
    """Empirical invariance check: max relative deviation over Haar trials."""
    return max_unitary_deviation(
        lambda r: evaluate_fast(t, r, dims), rho, dims, trials=trials, seed=seed
    )
