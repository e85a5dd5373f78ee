"""State and operator persistence, random generation, and partial traces.

States are stored as UTF-8 JSON with fields ``kind`` (``pure`` or
``density``), ``dims`` (subsystem dimensions) and ``data`` (components as
``[real, imag]`` pairs; a flat list for pure states, a list of rows for
density operators).  Doubles survive the round trip bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .tensor import Tensor, ShapeError

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9


class StateFileError(ValueError):
    """Raised when a state file cannot be parsed or fails validation."""


@dataclass
class StateData:
    """A state or operator plus the metadata needed to interpret it.

    kind: ``pure`` (tensor has one leg per subsystem) or ``density``
    (tensor is the square matrix over the product space).
    """

    kind: str
    dims: tuple[int, ...]
    tensor: Tensor

    @classmethod
    def pure(cls, tensor: Tensor, dims=None) -> "StateData":
        dims = tuple(dims) if dims is not None else tensor.dims
        if prod(dims) != prod(tensor.dims):
            raise ShapeError(f"dims {dims} do not match tensor {tensor.dims}")
        return cls("pure", dims, Tensor._wrap(tensor.data.reshape(dims)))

    @classmethod
    def density(cls, tensor: Tensor, dims: Sequence[int]) -> "StateData":
        dims = tuple(dims)
        d = prod(dims)
        if prod(tensor.dims) != d * d:
            raise ShapeError(f"dims {dims} do not match operator {tensor.dims}")
        return cls("density", dims, Tensor._wrap(tensor.data.reshape(d, d)))


def _encode_complex(arr: np.ndarray):
    return [[float(z.real), float(z.imag)] for z in arr]


def save_state(state: StateData, path) -> None:
    """Write a StateData to ``path`` as JSON."""
    flat = state.tensor.data.reshape(-1)
    if state.kind == "pure":
        data = _encode_complex(flat)
    elif state.kind == "density":
        d = prod(state.dims)
        mat = state.tensor.data.reshape(d, d)
        data = [_encode_complex(row) for row in mat]
    else:
        raise StateFileError(f"unknown kind {state.kind!r}")
    doc = {"kind": state.kind, "dims": list(state.dims), "data": data}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _decode_pairs(entries, what):
    out = np.empty(len(entries), dtype=np.complex128)
    for i, entry in enumerate(entries):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise StateFileError(f"{what}[{i}] is not a [real, imag] pair")
        out[i] = complex(float(entry[0]), float(entry[1]))
    return out


def load_state(path, validate: bool = True) -> StateData:
    """Read a StateData from ``path``.

    Density operators are checked for hermiticity and unit trace unless
    ``validate`` is false.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"cannot read state file {path}: {exc}") from exc

    for field in ("kind", "dims", "data"):
        if field not in doc:
            raise StateFileError(f"missing field {field!r} in {path}")
    kind = doc["kind"]
    if kind not in ("pure", "density"):
        raise StateFileError(f"unknown kind {kind!r}")
    try:
        dims = tuple(int(d) for d in doc["dims"])
    except (TypeError, ValueError):
        raise StateFileError(f"bad dims {doc['dims']!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise StateFileError(f"dims must be positive integers, got {dims}")
    d = prod(dims)

    if kind == "pure":
        if len(doc["data"]) != d:
            raise StateFileError(
                f"dims {dims} imply {d} components, file has {len(doc['data'])}"
            )
        vec = _decode_pairs(doc["data"], "data")
        return StateData(kind, dims, Tensor._wrap(vec.reshape(dims)))

    rows = doc["data"]
    if len(rows) != d or any(len(r) != d for r in rows):
        raise StateFileError(f"density data is not a {d} x {d} matrix")
    mat = np.vstack([_decode_pairs(r, "data") for r in rows])
    if validate:
        herm = float(np.max(np.abs(mat - mat.conj().T)))
        if herm > HERMITICITY_TOL:
            raise StateFileError(
                f"density operator fails hermiticity by {herm:.3e}"
            )
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateFileError(f"density operator has trace {tr:.12g}, not 1")
    return StateData(kind, dims, Tensor._wrap(mat))


def crandn(shape, rng) -> np.ndarray:
    """Standard complex Gaussian samples (variance 1 per component)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_pure_state(dims: Sequence[int], seed=None) -> Tensor:
    """Normalized state with i.i.d. complex Gaussian components (Haar)."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ShapeError("dims must be nonempty")
    rng = np.random.default_rng(seed)
    vec = crandn(prod(dims), rng)
    vec /= np.linalg.norm(vec)
    return Tensor._wrap(vec.reshape(dims))


def random_local_unitary(dims: Sequence[int], seed=None) -> list[np.ndarray]:
    """One Haar-distributed unitary per subsystem, plus a shared U(1) phase.

    Each factor comes from the QR decomposition of a complex Gaussian
    matrix with the R diagonal phase fixed; the global phase is folded into
    the first factor.
    """
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ShapeError("dims must be nonempty")
    rng = np.random.default_rng(seed)
    out = []
    for d in dims:
        z = crandn((d, d), rng)
        q, r = np.linalg.qr(z)
        diag = np.diagonal(r)
        q = q * (diag / np.abs(diag))
        out.append(q)
    phase = np.exp(2j * np.pi * rng.uniform())
    out[0] = out[0] * phase
    return out


def density_from_pure(state: Tensor) -> Tensor:
    """Outer product |psi><psi| as a square matrix over the full space."""
    vec = state.data.reshape(-1)
    return Tensor._wrap(np.outer(vec, vec.conj()))


def _as_matrix(rho, dims) -> np.ndarray:
    arr = rho.data if isinstance(rho, Tensor) else np.asarray(rho, dtype=complex)
    d = prod(dims)
    if arr.size != d * d:
        raise ShapeError(f"operator of size {arr.size} does not fit dims {dims}")
    return arr.reshape(d, d)


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> Tensor:
    """Trace out every subsystem not in ``keep``.

    ``keep`` is a nonempty set of subsystem positions; the reduced operator
    orders them ascending.  Returns the square matrix over the kept space.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ShapeError("keep must be nonempty")
    if any(i < 0 or i >= n for i in keep):
        raise ShapeError(f"keep {keep} out of range for {n} subsystems")
    arr = _as_matrix(rho, dims).reshape(dims + dims)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(arr, row + col, out)
    dk = prod(dims[i] for i in keep)
    return Tensor._wrap(reduced.reshape(dk, dk))


def bipartition_density(rho, dims: Sequence[int], keep: Sequence[int]):
    """Regroup a density operator into (kept block, complement block).

    Returns the same operator as a two-subsystem density matrix plus its
    block dimensions ``(d_keep, d_rest)``.  Used to evaluate bipartite
    invariant labels against a chosen cut of a many-body state.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if not keep or any(i < 0 or i >= n for i in keep):
        raise ShapeError(f"bad keep set {keep} for {n} subsystems")
    rest = [i for i in range(n) if i not in keep]
    order = keep + rest
    arr = _as_matrix(rho, dims).reshape(dims + dims)
    perm = order + [n + i for i in order]
    arr = np.transpose(arr, perm)
    d = prod(dims)
    dk = prod(dims[i] for i in keep)
    return Tensor._wrap(arr.reshape(d, d)), (dk, d // dk)


def apply_local_unitary(rho, dims: Sequence[int], unitaries) -> Tensor:
    """Conjugate a density operator by a tensor product of local unitaries."""
    dims = tuple(int(d) for d in dims)
    if len(unitaries) != len(dims):
        raise ShapeError(f"{len(unitaries)} unitaries for {len(dims)} subsystems")
    full = unitaries[0]
    for u in unitaries[1:]:
        full = np.kron(full, u)
    mat = _as_matrix(rho, dims)
    return Tensor._wrap(full @ mat @ full.conj().T)
