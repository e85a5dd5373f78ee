"""Command-line surface: factor, invariants, entropy.

Every command prints a human-readable report by default and a
machine-readable JSON document with --json.  Exit code 0 means all
requested computations succeeded and every verification passed its
threshold.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import decompose, entropy, invariants, states
from .states import StateFileError
from .tensor import ShapeError

VERIFY_THRESHOLD = 1e-8
ENTROPY_CROSSCHECK_THRESHOLD = 1e-9
PRECISION = 12  # significant digits in human-readable output


@dataclass
class CommandResult:
    command: str
    values: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    exit_code: int = 0
    lines: list = field(default_factory=list)

    def add(self, line: str):
        self.lines.append(line)

    def render(self, as_json: bool) -> str:
        if as_json:
            doc = {
                "command": self.command,
                "values": self.values,
                "diagnostics": self.diagnostics,
                "exit_code": self.exit_code,
            }
            return json.dumps(doc, indent=2, sort_keys=True)
        return "\n".join(self.lines)


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.{PRECISION}g}{x.imag:+.{PRECISION}g}j"
    return f"{float(x):.{PRECISION}g}"


def _jsonable(x):
    if isinstance(x, complex):
        return [float(x.real), float(x.imag)]
    return float(x)


def _load(path, kind=None) -> states.StateData:
    data = states.load_state(path)
    if kind is not None and data.kind != kind:
        raise StateFileError(f"{path}: expected a {kind} state, got {data.kind}")
    return data


def cmd_factor(args) -> CommandResult:
    res = CommandResult(command="factor")
    data = _load(args.state, kind="pure")
    chain = decompose.mps_factor(
        data.tensor, max_chi=args.truncate_chi, sigma_cutoff=args.truncate_tol
    )
    rebuilt = decompose.mps_reconstruct(chain)
    fid = decompose.fidelity(data.tensor, rebuilt)
    res.values["bond_dims"] = [int(c) for c in chain.bond_dims]
    res.values["bond_sigmas"] = [[float(s) for s in v] for v in chain.bond_sigmas]
    res.values["fidelity"] = fid
    for b, sig in enumerate(chain.bond_sigmas):
        res.add(
            f"bond {b}: chi={len(sig)} sigma=" + " ".join(_fmt(s) for s in sig)
        )
    res.add(f"fidelity: {_fmt(fid)}")
    if args.out:
        _write_chain(chain, args.out)
        res.add(f"chain written to {args.out}")
    return res


def _write_chain(chain, path):
    doc = {
        "kind": "mps",
        "phys_dims": [int(d) for d in chain.phys_dims],
        "bond_dims": [int(c) for c in chain.bond_dims],
        "sites": [
            [[list(map(float, (z.real, z.imag))) for z in row] for row in
             site.data.reshape(site.dims[0] * site.dims[1], site.dims[2])]
            for site in chain.sites
        ],
        "site_shapes": [list(site.dims) for site in chain.sites],
        "bond_sigmas": [[float(s) for s in v] for v in chain.bond_sigmas],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def _density_of(data: states.StateData):
    if data.kind == "pure":
        return states.density_from_pure(data.tensor)
    return data.tensor


def _classes_for(args, n):
    if args.label:
        out = []
        for text in args.label:
            t = invariants.parse_label(text)
            if t.n != n:
                raise ShapeError(
                    f"label {text!r} has {t.n} subsystems, state has {n}"
                )
            out.append(t)
        return out
    if args.k is None:
        raise ShapeError("need -k or --label")
    return [c.representative for c in invariants.enumerate_invariants(n, args.k)]


def cmd_invariants(args) -> CommandResult:
    res = CommandResult(command=f"invariants {args.action}")

    if args.action == "list":
        if args.n is None or args.k is None:
            raise ShapeError("list needs both -n and -k")
        classes = invariants.enumerate_invariants(args.n, args.k)
        res.values["count"] = len(classes)
        res.values["labels"] = [c.label() for c in classes]
        for c in classes:
            tags = []
            if len(c.components) > 1:
                tags.append(f"components={len(c.components)}")
            if invariants.is_real_guaranteed(c.representative):
                tags.append("real")
            tag = (" [" + ", ".join(tags) + "]") if tags else ""
            res.add(f"{c.label()}  orbit={c.orbit_size}{tag}")
        return res

    data = _load(args.state)
    if args.n is not None and args.n != len(data.dims):
        raise ShapeError(f"-n {args.n} but state has {len(data.dims)} subsystems")
    rho = _density_of(data)
    tuples = _classes_for(args, len(data.dims))

    if args.action == "eval":
        for t in tuples:
            val = invariants.evaluate_fast(t, rho, data.dims)
            res.values[t.label()] = _jsonable(val)
            res.add(f"{t.label()} = {_fmt(val)}")
        return res

    # verify
    worst = 0.0
    for t in tuples:
        dev = invariants.verify_invariance(
            t, rho, data.dims, trials=args.trials, seed=args.seed
        )
        worst = max(worst, dev)
        status = "ok" if dev <= VERIFY_THRESHOLD else "FAIL"
        res.values[t.label()] = dev
        res.add(f"{t.label()}  deviation={_fmt(dev)}  {status}")
    res.diagnostics["max_deviation"] = worst
    res.diagnostics["threshold"] = VERIFY_THRESHOLD
    if worst > VERIFY_THRESHOLD:
        res.exit_code = 1
    res.add(f"max deviation: {_fmt(worst)}")
    return res


def cmd_entropy(args) -> CommandResult:
    res = CommandResult(command="entropy")
    data = _load(args.state)
    keep = sorted({int(s) for s in args.keep.split(",") if s.strip() != ""})
    if not keep:
        raise ShapeError("--keep must name at least one subsystem")
    alphas = [float(a) for a in args.alpha.split(",")] if args.alpha else [2.0, 3.0]

    rho = _density_of(data)
    reduced = states.partial_trace(rho, data.dims, keep)
    spec = entropy.Spectrum.from_density(reduced)

    svn = entropy.von_neumann(spec)
    res.values["S_vn"] = svn
    res.add(f"S_vn = {_fmt(svn)}")

    worst = 0.0
    grouped, block_dims = states.bipartition_density(rho, data.dims, keep)
    can_crosscheck = len(keep) < len(data.dims)
    for alpha in alphas:
        s_alpha = entropy.renyi(spec, alpha)
        key = f"S_{alpha:g}"
        res.values[key] = s_alpha
        line = f"{key} = {_fmt(s_alpha)}"
        if alpha == int(alpha) and alpha >= 2 and can_crosscheck:
            k = int(alpha)
            cyc = tuple((list(range(1, k)) + [0]))
            t = invariants.PermTuple(
                k, (cyc, tuple(range(k)))
            )
            val = invariants.evaluate_fast(t, grouped, block_dims)
            s_inv = entropy.renyi_from_invariant(val.real, k)
            dev = abs(s_inv - s_alpha)
            worst = max(worst, dev)
            res.diagnostics[f"crosscheck_dev_{k}"] = dev
            line += f"  (invariant cross-check dev={_fmt(dev)})"
        res.add(line)
    if worst > ENTROPY_CROSSCHECK_THRESHOLD:
        res.exit_code = 1
    return res


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tninv",
        description="Tensor-network state factorization and local-unitary invariants",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    f = sub.add_parser("factor", help="factor a pure state into an MPS chain")
    f.add_argument("state", help="pure-state JSON file")
    trunc = f.add_mutually_exclusive_group()
    trunc.add_argument("--truncate-chi", type=int, default=None, metavar="N")
    trunc.add_argument("--truncate-tol", type=float, default=None, metavar="T")
    f.add_argument("--out", default=None, help="write the chain as JSON")
    f.add_argument("--json", action="store_true")

    i = sub.add_parser("invariants", help="enumerate, evaluate or verify invariants")
    i.add_argument("action", choices=["list", "eval", "verify"])
    i.add_argument("state", nargs="?", help="state JSON file (eval/verify)")
    i.add_argument("-n", type=int, default=None, help="subsystem count")
    i.add_argument("-k", type=int, default=None, help="invariant degree")
    i.add_argument(
        "--label", action="append", default=None,
        help='invariant label, e.g. "3; (123) | (12)" (repeatable)',
    )
    i.add_argument("--trials", type=int, default=20)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--json", action="store_true")

    e = sub.add_parser("entropy", help="entropies of a reduced state")
    e.add_argument("state", help="state JSON file")
    e.add_argument("--keep", required=True, help="comma-separated subsystems to keep")
    e.add_argument("--alpha", default="2,3", help="comma-separated Renyi orders")
    e.add_argument("--json", action="store_true")

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "factor":
            res = cmd_factor(args)
        elif args.cmd == "invariants":
            if args.action != "list" and not args.state:
                raise ShapeError(f"invariants {args.action} needs a state file")
            res = cmd_invariants(args)
        else:
            res = cmd_entropy(args)
    except (StateFileError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(res.render(args.json))
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
