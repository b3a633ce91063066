"""Command line front end.

    cforge run FILE [--prime P] [--seed N] [--json] [--timing]
    cforge fixtures list
    cforge fixtures show NAME

FILE may also be the name of a shipped fixture.  Exit codes: 0 when every
command succeeded, 1 when a command failed, 2 when a certified property was
violated, 3 when the problem file does not parse or validate.
"""
import argparse
import json
import os
import sys
import time
from importlib import resources

import yaml

from . import decomposition
from .classification import (check_F_shape, classify_method, factor_through, restriction_type, split_common,
                             type_agreement, verify_nonirreducible_witness)
from .complexes import chain_map_space, homotopy_category_hom, truncate_F
from .decomposition import decompose, indecomposable_iso
from .enlargements import (build_left_enlargement, candidate_Z0, classify_indecomposable,
                           d0_shape_check, diagonal_indecomposability, diagonalize,
                           diagonalize_all, summand_test)
from .errors import CforgeError, ConeDecomposed, InvalidInput, PropertyViolation
from .problem import _get, load_problem, morphism

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2, 3


# ================================================================ fixtures

def _fixture_dir():
    return resources.files("cforge") / "fixtures"


def fixture_names():
    return sorted(p.name[:-5] for p in _fixture_dir().iterdir() if p.name.endswith(".yaml"))


def fixture_path(name):
    path = _fixture_dir() / f"{name}.yaml"
    if not path.is_file():
        raise InvalidInput(f"unknown fixture {name!r}")
    return str(path)


# ================================================================ commands

def _labels(alg, obj):
    return [alg.labels[v] for v in obj]


def _arg(cmd, key):
    if key not in cmd:
        raise InvalidInput(f"missing argument {key!r}")
    return cmd[key]


class Runner:
    def __init__(self, prob):
        self.prob = prob
        self.alg = prob.alg

    def complex(self, cmd, key="complex"):
        return _get(self.prob.complexes, _arg(cmd, key), "complex")

    def map(self, cmd, key="map"):
        return _get(self.prob.maps, _arg(cmd, key), "map")

    def diagonal(self, cmd, key="diagonal"):
        return _get(self.prob.diagonals, _arg(cmd, key), "diagonal")

    def store(self, cmd, C):
        if "as" in cmd:
            self.prob.complexes[str(cmd["as"])] = C

    # ------------------------------------------------------------ ops
    def op_validate(self, cmd):
        return {"algebra": self.alg.describe(),
                "complexes": {k: [C.lo, C.hi] for k, C in sorted(self.prob.complexes.items())},
                "maps": sorted(self.prob.maps), "diagonals": sorted(self.prob.diagonals)}

    def op_hom(self, cmd):
        X, Y = self.complex(cmd, "from"), self.complex(cmd, "to")
        S = chain_map_space(X, Y)
        out = {"dim": S.dim}
        if cmd.get("basis"):
            out["basis"] = [m.to_dict() for m in S.maps()]
        return out

    def op_homotopy_hom(self, cmd):
        X, Y = self.complex(cmd, "from"), self.complex(cmd, "to")
        H = homotopy_category_hom(X, Y)
        return {"dim": H.dim, "chain_maps": H.chain.dim,
                "null_homotopic": int(H.null_rows.shape[0]),
                "representatives": [m.to_dict() for m in H.reps]}

    def op_decompose(self, cmd):
        X = self.complex(cmd)
        dec = decompose(X)
        out = {"complex": str(cmd["complex"]), "parts": [P.to_dict() for P in dec.parts],
               "multiplicities": [len(g) for g in dec.multiplicities()],
               "groups": dec.multiplicities(),
               "certificates": [c.to_dict() for c in dec.certificates],
               "verified": dec.verify()}
        if not out["verified"]:
            raise PropertyViolation("decomposition maps do not compose to identities")
        if cmd.get("expect_indecomposable") and len(dec.parts) != 1:
            raise PropertyViolation(f"expected an indecomposable complex, found {len(dec.parts)} parts")
        return out

    def op_diagonalize(self, cmd):
        Z = self.complex(cmd)
        if "summand" in cmd:
            X = self.complex(cmd, "summand")
            F = truncate_F(Z).restrict(1, Z.hi)
            dec = decompose(F)
            Xr = X.restrict(1, Z.hi)
            h = None
            for P, s in zip(dec.parts, dec.injections):
                phi = indecomposable_iso(Xr, P)
                if phi is not None:
                    h = s @ phi
                    break
            if h is None:
                raise InvalidInput("summand is not a direct summand of F(Z)")
            res = diagonalize(Z, Xr, h)
            D, C, steps = res.diagonal, res.complex, 1
        else:
            res = diagonalize_all(Z)
            D, C, steps = res.diagonal, res.complex, res.steps
        if not res.iso.is_chain_map() or not res.iso.is_invertible():
            raise PropertyViolation("diagonalizing map is not an isomorphism")
        self.store(cmd, C)
        return {"diagonal": D.to_dict(), "complex": C.to_dict(), "steps": steps,
                "iso": res.iso.to_dict()}

    def op_enlarge(self, cmd):
        X, Y = self.complex(cmd, "X"), self.complex(cmd, "Y")
        n = max(X.hi, Y.hi, 1)
        z0 = self.alg.obj(*_arg(cmd, "z0"))
        dX0 = morphism(self.alg, z0, X.restrict(1, n).obj(1), _arg(cmd, "dX0"))
        dY0 = morphism(self.alg, z0, Y.restrict(1, n).obj(1), _arg(cmd, "dY0"))
        res = build_left_enlargement(X, Y, z0, dX0, dY0)
        self.store(cmd, res.complex)
        return {"complex": res.complex.to_dict(), "certificate": res.certificate.to_dict()}

    def op_summand_test(self, cmd):
        D = self.diagonal(cmd)
        g = summand_test(D, int(cmd.get("index", 0)))
        return {"summand": g is not None, "witness": None if g is None else g.to_dict()}

    def op_indec_diagonal(self, cmd):
        v = diagonal_indecomposability(self.diagonal(cmd))
        out = {"indecomposable": not v.decomposable, "witness_blocks": sorted(v.witnesses),
               "decompose_parts": v.decompose_parts, "agrees": v.agrees}
        if not v.agrees:
            raise PropertyViolation("summand tests disagree with decompose")
        return out

    def op_candidate_z0(self, cmd):
        c = candidate_Z0(self.complex(cmd))
        return {"z0": _labels(self.alg, c.obj), "socle": c.multiplicities,
                "kernel_zero": c.kernel_zero}

    def op_d0_shape(self, cmd):
        r = d0_shape_check(self.diagonal(cmd))
        return {"status": r.status, "pattern": r.pattern, "shape": r.shape,
                "hom_dims": {str(k): v for k, v in r.extension_hom_dims.items()},
                "obstructions": r.obstructions}

    def op_classify_indec(self, cmd):
        c = classify_indecomposable(self.complex(cmd))
        out = {"kind": c.kind, "k": c.k}
        if c.base is not None:
            out["base"] = c.base.to_dict()
        if c.bases is not None:
            out["summands"] = [b.to_dict() for b in c.bases]
            out["multiplicities"] = c.multiplicities
        return out

    def op_split_common(self, cmd):
        s = split_common(self.map(cmd))
        if not s.reassembles():
            raise PropertyViolation("split does not reassemble the map")
        return {"degrees": s.to_dict(), "reassembles": True,
                "residual_radical": s.residual_is_radical()}

    def op_classify_map(self, cmd):
        return classify_method(self.map(cmd), certify=cmd.get("certify", True)).to_dict()

    def op_check_f_shape(self, cmd):
        X = self.complex(cmd, "X") if "X" in cmd else None
        return check_F_shape(self.map(cmd), X).to_dict()

    def op_refute_irreducible(self, cmd):
        f = self.map(cmd)
        if "through" not in cmd:
            return verify_nonirreducible_witness(f, self.map(cmd, "h1"), self.map(cmd, "h2")).to_dict()
        found = factor_through(f, self.complex(cmd, "through"), seed=decomposition.SEED)
        if found is None:
            return {"verdict": "no factorization found", "through": str(cmd["through"])}
        h1, h2, v = found
        return dict(v.to_dict(), through=str(cmd["through"]), h1=h1.to_dict(), h2=h2.to_dict())

    def op_restrict(self, cmd):
        f = self.map(cmd)
        lo, hi = (int(x) for x in _arg(cmd, "interval"))
        out = restriction_type(f, lo, hi).to_dict()
        if lo == 1 and hi == f.hi and f.lo == 0:
            out["F_shape"] = check_F_shape(f, None).to_dict()
        return out

    def op_type_agreement(self, cmd):
        t = type_agreement(self.map(cmd), self.map(cmd, "other"), certify=cmd.get("certify", True))
        if not t.agree:
            raise PropertyViolation(f"types differ: {t.first.kind} vs {t.second.kind}")
        return t.to_dict()

    def run(self, cmd):
        fn = getattr(self, "op_" + cmd["op"].replace("-", "_"))
        return fn(cmd)


def run_problem(prob, timing=None):
    """Execute the commands; returns the report dict and the exit code."""
    runner = Runner(prob)
    entries, code = [], EXIT_OK
    for k, cmd in enumerate(prob.commands):
        t0 = time.perf_counter()
        entry = {"index": k, "op": cmd["op"]}
        try:
            entry["result"] = runner.run(cmd)
            entry["status"] = "ok"
        except PropertyViolation as e:
            entry["status"] = "violation"
            entry["error"] = str(e)
            if isinstance(e, ConeDecomposed) and e.decomposition is not None:
                entry["result"] = {"parts": [P.to_dict() for P in e.decomposition.parts]}
            code = EXIT_VIOLATION
        except CforgeError as e:
            entry["status"] = "error"
            entry["error"] = f"{type(e).__name__}: {e}"
            if code == EXIT_OK:
                code = EXIT_ERROR
        if timing is not None:
            timing.append((k, cmd["op"], time.perf_counter() - t0))
        entries.append(entry)
    report = {"source": os.path.basename(prob.source), "prime": prob.alg.p,
              "commands": entries, "ok": code == EXIT_OK}
    return report, code


def _text(report):
    lines = [f"source: {report['source']}", f"prime: {report['prime']}"]
    for e in report["commands"]:
        lines.append(f"[{e['index']}] {e['op']}: {e['status']}")
        if "error" in e:
            lines.append(f"    {e['error']}")
        if "result" in e:
            body = yaml.safe_dump(e["result"], sort_keys=True, default_flow_style=None, width=100)
            lines += ["    " + ln for ln in body.rstrip().splitlines()]
    lines.append("ok" if report["ok"] else "FAILED")
    return "\n".join(lines) + "\n"


# ==================================================================== main

def build_parser():
    ap = argparse.ArgumentParser(prog="cforge", description="Complexes of projectives over bound quiver algebras.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a problem file")
    r.add_argument("file", help="problem file or fixture name")
    r.add_argument("--prime", type=int, default=None, help="override the prime of the base field")
    r.add_argument("--seed", type=int, default=None, help="seed of the randomized idempotent search")
    r.add_argument("--json", action="store_true", help="structured output only")
    r.add_argument("--timing", action="store_true", help="print timings on stderr")
    fx = sub.add_parser("fixtures", help="shipped fixtures")
    fsub = fx.add_subparsers(dest="fcmd", required=True)
    fsub.add_parser("list")
    sh = fsub.add_parser("show")
    sh.add_argument("name")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.cmd == "fixtures":
        try:
            if args.fcmd == "list":
                for name in fixture_names():
                    print(name)
            else:
                with open(fixture_path(args.name), encoding="utf-8") as fh:
                    sys.stdout.write(fh.read())
        except CforgeError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT
        return EXIT_OK
    saved = decomposition.SEED
    if args.seed is not None:
        decomposition.SEED = int(args.seed)
    try:
        return _run(args)
    finally:
        decomposition.SEED = saved


def _run(args):
    try:
        path = args.file
        if not os.path.exists(path) and path in fixture_names():
            path = fixture_path(path)
        prob = load_problem(path, prime=args.prime)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CforgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    timing = [] if args.timing else None
    report, code = run_problem(prob, timing)
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(_text(report))
    for e in report["commands"]:
        if e["status"] != "ok":
            print(f"command {e['index']} ({e['op']}): {e['status']}: {e.get('error', '')}", file=sys.stderr)
    if timing:
        for k, op, dt in timing:
            print(f"timing [{k}] {op}: {dt:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
