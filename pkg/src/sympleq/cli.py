"""Command-line front end: sympleq build|transform|invert|to-real|sweep|verify."""
import argparse
import json
import sys

import numpy as np

from . import jsonio
from .core import TAU_STRUCT, TAU_SYMP
from .engine import forward_transform, generator, inverse_hamiltonian, psi_series_oracle
from .errors import BranchCut, SchemaError, SympleqError
from .fock import FockRep, default_truncation, heisenberg_check
from .fundamental import CascadeSpec, compose, hamiltonian_of
from .phase_space import to_complex, to_real
from .sweep import SweepConfig, run_sweep


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise SchemaError(f"cannot parse {text!r} as a complex number")


def cmd_build(args):
    doc = jsonio.load_json(args.file)
    if not isinstance(doc, dict):
        raise SchemaError("params file must hold a JSON object")
    if "cascade" in doc:
        steps = doc["cascade"]
        if not isinstance(steps, list) or not steps:
            raise SchemaError("cascade: expected a non-empty list", field="cascade")
        spec = CascadeSpec(tuple(jsonio.decode_fu(s, f"cascade[{i}]") for i, s in enumerate(steps)))
        pair = compose(spec)
        ham = inverse_hamiltonian(pair)
        meta = {"source": "cascade", "steps": len(spec.steps)}
    else:
        ham = hamiltonian_of(jsonio.decode_fu(doc))
        meta = {"source": next(iter(doc))}
    _emit(jsonio.dumps(jsonio.encode_hamiltonian(ham, meta)), args.out)
    return 0


def cmd_transform(args):
    ham = jsonio.decode_hamiltonian(jsonio.load_json(args.file))
    pair, psi = forward_transform(ham)
    if args.series:
        series = psi_series_oracle(ham)
        pair = type(pair)(pair.E, pair.F, series.shift(ham.h))
        psi = series
    meta = {"path": psi.path, "symplectic_residual": pair.symplectic_residual()}
    _emit(jsonio.dumps(jsonio.encode_pair(pair, psi, meta)), args.out)
    return 0


def cmd_invert(args):
    pair = jsonio.decode_pair(jsonio.load_json(args.file), validate=True)
    ham = inverse_hamiltonian(pair)
    back, psi = forward_transform(ham)
    meta = {"branch": "principal", "path": psi.path,
            "roundtrip_residual": float(np.max(np.abs(back.S - pair.S)))}
    _emit(jsonio.dumps(jsonio.encode_hamiltonian(ham, meta)), args.out)
    return 0


def cmd_to_real(args):
    pair = jsonio.decode_pair(jsonio.load_json(args.file), validate=True)
    rp = to_real(pair)
    _emit(jsonio.dumps(jsonio.encode_real(rp, {"symplectic_residual": rp.symplectic_residual()})),
          args.out)
    return 0


def cmd_sweep(args):
    doc = jsonio.load_json(args.file)
    if not isinstance(doc, dict) or "study" not in doc:
        raise SchemaError("sweep spec needs a 'study' field", field="study")
    grid = doc.get("grid", {}) or {}
    if not isinstance(grid, dict):
        raise SchemaError("grid: expected an object", field="grid")
    h = jsonio.dec_complex(doc.get("h", 1.0), "h")
    if "alpha" in doc:
        h = 1j * jsonio.dec_complex(doc["alpha"], "alpha")
    if args.h is not None:
        h = _parse_complex(args.h)
    if args.alpha is not None:
        h = 1j * _parse_complex(args.alpha)
    try:
        cfg = SweepConfig(
            study=doc["study"], r=float(doc.get("r", 1.0)), theta=float(doc.get("theta", 0.0)),
            phi=float(doc.get("phi", 0.0)), h=h, start=grid.get("start"), stop=grid.get("stop"),
            num=grid.get("num"), endpoint=grid.get("endpoint"),
            workers=args.workers or int(doc.get("workers", 1)))
    except (TypeError, ValueError) as e:
        raise SchemaError(f"sweep spec: {e}")
    _emit(run_sweep(cfg).to_csv(), args.out)
    return 0


def _check(name, residual, tol, detail=None):
    out = {"name": name, "passed": bool(residual <= tol), "residual": float(residual), "tol": tol}
    if detail:
        out["detail"] = detail
    return out


def _skip(name, why):
    return {"name": name, "passed": None, "detail": why}


def _ham_checks(ham, tol, fock, pair_ref=None):
    checks = []
    pair, psi = forward_transform(ham)
    checks.append(_check("symplectic", pair.symplectic_residual(), tol or TAU_SYMP))
    checks.append(_check("determinant", abs(abs(np.linalg.det(pair.S)) - 1), tol or 1e-9))
    series = psi_series_oracle(ham)
    checks.append(_check("psi-series", float(np.max(np.abs(psi.Psi - series.Psi))), tol or 1e-9,
                         f"engine path {psi.path}"))
    spec = np.linalg.eigvals(generator(ham))
    if pair_ref is not None:
        res = max(float(np.max(np.abs(pair.S - pair_ref.S))), float(np.max(np.abs(pair.s - pair_ref.s))))
        checks.append(_check("round-trip", res, tol or 1e-8, "invert then transform"))
    elif np.all(np.abs(spec.imag) < np.pi - 1e-9):
        back = inverse_hamiltonian(pair)
        res = max(float(np.max(np.abs(back.H - ham.H))), float(np.max(np.abs(back.h - ham.h))))
        checks.append(_check("round-trip", res, tol or 1e-8, "transform then invert"))
    else:
        checks.append(_skip("round-trip", "spectrum outside the principal branch"))
    if fock:
        if ham.n > 2:
            checks.append(_skip("fock", "Fock check limited to n <= 2"))
        else:
            rep = FockRep(ham.n, default_truncation(ham.n))
            try:
                rpt = heisenberg_check(ham, pair, rep, tol=tol or 1e-6)
                checks.append(_check("fock", rpt.residual, rpt.tol, f"d={rpt.d}, d_safe={rpt.d_safe}"))
            except SympleqError as e:
                checks.append({"name": "fock", "passed": False, "detail": str(e), **e.to_dict()})
    return checks


def _pair_structure(doc):
    if "S" not in doc:
        return _check("structure", 0.0, TAU_STRUCT, "conjugate blocks implied by E, F")
    S = jsonio.dec_matrix(doc["S"], "S")
    n = S.shape[0] // 2
    res = max(float(np.max(np.abs(S[n:, n:] - S[:n, :n].conj()))),
              float(np.max(np.abs(S[n:, :n] - S[:n, n:].conj()))))
    return _check("structure", res, TAU_STRUCT * max(1.0, float(np.max(np.abs(S)))))


def cmd_verify(args):
    doc = jsonio.load_json(args.file)
    kind = jsonio.kind_of(doc)
    tol = args.tol
    checks = []
    if kind == "hamiltonian":
        ham = jsonio.decode_hamiltonian(doc)
        H = ham.H
        checks.append(_check("structure", float(np.max(np.abs(H - H.conj().T))),
                             TAU_STRUCT * max(1.0, float(np.max(np.abs(H))))))
        checks += _ham_checks(ham, tol, args.fock)
    elif kind == "symplectic":
        checks.append(_pair_structure(doc))
        if not checks[-1]["passed"]:
            return _verdict(kind, checks, args.out)
        pair = jsonio.decode_pair(doc, validate=False)
        checks.append(_check("symplectic", pair.symplectic_residual(), tol or TAU_SYMP))
        checks.append(_check("determinant", abs(abs(np.linalg.det(pair.S)) - 1), tol or 1e-9))
        if checks[-2]["passed"]:
            try:
                ham = inverse_hamiltonian(pair)
            except BranchCut as e:
                checks.append(_skip("inverse", str(e)))
            else:
                checks += [c for c in _ham_checks(ham, tol, args.fock, pair_ref=pair)
                           if c["name"] not in ("symplectic", "determinant")]
    elif kind == "real-symplectic":
        rp = jsonio.decode_real(doc, validate=False)
        checks.append(_check("symplectic", rp.symplectic_residual(), tol or TAU_SYMP))
        if checks[-1]["passed"]:
            back = to_real(to_complex(rp, validate=False))
            res = max(float(np.max(np.abs(back.S0 - rp.S0))), float(np.max(np.abs(back.s0 - rp.s0))))
            checks.append(_check("complex-round-trip", res, tol or 1e-12))
    else:
        raise SchemaError(f"unknown kind {kind!r}", field="kind")
    return _verdict(kind, checks, args.out)


def _verdict(kind, checks, out):
    ok = all(c["passed"] is not False for c in checks)
    _emit(jsonio.dumps({"kind": kind, "passed": ok, "checks": checks}), out)
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="sympleq", description="Gaussian unitary representations")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file")
        sp.add_argument("--out", help="write to this path instead of stdout")
        sp.set_defaults(fn=fn)
        return sp

    add("build", cmd_build, "Hamiltonian pair of a fundamental unitary or cascade")
    t = add("transform", cmd_transform, "(H, h) -> (S, s)")
    t.add_argument("--series", action="store_true", help="compute Psi by direct series summation")
    add("invert", cmd_invert, "(S, s) -> (H, h) on the principal branch")
    add("to-real", cmd_to_real, "complex pair -> real quadrature pair")
    s = add("sweep", cmd_sweep, "parameter sweep to CSV")
    s.add_argument("--h", help="linear Hamiltonian term (complex), overrides the spec")
    s.add_argument("--alpha", help="displacement alpha = -i h, overrides the spec")
    s.add_argument("--workers", type=int, default=0)
    v = add("verify", cmd_verify, "check invariants of a representation file")
    v.add_argument("--tol", type=float, help="tolerance for every numerical check")
    v.add_argument("--fock", action="store_true", help="add the truncated Fock-space check (n <= 2)")
    v.add_argument("--series", action="store_true",
                   help="accepted for symmetry with transform; the series check always runs")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except SympleqError as e:
        sys.stderr.write(json.dumps(e.to_dict()) + "\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
