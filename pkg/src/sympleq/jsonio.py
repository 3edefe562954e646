"""JSON encoding of representations: complex numbers as {"re": x, "im": y}, matrices row-major."""
import json

import numpy as np

from .core import (
    Displacement,
    HamiltonianRep,
    RealSymplecticPair,
    Rotation,
    Squeeze,
    SymplecticPair,
    split_blocks,
)
from .errors import SchemaError


def enc_complex(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def enc_array(a):
    a = np.asarray(a)
    if np.iscomplexobj(a):
        if a.ndim == 1:
            return [enc_complex(x) for x in a]
        return [[enc_complex(x) for x in row] for row in a]
    return a.astype(float).tolist()


def dec_complex(x, where):
    if isinstance(x, bool):
        raise SchemaError(f"{where}: expected a number, got a boolean", field=where)
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, dict) and set(x) <= {"re", "im"} and x:
        try:
            return complex(float(x.get("re", 0.0)), float(x.get("im", 0.0)))
        except (TypeError, ValueError):
            pass
    raise SchemaError(f"{where}: expected a number or {{\"re\", \"im\"}} object, got {x!r}", field=where)


def dec_matrix(x, where, square=True):
    if isinstance(x, (int, float, dict)):
        x = [[x]]
    if not isinstance(x, list) or not x or not all(isinstance(row, list) for row in x):
        raise SchemaError(f"{where}: expected a non-empty list of rows", field=where)
    width = len(x[0])
    for i, row in enumerate(x):
        if len(row) != width:
            raise SchemaError(f"{where}: row {i} has length {len(row)}, expected {width}", field=where)
    if square and width != len(x):
        raise SchemaError(f"{where}: matrix is {len(x)}x{width}, expected square", field=where)
    return np.array([[dec_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)]
                     for i, row in enumerate(x)])


def dec_vector(x, where):
    if isinstance(x, (int, float, dict)):
        x = [x]
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected a list", field=where)
    return np.array([dec_complex(v, f"{where}[{i}]") for i, v in enumerate(x)], dtype=complex)


def dec_real(x, where):
    z = dec_complex(x, where)
    if z.imag:
        raise SchemaError(f"{where}: expected a real number", field=where)
    return z.real


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}",
                          line=e.lineno)
    except OSError as e:
        raise SchemaError(f"{path}: {e.strerror}")


def _require(doc, key, where="document"):
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}", field=key)
    return doc[key]


def encode_hamiltonian(ham, meta=None):
    out = {"kind": "hamiltonian", "n": ham.n, "A": enc_array(ham.A), "B": enc_array(ham.B),
           "h": enc_array(ham.h)}
    if meta:
        out["meta"] = meta
    return out


def encode_pair(pair, psi=None, meta=None):
    out = {"kind": "symplectic", "n": pair.n, "E": enc_array(pair.E), "F": enc_array(pair.F),
           "s": enc_array(pair.s)}
    if psi is not None:
        out["psi"] = {"P": enc_array(psi.P), "Q": enc_array(psi.Q)}
    if meta:
        out["meta"] = meta
    return out


def encode_real(rp, meta=None):
    out = {"kind": "real-symplectic", "n": rp.n, "ordering": "q1..qn,p1..pn",
           "S0": rp.S0.tolist(), "s0": rp.s0.tolist()}
    if meta:
        out["meta"] = meta
    return out


def _wrap(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except (TypeError, ValueError) as e:
        raise SchemaError(str(e))


def decode_hamiltonian(doc):
    if "H" in doc:
        H = dec_matrix(doc["H"], "H")
        if H.shape[0] % 2:
            raise SchemaError("H: dimension must be even", field="H")
        h = dec_vector(doc["h"], "h") if "h" in doc else None
        if h is not None and h.shape == (H.shape[0],):
            return _wrap(split_blocks, H, h, kind="hamiltonian")
        ham = _wrap(split_blocks, H, None, kind="hamiltonian")
        return _wrap(ham.with_h, h) if h is not None else ham
    if "A" not in doc and "B" not in doc:
        raise SchemaError("hamiltonian: need 'A' and/or 'B' (or a full 'H')", field="A")
    A = dec_matrix(doc["A"], "A") if "A" in doc else None
    B = dec_matrix(doc["B"], "B") if "B" in doc else None
    n = (A if A is not None else B).shape[0]
    A = np.zeros((n, n), complex) if A is None else A
    B = np.zeros((n, n), complex) if B is None else B
    h = dec_vector(doc["h"], "h") if "h" in doc else None
    return _wrap(HamiltonianRep, A, B, h)


def decode_pair(doc, validate=False):
    if "S" in doc:
        S = dec_matrix(doc["S"], "S")
        if S.shape[0] % 2:
            raise SchemaError("S: dimension must be even", field="S")
        s = dec_vector(doc["s"], "s") if "s" in doc else None
        if s is not None and s.shape == (S.shape[0],):
            return _wrap(split_blocks, S, s, kind="symplectic", validate=validate)
        pair = _wrap(split_blocks, S, None, kind="symplectic", validate=validate)
        return _wrap(SymplecticPair, pair.E, pair.F, s, validate=validate)
    E = dec_matrix(_require(doc, "E", "symplectic"), "E")
    F = dec_matrix(doc["F"], "F") if "F" in doc else np.zeros_like(E)
    s = dec_vector(doc["s"], "s") if "s" in doc else None
    return _wrap(SymplecticPair, E, F, s, validate=validate)


def decode_real(doc, validate=True):
    S0 = dec_matrix(_require(doc, "S0", "real-symplectic"), "S0")
    if np.any(S0.imag):
        raise SchemaError("S0 must be real", field="S0")
    s0 = dec_vector(doc["s0"], "s0").real if "s0" in doc else None
    return _wrap(RealSymplecticPair, S0.real, s0, validate=validate)


def decode_fu(doc, where="params"):
    """One fundamental-unitary record: {"rotation": {...}} etc."""
    if not isinstance(doc, dict) or len(doc) != 1:
        raise SchemaError(f"{where}: expected exactly one of rotation/squeeze/displacement",
                          field=where)
    (kind, body), = doc.items()
    if not isinstance(body, dict):
        raise SchemaError(f"{where}.{kind}: expected an object", field=kind)
    if kind == "displacement":
        if "alpha" in body:
            return _wrap(Displacement, dec_vector(body["alpha"], f"{kind}.alpha"))
        return _wrap(Displacement, -1j * dec_vector(_require(body, "h", kind), f"{kind}.h"))
    if kind == "rotation":
        return _wrap(Rotation, dec_matrix(_require(body, "phi", kind), f"{kind}.phi"))
    if kind == "squeeze":
        if "z" in body:
            return _wrap(Squeeze, dec_matrix(body["z"], f"{kind}.z"))
        r = dec_real(_require(body, "r", kind), f"{kind}.r")
        theta = dec_real(body.get("theta", 0.0), f"{kind}.theta")
        return Squeeze.polar(r, theta)
    raise SchemaError(f"{where}: unknown unitary {kind!r}", field=kind)


def kind_of(doc):
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    if "kind" in doc:
        return doc["kind"]
    if "S0" in doc:
        return "real-symplectic"
    if "E" in doc or "S" in doc:
        return "symplectic"
    if "A" in doc or "B" in doc or "H" in doc:
        return "hamiltonian"
    raise SchemaError("cannot tell the representation kind; add a 'kind' field", field="kind")


def dumps(doc):
    return json.dumps(doc, indent=2)
