"""JSON formats for operators and channels.

Complex entries are ``[re, im]`` pairs written with 17 significant digits,
which round-trips IEEE doubles exactly::

    {"dims": [dA, dB], "entries": [[[re, im], ...], ...]}
    {"dimIn": d, "dimOut": d2, "kraus": [matrix, ...]}
"""
import json

import numpy as np

from .channel import make_channel
from .errors import DimensionMismatch
from .linalg import BipartiteOperator, as_hermitian


def _num(x):
    return format(float(x), ".17g")


def _matrix_text(m):
    m = np.asarray(m, dtype=np.complex128)
    rows = (",".join(f"[{_num(z.real)},{_num(z.imag)}]" for z in row) for row in m)
    return "[" + ",".join(f"[{r}]" for r in rows) + "]"


def _matrix_from(entries):
    arr = np.asarray(entries, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DimensionMismatch("entries must be a matrix of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def dumps_operator(op, dims=None):
    """Serialize an operator; ``op`` may be a :class:`BipartiteOperator`."""
    if isinstance(op, BipartiteOperator):
        dims, mat = [op.dim_a, op.dim_b], op.op
    else:
        mat = np.asarray(op, dtype=np.complex128)
        dims = list(dims) if dims is not None else [mat.shape[0]]
    return f'{{"dims": {json.dumps([int(d) for d in dims])}, "entries": {_matrix_text(mat)}}}\n'


def loads_operator(text):
    """Parse an operator document; two dims give a :class:`BipartiteOperator`."""
    doc = json.loads(text)
    mat = as_hermitian(_matrix_from(doc["entries"]))
    dims = doc["dims"]
    if len(dims) == 2:
        return BipartiteOperator(mat, int(dims[0]), int(dims[1]))
    if len(dims) != 1 or dims[0] != mat.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not match a {mat.shape[0]}x{mat.shape[0]} matrix")
    return mat


def dumps_channel(ch):
    kraus = ",".join(_matrix_text(k) for k in ch.kraus)
    return f'{{"dimIn": {ch.dim_in}, "dimOut": {ch.dim_out}, "kraus": [{kraus}]}}\n'


def loads_channel(text):
    doc = json.loads(text)
    ch = make_channel([_matrix_from(k) for k in doc["kraus"]])
    if (ch.dim_in, ch.dim_out) != (doc["dimIn"], doc["dimOut"]):
        raise DimensionMismatch("Kraus shapes disagree with dimIn/dimOut")
    return ch


def save_operator(path, op, dims=None):
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_operator(op, dims))


def load_operator(path):
    with open(path) as fh:
        return loads_operator(fh.read())


def save_channel(path, ch):
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_channel(ch))


def load_channel(path):
    with open(path) as fh:
        return loads_channel(fh.read())
