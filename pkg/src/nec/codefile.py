"""JSON documents for codes.

A code document holds the field size, the rate, the network, the local
coefficients (``node -> in-label -> out-channel -> value``), and the
extended kernels with their coordinate legend.  On load the extended kernels
are recomputed from the local coefficients and must match.
"""

from __future__ import annotations

import json

import numpy as np

from .construct import Code
from .errors import CodeFormatError, NecError
from .galois import Field
from .kernels import LocalKernels, index_legend, serialize_kernels
from .netgraph import network_from_dict


def code_to_dict(code: Code) -> dict:
    doc = {"field": code.field.q, "rate": code.rate, "network": code.net.to_document(),
           "local_kernels": code.local.to_nested()}
    doc.update(serialize_kernels(code.net, code.rate, code.extended))
    return doc


def dump_code(code: Code) -> str:
    return json.dumps(code_to_dict(code), indent=2) + "\n"


def code_from_dict(doc: dict) -> Code:
    """Rebuild a code and check its stored kernels.

    Raises:
        CodeFormatError: missing fields, bad values, or kernels inconsistent
            with the local coefficients.
    """
    try:
        field = Field(int(doc["field"]))
        w = int(doc["rate"])
        net = network_from_dict(doc["network"])
        local = LocalKernels.from_nested(net, w, doc["local_kernels"], field)
    except (KeyError, TypeError, ValueError, NecError) as exc:
        raise CodeFormatError(f"malformed code document: {exc}") from None
    code = Code.from_local(net, w, local, field)
    if "index_legend" in doc and list(doc["index_legend"]) != index_legend(net, w):
        raise CodeFormatError("index legend does not match the network")
    stored = doc.get("extended_kernels")
    if stored is not None:
        if set(stored) != set(net.channel_ids):
            raise CodeFormatError("extended kernels do not cover exactly the channels")
        for cid, vec in stored.items():
            if not np.array_equal(np.asarray(vec, dtype=np.int64) % field.q, code.extended[cid]):
                raise CodeFormatError(f"stored kernel of {cid!r} disagrees with local kernels")
    return code


def parse_code(text: str) -> Code:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CodeFormatError("code document must be a JSON object")
    return code_from_dict(doc)


def code_from_kernels(net, w: int, kernels: dict, field: Field) -> Code:
    """Code with given extended kernels; local coefficients are read off them.

    A kernel ``f_e`` of a consistent code equals ``sum_d k_{d,e} f_d + 1_e``,
    and the ``d`` coordinates of that sum determine ``k_{d,e}`` for message
    channels; for other inputs the coefficients come from a left solve.
    """
    from .galois import solve_left
    from .kernels import coord, inputs

    local = LocalKernels(net, w)
    n = w + len(net.channels)
    full = {d: field.unit(n, d.k - 1) for d in inputs(net, w, net.source)}
    full.update({c: np.asarray(v, dtype=np.int64) % field.q for c, v in kernels.items()})
    for ch in net.channels:
        ins = inputs(net, w, ch.tail)
        target = (full[ch.id] - field.unit(n, coord(net, w, ch.id))) % field.q
        if ins:
            sol = solve_left(np.stack([full[d] for d in ins]), target, field)
        else:
            sol = np.zeros(0, np.int64) if not target.any() else None
        if sol is None:
            raise CodeFormatError(f"kernel of {ch.id!r} is not reachable from its inputs")
        for d, c in zip(ins, sol):
            local[(d, ch.id)] = int(c)
    code = Code.from_local(net, w, local, field)
    for cid in net.channel_ids:
        if not np.array_equal(code.extended[cid], full[cid]):
            raise CodeFormatError(f"kernels inconsistent at {cid!r}")
    return code
