import json

import numpy as np
import pytest

from nec import generators
from nec.codefile import code_from_kernels, code_to_dict, dump_code, parse_code
from nec.construct import construct_code
from nec.errors import CodeFormatError
from nec.galois import Field
from nec.randomcode import random_code


def test_round_trip(g1_code):
    text = dump_code(g1_code)
    again = parse_code(text)
    assert dump_code(again) == text
    doc = json.loads(text)
    assert doc["index_legend"] == ["d'1", "e1", "e2", "e3"]
    assert doc["extended_kernels"]["e3"] == [1, 1, 0, 1]
    assert doc["local_kernels"]["i"] == {"e1": {"e3": 1}}


def test_round_trip_random(g3):
    code = random_code(g3, 2, Field(11), seed=1)
    assert dump_code(parse_code(dump_code(code))) == dump_code(code)


def test_tampered_kernel_rejected(g1_code):
    doc = code_to_dict(g1_code)
    doc["extended_kernels"]["e3"] = [1, 1, 0, 2]
    with pytest.raises(CodeFormatError):
        parse_code(json.dumps(doc))


@pytest.mark.parametrize("breakage", [
    lambda d: d.pop("field"),
    lambda d: d.update(field=4),
    lambda d: d["local_kernels"]["i"].pop("e1"),
    lambda d: d.update(index_legend=["x"]),
])
def test_malformed_rejected(g1_code, breakage):
    doc = code_to_dict(g1_code)
    breakage(doc)
    with pytest.raises(CodeFormatError):
        parse_code(json.dumps(doc))
    with pytest.raises(CodeFormatError):
        parse_code("[1, 2]")


def test_code_from_worked_kernels(g1, f3):
    kernels = {"e1": [1, 1, 0, 0], "e2": [1, 0, 1, 0], "e3": [1, 1, 0, 1]}
    code = code_from_kernels(g1, 1, kernels, f3)
    assert code.local.as_sequence() == [1, 1, 1]
    with pytest.raises(CodeFormatError):
        code_from_kernels(g1, 1, {**kernels, "e3": [1, 1, 1, 1]}, f3)


def test_code_from_kernels_inverts_propagation():
    net = generators.combination(4, 2)
    code = construct_code(net, 1, "max", "auto")
    again = code_from_kernels(net, 1, code.extended, code.field)
    assert again.local == code.local
