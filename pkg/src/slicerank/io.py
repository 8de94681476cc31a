"""JSON file formats.

Every file is a JSON object with ``format`` and ``version`` tags, integers
only.  Axis and term indices are 1-based in files (0-based in memory).
Writes go to a temporary file in the target directory and are renamed into
place.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .decomposition import SliceDecomposition, SliceTerm, TensorRankDecomposition
from .enumeration import CensusReport
from .field import DTYPE, GF
from .sunflower import Petal, SunflowerFamily
from .zero_form import ZeroFormCertificate

VERSION = 1
TENSOR = "slicerank.tensor"
DECOMPOSITION = "slicerank.decomposition"
CERTIFICATE = "slicerank.certificate"
SUNFLOWER = "slicerank.sunflower"
CENSUS = "slicerank.census"


class FormatError(ValueError):
    pass


def _ints(a) -> list[int]:
    return [int(x) for x in np.asarray(a).ravel()]


def payload(t) -> dict:
    t = np.asarray(t, dtype=DTYPE)
    return {"dims": list(t.shape), "entries": _ints(t)}


def from_payload(obj: dict, field: GF) -> np.ndarray:
    dims = tuple(int(n) for n in obj["dims"])
    entries = obj["entries"]
    if any(isinstance(x, bool) or not isinstance(x, int) for x in entries):
        raise FormatError("tensor entries must be integers")
    if len(entries) != int(np.prod(dims, dtype=np.int64)):
        raise FormatError(f"{len(entries)} entries for dims {list(dims)}")
    return field(np.array(entries, dtype=DTYPE).reshape(dims))


def _header(kind: str, obj: dict):
    if obj.get("format") != kind:
        raise FormatError(f"expected format {kind!r}, got {obj.get('format')!r}")
    if obj.get("version") != VERSION:
        raise FormatError(f"unsupported version {obj.get('version')!r}")
    return GF(int(obj["p"])) if "p" in obj else None


# tensors


def tensor_to_dict(t, field: GF) -> dict:
    t = field(t)
    return {"format": TENSOR, "version": VERSION, "p": field.p, **payload(t)}


def tensor_from_dict(obj: dict) -> tuple[np.ndarray, GF]:
    field = _header(TENSOR, obj)
    return from_payload(obj, field), field


# decompositions


def decomposition_to_dict(dec) -> dict:
    out = {"format": DECOMPOSITION, "version": VERSION, "p": dec.field.p, "dims": list(dec.dims)}
    if isinstance(dec, SliceDecomposition):
        out["kind"] = "slice"
        out["terms"] = [{"axis": t.axis + 1, "a": _ints(t.a), "b": payload(t.b)} for t in dec.terms]
    elif isinstance(dec, TensorRankDecomposition):
        out["kind"] = "tensor_rank"
        out["terms"] = [{"factors": [_ints(v) for v in term]} for term in dec.terms]
    else:
        raise TypeError(f"not a decomposition: {type(dec).__name__}")
    return out


def decomposition_from_dict(obj: dict):
    field = _header(DECOMPOSITION, obj)
    dims = tuple(int(n) for n in obj["dims"])
    kind = obj.get("kind")
    if kind == "slice":
        terms = []
        for t in obj["terms"]:
            j = int(t["axis"]) - 1
            if not 0 <= j < len(dims):
                raise FormatError(f"axis {t['axis']} out of range 1..{len(dims)}")
            terms.append(SliceTerm(j, field(np.array(t["a"], dtype=DTYPE)), from_payload(t["b"], field)))
        return SliceDecomposition(dims, field, tuple(terms))
    if kind == "tensor_rank":
        terms = tuple(tuple(field(np.array(v, dtype=DTYPE)) for v in t["factors"]) for t in obj["terms"])
        return TensorRankDecomposition(dims, field, terms)
    raise FormatError(f"unknown decomposition kind {kind!r}")


# certificates


def certificate_to_dict(cert: ZeroFormCertificate) -> dict:
    entries = []
    for (J, j, i, idx), val in sorted(cert.entries.items()):
        entries.append(
            {
                "J": [x + 1 for x in J],
                "axis": j + 1,
                "index": i + 1,
                "indices": [x + 1 for x in idx],
                "value": payload(val),
            }
        )
    return {
        "format": CERTIFICATE,
        "version": VERSION,
        "p": cert.field.p,
        "dims": list(cert.dims),
        "shape": list(cert.shape),
        "entries": entries,
    }


def certificate_from_dict(obj: dict) -> ZeroFormCertificate:
    field = _header(CERTIFICATE, obj)
    entries = {}
    for e in obj["entries"]:
        key = (tuple(int(x) - 1 for x in e["J"]), int(e["axis"]) - 1, int(e["index"]) - 1, tuple(int(x) - 1 for x in e["indices"]))
        entries[key] = from_payload(e["value"], field)
    return ZeroFormCertificate(tuple(obj["dims"]), field, tuple(obj["shape"]), entries)


# sunflower families


def _stack_payload(stack) -> list[dict]:
    return [payload(x) for x in stack]


def _stack_from(items, lead_shape, field: GF) -> np.ndarray:
    arrs = [from_payload(x, field) for x in items]
    if not arrs:
        return np.zeros((0,) + tuple(lead_shape), dtype=DTYPE)
    return np.stack(arrs)


def family_to_dict(fam: SunflowerFamily) -> dict:
    return {
        "format": SUNFLOWER,
        "version": VERSION,
        "p": fam.field.p,
        "dims": list(fam.dims),
        "center": [[_ints(v) for v in c] for c in fam.center],
        "petals": [
            {
                "center_b": [_stack_payload(b) for b in pt.center_b],
                "a": [[_ints(v) for v in a] for a in pt.a],
                "b": [_stack_payload(b) for b in pt.b],
            }
            for pt in fam.petals
        ],
    }


def family_from_dict(obj: dict) -> SunflowerFamily:
    field = _header(SUNFLOWER, obj)
    dims = tuple(int(n) for n in obj["dims"])
    d = len(dims)
    comp = [tuple(n for k, n in enumerate(dims) if k != j) for j in range(d)]
    center = tuple(np.array(c, dtype=DTYPE).reshape(-1, dims[j]) for j, c in enumerate(obj["center"]))
    petals = []
    for pt in obj["petals"]:
        if not len(pt["center_b"]) == len(pt["a"]) == len(pt["b"]) == d:
            raise FormatError(f"petal does not have {d} axes")
        petals.append(
            Petal(
                tuple(_stack_from(pt["center_b"][j], comp[j], field) for j in range(d)),
                tuple(np.array(pt["a"][j], dtype=DTYPE).reshape(-1, dims[j]) for j in range(d)),
                tuple(_stack_from(pt["b"][j], comp[j], field) for j in range(d)),
            )
        )
    return SunflowerFamily(dims, field, center, tuple(petals))


# census reports


def census_to_dict(rep: CensusReport) -> dict:
    return {"format": CENSUS, "version": VERSION, **rep.summary()}


def census_from_dict(obj: dict) -> dict:
    _header(CENSUS, obj)
    return {k: v for k, v in obj.items() if k not in ("format", "version")}


# files


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1) + "\n"


def write_json(path, obj: dict):
    """Atomic write: temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(obj))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path) -> dict:
    with open(path) as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return obj


_READERS = {
    TENSOR: tensor_from_dict,
    DECOMPOSITION: decomposition_from_dict,
    CERTIFICATE: certificate_from_dict,
    SUNFLOWER: family_from_dict,
    CENSUS: census_from_dict,
}


def load(path):
    """Read any of the formats, dispatching on the ``format`` tag."""
    obj = read_json(path)
    kind = obj.get("format")
    if kind not in _READERS:
        raise FormatError(f"{path}: unknown format {kind!r}")
    return _READERS[kind](obj)


def save_tensor(path, t, field: GF):
    write_json(path, tensor_to_dict(t, field))


def save_decomposition(path, dec):
    write_json(path, decomposition_to_dict(dec))


def save_certificate(path, cert: ZeroFormCertificate):
    write_json(path, certificate_to_dict(cert))


def save_family(path, fam: SunflowerFamily):
    write_json(path, family_to_dict(fam))


def save_census(path, rep: CensusReport):
    write_json(path, census_to_dict(rep))

