"""JSON encodings for states, channels, testers and conversion instances.

Complex numbers are [re, im] pairs; matrices are row-major nested lists.
Channel schema: {"kind": "kraus"|"ptm"|"choi", "data": ..., "class": tag or
null} where kraus data is a list of 2x2 matrices and ptm/choi data is one
4x4 matrix (ptm entries may be plain reals).  Process POVM schema:
{"effects": [{"label": str, "data": 4x4}, ...], "anc_marginal": 2x2}.
"""

from __future__ import annotations

import json

import numpy as np

from .channels import QubitChannel
from .convertibility import ConversionInstance, from_overlaps
from .errors import ValidationError
from .measurement import PPOVM
from .qubit_core import Array, validate_state


def _to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[_to_pair(a[i, j]) for j in range(a.shape[1])] for i in range(a.shape[0])]


def vector_to_json(v) -> list:
    a = np.asarray(v, dtype=complex).reshape(-1)
    return [_to_pair(z) for z in a]


def _parse_entry(obj, path: str) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (
        isinstance(obj, (list, tuple))
        and len(obj) == 2
        and all(isinstance(c, (int, float)) for c in obj)
    ):
        return complex(obj[0], obj[1])
    raise ValidationError(f"{path}: expected a number or [re, im] pair, got {obj!r}")


def parse_matrix(obj, shape: tuple[int, int], path: str) -> Array:
    if not isinstance(obj, list) or len(obj) != shape[0]:
        raise ValidationError(f"{path}: expected {shape[0]} rows")
    out = np.empty(shape, dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ValidationError(f"{path}[{i}]: expected {shape[1]} entries")
        for j, entry in enumerate(row):
            out[i, j] = _parse_entry(entry, f"{path}[{i}][{j}]")
    return out


def parse_vector(obj, length: int, path: str) -> Array:
    if not isinstance(obj, list) or len(obj) != length:
        raise ValidationError(f"{path}: expected {length} entries")
    return np.array([_parse_entry(e, f"{path}[{k}]") for k, e in enumerate(obj)])


def channel_to_dict(channel: QubitChannel, kind: str = "kraus") -> dict:
    if kind == "kraus":
        data = [matrix_to_json(k) for k in channel.kraus]
    elif kind == "ptm":
        data = [[float(v) for v in row] for row in channel.ptm]
    elif kind == "choi":
        data = matrix_to_json(channel.choi)
    else:
        raise ValidationError(f"unknown channel encoding kind {kind!r}")
    return {"kind": kind, "data": data, "class": channel.class_tag}


def channel_from_dict(d) -> QubitChannel:
    if not isinstance(d, dict):
        raise ValidationError("channel JSON must be an object")
    for key in ("kind", "data"):
        if key not in d:
            raise ValidationError(f"channel JSON missing key {key!r}")
    kind = d["kind"]
    tag = d.get("class")
    if tag is not None and not isinstance(tag, str):
        raise ValidationError("'class' must be a string or null")
    if kind == "kraus":
        data = d["data"]
        if not isinstance(data, list) or not data:
            raise ValidationError("'data': expected a nonempty list of Kraus matrices")
        kraus = [parse_matrix(k, (2, 2), f"data[{i}]") for i, k in enumerate(data)]
        return QubitChannel.from_kraus(kraus, class_tag=tag)
    if kind == "ptm":
        return QubitChannel.from_ptm(parse_matrix(d["data"], (4, 4), "data"), class_tag=tag)
    if kind == "choi":
        return QubitChannel.from_choi(parse_matrix(d["data"], (4, 4), "data"), class_tag=tag)
    raise ValidationError(f"'kind': expected kraus, ptm or choi, got {kind!r}")


def state_to_dict(m) -> dict:
    return {"data": matrix_to_json(m)}


def state_from_dict(d, dim: int) -> Array:
    if not isinstance(d, dict) or "data" not in d:
        raise ValidationError("state JSON must be an object with a 'data' key")
    return validate_state(parse_matrix(d["data"], (dim, dim), "data"), dim=dim)


def ppovm_to_dict(ppovm: PPOVM) -> dict:
    return {
        "effects": [
            {"label": label, "data": matrix_to_json(e)}
            for label, e in zip(ppovm.labels, ppovm.effects)
        ],
        "anc_marginal": matrix_to_json(ppovm.anc_marginal),
    }


def ppovm_from_dict(d) -> PPOVM:
    if not isinstance(d, dict):
        raise ValidationError("PPOVM JSON must be an object")
    for key in ("effects", "anc_marginal"):
        if key not in d:
            raise ValidationError(f"PPOVM JSON missing key {key!r}")
    if not isinstance(d["effects"], list) or not d["effects"]:
        raise ValidationError("'effects': expected a nonempty list")
    effects = []
    labels = []
    for i, item in enumerate(d["effects"]):
        if not isinstance(item, dict) or "data" not in item:
            raise ValidationError(f"effects[{i}]: expected an object with a 'data' key")
        labels.append(str(item.get("label", f"m{i}")))
        effects.append(parse_matrix(item["data"], (4, 4), f"effects[{i}].data"))
    marginal = parse_matrix(d["anc_marginal"], (2, 2), "anc_marginal")
    return PPOVM(effects=tuple(effects), anc_marginal=marginal, labels=tuple(labels))


def instance_from_dict(d) -> ConversionInstance:
    if not isinstance(d, dict):
        raise ValidationError("instance JSON must be an object")
    if "x" in d or "y" in d:
        for key in ("x", "y"):
            if key not in d or not isinstance(d[key], (int, float)):
                raise ValidationError(f"instance JSON needs numeric '{key}'")
        return from_overlaps(float(d["x"]), float(d["y"]))
    for key in ("psi", "phi", "e", "f"):
        if key not in d:
            raise ValidationError(f"instance JSON missing key {key!r}")
    return ConversionInstance(
        psi=parse_vector(d["psi"], 2, "psi"),
        phi=parse_vector(d["phi"], 2, "phi"),
        e=parse_vector(d["e"], 2, "e"),
        f=parse_vector(d["f"], 2, "f"),
    )


def instance_to_dict(instance: ConversionInstance) -> dict:
    return {
        "psi": vector_to_json(instance.psi),
        "phi": vector_to_json(instance.phi),
        "e": vector_to_json(instance.e),
        "f": vector_to_json(instance.f),
    }


def tau_preset(name: str) -> Array | None:
    """Two-qubit state presets accepted wherever a tau file is expected."""
    if name == "maximally-entangled":
        phi = np.zeros(4)
        phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
        return np.outer(phi, phi)
    if name == "product-00":
        m = np.zeros((4, 4))
        m[0, 0] = 1.0
        return m
    if name.startswith("werner-state:"):
        from .detection import werner_channel

        try:
            w = float(name.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"invalid werner-state weight in {name!r}") from None
        return 0.5 * werner_channel(w).choi
    return None


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def load_tau(spec: str) -> Array:
    """Resolve --tau arguments: preset name or path to a state JSON file."""
    preset = tau_preset(spec)
    if preset is not None:
        return validate_state(preset, dim=4)
    return state_from_dict(load_json(spec), dim=4)
