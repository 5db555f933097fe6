"""Machine-readable exports and their round-trip importers.

JSON files carry a ``schema_version`` field; complex entries are encoded as
[re, im] pairs and half-integer labels as doubled integers.  Floats are
written with Python's shortest round-trip representation, so importing an
export reproduces every matrix entry bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .halves import format_half
from .structure import StructureDecomposition, StructureReport

SCHEMA_VERSION = 1


def _complex_pairs(vec: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in vec]


def _from_pairs(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def write_structure_json(report: StructureReport, path) -> None:
    payload = {"schema_version": SCHEMA_VERSION, "kind": "structure"}
    payload.update(report.to_dict())
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def write_structure_csv(report: StructureReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["j", "p", "q", "pq", "p_squared"])
        for tj, p, q in report.rows:
            writer.writerow([format_half(tj), p, q, p * q, p * p])


def load_structure(path) -> dict:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version: {payload.get('schema_version')}")
    return payload


def write_basis_json(decomp: StructureDecomposition, path) -> None:
    vectors = []
    for block in decomp.blocks:
        for mu in range(block.p):
            for tm in block.twice_m_values():
                vectors.append(
                    {
                        "twice_j": block.twice_j,
                        "mu": mu + 1,
                        "twice_m": tm,
                        "coords": _complex_pairs(block.vector(mu, tm / 2.0)),
                    }
                )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "basis",
        "n": decomp.system.n,
        "d": decomp.system.d,
        "dim": decomp.dim,
        "blocks": [
            {"twice_j": block.twice_j, "mu": mu + 1}
            for block in decomp.blocks
            for mu in range(block.p)
        ],
        "vectors": vectors,
    }
    Path(path).write_text(json.dumps(payload) + "\n", encoding="utf-8")


def load_basis(path) -> dict:
    """Reconstruct the exported basis: unitary columns in file order plus
    the (twice_j, mu, twice_m) label of every column."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version: {payload.get('schema_version')}")
    if payload.get("kind") != "basis":
        raise ValueError(f"not a basis export: kind={payload.get('kind')!r}")
    labels = [
        (entry["twice_j"], entry["mu"], entry["twice_m"])
        for entry in payload["vectors"]
    ]
    unitary = np.column_stack(
        [_from_pairs(entry["coords"]) for entry in payload["vectors"]]
    )
    return {
        "n": payload["n"],
        "d": payload["d"],
        "unitary": unitary,
        "labels": labels,
        "blocks": [(b["twice_j"], b["mu"]) for b in payload["blocks"]],
    }


def write_centrals_json(decomp: StructureDecomposition, path) -> None:
    projections = []
    for block in decomp.blocks:
        matrix = decomp.central_projection(block.j)
        projections.append(
            {
                "twice_j": block.twice_j,
                "matrix": [_complex_pairs(row) for row in matrix],
            }
        )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "centrals",
        "n": decomp.system.n,
        "d": decomp.system.d,
        "projections": projections,
    }
    Path(path).write_text(json.dumps(payload) + "\n", encoding="utf-8")


def load_centrals(path) -> list[tuple[int, np.ndarray]]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version: {payload.get('schema_version')}")
    out = []
    for entry in payload["projections"]:
        matrix = np.array(
            [[complex(re, im) for re, im in row] for row in entry["matrix"]],
            dtype=np.complex128,
        )
        out.append((entry["twice_j"], matrix))
    return out
