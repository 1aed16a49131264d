"""JSON problem/result files.

Complex numbers are two-element arrays [re, im] everywhere.  Matrices are
row-major nested lists of complex entries.  Problem files carry a schema
version, a kind tag (disk | bidisk), nodes, values, and for the bidisk an
optional decomposition pair; result files embed the problem together with the
solution polynomials and the recomputed certificate, so they round-trip.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .bidisk import AglerPair, BidiskProblem, BidiskSolution, BiRational, Poly2
from .disk import RationalInterpolant, TakagiSolution
from .linalg import Inertia
from .pick import DiskProblem
from .polynomials import BlaschkeProduct, Poly

SCHEMA_VERSION = 1


class ProblemFileError(ValueError):
    pass


def encode_complex(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(v: Any, where: str) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ProblemFileError(f"{where}: complex numbers must be [re, im] pairs, got {v!r}")
    try:
        return complex(float(v[0]), float(v[1]))
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{where}: non-numeric entry {v!r}") from exc


def encode_vector(v) -> list[list[float]]:
    return [encode_complex(z) for z in np.asarray(v, dtype=complex)]


def decode_vector(v: Any, where: str) -> np.ndarray:
    if not isinstance(v, list):
        raise ProblemFileError(f"{where}: expected a list")
    return np.array([decode_complex(z, f"{where}[{k}]") for k, z in enumerate(v)], dtype=complex)


def encode_matrix(M) -> list[list[list[float]]]:
    M = np.asarray(M, dtype=complex)
    return [[encode_complex(z) for z in row] for row in M]


def decode_matrix(v: Any, where: str) -> np.ndarray:
    if not isinstance(v, list) or not v:
        raise ProblemFileError(f"{where}: expected a non-empty list of rows")
    rows = [decode_vector(row, f"{where}[{k}]") for k, row in enumerate(v)]
    width = {r.size for r in rows}
    if len(width) != 1:
        raise ProblemFileError(f"{where}: ragged rows")
    return np.vstack(rows)


def _require(data: dict, key: str) -> Any:
    if key not in data:
        raise ProblemFileError(f"missing required field '{key}'")
    return data[key]


def problem_to_dict(problem, pair: AglerPair | None = None) -> dict:
    if isinstance(problem, DiskProblem):
        return {
            "schema": SCHEMA_VERSION,
            "kind": "disk",
            "nodes": encode_vector(problem.nodes),
            "values": encode_vector(problem.values),
        }
    if isinstance(problem, BidiskProblem):
        out = {
            "schema": SCHEMA_VERSION,
            "kind": "bidisk",
            "nodes": [[encode_complex(problem.nodes[i, 0]), encode_complex(problem.nodes[i, 1])]
                      for i in range(problem.size)],
            "values": encode_vector(problem.values),
        }
        if pair is not None:
            out["gamma1"] = encode_matrix(pair.gamma1)
            out["gamma2"] = encode_matrix(pair.gamma2)
        return out
    raise TypeError(f"unsupported problem type {type(problem)!r}")


def problem_from_dict(data: dict) -> tuple[Any, AglerPair | None]:
    """Parse a problem dictionary; returns (problem, optional bidisk pair)."""
    if not isinstance(data, dict):
        raise ProblemFileError("top level must be an object")
    schema = data.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ProblemFileError(f"unsupported schema version {schema}")
    kind = _require(data, "kind")
    values = decode_vector(_require(data, "values"), "values")
    if kind == "disk":
        nodes = decode_vector(_require(data, "nodes"), "nodes")
        try:
            return DiskProblem(nodes=nodes, values=values), None
        except ValueError as exc:
            raise ProblemFileError(str(exc)) from exc
    if kind == "bidisk":
        raw = _require(data, "nodes")
        if not isinstance(raw, list):
            raise ProblemFileError("nodes: expected a list")
        nodes = np.array(
            [
                [decode_complex(p[0], f"nodes[{k}][0]"), decode_complex(p[1], f"nodes[{k}][1]")]
                if isinstance(p, list) and len(p) == 2
                else _bad_bidisk_node(k)
                for k, p in enumerate(raw)
            ],
            dtype=complex,
        )
        try:
            problem = BidiskProblem(nodes=nodes, values=values)
        except ValueError as exc:
            raise ProblemFileError(str(exc)) from exc
        pair = None
        if "gamma1" in data or "gamma2" in data:
            g1 = decode_matrix(_require(data, "gamma1"), "gamma1")
            g2 = decode_matrix(_require(data, "gamma2"), "gamma2")
            try:
                pair = AglerPair(gamma1=g1, gamma2=g2)
            except ValueError as exc:
                raise ProblemFileError(str(exc)) from exc
        return problem, pair
    raise ProblemFileError(f"unknown problem kind {kind!r} (expected disk or bidisk)")


def _bad_bidisk_node(k: int):
    raise ProblemFileError(f"nodes[{k}]: bidisk nodes must be pairs of [re, im] pairs")


def load_problem(path: str) -> tuple[Any, AglerPair | None, dict]:
    """Load a problem file; returns (problem, optional pair, raw dictionary)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path} is not valid JSON: {exc}") from exc
    problem, pair = problem_from_dict(data)
    return problem, pair, data


def _jsonable(obj):
    """Recursively convert numpy scalars/arrays and tuples for JSON output."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return encode_complex(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def disk_result_to_dict(solution: TakagiSolution, problem: DiskProblem) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "disk",
        "problem": problem_to_dict(problem),
        "numerator": encode_vector(solution.interpolant.numerator.coeffs),
        "denominator": encode_vector(solution.interpolant.denominator.coeffs),
        "blaschke": {
            "constant": encode_complex(solution.constant),
            "f_zeros": encode_vector(np.array(solution.f.zeros, dtype=complex)),
            "g_zeros": encode_vector(np.array(solution.g.zeros, dtype=complex)),
        },
        "inertia": list(solution.inertia.as_tuple()),
        "node_status": list(solution.interpolant.node_status),
        "certificate": _jsonable(solution.certificates),
    }


def bidisk_result_to_dict(
    solution: BidiskSolution, problem: BidiskProblem, pair: AglerPair | None = None
) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "kind": "bidisk",
        "problem": problem_to_dict(problem, pair),
        "numerator": encode_matrix(solution.numerator.coeffs),
        "denominator": encode_matrix(solution.denominator.coeffs),
        "bidegree": list(solution.bidegree),
        "inertias": [list(i.as_tuple()) for i in solution.inertias],
        "deltas": list(solution.deltas),
        "node_status": list(solution.node_status),
        "certificate": _jsonable(solution.certificates),
    }
    if solution.weak_solution is not None:
        out["weak_numerator"] = encode_matrix(solution.weak_solution.numerator.coeffs)
        out["weak_denominator"] = encode_matrix(solution.weak_solution.denominator.coeffs)
    return out


def result_to_solution(data: dict):
    """Rebuild (solution, problem) from a result dictionary for re-certification."""
    if not isinstance(data, dict):
        raise ProblemFileError("top level must be an object")
    kind = _require(data, "kind")
    problem, pair = problem_from_dict(_require(data, "problem"))
    if kind == "disk":
        num = Poly(decode_vector(_require(data, "numerator"), "numerator"))
        den = Poly(decode_vector(_require(data, "denominator"), "denominator"))
        bl = _require(data, "blaschke")
        constant = decode_complex(_require(bl, "constant"), "blaschke.constant")
        f = BlaschkeProduct(zeros=tuple(decode_vector(bl.get("f_zeros", []), "blaschke.f_zeros")))
        g = BlaschkeProduct(zeros=tuple(decode_vector(bl.get("g_zeros", []), "blaschke.g_zeros")))
        inertia = Inertia(*[int(k) for k in _require(data, "inertia")])
        interp = RationalInterpolant(
            numerator=num,
            denominator=den,
            node_status=list(data.get("node_status", [])),
            zeros_in_disk=f.degree,
            poles_in_disk=g.degree,
        )
        solution = TakagiSolution(
            interpolant=interp, f=f, g=g, constant=constant, inertia=inertia,
            unreduced_den=den, refl_degree=max(num.degree, den.degree), certificates={},
        )
        return solution, problem, pair
    if kind == "bidisk":
        num = Poly2(decode_matrix(_require(data, "numerator"), "numerator"))
        den = Poly2(decode_matrix(_require(data, "denominator"), "denominator"))
        inert = [Inertia(*[int(k) for k in row]) for row in _require(data, "inertias")]
        deltas = tuple(int(k) for k in _require(data, "deltas"))
        weak = None
        if "weak_numerator" in data and "weak_denominator" in data:
            weak = BiRational(
                numerator=Poly2(decode_matrix(data["weak_numerator"], "weak_numerator")),
                denominator=Poly2(decode_matrix(data["weak_denominator"], "weak_denominator")),
            )
        solution = BidiskSolution(
            numerator=num,
            denominator=den,
            bidegree=(den.bidegree[0], den.bidegree[1]),
            inertias=(inert[0], inert[1]),
            deltas=(deltas[0], deltas[1]),
            node_status=list(data.get("node_status", [])),
            weak_solution=weak,
        )
        return solution, problem, pair
    raise ProblemFileError(f"unknown result kind {kind!r}")


def dump_json(data: dict, path: str) -> None:
    """Deterministic JSON output: sorted keys, fixed indentation, trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(data), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path} is not valid JSON: {exc}") from exc
