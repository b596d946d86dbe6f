"""Seeded JSON instance files and their loaders.

Every file is one JSON object with a ``kind`` field.  Output is written
with sorted keys and fixed indentation, so the same (kind, dims, seed)
always produces the same bytes.
"""

import json
import zlib

from . import _linalg as la
from . import algebras
from . import poisson_jet as pj
from . import poisson_lie as pl
from . import sampling
from .cotangent_groupoid import MatrixLieGroupSpec
from .errors import PGLError
from .linear_poisson import LinearPoissonSpace, Subspace
from .operator_groupoid import StarAlgebraSpec
from .rng import stream

KINDS = ("subspace", "poisson-space", "group-spec", "algebra-spec", "operator-sample", "structure-constants")


def _first(dims, default):
    return int(dims[0]) if dims else default


def _subspace(rng, dims):
    n = _first(dims, 4)
    r = int(dims[1]) if len(dims) > 1 else n // 2
    return Subspace(rng.standard_normal((n, r)), ambient_dim=n).to_json()


def _poisson_space(rng, dims):
    n = _first(dims, 4)
    if n % 2 == 0:
        return sampling.random_symplectic_space(rng, n // 2).space.to_json()
    return sampling.random_poisson_space(rng, n).to_json()


def _group_spec(rng, dims):
    n = _first(dims, 2)
    # u(n) in a randomly rotated real basis
    base = pl.u_basis(n)
    T = algebras.random_basis_change(rng, len(base))
    basis = [sum(T[i, j] * base[j] for j in range(len(base))) for i in range(len(base))]
    out = MatrixLieGroupSpec(n, basis, "unitary").to_json()
    out["name"] = f"U({n})"
    return out


def _algebra_spec(rng, dims):
    blocks = [int(d) for d in dims] if dims else [2, 2]
    return StarAlgebraSpec(sum(blocks), tuple(blocks)).to_json()


def _operator_sample(rng, dims):
    n = _first(dims, 4)
    spec = StarAlgebraSpec.full(n)
    x = spec.random_element(rng)
    return {"algebra": spec.to_json(), "matrix": la.to_json_matrix(x)}


def _structure_constants(rng, dims):
    d = _first(dims, 3)
    if d == 3:
        c = algebras.so3()
    else:
        c = algebras.direct_sum(*([algebras.so3()] * (d // 3) + [algebras.abelian(d % 3)] * bool(d % 3)))
    c = algebras.change_basis(c, algebras.random_basis_change(rng, d))
    anti, jac = pj.check_structure_constants(c)
    if max(anti, jac) > 1e-9:
        raise PGLError("generated constants failed validation", max(anti, jac))
    return pj.structure_constants_to_json(c)


_GENERATORS = {
    "subspace": _subspace,
    "poisson-space": _poisson_space,
    "group-spec": _group_spec,
    "algebra-spec": _algebra_spec,
    "operator-sample": _operator_sample,
    "structure-constants": _structure_constants,
}


def generate(kind, dims=(), seed=0):
    """The instance object for (kind, dims, seed)."""
    if kind not in _GENERATORS:
        raise KeyError(f"unknown instance kind '{kind}'; known: {', '.join(KINDS)}")
    dims = [int(d) for d in dims]
    rng = stream(seed, zlib.crc32(kind.encode()), *dims)
    obj = _GENERATORS[kind](rng, dims)
    obj["kind"] = kind
    return obj


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def gen_instance(kind, dims, seed, out_path=None):
    """Write the instance to ``out_path`` (or return the text when it is None)."""
    text = dumps(generate(kind, dims, seed))
    if out_path is None:
        return text
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def parse_instance(obj):
    """Validate an instance object by building the value it describes."""
    if not isinstance(obj, dict) or obj.get("kind") not in KINDS:
        raise PGLError("instance must be a JSON object with a known 'kind'")
    kind = obj["kind"]
    try:
        if kind == "subspace":
            return Subspace.from_json(obj)
        if kind == "poisson-space":
            return LinearPoissonSpace.from_json(obj)
        if kind == "group-spec":
            return MatrixLieGroupSpec.from_json(obj)
        if kind == "algebra-spec":
            return StarAlgebraSpec.from_json(obj)
        if kind == "operator-sample":
            x = la.from_json_matrix(obj["matrix"])
            spec = StarAlgebraSpec.from_json(obj["algebra"]) if "algebra" in obj else StarAlgebraSpec.full(x.shape[0])
            if x.shape != (spec.n, spec.n):
                raise PGLError("matrix does not match the algebra size")
            return spec, x
        c = pj.structure_constants_from_json(obj)
        pj.lie_poisson_bivector(c)
        return c
    except PGLError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise PGLError(f"malformed {kind} instance: {exc}") from exc


def load_instance(path):
    """Read and validate an instance file; returns the raw object."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise PGLError(f"cannot read instance {path}: {exc}") from exc
    parse_instance(obj)
    return obj
