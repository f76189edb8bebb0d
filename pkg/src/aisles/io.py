"""JSON documents: algebras, modules, complexes, certificates and systems.

Scalars are strings (``"3/2"``, ``"-1"``) or integers, never floats.
"""

from __future__ import annotations

import json
from typing import Any, Dict, Optional

from .algebra import (FDAlgebra, Quiver, Relation, beilinson_algebra, build_bound_quiver_algebra,
                      dual_numbers, field_algebra, kronecker_algebra)
from .complexes import (BoundedComplex, ChainMap, DirectedSystem, direct_sum_complexes,
                        regular_complex, shift)
from .linalg import QQ, Field, Matrix
from .rep import FDModule, direct_sum, projective, regular_module, representation, simple_module

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed or inconsistent input document."""


def parse_field(text) -> Field:
    if text is None:
        return QQ
    t = str(text).strip()
    if t.upper() in ("QQ", "Q", "0"):
        return QQ
    if t.upper().startswith("GF(") and t.endswith(")"):
        t = t[3:-1]
    try:
        return Field(int(t))
    except ValueError as exc:
        raise InputError("bad field %r: %s" % (text, exc))


def _scalar(F: Field, x):
    if isinstance(x, float):
        raise InputError("floating-point entries are not accepted; use strings like \"3/2\"")
    try:
        return F(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("bad scalar %r: %s" % (x, exc))


def parse_matrix(F: Field, rows, nrows: Optional[int] = None, ncols: Optional[int] = None) -> Matrix:
    if not isinstance(rows, list):
        raise InputError("matrix must be a list of rows")
    data = [[_scalar(F, x) for x in r] for r in rows]
    nr = len(data)
    nc = len(data[0]) if data else (ncols or 0)
    if any(len(r) != nc for r in data):
        raise InputError("ragged matrix")
    if nrows is not None and nr == 0 and nrows:
        raise InputError("matrix has no rows, expected %d" % nrows)
    if nr == 0:
        return Matrix(F, nrows or 0, ncols or 0)
    if (nrows is not None and nr != nrows) or (ncols is not None and nc != ncols):
        raise InputError("matrix has shape %s, expected %s" % ((nr, nc), (nrows, ncols)))
    return Matrix(F, nr, nc, data)


class Document:
    """Lazily resolved named objects of one input document."""

    def __init__(self, data: Dict[str, Any], field: Optional[Field] = None):
        if not isinstance(data, dict):
            raise InputError("document must be a JSON object")
        ver = data.get("schema_version", SCHEMA_VERSION)
        if ver != SCHEMA_VERSION:
            raise InputError("unsupported schema_version %r" % ver)
        self.data = data
        self.field = field if field is not None else parse_field(data.get("field"))
        self._cache: Dict[tuple, Any] = {}

    @classmethod
    def load(cls, path: str, field: Optional[Field] = None) -> "Document":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError("cannot read %s: %s" % (path, exc))
        return cls(data, field)

    def _section(self, key: str, name: str):
        sec = self.data.get(key, {})
        if name not in sec:
            raise InputError("no %s named %r" % (key[:-1] if key.endswith("s") else key, name))
        return sec[name]

    def _cached(self, key, name, build):
        k = (key, name)
        if k not in self._cache:
            try:
                self._cache[k] = build(self._section(key, name))
            except InputError:
                raise
            except (KeyError, TypeError, IndexError) as exc:
                raise InputError("%s %r is malformed: %s" % (key, name, exc))
        return self._cache[k]

    # algebras ---------------------------------------------------------------
    def algebra(self, name: str) -> FDAlgebra:
        return self._cached("algebras", name, self._build_algebra)

    def _build_algebra(self, spec) -> FDAlgebra:
        F = self.field
        b = spec.get("builtin")
        if b is not None:
            if b in ("field-K", "K"):
                return field_algebra(F)
            if b == "kx2":
                return dual_numbers(F)
            if b == "kronecker":
                return kronecker_algebra(F)
            if b == "beilinson":
                return beilinson_algebra(int(spec["d"]), F)
            raise InputError("unknown builtin algebra %r" % b)
        q = spec["quiver"]
        quiver = Quiver(tuple(q["vertices"]), tuple(tuple(a) for a in q["arrows"]))
        rels = []
        for r in spec.get("relations", []):
            rels.append(Relation(tuple((_scalar(F, c), tuple(p)) for c, p in r)))
        try:
            return build_bound_quiver_algebra(quiver, rels, int(spec["length_bound"]), F,
                                              name=spec.get("name", "A"))
        except ValueError as exc:
            raise InputError(str(exc))

    # modules ----------------------------------------------------------------
    def module(self, name: str) -> FDModule:
        return self._cached("modules", name, self._build_module)

    def _build_module(self, spec, A: Optional[FDAlgebra] = None) -> FDModule:
        if isinstance(spec, str):
            return self.module(spec)
        if A is None or "algebra" in spec:
            A = self.algebra(spec["algebra"])
        F = self.field
        if "projective" in spec:
            return projective(A, int(spec["projective"]))
        if "simple" in spec:
            return simple_module(A, int(spec["simple"]))
        if spec.get("regular"):
            return regular_module(A)
        if "sum" in spec:
            return direct_sum([self._build_module(s, A) for s in spec["sum"]], A)
        if "representation" in spec:
            r = spec["representation"]
            dims = {k: int(v) for k, v in r["dims"].items()}
            q = A.quiver
            mats = {}
            for lab, s, t in q.arrows:
                if lab in r.get("arrows", {}):
                    mats[lab] = parse_matrix(F, r["arrows"][lab], dims.get(t, 0), dims.get(s, 0))
            try:
                return representation(A, dims, mats)
            except ValueError as exc:
                raise InputError(str(exc))
        if "action" in spec:
            n = int(spec["dim"])
            acts = [parse_matrix(F, m, n, n) for m in spec["action"]]
            try:
                return FDModule(A, n, acts)
            except ValueError as exc:
                raise InputError(str(exc))
        raise InputError("cannot interpret module spec %r" % (spec,))

    # complexes --------------------------------------------------------------
    def complex(self, name: str) -> BoundedComplex:
        return self._cached("complexes", name, self._build_complex)

    def _build_complex(self, spec) -> BoundedComplex:
        if "sum" in spec:
            parts = [self.complex(n) for n in spec["sum"]]
            C = direct_sum_complexes(parts, labels=spec.get("labels"))
            return shift(C, int(spec.get("shift", 0)))
        A = self.algebra(spec["algebra"])
        b = spec.get("builtin")
        if b is not None:
            if b == "regular":
                C = regular_complex(A)
            elif b == "kronecker-tilt":
                from .fixtures import kronecker_tilt
                C = kronecker_tilt(A)
            else:
                raise InputError("unknown builtin complex %r" % b)
            return shift(C, int(spec.get("shift", 0)))
        terms = {}
        labels = {}
        for deg, t in spec.get("terms", {}).items():
            k = int(deg)
            if isinstance(t, dict) and "projectives" in t:
                parts = [projective(A, int(i)) for i in t["projectives"]]
                terms[k] = direct_sum(parts, A)
            else:
                terms[k] = self._build_module(t, A)
        for deg, labs in spec.get("labels", {}).items():
            labels[int(deg)] = tuple(labs)
        diffs = {}
        for deg, rows in spec.get("differentials", {}).items():
            k = int(deg)
            s = terms[k].dim if k in terms else 0
            t = terms[k + 1].dim if k + 1 in terms else 0
            diffs[k] = parse_matrix(self.field, rows, t, s)
        try:
            C = BoundedComplex(A, terms, diffs, labels=labels or None)
        except ValueError as exc:
            raise InputError(str(exc))
        return shift(C, int(spec.get("shift", 0)))

    # certificates -----------------------------------------------------------
    def certificate(self, name: str):
        from .tstruct import certificate_from_json
        return self._cached("certificates", name, lambda spec: certificate_from_json(self.field, spec))

    # systems ----------------------------------------------------------------
    def system(self, name: str) -> DirectedSystem:
        return self._cached("systems", name, self._build_system)

    def _build_system(self, spec) -> DirectedSystem:
        F = self.field
        if spec.get("kind") == "sequence":
            Gs = [self.complex(c) for c in spec["complexes"]]
            steps = []
            for n, m in enumerate(spec["maps"]):
                S, T = Gs[n], Gs[n + 1]
                steps.append(self._chain_map(S, T, m))
            return DirectedSystem.sequence(Gs, steps)
        elements = list(spec["elements"])
        less = [tuple(p) for p in spec["less"]]
        cs = {e: self.complex(spec["complexes"][e]) for e in elements}
        maps = {}
        for key, m in spec["maps"].items():
            s, t = key.split("->")
            maps[(s, t)] = self._chain_map(cs[s], cs[t], m)
        return DirectedSystem(elements, less, cs, maps)

    def _chain_map(self, S: BoundedComplex, T: BoundedComplex, m) -> ChainMap:
        maps = {int(k): parse_matrix(self.field, rows, T.dim(int(k)), S.dim(int(k)))
                for k, rows in m.items()}
        try:
            return ChainMap(S, T, maps)
        except ValueError as exc:
            raise InputError(str(exc))


# ---------------------------------------------------------------------------
# output helpers

def complex_to_json(C: BoundedComplex) -> dict:
    return {
        "support": [C.lo, C.hi] if C.terms else [],
        "dims": {str(k): m.dim for k, m in C.terms.items()},
        "differentials": {str(k): d.to_strings() for k, d in sorted(C.diffs.items())},
        "cohomology": {str(k): v for k, v in sorted(C.cohomology_dims().items())},
    }


def chain_map_to_json(f: ChainMap) -> dict:
    return {str(k): m.to_strings() for k, m in sorted(f.maps.items())}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
