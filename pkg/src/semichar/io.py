"""JSON group files and report rendering.

A group file is a JSON object with ``"version": 1`` and one of

* ``"mul"``: the multiplication table over 0-based indices, flat row-major or
  as a list of rows, with optional ``"order"`` and ``"labels"``;
* ``"perm"``: generators in 1-based cycle notation, optional ``"degree"``;
* ``"matrix"``: ``{"p", "e", "modulus"?, "generators"}`` where each generator is
  a list of rows and each entry is an int in [0, p) or a coefficient vector
  over GF(p), low degree first.

Export always writes the table form in a fixed layout, so parsing an export
and exporting again reproduces the same bytes.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .algebra.fields import FiniteField, field_make
from .algebra.matrices import MatrixFq
from .algebra.perms import perm_parse
from .config import DEFAULT_LIMITS, CapExceeded, Limits
from .engine import ConjectureVerdict, conjecture_check, factored
from .families import RealizedGroup, closure_from_generators
from .groups import GroupAxiomError, GroupTable

FORMAT_VERSION = 1


class GroupFileError(ValueError):
    """Malformed group file; the message carries path, line and column."""


def _location(text: str, needle: str) -> tuple[int, int]:
    pos = text.find(needle)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _fail(path, text: str, key: str | None, msg: str):
    line, col = _location(text, f'"{key}"') if key else (1, 1)
    raise GroupFileError(f"{path}:{line}:{col}: {msg}")


def _entry(F: FiniteField, x) -> int:
    if isinstance(x, int):
        if not 0 <= x < F.p:
            raise ValueError(f"entry {x} outside [0, {F.p})")
        return x
    if isinstance(x, list) and len(x) <= F.e and all(isinstance(c, int) and 0 <= c < F.p for c in x):
        return F.from_coeffs(x)
    raise ValueError(f"bad field entry {x!r}")


def parse_group_text(text: str, path: str = "<string>", limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise GroupFileError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    if not isinstance(data, dict):
        _fail(path, text, None, "top level must be a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        _fail(path, text, "version", f"unsupported format version {version!r}")
    kinds = [k for k in ("mul", "perm", "matrix") if k in data]
    if len(kinds) != 1:
        _fail(path, text, None, "expected exactly one of 'mul', 'perm', 'matrix'")
    kind = kinds[0]
    name = data.get("name", Path(path).stem if path != "<string>" else "file")

    if kind == "mul":
        mul = data["mul"]
        try:
            arr = np.array(mul, dtype=np.int64)
        except (ValueError, TypeError):
            _fail(path, text, "mul", "'mul' must be a list of integers or a list of equal-length rows")
        if arr.ndim not in (1, 2):
            _fail(path, text, "mul", "'mul' must be flat or a list of rows")
        n = data.get("order")
        if n is None:
            n = arr.shape[0] if arr.ndim == 2 else int(round(len(arr) ** 0.5))
        if not isinstance(n, int) or arr.size != n * n:
            _fail(path, text, "mul", f"'mul' has {arr.size} entries, expected order^2 = {n}^2")
        labels = data.get("labels")
        if labels is not None and (len(labels) != n or not all(isinstance(s, str) for s in labels)):
            _fail(path, text, "labels", f"'labels' must be {n} strings")
        try:
            table = GroupTable.from_table(arr.reshape(n, n), labels, limits=limits)
        except GroupAxiomError as err:
            _fail(path, text, "mul", f"not a group: {err}")
        return RealizedGroup(table, "abstract", name=name, params={"file": path})

    if kind == "perm":
        gens = data["perm"]
        if not isinstance(gens, list) or not gens or not all(isinstance(g, str) for g in gens):
            _fail(path, text, "perm", "'perm' must be a non-empty list of cycle strings")
        degree = data.get("degree")
        try:
            if degree is None:
                degree = max(perm_parse(g).degree for g in gens)
            perms = [perm_parse(g, degree) for g in gens]
        except ValueError as err:
            _fail(path, text, "perm", str(err))
        return closure_from_generators(perms, limits, name=name)

    mdef = data["matrix"]
    try:
        p, e = int(mdef["p"]), int(mdef.get("e", 1))
        F = FiniteField(p, e, mdef["modulus"]) if "modulus" in mdef else field_make(p, e)
        mats = []
        for g in mdef["generators"]:
            mats.append(MatrixFq.from_rows(F, [[_entry(F, x) for x in row] for row in g]))
    except (KeyError, TypeError, ValueError) as err:
        _fail(path, text, "matrix", f"bad matrix specification: {err}")
    return closure_from_generators(mats, limits, name=name)


def parse_group_file(path, limits: Limits = DEFAULT_LIMITS) -> RealizedGroup:
    path = Path(path)
    return parse_group_text(path.read_text(), str(path), limits)


def export_group_text(G, limits: Limits = DEFAULT_LIMITS) -> str:
    T = G if isinstance(G, GroupTable) else G.table
    if T.order > limits.export_max:
        raise CapExceeded(f"table export refused for order {T.order} > {limits.export_max}; "
                          "write a generator file ('perm' or 'matrix') instead")
    labels = [T.label(g) for g in range(T.order)]
    lines = ["{", f'  "version": {FORMAT_VERSION},', f'  "order": {T.order},',
             f'  "labels": {json.dumps(labels)},', '  "mul": [']
    rows = [json.dumps([int(x) for x in row]) for row in T.mul]
    lines += [f"    {r}," for r in rows[:-1]] + [f"    {rows[-1]}", "  ]", "}"]
    return "\n".join(lines) + "\n"


def export_group_file(G, path, limits: Limits = DEFAULT_LIMITS) -> None:
    Path(path).write_text(export_group_text(G, limits))


# reports


@dataclass
class RunReport:
    group: str
    order: int
    semichar_order: int
    semichar_factored: dict[int, int]
    invariant_factors: list[int]
    valuations: dict[int, tuple[int, int]]  # l -> (val |G^|, val |G|)
    holds: bool
    constructions: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @classmethod
    def from_verdict(cls, name: str, v: ConjectureVerdict, seconds: float) -> "RunReport":
        return cls(name, v.group_order, v.semichar_order, factored(v.semichar_order),
                   list(v.invariant_factors), dict(v.valuations), v.holds, seconds=seconds)

    def to_json(self) -> dict:
        d = asdict(self)
        d["semichar_factored"] = {str(k): v for k, v in self.semichar_factored.items()}
        d["valuations"] = {str(k): list(v) for k, v in self.valuations.items()}
        d["semichar_order"] = str(self.semichar_order)
        d["seconds"] = round(self.seconds, 3)
        return d

    def render(self) -> str:
        fac = " * ".join(f"{l}^{a}" for l, a in self.semichar_factored.items()) or "1"
        out = [f"group {self.group}", f"  |G|  = {self.order}",
               f"  |G^| = {self.semichar_order} = {fac}",
               f"  invariant factors {self.invariant_factors}",
               "  l   val(|G^|)  val(|G|)"]
        for l, (a, b) in self.valuations.items():
            out.append(f"  {l:<3} {a:>9}  {b:>8}")
        for c in self.constructions:
            out.append(f"  construction {c['label']} l={c['prime']}: certified {c['certified']}, "
                       f"claimed {c['claimed']}, exact {c['exact']}")
        out.append(f"  verdict: {'|G| divides |G^|' if self.holds else 'VIOLATION: |G| does not divide |G^|'}")
        out.append(f"  time {self.seconds:.2f}s")
        return "\n".join(out)


def run_report(G, limits: Limits = DEFAULT_LIMITS) -> RunReport:
    t = time.perf_counter()
    v = conjecture_check(G, limits)
    return RunReport.from_verdict(getattr(G, "name", "") or "G", v, time.perf_counter() - t)
