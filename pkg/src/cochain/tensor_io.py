"""JSON round-tripping for tensors, cochain elements and metrics.

Tensor documents look like

    {"dim": 2, "rank": 2, "space": "K", "grade": 1,
     "entries": [{"index": [0, 1], "expr": "(* 2 x0)"}, ...]}

with omitted indices meaning zero entries.  `space` is "K", "G" or
"generic"; the grade is required for the two cochain families and must
match the rank.  Emission is canonical: entries sorted by index, scalars
in canonical s-expression form, so emit(parse(emit(x))) == emit(x).

Metric documents carry a family name, rational parameters as strings, and
profile/field expressions:

    {"name": "custom", "params": {},
     "f": "(^ H -2)", "g": "(^ H 2)",
     "H": "(+ 1 (/ 1 (sqrt (+ (^ x1 2) (^ x2 2) (^ x3 2)))))"}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .complexes import CochainElement, CochainSpace, is_member
from .errors import ExprSyntaxError, MembershipError, SchemaError
from .fields import Coord, ScalarField
from .sexpr import emit_scalar, parse_field
from .spacetime import BUILTIN_NAMES, DIM, IsotropicMetric, builtin_metric
from .tensors import Tensor

SPACE_GENERIC = "generic"


@dataclass(frozen=True)
class ParsedTensor:
    tensor: Tensor
    space: Optional[CochainSpace]

    def as_element(self) -> CochainElement:
        if self.space is None:
            raise SchemaError("document does not declare a cochain space")
        return CochainElement.wrap_trusted(self.space, self.tensor)


def _need(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise SchemaError(f"missing key {key!r}", path=path)
    value = obj[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise SchemaError(f"key {key!r} must be {kind.__name__}", path=f"{path}.{key}")
    return value


def parse_tensor(doc: Union[str, dict]) -> ParsedTensor:
    """Validate and load a tensor document; SchemaError pinpoints the path."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("tensor document must be a JSON object")
    dim = _need(doc, "dim", int, "$")
    rank = _need(doc, "rank", int, "$")
    if dim < 1:
        raise SchemaError("dim must be >= 1", path="$.dim")
    if rank < 0:
        raise SchemaError("rank must be >= 0", path="$.rank")
    space_name = doc.get("space", SPACE_GENERIC)
    space: Optional[CochainSpace] = None
    if space_name != SPACE_GENERIC:
        if space_name not in ("K", "G"):
            raise SchemaError("space must be K, G or generic", path="$.space")
        grade = _need(doc, "grade", int, "$")
        try:
            space = CochainSpace(space_name, dim, grade)
        except ValueError as exc:
            raise SchemaError(str(exc), path="$.grade") from exc
        if space.tensor_rank != rank:
            raise SchemaError(
                f"grade {grade} of {space_name} needs rank {space.tensor_rank}, "
                f"document says {rank}",
                path="$.rank",
            )
    entries_doc = doc.get("entries", [])
    if not isinstance(entries_doc, list):
        raise SchemaError("entries must be a list", path="$.entries")
    entries: dict[tuple, ScalarField] = {}
    for i, item in enumerate(entries_doc):
        path = f"$.entries[{i}]"
        if not isinstance(item, dict):
            raise SchemaError("entry must be an object", path=path)
        index = _need(item, "index", list, path)
        if len(index) != rank or not all(isinstance(v, int) for v in index):
            raise SchemaError(
                f"index must be {rank} integers", path=f"{path}.index"
            )
        idx = tuple(index)
        if any(not 0 <= v < dim for v in idx):
            raise SchemaError(
                f"index {list(idx)} out of range for dim {dim}",
                path=f"{path}.index",
            )
        if idx in entries:
            raise SchemaError(f"duplicate index {list(idx)}", path=f"{path}.index")
        text = _need(item, "expr", str, path)
        try:
            entries[idx] = parse_field(text, dim)
        except ExprSyntaxError as exc:
            raise SchemaError(
                f"bad expression: {exc}", path=f"{path}.expr"
            ) from exc
    tensor = Tensor(dim, rank, entries)
    if space is not None:
        membership = is_member(tensor, space)
        if not membership.ok:
            worst = membership.worst()
            raise MembershipError(
                f"tensor violates {worst.name} of {space} "
                f"(worst residual {worst.max_residual:g})",
                report=membership,
            )
    return ParsedTensor(tensor, space)


def emit_tensor(
    value: Union[Tensor, CochainElement],
    space: Optional[str] = None,
    grade: Optional[int] = None,
) -> dict:
    """Canonical document for a tensor or element (sorted, zero-free)."""
    if isinstance(value, CochainElement):
        space = value.space.kind
        grade = value.space.grade
        tensor = value.tensor
    else:
        tensor = value
    doc: dict = {"dim": tensor.dim, "rank": tensor.rank}
    doc["space"] = space if space is not None else SPACE_GENERIC
    if doc["space"] != SPACE_GENERIC:
        if grade is None:
            raise SchemaError("grade required when a space is declared")
        doc["grade"] = grade
    entries = []
    for idx in tensor.nonzero_indices():
        entries.append(
            {"index": list(idx), "expr": emit_scalar(tensor.get(idx))}
        )
    doc["entries"] = entries
    return doc


def dump_tensor(value, **kwargs) -> str:
    return json.dumps(emit_tensor(value, **kwargs), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Metric documents
# ---------------------------------------------------------------------------

PROFILE_NAMES = {"H": Coord(0)}


def parse_metric(doc: Union[str, dict]) -> IsotropicMetric:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("metric document must be a JSON object")
    name = _need(doc, "name", str, "$")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("params must be an object", path="$.params")
    rationals = {}
    for key, raw in params.items():
        try:
            rationals[key] = Fraction(str(raw))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(
                f"parameter {key!r} is not a rational", path=f"$.params.{key}"
            ) from exc

    def parse_H() -> ScalarField:
        text = _need(doc, "H", str, "$")
        try:
            return parse_field(text, DIM)
        except ExprSyntaxError as exc:
            raise SchemaError(f"bad expression: {exc}", path="$.H") from exc

    if name == "custom":
        profiles = {}
        for key in ("f", "g"):
            text = _need(doc, key, str, "$")
            try:
                profiles[key] = parse_field(text, 1, names=PROFILE_NAMES).expr
            except ExprSyntaxError as exc:
                raise SchemaError(
                    f"bad expression: {exc}", path=f"$.{key}"
                ) from exc
        return builtin_metric(
            "custom", f=profiles["f"], g=profiles["g"], H=parse_H()
        )
    if name not in BUILTIN_NAMES:
        raise SchemaError(f"unknown metric name {name!r}", path="$.name")
    kwargs = {}
    if "mass" in rationals:
        kwargs["mass"] = rationals["mass"]
    if "omega" in rationals:
        kwargs["omega"] = rationals["omega"]
    if "H" in doc:
        kwargs["H"] = parse_H()
    return builtin_metric(name, **kwargs)


def emit_metric(m: IsotropicMetric) -> dict:
    doc = {
        "name": m.name,
        "params": {k: str(v) for k, v in m.params},
        "f": emit_scalar(m.f_profile, coord_names={0: "H"}),
        "g": emit_scalar(m.g_profile, coord_names={0: "H"}),
    }
    # extreme_rn and schwarzschild derive H from their parameters and
    # reject overrides, so their documents stay parseable without it
    if m.name not in ("extreme_rn", "schwarzschild"):
        doc["H"] = emit_scalar(m.H)
    return doc
