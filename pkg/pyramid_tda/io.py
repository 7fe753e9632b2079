"""JSON file formats for complexes and barcodes.

A complex file::

    {"vertices": [{"id": 0, "value": -1.0, "coordinates": [0.0, 1.0]}, ...],
     "simplices": [[0, 1], [1, 2], ...],
     "zigzag": {"spaces": [[[0]], [[0, 1]], ...], "arrows": ["forward", ...]}}

A barcode file::

    {"flavor": "lzz", "criticalValues": [-1.0, 1.0],
     "entries": [{"degree": 0, "lo": -1.0, "hi": 1.0, "loClosed": true,
                  "hiClosed": true, "mult": 1}, ...]}

Extended entries add "type" (Ord, Rel, ExtPlus, ExtMinus) and the critical
indices "i" and "j"; block entries carry the block kind and strip entries
the face in "type". Infinite endpoints are written as "inf" and "-inf".
"""
from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Annotated, Literal, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, ValidationError
from pydantic.alias_generators import to_camel

from .blocks import Block, BlockBarcode, BlockKind
from .complex import SimplicialComplex, VertexFunction, build_complex
from .errors import DuplicateVertexInSimplex, ParseError, UnknownVertex
from .persistence import EPInterval, EPType, Flavor, GradedBarcode, Interval, ZigzagDiagram, critical_value
from .quiver import Arrow
from .strip import Face, StripDiagram, StripPoint

logger = logging.getLogger(__name__)


def _parse_endpoint(value):
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf"):
            return math.inf
        if text == "-inf":
            return -math.inf
        raise ValueError(f"endpoint {value!r} is neither a number nor 'inf'/'-inf'")
    return value


def _dump_endpoint(value: float) -> Union[float, str]:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


Endpoint = Annotated[float, BeforeValidator(_parse_endpoint), PlainSerializer(_dump_endpoint)]


class VertexModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: int
    value: float | None = Field(default=None, description="function value at the vertex")
    coordinates: list[float] | None = Field(default=None, description="embedding used by projections")


class ZigzagModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    spaces: list[list[list[int]]] = Field(description="each space as a list of simplices")
    arrows: list[Arrow] = Field(description="orientation of the inclusion between consecutive spaces")


class ComplexFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: list[VertexModel] = Field(default_factory=list)
    simplices: list[list[int]] = Field(default_factory=list)
    zigzag: ZigzagModel | None = None


class EntryModel(BaseModel):
    model_config = ConfigDict(extra="forbid", alias_generator=to_camel, populate_by_name=True)

    degree: int
    lo: Endpoint
    hi: Endpoint
    lo_closed: bool = True
    hi_closed: bool = True
    type: str | None = None
    i: int | None = None
    j: int | None = None
    mult: int = Field(default=1, ge=1)


class BarcodeFile(BaseModel):
    model_config = ConfigDict(extra="forbid", alias_generator=to_camel, populate_by_name=True)

    flavor: Literal["ordinary", "extended", "lzz", "zigzag", "blocks", "strip"]
    critical_values: list[Endpoint] = Field(default_factory=list)
    entries: list[EntryModel] = Field(default_factory=list)


AnyBarcode = Union[GradedBarcode, BlockBarcode, StripDiagram]


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def _validate(model: type[BaseModel], text: str):
    data = _load_json(text)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"{model.__name__}: {where}: {first['msg']}") from None


def parse_complex_file(text: str) -> ComplexFile:
    return _validate(ComplexFile, text)


def parse_barcode_file(text: str) -> BarcodeFile:
    return _validate(BarcodeFile, text)


def dump_model(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json", by_alias=True, exclude_none=True), indent=2) + "\n"


@dataclass(frozen=True)
class LoadedComplex:
    complex: SimplicialComplex
    function: VertexFunction
    coordinates: dict[int, tuple[float, ...]] | None
    zigzag: ZigzagDiagram | None = None


def complex_from_file(cf: ComplexFile) -> LoadedComplex:
    ids = [v.id for v in cf.vertices]
    if len(set(ids)) != len(ids):
        dup = sorted(k for k, n in Counter(ids).items() if n > 1)
        raise ParseError(f"vertex ids {dup} are declared more than once")
    known = set(ids)
    for s in cf.simplices:
        unknown = [v for v in s if v not in known]
        if unknown:
            raise UnknownVertex(f"simplex {s} uses undeclared vertices {unknown}")
        if len(set(s)) != len(s):
            raise DuplicateVertexInSimplex(f"simplex {s} repeats a vertex")
    K = build_complex([*cf.simplices, *([v] for v in ids)]) if ids else SimplicialComplex.empty()
    f = VertexFunction({v.id: v.value for v in cf.vertices if v.value is not None})
    coords = None
    if cf.vertices and all(v.coordinates is not None for v in cf.vertices):
        coords = {v.id: tuple(v.coordinates) for v in cf.vertices}
    zigzag = None
    if cf.zigzag is not None:
        spaces = [build_complex(space) if space else SimplicialComplex.empty() for space in cf.zigzag.spaces]
        zigzag = ZigzagDiagram.of(spaces, cf.zigzag.arrows)
    logger.debug("loaded complex with %d simplices", len(K))
    return LoadedComplex(K, f, coords, zigzag)


def load_complex(text: str) -> LoadedComplex:
    return complex_from_file(parse_complex_file(text))


_EP_CLOSURE = {
    EPType.ORD: (True, False),
    EPType.REL: (False, True),
    EPType.EXT_PLUS: (True, True),
    EPType.EXT_MINUS: (False, False),
}
_BLOCK_CLOSURE = {
    BlockKind.C: (True, True),
    BlockKind.CO: (True, False),
    BlockKind.OC: (False, True),
    BlockKind.O: (False, False),
}
_FACE_CLOSURE = {Face.S: (True, True), Face.W: (True, False), Face.E: (False, True), Face.N: (False, False)}


def barcode_to_file(bc: AnyBarcode) -> BarcodeFile:
    entries = []
    if isinstance(bc, BlockBarcode):
        for degree, blk, k in bc:
            lc, hc = _BLOCK_CLOSURE[blk.kind]
            entries.append(EntryModel(degree=degree, lo=blk.a, hi=blk.b, lo_closed=lc, hi_closed=hc, type=blk.kind.value, mult=k))
        return BarcodeFile(flavor="blocks", critical_values=list(bc.critical_values), entries=entries)
    if isinstance(bc, StripDiagram):
        for m, k in bc:
            lc, hc = _FACE_CLOSURE[m.face]
            entries.append(EntryModel(degree=m.degree, lo=m.a, hi=m.b, lo_closed=lc, hi_closed=hc, type=m.face.value, mult=k))
        return BarcodeFile(flavor="strip", critical_values=list(bc.critical_values), entries=entries)
    cv = bc.critical_values
    for degree, iv, k in bc:
        if isinstance(iv, EPInterval):
            lc, hc = _EP_CLOSURE[iv.type]
            entries.append(
                EntryModel(
                    degree=degree,
                    lo=critical_value(cv, iv.i),
                    hi=critical_value(cv, iv.j),
                    lo_closed=lc,
                    hi_closed=hc,
                    type=iv.type.value,
                    i=iv.i,
                    j=iv.j,
                    mult=k,
                )
            )
        else:
            entries.append(EntryModel(degree=degree, lo=iv.lo, hi=iv.hi, lo_closed=iv.lo_closed, hi_closed=iv.hi_closed, mult=k))
    return BarcodeFile(flavor=bc.flavor.value, critical_values=list(cv), entries=entries)


def barcode_from_file(bf: BarcodeFile) -> AnyBarcode:
    cv = tuple(bf.critical_values)
    if bf.flavor in ("blocks", "strip"):
        found: Counter = Counter()
        for e in bf.entries:
            try:
                if bf.flavor == "blocks":
                    found[(e.degree, Block(BlockKind(e.type), e.lo, e.hi))] += e.mult
                else:
                    found[StripPoint(e.degree, Face(e.type), e.lo, e.hi)] += e.mult
            except ValueError:
                raise ParseError(f"unknown {bf.flavor} entry type {e.type!r}") from None
        return BlockBarcode.build(found, cv) if bf.flavor == "blocks" else StripDiagram.build(found, cv)
    flavor = Flavor(bf.flavor)
    items: Counter = Counter()
    for e in bf.entries:
        if flavor is Flavor.EXTENDED:
            if e.type is None or e.i is None or e.j is None:
                raise ParseError("extended entries need 'type', 'i' and 'j'")
            try:
                ep_type = EPType(e.type)
            except ValueError:
                raise ParseError(f"unknown extended type {e.type!r}") from None
            items[(e.degree, EPInterval(ep_type, e.i, e.j))] += e.mult
        else:
            items[(e.degree, Interval(e.lo, e.hi, e.lo_closed, e.hi_closed))] += e.mult
    return GradedBarcode.build(flavor, items, cv)


def load_barcode(text: str) -> AnyBarcode:
    return barcode_from_file(parse_barcode_file(text))


def dump_barcode(bc: AnyBarcode) -> str:
    return dump_model(barcode_to_file(bc))


def flavor_of(bc: AnyBarcode) -> str:
    if isinstance(bc, BlockBarcode):
        return "blocks"
    if isinstance(bc, StripDiagram):
        return "strip"
    return bc.flavor.value
