"""Strict JSON scenario files: parsing, validation, and fault combination.

A scenario is a single JSON object:

    {
      "mesh": [7, 8, 11],
      "faults": [{"type": "rect", "origin": [2, 2, 2], "extents": [2, 1, 3]}],
      "analysis": {"engine": "auto", "cross_check": "off", "precision": 3,
                   "obstacle": "blocked", "budget": 2e6},
      "mc": {"samples": 100000, "seed": 0, "workers": 1}
    }

"mesh" is required; the rest are optional with the defaults above. Fault
entries may be "rect" (origin + extents), "overlap" (a list of rects under
"blocks"), or "arbitrary" (explicit "nodes"). Unknown fields anywhere are
rejected, and every diagnostic names the offending location
("faults[0].extents" and the like) so errors in generated files are
traceable. Bounds are checked here, against the declared mesh, so a bad
block never reaches the analysis layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from faultring.faults import (
    ArbitraryFault,
    FaultComplex,
    FaultSpec,
    OverlapFault,
    RectFault,
    build_complex,
)
from faultring.mesh import MeshShape
from faultring.reliability import CrossCheck, EnginePolicy, Obstacle

ENGINES = ("det", "dp", "auto")
CROSS_CHECKS = ("off", "sample", "full")
OBSTACLES = ("blocked", "faults")


class ScenarioError(ValueError):
    """Parse or semantic failure, carrying the path of the offending field."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class AnalysisOptions:
    engine: EnginePolicy = "auto"
    cross_check: CrossCheck | None = None
    precision: int = 3
    obstacle: Obstacle = "blocked"
    budget: float = 2e6


@dataclass(frozen=True)
class McOptions:
    samples: int = 100_000
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class ScenarioConfig:
    shape: MeshShape
    faults: tuple[FaultSpec, ...] = ()
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)
    mc: McOptions = field(default_factory=McOptions)

    def combined_fault(self) -> FaultSpec | None:
        """Collapse the fault list into one specification.

        No entries: None. One entry: itself. Several rectangles: an overlap
        union. Anything mixed: the explicit union of all node sets.
        """
        if not self.faults:
            return None
        if len(self.faults) == 1:
            return self.faults[0]
        if all(isinstance(f, RectFault) for f in self.faults):
            return OverlapFault(tuple(self.faults))
        nodes: set = set()
        for spec in self.faults:
            if isinstance(spec, RectFault):
                nodes |= _rect_nodes(spec)
            elif isinstance(spec, OverlapFault):
                for rect in spec.rects:
                    nodes |= _rect_nodes(rect)
            else:
                nodes |= set(spec.nodes)
        return ArbitraryFault(frozenset(nodes))

    def build_complex(self) -> FaultComplex:
        return build_complex(self.shape, self.combined_fault())


def _rect_nodes(rect: RectFault) -> set:
    ranges = [range(o, o + e) for o, e in zip(rect.origin, rect.extents)]
    return set(product(*ranges))


def _require_keys(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ScenarioError(path, f"unknown field {key!r}")


def _int_list(value, path: str, minimum: int | None = None) -> list[int]:
    if not isinstance(value, list) or not value:
        raise ScenarioError(path, "expected a non-empty list of integers")
    out = []
    for i, x in enumerate(value):
        if isinstance(x, bool) or not isinstance(x, int):
            raise ScenarioError(f"{path}[{i}]", f"expected an integer, got {x!r}")
        if minimum is not None and x < minimum:
            raise ScenarioError(f"{path}[{i}]", f"expected an integer >= {minimum}, got {x}")
        out.append(x)
    return out


def _int_field(obj: dict, key: str, default: int, path: str, minimum: int) -> int:
    if key not in obj:
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{path}.{key}", f"expected an integer, got {value!r}")
    if value < minimum:
        raise ScenarioError(f"{path}.{key}", f"expected an integer >= {minimum}, got {value}")
    return value


def _choice_field(obj: dict, key: str, default: str, path: str, choices: tuple[str, ...]) -> str:
    if key not in obj:
        return default
    value = obj[key]
    if value not in choices:
        raise ScenarioError(
            f"{path}.{key}", f"expected one of {', '.join(choices)}, got {value!r}"
        )
    return value


def _check_rect_bounds(shape: MeshShape, origin: list[int], extents: list[int], path: str) -> None:
    if len(origin) != shape.n:
        raise ScenarioError(f"{path}.origin", f"expected {shape.n} coordinates, got {len(origin)}")
    if len(extents) != shape.n:
        raise ScenarioError(
            f"{path}.extents", f"expected {shape.n} extents, got {len(extents)}"
        )
    for i, (o, e, r) in enumerate(zip(origin, extents, shape.radices)):
        if o < 0 or o + e > r:
            raise ScenarioError(
                path, f"dimension {i}: block spans {o}..{o + e - 1} but mesh allows 0..{r - 1}"
            )


def _parse_rect(obj: dict, shape: MeshShape, path: str) -> RectFault:
    _require_keys(obj, ("type", "origin", "extents"), path)
    if "origin" not in obj:
        raise ScenarioError(path, "missing field 'origin'")
    if "extents" not in obj:
        raise ScenarioError(path, "missing field 'extents'")
    origin = _int_list(obj["origin"], f"{path}.origin", minimum=0)
    extents = _int_list(obj["extents"], f"{path}.extents", minimum=1)
    _check_rect_bounds(shape, origin, extents, path)
    return RectFault(tuple(origin), tuple(extents))


def _parse_fault(obj, shape: MeshShape, path: str) -> FaultSpec:
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    kind = obj.get("type")
    if kind == "rect":
        return _parse_rect(obj, shape, path)
    if kind == "overlap":
        _require_keys(obj, ("type", "blocks"), path)
        blocks = obj.get("blocks")
        if not isinstance(blocks, list) or not blocks:
            raise ScenarioError(f"{path}.blocks", "expected a non-empty list of rect blocks")
        rects = []
        for i, sub in enumerate(blocks):
            sub_path = f"{path}.blocks[{i}]"
            if not isinstance(sub, dict):
                raise ScenarioError(sub_path, "expected an object")
            body = dict(sub)
            body.setdefault("type", "rect")
            if body["type"] != "rect":
                raise ScenarioError(f"{sub_path}.type", "overlap blocks must be rects")
            rects.append(_parse_rect(body, shape, sub_path))
        return OverlapFault(tuple(rects))
    if kind == "arbitrary":
        _require_keys(obj, ("type", "nodes"), path)
        raw = obj.get("nodes")
        if not isinstance(raw, list) or not raw:
            raise ScenarioError(f"{path}.nodes", "expected a non-empty list of coordinates")
        nodes = set()
        for i, item in enumerate(raw):
            coord = _int_list(item, f"{path}.nodes[{i}]", minimum=0)
            if len(coord) != shape.n:
                raise ScenarioError(
                    f"{path}.nodes[{i}]",
                    f"expected {shape.n} coordinates, got {len(coord)}",
                )
            v = tuple(coord)
            if not shape.contains(v):
                raise ScenarioError(
                    f"{path}.nodes[{i}]", f"node {v} is outside the mesh"
                )
            nodes.add(v)
        return ArbitraryFault(frozenset(nodes))
    raise ScenarioError(
        f"{path}.type", f"expected one of rect, overlap, arbitrary, got {kind!r}"
    )


def _parse_analysis(obj, path: str) -> AnalysisOptions:
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    _require_keys(obj, ("engine", "cross_check", "precision", "obstacle", "budget"), path)
    engine = _choice_field(obj, "engine", "auto", path, ENGINES)
    cross = obj.get("cross_check")
    if cross is not None and cross not in CROSS_CHECKS:
        raise ScenarioError(
            f"{path}.cross_check", f"expected one of {', '.join(CROSS_CHECKS)}, got {cross!r}"
        )
    precision = _int_field(obj, "precision", 3, path, minimum=0)
    obstacle = _choice_field(obj, "obstacle", "blocked", path, OBSTACLES)
    budget = obj.get("budget", 2e6)
    if isinstance(budget, bool) or not isinstance(budget, (int, float)) or budget <= 0:
        raise ScenarioError(f"{path}.budget", f"expected a positive number, got {budget!r}")
    return AnalysisOptions(
        engine=engine, cross_check=cross, precision=precision,
        obstacle=obstacle, budget=float(budget),
    )


def _parse_mc(obj, path: str) -> McOptions:
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    _require_keys(obj, ("samples", "seed", "workers"), path)
    return McOptions(
        samples=_int_field(obj, "samples", 100_000, path, minimum=1),
        seed=_int_field(obj, "seed", 0, path, minimum=0),
        workers=_int_field(obj, "workers", 1, path, minimum=1),
    )


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse scenario JSON, rejecting unknown fields with positional errors."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    if not isinstance(raw, dict):
        raise ScenarioError("", "scenario must be a JSON object")
    _require_keys(raw, ("mesh", "faults", "analysis", "mc"), "scenario")
    if "mesh" not in raw:
        raise ScenarioError("scenario", "missing field 'mesh'")
    radices = _int_list(raw["mesh"], "mesh", minimum=2)
    shape = MeshShape(tuple(radices))

    faults: list[FaultSpec] = []
    if "faults" in raw:
        if not isinstance(raw["faults"], list):
            raise ScenarioError("faults", "expected a list of fault objects")
        for i, item in enumerate(raw["faults"]):
            faults.append(_parse_fault(item, shape, f"faults[{i}]"))

    analysis = _parse_analysis(raw["analysis"], "analysis") if "analysis" in raw else AnalysisOptions()
    mc = _parse_mc(raw["mc"], "mc") if "mc" in raw else McOptions()
    return ScenarioConfig(shape=shape, faults=tuple(faults), analysis=analysis, mc=mc)


def serialize_scenario(config: ScenarioConfig) -> str:
    """Inverse of parse_scenario, semantically lossless."""
    faults = []
    for spec in config.faults:
        if isinstance(spec, RectFault):
            faults.append(
                {"type": "rect", "origin": list(spec.origin), "extents": list(spec.extents)}
            )
        elif isinstance(spec, OverlapFault):
            faults.append(
                {
                    "type": "overlap",
                    "blocks": [
                        {"origin": list(r.origin), "extents": list(r.extents)}
                        for r in spec.rects
                    ],
                }
            )
        else:
            faults.append({"type": "arbitrary", "nodes": sorted(list(v) for v in spec.nodes)})
    payload = {
        "mesh": list(config.shape.radices),
        "faults": faults,
        "analysis": {
            "engine": config.analysis.engine,
            "precision": config.analysis.precision,
            "obstacle": config.analysis.obstacle,
            "budget": config.analysis.budget,
            **(
                {"cross_check": config.analysis.cross_check}
                if config.analysis.cross_check is not None
                else {}
            ),
        },
        "mc": {
            "samples": config.mc.samples,
            "seed": config.mc.seed,
            "workers": config.mc.workers,
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True)
