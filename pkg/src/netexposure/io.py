"""Market file parsing and serialisation.

Markets travel as JSON link lists (not adjacency matrices), mirroring the
netting-set formalism: participants, a class count, links with optional
realised weights, an optional netting convention, and an optional global
position distribution (positions are i.i.d., so one law per market).
Parsing and serialisation round-trip on the canonical form.
"""

import json
from dataclasses import dataclass
from pathlib import Path

from .charfn import (
    Distribution,
    Exponential,
    Gamma,
    LaplaceSym,
    NormalSym,
    UniformSym,
)
from .market import (
    Bilateral,
    Convention,
    Custom,
    Link,
    Market,
    Multilateral,
    require_valid,
)

__all__ = ["MarketFile", "ParseError", "parse_market", "parse_market_data",
           "serialize_market", "write_market", "dist_from_json",
           "dist_to_json", "report_to_json", "format_report", "write_report"]


class ParseError(ValueError):
    """Malformed market file; the message carries the JSON path."""


@dataclass(frozen=True)
class MarketFile:
    market: Market
    convention: Convention | None
    dist: Distribution | None


def _need(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ParseError(f"{where}.{key}: missing")
    value = obj[key]
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ParseError(f"{where}.{key}: expected {kind.__name__}, "
                         f"got {type(value).__name__}")
    return value


def dist_from_json(obj: dict, where: str = "dist") -> Distribution:
    kind = _need(obj, "type", str, where)
    try:
        if kind == "laplace":
            return LaplaceSym(scale=float(obj.get("scale", 1.0)))
        if kind == "normal":
            return NormalSym(sigma=float(obj.get("sigma", 1.0)))
        if kind == "uniform":
            return UniformSym(half_width=float(obj.get("half_width", 1.0)))
        if kind == "gamma":
            return Gamma(shape=_need(obj, "shape", float, where),
                         scale=_need(obj, "scale", float, where))
        if kind == "exponential":
            return Exponential(scale=float(obj.get("scale", 1.0)))
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}.type: unknown distribution {kind!r}")


def dist_to_json(dist: Distribution) -> dict:
    if isinstance(dist, LaplaceSym):
        return {"type": "laplace", "scale": dist.scale}
    if isinstance(dist, NormalSym):
        return {"type": "normal", "sigma": dist.sigma}
    if isinstance(dist, UniformSym):
        return {"type": "uniform", "half_width": dist.half_width}
    if isinstance(dist, Gamma):
        return {"type": "gamma", "shape": dist.shape, "scale": dist.scale}
    if isinstance(dist, Exponential):
        return {"type": "exponential", "scale": dist.scale}
    raise TypeError(f"unknown distribution spec: {dist!r}")


def _convention_from_json(obj: dict, where: str) -> Convention:
    kind = _need(obj, "type", str, where)
    if kind == "bilateral":
        return Bilateral()
    if kind == "multilateral":
        return Multilateral(cls=_need(obj, "class", int, where))
    if kind == "custom":
        sets = obj.get("sets")
        if not isinstance(sets, list):
            raise ParseError(f"{where}.sets: expected a list of blocks")
        blocks = []
        for i, block in enumerate(sets):
            owner = _need(block, "owner", str, f"{where}.sets[{i}]")
            links = _need(block, "links", list, f"{where}.sets[{i}]")
            blocks.append((owner, tuple(int(x) for x in links)))
        return Custom(sets=tuple(blocks))
    raise ParseError(f"{where}.type: unknown convention {kind!r}")


def _convention_to_json(conv: Convention) -> dict:
    if isinstance(conv, Bilateral):
        return {"type": "bilateral"}
    if isinstance(conv, Multilateral):
        return {"type": "multilateral", "class": conv.cls}
    if isinstance(conv, Custom):
        return {"type": "custom",
                "sets": [{"owner": owner, "links": list(block)}
                         for owner, block in conv.sets]}
    raise TypeError(f"unknown convention: {conv!r}")


def parse_market_data(data: dict) -> MarketFile:
    """Build a validated market from decoded JSON."""
    participants = _need(data, "participants", list, "$")
    for i, p in enumerate(participants):
        if not isinstance(p, str):
            raise ParseError(f"$.participants[{i}]: expected str")
    n_classes = _need(data, "classes", int, "$")
    raw_links = _need(data, "links", list, "$")
    links = []
    for i, obj in enumerate(raw_links):
        where = f"$.links[{i}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: expected an object")
        weight = obj.get("weight")
        if weight is not None and not isinstance(weight, (int, float)):
            raise ParseError(f"{where}.weight: expected number")
        links.append(Link(
            source=_need(obj, "from", str, where),
            target=_need(obj, "to", str, where),
            cls=_need(obj, "class", int, where),
            directed=bool(obj.get("directed", False)),
            weight=float(weight) if weight is not None else None,
        ))
    market = Market(
        participants=tuple(participants),
        n_classes=n_classes,
        links=tuple(links),
        directed=any(a.directed for a in links),
    )
    require_valid(market)
    convention = None
    if "convention" in data:
        convention = _convention_from_json(data["convention"], "$.convention")
    dist = None
    if "dist" in data:
        dist = dist_from_json(data["dist"], "$.dist")
    return MarketFile(market=market, convention=convention, dist=dist)


def parse_market(path: str | Path) -> MarketFile:
    """Parse and validate a market file."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return parse_market_data(data)


def serialize_market(mf: MarketFile) -> dict:
    """Canonical JSON form; parsing it back reproduces the input."""
    links = []
    for a in mf.market.links:
        obj = {"from": a.source, "to": a.target, "class": a.cls,
               "directed": a.directed}
        if a.weight is not None:
            obj["weight"] = a.weight
        links.append(obj)
    data = {
        "participants": list(mf.market.participants),
        "classes": mf.market.n_classes,
        "links": links,
    }
    if mf.convention is not None:
        data["convention"] = _convention_to_json(mf.convention)
    if mf.dist is not None:
        data["dist"] = dist_to_json(mf.dist)
    return data


def write_market(mf: MarketFile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(serialize_market(mf), indent=2) + "\n")


def report_to_json(report) -> dict:
    """ExposureReport as a JSON-ready dict, method provenance included."""
    return {
        "convention": report.convention,
        "market_total": report.market_total,
        "market_total_exact": (str(report.market_total_exact)
                               if report.market_total_exact is not None
                               else None),
        "per_participant": dict(sorted(report.per_participant.items())),
        "components": report.components,
        "pairs": {f"{a}~{b}": value
                  for (a, b), value in sorted(report.pair_view.items())},
        "netting_sets": [
            {
                "owner": e.owner,
                "kind": e.kind,
                "links": list(e.links),
                "expected_exposure": e.value,
                "method": e.method,
                "error_estimate": e.error,
                "exact": str(e.exact) if e.exact is not None else None,
            }
            for e in report.per_netting_set
        ],
    }


def format_report(report, fmt: str = "table") -> str:
    """Render an ExposureReport as JSON or a human-readable table."""
    if fmt == "json":
        return json.dumps(report_to_json(report), indent=2)
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"convention: {report.convention}"]
    header = (f"{'owner':<10} {'netting set':<22} {'links':<14} "
              f"{'exposure':>12} {'method':<12} {'error':>9}")
    lines.append(header)
    lines.append("-" * len(header))
    for e in report.per_netting_set:
        links = ",".join(str(i) for i in e.links)
        lines.append(f"{e.owner:<10} {e.kind:<22} {links:<14} "
                     f"{e.value:>12.8f} {e.method:<12} {e.error:>9.1e}")
    lines.append("-" * len(header))
    for v, total in sorted(report.per_participant.items()):
        lines.append(f"{v:<10} total {total:.8f}")
    for name, value in report.components.items():
        lines.append(f"component {name}: {value:.8f}")
    exact = (f" (= {report.market_total_exact})"
             if report.market_total_exact is not None else "")
    lines.append(f"market total: {report.market_total:.8f}{exact}")
    return "\n".join(lines)


def write_report(report, path: str | Path, fmt: str = "json") -> None:
    """Write a rendered report to disk."""
    Path(path).write_text(format_report(report, fmt) + "\n")
