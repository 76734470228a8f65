"""Market graphs: class-labelled links, netting partitions, degree queries,
and deterministic (realised-weight) risk measures.

A market holds N participants and K derivative classes; each link is the
netted bilateral position of one pair within one class, so there is at
most one link per (pair, class). Links may be directed (the target is the
creditor) or undirected (sign of a realised weight is read relative to the
link's source). Values are immutable after construction; every query here
is read-only.
"""

import itertools
from dataclasses import dataclass, replace
from typing import Iterator

__all__ = [
    "Link",
    "Market",
    "DegreeProfile",
    "NettingSet",
    "Bilateral",
    "Multilateral",
    "Custom",
    "MarketError",
    "validate_market",
    "require_valid",
    "degree_profile",
    "is_eulerian",
    "bilateral_partition",
    "multilateral_partition",
    "netting_sets",
    "enumerate_orientations",
    "current_bilateral_risk",
    "current_multilateral_risk",
    "MultilateralRisk",
    "ORIENTATION_CAP",
]

ORIENTATION_CAP = 20

SIGN_SYMMETRIC = 0  # netting-set item sign for undirected links


class MarketError(ValueError):
    """A market or partition failed validation."""


@dataclass(frozen=True)
class Link:
    """One netted bilateral position within a derivative class.

    For a directed link the source is the debtor and the target the
    creditor. For an undirected link the endpoint order only fixes how the
    sign of a realised weight is read: positive means the source claims.
    """

    source: str
    target: str
    cls: int
    directed: bool
    weight: float | None = None

    def other(self, vertex: str) -> str:
        return self.target if vertex == self.source else self.source

    def incident(self, vertex: str) -> bool:
        return vertex == self.source or vertex == self.target


@dataclass(frozen=True)
class Market:
    participants: tuple[str, ...]
    n_classes: int
    links: tuple[Link, ...]
    directed: bool = False

    def incident_links(self, vertex: str, cls: int | None = None
                       ) -> list[int]:
        return [i for i, a in enumerate(self.links)
                if a.incident(vertex) and (cls is None or a.cls == cls)]

    def neighbourhood(self, vertex: str, cls: int | None = None) -> list[str]:
        seen: dict[str, None] = {}
        for i in self.incident_links(vertex, cls):
            seen.setdefault(self.links[i].other(vertex))
        return list(seen)


@dataclass(frozen=True)
class DegreeProfile:
    in_degree: int
    out_degree: int

    @property
    def eulerian_degree(self) -> int:
        return self.in_degree - self.out_degree


@dataclass(frozen=True)
class NettingSet:
    """One block of a participant's netting partition.

    Items are (link index, sign) pairs with sign +1 when the owner is the
    creditor, -1 when the debtor, and 0 for undirected links.
    """

    owner: str
    items: tuple[tuple[int, int], ...]
    kind: str = ""

    @property
    def link_indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.items)


# Netting conventions ---------------------------------------------------------

@dataclass(frozen=True)
class Bilateral:
    """Net across all classes, per counterparty pair."""


@dataclass(frozen=True)
class Multilateral:
    """Clear one class through a central counterparty (netting across all
    of a participant's positions in that class); other classes stay
    bilateral."""

    cls: int


@dataclass(frozen=True)
class Custom:
    """Explicit partition: owner -> tuple of blocks of link indices."""

    sets: tuple[tuple[str, tuple[int, ...]], ...]


Convention = Bilateral | Multilateral | Custom


# Validation ------------------------------------------------------------------

def validate_market(m: Market) -> list[str]:
    """All invariant violations, empty when the market is well formed."""
    errors = []
    if len(m.participants) < 1:
        errors.append("market needs at least one participant")
    if len(set(m.participants)) != len(m.participants):
        errors.append("duplicate participant identifiers")
    known = set(m.participants)
    seen_pairs = set()
    for idx, a in enumerate(m.links):
        where = f"links[{idx}]"
        if a.source == a.target:
            errors.append(f"{where}: self-link at {a.source!r}")
        for v in (a.source, a.target):
            if v not in known:
                errors.append(f"{where}: unknown participant {v!r}")
        if not 1 <= a.cls <= m.n_classes:
            errors.append(f"{where}: unknown class {a.cls} "
                          f"(market has {m.n_classes})")
        key = (frozenset((a.source, a.target)), a.cls)
        if key in seen_pairs:
            errors.append(f"{where}: duplicate pair-class link "
                          f"{a.source}-{a.target} in class {a.cls}")
        seen_pairs.add(key)
        if a.directed and not m.directed:
            errors.append(f"{where}: directed link in an undirected market")
    return errors


def require_valid(m: Market) -> Market:
    errors = validate_market(m)
    if errors:
        raise MarketError("; ".join(errors))
    return m


# Degrees and orientations ----------------------------------------------------

def _class_links(m: Market, cls: int) -> list[tuple[int, Link]]:
    if not 1 <= cls <= m.n_classes:
        raise MarketError(f"unknown class {cls} (market has {m.n_classes})")
    return [(i, a) for i, a in enumerate(m.links) if a.cls == cls]


def degree_profile(m: Market, vertex: str, cls: int) -> DegreeProfile:
    """In/out degree of a vertex within one (fully directed) class."""
    ins = outs = 0
    for _, a in _class_links(m, cls):
        if not a.directed:
            raise MarketError(
                f"undirected links have no degree profile (class {cls})")
        if a.target == vertex:
            ins += 1
        elif a.source == vertex:
            outs += 1
    return DegreeProfile(ins, outs)


def is_eulerian(m: Market, cls: int) -> bool:
    """True when every vertex balances claims and debts in the class."""
    return all(degree_profile(m, v, cls).eulerian_degree == 0
               for v in m.participants)


def enumerate_orientations(m: Market, cls: int) -> Iterator[Market]:
    """All 2^m directed versions of a fully undirected class.

    Brute-force enumeration is a test oracle, not a production path, so
    the class size is capped at ORIENTATION_CAP links.
    """
    indexed = _class_links(m, cls)
    if any(a.directed for _, a in indexed):
        raise MarketError(f"class {cls} already contains directed links")
    if len(indexed) > ORIENTATION_CAP:
        raise MarketError(
            f"orientation space too large: {len(indexed)} links "
            f"(cap {ORIENTATION_CAP})")
    indices = [i for i, _ in indexed]
    for choice in itertools.product((False, True), repeat=len(indices)):
        links = list(m.links)
        for flip, i in zip(choice, indices):
            a = links[i]
            src, dst = (a.target, a.source) if flip else (a.source, a.target)
            links[i] = replace(a, source=src, target=dst, directed=True)
        yield replace(m, links=tuple(links), directed=True)


# Netting partitions ----------------------------------------------------------

def _sign_for(a: Link, owner: str) -> int:
    if not a.directed:
        return SIGN_SYMMETRIC
    return +1 if a.target == owner else -1


def bilateral_partition(m: Market) -> dict[str, list[NettingSet]]:
    """Per vertex, one netting set per counterparty, pooling all classes."""
    out: dict[str, list[NettingSet]] = {v: [] for v in m.participants}
    for v in m.participants:
        by_peer: dict[str, list[tuple[int, int]]] = {}
        for i in m.incident_links(v):
            a = m.links[i]
            by_peer.setdefault(a.other(v), []).append((i, _sign_for(a, v)))
        for peer, items in by_peer.items():
            out[v].append(NettingSet(owner=v, items=tuple(items),
                                     kind=f"bilateral:{peer}"))
    return out


def multilateral_partition(m: Market, cls: int) -> dict[str, NettingSet]:
    """Per vertex, the single netting set pooling its class-``cls`` links
    (empty for vertices absent from the class)."""
    _class_links(m, cls)  # class existence check
    out = {}
    for v in m.participants:
        items = tuple((i, _sign_for(m.links[i], v))
                      for i in m.incident_links(v, cls))
        out[v] = NettingSet(owner=v, items=items, kind=f"multilateral:{cls}")
    return out


def _bilateral_excluding(m: Market, skip_cls: int) -> dict[str, list[NettingSet]]:
    out: dict[str, list[NettingSet]] = {v: [] for v in m.participants}
    for v in m.participants:
        by_peer: dict[str, list[tuple[int, int]]] = {}
        for i in m.incident_links(v):
            a = m.links[i]
            if a.cls == skip_cls:
                continue
            by_peer.setdefault(a.other(v), []).append((i, _sign_for(a, v)))
        for peer, items in by_peer.items():
            out[v].append(NettingSet(owner=v, items=tuple(items),
                                     kind=f"bilateral:{peer}"))
    return out


def _validate_partition(m: Market, sets: dict[str, list[NettingSet]]) -> None:
    for v in m.participants:
        incident = set(m.incident_links(v))
        covered: list[int] = []
        for s in sets.get(v, []):
            if s.owner != v:
                raise MarketError(f"netting set owned by {s.owner!r} "
                                  f"listed under {v!r}")
            if not s.items:
                raise MarketError(f"empty netting set for {v!r}")
            for i, _ in s.items:
                if i not in incident:
                    raise MarketError(
                        f"link {i} in a netting set of {v!r} is not "
                        f"incident to it")
            covered.extend(s.link_indices)
        if len(covered) != len(set(covered)):
            raise MarketError(f"overlapping netting sets for {v!r}")
        if set(covered) != incident:
            missing = sorted(incident - set(covered))
            raise MarketError(f"netting sets of {v!r} do not cover links "
                              f"{missing}")


def netting_sets(m: Market, convention: Convention
                 ) -> dict[str, list[NettingSet]]:
    """Netting partition of every participant under a convention.

    The multilateral convention pools one class per vertex and keeps the
    remaining classes bilateral. Custom partitions are validated: blocks
    must be disjoint, non-empty, incident to their owner, and cover all of
    the owner's links.
    """
    if isinstance(convention, Bilateral):
        return bilateral_partition(m)
    if isinstance(convention, Multilateral):
        pooled = multilateral_partition(m, convention.cls)
        rest = _bilateral_excluding(m, convention.cls)
        out = {}
        for v in m.participants:
            sets = [pooled[v]] if pooled[v].items else []
            sets.extend(rest[v])
            out[v] = sets
        return out
    if isinstance(convention, Custom):
        out = {v: [] for v in m.participants}
        for owner, block in convention.sets:
            if owner not in out:
                raise MarketError(f"unknown participant {owner!r} "
                                  f"in custom partition")
            items = tuple((i, _sign_for(m.links[i], owner)) for i in block)
            out[owner].append(NettingSet(owner=owner, items=items,
                                         kind="custom"))
        _validate_partition(m, out)
        return out
    raise TypeError(f"unknown convention: {convention!r}")


# Deterministic risk measures -------------------------------------------------

def _require_weights(m: Market) -> None:
    for i, a in enumerate(m.links):
        if a.weight is None:
            raise MarketError(f"links[{i}] carries no realised weight")


def _pair_positions(m: Market, classes: set[int] | None = None
                    ) -> dict[tuple[str, str], float]:
    """Net realised position per unordered pair, signed towards the first
    (lexicographically smaller) vertex of the key."""
    pos: dict[tuple[str, str], float] = {}
    for a in m.links:
        if classes is not None and a.cls not in classes:
            continue
        credit = a.target if a.directed else a.source
        debit = a.source if a.directed else a.target
        key = (credit, debit) if credit < debit else (debit, credit)
        signed = a.weight if key[0] == credit else -a.weight
        pos[key] = pos.get(key, 0.0) + signed
    return pos


def current_bilateral_risk(m: Market) -> float:
    """Sum of positive netted pair positions over both perspectives.

    Claims of one side are the liabilities of the other, so each unordered
    pair contributes the absolute value of its net position.
    """
    _require_weights(m)
    return float(sum(abs(y) for y in _pair_positions(m).values()))


@dataclass(frozen=True)
class MultilateralRisk:
    class_measure: float  # sum over vertices of |net class position|
    combined: float       # class measure plus bilateral risk of the rest


def current_multilateral_risk(m: Market, cls: int) -> MultilateralRisk:
    """Centrally cleared measure of one class plus the bilateral rest.

    Every position appears twice in the class measure, once as a claim and
    once as a debt, so it equals twice the summed positive parts.
    """
    _require_weights(m)
    _class_links(m, cls)
    per_vertex = {v: 0.0 for v in m.participants}
    for a in m.links:
        if a.cls != cls:
            continue
        credit = a.target if a.directed else a.source
        debit = a.source if a.directed else a.target
        per_vertex[credit] += a.weight
        per_vertex[debit] -= a.weight
    class_measure = float(sum(abs(y) for y in per_vertex.values()))
    rest = float(sum(abs(y) for y in
                     _pair_positions(m, set(range(1, m.n_classes + 1))
                                     - {cls}).values()))
    return MultilateralRisk(class_measure=class_measure,
                            combined=class_measure + rest)
