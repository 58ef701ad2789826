"""Finite frames and the algebras built from them; builtin corpora; file round trips."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    algebra_from_dict,
    algebra_to_dict,
    direct_product,
    trivial_algebra,
    with_signature,
)
from .lang import BA, HA, KTB, S4, Ort, Signature

FRAME_KINDS = ("poset", "preorder", "reflexive_symmetric")
FAMILIES = ("heyting_chains", "poset_heyting", "boolean", "preorder_s4", "rs_ktb", "ortholattices")


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteFrame:
    kind: str
    size: int
    relation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.kind not in FRAME_KINDS:
            raise FrameError(f"unknown frame kind {self.kind!r}")
        rel = tuple(tuple(int(bool(x)) for x in row) for row in self.relation)
        object.__setattr__(self, "relation", rel)
        r = self.matrix
        if r.shape != (self.size, self.size):
            raise FrameError(f"relation must be {self.size}x{self.size}")
        if not r.diagonal().all():
            raise FrameError(f"{self.kind} relation is not reflexive")
        if self.kind in ("poset", "preorder"):
            if ((r.astype(int) @ r.astype(int) > 0) & ~r).any():
                raise FrameError(f"{self.kind} relation is not transitive")
        if self.kind == "poset" and (r & r.T & ~np.eye(self.size, dtype=bool)).any():
            raise FrameError("poset relation is not antisymmetric")
        if self.kind == "reflexive_symmetric" and (r != r.T).any():
            raise FrameError("reflexive_symmetric relation is not symmetric")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.relation, dtype=bool).reshape(self.size, self.size)

    def successors(self, x: int) -> list[int]:
        return [y for y in range(self.size) if self.relation[x][y]]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "size": self.size, "relation": [list(r) for r in self.relation]}

    @classmethod
    def from_dict(cls, d) -> "FiniteFrame":
        try:
            return cls(d["kind"], int(d["size"]), tuple(tuple(r) for r in d["relation"]))
        except (KeyError, TypeError) as exc:
            raise FrameError(f"malformed frame description: {exc}") from None


def frame_from_pairs(kind: str, size: int, pairs, close: bool = True) -> FiniteFrame:
    """Frame whose relation is the reflexive (and, for preorders/posets, transitive) closure of ``pairs``."""
    r = np.eye(size, dtype=bool)
    for x, y in pairs:
        r[x, y] = True
        if kind == "reflexive_symmetric":
            r[y, x] = True
    if close and kind in ("poset", "preorder"):
        for k in range(size):
            r |= r[:, [k]] & r[[k], :]
    return FiniteFrame(kind, size, tuple(tuple(int(v) for v in row) for row in r))


def _mask_label(mask: int, size: int, names=None) -> str:
    names = names or [str(i) for i in range(size)]
    return "{" + ",".join(names[i] for i in range(size) if mask >> i & 1) + "}"


def _box_table(frame: FiniteFrame) -> np.ndarray:
    n = frame.size
    succ = [sum(1 << y for y in frame.successors(x)) for x in range(n)]
    box = np.empty(1 << n, dtype=np.int64)
    for s in range(1 << n):
        box[s] = sum(1 << x for x in range(n) if succ[x] & ~s == 0)
    return box


def _powerset_tables(n: int) -> dict[str, np.ndarray]:
    m = np.arange(1 << n)
    full = (1 << n) - 1
    return {
        "bot": np.asarray(0),
        "top": np.asarray(full),
        "meet": m[:, None] & m[None, :],
        "join": m[:, None] | m[None, :],
        "imp": (full & ~m[:, None]) | m[None, :],
    }


def _world_names(frame: FiniteFrame) -> list[str]:
    return [f"w{i}" for i in range(frame.size)]


def upsets(frame: FiniteFrame) -> list[int]:
    """Up-closed subsets as bit masks, ascending."""
    succ = [sum(1 << y for y in frame.successors(x)) for x in range(frame.size)]
    return [s for s in range(1 << frame.size) if all(succ[x] & ~s == 0 for x in range(frame.size) if s >> x & 1)]


def upset_heyting_algebra(frame: FiniteFrame, name: str | None = None) -> FiniteAlgebra:
    if frame.kind != "poset":
        raise FrameError(f"upset algebra needs a poset, got {frame.kind}")
    ups = upsets(frame)
    pos = {u: i for i, u in enumerate(ups)}
    k = len(ups)
    meet = np.array([[pos[u & v] for v in ups] for u in ups], dtype=np.int64)
    join = np.array([[pos[u | v] for v in ups] for u in ups], dtype=np.int64)
    imp = np.empty((k, k), dtype=np.int64)
    for i, u in enumerate(ups):
        for j, v in enumerate(ups):
            # largest upset w with w & u <= v; upsets are closed under union so take the union
            w = 0
            for c in ups:
                if c & u & ~v == 0:
                    w |= c
            imp[i, j] = pos[w]
    tables = {"bot": np.asarray(pos[0]), "top": np.asarray(pos[(1 << frame.size) - 1]), "meet": meet, "join": join, "imp": imp}
    labels = tuple(_mask_label(u, frame.size, _world_names(frame)) for u in ups)
    return FiniteAlgebra(name or f"Up({_frame_code(frame)})", HA, k, tables, labels)


def preorder_s4_algebra(frame: FiniteFrame, name: str | None = None) -> FiniteAlgebra:
    if frame.kind not in ("preorder", "poset"):
        raise FrameError(f"S4 algebra needs a preorder, got {frame.kind}")
    return _modal_powerset(frame, S4, name or f"S4({_frame_code(frame)})")


def frame_ktb_algebra(frame: FiniteFrame, name: str | None = None) -> FiniteAlgebra:
    if frame.kind != "reflexive_symmetric":
        raise FrameError(f"KTB algebra needs a reflexive symmetric frame, got {frame.kind}")
    return _modal_powerset(frame, KTB, name or f"KTB({_frame_code(frame)})")


def _modal_powerset(frame: FiniteFrame, sig: Signature, name: str) -> FiniteAlgebra:
    tables = _powerset_tables(frame.size)
    tables["box"] = _box_table(frame)
    labels = tuple(_mask_label(s, frame.size, _world_names(frame)) for s in range(1 << frame.size))
    return FiniteAlgebra(name, sig, 1 << frame.size, tables, labels)


def boolean_algebra(k: int, sig: Signature = HA, name: str | None = None) -> FiniteAlgebra:
    """Powerset of k atoms, read in HA or BA (for 2^0 this is the trivial algebra)."""
    if k == 0:
        return trivial_algebra(sig)
    labels = tuple(_mask_label(s, k, [f"a{i}" for i in range(k)]) for s in range(1 << k))
    if k == 1:
        labels = ("0", "1")
    return FiniteAlgebra(name or f"B{1 << k}", sig, 1 << k, _powerset_tables(k), labels)


def heyting_chain(n: int) -> FiniteAlgebra:
    """The n-element chain 0 < a < b < ... < 1."""
    if n < 2:
        raise AlgebraError("chains have at least two elements")
    m = np.arange(n)
    imp = np.where(m[:, None] <= m[None, :], n - 1, m[None, :])
    tables = {
        "bot": np.asarray(0),
        "top": np.asarray(n - 1),
        "meet": np.minimum(m[:, None], m[None, :]),
        "join": np.maximum(m[:, None], m[None, :]),
        "imp": imp,
    }
    labels = ("0",) + tuple(chr(ord("a") + i) for i in range(n - 2)) + ("1",)
    return FiniteAlgebra(f"C{n}", HA, n, tables, labels)


def ortholattice_from_order(name: str, labels, leq_pairs, ortho) -> FiniteAlgebra:
    """Ortholattice from its covering order and complement map (lattice ops computed)."""
    n = len(labels)
    idx = {l: i for i, l in enumerate(labels)}
    r = np.eye(n, dtype=bool)
    for x, y in leq_pairs:
        r[idx[x], idx[y]] = True
    for k in range(n):
        r |= r[:, [k]] & r[[k], :]

    def bound(x, y, upper):
        common = [z for z in range(n) if (r[x, z] and r[y, z] if upper else r[z, x] and r[z, y])]
        best = [z for z in common if all((r[z, w] if upper else r[w, z]) for w in common)]
        if len(best) != 1:
            raise AlgebraError(f"{name}: order is not a lattice")
        return best[0]

    meet = np.array([[bound(x, y, False) for y in range(n)] for x in range(n)], dtype=np.int64)
    join = np.array([[bound(x, y, True) for y in range(n)] for x in range(n)], dtype=np.int64)
    bot = [z for z in range(n) if r[z].all()][0]
    top = [z for z in range(n) if r[:, z].all()][0]
    tables = {
        "bot": np.asarray(bot),
        "top": np.asarray(top),
        "meet": meet,
        "join": join,
        "ortho": np.array([idx[ortho[l]] for l in labels], dtype=np.int64),
    }
    return FiniteAlgebra(name, Ort, n, tables, tuple(labels))


def benzene_o6() -> FiniteAlgebra:
    labels = ("0", "a", "b", "b'", "a'", "1")
    order = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")]
    ortho = {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"}
    return ortholattice_from_order("O6", labels, order, ortho)


def mo2() -> FiniteAlgebra:
    labels = ("0", "a", "a'", "b", "b'", "1")
    order = [("0", x) for x in labels[1:5]] + [(x, "1") for x in labels[1:5]]
    ortho = {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"}
    return ortholattice_from_order("MO2", labels, order, ortho)


def boolean_ortholattice(k: int) -> FiniteAlgebra:
    if k == 0:
        return trivial_algebra(Ort)
    n = 1 << k
    m = np.arange(n)
    tables = {
        "bot": np.asarray(0),
        "top": np.asarray(n - 1),
        "meet": m[:, None] & m[None, :],
        "join": m[:, None] | m[None, :],
        "ortho": (n - 1) & ~m,
    }
    labels = ("0", "1") if k == 1 else tuple(_mask_label(s, k, [f"a{i}" for i in range(k)]) for s in range(n))
    return FiniteAlgebra(f"OB{n}", Ort, n, tables, labels)


# --- frame enumeration -----------------------------------------------------------


def _code(r: np.ndarray) -> tuple:
    return tuple(r.ravel().astype(int).tolist())


def _frame_code(frame: FiniteFrame) -> str:
    n = frame.size
    pairs = [f"{x}{y}" for x in range(n) for y in range(n) if x != y and frame.relation[x][y]]
    return f"{n}:" + ",".join(pairs) if pairs else f"{n}"


def canonical_relation(r: np.ndarray) -> tuple:
    """Lexicographically least adjacency code over all relabellings."""
    n = r.shape[0]
    return min(_code(r[np.ix_(p, p)]) for p in map(list, itertools.permutations(range(n))))


def _is_transitive(r: np.ndarray) -> bool:
    ri = r.astype(np.int64)
    return not ((ri @ ri > 0) & ~r).any()


@lru_cache(maxsize=None)
def _enumerate_relations(kind: str, n: int) -> tuple[tuple, ...]:
    """Canonical codes of all frames of one kind on exactly n points, sorted."""
    if n == 0:
        return ()
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    if kind == "poset":
        # every finite poset has a linear extension, so only x < y pairs are needed
        off = [(x, y) for x, y in off if x < y]
    elif kind == "reflexive_symmetric":
        off = [(x, y) for x, y in off if x < y]
    seen = set()
    for bits in itertools.product((0, 1), repeat=len(off)):
        r = np.eye(n, dtype=bool)
        for (x, y), b in zip(off, bits):
            if b:
                r[x, y] = True
                if kind == "reflexive_symmetric":
                    r[y, x] = True
        if kind in ("poset", "preorder") and not _is_transitive(r):
            continue
        seen.add(canonical_relation(r))
    return tuple(sorted(seen, key=lambda c: (sum(c), c)))


def enumerate_frames(kind: str, bound: int, min_size: int = 1) -> list[FiniteFrame]:
    """All frames of ``kind`` with min_size..bound points, one per isomorphism class."""
    if kind not in FRAME_KINDS:
        raise FrameError(f"unknown frame kind {kind!r}")
    out = []
    for n in range(min_size, bound + 1):
        for code in _enumerate_relations(kind, n):
            rows = tuple(tuple(code[i * n : (i + 1) * n]) for i in range(n))
            out.append(FiniteFrame(kind, n, rows))
    return out


# --- builtins --------------------------------------------------------------------


def builtin_corpus(family: str, bound: int) -> list[FiniteAlgebra]:
    if family == "heyting_chains":
        return [heyting_chain(n) for n in range(2, bound + 1)]
    if family == "poset_heyting":
        return [upset_heyting_algebra(f) for f in enumerate_frames("poset", bound)]
    if family == "boolean":
        out, k = [], 1
        while 1 << k <= bound:
            out.append(boolean_algebra(k))
            k += 1
        return out
    if family == "preorder_s4":
        return [preorder_s4_algebra(f) for f in enumerate_frames("preorder", bound)]
    if family == "rs_ktb":
        return [frame_ktb_algebra(f) for f in enumerate_frames("reflexive_symmetric", bound)]
    if family == "ortholattices":
        out, k = [], 1
        while 1 << k <= bound:
            out.append(boolean_ortholattice(k))
            k += 1
        if bound >= 6:
            out += [benzene_o6(), mo2()]
        return out
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def _chain_frame(n: int, kind: str) -> FiniteFrame:
    return frame_from_pairs(kind, n, [(i, i + 1) for i in range(n - 1)])


def _fork5() -> FiniteAlgebra:
    return upset_heyting_algebra(frame_from_pairs("poset", 3, [(0, 1), (0, 2)]), name="fork5")


_BUILTINS = {
    "trivial": lambda: trivial_algebra(HA),
    "B2": lambda: boolean_algebra(1, name="B2"),
    "H3": lambda: heyting_chain(3).renamed("H3"),
    "B4": lambda: boolean_algebra(2, name="B4"),
    "H2x2": lambda: boolean_algebra(2, name="H2x2"),
    "fork5": _fork5,
    "B2_BA": lambda: boolean_algebra(1, BA, name="B2_BA"),
    "B4_BA": lambda: boolean_algebra(2, BA, name="B4_BA"),
    "s4_point": lambda: preorder_s4_algebra(frame_from_pairs("preorder", 1, []), name="s4_point"),
    "s4_chain2": lambda: preorder_s4_algebra(_chain_frame(2, "preorder"), name="s4_chain2"),
    "s4_discrete2": lambda: preorder_s4_algebra(frame_from_pairs("preorder", 2, []), name="s4_discrete2"),
    "s4_cluster2": lambda: preorder_s4_algebra(frame_from_pairs("preorder", 2, [(0, 1), (1, 0)]), name="s4_cluster2"),
    "ktb_point": lambda: frame_ktb_algebra(frame_from_pairs("reflexive_symmetric", 1, []), name="ktb_point"),
    "K2": lambda: frame_ktb_algebra(frame_from_pairs("reflexive_symmetric", 2, [(0, 1)]), name="K2"),
    "ktb_discrete2": lambda: frame_ktb_algebra(frame_from_pairs("reflexive_symmetric", 2, []), name="ktb_discrete2"),
    "o6": benzene_o6,
    "mo2": mo2,
}

BUILTIN_NAMES = tuple(_BUILTINS)


@lru_cache(maxsize=None)
def builtin_algebra(name: str) -> FiniteAlgebra:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin algebra {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None


def resolve_algebra(spec: str) -> FiniteAlgebra:
    """Builtin name or path to an algebra file."""
    if spec in _BUILTINS:
        return builtin_algebra(spec)
    return load_algebra(spec)


def load_algebra(path) -> FiniteAlgebra:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise AlgebraError(f"no such algebra file: {path}") from None
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"malformed algebra file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise AlgebraError(f"malformed algebra file {path}: expected a JSON object")
    return algebra_from_dict(data)


def save_algebra(a: FiniteAlgebra, path) -> None:
    Path(path).write_text(json.dumps(algebra_to_dict(a), indent=1) + "\n", encoding="utf-8")


def load_frame(path) -> FiniteFrame:
    return FiniteFrame.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_frame(frame: FiniteFrame, path) -> None:
    Path(path).write_text(json.dumps(frame.to_dict()) + "\n", encoding="utf-8")


def product_of(algebras) -> FiniteAlgebra:
    out = algebras[0]
    for b in algebras[1:]:
        out = direct_product(out, b)
    return out


def as_boolean(a: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """A Boolean Heyting algebra re-read in the BA signature (excluded middle checked)."""
    return with_signature(a, BA, name)
