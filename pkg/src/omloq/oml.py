"""Finite orthomodular lattices: parsing, construction, validation, Sasaki maps.

Elements are identified by declaration index; labels are presentation only.
The order is stored as per-element bitmasks (``up[i]`` = indices above ``i``,
``down[i]`` = indices below), which keeps the greatest-lower-bound and
least-upper-bound scans cheap.  Meet/join tables are precomputed when the
lattice is built; a poset that is not a lattice is rejected at build time
with a witness pair.  Validation of the ortholattice axioms is a separate,
explicit step (``validate_oml``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import LatticeParseError
from .report import ValidationReport

MAX_ELEMENTS = 64


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Oml:
    """A finite bounded lattice with an orthocomplement map.

    The structure is immutable after construction and safe to share across
    concurrent verification tasks.  Axioms are not implied; run
    ``validate_oml`` to check them.
    """

    names: tuple[str, ...]
    up: tuple[int, ...]
    down: tuple[int, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    perp: tuple[int, ...]
    bot: int
    top: int
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.names)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def index(self, label: str) -> int:
        try:
            return self.names.index(label)
        except ValueError:
            raise KeyError(f"unknown element label {label!r}") from None

    def elements(self) -> range:
        return range(len(self.names))

    def join_all(self, xs) -> int:
        acc = self.bot
        for x in xs:
            acc = self.join[acc][x]
        return acc

    def meet_all(self, xs) -> int:
        acc = self.top
        for x in xs:
            acc = self.meet[acc][x]
        return acc

    def __repr__(self) -> str:
        return f"Oml({self.name or 'unnamed'}, n={self.n})"


def sasaki_projection(l: Oml, m: int, n: int) -> int:
    """pi_m(n): project n onto m.  The result is always below m."""
    return l.meet[m][l.join[l.perp[m]][n]]


def sasaki_hook(l: Oml, m: int, n: int) -> int:
    """The hook from m, the right order adjoint of pi_m."""
    return l.join[l.perp[m]][l.meet[m][n]]


# ---------------------------------------------------------------------------
# construction


def build_oml(
    names: list[str],
    leq_pairs: list[tuple[int, int]],
    perp_pairs: list[tuple[int, int]],
    name: str = "",
    max_elements: int = MAX_ELEMENTS,
) -> Oml:
    """Assemble an Oml from generating order relations and perp pairs.

    Takes the reflexive-transitive closure of ``leq_pairs``, rejects
    non-posets and non-lattices with witnesses, infers bottom and top,
    and precomputes the meet/join tables by glb/lub scans.  The perp of
    bottom/top is filled in automatically when not declared; any other
    element without a declared perp is an error.
    """
    n = len(names)
    if n == 0:
        raise LatticeParseError("no elements declared")
    if n > max_elements:
        raise LatticeParseError(f"{n} elements exceeds the supported maximum {max_elements}")

    up = [1 << i for i in range(n)]
    for a, b in leq_pairs:
        up[a] |= 1 << b
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in _bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True

    for i in range(n):
        for j in _bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise LatticeParseError(
                    f"order is not a partial order: {names[i]} <= {names[j]} <= {names[i]}"
                )

    down = [0] * n
    for i in range(n):
        for j in _bits(up[i]):
            down[j] |= 1 << i

    def bound(i, j, cone, fence):
        # glb when cone=down/fence=up, lub when cone=up/fence=down
        common = cone[i] & cone[j]
        for g in _bits(common):
            if common & ~cone[g] == 0:
                return g
        maximal = [names[g] for g in _bits(common) if fence[g] & common == 1 << g]
        kind = "lower" if cone is down else "upper"
        raise LatticeParseError(
            f"not a lattice: elements {names[i]}, {names[j]} have no greatest {kind} bound"
            f" (maximal common {kind} bounds: {maximal})"
        )

    meet = tuple(tuple(bound(i, j, down, up) for j in range(n)) for i in range(n))
    join = tuple(tuple(bound(i, j, up, down) for j in range(n)) for i in range(n))

    bot = 0
    top = 0
    for i in range(1, n):
        bot = meet[bot][i]
        top = join[top][i]

    perp = [-1] * n
    for a, b in perp_pairs:
        for x, y in ((a, b), (b, a)):
            if perp[x] not in (-1, y):
                raise LatticeParseError(
                    f"conflicting perp declarations for {names[x]}: "
                    f"{names[perp[x]]} and {names[y]}"
                )
            perp[x] = y
    if perp[bot] == -1 and perp[top] == -1:
        perp[bot] = top
        perp[top] = bot
    missing = [names[i] for i in range(n) if perp[i] == -1]
    if missing:
        raise LatticeParseError(f"perp is not a total map; missing: {missing}")

    return Oml(
        names=tuple(names),
        up=tuple(up),
        down=tuple(down),
        meet=meet,
        join=join,
        perp=tuple(perp),
        bot=bot,
        top=top,
        name=name,
    )


# ---------------------------------------------------------------------------
# parsing

_FORMAT_HELP = (
    "expected one of: 'name <string>', 'elements <label>+', "
    "'leq <a> <b>', 'perp <a> <b>', '# comment'"
)


def parse_lattice(text: str, max_elements: int = MAX_ELEMENTS) -> Oml:
    """Parse the line-oriented lattice format.

    Directives: ``name``, ``elements`` (order fixes indices; bottom and top
    are inferred, not positional), ``leq a b`` generating relations (the
    reflexive-transitive closure is taken), ``perp a b`` (symmetric).
    ``#`` starts a comment.
    """
    name = ""
    names: list[str] = []
    index: dict[str, int] = {}
    leq_pairs: list[tuple[int, int]] = []
    perp_pairs: list[tuple[int, int]] = []

    def resolve(label: str, lineno: int) -> int:
        if label not in index:
            raise LatticeParseError(f"undeclared element {label!r}", lineno)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]
        if directive == "name":
            if not args:
                raise LatticeParseError("name directive needs a value", lineno)
            name = " ".join(args)
        elif directive == "elements":
            if not args:
                raise LatticeParseError("elements directive needs at least one label", lineno)
            for label in args:
                if label in index:
                    raise LatticeParseError(f"duplicate element {label!r}", lineno)
                index[label] = len(names)
                names.append(label)
        elif directive == "leq":
            if len(args) != 2:
                raise LatticeParseError("leq takes exactly two labels", lineno)
            leq_pairs.append((resolve(args[0], lineno), resolve(args[1], lineno)))
        elif directive == "perp":
            if len(args) != 2:
                raise LatticeParseError("perp takes exactly two labels", lineno)
            perp_pairs.append((resolve(args[0], lineno), resolve(args[1], lineno)))
        else:
            raise LatticeParseError(f"unknown directive {directive!r}; {_FORMAT_HELP}", lineno)

    return build_oml(names, leq_pairs, perp_pairs, name=name, max_elements=max_elements)


def parse_lattice_json(text: str, max_elements: int = MAX_ELEMENTS) -> Oml:
    """Parse the JSON mirror: {name, elements, leq: [[a,b],...], perp: {a: b}}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LatticeParseError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise LatticeParseError("top-level JSON value must be an object")
    names = [str(x) for x in doc.get("elements", [])]
    index = {label: i for i, label in enumerate(names)}
    if len(index) != len(names):
        raise LatticeParseError("duplicate element labels")

    def resolve(label) -> int:
        label = str(label)
        if label not in index:
            raise LatticeParseError(f"undeclared element {label!r}")
        return index[label]

    leq_pairs = []
    for pair in doc.get("leq", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise LatticeParseError(f"leq entries must be pairs, got {pair!r}")
        leq_pairs.append((resolve(pair[0]), resolve(pair[1])))
    perp_pairs = [(resolve(a), resolve(b)) for a, b in doc.get("perp", {}).items()]
    return build_oml(
        names, leq_pairs, perp_pairs, name=str(doc.get("name", "")), max_elements=max_elements
    )


def load_lattice(path: str, max_elements: int = MAX_ELEMENTS) -> Oml:
    """Load a lattice file, dispatching on the .json extension."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return parse_lattice_json(text, max_elements=max_elements)
    return parse_lattice(text, max_elements=max_elements)


def format_lattice(l: Oml) -> str:
    """Serialize back to the line format (covering relations only)."""
    lines = []
    if l.name:
        lines.append(f"name {l.name}")
    lines.append("elements " + " ".join(l.names))
    for i in l.elements():
        strict_up = l.up[i] & ~(1 << i)
        for j in _bits(strict_up):
            between = l.up[i] & l.down[j] & ~(1 << i) & ~(1 << j)
            if between == 0:
                lines.append(f"leq {l.names[i]} {l.names[j]}")
    seen = set()
    for i in l.elements():
        if i not in seen:
            seen.add(l.perp[i])
            lines.append(f"perp {l.names[i]} {l.names[l.perp[i]]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


def validate_oml(l: Oml) -> ValidationReport:
    """Check every ortholattice/orthomodular axiom, with witnesses on failure."""
    r = ValidationReport(title=f"oml axioms: {l.name or 'unnamed'}")
    n = l.n
    names = l.names

    w = next((i for i in range(n) if not l.leq(i, i)), None)
    r.add("order.reflexive", w is None, "" if w is None else names[w])

    w = next(
        (
            (i, j)
            for i in range(n)
            for j in range(n)
            if i != j and l.leq(i, j) and l.leq(j, i)
        ),
        None,
    )
    r.add("order.antisymmetric", w is None, "" if w is None else f"{names[w[0]]},{names[w[1]]}")

    w = None
    for i in range(n):
        for j in _bits(l.up[i]):
            if l.up[j] & ~l.up[i]:
                w = (i, j, next(_bits(l.up[j] & ~l.up[i])))
                break
        if w:
            break
    r.add(
        "order.transitive",
        w is None,
        "" if w is None else f"{names[w[0]]}<={names[w[1]]}<={names[w[2]]}",
    )

    w = None
    for i in range(n):
        for j in range(n):
            g = l.meet[i][j]
            lower = l.down[i] & l.down[j]
            if not (lower >> g & 1 and lower & ~l.down[g] == 0):
                w = f"meet({names[i]},{names[j]})"
                break
            u = l.join[i][j]
            upper = l.up[i] & l.up[j]
            if not (upper >> u & 1 and upper & ~l.up[u] == 0):
                w = f"join({names[i]},{names[j]})"
                break
        if w:
            break
    r.add("lattice.glb_lub", w is None, w or "")

    w = next((i for i in range(n) if not (l.leq(l.bot, i) and l.leq(i, l.top))), None)
    r.add("bounds", w is None, "" if w is None else names[w])

    w = next(
        (
            i
            for i in range(n)
            if l.meet[i][l.perp[i]] != l.bot or l.join[i][l.perp[i]] != l.top
        ),
        None,
    )
    r.add("perp.complement", w is None, "" if w is None else names[w])

    w = next((i for i in range(n) if l.perp[l.perp[i]] != i), None)
    r.add("perp.involution", w is None, "" if w is None else names[w])

    w = next(
        (
            (i, j)
            for i in range(n)
            for j in range(n)
            if l.leq(i, j) and not l.leq(l.perp[j], l.perp[i])
        ),
        None,
    )
    r.add("perp.antitone", w is None, "" if w is None else f"{names[w[0]]}<={names[w[1]]}")

    w = next(
        (
            (i, j)
            for i in range(n)
            for j in range(n)
            if l.leq(i, j) and l.join[i][l.meet[l.perp[i]][j]] != j
        ),
        None,
    )
    r.add("orthomodular", w is None, "" if w is None else f"({names[w[0]]},{names[w[1]]})")

    return r


# ---------------------------------------------------------------------------
# catalog

CATALOG_NAMES = ("boolean", "mo", "chain2", "o6")
_ATOMS = "pqrstuvwxy"
_MO_ATOMS = "abcdefgh"


def catalog(name: str, k: int = 0) -> Oml:
    """Build a stock lattice.

    boolean(k), 0 <= k <= 10: the 2^k-element Boolean algebra.
    mo(k), 1 <= k <= 8: MOk, k incomparable complementary atom pairs plus bounds.
    chain2: the 2-element chain.
    o6: the hexagon, an ortholattice that deliberately fails orthomodularity.
    """
    if name == "boolean":
        if not 0 <= k <= 10:
            raise ValueError("boolean catalog parameter must be in 0..10")
        size = 1 << k
        labels = []
        for s in range(size):
            if s == 0:
                labels.append("0")
            elif s == size - 1 and k > 0:
                labels.append("1")
            else:
                labels.append("".join(_ATOMS[i] for i in range(k) if s >> i & 1))
        leq = [
            (a, b) for a in range(size) for b in range(size) if a != b and a & b == a
        ]
        perp = [(s, (size - 1) ^ s) for s in range(size)]
        return build_oml(labels, leq, perp, name=f"boolean({k})")

    if name == "mo":
        if not 1 <= k <= 8:
            raise ValueError("mo catalog parameter must be in 1..8")
        labels = ["0"]
        for i in range(k):
            labels += [_MO_ATOMS[i], _MO_ATOMS[i] + "'"]
        labels.append("1")
        top = len(labels) - 1
        leq = [(0, x) for x in range(1, top + 1)] + [(x, top) for x in range(1, top)]
        perp = [(0, top)] + [(2 * i + 1, 2 * i + 2) for i in range(k)]
        return build_oml(labels, leq, perp, name=f"mo({k})")

    if name == "chain2":
        return build_oml(["0", "1"], [(0, 1)], [(0, 1)], name="chain2")

    if name == "o6":
        # 0 < a < b < 1 and 0 < b' < a' < 1; the two chains meet only at the bounds
        labels = ["0", "a", "b", "b'", "a'", "1"]
        leq = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]
        perp = [(1, 4), (2, 3), (0, 5)]
        return build_oml(labels, leq, perp, name="o6")

    raise ValueError(f"unknown catalog name {name!r}; options: {CATALOG_NAMES}")


# ---------------------------------------------------------------------------
# ortholattice isomorphisms


@dataclass(frozen=True)
class OrthoIso:
    """A candidate ortholattice isomorphism, as an index table src -> dst."""

    src: Oml
    dst: Oml
    map: tuple[int, ...]
    name: str = ""

    def __call__(self, m: int) -> int:
        return self.map[m]

    def inverse(self) -> "OrthoIso":
        inv = [0] * len(self.map)
        for i, j in enumerate(self.map):
            inv[j] = i
        return OrthoIso(self.dst, self.src, tuple(inv), name=f"{self.name}^-1")

    def compose(self, other: "OrthoIso") -> "OrthoIso":
        """self after other (other first)."""
        if other.dst is not self.src and other.dst.names != self.src.names:
            raise ValueError("endpoint mismatch in composition")
        tbl = tuple(self.map[other.map[m]] for m in range(len(other.map)))
        return OrthoIso(other.src, self.dst, tbl, name=f"{self.name}*{other.name}")


def identity_iso(l: Oml) -> OrthoIso:
    return OrthoIso(l, l, tuple(range(l.n)), name="id")


def check_ortho_iso(g: OrthoIso) -> ValidationReport:
    """Verify bijectivity, both order directions, and perp preservation.

    Meet/join preservation is derived from those, but is re-checked and
    reported separately.
    """
    src, dst, tbl = g.src, g.dst, g.map
    if len(tbl) != src.n:
        raise ValueError(f"map table has {len(tbl)} entries for a {src.n}-element lattice")
    r = ValidationReport(title=f"ortho-iso {g.name or ''}".strip())

    ok = src.n == dst.n and sorted(tbl) == list(range(dst.n))
    r.add("bijective", ok)
    if not ok:
        return r

    w = next(
        (
            (m, x)
            for m in src.elements()
            for x in src.elements()
            if src.leq(m, x) != dst.leq(tbl[m], tbl[x])
        ),
        None,
    )
    r.add(
        "order.both_directions",
        w is None,
        "" if w is None else f"{src.names[w[0]]},{src.names[w[1]]}",
    )

    w = next((m for m in src.elements() if tbl[src.perp[m]] != dst.perp[tbl[m]]), None)
    r.add("perp.preserved", w is None, "" if w is None else src.names[w])

    w = next(
        (
            (m, x)
            for m in src.elements()
            for x in src.elements()
            if tbl[src.meet[m][x]] != dst.meet[tbl[m]][tbl[x]]
            or tbl[src.join[m][x]] != dst.join[tbl[m]][tbl[x]]
        ),
        None,
    )
    r.add(
        "meet_join.preserved",
        w is None,
        "" if w is None else f"{src.names[w[0]]},{src.names[w[1]]}",
        detail="derived from order + bijectivity",
    )
    return r


def enumerate_automorphisms(l: Oml) -> list[OrthoIso]:
    """Exhaustively find all ortho-automorphisms of a small lattice.

    Candidates are constrained to permute elements within (|down|, |up|,
    self-perp) signature classes, then filtered by the full check.
    """
    from itertools import permutations, product

    sig = {}
    for i in l.elements():
        key = (bin(l.down[i]).count("1"), bin(l.up[i]).count("1"), l.perp[i] == i)
        sig.setdefault(key, []).append(i)
    classes = sorted(sig.values())
    out = []
    for perm_choice in product(*[permutations(cls) for cls in classes]):
        tbl = [0] * l.n
        for cls, perm in zip(classes, perm_choice):
            for src_i, dst_i in zip(cls, perm):
                tbl[src_i] = dst_i
        cand = OrthoIso(l, l, tuple(tbl))
        if check_ortho_iso(cand).ok:
            out.append(cand)
    for i, iso in enumerate(out):
        object.__setattr__(iso, "name", f"aut{i}")
    return out
