"""Join-preserving endomaps of a finite orthomodular lattice.

The carrier of interest is the set of maps that possess an orthogonality
adjoint: f(x) perp y iff x perp g(y).  On a finite (hence complete) lattice
these are exactly the join-preserving endomaps; the adjoint is computed
through the order adjoint and verified exhaustively rather than assumed.
Together with composition, pointwise joins and the perp operation
f -> pi_{f(1)'} they form the quantale whose axioms ``verify_foulis``
checks on explicit carriers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import SizeExceeded
from .oml import Oml, OrthoIso, check_ortho_iso, sasaki_projection, validate_oml, _bits
from .report import ValidationReport

DEFAULT_LIN_CAP = 2_000_000


@dataclass(frozen=True)
class EndoMap:
    l: Oml
    tbl: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.tbl[x]

    def after(self, other: "EndoMap") -> "EndoMap":
        return EndoMap(self.l, tuple(self.tbl[other.tbl[x]] for x in self.l.elements()))

    def __repr__(self) -> str:
        return "EndoMap[" + " ".join(self.l.names[v] for v in self.tbl) + "]"


@dataclass(frozen=True)
class LinMap:
    """An endomap paired with its orthogonality adjoint."""

    base: EndoMap
    adj: EndoMap

    @property
    def l(self) -> Oml:
        return self.base.l

    def __call__(self, x: int) -> int:
        return self.base.tbl[x]

    def __repr__(self) -> str:
        return "Lin" + repr(self.base)[4:]


@dataclass(frozen=True)
class NotLinear:
    """Returned by orth_adjoint when the map has no adjoint; carries a witness."""

    reason: str
    witness: tuple


def identity_map(l: Oml) -> EndoMap:
    return EndoMap(l, tuple(l.elements()))


def zero_map(l: Oml) -> EndoMap:
    return EndoMap(l, (l.bot,) * l.n)


def sasaki_map(l: Oml, m: int) -> EndoMap:
    return EndoMap(l, tuple(sasaki_projection(l, m, x) for x in l.elements()))


def join_preservation_witness(f: EndoMap) -> tuple | None:
    """None when f preserves all (finite, hence all) joins; else a witness subset.

    On a finite lattice it is enough to check the empty join and all binary
    joins: any other join is a fold of binary ones.
    """
    l = f.l
    if f.tbl[l.bot] != l.bot:
        return ()
    for x in l.elements():
        for y in range(x + 1, l.n):
            if f.tbl[l.join[x][y]] != l.join[f.tbl[x]][f.tbl[y]]:
                return (x, y)
    return None


def order_adjoint(f: EndoMap) -> EndoMap:
    """The Galois right adjoint: f_adj(y) = join of {x : f(x) <= y}.

    Requires f join-preserving; raises otherwise with the witness subset.
    """
    w = join_preservation_witness(f)
    if w is not None:
        labels = tuple(f.l.names[x] for x in w)
        raise ValueError(f"map is not join-preserving; witness subset {labels}")
    l = f.l
    tbl = []
    for y in l.elements():
        acc = l.bot
        for x in l.elements():
            if l.leq(f.tbl[x], y):
                acc = l.join[acc][x]
        tbl.append(acc)
    return EndoMap(l, tuple(tbl))


def orth_adjoint(f: EndoMap) -> LinMap | NotLinear:
    """Compute and verify the orthogonality adjoint of f.

    The candidate is g(y) = (f_adj(y'))' and the defining biconditional
    f(x) perp y iff x perp g(y) is then checked over all pairs.
    """
    w = join_preservation_witness(f)
    if w is not None:
        return NotLinear("not join-preserving", w)
    l = f.l
    fadj = order_adjoint(f)
    g = EndoMap(l, tuple(l.perp[fadj.tbl[l.perp[y]]] for y in l.elements()))
    for x in l.elements():
        for y in l.elements():
            if l.leq(f.tbl[x], l.perp[y]) != l.leq(x, l.perp[g.tbl[y]]):
                return NotLinear("adjoint biconditional fails", (x, y))
    return LinMap(f, g)


def compose(f: LinMap, g: LinMap, debug: bool = False) -> LinMap:
    """f after g; the adjoint reverses: (f.g)* = g*.f*."""
    if f.l is not g.l and f.l.names != g.l.names:
        raise ValueError("lattice mismatch in composition")
    out = LinMap(f.base.after(g.base), g.adj.after(f.adj))
    if debug:
        check = orth_adjoint(out.base)
        assert isinstance(check, LinMap) and check.adj.tbl == out.adj.tbl
    return out


def pointwise_join(l: Oml, fs, debug: bool = False) -> LinMap:
    """The pointwise join of a family of LinMaps; the empty join is the zero map."""
    fs = list(fs)
    for f in fs:
        if f.l is not l and f.l.names != l.names:
            raise ValueError("lattice mismatch in pointwise join")
    tbl = []
    for x in l.elements():
        acc = l.bot
        for f in fs:
            acc = l.join[acc][f.base.tbl[x]]
        tbl.append(acc)
    res = orth_adjoint(EndoMap(l, tuple(tbl)))
    if not isinstance(res, LinMap):
        raise AssertionError(f"pointwise join left the carrier: {res}")
    if debug:
        assert join_preservation_witness(res.base) is None
    return res


def foulis_perp(f: LinMap) -> LinMap:
    """f -> pi at the orthocomplement of f(top)."""
    l = f.l
    m = l.perp[f.base.tbl[l.top]]
    base = sasaki_map(l, m)
    return LinMap(base, base)


def bracket(f: LinMap) -> LinMap:
    """The annihilator bracket: pi at the orthocomplement of f*(top)."""
    l = f.l
    m = l.perp[f.adj.tbl[l.top]]
    base = sasaki_map(l, m)
    return LinMap(base, base)


# ---------------------------------------------------------------------------
# enumeration


def join_irreducibles(l: Oml) -> list[int]:
    out = []
    for x in l.elements():
        strictly_below = (j for j in _bits(l.down[x] & ~(1 << x)))
        if l.join_all(strictly_below) != x:
            out.append(x)
    return out


def enumerate_lin(l: Oml, cap: int = DEFAULT_LIN_CAP) -> list[LinMap]:
    """Enumerate the full carrier of join-preserving endomaps.

    A join-preserving map is determined by a monotone assignment on the
    join-irreducible elements, extended by joins; each extension is checked
    for join preservation and run through orth_adjoint.  Aborts with
    SizeExceeded when the assignment space n^|JI| is beyond ``cap``.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    n = l.n
    ji = join_irreducibles(l)
    estimate = n ** len(ji)
    if estimate > cap:
        raise SizeExceeded(estimate, cap)

    out: list[LinMap] = []
    seen: set[tuple[int, ...]] = set()
    assignment: list[int] = []

    def extend_and_collect():
        tbl = []
        for x in l.elements():
            acc = l.bot
            for idx, j in enumerate(ji):
                if l.leq(j, x):
                    acc = l.join[acc][assignment[idx]]
            tbl.append(acc)
        f = EndoMap(l, tuple(tbl))
        if join_preservation_witness(f) is not None:
            return
        res = orth_adjoint(f)
        if isinstance(res, LinMap) and f.tbl not in seen:
            seen.add(f.tbl)
            out.append(res)

    def backtrack(idx: int):
        if idx == len(ji):
            extend_and_collect()
            return
        for v in l.elements():
            ok = all(
                not l.leq(ji[prev], ji[idx]) or l.leq(assignment[prev], v)
                for prev in range(idx)
            )
            if ok:
                assignment.append(v)
                backtrack(idx + 1)
                assignment.pop()

    backtrack(0)
    out.sort(key=lambda f: f.base.tbl)
    return out


def bruteforce_lin(l: Oml) -> list[LinMap]:
    """Oracle: search all n^n endomap pairs for the adjoint biconditional.

    Exponential; guarded to n <= 5.  Independent of the optimized path: it
    uses only the defining existential, no order adjoints, no irreducibles.
    """
    n = l.n
    if n > 5:
        raise ValueError("brute-force oracle is limited to n <= 5")
    all_tables = list(product(range(n), repeat=n))
    out = []
    for ft in all_tables:
        for gt in all_tables:
            if all(
                l.leq(ft[x], l.perp[y]) == l.leq(x, l.perp[gt[y]])
                for x in range(n)
                for y in range(n)
            ):
                out.append(LinMap(EndoMap(l, ft), EndoMap(l, gt)))
                break
    out.sort(key=lambda f: f.base.tbl)
    return out


# ---------------------------------------------------------------------------
# verification suites


def _tables(maps) -> dict[tuple[int, ...], int]:
    return {f.base.tbl: i for i, f in enumerate(maps)}


def verify_foulis(l: Oml, maps: list[LinMap]) -> ValidationReport:
    """Check the Foulis-quantale axioms on an explicit carrier of maps.

    The existential axiom and closure-sensitive identities are marked
    inconclusive when the carrier is not closed under the operations they
    quantify over.
    """
    r = ValidationReport(title=f"foulis quantale on {len(maps)} maps over {l.name}")
    idx = _tables(maps)
    e = identity_map(l)
    zero = zero_map(l)

    def closed() -> bool:
        if e.tbl not in idx or zero.tbl not in idx:
            return False
        for f in maps:
            if f.adj.tbl not in idx or foulis_perp(f).base.tbl not in idx:
                return False
        for f in maps:
            for g in maps:
                if f.base.after(g.base).tbl not in idx:
                    return False
        return True

    is_closed = closed()
    r.add(
        "carrier.closed",
        is_closed,
        detail="closed under composition, involution and perp"
        if is_closed
        else "carrier not closed: existential checks below are inconclusive",
    )

    w = None
    for s in maps:
        p = foulis_perp(s)
        if p.base.after(p.base).tbl != p.base.tbl or p.adj.tbl != p.base.tbl:
            w = repr(s)
            break
    r.add("FQ1_O1.self_adjoint_idempotent", w is None, w or "")

    e_lin = orth_adjoint(e)
    r.add("O2.unit_perp_is_zero", foulis_perp(e_lin).base.tbl == zero.tbl)

    name = "O3.perp_factorization"
    if not is_closed:
        r.add_inconclusive(name, detail="carrier not closed")
    else:
        w = None
        for s in maps:
            sperp = foulis_perp(s)
            for x in maps:
                annihilated = s.adj.after(x.base).tbl == zero.tbl
                factors = any(sperp.base.after(y.base).tbl == x.base.tbl for y in maps)
                if annihilated != factors:
                    w = f"s={s!r} x={x!r}"
                    break
            if w:
                break
        r.add(name, w is None, w or "")

    w = None
    for rr in maps:
        rp = foulis_perp(rr)
        for t in maps:
            ann = rr.adj.after(t.base).tbl == zero.tbl
            fixed = rp.base.after(t.base).tbl == t.base.tbl
            if ann != fixed:
                w = f"r={rr!r} t={t!r}"
                break
        if w:
            break
    r.add("star.annihilation_iff_below_perp", w is None, w or "",
          detail="t <= r-perp unfolds to the same fixed-point equation")

    w = None
    for t in maps:
        tp = foulis_perp(t)
        for rr in maps:
            rp = foulis_perp(rr)
            t_le_r = rr.base.after(t.base).tbl == t.base.tbl
            if t_le_r and tp.base.after(rp.base).tbl != rp.base.tbl:
                w = f"t={t!r} r={rr!r}"
                break
        if w:
            break
    r.add("star2.perp_antitone", w is None, w or "")

    w = None
    for s in maps:
        k = foulis_perp(s)
        if foulis_perp(foulis_perp(k)).base.tbl != k.base.tbl:
            w = repr(k)
            break
    r.add("star2.double_perp_fixes_tests", w is None, w or "")

    w = None
    for t in maps:
        tp = foulis_perp(t)
        for rr in maps:
            rp = foulis_perp(rr)
            lhs = rp.base.after(t.base).tbl == t.base.tbl
            rhs = tp.base.after(rr.base).tbl == rr.base.tbl
            if lhs != rhs:
                w = f"t={t!r} r={rr!r}"
                break
        if w:
            break
    r.add("star3.perp_exchange", w is None, w or "")

    zero_lin = orth_adjoint(zero)
    r.add(
        "lemma.item1_bounds",
        foulis_perp(zero_lin).base.tbl == e.tbl
        and foulis_perp(foulis_perp(e_lin)).base.tbl == e.tbl
        and foulis_perp(e_lin).base.tbl == zero.tbl
        and foulis_perp(foulis_perp(zero_lin)).base.tbl == zero.tbl,
    )

    w = None
    for x in maps:
        for y in maps:
            ypp = foulis_perp(foulis_perp(y))
            if foulis_perp(compose(x, ypp)).base.tbl != foulis_perp(compose(x, y)).base.tbl:
                w = f"x={x!r} y={y!r}"
                break
        if w:
            break
    r.add("lemma.item2_perp_absorbs_closure", w is None, w or "")

    w = None
    for x in maps:
        xpp = foulis_perp(foulis_perp(x))
        if foulis_perp(pointwise_join(l, [xpp])).base.tbl != foulis_perp(x).base.tbl:
            w = f"x={x!r}"
            break
    if w is None:
        for x in maps:
            for y in maps:
                lhs = foulis_perp(
                    pointwise_join(l, [foulis_perp(foulis_perp(x)), foulis_perp(foulis_perp(y))])
                )
                rhs = foulis_perp(pointwise_join(l, [x, y]))
                if lhs.base.tbl != rhs.base.tbl:
                    w = f"x={x!r} y={y!r}"
                    break
            if w:
                break
    r.add("lemma.item3_join_of_closures", w is None, w or "",
          detail="families: singletons and pairs")

    w = None
    for x in maps:
        xpp = foulis_perp(foulis_perp(x))
        xp = foulis_perp(x)
        for y in maps:
            lhs = foulis_perp(foulis_perp(compose(xpp, y)))
            inner = foulis_perp(pointwise_join(l, [xp, y]))
            rhs = foulis_perp(pointwise_join(l, [xp, inner]))
            if lhs.base.tbl != rhs.base.tbl:
                w = f"x={x!r} y={y!r}"
                break
        if w:
            break
    r.add("lemma.item4_sasaki_identity", w is None, w or "")

    return r


def verify_left_module_on_M(l: Oml, maps: list[LinMap]) -> ValidationReport:
    """Check that f . x = f(x) makes the lattice a left module over the maps."""
    r = ValidationReport(title=f"left module action on {l.name}")

    w = None
    for f in maps:
        if f.base.tbl[l.bot] != l.bot:
            w = f"{f!r} at empty join"
            break
        for x in l.elements():
            for y in l.elements():
                if f.base.tbl[l.join[x][y]] != l.join[f.base.tbl[x]][f.base.tbl[y]]:
                    w = f"{f!r} at {l.names[x]},{l.names[y]}"
                    break
            if w:
                break
        if w:
            break
    r.add("A1.action_preserves_joins_of_elements", w is None, w or "")

    w = None
    for f in maps:
        for g in maps:
            fg = pointwise_join(l, [f, g])
            for x in l.elements():
                if fg.base.tbl[x] != l.join[f.base.tbl[x]][g.base.tbl[x]]:
                    w = f"{f!r},{g!r} at {l.names[x]}"
                    break
            if w:
                break
        if w:
            break
    for x in l.elements():
        if w:
            break
        if pointwise_join(l, []).base.tbl[x] != l.bot:
            w = f"empty join at {l.names[x]}"
    r.add("A2.joins_of_maps_act_pointwise", w is None, w or "")

    w = None
    for f in maps:
        for g in maps:
            fg = compose(f, g)
            for x in l.elements():
                if fg.base.tbl[x] != f.base.tbl[g.base.tbl[x]]:
                    w = f"{f!r},{g!r} at {l.names[x]}"
                    break
            if w:
                break
        if w:
            break
    r.add("A3.composition_associates_with_action", w is None, w or "")

    ident = identity_map(l)
    w = next((x for x in l.elements() if ident.tbl[x] != x), None)
    r.add("A4.unit_acts_as_identity", w is None, "" if w is None else l.names[w])
    return r


# ---------------------------------------------------------------------------
# the test lattice inside the quantale


def sasaki_projection_lattice(l: Oml, maps: list[LinMap]) -> tuple[Oml, OrthoIso, ValidationReport]:
    """Extract the orthomodular lattice of perp-images from a carrier of maps.

    Order, orthocomplement, meet and join are computed from the quantale
    operations alone (k1 <= k2 iff k1 = k2.k1, perp via the bracket, meet by
    the bracket formula, join as the double perp of the pointwise join); the
    result is materialized as an Oml indexed by m = k(top), validated, and
    compared against the source lattice through pi_m -> m.
    """
    r = ValidationReport(title=f"sasaki projection lattice of Lin({l.name})")
    tests: dict[int, LinMap] = {}
    for f in maps:
        p = foulis_perp(f)
        tests[p.base.tbl[l.top]] = p
    r.add(
        "tests.one_per_element",
        sorted(tests) == list(l.elements()),
        detail=f"{len(tests)} perp-images",
    )
    if not r.ok:
        return l, OrthoIso(l, l, tuple(l.elements())), r

    def le(k1: LinMap, k2: LinMap) -> bool:
        return k2.base.after(k1.base).tbl == k1.base.tbl

    def dperp(k: LinMap) -> LinMap:
        return foulis_perp(foulis_perp(k))

    elems = [tests[m] for m in l.elements()]
    up = [0] * l.n
    down = [0] * l.n
    for i in l.elements():
        for j in l.elements():
            if le(elems[i], elems[j]):
                up[i] |= 1 << j
                down[j] |= 1 << i

    def as_index(k: LinMap) -> int:
        return k.base.tbl[l.top]

    meet_t = []
    join_t = []
    for i in l.elements():
        mr = []
        jr = []
        for j in l.elements():
            inner = bracket(compose(bracket(elems[j]), elems[i]))
            mr.append(as_index(dperp(compose(elems[i], inner))))
            jr.append(as_index(dperp(pointwise_join(l, [elems[i], elems[j]]))))
        meet_t.append(tuple(mr))
        join_t.append(tuple(jr))

    top_idx = as_index(foulis_perp(orth_adjoint(zero_map(l))))
    bot_idx = as_index(dperp(pointwise_join(l, [])))
    perp_t = tuple(as_index(bracket(k)) for k in elems)

    extracted = Oml(
        names=tuple(f"[{name}]" for name in l.names),
        up=tuple(up),
        down=tuple(down),
        meet=tuple(meet_t),
        join=tuple(join_t),
        perp=perp_t,
        bot=bot_idx,
        top=top_idx,
        name=f"tests(Lin({l.name}))",
    )
    r.extend(validate_oml(extracted), prefix="extracted.")
    iso = OrthoIso(l, extracted, tuple(l.elements()), name="pi")
    r.extend(check_ortho_iso(iso), prefix="iso_to_source.")
    return extracted, iso, r


def scan_nonmonotone(l: Oml) -> list[tuple[int, int, int]]:
    """Find (u, v, x) with u <= v but pi_u(x) not below pi_v(x); informative only."""
    found = []
    for u in l.elements():
        for v in l.elements():
            if u != v and l.leq(u, v):
                for x in l.elements():
                    if not l.leq(sasaki_projection(l, u, x), sasaki_projection(l, v, x)):
                        found.append((u, v, x))
    return found
