"""The powerset dynamic algebra over a generated test monoid.

Elements are finite sets of monoid ids with setwise product, setwise
involution, and the orthocomplement-style unary operation that collapses a
set to the single projection at the orthocomplement of the join of its
members' values at top.  The powerset is never materialized: only the
elements actually constructed exist, and the axiom suites quantify either
exhaustively (small carriers) or over a deterministic, seeded sample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .oml import Oml, OrthoIso, check_ortho_iso, validate_oml
from .report import ValidationReport
from .testmonoid import InvMonoid, mono_compose, mono_star

DEFAULT_SEED = 3405691582
EXHAUSTIVE_THRESHOLD = 12


@dataclass(frozen=True)
class DynElem:
    """One element of the algebra: a canonical (sorted, deduped) id set."""

    alg: "DynAlgebra"
    ids: tuple[int, ...]

    def __mul__(self, other: "DynElem") -> "DynElem":
        return self.alg.mul(self, other)

    def __or__(self, other: "DynElem") -> "DynElem":
        return self.alg.union(self, other)

    def star(self) -> "DynElem":
        return self.alg.star(self)

    def tilde(self) -> "DynElem":
        return self.alg.tilde(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, DynElem) and self.ids == other.ids and self.alg is other.alg

    def __hash__(self) -> int:
        return hash(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __repr__(self) -> str:
        # members print as their generator words so witnesses are auditable
        if not self.ids:
            return "{}"
        mono = self.alg.monoid
        shown = ", ".join(mono.label(i) for i in self.ids[:4])
        extra = f", +{len(self.ids) - 4} more" if len(self.ids) > 4 else ""
        return "{" + shown + extra + "}"


class DynAlgebra:
    """Operations of the powerset algebra over an InvMonoid.

    ``carrier`` is normally every monoid id; tests pass a punctured carrier
    as a negative control for the minimality axiom.
    """

    def __init__(self, monoid: InvMonoid, carrier: tuple[int, ...] | None = None):
        self.monoid = monoid
        self.l = monoid.l
        self.carrier = tuple(sorted(carrier)) if carrier is not None else tuple(monoid.ids())
        self._cache: dict = {}

    def elem(self, ids) -> DynElem:
        ids = tuple(sorted(set(ids)))
        return DynElem(self, ids)

    def singleton(self, a: int) -> DynElem:
        return DynElem(self, (a,))

    @property
    def zero(self) -> DynElem:
        return DynElem(self, ())

    @property
    def unit(self) -> DynElem:
        return DynElem(self, (self.monoid.unit_id,))

    @property
    def one(self) -> DynElem:
        return DynElem(self, self.carrier)

    def delta(self, m: int) -> DynElem:
        """delta(m) = the singleton test at lattice element m."""
        return self.singleton(self.monoid.gen_id[m])

    def union(self, a: DynElem, b: DynElem) -> DynElem:
        return self.elem(a.ids + b.ids)

    def union_all(self, elems) -> DynElem:
        ids: list[int] = []
        for e in elems:
            ids.extend(e.ids)
        return self.elem(ids)

    def mul(self, a: DynElem, b: DynElem) -> DynElem:
        if a.alg is not self or b.alg is not self:
            raise ValueError("elements belong to a different algebra")
        m = self.monoid
        return self.elem(mono_compose(m, x, y) for x in a.ids for y in b.ids)

    def star(self, a: DynElem) -> DynElem:
        return self.elem(mono_star(self.monoid, x) for x in a.ids)

    def tilde(self, a: DynElem) -> DynElem:
        """The singleton at pi of the orthocomplement of join of a(top) values."""
        l = self.l
        j = l.join_all(self.monoid.tbl(x)[l.top] for x in a.ids)
        return self.delta(l.perp[j])

    def tilde_tilde(self, a: DynElem) -> DynElem:
        """Double tilde, computed twice over and compared with the closed form."""
        iterated = self.tilde(self.tilde(a))
        l = self.l
        j = l.join_all(self.monoid.tbl(x)[l.top] for x in a.ids)
        closed = self.delta(j)
        if iterated != closed:
            raise AssertionError(f"closed form for double tilde disagrees at {a!r}")
        return iterated

    # -- tests and the module action ------------------------------------
    # A test is identified with its lattice element m through delta.

    def action(self, k: DynElem, v: int) -> int:
        """k . v = double tilde of (k * delta(v)), as a lattice element."""
        res = self.tilde(self.tilde(self.mul(k, self.delta(v))))
        return self._test_index(res)

    def _test_index(self, t: DynElem) -> int:
        if len(t.ids) != 1:
            raise AssertionError(f"{t!r} is not a test")
        gid = t.ids[0]
        m = self.monoid.tbl(gid)[self.l.top]
        if self.monoid.gen_id[m] != gid:
            raise AssertionError(f"{t!r} is not a projection singleton")
        return m

    def action_table(self, k: DynElem) -> tuple[int, ...]:
        return tuple(self.action(k, v) for v in self.l.elements())

    def equiv(self, s: DynElem, t: DynElem) -> bool:
        """True when s and t act identically on every test."""
        return all(self.action(s, v) == self.action(t, v) for v in self.l.elements())

    # -- the test lattice ------------------------------------------------

    def test_lattice(self) -> tuple[Oml, OrthoIso, ValidationReport]:
        """Materialize the image of tilde as a lattice, with the iso from M.

        Order, meets, joins, orthocomplement and bounds are all computed
        from the algebra operations; validate_oml and check_ortho_iso then
        verify the result independently, so a failure here falsifies the
        construction on this instance rather than crashing.
        """
        l = self.l
        n = l.n
        r = ValidationReport(title=f"test lattice of P(T({l.name}))")

        image = {self.tilde(self.zero)}
        for a in self.monoid.ids():
            image.add(self.tilde(self.singleton(a)))
        expected = {self.delta(m) for m in l.elements()}
        r.add(
            "image.matches_projection_singletons",
            image == expected,
            detail=f"{len(image)} distinct tilde-images",
        )
        if not r.ok:
            return l, OrthoIso(l, l, tuple(l.elements())), r

        def join_t(x: int, y: int) -> int:
            w = self.union(self.delta(x), self.delta(y))
            return self._test_index(self.tilde(self.tilde(w)))

        def meet_t(x: int, y: int) -> int:
            w = self.union(self.tilde(self.delta(x)), self.tilde(self.delta(y)))
            return self._test_index(self.tilde(w))

        join_tbl = tuple(tuple(join_t(x, y) for y in range(n)) for x in range(n))
        meet_tbl = tuple(tuple(meet_t(x, y) for y in range(n)) for x in range(n))
        up = [0] * n
        down = [0] * n
        for x in range(n):
            for y in range(n):
                if join_tbl[x][y] == y:
                    up[x] |= 1 << y
                    down[y] |= 1 << x
        perp = tuple(self._test_index(self.tilde(self.delta(x))) for x in range(n))
        bot = self._test_index(self.tilde_tilde(self.zero))
        top = self._test_index(self.tilde_tilde(self.one))

        tk = Oml(
            names=tuple("~" + s for s in l.names),
            up=tuple(up),
            down=tuple(down),
            meet=meet_tbl,
            join=join_tbl,
            perp=perp,
            bot=bot,
            top=top,
            name=f"tests({l.name})",
        )
        r.extend(validate_oml(tk), prefix="lattice.")
        delta = OrthoIso(l, tk, tuple(range(n)), name="delta")
        r.extend(check_ortho_iso(delta), prefix="delta.")
        return tk, delta, r

    # -- normal forms and atoms -------------------------------------------

    def normal_form(self, a: DynElem) -> list[DynElem]:
        """The unique set of test-monoid singletons whose join re-equals a."""
        parts = [self.singleton(i) for i in a.ids]
        if self.union_all(parts) != a:
            raise AssertionError("normal form does not rejoin to the element")
        return parts

    def h_map(self, a: DynElem) -> list[DynElem]:
        """Atom decomposition: all monoid singletons below a in the subset order.

        Independent of normal_form: scans the entire carrier for inclusion
        instead of splitting the id tuple.
        """
        mem = set(a.ids)
        return [self.singleton(i) for i in self.carrier if i in mem]

    def from_atoms(self, atoms) -> DynElem:
        return self.union_all(atoms)


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class SamplePolicy:
    """Deterministic element/pair/family samples for the axiom suites.

    When the monoid carrier has at most ``exhaustive_threshold`` elements the
    whole powerset is used and two-variable axioms range over all pairs.
    Otherwise the sample is: empty set, full carrier, all singletons, all
    two-element sets of generators, the images of those under star, tilde
    and generator products, plus ``n_random`` pseudo-random subsets drawn
    from ``seed``; two-variable axioms then pair each sampled element with a
    fixed pool and a few seeded partners.
    """

    seed: int = DEFAULT_SEED
    n_random: int = 200
    exhaustive_threshold: int = EXHAUSTIVE_THRESHOLD
    pair_partners: int = 4
    action_pair_cap: int = 4000

    def is_exhaustive(self, alg: DynAlgebra) -> bool:
        return len(alg.carrier) <= self.exhaustive_threshold

    def _cached(self, alg: DynAlgebra, kind: str, build):
        key = (kind, self)
        if key not in alg._cache:
            alg._cache[key] = build()
        return alg._cache[key]

    def elements(self, alg: DynAlgebra) -> list[DynElem]:
        return self._cached(alg, "elements", lambda: self._build_elements(alg))

    def _build_elements(self, alg: DynAlgebra) -> list[DynElem]:
        carrier = alg.carrier
        if self.is_exhaustive(alg):
            out = []
            for mask in range(1 << len(carrier)):
                ids = [carrier[i] for i in range(len(carrier)) if mask >> i & 1]
                out.append(alg.elem(ids))
            return out

        gens = [alg.delta(m) for m in alg.l.elements()]
        sample: list[DynElem] = [alg.zero, alg.one]
        sample.extend(alg.singleton(i) for i in carrier)
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                sample.append(gens[i] | gens[j])
        base = list(sample)
        for e in base:
            sample.append(e.star())
            sample.append(e.tilde())
        for g in gens:
            for h in gens:
                sample.append(g * h)

        rng = random.Random(self.seed)
        for _ in range(self.n_random):
            mask = rng.getrandbits(len(carrier))
            sample.append(alg.elem(carrier[i] for i in range(len(carrier)) if mask >> i & 1))

        seen: set[tuple[int, ...]] = set()
        out = []
        for e in sample:
            if e.ids not in seen:
                seen.add(e.ids)
                out.append(e)
        return out

    def pairs(self, alg: DynAlgebra) -> list[tuple[DynElem, DynElem]]:
        return self._cached(alg, "pairs", lambda: self._build_pairs(alg))

    def _build_pairs(self, alg: DynAlgebra) -> list[tuple[DynElem, DynElem]]:
        elems = self.elements(alg)
        if self.is_exhaustive(alg):
            return [(x, y) for x in elems for y in elems]
        pool = [alg.zero, alg.one, alg.unit]
        rng = random.Random(self.seed + 1)
        out = []
        for x in elems:
            partners = pool + [x] + [elems[rng.randrange(len(elems))] for _ in range(self.pair_partners)]
            out.extend((x, y) for y in partners)
        return out

    def action_pairs(self, alg: DynAlgebra) -> list[tuple[DynElem, DynElem]]:
        """A deterministically capped pair sample for action-heavy checks."""
        pairs = self.pairs(alg)
        if len(pairs) <= self.action_pair_cap:
            return pairs
        step = len(pairs) // self.action_pair_cap + 1
        return pairs[::step]

    def families(self, alg: DynAlgebra) -> list[list[DynElem]]:
        """Join families: empty, singletons, pairs, and the whole sample."""
        elems = self.elements(alg)
        fams: list[list[DynElem]] = [[]]
        fams.extend([x] for x in elems)
        fams.extend([x, y] for x, y in self.pairs(alg))
        fams.append(list(elems))
        return fams

    def action_families(self, alg: DynAlgebra) -> list[list[DynElem]]:
        elems = self.elements(alg)
        fams: list[list[DynElem]] = [[]]
        fams.extend([x] for x in elems)
        fams.extend([x, y] for x, y in self.action_pairs(alg))
        fams.append(list(elems))
        return fams


# ---------------------------------------------------------------------------
# free-function aliases for the core operations


def dyn_mul(a: DynElem, b: DynElem) -> DynElem:
    return a.alg.mul(a, b)


def dyn_star(a: DynElem) -> DynElem:
    return a.alg.star(a)


def dyn_tilde(a: DynElem) -> DynElem:
    return a.alg.tilde(a)


def tilde_tilde(a: DynElem) -> DynElem:
    return a.alg.tilde_tilde(a)


def action(k: DynElem, v: int) -> int:
    return k.alg.action(k, v)


def equiv(s: DynElem, t: DynElem) -> bool:
    return s.alg.equiv(s, t)


def mu_map(alg: DynAlgebra, f: int) -> DynElem:
    """mu: a monoid element to its singleton in the algebra."""
    if f not in alg.carrier:
        raise KeyError(f"monoid id {f} is not in the carrier")
    return alg.singleton(f)


# ---------------------------------------------------------------------------
# axiom suites


def verify_ida(alg: DynAlgebra, policy: SamplePolicy | None = None) -> ValidationReport:
    """The four tilde axioms of the dynamic algebra, over the policy sample."""
    policy = policy or SamplePolicy()
    mode = "exhaustive" if policy.is_exhaustive(alg) else f"sampled(seed={policy.seed})"
    r = ValidationReport(title=f"ida axioms on P(T({alg.l.name})) [{mode}]")
    pairs = policy.pairs(alg)
    elems = policy.elements(alg)

    w = next(
        (
            (x, y)
            for x, y in pairs
            if alg.tilde(alg.mul(x, alg.tilde_tilde(y))) != alg.tilde(alg.mul(x, y))
        ),
        None,
    )
    r.add("IDA2.tilde_absorbs_right_closure", w is None, "" if w is None else f"x={w[0]!r} y={w[1]!r}")

    w = None
    for fam in policy.families(alg):
        lhs = alg.tilde(alg.union_all(alg.tilde_tilde(x) for x in fam))
        rhs = alg.tilde(alg.union_all(fam))
        if lhs != rhs:
            w = repr(fam[:4])
            break
    r.add("IDA3.tilde_absorbs_closure_of_joins", w is None, w or "")

    w = next((x for x in elems if alg.star(alg.tilde(x)) != alg.tilde(x)), None)
    r.add("IDA4.tilde_is_self_adjoint", w is None, "" if w is None else repr(w))

    w = next(
        (
            (x, y)
            for x, y in pairs
            if alg.tilde_tilde(alg.mul(alg.tilde_tilde(x), y))
            != alg.tilde(alg.union(alg.tilde(x), alg.tilde(alg.union(alg.tilde(x), y))))
        ),
        None,
    )
    r.add("IDA5.sasaki_shape", w is None, "" if w is None else f"x={w[0]!r} y={w[1]!r}")

    return r


def verify_toda(alg: DynAlgebra, policy: SamplePolicy | None = None) -> ValidationReport:
    """The four carrier axioms: test lattice, minimality, join injectivity,
    and separation of monoid elements by their actions."""
    policy = policy or SamplePolicy()
    r = ValidationReport(title=f"toda axioms on P(T({alg.l.name}))")

    _, _, tl_report = alg.test_lattice()
    r.add(
        "TODA1.test_lattice_is_complete_oml",
        tl_report.ok,
        "" if tl_report.ok else "; ".join(f"{c.name}:{c.witness}" for c in tl_report.failures),
    )

    w = None
    carrier = set(alg.carrier)
    missing_gen = next((m for m in alg.l.elements() if alg.monoid.gen_id[m] not in carrier), None)
    if missing_gen is not None:
        w = f"generator pi({alg.l.names[missing_gen]}) outside carrier"
    if w is None and alg.monoid.unit_id not in carrier:
        w = "unit outside carrier"
    if w is None:
        for a in alg.carrier:
            if mono_star(alg.monoid, a) not in carrier:
                w = f"star of {a} escapes carrier"
                break
            for b in alg.carrier:
                if mono_compose(alg.monoid, a, b) not in carrier:
                    w = f"product {a}*{b} escapes carrier"
                    break
            if w:
                break
    if w is None:
        for e in policy.elements(alg):
            stray = next((i for i in e.ids if i not in carrier), None)
            if stray is not None:
                w = f"element {e!r} not regenerated: id {stray} outside carrier"
                break
            if alg.union_all(alg.singleton(i) for i in e.ids) != e:
                w = f"element {e!r} not a join of its singletons"
                break
    r.add("TODA2.minimality", w is None, w or "",
          detail="closure of singletons under union/product/star regenerates the sample")

    w = None
    singles = [alg.singleton(i) for i in alg.carrier]
    if len({s.ids for s in singles}) != len(singles):
        w = "duplicate singleton"
    if w is None:
        ex = policy.is_exhaustive(alg)
        subsets: list[tuple[int, ...]]
        if ex:
            subsets = [e.ids for e in policy.elements(alg)]
        else:
            rng = random.Random(policy.seed + 2)
            subsets = [e.ids for e in policy.elements(alg)][: 2 * policy.n_random]
            rng.shuffle(subsets)
        seen: dict[tuple[int, ...], tuple[int, ...]] = {}
        for ids in subsets:
            joined = alg.union_all(alg.singleton(i) for i in ids).ids
            if joined in seen and seen[joined] != ids:
                w = f"distinct singleton sets {seen[joined]} and {ids} share a join"
                break
            seen[joined] = ids
    r.add("TODA3.joins_of_tests_injective", w is None, w or "")

    w = None
    for i, a in enumerate(alg.carrier):
        for b in alg.carrier[i + 1 :]:
            sa, sb = alg.singleton(a), alg.singleton(b)
            if alg.equiv(sa, sb):
                w = f"{sa!r} and {sb!r} act identically"
                break
        if w:
            break
    r.add("TODA4.actions_separate_tests", w is None, w or "")

    return r


def verify_module(alg: DynAlgebra, policy: SamplePolicy | None = None) -> ValidationReport:
    """Left-module laws of the action on tests, plus the homomorphism facts
    about double tilde and the congruence property of the action kernel."""
    policy = policy or SamplePolicy()
    r = ValidationReport(title=f"module action on tests of P(T({alg.l.name}))")
    l = alg.l
    tests = list(l.elements())
    elems = policy.elements(alg)
    pairs = policy.action_pairs(alg)

    tk, _, tl_report = alg.test_lattice()
    if not tl_report.ok:
        r.add("precondition.test_lattice", False, "test lattice extraction failed")
        return r

    w = None
    for k in elems:
        for x in tests:
            for y in tests:
                joined = alg.action(k, tk.join[x][y])
                split = tk.join[alg.action(k, x)][alg.action(k, y)]
                if joined != split:
                    w = f"k={k!r} v={l.names[x]},{l.names[y]}"
                    break
            if w:
                break
        if alg.action(k, tk.bot) != tk.bot:
            w = w or f"k={k!r} at empty join"
        if w:
            break
    r.add("A1.action_preserves_test_joins", w is None, w or "")

    w = None
    for fam in policy.action_families(alg):
        total = alg.union_all(fam)
        for v in tests:
            lhs = alg.action(total, v)
            rhs = tk.bot
            for t in fam:
                rhs = tk.join[rhs][alg.action(t, v)]
            if lhs != rhs:
                w = f"family size {len(fam)} at {l.names[v]}"
                break
        if w:
            break
    r.add("A2.joins_act_pointwise", w is None, w or "")

    w = next(
        (
            (u, s, v)
            for u, s in pairs
            for v in tests
            if alg.action(alg.mul(u, s), v) != alg.action(u, alg.action(s, v))
        ),
        None,
    )
    r.add("A3.product_acts_by_composition", w is None,
          "" if w is None else f"u={w[0]!r} s={w[1]!r} v={l.names[w[2]]}")

    w = next((v for v in tests if alg.action(alg.unit, v) != v), None)
    r.add("A4.unit_acts_as_identity", w is None, "" if w is None else l.names[w])

    w = next((x for x in elems if alg.tilde(alg.tilde_tilde(x)) != alg.tilde(x)), None)
    r.add("triple_tilde_collapses", w is None, "" if w is None else repr(w))

    w = None
    for fam in policy.action_families(alg):
        lhs = alg.tilde_tilde(alg.union_all(fam))
        rhs = alg.tilde_tilde(alg.zero)
        for t in fam:
            x, y = alg._test_index(rhs), alg._test_index(alg.tilde_tilde(t))
            rhs = alg.delta(tk.join[x][y])
        if lhs != rhs:
            w = f"family size {len(fam)}"
            break
    r.add("double_tilde_preserves_joins", w is None, w or "")

    w = next(
        (
            (u, v)
            for u, v in pairs
            if alg.tilde_tilde(alg.mul(u, v))
            != alg.delta(alg.action(u, alg._test_index(alg.tilde_tilde(v))))
        ),
        None,
    )
    r.add("double_tilde_intertwines_product_with_action", w is None,
          "" if w is None else f"u={w[0]!r} v={w[1]!r}")

    by_action: dict[tuple[int, ...], list[DynElem]] = {}
    for e in elems:
        by_action.setdefault(alg.action_table(e), []).append(e)
    eq_pairs = []
    for group in by_action.values():
        for i in range(len(group) - 1):
            eq_pairs.append((group[i], group[i + 1]))
            if len(eq_pairs) >= 40:
                break
        if len(eq_pairs) >= 40:
            break
    if not eq_pairs:
        eq_pairs = [(elems[0], elems[0])]
    w = None
    for u, v in eq_pairs:
        for s, t in eq_pairs[:10]:
            if not alg.equiv(alg.mul(u, s), alg.mul(v, t)):
                w = f"product congruence at u={u!r} v={v!r} s={s!r} t={t!r}"
                break
            if not alg.equiv(alg.union(u, s), alg.union(v, t)):
                w = f"join congruence at u={u!r} v={v!r} s={s!r} t={t!r}"
                break
        if w:
            break
    r.add(
        "equiv_is_congruence",
        w is None,
        w or "",
        detail=f"{len(eq_pairs)} equivalent pairs exercised",
    )

    return r
