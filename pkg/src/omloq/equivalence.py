"""Round trips between lattices and their powerset dynamic algebras.

``gamma_object`` builds the algebra over the generated projection monoid and
insists its axiom suites pass.  ``psi_object`` extracts the test lattice
back out.  Lattice isomorphisms travel forward by conjugation and backward
by restriction to tests, and the two directions are tied together by the
component maps checked here: the per-lattice test-relabeling (delta, used
as the mu component) and the per-algebra atom-to-action map (lambda, built
from nu).  ``round_trip_report`` bundles everything as one verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynalg import DynAlgebra, DynElem, SamplePolicy, verify_ida, verify_module, verify_toda
from .errors import OmloqError
from .oml import Oml, OrthoIso, check_ortho_iso, identity_iso
from .report import ValidationReport
from .testmonoid import DEFAULT_MONOID_CAP, InvMonoid, generate_T, mono_compose, mono_star


class SuiteFailure(OmloqError):
    """A verification suite failed while building a handle; the instance
    falsifies the construction, which should never happen on valid input."""

    def __init__(self, message: str, report: ValidationReport):
        self.report = report
        super().__init__(message)


@dataclass
class TodaHandle:
    """A verified algebra over a lattice, with its extracted test lattice."""

    oml: Oml
    monoid: InvMonoid
    alg: DynAlgebra
    test_oml: Oml
    delta: OrthoIso
    suites: dict[str, ValidationReport] = field(default_factory=dict)
    verified: bool = False

    def __repr__(self) -> str:
        return f"TodaHandle({self.oml.name}, |T|={self.monoid.size}, verified={self.verified})"


def gamma_object(
    m: Oml,
    policy: SamplePolicy | None = None,
    monoid_cap: int = DEFAULT_MONOID_CAP,
    require: bool = True,
) -> TodaHandle:
    """Build and verify the dynamic algebra of a lattice.

    Runs the full ida/toda/module suites; with ``require`` (the default) any
    failure raises SuiteFailure since it would falsify the construction on
    this instance.
    """
    policy = policy or SamplePolicy()
    monoid = generate_T(m, cap=monoid_cap)
    alg = DynAlgebra(monoid)
    test_oml, delta, tl_report = alg.test_lattice()
    suites = {
        "test_lattice": tl_report,
        "ida": verify_ida(alg, policy),
        "toda": verify_toda(alg, policy),
        "module": verify_module(alg, policy),
    }
    handle = TodaHandle(m, monoid, alg, test_oml, delta, suites)
    handle.verified = all(r.ok for r in suites.values())
    if require and not handle.verified:
        bad = [f"{k}:{c.name}" for k, r in suites.items() for c in r.failures]
        combined = ValidationReport(title=f"gamma({m.name})")
        for k, r in suites.items():
            combined.extend(r, prefix=f"{k}.")
        raise SuiteFailure(f"suite failures on {m.name}: {bad}", combined)
    return handle


def psi_object(h: TodaHandle) -> Oml:
    if not h.verified:
        raise ValueError("handle is unverified; cannot extract its test lattice")
    return h.test_oml


@dataclass(frozen=True)
class DynMorphism:
    """A carrier bijection between two algebras, applied id-wise to elements."""

    src: TodaHandle
    dst: TodaHandle
    elem_map: tuple[int, ...]
    name: str = ""

    def apply(self, x: DynElem) -> DynElem:
        return self.dst.alg.elem(self.elem_map[i] for i in x.ids)

    def inverse(self) -> "DynMorphism":
        inv = [0] * len(self.elem_map)
        for i, j in enumerate(self.elem_map):
            inv[j] = i
        return DynMorphism(self.dst, self.src, tuple(inv), name=f"{self.name}^-1")


def verify_dyn_morphism(
    phi: DynMorphism, policy: SamplePolicy | None = None
) -> ValidationReport:
    """Bijectivity plus preservation of union, product, star, tilde, unit."""
    policy = policy or SamplePolicy()
    r = ValidationReport(title=f"dyn morphism {phi.name}")
    src_alg, dst_alg = phi.src.alg, phi.dst.alg

    ok = sorted(phi.elem_map) == list(dst_alg.monoid.ids())
    r.add("bijective_on_monoid", ok)
    if not ok:
        return r

    r.add("unit_preserved", phi.apply(src_alg.unit) == dst_alg.unit)

    pairs = policy.action_pairs(src_alg)
    w = next(
        ((x, y) for x, y in pairs if phi.apply(x | y) != phi.apply(x) | phi.apply(y)), None
    )
    r.add("union_preserved", w is None, "" if w is None else f"{w[0]!r},{w[1]!r}")

    w = next(
        ((x, y) for x, y in pairs if phi.apply(x * y) != phi.apply(x) * phi.apply(y)), None
    )
    r.add("product_preserved", w is None, "" if w is None else f"{w[0]!r},{w[1]!r}")

    elems = policy.elements(src_alg)
    w = next((x for x in elems if phi.apply(x.star()) != phi.apply(x).star()), None)
    r.add("star_preserved", w is None, "" if w is None else repr(w))

    w = next((x for x in elems if phi.apply(x.tilde()) != phi.apply(x).tilde()), None)
    r.add("tilde_preserved", w is None, "" if w is None else repr(w))

    return r


def gamma_morphism(
    k: OrthoIso,
    src: TodaHandle,
    dst: TodaHandle,
    policy: SamplePolicy | None = None,
) -> DynMorphism:
    """Transport a lattice isomorphism to the algebras by conjugation.

    Each monoid element's table is conjugated and re-identified in the
    destination monoid; the resulting element map is verified to be a
    morphism of algebras before it is returned.
    """
    iso_rep = check_ortho_iso(k)
    if not iso_rep.ok:
        raise ValueError(f"not an ortholattice isomorphism: {[c.name for c in iso_rep.failures]}")
    if k.src.names != src.oml.names or k.dst.names != dst.oml.names:
        raise ValueError("morphism endpoints do not match the supplied handles")

    kinv = k.inverse()
    elem_map = []
    for e in src.monoid.elems:
        conj = tuple(k(e.tbl[kinv(x)]) for x in dst.oml.elements())
        try:
            elem_map.append(dst.monoid.id_of(conj))
        except KeyError:
            raise AssertionError(
                f"conjugate of {e!r} missing from the destination monoid"
            ) from None
    phi = DynMorphism(src, dst, tuple(elem_map), name=f"gamma({k.name})")
    rep = verify_dyn_morphism(phi, policy)
    if not rep.ok:
        raise SuiteFailure(f"gamma({k.name}) is not a morphism", rep)
    return phi


def psi_morphism(phi: DynMorphism) -> OrthoIso:
    """Restrict an algebra morphism to tests, re-indexed through delta."""
    src, dst = phi.src, phi.dst
    tbl = []
    for m in src.oml.elements():
        image_id = phi.elem_map[src.monoid.gen_id[m]]
        m2 = dst.monoid.tbl(image_id)[dst.oml.top]
        if dst.monoid.gen_id[m2] != image_id:
            raise AssertionError(f"restriction escapes the tests at {src.oml.names[m]}")
        tbl.append(m2)
    iso = OrthoIso(src.test_oml, dst.test_oml, tuple(tbl), name=f"psi({phi.name})")
    rep = check_ortho_iso(iso)
    if not rep.ok:
        raise SuiteFailure(f"psi({phi.name}) is not an ortho-iso", rep)
    return iso


# ---------------------------------------------------------------------------
# the canonical components


def nu_table(h: TodaHandle, target: TodaHandle) -> tuple[int, ...]:
    """For each monoid id of h, the target-monoid id of its action on tests.

    The action tables are required to separate elements (two ids mapping to
    one table would violate the separation axiom) and to exhaust the target
    monoid, making nu a bijection.
    """
    seen: dict[tuple[int, ...], int] = {}
    out = []
    for f in h.monoid.ids():
        tbl = h.alg.action_table(h.alg.singleton(f))
        if tbl in seen:
            raise SuiteFailure(
                f"separation violated: monoid ids {seen[tbl]} and {f} share an action",
                ValidationReport(title="nu separation"),
            )
        seen[tbl] = f
        out.append(target.monoid.id_of(tbl))
    if sorted(out) != list(target.monoid.ids()):
        raise AssertionError("nu does not exhaust the target monoid")
    return tuple(out)


def nu_map(h: TodaHandle, target: TodaHandle, k) -> int:
    """nu of one element: accepts a monoid id or a singleton DynElem."""
    if isinstance(k, DynElem):
        if len(k.ids) != 1:
            raise ValueError("nu applies to monoid elements, i.e. singletons")
        k = k.ids[0]
    return nu_table(h, target)[k]


def mu_component(h: TodaHandle) -> OrthoIso:
    """The lattice-to-test-lattice relabeling; equals delta by construction."""
    return h.delta


def verify_nu(h: TodaHandle, target: TodaHandle) -> ValidationReport:
    """nu is an isomorphism of involutive monoids onto the target."""
    r = ValidationReport(title=f"nu on T({h.oml.name})")
    nu = nu_table(h, target)
    r.add("bijective", sorted(nu) == list(target.monoid.ids()))
    r.add("unit_preserved", nu[h.monoid.unit_id] == target.monoid.unit_id)
    w = next(
        (
            (a, b)
            for a in h.monoid.ids()
            for b in h.monoid.ids()
            if nu[mono_compose(h.monoid, a, b)] != mono_compose(target.monoid, nu[a], nu[b])
        ),
        None,
    )
    r.add("product_preserved", w is None, "" if w is None else f"{w[0]},{w[1]}")
    w = next(
        (a for a in h.monoid.ids() if nu[mono_star(h.monoid, a)] != mono_star(target.monoid, nu[a])),
        None,
    )
    r.add("star_preserved", w is None, "" if w is None else str(w))
    w = next(
        (m for m in h.oml.elements() if nu[h.monoid.gen_id[m]] != target.monoid.gen_id[m]),
        None,
    )
    r.add("tests_map_to_projections", w is None, "" if w is None else h.oml.names[w],
          detail="nu of a test is the projection at the matching test")
    return r


def lambda_component(
    h: TodaHandle, target: TodaHandle, policy: SamplePolicy | None = None
) -> tuple[DynMorphism, ValidationReport]:
    """The atom-wise nu image, as a morphism from the algebra to its rebuild.

    Verified two ways: through the normal form (splitting the id tuple) and
    through the atom decomposition (scanning the carrier for inclusion),
    then as a full algebra morphism on the policy sample.
    """
    policy = policy or SamplePolicy()
    r = ValidationReport(title=f"lambda on P(T({h.oml.name}))")
    r.extend(verify_nu(h, target), prefix="nu.")
    nu = nu_table(h, target)
    lam = DynMorphism(h, target, nu, name="lambda")

    w = None
    for x in policy.elements(h.alg):
        via_nf = target.alg.elem(nu[s.ids[0]] for s in h.alg.normal_form(x))
        via_atoms = target.alg.elem(nu[s.ids[0]] for s in h.alg.h_map(x))
        if via_nf != lam.apply(x) or via_atoms != lam.apply(x):
            w = repr(x)
            break
    r.add("normal_form_and_atom_paths_agree", w is None, w or "")

    r.extend(verify_dyn_morphism(lam, policy), prefix="morphism.")
    r.add("unit_image", lam.apply(h.alg.unit) == target.alg.unit,
          detail="lambda of the unit is the identity singleton")
    return lam, r


def check_naturality_mu(
    k: OrthoIso, src: TodaHandle, dst: TodaHandle, policy: SamplePolicy | None = None
) -> ValidationReport:
    """Both paths around the mu square, evaluated at every source element."""
    r = ValidationReport(title=f"mu naturality for {k.name}")
    phi = gamma_morphism(k, src, dst, policy)
    psi_phi = psi_morphism(phi)
    for m in src.oml.elements():
        via_k = k(m)
        via_square = psi_phi(m)
        r.add(
            f"square@{src.oml.names[m]}",
            via_square == via_k,
            "" if via_square == via_k else f"{dst.oml.names[via_square]} != {dst.oml.names[via_k]}",
        )
    return r


def check_naturality_lambda(
    phi: DynMorphism,
    lam_src: DynMorphism,
    lam_dst: DynMorphism,
    policy: SamplePolicy | None = None,
) -> ValidationReport:
    """The lambda square on atoms, small unions, and the policy sample."""
    policy = policy or SamplePolicy()
    r = ValidationReport(title=f"lambda naturality for {phi.name}")
    gpsi = gamma_morphism(psi_morphism(phi), lam_src.dst, lam_dst.dst, policy)

    probes: list[DynElem] = [phi.src.alg.singleton(i) for i in phi.src.alg.carrier]
    for i in phi.src.alg.carrier:
        for j in phi.src.alg.carrier[:4]:
            probes.append(phi.src.alg.elem((i, j)))
    probes.extend(policy.elements(phi.src.alg))
    seen = set()
    w = None
    for x in probes:
        if x.ids in seen:
            continue
        seen.add(x.ids)
        if gpsi.apply(lam_src.apply(x)) != lam_dst.apply(phi.apply(x)):
            w = repr(x)
            break
    r.add("square_commutes", w is None, w or "", detail=f"{len(seen)} elements")
    return r


# ---------------------------------------------------------------------------
# transported-operation (h map) checks


def verify_h_map(h: TodaHandle, policy: SamplePolicy | None = None) -> ValidationReport:
    """The atom decomposition is a bijection intertwining all five operations.

    Elements are compared against their transported images, where each
    transported operation rejoins the atom sets, applies the original
    operation, and decomposes again.
    """
    policy = policy or SamplePolicy()
    alg = h.alg
    r = ValidationReport(title=f"h map on P(T({h.oml.name}))")
    elems = policy.elements(alg)

    w = next((x for x in elems if alg.from_atoms(alg.h_map(x)) != x), None)
    r.add("join_after_h_is_identity", w is None, "" if w is None else repr(w))

    w = None
    for x in elems:
        atoms = alg.h_map(x)
        if [a.ids for a in alg.h_map(alg.from_atoms(atoms))] != [a.ids for a in atoms]:
            w = repr(x)
            break
    r.add("h_after_join_is_identity", w is None, w or "")

    def transported_mul(xa, ya):
        return alg.h_map(alg.mul(alg.from_atoms(xa), alg.from_atoms(ya)))

    def transported_star(xa):
        return alg.h_map(alg.star(alg.from_atoms(xa)))

    def transported_tilde(xa):
        return alg.h_map(alg.tilde(alg.from_atoms(xa)))

    pairs = policy.action_pairs(alg)
    w = None
    for x, y in pairs:
        lhs = [a.ids for a in alg.h_map(alg.mul(x, y))]
        rhs = [a.ids for a in transported_mul(alg.h_map(x), alg.h_map(y))]
        if lhs != rhs:
            w = f"{x!r},{y!r}"
            break
    r.add("product_intertwined", w is None, w or "")

    w = None
    for x in elems:
        if [a.ids for a in alg.h_map(alg.star(x))] != [a.ids for a in transported_star(alg.h_map(x))]:
            w = repr(x)
            break
    r.add("star_intertwined", w is None, w or "")

    w = None
    for x in elems:
        if [a.ids for a in alg.h_map(alg.tilde(x))] != [a.ids for a in transported_tilde(alg.h_map(x))]:
            w = repr(x)
            break
    r.add("tilde_intertwined", w is None, w or "")

    r.add("unit_atoms", [a.ids for a in alg.h_map(alg.unit)] == [alg.unit.ids])
    return r


# ---------------------------------------------------------------------------
# the aggregate


def round_trip_report(
    m: Oml,
    morphisms: list[OrthoIso] | None = None,
    policy: SamplePolicy | None = None,
    monoid_cap: int = DEFAULT_MONOID_CAP,
) -> ValidationReport:
    """The full equivalence verdict for one lattice.

    Covers: the algebra's own suites, the test-lattice relabeling, the
    lambda component and its two decomposition paths, the atom-map
    isomorphism, the combined three-way isomorphism, and, for each supplied
    lattice isomorphism out of m, both naturality squares plus functor laws.
    """
    policy = policy or SamplePolicy()
    report = ValidationReport(title=f"equivalence round trip on {m.name}")

    h = gamma_object(m, policy, monoid_cap=monoid_cap, require=False)
    for key, sub in h.suites.items():
        report.add(
            f"gamma.{key}",
            sub.ok,
            "" if sub.ok else "; ".join(f"{c.name}:{c.witness}" for c in sub.failures),
        )
    if not h.verified:
        return report

    report.add("mu_component.is_ortho_iso", check_ortho_iso(mu_component(h)).ok)

    target = gamma_object(psi_object(h), policy, monoid_cap=monoid_cap, require=False)
    report.add("gamma_of_test_lattice", target.verified)
    if not target.verified:
        return report

    lam, lam_report = lambda_component(h, target, policy)
    report.add(
        "lambda_component",
        lam_report.ok,
        "" if lam_report.ok else "; ".join(f"{c.name}:{c.witness}" for c in lam_report.failures),
    )

    hmap_report = verify_h_map(h, policy)
    report.add(
        "h_map_isomorphism",
        hmap_report.ok,
        "" if hmap_report.ok else "; ".join(f"{c.name}:{c.witness}" for c in hmap_report.failures),
    )

    report.add(
        "three_way_isomorphism",
        lam_report.ok and hmap_report.ok,
        detail="algebra = rebuilt algebra = powerset of its own tests, via lambda and h",
    )

    ident = identity_iso(m)
    gamma_id = gamma_morphism(ident, h, h, policy)
    report.add("functor.gamma_identity", gamma_id.elem_map == tuple(h.monoid.ids()))
    report.add("functor.psi_identity", psi_morphism(gamma_id).map == tuple(range(m.n)))

    handles: dict[tuple[str, ...], TodaHandle] = {m.names: h}
    targets: dict[tuple[str, ...], TodaHandle] = {m.names: target}
    lams: dict[tuple[str, ...], DynMorphism] = {m.names: lam}

    for k in morphisms or []:
        if k.src.names != m.names:
            raise ValueError(f"morphism {k.name} does not start at {m.name}")
        if k.dst.names not in handles:
            handles[k.dst.names] = gamma_object(k.dst, policy, monoid_cap=monoid_cap)
            targets[k.dst.names] = gamma_object(
                psi_object(handles[k.dst.names]), policy, monoid_cap=monoid_cap
            )
            lams[k.dst.names] = lambda_component(handles[k.dst.names], targets[k.dst.names], policy)[0]
        dst_h = handles[k.dst.names]

        mu_rep = check_naturality_mu(k, h, dst_h, policy)
        report.add(
            f"mu_naturality[{k.name}]",
            mu_rep.ok,
            "" if mu_rep.ok else "; ".join(f"{c.name}:{c.witness}" for c in mu_rep.failures),
        )

        phi = gamma_morphism(k, h, dst_h, policy)
        lam_rep = check_naturality_lambda(phi, lam, lams[k.dst.names], policy)
        report.add(
            f"lambda_naturality[{k.name}]",
            lam_rep.ok,
            "" if lam_rep.ok else "; ".join(c.witness for c in lam_rep.failures),
        )

        if k.dst.names == m.names:
            kk = k.compose(k)
            phi_kk = gamma_morphism(kk, h, h, policy)
            composed = tuple(phi.elem_map[phi.elem_map[i]] for i in h.monoid.ids())
            report.add(f"functor.gamma_composes[{k.name}]", phi_kk.elem_map == composed)

    return report
