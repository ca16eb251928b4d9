import pytest

from omloq.dynalg import SamplePolicy
from omloq.equivalence import (
    check_naturality_lambda,
    check_naturality_mu,
    gamma_morphism,
    gamma_object,
    lambda_component,
    mu_component,
    nu_map,
    psi_morphism,
    psi_object,
    round_trip_report,
    verify_h_map,
    verify_nu,
)
from omloq.oml import (
    OrthoIso,
    catalog,
    check_ortho_iso,
    enumerate_automorphisms,
    identity_iso,
    parse_lattice,
)


@pytest.fixture(scope="module")
def pol():
    return SamplePolicy()


@pytest.fixture(scope="module")
def handles(pol):
    cache = {}

    def get(name, k=0):
        if (name, k) not in cache:
            h = gamma_object(catalog(name, k), pol)
            cache[(name, k)] = (h, gamma_object(psi_object(h), pol))
        return cache[(name, k)]

    return get


def mo2_swap():
    mo2 = catalog("mo", 2)

    def idx(*labels):
        return tuple(mo2.index(s) for s in labels)

    return OrthoIso(mo2, mo2, idx("0", "b", "b'", "a", "a'", "1"), name="swap")


def test_gamma_object_sizes(handles):
    h, _ = handles("chain2")
    assert h.monoid.size == 2 and h.verified
    h2, _ = handles("boolean", 2)
    assert h2.monoid.size == 4
    with pytest.raises(ValueError):
        gamma_object(catalog("o6"))


def test_gamma_morphism_identity_and_swap(handles, pol):
    h, _ = handles("mo", 2)
    mo2 = h.oml
    ident = gamma_morphism(identity_iso(mo2), h, h, pol)
    assert ident.elem_map == tuple(h.monoid.ids())

    swap = gamma_morphism(mo2_swap(), h, h, pol)
    a, b = mo2.index("a"), mo2.index("b")
    assert swap.elem_map[h.monoid.gen_id[a]] == h.monoid.gen_id[b]
    inv = swap.inverse()
    assert [inv.elem_map[swap.elem_map[i]] for i in h.monoid.ids()] == list(h.monoid.ids())


def test_gamma_preserves_composition_samplewise(handles, pol):
    h, _ = handles("mo", 2)
    k = mo2_swap()
    phi_k = gamma_morphism(k, h, h, pol)
    phi_kk = gamma_morphism(k.compose(k), h, h, pol)
    for x in pol.elements(h.alg)[:60]:
        assert phi_kk.apply(x) == phi_k.apply(phi_k.apply(x))


def test_gamma_morphism_rejects_bad_input(handles, pol):
    h, _ = handles("mo", 2)
    mo2 = h.oml

    def idx(*labels):
        return tuple(mo2.index(s) for s in labels)

    not_iso = OrthoIso(mo2, mo2, idx("0", "b", "a'", "a", "b'", "1"))
    with pytest.raises(ValueError, match="not an ortholattice isomorphism"):
        gamma_morphism(not_iso, h, h, pol)
    hb, _ = handles("boolean", 2)
    with pytest.raises(ValueError, match="endpoints"):
        gamma_morphism(identity_iso(mo2), hb, hb, pol)


def test_psi_object_extracts_isomorphic_lattice(handles):
    for key in [("chain2", 0), ("boolean", 3), ("mo", 2)]:
        h, _ = handles(*key)
        tk = psi_object(h)
        assert tk.n == h.oml.n
        assert check_ortho_iso(mu_component(h)).ok


def test_psi_morphism_examples(handles, pol):
    h, _ = handles("mo", 2)
    mo2 = h.oml
    ident = psi_morphism(gamma_morphism(identity_iso(mo2), h, h, pol))
    assert ident.map == tuple(range(mo2.n))

    k = mo2_swap()
    back = psi_morphism(gamma_morphism(k, h, h, pol))
    assert back.map == k.map  # the square psi(gamma(k)) . delta = delta . k
    assert check_ortho_iso(back).ok


def test_mu_naturality(handles, pol):
    hb, _ = handles("boolean", 2)
    rep = check_naturality_mu(identity_iso(hb.oml), hb, hb, pol)
    assert rep.ok

    h, _ = handles("mo", 2)
    rep = check_naturality_mu(mo2_swap(), h, h, pol)
    assert rep.ok

    mo3 = catalog("mo", 3)
    h3, _ = handles("mo", 3)
    autos = enumerate_automorphisms(mo3)
    a, b, c = (mo3.index(x) for x in "abc")
    cycle = next(
        g for g in autos if g.map[a] == b and g.map[b] == c and g.map[c] == a
    )
    rep = check_naturality_mu(cycle, h3, h3, pol)
    assert rep.ok, [c2.name for c2 in rep.failures]


def test_nu_is_involutive_monoid_isomorphism(handles):
    for key in [("chain2", 0), ("boolean", 2), ("mo", 2)]:
        h, target = handles(*key)
        rep = verify_nu(h, target)
        assert rep.ok, (key, [c.name for c in rep.failures])


def test_nu_map_examples(handles):
    h, target = handles("mo", 2)
    mo2 = h.oml
    # nu of a test is the projection at the matching test
    for m in mo2.elements():
        assert nu_map(h, target, h.alg.delta(m)) == target.monoid.gen_id[m]
    assert nu_map(h, target, h.monoid.unit_id) == target.monoid.unit_id
    # nu of a composite acts as the transported composition
    a, b = mo2.index("a"), mo2.index("b")
    from omloq.testmonoid import mono_compose

    ab = mono_compose(h.monoid, h.monoid.gen_id[a], h.monoid.gen_id[b])
    ab_t = mono_compose(target.monoid, target.monoid.gen_id[a], target.monoid.gen_id[b])
    assert nu_map(h, target, ab) == ab_t


def test_mu_map_examples(handles):
    from omloq.dynalg import mu_map

    h, _ = handles("mo", 2)
    alg = h.alg
    for m in h.oml.elements():
        assert mu_map(alg, alg.monoid.gen_id[m]) == alg.delta(m)
    assert mu_map(alg, alg.monoid.unit_id) == alg.unit
    from omloq.testmonoid import mono_compose

    f, g = alg.monoid.gen_id[1], alg.monoid.gen_id[3]
    assert mu_map(alg, mono_compose(alg.monoid, f, g)) == mu_map(alg, f) * mu_map(alg, g)


def test_lambda_component(handles, pol):
    h, target = handles("mo", 2)
    lam, rep = lambda_component(h, target, pol)
    assert rep.ok, [c.name for c in rep.failures]
    assert lam.apply(h.alg.zero) == target.alg.zero
    assert lam.apply(h.alg.unit) == target.alg.unit
    mo2 = h.oml
    a, b = mo2.index("a"), mo2.index("b")
    ga = h.alg.delta(a)
    gab = ga * h.alg.delta(b)
    x = ga | gab
    image = lam.apply(x)
    assert len(image.ids) == len(x.ids)
    nu_ids = {nu_map(h, target, i) for i in x.ids}
    assert set(image.ids) == nu_ids


def test_lambda_cardinality_and_normal_form(handles, pol):
    h, target = handles("boolean", 2)
    lam, _ = lambda_component(h, target, pol)
    for x in pol.elements(h.alg):
        assert len(lam.apply(x).ids) == len(x.ids)
        parts = h.alg.normal_form(x)
        assert [p.ids for p in parts] == [h.alg.singleton(i).ids for i in x.ids]


def test_lambda_components_across_corpus(handles, pol):
    # the corpus members not already covered by the round-trip tests
    for key in [("boolean", 1), ("boolean", 4), ("mo", 1), ("mo", 4)]:
        h, target = handles(*key)
        _, rep = lambda_component(h, target, pol)
        assert rep.ok, (key, [c.name for c in rep.failures])


def test_lambda_naturality(handles, pol):
    h, target = handles("mo", 2)
    lam, _ = lambda_component(h, target, pol)

    ident = gamma_morphism(identity_iso(h.oml), h, h, pol)
    rep = check_naturality_lambda(ident, lam, lam, pol)
    assert rep.ok

    swap = gamma_morphism(mo2_swap(), h, h, pol)
    rep = check_naturality_lambda(swap, lam, lam, pol)
    assert rep.ok, [c.witness for c in rep.failures]

    composed = gamma_morphism(mo2_swap().compose(mo2_swap()), h, h, pol)
    rep = check_naturality_lambda(composed, lam, lam, pol)
    assert rep.ok


def test_h_map_isomorphism(handles, pol):
    for key in [("chain2", 0), ("boolean", 2), ("mo", 2)]:
        h, _ = handles(*key)
        rep = verify_h_map(h, pol)
        assert rep.ok, (key, [c.name for c in rep.failures])


def test_mu_naturality_over_full_automorphism_groups(handles, pol):
    # the whole morphism corpus for the two smallest non-Boolean lattices:
    # every automorphism of mo(2), a spread of automorphisms of mo(3)
    h, _ = handles("mo", 2)
    for g in enumerate_automorphisms(h.oml):
        rep = check_naturality_mu(g, h, h, pol)
        assert rep.ok, (g.name, [c.name for c in rep.failures])
    h3, _ = handles("mo", 3)
    autos3 = enumerate_automorphisms(h3.oml)
    assert len(autos3) == 48
    for g in autos3[::8]:
        rep = check_naturality_mu(g, h3, h3, pol)
        assert rep.ok, (g.name, [c.name for c in rep.failures])


def test_psi_preserves_composition(handles, pol):
    h, _ = handles("mo", 2)
    k = mo2_swap()
    phi = gamma_morphism(k, h, h, pol)
    phi2 = gamma_morphism(k.compose(k), h, h, pol)
    lhs = psi_morphism(phi2).map
    one = psi_morphism(phi)
    rhs = tuple(one.map[one.map[m]] for m in h.oml.elements())
    assert lhs == rhs


def test_round_trip_small(pol):
    for key in [("chain2", 0), ("boolean", 2), ("mo", 2)]:
        rep = round_trip_report(catalog(*key) if key[1] else catalog(key[0]), [], pol)
        assert rep.ok, (key, [c.name for c in rep.failures])


def test_round_trip_with_relabeled_b2(pol):
    # an isomorphism between two presentations of the same Boolean algebra
    b2 = catalog("boolean", 2)
    other = parse_lattice(
        "name b2-relabeled\n"
        "elements bot x y top\n"
        "leq bot x\nleq bot y\nleq x top\nleq y top\n"
        "perp x y\n"
    )
    tbl = tuple(other.index(s) for s in ("bot", "x", "y", "top"))
    relabel = OrthoIso(b2, other, tbl, name="relabel")
    assert check_ortho_iso(relabel).ok
    rep = round_trip_report(b2, [relabel], pol)
    assert rep.ok, [c.name for c in rep.failures]
    assert any(c.name == "mu_naturality[relabel]" for c in rep.checks)
    assert any(c.name == "lambda_naturality[relabel]" for c in rep.checks)
