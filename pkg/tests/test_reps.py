from fractions import Fraction

import pytest

from scatdiag.lattice import Seed, a2_seed, kronecker_seed
from scatdiag.qp import SeedWithPotential
from scatdiag.torus import QUANTUM, dilog_group_element
from scatdiag.scattering import quantum_cluster_sd
from scatdiag.reps import (BudgetExceeded, dimension_lattice_vector,
                           enumerate_reps, euler_form, gl_order,
                           hom_dimension, iq_wall_series,
                           iq_wall_series_brute, is_isomorphic,
                           is_semistable, is_stable, make_rep, rebase_rep,
                           reflect, semistable_transport_check, simple_rep)

F = Fraction


def a2sp():
    return SeedWithPotential.make(a2_seed())


def cycsp():
    seed = Seed(((0, 1, -1), (-1, 0, 1), (1, -1, 0)))
    return SeedWithPotential.make(seed, {("a1_2_1", "a2_3_1", "a3_1_1"): 1})


def test_enumerate_counts():
    reps, count = enumerate_reps(a2sp(), (1, 1), 2)
    assert len(reps) == 2 and count == 2
    reps, count = enumerate_reps(a2sp(), (0, 0), 2)
    assert len(reps) == 1 and count == 1
    reps, count = enumerate_reps(cycsp(), (1, 1, 1), 2)
    assert len(reps) == 4
    with pytest.raises(BudgetExceeded):
        enumerate_reps(a2sp(), (3, 3), 5, budget=10)


def test_relations_enforced():
    with pytest.raises(ValueError):
        make_rep(cycsp(), 2, (1, 1, 1),
                 {"a1_2_1": ((1,),), "a2_3_1": ((1,),), "a3_1_1": ((1,),)})


def test_nilpotency_enforced():
    # a 3-cycle with zero potential would accept invertible cycles were it
    # not for the nilpotency requirement
    seed = Seed(((0, 1, -1), (-1, 0, 1), (1, -1, 0)))
    sp = SeedWithPotential.make(seed)
    with pytest.raises(ValueError):
        make_rep(sp, 2, (1, 1, 1),
                 {"a1_2_1": ((1,),), "a2_3_1": ((1,),), "a3_1_1": ((1,),)})


def test_semistability_examples():
    sp = a2sp()
    s1 = simple_rep(sp, 2, 1)
    assert is_semistable(s1, (F(0), F(3)))
    nz = make_rep(sp, 2, (1, 1), {"a1_2_1": ((1,),)})
    zz = make_rep(sp, 2, (1, 1), {"a1_2_1": ((0,),)})
    m = (F(1), F(-1))
    assert is_semistable(nz, m) and is_stable(nz, m)
    assert not is_semistable(zz, m)
    # m(V) != 0 is never semistable
    assert not is_semistable(s1, m)


def test_reflect_kills_simple():
    out, sp2, _ = reflect(simple_rep(a2sp(), 2, 1), 1, 1)
    assert out.dims == (0, 0)


def test_reflect_preserves_lattice_class():
    sp = a2sp()
    nz = make_rep(sp, 2, (1, 1), {"a1_2_1": ((1,),)})
    out, sp2, change = reflect(nz, 1, 1)
    assert dimension_lattice_vector(out, change) == (1, 1)
    # [S_i] for i != k is preserved
    s2 = simple_rep(sp, 2, 2)
    o2, _, ch2 = reflect(s2, 1, 1)
    assert dimension_lattice_vector(o2, ch2) == (0, 1)


def test_reflect_output_satisfies_relations():
    sp = cycsp()
    reps, _ = enumerate_reps(sp, (1, 1, 1), 2)
    for r in reps:
        for k in (1, 2, 3):
            for sign in (1, -1):
                out, _, _ = reflect(r, k, sign)   # make_rep re-checks


def test_inverse_equivalences(rng):
    sp = a2sp()
    sk = simple_rep(sp, 2, 1)
    checked = 0
    for dims in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 0), (0, 2)]:
        reps, _ = enumerate_reps(sp, dims, 2)
        for r in reps:
            if hom_dimension(sk, r) != 0:      # outside A_{k,+}
                continue
            fwd, spp, _ = reflect(r, 1, 1)
            back, _, _ = reflect(fwd, 1, -1)
            assert back.dims == r.dims
            assert is_isomorphic(rebase_rep(back, sp), r)
            checked += 1
    assert checked >= 6


def test_adjointness_on_small_pairs():
    sp = a2sp()
    reps11, _ = enumerate_reps(sp, (1, 1), 2)
    reps10, _ = enumerate_reps(sp, (1, 0), 2)
    for V in reps11 + reps10:
        Vp, sp2, _ = reflect(V, 1, 1)
        for wd in [(1, 1), (1, 0), (0, 1)]:
            for W in enumerate_reps(sp2, wd, 2)[0]:
                Wm, _, _ = reflect(W, 1, -1)
                assert hom_dimension(V, rebase_rep(Wm, sp)) == \
                    hom_dimension(Vp, W)


def test_transport_a2_and_cycle():
    rep = semistable_transport_check(a2sp(), 1, (F(1), F(-1)),
                                     max_total_dim=3, p=2)
    assert rep.passed and rep.checked >= 7
    rep = semistable_transport_check(cycsp(), 2, (F(-1), F(2), F(-1)),
                                     max_total_dim=3, p=2)
    assert rep.passed and rep.checked >= 15


def test_transport_needs_nonvanishing_m():
    with pytest.raises(ValueError):
        semistable_transport_check(a2sp(), 1, (F(0), F(1)))


def test_euler_form_and_gl_order():
    sp = kroneckersp = SeedWithPotential.make(kronecker_seed())
    assert euler_form(sp.quiver, (1, 1), (1, 1)) == 0
    assert euler_form(a2sp().quiver, (1, 0), (0, 1)) == -1
    assert gl_order(2, 2) == 6
    assert gl_order(0, 3) == 1


def test_si_wall_reproduces_dilog_series():
    sp = a2sp()
    want = dilog_group_element(a2_seed(), (1, 0), 4, QUANTUM)
    for p in (2, 3, 5):
        got = iq_wall_series(sp, (F(0), F(1)), 4, p)
        assert all(d[1] == 0 for d in got.coeffs)
        for k in range(1, 5):
            assert got.coeffs[(k, 0)].eval_at_sqrt(p) == \
                want.coeffs[(k, 0)].eval_at_sqrt(p)


def test_no_semistables_off_walls():
    # m in an open chamber adjacent to C+: series = 1
    sp = a2sp()
    got = iq_wall_series(sp, (F(2), F(1)), 4, 2)
    assert got.coeffs == {}


def test_brute_matches_factorization():
    sp = SeedWithPotential.make(kronecker_seed())
    m = (F(1), F(-1))
    got = iq_wall_series(sp, m, 4, 2)
    brute = iq_wall_series_brute(sp, m, [(1, 1), (2, 2)], 2)
    for d in [(1, 1), (2, 2)]:
        assert got.coeffs.get(d) == brute.coeffs.get(d)


def test_kronecker_wall_oracle():
    # the headline check: counting series = quantum cluster wall at q = p
    seed = kronecker_seed()
    sp = SeedWithPotential.make(seed)
    m = (F(1), F(-1))
    wall = quantum_cluster_sd(seed, 6).phi(m)
    for p in (2, 3, 5):
        got = iq_wall_series(sp, m, 6, p)
        for k in range(1, 4):
            d = (k, k)
            gv = got.coeffs.get(d)
            wv = wall.coeffs.get(d)
            assert gv is not None and wv is not None
            assert gv.eval_at_sqrt(p) == wv.eval_at_sqrt(p)


def test_counting_requires_zero_potential():
    with pytest.raises(ValueError):
        iq_wall_series(cycsp(), (F(1), F(0), F(-1)), 3, 2)
